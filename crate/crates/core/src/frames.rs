//! Frames over a chart, their commutation coefficients, and the metric
//! connection written in the frame.
//!
//! A frame is given by its holonomic components `Υ^i_r` (row `i`, column
//! `r`); the metric is given by its components `g_ij` in that frame. All
//! computations are pointwise and work in complex floats.

use nalgebra::{Matrix4, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{central_difference, EvalError, Expr, Point};

type C = Complex64;

/// `[a][b][c]` arrays over spatial indices.
pub type Array3 = [[[C; 4]; 4]; 4];

pub const DEGENERACY_THRESHOLD: f64 = 1e-8;
pub const FINITE_DIFFERENCE_STEP: f64 = 1e-5;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DerivativeMode {
    #[default]
    Symbolic,
    FiniteDifference,
}

impl DerivativeMode {
    pub fn default_tolerance(self) -> f64 {
        match self {
            DerivativeMode::Symbolic => 1e-9,
            DerivativeMode::FiniteDifference => 1e-5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FieldError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("frame matrix is degenerate at {point:?}: |det| = {det:e}")]
    DegenerateFrame { point: Point, det: f64 },
    #[error("metric is degenerate at {point:?}: |det| = {det:e}")]
    DegenerateMetric { point: Point, det: f64 },
    #[error("metric at {point:?} is not Lorentzian: {reason}")]
    NotLorentzian { point: Point, reason: String },
    #[error("equipment fails `{identity}` at {point:?}: residual {residual:e}")]
    EquipmentInconsistent { point: Point, identity: String, residual: f64 },
    #[error("spin transform is singular at {point:?}")]
    SingularSpinTransform { point: Point },
}

/// An expression together with its symbolic partial derivatives.
#[derive(Debug, Clone)]
pub struct Component {
    expr: Expr,
    partials: [Expr; 4],
}

impl Component {
    pub fn new(expr: Expr) -> Self {
        let partials = std::array::from_fn(|k| expr.differentiate(k));
        Self { expr, partials }
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn value(&self, point: &Point) -> Result<C, EvalError> {
        self.expr.eval(point)
    }

    pub fn partial(&self, k: usize, point: &Point, mode: DerivativeMode) -> Result<C, EvalError> {
        match mode {
            DerivativeMode::Symbolic => self.partials[k].eval(point),
            DerivativeMode::FiniteDifference => central_difference(&self.expr, k, point, FINITE_DIFFERENCE_STEP),
        }
    }

    pub fn gradient(&self, point: &Point, mode: DerivativeMode) -> Result<[C; 4], EvalError> {
        let mut out = [C::new(0.0, 0.0); 4];
        for (k, slot) in out.iter_mut().enumerate() {
            *slot = self.partial(k, point, mode)?;
        }
        Ok(out)
    }
}

impl From<Expr> for Component {
    fn from(e: Expr) -> Self {
        Component::new(e)
    }
}

fn components<const N: usize, const M: usize>(exprs: [[Expr; M]; N]) -> [[Component; M]; N] {
    exprs.map(|row| row.map(Component::new))
}

fn eval_matrix(c: &[[Component; 4]; 4], point: &Point) -> Result<Matrix4<C>, EvalError> {
    let mut m = Matrix4::zeros();
    for i in 0..4 {
        for j in 0..4 {
            m[(i, j)] = c[i][j].value(point)?;
        }
    }
    Ok(m)
}

#[derive(Debug, Clone)]
pub struct FrameField {
    components: [[Component; 4]; 4],
    mode: DerivativeMode,
}

impl FrameField {
    /// `components[i][r] = Υ^i_r`.
    pub fn new(components: [[Expr; 4]; 4], mode: DerivativeMode) -> Self {
        Self {
            components: self::components(components),
            mode,
        }
    }

    /// The coordinate frame `Υ_r = ∂/∂x^r`.
    pub fn holonomic(mode: DerivativeMode) -> Self {
        Self::new(
            std::array::from_fn(|i| std::array::from_fn(|r| if i == r { Expr::one() } else { Expr::zero() })),
            mode,
        )
    }

    pub fn mode(&self) -> DerivativeMode {
        self.mode
    }

    pub fn component(&self, i: usize, r: usize) -> &Expr {
        self.components[i][r].expr()
    }

    /// Evaluates the frame, its inverse and its commutation coefficients.
    pub fn at(&self, point: &Point) -> Result<FrameAtPoint, FieldError> {
        let matrix = eval_matrix(&self.components, point)?;
        let det = matrix.determinant().norm();
        if det.is_nan() || det < DEGENERACY_THRESHOLD {
            return Err(FieldError::DegenerateFrame { point: *point, det });
        }
        let inverse = matrix
            .try_inverse()
            .ok_or(FieldError::DegenerateFrame { point: *point, det })?;

        // partials[n][(m, j)] = ∂_n Υ^m_j
        let mut partials = [Matrix4::<C>::zeros(); 4];
        for m in 0..4 {
            for j in 0..4 {
                let grad = self.components[m][j].gradient(point, self.mode)?;
                for n in 0..4 {
                    partials[n][(m, j)] = grad[n];
                }
            }
        }
        let mut commutators = [[[C::new(0.0, 0.0); 4]; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                let bracket: [C; 4] = std::array::from_fn(|m| {
                    (0..4)
                        .map(|n| matrix[(n, i)] * partials[n][(m, j)] - matrix[(n, j)] * partials[n][(m, i)])
                        .sum()
                });
                for k in 0..4 {
                    commutators[k][i][j] = (0..4).map(|m| inverse[(k, m)] * bracket[m]).sum();
                }
            }
        }
        Ok(FrameAtPoint {
            point: *point,
            mode: self.mode,
            matrix,
            inverse,
            commutators,
        })
    }

    /// `L_r f = Σ_i Υ^i_r ∂_i f` as an expression, for iterating the
    /// operators symbolically.
    pub fn lie_expr(&self, f: &Expr, r: usize) -> Expr {
        (0..4).fold(Expr::zero(), |acc, i| acc + self.components[i][r].expr().clone() * f.differentiate(i))
    }
}

#[derive(Debug, Clone)]
pub struct FrameAtPoint {
    pub point: Point,
    pub mode: DerivativeMode,
    /// `matrix[(i, r)] = Υ^i_r`
    pub matrix: Matrix4<C>,
    pub inverse: Matrix4<C>,
    /// `commutators[k][i][j] = c^k_ij`
    pub commutators: Array3,
}

impl FrameAtPoint {
    /// `L_r f` for every frame label `r`.
    pub fn lie(&self, f: &Component) -> Result<[C; 4], EvalError> {
        let grad = f.gradient(&self.point, self.mode)?;
        Ok(std::array::from_fn(|r| (0..4).map(|i| self.matrix[(i, r)] * grad[i]).sum()))
    }

    pub fn lie_along(&self, f: &Component, r: usize) -> Result<C, EvalError> {
        Ok(self.lie(f)?[r])
    }
}

pub fn commutation_coefficients(frame: &FrameField, point: &Point) -> Result<Array3, FieldError> {
    Ok(frame.at(point)?.commutators)
}

pub fn lie_derivative(frame: &FrameField, component: &Expr, r: usize, point: &Point) -> Result<C, FieldError> {
    let at = frame.at(point)?;
    Ok(at.lie_along(&Component::new(component.clone()), r)?)
}

#[derive(Debug, Clone)]
pub struct MetricField {
    components: [[Component; 4]; 4],
}

impl MetricField {
    /// `components[i][j] = g_ij` in the frame.
    pub fn new(components: [[Expr; 4]; 4]) -> Self {
        Self {
            components: self::components(components),
        }
    }

    pub fn minkowski() -> Self {
        Self::new(std::array::from_fn(|i| {
            std::array::from_fn(|j| match (i, j) {
                (0, 0) => Expr::one(),
                (a, b) if a == b => Expr::constant(-1),
                _ => Expr::zero(),
            })
        }))
    }

    pub fn component(&self, i: usize, j: usize) -> &Expr {
        self.components[i][j].expr()
    }

    /// Evaluates `g`, its inverse and `L_r g_ij`, checking symmetry,
    /// nondegeneracy and the signature `(+, −, −, −)`.
    pub fn at(&self, frame: &FrameAtPoint) -> Result<MetricAtPoint, FieldError> {
        let point = frame.point;
        let g = eval_matrix(&self.components, &point)?;
        let scale = g.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let tol = 1e-12 * scale;
        let not_lorentzian = |reason: String| FieldError::NotLorentzian { point, reason };
        for i in 0..4 {
            for j in 0..4 {
                if (g[(i, j)] - g[(j, i)]).norm() > tol {
                    return Err(not_lorentzian(format!("g_{i}{j} differs from g_{j}{i}")));
                }
                if g[(i, j)].im.abs() > tol {
                    return Err(not_lorentzian(format!("g_{i}{j} is not real")));
                }
            }
        }
        let det = g.determinant();
        if det.norm() < DEGENERACY_THRESHOLD {
            return Err(FieldError::DegenerateMetric { point, det: det.norm() });
        }
        let real = g.map(|z| z.re);
        let eigen = SymmetricEigen::new(real).eigenvalues;
        let positive = eigen.iter().filter(|v| **v > 0.0).count();
        if positive != 1 || det.re >= 0.0 {
            return Err(not_lorentzian(format!(
                "expected one positive and three negative eigenvalues, got {positive} positive"
            )));
        }
        let g_dual = g.try_inverse().ok_or(FieldError::DegenerateMetric { point, det: det.norm() })?;
        let mut lie = [Matrix4::<C>::zeros(); 4];
        for i in 0..4 {
            for j in 0..4 {
                let l = frame.lie(&self.components[i][j])?;
                for r in 0..4 {
                    lie[r][(i, j)] = l[r];
                }
            }
        }
        Ok(MetricAtPoint { g, g_dual, lie })
    }
}

#[derive(Debug, Clone)]
pub struct MetricAtPoint {
    pub g: Matrix4<C>,
    pub g_dual: Matrix4<C>,
    /// `lie[r][(i, j)] = L_r g_ij`
    pub lie: [Matrix4<C>; 4],
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionAtPoint {
    /// `gamma[k][i][j] = Γ^k_ij`; the first lower slot is the
    /// differentiation direction.
    pub gamma: Array3,
    /// `gamma_lowered[r][q][m] = Σ_p g_mp Γ^p_rq`
    pub gamma_lowered: Array3,
}

/// The torsion-free connection compatible with the metric, in the frame.
pub fn christoffel(frame: &FrameAtPoint, metric: &MetricAtPoint) -> ConnectionAtPoint {
    let c = &frame.commutators;
    let (g, gi, l) = (&metric.g, &metric.g_dual, &metric.lie);
    let half = C::new(0.5, 0.0);
    let mut gamma = [[[C::new(0.0, 0.0); 4]; 4]; 4];
    for k in 0..4 {
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = half * c[k][i][j];
                for r in 0..4 {
                    acc += half * gi[(k, r)] * (l[i][(r, j)] + l[j][(i, r)] - l[r][(i, j)]);
                    for s in 0..4 {
                        acc -= half * c[s][i][r] * gi[(k, r)] * g[(s, j)];
                        acc -= half * c[s][j][r] * gi[(k, r)] * g[(s, i)];
                    }
                }
                gamma[k][i][j] = acc;
            }
        }
    }
    let gamma_lowered = lower_connection(&gamma, g);
    ConnectionAtPoint { gamma, gamma_lowered }
}

fn lower_connection(gamma: &Array3, g: &Matrix4<C>) -> Array3 {
    std::array::from_fn(|r| std::array::from_fn(|q| std::array::from_fn(|m| (0..4).map(|p| g[(m, p)] * gamma[p][r][q]).sum())))
}

/// Largest deviation of a pointwise relation, with the index where it
/// occurs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Residual {
    pub check: String,
    pub max_residual: f64,
    pub worst_index: Vec<usize>,
    pub tolerance: f64,
    pub passed: bool,
}

impl Residual {
    /// NaN residuals count as failures.
    pub fn collect(check: &str, tolerance: f64, values: impl IntoIterator<Item = (Vec<usize>, C)>) -> Self {
        let mut max = 0.0f64;
        let mut worst = Vec::new();
        for (index, v) in values {
            let n = v.norm();
            if max.is_nan() {
                break;
            }
            if worst.is_empty() || n.is_nan() || n > max {
                max = n;
                worst = index;
            }
        }
        Self {
            check: check.to_owned(),
            max_residual: max,
            worst_index: worst,
            tolerance,
            passed: max <= tolerance,
        }
    }
}

fn tuples3() -> impl Iterator<Item = (usize, usize, usize)> {
    (0..4).flat_map(|a| (0..4).flat_map(move |b| (0..4).map(move |c| (a, b, c))))
}

/// `Γ^k_ij − Γ^k_ji − c^k_ij`
pub fn check_torsion(conn: &ConnectionAtPoint, commutators: &Array3, tol: f64) -> Residual {
    Residual::collect(
        "torsion",
        tol,
        tuples3().map(|(k, i, j)| (vec![k, i, j], conn.gamma[k][i][j] - conn.gamma[k][j][i] - commutators[k][i][j])),
    )
}

/// `L_r g_ij − Σ_k Γ^k_ri g_kj − Σ_k Γ^k_rj g_ik`
pub fn check_metricity(metric: &MetricAtPoint, conn: &ConnectionAtPoint, tol: f64) -> Residual {
    let (g, gamma) = (&metric.g, &conn.gamma);
    Residual::collect(
        "metricity",
        tol,
        tuples3().map(|(r, i, j)| {
            let v = metric.lie[r][(i, j)]
                - (0..4).map(|k| gamma[k][r][i] * g[(k, j)] + gamma[k][r][j] * g[(i, k)]).sum::<C>();
            (vec![r, i, j], v)
        }),
    )
}

/// `Γ_rqp + Γ_rpq − L_r g_pq`
pub fn check_lowered_symmetrization(metric: &MetricAtPoint, conn: &ConnectionAtPoint, tol: f64) -> Residual {
    let gl = &conn.gamma_lowered;
    Residual::collect(
        "lowered-symmetrization",
        tol,
        tuples3().map(|(r, q, p)| (vec![r, q, p], gl[r][q][p] + gl[r][p][q] - metric.lie[r][(p, q)])),
    )
}

/// `Σ_q Γ^q_rq − ½ Σ_{q,m} g^{qm} L_r g_qm`
pub fn check_connection_trace(metric: &MetricAtPoint, conn: &ConnectionAtPoint, tol: f64) -> Residual {
    Residual::collect(
        "connection-trace",
        tol,
        (0..4).map(|r| {
            let lhs: C = (0..4).map(|q| conn.gamma[q][r][q]).sum();
            let rhs: C = (0..4)
                .flat_map(|q| (0..4).map(move |m| (q, m)))
                .map(|(q, m)| metric.g_dual[(q, m)] * metric.lie[r][(q, m)])
                .sum::<C>()
                * 0.5;
            (vec![r], lhs - rhs)
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;
    use proptest::prelude::*;

    fn conformal(mode: DerivativeMode) -> FrameField {
        FrameField::new(
            std::array::from_fn(|i| {
                std::array::from_fn(|r| if i == r { parse_expr("exp(-x1)").unwrap() } else { Expr::zero() })
            }),
            mode,
        )
    }

    fn metric_from(strings: [[&str; 4]; 4]) -> MetricField {
        MetricField::new(strings.map(|row| row.map(|s| parse_expr(s).unwrap())))
    }

    fn curved_metric() -> MetricField {
        metric_from([
            ["1 + x1^2/4", "0", "x0/5", "0"],
            ["0", "-exp(x2/3)", "0", "0"],
            ["x0/5", "0", "-2 - sin(x3)/2", "0"],
            ["0", "0", "0", "-1 - x0^2"],
        ])
    }

    const POINTS: [Point; 5] = [
        [0.0, 0.0, 0.0, 0.0],
        [0.1, 0.2, -0.3, 0.4],
        [-0.5, 0.3, 0.2, -0.1],
        [0.7, -0.6, 0.5, 0.3],
        [-0.2, -0.4, -0.8, 0.6],
    ];

    fn c0() -> C {
        C::new(0.0, 0.0)
    }

    #[test]
    fn holonomic_frame_has_no_commutators() {
        let c = commutation_coefficients(&FrameField::holonomic(DerivativeMode::Symbolic), &[0.3, 0.1, 0.2, 0.0]).unwrap();
        assert!(c.iter().flatten().flatten().all(|z| *z == c0()));
    }

    #[test]
    fn conformal_commutators_at_origin() {
        let c = commutation_coefficients(&conformal(DerivativeMode::Symbolic), &[0.0; 4]).unwrap();
        for k in 0..4 {
            for i in 0..4 {
                for j in 0..4 {
                    let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
                    let expected = -d(i, 1) * d(k, j) + d(j, 1) * d(k, i);
                    assert!((c[k][i][j] - expected).norm() < 1e-15, "c^{k}_{i}{j}");
                }
            }
        }
        let fd = commutation_coefficients(&conformal(DerivativeMode::FiniteDifference), &[0.0; 4]).unwrap();
        for (a, b) in c.iter().flatten().flatten().zip(fd.iter().flatten().flatten()) {
            assert!((a - b).norm() < 1e-8);
        }
    }

    #[test]
    fn commutators_are_antisymmetric() {
        let frame = FrameField::new(
            [
                ["1", "x2", "0", "0"],
                ["0", "exp(x0)", "sin(x3)", "0"],
                ["x1", "0", "1", "0"],
                ["0", "0", "x0*x1", "2"],
            ]
            .map(|row| row.map(|s| parse_expr(s).unwrap())),
            DerivativeMode::Symbolic,
        );
        let c = commutation_coefficients(&frame, &[0.2, 0.3, 0.1, 0.5]).unwrap();
        for k in 0..4 {
            for i in 0..4 {
                for j in 0..4 {
                    assert_eq!(c[k][i][j], -c[k][j][i]);
                }
            }
        }
    }

    #[test]
    fn degenerate_frame_is_rejected() {
        let frame = FrameField::new(
            std::array::from_fn(|i| std::array::from_fn(|r| if i == r { parse_expr("x0").unwrap() } else { Expr::zero() })),
            DerivativeMode::Symbolic,
        );
        assert!(matches!(frame.at(&[0.0; 4]), Err(FieldError::DegenerateFrame { .. })));
        // det = x0^4 = 1e-8 at the threshold is accepted
        assert!(frame.at(&[0.01, 0.0, 0.0, 0.0]).is_ok());
    }

    #[test]
    fn lie_derivative_examples() {
        let flat = FrameField::holonomic(DerivativeMode::Symbolic);
        let x2 = parse_expr("x2").unwrap();
        assert_eq!(lie_derivative(&flat, &x2, 2, &[0.5, 0.5, 0.5, 0.5]).unwrap(), C::new(1.0, 0.0));
        assert_eq!(lie_derivative(&flat, &Expr::constant(7), 1, &[0.0; 4]).unwrap(), c0());
        let x1 = parse_expr("x1").unwrap();
        assert_eq!(lie_derivative(&conformal(DerivativeMode::Symbolic), &x1, 1, &[0.0; 4]).unwrap(), C::new(1.0, 0.0));
    }

    #[test]
    fn minkowski_in_coordinate_frame_is_flat() {
        let frame = FrameField::holonomic(DerivativeMode::Symbolic).at(&[0.1, 0.2, 0.3, 0.4]).unwrap();
        let metric = MetricField::minkowski().at(&frame).unwrap();
        let conn = christoffel(&frame, &metric);
        assert!(conn.gamma.iter().flatten().flatten().all(|z| *z == c0()));
        assert_eq!(check_torsion(&conn, &frame.commutators, 0.0).max_residual, 0.0);
        assert_eq!(check_metricity(&metric, &conn, 0.0).max_residual, 0.0);
    }

    /// The lowered connection written out directly in terms of `c`:
    /// `Γ_rqp = ½(L_r g_pq + L_q g_rp − L_p g_rq)
    ///        + ½ Σ_s (c^s_rq g_sp − c^s_rp g_sq − c^s_qp g_sr)`.
    fn lowered_reference(frame: &FrameAtPoint, metric: &MetricAtPoint) -> Array3 {
        let (c, g, l) = (&frame.commutators, &metric.g, &metric.lie);
        std::array::from_fn(|r| {
            std::array::from_fn(|q| {
                std::array::from_fn(|p| {
                    let mut acc = (l[r][(p, q)] + l[q][(r, p)] - l[p][(r, q)]) * 0.5;
                    for s in 0..4 {
                        acc += (c[s][r][q] * g[(s, p)] - c[s][r][p] * g[(s, q)] - c[s][q][p] * g[(s, r)]) * 0.5;
                    }
                    acc
                })
            })
        })
    }

    #[test]
    fn constant_metric_in_conformal_tetrad() {
        for pt in POINTS {
            let frame = conformal(DerivativeMode::Symbolic).at(&pt).unwrap();
            let metric = MetricField::minkowski().at(&frame).unwrap();
            let conn = christoffel(&frame, &metric);
            assert!(conn.gamma.iter().flatten().flatten().any(|z| z.norm() > 0.1));
            let reference = lowered_reference(&frame, &metric);
            for (a, b) in conn.gamma_lowered.iter().flatten().flatten().zip(reference.iter().flatten().flatten()) {
                assert!((a - b).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn coordinate_frame_gives_classical_symbols() {
        let mode = DerivativeMode::Symbolic;
        let metric = curved_metric();
        for pt in POINTS {
            let frame = FrameField::holonomic(mode).at(&pt).unwrap();
            let at = metric.at(&frame).unwrap();
            let conn = christoffel(&frame, &at);
            let dg = |n: usize, a: usize, b: usize| Component::new(metric.component(a, b).clone()).partial(n, &pt, mode).unwrap();
            for k in 0..4 {
                for i in 0..4 {
                    for j in 0..4 {
                        let classical: C = (0..4)
                            .map(|r| at.g_dual[(k, r)] * (dg(i, r, j) + dg(j, i, r) - dg(r, i, j)) * 0.5)
                            .sum();
                        assert!((conn.gamma[k][i][j] - classical).norm() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn residuals_vanish_for_curved_metric_in_conformal_tetrad() {
        for (mode, tol) in [(DerivativeMode::Symbolic, 1e-9), (DerivativeMode::FiniteDifference, 1e-5)] {
            for pt in POINTS {
                let frame = conformal(mode).at(&pt).unwrap();
                let metric = curved_metric().at(&frame).unwrap();
                let conn = christoffel(&frame, &metric);
                for r in [
                    check_torsion(&conn, &frame.commutators, tol),
                    check_metricity(&metric, &conn, tol),
                    check_lowered_symmetrization(&metric, &conn, tol),
                    check_connection_trace(&metric, &conn, tol),
                ] {
                    assert!(r.passed, "{mode:?} {pt:?}: {r:?}");
                }
            }
        }
    }

    #[test]
    fn perturbed_connection_fails_torsion() {
        let frame = conformal(DerivativeMode::Symbolic).at(&POINTS[1]).unwrap();
        let metric = MetricField::minkowski().at(&frame).unwrap();
        let mut conn = christoffel(&frame, &metric);
        conn.gamma[0][0][1] += C::new(1e-3, 0.0);
        let r = check_torsion(&conn, &frame.commutators, 1e-6);
        assert!(!r.passed);
        assert!((r.max_residual - 1e-3).abs() < 1e-9);
        assert_eq!(r.worst_index.len(), 3);
    }

    #[test]
    fn non_lorentzian_metrics_are_rejected() {
        let frame = FrameField::holonomic(DerivativeMode::Symbolic).at(&[0.0; 4]).unwrap();
        let euclidean = metric_from([
            ["1", "0", "0", "0"],
            ["0", "1", "0", "0"],
            ["0", "0", "1", "0"],
            ["0", "0", "0", "1"],
        ]);
        assert!(matches!(euclidean.at(&frame), Err(FieldError::NotLorentzian { .. })));
        let two_time = metric_from([
            ["1", "0", "0", "0"],
            ["0", "1", "0", "0"],
            ["0", "0", "-1", "0"],
            ["0", "0", "0", "-1"],
        ]);
        assert!(matches!(two_time.at(&frame), Err(FieldError::NotLorentzian { .. })));
        let asymmetric = metric_from([
            ["1", "x0 + 1", "0", "0"],
            ["0", "-1", "0", "0"],
            ["0", "0", "-1", "0"],
            ["0", "0", "0", "-1"],
        ]);
        assert!(matches!(asymmetric.at(&frame), Err(FieldError::NotLorentzian { .. })));
        let degenerate = metric_from([
            ["1", "0", "0", "0"],
            ["0", "x0", "0", "0"],
            ["0", "0", "-1", "0"],
            ["0", "0", "0", "-1"],
        ]);
        assert!(matches!(degenerate.at(&frame), Err(FieldError::DegenerateMetric { .. })));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn lie_operators_close_on_commutators(
            phi in crate::expr::strategies::expr(),
            pt in crate::expr::strategies::point(),
            i in 0usize..4,
            j in 0usize..4,
        ) {
            let frame = FrameField::new(
                [
                    ["1", "x2/2", "0", "0"],
                    ["0", "exp(x0/2)", "sin(x3)/3", "0"],
                    ["x1/3", "0", "1", "0"],
                    ["0", "0", "x0*x1/4", "2 + cos(x2)"],
                ]
                .map(|row| row.map(|s| parse_expr(s).unwrap())),
                DerivativeMode::Symbolic,
            );
            let at = frame.at(&pt).unwrap();
            let li_lj = frame.lie_expr(&frame.lie_expr(&phi, j), i).eval(&pt).unwrap();
            let lj_li = frame.lie_expr(&frame.lie_expr(&phi, i), j).eval(&pt).unwrap();
            let l = at.lie(&Component::new(phi.clone())).unwrap();
            let rhs: C = (0..4).map(|k| at.commutators[k][i][j] * l[k]).sum();
            let scale = 1.0 + li_lj.norm() + lj_li.norm();
            prop_assert!((li_lj - lj_li - rhs).norm() <= 1e-6 * scale, "{phi}");
        }
    }
}
