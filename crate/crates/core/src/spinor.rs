//! Field-valued equipment, the spinor components `A^i_rj` of the metric
//! connection, and the concordance residuals they must satisfy.
//!
//! Spinor labels run over 1, 2 in formulas and in reported indices; arrays
//! store them at positions 0, 1.

use num_complex::Complex64;
use serde::Serialize;

use crate::equipment::{canonical_equipment, Orientation};
use crate::expr::{Expr, Point};
use crate::frames::{Component, ConnectionAtPoint, FieldError, FrameAtPoint, MetricAtPoint, Residual, DEGENERACY_THRESHOLD};
use crate::scalar::GaussianRational;

type C = Complex64;
type M2 = [[C; 2]; 2];
type G3 = [[[C; 2]; 2]; 4];
/// `[i][r][j]` with `i, j` spinor and `r` spatial.
pub type SpinorArray = [[[C; 2]; 4]; 2];

pub type ExprMatrix2 = [[Expr; 2]; 2];

pub const DEFAULT_CONSISTENCY_TOLERANCE: f64 = 1e-9;

const ZERO: C = C::new(0.0, 0.0);

#[derive(Debug, Clone)]
pub struct EquipmentField {
    g: [[Component; 4]; 4],
    g_dual: [[Component; 4]; 4],
    d: [[Component; 2]; 2],
    d_dual: [[Component; 2]; 2],
    dbar: [[Component; 2]; 2],
    dbar_dual: [[Component; 2]; 2],
    /// `ivdw[p][r][rbar] = G^{r rbar}_p`
    ivdw: [[[Component; 2]; 2]; 4],
    /// `ivdw_inverse[q][s][sbar] = G^q_{s sbar}`
    ivdw_inverse: [[[Component; 2]; 2]; 4],
    orientation: Orientation,
}

/// Expression arrays for every member of an [`EquipmentField`].
#[derive(Debug, Clone)]
pub struct EquipmentExprs {
    pub g: [[Expr; 4]; 4],
    pub g_dual: [[Expr; 4]; 4],
    pub d: ExprMatrix2,
    pub d_dual: ExprMatrix2,
    pub dbar: ExprMatrix2,
    pub dbar_dual: ExprMatrix2,
    pub ivdw: [ExprMatrix2; 4],
    pub ivdw_inverse: [ExprMatrix2; 4],
    pub orientation: Orientation,
}

fn gaussian_to_expr(z: &GaussianRational) -> Expr {
    Expr::Const(z.re().clone()) + Expr::Const(z.im().clone()) * Expr::ImagUnit
}

fn comp2(m: ExprMatrix2) -> [[Component; 2]; 2] {
    m.map(|row| row.map(Component::new))
}

fn exprs2(m: &[[Component; 2]; 2]) -> ExprMatrix2 {
    std::array::from_fn(|i| std::array::from_fn(|j| m[i][j].expr().clone()))
}

fn exprs3(m: &[[[Component; 2]; 2]; 4]) -> [ExprMatrix2; 4] {
    std::array::from_fn(|p| exprs2(&m[p]))
}

fn exprs4(m: &[[Component; 4]; 4]) -> [[Expr; 4]; 4] {
    std::array::from_fn(|i| std::array::from_fn(|j| m[i][j].expr().clone()))
}

/// `out[i][j] = Σ_{a,b} left[i][a] right[j][b] m[a][b]`
fn mix2(m: &ExprMatrix2, left: &ExprMatrix2, right: &ExprMatrix2) -> ExprMatrix2 {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let mut acc = Expr::zero();
            for a in 0..2 {
                for b in 0..2 {
                    acc = acc + left[i][a].clone() * right[j][b].clone() * m[a][b].clone();
                }
            }
            acc
        })
    })
}

fn transpose2(m: &ExprMatrix2) -> ExprMatrix2 {
    std::array::from_fn(|i| std::array::from_fn(|j| m[j][i].clone()))
}

fn conj2(m: &ExprMatrix2) -> ExprMatrix2 {
    std::array::from_fn(|i| std::array::from_fn(|j| m[i][j].conj()))
}

impl EquipmentField {
    pub fn new(e: EquipmentExprs) -> Self {
        Self {
            g: e.g.map(|row| row.map(Component::new)),
            g_dual: e.g_dual.map(|row| row.map(Component::new)),
            d: comp2(e.d),
            d_dual: comp2(e.d_dual),
            dbar: comp2(e.dbar),
            dbar_dual: comp2(e.dbar_dual),
            ivdw: e.ivdw.map(comp2),
            ivdw_inverse: e.ivdw_inverse.map(comp2),
            orientation: e.orientation,
        }
    }

    /// The canonical constant equipment as a field.
    pub fn canonical(orientation: Orientation) -> Self {
        let eq = canonical_equipment::<GaussianRational>(orientation);
        let m4 = |t: &crate::tensor::SpinTensor<GaussianRational>| {
            std::array::from_fn(|i| std::array::from_fn(|j| gaussian_to_expr(t.get(&[i, j]))))
        };
        let m2 = |t: &crate::tensor::SpinTensor<GaussianRational>| {
            std::array::from_fn(|i| std::array::from_fn(|j| gaussian_to_expr(t.get(&[i + 1, j + 1]))))
        };
        let m3 = |t: &crate::tensor::SpinTensor<GaussianRational>| {
            std::array::from_fn(|p| {
                std::array::from_fn(|r| std::array::from_fn(|s| gaussian_to_expr(t.get(&[p, r + 1, s + 1]))))
            })
        };
        Self::new(EquipmentExprs {
            g: m4(&eq.g),
            g_dual: m4(&eq.g_dual),
            d: m2(&eq.d),
            d_dual: m2(&eq.d_dual),
            dbar: m2(&eq.dbar),
            dbar_dual: m2(&eq.dbar_dual),
            ivdw: m3(&eq.ivdw),
            ivdw_inverse: m3(&eq.ivdw_inverse),
            orientation,
        })
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn exprs(&self) -> EquipmentExprs {
        EquipmentExprs {
            g: exprs4(&self.g),
            g_dual: exprs4(&self.g_dual),
            d: exprs2(&self.d),
            d_dual: exprs2(&self.d_dual),
            dbar: exprs2(&self.dbar),
            dbar_dual: exprs2(&self.dbar_dual),
            ivdw: exprs3(&self.ivdw),
            ivdw_inverse: exprs3(&self.ivdw_inverse),
            orientation: self.orientation,
        }
    }

    /// Changes the spinor frame by `S` with `s[a][i] = S^a_i`.
    ///
    /// Lower spinor indices transform with `S`, upper ones with `S⁻¹`, and
    /// conjugate indices with the conjugate matrices; spatial data are left
    /// alone. `S` must be invertible at every point in `points`, and the
    /// result is checked for consistency there.
    pub fn spin_frame_transform(&self, s: &ExprMatrix2, points: &[Point]) -> Result<Self, FieldError> {
        let det = s[0][0].clone() * s[1][1].clone() - s[0][1].clone() * s[1][0].clone();
        for pt in points {
            let v = det.eval(pt)?;
            if v.norm().is_nan() || v.norm() < DEGENERACY_THRESHOLD {
                return Err(FieldError::SingularSpinTransform { point: *pt });
            }
        }
        let s_inv: ExprMatrix2 = [
            [s[1][1].clone() / det.clone(), -s[0][1].clone() / det.clone()],
            [-s[1][0].clone() / det.clone(), s[0][0].clone() / det],
        ];
        let st = transpose2(s);
        let sc = conj2(s);
        let sct = transpose2(&sc);
        let s_inv_c = conj2(&s_inv);
        let e = self.exprs();
        let out = Self::new(EquipmentExprs {
            g: e.g,
            g_dual: e.g_dual,
            d: mix2(&e.d, &st, &st),
            d_dual: mix2(&e.d_dual, &s_inv, &s_inv),
            dbar: mix2(&e.dbar, &sct, &sct),
            dbar_dual: mix2(&e.dbar_dual, &s_inv_c, &s_inv_c),
            ivdw: e.ivdw.map(|m| mix2(&m, &s_inv, &s_inv_c)),
            ivdw_inverse: e.ivdw_inverse.map(|m| mix2(&m, &st, &sct)),
            orientation: e.orientation,
        });
        for pt in points {
            out.check_consistency(&out.values(pt)?, pt, DEFAULT_CONSISTENCY_TOLERANCE)?;
        }
        Ok(out)
    }

    fn values(&self, point: &Point) -> Result<EquipmentValues, FieldError> {
        let v2 = |m: &[[Component; 2]; 2]| -> Result<M2, FieldError> {
            let mut out = [[ZERO; 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    out[i][j] = m[i][j].value(point)?;
                }
            }
            Ok(out)
        };
        let v4 = |m: &[[Component; 4]; 4]| -> Result<[[C; 4]; 4], FieldError> {
            let mut out = [[ZERO; 4]; 4];
            for i in 0..4 {
                for j in 0..4 {
                    out[i][j] = m[i][j].value(point)?;
                }
            }
            Ok(out)
        };
        let mut ivdw = [[[ZERO; 2]; 2]; 4];
        let mut ivdw_inverse = [[[ZERO; 2]; 2]; 4];
        for p in 0..4 {
            ivdw[p] = v2(&self.ivdw[p])?;
            ivdw_inverse[p] = v2(&self.ivdw_inverse[p])?;
        }
        Ok(EquipmentValues {
            g: v4(&self.g)?,
            g_dual: v4(&self.g_dual)?,
            d: v2(&self.d)?,
            d_dual: v2(&self.d_dual)?,
            dbar: v2(&self.dbar)?,
            dbar_dual: v2(&self.dbar_dual)?,
            ivdw,
            ivdw_inverse,
        })
    }

    /// Residuals of the algebraic relations the equipment must satisfy at a
    /// point: mutual inverses of the three metrics, the inverse field
    /// obtained by raising and lowering, and both quadratic identities.
    pub fn consistency_residuals(&self, point: &Point, tol: f64) -> Result<Vec<Residual>, FieldError> {
        Ok(consistency_residuals(&self.values(point)?, tol))
    }

    fn check_consistency(&self, v: &EquipmentValues, point: &Point, tol: f64) -> Result<(), FieldError> {
        match consistency_residuals(v, tol).into_iter().find(|r| !r.passed) {
            None => Ok(()),
            Some(r) => Err(FieldError::EquipmentInconsistent {
                point: *point,
                identity: r.check,
                residual: r.max_residual,
            }),
        }
    }

    /// Evaluates the equipment and its Lie derivatives along the frame,
    /// after checking consistency and agreement with the scene metric.
    pub fn at(&self, frame: &FrameAtPoint, metric: &MetricAtPoint, tol: f64) -> Result<EquipmentAtPoint, FieldError> {
        let point = frame.point;
        let values = self.values(&point)?;
        self.check_consistency(&values, &point, tol)?;
        let mismatch = Residual::collect(
            "metric-agreement",
            tol,
            (0..4).flat_map(|i| (0..4).map(move |j| (i, j))).map(|(i, j)| (vec![i, j], values.g[i][j] - metric.g[(i, j)])),
        );
        if !mismatch.passed {
            return Err(FieldError::EquipmentInconsistent {
                point,
                identity: mismatch.check,
                residual: mismatch.max_residual,
            });
        }
        let lie2 = |m: &[[Component; 2]; 2]| -> Result<[M2; 4], FieldError> {
            let mut out = [[[ZERO; 2]; 2]; 4];
            for i in 0..2 {
                for j in 0..2 {
                    let l = frame.lie(&m[i][j])?;
                    for r in 0..4 {
                        out[r][i][j] = l[r];
                    }
                }
            }
            Ok(out)
        };
        let lie3 = |m: &[[[Component; 2]; 2]; 4]| -> Result<[G3; 4], FieldError> {
            let mut out = [[[[ZERO; 2]; 2]; 4]; 4];
            for p in 0..4 {
                let slice = lie2(&m[p])?;
                for r in 0..4 {
                    out[r][p] = slice[r];
                }
            }
            Ok(out)
        };
        Ok(EquipmentAtPoint {
            lie_d: lie2(&self.d)?,
            lie_d_dual: lie2(&self.d_dual)?,
            lie_dbar: lie2(&self.dbar)?,
            lie_dbar_dual: lie2(&self.dbar_dual)?,
            lie_ivdw: lie3(&self.ivdw)?,
            lie_ivdw_inverse: lie3(&self.ivdw_inverse)?,
            values,
        })
    }
}

/// Equipment components at one point, spinor labels shifted to 0, 1.
#[derive(Debug, Clone)]
pub struct EquipmentValues {
    pub g: [[C; 4]; 4],
    pub g_dual: [[C; 4]; 4],
    pub d: M2,
    pub d_dual: M2,
    pub dbar: M2,
    pub dbar_dual: M2,
    pub ivdw: G3,
    pub ivdw_inverse: G3,
}

/// Values together with `L_r` of every component; the Lie derivative
/// arrays carry `r` as their outermost index.
#[derive(Debug, Clone)]
pub struct EquipmentAtPoint {
    pub values: EquipmentValues,
    pub lie_d: [M2; 4],
    pub lie_d_dual: [M2; 4],
    pub lie_dbar: [M2; 4],
    pub lie_dbar_dual: [M2; 4],
    pub lie_ivdw: [G3; 4],
    pub lie_ivdw_inverse: [G3; 4],
}

fn delta(a: usize, b: usize) -> C {
    if a == b {
        C::new(1.0, 0.0)
    } else {
        ZERO
    }
}

fn pairs(n: usize, m: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |a| (0..m).map(move |b| (a, b)))
}

fn consistency_residuals(v: &EquipmentValues, tol: f64) -> Vec<Residual> {
    let sp = |i: usize| i + 1;
    vec![
        Residual::collect(
            "metric-inverse",
            tol,
            pairs(4, 4).map(|(i, k)| (vec![i, k], (0..4).map(|j| v.g[i][j] * v.g_dual[j][k]).sum::<C>() - delta(i, k))),
        ),
        Residual::collect(
            "spinor-metric-inverse",
            tol,
            pairs(2, 2).map(|(i, k)| (vec![sp(i), sp(k)], (0..2).map(|j| v.d[i][j] * v.d_dual[j][k]).sum::<C>() - delta(i, k))),
        ),
        Residual::collect(
            "conjugate-spinor-metric-inverse",
            tol,
            pairs(2, 2).map(|(i, k)| {
                (vec![sp(i), sp(k)], (0..2).map(|j| v.dbar[i][j] * v.dbar_dual[j][k]).sum::<C>() - delta(i, k))
            }),
        ),
        Residual::collect(
            "inverse-ivdw",
            tol,
            (0..4).flat_map(|q| pairs(2, 2).map(move |(s, sb)| (q, s, sb))).map(|(q, s, sb)| {
                let raised: C = (0..4)
                    .flat_map(|p| pairs(2, 2).map(move |(r, rb)| (p, r, rb)))
                    .map(|(p, r, rb)| v.ivdw[p][r][rb] * v.g_dual[p][q] * v.d[r][s] * v.dbar[rb][sb])
                    .sum();
                (vec![q, sp(s), sp(sb)], raised - v.ivdw_inverse[q][s][sb])
            }),
        ),
        Residual::collect(
            "quadratic-spatial",
            tol,
            pairs(4, 4).map(|(p, q)| {
                let lhs: C = pairs(2, 2).map(|(r, rb)| v.ivdw[p][r][rb] * v.ivdw_inverse[q][r][rb]).sum();
                (vec![p, q], lhs - delta(p, q) * 2.0)
            }),
        ),
        Residual::collect(
            "quadratic-spinor",
            tol,
            pairs(4, 4).map(|(a, b)| {
                let (r, rb, s, sb) = (a / 2, a % 2, b / 2, b % 2);
                let lhs: C = (0..4).map(|q| v.ivdw[q][r][rb] * v.ivdw_inverse[q][s][sb]).sum();
                (vec![sp(r), sp(rb), sp(s), sp(sb)], lhs - delta(r, s) * delta(rb, sb) * 2.0)
            }),
        ),
    ]
}

/// The three summands of `A^i_rj`, each `[i][r][j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinorTerms {
    /// `¼ Σ G^{i sbar}_p Γ^p_rq G^q_{j sbar}`
    pub connection: SpinorArray,
    /// `−¼ Σ L_r(G^{i sbar}_q) G^q_{j sbar}`
    pub ivdw_derivative: SpinorArray,
    /// `−¼ δ^i_j Σ L_r(dbar_{jbar ibar}) dbar^{ibar jbar}`
    pub conjugate_metric_derivative: SpinorArray,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpinorConnectionAtPoint {
    /// `a[i][r][j] = A^i_rj`
    pub a: SpinorArray,
    /// `abar[ibar][r][jbar]`, the entrywise conjugate of `a`.
    pub abar: SpinorArray,
    pub terms: SpinorTerms,
}

pub fn spinor_connection(eq: &EquipmentAtPoint, conn: &ConnectionAtPoint) -> SpinorConnectionAtPoint {
    let v = &eq.values;
    let quarter = 0.25;
    let mut connection = [[[ZERO; 2]; 4]; 2];
    let mut ivdw_derivative = [[[ZERO; 2]; 4]; 2];
    let mut conjugate_metric_derivative = [[[ZERO; 2]; 4]; 2];
    for r in 0..4 {
        let trace: C = pairs(2, 2).map(|(ib, jb)| eq.lie_dbar[r][jb][ib] * v.dbar_dual[ib][jb]).sum();
        for i in 0..2 {
            for j in 0..2 {
                let mut first = ZERO;
                let mut second = ZERO;
                for sb in 0..2 {
                    for q in 0..4 {
                        let inv = v.ivdw_inverse[q][j][sb];
                        let gamma_term: C = (0..4).map(|p| v.ivdw[p][i][sb] * conn.gamma[p][r][q]).sum();
                        first += gamma_term * inv;
                        second += eq.lie_ivdw[r][q][i][sb] * inv;
                    }
                }
                connection[i][r][j] = first * quarter;
                ivdw_derivative[i][r][j] = -second * quarter;
                conjugate_metric_derivative[i][r][j] = -delta(i, j) * trace * quarter;
            }
        }
    }
    let a: SpinorArray = std::array::from_fn(|i| {
        std::array::from_fn(|r| {
            std::array::from_fn(|j| connection[i][r][j] + ivdw_derivative[i][r][j] + conjugate_metric_derivative[i][r][j])
        })
    });
    let abar = a.map(|row| row.map(|col| col.map(|z| z.conj())));
    SpinorConnectionAtPoint {
        a,
        abar,
        terms: SpinorTerms {
            connection,
            ivdw_derivative,
            conjugate_metric_derivative,
        },
    }
}

/// `L_r d_ij − Σ_k A^k_ri d_kj − Σ_k A^k_rj d_ik`
pub fn check_spinor_metric_concordance(eq: &EquipmentAtPoint, sc: &SpinorConnectionAtPoint, tol: f64) -> Residual {
    let d = &eq.values.d;
    Residual::collect(
        "spinor-metric-concordance",
        tol,
        (0..4).flat_map(|r| pairs(2, 2).map(move |(i, j)| (r, i, j))).map(|(r, i, j)| {
            let v = eq.lie_d[r][i][j] - (0..2).map(|k| sc.a[k][r][i] * d[k][j] + sc.a[k][r][j] * d[i][k]).sum::<C>();
            (vec![r, i + 1, j + 1], v)
        }),
    )
}

/// `L_r G^{i ibar}_p + Σ_k A^i_rk G^{k ibar}_p + Σ_kbar conj(A^ibar_{r kbar}) G^{i kbar}_p
///  − Σ_k Γ^k_rp G^{i ibar}_k`
pub fn check_ivdw_concordance(
    eq: &EquipmentAtPoint,
    conn: &ConnectionAtPoint,
    sc: &SpinorConnectionAtPoint,
    tol: f64,
) -> Residual {
    let g = &eq.values.ivdw;
    Residual::collect(
        "ivdw-concordance",
        tol,
        (0..4)
            .flat_map(|r| (0..4).flat_map(move |p| pairs(2, 2).map(move |(i, ib)| (r, p, i, ib))))
            .map(|(r, p, i, ib)| {
                let spinor: C = (0..2).map(|k| sc.a[i][r][k] * g[p][k][ib] + sc.abar[ib][r][k] * g[p][i][k]).sum();
                let spatial: C = (0..4).map(|k| conn.gamma[k][r][p] * g[k][i][ib]).sum();
                (vec![r, p, i + 1, ib + 1], eq.lie_ivdw[r][p][i][ib] + spinor - spatial)
            }),
    )
}

/// `U_r = ½ Σ L_r(d^{ik}) d_ki` and the conjugate counterpart from `dbar`.
pub fn u_coefficients(eq: &EquipmentAtPoint) -> ([C; 4], [C; 4]) {
    let v = &eq.values;
    let u = std::array::from_fn(|r| pairs(2, 2).map(|(i, k)| eq.lie_d_dual[r][i][k] * v.d[k][i]).sum::<C>() * 0.5);
    let ubar = std::array::from_fn(|r| pairs(2, 2).map(|(i, k)| eq.lie_dbar_dual[r][i][k] * v.dbar[k][i]).sum::<C>() * 0.5);
    (u, ubar)
}

/// `L_r(d^{ik}) − U_r d^{ik}` and its conjugate counterpart, together with
/// the agreement of both expressions for `U_r`.
pub fn check_u_coefficients(eq: &EquipmentAtPoint, tol: f64) -> Vec<Residual> {
    let v = &eq.values;
    let (u, ubar) = u_coefficients(eq);
    let idx = |r: usize, i: usize, k: usize| vec![r, i + 1, k + 1];
    vec![
        Residual::collect(
            "u-proportionality",
            tol,
            (0..4)
                .flat_map(|r| pairs(2, 2).map(move |(i, k)| (r, i, k)))
                .map(|(r, i, k)| (idx(r, i, k), eq.lie_d_dual[r][i][k] - u[r] * v.d_dual[i][k])),
        ),
        Residual::collect(
            "conjugate-u-proportionality",
            tol,
            (0..4)
                .flat_map(|r| pairs(2, 2).map(move |(i, k)| (r, i, k)))
                .map(|(r, i, k)| (idx(r, i, k), eq.lie_dbar_dual[r][i][k] - ubar[r] * v.dbar_dual[i][k])),
        ),
        Residual::collect(
            "u-lower-form",
            tol,
            (0..4).map(|r| {
                let lower: C = pairs(2, 2).map(|(s, w)| eq.lie_d[r][s][w] * v.d_dual[w][s]).sum::<C>() * -0.5;
                let lower_bar: C = pairs(2, 2).map(|(s, w)| eq.lie_dbar[r][s][w] * v.dbar_dual[w][s]).sum::<C>() * -0.5;
                let worst = if (lower - u[r]).norm() >= (lower_bar - ubar[r]).norm() {
                    lower - u[r]
                } else {
                    lower_bar - ubar[r]
                };
                (vec![r], worst)
            }),
        ),
    ]
}

/// Derivatives of the quadratic identities: in each, moving `L_r` from one
/// factor to the other flips the sign.
pub fn check_derivative_swaps(eq: &EquipmentAtPoint, tol: f64) -> Vec<Residual> {
    let (g, gi) = (&eq.values.ivdw, &eq.values.ivdw_inverse);
    let (lg, lgi) = (&eq.lie_ivdw, &eq.lie_ivdw_inverse);
    vec![
        // Σ_{sbar,q} L(G^{k sbar}_q) G^q_{i sbar} = −Σ G^{k sbar}_q L(G^q_{i sbar})
        Residual::collect(
            "ivdw-swap-conjugate-trace",
            tol,
            (0..4).flat_map(|r| pairs(2, 2).map(move |(k, i)| (r, k, i))).map(|(r, k, i)| {
                let v: C = pairs(2, 4)
                    .map(|(sb, q)| lg[r][q][k][sb] * gi[q][i][sb] + g[q][k][sb] * lgi[r][q][i][sb])
                    .sum();
                (vec![r, k + 1, i + 1], v)
            }),
        ),
        // Σ_{k,m} G^m_{k sbar} L(G^{k ibar}_m) = −Σ L(G^m_{k sbar}) G^{k ibar}_m
        Residual::collect(
            "ivdw-swap-spinor-trace",
            tol,
            (0..4).flat_map(|r| pairs(2, 2).map(move |(sb, ib)| (r, sb, ib))).map(|(r, sb, ib)| {
                let v: C = pairs(2, 4)
                    .map(|(k, m)| gi[m][k][sb] * lg[r][m][k][ib] + lgi[r][m][k][sb] * g[m][k][ib])
                    .sum();
                (vec![r, sb + 1, ib + 1], v)
            }),
        ),
        // Σ_m G^{i ibar}_m L(G^m_{k sbar}) = −Σ_m L(G^{i ibar}_m) G^m_{k sbar}
        Residual::collect(
            "ivdw-swap-spatial-trace",
            tol,
            (0..4)
                .flat_map(|r| pairs(4, 4).map(move |(a, b)| (r, a / 2, a % 2, b / 2, b % 2)))
                .map(|(r, i, ib, k, sb)| {
                    let v: C = (0..4).map(|m| g[m][i][ib] * lgi[r][m][k][sb] + lg[r][m][i][ib] * gi[m][k][sb]).sum();
                    (vec![r, i + 1, ib + 1, k + 1, sb + 1], v)
                }),
        ),
    ]
}

/// `Abar − conj(A)`, zero by construction.
pub fn check_conjugation(sc: &SpinorConnectionAtPoint) -> Residual {
    Residual::collect(
        "conjugate-connection",
        0.0,
        (0..4)
            .flat_map(|r| pairs(2, 2).map(move |(i, j)| (r, i, j)))
            .map(|(r, i, j)| (vec![i + 1, r, j + 1], sc.abar[i][r][j] - sc.a[i][r][j].conj())),
    )
}

/// Everything computed for one sample point.
#[derive(Debug, Clone, Serialize)]
pub struct PointSummary {
    pub point: Point,
    pub residuals: Vec<Residual>,
    pub u: [[f64; 2]; 4],
    pub ubar: [[f64; 2]; 4],
    /// Largest entry of each summand of the spinor connection.
    pub spinor_term_magnitudes: [f64; 3],
}

fn max_abs(a: &SpinorArray) -> f64 {
    a.iter().flatten().flatten().map(|z| z.norm()).fold(0.0, f64::max)
}

impl SpinorTerms {
    pub fn magnitudes(&self) -> [f64; 3] {
        [
            max_abs(&self.connection),
            max_abs(&self.ivdw_derivative),
            max_abs(&self.conjugate_metric_derivative),
        ]
    }
}

/// Runs every field-level check at one point.
pub fn analyze_point(
    frame: &crate::frames::FrameField,
    metric: &crate::frames::MetricField,
    equipment: &EquipmentField,
    point: &Point,
    tol: f64,
) -> Result<PointSummary, FieldError> {
    use crate::frames::{check_connection_trace, check_lowered_symmetrization, check_metricity, check_torsion, christoffel};
    let f = frame.at(point)?;
    let m = metric.at(&f)?;
    let conn = christoffel(&f, &m);
    let eq = equipment.at(&f, &m, DEFAULT_CONSISTENCY_TOLERANCE.max(tol))?;
    let sc = spinor_connection(&eq, &conn);
    let mut residuals = vec![
        check_torsion(&conn, &f.commutators, tol),
        check_metricity(&m, &conn, tol),
        check_lowered_symmetrization(&m, &conn, tol),
        check_connection_trace(&m, &conn, tol),
        check_spinor_metric_concordance(&eq, &sc, tol),
        check_ivdw_concordance(&eq, &conn, &sc, tol),
        check_conjugation(&sc),
    ];
    residuals.extend(check_u_coefficients(&eq, tol));
    residuals.extend(check_derivative_swaps(&eq, tol));
    let (u, ubar) = u_coefficients(&eq);
    Ok(PointSummary {
        point: *point,
        residuals,
        u: u.map(|z| [z.re, z.im]),
        ubar: ubar.map(|z| [z.re, z.im]),
        spinor_term_magnitudes: sc.terms.magnitudes(),
    })
}
