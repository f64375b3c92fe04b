//! Exhaustive component-wise verification of the algebraic identities
//! relating `g`, `d`, `G` and the volume tensor.
//!
//! Every check enumerates all values of the free indices and compares both
//! sides exactly, so the checks that evaluate products of components refuse
//! a float realization. Reports keep both sides of each failed case.

use serde::Serialize;
use thiserror::Error;

use crate::equipment::Equipment;
use crate::scalar::{Realization, Scalar};
use crate::tensor::{raise_lower, IndexKind, SpinTensor};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdentityError {
    #[error("identity checks need exact arithmetic, got the {0:?} realization")]
    Realization(Realization),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseFailure {
    pub relation: String,
    pub index: Vec<usize>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub identity_id: String,
    /// Names of the free indices, in enumeration order.
    pub index_names: Vec<String>,
    pub total_cases: usize,
    pub failures: Vec<CaseFailure>,
    pub passed: bool,
}

impl IdentityReport {
    /// Concatenates reports over disjoint case sets under one id.
    pub fn combine(identity_id: &str, parts: Vec<IdentityReport>) -> Self {
        let total_cases = parts.iter().map(|p| p.total_cases).sum();
        let failures: Vec<CaseFailure> = parts.into_iter().flat_map(|p| p.failures).collect();
        Self {
            identity_id: identity_id.to_owned(),
            index_names: Vec::new(),
            total_cases,
            passed: failures.is_empty(),
            failures,
        }
    }
}

struct Tally {
    id: &'static str,
    names: &'static [&'static str],
    cases: usize,
    failures: Vec<CaseFailure>,
}

impl Tally {
    fn new(id: &'static str, names: &'static [&'static str]) -> Self {
        Self {
            id,
            names,
            cases: 0,
            failures: Vec::new(),
        }
    }

    /// Counts one case; records a failure for each relation that does not
    /// hold.
    fn case<S: Scalar>(&mut self, index: &[usize], relations: &[(&str, S, S)]) {
        self.cases += 1;
        for (name, lhs, rhs) in relations {
            if !lhs.approx_eq(rhs, 0.0) {
                self.failures.push(CaseFailure {
                    relation: (*name).to_owned(),
                    index: index.to_vec(),
                    lhs: lhs.to_string(),
                    rhs: rhs.to_string(),
                });
            }
        }
    }

    fn finish(self) -> IdentityReport {
        IdentityReport {
            identity_id: self.id.to_owned(),
            index_names: self.names.iter().map(|s| (*s).to_owned()).collect(),
            total_cases: self.cases,
            passed: self.failures.is_empty(),
            failures: self.failures,
        }
    }
}

fn require_exact<S: Scalar>() -> Result<(), IdentityError> {
    match S::REALIZATION {
        Realization::Exact => Ok(()),
        other => Err(IdentityError::Realization(other)),
    }
}

const SPATIAL: std::ops::RangeInclusive<usize> = 0..=3;
const SPINOR: std::ops::RangeInclusive<usize> = 1..=2;

fn delta<S: Scalar>(a: usize, b: usize) -> S {
    if a == b {
        S::one()
    } else {
        S::zero()
    }
}

fn sum<S: Scalar>(terms: impl IntoIterator<Item = S>) -> S {
    terms.into_iter().fold(S::zero(), |acc, t| acc + t)
}

/// Read-only component accessors with the index placement spelled out.
struct View<'a, S> {
    eq: &'a Equipment<S>,
    /// `W[p, m, q, n] = Σ_{a,b} g_pa g_qb ω^{ambn}`
    omega_mixed: SpinTensor<S>,
}

impl<'a, S: Scalar> View<'a, S> {
    fn new(eq: &'a Equipment<S>) -> Self {
        let w = raise_lower(&eq.omega_dual, 0, &eq.g).expect("omega_dual signature");
        let omega_mixed = raise_lower(&w, 2, &eq.g).expect("omega_dual signature");
        Self { eq, omega_mixed }
    }

    /// `G^{r rbar}_p`
    fn gu(&self, p: usize, r: usize, rb: usize) -> S {
        self.eq.ivdw.get(&[p, r, rb]).clone()
    }

    /// `G^q_{s sbar}`
    fn gl(&self, q: usize, s: usize, sb: usize) -> S {
        self.eq.ivdw_inverse.get(&[q, s, sb]).clone()
    }

    fn g(&self, p: usize, q: usize) -> S {
        self.eq.g.get(&[p, q]).clone()
    }

    fn g_dual(&self, p: usize, q: usize) -> S {
        self.eq.g_dual.get(&[p, q]).clone()
    }

    fn d(&self, i: usize, j: usize) -> S {
        self.eq.d.get(&[i, j]).clone()
    }

    fn d_dual(&self, i: usize, j: usize) -> S {
        self.eq.d_dual.get(&[i, j]).clone()
    }

    fn dbar(&self, i: usize, j: usize) -> S {
        self.eq.dbar.get(&[i, j]).clone()
    }

    fn dbar_dual(&self, i: usize, j: usize) -> S {
        self.eq.dbar_dual.get(&[i, j]).clone()
    }

    fn w(&self, p: usize, m: usize, q: usize, n: usize) -> S {
        self.omega_mixed.get(&[p, m, q, n]).clone()
    }
}

/// Both sides of the cubic identity at `(p, q, m, r, rbar)`:
///
/// `Σ_{s,sbar} G^{r sbar}_p G^m_{s sbar} G^{s rbar}_q`
/// against
/// `G^{r rbar}_p δ^m_q + G^{r rbar}_q δ^m_p − Σ_n G^{r rbar}_n g^{mn} g_pq
///  + i Σ_{a,b,n} g_pa g_qb ω^{ambn} G^{r rbar}_n`.
pub fn cubic_sides<S: Scalar>(eq: &Equipment<S>, p: usize, q: usize, m: usize, r: usize, rb: usize) -> (S, S) {
    cubic_sides_in(&View::new(eq), p, q, m, r, rb)
}

fn cubic_sides_in<S: Scalar>(v: &View<'_, S>, p: usize, q: usize, m: usize, r: usize, rb: usize) -> (S, S) {
    let lhs = sum(SPINOR.flat_map(|s| {
        SPINOR.map(move |sb| v.gu(p, r, sb) * v.gl(m, s, sb) * v.gu(q, s, rb))
    }));
    let rhs = v.gu(p, r, rb) * delta(m, q) + v.gu(q, r, rb) * delta(m, p)
        - sum(SPATIAL.map(|n| v.gu(n, r, rb) * v.g_dual(m, n) * v.g(p, q)))
        + S::imag_unit() * sum(SPATIAL.map(|n| v.w(p, m, q, n) * v.gu(n, r, rb)));
    (lhs, rhs)
}

/// Hermiticity of every spatial slice of `G` and of its inverse.
pub fn check_hermiticity<S: Scalar>(eq: &Equipment<S>) -> IdentityReport {
    let mut t = Tally::new("hermiticity", &["p", "r", "rbar"]);
    for (name, field) in [("ivdw", &eq.ivdw), ("ivdw-inverse", &eq.ivdw_inverse)] {
        for p in SPATIAL {
            for r in SPINOR {
                for rb in SPINOR {
                    let lhs = field.get(&[p, r, rb]).clone();
                    let rhs = field.get(&[p, rb, r]).conj();
                    t.case(&[p, r, rb], &[(name, lhs, rhs)]);
                }
            }
        }
    }
    t.finish()
}

/// The two quadratic identities: `Σ G^{r rbar}_p G^q_{r rbar} = 2δ^q_p`
/// over `(p, q)` and `Σ_q G^{r rbar}_q G^q_{s sbar} = 2δ^r_s δ^rbar_sbar`
/// over `(r, rbar, s, sbar)`; 32 cases in all.
pub fn check_quadratic<S: Scalar>(eq: &Equipment<S>) -> Result<IdentityReport, IdentityError> {
    require_exact::<S>()?;
    let v = View::new(eq);
    let two = S::from_i64(2);
    let mut trace = Tally::new("quadratic-spatial", &["p", "q"]);
    for p in SPATIAL {
        for q in SPATIAL {
            let lhs = sum(SPINOR.flat_map(|r| SPINOR.map(move |rb| (r, rb))).map(|(r, rb)| v.gu(p, r, rb) * v.gl(q, r, rb)));
            trace.case(&[p, q], &[("spatial-trace", lhs, two.clone() * delta(q, p))]);
        }
    }
    let mut completeness = Tally::new("quadratic-spinor", &["r", "rbar", "s", "sbar"]);
    for r in SPINOR {
        for rb in SPINOR {
            for s in SPINOR {
                for sb in SPINOR {
                    let lhs = sum(SPATIAL.map(|q| v.gu(q, r, rb) * v.gl(q, s, sb)));
                    let rhs = two.clone() * delta::<S>(r, s) * delta(rb, sb);
                    completeness.case(&[r, rb, s, sb], &[("spinor-completeness", lhs, rhs)]);
                }
            }
        }
    }
    Ok(IdentityReport::combine("quadratic", vec![trace.finish(), completeness.finish()]))
}

/// The cubic identity over all 256 tuples, enumerated in the order
/// `p, m, q, r, rbar`.
pub fn check_cubic<S: Scalar>(eq: &Equipment<S>) -> Result<IdentityReport, IdentityError> {
    require_exact::<S>()?;
    let v = View::new(eq);
    let mut t = Tally::new("cubic", &["p", "m", "q", "r", "rbar"]);
    for p in SPATIAL {
        for m in SPATIAL {
            for q in SPATIAL {
                for r in SPINOR {
                    for rb in SPINOR {
                        let (lhs, rhs) = cubic_sides_in(&v, p, q, m, r, rb);
                        t.case(&[p, m, q, r, rb], &[("cubic", lhs, rhs)]);
                    }
                }
            }
        }
    }
    Ok(t.finish())
}

/// Sides of the three consequences of the cubic identity at one tuple
/// `(p, q, r, rbar, u, ubar)`.
#[derive(Debug, Clone)]
pub struct DerivedSides<S> {
    /// `2 G^{r ubar}_p G^{u rbar}_q` and its expansion.
    pub product: (S, S),
    /// Symmetrization in `(p, q)`.
    pub symmetric: (S, S),
    /// Alternation in `(p, q)`.
    pub antisymmetric: (S, S),
}

pub fn derived_sides<S: Scalar>(
    eq: &Equipment<S>,
    p: usize,
    q: usize,
    r: usize,
    rb: usize,
    u: usize,
    ub: usize,
) -> DerivedSides<S> {
    derived_sides_in(&View::new(eq), p, q, r, rb, u, ub)
}

fn derived_sides_in<S: Scalar>(
    v: &View<'_, S>,
    p: usize,
    q: usize,
    r: usize,
    rb: usize,
    u: usize,
    ub: usize,
) -> DerivedSides<S> {
    let two = S::from_i64(2);
    let cross_pq = v.gu(p, r, ub) * v.gu(q, u, rb);
    let cross_qp = v.gu(q, r, ub) * v.gu(p, u, rb);
    let straight = v.gu(p, r, rb) * v.gu(q, u, ub) + v.gu(q, r, rb) * v.gu(p, u, ub);
    let metric_term = two.clone() * v.d_dual(r, u) * v.dbar_dual(rb, ub) * v.g(p, q);
    let volume_term = S::imag_unit()
        * sum(SPATIAL.flat_map(|m| SPATIAL.map(move |n| (m, n))).map(|(m, n)| {
            v.w(p, m, q, n) * v.gu(m, u, ub) * v.gu(n, r, rb)
        }));
    DerivedSides {
        product: (
            two * cross_pq.clone(),
            straight.clone() - metric_term.clone() + volume_term.clone(),
        ),
        symmetric: (cross_pq.clone() + cross_qp.clone(), straight - metric_term),
        antisymmetric: (cross_pq - cross_qp, volume_term),
    }
}

/// The product identity obtained by contracting the cubic identity with
/// `G^{u ubar}_m`, its symmetric and antisymmetric parts in `(p, q)`, and a
/// per-tuple check that the two parts reassemble the product identity.
/// Returns four reports of 256 cases each.
pub fn check_derived<S: Scalar>(eq: &Equipment<S>) -> Result<Vec<IdentityReport>, IdentityError> {
    require_exact::<S>()?;
    let v = View::new(eq);
    const NAMES: &[&str] = &["p", "q", "r", "rbar", "u", "ubar"];
    let mut product = Tally::new("derived-product", NAMES);
    let mut symmetric = Tally::new("derived-symmetric", NAMES);
    let mut antisymmetric = Tally::new("derived-antisymmetric", NAMES);
    let mut reconstruction = Tally::new("derived-reconstruction", NAMES);
    let two = S::from_i64(2);
    for p in SPATIAL {
        for q in SPATIAL {
            for r in SPINOR {
                for rb in SPINOR {
                    for u in SPINOR {
                        for ub in SPINOR {
                            let idx = [p, q, r, rb, u, ub];
                            let here = derived_sides_in(&v, p, q, r, rb, u, ub);
                            let swapped = derived_sides_in(&v, q, p, r, rb, u, ub);
                            let DerivedSides {
                                product: (pl, pr),
                                symmetric: (sl, sr),
                                antisymmetric: (al, ar),
                            } = here;
                            product.case(&idx, &[("product", pl.clone(), pr.clone())]);
                            symmetric.case(&idx, &[("symmetric", sl.clone(), sr.clone())]);
                            antisymmetric.case(&idx, &[("antisymmetric", al.clone(), ar.clone())]);
                            let (ql, qr) = swapped.product;
                            reconstruction.case(
                                &idx,
                                &[
                                    ("sum-lhs", sl.clone() + al.clone(), pl.clone()),
                                    ("sum-rhs", sr.clone() + ar.clone(), pr.clone()),
                                    ("half-sum-lhs", pl.clone() + ql.clone(), two.clone() * sl),
                                    ("half-sum-rhs", pr.clone() + qr.clone(), two.clone() * sr),
                                    ("half-difference-lhs", pl - ql, two.clone() * al),
                                    ("half-difference-rhs", pr - qr, two.clone() * ar),
                                ],
                            );
                        }
                    }
                }
            }
        }
    }
    Ok(vec![
        product.finish(),
        symmetric.finish(),
        antisymmetric.finish(),
        reconstruction.finish(),
    ])
}

/// Contraction identities that trade `G` for its inverse through the
/// metrics. Five reports of 16 cases each:
///
/// * `lower-spinor`: `Σ_k G^{k sbar}_p d_kj = Σ_{m,rbar} G^m_{j rbar} dbar^{rbar sbar} g_mp`
/// * `lower-both`: `Σ_{k,abar} G^{k abar}_p d_kj dbar_{abar rbar} = Σ_q G^q_{j rbar} g_pq`
/// * `raise-conjugate`: `Σ_{sbar,m} dbar^{rbar sbar} g_nm G^m_{k sbar} = Σ_s G^{s rbar}_n d_ks`
/// * `raise-spinor`: `Σ_{k,m} d^{qk} g_nm G^m_{k sbar} = Σ_kbar G^{q kbar}_n dbar_{sbar kbar}`
/// * `raise-both`: `Σ_{k,sbar} d^{qk} dbar^{rbar sbar} G^m_{k sbar} = Σ_p G^{q rbar}_p g^{pm}`
pub fn check_aux_contractions<S: Scalar>(eq: &Equipment<S>) -> Result<Vec<IdentityReport>, IdentityError> {
    require_exact::<S>()?;
    let v = View::new(eq);

    let mut lower_spinor = Tally::new("lower-spinor", &["sbar", "p", "j"]);
    for sb in SPINOR {
        for p in SPATIAL {
            for j in SPINOR {
                let lhs = sum(SPINOR.map(|k| v.gu(p, k, sb) * v.d(k, j)));
                let rhs = sum(SPATIAL.flat_map(|m| SPINOR.map(move |rb| (m, rb)))
                    .map(|(m, rb)| v.gl(m, j, rb) * v.dbar_dual(rb, sb) * v.g(m, p)));
                lower_spinor.case(&[sb, p, j], &[("lower-spinor", lhs, rhs)]);
            }
        }
    }

    let mut lower_both = Tally::new("lower-both", &["p", "j", "rbar"]);
    for p in SPATIAL {
        for j in SPINOR {
            for rb in SPINOR {
                let lhs = sum(SPINOR.flat_map(|k| SPINOR.map(move |ab| (k, ab)))
                    .map(|(k, ab)| v.gu(p, k, ab) * v.d(k, j) * v.dbar(ab, rb)));
                let rhs = sum(SPATIAL.map(|q| v.gl(q, j, rb) * v.g(p, q)));
                lower_both.case(&[p, j, rb], &[("lower-both", lhs, rhs)]);
            }
        }
    }

    let mut raise_conjugate = Tally::new("raise-conjugate", &["rbar", "n", "k"]);
    for rb in SPINOR {
        for n in SPATIAL {
            for k in SPINOR {
                let lhs = sum(SPINOR.flat_map(|sb| SPATIAL.map(move |m| (sb, m)))
                    .map(|(sb, m)| v.dbar_dual(rb, sb) * v.g(n, m) * v.gl(m, k, sb)));
                let rhs = sum(SPINOR.map(|s| v.gu(n, s, rb) * v.d(k, s)));
                raise_conjugate.case(&[rb, n, k], &[("raise-conjugate", lhs, rhs)]);
            }
        }
    }

    let mut raise_spinor = Tally::new("raise-spinor", &["q", "n", "sbar"]);
    for q in SPINOR {
        for n in SPATIAL {
            for sb in SPINOR {
                let lhs = sum(SPINOR.flat_map(|k| SPATIAL.map(move |m| (k, m)))
                    .map(|(k, m)| v.d_dual(q, k) * v.g(n, m) * v.gl(m, k, sb)));
                let rhs = sum(SPINOR.map(|kb| v.gu(n, q, kb) * v.dbar(sb, kb)));
                raise_spinor.case(&[q, n, sb], &[("raise-spinor", lhs, rhs)]);
            }
        }
    }

    let mut raise_both = Tally::new("raise-both", &["q", "rbar", "m"]);
    for q in SPINOR {
        for rb in SPINOR {
            for m in SPATIAL {
                let lhs = raise_both_lhs(&v, q, rb, m);
                let rhs = sum(SPATIAL.map(|p| v.gu(p, q, rb) * v.g_dual(p, m)));
                raise_both.case(&[q, rb, m], &[("raise-both", lhs, rhs)]);
            }
        }
    }

    Ok(vec![
        lower_spinor.finish(),
        lower_both.finish(),
        raise_conjugate.finish(),
        raise_spinor.finish(),
        raise_both.finish(),
    ])
}

fn raise_both_lhs<S: Scalar>(v: &View<'_, S>, q: usize, rb: usize, m: usize) -> S {
    sum(SPINOR.flat_map(|k| SPINOR.map(move |sb| (k, sb)))
        .map(|(k, sb)| v.d_dual(q, k) * v.dbar_dual(rb, sb) * v.gl(m, k, sb)))
}

/// Signature check shared by callers that build equipment by hand.
pub fn has_equipment_signatures<S: Scalar>(eq: &Equipment<S>) -> bool {
    use IndexKind as K;
    eq.g.signature() == [K::SPATIAL_DOWN; 2]
        && eq.g_dual.signature() == [K::SPATIAL_UP; 2]
        && eq.d.signature() == [K::SPINOR_DOWN; 2]
        && eq.d_dual.signature() == [K::SPINOR_UP; 2]
        && eq.dbar.signature() == [K::CONJ_DOWN; 2]
        && eq.dbar_dual.signature() == [K::CONJ_UP; 2]
        && eq.ivdw.signature() == crate::equipment::ivdw_signature()
        && eq.ivdw_inverse.signature() == crate::equipment::ivdw_inverse_signature()
        && eq.omega.signature() == [K::SPATIAL_DOWN; 4]
        && eq.omega_dual.signature() == [K::SPATIAL_UP; 4]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equipment::{canonical_equipment, pauli, Orientation};
    use crate::scalar::{ComplexFloat, GaussianRational as Q};

    fn canonical() -> Equipment<Q> {
        canonical_equipment(Orientation::Right)
    }

    fn q(n: i64) -> Q {
        Q::from_i64(n)
    }

    #[test]
    fn cubic_examples() {
        let eq = canonical();
        assert_eq!(cubic_sides(&eq, 0, 0, 0, 1, 1), (q(1), q(1)));
        assert_eq!(cubic_sides(&eq, 1, 2, 0, 1, 1), (Q::imag_unit(), Q::imag_unit()));
    }

    #[test]
    fn quadratic_examples_by_direct_substitution() {
        // trace(σ0 σ0) = 2 and trace(σ0 σ1) = 0, using the inverse slices
        let eq = canonical();
        let v = View::new(&eq);
        let tr = |p, qq| sum((1..=2).flat_map(|r| (1..=2).map(move |rb| (r, rb))).map(|(r, rb)| v.gu(p, r, rb) * v.gl(qq, r, rb)));
        assert_eq!(tr(0, 0), q(2));
        assert_eq!(tr(0, 1), q(0));
    }

    #[test]
    fn canonical_identities_pass_with_expected_case_counts() {
        let eq = canonical();
        let quad = check_quadratic(&eq).unwrap();
        assert!(quad.passed, "{:?}", quad.failures);
        assert_eq!(quad.total_cases, 32);
        let cubic = check_cubic(&eq).unwrap();
        assert!(cubic.passed, "{:?}", cubic.failures);
        assert_eq!(cubic.total_cases, 256);
        for rep in check_derived(&eq).unwrap() {
            assert!(rep.passed, "{}: {:?}", rep.identity_id, rep.failures);
            assert_eq!(rep.total_cases, 256);
        }
        let aux = check_aux_contractions(&eq).unwrap();
        assert_eq!(aux.len(), 5);
        for rep in aux {
            assert!(rep.passed, "{}: {:?}", rep.identity_id, rep.failures);
            assert_eq!(rep.total_cases, 16);
        }
        let herm = check_hermiticity(&eq);
        assert!(herm.passed);
        assert_eq!(herm.total_cases, 32);
    }

    #[test]
    fn derived_examples() {
        let eq = canonical();
        for p in 0..4 {
            let s = derived_sides(&eq, p, p, 1, 2, 2, 1);
            assert_eq!(s.antisymmetric, (q(0), q(0)));
        }
        let s = derived_sides(&eq, 0, 0, 1, 1, 1, 1);
        assert_eq!(s.symmetric, (q(2), q(2)));
    }

    #[test]
    fn raise_both_example() {
        let eq = canonical();
        let v = View::new(&eq);
        assert_eq!(raise_both_lhs(&v, 1, 1, 0), q(1));
    }

    #[test]
    fn raise_identities_vanish_for_zero_field() {
        let mut eq = canonical();
        eq.ivdw = SpinTensor::zeros(crate::equipment::ivdw_signature());
        eq.ivdw_inverse = SpinTensor::zeros(crate::equipment::ivdw_inverse_signature());
        let aux = check_aux_contractions(&eq).unwrap();
        assert!(aux.iter().all(|r| r.passed));
    }

    #[test]
    fn float_realization_is_rejected() {
        let eq = canonical_equipment::<ComplexFloat>(Orientation::Right);
        assert_eq!(
            check_cubic(&eq).unwrap_err(),
            IdentityError::Realization(Realization::Float)
        );
        assert!(check_quadratic(&eq).is_err());
        assert!(check_derived(&eq).is_err());
        assert!(check_aux_contractions(&eq).is_err());
        // hermiticity holds exactly in floats too
        assert!(check_hermiticity(&eq).passed);
    }

    #[test]
    fn non_hermitian_slice_is_reported() {
        let eq = canonical();
        let bad = SpinTensor::from_fn(crate::equipment::ivdw_signature(), |i| {
            let base: Q = pauli(i[0], i[1], i[2]);
            if i[0] == 2 {
                base + Q::imag_unit() * pauli(0, i[1], i[2])
            } else {
                base
            }
        });
        let eq = Equipment { ivdw: bad, ..eq };
        let rep = check_hermiticity(&eq);
        assert!(!rep.passed);
        let first = &rep.failures[0];
        assert_eq!(first.index, vec![2, 1, 1]);
        assert_eq!(first.lhs, "i");
        assert_eq!(first.rhs, "-i");
    }

    #[test]
    fn corrupted_entry_fails_the_cubic_identity() {
        let eq = canonical().with_negated_ivdw_entry(3, 1, 1).unwrap();
        let rep = check_cubic(&eq).unwrap();
        assert!(!rep.passed);
        assert!(rep.failures.iter().all(|f| f.index.len() == 5));
    }

    #[test]
    fn orientation_flag_alone_breaks_the_cubic_identity() {
        // flipping only the volume tensor is not a frame change
        let rep = check_cubic(&canonical_equipment::<Q>(Orientation::Left)).unwrap();
        assert!(!rep.passed);
        // a genuine left frame (reflected third axis) satisfies it
        let reflected = canonical().reflect_spatial_axis(3);
        assert!(check_cubic(&reflected).unwrap().passed);
        assert!(check_quadratic(&reflected).unwrap().passed);
        assert!(check_derived(&reflected).unwrap().iter().all(|r| r.passed));
    }

    #[test]
    fn signatures_of_canonical_equipment() {
        assert!(has_equipment_signatures(&canonical()));
    }

    mod tensoriality {
        use super::*;
        use crate::testing::gaussian_rational;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(20))]

            #[test]
            fn unimodular_spin_frames_preserve_identities(
                a in gaussian_rational().prop_filter("invertible", |a| !a.is_zero()),
                b in gaussian_rational(),
                c in gaussian_rational(),
            ) {
                let d = (Q::one() + b.clone() * c.clone()) * a.inv().unwrap();
                let s = [[a, b], [c, d]];
                let eq = canonical().spin_transformed(&s).unwrap();
                prop_assert!(check_quadratic(&eq).unwrap().passed);
                prop_assert!(check_cubic(&eq).unwrap().passed);
                prop_assert!(check_derived(&eq).unwrap().iter().all(|r| r.passed));
                prop_assert!(check_aux_contractions(&eq).unwrap().iter().all(|r| r.passed));
            }
        }
    }
}
