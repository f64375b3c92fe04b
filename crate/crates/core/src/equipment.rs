//! The basic equipment of the spinor bundle: metric, spinor metric,
//! Infeld-van der Waerden field, their duals, and the volume tensor.
//!
//! [`canonical_equipment`] builds the constant components found in a
//! canonically associated frame pair: Minkowski `g`, the symplectic `d`, and
//! the Pauli matrices for `G`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{Scalar, ScalarError};
use crate::tensor::{conjugate, index_tuples, levi_civita, raise_lower, IndexKind, SpinTensor, TensorError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    #[default]
    Right,
    Left,
}

impl Orientation {
    pub fn flipped(self) -> Self {
        match self {
            Orientation::Right => Orientation::Left,
            Orientation::Left => Orientation::Right,
        }
    }

    fn sign<S: Scalar>(self) -> S {
        match self {
            Orientation::Right => S::one(),
            Orientation::Left => -S::one(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquipmentError {
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error("metric determinant must be negative (Lorentzian); -det(g) = {0}")]
    SignatureViolation(String),
    #[error("volume factor not representable in this scalar realization: {0}")]
    Representation(String),
    #[error("spin-frame transform is singular")]
    SingularTransform,
}

/// Basic equipment at a point, in a fixed pair of frames.
///
/// `ivdw` carries signature (spatial-down, spinor-up, conj-up); `ivdw_inverse`
/// carries (spatial-up, spinor-down, conj-down).
#[derive(Debug, Clone)]
pub struct Equipment<S> {
    pub g: SpinTensor<S>,
    pub g_dual: SpinTensor<S>,
    pub d: SpinTensor<S>,
    pub d_dual: SpinTensor<S>,
    pub dbar: SpinTensor<S>,
    pub dbar_dual: SpinTensor<S>,
    pub ivdw: SpinTensor<S>,
    pub ivdw_inverse: SpinTensor<S>,
    pub omega: SpinTensor<S>,
    pub omega_dual: SpinTensor<S>,
    pub orientation: Orientation,
}

pub fn ivdw_signature() -> Vec<IndexKind> {
    vec![IndexKind::SPATIAL_DOWN, IndexKind::SPINOR_UP, IndexKind::CONJ_UP]
}

pub fn ivdw_inverse_signature() -> Vec<IndexKind> {
    vec![IndexKind::SPATIAL_UP, IndexKind::SPINOR_DOWN, IndexKind::CONJ_DOWN]
}

/// Pauli matrix `σ_p` as `(row, column)` entries with 1-based spinor indices.
pub fn pauli<S: Scalar>(p: usize, row: usize, col: usize) -> S {
    let i = S::imag_unit;
    match (p, row, col) {
        (0, 1, 1) | (0, 2, 2) | (1, 1, 2) | (1, 2, 1) | (3, 1, 1) => S::one(),
        (3, 2, 2) => -S::one(),
        (2, 1, 2) => -i(),
        (2, 2, 1) => i(),
        _ => S::zero(),
    }
}

pub fn minkowski<S: Scalar>(kind: IndexKind) -> SpinTensor<S> {
    SpinTensor::from_fn(vec![kind, kind], |i| match (i[0], i[1]) {
        (0, 0) => S::one(),
        (a, b) if a == b => -S::one(),
        _ => S::zero(),
    })
}

/// Skew 2×2 matrix with `m[1][2] = upper_right`, `m[2][1] = -upper_right`.
fn skew<S: Scalar>(kind: IndexKind, upper_right: S) -> SpinTensor<S> {
    SpinTensor::from_fn(vec![kind, kind], |i| match (i[0], i[1]) {
        (1, 2) => upper_right.clone(),
        (2, 1) => -upper_right.clone(),
        _ => S::zero(),
    })
}

pub fn canonical_equipment<S: Scalar>(orientation: Orientation) -> Equipment<S> {
    let g = minkowski::<S>(IndexKind::SPATIAL_DOWN);
    let g_dual = minkowski::<S>(IndexKind::SPATIAL_UP);
    let d = skew(IndexKind::SPINOR_DOWN, S::one());
    let d_dual = skew(IndexKind::SPINOR_UP, -S::one());
    let dbar = conjugate(&d);
    let dbar_dual = conjugate(&d_dual);
    let ivdw = SpinTensor::from_fn(ivdw_signature(), |i| pauli(i[0], i[1], i[2]));
    let ivdw_inverse = inverse_ivdw(&ivdw, &g_dual, &d, &dbar)
        .expect("canonical signatures are consistent");
    let (omega, omega_dual) = volume_tensor(&g, &g_dual, orientation)
        .expect("Minkowski volume factor is exactly one");
    Equipment {
        g,
        g_dual,
        d,
        d_dual,
        dbar,
        dbar_dual,
        ivdw,
        ivdw_inverse,
        omega,
        omega_dual,
        orientation,
    }
}

/// Raises the spatial index of `G` with `g_dual` and lowers both spinor
/// indices with `d` and `dbar`.
pub fn inverse_ivdw<S: Scalar>(
    ivdw: &SpinTensor<S>,
    g_dual: &SpinTensor<S>,
    d: &SpinTensor<S>,
    dbar: &SpinTensor<S>,
) -> Result<SpinTensor<S>, TensorError> {
    if ivdw.signature() != ivdw_signature() {
        return Err(TensorError::Signature(
            "Infeld-van der Waerden field must be (spatial-down, spinor-up, conj-spinor-up)".into(),
        ));
    }
    let t = raise_lower(ivdw, 0, g_dual)?;
    let t = raise_lower(&t, 1, d)?;
    raise_lower(&t, 2, dbar)
}

/// Determinant of a 4×4 spatial two-tensor by the Leibniz expansion.
pub fn determinant4<S: Scalar>(m: &SpinTensor<S>) -> S {
    let mut det = S::zero();
    for p in index_tuples(&[IndexKind::SPATIAL_DOWN; 4]) {
        let eps = levi_civita(p[0], p[1], p[2], p[3]).expect("spatial range");
        if eps == 0 {
            continue;
        }
        let mut term = S::from_i64(eps as i64);
        for (row, &col) in p.iter().enumerate() {
            term = term * m.get(&[row, col]).clone();
        }
        det = det + term;
    }
    det
}

/// Volume tensor and its dual from the metric and its inverse.
///
/// `omega_prqs = ±sqrt(-det g) ε_prqs` and
/// `omega^ambn = ∓sqrt(-det g^) ε^ambn`, upper signs for right frames.
pub fn volume_tensor<S: Scalar>(
    g: &SpinTensor<S>,
    g_dual: &SpinTensor<S>,
    orientation: Orientation,
) -> Result<(SpinTensor<S>, SpinTensor<S>), EquipmentError> {
    if g.signature() != [IndexKind::SPATIAL_DOWN; 2] || g_dual.signature() != [IndexKind::SPATIAL_UP; 2] {
        return Err(TensorError::Signature("volume tensor needs g (down, down) and g^ (up, up)".into()).into());
    }
    let root = |m: &SpinTensor<S>| {
        (-determinant4(m)).sqrt_positive_real().map_err(|e| match e {
            ScalarError::NotPositiveReal(v) => EquipmentError::SignatureViolation(v),
            ScalarError::NotPerfectSquare(v) => EquipmentError::Representation(v),
        })
    };
    let sign: S = orientation.sign();
    let lower = sign.clone() * root(g)?;
    let upper = -(sign * root(g_dual)?);
    let eps = |i: &[usize]| S::from_i64(levi_civita(i[0], i[1], i[2], i[3]).expect("spatial range") as i64);
    let omega = SpinTensor::from_fn(vec![IndexKind::SPATIAL_DOWN; 4], |i| lower.clone() * eps(i));
    let omega_dual = SpinTensor::from_fn(vec![IndexKind::SPATIAL_UP; 4], |i| upper.clone() * eps(i));
    Ok((omega, omega_dual))
}

/// 2×2 matrix with 1-based indices stored as `m[row - 1][col - 1]`.
pub type SpinMatrix<S> = [[S; 2]; 2];

pub fn spin_matrix_inverse<S: Scalar>(s: &SpinMatrix<S>) -> Option<SpinMatrix<S>> {
    let [[a, b], [c, d]] = s.clone();
    let det = a.clone() * d.clone() - b.clone() * c.clone();
    let inv = det.inv()?;
    Some([
        [d * inv.clone(), -b * inv.clone()],
        [-c * inv.clone(), a * inv],
    ])
}

/// Applies a spinor-frame change to every spinor and conjugate-spinor slot.
///
/// `s[a][i]` is the component `S^a_i` expressing the new frame through the
/// old one: lower spinor indices transform with `S`, upper ones with `S⁻¹`,
/// and conjugate-spinor indices with the conjugate matrices.
pub fn transform_spinor_slots<S: Scalar>(
    t: &SpinTensor<S>,
    s: &SpinMatrix<S>,
    s_inv: &SpinMatrix<S>,
) -> SpinTensor<S> {
    use crate::tensor::{IndexFamily::*, Variance::*};
    let mut out = t.clone();
    for (slot, kind) in t.signature().iter().enumerate() {
        out = match (kind.family, kind.variance) {
            (Spatial, _) => continue,
            (Spinor, Lower) => out.mix_slot(slot, |a, i| s[a - 1][i - 1].clone()),
            (Spinor, Upper) => out.mix_slot(slot, |a, i| s_inv[i - 1][a - 1].clone()),
            (ConjugateSpinor, Lower) => out.mix_slot(slot, |a, i| s[a - 1][i - 1].conj()),
            (ConjugateSpinor, Upper) => out.mix_slot(slot, |a, i| s_inv[i - 1][a - 1].conj()),
        };
    }
    out
}

impl<S: Scalar> Equipment<S> {
    /// Components of the same equipment in the spinor frame obtained through
    /// `s`. The spatial frame, and with it `g` and `omega`, is unchanged.
    pub fn spin_transformed(&self, s: &SpinMatrix<S>) -> Result<Self, EquipmentError> {
        let s_inv = spin_matrix_inverse(s).ok_or(EquipmentError::SingularTransform)?;
        let tr = |t: &SpinTensor<S>| transform_spinor_slots(t, s, &s_inv);
        Ok(Self {
            g: self.g.clone(),
            g_dual: self.g_dual.clone(),
            d: tr(&self.d),
            d_dual: tr(&self.d_dual),
            dbar: tr(&self.dbar),
            dbar_dual: tr(&self.dbar_dual),
            ivdw: tr(&self.ivdw),
            ivdw_inverse: tr(&self.ivdw_inverse),
            omega: self.omega.clone(),
            omega_dual: self.omega_dual.clone(),
            orientation: self.orientation,
        })
    }

    /// Components in the spatial frame with `Υ_axis` replaced by `-Υ_axis`.
    ///
    /// This is an orientation-reversing frame change: every spatial slot
    /// valued at `axis` picks up a sign, so `omega` flips and the orientation
    /// flag flips with it while `G` changes in its `axis` slice.
    pub fn reflect_spatial_axis(&self, axis: usize) -> Self {
        let flip = |t: &SpinTensor<S>| {
            let spatial: Vec<usize> = t
                .signature()
                .iter()
                .enumerate()
                .filter(|(_, k)| k.family == crate::tensor::IndexFamily::Spatial)
                .map(|(s, _)| s)
                .collect();
            SpinTensor::from_fn(t.signature().to_vec(), |idx| {
                let hits = spatial.iter().filter(|&&s| idx[s] == axis).count();
                let v = t.get(idx).clone();
                if hits % 2 == 1 {
                    -v
                } else {
                    v
                }
            })
        };
        Self {
            g: flip(&self.g),
            g_dual: flip(&self.g_dual),
            d: self.d.clone(),
            d_dual: self.d_dual.clone(),
            dbar: self.dbar.clone(),
            dbar_dual: self.dbar_dual.clone(),
            ivdw: flip(&self.ivdw),
            ivdw_inverse: flip(&self.ivdw_inverse),
            omega: flip(&self.omega),
            omega_dual: flip(&self.omega_dual),
            orientation: self.orientation.flipped(),
        }
    }

    /// Copy with `G^{r rbar}_p` negated; other components untouched.
    pub fn with_negated_ivdw_entry(&self, p: usize, r: usize, rbar: usize) -> Result<Self, TensorError> {
        let v = self.ivdw.try_get(&[p, r, rbar])?.clone();
        Ok(Self {
            ivdw: self.ivdw.with_entry(&[p, r, rbar], -v)?,
            ..self.clone()
        })
    }
}

/// Slice `G_p` (or `G^q` of the inverse) as a 2×2 matrix.
pub fn ivdw_slice<S: Scalar>(t: &SpinTensor<S>, spatial: usize) -> SpinMatrix<S> {
    let e = |r, c| t.get(&[spatial, r, c]).clone();
    [[e(1, 1), e(1, 2)], [e(2, 1), e(2, 2)]]
}
