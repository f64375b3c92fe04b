//! Dense spin-tensors with a typed index signature.
//!
//! Spatial indices run over `0..=3`, spinor and conjugate-spinor indices over
//! `1..=2`. Index tuples passed to [`SpinTensor::get`] use these values
//! directly. Entries are stored row-major over the signature in the order
//! listed.

use std::fmt;
use std::ops::RangeInclusive;

use serde::Serialize;
use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IndexFamily {
    Spatial,
    Spinor,
    ConjugateSpinor,
}

impl IndexFamily {
    pub const fn dim(self) -> usize {
        match self {
            IndexFamily::Spatial => 4,
            IndexFamily::Spinor | IndexFamily::ConjugateSpinor => 2,
        }
    }

    /// First index value of the family.
    pub const fn base(self) -> usize {
        match self {
            IndexFamily::Spatial => 0,
            IndexFamily::Spinor | IndexFamily::ConjugateSpinor => 1,
        }
    }

    pub const fn range(self) -> RangeInclusive<usize> {
        self.base()..=self.base() + self.dim() - 1
    }

    /// Spinor and conjugate-spinor trade places; spatial is fixed.
    pub const fn conjugate(self) -> Self {
        match self {
            IndexFamily::Spatial => IndexFamily::Spatial,
            IndexFamily::Spinor => IndexFamily::ConjugateSpinor,
            IndexFamily::ConjugateSpinor => IndexFamily::Spinor,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variance {
    Upper,
    Lower,
}

impl Variance {
    pub const fn flipped(self) -> Self {
        match self {
            Variance::Upper => Variance::Lower,
            Variance::Lower => Variance::Upper,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct IndexKind {
    pub family: IndexFamily,
    pub variance: Variance,
}

impl IndexKind {
    pub const fn new(family: IndexFamily, variance: Variance) -> Self {
        Self { family, variance }
    }

    pub const SPATIAL_UP: Self = Self::new(IndexFamily::Spatial, Variance::Upper);
    pub const SPATIAL_DOWN: Self = Self::new(IndexFamily::Spatial, Variance::Lower);
    pub const SPINOR_UP: Self = Self::new(IndexFamily::Spinor, Variance::Upper);
    pub const SPINOR_DOWN: Self = Self::new(IndexFamily::Spinor, Variance::Lower);
    pub const CONJ_UP: Self = Self::new(IndexFamily::ConjugateSpinor, Variance::Upper);
    pub const CONJ_DOWN: Self = Self::new(IndexFamily::ConjugateSpinor, Variance::Lower);

    pub const fn dim(self) -> usize {
        self.family.dim()
    }

    pub const fn range(self) -> RangeInclusive<usize> {
        self.family.range()
    }
}

impl fmt::Display for IndexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fam = match self.family {
            IndexFamily::Spatial => "spatial",
            IndexFamily::Spinor => "spinor",
            IndexFamily::ConjugateSpinor => "conj-spinor",
        };
        let var = match self.variance {
            Variance::Upper => "up",
            Variance::Lower => "down",
        };
        write!(f, "{fam}-{var}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TensorError {
    #[error("index {value} out of range {range:?} for {kind}")]
    IndexOutOfRange {
        value: usize,
        range: RangeInclusive<usize>,
        kind: IndexKind,
    },
    #[error("expected {expected} indices, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("cannot pair slot {a_slot} ({a_kind}) with slot {b_slot} ({b_kind})")]
    PairMismatch {
        a_slot: usize,
        a_kind: IndexKind,
        b_slot: usize,
        b_kind: IndexKind,
    },
    #[error("slot {slot} appears in more than one pair")]
    RepeatedSlot { slot: usize },
    #[error("signature mismatch: {0}")]
    Signature(String),
    #[error("matrix is singular")]
    Singular,
}

/// Iterates over all index tuples of a signature in row-major order.
pub fn index_tuples(signature: &[IndexKind]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let total: usize = signature.iter().map(|k| k.dim()).product();
    (0..total).map(move |mut flat| {
        let mut tuple = vec![0; signature.len()];
        for (slot, kind) in signature.iter().enumerate().rev() {
            tuple[slot] = kind.family.base() + flat % kind.dim();
            flat /= kind.dim();
        }
        tuple
    })
}

/// Dense multi-indexed array of scalars.
#[derive(Clone)]
pub struct SpinTensor<S> {
    signature: Vec<IndexKind>,
    entries: Vec<S>,
}

impl<S: Scalar> SpinTensor<S> {
    pub fn from_fn(signature: Vec<IndexKind>, mut f: impl FnMut(&[usize]) -> S) -> Self {
        let entries = index_tuples(&signature).map(|idx| f(&idx)).collect();
        Self { signature, entries }
    }

    pub fn zeros(signature: Vec<IndexKind>) -> Self {
        Self::from_fn(signature, |_| S::zero())
    }

    /// Builds a tensor from entries already in storage order.
    pub fn from_entries(signature: Vec<IndexKind>, entries: Vec<S>) -> Result<Self, TensorError> {
        let expected: usize = signature.iter().map(|k| k.dim()).product();
        if entries.len() != expected {
            return Err(TensorError::Signature(format!(
                "{} entries supplied, signature needs {expected}",
                entries.len()
            )));
        }
        Ok(Self { signature, entries })
    }

    pub fn signature(&self) -> &[IndexKind] {
        &self.signature
    }

    pub fn rank(&self) -> usize {
        self.signature.len()
    }

    pub fn entries(&self) -> &[S] {
        &self.entries
    }

    fn offset(&self, index: &[usize]) -> Result<usize, TensorError> {
        if index.len() != self.signature.len() {
            return Err(TensorError::RankMismatch {
                expected: self.signature.len(),
                got: index.len(),
            });
        }
        let mut off = 0;
        for (&value, &kind) in index.iter().zip(&self.signature) {
            if !kind.range().contains(&value) {
                return Err(TensorError::IndexOutOfRange {
                    value,
                    range: kind.range(),
                    kind,
                });
            }
            off = off * kind.dim() + (value - kind.family.base());
        }
        Ok(off)
    }

    pub fn try_get(&self, index: &[usize]) -> Result<&S, TensorError> {
        self.offset(index).map(|off| &self.entries[off])
    }

    /// Entry at `index`. Panics on a malformed index; use [`Self::try_get`]
    /// for untrusted input.
    pub fn get(&self, index: &[usize]) -> &S {
        match self.try_get(index) {
            Ok(v) => v,
            Err(e) => panic!("{e}"),
        }
    }

    /// Copy with one entry replaced.
    pub fn with_entry(&self, index: &[usize], value: S) -> Result<Self, TensorError> {
        let off = self.offset(index)?;
        let mut out = self.clone();
        out.entries[off] = value;
        Ok(out)
    }

    pub fn map(&self, f: impl Fn(&S) -> S) -> Self {
        Self {
            signature: self.signature.clone(),
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, factor: &S) -> Self {
        self.map(|x| x.clone() * factor.clone())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, TensorError> {
        self.zip_with(other, |a, b| a.clone() + b.clone())
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, TensorError> {
        self.zip_with(other, |a, b| a.clone() - b.clone())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&S, &S) -> S) -> Result<Self, TensorError> {
        if self.signature != other.signature {
            return Err(TensorError::Signature(format!(
                "[{}] vs [{}]",
                fmt_signature(&self.signature),
                fmt_signature(&other.signature)
            )));
        }
        Ok(Self {
            signature: self.signature.clone(),
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    /// Entry-wise comparison through [`Scalar::approx_eq`]. Signatures must
    /// match exactly.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.signature == other.signature
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(a, b)| a.approx_eq(b, tol))
    }

    pub fn max_distance(&self, other: &Self) -> Result<f64, TensorError> {
        self.zip_with(other, |a, b| a.clone() - b.clone())
            .map(|d| d.entries.iter().map(|x| x.to_complex64().norm()).fold(0.0, f64::max))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    /// Replaces the index at `slot` by a linear combination of its values:
    /// `out[.., i, ..] = Σ_a coeff(a, i) · self[.., a, ..]`. The slot keeps
    /// its kind. Used for frame changes.
    pub fn mix_slot(&self, slot: usize, coeff: impl Fn(usize, usize) -> S) -> Self {
        let kind = self.signature[slot];
        Self::from_fn(self.signature.clone(), |idx| {
            let mut src = idx.to_vec();
            let mut acc = S::zero();
            for a in kind.range() {
                src[slot] = a;
                let c = coeff(a, idx[slot]);
                if !c.is_zero() {
                    acc = acc + c * self.get(&src).clone();
                }
            }
            acc
        })
    }
}

impl<S: fmt::Debug> fmt::Debug for SpinTensor<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpinTensor")
            .field("signature", &fmt_signature(&self.signature))
            .field("entries", &self.entries)
            .finish()
    }
}

fn fmt_signature(sig: &[IndexKind]) -> String {
    sig.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

/// Levi-Civita symbol of the sequence `(a, m, b, n)`: zero on a repeat,
/// otherwise the parity of the permutation of `(0, 1, 2, 3)`. Upper and lower
/// positions share the same values.
pub fn levi_civita(a: usize, m: usize, b: usize, n: usize) -> Result<i8, TensorError> {
    let seq = [a, m, b, n];
    for &v in &seq {
        if v > 3 {
            return Err(TensorError::IndexOutOfRange {
                value: v,
                range: 0..=3,
                kind: IndexKind::SPATIAL_DOWN,
            });
        }
    }
    let mut inversions = 0;
    for i in 0..4 {
        for j in i + 1..4 {
            if seq[i] == seq[j] {
                return Ok(0);
            }
            if seq[i] > seq[j] {
                inversions += 1;
            }
        }
    }
    Ok(if inversions % 2 == 0 { 1 } else { -1 })
}

/// Contracts `a` with `b` over the given `(slot_in_a, slot_in_b)` pairs.
///
/// Each pair must join an upper and a lower slot of the same family. The
/// result carries the unpaired slots of `a` followed by those of `b`.
pub fn contract<S: Scalar>(
    a: &SpinTensor<S>,
    b: &SpinTensor<S>,
    pairs: &[(usize, usize)],
) -> Result<SpinTensor<S>, TensorError> {
    let mut seen_a = vec![false; a.rank()];
    let mut seen_b = vec![false; b.rank()];
    for &(sa, sb) in pairs {
        let ka = *a.signature.get(sa).ok_or(TensorError::RankMismatch {
            expected: a.rank(),
            got: sa + 1,
        })?;
        let kb = *b.signature.get(sb).ok_or(TensorError::RankMismatch {
            expected: b.rank(),
            got: sb + 1,
        })?;
        if ka.family != kb.family || ka.variance == kb.variance {
            return Err(TensorError::PairMismatch {
                a_slot: sa,
                a_kind: ka,
                b_slot: sb,
                b_kind: kb,
            });
        }
        if std::mem::replace(&mut seen_a[sa], true) {
            return Err(TensorError::RepeatedSlot { slot: sa });
        }
        if std::mem::replace(&mut seen_b[sb], true) {
            return Err(TensorError::RepeatedSlot { slot: sb });
        }
    }
    contract_unchecked(a, b, pairs, &seen_a, &seen_b)
}

fn contract_unchecked<S: Scalar>(
    a: &SpinTensor<S>,
    b: &SpinTensor<S>,
    pairs: &[(usize, usize)],
    paired_a: &[bool],
    paired_b: &[bool],
) -> Result<SpinTensor<S>, TensorError> {
    let free_a: Vec<usize> = (0..a.rank()).filter(|&s| !paired_a[s]).collect();
    let free_b: Vec<usize> = (0..b.rank()).filter(|&s| !paired_b[s]).collect();
    let signature: Vec<IndexKind> = free_a
        .iter()
        .map(|&s| a.signature[s])
        .chain(free_b.iter().map(|&s| b.signature[s]))
        .collect();
    let summed: Vec<IndexKind> = pairs.iter().map(|&(sa, _)| a.signature[sa]).collect();

    let mut ia = vec![0; a.rank()];
    let mut ib = vec![0; b.rank()];
    Ok(SpinTensor::from_fn(signature, |idx| {
        for (k, &s) in free_a.iter().enumerate() {
            ia[s] = idx[k];
        }
        for (k, &s) in free_b.iter().enumerate() {
            ib[s] = idx[free_a.len() + k];
        }
        let mut acc = S::zero();
        for inner in index_tuples(&summed) {
            for (&(sa, sb), &v) in pairs.iter().zip(&inner) {
                ia[sa] = v;
                ib[sb] = v;
            }
            let x = a.get(&ia);
            let y = b.get(&ib);
            if !x.is_zero() && !y.is_zero() {
                acc = acc + x.clone() * y.clone();
            }
        }
        acc
    }))
}

/// Flips the variance of `slot` by contracting it with a two-index metric.
///
/// The slot contracts with the metric's first index (`t_s = Σ_r t^r m_rs`
/// when lowering, `t^q = Σ_k t_k m^kq` when raising), so raising and then
/// lowering with mutually inverse metrics is the identity even for the skew
/// spinor metric. The slot keeps its position.
pub fn raise_lower<S: Scalar>(
    t: &SpinTensor<S>,
    slot: usize,
    metric: &SpinTensor<S>,
) -> Result<SpinTensor<S>, TensorError> {
    let kind = *t.signature.get(slot).ok_or(TensorError::RankMismatch {
        expected: t.rank(),
        got: slot + 1,
    })?;
    let target = IndexKind::new(kind.family, kind.variance.flipped());
    if metric.signature != [target, target] {
        return Err(TensorError::Signature(format!(
            "slot {slot} is {kind}; metric [{}] must be two {target} indices",
            fmt_signature(&metric.signature)
        )));
    }
    let mut signature = t.signature.clone();
    signature[slot] = target;
    let mut src = vec![0; t.rank()];
    Ok(SpinTensor::from_fn(signature, |idx| {
        src.copy_from_slice(idx);
        let mut acc = S::zero();
        for r in kind.range() {
            src[slot] = r;
            let m = metric.get(&[r, idx[slot]]);
            let x = t.get(&src);
            if !m.is_zero() && !x.is_zero() {
                acc = acc + x.clone() * m.clone();
            }
        }
        acc
    }))
}

/// Complex conjugate: entries conjugated, spinor and conjugate-spinor slots
/// exchanged, spatial slots untouched.
pub fn conjugate<S: Scalar>(t: &SpinTensor<S>) -> SpinTensor<S> {
    SpinTensor {
        signature: t
            .signature
            .iter()
            .map(|k| IndexKind::new(k.family.conjugate(), k.variance))
            .collect(),
        entries: t.entries.iter().map(Scalar::conj).collect(),
    }
}

/// Reorders slots: slot `k` of the result is slot `order[k]` of `t`.
pub fn permute_slots<S: Scalar>(
    t: &SpinTensor<S>,
    order: &[usize],
) -> Result<SpinTensor<S>, TensorError> {
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != (0..t.rank()).collect::<Vec<_>>() {
        return Err(TensorError::Signature(format!(
            "{order:?} is not a permutation of {} slots",
            t.rank()
        )));
    }
    let signature = order.iter().map(|&s| t.signature[s]).collect();
    let mut src = vec![0; t.rank()];
    Ok(SpinTensor::from_fn(signature, |idx| {
        for (k, &s) in order.iter().enumerate() {
            src[s] = idx[k];
        }
        t.get(&src).clone()
    }))
}
