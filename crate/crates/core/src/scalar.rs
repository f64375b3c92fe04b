//! Scalar fields used as tensor entries.
//!
//! Two realizations share the [`Scalar`] interface: [`GaussianRational`] is an
//! exact complex number with rational parts and decidable equality, while
//! [`ComplexFloat`] is a double-precision complex number that deliberately
//! does not implement `PartialEq`; every float comparison must name its
//! tolerance through [`Scalar::approx_eq`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

/// Which arithmetic backs a scalar type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Realization {
    Exact,
    Float,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("value {0} is not a positive real number")]
    NotPositiveReal(String),
    #[error("value {0} has no exact rational square root")]
    NotPerfectSquare(String),
}

/// A commutative field with complex conjugation.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    const REALIZATION: Realization;

    fn zero() -> Self;
    fn one() -> Self;
    fn imag_unit() -> Self;
    /// The rational number `num / den`. Panics if `den == 0`.
    fn from_ratio(num: i64, den: i64) -> Self;
    fn conj(&self) -> Self;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;
    /// Exact test for the additive identity.
    fn is_zero(&self) -> bool;
    /// Equality up to `tol` in the complex modulus. The exact realization
    /// ignores `tol` and compares exactly.
    fn approx_eq(&self, other: &Self, tol: f64) -> bool;
    fn to_complex64(&self) -> Complex64;
    /// Principal square root of a positive real value.
    fn sqrt_positive_real(&self) -> Result<Self, ScalarError>;

    fn from_i64(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }

    fn distance(&self, other: &Self) -> f64 {
        (self.to_complex64() - other.to_complex64()).norm()
    }
}

/// Complex number with rational real and imaginary parts.
///
/// Parts are kept as reduced fractions with positive denominators, so
/// structural equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    re: BigRational,
    im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    /// `(re_num/re_den) + i (im_num/im_den)`.
    pub fn from_parts(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Self {
        Self {
            re: BigRational::new(re_num.into(), re_den.into()),
            im: BigRational::new(im_num.into(), im_den.into()),
        }
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }
}

fn rational_to_f64(q: &BigRational) -> f64 {
    // BigRational::to_f64 rounds correctly for the magnitudes we meet
    q.to_f64().unwrap_or_else(|| {
        q.numer().to_f64().unwrap_or(f64::NAN) / q.denom().to_f64().unwrap_or(f64::NAN)
    })
}

fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let root = n.sqrt();
    (&root * &root == *n).then_some(root)
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write_imag(f, &self.im, false),
            (false, false) => {
                write!(f, "{}", self.re)?;
                write_imag(f, &self.im, true)
            }
        }
    }
}

fn write_imag(f: &mut fmt::Formatter<'_>, im: &BigRational, with_sign: bool) -> fmt::Result {
    let neg = im.is_negative();
    let mag = im.abs();
    let sign = match (neg, with_sign) {
        (true, _) => "-",
        (false, true) => "+",
        (false, false) => "",
    };
    if mag.is_one() {
        write!(f, "{sign}i")
    } else {
        write!(f, "{sign}{mag}i")
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GaussianRational({self})")
    }
}

impl Serialize for GaussianRational {
    fn serialize<Ser: Serializer>(&self, serializer: Ser) -> Result<Ser::Ok, Ser::Error> {
        serializer.collect_str(self)
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl Sub for GaussianRational {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl Mul for GaussianRational {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Scalar for GaussianRational {
    const REALIZATION: Realization = Realization::Exact;

    fn zero() -> Self {
        Self {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }

    fn one() -> Self {
        Self {
            re: BigRational::one(),
            im: BigRational::zero(),
        }
    }

    fn imag_unit() -> Self {
        Self {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Self {
            re: BigRational::new(num.into(), den.into()),
            im: BigRational::zero(),
        }
    }

    fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Self {
            re: &self.re / &n,
            im: -(&self.im / &n),
        })
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn approx_eq(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }

    fn to_complex64(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }

    fn sqrt_positive_real(&self) -> Result<Self, ScalarError> {
        if !self.is_real() || !self.re.is_positive() {
            return Err(ScalarError::NotPositiveReal(self.to_string()));
        }
        let num = exact_sqrt(self.re.numer());
        let den = exact_sqrt(self.re.denom());
        match (num, den) {
            (Some(n), Some(d)) => Ok(Self {
                re: BigRational::new(n, d),
                im: BigRational::zero(),
            }),
            _ => Err(ScalarError::NotPerfectSquare(self.to_string())),
        }
    }
}

/// Double-precision complex scalar.
#[derive(Clone, Copy, Debug, Default)]
pub struct ComplexFloat(pub Complex64);

impl ComplexFloat {
    pub const fn new(re: f64, im: f64) -> Self {
        Self(Complex64::new(re, im))
    }
}

impl From<Complex64> for ComplexFloat {
    fn from(z: Complex64) -> Self {
        Self(z)
    }
}

impl fmt::Display for ComplexFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for ComplexFloat {
    fn serialize<Ser: Serializer>(&self, serializer: Ser) -> Result<Ser::Ok, Ser::Error> {
        [self.0.re, self.0.im].serialize(serializer)
    }
}

impl Add for ComplexFloat {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self(self.0 + rhs.0)
    }
}

impl Sub for ComplexFloat {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self(self.0 - rhs.0)
    }
}

impl Mul for ComplexFloat {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self(self.0 * rhs.0)
    }
}

impl Neg for ComplexFloat {
    type Output = Self;
    fn neg(self) -> Self {
        Self(-self.0)
    }
}

impl Scalar for ComplexFloat {
    const REALIZATION: Realization = Realization::Float;

    fn zero() -> Self {
        Self::new(0.0, 0.0)
    }

    fn one() -> Self {
        Self::new(1.0, 0.0)
    }

    fn imag_unit() -> Self {
        Self::new(0.0, 1.0)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::new(num as f64 / den as f64, 0.0)
    }

    fn conj(&self) -> Self {
        Self(self.0.conj())
    }

    fn inv(&self) -> Option<Self> {
        (!self.is_zero()).then(|| Self(self.0.inv()))
    }

    fn is_zero(&self) -> bool {
        self.0.re == 0.0 && self.0.im == 0.0
    }

    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self.0 - other.0).norm() <= tol
    }

    fn to_complex64(&self) -> Complex64 {
        self.0
    }

    /// The imaginary part must be exactly zero; values produced from real
    /// metric components satisfy this.
    fn sqrt_positive_real(&self) -> Result<Self, ScalarError> {
        if self.0.im != 0.0 || self.0.re <= 0.0 || !self.0.re.is_finite() {
            return Err(ScalarError::NotPositiveReal(self.to_string()));
        }
        Ok(Self::new(self.0.re.sqrt(), 0.0))
    }
}
