//! Spin-tensor algebra for the basic equipment of the Weyl spinor bundle.
//!
//! The crate has two halves. The exact half builds the canonical equipment
//! (Minkowski metric, symplectic spinor metric, Pauli-matrix
//! Infeld-van der Waerden field) over Gaussian rationals and enumerates the
//! algebraic identities relating them. The field half parses component
//! expressions over a coordinate chart, differentiates them symbolically, and
//! evaluates the metric connection and its spinor components in
//! non-holonomic frames, reporting every concordance condition as a residual.

pub mod equipment;
pub mod expr;
pub mod frames;
pub mod identities;
pub mod scalar;
pub mod spinor;
pub mod tensor;

#[cfg(test)]
mod testing;

pub use equipment::{canonical_equipment, Equipment, Orientation};
pub use expr::{parse_expr, Expr, Point};
pub use frames::{christoffel, DerivativeMode, FieldError, FrameField, MetricField, Residual};
pub use identities::{check_aux_contractions, check_cubic, check_derived, check_hermiticity, check_quadratic, IdentityReport};
pub use spinor::{spinor_connection, EquipmentField};
pub use scalar::{ComplexFloat, GaussianRational, Realization, Scalar};
pub use tensor::{contract, conjugate, levi_civita, raise_lower, IndexFamily, IndexKind, SpinTensor, Variance};
