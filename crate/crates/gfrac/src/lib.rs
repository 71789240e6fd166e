//! g-fractions, Schur fractions and their perturbation theories.
//!
//! The crate is organised bottom-up:
//!
//! * [`core_math`]: complex polynomials, rational functions, roots, formal power series.
//! * [`cf`]: a generic continued-fraction engine (Wallis recurrence, tails, limits).
//! * [`gfraction`]: g-fractions built from parameter sequences and the gap formulas.
//! * [`schur`]: Schur fractions, transfer-matrix perturbation, the gamma sequence.
//! * [`hypergeom`]: Gauss 2F1 series and the catalog of ratio identities.
//! * [`pick`]: Hausdorff moment and half-plane positivity certificates.

pub mod cf;
pub mod core_math;
mod error;
pub mod gfraction;
pub mod hypergeom;
pub mod pick;
pub mod schur;

pub use core_math::{complex, Complex, ComplexPoly, RationalFn};
pub use error::{Error, Result};
