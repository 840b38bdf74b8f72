//! Certified real arithmetic: dyadic intervals with outward rounding and
//! the constants of the golden-ratio field.
//!
//! All transcendental quantities used by the proof replay (`sqrt 5`,
//! `alpha`, `log 2`, `log alpha`, `log sqrt 5`, `gamma = log 2 / log alpha`
//! and `phi(t)`) are computed here and nowhere else.

mod constants;
mod dyadic;
mod interval;

pub use constants::{constant, phi, CertifiedConstant, Constant, PrecisionPolicy};
pub use dyadic::{Dyadic, Rounding};
pub use interval::Interval;
