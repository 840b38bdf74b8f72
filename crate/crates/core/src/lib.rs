//! Certified computational replay of the classification of sums of two
//! Fibonacci numbers close to a power of two:
//!
//! ```text
//! |F_n + F_m - 2^a| < 2^(a/2),   n >= m >= 1, a >= 1
//! ```
//!
//! has exactly 52 solutions, all with `n <= 42` and `a <= 28`.
//!
//! The crate is organized along the proof:
//!
//! * [`recurrences`] exact Fibonacci/Lucas numbers and the "close to" predicate;
//! * [`reals`] dyadic interval arithmetic and the certified constants;
//! * [`cfrac`] certified continued fractions and the Legendre criterion;
//! * [`linear_forms`] heights, Matveev's bound and the global bounds on `a`, `n`;
//! * [`reduction`] the Baker–Davenport reduction rounds and degenerate gaps;
//! * [`search`] exact enumeration at desk scale;
//! * [`certificate`] and [`prove`] the pipeline and its machine-checkable record.
//!
//! The guide under `book/` walks through each step; its code samples are
//! compiled as doctests of this crate.

pub mod certificate;
pub mod cfrac;
pub mod error;
pub mod linear_forms;
pub mod prove;
pub mod reals;
pub mod recurrences;
pub mod reduction;
pub mod search;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/recurrences.md")]
    mod recurrences {}
    #[doc = include_str!("../../../book/src/certified-reals.md")]
    mod certified_reals {}
    #[doc = include_str!("../../../book/src/continued-fractions.md")]
    mod continued_fractions {}
    #[doc = include_str!("../../../book/src/linear-forms.md")]
    mod linear_forms {}
    #[doc = include_str!("../../../book/src/reduction.md")]
    mod reduction {}
    #[doc = include_str!("../../../book/src/search.md")]
    mod search {}
    #[doc = include_str!("../../../book/src/certificates.md")]
    mod certificates {}
}
