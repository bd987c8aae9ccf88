//! Spectra of `AD = -A d²/dx²` on `(0,1)` acting on pairs `(φ, γ)` with
//! `φ(0) = φ(1) = 0` and `γ'(0) = γ'(1) = 0`, for a complex 2×2 matrix `A`.
//!
//! The eigenvalues are the squares of the zeros of an entire secular
//! function (see [`secular`]); [`rootfind`] locates those zeros by the
//! argument principle, [`chebpath`] reduces them to polynomial roots on the
//! curves where the ratio of eigenvalues of `A` is a rational square, and
//! [`oracle`] is an independent finite-difference check.

pub mod canonical;
pub mod chebpath;
pub mod cli;
pub mod error;
pub mod mat2;
pub mod oracle;
pub mod rootfind;
pub mod secular;
pub mod sweep;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Shorthand for building a complex number.
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
