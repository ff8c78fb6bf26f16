//! Numerical study of the integral `F(s) = ∫_0^∞ t^{s-1}/(e^t+1) dt` on the
//! critical strip: exact kernel coefficients, singular and oscillatory
//! quadrature, the lower-range power series, the pairing decomposition of the
//! upper range, checks of the associated identities and inequalities, and a
//! zero locator on the critical line.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coeffs;
pub mod decomposition;
pub mod error;
pub mod quadrature;
pub mod report;
pub mod series;
pub mod special;
pub mod zerofinder;

pub use error::{Error, Result};
pub use report::{Check, VerificationReport};
