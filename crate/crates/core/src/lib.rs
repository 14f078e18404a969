//! Polynomial spectral factorization of Laurent polynomial matrices that are
//! positive definite on the unit circle.
//!
//! [`bauer::bauer_factor`] computes the optimal factor `S_+` with
//! `S_+ S_+~ = S` and no determinant zeros in the unit disk. Every other
//! polynomial factor is reached from it by moving determinant zeros across
//! the circle ([`flip::flip_zero`]); [`factorize::Factorizer`] does this for a
//! prescribed determinant or for all `2^L` choices at once.

pub mod bauer;
pub mod error;
pub mod factorize;
pub mod flip;
pub mod json;
pub mod linalg;
pub mod matrix;
pub mod poly;
pub mod random;
pub mod roots;
pub mod scalar;
pub mod verify;
pub mod wavelet;

pub use bauer::{bauer_factor, BauerConfig};
pub use error::{Error, ErrorClass, Result};
pub use factorize::{enumerate_matrix_factors, factor_with_determinant, FactorConfig, Factorizer};
pub use flip::{equal_up_to_unitary, flip_zero, FlipConfig};
pub use matrix::{CMat, LaurentMatrix, PolyMatrix};
pub use num_complex::Complex64;
pub use poly::{LaurentPoly, Poly};
pub use roots::RootConfig;
pub use scalar::FactorSelection;
