//! Covariant generalized operator measures on `[0, 2π)`.
//!
//! A structure matrix `C = (c_nm)` over ℤ × ℤ determines the measure
//! `G^C(X) = C ∗ i(X)`, where `i(X)` is the Toeplitz matrix of Fourier
//! coefficients of the indicator of `X`. Everything here works on finite
//! symmetric windows `[-N, N]` of these infinite objects.

pub mod borel;
pub mod diagnostics;
pub mod error;
pub mod gom;
pub mod io;
pub mod matrix;
pub mod moments;
pub mod reconstruct;
pub mod spectral;
pub mod structure;
pub mod vector;

pub use borel::{interval_matrix, BorelSet};
pub use diagnostics::{ExtensibilityReport, NormReport, Quantity, Verdict};
pub use error::{Error, Result};
pub use gom::{StepFunction, TrigPolynomial};
pub use matrix::{conjugate_by_phase, is_psd, pq_norm, schur_product, PNorm, WindowMatrix};
pub use moments::MomentCoefficientTable;
pub use num_complex::Complex64;
pub use spectral::operator_norm;
pub use structure::{FamilyTag, StructureMatrix};
pub use vector::{vector_p_norm, FiniteVector, GeneralizedVector, Membership};
