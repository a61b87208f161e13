//! Exact linear forms in zeta values.
//!
//! A form `P(x1..xn) / (1 - x1*...*xn)^N dx1...dxn` over the unit cube
//! integrates to `a0 + a2 zeta(2) + ... + an zeta(n)` with rational `ak`.
//! This crate computes those coefficients exactly by mapping the form to a
//! rational function of the summation index `k` and reducing modulo forward
//! differences. Independent cross-checks (a residue formula for `an`,
//! certified interval numerics, Eulerian combinatorics and the graded period
//! matrices) live alongside.

pub mod error;
pub mod exactalg;
pub mod forms;
pub mod golden;
pub mod numeric;
pub mod periods;
pub mod series_space;
pub mod zeta_coeffs;

pub use error::{Error, Result};
pub use exactalg::{MultiLaurent, Rational, UniPoly, UniPolyK};
pub use forms::{PartialForm, TauSymmetry, ZetaIntegrand};
pub use numeric::{DecimalInterval, VerificationReport};
pub use periods::{GradedMatrix, RationalMatrix};
pub use series_space::{BetaVector, VElement};
pub use zeta_coeffs::{GradedScalar, HypergeometricParams, ZetaCoefficients};
