//! Fundamental functions of constant-coefficient linear differential
//! operators `L = ∏ (d/dx − λⱼ)` and the inequalities they satisfy.
//!
//! * [`frequencies`]: the frequency vector, its structural predicates and
//!   the Taylor coefficients of `Φ` at the origin.
//! * [`fundamental`]: evaluation of `Φ^{(m)}(x)` plus two independent
//!   oracles.
//! * [`inequalities`]: sign certification, the convolution identity,
//!   polynomial dominance, Hankel positivity, Turán ratios and
//!   monotonicity certificates.
//! * [`moments`]: the moment transform, truncated Hausdorff checks and
//!   recovery of a representing measure.

pub mod error;
pub mod expm;
pub mod frequencies;
pub mod fundamental;
pub mod inequalities;
pub mod linalg;
pub mod moments;
pub mod polynomial;
pub mod quadrature;

pub use error::{Error, Result};
pub use frequencies::FrequencyVector;
pub use fundamental::{build_evaluator, FundamentalEvaluator};
pub use inequalities::{HankelMatrix, SignReport, SignStatus};
pub use moments::{Measure, MomentSequence};
pub use polynomial::PolynomialCoeffs;
