//! Parameter estimation for the four model families.
//!
//! The estimation pipeline runs marginals first, then dependence, then the
//! copula parameter:
//!
//! * fractional-moment dispersion estimation for the stable-like family,
//!   built on the signed cross-moment curve of a correlated Gaussian pair
//!   and the closed-form subordinator moment;
//! * method-of-moments dispersion for the t-like family;
//! * Kendall-tau dispersion (the arcsine relation) for both meta families;
//! * marginal maximum likelihood for stable and t margins;
//! * copula-parameter maximum likelihood with the degenerate Gaussian
//!   endpoint treated as a first-class candidate.

mod copula_ml;
mod frac_moment;
mod kendall;
mod marginal_ml;
mod stats;
mod t_moment;

pub use copula_ml::{fit_meta_stable_index, fit_meta_t_dof, CopulaDofEstimate};
pub use frac_moment::{
    estimate_dispersion_stable_like, estimate_pair_correlation, signed_moment,
    signed_moment_derivative, signed_moment_inverse, stable_like_asymptotic_variance,
    subordinator_moment, FracMomentConfig, VarianceStabilizer,
};
pub use kendall::{estimate_dispersion_meta, kendall_tau};
pub use marginal_ml::{fit_marginal_stable, fit_marginal_t, StableMarginalFit, TMarginalFit};
pub use stats::{descriptive_stats, DescriptiveStats};
pub use t_moment::{
    estimate_dispersion_t_like, inverse_chi_fractional_moment, t_like_asymptotic_variance,
    t_moment_constant,
};

use crate::dist::DistError;
use crate::models::ModelError;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EstimationError {
    #[error(transparent)]
    Dist(#[from] DistError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("need at least {needed} observations, got {got}")]
    TooFewObservations { needed: usize, got: usize },
    #[error("series lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("series is degenerate (zero variance)")]
    DegenerateSeries,
    #[error("degrees of freedom {0} too small for the moment estimator (need > 2)")]
    DofTooSmall(f64),
}

pub type Result<T> = std::result::Result<T, EstimationError>;

/// Outcome metadata attached to every estimator.
///
/// When an optimizer fails to converge the estimates still carry the last
/// iterate; `converged` records the distinction instead of an error.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct FitReport {
    pub converged: bool,
    pub iterations: u32,
    pub log_likelihood: Option<f64>,
    /// Largest entry-wise adjustment applied by a PSD repair, if any.
    pub psd_repair: Option<f64>,
    pub warnings: Vec<String>,
}

impl FitReport {
    pub fn converged() -> Self {
        Self { converged: true, ..Self::default() }
    }

    pub fn warn(&mut self, msg: impl Into<String>) {
        self.warnings.push(msg.into());
    }
}
