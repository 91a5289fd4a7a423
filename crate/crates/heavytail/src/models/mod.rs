//! Multivariate risk-factor families.
//!
//! Four heavy-tailed laws with per-coordinate tail indices, plus the
//! Gaussian benchmark:
//!
//! * **stable-like** — X = A^{1/2} G with one independent positive stable
//!   subordinator per coordinate; marginal i is symmetric alpha_i-stable.
//! * **t-like** — X_k = G_k / sqrt(V_k / nu_k) with independent chi-square
//!   divisors; marginal k is a scaled Student t.
//! * **meta-stable** — componentwise probability transform of a sub-Gaussian
//!   alpha0-stable vector; stable marginals with an elliptical stable copula
//!   (alpha0 = 2 degenerates to the Gaussian copula).
//! * **meta-t** — the same construction on a multivariate t vector
//!   (nu0 = infinity degenerates to the Gaussian copula).
//!
//! Sampling follows the variance-mixture factorizations directly, so draws
//! are exact. The copula density functions used by the dependence-parameter
//! likelihoods live in [`copula`], backed by the sub-Gaussian stable density
//! of [`subgaussian`].

mod dispersion;
mod gaussian;
mod meta_stable;
mod meta_t;
mod risk_factor;
mod stable_like;
mod t_like;

pub mod copula;
pub mod subgaussian;

pub use dispersion::DispersionMatrix;
pub use gaussian::GaussianModel;
pub use meta_stable::MetaStableModel;
pub use meta_t::{CopulaDof, MetaTModel};
pub use risk_factor::RiskFactorModel;
pub use stable_like::StableLikeModel;
pub use subgaussian::{subgaussian_stable_density, SubGaussianDensity};
pub use t_like::TLikeModel;

use crate::dist::DistError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error(transparent)]
    Dist(#[from] DistError),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("dispersion matrix is singular")]
    SingularDispersion,
    #[error("model family needs a stable grid; none was supplied")]
    GridRequired,
}

pub type Result<T> = std::result::Result<T, ModelError>;
