//! Tagged union over the fitted model families.
//!
//! This is the exchange type between fitting, simulation and the CLI: a
//! fitted model serializes to a JSON document with a `family` tag, parameter
//! vectors and the dispersion matrix in row-major form.

use super::{
    CopulaDof, DispersionMatrix, GaussianModel, MetaStableModel, MetaTModel, ModelError, Result,
    StableLikeModel, TLikeModel,
};
use crate::dist::StableGrid;
use crate::rng::RngState;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

/// One of the five risk-factor laws.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "ModelRepr", into = "ModelRepr")]
pub enum RiskFactorModel {
    Gaussian(GaussianModel),
    StableLike(StableLikeModel),
    TLike(TLikeModel),
    MetaStable(MetaStableModel),
    MetaT(MetaTModel),
}

impl RiskFactorModel {
    pub fn dim(&self) -> usize {
        match self {
            RiskFactorModel::Gaussian(m) => m.dim(),
            RiskFactorModel::StableLike(m) => m.dim(),
            RiskFactorModel::TLike(m) => m.dim(),
            RiskFactorModel::MetaStable(m) => m.dim(),
            RiskFactorModel::MetaT(m) => m.dim(),
        }
    }

    pub fn family_name(&self) -> &'static str {
        match self {
            RiskFactorModel::Gaussian(_) => "gaussian",
            RiskFactorModel::StableLike(_) => "stable-like",
            RiskFactorModel::TLike(_) => "t-like",
            RiskFactorModel::MetaStable(m) if m.is_degenerate() => "meta-stable-degenerate",
            RiskFactorModel::MetaStable(_) => "meta-stable",
            RiskFactorModel::MetaT(m) if m.is_degenerate() => "meta-t-degenerate",
            RiskFactorModel::MetaT(_) => "meta-t",
        }
    }

    /// Meta-stable sampling interpolates stable distribution functions from
    /// a precomputed grid; every other family samples without one.
    pub fn requires_grid(&self) -> bool {
        matches!(self, RiskFactorModel::MetaStable(m)
            if !m.is_degenerate() || m.alphas().iter().any(|&a| a < 2.0))
    }

    /// n draws as the rows of an n x d matrix.
    pub fn sample(
        &self,
        n: usize,
        rng: &mut RngState,
        grid: Option<&StableGrid>,
    ) -> Result<DMatrix<f64>> {
        match self {
            RiskFactorModel::Gaussian(m) => Ok(m.sample(n, rng)),
            RiskFactorModel::StableLike(m) => m.sample(n, rng),
            RiskFactorModel::TLike(m) => Ok(m.sample(n, rng)),
            RiskFactorModel::MetaStable(m) => {
                let grid = grid.ok_or(ModelError::GridRequired)?;
                m.sample(n, rng, grid)
            }
            RiskFactorModel::MetaT(m) => Ok(m.sample(n, rng)),
        }
    }

    /// One draw written into `out`.
    pub fn sample_row(
        &self,
        rng: &mut RngState,
        grid: Option<&StableGrid>,
        out: &mut [f64],
    ) -> Result<()> {
        match self {
            RiskFactorModel::Gaussian(m) => {
                m.sample_row(rng, out);
                Ok(())
            }
            RiskFactorModel::StableLike(m) => m.sample_row(rng, out),
            RiskFactorModel::TLike(m) => {
                m.sample_row(rng, out);
                Ok(())
            }
            RiskFactorModel::MetaStable(m) => {
                let grid = grid.ok_or(ModelError::GridRequired)?;
                m.sample_row(rng, grid, out)
            }
            RiskFactorModel::MetaT(m) => {
                m.sample_row(rng, out);
                Ok(())
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
enum ModelRepr {
    Gaussian {
        dispersion: DispersionMatrix,
    },
    StableLike {
        alphas: Vec<f64>,
        sigmas: Vec<f64>,
        dispersion: DispersionMatrix,
    },
    TLike {
        nus: Vec<f64>,
        dispersion: DispersionMatrix,
    },
    MetaStable {
        alpha0: f64,
        alphas: Vec<f64>,
        sigmas: Vec<f64>,
        dispersion: DispersionMatrix,
    },
    MetaT {
        nu0: CopulaDof,
        nus: Vec<f64>,
        deltas: Vec<f64>,
        dispersion: DispersionMatrix,
    },
}

impl TryFrom<ModelRepr> for RiskFactorModel {
    type Error = String;
    fn try_from(r: ModelRepr) -> std::result::Result<Self, String> {
        let build = || -> Result<RiskFactorModel> {
            Ok(match r {
                ModelRepr::Gaussian { dispersion } => {
                    RiskFactorModel::Gaussian(GaussianModel::new(dispersion)?)
                }
                ModelRepr::StableLike { alphas, sigmas, dispersion } => {
                    RiskFactorModel::StableLike(StableLikeModel::new(alphas, sigmas, dispersion)?)
                }
                ModelRepr::TLike { nus, dispersion } => {
                    RiskFactorModel::TLike(TLikeModel::new(nus, dispersion)?)
                }
                ModelRepr::MetaStable { alpha0, alphas, sigmas, dispersion } => {
                    RiskFactorModel::MetaStable(MetaStableModel::new(
                        alpha0, alphas, sigmas, dispersion,
                    )?)
                }
                ModelRepr::MetaT { nu0, nus, deltas, dispersion } => {
                    RiskFactorModel::MetaT(MetaTModel::new(nu0, nus, deltas, dispersion)?)
                }
            })
        };
        build().map_err(|e| e.to_string())
    }
}

impl From<RiskFactorModel> for ModelRepr {
    fn from(m: RiskFactorModel) -> Self {
        match m {
            RiskFactorModel::Gaussian(m) => ModelRepr::Gaussian {
                dispersion: m.dispersion().clone(),
            },
            RiskFactorModel::StableLike(m) => ModelRepr::StableLike {
                alphas: m.alphas().to_vec(),
                sigmas: m.sigmas().to_vec(),
                dispersion: m.dispersion().clone(),
            },
            RiskFactorModel::TLike(m) => ModelRepr::TLike {
                nus: m.nus().to_vec(),
                dispersion: m.dispersion().clone(),
            },
            RiskFactorModel::MetaStable(m) => ModelRepr::MetaStable {
                alpha0: m.alpha0(),
                alphas: m.alphas().to_vec(),
                sigmas: m.sigmas().to_vec(),
                dispersion: m.dispersion().clone(),
            },
            RiskFactorModel::MetaT(m) => ModelRepr::MetaT {
                nu0: m.nu0(),
                nus: m.nus().to_vec(),
                deltas: m.deltas().to_vec(),
                dispersion: m.dispersion().clone(),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_roundtrip_all_families() {
        let q = DispersionMatrix::new(DMatrix::from_row_slice(2, 2, &[1.0, 0.3, 0.3, 1.0]))
            .unwrap();
        let s = 1.0 / std::f64::consts::SQRT_2;
        let models = vec![
            RiskFactorModel::Gaussian(GaussianModel::new(q.clone()).unwrap()),
            RiskFactorModel::StableLike(
                StableLikeModel::from_correlation(vec![1.5, 1.7], vec![s, s], q.matrix()).unwrap(),
            ),
            RiskFactorModel::TLike(TLikeModel::new(vec![5.0, 8.0], q.clone()).unwrap()),
            RiskFactorModel::MetaStable(
                MetaStableModel::new(1.8, vec![1.6, 2.0], vec![1.0, 2.0], q.clone()).unwrap(),
            ),
            RiskFactorModel::MetaT(
                MetaTModel::new(CopulaDof::Gaussian, vec![4.0, 6.0], vec![1.0, 1.0], q.clone())
                    .unwrap(),
            ),
        ];
        for m in models {
            let js = serde_json::to_string(&m).unwrap();
            let back: RiskFactorModel = serde_json::from_str(&js).unwrap();
            assert_eq!(m.family_name(), back.family_name());
            assert_eq!(m.dim(), back.dim());
            // family tag is kebab-case in the document
            assert!(js.contains("\"family\""));
        }
    }

    #[test]
    fn rejects_invalid_documents() {
        let bad = r#"{"family":"t-like","nus":[1.5,8.0],"dispersion":{"dim":2,"rows":[1,0,0,1]}}"#;
        assert!(serde_json::from_str::<RiskFactorModel>(bad).is_err());
    }

    #[test]
    fn grid_requirement_is_structural() {
        let q = DispersionMatrix::identity(2);
        let meta = RiskFactorModel::MetaStable(
            MetaStableModel::new(1.8, vec![1.6, 1.6], vec![1.0, 1.0], q.clone()).unwrap(),
        );
        assert!(meta.requires_grid());
        let mut rng = RngState::new(0);
        assert!(matches!(
            meta.sample(4, &mut rng, None),
            Err(ModelError::GridRequired)
        ));
        let gauss = RiskFactorModel::Gaussian(GaussianModel::new(q).unwrap());
        assert!(!gauss.requires_grid());
        assert!(gauss.sample(4, &mut rng, None).is_ok());
    }
}
