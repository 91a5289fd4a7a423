//! Meta-t law: Student-t marginals under a t (or Gaussian) copula.
//!
//! The driver is a multivariate t vector X' = G / sqrt(V / nu0) with a
//! single shared chi-square divisor, transformed componentwise so marginal
//! k becomes delta_k t(nu_k). A shared divisor creates tail dependence;
//! the limit nu0 = infinity removes it, leaving the Gaussian copula, and is
//! represented structurally as [`CopulaDof::Gaussian`] so the degenerate
//! path never touches the t machinery.

use super::{DispersionMatrix, ModelError, Result};
use crate::dist::{chi2_distribution, normal_cdf, StudentMarginal};
use crate::rng::RngState;
use nalgebra::{DMatrix, DVector};
use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};

/// Copula degrees of freedom: finite (> 2) or the Gaussian-copula limit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CopulaDofRepr", into = "CopulaDofRepr")]
pub enum CopulaDof {
    Finite(f64),
    /// nu0 = infinity: Gaussian copula, no tail dependence.
    Gaussian,
}

impl CopulaDof {
    pub fn is_degenerate(&self) -> bool {
        matches!(self, CopulaDof::Gaussian)
    }

    pub fn finite(&self) -> Option<f64> {
        match self {
            CopulaDof::Finite(v) => Some(*v),
            CopulaDof::Gaussian => None,
        }
    }
}

impl std::fmt::Display for CopulaDof {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CopulaDof::Finite(v) => write!(f, "{v}"),
            CopulaDof::Gaussian => write!(f, "inf"),
        }
    }
}

/// JSON shape: a number, or the string "inf".
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CopulaDofRepr {
    Number(f64),
    Text(String),
}

impl TryFrom<CopulaDofRepr> for CopulaDof {
    type Error = String;
    fn try_from(r: CopulaDofRepr) -> std::result::Result<Self, String> {
        match r {
            CopulaDofRepr::Number(v) if v.is_finite() => Ok(CopulaDof::Finite(v)),
            CopulaDofRepr::Number(_) => Ok(CopulaDof::Gaussian),
            CopulaDofRepr::Text(s) if s == "inf" || s == "infinity" => Ok(CopulaDof::Gaussian),
            CopulaDofRepr::Text(s) => Err(format!("unrecognized copula dof {s:?}")),
        }
    }
}

impl From<CopulaDof> for CopulaDofRepr {
    fn from(v: CopulaDof) -> Self {
        match v {
            CopulaDof::Finite(x) => CopulaDofRepr::Number(x),
            CopulaDof::Gaussian => CopulaDofRepr::Text("inf".into()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct MetaTModel {
    nu0: CopulaDof,
    nus: Vec<f64>,
    deltas: Vec<f64>,
    q: DispersionMatrix,
    root: DMatrix<f64>,
    copula_t: Option<StudentMarginal>,
    copula_chi2: Option<Gamma<f64>>,
    marginal_t: Vec<StudentMarginal>,
}

impl MetaTModel {
    pub fn new(
        nu0: CopulaDof,
        nus: Vec<f64>,
        deltas: Vec<f64>,
        q: DispersionMatrix,
    ) -> Result<Self> {
        let d = nus.len();
        if d == 0 || deltas.len() != d || q.dim() != d {
            return Err(ModelError::DimensionMismatch(format!(
                "nus ({}), deltas ({}) and dispersion ({}) must agree",
                nus.len(),
                deltas.len(),
                q.dim()
            )));
        }
        if let CopulaDof::Finite(v) = nu0 {
            if !(v > 2.0) {
                return Err(ModelError::InvalidParameter(format!(
                    "copula dof must exceed 2 (or be the Gaussian limit), got {v}"
                )));
            }
        }
        for (k, &nu) in nus.iter().enumerate() {
            if !(nu > 0.0) {
                return Err(ModelError::InvalidParameter(format!(
                    "marginal dof {k} must be positive, got {nu}"
                )));
            }
        }
        if deltas.iter().any(|&s| !(s > 0.0)) {
            return Err(ModelError::InvalidParameter("scales must be positive".into()));
        }
        if !q.is_unit_diagonal() {
            return Err(ModelError::InvalidParameter(
                "meta models require a unit-diagonal dispersion matrix".into(),
            ));
        }
        let (copula_t, copula_chi2) = match nu0 {
            CopulaDof::Finite(v) => (
                Some(StudentMarginal::new(v)?),
                Some(chi2_distribution(v)?),
            ),
            CopulaDof::Gaussian => (None, None),
        };
        let marginal_t = nus
            .iter()
            .map(|&nu| StudentMarginal::new(nu).map_err(ModelError::from))
            .collect::<Result<Vec<_>>>()?;
        let root = q.sqrt();
        Ok(Self { nu0, nus, deltas, q, root, copula_t, copula_chi2, marginal_t })
    }

    pub fn dim(&self) -> usize {
        self.nus.len()
    }

    pub fn nu0(&self) -> CopulaDof {
        self.nu0
    }

    pub fn is_degenerate(&self) -> bool {
        self.nu0.is_degenerate()
    }

    pub fn nus(&self) -> &[f64] {
        &self.nus
    }

    pub fn deltas(&self) -> &[f64] {
        &self.deltas
    }

    pub fn dispersion(&self) -> &DispersionMatrix {
        &self.q
    }

    pub fn sample_row(&self, rng: &mut RngState, out: &mut [f64]) {
        let d = self.dim();
        let z = DVector::from_fn(d, |_, _| rng.standard_normal());
        let g = &self.root * z;
        let scale = match (&self.copula_chi2, self.nu0) {
            (Some(chi2), CopulaDof::Finite(nu0)) => (chi2.sample(rng) / nu0).sqrt(),
            _ => 1.0,
        };
        for k in 0..d {
            let u = match &self.copula_t {
                Some(t0) => t0.cdf(g[k] / scale),
                None => normal_cdf(g[k]),
            };
            let u = u.clamp(1e-15, 1.0 - 1e-15);
            out[k] = self.deltas[k] * self.marginal_t[k].quantile(u);
        }
    }

    /// n draws as the rows of an n x d matrix.
    pub fn sample(&self, n: usize, rng: &mut RngState) -> DMatrix<f64> {
        let d = self.dim();
        let mut out = DMatrix::zeros(n, d);
        let mut row = vec![0.0; d];
        for i in 0..n {
            self.sample_row(rng, &mut row);
            for j in 0..d {
                out[(i, j)] = row[j];
            }
        }
        out
    }
}
