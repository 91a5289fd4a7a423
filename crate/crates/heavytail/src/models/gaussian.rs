//! Jointly Gaussian benchmark model.

use super::{DispersionMatrix, Result};
use crate::rng::RngState;
use nalgebra::{DMatrix, DVector};

/// N(0, Q) risk factors — the comparison baseline for every backtest.
#[derive(Debug, Clone)]
pub struct GaussianModel {
    q: DispersionMatrix,
    root: DMatrix<f64>,
}

impl GaussianModel {
    pub fn new(q: DispersionMatrix) -> Result<Self> {
        let root = q.sqrt();
        Ok(Self { q, root })
    }

    pub fn dim(&self) -> usize {
        self.q.dim()
    }

    pub fn dispersion(&self) -> &DispersionMatrix {
        &self.q
    }

    pub fn sample_row(&self, rng: &mut RngState, out: &mut [f64]) {
        let d = self.dim();
        let z = DVector::from_fn(d, |_, _| rng.standard_normal());
        let g = &self.root * z;
        out.copy_from_slice(g.as_slice());
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
