use nalgebra::DMatrix;

use super::{sectional_norm, FlowAnsatz};
use crate::algebra::{Metric, Riem4Tensor, Sym2Tensor};
use crate::error::{Error, Result};

/// `S^p(r1) x S^q(r2)`, evaluated in an orthonormal frame adapted to the factors.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductSphereState {
    p: usize,
    q: usize,
    r1sq: f64,
    r2sq: f64,
}

impl ProductSphereState {
    pub fn new(p: usize, q: usize, r1sq: f64, r2sq: f64) -> Result<Self> {
        if p < 2 || q < 2 {
            return Err(Error::InvalidState(format!(
                "factor dimensions must be >= 2, got p={p}, q={q}"
            )));
        }
        let s = Self { p, q, r1sq: 1.0, r2sq: 1.0 };
        s.with_coords(&[r1sq, r2sq])
    }

    pub fn factor_dims(&self) -> (usize, usize) {
        (self.p, self.q)
    }

    pub fn radii_sq(&self) -> (f64, f64) {
        (self.r1sq, self.r2sq)
    }

    fn sectional(&self) -> DMatrix<f64> {
        let n = self.p + self.q;
        DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                0.0
            } else if i < self.p && j < self.p {
                1.0 / self.r1sq
            } else if i >= self.p && j >= self.p {
                1.0 / self.r2sq
            } else {
                0.0
            }
        })
    }
}

impl FlowAnsatz for ProductSphereState {
    fn dimension(&self) -> usize {
        self.p + self.q
    }

    fn coords(&self) -> Vec<f64> {
        vec![self.r1sq, self.r2sq]
    }

    fn with_coords(&self, coords: &[f64]) -> Result<Self> {
        match coords {
            [a, b] if *a > 0.0 && *b > 0.0 && a.is_finite() && b.is_finite() => Ok(Self {
                r1sq: *a,
                r2sq: *b,
                ..*self
            }),
            [a, b] => Err(Error::InvalidState(format!(
                "squared radii must be positive, got ({a}, {b})"
            ))),
            _ => Err(Error::InvalidArgument("product spheres have two coordinates".into())),
        }
    }

    fn flow_vector_field(&self) -> Result<Vec<f64>> {
        Ok(vec![
            -2.0 * (self.p as f64 - 1.0),
            -2.0 * (self.q as f64 - 1.0),
        ])
    }

    fn curvature_at(&self, _location: Option<usize>) -> Result<(Metric, Riem4Tensor)> {
        let n = self.dimension();
        Ok((Metric::euclidean(n), Riem4Tensor::from_sectional(&self.sectional())?))
    }

    fn metric_velocity(&self, derivative: &[f64], _location: Option<usize>) -> Result<Sym2Tensor> {
        let diag: Vec<f64> = (0..self.dimension())
            .map(|i| {
                if i < self.p {
                    derivative[0] / self.r1sq
                } else {
                    derivative[1] / self.r2sq
                }
            })
            .collect();
        Ok(Sym2Tensor::diagonal(&diag))
    }

    fn curvature_samples(&self) -> Result<Vec<(Metric, Riem4Tensor)>> {
        Ok(vec![self.curvature_at(None)?])
    }

    fn max_curvature_norm(&self) -> Result<f64> {
        let pairs = |d: usize| d * (d - 1) / 2;
        Ok(sectional_norm([
            (1.0 / self.r1sq, pairs(self.p)),
            (1.0 / self.r2sq, pairs(self.q)),
        ]))
    }

    fn stability_scale(&self) -> Result<f64> {
        Ok(1.0 / self.max_curvature_norm()?)
    }

    /// Products of round spheres have parallel curvature.
    fn trace_free_ricci_gradient_sq(&self) -> Option<Result<f64>> {
        Some(Ok(0.0))
    }
}
