use super::FlowAnsatz;
use crate::algebra::{Metric, Riem4Tensor, Sym2Tensor};
use crate::error::{Error, Result};

/// Round `S^n` of sectional curvature `kappa`. The flow coordinate is the
/// squared scale factor `1/kappa`, which Ricci flow decreases linearly.
#[derive(Clone, Debug, PartialEq)]
pub struct SpaceFormState {
    n: usize,
    scale_sq: f64,
}

impl SpaceFormState {
    pub fn new(n: usize, kappa: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::UnsupportedDimension(n));
        }
        if !(kappa > 0.0 && kappa.is_finite()) {
            return Err(Error::InvalidState(format!("kappa must be positive, got {kappa}")));
        }
        Ok(Self {
            n,
            scale_sq: 1.0 / kappa,
        })
    }

    pub fn kappa(&self) -> f64 {
        1.0 / self.scale_sq
    }

    pub fn scale_sq(&self) -> f64 {
        self.scale_sq
    }

    /// Time at which the scale factor reaches zero.
    pub fn extinction_time(&self) -> f64 {
        self.scale_sq / (2.0 * (self.n as f64 - 1.0))
    }
}

impl FlowAnsatz for SpaceFormState {
    fn dimension(&self) -> usize {
        self.n
    }

    fn coords(&self) -> Vec<f64> {
        vec![self.scale_sq]
    }

    fn with_coords(&self, coords: &[f64]) -> Result<Self> {
        match coords {
            [s] if *s > 0.0 && s.is_finite() => Ok(Self {
                n: self.n,
                scale_sq: *s,
            }),
            [s] => Err(Error::InvalidState(format!("scale^2 must be positive, got {s}"))),
            _ => Err(Error::InvalidArgument("space form has one coordinate".into())),
        }
    }

    fn flow_vector_field(&self) -> Result<Vec<f64>> {
        Ok(vec![-2.0 * (self.n as f64 - 1.0)])
    }

    /// Round coordinate frame: `g = scale^2 I`, `Rm = (kappa/2) g ⊼ g`.
    fn curvature_at(&self, _location: Option<usize>) -> Result<(Metric, Riem4Tensor)> {
        let n = self.n;
        let g = Metric::scaled_identity(n, self.scale_sq)?;
        // (kappa/2)(g⊼g) = kappa * s^4 * (δ_ik δ_jl - δ_il δ_jk) = s^2 (...)
        let s = self.scale_sq;
        let rm = Riem4Tensor::from_fn(n, |i, j, k, l| {
            let a = if i == k && j == l { 1.0 } else { 0.0 };
            let b = if i == l && j == k { 1.0 } else { 0.0 };
            s * (a - b)
        });
        Ok((g, rm))
    }

    fn metric_velocity(&self, derivative: &[f64], _location: Option<usize>) -> Result<Sym2Tensor> {
        Ok(Sym2Tensor::identity(self.n).scaled(derivative[0]))
    }

    fn curvature_samples(&self) -> Result<Vec<(Metric, Riem4Tensor)>> {
        Ok(vec![self.curvature_at(None)?])
    }

    fn max_curvature_norm(&self) -> Result<f64> {
        let n = self.n as f64;
        Ok(self.kappa() * (2.0 * n * (n - 1.0)).sqrt())
    }

    fn stability_scale(&self) -> Result<f64> {
        Ok(1.0 / self.max_curvature_norm()?)
    }

    fn trace_free_ricci_gradient_sq(&self) -> Option<Result<f64>> {
        Some(Ok(0.0))
    }
}
