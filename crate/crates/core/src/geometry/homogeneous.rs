//! Left-invariant metrics on three-dimensional unimodular Lie groups.
//!
//! In a Milnor frame `[e2,e3] = λ1 e1`, `[e3,e1] = λ2 e2`, `[e1,e2] = λ3 e3`
//! and the metric is `diag(A, B, C)`. The orthonormal frame `f_i = e_i/sqrt(A_i)`
//! has structure constants `λ̃_i = λ_i sqrt(A_i / (A_j A_k))`, Ricci
//! eigenvalues `r_i = 2 μ_j μ_k` with `μ_i = (λ̃1 + λ̃2 + λ̃3)/2 - λ̃_i`, and
//! Ricci flow reduces to `dA_i/dt = -2 A_i r_i`.

use nalgebra::DMatrix;

use super::{sectional_norm, FlowAnsatz};
use crate::algebra::{decompose, Metric, Riem4Tensor, Sym2Tensor};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnimodularGroup {
    /// `(+,+,+)`, preset `(2,2,2)`: `A = B = C = 1` is the unit round `S^3`.
    Su2,
    /// `(+,0,0)`, preset `(1,0,0)`.
    Nil,
    /// `(+,-,0)`, preset `(1,-1,0)`. Experimental.
    Sol,
    /// `(+,+,-)`, preset `(1,1,-1)`. Experimental.
    Sl2,
}

impl UnimodularGroup {
    pub fn structure_constants(self) -> [f64; 3] {
        match self {
            UnimodularGroup::Su2 => [2.0, 2.0, 2.0],
            UnimodularGroup::Nil => [1.0, 0.0, 0.0],
            UnimodularGroup::Sol => [1.0, -1.0, 0.0],
            UnimodularGroup::Sl2 => [1.0, 1.0, -1.0],
        }
    }

    pub fn is_experimental(self) -> bool {
        matches!(self, UnimodularGroup::Sol | UnimodularGroup::Sl2)
    }

    pub fn name(self) -> &'static str {
        match self {
            UnimodularGroup::Su2 => "su2",
            UnimodularGroup::Nil => "nil",
            UnimodularGroup::Sol => "sol",
            UnimodularGroup::Sl2 => "sl2",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "su2" => Some(UnimodularGroup::Su2),
            "nil" => Some(UnimodularGroup::Nil),
            "sol" => Some(UnimodularGroup::Sol),
            "sl2" => Some(UnimodularGroup::Sl2),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HomogeneousState {
    group: UnimodularGroup,
    structure: [f64; 3],
    coeffs: [f64; 3],
}

impl HomogeneousState {
    pub fn new(group: UnimodularGroup, a: f64, b: f64, c: f64) -> Result<Self> {
        Self::with_structure(group, group.structure_constants(), a, b, c)
    }

    /// Custom structure constants; their signs should match `group`'s signature.
    pub fn with_structure(
        group: UnimodularGroup,
        structure: [f64; 3],
        a: f64,
        b: f64,
        c: f64,
    ) -> Result<Self> {
        let s = Self {
            group,
            structure,
            coeffs: [1.0; 3],
        };
        s.with_coords(&[a, b, c])
    }

    pub fn group(&self) -> UnimodularGroup {
        self.group
    }

    pub fn structure(&self) -> [f64; 3] {
        self.structure
    }

    /// Metric coefficients `(A, B, C)`.
    pub fn coeffs(&self) -> [f64; 3] {
        self.coeffs
    }

    /// Structure constants of the orthonormal frame.
    pub fn orthonormal_structure(&self) -> [f64; 3] {
        let a = self.coeffs;
        std::array::from_fn(|i| {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            self.structure[i] * (a[i] / (a[j] * a[k])).sqrt()
        })
    }

    /// Ricci eigenvalues in the orthonormal Milnor frame.
    pub fn ricci_eigenvalues(&self) -> [f64; 3] {
        let lam = self.orthonormal_structure();
        let half = 0.5 * (lam[0] + lam[1] + lam[2]);
        let mu: [f64; 3] = std::array::from_fn(|i| half - lam[i]);
        std::array::from_fn(|i| 2.0 * mu[(i + 1) % 3] * mu[(i + 2) % 3])
    }

    fn sectional(&self) -> DMatrix<f64> {
        let r = self.ricci_eigenvalues();
        DMatrix::from_fn(3, 3, |i, j| {
            if i == j {
                0.0
            } else {
                let k = 3 - i - j;
                0.5 * (r[i] + r[j] - r[k])
            }
        })
    }

    /// Levi-Civita coefficients `Γ[i][j][k] = <∇_{f_i} f_j, f_k>` of the
    /// orthonormal frame, from the Koszul formula for left-invariant fields.
    pub fn connection(&self) -> [[[f64; 3]; 3]; 3] {
        let lam = self.orthonormal_structure();
        // c(i, j, k): coefficient of f_k in [f_i, f_j].
        let c = |i: usize, j: usize, k: usize| -> f64 {
            if i == j || j == k || i == k {
                return 0.0;
            }
            let sign = if (i + 1) % 3 == j { 1.0 } else { -1.0 };
            sign * lam[k]
        };
        std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                std::array::from_fn(|k| 0.5 * (c(i, j, k) - c(j, k, i) + c(k, i, j)))
            })
        })
    }

    /// `|∇T|^2` for a left-invariant symmetric 2-tensor given in the orthonormal frame.
    pub fn covariant_derivative_norm_sq(&self, t: &Sym2Tensor) -> Result<f64> {
        if t.dim() != 3 {
            return Err(Error::InvalidArgument("expected a 3x3 tensor".into()));
        }
        let gamma = self.connection();
        let mut acc = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let mut d = 0.0;
                    for m in 0..3 {
                        d -= gamma[i][j][m] * t.get(m, k) + gamma[i][k][m] * t.get(j, m);
                    }
                    acc += d * d;
                }
            }
        }
        Ok(acc)
    }
}

impl FlowAnsatz for HomogeneousState {
    fn dimension(&self) -> usize {
        3
    }

    fn coords(&self) -> Vec<f64> {
        self.coeffs.to_vec()
    }

    fn with_coords(&self, coords: &[f64]) -> Result<Self> {
        let [a, b, c] = coords else {
            return Err(Error::InvalidArgument("homogeneous state has three coordinates".into()));
        };
        if [a, b, c].iter().any(|v| !(**v > 0.0 && v.is_finite())) {
            return Err(Error::InvalidState(format!(
                "metric coefficients must be positive, got ({a}, {b}, {c})"
            )));
        }
        Ok(Self {
            coeffs: [*a, *b, *c],
            ..self.clone()
        })
    }

    fn flow_vector_field(&self) -> Result<Vec<f64>> {
        let r = self.ricci_eigenvalues();
        Ok((0..3).map(|i| -2.0 * self.coeffs[i] * r[i]).collect())
    }

    /// Orthonormal Milnor frame; in dimension three the curvature operator is
    /// diagonal there, with `K_ij = (r_i + r_j - r_k)/2`.
    fn curvature_at(&self, _location: Option<usize>) -> Result<(Metric, Riem4Tensor)> {
        Ok((Metric::euclidean(3), Riem4Tensor::from_sectional(&self.sectional())?))
    }

    fn metric_velocity(&self, derivative: &[f64], _location: Option<usize>) -> Result<Sym2Tensor> {
        let d: Vec<f64> = (0..3).map(|i| derivative[i] / self.coeffs[i]).collect();
        Ok(Sym2Tensor::diagonal(&d))
    }

    fn curvature_samples(&self) -> Result<Vec<(Metric, Riem4Tensor)>> {
        Ok(vec![self.curvature_at(None)?])
    }

    fn max_curvature_norm(&self) -> Result<f64> {
        let k = self.sectional();
        Ok(sectional_norm([(k[(0, 1)], 1), (k[(0, 2)], 1), (k[(1, 2)], 1)]))
    }

    fn stability_scale(&self) -> Result<f64> {
        let norm = self.max_curvature_norm()?;
        Ok(if norm > 0.0 { 1.0 / norm } else { f64::INFINITY })
    }

    fn trace_free_ricci_gradient_sq(&self) -> Option<Result<f64>> {
        Some((|| {
            let (g, rm) = self.curvature_at(None)?;
            let d = decompose(&rm, &g)?;
            self.covariant_derivative_norm_sq(&d.trace_free_ricci)
        })())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_su2_is_round_three_sphere() {
        let s = HomogeneousState::new(UnimodularGroup::Su2, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(s.ricci_eigenvalues(), [2.0, 2.0, 2.0]);
        let k = s.sectional();
        assert_eq!(k[(0, 1)], 1.0);
    }

    #[test]
    fn nil_ricci_signature() {
        let s = HomogeneousState::new(UnimodularGroup::Nil, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(s.ricci_eigenvalues(), [0.5, -0.5, -0.5]);
    }

    #[test]
    fn connection_is_metric_compatible() {
        let s = HomogeneousState::new(UnimodularGroup::Su2, 1.3, 0.7, 0.4).unwrap();
        let g = s.connection();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    assert!((g[i][j][k] + g[i][k][j]).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn nil_gradient_of_trace_free_ricci() {
        // For Nil with u = λ̃1^2, |∇F|^2 = u^3.
        let s = HomogeneousState::new(UnimodularGroup::Nil, 2.0, 1.0, 0.5).unwrap();
        let u = s.orthonormal_structure()[0].powi(2);
        let got = s.trace_free_ricci_gradient_sq().unwrap().unwrap();
        assert!((got - u.powi(3)).abs() < 1e-12 * u.powi(3));
    }

    #[test]
    fn rejects_nonpositive_coefficients() {
        assert!(HomogeneousState::new(UnimodularGroup::Nil, 1.0, 0.0, 1.0).is_err());
    }
}
