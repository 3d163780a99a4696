//! Rotationally symmetric metrics `g = φ(x)^2 dx^2 + ψ(x)^2 g_{S^k}` on `S^{k+1}`.
//!
//! The coordinate `x ∈ [0, 1]` is held fixed during the flow and arclength
//! derivatives are `∂_s = φ^{-1} ∂_x`. The two sectional curvatures are
//! `L = -ψ_ss/ψ` (planes containing `∂_s`) and `K = (1 - ψ_s^2)/ψ^2` (planes
//! tangent to the fiber sphere), and Ricci flow reads
//!
//! ```text
//! ψ_t = ψ_ss - (k-1)(1 - ψ_s^2)/ψ = -ψ (L + (k-1) K)
//! φ_t = k φ ψ_ss/ψ                = -k φ L
//! ```
//!
//! Spatial derivatives are fourth-order central differences, except the
//! transport term `φ_x` in the `φ` equation, which is second-order upwind.
//! Stencils that reach past a pole use reflected ghost values: `ψ` is odd and
//! `φ` even about each pole, as smoothness of the metric there requires. At
//! the poles `ψ = 0` is pinned and `φ` tracks `∂_x ψ`.
//!
//! Every such metric is locally conformally flat, so its Weyl tensor vanishes.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use super::{sectional_norm, FlowAnsatz};
use crate::algebra::{Metric, Riem4Tensor, Sym2Tensor};
use crate::error::{Error, Result};

/// Allowed deviation of `|∂_s ψ|` from 1 at a pole.
pub const POLE_REGULARITY_TOL: f64 = 0.05;

#[derive(Clone, Debug, PartialEq)]
pub struct WarpedSphereState {
    n_fiber: usize,
    phi: Vec<f64>,
    psi: Vec<f64>,
}

/// Curvature limits `(L, K)` at the two poles.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PoleLimits {
    pub left: (f64, f64),
    pub right: (f64, f64),
}

#[derive(Clone, Copy, Debug)]
struct Pointwise {
    radial: f64,
    spherical: f64,
}

impl WarpedSphereState {
    /// Validates positivity, pinned poles and pole regularity.
    pub fn new(n_fiber: usize, phi: Vec<f64>, psi: Vec<f64>) -> Result<Self> {
        if n_fiber < 2 {
            return Err(Error::InvalidState(format!(
                "fiber dimension must be >= 2, got {n_fiber}"
            )));
        }
        if phi.len() != psi.len() || phi.len() < 7 {
            return Err(Error::InvalidState(
                "phi and psi need the same length and at least 7 grid points".into(),
            ));
        }
        let state = Self { n_fiber, phi, psi };
        state.check_positive()?;
        for (side, slope) in [("left", state.pole_slope(false)), ("right", state.pole_slope(true))] {
            if (slope.abs() - 1.0).abs() > POLE_REGULARITY_TOL {
                return Err(Error::InvalidState(format!(
                    "{side} pole is not regular: |psi_s| = {}",
                    slope.abs()
                )));
            }
        }
        Ok(state)
    }

    /// Samples `φ` and `ψ` on `m + 1` uniform points; `ψ` is pinned to zero at the poles.
    pub fn from_profiles(
        n_fiber: usize,
        m: usize,
        phi: impl Fn(f64) -> f64,
        psi: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        let xs = (0..=m).map(|i| i as f64 / m as f64);
        let phi_v = xs.clone().map(&phi).collect();
        let psi_v = xs
            .enumerate()
            .map(|(i, x)| if i == 0 || i == m { 0.0 } else { psi(x) })
            .collect();
        Self::new(n_fiber, phi_v, psi_v)
    }

    /// Unit round `S^{k+1}`: `φ = π`, `ψ = sin(πx)`.
    pub fn round(n_fiber: usize, m: usize) -> Result<Self> {
        Self::from_profiles(n_fiber, m, |_| PI, |x| (PI * x).sin())
    }

    /// Reflection-symmetric dumbbell `ψ = sin(πx) (1 - neck sin^2(πx))`, `φ = π`,
    /// with its thinnest neck at `x = 1/2`.
    pub fn dumbbell(n_fiber: usize, m: usize, neck: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&neck) {
            return Err(Error::InvalidState(format!("neck depth must lie in [0, 1), got {neck}")));
        }
        Self::from_profiles(
            n_fiber,
            m,
            |_| PI,
            |x| {
                let s = (PI * x).sin();
                s * (1.0 - neck * s * s)
            },
        )
    }

    pub fn n_fiber(&self) -> usize {
        self.n_fiber
    }

    /// Number of grid intervals `M`.
    pub fn intervals(&self) -> usize {
        self.psi.len() - 1
    }

    pub fn dx(&self) -> f64 {
        1.0 / self.intervals() as f64
    }

    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    pub fn psi(&self) -> &[f64] {
        &self.psi
    }

    fn check_positive(&self) -> Result<()> {
        let m = self.intervals();
        if let Some(i) = self.phi.iter().position(|v| !(*v > 0.0 && v.is_finite())) {
            return Err(Error::DegenerateMetric(format!("phi[{i}] = {} is not positive", self.phi[i])));
        }
        if self.psi[0] != 0.0 || self.psi[m] != 0.0 {
            return Err(Error::InvalidState("psi must vanish at both poles".into()));
        }
        if let Some(i) = (1..m).find(|&i| !(self.psi[i] > 0.0 && self.psi[i].is_finite())) {
            return Err(Error::DegenerateMetric(format!("psi[{i}] = {} is not positive", self.psi[i])));
        }
        Ok(())
    }

    #[inline]
    fn psi_at(&self, i: isize) -> f64 {
        let m = self.intervals() as isize;
        if i < 0 {
            -self.psi[(-i) as usize]
        } else if i > m {
            -self.psi[(2 * m - i) as usize]
        } else {
            self.psi[i as usize]
        }
    }

    #[inline]
    fn phi_at(&self, i: isize) -> f64 {
        let m = self.intervals() as isize;
        if i < 0 {
            self.phi[(-i) as usize]
        } else if i > m {
            self.phi[(2 * m - i) as usize]
        } else {
            self.phi[i as usize]
        }
    }

    fn d1(&self, f: impl Fn(isize) -> f64, i: isize) -> f64 {
        (-f(i + 2) + 8.0 * f(i + 1) - 8.0 * f(i - 1) + f(i - 2)) / (12.0 * self.dx())
    }

    fn d2(&self, f: impl Fn(isize) -> f64, i: isize) -> f64 {
        let h = self.dx();
        (-f(i + 2) + 16.0 * f(i + 1) - 30.0 * f(i) + 16.0 * f(i - 1) - f(i - 2)) / (12.0 * h * h)
    }

    fn d3(&self, f: impl Fn(isize) -> f64, i: isize) -> f64 {
        let h = self.dx();
        (-f(i + 3) + 8.0 * f(i + 2) - 13.0 * f(i + 1) + 13.0 * f(i - 1) - 8.0 * f(i - 2)
            + f(i - 3))
            / (8.0 * h * h * h)
    }

    fn pointwise(&self, i: usize) -> Pointwise {
        let ii = i as isize;
        let psi = self.psi[i];
        let phi = self.phi[i];
        let psi_x = self.d1(|j| self.psi_at(j), ii);
        let psi_xx = self.d2(|j| self.psi_at(j), ii);
        let phi_x = self.d1(|j| self.phi_at(j), ii);
        let psi_s = psi_x / phi;
        let psi_ss = psi_xx / (phi * phi) - phi_x * psi_x / (phi * phi * phi);
        Pointwise {
            radial: -psi_ss / psi,
            spherical: (1.0 - psi_s * psi_s) / (psi * psi),
        }
    }

    fn pole_index(&self, right: bool) -> usize {
        if right {
            self.intervals()
        } else {
            0
        }
    }

    /// `φ_t = -kφL` at an interior point, written as `k ψ_xx/(φψ) - v φ_x` with
    /// `v = k ψ_x/(φ²ψ)`. The transport term is differenced upwind: `v ~ 1/x`
    /// near a pole and central differences there admit a mode growing like `1/dx²`.
    fn phi_rate(&self, i: usize) -> f64 {
        let ii = i as isize;
        let h = self.dx();
        let k = self.n_fiber as f64;
        let (phi, psi) = (self.phi[i], self.psi[i]);
        let psi_x = self.d1(|j| self.psi_at(j), ii);
        let psi_xx = self.d2(|j| self.psi_at(j), ii);
        let v = k * psi_x / (phi * phi * psi);
        let u = if v >= 0.0 { 1 } else { -1 };
        let f = |j: isize| self.phi_at(j);
        let phi_x = u as f64 * (3.0 * f(ii) - 4.0 * f(ii - u) + f(ii - 2 * u)) / (2.0 * h);
        k * psi_xx / (phi * psi) - v * phi_x
    }

    /// `∂_s ψ` at a pole (`±1` for a smooth metric).
    fn pole_slope(&self, right: bool) -> f64 {
        let p = self.pole_index(right);
        self.d1(|j| self.psi_at(j), p as isize) / self.phi[p]
    }

    /// Radial curvature at a pole, `lim -ψ_ss/ψ = -ψ_sss/ψ_s`.
    fn pole_radial(&self, right: bool) -> f64 {
        let p = self.pole_index(right) as isize;
        let psi_x = self.d1(|j| self.psi_at(j), p);
        let psi_xx = self.d2(|j| self.psi_at(j), p);
        let psi_xxx = self.d3(|j| self.psi_at(j), p);
        let phi = self.phi[p as usize];
        let phi_x = self.d1(|j| self.phi_at(j), p);
        let phi_xx = self.d2(|j| self.phi_at(j), p);
        let psi_sss = psi_xxx / phi.powi(3) - 3.0 * phi_x * psi_xx / phi.powi(4)
            + psi_x * (3.0 * phi_x * phi_x / phi.powi(5) - phi_xx / phi.powi(4));
        -psi_sss / (psi_x / phi)
    }

    /// Spherical curvature at a pole, extrapolated from the first three
    /// interior points as an even function of the distance to the pole.
    fn pole_spherical(&self, right: bool) -> f64 {
        let m = self.intervals();
        let k = |d: usize| self.pointwise(if right { m - d } else { d }).spherical;
        1.5 * k(1) - 0.6 * k(2) + 0.1 * k(3)
    }

    /// Limits of `(L, K)` at both poles. Fails if pole regularity is lost.
    pub fn pole_limits(&self) -> Result<PoleLimits> {
        let mut out = [(0.0, 0.0); 2];
        for (slot, right) in [(0, false), (1, true)] {
            let slope = self.pole_slope(right);
            if (slope.abs() - 1.0).abs() > POLE_REGULARITY_TOL {
                return Err(Error::InvalidState(format!(
                    "pole regularity lost: |psi_s| = {} at x = {}",
                    slope.abs(),
                    if right { 1 } else { 0 }
                )));
            }
            out[slot] = (self.pole_radial(right), self.pole_spherical(right));
        }
        Ok(PoleLimits {
            left: out[0],
            right: out[1],
        })
    }

    /// `(L, K)` at an interior grid index.
    pub fn sectional_at(&self, i: usize) -> Result<(f64, f64)> {
        self.check_interior(i)?;
        let p = self.pointwise(i);
        Ok((p.radial, p.spherical))
    }

    fn check_interior(&self, i: usize) -> Result<()> {
        let m = self.intervals();
        if i == 0 || i >= m {
            return Err(Error::InvalidLocation {
                index: i,
                reason: format!("need an interior index in 1..{m}; use pole_limits at the poles"),
            });
        }
        Ok(())
    }

    fn tensor_from(&self, radial: f64, spherical: f64) -> Result<Riem4Tensor> {
        let n = self.n_fiber + 1;
        let table = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                0.0
            } else if i == 0 || j == 0 {
                radial
            } else {
                spherical
            }
        });
        Riem4Tensor::from_sectional(&table)
    }

    fn norm_from(&self, radial: f64, spherical: f64) -> f64 {
        let k = self.n_fiber;
        sectional_norm([(radial, k), (spherical, k * (k - 1) / 2)])
    }
}

impl FlowAnsatz for WarpedSphereState {
    fn dimension(&self) -> usize {
        self.n_fiber + 1
    }

    /// `[φ_0..φ_M, ψ_0..ψ_M]`.
    fn coords(&self) -> Vec<f64> {
        self.phi.iter().chain(&self.psi).copied().collect()
    }

    fn with_coords(&self, coords: &[f64]) -> Result<Self> {
        let len = self.phi.len();
        if coords.len() != 2 * len {
            return Err(Error::InvalidArgument("warped state coordinate length mismatch".into()));
        }
        let state = Self {
            n_fiber: self.n_fiber,
            phi: coords[..len].to_vec(),
            psi: coords[len..].to_vec(),
        };
        state.check_positive()?;
        Ok(state)
    }

    fn flow_vector_field(&self) -> Result<Vec<f64>> {
        self.check_positive()?;
        let m = self.intervals();
        let k = self.n_fiber as f64;
        let mut dphi = vec![0.0; m + 1];
        let mut dpsi = vec![0.0; m + 1];
        for i in 1..m {
            let p = self.pointwise(i);
            dpsi[i] = -self.psi[i] * (p.radial + (k - 1.0) * p.spherical);
            dphi[i] = self.phi_rate(i);
        }
        // Poles: keep φ equal to ∂_x ψ there, so |ψ_s| = 1 is carried along.
        let h = self.dx();
        dphi[0] = (16.0 * dpsi[1] - 2.0 * dpsi[2]) / (12.0 * h);
        dphi[m] = (16.0 * dpsi[m - 1] - 2.0 * dpsi[m - 2]) / (12.0 * h);
        let out: Vec<f64> = dphi.into_iter().chain(dpsi).collect();
        if out.iter().any(|v| !v.is_finite()) {
            return Err(Error::DegenerateMetric("non-finite flow vector field".into()));
        }
        Ok(out)
    }

    /// Orthonormal frame `(∂_s, fiber directions)` at an interior grid point.
    fn curvature_at(&self, location: Option<usize>) -> Result<(Metric, Riem4Tensor)> {
        let i = location.ok_or_else(|| Error::InvalidLocation {
            index: 0,
            reason: "warped states need a grid index".into(),
        })?;
        let (l, k) = self.sectional_at(i)?;
        Ok((Metric::euclidean(self.dimension()), self.tensor_from(l, k)?))
    }

    fn metric_velocity(&self, derivative: &[f64], location: Option<usize>) -> Result<Sym2Tensor> {
        let i = location.ok_or_else(|| Error::InvalidLocation {
            index: 0,
            reason: "warped states need a grid index".into(),
        })?;
        self.check_interior(i)?;
        let len = self.phi.len();
        let radial = 2.0 * derivative[i] / self.phi[i];
        let spherical = 2.0 * derivative[len + i] / self.psi[i];
        let diag: Vec<f64> = (0..self.dimension())
            .map(|a| if a == 0 { radial } else { spherical })
            .collect();
        Ok(Sym2Tensor::diagonal(&diag))
    }

    /// Both poles (through [`pole_limits`](Self::pole_limits)) and every interior point.
    fn curvature_samples(&self) -> Result<Vec<(Metric, Riem4Tensor)>> {
        let poles = self.pole_limits()?;
        let g = Metric::euclidean(self.dimension());
        let mut out = Vec::with_capacity(self.phi.len());
        out.push((g.clone(), self.tensor_from(poles.left.0, poles.left.1)?));
        for i in 1..self.intervals() {
            let p = self.pointwise(i);
            out.push((g.clone(), self.tensor_from(p.radial, p.spherical)?));
        }
        out.push((g, self.tensor_from(poles.right.0, poles.right.1)?));
        Ok(out)
    }

    fn max_curvature_norm(&self) -> Result<f64> {
        let poles = self.pole_limits()?;
        let mut worst = self
            .norm_from(poles.left.0, poles.left.1)
            .max(self.norm_from(poles.right.0, poles.right.1));
        for i in 1..self.intervals() {
            let p = self.pointwise(i);
            worst = worst.max(self.norm_from(p.radial, p.spherical));
        }
        if !worst.is_finite() {
            return Err(Error::DegenerateMetric("non-finite curvature".into()));
        }
        Ok(worst)
    }

    /// `min((min φ dx)^2, 1/|Rm|_max)`: the parabolic CFL scale and the reaction scale.
    fn stability_scale(&self) -> Result<f64> {
        let min_phi = self.phi.iter().copied().fold(f64::INFINITY, f64::min);
        let cfl = (min_phi * self.dx()).powi(2);
        let rm = self.max_curvature_norm()?;
        Ok(if rm > 0.0 { cfl.min(1.0 / rm) } else { cfl })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_sphere_has_unit_curvature() {
        let s = WarpedSphereState::round(3, 200).unwrap();
        for i in [1, 7, 50, 100, 199] {
            let (l, k) = s.sectional_at(i).unwrap();
            // next to a pole K loses two orders to the 1/psi^2 cancellation
            assert!((l - 1.0).abs() < 1e-4, "L at {i} = {l}");
            assert!((k - 1.0).abs() < 1e-4, "K at {i} = {k}");
        }
        let poles = s.pole_limits().unwrap();
        for (l, k) in [poles.left, poles.right] {
            assert!((l - 1.0).abs() < 1e-4 && (k - 1.0).abs() < 1e-4, "pole ({l}, {k})");
        }
    }

    #[test]
    fn round_sphere_flow_is_homothetic() {
        // ψ_t = -k ψ and φ_t = -k φ for the unit sphere (Rc = k g).
        let s = WarpedSphereState::round(3, 100).unwrap();
        let v = s.flow_vector_field().unwrap();
        let len = s.phi().len();
        for i in 1..len - 1 {
            assert!((v[i] + 3.0 * s.phi()[i]).abs() < 1e-4, "phi_t at {i}");
        }
        for i in 0..len {
            assert!((v[len + i] + 3.0 * s.psi()[i]).abs() < 1e-4, "psi_t at {i}");
        }
        let pole_error = |m: usize| {
            let s = WarpedSphereState::round(3, m).unwrap();
            (s.flow_vector_field().unwrap()[0] + 3.0 * s.phi()[0]).abs()
        };
        let (coarse, fine) = (pole_error(100), pole_error(200));
        assert!(coarse < 1e-3 && coarse / fine > 3.0, "pole phi_t errors {coarse:e} {fine:e}");
    }

    #[test]
    fn pole_index_is_invalid_location() {
        let s = WarpedSphereState::round(3, 50).unwrap();
        assert!(matches!(s.curvature_at(Some(0)), Err(Error::InvalidLocation { .. })));
        assert!(matches!(s.curvature_at(Some(50)), Err(Error::InvalidLocation { .. })));
        assert!(s.curvature_at(Some(25)).is_ok());
    }

    #[test]
    fn irregular_pole_is_rejected() {
        let r = WarpedSphereState::from_profiles(3, 50, |_| PI, |x| (PI * x).sin() / PI);
        assert!(matches!(r, Err(Error::InvalidState(_))));
    }

    #[test]
    fn nonpositive_interior_psi_is_degenerate() {
        let s = WarpedSphereState::round(3, 50).unwrap();
        let mut c = s.coords();
        c[51 + 10] = -1e-3;
        assert!(matches!(s.with_coords(&c), Err(Error::DegenerateMetric(_))));
    }

    #[test]
    fn dumbbell_poles_are_symmetric() {
        let s = WarpedSphereState::dumbbell(3, 120, 0.8).unwrap();
        let p = s.pole_limits().unwrap();
        assert!((p.left.0 - p.right.0).abs() < 1e-9 * p.left.0.abs());
        assert!((p.left.1 - p.right.1).abs() < 1e-9 * p.left.1.abs());
    }
}
