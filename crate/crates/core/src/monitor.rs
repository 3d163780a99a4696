//! Pinching quantities along a flow and the barrier they are compared against.
//!
//! With `a = |F|`, `b = R + c` and `φ = a/b`, the monitored claim is
//! `max φ(t) <= Φ(t) = C1 + C2 max_{s<=t} sqrt(|W|_max(s) / b_min(s))`, where
//! `C1 = max{α² + β, φ_max(0) + ε}`, `C2 = γ`, `α² = c1`, `β² = (n-2)/(n(n-1))`,
//! `γ² = c2`, and `c1`, `c2` bound `|(2/(n-2)) tr F³| <= c1 a³` and
//! `|W(F,F)| <= c2 |W| a²`.

use crate::algebra::{decompose, tr_f_cubed, weyl_quadratic, Metric, Riem4Tensor};
use crate::error::{Error, Result};
use crate::geometry::{FlowAnsatz, Scenario};

/// `c1 = 2/sqrt(n(n-1))`, from the sharp bound `|tr F³| <= (n-2)/sqrt(n(n-1)) |F|³`.
pub fn default_c1(n: usize) -> f64 {
    let n = n as f64;
    2.0 / (n * (n - 1.0)).sqrt()
}

/// `c2 = 1` (Cauchy–Schwarz on the full contraction).
pub fn default_c2(_n: usize) -> f64 {
    1.0
}

/// `β = sqrt((n-2)/(n(n-1)))`.
pub fn beta(n: usize) -> f64 {
    let n = n as f64;
    ((n - 2.0) / (n * (n - 1.0))).sqrt()
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonitorConfig {
    pub c_override: Option<f64>,
    pub epsilon: f64,
    /// `None` selects [`default_c1`].
    pub c1: Option<f64>,
    /// `None` selects [`default_c2`].
    pub c2: Option<f64>,
    pub tolerance_rel: f64,
}

impl MonitorConfig {
    /// Defaults for the spatially homogeneous families.
    pub fn ode() -> Self {
        Self {
            c_override: None,
            epsilon: 1e-3,
            c1: None,
            c2: None,
            tolerance_rel: 1e-6,
        }
    }

    /// Defaults for the warped PDE family.
    pub fn pde() -> Self {
        Self {
            tolerance_rel: 1e-3,
            ..Self::ode()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0) {
            return Err(Error::InvalidConfig(format!("epsilon must be positive, got {}", self.epsilon)));
        }
        for (name, v) in [("c1", self.c1), ("c2", self.c2)] {
            if let Some(v) = v {
                if !(v > 0.0) {
                    return Err(Error::InvalidConfig(format!("{name} must be positive, got {v}")));
                }
            }
        }
        if let Some(c) = self.c_override {
            if !(c >= 0.0) {
                return Err(Error::InvalidConfig(format!("c must be nonnegative, got {c}")));
            }
        }
        if !(self.tolerance_rel >= 0.0) {
            return Err(Error::InvalidConfig("tolerance must be nonnegative".into()));
        }
        Ok(())
    }
}

impl Default for MonitorConfig {
    fn default() -> Self {
        Self::ode()
    }
}

/// Curvature scalars the monitor needs at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointCurvature {
    pub scalar: f64,
    /// `a = |F|`.
    pub norm_f: f64,
    pub norm_w: f64,
    pub norm_rm: f64,
    pub tr_f3: f64,
    /// `W(F, F)`, see [`weyl_quadratic`].
    pub wff: f64,
}

impl PointCurvature {
    pub fn from_tensors(rm: &Riem4Tensor, g: &Metric) -> Result<Self> {
        let d = decompose(rm, g)?;
        Ok(Self {
            scalar: d.scalar,
            norm_f: d.norm_f,
            norm_w: d.norm_w,
            norm_rm: d.norm_rm,
            tr_f3: tr_f_cubed(&d.trace_free_ricci, g)?,
            wff: weyl_quadratic(&d.w, &d.trace_free_ricci, g)?,
        })
    }

    pub fn of_scenario<S: FlowAnsatz>(state: &S) -> Result<Vec<Self>> {
        state
            .curvature_samples()?
            .iter()
            .map(|(g, rm)| Self::from_tensors(rm, g))
            .collect()
    }
}

/// Additive constant `c >= 0` making `R_min(0) + c > 0`.
///
/// An override is used when it works; otherwise `c = 0` for positive `R_min(0)`
/// and `c = 1 - R_min(0)` (so `b_min(0) = 1`) otherwise.
pub fn choose_c(r_min_initial: f64, c_override: Option<f64>) -> Result<f64> {
    match c_override {
        Some(c) if c >= 0.0 && r_min_initial + c > 0.0 => Ok(c),
        Some(c) => Err(Error::InvalidConfig(format!(
            "c = {c} does not make R_min(0) + c = {} positive",
            r_min_initial + c
        ))),
        None if r_min_initial > 0.0 => Ok(0.0),
        None => Ok(1.0 - r_min_initial),
    }
}

/// Reaction term
/// `ρ = ((n-2)/(n(n-1)))(b-c) - (2/(n-2)) tr F³/a² + W(F,F)/a² - (b-c)²/(nb) - a φ`
/// with `φ = a/b`. Undefined for `a = 0`.
pub fn reaction_term(a: f64, b: f64, c: f64, tr_f3: f64, wff: f64, n: usize) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "reaction term needs a > 0 and b > 0, got a = {a}, b = {b}"
        )));
    }
    let nf = n as f64;
    let r = b - c;
    Ok((nf - 2.0) / (nf * (nf - 1.0)) * r - 2.0 / (nf - 2.0) * tr_f3 / (a * a) + wff / (a * a)
        - r * r / (nf * b)
        - a * (a / b))
}

/// Upper bound for `ρ` obtained from the `c1`, `c2` estimates:
/// `((n-2)/(n(n-1)))(b-c) + c1 a + c2 |W| - (b-c)²/(nb) - a²/b`.
pub fn reaction_upper_bound(a: f64, b: f64, c: f64, norm_w: f64, n: usize, c1: f64, c2: f64) -> f64 {
    let nf = n as f64;
    let r = b - c;
    (nf - 2.0) / (nf * (nf - 1.0)) * r + c1 * a + c2 * norm_w - r * r / (nf * b) - a * a / b
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonitorState {
    pub n: usize,
    pub c: f64,
    pub c1: f64,
    pub c2: f64,
    pub alpha_sq: f64,
    pub beta: f64,
    pub gamma: f64,
    pub epsilon: f64,
    pub big_c1: f64,
    pub big_c2: f64,
    /// Max over observed times of `sqrt(|W|_max / b_min)`.
    pub running_max: f64,
    pub phi0_max: f64,
    pub tolerance_rel: f64,
}

impl MonitorState {
    /// Fixes `c` and the barrier constants from the initial curvature.
    pub fn new(n: usize, config: &MonitorConfig, initial: &[PointCurvature]) -> Result<Self> {
        config.validate()?;
        if n < 3 {
            return Err(Error::UnsupportedDimension(n));
        }
        if initial.is_empty() {
            return Err(Error::InvalidSample("no initial sample points".into()));
        }
        let r_min = initial.iter().map(|p| p.scalar).fold(f64::INFINITY, f64::min);
        let c = choose_c(r_min, config.c_override)?;
        let phi0_max = initial
            .iter()
            .map(|p| pinch_ratio(p.norm_f, p.scalar + c))
            .fold(0.0, f64::max);
        let c1 = config.c1.unwrap_or_else(|| default_c1(n));
        let c2 = config.c2.unwrap_or_else(|| default_c2(n));
        let alpha_sq = c1;
        let beta = beta(n);
        let gamma = c2.sqrt();
        Ok(Self {
            n,
            c,
            c1,
            c2,
            alpha_sq,
            beta,
            gamma,
            epsilon: config.epsilon,
            big_c1: (alpha_sq + beta).max(phi0_max + config.epsilon),
            big_c2: gamma,
            running_max: 0.0,
            phi0_max,
            tolerance_rel: config.tolerance_rel,
        })
    }

    /// Updates the running max with `sqrt(w_max / b_min)` and returns `Φ`.
    pub fn barrier(&mut self, w_max: f64, b_min: f64) -> Result<f64> {
        if !(b_min > 0.0) {
            return Err(Error::InvalidSample(format!("b_min = {b_min} is not positive")));
        }
        if !(w_max >= 0.0) {
            return Err(Error::InvalidSample(format!("|W|_max = {w_max} is not nonnegative")));
        }
        self.running_max = self.running_max.max((w_max / b_min).sqrt());
        Ok(self.big_c1 + self.big_c2 * self.running_max)
    }

    /// The threshold `(α² + β) b + γ sqrt(b |W|)` on `a` above which `ρ <= 0`.
    pub fn crossing_threshold(&self, b: f64, norm_w: f64) -> f64 {
        (self.alpha_sq + self.beta) * b + self.gamma * (b * norm_w).sqrt()
    }

    /// Reduces the curvature at all sample points to one [`PinchSample`].
    pub fn observe(&mut self, t: f64, points: &[PointCurvature]) -> Result<PinchSample> {
        if points.is_empty() {
            return Err(Error::InvalidSample("no sample points".into()));
        }
        let c = self.c;
        let mut r_min = f64::INFINITY;
        let mut r_max = f64::NEG_INFINITY;
        let mut a_max = 0.0_f64;
        let mut w_max = 0.0_f64;
        let mut rm_max = 0.0_f64;
        let mut arg = 0;
        let mut phi_max = f64::NEG_INFINITY;
        for (i, p) in points.iter().enumerate() {
            r_min = r_min.min(p.scalar);
            r_max = r_max.max(p.scalar);
            a_max = a_max.max(p.norm_f);
            w_max = w_max.max(p.norm_w);
            rm_max = rm_max.max(p.norm_rm);
            let phi = pinch_ratio(p.norm_f, p.scalar + c);
            if phi > phi_max {
                phi_max = phi;
                arg = i;
            }
        }
        let b_min = r_min + c;
        let phi_barrier = self.barrier(w_max, b_min)?;
        let at = &points[arg];
        let rho_at_argmax = if at.norm_f > 0.0 {
            reaction_term(at.norm_f, at.scalar + c, c, at.tr_f3, at.wff, self.n)?
        } else {
            0.0
        };
        let sample = PinchSample {
            t,
            r_min,
            r_max,
            b_min,
            a_max,
            w_max,
            phi_max,
            phi_barrier,
            margin: phi_barrier - phi_max,
            rho_at_argmax,
            rm_max,
        };
        if !sample.is_finite() {
            return Err(Error::InvalidSample(format!("non-finite monitored quantity at t = {t}")));
        }
        Ok(sample)
    }

    pub fn observe_state<S: FlowAnsatz>(&mut self, t: f64, state: &S) -> Result<PinchSample> {
        let points = PointCurvature::of_scenario(state)?;
        self.observe(t, &points)
    }
}

fn pinch_ratio(a: f64, b: f64) -> f64 {
    if a == 0.0 {
        0.0
    } else {
        a / b
    }
}

/// One monitor record.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PinchSample {
    pub t: f64,
    pub r_min: f64,
    pub r_max: f64,
    pub b_min: f64,
    pub a_max: f64,
    pub w_max: f64,
    pub phi_max: f64,
    /// Barrier value `Φ(t)`.
    pub phi_barrier: f64,
    pub margin: f64,
    /// `ρ` at the point where `φ` is largest; 0 when `a` vanishes there.
    pub rho_at_argmax: f64,
    pub rm_max: f64,
}

impl PinchSample {
    pub fn fields(&self) -> [f64; 11] {
        [
            self.t,
            self.r_min,
            self.r_max,
            self.b_min,
            self.a_max,
            self.w_max,
            self.phi_max,
            self.phi_barrier,
            self.margin,
            self.rho_at_argmax,
            self.rm_max,
        ]
    }

    pub fn from_fields(f: [f64; 11]) -> Self {
        Self {
            t: f[0],
            r_min: f[1],
            r_max: f[2],
            b_min: f[3],
            a_max: f[4],
            w_max: f[5],
            phi_max: f[6],
            phi_barrier: f[7],
            margin: f[8],
            rho_at_argmax: f[9],
            rm_max: f[10],
        }
    }

    pub fn is_finite(&self) -> bool {
        self.fields().iter().all(|v| v.is_finite())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

/// Pass iff `φ_max <= Φ (1 + tol) + tol`.
pub fn verdict(sample: &PinchSample, tol: f64) -> Verdict {
    if sample.phi_max <= sample.phi_barrier * (1.0 + tol) + tol {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

/// Residuals of the pointwise evolution equations over one step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvolutionResiduals {
    /// `|F|²` equation.
    pub f2: f64,
    /// `b` equation.
    pub b: f64,
}

struct EvolutionTerms {
    f2: f64,
    b: f64,
    rhs_f2: f64,
    rhs_b: f64,
}

fn evolution_terms(state: &Scenario, c: f64) -> Result<EvolutionTerms> {
    let grad_sq = state.trace_free_ricci_gradient_sq().ok_or_else(|| {
        Error::UnsupportedCheck(format!(
            "{} states have spatial terms; evolution residuals need a homogeneous family",
            state.family_name()
        ))
    })??;
    let (g, rm) = state.curvature_at(None)?;
    let p = PointCurvature::from_tensors(&rm, &g)?;
    let n = state.dimension() as f64;
    let a2 = p.norm_f * p.norm_f;
    let r = p.scalar;
    Ok(EvolutionTerms {
        f2: a2,
        b: r + c,
        rhs_f2: -2.0 * grad_sq + 4.0 * (n - 2.0) / (n * (n - 1.0)) * r * a2
            - 8.0 / (n - 2.0) * p.tr_f3
            + 4.0 * p.wff,
        rhs_b: 2.0 * a2 + 2.0 / n * r * r,
    })
}

/// Compares the difference quotient over `[t, t + dt]` with the average of the
/// right-hand sides at both ends (centered at `t + dt/2`, so `O(dt²)`):
///
/// ```text
/// d/dt |F|² = -2|∇F|² + (4(n-2)/(n(n-1))) R |F|² - (8/(n-2)) tr F³ + 4 W(F,F)
/// d/dt b    = 2 a² + (2/n)(b - c)²
/// ```
///
/// Laplacian terms vanish because the curvature scalars are spatially constant.
/// Residuals are relative to `|RHS|` plus a small floor.
pub fn evolution_residuals(
    before: &Scenario,
    after: &Scenario,
    dt: f64,
    c: f64,
) -> Result<EvolutionResiduals> {
    if !(dt > 0.0) {
        return Err(Error::InvalidArgument(format!("dt must be positive, got {dt}")));
    }
    let x0 = evolution_terms(before, c)?;
    let x1 = evolution_terms(after, c)?;
    let scale = x0.b.abs().max((x0.b - c).abs()).max(x0.f2.sqrt()).max(1e-300);
    let floor = 1e-12 * scale * scale;
    let residual = |lhs: f64, rhs: f64| (lhs - rhs).abs() / (rhs.abs() + floor);
    Ok(EvolutionResiduals {
        f2: residual((x1.f2 - x0.f2) / dt, 0.5 * (x0.rhs_f2 + x1.rhs_f2)),
        b: residual((x1.b - x0.b) / dt, 0.5 * (x0.rhs_b + x1.rhs_b)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn choose_c_rule() {
        assert_eq!(choose_c(6.0, None).unwrap(), 0.0);
        assert_eq!(choose_c(-1.5, None).unwrap(), 2.5);
        assert_eq!(choose_c(0.0, None).unwrap(), 1.0);
        assert_eq!(choose_c(-1.0, Some(3.0)).unwrap(), 3.0);
        assert!(matches!(choose_c(-1.0, Some(0.5)), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn reaction_term_direct_substitution() {
        // n = 3, b = 6, a = sqrt(6), c = 0, no cubic or Weyl terms: 1 - 2 - 1.
        let rho = reaction_term(6.0_f64.sqrt(), 6.0, 0.0, 0.0, 0.0, 3).unwrap();
        assert!((rho + 2.0).abs() < 1e-14);
        assert!(reaction_term(0.0, 1.0, 0.0, 0.0, 0.0, 3).is_err());
    }

    #[test]
    fn dimension_three_constants() {
        let p = PointCurvature {
            scalar: 6.0,
            norm_f: 0.0,
            norm_w: 0.0,
            norm_rm: 1.0,
            tr_f3: 0.0,
            wff: 0.0,
        };
        let m = MonitorState::new(3, &MonitorConfig::ode(), &[p]).unwrap();
        assert!((m.alpha_sq - 2.0 / 6.0_f64.sqrt()).abs() < 1e-15);
        assert!((m.beta * m.beta - 1.0 / 6.0).abs() < 1e-15);
        assert!((m.big_c1 - 6.0_f64.sqrt() / 2.0).abs() < 1e-15);
        assert_eq!(m.big_c2, 1.0);
    }

    #[test]
    fn barrier_keeps_running_max() {
        let mut m = MonitorState::new(
            4,
            &MonitorConfig::ode(),
            &[PointCurvature {
                scalar: 1.0,
                norm_f: 0.1,
                norm_w: 0.0,
                norm_rm: 1.0,
                tr_f3: 0.0,
                wff: 0.0,
            }],
        )
        .unwrap();
        let first = m.barrier(4.0, 1.0).unwrap();
        let second = m.barrier(1.0, 1.0).unwrap();
        assert_eq!(first, second);
        assert_eq!(first, m.big_c1 + 2.0);
        assert!(matches!(m.barrier(1.0, 0.0), Err(Error::InvalidSample(_))));
    }

    #[test]
    fn verdict_definition() {
        let mut s = PinchSample::from_fields([0.0; 11]);
        s.phi_barrier = 1.0;
        s.phi_max = 0.0;
        assert_eq!(verdict(&s, 1e-6), Verdict::Pass);
        s.phi_max = 2.0;
        assert_eq!(verdict(&s, 1e-6), Verdict::Fail);
        s.phi_max = 1.0 + 1e-7;
        assert_eq!(verdict(&s, 1e-6), Verdict::Pass);
    }

    #[test]
    fn invalid_config_rejected() {
        let cfg = MonitorConfig {
            epsilon: 0.0,
            ..MonitorConfig::ode()
        };
        assert!(cfg.validate().is_err());
    }
}
