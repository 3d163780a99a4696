//! Time integration of the scenario flows with the monitor attached.

use crate::error::{Error, Result};
use crate::geometry::FlowAnsatz;
use crate::monitor::{MonitorConfig, MonitorState, PinchSample, PointCurvature};

/// Consecutive step halvings tolerated after degenerate trial states.
pub const MAX_HALVINGS: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Rk4Fixed,
    /// Step doubling with local error control.
    Rk4Adaptive,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Rk4Fixed => "rk4-fixed",
            Method::Rk4Adaptive => "rk4-adaptive",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "rk4-fixed" => Some(Method::Rk4Fixed),
            "rk4-adaptive" => Some(Method::Rk4Adaptive),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntegratorConfig {
    pub method: Method,
    pub dt_initial: f64,
    /// `σ`: every step satisfies `dt <= σ * stability_scale(state)`.
    pub dt_safety: f64,
    pub t_max: f64,
    pub blowup_threshold: f64,
    pub tol_step: f64,
    /// Monitor every k-th accepted step (the final step is always monitored).
    pub sample_stride: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            method: Method::Rk4Fixed,
            dt_initial: 1e-4,
            dt_safety: 0.2,
            t_max: 1.0,
            blowup_threshold: 1e8,
            tol_step: 1e-10,
            sample_stride: 1,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidConfig(what.to_string()));
        if !(self.dt_initial > 0.0) {
            return bad("dt must be positive");
        }
        if !(self.dt_safety > 0.0 && self.dt_safety <= 1.0) {
            return bad("dt_safety must lie in (0, 1]");
        }
        if !(self.t_max >= 0.0) {
            return bad("t_max must be nonnegative");
        }
        if !(self.blowup_threshold > 0.0) {
            return bad("blowup_threshold must be positive");
        }
        if !(self.tol_step > 0.0) {
            return bad("tol_step must be positive");
        }
        if self.sample_stride == 0 {
            return bad("sample_stride must be at least 1");
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    Horizon,
    BlowupThresholdHit,
    DegenerateState,
    StepUnderflow,
}

impl Termination {
    pub fn name(self) -> &'static str {
        match self {
            Termination::Horizon => "horizon",
            Termination::BlowupThresholdHit => "blowup_threshold_hit",
            Termination::DegenerateState => "degenerate_state",
            Termination::StepUnderflow => "step_underflow",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        [
            Termination::Horizon,
            Termination::BlowupThresholdHit,
            Termination::DegenerateState,
            Termination::StepUnderflow,
        ]
        .into_iter()
        .find(|t| t.name() == s)
    }

    pub fn is_numerical_failure(self) -> bool {
        matches!(self, Termination::DegenerateState | Termination::StepUnderflow)
    }
}

#[derive(Clone, Debug)]
pub struct FlowTrace {
    pub samples: Vec<PinchSample>,
    pub termination: Termination,
    pub t_final: f64,
    pub steps: usize,
    /// What went wrong, for numerical failures.
    pub failure: Option<String>,
    /// Monitor constants and final running max.
    pub monitor: MonitorState,
}

/// One classical RK4 step. Intermediate stages that leave the admissible
/// region surface as errors.
pub fn step<S: FlowAnsatz>(state: &S, dt: f64) -> Result<S> {
    if !(dt > 0.0) {
        return Err(Error::InvalidArgument(format!("dt must be positive, got {dt}")));
    }
    let y = state.coords();
    let axpy = |k: &[f64], h: f64| -> Vec<f64> { y.iter().zip(k).map(|(a, b)| a + h * b).collect() };
    let k1 = state.flow_vector_field()?;
    let k2 = state.with_coords(&axpy(&k1, 0.5 * dt))?.flow_vector_field()?;
    let k3 = state.with_coords(&axpy(&k2, 0.5 * dt))?.flow_vector_field()?;
    let k4 = state.with_coords(&axpy(&k3, dt))?.flow_vector_field()?;
    let next: Vec<f64> = (0..y.len())
        .map(|i| y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect();
    if next.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidState("non-finite state after step".into()));
    }
    state.with_coords(&next)
}

enum Attempt<S> {
    Accept { next: S, dt_next: f64 },
    Reject { dt_next: f64 },
}

fn attempt<S: FlowAnsatz>(state: &S, dt: f64, cfg: &IntegratorConfig, dt_nominal: f64) -> Result<Attempt<S>> {
    match cfg.method {
        Method::Rk4Fixed => Ok(Attempt::Accept {
            next: step(state, dt)?,
            dt_next: dt_nominal,
        }),
        Method::Rk4Adaptive => {
            let coarse = step(state, dt)?;
            let fine = step(&step(state, 0.5 * dt)?, 0.5 * dt)?;
            let (yc, yf) = (coarse.coords(), fine.coords());
            let scale = yf.iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(1e-300);
            let diff = yc.iter().zip(&yf).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
            let err = diff / (15.0 * scale);
            let factor = if err > 0.0 {
                (0.9 * (cfg.tol_step / err).powf(0.2)).clamp(0.2, 5.0)
            } else {
                5.0
            };
            if err <= cfg.tol_step {
                Ok(Attempt::Accept {
                    next: fine,
                    dt_next: dt * factor,
                })
            } else {
                Ok(Attempt::Reject { dt_next: dt * factor })
            }
        }
    }
}

/// Data handed to the per-step hook.
pub struct StepInfo<'a, S> {
    pub step: usize,
    pub t: f64,
    pub dt: f64,
    pub state: &'a S,
}

pub fn run<S: FlowAnsatz>(
    initial: &S,
    integrator: &IntegratorConfig,
    monitor: &MonitorConfig,
) -> Result<FlowTrace> {
    run_with_hook(initial, integrator, monitor, |_| {}).map(|(trace, _)| trace)
}

/// Integrates until the horizon, the blowup threshold, or a numerical failure.
/// `hook` sees every accepted step. Returns the trace and the final state.
///
/// Errors are reserved for invalid configuration and an unusable initial
/// state; failures during the run end it with the matching [`Termination`].
pub fn run_with_hook<S: FlowAnsatz>(
    initial: &S,
    integrator: &IntegratorConfig,
    monitor_config: &MonitorConfig,
    mut hook: impl FnMut(&StepInfo<S>),
) -> Result<(FlowTrace, S)> {
    integrator.validate()?;
    let mut state = initial.clone();
    let mut monitor = MonitorState::new(
        state.dimension(),
        monitor_config,
        &PointCurvature::of_scenario(&state)?,
    )?;
    let mut samples = vec![monitor.observe_state(0.0, &state)?];

    let t_max = integrator.t_max;
    let mut t = 0.0;
    let mut steps = 0;
    let mut dt_nominal = integrator.dt_initial;
    let mut failure = None;

    let termination = if samples[0].rm_max > integrator.blowup_threshold {
        Termination::BlowupThresholdHit
    } else {
        'outer: loop {
            if t >= t_max {
                break Termination::Horizon;
            }
            let limit = match state.stability_scale() {
                Ok(s) => integrator.dt_safety * s,
                Err(e) => {
                    failure = Some(format!("step {steps}: {e}"));
                    break Termination::DegenerateState;
                }
            };
            let mut dt = dt_nominal.min(limit).min(t_max - t);
            let mut halvings = 0;
            let mut rejections = 0;
            let next = loop {
                match attempt(&state, dt, integrator, dt_nominal) {
                    Ok(Attempt::Accept { next, dt_next }) => {
                        dt_nominal = dt_next;
                        break next;
                    }
                    Ok(Attempt::Reject { dt_next }) => {
                        rejections += 1;
                        dt = dt_next;
                        if rejections > 100 || dt <= f64::EPSILON * t.max(1.0) {
                            failure = Some(format!("step {steps}: local error control stalled at dt = {dt:e}"));
                            break 'outer Termination::StepUnderflow;
                        }
                    }
                    Err(e) => {
                        if halvings == MAX_HALVINGS {
                            failure = Some(format!("step {steps}: {e} after {MAX_HALVINGS} halvings"));
                            break 'outer Termination::StepUnderflow;
                        }
                        halvings += 1;
                        dt *= 0.5;
                    }
                }
            };
            t = if dt >= t_max - t { t_max } else { t + dt };
            steps += 1;
            state = next;
            hook(&StepInfo {
                step: steps,
                t,
                dt,
                state: &state,
            });

            let rm = match state.max_curvature_norm() {
                Ok(v) if v.is_finite() => v,
                Ok(v) => {
                    failure = Some(format!("step {steps}: |Rm|_max = {v}"));
                    break Termination::DegenerateState;
                }
                Err(e) => {
                    failure = Some(format!("step {steps}: {e}"));
                    break Termination::DegenerateState;
                }
            };
            let blown_up = rm > integrator.blowup_threshold;
            if steps % integrator.sample_stride == 0 || blown_up || t >= t_max {
                match monitor.observe_state(t, &state) {
                    Ok(s) => samples.push(s),
                    Err(e) => {
                        failure = Some(format!("step {steps}: {e}"));
                        break Termination::DegenerateState;
                    }
                }
            }
            if blown_up {
                break Termination::BlowupThresholdHit;
            }
        }
    };

    Ok((
        FlowTrace {
            samples,
            termination,
            t_final: t,
            steps,
            failure,
            monitor,
        },
        state,
    ))
}
