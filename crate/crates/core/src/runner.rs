//! Config-driven runs and re-verdicts of saved traces.

use std::env;
use std::path::{Path, PathBuf};

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::flow::{run, FlowTrace, Termination};
use crate::monitor::{beta, default_c1, default_c2, verdict, PinchSample, Verdict};
use crate::trace::{read_meta, read_trace, write_meta, write_trace, TraceMeta};

/// When set, relative output paths are resolved against this directory.
pub const OUTPUT_DIR_ENV: &str = "RICCI_PINCH_OUTPUT_DIR";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERDICT_FAIL: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Clone, Debug, PartialEq)]
pub struct VerdictSummary {
    pub samples: usize,
    pub passed: usize,
    pub failed: usize,
    /// Smallest `Φ - φ_max`; `+inf` for an empty trace.
    pub min_margin: f64,
    pub first_failure_t: Option<f64>,
}

impl VerdictSummary {
    pub fn of(samples: &[PinchSample], tol: f64) -> Self {
        let mut s = Self {
            samples: samples.len(),
            passed: 0,
            failed: 0,
            min_margin: f64::INFINITY,
            first_failure_t: None,
        };
        for sample in samples {
            s.min_margin = s.min_margin.min(sample.margin);
            match verdict(sample, tol) {
                Verdict::Pass => s.passed += 1,
                Verdict::Fail => {
                    s.failed += 1;
                    s.first_failure_t.get_or_insert(sample.t);
                }
            }
        }
        s
    }
}

/// Verdict failures win over numerical failures.
pub fn exit_code(summary: &VerdictSummary, termination: Termination) -> i32 {
    if summary.failed > 0 {
        EXIT_VERDICT_FAIL
    } else if termination.is_numerical_failure() {
        EXIT_NUMERICAL
    } else {
        EXIT_PASS
    }
}

pub fn resolve_output_path(path: &Path) -> PathBuf {
    match env::var_os(OUTPUT_DIR_ENV) {
        Some(dir) if !dir.is_empty() && path.is_relative() => PathBuf::from(dir).join(path),
        _ => path.to_path_buf(),
    }
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub trace: FlowTrace,
    pub summary: VerdictSummary,
    pub output_path: PathBuf,
    pub exit_code: i32,
}

impl RunOutcome {
    pub fn summary_line(&self) -> String {
        let mut line = format!(
            "termination={} t_final={:.6e} steps={} samples={} pass={} fail={} min_margin={:.6e}",
            self.trace.termination.name(),
            self.trace.t_final,
            self.trace.steps,
            self.summary.samples,
            self.summary.passed,
            self.summary.failed,
            self.summary.min_margin,
        );
        if let Some(reason) = &self.trace.failure {
            line.push_str(&format!(" reason=\"{reason}\""));
        }
        line
    }
}

/// Integrates the configured scenario and writes the trace and its sidecar.
pub fn execute(config: &RunConfig) -> Result<RunOutcome> {
    let initial = config.scenario.build()?;
    let trace = run(&initial, &config.integrator, &config.monitor)?;
    let output_path = resolve_output_path(&config.output_path);
    if let Some(parent) = output_path.parent() {
        if !parent.as_os_str().is_empty() && !parent.is_dir() {
            return Err(Error::InvalidArgument(format!(
                "output directory {} does not exist",
                parent.display()
            )));
        }
    }
    write_trace(&output_path, &trace.samples)?;
    write_meta(&output_path, &TraceMeta::from_trace(&trace))?;
    let summary = VerdictSummary::of(&trace.samples, config.monitor.tolerance_rel);
    let exit_code = exit_code(&summary, trace.termination);
    Ok(RunOutcome {
        trace,
        summary,
        output_path,
        exit_code,
    })
}

/// Overrides for a re-verdict. Any of `c1`, `c2`, `epsilon` recomputes `Φ`
/// from the recorded `|W|_max`, `b_min` and the first row's `φ_max`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct VerdictOptions {
    pub n: Option<usize>,
    pub c1: Option<f64>,
    pub c2: Option<f64>,
    pub epsilon: Option<f64>,
    pub tolerance: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct ReVerdict {
    pub samples: Vec<PinchSample>,
    pub summary: VerdictSummary,
    pub termination: Option<Termination>,
    pub exit_code: i32,
}

pub fn reverdict(path: &Path, opts: &VerdictOptions) -> Result<ReVerdict> {
    let mut samples = read_trace(path)?;
    let meta = read_meta(path)?;
    let tol = opts
        .tolerance
        .or(meta.as_ref().map(|m| m.tolerance))
        .unwrap_or(1e-6);
    if !(tol >= 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance {tol} must be nonnegative")));
    }
    if opts.c1.is_some() || opts.c2.is_some() || opts.epsilon.is_some() || opts.n.is_some() {
        let n = opts
            .n
            .or(meta.as_ref().map(|m| m.n))
            .ok_or_else(|| Error::InvalidArgument("recomputing the barrier needs --n".into()))?;
        if n < 3 {
            return Err(Error::UnsupportedDimension(n));
        }
        let c1 = opts.c1.or(meta.as_ref().map(|m| m.c1)).unwrap_or_else(|| default_c1(n));
        let c2 = opts.c2.or(meta.as_ref().map(|m| m.c2)).unwrap_or_else(|| default_c2(n));
        let eps = opts.epsilon.or(meta.as_ref().map(|m| m.epsilon)).unwrap_or(1e-3);
        for (name, v) in [("c1", c1), ("c2", c2), ("epsilon", eps)] {
            if !(v > 0.0) {
                return Err(Error::InvalidArgument(format!("{name} = {v} must be positive")));
            }
        }
        recompute_barrier(&mut samples, n, c1, c2, eps)?;
    }
    let summary = VerdictSummary::of(&samples, tol);
    let termination = meta.map(|m| m.termination);
    let exit_code = exit_code(&summary, termination.unwrap_or(Termination::Horizon));
    Ok(ReVerdict {
        samples,
        summary,
        termination,
        exit_code,
    })
}

fn recompute_barrier(samples: &mut [PinchSample], n: usize, c1: f64, c2: f64, eps: f64) -> Result<()> {
    let Some(first) = samples.first() else {
        return Ok(());
    };
    let big_c1 = (c1 + beta(n)).max(first.phi_max + eps);
    let big_c2 = c2.sqrt();
    let mut running = 0.0_f64;
    for s in samples.iter_mut() {
        if !(s.b_min > 0.0) || !(s.w_max >= 0.0) {
            return Err(Error::InvalidSample(format!("row at t = {} has b_min <= 0 or |W| < 0", s.t)));
        }
        running = running.max((s.w_max / s.b_min).sqrt());
        s.phi_barrier = big_c1 + big_c2 * running;
        s.margin = s.phi_barrier - s.phi_max;
    }
    Ok(())
}
