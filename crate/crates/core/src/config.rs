//! Flat `key=value` run configuration.
//!
//! Pairs are separated by whitespace or newlines; `#` starts a comment.
//!
//! ```text
//! scenario=product_spheres p=2 q=2 r1sq=1 r2sq=4
//! t_max=0.6 dt=1e-3 blowup_threshold=1e6
//! output=s2xs2.csv
//! ```

use std::collections::BTreeMap;
use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::flow::{IntegratorConfig, Method};
use crate::geometry::{
    HomogeneousState, ProductSphereState, Scenario, SpaceFormState, UnimodularGroup,
    WarpedSphereState,
};
use crate::monitor::MonitorConfig;

/// Scenario family and its parameters, as read from a config.
#[derive(Clone, Debug, PartialEq)]
pub enum ScenarioSpec {
    RoundSphere { n: usize, kappa: f64 },
    ProductSpheres { p: usize, q: usize, r1sq: f64, r2sq: f64 },
    Homogeneous { group: UnimodularGroup, structure: [f64; 3], coeffs: [f64; 3] },
    Neckpinch { n_fiber: usize, grid: usize, neck: f64 },
}

impl ScenarioSpec {
    pub fn build(&self) -> Result<Scenario> {
        Ok(match *self {
            ScenarioSpec::RoundSphere { n, kappa } => SpaceFormState::new(n, kappa)?.into(),
            ScenarioSpec::ProductSpheres { p, q, r1sq, r2sq } => {
                ProductSphereState::new(p, q, r1sq, r2sq)?.into()
            }
            ScenarioSpec::Homogeneous { group, structure, coeffs: [a, b, c] } => {
                HomogeneousState::with_structure(group, structure, a, b, c)?.into()
            }
            ScenarioSpec::Neckpinch { n_fiber, grid, neck } => {
                WarpedSphereState::dumbbell(n_fiber, grid, neck)?.into()
            }
        })
    }

    pub fn dimension(&self) -> usize {
        match *self {
            ScenarioSpec::RoundSphere { n, .. } => n,
            ScenarioSpec::ProductSpheres { p, q, .. } => p + q,
            ScenarioSpec::Homogeneous { .. } => 3,
            ScenarioSpec::Neckpinch { n_fiber, .. } => n_fiber + 1,
        }
    }

    pub fn is_pde(&self) -> bool {
        matches!(self, ScenarioSpec::Neckpinch { .. })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub scenario: ScenarioSpec,
    pub integrator: IntegratorConfig,
    pub monitor: MonitorConfig,
    pub output_path: PathBuf,
}

impl RunConfig {
    pub fn sample_stride(&self) -> usize {
        self.integrator.sample_stride
    }
}

const COMMON_KEYS: &[&str] = &[
    "scenario",
    "method",
    "dt",
    "dt_safety",
    "t_max",
    "blowup_threshold",
    "tol_step",
    "c",
    "epsilon",
    "c1",
    "c2",
    "tolerance",
    "output",
    "sample_stride",
];

struct Entries {
    map: BTreeMap<String, (usize, String)>,
    scenario_line: usize,
}

impl Entries {
    fn raw(&self, key: &str) -> Option<&(usize, String)> {
        self.map.get(key)
    }

    fn required<T: std::str::FromStr>(&self, key: &str) -> Result<T> {
        match self.raw(key) {
            Some((line, v)) => v
                .parse()
                .map_err(|_| Error::usage(*line, key, format!("cannot parse `{v}`"))),
            None => Err(Error::usage(self.scenario_line, key, "missing required key")),
        }
    }

    fn optional<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.raw(key) {
            Some((line, v)) => v
                .parse()
                .map(Some)
                .map_err(|_| Error::usage(*line, key, format!("cannot parse `{v}`"))),
            None => Ok(None),
        }
    }

    fn line(&self, key: &str) -> usize {
        self.raw(key).map(|(l, _)| *l).unwrap_or(self.scenario_line)
    }

    fn check(&self, key: &str, ok: bool, message: &str) -> Result<()> {
        if ok {
            Ok(())
        } else {
            Err(Error::usage(self.line(key), key, message))
        }
    }
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut map = BTreeMap::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw_line.split('#').next().unwrap_or("");
        for token in content.split_whitespace() {
            let Some((k, v)) = token.split_once('=') else {
                return Err(Error::usage(line, token, "expected key=value"));
            };
            if k.is_empty() || v.is_empty() {
                return Err(Error::usage(line, k, "empty key or value"));
            }
            if map.insert(k.to_string(), (line, v.to_string())).is_some() {
                return Err(Error::usage(line, k, "duplicate key"));
            }
        }
    }
    let scenario_line = map.get("scenario").map(|(l, _)| *l).unwrap_or(1);
    let e = Entries { map, scenario_line };
    let family: String = e.required("scenario")?;

    let (scenario, family_keys): (ScenarioSpec, &[&str]) = match family.as_str() {
        "round_sphere" => {
            let n: usize = e.required("n")?;
            let kappa: f64 = e.required("kappa")?;
            e.check("n", n >= 3, "n >= 3 required by the curvature decomposition")?;
            e.check("kappa", kappa > 0.0, "kappa must be positive")?;
            (ScenarioSpec::RoundSphere { n, kappa }, &["n", "kappa"])
        }
        "product_spheres" => {
            let p: usize = e.required("p")?;
            let q: usize = e.required("q")?;
            let r1sq: f64 = e.required("r1sq")?;
            let r2sq: f64 = e.required("r2sq")?;
            e.check("p", p >= 2, "factor dimension p must be >= 2")?;
            e.check("q", q >= 2, "factor dimension q must be >= 2")?;
            e.check("r1sq", r1sq > 0.0, "must be positive")?;
            e.check("r2sq", r2sq > 0.0, "must be positive")?;
            (ScenarioSpec::ProductSpheres { p, q, r1sq, r2sq }, &["p", "q", "r1sq", "r2sq"])
        }
        name @ ("su2" | "nil" | "sol" | "sl2") => {
            let group = UnimodularGroup::from_name(name).expect("matched above");
            let defaults = group.structure_constants();
            let mut structure = defaults;
            for (i, key) in ["lambda1", "lambda2", "lambda3"].iter().enumerate() {
                if let Some(v) = e.optional::<f64>(key)? {
                    e.check(
                        key,
                        v.signum() == defaults[i].signum() || (v == 0.0 && defaults[i] == 0.0),
                        "sign must match the group's signature",
                    )?;
                    structure[i] = v;
                }
            }
            let mut coeffs = [0.0; 3];
            for (i, key) in ["A", "B", "C"].iter().enumerate() {
                coeffs[i] = e.required(key)?;
                e.check(key, coeffs[i] > 0.0, "metric coefficient must be positive")?;
            }
            (
                ScenarioSpec::Homogeneous { group, structure, coeffs },
                &["A", "B", "C", "lambda1", "lambda2", "lambda3"],
            )
        }
        "neckpinch" => {
            let n_fiber = e.optional("n_fiber")?.unwrap_or(3);
            let grid = e.optional("M")?.unwrap_or(400);
            let neck = e.optional("neck")?.unwrap_or(0.8);
            e.check("n_fiber", n_fiber >= 2, "fiber dimension must be >= 2")?;
            e.check("M", grid >= 6, "need at least 6 grid intervals")?;
            e.check("neck", (0.0..1.0).contains(&neck), "neck depth must lie in [0, 1)")?;
            (ScenarioSpec::Neckpinch { n_fiber, grid, neck }, &["n_fiber", "M", "neck"])
        }
        other => {
            return Err(Error::usage(
                scenario_line,
                "scenario",
                format!("unknown scenario `{other}`"),
            ))
        }
    };

    for (key, (line, _)) in &e.map {
        if !COMMON_KEYS.contains(&key.as_str()) && !family_keys.contains(&key.as_str()) {
            return Err(Error::usage(*line, key, format!("unknown key for scenario `{family}`")));
        }
    }

    let defaults = IntegratorConfig::default();
    let method = match e.optional::<String>("method")? {
        None => defaults.method,
        Some(m) => Method::from_name(&m)
            .ok_or_else(|| Error::usage(e.line("method"), "method", "expected rk4-fixed or rk4-adaptive"))?,
    };
    let integrator = IntegratorConfig {
        method,
        dt_initial: e.required("dt")?,
        dt_safety: e.optional("dt_safety")?.unwrap_or(defaults.dt_safety),
        t_max: e.required("t_max")?,
        blowup_threshold: e.optional("blowup_threshold")?.unwrap_or(defaults.blowup_threshold),
        tol_step: e.optional("tol_step")?.unwrap_or(defaults.tol_step),
        sample_stride: e.optional("sample_stride")?.unwrap_or(1),
    };
    e.check("dt", integrator.dt_initial > 0.0, "must be positive")?;
    e.check(
        "dt_safety",
        integrator.dt_safety > 0.0 && integrator.dt_safety <= 1.0,
        "must lie in (0, 1]",
    )?;
    e.check("t_max", integrator.t_max >= 0.0, "must be nonnegative")?;
    e.check("blowup_threshold", integrator.blowup_threshold > 0.0, "must be positive")?;
    e.check("tol_step", integrator.tol_step > 0.0, "must be positive")?;
    e.check("sample_stride", integrator.sample_stride >= 1, "must be at least 1")?;

    let base = if scenario.is_pde() {
        MonitorConfig::pde()
    } else {
        MonitorConfig::ode()
    };
    let monitor = MonitorConfig {
        c_override: e.optional("c")?,
        epsilon: e.optional("epsilon")?.unwrap_or(base.epsilon),
        c1: e.optional("c1")?,
        c2: e.optional("c2")?,
        tolerance_rel: e.optional("tolerance")?.unwrap_or(base.tolerance_rel),
    };
    e.check("c", monitor.c_override.map_or(true, |c| c >= 0.0), "must be nonnegative")?;
    e.check("epsilon", monitor.epsilon > 0.0, "must be positive")?;
    e.check("c1", monitor.c1.map_or(true, |v| v > 0.0), "must be positive")?;
    e.check("c2", monitor.c2.map_or(true, |v| v > 0.0), "must be positive")?;
    e.check("tolerance", monitor.tolerance_rel >= 0.0, "must be nonnegative")?;

    scenario
        .build()
        .map_err(|err| Error::usage(scenario_line, "scenario", err.to_string()))?;

    Ok(RunConfig {
        scenario,
        integrator,
        monitor,
        output_path: e
            .optional::<String>("output")?
            .unwrap_or_else(|| "trace.csv".into())
            .into(),
    })
}
