//! CSV trace files and their `.meta` sidecar.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::flow::{FlowTrace, Termination};
use crate::monitor::PinchSample;

pub const HEADER: [&str; 11] = [
    "t",
    "R_min",
    "R_max",
    "b_min",
    "a_max",
    "W_max",
    "phi_max",
    "Phi",
    "margin",
    "rho_at_argmax",
    "Rm_max",
];

/// 17 significant digits, enough to round-trip any `f64`.
fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_trace(path: &Path, samples: &[PinchSample]) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)?;
    w.write_record(HEADER)?;
    for s in samples {
        w.write_record(s.fields().iter().map(|v| format_value(*v)))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_trace(path: &Path) -> Result<Vec<PinchSample>> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_path(path)?;
    let header = r.headers()?.clone();
    if header.iter().ne(HEADER.iter().copied()) {
        return Err(Error::InvalidArgument(format!(
            "unexpected trace header `{}`",
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut out = Vec::new();
    for (row, record) in r.records().enumerate() {
        let record = record?;
        let mut fields = [0.0; 11];
        if record.len() != fields.len() {
            return Err(Error::InvalidArgument(format!("row {}: expected 11 fields", row + 1)));
        }
        for (slot, raw) in fields.iter_mut().zip(record.iter()) {
            *slot = raw.trim().parse().map_err(|_| {
                Error::InvalidArgument(format!("row {}: cannot parse `{raw}`", row + 1))
            })?;
        }
        out.push(PinchSample::from_fields(fields));
    }
    Ok(out)
}

/// Run facts that do not fit in the CSV rows.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceMeta {
    pub termination: Termination,
    pub t_final: f64,
    pub n: usize,
    pub c: f64,
    pub epsilon: f64,
    pub c1: f64,
    pub c2: f64,
    pub tolerance: f64,
}

impl TraceMeta {
    pub fn from_trace(trace: &FlowTrace) -> Self {
        let m = &trace.monitor;
        Self {
            termination: trace.termination,
            t_final: trace.t_final,
            n: m.n,
            c: m.c,
            epsilon: m.epsilon,
            c1: m.c1,
            c2: m.c2,
            tolerance: m.tolerance_rel,
        }
    }
}

pub fn meta_path(trace_path: &Path) -> PathBuf {
    let mut s = trace_path.as_os_str().to_owned();
    s.push(".meta");
    PathBuf::from(s)
}

pub fn write_meta(trace_path: &Path, meta: &TraceMeta) -> Result<()> {
    let text = format!(
        "termination={}\nt_final={}\nn={}\nc={}\nepsilon={}\nc1={}\nc2={}\ntolerance={}\n",
        meta.termination.name(),
        format_value(meta.t_final),
        meta.n,
        format_value(meta.c),
        format_value(meta.epsilon),
        format_value(meta.c1),
        format_value(meta.c2),
        format_value(meta.tolerance),
    );
    fs::write(meta_path(trace_path), text)?;
    Ok(())
}

/// Reads the sidecar if it exists.
pub fn read_meta(trace_path: &Path) -> Result<Option<TraceMeta>> {
    let path = meta_path(trace_path);
    if !path.exists() {
        return Ok(None);
    }
    let text = fs::read_to_string(&path)?;
    let map: BTreeMap<&str, &str> = text
        .lines()
        .filter_map(|l| l.split_once('='))
        .map(|(k, v)| (k.trim(), v.trim()))
        .collect();
    let get = |k: &str| {
        map.get(k)
            .copied()
            .ok_or_else(|| Error::InvalidArgument(format!("{}: missing `{k}`", path.display())))
    };
    let num = |k: &str| -> Result<f64> {
        get(k)?
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("{}: bad `{k}`", path.display())))
    };
    Ok(Some(TraceMeta {
        termination: Termination::from_name(get("termination")?).ok_or_else(|| {
            Error::InvalidArgument(format!("{}: unknown termination", path.display()))
        })?,
        t_final: num("t_final")?,
        n: get("n")?
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("{}: bad `n`", path.display())))?,
        c: num("c")?,
        epsilon: num("epsilon")?,
        c1: num("c1")?,
        c2: num("c2")?,
        tolerance: num("tolerance")?,
    }))
}
