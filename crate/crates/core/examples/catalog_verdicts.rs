//! Runs every catalog scenario up to |Rm|_max = 1e6 and reports the verdicts.
//!
//! ```sh
//! cargo run --release --example catalog_verdicts
//! ```

use std::time::Instant;

use ricci_pinch::flow::{run, IntegratorConfig};
use ricci_pinch::geometry::{
    HomogeneousState, ProductSphereState, Scenario, SpaceFormState, UnimodularGroup,
    WarpedSphereState,
};
use ricci_pinch::monitor::MonitorConfig;
use ricci_pinch::runner::{exit_code, VerdictSummary};

fn main() -> ricci_pinch::Result<()> {
    let catalog: Vec<(&str, Scenario, usize)> = vec![
        ("round S^3", SpaceFormState::new(3, 1.0)?.into(), 1),
        ("SU(2) 1/1/0.5", HomogeneousState::new(UnimodularGroup::Su2, 1.0, 1.0, 0.5)?.into(), 1),
        ("Nil 1/1/1", HomogeneousState::new(UnimodularGroup::Nil, 1.0, 1.0, 1.0)?.into(), 1),
        ("S2(1) x S2(4)", ProductSphereState::new(2, 2, 1.0, 4.0)?.into(), 1),
        ("neckpinch M=400", WarpedSphereState::dumbbell(3, 400, 0.8)?.into(), 50),
    ];
    for (name, initial, stride) in catalog {
        let pde = matches!(initial, Scenario::Warped(_));
        let integ = IntegratorConfig {
            dt_initial: 1e-3,
            t_max: 50.0,
            blowup_threshold: 1e6,
            sample_stride: stride,
            ..Default::default()
        };
        let mon = if pde { MonitorConfig::pde() } else { MonitorConfig::ode() };
        let started = Instant::now();
        let trace = run(&initial, &integ, &mon)?;
        let summary = VerdictSummary::of(&trace.samples, mon.tolerance_rel);
        let last = trace.samples.last().expect("at least one sample");
        println!(
            "{name:16} {:22} t={:.6} steps={:7} |Rm|={:.3e} phi_max={:.4} Phi={:.4} C1={:.4} min_margin={:.4e} fail={} exit={} ({:.1?})",
            trace.termination.name(),
            trace.t_final,
            trace.steps,
            last.rm_max,
            last.phi_max,
            last.phi_barrier,
            trace.monitor.big_c1,
            summary.min_margin,
            summary.failed,
            exit_code(&summary, trace.termination),
            started.elapsed(),
        );
        if let Some(reason) = &trace.failure {
            println!("  {reason}");
        }
    }
    Ok(())
}
