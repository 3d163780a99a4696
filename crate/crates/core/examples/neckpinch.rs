//! Dumbbell metric on S^4 pinching at its neck.
//!
//! ```sh
//! cargo run --release --example neckpinch [M] [neck]
//! ```

use ricci_pinch::flow::{run_with_hook, IntegratorConfig};
use ricci_pinch::geometry::WarpedSphereState;
use ricci_pinch::monitor::MonitorConfig;

fn main() -> ricci_pinch::Result<()> {
    let mut args = std::env::args().skip(1);
    let m: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(400);
    let neck: f64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(0.8);

    let initial = WarpedSphereState::dumbbell(3, m, neck)?;
    let integ = IntegratorConfig {
        dt_initial: 1e-3,
        t_max: 1.0,
        blowup_threshold: 1e6,
        sample_stride: 100,
        ..Default::default()
    };
    let mut necks = Vec::new();
    let (trace, last) = run_with_hook(&initial, &integ, &MonitorConfig::pde(), |info| {
        if info.step % 100 == 0 {
            necks.push((info.t, info.state.psi()[m / 2]));
        }
    })?;
    for (t, r) in necks {
        println!("t = {t:.6}  neck radius {r:.5}");
    }
    let poles = last.pole_limits()?;
    println!(
        "{} at t = {:.6} after {} steps; pole curvatures (L, K) = ({:.3}, {:.3})",
        trace.termination.name(),
        trace.t_final,
        trace.steps,
        poles.left.0,
        poles.left.1
    );
    for s in &trace.samples {
        println!("  t = {:.6}  |Rm| = {:.3e}  phi_max = {:.4}  Phi = {:.4}", s.t, s.rm_max, s.phi_max, s.phi_barrier);
    }
    Ok(())
}
