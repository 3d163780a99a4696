//! Round S^3 shrinking to a point: R(t) = 6/(1 - 4t), extinction at t = 1/4.
//!
//! ```sh
//! cargo run --example round_sphere_extinction
//! ```

use ricci_pinch::flow::{run, IntegratorConfig};
use ricci_pinch::geometry::SpaceFormState;
use ricci_pinch::monitor::MonitorConfig;

fn main() -> ricci_pinch::Result<()> {
    let s3 = SpaceFormState::new(3, 1.0)?;
    println!("exact extinction time {}", s3.extinction_time());
    let integ = IntegratorConfig {
        dt_initial: 1e-3,
        t_max: 1.0,
        blowup_threshold: 1e5,
        ..Default::default()
    };
    let trace = run(&s3, &integ, &MonitorConfig::ode())?;
    println!("{:>10} {:>14} {:>14} {:>10}", "t", "R", "6/(1-4t)", "rel err");
    let stride = (trace.samples.len() / 12).max(1);
    for s in trace.samples.iter().step_by(stride).chain(trace.samples.last()) {
        let exact = 6.0 / (1.0 - 4.0 * s.t);
        println!("{:>10.6} {:>14.6e} {:>14.6e} {:>10.2e}", s.t, s.r_min, exact, (s.r_min - exact).abs() / exact);
    }
    println!("{} after {} steps at t = {:.8}", trace.termination.name(), trace.steps, trace.t_final);
    Ok(())
}
