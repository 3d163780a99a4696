//! Left-invariant metrics on the 3-dimensional unimodular groups under Ricci flow.
//!
//! ```sh
//! cargo run --example milnor_flows
//! ```

use ricci_pinch::flow::{run_with_hook, IntegratorConfig, Method};
use ricci_pinch::geometry::{FlowAnsatz, HomogeneousState, UnimodularGroup};
use ricci_pinch::monitor::MonitorConfig;

fn main() -> ricci_pinch::Result<()> {
    let cases = [
        (UnimodularGroup::Su2, [1.0, 1.0, 0.5], 1.0),
        (UnimodularGroup::Nil, [1.0, 1.0, 1.0], 5.0),
        (UnimodularGroup::Sol, [1.0, 2.0, 1.0], 5.0),
        (UnimodularGroup::Sl2, [1.0, 1.0, 2.0], 5.0),
    ];
    for (group, [a, b, c], t_max) in cases {
        let state = HomogeneousState::new(group, a, b, c)?;
        let r = state.ricci_eigenvalues();
        println!("{} (A, B, C) = ({a}, {b}, {c}), Ricci eigenvalues {:.4?}", group.name(), r);
        let integ = IntegratorConfig {
            method: Method::Rk4Adaptive,
            dt_initial: 1e-3,
            t_max,
            blowup_threshold: 1e6,
            ..Default::default()
        };
        let (trace, last) = run_with_hook(&state, &integ, &MonitorConfig::ode(), |_| {})?;
        let s = trace.samples.last().expect("initial sample");
        println!(
            "  {} at t = {:.4}: coefficients {:.4?}, phi_max = {:.4}, Phi = {:.4}",
            trace.termination.name(),
            trace.t_final,
            last.coords(),
            s.phi_max,
            s.phi_barrier
        );
    }
    Ok(())
}
