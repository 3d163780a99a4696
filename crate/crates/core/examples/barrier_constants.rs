//! Pinching constants per dimension and the barrier-crossing threshold.
//!
//! ```sh
//! cargo run --example barrier_constants
//! ```

use ricci_pinch::geometry::SpaceFormState;
use ricci_pinch::monitor::{
    beta, default_c1, default_c2, reaction_upper_bound, MonitorConfig, MonitorState,
    PointCurvature,
};

fn main() -> ricci_pinch::Result<()> {
    println!("{:>3} {:>10} {:>4} {:>10} {:>10}", "n", "c1", "c2", "beta", "a2+beta");
    for n in 3..=8 {
        let (c1, c2, b) = (default_c1(n), default_c2(n), beta(n));
        println!("{n:>3} {c1:>10.6} {c2:>4} {b:>10.6} {:>10.6}", c1 + b);
    }

    let round = PointCurvature::of_scenario(&SpaceFormState::new(4, 1.0)?)?;
    let mut state = MonitorState::new(4, &MonitorConfig::ode(), &round)?;
    println!("\nn = 4: C1 = {:.6}, C2 = {}", state.big_c1, state.big_c2);
    for (w, b) in [(0.0, 12.0), (4.0, 10.0), (1.0, 10.0)] {
        println!("  |W|_max = {w}, b_min = {b}: Phi = {:.6}", state.barrier(w, b)?);
    }

    let (b, w) = (12.0, 2.0);
    let a = state.crossing_threshold(b, w);
    let rho = reaction_upper_bound(a, b, state.c, w, 4, state.c1, state.c2);
    println!("\nthreshold a = {a:.6} at b = {b}, |W| = {w}: reaction upper bound {rho:.6}");
    Ok(())
}
