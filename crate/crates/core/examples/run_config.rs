//! Parses a run configuration, executes it, and re-verdicts the saved trace
//! with stricter constants.
//!
//! ```sh
//! cargo run --example run_config
//! ```

use ricci_pinch::config::parse_config;
use ricci_pinch::runner::{execute, reverdict, VerdictOptions};

const CONFIG: &str = "
# S^2(1) x S^2(4) until |Rm| reaches 1e4
scenario=product_spheres
p=2
q=2
r1sq=1
r2sq=4
dt=1e-3
t_max=1
blowup_threshold=1e4
";

fn main() -> ricci_pinch::Result<()> {
    let dir = std::env::temp_dir().join("ricci-pinch-example");
    std::fs::create_dir_all(&dir)?;
    let text = format!("{CONFIG}output={}\n", dir.join("product.csv").display());
    let outcome = execute(&parse_config(&text)?)?;
    println!("{}", outcome.summary_line());
    println!("trace: {}", outcome.output_path.display());

    let strict = VerdictOptions { c1: Some(1e-3), c2: Some(1e-6), ..Default::default() };
    let again = reverdict(&outcome.output_path, &strict)?;
    println!(
        "with c1 = 1e-3, c2 = 1e-6: {} of {} samples fail, exit code {}",
        again.summary.failed, again.summary.samples, again.exit_code
    );
    Ok(())
}
