//! Finite-difference curvature of a metric given in coordinates.
//!
//! ```sh
//! cargo run --example curvature_oracle
//! ```

use ricci_pinch::algebra::Sym2Tensor;
use ricci_pinch::geometry::coordinate_curvature_oracle;

fn main() -> ricci_pinch::Result<()> {
    // Unit S^3 in stereographic coordinates, g = 4/(1 + |x|^2)^2 dx^2.
    let chart = |x: &[f64]| {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        Sym2Tensor::diagonal(&[4.0 / (1.0 + r2).powi(2); 3])
    };
    let point = [0.3, -0.2, 0.1];
    let g = chart(&point);
    for h in [4e-3, 2e-3, 1e-3] {
        let rm = coordinate_curvature_oracle(chart, &point, h)?;
        let k = rm.get(0, 1, 0, 1) / (g.get(0, 0) * g.get(1, 1));
        println!("h = {h:.0e}: K(e1, e2) = {k:.10}  error {:.2e}", (k - 1.0).abs());
    }
    Ok(())
}
