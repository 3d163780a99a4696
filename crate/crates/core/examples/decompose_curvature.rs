//! Splits a curvature tensor into scalar, trace-free Ricci and Weyl parts.
//!
//! ```sh
//! cargo run --example decompose_curvature
//! ```

use nalgebra::DMatrix;
use ricci_pinch::algebra::{decompose, tr_f_cubed, weyl_quadratic, Metric, Riem4Tensor};

fn main() -> ricci_pinch::Result<()> {
    // S^2(1) x S^2(2): sectional curvatures 1 and 1/2 on the two factors.
    let mut k = DMatrix::zeros(4, 4);
    k[(0, 1)] = 1.0;
    k[(1, 0)] = 1.0;
    k[(2, 3)] = 0.5;
    k[(3, 2)] = 0.5;
    let rm = Riem4Tensor::from_sectional(&k)?;
    let g = Metric::euclidean(4);
    let d = decompose(&rm, &g)?;

    println!("R       = {}", d.scalar);
    println!("|Rm|    = {:.6}", d.norm_rm);
    println!("|U|, |V|, |W| = {:.6}, {:.6}, {:.6}", d.norm_u, d.norm_v, d.norm_w);
    println!(
        "|U|^2 + |V|^2 + |W|^2 - |Rm|^2 = {:.2e}",
        d.norm_u.powi(2) + d.norm_v.powi(2) + d.norm_w.powi(2) - d.norm_rm.powi(2)
    );
    println!("|F| = {:.6}  (sqrt(n-2)/2 |V| = {:.6})", d.norm_f, (2.0f64).sqrt() / 2.0 * d.norm_v);
    println!("tr F^3  = {:.6}", tr_f_cubed(&d.trace_free_ricci, &g)?);
    println!("W(F, F) = {:.6}", weyl_quadratic(&d.w, &d.trace_free_ricci, &g)?);
    Ok(())
}
