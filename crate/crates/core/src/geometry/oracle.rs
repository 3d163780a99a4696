use nalgebra::DMatrix;

use crate::algebra::{Metric, Riem4Tensor, Sym2Tensor};
use crate::error::{Error, Result};

/// Curvature of a metric given in a coordinate chart, from second-order
/// central differences of the metric components with step `h`.
///
/// Independent of every closed-form curvature in this crate; it serves as the
/// reference those are validated against. Error is `O(h^2)`.
pub fn coordinate_curvature_oracle(
    metric_chart: impl Fn(&[f64]) -> Sym2Tensor,
    point: &[f64],
    h: f64,
) -> Result<Riem4Tensor> {
    if !(h > 0.0) {
        return Err(Error::InvalidArgument(format!("step must be positive, got {h}")));
    }
    let n = point.len();
    let eval = |shifts: &[(usize, f64)]| -> Result<DMatrix<f64>> {
        let mut x = point.to_vec();
        for &(a, d) in shifts {
            x[a] += d;
        }
        let g = metric_chart(&x);
        if g.dim() != n {
            return Err(Error::InvalidArgument("chart returned wrong dimension".into()));
        }
        Ok(g.matrix().clone())
    };

    let g0 = eval(&[])?;
    let metric = Metric::new(Sym2Tensor::from_matrix(g0.clone())?)?;
    let inv = metric.inverse().matrix();

    // dg[a][(i, j)] = ∂_a g_ij ; ddg[a][b][(i, j)] = ∂_a ∂_b g_ij
    let mut dg = Vec::with_capacity(n);
    for a in 0..n {
        dg.push((eval(&[(a, h)])? - eval(&[(a, -h)])?) / (2.0 * h));
    }
    let mut ddg = vec![vec![DMatrix::zeros(n, n); n]; n];
    for a in 0..n {
        ddg[a][a] = (eval(&[(a, h)])? - &g0 * 2.0 + eval(&[(a, -h)])?) / (h * h);
        for b in (a + 1)..n {
            let m = (eval(&[(a, h), (b, h)])? - eval(&[(a, h), (b, -h)])?
                - eval(&[(a, -h), (b, h)])?
                + eval(&[(a, -h), (b, -h)])?)
                / (4.0 * h * h);
            ddg[b][a] = m.clone();
            ddg[a][b] = m;
        }
    }

    // Γ^m_ij = ½ g^{mk} (∂_i g_jk + ∂_j g_ik - ∂_k g_ij)
    let mut gamma = vec![DMatrix::zeros(n, n); n];
    for (m, gm) in gamma.iter_mut().enumerate() {
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0.0;
                for k in 0..n {
                    acc += inv[(m, k)] * (dg[i][(j, k)] + dg[j][(i, k)] - dg[k][(i, j)]);
                }
                gm[(i, j)] = 0.5 * acc;
            }
        }
    }

    Ok(Riem4Tensor::from_fn(n, |i, j, k, l| {
        let second = 0.5
            * (ddg[j][k][(i, l)] + ddg[i][l][(j, k)] - ddg[i][k][(j, l)] - ddg[j][l][(i, k)]);
        let mut quad = 0.0;
        for p in 0..n {
            for q in 0..n {
                quad += g0[(p, q)]
                    * (gamma[p][(j, k)] * gamma[q][(i, l)] - gamma[p][(j, l)] * gamma[q][(i, k)]);
            }
        }
        second + quad
    }))
}
