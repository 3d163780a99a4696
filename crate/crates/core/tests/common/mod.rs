#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ricci_pinch::algebra::{kulkarni_nomizu, Metric, Riem4Tensor, Sym2Tensor};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_symmetric(rng: &mut impl Rng, n: usize) -> Sym2Tensor {
    Sym2Tensor::from_fn(n, |_, _| rng.gen_range(-1.0..1.0))
}

/// `A Aᵀ / n + I/2`, eigenvalues roughly in `[0.5, 2]`.
pub fn random_metric(rng: &mut impl Rng, n: usize) -> Metric {
    let a = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
    let g = &a * a.transpose() / n as f64 + DMatrix::identity(n, n) * 0.5;
    Metric::new(Sym2Tensor::from_matrix((&g + g.transpose()) * 0.5).unwrap()).unwrap()
}

pub fn random_orthogonal(rng: &mut impl Rng, n: usize) -> DMatrix<f64> {
    let a = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
    a.qr().q()
}

fn kn(h: &DMatrix<f64>, k: &DMatrix<f64>, i: usize, j: usize, a: usize, b: usize) -> f64 {
    h[(i, a)] * k[(j, b)] + h[(j, b)] * k[(i, a)] - h[(i, b)] * k[(j, a)] - h[(j, a)] * k[(i, b)]
}

/// `W = T - Rc ⊼ g/(n-2) + R g ⊼ g/(2(n-1)(n-2))`, by direct loops.
pub fn weyl_projection(t: &Riem4Tensor, g: &DMatrix<f64>) -> Riem4Tensor {
    let n = t.dim();
    let inv = g.clone().try_inverse().unwrap();
    let mut rc = DMatrix::zeros(n, n);
    for j in 0..n {
        for l in 0..n {
            let mut acc = 0.0;
            for i in 0..n {
                for k in 0..n {
                    acc += inv[(i, k)] * t.get(i, j, k, l);
                }
            }
            rc[(j, l)] = acc;
        }
    }
    let r: f64 = (0..n)
        .flat_map(|j| (0..n).map(move |l| (j, l)))
        .map(|(j, l)| inv[(j, l)] * rc[(j, l)])
        .sum();
    let nf = n as f64;
    Riem4Tensor::from_fn(n, |i, j, k, l| {
        t.get(i, j, k, l) - kn(&rc, g, i, j, k, l) / (nf - 2.0)
            + r * kn(g, g, i, j, k, l) / (2.0 * (nf - 1.0) * (nf - 2.0))
    })
}

/// Sum of three random `h ⊼ k` terms plus, for `n >= 4`, a random Weyl part.
pub fn random_curvature(rng: &mut impl Rng, g: &Metric) -> Riem4Tensor {
    let n = g.dim();
    let mut t = Riem4Tensor::zeros(n);
    for _ in 0..3 {
        let term = kulkarni_nomizu(&random_symmetric(rng, n), &random_symmetric(rng, n)).unwrap();
        t = t.add(&term).unwrap();
    }
    if n >= 4 {
        let mut extra = Riem4Tensor::zeros(n);
        for _ in 0..2 {
            let term =
                kulkarni_nomizu(&random_symmetric(rng, n), &random_symmetric(rng, n)).unwrap();
            extra = extra.add(&term).unwrap();
        }
        let w = weyl_projection(&extra, g.value().matrix());
        t = t.add(&w.scaled(rng.gen_range(0.5..2.0))).unwrap();
    }
    t
}

/// `R(e_i, e_j, e_j, e_i) / (g_ii g_jj - g_ij²)` from a coordinate tensor.
pub fn sectional(rm: &Riem4Tensor, g: &Sym2Tensor, i: usize, j: usize) -> f64 {
    rm.get(i, j, i, j) / (g.get(i, i) * g.get(j, j) - g.get(i, j).powi(2))
}
