//! Curvature contractions and the orthogonal splitting `Rm = U + V + W`.
//!
//! Sign convention: `(h ⊼ k)_{ijkl} = h_ik k_jl + h_jl k_ik - h_il k_jk - h_jk k_il`,
//! so a space form of sectional curvature `K` has `Rm = (K/2) g ⊼ g` and
//! `Rm_{ijij} = +K` in an orthonormal frame. Norms of 4-tensors are the full
//! metric contraction with no combinatorial prefactor; this is the convention
//! under which `|F| = (sqrt(n-2)/2) |V|`.

use nalgebra::DMatrix;

use super::tensor::{same_dim, Metric, Riem4Tensor, Sym2Tensor};
use crate::error::{Error, Result};

/// Kulkarni–Nomizu product of two symmetric 2-tensors.
pub fn kulkarni_nomizu(h: &Sym2Tensor, k: &Sym2Tensor) -> Result<Riem4Tensor> {
    same_dim(h.dim(), k.dim())?;
    let (h, k) = (h.matrix(), k.matrix());
    Ok(Riem4Tensor::from_fn(h.nrows(), |i, j, a, b| {
        h[(i, a)] * k[(j, b)] + h[(j, b)] * k[(i, a)] - h[(i, b)] * k[(j, a)] - h[(j, a)] * k[(i, b)]
    }))
}

/// Full contraction `A_{ijkl} B^{ijkl}` with indices raised by `g`.
pub fn riemann_inner_product(a: &Riem4Tensor, b: &Riem4Tensor, g: &Metric) -> Result<f64> {
    same_dim(a.dim(), b.dim())?;
    let b_up = b.raised(g)?;
    Ok(a.entries()
        .iter()
        .zip(b_up.entries())
        .map(|(x, y)| x * y)
        .sum())
}

/// `Rc_{jl} = g^{ik} Rm_{ijkl}`.
pub fn ricci_from_riemann(rm: &Riem4Tensor, g: &Metric) -> Result<Sym2Tensor> {
    same_dim(rm.dim(), g.dim())?;
    let n = rm.dim();
    let inv = g.inverse().matrix();
    let mut rc = DMatrix::zeros(n, n);
    for j in 0..n {
        for l in 0..n {
            let mut acc = 0.0;
            for i in 0..n {
                for k in 0..n {
                    let gik = inv[(i, k)];
                    if gik != 0.0 {
                        acc += gik * rm.get(i, j, k, l);
                    }
                }
            }
            rc[(j, l)] = acc;
        }
    }
    let sym = (&rc + rc.transpose()) * 0.5;
    Sym2Tensor::from_matrix(sym)
}

/// Output of [`decompose`].
#[derive(Clone, Debug)]
pub struct CurvatureDecomposition {
    /// Scalar curvature `R`.
    pub scalar: f64,
    pub ricci: Sym2Tensor,
    /// Trace-free Ricci tensor `F = Rc - (R/n) g`.
    pub trace_free_ricci: Sym2Tensor,
    /// Scalar part `R/(2n(n-1)) g ⊼ g`.
    pub u: Riem4Tensor,
    /// Trace-free Ricci part `F ⊼ g / (n-2)`.
    pub v: Riem4Tensor,
    /// Weyl part, `Rm - U - V` (exactly zero for n = 3).
    pub w: Riem4Tensor,
    pub norm_u: f64,
    pub norm_v: f64,
    pub norm_w: f64,
    pub norm_f: f64,
    pub norm_rm: f64,
}

pub fn decompose(rm: &Riem4Tensor, g: &Metric) -> Result<CurvatureDecomposition> {
    let n = rm.dim();
    if n < 3 {
        return Err(Error::UnsupportedDimension(n));
    }
    same_dim(n, g.dim())?;
    let nf = n as f64;

    let ricci = ricci_from_riemann(rm, g)?;
    let scalar = ricci.trace(g)?;
    let trace_free_ricci = ricci.sub(&g.value().scaled(scalar / nf))?;

    let gg = kulkarni_nomizu(g.value(), g.value())?;
    let u = gg.scaled(scalar / (2.0 * nf * (nf - 1.0)));
    let v = kulkarni_nomizu(&trace_free_ricci, g.value())?.scaled(1.0 / (nf - 2.0));
    // W vanishes identically for n = 3; keep it exact rather than rounding noise.
    let w = if n == 3 {
        Riem4Tensor::zeros(3)
    } else {
        rm.sub(&u)?.sub(&v)?
    };

    let norm = |t: &Riem4Tensor| -> Result<f64> { Ok(riemann_inner_product(t, t, g)?.max(0.0).sqrt()) };
    let norm_u = norm(&u)?;
    let norm_v = norm(&v)?;
    let norm_w = norm(&w)?;
    let norm_rm = norm(rm)?;
    let norm_f = trace_free_ricci.norm_sq(g)?.max(0.0).sqrt();

    Ok(CurvatureDecomposition {
        scalar,
        ricci,
        trace_free_ricci,
        u,
        v,
        w,
        norm_u,
        norm_v,
        norm_w,
        norm_f,
        norm_rm,
    })
}

/// `tr F^3 = F_i^j F_j^k F_k^i`.
pub fn tr_f_cubed(f: &Sym2Tensor, g: &Metric) -> Result<f64> {
    let m = f.mixed(g)?;
    Ok((&m * &m * &m).trace())
}

/// The Weyl quadratic form `W(F, F)` as it enters the evolution of `|F|^2`.
///
/// With `Rm_{ijij} = +K` storage this is `W_{ijkl} F^{ik} F^{jl}`, which is
/// `W_{ijkl} F^{il} F^{jk}` written in the opposite (`R_{ijji} = +K`) index
/// convention. `|W(F, F)| <= |W| |F|^2` by Cauchy–Schwarz.
pub fn weyl_quadratic(w: &Riem4Tensor, f: &Sym2Tensor, g: &Metric) -> Result<f64> {
    same_dim(w.dim(), f.dim())?;
    same_dim(w.dim(), g.dim())?;
    let n = w.dim();
    let up = f.raised(g)?;
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let fik = up[(i, k)];
                if fik == 0.0 {
                    continue;
                }
                for l in 0..n {
                    acc += w.get(i, j, k, l) * fik * up[(j, l)];
                }
            }
        }
    }
    Ok(acc)
}
