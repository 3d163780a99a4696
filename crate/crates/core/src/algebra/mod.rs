//! Dense tensor algebra for algebraic curvature tensors at a point.

mod decompose;
mod tensor;

pub use decompose::{
    decompose, kulkarni_nomizu, ricci_from_riemann, riemann_inner_product, tr_f_cubed,
    weyl_quadratic, CurvatureDecomposition,
};
pub use tensor::{Metric, Riem4Tensor, Sym2Tensor};
