//! Curvature algebra, Ricci flow scenario families, and a runtime monitor for
//! the pinching estimate `|F| / (R + c) <= C1 + C2 sqrt(|W| / (R + c))`.
//!
//! Curvature tensors are stored fully covariant with the convention
//! `Rm_{ijij} = K(e_i, e_j)` in an orthonormal frame, so a space form of
//! sectional curvature `K` has `Rm = (K/2) g ⊙ g`.

pub mod algebra;
pub mod config;
pub mod error;
pub mod flow;
pub mod geometry;
pub mod monitor;
pub mod runner;
pub mod trace;

pub use error::{Error, Result};
