//! Scenario families with closed-form curvature and Ricci flow vector fields.
//!
//! Each family is a finite-dimensional ansatz for `∂g/∂t = -2 Rc`: the state is
//! a flat coordinate vector that the integrator advances, and the family knows
//! how to turn that vector back into curvature tensors at its sample points.

mod homogeneous;
mod oracle;
mod product;
mod space_form;
mod warped;

pub use homogeneous::{HomogeneousState, UnimodularGroup};
pub use oracle::coordinate_curvature_oracle;
pub use product::ProductSphereState;
pub use space_form::SpaceFormState;
pub use warped::{PoleLimits, WarpedSphereState};

use crate::algebra::{Metric, Riem4Tensor, Sym2Tensor};
use crate::error::Result;

/// Common interface of the flow ansätze.
pub trait FlowAnsatz: Clone {
    /// Manifold dimension `n`.
    fn dimension(&self) -> usize;

    /// Flat coordinates advanced by the integrator.
    fn coords(&self) -> Vec<f64>;

    /// Rebuilds a state from coordinates; fails when positivity is violated.
    fn with_coords(&self, coords: &[f64]) -> Result<Self>;

    /// Time derivative of [`coords`](Self::coords) under Ricci flow.
    fn flow_vector_field(&self) -> Result<Vec<f64>>;

    /// Metric and curvature at a sample location. Homogeneous families ignore
    /// `location`; the warped family needs an interior grid index.
    fn curvature_at(&self, location: Option<usize>) -> Result<(Metric, Riem4Tensor)>;

    /// Metric time derivative, in the frame of [`curvature_at`](Self::curvature_at),
    /// induced by a coordinate derivative.
    fn metric_velocity(&self, derivative: &[f64], location: Option<usize>) -> Result<Sym2Tensor>;

    /// Curvature at every point the monitor takes a max over.
    fn curvature_samples(&self) -> Result<Vec<(Metric, Riem4Tensor)>>;

    /// `max |Rm|` over the sample points.
    fn max_curvature_norm(&self) -> Result<f64>;

    /// Time scale on which the state changes appreciably; the integrator keeps
    /// `dt <= dt_safety * stability_scale()`.
    fn stability_scale(&self) -> Result<f64>;

    /// Squared norm of `∇F` at a sample point, when the family can supply it.
    /// `None` means the family has spatial dependence the check does not cover.
    fn trace_free_ricci_gradient_sq(&self) -> Option<Result<f64>> {
        None
    }
}

/// A scenario state of any family.
#[derive(Clone, Debug)]
pub enum Scenario {
    SpaceForm(SpaceFormState),
    ProductSpheres(ProductSphereState),
    Homogeneous(HomogeneousState),
    Warped(WarpedSphereState),
}

impl Scenario {
    pub fn family_name(&self) -> &'static str {
        match self {
            Scenario::SpaceForm(_) => "round_sphere",
            Scenario::ProductSpheres(_) => "product_spheres",
            Scenario::Homogeneous(s) => s.group().name(),
            Scenario::Warped(_) => "neckpinch",
        }
    }

    /// True for the spatially homogeneous (ODE) families.
    pub fn is_homogeneous(&self) -> bool {
        !matches!(self, Scenario::Warped(_))
    }
}

macro_rules! dispatch {
    ($self:ident, $s:ident => $body:expr) => {
        match $self {
            Scenario::SpaceForm($s) => $body,
            Scenario::ProductSpheres($s) => $body,
            Scenario::Homogeneous($s) => $body,
            Scenario::Warped($s) => $body,
        }
    };
}

impl FlowAnsatz for Scenario {
    fn dimension(&self) -> usize {
        dispatch!(self, s => s.dimension())
    }

    fn coords(&self) -> Vec<f64> {
        dispatch!(self, s => s.coords())
    }

    fn with_coords(&self, coords: &[f64]) -> Result<Self> {
        Ok(match self {
            Scenario::SpaceForm(s) => Scenario::SpaceForm(s.with_coords(coords)?),
            Scenario::ProductSpheres(s) => Scenario::ProductSpheres(s.with_coords(coords)?),
            Scenario::Homogeneous(s) => Scenario::Homogeneous(s.with_coords(coords)?),
            Scenario::Warped(s) => Scenario::Warped(s.with_coords(coords)?),
        })
    }

    fn flow_vector_field(&self) -> Result<Vec<f64>> {
        dispatch!(self, s => s.flow_vector_field())
    }

    fn curvature_at(&self, location: Option<usize>) -> Result<(Metric, Riem4Tensor)> {
        dispatch!(self, s => s.curvature_at(location))
    }

    fn metric_velocity(&self, derivative: &[f64], location: Option<usize>) -> Result<Sym2Tensor> {
        dispatch!(self, s => s.metric_velocity(derivative, location))
    }

    fn curvature_samples(&self) -> Result<Vec<(Metric, Riem4Tensor)>> {
        dispatch!(self, s => s.curvature_samples())
    }

    fn max_curvature_norm(&self) -> Result<f64> {
        dispatch!(self, s => s.max_curvature_norm())
    }

    fn stability_scale(&self) -> Result<f64> {
        dispatch!(self, s => s.stability_scale())
    }

    fn trace_free_ricci_gradient_sq(&self) -> Option<Result<f64>> {
        dispatch!(self, s => s.trace_free_ricci_gradient_sq())
    }
}

impl From<SpaceFormState> for Scenario {
    fn from(s: SpaceFormState) -> Self {
        Scenario::SpaceForm(s)
    }
}

impl From<ProductSphereState> for Scenario {
    fn from(s: ProductSphereState) -> Self {
        Scenario::ProductSpheres(s)
    }
}

impl From<HomogeneousState> for Scenario {
    fn from(s: HomogeneousState) -> Self {
        Scenario::Homogeneous(s)
    }
}

impl From<WarpedSphereState> for Scenario {
    fn from(s: WarpedSphereState) -> Self {
        Scenario::Warped(s)
    }
}

/// `|Rm|` of a tensor with only sectional components, in an orthonormal frame.
pub(crate) fn sectional_norm(pairs: impl IntoIterator<Item = (f64, usize)>) -> f64 {
    pairs
        .into_iter()
        .map(|(k, count)| 4.0 * count as f64 * k * k)
        .sum::<f64>()
        .sqrt()
}
