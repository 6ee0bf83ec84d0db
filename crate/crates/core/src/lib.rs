//! Numerical laboratory for parametric mean curvature flow of immersed
//! submanifolds of arbitrary codimension in curved ambient Riemannian
//! manifolds: a gauge-fixed (background-connection) flow variant, the coupled
//! harmonic map heat flow, localized Gaussian-density monotonicity, point
//! picking, and graph-extraction audits, with analytic test oracles at every
//! desk-checkable identity.
//!
//! The numerical kernels are generic over the scalar type through
//! [`scalar::Real`]; concrete `f64` aliases for the main data types live at
//! the crate root.

pub mod ambient;
pub mod error;
pub mod grid;
pub mod immersion;
pub mod linalg;
pub mod pseudolocality;
pub mod rng;
pub mod scalar;
pub mod flows;
pub mod shapes;

pub use scalar::{Radius, Real};

/// Concrete `f64` instantiations used by the command-line frontend.
pub type AmbientModel64 = ambient::AmbientModel<f64>;
pub type AmbientBounds64 = ambient::AmbientBounds<f64>;
pub type ParameterGrid64 = grid::ParameterGrid<f64>;
pub type ImmersionField64 = immersion::ImmersionField<f64>;
pub type InducedGeometry64 = immersion::InducedGeometry<f64>;
