//! Bour families of invariant surfaces in Riemannian 3-manifolds carrying a
//! Killing field.
//!
//! Given a metric in coordinates adapted to the Killing field (`X = ∂/∂x3`)
//! and a generatrix `dσ² = ds² + U(s)² dt²`, the crate constructs the
//! one-parameter family `ψ_m` of invariant surfaces isometric to `dσ²`.

pub mod bour;
pub mod chart;
pub mod config;
pub mod error;
pub mod export;
pub mod expr;
pub mod fd;
pub mod interp;
pub mod natural;
pub mod parallel;
pub mod pipeline;
pub mod quadrature;
pub mod quotient;
pub mod spaces;
pub mod surface;
pub mod verify;

pub use chart::{AdaptedChart3, InvariantFunction, MetricCoefficients, Point2, Point3};
pub use error::{Error, Result};
