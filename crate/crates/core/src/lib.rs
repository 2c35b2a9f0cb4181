//! Discrete Menger-type curvature, integral p-energy, β/θ flatness numbers and
//! Grassmannian geometry for weighted point-cloud samples of m-dimensional sets.

// `!(x > 0.0)` rejects NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cones;
pub mod energy;
pub mod error;
pub mod flatness;
pub mod generators;
pub mod grassmann;
pub mod report;
pub mod pointcloud;
pub mod rng;
pub mod simplex;
pub mod tol;
pub mod vecops;
pub mod verify;

pub use error::{Error, Result};
pub use grassmann::Subspace;
pub use pointcloud::PointCloud;
pub use simplex::Simplex;
pub use tol::Tolerances;
