use serde::{Deserialize, Serialize};

pub const TOL_LINALG: f64 = 1e-10;
pub const TOL_GEOM: f64 = 1e-7;

/// Numerical tolerances threaded through checks that compare computed quantities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub linalg: f64,
    pub geom: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { linalg: TOL_LINALG, geom: TOL_GEOM }
    }
}
