//! Locally averaged densities of sphere packings: spherical triangle
//! invariants, extremal families, stars and Type-I configurations, with
//! seeded numerical oracles.

pub mod clusters;
pub mod configurations;
pub mod error;
pub mod extremal;
pub mod geom;
pub mod level;
pub mod local_packing;
pub mod sweeps;
pub mod trig;
pub mod verify;

pub use clusters::Star5;
pub use configurations::{ConfigurationReport, TypeIConfiguration};
pub use error::{Error, Result};
pub use extremal::{ALPHA0, GAMMA, GAMMA0, RHO_STAR};
pub use geom::V3;
pub use sweeps::{ExecMode, SweepReport};
pub use trig::{SphericalTriangle, TriangleInvariants};
