//! Dynamics of the rational map family `f(z) = (αz + β) / (γz² + δz)` on the
//! extended complex plane.

pub mod chaos;
pub mod criteria;
pub mod cycles;
pub mod error;
pub mod exec;
pub mod ext;
pub mod fixed_points;
pub mod io;
pub mod orbit;
pub mod plane_map;
pub mod poly;
pub mod presets;
pub mod render;
pub mod sampling;

#[cfg(test)]
mod test_util;

pub use error::{DynError, Result};
pub use ext::{chordal_distance, ExtComplex, C64};
pub use plane_map::MapParams;
