//! Desk-scale laboratory for Kähler geometry on explicit models.

pub mod banded;
pub mod curvlab;
pub mod error;
pub mod functionals;
pub mod intersect;
pub mod radial;
pub mod solver;
pub mod tau;
pub mod toric;

pub use error::{Error, Result};
pub use intersect::{ClassVector, IntersectionData, SubvarietyDatum, TauClass};
pub use tau::{TauPoly, TauRatio};

/// Version of this crate, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
