pub mod curvlab;
pub mod delta;
pub mod energy;
pub mod intersect;
pub mod report;
pub mod solve;
pub mod toric;

use std::path::Path;

use mylab::IntersectionData;

use crate::error::CliError;
use crate::io::Io;

/// Reads a variety document, looking under `corpus/intersection` too.
pub fn load_variety(io: &mut Io, path: &Path) -> Result<IntersectionData, CliError> {
    let (_, text) = io.read(path, "intersection")?;
    Ok(IntersectionData::from_json_str(&text)?)
}

/// Reads a fan document, looking under `corpus/fans` too.
pub fn load_fan(io: &mut Io, path: &Path) -> Result<mylab::toric::ToricSurfaceFan, CliError> {
    let (_, text) = io.read(path, "fans")?;
    Ok(mylab::toric::ToricSurfaceFan::from_json_str(&text)?)
}

/// The first basis label flagged ample.
pub fn first_ample(d: &IntersectionData) -> Option<mylab::ClassVector> {
    d.ample_labels().next().map(|l| mylab::ClassVector::basis(l.to_string()))
}
