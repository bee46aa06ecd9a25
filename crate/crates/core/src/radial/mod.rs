//! U(n)-invariant Kähler geometry on `P^n` reduced to the radial coordinate
//! `t = log|z|²`.

pub mod grid;
pub mod profile;
pub mod stencil;

pub use grid::Grid;
pub use profile::{class_coefficient, class_volume, wedge_integral, KahlerProfile, RadialForm, SplitPotential};
