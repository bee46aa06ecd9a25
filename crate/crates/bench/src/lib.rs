//! Fixtures shared by the benchmarks: the inputs each kernel is timed on.

use std::f64::consts::TAU;
use std::sync::Arc;

use mylab::radial::{Grid, KahlerProfile, RadialForm};

/// The default quadrature grid.
pub fn grid() -> Arc<Grid> {
    Arc::new(Grid::default_grid())
}

/// A non-round U(n)-invariant profile in the class with parameter `eps`.
pub fn bumped_profile(n: usize, eps: f64, grid: &Arc<Grid>) -> KahlerProfile {
    KahlerProfile::sigma_polynomial(n, eps, grid.clone(), &[0.3, -0.3]).expect("small perturbation is Kähler")
}

/// `-ω_FS/2π`, the twist form in `-c1(H)`.
pub fn theta(grid: &Arc<Grid>) -> RadialForm {
    RadialForm::fubini_study(grid.clone(), -1.0 / TAU)
}
