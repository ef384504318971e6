//! Independent finite-difference verification of the analytic claims:
//! Landau ladders from the spectator field, spectral invisibility of the
//! source flux, and free-particle behavior in the intervening region. None
//! of this goes through the constraint machinery; agreement between the two
//! routes is the point.

mod eigen;
mod grid;
mod hamiltonian;
mod probes;

pub use eigen::{lowest_eigenvalues, EigenSolution};
pub use grid::{Grid2D, GridShape, RESOLUTION_GUARD};
pub use hamiltonian::DiscreteHamiltonian;
pub use probes::{
    convergence_study, gauge_invariance_check, region_iii_spectrum_probe, ConvergenceOpts,
    ConvergenceRow, ConvergenceTable, LevelRule, RegionProbe,
};
