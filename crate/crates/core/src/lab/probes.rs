//! Spectral probes built on the assembled Hamiltonian: gauge invariance of
//! the AB term, the free-patch check in the intervening region, and the grid
//! convergence study for the Landau ladder.

use super::eigen::{lowest_eigenvalues, EigenSolution};
use super::grid::Grid2D;
use super::hamiltonian::DiscreteHamiltonian;
use crate::error::{CoreError, Result};
use crate::field::FieldConfiguration;
use crate::geometry::Vector2;
use serde::{Deserialize, Serialize};

/// Assembles with the source AB tail on and off on the same grid and returns
/// the maximum relative deviation over the k lowest levels. The tail is
/// curl-free on the simply connected spectator disk, so the two spectra must
/// agree to solver tolerance.
pub fn gauge_invariance_check(
    config: &FieldConfiguration,
    grid: &Grid2D,
    k: usize,
    eig_tol: f64,
) -> Result<f64> {
    let h_on = DiscreteHamiltonian::assemble(config, grid, true)?;
    let h_off = DiscreteHamiltonian::assemble(config, grid, false)?;
    let on = lowest_eigenvalues(&h_on, k, eig_tol)?;
    let off = lowest_eigenvalues(&h_off, k, eig_tol)?;
    Ok(max_rel_deviation(&on.values, &off.values))
}

fn max_rel_deviation(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs() / y.abs().max(1e-300))
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegionProbe {
    pub max_rel_deviation: f64,
    pub levels_with_tails: Vec<f64>,
    pub levels_free: Vec<f64>,
}

/// Assembles the Hamiltonian with both AB tails on a hard-wall box patch in
/// region III and compares its spectrum against the zero-potential box on
/// the same grid. The tails are jointly curl-free there, so the levels must
/// match to solver tolerance.
pub fn region_iii_spectrum_probe(
    config: &FieldConfiguration,
    grid: &Grid2D,
    k: usize,
    eig_tol: f64,
) -> Result<RegionProbe> {
    // the patch must not touch any flux-carrying disk
    let (lo, hi) = grid_bbox(grid);
    for prim in config.primitives() {
        let nearest = Vector2::new(
            prim.center.x1.clamp(lo.x1, hi.x1),
            prim.center.x2.clamp(lo.x2, hi.x2),
        );
        if (nearest - prim.center).norm() < prim.radius {
            return Err(CoreError::InvalidInput(format!(
                "probe patch intersects the disk at ({}, {})",
                prim.center.x1, prim.center.x2
            )));
        }
    }
    let h_ab = DiscreteHamiltonian::assemble(config, grid, true)?;
    let h_free =
        DiscreteHamiltonian::assemble_from_terms(&[], grid, &config.constants)?;
    let with_tails = lowest_eigenvalues(&h_ab, k, eig_tol)?;
    let free = lowest_eigenvalues(&h_free, k, eig_tol)?;
    Ok(RegionProbe {
        max_rel_deviation: max_rel_deviation(&with_tails.values, &free.values),
        levels_with_tails: with_tails.values,
        levels_free: free.values,
    })
}

fn grid_bbox(grid: &Grid2D) -> (Vector2, Vector2) {
    let mut lo = Vector2::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Vector2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in grid.nodes() {
        lo.x1 = lo.x1.min(p.x1);
        lo.x2 = lo.x2.min(p.x2);
        hi.x1 = hi.x1.max(p.x1);
        hi.x2 = hi.x2.max(p.x2);
    }
    (lo, hi)
}

/// How a reported "level" is read off the sorted eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LevelRule {
    /// Level n is the n-th eigenvalue.
    Plain,
    /// Landau bulk levels of a flux-threaded disk: the states below the n-th
    /// bulk level are the n filled manifolds, one per flux quantum, so level
    /// n sits at sorted index n * N_phi with N_phi = q B a^2 / (2 hbar c).
    LandauBulk,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub h: f64,
    pub level: u32,
    pub energy: f64,
    /// Change against the same level on the previous (coarser) grid.
    pub delta: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
    pub warnings: Vec<String>,
}

impl ConvergenceTable {
    /// Energies of the finest grid, one per level.
    pub fn finest_levels(&self, n_levels: usize) -> Vec<f64> {
        let h_min = self
            .rows
            .iter()
            .map(|r| r.h)
            .fold(f64::INFINITY, f64::min);
        (0..n_levels as u32)
            .filter_map(|lvl| {
                self.rows
                    .iter()
                    .find(|r| r.h == h_min && r.level == lvl)
                    .map(|r| r.energy)
            })
            .collect()
    }

    /// delta(previous halving) / delta(last halving) per level; the
    /// second-order stencil gives ratios near 4.
    pub fn halving_ratios(&self) -> Vec<(u32, f64)> {
        let mut hs: Vec<f64> = self.rows.iter().map(|r| r.h).collect();
        hs.sort_by(|a, b| b.partial_cmp(a).unwrap());
        hs.dedup();
        if hs.len() < 3 {
            return Vec::new();
        }
        let levels: Vec<u32> = {
            let mut l: Vec<u32> = self.rows.iter().map(|r| r.level).collect();
            l.sort_unstable();
            l.dedup();
            l
        };
        let find = |h: f64, lvl: u32| {
            self.rows
                .iter()
                .find(|r| r.h == h && r.level == lvl)
                .map(|r| r.energy)
        };
        let mut out = Vec::new();
        for lvl in levels {
            let (h0, h1, h2) = (hs[hs.len() - 3], hs[hs.len() - 2], hs[hs.len() - 1]);
            if let (Some(e0), Some(e1), Some(e2)) = (find(h0, lvl), find(h1, lvl), find(h2, lvl)) {
                let d1 = (e1 - e0).abs();
                let d2 = (e2 - e1).abs();
                out.push((lvl, d1 / d2.max(1e-300)));
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ConvergenceOpts {
    /// Coarsest grid spacing; each refinement halves it.
    pub base_h: f64,
    /// Number of halvings (2 gives the three grids of the standard protocol).
    pub refinements: usize,
    pub n_levels: usize,
    pub level_rule: LevelRule,
    /// Absolute residual tolerance passed to the eigensolver.
    pub eig_tol: f64,
}

/// Runs the documented convergence protocol on the spectator disk: assemble
/// and solve on grids h, h/2, ..., extract the requested levels, and report
/// each level together with its change from the previous grid.
pub fn convergence_study(
    config: &FieldConfiguration,
    opts: &ConvergenceOpts,
) -> Result<ConvergenceTable> {
    if opts.n_levels == 0 {
        return Ok(ConvergenceTable {
            rows: Vec::new(),
            warnings: Vec::new(),
        });
    }
    let k = &config.constants;
    let stride = match opts.level_rule {
        LevelRule::Plain => 1,
        LevelRule::LandauBulk => {
            let n_phi = (k.q * config.spectator.b * config.spectator.radius.powi(2)
                / (2.0 * k.hbar * k.c))
                .round();
            if n_phi < 1.0 {
                1
            } else {
                n_phi as usize
            }
        }
    };
    let n_eigen = (opts.n_levels - 1) * stride + 3;

    let mut rows = Vec::new();
    let mut warnings = Vec::new();
    let mut prev: Option<Vec<f64>> = None;
    for refine in 0..=opts.refinements {
        let h_grid = opts.base_h / (1u32 << refine) as f64;
        let grid = Grid2D::disk(config.spectator.center, config.spectator.radius, h_grid)?;
        let ham = DiscreteHamiltonian::assemble(config, &grid, true)?;
        for w in ham.warnings() {
            warnings.push(format!("h = {h_grid}: {w}"));
        }
        let sol: EigenSolution = lowest_eigenvalues(&ham, n_eigen.min(ham.dim() / 2), opts.eig_tol)?;
        let levels: Vec<f64> = (0..opts.n_levels)
            .map(|n| sol.values[n * stride])
            .collect();
        for (n, &e) in levels.iter().enumerate() {
            rows.push(ConvergenceRow {
                h: h_grid,
                level: n as u32,
                energy: e,
                delta: prev.as_ref().map(|p| e - p[n]),
            });
        }
        prev = Some(levels);
    }
    Ok(ConvergenceTable { rows, warnings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{GaugePrimitive, PhysicalConstants, ReceiverRegion};

    fn config(b0: f64, b_c: f64) -> FieldConfiguration {
        FieldConfiguration::new(
            PhysicalConstants::default(),
            GaugePrimitive::new(Vector2::ZERO, 1.0, b0).unwrap(),
            GaugePrimitive::new(Vector2::new(5.0, 0.0), 1.0, b_c).unwrap(),
            vec![],
            ReceiverRegion::InsideSpectator,
        )
        .unwrap()
    }

    #[test]
    fn zero_flux_deviation_is_zero() {
        let cfg = config(0.0, 4.0);
        let grid = Grid2D::disk(cfg.spectator.center, 1.0, 1.0 / 16.0).unwrap();
        let dev = gauge_invariance_check(&cfg, &grid, 3, 1e-8).unwrap();
        assert_eq!(dev, 0.0);
    }

    #[test]
    fn probe_rejects_patch_on_disk() {
        let cfg = config(1.0, 1.0);
        let grid = Grid2D::rect(Vector2::new(1.2, 0.0), 0.9, 0.9, 0.05).unwrap();
        assert!(region_iii_spectrum_probe(&cfg, &grid, 2, 1e-8).is_err());
    }
}
