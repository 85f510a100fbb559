//! Numerical reference solver for the reduced radial equation.
//!
//! Two independent methods share a [`RadialGrid`]: a second-order
//! finite-difference discretization diagonalized by Sturm bisection, and
//! Numerov shooting. Either can be Richardson-extrapolated from the grid
//! and its halved-spacing refinement.

mod checks;
mod fd;
mod grid;
mod numerov;
mod plan;
mod tridiag;

use serde::{Deserialize, Serialize};

use crate::frame::QuantumFrame;
use crate::potential::RadialPotential;
use crate::{Error, Result};

pub use checks::{l2_norm_sq, node_count, normalize, residual_check};
pub use fd::{discretize, inner_boundary, InnerBoundary, RadialOperator};
pub use grid::{RadialGrid, MIN_GRID_POINTS};
pub use numerov::{shoot_numerov, MatchDefect};
pub use plan::{plan_grid, solve_auto, GridPlan};
pub use tridiag::{eigen_lowest, eigen_lowest_with, BisectionOptions, EigenPair, SymTridiagonal};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    FiniteDifference,
    NumerovShooting,
}

impl Method {
    /// Leading power of the discretization error in the grid spacing.
    pub fn order(self) -> i32 {
        match self {
            Method::FiniteDifference => 2,
            Method::NumerovShooting => 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub method: Method,
    pub eig_tolerance: f64,
    pub max_bisections: u32,
    pub richardson: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            method: Method::FiniteDifference,
            eig_tolerance: 1e-13,
            max_bisections: 256,
            richardson: true,
        }
    }
}

impl SolverConfig {
    pub fn with_method(method: Method) -> Self {
        Self {
            method,
            ..Self::default()
        }
    }

    fn bisection(&self) -> Result<BisectionOptions> {
        if !(self.eig_tolerance > 0.0 && self.eig_tolerance < 1.0) || self.max_bisections == 0 {
            return Err(Error::InvalidState(format!(
                "eigenvalue tolerance must lie in (0, 1) and bisections be positive, got {} and {}",
                self.eig_tolerance, self.max_bisections
            )));
        }
        Ok(BisectionOptions {
            relative_tolerance: self.eig_tolerance,
            max_bisections: self.max_bisections,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub node_count: usize,
    /// Extrapolated when Richardson is enabled, otherwise `coarse_energy`.
    pub energy: f64,
    pub coarse_energy: f64,
    pub fine_energy: Option<f64>,
    /// `Ψ` at [`NumericSpectrum::radii`], unit L² norm.
    pub wavefunction: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NumericSpectrum {
    pub grid: RadialGrid,
    pub method: Method,
    pub radii: Vec<f64>,
    pub entries: Vec<SpectrumEntry>,
}

impl NumericSpectrum {
    pub fn energies(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.energy).collect()
    }
}

struct RawLevels {
    radii: Vec<f64>,
    energies: Vec<f64>,
    vectors: Vec<Vec<f64>>,
}

fn raw_levels<P: RadialPotential + ?Sized>(
    p: &P,
    frame: &QuantumFrame,
    cfg: &SolverConfig,
    grid: &RadialGrid,
    k: usize,
) -> Result<RawLevels> {
    let opts = cfg.bisection()?;
    match cfg.method {
        Method::FiniteDifference => {
            let op = discretize(p, frame, grid)?;
            let pairs = eigen_lowest_with(&op.matrix, k, &opts)?;
            let (energies, vectors) = pairs.into_iter().map(|e| (e.value, e.vector)).unzip();
            Ok(RawLevels {
                radii: op.radii,
                energies,
                vectors,
            })
        }
        Method::NumerovShooting => {
            let lg = numerov::LogGrid::new(p, frame, grid)?;
            let levels = numerov::numerov_levels(&lg, k, &opts)?;
            let (energies, vectors) = levels.into_iter().map(|l| (l.energy, l.psi)).unzip();
            Ok(RawLevels {
                radii: lg.radii().to_vec(),
                energies,
                vectors,
            })
        }
    }
}

/// Lowest `k` levels of `−½Ψ″ + V_eff Ψ = EΨ` on `grid`.
///
/// Fails with [`Error::NodeSequence`] unless the `j`-th state has exactly
/// `j` nodes and the levels are strictly increasing.
pub fn solve_radial<P: RadialPotential + ?Sized>(
    p: &P,
    frame: &QuantumFrame,
    cfg: &SolverConfig,
    grid: &RadialGrid,
    k: usize,
) -> Result<NumericSpectrum> {
    if k == 0 || k + 2 > grid.points() {
        return Err(Error::InvalidState(format!(
            "cannot resolve {k} levels on {} points",
            grid.points()
        )));
    }
    let coarse = raw_levels(p, frame, cfg, grid, k)?;
    let fine = if cfg.richardson {
        Some(raw_levels(p, frame, cfg, &grid.refined(), k)?.energies)
    } else {
        None
    };
    let gain = 2f64.powi(cfg.method.order());
    let mut entries = Vec::with_capacity(k);
    for (j, (coarse_energy, mut wavefunction)) in
        coarse.energies.into_iter().zip(coarse.vectors).enumerate()
    {
        normalize(&coarse.radii, &mut wavefunction)?;
        let nodes = node_count(&wavefunction);
        if nodes != j {
            return Err(Error::NodeSequence(format!(
                "level {j} (E = {coarse_energy}) has {nodes} nodes"
            )));
        }
        let fine_energy = fine.as_ref().map(|f| f[j]);
        let energy = match fine_energy {
            Some(f) => (gain * f - coarse_energy) / (gain - 1.0),
            None => coarse_energy,
        };
        if !energy.is_finite() {
            return Err(Error::Overflow(format!("level {j} energy is {energy}")));
        }
        if let Some(prev) = entries.last().map(|e: &SpectrumEntry| e.coarse_energy) {
            if coarse_energy <= prev {
                return Err(Error::NodeSequence(format!(
                    "levels {} and {j} are not strictly increasing",
                    j - 1
                )));
            }
        }
        entries.push(SpectrumEntry {
            node_count: nodes,
            energy,
            coarse_energy,
            fine_energy,
            wavefunction,
        });
    }
    Ok(NumericSpectrum {
        grid: *grid,
        method: cfg.method,
        radii: coarse.radii,
        entries,
    })
}
