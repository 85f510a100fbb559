//! Automatic domain and resolution choice from WKB estimates.

use serde::{Deserialize, Serialize};

use crate::frame::QuantumFrame;
use crate::potential::{effective_value, RadialPotential};
use crate::{Error, Result};

use super::fd::{inner_boundary, inverse_square_coupling, InnerBoundary};
use super::grid::RadialGrid;
use super::{solve_radial, Method, NumericSpectrum, SolverConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPlan {
    /// Required `∫κ dr` through each forbidden region.
    pub suppression: f64,
    /// Target `h·k` for finite differences.
    pub fd_resolution: f64,
    /// Target `dx·r·k` on the Numerov log grid.
    pub numerov_resolution: f64,
    /// Depth `∫κ dr` into an inner forbidden region down to which the
    /// local wavenumber must be resolved.
    pub core_depth: f64,
    pub min_points: usize,
    pub max_points: usize,
    /// Relative headroom added to the planning energy.
    pub energy_margin: f64,
    pub rounds: usize,
}

impl Default for GridPlan {
    fn default() -> Self {
        Self {
            suppression: 36.0,
            fd_resolution: 0.05,
            numerov_resolution: 0.05,
            core_depth: 2.0,
            min_points: 2000,
            max_points: 1_000_000,
            energy_margin: 0.05,
            rounds: 3,
        }
    }
}

const SCAN_LO: f64 = 1e-8;
const SCAN_HI: f64 = 1e8;
const SCAN_SAMPLES: usize = 3201;

fn scan_radius(i: usize) -> f64 {
    SCAN_LO * (SCAN_HI / SCAN_LO).powf(i as f64 / (SCAN_SAMPLES - 1) as f64)
}

fn crossing(f: impl Fn(f64) -> bool, mut inside: f64, mut outside: f64) -> f64 {
    for _ in 0..60 {
        let mid = (inside * outside).sqrt();
        if f(mid) {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    inside
}

/// Walks from `r0` in direction `dir` (±1) accumulating `∫κ dr` until it
/// reaches each of `targets` (ascending); returns the radii.
fn wkb_walk(kappa: impl Fn(f64) -> f64, r0: f64, dir: f64, targets: &[f64], limit: f64) -> Option<Vec<f64>> {
    let mut out = Vec::with_capacity(targets.len());
    let mut r = r0;
    let mut acc = 0.0;
    let mut k_prev = kappa(r);
    while out.len() < targets.len() {
        let dr = (0.02 * r).min(0.05 / k_prev.max(1e-300));
        let next = r + dir * dr;
        if !(next > 0.0) || (dir > 0.0 && next > limit) || (dir < 0.0 && next < limit) {
            return None;
        }
        let k = kappa(next);
        acc += 0.5 * (k + k_prev) * dr;
        r = next;
        k_prev = k;
        while out.len() < targets.len() && acc >= targets[out.len()] {
            out.push(r);
        }
    }
    Some(out)
}

/// Grid for the levels up to `energy`: the domain ends where the WKB
/// amplitude has decayed by `exp(−suppression)`, and the spacing resolves
/// the largest local wavenumber for `method`.
pub fn plan_grid<P: RadialPotential + ?Sized>(
    p: &P,
    frame: &QuantumFrame,
    energy: f64,
    method: Method,
    plan: &GridPlan,
) -> Result<RadialGrid> {
    if !energy.is_finite() {
        return Err(Error::InvalidState(format!("planning energy {energy} is not finite")));
    }
    let boundary = inner_boundary(p, frame)?;
    let veff = |r: f64| effective_value(p, frame, r);
    let allowed = |r: f64| veff(r) < energy;
    let flags: Vec<bool> = (0..SCAN_SAMPLES).map(|i| allowed(scan_radius(i))).collect();
    let first = flags.iter().position(|&a| a);
    let last = flags.iter().rposition(|&a| a);
    let (first, last) = match (first, last) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            return Err(Error::InvalidState(format!(
                "energy {energy} lies below the potential everywhere"
            )))
        }
    };
    if last + 1 == SCAN_SAMPLES {
        return Err(Error::InvalidState(format!(
            "energy {energy} is not below the potential at large r; no bound levels there"
        )));
    }
    let r_out = crossing(allowed, scan_radius(last), scan_radius(last + 1));
    let kappa = |r: f64| (2.0 * (veff(r) - energy)).max(0.0).sqrt();
    let r_max = wkb_walk(kappa, r_out, 1.0, &[plan.suppression], 1e3 * SCAN_HI)
        .map(|v| v[0])
        .ok_or_else(|| Error::InvalidState(format!("no decaying tail above E = {energy}")))?;

    let (r_min, r_res, local_k): (f64, f64, Box<dyn Fn(f64) -> f64 + '_>) = match boundary {
        InnerBoundary::Dirichlet => {
            let (r_min, r_res) = if first == 0 {
                (1e-6 * r_out, 1e-6 * r_out)
            } else {
                let r_in = crossing(allowed, scan_radius(first), scan_radius(first - 1));
                match wkb_walk(kappa, r_in, -1.0, &[plan.core_depth, plan.suppression], 1e-3 * SCAN_LO) {
                    Some(v) => (v[1], v[0]),
                    None => (1e-3 * SCAN_LO, 1e-3 * SCAN_LO),
                }
            };
            (r_min, r_res, Box::new(move |r| (2.0 * (veff(r) - energy).abs()).sqrt()))
        }
        InnerBoundary::Regular { .. } => {
            // inverse-square pieces are carried by the weight, not the grid
            let c = frame.centrifugal_strength() / 2.0 + inverse_square_coupling(p);
            let r_res = if first == 0 {
                1e-3 * r_out
            } else {
                0.5 * crossing(allowed, scan_radius(first), scan_radius(first - 1))
            };
            (
                1e-9 * r_max,
                r_res,
                Box::new(move |r| (2.0 * (veff(r) - c / (r * r) - energy).abs()).sqrt()),
            )
        }
    };

    let samples = 400;
    let mut k_max = 0.0f64;
    let mut rk_max = 0.0f64;
    for i in 0..=samples {
        let r = r_res * (r_max / r_res).powf(i as f64 / samples as f64);
        let k = local_k(r);
        if k.is_finite() {
            k_max = k_max.max(k);
            rk_max = rk_max.max(r * (2.0 * (veff(r) - energy).abs()).sqrt());
        }
    }
    let needed = match method {
        Method::FiniteDifference => {
            let h = plan.fd_resolution / k_max.max(1e-300);
            ((r_max - r_min) / h).ceil()
        }
        Method::NumerovShooting => {
            let r_lo = match boundary {
                InnerBoundary::Dirichlet => r_min,
                InnerBoundary::Regular { .. } => r_min.min(1e-6 * r_max),
            };
            ((r_max / r_lo).ln() * rk_max / plan.numerov_resolution).ceil()
        }
    };
    let points = if needed.is_finite() {
        (needed as usize + 1).clamp(plan.min_points, plan.max_points)
    } else {
        plan.max_points
    };
    RadialGrid::new(r_min, r_max, points.max(super::MIN_GRID_POINTS))
}

/// Plans a grid from `energy_hint` (an estimate of the highest requested
/// level), solves, and re-plans from the computed top level until the
/// estimate is self-consistent.
pub fn solve_auto<P: RadialPotential + ?Sized>(
    p: &P,
    frame: &QuantumFrame,
    cfg: &SolverConfig,
    k: usize,
    energy_hint: f64,
    plan: &GridPlan,
) -> Result<NumericSpectrum> {
    let mut target = energy_hint;
    let mut best = None;
    for _ in 0..plan.rounds.max(1) {
        let e_plan = target + plan.energy_margin * target.abs();
        let grid = plan_grid(p, frame, e_plan, cfg.method, plan)?;
        let spectrum = solve_radial(p, frame, cfg, &grid, k)?;
        let top = spectrum.entries[k - 1].energy;
        let settled = (top - target).abs() <= 1e-2 * top.abs().max(target.abs());
        best = Some(spectrum);
        if settled {
            break;
        }
        target = top;
    }
    Ok(best.expect("at least one planning round"))
}
