//! Numerov shooting on a logarithmic grid.
//!
//! With `x = ln r` and `u = Ψ/√r` the radial equation becomes
//! `u″ = g(x) u`, `g = ¼ + 2r²(V_eff − E)`, which resolves both the origin
//! region and long tails with a uniform step. Levels are isolated by the
//! outward node count and then refined on the sign of the Wronskian
//! between the outward and inward solutions at a fixed matching point.

use crate::frame::QuantumFrame;
use crate::potential::{effective_value, RadialPotential};
use crate::{Error, Result};

use super::fd::{inner_boundary, InnerBoundary};
use super::grid::RadialGrid;
use super::tridiag::BisectionOptions;

const SAFE_STEP: f64 = 0.05;
const RESCALE: f64 = 1e150;

/// Mismatch between outward and inward solutions at the matching radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchDefect {
    /// `(Ψ′/Ψ)_out − (Ψ′/Ψ)_in` at the matching radius.
    pub log_derivative_mismatch: f64,
    /// Wronskian in `x = ln r` of the two solutions, each normalised to unit
    /// size at the matching point; vanishes exactly at an eigenvalue.
    pub wronskian: f64,
    pub match_radius: f64,
    /// Sign changes of the outward solution over the whole grid.
    pub outward_nodes: usize,
}

#[derive(Debug, Clone)]
pub(crate) struct NumerovLevel {
    pub energy: f64,
    pub psi: Vec<f64>,
}

pub(crate) struct LogGrid {
    dx2_12: f64,
    dx: f64,
    pub r: Vec<f64>,
    q: Vec<f64>,
    r2: Vec<f64>,
    veff: Vec<f64>,
    start: usize,
    end: usize,
    nu: Option<f64>,
}

struct Sweep {
    // values on [from, to] (outward) or [to, from] (inward), indexed by grid index
    u: Vec<f64>,
    offset: usize,
    nodes: usize,
}

impl Sweep {
    fn at(&self, i: usize) -> f64 {
        self.u[i - self.offset]
    }
}

fn sign_changes(prev: f64, next: f64) -> bool {
    (prev < 0.0 && next > 0.0) || (prev > 0.0 && next < 0.0)
}

impl LogGrid {
    pub(crate) fn new<P: RadialPotential + ?Sized>(
        p: &P,
        frame: &QuantumFrame,
        grid: &RadialGrid,
    ) -> Result<Self> {
        let boundary = inner_boundary(p, frame)?;
        let r_lo = match boundary {
            InnerBoundary::Dirichlet => grid.r_min(),
            InnerBoundary::Regular { .. } => grid.r_min().min(1e-6 * grid.r_max()),
        };
        let n = grid.points();
        let dx = (grid.r_max() / r_lo).ln() / (n - 1) as f64;
        let x0 = r_lo.ln();
        let mut r = Vec::with_capacity(n);
        let mut q = Vec::with_capacity(n);
        let mut r2 = Vec::with_capacity(n);
        let mut veff = Vec::with_capacity(n);
        for i in 0..n {
            let ri = if i + 1 == n { grid.r_max() } else { (x0 + i as f64 * dx).exp() };
            let v = effective_value(p, frame, ri);
            if !v.is_finite() {
                return Err(Error::NonFinitePotential { r: ri });
            }
            r.push(ri);
            r2.push(2.0 * ri * ri);
            veff.push(v);
            q.push(0.25 + 2.0 * ri * ri * v);
        }
        let dx2_12 = dx * dx / 12.0;
        let safe = |i: &usize| dx2_12 * q[*i].abs() <= SAFE_STEP;
        let (start, nu) = match boundary {
            InnerBoundary::Dirichlet => ((0..n).find(safe).unwrap_or(n), None),
            InnerBoundary::Regular { exponent } => (0, Some(exponent - 0.5)),
        };
        let end = (0..n).rev().find(safe).unwrap_or(0);
        if end < start + 8 {
            return Err(Error::InvalidGrid(format!(
                "log grid too coarse for the potential: usable range [{start}, {end}] of {n} points"
            )));
        }
        Ok(Self {
            dx2_12,
            dx,
            r,
            q,
            r2,
            veff,
            start,
            end,
            nu,
        })
    }

    pub(crate) fn radii(&self) -> &[f64] {
        &self.r[self.start..=self.end]
    }

    fn f(&self, i: usize, e: f64) -> f64 {
        1.0 - self.dx2_12 * (self.q[i] - self.r2[i] * e)
    }

    fn lowest_potential(&self) -> f64 {
        self.veff[self.start..=self.end].iter().copied().fold(f64::INFINITY, f64::min)
    }

    fn step(&self, i_prev: usize, i: usize, i_next: usize, u_prev: f64, u: f64, e: f64) -> Option<f64> {
        let fn_ = self.f(i_next, e);
        if fn_ <= SAFE_STEP {
            return None;
        }
        Some(((12.0 - 10.0 * self.f(i, e)) * u - self.f(i_prev, e) * u_prev) / fn_)
    }

    /// Outward solution on `[start, stop]`; stops early (no further nodes)
    /// if the step becomes unstable deep in a forbidden region.
    fn outward(&self, e: f64, stop: usize) -> Result<(Sweep, bool)> {
        let s = self.start;
        let mut u = Vec::with_capacity(stop - s + 1);
        match self.nu {
            Some(nu) => {
                u.push(1.0);
                u.push((nu * self.dx).exp());
            }
            None => {
                u.push(0.0);
                u.push(1e-20);
            }
        }
        let mut nodes = 0;
        let mut complete = true;
        for i in s + 1..stop {
            let k = i - s;
            let next = match self.step(i - 1, i, i + 1, u[k - 1], u[k], e) {
                Some(v) => v,
                None => {
                    complete = false;
                    break;
                }
            };
            if !next.is_finite() {
                return Err(Error::Overflow(format!("outward Numerov sweep at E = {e}")));
            }
            if sign_changes(u[k], next) {
                nodes += 1;
            }
            u.push(next);
            if next.abs() > RESCALE {
                u.iter_mut().for_each(|x| *x /= RESCALE);
            }
        }
        Ok((Sweep { u, offset: s, nodes }, complete))
    }

    fn inward(&self, e: f64, stop: usize) -> Result<Sweep> {
        let t = self.end;
        // built from the end backwards, reversed at the finish
        let mut u = vec![0.0, 1e-20];
        let mut i = t - 1;
        while i > stop {
            let k = u.len();
            let next = self
                .step(i + 1, i, i - 1, u[k - 2], u[k - 1], e)
                .ok_or_else(|| Error::Overflow(format!("inward Numerov step unstable at E = {e}")))?;
            if !next.is_finite() {
                return Err(Error::Overflow(format!("inward Numerov sweep at E = {e}")));
            }
            u.push(next);
            if next.abs() > RESCALE {
                u.iter_mut().for_each(|x| *x /= RESCALE);
            }
            i -= 1;
        }
        u.reverse();
        Ok(Sweep {
            u,
            offset: stop,
            nodes: 0,
        })
    }

    fn count(&self, e: f64) -> Result<usize> {
        Ok(self.outward(e, self.end)?.0.nodes)
    }

    fn matching_index(&self, e: f64) -> usize {
        let (a, b) = (self.start + 2, self.end - 2);
        (a..=b)
            .rev()
            .find(|&i| self.veff[i] < e)
            .unwrap_or_else(|| {
                (a..=b)
                    .min_by(|&i, &j| self.veff[i].total_cmp(&self.veff[j]))
                    .unwrap_or(a)
            })
    }

    fn defect_at(&self, e: f64, m: usize) -> Result<MatchDefect> {
        let (out, complete) = self.outward(e, m + 1)?;
        if !complete {
            return Err(Error::Overflow(format!(
                "outward Numerov sweep unstable before the matching point at E = {e}"
            )));
        }
        let inn = self.inward(e, m - 1)?;
        let (l0, l1, lm) = (out.at(m), out.at(m + 1), out.at(m - 1));
        let (r0, r1, rm) = (inn.at(m), inn.at(m + 1), inn.at(m - 1));
        let nl = l0.hypot(l1);
        let nr = r0.hypot(r1);
        let wronskian = (l0 * r1 - l1 * r0) / (self.dx * nl * nr);
        let rm_ = self.r[m];
        let log_der = |a: f64, b: f64, c: f64| (0.5 + (c - a) / (2.0 * self.dx * b)) / rm_;
        let log_derivative_mismatch = if l0 != 0.0 && r0 != 0.0 {
            log_der(lm, l0, l1) - log_der(rm, r0, r1)
        } else {
            f64::NAN
        };
        Ok(MatchDefect {
            log_derivative_mismatch,
            wronskian,
            match_radius: rm_,
            outward_nodes: self.count(e)?,
        })
    }

    pub(crate) fn defect(&self, e: f64) -> Result<MatchDefect> {
        self.defect_at(e, self.matching_index(e))
    }

    fn wavefunction(&self, e: f64, m: usize) -> Result<Vec<f64>> {
        let (out, _) = self.outward(e, m)?;
        let inn = self.inward(e, m)?;
        let mut psi = Vec::with_capacity(self.end - self.start + 1);
        let scale = out.at(m) / inn.at(m);
        if !scale.is_finite() {
            return Err(Error::Overflow(format!("cannot join Numerov solutions at E = {e}")));
        }
        for i in self.start..=self.end {
            let u = if i <= m { out.at(i) } else { scale * inn.at(i) };
            psi.push(u * self.r[i].sqrt());
        }
        Ok(psi)
    }

    fn level(&self, j: usize, opts: &BisectionOptions) -> Result<NumerovLevel> {
        let exhausted = |what: &str| {
            Error::NoConvergence(format!(
                "Numerov {what} for level {j} exhausted {} steps",
                opts.max_bisections
            ))
        };
        let mut lo = self.lowest_potential();
        let mut c_lo = self.count(lo)?;
        if c_lo > j {
            return Err(Error::NodeSequence(format!(
                "{c_lo} nodes already at the potential minimum"
            )));
        }
        let mut step = 1e-3 * (1.0 + lo.abs());
        let mut hi = lo + step;
        let mut c_hi = self.count(hi)?;
        let mut tries = 0;
        while c_hi <= j {
            lo = hi;
            c_lo = c_hi;
            step *= 2.0;
            hi = lo + step;
            c_hi = self.count(hi)?;
            tries += 1;
            if tries > 4 * opts.max_bisections {
                return Err(exhausted("upper bracket search"));
            }
        }
        let converged = |lo: f64, hi: f64| {
            hi - lo <= (opts.relative_tolerance * lo.abs().max(hi.abs())).max(f64::MIN_POSITIVE)
        };
        let mut iters = 0;
        while !(c_lo == j && c_hi == j + 1) {
            if converged(lo, hi) {
                return Err(Error::NodeSequence(format!(
                    "levels {c_lo}..{c_hi} unresolved near E = {lo}"
                )));
            }
            let mid = 0.5 * (lo + hi);
            let c = self.count(mid)?;
            if c > j {
                hi = mid;
                c_hi = c;
            } else {
                lo = mid;
                c_lo = c;
            }
            iters += 1;
            if iters > opts.max_bisections {
                return Err(exhausted("level isolation"));
            }
        }
        let m = self.matching_index(0.5 * (lo + hi));
        let w_lo = self.defect_at(lo, m).map(|d| d.wronskian);
        let w_hi = self.defect_at(hi, m).map(|d| d.wronskian);
        let by_wronskian = matches!((&w_lo, &w_hi), (Ok(a), Ok(b)) if a * b < 0.0);
        let mut w_lo = w_lo.unwrap_or(f64::NAN);
        while !converged(lo, hi) {
            let mid = 0.5 * (lo + hi);
            if by_wronskian {
                let w = self.defect_at(mid, m)?.wronskian;
                if w == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if w * w_lo > 0.0 {
                    lo = mid;
                    w_lo = w;
                } else {
                    hi = mid;
                }
            } else if self.count(mid)? > j {
                hi = mid;
            } else {
                lo = mid;
            }
            iters += 1;
            if iters > opts.max_bisections {
                return Err(exhausted("refinement"));
            }
        }
        let energy = 0.5 * (lo + hi);
        let psi = self.wavefunction(energy, m)?;
        Ok(NumerovLevel { energy, psi })
    }
}

/// Outward/inward mismatch at trial energy `energy`.
pub fn shoot_numerov<P: RadialPotential + ?Sized>(
    p: &P,
    frame: &QuantumFrame,
    grid: &RadialGrid,
    energy: f64,
) -> Result<MatchDefect> {
    LogGrid::new(p, frame, grid)?.defect(energy)
}

pub(crate) fn numerov_levels(
    lg: &LogGrid,
    k: usize,
    opts: &BisectionOptions,
) -> Result<Vec<NumerovLevel>> {
    (0..k).map(|j| lg.level(j, opts)).collect()
}
