//! Second-order finite-difference discretization of
//! `−½Ψ″ + V_eff Ψ = EΨ`.
//!
//! Two schemes:
//! * a Dirichlet wall at `r_min` and `r_max`, three-point Laplacian on the
//!   grid nodes, for potentials with a repulsive core (or unknown origin);
//! * for a leading `c/r²` origin, the regular solution `Ψ = r^s φ` with
//!   `s = ½ + √((Λ+½)² + 2c)` is built in through a weighted, symmetric
//!   flux form on cell centres over `[0, r_max]`. The operator stays
//!   symmetric and its eigenvectors are samples of `Ψ` itself.

use crate::frame::QuantumFrame;
use crate::potential::{effective_value, OriginBehavior, RadialPotential};
use crate::{Error, Result};

use super::grid::RadialGrid;
use super::tridiag::SymTridiagonal;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InnerBoundary {
    /// `Ψ(r_min) = 0`.
    Dirichlet,
    /// `Ψ ~ r^exponent` as `r → 0`.
    Regular { exponent: f64 },
}

#[derive(Debug, Clone)]
pub struct RadialOperator {
    pub matrix: SymTridiagonal,
    /// Position of each unknown.
    pub radii: Vec<f64>,
    pub boundary: InnerBoundary,
    pub spacing: f64,
}

/// How the inner boundary is treated for `p` in `frame`.
pub fn inner_boundary<P: RadialPotential + ?Sized>(
    p: &P,
    frame: &QuantumFrame,
) -> Result<InnerBoundary> {
    match p.origin_behavior() {
        OriginBehavior::RepulsiveCore | OriginBehavior::Unknown => Ok(InnerBoundary::Dirichlet),
        OriginBehavior::Collapsing => Err(Error::FallToCenter(
            "attractive singularity stronger than 1/r² at the origin".into(),
        )),
        OriginBehavior::InverseSquare(c) => {
            let nu_sq = frame.shifted_lambda_sq() / 4.0 + 2.0 * c;
            if nu_sq < 0.0 {
                return Err(Error::FallToCenter(format!(
                    "(Λ+½)² + 2c = {nu_sq} < 0 for c = {c}"
                )));
            }
            Ok(InnerBoundary::Regular {
                exponent: 0.5 + nu_sq.sqrt(),
            })
        }
    }
}

pub(crate) fn inverse_square_coupling<P: RadialPotential + ?Sized>(p: &P) -> f64 {
    match p.origin_behavior() {
        OriginBehavior::InverseSquare(c) => c,
        _ => 0.0,
    }
}

fn finite(r: f64, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinitePotential { r })
    }
}

/// Symmetric tridiagonal approximation of the radial Hamiltonian.
pub fn discretize<P: RadialPotential + ?Sized>(
    p: &P,
    frame: &QuantumFrame,
    grid: &RadialGrid,
) -> Result<RadialOperator> {
    match inner_boundary(p, frame)? {
        InnerBoundary::Dirichlet => dirichlet(p, frame, grid),
        InnerBoundary::Regular { exponent } => regular(p, grid, exponent),
    }
}

fn dirichlet<P: RadialPotential + ?Sized>(
    p: &P,
    frame: &QuantumFrame,
    grid: &RadialGrid,
) -> Result<RadialOperator> {
    let h = grid.spacing();
    let kin = 1.0 / (h * h);
    let n = grid.points() - 2;
    let radii: Vec<f64> = (1..=n).map(|i| grid.radius(i)).collect();
    let diag = radii
        .iter()
        .map(|&r| finite(r, effective_value(p, frame, r)).map(|v| kin + v))
        .collect::<Result<Vec<_>>>()?;
    let off = vec![-0.5 * kin; n - 1];
    Ok(RadialOperator {
        matrix: SymTridiagonal::new(diag, off)?,
        radii,
        boundary: InnerBoundary::Dirichlet,
        spacing: h,
    })
}

fn regular<P: RadialPotential + ?Sized>(
    p: &P,
    grid: &RadialGrid,
    s: f64,
) -> Result<RadialOperator> {
    let n = grid.points() - 1;
    let h = grid.r_max() / n as f64;
    let inv = 0.5 / (h * h);
    let c = inverse_square_coupling(p);
    let centre = |j: usize| (j as f64 + 0.5) * h;
    let face = |j: usize| j as f64 * h;
    let radii: Vec<f64> = (0..n).map(centre).collect();
    // ln w with w = r^{2s}
    let lw = |r: f64| 2.0 * s * r.ln();
    let mut diag = Vec::with_capacity(n);
    for (j, &r) in radii.iter().enumerate() {
        let u = finite(r, p.value(r) - c / (r * r))?;
        let left = if j == 0 { 0.0 } else { (lw(face(j)) - lw(r)).exp() };
        let right = (lw(face(j + 1)) - lw(r)).exp();
        diag.push(inv * (left + right) + u);
    }
    let off = (0..n - 1)
        .map(|j| {
            let l = lw(face(j + 1)) - 0.5 * (lw(radii[j]) + lw(radii[j + 1]));
            -inv * l.exp()
        })
        .collect();
    Ok(RadialOperator {
        matrix: SymTridiagonal::new(diag, off)?,
        radii,
        boundary: InnerBoundary::Regular { exponent: s },
        spacing: h,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::tridiag::eigen_lowest;
    use crate::potential::{KratzerPotential, SampledPotential};
    use approx::assert_relative_eq;

    fn frame(n: i64, l: i64) -> QuantumFrame {
        QuantumFrame::new(n, l).unwrap()
    }

    #[test]
    fn box_levels() {
        // free particle between walls at 1 and 1+L for M = 3 (no centrifugal term)
        let len = 2.0;
        let p = SampledPotential {
            func: |_r: f64| 0.0,
            origin: OriginBehavior::Unknown,
        };
        let g = RadialGrid::new(1.0, 1.0 + len, 4001).unwrap();
        let op = discretize(&p, &frame(3, 0), &g).unwrap();
        let e = eigen_lowest(&op.matrix, 3).unwrap();
        for (k, pair) in e.iter().enumerate() {
            let kk = (k + 1) as f64;
            let exact = kk * kk * std::f64::consts::PI.powi(2) / (2.0 * len * len);
            assert_relative_eq!(pair.value, exact, max_relative = 1e-5);
        }
    }

    #[test]
    fn regular_scheme_hydrogen() {
        let p = KratzerPotential::new(0.0, 1.0).unwrap();
        let g = RadialGrid::new(1e-9, 60.0, 20001).unwrap();
        let op = discretize(&p, &frame(3, 0), &g).unwrap();
        assert!(matches!(op.boundary, InnerBoundary::Regular { exponent } if (exponent - 1.0).abs() < 1e-15));
        let e = eigen_lowest(&op.matrix, 2).unwrap();
        assert_relative_eq!(e[0].value, -0.5, max_relative = 1e-5);
        assert_relative_eq!(e[1].value, -0.125, max_relative = 1e-5);
    }

    #[test]
    fn matrix_is_symmetric_and_finite() {
        let p = KratzerPotential::new(1.0, 2.0).unwrap();
        let g = RadialGrid::new(1e-6, 40.0, 500).unwrap();
        let op = discretize(&p, &frame(3, 1), &g).unwrap();
        assert_eq!(op.matrix.dim(), op.radii.len());
        assert!(op.matrix.diag().iter().chain(op.matrix.off()).all(|x| x.is_finite()));
        assert!(op.matrix.off().iter().all(|&x| x < 0.0));
    }

    #[test]
    fn collapse_and_non_finite_are_errors() {
        let p = SampledPotential {
            func: |r: f64| -1.0 / (r * r * r),
            origin: OriginBehavior::Collapsing,
        };
        let g = RadialGrid::new(0.1, 10.0, 100).unwrap();
        assert!(matches!(discretize(&p, &frame(3, 0), &g), Err(Error::FallToCenter(_))));
        let q = SampledPotential {
            func: |r: f64| -3.0 / (r * r),
            origin: OriginBehavior::InverseSquare(-3.0),
        };
        assert!(matches!(discretize(&q, &frame(3, 0), &g), Err(Error::FallToCenter(_))));
        let nan = |r: f64| if r > 5.0 { f64::NAN } else { 0.0 };
        assert!(matches!(
            discretize(&nan, &frame(3, 0), &g),
            Err(Error::NonFinitePotential { .. })
        ));
    }
}
