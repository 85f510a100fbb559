use crate::analytic::ClosedFormWavefunction;
use crate::frame::QuantumFrame;
use crate::potential::{effective_value, RadialPotential};
use crate::{Error, Result};

use super::grid::RadialGrid;

/// Sign changes of `samples`, ignoring entries below `1e-8·max|Ψ|`.
pub fn node_count(samples: &[f64]) -> usize {
    let peak = samples.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let floor = 1e-8 * peak;
    let mut last = 0.0;
    let mut nodes = 0;
    for &x in samples.iter().filter(|x| x.abs() > floor) {
        if last != 0.0 && x.signum() != last {
            nodes += 1;
        }
        last = x.signum();
    }
    nodes
}

/// `∫Ψ² dr` by the trapezoid rule on the sample positions.
pub fn l2_norm_sq(radii: &[f64], samples: &[f64]) -> f64 {
    radii
        .windows(2)
        .zip(samples.windows(2))
        .map(|(r, s)| 0.5 * (r[1] - r[0]) * (s[0] * s[0] + s[1] * s[1]))
        .sum()
}

/// Scales `samples` to unit L² norm with a positive first lobe.
pub fn normalize(radii: &[f64], samples: &mut [f64]) -> Result<()> {
    if radii.len() != samples.len() || radii.len() < 2 {
        return Err(Error::InvalidGrid(format!(
            "{} radii for {} samples",
            radii.len(),
            samples.len()
        )));
    }
    let norm = l2_norm_sq(radii, samples).sqrt();
    if !(norm.is_finite() && norm > 0.0) {
        return Err(Error::Overflow(format!("wavefunction norm is {norm}")));
    }
    let peak = samples.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let first = samples
        .iter()
        .find(|x| x.abs() > 1e-8 * peak)
        .copied()
        .unwrap_or(1.0);
    let scale = first.signum() / norm;
    samples.iter_mut().for_each(|x| *x *= scale);
    Ok(())
}

/// `max |−½Ψ″ + V_eff Ψ − EΨ| / (|E|·max|Ψ|)` over the interior nodes of
/// `grid`, with `Ψ″` taken exactly from the closed form.
pub fn residual_check<P: RadialPotential + ?Sized>(
    p: &P,
    frame: &QuantumFrame,
    psi: &ClosedFormWavefunction,
    energy: f64,
    grid: &RadialGrid,
) -> Result<f64> {
    let nodes: Vec<f64> = (1..grid.points() - 1).map(|i| grid.radius(i)).collect();
    let logs: Vec<f64> = nodes.iter().map(|&r| psi.ln_value(r)).collect();
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !top.is_finite() {
        return Err(Error::Overflow("closed-form wavefunction is not finite on the grid".into()));
    }
    let mut worst = 0.0f64;
    for (&r, &l) in nodes.iter().zip(&logs) {
        let weight = (l - top).exp();
        if weight == 0.0 {
            continue;
        }
        let v = effective_value(p, frame, r);
        let term = (-0.5 * psi.curvature_ratio(r) + v - energy).abs() * weight;
        if !term.is_finite() {
            return Err(Error::NonFinitePotential { r });
        }
        worst = worst.max(term);
    }
    let scale = if energy == 0.0 { 1.0 } else { energy.abs() };
    Ok(worst / scale)
}
