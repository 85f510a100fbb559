//! The change of variable `r = αρ²/2`, `R = F/ρ^λ`, which carries an
//! `N`-dimensional radial problem with angular momentum `ℓ` to an
//! `N' = 2N − 2 − 2λ` dimensional one with `L = 2ℓ + λ`.
//!
//! With `α² = 1/|E|` an inverse-power problem at energy `E < 0` becomes
//! an even-power problem at energy `Ê = −2A1/|E|^{1/2}`; energies and
//! couplings trade places. For the Kratzer potential the image is the
//! Goldman-Krivchenkov potential `ρ² + 4A/ρ²` and the map extends to the
//! whole spectrum.
//!
//! State labels follow the oscillator convention used for the
//! Coulomb/oscillator correspondence: the source state is labelled by
//! `n = n_r + ℓ + 1 ≥ 1` and the target by its total oscillator quanta
//! `n' = 2n'_r + L`. In those labels `n' = 2n − 2 + λ`, and the radial
//! node count is preserved, `n'_r = n_r`.

use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::analytic::{goldman_krivchenkov_energy, kratzer_energy};
use crate::{Error, EvenPowerPotential, InversePowerPotential, KratzerPotential, QuantumFrame, Result};

/// Relative tolerance for the closed-form identity checked by
/// [`kratzer_to_gk`].
pub const SPECTRAL_DUALITY_TOLERANCE: f64 = 1e-10;

/// Admissible `λ` for mapping every state of `frame`: `[0, N − 2]`, empty
/// for `N = 1`.
pub fn lambda_bounds(frame: &QuantumFrame) -> RangeInclusive<i64> {
    0..=(frame.dim() as i64 - 2)
}

pub fn check_lambda(frame: &QuantumFrame, lambda: i64) -> Result<()> {
    let bounds = lambda_bounds(frame);
    if bounds.is_empty() {
        return Err(Error::LambdaOutOfBounds {
            lambda,
            violated: format!("no admissible lambda for N = {}", frame.dim()),
        });
    }
    if lambda < *bounds.start() {
        return Err(Error::LambdaOutOfBounds {
            lambda,
            violated: format!("requires lambda >= 0, bound [{}, {}]", bounds.start(), bounds.end()),
        });
    }
    if lambda > *bounds.end() {
        return Err(Error::LambdaOutOfBounds {
            lambda,
            violated: format!(
                "requires lambda <= N - 2 = {} (N' >= 2), bound [{}, {}]",
                bounds.end(),
                bounds.start(),
                bounds.end()
            ),
        });
    }
    Ok(())
}

/// `(N, ℓ) → (2N − 2 − 2λ, 2ℓ + λ)`.
pub fn map_frame(frame: &QuantumFrame, lambda: i64) -> Result<QuantumFrame> {
    check_lambda(frame, lambda)?;
    QuantumFrame::new(
        2 * frame.dim() as i64 - 2 - 2 * lambda,
        2 * frame.ell() as i64 + lambda,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateCorrespondence {
    pub n: i64,
    pub n_prime: i64,
    pub lambda: i64,
}

/// `n' = 2n − 2 + λ`.
pub fn map_state(n: i64, lambda: i64) -> Result<StateCorrespondence> {
    if n < 1 {
        return Err(Error::InvalidState(format!("source label n = {n} must be >= 1")));
    }
    let n_prime = 2 * n - 2 + lambda;
    if n_prime < 0 {
        return Err(Error::InvalidState(format!(
            "target label n' = 2n - 2 + lambda = {n_prime} is negative"
        )));
    }
    Ok(StateCorrespondence { n, n_prime, lambda })
}

impl StateCorrespondence {
    /// Inverse of [`map_state`]; fails unless `n' − λ` is even and the
    /// recovered `n ≥ 1`.
    pub fn from_target(n_prime: i64, lambda: i64) -> Result<Self> {
        if n_prime < 0 {
            return Err(Error::InvalidState(format!("n' = {n_prime} must be >= 0")));
        }
        let twice_n = n_prime - lambda + 2;
        if twice_n.rem_euclid(2) != 0 {
            return Err(Error::InvalidState(format!(
                "n' = {n_prime} has the wrong parity for lambda = {lambda}"
            )));
        }
        map_state(twice_n / 2, lambda)
    }
}

/// Radial index of the source state labelled `n = n_r + ℓ + 1`.
pub fn source_radial_index(n: i64, frame: &QuantumFrame) -> Result<u32> {
    let n_r = n - frame.ell() as i64 - 1;
    u32::try_from(n_r).map_err(|_| {
        Error::InvalidState(format!(
            "n = {n} below the lowest state n = l + 1 = {} of l = {}",
            frame.ell() + 1,
            frame.ell()
        ))
    })
}

/// Radial index of the target state with oscillator quanta `n' = 2n'_r + L`.
pub fn target_radial_index(n_prime: i64, target: &QuantumFrame) -> Result<u32> {
    let diff = n_prime - target.ell() as i64;
    if diff < 0 || diff % 2 != 0 {
        return Err(Error::InvalidState(format!(
            "n' = {n_prime} is not reachable with L = {} (needs n' - L even and >= 0)",
            target.ell()
        )));
    }
    Ok((diff / 2) as u32)
}

/// Source and target of one application of the map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DualMap {
    pub lambda: i64,
    pub source: QuantumFrame,
    pub target: QuantumFrame,
    /// `α² = 1/|E|`.
    pub alpha_sq: f64,
}

impl DualMap {
    pub fn new(source: QuantumFrame, lambda: i64, energy: f64) -> Result<Self> {
        require_bound(energy)?;
        Ok(Self {
            lambda,
            source,
            target: map_frame(&source, lambda)?,
            alpha_sq: 1.0 / energy.abs(),
        })
    }
}

fn require_bound(energy: f64) -> Result<()> {
    if energy.is_finite() && energy < 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "E",
            value: energy,
            reason: "the map needs a bound-state energy E < 0",
        })
    }
}

/// Even-power image `ρ² + 4A2/ρ² + 8A3|E|^{1/2}/ρ⁴ + 16A4|E|/ρ⁶` of an
/// inverse-power potential at energy `E`. `A1` goes into the energy, see
/// [`dual_energy`].
pub fn transform_inverse_power(p: &InversePowerPotential, energy: f64) -> Result<EvenPowerPotential> {
    require_bound(energy)?;
    let abs_e = energy.abs();
    Ok(EvenPowerPotential {
        b1: 1.0,
        b2: 4.0 * p.a2,
        b3: 8.0 * p.a3 * abs_e.sqrt(),
        b4: 16.0 * p.a4 * abs_e,
    })
}

/// `Ê = −2A1/|E|^{1/2}`.
pub fn dual_energy(a1: f64, energy: f64) -> Result<f64> {
    require_bound(energy)?;
    Ok(-2.0 * a1 / energy.abs().sqrt())
}

/// One Kratzer level carried to its Goldman-Krivchenkov image.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KratzerDual {
    /// Coefficient `A` of the image potential `ρ² + 4A/ρ²`.
    pub a_gk: f64,
    pub map: DualMap,
    pub state: StateCorrespondence,
    pub target_radial_index: u32,
    /// `2B/|E_n|^{1/2}`.
    pub e_hat: f64,
    /// Goldman-Krivchenkov level at the mapped state.
    pub e_gk: f64,
}

impl KratzerDual {
    pub fn relative_deviation(&self) -> f64 {
        (self.e_hat - self.e_gk).abs() / self.e_gk.abs()
    }
}

/// Maps the Kratzer level `n` (`n = n_r + ℓ + 1`) with energy `e_n` to
/// the Goldman-Krivchenkov problem and checks that `2B/|E_n|^{1/2}` is the
/// image level.
pub fn kratzer_to_gk(
    p: &KratzerPotential,
    e_n: f64,
    frame: &QuantumFrame,
    n: i64,
    lambda: i64,
) -> Result<KratzerDual> {
    let map = DualMap::new(*frame, lambda, e_n)?;
    source_radial_index(n, frame)?;
    let state = map_state(n, lambda)?;
    let target_radial_index = target_radial_index(state.n_prime, &map.target)?;
    let e_hat = dual_energy(-p.b(), e_n)?;
    let e_gk = goldman_krivchenkov_energy(p.a(), &map.target, target_radial_index)?;
    if (e_hat - e_gk).abs() > SPECTRAL_DUALITY_TOLERANCE * e_gk.abs() {
        return Err(Error::DualityMismatch {
            lhs: e_hat,
            rhs: e_gk,
        });
    }
    Ok(KratzerDual {
        a_gk: p.a(),
        map,
        state,
        target_radial_index,
        e_hat,
        e_gk,
    })
}

/// [`kratzer_to_gk`] with `E_n` taken from the closed-form spectrum.
pub fn kratzer_level_to_gk(
    p: &KratzerPotential,
    frame: &QuantumFrame,
    n: i64,
    lambda: i64,
) -> Result<KratzerDual> {
    let n_r = source_radial_index(n, frame)?;
    kratzer_to_gk(p, kratzer_energy(p, frame, n_r), frame, n, lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{ep_ground_state, ip_ground_state, Superpotential};
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::SQRT_2;

    fn frame(n: i64, l: i64) -> QuantumFrame {
        QuantumFrame::new(n, l).unwrap()
    }

    #[test]
    fn frame_examples() {
        assert_eq!(map_frame(&frame(3, 0), 0).unwrap(), frame(4, 0));
        assert_eq!(map_frame(&frame(3, 0), 1).unwrap(), frame(2, 1));
        let err = map_frame(&frame(3, 0), 5).unwrap_err();
        assert!(err.to_string().contains("[0, 1]"), "{err}");
        assert!(map_frame(&frame(3, 0), -1).is_err());
        assert!(map_frame(&frame(1, 0), 0).is_err());
    }

    #[test]
    fn bounds_examples() {
        assert_eq!(lambda_bounds(&frame(3, 0)), 0..=1);
        assert_eq!(lambda_bounds(&frame(2, 4)), 0..=0);
        assert!(lambda_bounds(&frame(1, 0)).is_empty());
    }

    #[test]
    fn state_examples() {
        assert_eq!(map_state(1, 0).unwrap().n_prime, 0);
        assert_eq!(map_state(1, 1).unwrap().n_prime, 1);
        assert_eq!(map_state(2, 1).unwrap().n_prime, 3);
        assert!(map_state(0, 0).is_err());
        assert_eq!(StateCorrespondence::from_target(3, 1).unwrap().n, 2);
        assert!(StateCorrespondence::from_target(3, 0).is_err());
        assert!(StateCorrespondence::from_target(-1, 0).is_err());
    }

    #[test]
    fn transform_examples() {
        let p = InversePowerPotential {
            a1: -1.0,
            a2: -1.0,
            a3: 0.0,
            a4: 0.5,
        };
        let q = transform_inverse_power(&p, -0.5).unwrap();
        assert_eq!((q.b1, q.b2, q.b3, q.b4), (1.0, -4.0, 0.0, 4.0));
        let sol = ep_ground_state(q.b1, q.b2, q.b3, q.b4, &frame(4, 0)).unwrap();
        assert!(sol.constraint_residual < 1e-14);

        let coulomb = InversePowerPotential {
            a1: -1.0,
            a2: 0.0,
            a3: 0.0,
            a4: 0.0,
        };
        let q = transform_inverse_power(&coulomb, -0.3).unwrap();
        assert_eq!((q.b1, q.b2, q.b3, q.b4), (1.0, 0.0, 0.0, 0.0));

        let p = InversePowerPotential { a3: 0.7, ..p };
        let q1 = transform_inverse_power(&p, -0.4).unwrap();
        let q2 = transform_inverse_power(&p, -0.8).unwrap();
        assert_relative_eq!(q2.b4, 2.0 * q1.b4, max_relative = 1e-15);
        assert_relative_eq!(q2.b3, SQRT_2 * q1.b3, max_relative = 1e-15);
        assert_eq!(q2.b2, q1.b2);
        assert!(transform_inverse_power(&p, 0.0).is_err());
    }

    #[test]
    fn dual_energy_examples() {
        assert_relative_eq!(dual_energy(-1.0, -0.5).unwrap(), 2.0 * SQRT_2, max_relative = 1e-15);
        assert_eq!(dual_energy(0.0, -3.0).unwrap(), 0.0);
        assert!(dual_energy(-1.0, 0.5).is_err());
    }

    #[test]
    fn coulomb_to_oscillator() {
        let h = KratzerPotential::new(0.0, 1.0).unwrap();
        let d = kratzer_level_to_gk(&h, &frame(3, 0), 1, 0).unwrap();
        assert_relative_eq!(d.e_hat, 2.0 * SQRT_2, max_relative = 1e-15);
        assert_eq!(d.map.target, frame(4, 0));
        assert_eq!(d.state.n_prime, 0);

        let d = kratzer_level_to_gk(&h, &frame(3, 0), 2, 0).unwrap();
        assert_relative_eq!(d.e_hat, 4.0 * SQRT_2, max_relative = 1e-15);
        assert_eq!(d.state.n_prime, 2);
        assert_eq!(d.target_radial_index, 1);

        assert!(matches!(
            kratzer_level_to_gk(&h, &frame(3, 0), 1, 2),
            Err(Error::LambdaOutOfBounds { .. })
        ));
        assert!(kratzer_to_gk(&h, -0.4, &frame(3, 0), 1, 0).is_err());
    }

    #[test]
    fn p_states_skip_lowest_oscillator_levels() {
        let k = KratzerPotential::new(1.0, 2.0).unwrap();
        assert!(kratzer_level_to_gk(&k, &frame(3, 1), 1, 0).is_err());
        let d = kratzer_level_to_gk(&k, &frame(3, 1), 2, 0).unwrap();
        assert_eq!((d.state.n_prime, d.map.target.ell()), (2, 2));
        let d = kratzer_level_to_gk(&k, &frame(3, 1), 2, 1).unwrap();
        assert_eq!((d.state.n_prime, d.map.target.ell()), (3, 3));
    }

    #[test]
    fn parity_exclusion() {
        let k = KratzerPotential::new(1.0, 2.0).unwrap();
        for lambda in 0..=1 {
            let reached: Vec<i64> = (1..=6)
                .map(|n| kratzer_level_to_gk(&k, &frame(3, 0), n, lambda).unwrap().state.n_prime)
                .collect();
            let expected: Vec<i64> = (0..6).map(|j| 2 * j + lambda).collect();
            assert_eq!(reached, expected);
        }
    }

    proptest! {
        #[test]
        fn target_m_independent_of_lambda(n in 2i64..12, l in 0i64..5) {
            let f = frame(n, l);
            for lambda in lambda_bounds(&f) {
                let t = map_frame(&f, lambda).unwrap();
                prop_assert_eq!(t.m(), 2 * f.m() - 2);
            }
        }

        #[test]
        fn state_map_round_trip(n in 1i64..50, lambda in 0i64..6) {
            let s = map_state(n, lambda).unwrap();
            prop_assert_eq!(StateCorrespondence::from_target(s.n_prime, lambda).unwrap(), s);
        }

        #[test]
        fn spectral_duality(a in 0.0f64..4.0, b in 0.1f64..4.0, n_dim in 2i64..8, l in 0i64..4, extra in 0i64..6) {
            let k = KratzerPotential::new(a, b).unwrap();
            let f = frame(n_dim, l);
            for lambda in lambda_bounds(&f) {
                let n = l + 1 + extra;
                let d = kratzer_level_to_gk(&k, &f, n, lambda).unwrap();
                prop_assert_eq!(d.target_radial_index as i64, extra);
                prop_assert!(d.relative_deviation() <= 1e-12);
            }
        }

        #[test]
        fn qes_chain_round_trip(
            a2 in -2.0f64..1.0, a3 in -2.0f64..2.0, a4 in 0.1f64..5.0,
            n in 2i64..7, l in 0i64..3,
        ) {
            let f = frame(n, l);
            let Ok(sol) = ip_ground_state(a2, a3, a4, &f) else { return Ok(()) };
            let Superpotential::InversePower(w) = sol.superpotential else { unreachable!() };
            // the image exponent δ = 2c − ½ must satisfy δ > 0
            prop_assume!(w.c > 0.25 + 1e-9);
            let p = InversePowerPotential { a1: sol.required_coefficient, a2, a3, a4 };
            let q = transform_inverse_power(&p, sol.energy).unwrap();
            let dual = ep_ground_state(q.b1, q.b2, q.b3, q.b4, &map_frame(&f, 0).unwrap()).unwrap();
            prop_assert!(dual.constraint_residual <= 1e-9 * (1.0 + q.b2.abs()));
            let expected = dual_energy(p.a1, sol.energy).unwrap();
            prop_assert!((dual.energy - expected).abs() <= 1e-10 * expected.abs());
        }
    }
}
