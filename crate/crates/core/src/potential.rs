//! The four closed potential families, their evaluation, and the reduced
//! one-dimensional radial problem built from them.

use serde::{Deserialize, Serialize};

use crate::{Error, QuantumFrame, Result};

/// `V(r) = A1/r + A2/r² + A3/r³ + A4/r⁴`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InversePowerPotential {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
}

/// `V(r) = B1 r² + B2/r² + B3/r⁴ + B4/r⁶`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvenPowerPotential {
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
    pub b4: f64,
}

/// `V(r) = A/r² − B/r`. `A = 0` is the Coulomb problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "KratzerRepr")]
pub struct KratzerPotential {
    a: f64,
    b: f64,
}

#[derive(Deserialize)]
struct KratzerRepr {
    a: f64,
    b: f64,
}

impl TryFrom<KratzerRepr> for KratzerPotential {
    type Error = Error;
    fn try_from(r: KratzerRepr) -> Result<Self> {
        KratzerPotential::new(r.a, r.b)
    }
}

impl KratzerPotential {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && a >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "A",
                value: a,
                reason: "Kratzer repulsion must be finite and >= 0",
            });
        }
        if !(b.is_finite() && b > 0.0) {
            return Err(Error::InvalidParameter {
                name: "B",
                value: b,
                reason: "Kratzer attraction must be finite and > 0",
            });
        }
        Ok(Self { a, b })
    }

    /// Mie form with `q = 2p = 2`: well depth `D0` at `r = σ`.
    pub fn from_well(d0: f64, sigma: f64) -> Result<Self> {
        Self::new(d0 * sigma * sigma, 2.0 * d0 * sigma)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Location and depth of the minimum, `(2A/B, −B²/(4A))`. `None` for
    /// the Coulomb case.
    pub fn minimum(&self) -> Option<(f64, f64)> {
        (self.a > 0.0).then(|| (2.0 * self.a / self.b, -self.b * self.b / (4.0 * self.a)))
    }
}

/// `Ṽ(r) = B̃ r² + Ã/r² − 2V0`.
///
/// [`from_well`](Self::from_well) builds the physical well
/// `V0 (r/r0 − r0/r)²`; [`from_coefficients`](Self::from_coefficients)
/// accepts the three coefficients directly, which covers the
/// Goldman-Krivchenkov form `ρ² + 4A/ρ²` (`B̃ = 1, Ã = 4A, V0 = 0`) and the
/// plain oscillator (`Ã = 0`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PseudoharmonicRepr")]
pub struct PseudoharmonicPotential {
    b_tilde: f64,
    a_tilde: f64,
    v0: f64,
}

#[derive(Deserialize)]
struct PseudoharmonicRepr {
    b_tilde: f64,
    a_tilde: f64,
    v0: f64,
}

impl TryFrom<PseudoharmonicRepr> for PseudoharmonicPotential {
    type Error = Error;
    fn try_from(r: PseudoharmonicRepr) -> Result<Self> {
        PseudoharmonicPotential::from_coefficients(r.b_tilde, r.a_tilde, r.v0)
    }
}

impl PseudoharmonicPotential {
    pub fn from_well(v0: f64, r0: f64) -> Result<Self> {
        if !(v0.is_finite() && v0 > 0.0) {
            return Err(Error::InvalidParameter {
                name: "V0",
                value: v0,
                reason: "well depth must be > 0",
            });
        }
        if !(r0.is_finite() && r0 > 0.0) {
            return Err(Error::InvalidParameter {
                name: "r0",
                value: r0,
                reason: "equilibrium radius must be > 0",
            });
        }
        Ok(Self {
            b_tilde: v0 / (r0 * r0),
            a_tilde: v0 * r0 * r0,
            v0,
        })
    }

    pub fn from_coefficients(b_tilde: f64, a_tilde: f64, v0: f64) -> Result<Self> {
        if !(b_tilde.is_finite() && b_tilde > 0.0) {
            return Err(Error::InvalidParameter {
                name: "Btil",
                value: b_tilde,
                reason: "confining coefficient must be > 0",
            });
        }
        if !(a_tilde.is_finite() && a_tilde >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "Atil",
                value: a_tilde,
                reason: "inverse-square coefficient must be >= 0",
            });
        }
        if !v0.is_finite() {
            return Err(Error::InvalidParameter {
                name: "V0",
                value: v0,
                reason: "shift must be finite",
            });
        }
        Ok(Self {
            b_tilde,
            a_tilde,
            v0,
        })
    }

    /// `ρ² + 4A/ρ²`.
    pub fn goldman_krivchenkov(a: f64) -> Result<Self> {
        if !(a.is_finite() && a >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "A",
                value: a,
                reason: "Goldman-Krivchenkov coefficient must be >= 0",
            });
        }
        Self::from_coefficients(1.0, 4.0 * a, 0.0)
    }

    pub fn b_tilde(&self) -> f64 {
        self.b_tilde
    }

    pub fn a_tilde(&self) -> f64 {
        self.a_tilde
    }

    pub fn v0(&self) -> f64 {
        self.v0
    }
}

/// Closed set of potential families handled analytically.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum PotentialSpec {
    InversePower(InversePowerPotential),
    EvenPower(EvenPowerPotential),
    Kratzer(KratzerPotential),
    Pseudoharmonic(PseudoharmonicPotential),
}

impl From<InversePowerPotential> for PotentialSpec {
    fn from(p: InversePowerPotential) -> Self {
        PotentialSpec::InversePower(p)
    }
}

impl From<EvenPowerPotential> for PotentialSpec {
    fn from(p: EvenPowerPotential) -> Self {
        PotentialSpec::EvenPower(p)
    }
}

impl From<KratzerPotential> for PotentialSpec {
    fn from(p: KratzerPotential) -> Self {
        PotentialSpec::Kratzer(p)
    }
}

impl From<PseudoharmonicPotential> for PotentialSpec {
    fn from(p: PseudoharmonicPotential) -> Self {
        PotentialSpec::Pseudoharmonic(p)
    }
}

impl PotentialSpec {
    /// Raw evaluation; no domain check.
    pub fn value_at(&self, r: f64) -> f64 {
        match *self {
            PotentialSpec::InversePower(p) => {
                let u = 1.0 / r;
                u * (p.a1 + u * (p.a2 + u * (p.a3 + u * p.a4)))
            }
            PotentialSpec::EvenPower(p) => {
                let u = 1.0 / (r * r);
                p.b1 * r * r + u * (p.b2 + u * (p.b3 + u * p.b4))
            }
            PotentialSpec::Kratzer(p) => p.a / (r * r) - p.b / r,
            PotentialSpec::Pseudoharmonic(p) => {
                p.b_tilde * r * r + p.a_tilde / (r * r) - 2.0 * p.v0
            }
        }
    }

    pub fn evaluate(&self, r: f64) -> Result<f64> {
        check_radius(r)?;
        Ok(self.value_at(r))
    }
}

/// How a potential behaves as `r → 0⁺`, which decides the inner boundary
/// treatment of the numerical solver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum OriginBehavior {
    /// Repulsive singularity stronger than `1/r²`; the wavefunction is
    /// exponentially suppressed near the origin.
    RepulsiveCore,
    /// Leading singularity is `c/r²` (possibly `c = 0`) plus milder terms.
    InverseSquare(f64),
    /// Attractive singularity stronger than `1/r²`; unbounded below.
    Collapsing,
    /// Nothing known; the solver falls back to a Dirichlet wall at `r_min`.
    Unknown,
}

fn leading_core(c6: f64, c4: f64, c3: f64, c2: f64) -> OriginBehavior {
    for c in [c6, c4, c3] {
        if c > 0.0 {
            return OriginBehavior::RepulsiveCore;
        }
        if c < 0.0 {
            return OriginBehavior::Collapsing;
        }
    }
    OriginBehavior::InverseSquare(c2)
}

/// Anything the numerical solver can integrate.
pub trait RadialPotential: Sync {
    fn value(&self, r: f64) -> f64;

    fn origin_behavior(&self) -> OriginBehavior {
        OriginBehavior::Unknown
    }
}

impl RadialPotential for PotentialSpec {
    fn value(&self, r: f64) -> f64 {
        self.value_at(r)
    }

    fn origin_behavior(&self) -> OriginBehavior {
        match *self {
            PotentialSpec::InversePower(p) => leading_core(0.0, p.a4, p.a3, p.a2),
            PotentialSpec::EvenPower(p) => leading_core(p.b4, p.b3, 0.0, p.b2),
            PotentialSpec::Kratzer(p) => OriginBehavior::InverseSquare(p.a),
            PotentialSpec::Pseudoharmonic(p) => OriginBehavior::InverseSquare(p.a_tilde),
        }
    }
}

macro_rules! delegate_radial {
    ($($t:ty),*) => {$(
        impl RadialPotential for $t {
            fn value(&self, r: f64) -> f64 {
                PotentialSpec::from(*self).value_at(r)
            }
            fn origin_behavior(&self) -> OriginBehavior {
                PotentialSpec::from(*self).origin_behavior()
            }
        }
    )*};
}

delegate_radial!(
    InversePowerPotential,
    EvenPowerPotential,
    KratzerPotential,
    PseudoharmonicPotential
);

impl<F> RadialPotential for F
where
    F: Fn(f64) -> f64 + Sync,
{
    fn value(&self, r: f64) -> f64 {
        self(r)
    }
}

/// An arbitrary potential function with a declared origin behaviour.
pub struct SampledPotential<F> {
    pub func: F,
    pub origin: OriginBehavior,
}

impl<F: Fn(f64) -> f64 + Sync> RadialPotential for SampledPotential<F> {
    fn value(&self, r: f64) -> f64 {
        (self.func)(r)
    }

    fn origin_behavior(&self) -> OriginBehavior {
        self.origin
    }
}

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveRadius(r))
    }
}

pub fn evaluate_potential(p: &PotentialSpec, r: f64) -> Result<f64> {
    p.evaluate(r)
}

/// `V(r) + Λ(Λ+1)/(2r²)`.
pub fn effective_potential<P: RadialPotential + ?Sized>(
    p: &P,
    frame: &QuantumFrame,
    r: f64,
) -> Result<f64> {
    check_radius(r)?;
    Ok(effective_value(p, frame, r))
}

pub(crate) fn effective_value<P: RadialPotential + ?Sized>(
    p: &P,
    frame: &QuantumFrame,
    r: f64,
) -> f64 {
    p.value(r) + frame.centrifugal_strength() / (2.0 * r * r)
}

fn check_samples(radii: &[f64], values: &[f64]) -> Result<()> {
    if radii.len() != values.len() {
        return Err(Error::InvalidGrid(format!(
            "{} radii for {} samples",
            radii.len(),
            values.len()
        )));
    }
    radii.iter().try_for_each(|&r| check_radius(r))
}

/// `Ψ(r) = r^{(N−1)/2} R(r)` pointwise.
pub fn reduce_wavefunction(radii: &[f64], radial: &[f64], frame: &QuantumFrame) -> Result<Vec<f64>> {
    check_samples(radii, radial)?;
    let k = frame.reduction_exponent();
    Ok(radii.iter().zip(radial).map(|(&r, &v)| r.powf(k) * v).collect())
}

/// Inverse of [`reduce_wavefunction`].
pub fn lift_wavefunction(radii: &[f64], reduced: &[f64], frame: &QuantumFrame) -> Result<Vec<f64>> {
    check_samples(radii, reduced)?;
    let k = frame.reduction_exponent();
    Ok(radii.iter().zip(reduced).map(|(&r, &v)| v / r.powf(k)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn frame(n: i64, l: i64) -> QuantumFrame {
        QuantumFrame::new(n, l).unwrap()
    }

    #[test]
    fn direct_substitution() {
        let k = PotentialSpec::from(KratzerPotential::new(1.0, 2.0).unwrap());
        assert_eq!(evaluate_potential(&k, 1.0).unwrap(), -1.0);

        let ph = PotentialSpec::from(PseudoharmonicPotential::from_well(1.0, 1.0).unwrap());
        assert_eq!(evaluate_potential(&ph, 1.0).unwrap(), 0.0);

        let ip = PotentialSpec::from(InversePowerPotential {
            a1: 1.0,
            a2: 1.0,
            a3: 1.0,
            a4: 1.0,
        });
        assert_eq!(evaluate_potential(&ip, 1.0).unwrap(), 4.0);
    }

    #[test]
    fn rejects_non_positive_radius() {
        let k = PotentialSpec::from(KratzerPotential::new(1.0, 2.0).unwrap());
        assert_eq!(k.evaluate(0.0), Err(Error::NonPositiveRadius(0.0)));
        assert!(k.evaluate(-1.0).is_err());
        assert!(effective_potential(&k, &frame(3, 0), 0.0).is_err());
    }

    #[test]
    fn effective_potential_adds_centrifugal_term() {
        let zero = |_r: f64| 0.0;
        assert_eq!(effective_potential(&zero, &frame(3, 1), 1.0).unwrap(), 1.0);
        assert_eq!(effective_potential(&zero, &frame(5, 0), 2.0).unwrap(), 0.25);
        let k = KratzerPotential::new(0.3, 1.7).unwrap();
        for r in [0.1, 1.0, 7.5] {
            assert_eq!(
                effective_potential(&k, &frame(3, 0), r).unwrap(),
                k.value(r)
            );
        }
    }

    #[test]
    fn kratzer_minimum_location() {
        let k = KratzerPotential::new(1.3, 0.7).unwrap();
        let (rm, vm) = k.minimum().unwrap();
        // golden-section search on the raw potential
        let (mut lo, mut hi) = (1e-3, 50.0);
        let g = (5f64.sqrt() - 1.0) / 2.0;
        for _ in 0..200 {
            let x1 = hi - g * (hi - lo);
            let x2 = lo + g * (hi - lo);
            if k.value(x1) < k.value(x2) {
                hi = x2;
            } else {
                lo = x1;
            }
        }
        assert!((0.5 * (lo + hi) - rm).abs() < 1e-6);
        assert!((k.value(rm) - vm).abs() < 1e-14);
        assert!(KratzerPotential::new(0.0, 1.0).unwrap().minimum().is_none());
    }

    #[test]
    fn origin_behaviour_by_family() {
        let ip = InversePowerPotential {
            a1: -1.0,
            a2: -1.0,
            a3: 0.0,
            a4: 0.5,
        };
        assert_eq!(ip.origin_behavior(), OriginBehavior::RepulsiveCore);
        let coulomb = InversePowerPotential { a4: 0.0, ..ip };
        assert_eq!(coulomb.origin_behavior(), OriginBehavior::InverseSquare(-1.0));
        let collapse = InversePowerPotential { a3: -1.0, ..coulomb };
        assert_eq!(collapse.origin_behavior(), OriginBehavior::Collapsing);
        let gk = PseudoharmonicPotential::goldman_krivchenkov(0.25).unwrap();
        assert_eq!(gk.origin_behavior(), OriginBehavior::InverseSquare(1.0));
        let closure = |r: f64| r;
        assert_eq!(closure.origin_behavior(), OriginBehavior::Unknown);
    }

    #[test]
    fn reduction_examples() {
        let radii = [0.5, 1.0, 2.0];
        let ones = [3.0; 3];
        let psi = reduce_wavefunction(&radii, &ones, &frame(3, 0)).unwrap();
        assert_eq!(psi, vec![1.5, 3.0, 6.0]);
        let same = reduce_wavefunction(&radii, &ones, &frame(1, 0)).unwrap();
        assert_eq!(same, ones.to_vec());
        assert!(reduce_wavefunction(&[1.0, -1.0], &[1.0, 1.0], &frame(3, 0)).is_err());
        assert!(reduce_wavefunction(&[1.0], &[1.0, 1.0], &frame(3, 0)).is_err());
    }

    #[test]
    fn serde_tagged_union() {
        let k: PotentialSpec = KratzerPotential::new(1.0, 2.0).unwrap().into();
        let v = serde_json::to_string(&k).unwrap();
        assert_eq!(v, r#"{"family":"kratzer","a":1.0,"b":2.0}"#);
        let bad = r#"{"family":"kratzer","a":1.0,"b":-2.0}"#;
        assert!(serde_json::from_str::<PotentialSpec>(bad).is_err());
    }

    proptest! {
        #[test]
        fn equal_m_frames_share_effective_potential(
            n in 2i64..9, l in 0i64..4, r in 1e-3f64..50.0,
            a in 0.0f64..3.0, b in 0.1f64..3.0,
        ) {
            // (N, l) and (N + 2, l - 1) have the same M
            prop_assume!(l >= 1);
            let p = KratzerPotential::new(a, b).unwrap();
            let f1 = frame(n, l);
            let f2 = frame(n + 2, l - 1);
            prop_assert_eq!(f1.m(), f2.m());
            prop_assert_eq!(
                effective_potential(&p, &f1, r).unwrap(),
                effective_potential(&p, &f2, r).unwrap()
            );
        }

        #[test]
        fn pseudoharmonic_expanded_form(v0 in 0.01f64..10.0, r0 in 0.1f64..5.0, r in 1e-2f64..20.0) {
            let p = PseudoharmonicPotential::from_well(v0, r0).unwrap();
            let well = v0 * (r / r0 - r0 / r).powi(2);
            let expanded = p.value(r);
            prop_assert!((well - expanded).abs() <= 1e-12 * (1.0 + well.abs() + 2.0 * v0 + p.b_tilde() * r * r + p.a_tilde() / (r * r)));
        }

        #[test]
        fn reduce_lift_round_trip(n in 1i64..9, r in proptest::collection::vec(1e-3f64..30.0, 1..20)) {
            let f = frame(n, 0);
            let radial: Vec<f64> = r.iter().map(|x| (-x).exp() * (1.0 + x)).collect();
            let back = lift_wavefunction(&r, &reduce_wavefunction(&r, &radial, &f).unwrap(), &f).unwrap();
            for (a, b) in radial.iter().zip(&back) {
                prop_assert!((a - b).abs() <= 1e-14 * a.abs());
            }
        }
    }
}
