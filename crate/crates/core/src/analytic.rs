//! Closed-form SUSY results.
//!
//! The quasi-exactly solvable families (`V₁` inverse-power, `V₂`
//! even-power) yield a single nodeless ground state once their
//! coefficients satisfy the superpotential constraints. The Kratzer and
//! pseudoharmonic families are shape invariant and have complete spectra;
//! the Goldman-Krivchenkov potential `ρ² + 4A/ρ²` is the pseudoharmonic
//! case `B̃ = 1, Ã = 4A, V0 = 0`.
//!
//! Two printed formulas in the source material have wrong signs and are
//! implemented in their corrected form:
//!
//! * the Kratzer spectrum is negative (bound states; the Coulomb limit
//!   must give `−B²/(2(n+ℓ+1)²)` in three dimensions);
//! * the `B₂`-eliminated even-power ground energy carries `+16√(B₁B₄)`
//!   under its radical, which follows from `μ < 0, η > 0`. The opposite
//!   sign is kept reachable through [`CoreCouplingSign::Negative`] so the
//!   two can be compared against the numerical solver.

use serde::{Deserialize, Serialize};

use crate::{Error, KratzerPotential, PseudoharmonicPotential, QuantumFrame, Result};

/// `β = 1/(2√2)`, so that `β² = 1/8` and `1/β² = 8`.
pub const BETA: f64 = 0.353_553_390_593_273_8;

/// Relative tolerance on the even-power QES constraint.
pub const QES_CONSTRAINT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WavefunctionFamily {
    InversePowerQes,
    EvenPowerQes,
    Kratzer,
    Pseudoharmonic,
}

/// Unnormalized closed-form reduced wavefunction
///
/// ```text
/// Ψ(r) = r^p · exp(−L·r − G·r² − I/r − J/r²)
/// ```
///
/// with `p = power_exponent`, `L = linear_rate`, `G = gaussian_rate`,
/// `I = inverse_rate`, `J = inverse_square_rate`. Unused rates are zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormWavefunction {
    pub family: WavefunctionFamily,
    pub power_exponent: f64,
    pub linear_rate: f64,
    pub gaussian_rate: f64,
    pub inverse_rate: f64,
    pub inverse_square_rate: f64,
}

impl ClosedFormWavefunction {
    fn new(family: WavefunctionFamily, power_exponent: f64) -> Self {
        Self {
            family,
            power_exponent,
            linear_rate: 0.0,
            gaussian_rate: 0.0,
            inverse_rate: 0.0,
            inverse_square_rate: 0.0,
        }
    }

    pub fn ln_value(&self, r: f64) -> f64 {
        self.power_exponent * r.ln()
            - self.linear_rate * r
            - self.gaussian_rate * r * r
            - self.inverse_rate / r
            - self.inverse_square_rate / (r * r)
    }

    pub fn value(&self, r: f64) -> f64 {
        self.ln_value(r).exp()
    }

    /// `Ψ'/Ψ`.
    pub fn log_derivative(&self, r: f64) -> f64 {
        self.power_exponent / r - self.linear_rate - 2.0 * self.gaussian_rate * r
            + self.inverse_rate / (r * r)
            + 2.0 * self.inverse_square_rate / (r * r * r)
    }

    /// `Ψ''/Ψ`, exact.
    pub fn curvature_ratio(&self, r: f64) -> f64 {
        let d1 = self.log_derivative(r);
        let r2 = r * r;
        let d2 = -self.power_exponent / r2
            - 2.0 * self.gaussian_rate
            - 2.0 * self.inverse_rate / (r2 * r)
            - 6.0 * self.inverse_square_rate / (r2 * r2);
        d1 * d1 + d2
    }

    /// `(Ψ, Ψ', Ψ'')` at `r`.
    pub fn derivatives(&self, r: f64) -> (f64, f64, f64) {
        let v = self.value(r);
        (v, v * self.log_derivative(r), v * self.curvature_ratio(r))
    }
}

/// `W(r) = −a/r² + c/r − b` for the inverse-power family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuperpotentialIP {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// `W(r) = μ r + δ/r + η/r³` for the even-power family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuperpotentialEP {
    pub mu: f64,
    pub delta: f64,
    pub eta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Superpotential {
    InversePower(SuperpotentialIP),
    EvenPower(SuperpotentialEP),
}

impl Superpotential {
    pub fn value(&self, r: f64) -> f64 {
        match *self {
            Superpotential::InversePower(w) => -w.a / (r * r) + w.c / r - w.b,
            Superpotential::EvenPower(w) => w.mu * r + w.delta / r + w.eta / (r * r * r),
        }
    }

    pub fn derivative(&self, r: f64) -> f64 {
        match *self {
            Superpotential::InversePower(w) => 2.0 * w.a / (r * r * r) - w.c / (r * r),
            Superpotential::EvenPower(w) => w.mu - w.delta / (r * r) - 3.0 * w.eta / r.powi(4),
        }
    }

    /// `W² + W'`, which equals `2(V_eff − E₀)` for the matched potential.
    pub fn partner_plus(&self, r: f64) -> f64 {
        let w = self.value(r);
        w * w + self.derivative(r)
    }

    /// `W² − W'`.
    pub fn partner_minus(&self, r: f64) -> f64 {
        let w = self.value(r);
        w * w - self.derivative(r)
    }
}

/// Ground state of a quasi-exactly solvable potential.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QesSolution {
    pub energy: f64,
    pub superpotential: Superpotential,
    /// Coefficient fixed by solvability: `A1` for the inverse-power family,
    /// `B2` for the even-power family.
    pub required_coefficient: f64,
    pub constraint_residual: f64,
}

impl QesSolution {
    pub fn wavefunction(&self) -> ClosedFormWavefunction {
        match self.superpotential {
            Superpotential::InversePower(w) => ClosedFormWavefunction {
                linear_rate: w.b,
                inverse_rate: -w.a,
                ..ClosedFormWavefunction::new(WavefunctionFamily::InversePowerQes, w.c)
            },
            Superpotential::EvenPower(w) => ClosedFormWavefunction {
                gaussian_rate: -w.mu / 2.0,
                inverse_square_rate: w.eta / 2.0,
                ..ClosedFormWavefunction::new(WavefunctionFamily::EvenPowerQes, w.delta)
            },
        }
    }
}

fn require_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and > 0",
        })
    }
}

fn require_finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite",
        })
    }
}

/// Ground state of `A1/r + A2/r² + A3/r³ + A4/r⁴` on the branch
/// `a = −√(2A4)`. The returned `required_coefficient` is the only `A1` for
/// which the state exists.
pub fn ip_ground_state(a2: f64, a3: f64, a4: f64, frame: &QuantumFrame) -> Result<QesSolution> {
    require_finite("A2", a2)?;
    require_finite("A3", a3)?;
    require_positive("A4", a4)?;
    let root = (2.0 * a4).sqrt();
    let a = -root;
    let c = 1.0 + a3 / root;
    if c <= 0.0 {
        return Err(Error::NoQesSolution { name: "c", value: c });
    }
    let b = (2.0 * a2 + frame.centrifugal_strength() - c * (c - 1.0)) / (2.0 * a);
    if b <= 0.0 {
        return Err(Error::NoQesSolution { name: "b", value: b });
    }
    Ok(QesSolution {
        energy: -b * b / 2.0,
        superpotential: Superpotential::InversePower(SuperpotentialIP { a, b, c }),
        required_coefficient: -c * b,
        constraint_residual: 0.0,
    })
}

/// Like [`ip_ground_state`], but for a fully specified potential: the
/// supplied `A1` must match the required one.
pub fn ip_ground_state_checked(
    p: &crate::InversePowerPotential,
    frame: &QuantumFrame,
) -> Result<QesSolution> {
    require_finite("A1", p.a1)?;
    let mut sol = ip_ground_state(p.a2, p.a3, p.a4, frame)?;
    let residual = (p.a1 - sol.required_coefficient).abs();
    let tolerance = QES_CONSTRAINT_TOLERANCE * (1.0 + p.a1.abs());
    if residual > tolerance {
        return Err(Error::NotQuasiExactlySolvable {
            residual,
            tolerance,
        });
    }
    sol.constraint_residual = residual;
    Ok(sol)
}

/// Ground energy of the inverse-power family written directly in the
/// potential coefficients, without going through `b`.
pub fn ip_ground_energy_closed_form(a2: f64, a3: f64, a4: f64, frame: &QuantumFrame) -> f64 {
    let s = a3 / (2.0 * a4).sqrt();
    let bracket = s * (1.0 + s) - frame.centrifugal_strength() - 2.0 * a2;
    -bracket * bracket / (16.0 * a4)
}

struct EvenPowerTerms {
    eta: f64,
    mu: f64,
    delta: f64,
}

fn even_power_terms(b1: f64, b3: f64, b4: f64) -> Result<EvenPowerTerms> {
    require_positive("B1", b1)?;
    require_finite("B3", b3)?;
    require_positive("B4", b4)?;
    let eta = (2.0 * b4).sqrt();
    let mu = -(2.0 * b1).sqrt();
    let delta = 1.5 + b3 / eta;
    if delta <= 0.0 {
        return Err(Error::NoQesSolution {
            name: "delta",
            value: delta,
        });
    }
    Ok(EvenPowerTerms { eta, mu, delta })
}

/// The unique `B2` that makes `B1 r² + B2/r² + B3/r⁴ + B4/r⁶`
/// quasi-exactly solvable in `frame`.
pub fn ep_required_b2(b1: f64, b3: f64, b4: f64, frame: &QuantumFrame) -> Result<f64> {
    let t = even_power_terms(b1, b3, b4)?;
    Ok((t.delta * (t.delta - 1.0) + 2.0 * t.eta * t.mu - frame.centrifugal_strength()) / 2.0)
}

/// Ground state of `B1 r² + B2/r² + B3/r⁴ + B4/r⁶` with `η > 0, μ < 0`.
/// Errors rather than projecting when `B2` misses the solvability
/// condition.
pub fn ep_ground_state(
    b1: f64,
    b2: f64,
    b3: f64,
    b4: f64,
    frame: &QuantumFrame,
) -> Result<QesSolution> {
    require_finite("B2", b2)?;
    let EvenPowerTerms { eta, mu, delta } = even_power_terms(b1, b3, b4)?;
    let lt = frame.centrifugal_strength();
    let terms = [delta * (delta - 1.0), 2.0 * eta * mu, -2.0 * b2, -lt];
    let residual = terms.iter().sum::<f64>().abs();
    let tolerance = QES_CONSTRAINT_TOLERANCE * (1.0 + terms.iter().map(|t| t.abs()).sum::<f64>());
    if residual > tolerance {
        return Err(Error::NotQuasiExactlySolvable {
            residual,
            tolerance,
        });
    }
    Ok(QesSolution {
        energy: -mu * (2.0 * delta + 1.0) / 2.0,
        superpotential: Superpotential::EvenPower(SuperpotentialEP { mu, delta, eta }),
        required_coefficient: (terms[0] + terms[1] + terms[3]) / 2.0,
        constraint_residual: residual,
    })
}

/// Sign of the `16√(B1·B4)` term under the radical of the `B2`-eliminated
/// even-power ground energy. `Positive` is the one consistent with
/// `μ < 0, η > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoreCouplingSign {
    Positive,
    Negative,
}

/// `√(B1/2)·{2 + √(1 ± 16√(B1B4) + 8B2 + (M−1)(M−3))}`; `None` when the
/// radicand is negative. Valid for `B4 = 0` as well, which gives the
/// oscillator ground state.
///
/// Only agrees with [`ep_ground_state`] when `δ ≥ ½`, since the radical
/// picks the larger root of `δ(δ−1) = const`.
pub fn ep_ground_energy_closed_form(
    b1: f64,
    b2: f64,
    b4: f64,
    frame: &QuantumFrame,
    sign: CoreCouplingSign,
) -> Option<f64> {
    let core = 16.0 * (b1 * b4).sqrt();
    let core = match sign {
        CoreCouplingSign::Positive => core,
        CoreCouplingSign::Negative => -core,
    };
    let radicand = 1.0 + core + 8.0 * b2 + 4.0 * frame.centrifugal_strength();
    (radicand >= 0.0).then(|| (b1 / 2.0).sqrt() * (2.0 + radicand.sqrt()))
}

/// Ground energy of the even-power image of an inverse-power problem,
/// `−2μ(1 + A3/√(2A4))`.
pub fn transformed_ground_energy(a3: f64, a4: f64, mu: f64) -> Result<f64> {
    require_finite("A3", a3)?;
    require_positive("A4", a4)?;
    if !(mu.is_finite() && mu < 0.0) {
        return Err(Error::InvalidParameter {
            name: "mu",
            value: mu,
            reason: "must be finite and < 0",
        });
    }
    Ok(-2.0 * mu * (1.0 + a3 / (2.0 * a4).sqrt()))
}

/// `β` and `C = Λ(Λ+1)/2 + A` for a Kratzer problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KratzerConstants {
    pub beta: f64,
    pub c_val: f64,
}

impl KratzerConstants {
    pub fn new(p: &KratzerPotential, frame: &QuantumFrame) -> Self {
        Self {
            beta: BETA,
            c_val: frame.centrifugal_strength() / 2.0 + p.a(),
        }
    }

    /// Coefficients `(D, K)` of `W(r) = D − K/r`, normalized so that
    /// `V_eff − E₀ = W² − W'/√2`.
    pub fn superpotential(&self, p: &KratzerPotential) -> (f64, f64) {
        let k = self.beta + (self.beta * self.beta + self.c_val).sqrt();
        (p.b() / 2.0 / k, k)
    }
}

/// `√((2Λ+1)² + X/β²)`, the radical shared by the shape-invariant spectra.
fn shape_radical(frame: &QuantumFrame, x: f64) -> f64 {
    (frame.shifted_lambda_sq() + x / (BETA * BETA)).sqrt()
}

/// Bound-state energy with radial index `n = 0, 1, …`.
pub fn kratzer_energy(p: &KratzerPotential, frame: &QuantumFrame, n: u32) -> f64 {
    let s = shape_radical(frame, p.a());
    let x = (p.b() / (2.0 * BETA)) / (2.0 * n as f64 + 1.0 + s);
    -x * x
}

pub fn kratzer_ground_wavefunction(p: &KratzerPotential, frame: &QuantumFrame) -> ClosedFormWavefunction {
    let s = shape_radical(frame, p.a());
    ClosedFormWavefunction {
        linear_rate: (p.b() / (4.0 * BETA * BETA)) / (1.0 + s),
        ..ClosedFormWavefunction::new(WavefunctionFamily::Kratzer, 0.5 * (1.0 + s))
    }
}

/// `2β√B̃·{4n + 2 + √((2Λ+1)² + Ã/β²)} − 2V0`.
pub fn pseudoharmonic_energy(p: &PseudoharmonicPotential, frame: &QuantumFrame, n: u32) -> f64 {
    let s = shape_radical(frame, p.a_tilde());
    2.0 * BETA * p.b_tilde().sqrt() * (4.0 * n as f64 + 2.0 + s) - 2.0 * p.v0()
}

pub fn pseudoharmonic_ground_wavefunction(
    p: &PseudoharmonicPotential,
    frame: &QuantumFrame,
) -> ClosedFormWavefunction {
    let s = shape_radical(frame, p.a_tilde());
    ClosedFormWavefunction {
        gaussian_rate: p.b_tilde().sqrt() / (4.0 * BETA),
        ..ClosedFormWavefunction::new(WavefunctionFamily::Pseudoharmonic, 0.5 * (1.0 + s))
    }
}

/// Level `n` (radial index) of `ρ² + 4A/ρ²`.
pub fn goldman_krivchenkov_energy(a: f64, frame: &QuantumFrame, n: u32) -> Result<f64> {
    let p = PseudoharmonicPotential::goldman_krivchenkov(a)?;
    Ok(pseudoharmonic_energy(&p, frame, n))
}
