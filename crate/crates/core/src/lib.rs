//! Supersymmetric closed forms for singular radial potentials in `N`
//! spatial dimensions, the `r = αρ²/2` duality between the inverse-power
//! and even-power families, and an independent numerical radial solver
//! that certifies both.
//!
//! Units are natural (`ħ = m = 1`) and the Hamiltonian is `−½∇² + V`
//! everywhere. Every radial problem is reduced to
//!
//! ```text
//! −½ Ψ''(r) + [Λ(Λ+1)/(2r²) + V(r)] Ψ(r) = E Ψ(r),   Λ = (N + 2ℓ − 3)/2
//! ```
//!
//! so dimension and angular momentum only ever enter through
//! `M = N + 2ℓ` (see [`QuantumFrame`]).

pub mod analytic;
pub mod duality;
mod error;
mod frame;
pub mod oracle;
pub mod potential;

pub use error::{Error, Result};
pub use frame::QuantumFrame;
pub use potential::{
    EvenPowerPotential, InversePowerPotential, KratzerPotential, OriginBehavior,
    PotentialSpec, PseudoharmonicPotential, RadialPotential,
};
