use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Spatial dimension and orbital angular momentum of a radial problem.
///
/// Only `M = N + 2ℓ` reaches the reduced radial equation, through
/// `Λ = (M − 3)/2`. `Λ` is a half-integer whenever `M` is even, so it is
/// kept exactly as the integer `2Λ = M − 3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FrameRepr", into = "FrameRepr")]
pub struct QuantumFrame {
    dim: u32,
    ell: u32,
}

#[derive(Serialize, Deserialize)]
struct FrameRepr {
    #[serde(rename = "N")]
    dim: i64,
    #[serde(rename = "l")]
    ell: i64,
}

impl TryFrom<FrameRepr> for QuantumFrame {
    type Error = Error;
    fn try_from(r: FrameRepr) -> Result<Self> {
        QuantumFrame::new(r.dim, r.ell)
    }
}

impl From<QuantumFrame> for FrameRepr {
    fn from(f: QuantumFrame) -> Self {
        FrameRepr {
            dim: f.dim as i64,
            ell: f.ell as i64,
        }
    }
}

impl QuantumFrame {
    pub fn new(dim: i64, ell: i64) -> Result<Self> {
        if dim < 1 {
            return Err(Error::InvalidFrame(format!("dimension N = {dim} must be >= 1")));
        }
        if ell < 0 {
            return Err(Error::InvalidFrame(format!(
                "angular momentum l = {ell} must be >= 0"
            )));
        }
        let dim = u32::try_from(dim)
            .map_err(|_| Error::InvalidFrame(format!("dimension N = {dim} too large")))?;
        let ell = u32::try_from(ell)
            .map_err(|_| Error::InvalidFrame(format!("angular momentum l = {ell} too large")))?;
        Ok(Self { dim, ell })
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    /// `M = N + 2ℓ`.
    pub fn m(&self) -> i64 {
        self.dim as i64 + 2 * self.ell as i64
    }

    /// `2Λ = M − 3`, exact.
    pub fn twice_lambda(&self) -> i64 {
        self.m() - 3
    }

    pub fn lambda(&self) -> f64 {
        self.twice_lambda() as f64 / 2.0
    }

    /// `Λ(Λ+1) = (M − 1)(M − 3)/4`, computed from integers.
    pub fn centrifugal_strength(&self) -> f64 {
        let m = self.m();
        ((m - 1) * (m - 3)) as f64 / 4.0
    }

    /// `(2Λ + 1)² = (M − 2)²`.
    pub fn shifted_lambda_sq(&self) -> f64 {
        let t = self.m() - 2;
        (t * t) as f64
    }

    /// Exponent `(N − 1)/2` relating the radial function `R` to the reduced
    /// function `Ψ = r^{(N−1)/2} R`.
    pub fn reduction_exponent(&self) -> f64 {
        (self.dim as f64 - 1.0) / 2.0
    }
}

impl std::fmt::Display for QuantumFrame {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(N={}, l={})", self.dim, self.ell)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_dimensional_s_wave() {
        let f = QuantumFrame::new(3, 0).unwrap();
        assert_eq!(f.m(), 3);
        assert_eq!(f.lambda(), 0.0);
        assert_eq!(f.centrifugal_strength(), 0.0);
    }

    #[test]
    fn four_d_s_wave_matches_two_d_p_wave() {
        let a = QuantumFrame::new(4, 0).unwrap();
        let b = QuantumFrame::new(2, 1).unwrap();
        assert_eq!(a.m(), 4);
        assert_eq!(a.m(), b.m());
        assert_eq!(a.twice_lambda(), 1);
        assert_eq!(b.lambda(), 0.5);
        assert_eq!(a.centrifugal_strength(), b.centrifugal_strength());
    }

    #[test]
    fn rejects_bad_quantum_numbers() {
        assert!(matches!(QuantumFrame::new(0, 0), Err(Error::InvalidFrame(_))));
        assert!(matches!(QuantumFrame::new(3, -1), Err(Error::InvalidFrame(_))));
    }

    #[test]
    fn centrifugal_matches_lambda_product() {
        for n in 1..10 {
            for l in 0..5 {
                let f = QuantumFrame::new(n, l).unwrap();
                let lam = f.lambda();
                assert_eq!(f.centrifugal_strength(), lam * (lam + 1.0));
                assert_eq!(f.shifted_lambda_sq(), (2.0 * lam + 1.0).powi(2));
            }
        }
    }
}
