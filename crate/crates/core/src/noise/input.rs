use core::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::math;
use crate::qcore::StateVector;
use crate::{Error, Result};

/// Amplitude and phase parameters of the two states being teleported:
/// `|ζ_i⟩ = sin θ_i |0⟩ + e^{iφ_i} cos θ_i |1⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InputStateParams {
    pub theta1: f64,
    pub theta2: f64,
    pub phi1: f64,
    pub phi2: f64,
}

impl InputStateParams {
    pub fn new(theta1: f64, theta2: f64, phi1: f64, phi2: f64) -> Result<Self> {
        for (name, value) in [("theta1", theta1), ("theta2", theta2), ("phi1", phi1), ("phi2", phi2)] {
            if !value.is_finite() {
                return Err(Error::OutOfRange { name, value });
            }
        }
        Ok(Self { theta1, theta2, phi1, phi2 })
    }

    pub fn real(theta1: f64, theta2: f64) -> Self {
        Self { theta1, theta2, phi1: 0.0, phi2: 0.0 }
    }

    /// `(a_i, b_i) = (sin θ_i, cos θ_i)` for `i ∈ {1, 2}`.
    pub fn amplitudes(&self, i: usize) -> (f64, f64) {
        let theta = if i == 1 { self.theta1 } else { self.theta2 };
        (math::sin(theta), math::cos(theta))
    }

    pub fn zeta1(&self) -> StateVector {
        StateVector::from_angles(self.theta1, self.phi1)
    }

    pub fn zeta2(&self) -> StateVector {
        StateVector::from_angles(self.theta2, self.phi2)
    }

    /// Ideal two-receiver output `|ζ1⟩ ⊗ |ζ2⟩`.
    pub fn target(&self) -> StateVector {
        self.zeta1().kron(&self.zeta2())
    }

    pub fn phi_sum(&self) -> f64 {
        self.phi1 + self.phi2
    }

    pub fn phi_diff(&self) -> f64 {
        self.phi1 - self.phi2
    }

    /// The two senders trade states.
    pub fn exchanged(&self) -> Self {
        Self { theta1: self.theta2, theta2: self.theta1, phi1: self.phi2, phi2: self.phi1 }
    }

    /// `θ → π/2 − θ`: moves between the sine-on-|0⟩ and cosine-on-|0⟩ conventions.
    pub fn complemented(&self) -> Self {
        Self { theta1: FRAC_PI_2 - self.theta1, theta2: FRAC_PI_2 - self.theta2, ..*self }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn amplitudes_are_normalized() {
        let p = InputStateParams::new(0.3, 1.2, 0.1, 2.0).unwrap();
        for i in [1, 2] {
            let (a, b) = p.amplitudes(i);
            assert!((a * a + b * b - 1.0).abs() < 1e-15);
        }
        assert!((p.target().norm_sqr() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn complement_is_involution() {
        let p = InputStateParams::new(0.3, 1.2, 0.1, 2.0).unwrap();
        let q = p.complemented().complemented();
        assert!((q.theta1 - p.theta1).abs() < 1e-15 && (q.theta2 - p.theta2).abs() < 1e-15);
        assert_eq!(p.exchanged().exchanged(), p);
    }

    #[test]
    fn rejects_nan() {
        assert!(InputStateParams::new(f64::NAN, 0.0, 0.0, 0.0).is_err());
    }
}
