use alloc::vec;

use serde::{Deserialize, Serialize};

use crate::math;
use crate::qcore::{KrausChannel, Operator};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ChannelKind {
    #[serde(rename = "AD")]
    AmplitudeDamping,
    #[serde(rename = "PD")]
    PhaseDamping,
}

impl ChannelKind {
    pub fn short(self) -> &'static str {
        match self {
            ChannelKind::AmplitudeDamping => "AD",
            ChannelKind::PhaseDamping => "PD",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    pub kind: ChannelKind,
    pub eta: f64,
}

impl ChannelParams {
    pub fn new(kind: ChannelKind, eta: f64) -> Result<Self> {
        check_eta(eta)?;
        Ok(Self { kind, eta })
    }

    pub fn ad(eta: f64) -> Result<Self> {
        Self::new(ChannelKind::AmplitudeDamping, eta)
    }

    pub fn pd(eta: f64) -> Result<Self> {
        Self::new(ChannelKind::PhaseDamping, eta)
    }

    pub fn kraus(&self) -> Result<KrausChannel> {
        match self.kind {
            ChannelKind::AmplitudeDamping => kraus_ad(self.eta),
            ChannelKind::PhaseDamping => kraus_pd(self.eta),
        }
    }
}

fn check_eta(eta: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::OutOfRange { name: "eta", value: eta });
    }
    Ok(())
}

/// Amplitude damping: `E0 = diag(1, √(1−η))`, `E1 = √η |0⟩⟨1|`.
pub fn kraus_ad(eta: f64) -> Result<KrausChannel> {
    check_eta(eta)?;
    KrausChannel::new(
        vec![Operator::real2(1.0, 0.0, 0.0, math::sqrt(1.0 - eta)), Operator::real2(0.0, math::sqrt(eta), 0.0, 0.0)],
        eta,
    )
}

/// Phase damping: `√(1−η) I`, `√η |0⟩⟨0|`, `√η |1⟩⟨1|`.
pub fn kraus_pd(eta: f64) -> Result<KrausChannel> {
    check_eta(eta)?;
    let (k, s) = (math::sqrt(1.0 - eta), math::sqrt(eta));
    KrausChannel::new(
        vec![Operator::real2(k, 0.0, 0.0, k), Operator::real2(s, 0.0, 0.0, 0.0), Operator::real2(0.0, 0.0, 0.0, s)],
        eta,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{QuantumState, StateVector};

    #[test]
    fn completeness_on_grid() {
        for i in 0..=10 {
            let eta = i as f64 / 10.0;
            assert!(kraus_ad(eta).is_ok());
            assert!(kraus_pd(eta).is_ok());
        }
    }

    #[test]
    fn ad_zero_is_identity_plus_zero() {
        let ch = kraus_ad(0.0).unwrap();
        assert_eq!(ch.operators()[0], Operator::identity(1));
        assert_eq!(ch.operators()[1], Operator::real2(0.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn pd_one_kills_coherence() {
        let rho = StateVector::plus().to_density();
        let out = rho.apply_kraus(&kraus_pd(1.0).unwrap(), 0).unwrap();
        assert!(out.get(0, 1).norm() < 1e-15);
        assert_eq!(out.num_qubits(), 1);
    }

    #[test]
    fn eta_out_of_range() {
        assert!(matches!(kraus_ad(1.5), Err(Error::OutOfRange { .. })));
        assert!(kraus_pd(-0.1).is_err());
        assert!(ChannelParams::ad(f64::NAN).is_err());
    }
}
