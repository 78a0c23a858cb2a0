use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bell::{correction_for, teleport_raw, BellKind};
use crate::math;
use crate::qcore::{QuantumState, StateVector};
use crate::{Error, Result};

/// Probability distribution over the four Bell kinds, in [`BellKind::ALL`] order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KindDistribution([f64; 4]);

impl KindDistribution {
    pub fn new(probs: [f64; 4]) -> Result<Self> {
        if probs.iter().any(|p| p.is_nan() || *p < 0.0) {
            return Err(Error::InvalidDistribution("negative probability"));
        }
        if math::abs(probs.iter().sum::<f64>() - 1.0) > 1e-12 {
            return Err(Error::InvalidDistribution("probabilities do not sum to 1"));
        }
        Ok(Self(probs))
    }

    pub fn uniform() -> Self {
        Self([0.25; 4])
    }

    pub fn point(kind: BellKind) -> Self {
        let mut p = [0.0; 4];
        p[kind.index()] = 1.0;
        Self(p)
    }

    pub fn probs(&self) -> [f64; 4] {
        self.0
    }

    /// Most probable kind; ties go to the earliest in ψ+, ψ−, φ+, φ− order.
    pub fn map_kind(&self) -> BellKind {
        let mut best = 0;
        for i in 1..4 {
            if self.0[i] > self.0[best] {
                best = i;
            }
        }
        BellKind::ALL[best]
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> BellKind {
        BellKind::ALL[crate::qcore::sample_index(&self.0, rng)]
    }

    pub fn entropy_bits(&self) -> f64 {
        self.0.iter().filter(|&&p| p > 0.0).map(|&p| -p * math::log2(p)).sum()
    }

    pub fn info_revealed(&self) -> f64 {
        2.0 - self.entropy_bits()
    }
}

/// Shannon entropy in bits of a distribution over Bell kinds.
pub fn entropy_bits(probs: [f64; 4]) -> Result<f64> {
    Ok(KindDistribution::new(probs)?.entropy_bits())
}

/// `2 − entropy_bits`: how much of the 2-bit kind label was disclosed.
pub fn info_revealed(probs: [f64; 4]) -> Result<f64> {
    Ok(KindDistribution::new(probs)?.info_revealed())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    AliceToBob,
    BobToAlice,
}

/// What Charlie tells the receiver about the Bell state of each pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum BellInfo {
    Full,
    /// Charlie prepares each pair by sampling this distribution and announces it.
    Distribution(KindDistribution),
    Withheld,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DisclosurePolicy {
    pub direction: Direction,
    pub bell_info: BellInfo,
    pub reveal_permutation: bool,
}

impl DisclosurePolicy {
    pub fn full(direction: Direction) -> Self {
        Self { direction, bell_info: BellInfo::Full, reveal_permutation: true }
    }

    pub fn withheld(direction: Direction) -> Self {
        Self { direction, bell_info: BellInfo::Withheld, reveal_permutation: false }
    }

    /// Receiver's belief about a pair whose true kind is `truth`.
    pub fn belief(&self, truth: BellKind) -> KindDistribution {
        match self.bell_info {
            BellInfo::Full => KindDistribution::point(truth),
            BellInfo::Distribution(d) => d,
            BellInfo::Withheld => KindDistribution::uniform(),
        }
    }

    /// How Charlie picks the kind he prepares.
    pub fn preparation(&self) -> KindDistribution {
        match self.bell_info {
            BellInfo::Distribution(d) => d,
            _ => KindDistribution::uniform(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InputEnsemble {
    Haar,
    Fixed(StateVector),
}

impl InputEnsemble {
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> StateVector {
        match self {
            InputEnsemble::Haar => StateVector::haar_qubit(rng),
            InputEnsemble::Fixed(s) => s.clone(),
        }
    }
}

/// Mean teleportation fidelity when the pair kind is drawn from `distribution`
/// and the receiver, told only the distribution, applies the MAP correction.
pub fn partial_disclosure_fidelity<R: Rng + ?Sized>(
    distribution: &KindDistribution,
    ensemble: &InputEnsemble,
    samples: usize,
    rng: &mut R,
) -> Result<f64> {
    if samples == 0 {
        return Err(Error::EmptyProtocol);
    }
    let guess = distribution.map_kind();
    let mut total = 0.0;
    for _ in 0..samples {
        let kind = distribution.sample(rng);
        let input = ensemble.draw(rng);
        let raw = teleport_raw(&input, kind, rng)?;
        let out = raw.receiver.apply_unitary(&correction_for(raw.smo, guess).matrix(), &[0])?;
        total += input.overlap(&out)?;
    }
    Ok(total / samples as f64)
}
