use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Operator, QuantumState};
use crate::bell::BellKind;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MeasurementBasis {
    /// `{|0⟩, |1⟩}` on every target.
    Computational,
    /// `{|+⟩, |−⟩}` on every target; bit 0 means `|+⟩`.
    Diagonal,
    /// Bell basis on exactly two targets.
    Bell,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum MeasurementOutcome {
    Bits(Vec<bool>),
    Bell(BellKind),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub targets: Vec<usize>,
    pub basis: MeasurementBasis,
    pub outcome: MeasurementOutcome,
    pub probability: f64,
}

impl MeasurementRecord {
    /// Outcome bits packed with the first target most significant.
    pub fn bits_value(&self) -> usize {
        match &self.outcome {
            MeasurementOutcome::Bits(b) => b.iter().fold(0, |acc, &x| (acc << 1) | x as usize),
            MeasurementOutcome::Bell(k) => k.label().index(),
        }
    }
}

/// Samples one outcome with Born probabilities and returns the collapsed state.
///
/// Diagonal and Bell measurements rotate into the computational basis, sample,
/// and rotate back, so the post-state is the measured eigenstate.
pub fn measure<S: QuantumState, R: Rng + ?Sized>(
    state: &S,
    targets: &[usize],
    basis: MeasurementBasis,
    rng: &mut R,
) -> Result<(MeasurementRecord, S)> {
    let rotated = match basis {
        MeasurementBasis::Computational => state.clone(),
        MeasurementBasis::Diagonal => {
            let mut s = state.clone();
            for &t in targets {
                s = s.apply_unitary(&Operator::hadamard(), &[t])?;
            }
            s
        }
        MeasurementBasis::Bell => {
            if targets.len() != 2 {
                return Err(Error::BellTargets(targets.len()));
            }
            state.apply_unitary(&Operator::cnot(), targets)?.apply_unitary(&Operator::hadamard(), &targets[..1])?
        }
    };
    let probs = rotated.outcome_probabilities(targets)?;
    let outcome = sample_index(&probs, rng);
    let mut post = rotated.collapse(targets, outcome)?;
    let k = targets.len();
    let bits: Vec<bool> = (0..k).map(|j| outcome & (1 << (k - 1 - j)) != 0).collect();
    let outcome_value = match basis {
        MeasurementBasis::Computational => MeasurementOutcome::Bits(bits),
        MeasurementBasis::Diagonal => {
            for &t in targets {
                post = post.apply_unitary(&Operator::hadamard(), &[t])?;
            }
            MeasurementOutcome::Bits(bits)
        }
        MeasurementBasis::Bell => {
            post =
                post.apply_unitary(&Operator::hadamard(), &targets[..1])?.apply_unitary(&Operator::cnot(), targets)?;
            MeasurementOutcome::Bell(BellKind::from_circuit_bits(bits[0], bits[1]))
        }
    };
    Ok((
        MeasurementRecord {
            targets: targets.to_vec(),
            basis,
            outcome: outcome_value,
            probability: probs[outcome].clamp(0.0, 1.0),
        },
        post,
    ))
}

/// Inverse-CDF draw; skips zero-probability outcomes even at the boundary.
pub(crate) fn sample_index<R: Rng + ?Sized>(probs: &[f64], rng: &mut R) -> usize {
    let total: f64 = probs.iter().sum();
    let u: f64 = rng.random::<f64>() * total;
    let mut acc = 0.0;
    let mut last = 0;
    for (i, &p) in probs.iter().enumerate() {
        if p <= 0.0 {
            continue;
        }
        last = i;
        acc += p;
        if u < acc {
            return i;
        }
    }
    last
}
