//! Dense complex-amplitude engine for small qubit registers.
//!
//! Ordering convention: qubit 0 is the most significant bit of an amplitude
//! index, i.e. the leftmost symbol in ket notation. `|01⟩` is index 1.

mod channel;
mod density;
mod eigen;
mod kernel;
mod measure;
mod operator;
mod state;

pub use channel::KrausChannel;
pub use density::DensityMatrix;
pub use eigen::hermitian_eigenvalues;
pub(crate) use measure::sample_index;
pub use measure::{measure, MeasurementBasis, MeasurementOutcome, MeasurementRecord};
pub use operator::{Operator, PauliCode};
pub use state::{tensor, StateVector};

use alloc::vec::Vec;

use crate::{Error, Result};

pub type C64 = num_complex::Complex64;

/// Tolerance for checks that should hold exactly in exact arithmetic.
pub const EXACT_TOL: f64 = 1e-10;
/// Floor below which a minimum eigenvalue counts as a PSD violation.
pub const EIGEN_FLOOR: f64 = -1e-9;
/// Kraus completeness tolerance.
pub const COMPLETENESS_TOL: f64 = 1e-12;
/// Branches less likely than this are reported as [`Error::ZeroProbability`].
pub const ZERO_BRANCH: f64 = 1e-12;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Operations shared by pure and mixed register states.
pub trait QuantumState: Sized + Clone {
    fn num_qubits(&self) -> usize;

    /// Applies `gate` on `targets` (first target is the gate's most significant qubit).
    fn apply_unitary(&self, gate: &Operator, targets: &[usize]) -> Result<Self>;

    /// Relabels qubits: the qubit at position `q` moves to position `permutation[q]`.
    fn permute_qubits(&self, permutation: &[usize]) -> Result<Self>;

    /// Born probabilities of the computational-basis outcomes on `targets`,
    /// indexed with the first target as most significant bit.
    fn outcome_probabilities(&self, targets: &[usize]) -> Result<Vec<f64>>;

    /// Projects `targets` onto `outcome` (bit pattern, first target most
    /// significant) and renormalizes.
    fn collapse(&self, targets: &[usize], outcome: usize) -> Result<Self>;
}

pub(crate) fn check_targets(targets: &[usize], num_qubits: usize) -> Result<()> {
    for (i, &t) in targets.iter().enumerate() {
        if t >= num_qubits {
            return Err(Error::QubitOutOfRange { qubit: t, num_qubits });
        }
        if targets[..i].contains(&t) {
            return Err(Error::DuplicateTarget(t));
        }
    }
    Ok(())
}

pub(crate) fn check_permutation(permutation: &[usize], num_qubits: usize) -> Result<()> {
    if permutation.len() != num_qubits {
        return Err(Error::NotBijective(num_qubits));
    }
    let mut seen = alloc::vec![false; num_qubits];
    for &p in permutation {
        if p >= num_qubits || seen[p] {
            return Err(Error::NotBijective(num_qubits));
        }
        seen[p] = true;
    }
    Ok(())
}

/// Maps an amplitude index through a qubit relabeling.
pub(crate) fn permute_index(index: usize, permutation: &[usize]) -> usize {
    let n = permutation.len();
    let mut out = 0;
    for (q, &p) in permutation.iter().enumerate() {
        if index & (1 << (n - 1 - q)) != 0 {
            out |= 1 << (n - 1 - p);
        }
    }
    out
}
