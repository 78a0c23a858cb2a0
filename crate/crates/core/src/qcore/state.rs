use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use super::kernel::apply_matrix;
use super::{
    check_permutation, check_targets, permute_index, DensityMatrix, Operator, QuantumState, C64, EXACT_TOL, ONE, ZERO,
    ZERO_BRANCH,
};
use crate::math;
use crate::{Error, Result};

/// A normalized pure state of a small qubit register.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<C64>,
}

fn qubits_for_len(len: usize) -> Result<usize> {
    if len == 0 || !len.is_power_of_two() {
        return Err(Error::DimensionMismatch { expected: len.next_power_of_two().max(1), got: len });
    }
    Ok(len.trailing_zeros() as usize)
}

impl StateVector {
    /// Validates length (a power of two) and squared norm (1 within 1e-10).
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        let num_qubits = qubits_for_len(amplitudes.len())?;
        let s = Self { num_qubits, amps: amplitudes };
        let n2 = s.norm_sqr();
        if math::abs(n2 - 1.0) > EXACT_TOL {
            return Err(Error::NotNormalized(n2));
        }
        Ok(s)
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalize(amplitudes: Vec<C64>) -> Result<Self> {
        let num_qubits = qubits_for_len(amplitudes.len())?;
        let n2: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if n2 < ZERO_BRANCH {
            return Err(Error::ZeroProbability);
        }
        let k = 1.0 / math::sqrt(n2);
        Ok(Self { num_qubits, amps: amplitudes.into_iter().map(|a| a * k).collect() })
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn basis(num_qubits: usize, index: usize) -> Self {
        let mut amps = vec![ZERO; 1 << num_qubits];
        amps[index] = ONE;
        Self { num_qubits, amps }
    }

    /// `alpha|0⟩ + beta|1⟩`; fails unless normalized.
    pub fn qubit(alpha: C64, beta: C64) -> Result<Self> {
        Self::new(vec![alpha, beta])
    }

    pub fn zero() -> Self {
        Self::basis(1, 0)
    }

    pub fn one() -> Self {
        Self::basis(1, 1)
    }

    pub fn plus() -> Self {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        Self { num_qubits: 1, amps: vec![C64::new(h, 0.0), C64::new(h, 0.0)] }
    }

    pub fn minus() -> Self {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        Self { num_qubits: 1, amps: vec![C64::new(h, 0.0), C64::new(-h, 0.0)] }
    }

    /// `sin θ |0⟩ + e^{iφ} cos θ |1⟩`.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        Self { num_qubits: 1, amps: vec![C64::new(math::sin(theta), 0.0), C64::from_polar(math::cos(theta), phi)] }
    }

    /// Haar-random single-qubit state.
    pub fn haar_qubit<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let z: f64 = 1.0 - 2.0 * rng.random::<f64>();
        let phi = core::f64::consts::TAU * rng.random::<f64>();
        let c = math::sqrt(((1.0 + z) / 2.0).max(0.0));
        let s = math::sqrt(((1.0 - z) / 2.0).max(0.0));
        Self { num_qubits: 1, amps: vec![C64::new(c, 0.0), C64::from_polar(s, phi)] }
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> C64 {
        self.amps[index]
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.amps.len() != other.amps.len() {
            return Err(Error::DimensionMismatch { expected: self.amps.len(), got: other.amps.len() });
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// `|⟨self|other⟩|²`.
    pub fn overlap(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Raw amplitude comparison.
    pub fn approx_eq(&self, other: &StateVector, tol: f64) -> bool {
        self.amps.len() == other.amps.len() && self.amps.iter().zip(&other.amps).all(|(a, b)| (a - b).norm() <= tol)
    }

    /// Comparison after removing the best global phase.
    pub fn eq_up_to_phase(&self, other: &StateVector, tol: f64) -> bool {
        let Ok(ov) = self.inner(other) else {
            return false;
        };
        if ov.norm() < 0.5 {
            return false;
        }
        let phase = ov / ov.norm();
        self.amps.iter().zip(&other.amps).all(|(a, b)| (a * phase - b).norm() <= tol)
    }

    pub fn kron(&self, rhs: &StateVector) -> StateVector {
        let mut amps = Vec::with_capacity(self.amps.len() * rhs.amps.len());
        for a in &self.amps {
            for b in &rhs.amps {
                amps.push(a * b);
            }
        }
        StateVector { num_qubits: self.num_qubits + rhs.num_qubits, amps }
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix::from_pure(self)
    }
}

impl QuantumState for StateVector {
    fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    fn apply_unitary(&self, gate: &Operator, targets: &[usize]) -> Result<Self> {
        check_targets(targets, self.num_qubits)?;
        if gate.num_qubits() != targets.len() {
            return Err(Error::DimensionMismatch { expected: 1 << targets.len(), got: gate.dim() });
        }
        let mut amps = self.amps.clone();
        apply_matrix(&mut amps, self.num_qubits, gate.data(), targets);
        Ok(Self { num_qubits: self.num_qubits, amps })
    }

    fn permute_qubits(&self, permutation: &[usize]) -> Result<Self> {
        check_permutation(permutation, self.num_qubits)?;
        let mut amps = vec![ZERO; self.amps.len()];
        for (i, &a) in self.amps.iter().enumerate() {
            amps[permute_index(i, permutation)] = a;
        }
        Ok(Self { num_qubits: self.num_qubits, amps })
    }

    fn outcome_probabilities(&self, targets: &[usize]) -> Result<Vec<f64>> {
        check_targets(targets, self.num_qubits)?;
        let mut probs = vec![0.0; 1 << targets.len()];
        for (i, a) in self.amps.iter().enumerate() {
            probs[sub_index(i, self.num_qubits, targets)] += a.norm_sqr();
        }
        Ok(probs)
    }

    fn collapse(&self, targets: &[usize], outcome: usize) -> Result<Self> {
        check_targets(targets, self.num_qubits)?;
        let amps = self
            .amps
            .iter()
            .enumerate()
            .map(|(i, &a)| if sub_index(i, self.num_qubits, targets) == outcome { a } else { ZERO })
            .collect();
        Self::normalize(amps)
    }
}

/// Bits of `index` at `targets`, packed with the first target most significant.
pub(crate) fn sub_index(index: usize, n: usize, targets: &[usize]) -> usize {
    targets.iter().fold(0, |acc, &t| (acc << 1) | ((index >> (n - 1 - t)) & 1))
}

/// Kronecker product of the parts; the first part owns the most significant qubits.
pub fn tensor(parts: &[StateVector]) -> Result<StateVector> {
    let (first, rest) = parts.split_first().ok_or(Error::NoParts)?;
    for p in parts {
        let n2 = p.norm_sqr();
        if math::abs(n2 - 1.0) > EXACT_TOL {
            return Err(Error::NotNormalized(n2));
        }
    }
    Ok(rest.iter().fold(first.clone(), |acc, p| acc.kron(p)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::PauliCode;

    const H: f64 = core::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn basis_product() {
        let s = tensor(&[StateVector::zero(), StateVector::zero()]).unwrap();
        assert_eq!(s.amplitude(0), ONE);
        assert_eq!(s.num_qubits(), 2);
    }

    #[test]
    fn bell_product_amplitudes() {
        let psi = StateVector::from_real(&[H, 0.0, 0.0, H]).unwrap();
        let s = tensor(&[psi.clone(), psi]).unwrap();
        for i in 0..16 {
            let expected = if [0, 3, 12, 15].contains(&i) { 0.5 } else { 0.0 };
            assert!((s.amplitude(i).re - expected).abs() < 1e-15, "index {i}");
        }
    }

    #[test]
    fn plus_minus_product() {
        let s = tensor(&[StateVector::plus(), StateVector::minus()]).unwrap();
        let expected = [0.5, -0.5, 0.5, -0.5];
        for (a, e) in s.amplitudes().iter().zip(expected) {
            assert!((a.re - e).abs() < 1e-15 && a.im == 0.0);
        }
    }

    #[test]
    fn empty_tensor_errors() {
        assert_eq!(tensor(&[]), Err(Error::NoParts));
    }

    #[test]
    fn rejects_unnormalized() {
        assert!(matches!(StateVector::from_real(&[1.0, 1.0]), Err(Error::NotNormalized(_))));
        assert!(StateVector::from_real(&[1.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn x_on_second_qubit_of_phi_plus() {
        let phi_plus = StateVector::from_real(&[0.0, H, H, 0.0]).unwrap();
        let out = phi_plus.apply_unitary(&PauliCode::X.matrix(), &[1]).unwrap();
        assert!(out.approx_eq(&StateVector::from_real(&[H, 0.0, 0.0, H]).unwrap(), 1e-15));
        let out = phi_plus.apply_unitary(&PauliCode::IY.matrix(), &[1]).unwrap();
        assert!(out.approx_eq(&StateVector::from_real(&[H, 0.0, 0.0, -H]).unwrap(), 1e-15));
    }

    #[test]
    fn duplicate_and_mismatched_targets() {
        let s = StateVector::basis(2, 0);
        assert_eq!(s.apply_unitary(&Operator::cnot(), &[1, 1]), Err(Error::DuplicateTarget(1)));
        assert!(matches!(s.apply_unitary(&Operator::cnot(), &[0]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn swap_relabels() {
        let s = StateVector::basis(2, 0b01);
        assert_eq!(s.permute_qubits(&[1, 0]).unwrap(), StateVector::basis(2, 0b10));
        assert!(s.permute_qubits(&[0, 0]).is_err());
    }

    #[test]
    fn phase_comparison() {
        let a = StateVector::plus();
        let b = StateVector::new(a.amplitudes().iter().map(|z| -z).collect()).unwrap();
        assert!(!a.approx_eq(&b, 1e-12));
        assert!(a.eq_up_to_phase(&b, 1e-12));
        assert!(!a.eq_up_to_phase(&StateVector::minus(), 1e-12));
    }
}
