use alloc::vec;
use alloc::vec::Vec;

use super::kernel::sandwich;
use super::state::sub_index;
use super::{
    check_permutation, check_targets, hermitian_eigenvalues, permute_index, KrausChannel, Operator, QuantumState,
    StateVector, C64, EXACT_TOL, ZERO, ZERO_BRANCH,
};
use crate::{Error, Result};

/// A (possibly unnormalized) density operator on a small qubit register.
///
/// Correlated Kraus sums are not trace preserving, so intermediate matrices
/// may have any positive trace; [`DensityMatrix::normalized`] restores trace 1.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    num_qubits: usize,
    entries: Vec<C64>,
}

impl DensityMatrix {
    /// Validates shape and Hermiticity. Trace is not checked.
    pub fn new(num_qubits: usize, entries: Vec<C64>) -> Result<Self> {
        let dim = 1usize << num_qubits;
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, got: entries.len() });
        }
        let rho = Self { num_qubits, entries };
        if !rho.is_hermitian(EXACT_TOL) {
            return Err(Error::NotHermitian);
        }
        Ok(rho)
    }

    pub fn from_pure(state: &StateVector) -> Self {
        let a = state.amplitudes();
        let dim = a.len();
        let mut entries = vec![ZERO; dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                entries[r * dim + c] = a[r] * a[c].conj();
            }
        }
        Self { num_qubits: state.num_qubits(), entries }
    }

    pub fn maximally_mixed(num_qubits: usize) -> Self {
        let dim = 1usize << num_qubits;
        let mut entries = vec![ZERO; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = C64::new(1.0 / dim as f64, 0.0);
        }
        Self { num_qubits, entries }
    }

    pub fn dim(&self) -> usize {
        1 << self.num_qubits
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[row * self.dim() + col]
    }

    pub fn trace(&self) -> f64 {
        let dim = self.dim();
        (0..dim).map(|i| self.entries[i * dim + i].re).sum()
    }

    pub fn purity(&self) -> f64 {
        // Tr(ρ²) = Σ |ρ_rc|² for Hermitian ρ.
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn normalized(&self) -> Result<Self> {
        let t = self.trace();
        if t < ZERO_BRANCH {
            return Err(Error::ZeroProbability);
        }
        Ok(self.scaled(1.0 / t))
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self { num_qubits: self.num_qubits, entries: self.entries.iter().map(|z| z * factor).collect() }
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let dim = self.dim();
        (0..dim).all(|r| (r..dim).all(|c| (self.entries[r * dim + c] - self.entries[c * dim + r].conj()).norm() <= tol))
    }

    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_eigenvalues(self.dim(), &self.entries).first().copied().unwrap_or(0.0)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(self.dim(), &self.entries)
    }

    /// Largest entrywise modulus of the difference.
    pub fn distance(&self, other: &DensityMatrix) -> f64 {
        if self.entries.len() != other.entries.len() {
            return f64::INFINITY;
        }
        self.entries.iter().zip(&other.entries).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn kron(&self, rhs: &DensityMatrix) -> DensityMatrix {
        let (da, db) = (self.dim(), rhs.dim());
        let dim = da * db;
        let mut entries = vec![ZERO; dim * dim];
        for ar in 0..da {
            for ac in 0..da {
                let a = self.entries[ar * da + ac];
                for br in 0..db {
                    for bc in 0..db {
                        entries[(ar * db + br) * dim + ac * db + bc] = a * rhs.entries[br * db + bc];
                    }
                }
            }
        }
        DensityMatrix { num_qubits: self.num_qubits + rhs.num_qubits, entries }
    }

    /// `ρ → A ρ A†` for an arbitrary (not necessarily unitary) operator.
    pub fn conjugate_by(&self, op: &Operator, targets: &[usize]) -> Result<Self> {
        check_targets(targets, self.num_qubits)?;
        if op.num_qubits() != targets.len() {
            return Err(Error::DimensionMismatch { expected: 1 << targets.len(), got: op.dim() });
        }
        let mut entries = self.entries.clone();
        sandwich(&mut entries, self.num_qubits, op.data(), op.data(), targets);
        Ok(Self { num_qubits: self.num_qubits, entries })
    }

    /// `ρ → Σ_i E_i ρ E_i†` on one qubit.
    pub fn apply_kraus(&self, channel: &KrausChannel, target: usize) -> Result<Self> {
        self.apply_correlated_kraus(channel, &[&[target]])
    }

    /// Route-correlated noise: each group carries one summation index and the
    /// same Kraus operator acts on every qubit in the group,
    /// `ρ → Σ_{i,j,…} (E_i^{⊗g₁} ⊗ E_j^{⊗g₂} ⊗ …) ρ (…)†`.
    ///
    /// Groups with more than one qubit make the map non trace preserving.
    pub fn apply_correlated_kraus(&self, channel: &KrausChannel, groups: &[&[usize]]) -> Result<Self> {
        let mut seen = vec![false; self.num_qubits];
        for &q in groups.iter().flat_map(|g| g.iter()) {
            if q >= self.num_qubits {
                return Err(Error::QubitOutOfRange { qubit: q, num_qubits: self.num_qubits });
            }
            if seen[q] {
                return Err(Error::OverlappingGroups(q));
            }
            seen[q] = true;
        }
        // Disjoint groups commute, so the multi-index sum factorizes group by group.
        let mut current = self.entries.clone();
        for group in groups.iter().filter(|g| !g.is_empty()) {
            let mut acc = vec![ZERO; current.len()];
            for e in channel.operators() {
                let op = (1..group.len()).fold(e.clone(), |k, _| k.kron(e));
                let mut term = current.clone();
                sandwich(&mut term, self.num_qubits, op.data(), op.data(), group);
                for (a, t) in acc.iter_mut().zip(term) {
                    *a += t;
                }
            }
            current = acc;
        }
        Ok(Self { num_qubits: self.num_qubits, entries: current })
    }

    /// `P ρ P` for the computational projector onto `outcome` on `targets`,
    /// without renormalizing.
    pub fn project(&self, targets: &[usize], outcome: usize) -> Result<Self> {
        check_targets(targets, self.num_qubits)?;
        let dim = self.dim();
        let n = self.num_qubits;
        let mut entries = self.entries.clone();
        for r in 0..dim {
            let keep_r = sub_index(r, n, targets) == outcome;
            for c in 0..dim {
                if !(keep_r && sub_index(c, n, targets) == outcome) {
                    entries[r * dim + c] = ZERO;
                }
            }
        }
        Ok(Self { num_qubits: n, entries })
    }

    /// Conditions on `outcome` at `targets` and renormalizes. Returns the
    /// selection probability `Tr(PρP)/Tr(ρ)`.
    pub fn post_select(&self, targets: &[usize], outcome: usize) -> Result<(Self, f64)> {
        let projected = self.project(targets, outcome)?;
        let total = self.trace();
        if total < ZERO_BRANCH {
            return Err(Error::ZeroProbability);
        }
        let prob = projected.trace() / total;
        if prob < ZERO_BRANCH {
            return Err(Error::ZeroProbability);
        }
        Ok((projected.normalized()?, prob))
    }

    /// Reduced matrix on `keep`, in the order given (first kept qubit becomes qubit 0).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        if keep.is_empty() {
            return Err(Error::EmptyKeep);
        }
        check_targets(keep, self.num_qubits)?;
        let n = self.num_qubits;
        let traced: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
        let dim = self.dim();
        let kd = 1usize << keep.len();
        let mut entries = vec![ZERO; kd * kd];
        let kept_idx: Vec<usize> = (0..dim).map(|i| sub_index(i, n, keep)).collect();
        let traced_idx: Vec<usize> = (0..dim).map(|i| sub_index(i, n, &traced)).collect();
        for r in 0..dim {
            for c in 0..dim {
                if traced_idx[r] == traced_idx[c] {
                    entries[kept_idx[r] * kd + kept_idx[c]] += self.entries[r * dim + c];
                }
            }
        }
        Ok(Self { num_qubits: keep.len(), entries })
    }

    /// `⟨T|ρ|T⟩`.
    pub fn fidelity_with_pure(&self, target: &StateVector) -> Result<f64> {
        let dim = self.dim();
        if target.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: target.dim() });
        }
        let t = target.amplitudes();
        let mut acc = ZERO;
        for r in 0..dim {
            if t[r] == ZERO {
                continue;
            }
            let row: C64 = (0..dim).map(|c| self.entries[r * dim + c] * t[c]).sum();
            acc += t[r].conj() * row;
        }
        Ok(acc.re)
    }

    /// Real part of the diagonal.
    pub fn diagonal(&self) -> Vec<f64> {
        let dim = self.dim();
        (0..dim).map(|i| self.entries[i * dim + i].re).collect()
    }

    pub(crate) fn from_parts(num_qubits: usize, entries: Vec<C64>) -> Self {
        Self { num_qubits, entries }
    }
}

impl QuantumState for DensityMatrix {
    fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    fn apply_unitary(&self, gate: &Operator, targets: &[usize]) -> Result<Self> {
        self.conjugate_by(gate, targets)
    }

    fn permute_qubits(&self, permutation: &[usize]) -> Result<Self> {
        check_permutation(permutation, self.num_qubits)?;
        let dim = self.dim();
        let map: Vec<usize> = (0..dim).map(|i| permute_index(i, permutation)).collect();
        let mut entries = vec![ZERO; dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                entries[map[r] * dim + map[c]] = self.entries[r * dim + c];
            }
        }
        Ok(Self { num_qubits: self.num_qubits, entries })
    }

    fn outcome_probabilities(&self, targets: &[usize]) -> Result<Vec<f64>> {
        check_targets(targets, self.num_qubits)?;
        let total = self.trace();
        if total < ZERO_BRANCH {
            return Err(Error::ZeroProbability);
        }
        let mut probs = vec![0.0; 1 << targets.len()];
        for (i, d) in self.diagonal().into_iter().enumerate() {
            probs[sub_index(i, self.num_qubits, targets)] += d / total;
        }
        Ok(probs)
    }

    fn collapse(&self, targets: &[usize], outcome: usize) -> Result<Self> {
        Ok(self.post_select(targets, outcome)?.0)
    }
}
