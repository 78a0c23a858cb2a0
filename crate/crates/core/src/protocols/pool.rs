use alloc::vec::Vec;

use rand::Rng;

use super::Actor;
use crate::bell::{bell_state, BellKind};
use crate::qcore::{
    sample_index, DensityMatrix, MeasurementBasis, MeasurementOutcome, MeasurementRecord, Operator, QuantumState,
    StateVector, C64,
};
use crate::{Error, Result};

pub type QubitId = usize;

#[derive(Debug, Clone)]
struct Cluster {
    qubits: Vec<QubitId>,
    state: StateVector,
}

/// Every qubit in a protocol run, grouped into independent entangled
/// clusters, with the party currently holding each qubit.
///
/// Measured qubits are split off into their own cluster, so registers stay
/// small even when many pairs are measured across each other.
#[derive(Debug, Clone, Default)]
pub struct QubitPool {
    clusters: Vec<Option<Cluster>>,
    location: Vec<(usize, usize)>,
    holder: Vec<Actor>,
}

impl QubitPool {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.holder.len()
    }

    pub fn is_empty(&self) -> bool {
        self.holder.is_empty()
    }

    /// Adds fresh qubits in `state`, returned in register order.
    pub fn prepare(&mut self, state: StateVector, holder: Actor) -> Vec<QubitId> {
        let first = self.holder.len();
        let ids: Vec<QubitId> = (first..first + state.num_qubits()).collect();
        let c = self.clusters.len();
        for (pos, _) in ids.iter().enumerate() {
            self.location.push((c, pos));
            self.holder.push(holder);
        }
        self.clusters.push(Some(Cluster { qubits: ids.clone(), state }));
        ids
    }

    pub fn holder(&self, q: QubitId) -> Actor {
        self.holder[q]
    }

    fn check_held(&self, actor: Actor, qubits: &[QubitId]) -> Result<()> {
        for &q in qubits {
            if q >= self.holder.len() {
                return Err(Error::QubitOutOfRange { qubit: q, num_qubits: self.holder.len() });
            }
            if self.holder[q] != actor {
                return Err(Error::NotHeld { qubit: q, holder: self.holder[q].name(), actor: actor.name() });
            }
        }
        Ok(())
    }

    pub fn transfer(&mut self, qubits: &[QubitId], from: Actor, to: Actor) -> Result<()> {
        self.check_held(from, qubits)?;
        for &q in qubits {
            self.holder[q] = to;
        }
        Ok(())
    }

    /// Merges the clusters of `qubits` and returns the merged cluster index
    /// with the local positions of `qubits`.
    fn gather(&mut self, qubits: &[QubitId]) -> Result<(usize, Vec<usize>)> {
        let mut seen = Vec::new();
        for (i, &q) in qubits.iter().enumerate() {
            if qubits[..i].contains(&q) {
                return Err(Error::DuplicateTarget(q));
            }
            let c = self.location[q].0;
            if !seen.contains(&c) {
                seen.push(c);
            }
        }
        let target = seen[0];
        for &c in &seen[1..] {
            let other = self.clusters[c].take().expect("live cluster");
            let base = self.clusters[target].as_mut().expect("live cluster");
            let offset = base.qubits.len();
            base.state = base.state.kron(&other.state);
            for (pos, &q) in other.qubits.iter().enumerate() {
                self.location[q] = (target, offset + pos);
            }
            base.qubits.extend(other.qubits);
        }
        let local = qubits.iter().map(|&q| self.location[q].1).collect();
        Ok((target, local))
    }

    pub fn apply(&mut self, actor: Actor, gate: &Operator, qubits: &[QubitId]) -> Result<()> {
        self.check_held(actor, qubits)?;
        let (c, local) = self.gather(qubits)?;
        let cluster = self.clusters[c].as_mut().expect("live cluster");
        cluster.state = cluster.state.apply_unitary(gate, &local)?;
        Ok(())
    }

    pub fn measure<R: Rng + ?Sized>(
        &mut self,
        actor: Actor,
        qubits: &[QubitId],
        basis: MeasurementBasis,
        rng: &mut R,
    ) -> Result<MeasurementRecord> {
        self.measure_inner(actor, qubits, basis, None, rng)
    }

    /// Post-selects a given outcome (bit pattern in the rotated frame, first
    /// qubit most significant) instead of sampling.
    pub fn measure_forced(
        &mut self,
        actor: Actor,
        qubits: &[QubitId],
        basis: MeasurementBasis,
        outcome: usize,
    ) -> Result<MeasurementRecord> {
        self.measure_inner(actor, qubits, basis, Some(outcome), &mut NoRng)
    }

    fn measure_inner<R: Rng + ?Sized>(
        &mut self,
        actor: Actor,
        qubits: &[QubitId],
        basis: MeasurementBasis,
        forced: Option<usize>,
        rng: &mut R,
    ) -> Result<MeasurementRecord> {
        self.check_held(actor, qubits)?;
        if basis == MeasurementBasis::Bell && qubits.len() != 2 {
            return Err(Error::BellTargets(qubits.len()));
        }
        let (c, local) = self.gather(qubits)?;
        let cluster = self.clusters[c].clone().expect("live cluster");
        let mut state = cluster.state.clone();
        match basis {
            MeasurementBasis::Computational => {}
            MeasurementBasis::Diagonal => {
                for &t in &local {
                    state = state.apply_unitary(&Operator::hadamard(), &[t])?;
                }
            }
            MeasurementBasis::Bell => {
                state = state
                    .apply_unitary(&Operator::cnot(), &local)?
                    .apply_unitary(&Operator::hadamard(), &local[..1])?;
            }
        }
        let probs = state.outcome_probabilities(&local)?;
        let outcome = match forced {
            Some(o) => o,
            None => sample_index(&probs, rng),
        };
        if probs[outcome] < crate::qcore::ZERO_BRANCH {
            return Err(Error::ZeroProbability);
        }

        // Factor the collapsed register into (measured) ⊗ (rest).
        self.clusters[c] = None;
        let m = cluster.qubits.len();
        let k = local.len();
        let rest_pos: Vec<usize> = (0..m).filter(|p| !local.contains(p)).collect();
        let mut base = 0usize;
        for (j, &t) in local.iter().enumerate() {
            if outcome & (1 << (k - 1 - j)) != 0 {
                base |= 1 << (m - 1 - t);
            }
        }
        if !rest_pos.is_empty() {
            let r = rest_pos.len();
            let amps: Vec<C64> = (0..1usize << r)
                .map(|ri| {
                    let mut idx = base;
                    for (j, &p) in rest_pos.iter().enumerate() {
                        if ri & (1 << (r - 1 - j)) != 0 {
                            idx |= 1 << (m - 1 - p);
                        }
                    }
                    state.amplitude(idx)
                })
                .collect();
            let rest_ids: Vec<QubitId> = rest_pos.iter().map(|&p| cluster.qubits[p]).collect();
            self.insert_cluster(rest_ids, StateVector::normalize(amps)?);
        }

        let bits: Vec<bool> = (0..k).map(|j| outcome & (1 << (k - 1 - j)) != 0).collect();
        let (measured_state, outcome_value) = match basis {
            MeasurementBasis::Computational => (StateVector::basis(k, outcome), MeasurementOutcome::Bits(bits)),
            MeasurementBasis::Diagonal => {
                let parts: Vec<StateVector> =
                    bits.iter().map(|&b| if b { StateVector::minus() } else { StateVector::plus() }).collect();
                (crate::qcore::tensor(&parts)?, MeasurementOutcome::Bits(bits))
            }
            MeasurementBasis::Bell => {
                let kind = BellKind::from_circuit_bits(bits[0], bits[1]);
                (bell_state(kind), MeasurementOutcome::Bell(kind))
            }
        };
        self.insert_cluster(qubits.to_vec(), measured_state);
        Ok(MeasurementRecord {
            targets: qubits.to_vec(),
            basis,
            outcome: outcome_value,
            probability: probs[outcome].clamp(0.0, 1.0),
        })
    }

    fn insert_cluster(&mut self, qubits: Vec<QubitId>, state: StateVector) {
        let c = match self.clusters.iter().position(Option::is_none) {
            Some(free) => free,
            None => {
                self.clusters.push(None);
                self.clusters.len() - 1
            }
        };
        for (pos, &q) in qubits.iter().enumerate() {
            self.location[q] = (c, pos);
        }
        self.clusters[c] = Some(Cluster { qubits, state });
    }

    /// Reduced density matrix of `qubits`, in the order given.
    pub fn reduced_state(&self, qubits: &[QubitId]) -> Result<DensityMatrix> {
        if qubits.is_empty() {
            return Err(Error::EmptyKeep);
        }
        let mut order: Vec<QubitId> = Vec::new();
        let mut acc: Option<DensityMatrix> = None;
        let mut done: Vec<usize> = Vec::new();
        for &q in qubits {
            let c = self.location[q].0;
            if done.contains(&c) {
                continue;
            }
            done.push(c);
            let cluster = self.clusters[c].as_ref().expect("live cluster");
            let members: Vec<QubitId> = qubits.iter().copied().filter(|&x| self.location[x].0 == c).collect();
            let local: Vec<usize> = members.iter().map(|&x| self.location[x].1).collect();
            let red = cluster.state.to_density().partial_trace(&local)?;
            order.extend(members);
            acc = Some(match acc {
                None => red,
                Some(a) => a.kron(&red),
            });
        }
        let rho = acc.expect("nonempty");
        let perm: Vec<usize> = order.iter().map(|q| qubits.iter().position(|x| x == q).expect("member")).collect();
        rho.permute_qubits(&perm)
    }
}

/// Generator for forced measurements, which never draw.
struct NoRng;

impl rand::RngCore for NoRng {
    fn next_u32(&mut self) -> u32 {
        unreachable!("forced measurement does not sample")
    }

    fn next_u64(&mut self) -> u64 {
        unreachable!("forced measurement does not sample")
    }

    fn fill_bytes(&mut self, _dst: &mut [u8]) {
        unreachable!("forced measurement does not sample")
    }
}
