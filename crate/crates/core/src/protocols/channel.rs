use alloc::vec::Vec;

use rand::seq::index;
use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use super::pool::{QubitId, QubitPool};
use super::transcript::bits_string;
use super::{Actor, ProtocolTranscript};
use crate::qcore::{MeasurementBasis, StateVector};
use crate::Result;

/// Everything an eavesdropper can touch while qubits are in flight.
pub struct InterceptContext<'a> {
    pub pool: &'a mut QubitPool,
    pub in_transit: &'a [QubitId],
    pub from: Actor,
    pub to: Actor,
    pub step: &'a str,
    pub transcript: &'a mut ProtocolTranscript,
    pub rng: &'a mut dyn RngCore,
}

/// A party sitting on the quantum channel. While intercepting it holds the
/// qubits as [`Actor::Eve`].
pub trait Interceptor {
    fn intercept(&mut self, ctx: InterceptContext<'_>) -> Result<()>;
}

/// Moves `qubits` from `from` to `to`, routing them through the interceptor if any.
#[allow(clippy::too_many_arguments)]
pub fn send<'e, R: RngCore>(
    pool: &mut QubitPool,
    qubits: &[QubitId],
    from: Actor,
    to: Actor,
    step: &str,
    interceptor: Option<&mut (dyn Interceptor + 'e)>,
    transcript: &mut ProtocolTranscript,
    rng: &mut R,
) -> Result<()> {
    transcript.log(step, from, "send", alloc::format!("to={to} qubits={}", qubits.len()));
    match interceptor {
        None => pool.transfer(qubits, from, to)?,
        Some(eve) => {
            pool.transfer(qubits, from, Actor::Eve)?;
            eve.intercept(InterceptContext { pool, in_transit: qubits, from, to, step, transcript, rng })?;
            pool.transfer(qubits, Actor::Eve, to)?;
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DecoyState {
    Zero,
    One,
    Plus,
    Minus,
}

impl DecoyState {
    pub const ALL: [DecoyState; 4] = [DecoyState::Zero, DecoyState::One, DecoyState::Plus, DecoyState::Minus];

    pub fn basis(self) -> MeasurementBasis {
        match self {
            DecoyState::Zero | DecoyState::One => MeasurementBasis::Computational,
            DecoyState::Plus | DecoyState::Minus => MeasurementBasis::Diagonal,
        }
    }

    pub fn bit(self) -> bool {
        matches!(self, DecoyState::One | DecoyState::Minus)
    }

    pub fn state(self) -> StateVector {
        match self {
            DecoyState::Zero => StateVector::zero(),
            DecoyState::One => StateVector::one(),
            DecoyState::Plus => StateVector::plus(),
            DecoyState::Minus => StateVector::minus(),
        }
    }

    pub fn symbol(self) -> char {
        match self {
            DecoyState::Zero => '0',
            DecoyState::One => '1',
            DecoyState::Plus => '+',
            DecoyState::Minus => '-',
        }
    }
}

/// Decoy states and their (strictly increasing) positions in the enlarged sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecoySet {
    pub states: Vec<DecoyState>,
    pub positions: Vec<usize>,
}

impl DecoySet {
    pub fn random<R: Rng + ?Sized>(count: usize, carriers: usize, rng: &mut R) -> Self {
        let states = (0..count).map(|_| DecoyState::ALL[rng.random_range(0..4)]).collect();
        let mut positions = index::sample(rng, carriers + count, count).into_vec();
        positions.sort_unstable();
        Self { states, positions }
    }
}

/// A sequence with decoys mixed in.
#[derive(Debug, Clone)]
pub struct Enlarged {
    pub sequence: Vec<QubitId>,
    pub decoys: DecoySet,
    pub decoy_ids: Vec<QubitId>,
}

/// Prepares `count` random decoys and inserts them at random positions among `carriers`.
pub fn insert_decoys<R: Rng + ?Sized>(
    pool: &mut QubitPool,
    carriers: &[QubitId],
    count: usize,
    preparer: Actor,
    rng: &mut R,
) -> Enlarged {
    let decoys = DecoySet::random(count, carriers.len(), rng);
    let decoy_ids: Vec<QubitId> = decoys.states.iter().map(|s| pool.prepare(s.state(), preparer)[0]).collect();
    let mut sequence = Vec::with_capacity(carriers.len() + count);
    let (mut c, mut d) = (0, 0);
    for pos in 0..carriers.len() + count {
        if d < count && decoys.positions[d] == pos {
            sequence.push(decoy_ids[d]);
            d += 1;
        } else {
            sequence.push(carriers[c]);
            c += 1;
        }
    }
    Enlarged { sequence, decoys, decoy_ids }
}

impl Enlarged {
    /// The carrier qubits with decoys removed, in order.
    pub fn carriers(&self) -> Vec<QubitId> {
        self.sequence.iter().copied().filter(|q| !self.decoy_ids.contains(q)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckResult {
    pub checked: usize,
    pub errors: usize,
}

impl CheckResult {
    pub fn error_rate(&self) -> f64 {
        if self.checked == 0 {
            0.0
        } else {
            self.errors as f64 / self.checked as f64
        }
    }
}

/// BB84-style check: the checker picks ⌊count/2⌋ decoys at random, measures
/// each in the basis the preparer announces for it, and compares with the
/// preparer's announced value.
pub fn bb84_check<R: Rng + ?Sized>(
    pool: &mut QubitPool,
    enlarged: &Enlarged,
    preparer: Actor,
    checker: Actor,
    step: &str,
    transcript: &mut ProtocolTranscript,
    rng: &mut R,
) -> Result<CheckResult> {
    let count = enlarged.decoy_ids.len();
    let positions: Vec<alloc::string::String> =
        enlarged.decoys.positions.iter().map(|p| alloc::format!("{p}")).collect();
    transcript.log(step, preparer, "announce-decoy-positions", positions.join(","));
    let mut chosen = index::sample(rng, count, count / 2).into_vec();
    chosen.sort_unstable();
    let mut errors = 0;
    let mut observed = Vec::with_capacity(chosen.len());
    for &i in &chosen {
        let decoy = enlarged.decoys.states[i];
        let rec = pool.measure(checker, &[enlarged.decoy_ids[i]], decoy.basis(), rng)?;
        let bit = rec.bits_value() == 1;
        observed.push(bit);
        if bit != decoy.bit() {
            errors += 1;
        }
    }
    let announced: alloc::string::String = chosen.iter().map(|&i| enlarged.decoys.states[i].symbol()).collect();
    transcript.log(
        step,
        checker,
        "verify-decoys",
        alloc::format!(
            "checked={} prepared={} measured={} errors={errors}",
            chosen.len(),
            announced,
            bits_string(&observed)
        ),
    );
    Ok(CheckResult { checked: chosen.len(), errors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SimRng;

    #[test]
    fn decoy_positions_increasing_and_in_bounds() {
        let mut rng = SimRng::seed_from(1);
        for _ in 0..50 {
            let d = DecoySet::random(8, 8, &mut rng);
            assert!(d.positions.windows(2).all(|w| w[0] < w[1]));
            assert!(d.positions.iter().all(|&p| p < 16));
        }
    }

    #[test]
    fn insertion_keeps_carrier_order() {
        let mut rng = SimRng::seed_from(2);
        let mut pool = QubitPool::new();
        let carriers: Vec<QubitId> = (0..5).map(|_| pool.prepare(StateVector::zero(), Actor::Bob)[0]).collect();
        let e = insert_decoys(&mut pool, &carriers, 5, Actor::Bob, &mut rng);
        assert_eq!(e.sequence.len(), 10);
        assert_eq!(e.carriers(), carriers);
        for (k, &p) in e.decoys.positions.iter().enumerate() {
            assert_eq!(e.sequence[p], e.decoy_ids[k]);
        }
    }

    #[test]
    fn honest_check_has_no_errors() {
        let mut rng = SimRng::seed_from(3);
        let mut pool = QubitPool::new();
        let e = insert_decoys(&mut pool, &[], 16, Actor::Bob, &mut rng);
        pool.transfer(&e.sequence, Actor::Bob, Actor::Alice).unwrap();
        let mut t = ProtocolTranscript::new("test");
        let r = bb84_check(&mut pool, &e, Actor::Bob, Actor::Alice, "5", &mut t, &mut rng).unwrap();
        assert_eq!(r, CheckResult { checked: 8, errors: 0 });
    }
}
