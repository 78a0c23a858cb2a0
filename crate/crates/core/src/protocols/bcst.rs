//! Bidirectional controlled state teleportation over permuted Bell pairs.
//!
//! Pairs `0..n` carry Alice → Bob, pairs `n..2n` carry Bob → Alice. Charlie
//! keeps the permutations of Bob's two half-sequences and the Bell kinds; what
//! he later discloses decides how well each receiver can reconstruct.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;

use super::channel::{send, Interceptor};
use super::pool::{QubitId, QubitPool};
use super::{Actor, BellInfo, Direction, DirectionFidelity, DisclosurePolicy, Permutation, ProtocolTranscript};
use crate::bell::{bell_state, correction_for, BellKind, Dibit};
use crate::qcore::{MeasurementBasis, Operator, StateVector};
use crate::{Error, Result};

/// How a receiver without the permutation picks which of its qubits to correct.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PairingGuess {
    /// Assume the received order is the original order.
    #[default]
    ReceivedOrder,
    /// Draw a uniformly random pairing.
    Uniform,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BcstConfig {
    pub n: usize,
    pub disclosures: Vec<DisclosurePolicy>,
    /// Alice's unknown states, teleported to Bob.
    pub alice_inputs: Vec<StateVector>,
    /// Bob's unknown states, teleported to Alice.
    pub bob_inputs: Vec<StateVector>,
    /// 1, or 2 for one controller per direction.
    pub controllers: u8,
    /// Overrides Charlie's random choice of the `2n` Bell kinds.
    pub kinds: Option<Vec<BellKind>>,
    /// Post-selects the `2n` sender outcomes (Alice's first) instead of sampling.
    pub forced_outcomes: Option<Vec<Dibit>>,
    pub pairing_guess: PairingGuess,
}

impl BcstConfig {
    /// Nothing disclosed in either direction, one controller.
    pub fn new(alice_inputs: Vec<StateVector>, bob_inputs: Vec<StateVector>) -> Self {
        Self {
            n: alice_inputs.len(),
            disclosures: Vec::new(),
            alice_inputs,
            bob_inputs,
            controllers: 1,
            kinds: None,
            forced_outcomes: None,
            pairing_guess: PairingGuess::ReceivedOrder,
        }
    }

    pub fn disclose(mut self, policy: DisclosurePolicy) -> Self {
        self.disclosures.retain(|p| p.direction != policy.direction);
        self.disclosures.push(policy);
        self
    }

    pub fn policy(&self, direction: Direction) -> DisclosurePolicy {
        self.disclosures
            .iter()
            .copied()
            .find(|p| p.direction == direction)
            .unwrap_or_else(|| DisclosurePolicy::withheld(direction))
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::EmptyProtocol);
        }
        for len in [self.alice_inputs.len(), self.bob_inputs.len()] {
            if len != self.n {
                return Err(Error::DimensionMismatch { expected: self.n, got: len });
            }
        }
        if !(1..=2).contains(&self.controllers) {
            return Err(Error::OutOfRange { name: "controllers", value: self.controllers as f64 });
        }
        for len in
            [self.kinds.as_ref().map(Vec::len), self.forced_outcomes.as_ref().map(Vec::len)].into_iter().flatten()
        {
            if len != 2 * self.n {
                return Err(Error::DimensionMismatch { expected: 2 * self.n, got: len });
            }
        }
        Ok(())
    }
}

fn kinds_payload(kinds: &[BellKind]) -> String {
    kinds.iter().map(|k| k.ascii()).collect::<Vec<_>>().join(",")
}

fn map_payload(p: &Permutation) -> String {
    p.map().iter().map(|m| format!("{m}")).collect::<Vec<_>>().join(",")
}

pub fn bcst_run<R: Rng>(config: &BcstConfig, rng: &mut R) -> Result<ProtocolTranscript> {
    bcst_run_with(config, None, rng)
}

/// As [`bcst_run`], with an eavesdropper on Charlie's distribution channels.
pub fn bcst_run_with<R: Rng>(
    config: &BcstConfig,
    mut interceptor: Option<&mut dyn Interceptor>,
    rng: &mut R,
) -> Result<ProtocolTranscript> {
    config.validate()?;
    let n = config.n;
    let ab = config.policy(Direction::AliceToBob);
    let ba = config.policy(Direction::BobToAlice);
    let controller = |pair: usize| {
        if pair >= n && config.controllers == 2 {
            Actor::Charlie2
        } else {
            Actor::Charlie
        }
    };
    let mut t = ProtocolTranscript::new("bcst");
    let mut pool = QubitPool::new();

    // Step 1: preparation.
    let kinds: Vec<BellKind> = match &config.kinds {
        Some(k) => k.clone(),
        None => (0..2 * n)
            .map(|i| {
                let policy = if i < n { ab } else { ba };
                policy.preparation().sample(rng)
            })
            .collect(),
    };
    let mut p_a = Vec::with_capacity(2 * n);
    let mut p_b = Vec::with_capacity(2 * n);
    for (i, &k) in kinds.iter().enumerate() {
        let q = pool.prepare(bell_state(k), controller(i));
        p_a.push(q[0]);
        p_b.push(q[1]);
    }
    for (c, range) in [(controller(0), 0..n), (controller(n), n..2 * n)] {
        t.log("1", c, "prepare", format!("pairs={}..{}", range.start, range.end));
    }

    // Step 2: permute Bob's half-sequences and distribute.
    let pi1 = Permutation::random(n, rng);
    let pi2 = Permutation::random(n, rng);
    let p_b1 = pi1.apply(&p_b[..n])?;
    let p_b2 = pi2.apply(&p_b[n..])?;
    t.log("2", controller(0), "permute", "sequence=P_B1");
    t.log("2", controller(n), "permute", "sequence=P_B2");
    for (c, a_seq, b_seq) in [(controller(0), &p_a[..n], &p_b1), (controller(n), &p_a[n..], &p_b2)] {
        send(&mut pool, a_seq, c, Actor::Alice, "2", interceptor.as_deref_mut(), &mut t, rng)?;
        send(&mut pool, b_seq, c, Actor::Bob, "2", interceptor.as_deref_mut(), &mut t, rng)?;
    }

    // Step 3: both senders teleport.
    let mut smo = Vec::with_capacity(2 * n);
    let mut plan: Vec<(Actor, &StateVector, QubitId)> = Vec::with_capacity(2 * n);
    for (input, &q) in config.alice_inputs.iter().zip(&p_a) {
        plan.push((Actor::Alice, input, q));
    }
    for (input, &q) in config.bob_inputs.iter().zip(&p_b2) {
        plan.push((Actor::Bob, input, q));
    }
    for (idx, (sender, input, partner)) in plan.into_iter().enumerate() {
        let u = pool.prepare(input.clone(), sender)[0];
        pool.apply(sender, &Operator::cnot(), &[u, partner])?;
        pool.apply(sender, &Operator::hadamard(), &[u])?;
        let rec = match &config.forced_outcomes {
            Some(f) => pool.measure_forced(sender, &[u, partner], MeasurementBasis::Computational, f[idx].index())?,
            None => pool.measure(sender, &[u, partner], MeasurementBasis::Computational, rng)?,
        };
        let d = Dibit::from_index(rec.bits_value());
        t.log("3", sender, "announce-outcome", format!("item={} smo={d}", idx % n));
        smo.push(d);
    }

    // Step 4: disclosure.
    for (policy, range, c, pi) in [(ab, 0..n, controller(0), &pi1), (ba, n..2 * n, controller(n), &pi2)] {
        match policy.bell_info {
            BellInfo::Full => t.log("4", c, "disclose-kinds", kinds_payload(&kinds[range])),
            BellInfo::Distribution(d) => {
                let p = d.probs();
                t.log("4", c, "disclose-distribution", format!("{:.6},{:.6},{:.6},{:.6}", p[0], p[1], p[2], p[3]))
            }
            BellInfo::Withheld => t.log("4", c, "withhold-kinds", ""),
        }
        if policy.reveal_permutation {
            t.log("4", c, "disclose-permutation", map_payload(pi));
        } else {
            t.log("4", c, "withhold-permutation", "");
        }
    }

    // Step 5: receivers correct.
    let guess_for = |policy: DisclosurePolicy, actual: &Permutation, rng: &mut R| {
        if policy.reveal_permutation {
            actual.clone()
        } else {
            match config.pairing_guess {
                PairingGuess::ReceivedOrder => Permutation::identity(n),
                PairingGuess::Uniform => Permutation::random(n, rng),
            }
        }
    };
    let bob_view = guess_for(ab, &pi1, rng);
    let alice_view = guess_for(ba, &pi2, rng).inverse();

    let mut to_bob = Vec::with_capacity(n);
    for j in 0..n {
        let q = p_b1[bob_view.image(j)];
        let guess = ab.belief(kinds[j]).map_kind();
        let fix = correction_for(smo[j], guess);
        pool.apply(Actor::Bob, &fix.matrix(), &[q])?;
        t.log("5", Actor::Bob, "correct", format!("item={j} op={fix}"));
        to_bob.push(pool.reduced_state(&[q])?.fidelity_with_pure(&config.alice_inputs[j])?);
    }
    let mut to_alice = Vec::with_capacity(n);
    for j in 0..n {
        let pos = alice_view.image(j);
        let q = p_a[n + pos];
        let guess = ba.belief(kinds[n + pos]).map_kind();
        let fix = correction_for(smo[n + j], guess);
        pool.apply(Actor::Alice, &fix.matrix(), &[q])?;
        t.log("5", Actor::Alice, "correct", format!("item={j} op={fix}"));
        to_alice.push(pool.reduced_state(&[q])?.fidelity_with_pure(&config.bob_inputs[j])?);
    }
    for (direction, per_item) in [(Direction::AliceToBob, to_bob), (Direction::BobToAlice, to_alice)] {
        let mean = per_item.iter().sum::<f64>() / n as f64;
        t.log("5", Actor::Charlie, "fidelity", format!("{direction:?}={mean:.12}"));
        t.fidelities.push(DirectionFidelity { direction, mean, per_item });
    }
    Ok(t)
}
