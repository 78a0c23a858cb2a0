//! Attack models: an intercept-resend eavesdropper on decoy-protected
//! channels, and semi-honest Alice and Bob colluding against Charlie.

use alloc::format;
use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bell::{bell_state, BellKind, Dibit};
use crate::math;
use crate::protocols::channel::DecoyState;
use crate::protocols::{
    bcst_run, cqd_run_with, Actor, BcstConfig, CqdOptions, Direction, DisclosurePolicy, InterceptContext, Interceptor,
    Outcome, PairingGuess, QubitId, QubitPool,
};
use crate::qcore::{DensityMatrix, MeasurementBasis, PauliCode, QuantumState, StateVector};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AttackKind {
    None,
    InterceptResend,
    Collusion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BasisStrategy {
    RandomZX,
    FixedZ,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AttackConfig {
    pub kind: AttackKind,
    pub basis_strategy: BasisStrategy,
    pub attack_fraction: f64,
}

impl AttackConfig {
    pub fn new(kind: AttackKind, basis_strategy: BasisStrategy, attack_fraction: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&attack_fraction) {
            return Err(Error::OutOfRange { name: "attack_fraction", value: attack_fraction });
        }
        Ok(Self { kind, basis_strategy, attack_fraction })
    }

    pub fn intercept_resend(basis_strategy: BasisStrategy) -> Self {
        Self { kind: AttackKind::InterceptResend, basis_strategy, attack_fraction: 1.0 }
    }

    fn pick_basis<R: Rng + ?Sized>(&self, rng: &mut R) -> MeasurementBasis {
        match self.basis_strategy {
            BasisStrategy::FixedZ => MeasurementBasis::Computational,
            BasisStrategy::RandomZX => {
                if rng.random::<bool>() {
                    MeasurementBasis::Diagonal
                } else {
                    MeasurementBasis::Computational
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EveRecord {
    pub step: alloc::string::String,
    pub position: usize,
    pub qubit: QubitId,
    pub basis: MeasurementBasis,
    pub bit: bool,
}

impl EveRecord {
    /// Eve's observation as a symbol: `2·basis + bit`.
    pub fn symbol(&self) -> usize {
        let b = usize::from(self.basis == MeasurementBasis::Diagonal);
        2 * b + usize::from(self.bit)
    }
}

/// Measures each passing qubit (with probability `attack_fraction`) and
/// forwards the collapsed eigenstate.
#[derive(Debug, Clone)]
pub struct InterceptResend {
    pub config: AttackConfig,
    pub records: Vec<EveRecord>,
}

impl InterceptResend {
    pub fn new(config: AttackConfig) -> Self {
        Self { config, records: Vec::new() }
    }
}

impl Interceptor for InterceptResend {
    fn intercept(&mut self, ctx: InterceptContext<'_>) -> Result<()> {
        if self.config.kind != AttackKind::InterceptResend {
            return Ok(());
        }
        let mut touched = 0;
        for (position, &q) in ctx.in_transit.iter().enumerate() {
            if ctx.rng.random::<f64>() >= self.config.attack_fraction {
                continue;
            }
            let basis = self.config.pick_basis(ctx.rng);
            let rec = ctx.pool.measure(Actor::Eve, &[q], basis, ctx.rng)?;
            self.records.push(EveRecord {
                step: ctx.step.into(),
                position,
                qubit: q,
                basis,
                bit: rec.bits_value() == 1,
            });
            touched += 1;
        }
        ctx.transcript.log(
            ctx.step,
            Actor::Eve,
            "intercept-resend",
            format!("from={} to={} measured={touched}", ctx.from, ctx.to),
        );
        Ok(())
    }
}

/// Fraction of checked decoys that show an error when Eve intercepts every
/// decoy: single-qubit trials through the pool.
pub fn decoy_detection_rate<R: Rng + ?Sized>(config: &AttackConfig, trials: usize, rng: &mut R) -> Result<f64> {
    if trials == 0 {
        return Err(Error::EmptyProtocol);
    }
    let mut errors = 0usize;
    for _ in 0..trials {
        let decoy = DecoyState::ALL[rng.random_range(0..4)];
        let mut pool = QubitPool::new();
        let q = pool.prepare(decoy.state(), Actor::Bob);
        pool.transfer(&q, Actor::Bob, Actor::Eve)?;
        if config.kind == AttackKind::InterceptResend && rng.random::<f64>() < config.attack_fraction {
            let basis = config.pick_basis(rng);
            pool.measure(Actor::Eve, &q, basis, rng)?;
        }
        pool.transfer(&q, Actor::Eve, Actor::Alice)?;
        let rec = pool.measure(Actor::Alice, &q, decoy.basis(), rng)?;
        if (rec.bits_value() == 1) != decoy.bit() {
            errors += 1;
        }
    }
    Ok(errors as f64 / trials as f64)
}

/// Fraction of dialogue runs aborted at the first decoy check under attack.
pub fn abort_rate<R: Rng>(
    config: &AttackConfig,
    symbols: usize,
    options: &CqdOptions,
    runs: usize,
    rng: &mut R,
) -> Result<f64> {
    if runs == 0 || symbols == 0 {
        return Err(Error::EmptyProtocol);
    }
    let mut aborts = 0;
    for _ in 0..runs {
        let a: Vec<bool> = (0..2 * symbols).map(|_| rng.random()).collect();
        let b: Vec<bool> = (0..2 * symbols).map(|_| rng.random()).collect();
        let mut eve = InterceptResend::new(*config);
        let t = cqd_run_with(&a, &b, options, Some(&mut eve), rng)?;
        if matches!(&t.outcome, Outcome::Abort { step, .. } if step == "5") {
            aborts += 1;
        }
    }
    Ok(aborts as f64 / runs as f64)
}

/// Plug-in mutual information (bits) between paired observations and truths.
pub fn eve_information_gain(samples: &[(usize, usize)]) -> f64 {
    if samples.is_empty() {
        return 0.0;
    }
    let nx = samples.iter().map(|s| s.0).max().unwrap_or(0) + 1;
    let ny = samples.iter().map(|s| s.1).max().unwrap_or(0) + 1;
    let mut joint = alloc::vec![0usize; nx * ny];
    for &(x, y) in samples {
        joint[x * ny + y] += 1;
    }
    let total = samples.len() as f64;
    let px: Vec<f64> = (0..nx).map(|x| (0..ny).map(|y| joint[x * ny + y]).sum::<usize>() as f64 / total).collect();
    let py: Vec<f64> = (0..ny).map(|y| (0..nx).map(|x| joint[x * ny + y]).sum::<usize>() as f64 / total).collect();
    let mut mi = 0.0;
    for x in 0..nx {
        for y in 0..ny {
            let c = joint[x * ny + y];
            if c > 0 {
                let p = c as f64 / total;
                mi += p * math::log2(p / (px[x] * py[y]));
            }
        }
    }
    mi.max(0.0)
}

/// Which qubits of the encoded pair Eve gets to measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EveAccess {
    TravelQubit(BasisStrategy),
    /// Both halves with the pairing known; she Bell-measures.
    BothQubits,
}

/// Samples `(Eve's observation, Bob's symbol)` for uniformly random dense-coding
/// symbols on `initial`.
pub fn encoded_pair_samples<R: Rng + ?Sized>(
    initial: BellKind,
    access: EveAccess,
    samples: usize,
    rng: &mut R,
) -> Result<Vec<(usize, usize)>> {
    let mut out = Vec::with_capacity(samples);
    for _ in 0..samples {
        let symbol = Dibit::from_index(rng.random_range(0..4));
        let mut pool = QubitPool::new();
        let q = pool.prepare(bell_state(initial), Actor::Bob);
        pool.apply(Actor::Bob, &PauliCode::for_message(symbol).matrix(), &q[1..])?;
        let obs = match access {
            EveAccess::TravelQubit(strategy) => {
                pool.transfer(&q[1..], Actor::Bob, Actor::Eve)?;
                let cfg = AttackConfig::intercept_resend(strategy);
                let basis = cfg.pick_basis(rng);
                let rec = pool.measure(Actor::Eve, &q[1..], basis, rng)?;
                EveRecord {
                    step: alloc::string::String::new(),
                    position: 0,
                    qubit: q[1],
                    basis,
                    bit: rec.bits_value() == 1,
                }
                .symbol()
            }
            EveAccess::BothQubits => {
                pool.transfer(&q, Actor::Bob, Actor::Eve)?;
                pool.measure(Actor::Eve, &q, MeasurementBasis::Bell, rng)?.bits_value()
            }
        };
        out.push((obs, symbol.index()));
    }
    Ok(out)
}

/// Reduced state of the travel qubit after Bob encodes `symbol` on `initial`.
pub fn travel_qubit_marginal(initial: BellKind, symbol: Dibit) -> Result<DensityMatrix> {
    bell_state(initial).apply_unitary(&PauliCode::for_message(symbol).matrix(), &[1])?.to_density().partial_trace(&[1])
}

/// Alice and Bob pool everything they hold but not Charlie's records: they
/// guess the pairing uniformly and apply the MAP correction under a uniform
/// prior. Returns the mean reconstruction fidelity over Haar inputs in both
/// directions. With `informed`, Charlie's records are handed over instead.
pub fn collusion_game<R: Rng>(n: usize, samples: usize, informed: bool, rng: &mut R) -> Result<f64> {
    if n == 0 || samples == 0 {
        return Err(Error::EmptyProtocol);
    }
    let mut total = 0.0;
    for _ in 0..samples {
        let alice: Vec<StateVector> = (0..n).map(|_| StateVector::haar_qubit(rng)).collect();
        let bob: Vec<StateVector> = (0..n).map(|_| StateVector::haar_qubit(rng)).collect();
        let mut cfg = BcstConfig::new(alice, bob);
        cfg.pairing_guess = PairingGuess::Uniform;
        if informed {
            cfg = cfg
                .disclose(DisclosurePolicy::full(Direction::AliceToBob))
                .disclose(DisclosurePolicy::full(Direction::BobToAlice));
        }
        let t = bcst_run(&cfg, rng)?;
        total +=
            (t.fidelity(Direction::AliceToBob).unwrap_or(0.0) + t.fidelity(Direction::BobToAlice).unwrap_or(0.0)) / 2.0;
    }
    Ok(total / samples as f64)
}
