//! Controlled quantum dialogue and its reductions.
//!
//! Charlie prepares `n` copies of one Bell state and permutes the home
//! halves. Bob encodes on the travel halves and sends them to Alice inside a
//! decoy-protected sequence; Alice encodes and returns them the same way.
//! Only after Charlie announces the permutation can Bob pair each travel
//! qubit with its home partner and Bell-measure.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::channel::{bb84_check, insert_decoys, send, Interceptor};
use super::pool::QubitPool;
use super::transcript::bits_string;
use super::{Actor, DeliveryKind, Permutation, ProtocolTranscript};
use crate::bell::{bell_state, dense_decode, dense_encode, BellKind, Dibit};
use crate::qcore::{MeasurementBasis, MeasurementOutcome, PauliCode};
use crate::{Error, Result};

pub const DEFAULT_ERROR_THRESHOLD: f64 = 0.11;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CqdOptions {
    pub initial: BellKind,
    /// Abort when a decoy check's error rate exceeds this.
    pub error_threshold: f64,
    /// Decoys inserted on each leg; defaults to the number of message symbols.
    pub decoys_per_leg: Option<usize>,
    /// Whether Charlie announces the permutation before Bob's Bell measurements.
    pub charlie_discloses: bool,
}

impl Default for CqdOptions {
    fn default() -> Self {
        Self {
            initial: BellKind::PhiPlus,
            error_threshold: DEFAULT_ERROR_THRESHOLD,
            decoys_per_leg: None,
            charlie_discloses: true,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Variant {
    name: &'static str,
    bob_announces: bool,
}

fn symbols(bits: &[bool], n: usize) -> Result<Vec<Dibit>> {
    if bits.len() != 2 * n {
        return Err(Error::MessageLength { expected: n, got: bits.len() });
    }
    Dibit::pack(bits)
}

fn kinds_payload(kinds: &[BellKind]) -> String {
    kinds.iter().map(|k| k.ascii()).collect::<Vec<_>>().join(",")
}

pub fn cqd_run<R: Rng>(
    alice_msg: &[bool],
    bob_msg: &[bool],
    options: &CqdOptions,
    rng: &mut R,
) -> Result<ProtocolTranscript> {
    cqd_run_with(alice_msg, bob_msg, options, None, rng)
}

pub fn cqd_run_with<R: Rng>(
    alice_msg: &[bool],
    bob_msg: &[bool],
    options: &CqdOptions,
    interceptor: Option<&mut dyn Interceptor>,
    rng: &mut R,
) -> Result<ProtocolTranscript> {
    let variant = Variant { name: "cqd", bob_announces: true };
    run(alice_msg, bob_msg, options, variant, interceptor, rng)
}

/// Only Alice sends: Bob encodes the identity and keeps his Bell outcomes private.
pub fn cqsdc_run<R: Rng>(message: &[bool], options: &CqdOptions, rng: &mut R) -> Result<ProtocolTranscript> {
    cqsdc_run_with(message, options, None, rng)
}

pub fn cqsdc_run_with<R: Rng>(
    message: &[bool],
    options: &CqdOptions,
    interceptor: Option<&mut dyn Interceptor>,
    rng: &mut R,
) -> Result<ProtocolTranscript> {
    let zeros = alloc::vec![false; message.len()];
    let variant = Variant { name: "cqsdc", bob_announces: false };
    run(message, &zeros, options, variant, interceptor, rng)
}

/// CQSDC carrying random bits; both ends keep them as a key.
pub fn cqkd_run<R: Rng>(key_bits: usize, options: &CqdOptions, rng: &mut R) -> Result<ProtocolTranscript> {
    cqkd_run_with(key_bits, options, None, rng)
}

pub fn cqkd_run_with<R: Rng>(
    key_bits: usize,
    options: &CqdOptions,
    interceptor: Option<&mut dyn Interceptor>,
    rng: &mut R,
) -> Result<ProtocolTranscript> {
    if key_bits == 0 || !key_bits.is_multiple_of(2) {
        return Err(Error::MessageLength { expected: key_bits / 2 + 1, got: key_bits });
    }
    let key: Vec<bool> = (0..key_bits).map(|_| rng.random::<bool>()).collect();
    let mut t = cqsdc_run_with(&key, options, interceptor, rng)?;
    t.protocol = "cqkd".into();
    if t.is_success() {
        let received = t.delivery(Actor::Bob, DeliveryKind::Message).expect("successful run delivers").to_vec();
        t.deliveries.clear();
        t.deliver(Actor::Alice, DeliveryKind::Key, key);
        t.deliver(Actor::Bob, DeliveryKind::Key, received);
    }
    Ok(t)
}

/// Dialogue carrying `k_a` and `k_b`; both parties keep `k_a ⊕ k_b`.
pub fn cqka_run<R: Rng>(k_a: &[bool], k_b: &[bool], options: &CqdOptions, rng: &mut R) -> Result<ProtocolTranscript> {
    cqka_run_with(k_a, k_b, options, None, rng)
}

pub fn cqka_run_with<R: Rng>(
    k_a: &[bool],
    k_b: &[bool],
    options: &CqdOptions,
    interceptor: Option<&mut dyn Interceptor>,
    rng: &mut R,
) -> Result<ProtocolTranscript> {
    if k_a.len() != k_b.len() {
        return Err(Error::MessageLength { expected: k_a.len() / 2, got: k_b.len() });
    }
    let mut t = cqd_run_with(k_a, k_b, options, interceptor, rng)?;
    t.protocol = "cqka".into();
    if t.is_success() {
        let xor = |x: &[bool], y: &[bool]| x.iter().zip(y).map(|(a, b)| a ^ b).collect::<Vec<_>>();
        let got_b = t.delivery(Actor::Alice, DeliveryKind::Message).expect("delivered").to_vec();
        let got_a = t.delivery(Actor::Bob, DeliveryKind::Message).expect("delivered").to_vec();
        t.deliveries.clear();
        t.deliver(Actor::Alice, DeliveryKind::Key, xor(k_a, &got_b));
        t.deliver(Actor::Bob, DeliveryKind::Key, xor(&got_a, k_b));
    }
    Ok(t)
}

fn run<R: Rng>(
    alice_msg: &[bool],
    bob_msg: &[bool],
    options: &CqdOptions,
    variant: Variant,
    mut interceptor: Option<&mut dyn Interceptor>,
    rng: &mut R,
) -> Result<ProtocolTranscript> {
    let n = alice_msg.len() / 2;
    if n == 0 {
        return Err(Error::EmptyProtocol);
    }
    let a_sym = symbols(alice_msg, n)?;
    let b_sym = symbols(bob_msg, n)?;
    if !(0.0..=1.0).contains(&options.error_threshold) {
        return Err(Error::OutOfRange { name: "error_threshold", value: options.error_threshold });
    }
    let decoys = options.decoys_per_leg.unwrap_or(n);
    let mut t = ProtocolTranscript::new(variant.name);
    let mut pool = QubitPool::new();

    // Step 1.
    let pairs: Vec<_> = (0..n).map(|_| pool.prepare(bell_state(options.initial), Actor::Charlie)).collect();
    let p_b1: Vec<_> = pairs.iter().map(|p| p[0]).collect();
    let p_b2: Vec<_> = pairs.iter().map(|p| p[1]).collect();
    t.log("1", Actor::Charlie, "prepare", format!("pairs={n} kind={}", options.initial.ascii()));

    // Step 2.
    let pi = Permutation::random(n, rng);
    let home = pi.apply(&p_b1)?;
    t.log("2", Actor::Charlie, "permute", "sequence=P_B1");
    send(&mut pool, &home, Actor::Charlie, Actor::Bob, "2", None, &mut t, rng)?;
    send(&mut pool, &p_b2, Actor::Charlie, Actor::Bob, "2", None, &mut t, rng)?;

    // Step 3.
    for (&q, d) in p_b2.iter().zip(&b_sym) {
        pool.apply(Actor::Bob, &PauliCode::for_message(*d).matrix(), &[q])?;
    }
    t.log("3", Actor::Bob, "encode", format!("symbols={n}"));

    // Steps 4–5.
    let leg1 = insert_decoys(&mut pool, &p_b2, decoys, Actor::Bob, rng);
    t.log("4", Actor::Bob, "insert-decoys", format!("count={decoys}"));
    send(&mut pool, &leg1.sequence, Actor::Bob, Actor::Alice, "4", interceptor.as_deref_mut(), &mut t, rng)?;
    let check = bb84_check(&mut pool, &leg1, Actor::Bob, Actor::Alice, "5", &mut t, rng)?;
    if check.error_rate() > options.error_threshold {
        t.abort("5", Actor::Alice, check.error_rate());
        return Ok(t);
    }

    // Steps 6–7.
    let travel = leg1.carriers();
    for (&q, d) in travel.iter().zip(&a_sym) {
        pool.apply(Actor::Alice, &PauliCode::for_message(*d).matrix(), &[q])?;
    }
    t.log("6", Actor::Alice, "encode", format!("symbols={n}"));
    let leg2 = insert_decoys(&mut pool, &travel, decoys, Actor::Alice, rng);
    t.log("6", Actor::Alice, "insert-decoys", format!("count={decoys}"));
    send(&mut pool, &leg2.sequence, Actor::Alice, Actor::Bob, "6", interceptor, &mut t, rng)?;
    let check = bb84_check(&mut pool, &leg2, Actor::Alice, Actor::Bob, "7", &mut t, rng)?;
    if check.error_rate() > options.error_threshold {
        t.abort("7", Actor::Bob, check.error_rate());
        return Ok(t);
    }

    // Step 8.
    let pairing = if options.charlie_discloses {
        t.log(
            "8",
            Actor::Charlie,
            "announce-permutation",
            pi.map().iter().map(|m| format!("{m}")).collect::<Vec<_>>().join(","),
        );
        pi
    } else {
        t.log("8", Actor::Charlie, "withhold-permutation", "");
        Permutation::identity(n)
    };

    // Step 9.
    let travel = leg2.carriers();
    let mut measured = Vec::with_capacity(n);
    for (j, &q) in travel.iter().enumerate() {
        let rec = pool.measure(Actor::Bob, &[home[pairing.image(j)], q], MeasurementBasis::Bell, rng)?;
        match rec.outcome {
            MeasurementOutcome::Bell(k) => measured.push(k),
            MeasurementOutcome::Bits(_) => unreachable!("Bell basis"),
        }
    }
    t.log("9", Actor::Bob, "bell-measure", format!("pairs={n}"));
    if variant.bob_announces {
        t.log("9", Actor::Bob, "announce-bell", kinds_payload(&measured));
    }
    let init = options.initial;
    let alice_decoded: Vec<Dibit> =
        measured.iter().zip(&b_sym).map(|(&k, &b)| dense_decode(dense_encode(init, b), k)).collect();
    let bits = Dibit::unpack(&alice_decoded);
    t.log("9", Actor::Bob, "decode", bits_string(&bits));
    t.deliver(Actor::Bob, DeliveryKind::Message, bits);
    if variant.bob_announces {
        let bob_decoded: Vec<Dibit> = measured
            .iter()
            .zip(&a_sym)
            .map(|(&k, &a)| {
                Dibit::ALL
                    .into_iter()
                    .find(|&b| dense_encode(dense_encode(init, b), a) == k)
                    .expect("dense coding is bijective")
            })
            .collect();
        let bits = Dibit::unpack(&bob_decoded);
        t.log("9", Actor::Alice, "decode", bits_string(&bits));
        t.deliver(Actor::Alice, DeliveryKind::Message, bits);
    }
    Ok(t)
}
