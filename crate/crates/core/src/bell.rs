//! Bell states, dense coding, teleportation corrections and the five-qubit
//! controlled-teleportation family.
//!
//! Labels: ψ+ ↔ 00, ψ− ↔ 01, φ+ ↔ 10, φ− ↔ 11, with
//! `|ψ±⟩ = (|00⟩ ± |11⟩)/√2` and `|φ±⟩ = (|01⟩ ± |10⟩)/√2`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::qcore::{measure, tensor, MeasurementBasis, Operator, PauliCode, QuantumState, StateVector, C64};
use crate::{Error, Result};

/// Two classical bits; `hi` is written first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Dibit(u8);

impl Dibit {
    pub const ALL: [Dibit; 4] = [Dibit(0), Dibit(1), Dibit(2), Dibit(3)];

    pub fn new(hi: bool, lo: bool) -> Self {
        Dibit(((hi as u8) << 1) | lo as u8)
    }

    /// Panics unless `index < 4`.
    pub fn from_index(index: usize) -> Self {
        assert!(index < 4, "dibit index {index} out of range");
        Dibit(index as u8)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn hi(self) -> bool {
        self.0 & 2 != 0
    }

    pub fn lo(self) -> bool {
        self.0 & 1 != 0
    }

    pub fn bits(self) -> [bool; 2] {
        [self.hi(), self.lo()]
    }

    /// Packs a bit string (length must be even) into dibits.
    pub fn pack(bits: &[bool]) -> Result<Vec<Dibit>> {
        if !bits.len().is_multiple_of(2) {
            return Err(Error::MessageLength { expected: bits.len() / 2 + 1, got: bits.len() });
        }
        Ok(bits.chunks(2).map(|c| Dibit::new(c[0], c[1])).collect())
    }

    pub fn unpack(dibits: &[Dibit]) -> Vec<bool> {
        dibits.iter().flat_map(|d| d.bits()).collect()
    }
}

impl core::ops::BitXor for Dibit {
    type Output = Dibit;

    fn bitxor(self, rhs: Dibit) -> Dibit {
        Dibit(self.0 ^ rhs.0)
    }
}

impl fmt::Display for Dibit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.hi() as u8, self.lo() as u8)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BellKind {
    PsiPlus,
    PsiMinus,
    PhiPlus,
    PhiMinus,
}

impl BellKind {
    /// Also the tie-break order wherever a kind must be chosen.
    pub const ALL: [BellKind; 4] = [BellKind::PsiPlus, BellKind::PsiMinus, BellKind::PhiPlus, BellKind::PhiMinus];

    pub fn label(self) -> Dibit {
        Dibit(self as u8)
    }

    pub fn from_label(label: Dibit) -> Self {
        Self::ALL[label.index()]
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// Kind identified by the Bell-measurement circuit CNOT(0→1), H(0)
    /// yielding bits `(m0, m1)`.
    pub fn from_circuit_bits(m0: bool, m1: bool) -> Self {
        Self::from_label(Dibit::new(m1, m0))
    }

    pub fn ascii(self) -> &'static str {
        match self {
            BellKind::PsiPlus => "psi+",
            BellKind::PsiMinus => "psi-",
            BellKind::PhiPlus => "phi+",
            BellKind::PhiMinus => "phi-",
        }
    }

    /// ψ± have even parity (|00⟩, |11⟩), φ± odd.
    pub fn is_psi(self) -> bool {
        matches!(self, BellKind::PsiPlus | BellKind::PsiMinus)
    }
}

impl fmt::Display for BellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BellKind::PsiPlus => "ψ+",
            BellKind::PsiMinus => "ψ−",
            BellKind::PhiPlus => "φ+",
            BellKind::PhiMinus => "φ−",
        })
    }
}

impl FromStr for BellKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase();
        BellKind::ALL
            .into_iter()
            .find(|k| k.ascii() == norm || alloc::format!("{k}") == s.trim())
            .ok_or(Error::InvalidDistribution("unknown Bell kind"))
    }
}

pub fn bell_state(kind: BellKind) -> StateVector {
    let h = core::f64::consts::FRAC_1_SQRT_2;
    let amps = match kind {
        BellKind::PsiPlus => [h, 0.0, 0.0, h],
        BellKind::PsiMinus => [h, 0.0, 0.0, -h],
        BellKind::PhiPlus => [0.0, h, h, 0.0],
        BellKind::PhiMinus => [0.0, h, -h, 0.0],
    };
    StateVector::from_real(&amps).expect("Bell states are normalized")
}

/// The Bell kind equal to `state` up to global phase, if any.
pub fn identify_bell(state: &StateVector) -> Option<BellKind> {
    BellKind::ALL.into_iter().find(|&k| state.eq_up_to_phase(&bell_state(k), 1e-9))
}

/// Applies the message's Pauli code to the second qubit and identifies the result.
pub fn dense_encode(kind: BellKind, message: Dibit) -> BellKind {
    let encoded =
        bell_state(kind).apply_unitary(&PauliCode::for_message(message).matrix(), &[1]).expect("two-qubit state");
    identify_bell(&encoded).expect("Pauli maps Bell states to Bell states")
}

/// Inverse of [`dense_encode`] for a fixed initial kind.
pub fn dense_decode(initial: BellKind, measured: BellKind) -> Dibit {
    Dibit::ALL.into_iter().find(|&m| dense_encode(initial, m) == measured).expect("dense coding is bijective")
}

/// Receiver correction after teleporting through `shared`, given the sender's
/// outcome `smo` = (unknown-qubit bit, shared-qubit bit).
pub fn correction_for(smo: Dibit, shared: BellKind) -> PauliCode {
    use PauliCode::*;
    const TABLE: [[PauliCode; 4]; 4] = [
        // ψ+  ψ−  φ+  φ−
        [I, Z, X, IY],
        [X, IY, I, Z],
        [Z, I, IY, X],
        [IY, X, Z, I],
    ];
    TABLE[smo.index()][shared.index()]
}

/// What the sender measured and what the receiver holds before correction.
#[derive(Debug, Clone, PartialEq)]
pub struct RawTeleport {
    pub smo: Dibit,
    pub probability: f64,
    pub receiver: StateVector,
}

/// Sender-side half of teleportation: CNOT(unknown → shared), H(unknown),
/// computational measurement of both sender qubits.
pub fn teleport_raw<R: Rng + ?Sized>(unknown: &StateVector, shared: BellKind, rng: &mut R) -> Result<RawTeleport> {
    if unknown.num_qubits() != 1 {
        return Err(Error::DimensionMismatch { expected: 2, got: unknown.dim() });
    }
    let joint = tensor(&[unknown.clone(), bell_state(shared)])?
        .apply_unitary(&Operator::cnot(), &[0, 1])?
        .apply_unitary(&Operator::hadamard(), &[0])?;
    let (record, post) = measure(&joint, &[0, 1], MeasurementBasis::Computational, rng)?;
    let smo = Dibit::from_index(record.bits_value());
    let base = smo.index() << 1;
    let receiver = StateVector::normalize(vec![post.amplitude(base), post.amplitude(base | 1)])?;
    Ok(RawTeleport { smo, probability: record.probability, receiver })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TeleportTranscript {
    pub shared: BellKind,
    pub smo: Dibit,
    pub probability: f64,
    pub correction: PauliCode,
}

/// Full single-pair teleportation with the tabulated correction.
pub fn teleport<R: Rng + ?Sized>(
    unknown: &StateVector,
    shared: BellKind,
    rng: &mut R,
) -> Result<(TeleportTranscript, StateVector)> {
    let raw = teleport_raw(unknown, shared, rng)?;
    let correction = correction_for(raw.smo, shared);
    let out = raw.receiver.apply_unitary(&correction.matrix(), &[0])?;
    Ok((TeleportTranscript { shared, smo: raw.smo, probability: raw.probability, correction }, out))
}

/// `(|ψ1⟩|ψ2⟩|a⟩ ± |ψ3⟩|ψ4⟩|b⟩)/√2` on qubits A1 B1 A2 B2 C1.
#[derive(Debug, Clone, PartialEq)]
pub struct FiveQubitFamily {
    pub psi: [BellKind; 4],
    pub minus: bool,
    pub charlie_basis: (StateVector, StateVector),
}

impl FiveQubitFamily {
    pub fn new(psi: [BellKind; 4], minus: bool) -> Result<Self> {
        Self::with_basis(psi, minus, (StateVector::zero(), StateVector::one()))
    }

    pub fn with_basis(psi: [BellKind; 4], minus: bool, charlie_basis: (StateVector, StateVector)) -> Result<Self> {
        let family = Self { psi, minus, charlie_basis };
        family.validate()?;
        Ok(family)
    }

    pub fn validate(&self) -> Result<()> {
        let (a, b) = &self.charlie_basis;
        if a.num_qubits() != 1 || b.num_qubits() != 1 || a.inner(b)?.norm() > 1e-12 {
            return Err(Error::CharlieBasisNotOrthonormal);
        }
        if self.psi[0] == self.psi[2] || self.psi[1] == self.psi[3] {
            return Err(Error::CharlieQubitSeparable);
        }
        Ok(())
    }

    /// Unitary taking Charlie's `|a⟩` to `|0⟩` and `|b⟩` to `|1⟩`.
    fn charlie_rotation(&self) -> Operator {
        let (a, b) = &self.charlie_basis;
        let (a, b) = (a.amplitudes(), b.amplitudes());
        Operator::new(1, vec![a[0].conj(), a[1].conj(), b[0].conj(), b[1].conj()]).expect("2×2")
    }
}

pub fn build_five_qubit_state(family: &FiveQubitFamily) -> Result<StateVector> {
    family.validate()?;
    let [p1, p2, p3, p4] = family.psi;
    let (a, b) = &family.charlie_basis;
    let first = tensor(&[bell_state(p1), bell_state(p2), a.clone()])?;
    let second = tensor(&[bell_state(p3), bell_state(p4), b.clone()])?;
    let sign = if family.minus { -1.0 } else { 1.0 };
    let h = core::f64::consts::FRAC_1_SQRT_2;
    let amps: Vec<C64> = first.amplitudes().iter().zip(second.amplitudes()).map(|(x, y)| (x + y * sign) * h).collect();
    StateVector::new(amps)
}

/// Charlie's measurement result and the four-qubit state left to Alice and Bob.
#[derive(Debug, Clone, PartialEq)]
pub struct CharlieOutcome {
    /// `false` for `|a⟩`, `true` for `|b⟩`.
    pub got_b: bool,
    pub pairs: [BellKind; 2],
    pub remaining: StateVector,
}

pub fn charlie_measure<R: Rng + ?Sized>(
    family: &FiveQubitFamily,
    state: &StateVector,
    rng: &mut R,
) -> Result<CharlieOutcome> {
    let rotated = state.apply_unitary(&family.charlie_rotation(), &[4])?;
    let (record, post) = measure(&rotated, &[4], MeasurementBasis::Computational, rng)?;
    let got_b = record.bits_value() == 1;
    let offset = got_b as usize;
    let remaining = StateVector::normalize((0..16).map(|i| post.amplitude((i << 1) | offset)).collect())?;
    let pairs = if got_b { [family.psi[2], family.psi[3]] } else { [family.psi[0], family.psi[1]] };
    Ok(CharlieOutcome { got_b, pairs, remaining })
}
