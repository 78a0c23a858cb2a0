//! Dialogue fidelities: Charlie's Bell pair first reaches Alice, then one
//! qubit travels Alice → Bob → Alice while both parties encode on it.

use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::bell::{bell_state, BellKind};
use crate::qcore::{DensityMatrix, PauliCode, QuantumState, StateVector};
use crate::{Error, Result};

use super::analytic::limit_from_below;
use super::{ChannelKind, ChannelParams};

/// The qubit that makes the round trip.
const TRAVEL: usize = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CqdRow {
    AD1,
    AD2,
    AD3,
    AD4,
    AD5,
    PD1,
    PD2,
}

impl CqdRow {
    pub const ALL: [CqdRow; 7] =
        [CqdRow::AD1, CqdRow::AD2, CqdRow::AD3, CqdRow::AD4, CqdRow::AD5, CqdRow::PD1, CqdRow::PD2];

    pub fn kind(self) -> ChannelKind {
        match self {
            CqdRow::PD1 | CqdRow::PD2 => ChannelKind::PhaseDamping,
            _ => ChannelKind::AmplitudeDamping,
        }
    }

    /// Closed form in the channel's own rate.
    pub fn formula(self, eta: f64) -> f64 {
        let e = eta;
        let (e2, e3, e4) = (e * e, e * e * e, e * e * e * e);
        let ad_den = 4.0 * (1.0 - e + e2);
        match self {
            CqdRow::AD1 => (4.0 - 8.0 * e + 7.0 * e2 - 2.0 * e3 + e4) / ad_den,
            CqdRow::AD2 => (4.0 - 8.0 * e + 9.0 * e2 - 4.0 * e3 + e4) / ad_den,
            CqdRow::AD3 => (1.0 - e) * (1.0 - e) * (4.0 + e2) / ad_den,
            CqdRow::AD4 => (4.0 - 8.0 * e + 7.0 * e2 - 4.0 * e3 + e4) / ad_den,
            CqdRow::AD5 => (2.0 - e) * (2.0 - e) / 4.0,
            CqdRow::PD1 => (2.0 - 6.0 * e + 8.0 * e2 - 4.0 * e3 + e4) / (2.0 * (1.0 - 2.0 * e + 2.0 * e2)),
            CqdRow::PD2 => (2.0 - 2.0 * e + e2) / 2.0,
        }
    }

    /// A representative `(initial, Alice, Bob)` triple for the row.
    pub fn representative(self) -> (BellKind, PauliCode, PauliCode) {
        use PauliCode::*;
        match self {
            CqdRow::AD1 => (BellKind::PsiPlus, X, X),
            CqdRow::AD2 | CqdRow::PD1 => (BellKind::PsiPlus, I, I),
            CqdRow::AD3 => (BellKind::PsiPlus, X, I),
            CqdRow::AD4 => (BellKind::PsiPlus, I, X),
            CqdRow::AD5 | CqdRow::PD2 => (BellKind::PhiPlus, I, I),
        }
    }

    /// Every `(initial, Alice, Bob)` triple the row covers.
    pub fn members(self) -> Vec<(BellKind, PauliCode, PauliCode)> {
        let mut out = Vec::new();
        for initial in BellKind::ALL {
            for a in PauliCode::ALL {
                for b in PauliCode::ALL {
                    if classify(initial, a, b, self.kind()) == self {
                        out.push((initial, a, b));
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for CqdRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

fn classify(initial: BellKind, alice: PauliCode, bob: PauliCode, kind: ChannelKind) -> CqdRow {
    match (kind, initial.is_psi()) {
        (ChannelKind::PhaseDamping, true) => CqdRow::PD1,
        (ChannelKind::PhaseDamping, false) => CqdRow::PD2,
        (ChannelKind::AmplitudeDamping, false) => CqdRow::AD5,
        (ChannelKind::AmplitudeDamping, true) => match (alice.flips(), bob.flips()) {
            (true, true) => CqdRow::AD1,
            (false, false) => CqdRow::AD2,
            (true, false) => CqdRow::AD3,
            (false, true) => CqdRow::AD4,
        },
    }
}

/// Finds the single row covering every operation pair drawn from the two sets.
pub fn cqd_row(initial: BellKind, alice_ops: &[PauliCode], bob_ops: &[PauliCode], kind: ChannelKind) -> Result<CqdRow> {
    let mut row = None;
    for &a in alice_ops {
        for &b in bob_ops {
            let r = classify(initial, a, b, kind);
            if row.is_some_and(|prev| prev != r) {
                return Err(Error::UnmatchedRow);
            }
            row = Some(r);
        }
    }
    row.ok_or(Error::UnmatchedRow)
}

/// The printed closed-form fidelity for the row matching `(initial, ops)`.
pub fn cqd_fidelity(
    initial: BellKind,
    alice_ops: &[PauliCode],
    bob_ops: &[PauliCode],
    channel: ChannelParams,
) -> Result<f64> {
    Ok(cqd_row(initial, alice_ops, bob_ops, channel.kind)?.formula(channel.eta))
}

/// Order in which the travelling qubit meets encodings and channel legs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Routing {
    /// Alice encodes, leg to Bob, Bob encodes, leg back to Alice.
    #[default]
    AliceFirst,
    /// Leg to Bob, Bob encodes, leg back, Alice encodes.
    BobFirst,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CqdEvaluation {
    pub value: f64,
    /// The exact point is a zero-probability branch; `value` is the one-sided
    /// limit in η.
    pub limit: bool,
}

fn run_routing(
    initial: BellKind,
    alice: PauliCode,
    bob: PauliCode,
    channel: ChannelParams,
    routing: Routing,
) -> Result<f64> {
    let kraus = channel.kraus()?;
    let psi = bell_state(initial);
    let delivered = psi.to_density().apply_correlated_kraus(&kraus, &[&[0, 1]])?;
    if delivered.trace() < crate::qcore::ZERO_BRANCH {
        return Err(Error::ZeroProbability);
    }
    let mut rho: DensityMatrix = delivered.normalized()?;
    let (first, second) = match routing {
        Routing::AliceFirst => (alice, bob),
        Routing::BobFirst => (bob, alice),
    };
    rho = match routing {
        Routing::AliceFirst => rho.apply_unitary(&first.matrix(), &[TRAVEL])?.apply_kraus(&kraus, TRAVEL)?,
        Routing::BobFirst => rho.apply_kraus(&kraus, TRAVEL)?.apply_unitary(&first.matrix(), &[TRAVEL])?,
    };
    rho = match routing {
        Routing::AliceFirst => rho.apply_unitary(&second.matrix(), &[TRAVEL])?.apply_kraus(&kraus, TRAVEL)?,
        Routing::BobFirst => rho.apply_kraus(&kraus, TRAVEL)?.apply_unitary(&second.matrix(), &[TRAVEL])?,
    };
    let ideal: StateVector =
        psi.apply_unitary(&first.matrix(), &[TRAVEL])?.apply_unitary(&second.matrix(), &[TRAVEL])?;
    rho.fidelity_with_pure(&ideal)
}

/// Numeric fidelity of one `(Alice, Bob)` operation pair through the Kraus
/// pipeline. Zero-probability deliveries fall back to the one-sided limit.
pub fn cqd_fidelity_numeric(
    initial: BellKind,
    alice: PauliCode,
    bob: PauliCode,
    channel: ChannelParams,
    routing: Routing,
) -> Result<CqdEvaluation> {
    match run_routing(initial, alice, bob, channel, routing) {
        Ok(value) => Ok(CqdEvaluation { value, limit: false }),
        Err(Error::ZeroProbability) => {
            let value = limit_from_below(channel.eta, |e| {
                run_routing(initial, alice, bob, ChannelParams::new(channel.kind, e)?, routing)
            })?;
            Ok(CqdEvaluation { value, limit: true })
        }
        Err(e) => Err(e),
    }
}
