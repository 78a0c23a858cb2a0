//! Multi-party protocol engines.
//!
//! Parties are simulated in-process: a [`QubitPool`] tracks who holds every
//! qubit, [`channel::send`] moves qubits between parties (optionally through
//! an [`Interceptor`]), and each run produces a [`ProtocolTranscript`].

mod bcst;
pub mod channel;
mod cqd;
mod disclosure;
mod permutation;
mod pool;
mod transcript;

pub use bcst::{bcst_run, bcst_run_with, BcstConfig, PairingGuess};
pub use channel::{DecoySet, DecoyState, InterceptContext, Interceptor};
pub use cqd::{
    cqd_run, cqd_run_with, cqka_run, cqka_run_with, cqkd_run, cqkd_run_with, cqsdc_run, cqsdc_run_with, CqdOptions,
    DEFAULT_ERROR_THRESHOLD,
};
pub use disclosure::{
    entropy_bits, info_revealed, partial_disclosure_fidelity, BellInfo, Direction, DisclosurePolicy, InputEnsemble,
    KindDistribution,
};
pub use permutation::Permutation;
pub use pool::{QubitId, QubitPool};
pub use transcript::{Actor, Delivery, DeliveryKind, DirectionFidelity, Event, Outcome, ProtocolTranscript};
