//! Simulation of Bell-state controlled quantum communication.
//!
//! The crate is `no_std` (it needs `alloc`) and is organised in five layers:
//!
//! * [`qcore`]: dense state vectors and density matrices for small registers,
//!   gate and Kraus application, measurement, post-selection, partial trace.
//! * [`bell`]: Bell states, dense coding, teleportation corrections and the
//!   five-qubit controlled-teleportation family.
//! * [`protocols`]: multi-party engines for bidirectional controlled
//!   teleportation (BCST) and controlled quantum dialogue (CQD) together with
//!   its CQSDC, CQKD and CQKA reductions.
//! * [`adversary`]: intercept-resend eavesdropping and the collusion game.
//! * [`noise`]: amplitude- and phase-damping analysis of BCST and CQD, the
//!   closed-form fidelities and their numeric cross-check.
//!
//! Qubit 0 is always the most significant bit of an amplitude index.
//! All randomness is drawn from an explicitly passed generator (see [`rng`]).

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod adversary;
pub mod bell;
mod error;
pub(crate) mod math;
pub mod noise;
pub mod protocols;
pub mod qcore;
pub mod rng;

pub use error::{Error, Result};
