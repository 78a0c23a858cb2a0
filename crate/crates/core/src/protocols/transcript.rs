use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use super::Direction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Actor {
    Charlie,
    Charlie2,
    Alice,
    Bob,
    Eve,
}

impl Actor {
    pub fn name(self) -> &'static str {
        match self {
            Actor::Charlie => "Charlie",
            Actor::Charlie2 => "Charlie2",
            Actor::Alice => "Alice",
            Actor::Bob => "Bob",
            Actor::Eve => "Eve",
        }
    }
}

impl fmt::Display for Actor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Event {
    pub seq: usize,
    pub step: String,
    pub actor: Actor,
    pub action: String,
    pub payload: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Outcome {
    Success,
    Abort { step: String, error_rate: f64 },
}

impl Outcome {
    pub fn is_abort(&self) -> bool {
        matches!(self, Outcome::Abort { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectionFidelity {
    pub direction: Direction,
    pub mean: f64,
    pub per_item: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DeliveryKind {
    Message,
    Key,
}

/// Classical bits a party ends the run with.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Delivery {
    pub recipient: Actor,
    pub kind: DeliveryKind,
    pub bits: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolTranscript {
    pub protocol: String,
    pub events: Vec<Event>,
    pub outcome: Outcome,
    pub fidelities: Vec<DirectionFidelity>,
    pub deliveries: Vec<Delivery>,
}

impl ProtocolTranscript {
    pub fn new(protocol: &str) -> Self {
        Self {
            protocol: protocol.to_string(),
            events: Vec::new(),
            outcome: Outcome::Success,
            fidelities: Vec::new(),
            deliveries: Vec::new(),
        }
    }

    pub fn log(&mut self, step: &str, actor: Actor, action: &str, payload: impl Into<String>) {
        let seq = self.events.len();
        self.events.push(Event {
            seq,
            step: step.to_string(),
            actor,
            action: action.to_string(),
            payload: payload.into(),
        });
    }

    pub fn abort(&mut self, step: &str, actor: Actor, error_rate: f64) {
        self.log(step, actor, "abort", alloc::format!("error_rate={error_rate:.6}"));
        self.outcome = Outcome::Abort { step: step.to_string(), error_rate };
        self.deliveries.clear();
    }

    pub fn deliver(&mut self, recipient: Actor, kind: DeliveryKind, bits: Vec<bool>) {
        self.deliveries.push(Delivery { recipient, kind, bits });
    }

    pub fn delivery(&self, recipient: Actor, kind: DeliveryKind) -> Option<&[bool]> {
        self.deliveries.iter().find(|d| d.recipient == recipient && d.kind == kind).map(|d| d.bits.as_slice())
    }

    pub fn fidelity(&self, direction: Direction) -> Option<f64> {
        self.fidelities.iter().find(|f| f.direction == direction).map(|f| f.mean)
    }

    pub fn is_success(&self) -> bool {
        self.outcome == Outcome::Success
    }
}

pub(crate) fn bits_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}
