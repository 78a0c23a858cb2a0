use alloc::format;
use alloc::vec::Vec;

use super::{Operator, COMPLETENESS_TOL};
use crate::{Error, Result};

/// A single-qubit Kraus operator set with its decoherence rate.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    operators: Vec<Operator>,
    rate: f64,
}

impl KrausChannel {
    /// Checks that every operator is 2×2 and that `Σ E†E = I` within 1e-12.
    pub fn new(operators: Vec<Operator>, rate: f64) -> Result<Self> {
        if operators.is_empty() {
            return Err(Error::InvalidChannel("empty operator set".into()));
        }
        if let Some(bad) = operators.iter().find(|e| e.num_qubits() != 1) {
            return Err(Error::InvalidChannel(format!("operator acts on {} qubits", bad.num_qubits())));
        }
        let mut sum = Operator::real2(0.0, 0.0, 0.0, 0.0);
        for e in &operators {
            sum = sum.add(&e.dagger().matmul(e)?)?;
        }
        let defect = sum.distance(&Operator::identity(1));
        if defect > COMPLETENESS_TOL {
            return Err(Error::InvalidChannel(format!("completeness defect {defect:e}")));
        }
        Ok(Self { operators, rate })
    }

    pub fn operators(&self) -> &[Operator] {
        &self.operators
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }
}
