use alloc::vec;
use alloc::vec::Vec;

use core::fmt;

use serde::{Deserialize, Serialize};

use super::{C64, ONE, ZERO};
use crate::bell::Dibit;
use crate::math;
use crate::{Error, Result};

/// A square complex matrix acting on `num_qubits` qubits, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    num_qubits: usize,
    data: Vec<C64>,
}

impl Operator {
    pub fn new(num_qubits: usize, data: Vec<C64>) -> Result<Self> {
        let dim = 1usize << num_qubits;
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, got: data.len() });
        }
        Ok(Self { num_qubits, data })
    }

    /// Builds a single-qubit operator from real entries `[[a, b], [c, d]]`.
    pub fn real2(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { num_qubits: 1, data: vec![a.into(), b.into(), c.into(), d.into()] }
    }

    pub fn identity(num_qubits: usize) -> Self {
        let dim = 1usize << num_qubits;
        let mut data = vec![ZERO; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = ONE;
        }
        Self { num_qubits, data }
    }

    pub fn hadamard() -> Self {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        Self::real2(h, h, h, -h)
    }

    /// Controlled-NOT with the first qubit as control.
    pub fn cnot() -> Self {
        let mut op = Self::identity(2);
        op.data[2 * 4 + 2] = ZERO;
        op.data[3 * 4 + 3] = ZERO;
        op.data[2 * 4 + 3] = ONE;
        op.data[3 * 4 + 2] = ONE;
        op
    }

    /// `|v⟩⟨v|` for a single computational basis vector.
    pub fn basis_projector(num_qubits: usize, index: usize) -> Self {
        let dim = 1usize << num_qubits;
        let mut data = vec![ZERO; dim * dim];
        data[index * dim + index] = ONE;
        Self { num_qubits, data }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.num_qubits
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[row * self.dim() + col]
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self { num_qubits: self.num_qubits, data: self.data.iter().map(|z| z * factor).collect() }
    }

    pub fn dagger(&self) -> Self {
        let dim = self.dim();
        let mut data = vec![ZERO; dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                data[c * dim + r] = self.data[r * dim + c].conj();
            }
        }
        Self { num_qubits: self.num_qubits, data }
    }

    pub fn matmul(&self, rhs: &Operator) -> Result<Self> {
        if rhs.num_qubits != self.num_qubits {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: rhs.dim() });
        }
        let dim = self.dim();
        let mut data = vec![ZERO; dim * dim];
        for r in 0..dim {
            for k in 0..dim {
                let a = self.data[r * dim + k];
                if a == ZERO {
                    continue;
                }
                for c in 0..dim {
                    data[r * dim + c] += a * rhs.data[k * dim + c];
                }
            }
        }
        Ok(Self { num_qubits: self.num_qubits, data })
    }

    pub fn add(&self, rhs: &Operator) -> Result<Self> {
        if rhs.num_qubits != self.num_qubits {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: rhs.dim() });
        }
        Ok(Self { num_qubits: self.num_qubits, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() })
    }

    /// Kronecker product; `self` owns the more significant qubits.
    pub fn kron(&self, rhs: &Operator) -> Self {
        let (da, db) = (self.dim(), rhs.dim());
        let dim = da * db;
        let mut data = vec![ZERO; dim * dim];
        for ar in 0..da {
            for ac in 0..da {
                let a = self.data[ar * da + ac];
                if a == ZERO {
                    continue;
                }
                for br in 0..db {
                    for bc in 0..db {
                        data[(ar * db + br) * dim + ac * db + bc] = a * rhs.data[br * db + bc];
                    }
                }
            }
        }
        Self { num_qubits: self.num_qubits + rhs.num_qubits, data }
    }

    /// Max entrywise distance to `other`.
    pub fn distance(&self, other: &Operator) -> f64 {
        let worst = self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm_sqr()).fold(0.0, f64::max);
        math::sqrt(worst)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        match self.dagger().matmul(self) {
            Ok(p) => p.distance(&Self::identity(self.num_qubits)) <= tol,
            Err(_) => false,
        }
    }
}

/// The four dense-coding operations. `IY` is the real matrix `iσ_y = [[0,1],[-1,0]]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PauliCode {
    I,
    X,
    IY,
    Z,
}

impl PauliCode {
    pub const ALL: [PauliCode; 4] = [PauliCode::I, PauliCode::X, PauliCode::IY, PauliCode::Z];

    pub fn matrix(self) -> Operator {
        match self {
            PauliCode::I => Operator::real2(1.0, 0.0, 0.0, 1.0),
            PauliCode::X => Operator::real2(0.0, 1.0, 1.0, 0.0),
            PauliCode::IY => Operator::real2(0.0, 1.0, -1.0, 0.0),
            PauliCode::Z => Operator::real2(1.0, 0.0, 0.0, -1.0),
        }
    }

    /// Dense-coding rule: 00 → I, 01 → X, 10 → iY, 11 → Z.
    pub fn for_message(message: Dibit) -> Self {
        match message.index() {
            0 => PauliCode::I,
            1 => PauliCode::X,
            2 => PauliCode::IY,
            _ => PauliCode::Z,
        }
    }

    pub fn message(self) -> Dibit {
        match self {
            PauliCode::I => Dibit::from_index(0),
            PauliCode::X => Dibit::from_index(1),
            PauliCode::IY => Dibit::from_index(2),
            PauliCode::Z => Dibit::from_index(3),
        }
    }

    /// Whether the operation flips the computational basis (X or iY).
    pub fn flips(self) -> bool {
        matches!(self, PauliCode::X | PauliCode::IY)
    }
}

impl fmt::Display for PauliCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PauliCode::I => "I",
            PauliCode::X => "X",
            PauliCode::IY => "iY",
            PauliCode::Z => "Z",
        })
    }
}
