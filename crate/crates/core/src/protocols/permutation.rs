use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A bijection on `0..size`: element at position `i` moves to `map[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let mut seen = alloc::vec![false; map.len()];
        for &m in &map {
            if m >= map.len() || seen[m] {
                return Err(Error::NotBijective(map.len()));
            }
            seen[m] = true;
        }
        Ok(Self { map })
    }

    pub fn identity(size: usize) -> Self {
        Self { map: (0..size).collect() }
    }

    /// Uniform over all `size!` permutations (Fisher–Yates).
    pub fn random<R: Rng + ?Sized>(size: usize, rng: &mut R) -> Self {
        let mut map: Vec<usize> = (0..size).collect();
        map.shuffle(rng);
        Self { map }
    }

    pub fn size(&self) -> usize {
        self.map.len()
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    /// Where position `i` goes.
    pub fn image(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = alloc::vec![0; self.map.len()];
        for (i, &m) in self.map.iter().enumerate() {
            inv[m] = i;
        }
        Self { map: inv }
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &Permutation) -> Result<Self> {
        if first.size() != self.size() {
            return Err(Error::DimensionMismatch { expected: self.size(), got: first.size() });
        }
        Ok(Self { map: first.map.iter().map(|&m| self.map[m]).collect() })
    }

    /// Reorders a sequence: `out[map[i]] = seq[i]`.
    pub fn apply<T: Clone>(&self, seq: &[T]) -> Result<Vec<T>> {
        if seq.len() != self.size() {
            return Err(Error::DimensionMismatch { expected: self.size(), got: seq.len() });
        }
        let mut slots: Vec<Option<T>> = alloc::vec![None; seq.len()];
        for (i, x) in seq.iter().enumerate() {
            slots[self.map[i]] = Some(x.clone());
        }
        Ok(slots.into_iter().map(|x| x.expect("bijective")).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &m)| i == m)
    }

    pub fn fixed_points(&self) -> usize {
        self.map.iter().enumerate().filter(|(i, m)| i == *m).count()
    }
}
