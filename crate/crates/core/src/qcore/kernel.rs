use alloc::vec;
use alloc::vec::Vec;

use super::{C64, ZERO};

/// Bit masks of `targets` inside an `n`-qubit index.
fn masks(n: usize, targets: &[usize]) -> Vec<usize> {
    targets.iter().map(|&t| 1usize << (n - 1 - t)).collect()
}

/// For each sub-index `s` over the targets (first target most significant),
/// the offset it contributes to a full index.
pub(crate) fn sub_offsets(n: usize, targets: &[usize]) -> Vec<usize> {
    let k = targets.len();
    let m = masks(n, targets);
    (0..1usize << k).map(|s| (0..k).filter(|&j| s & (1 << (k - 1 - j)) != 0).fold(0, |acc, j| acc | m[j])).collect()
}

/// In-place `amps ← (M on targets) amps` for a row-major `2^k × 2^k` matrix.
/// The matrix need not be unitary.
pub(crate) fn apply_matrix(amps: &mut [C64], n: usize, matrix: &[C64], targets: &[usize]) {
    let dim = 1usize << targets.len();
    debug_assert_eq!(matrix.len(), dim * dim);
    let offsets = sub_offsets(n, targets);
    let all: usize = offsets[dim - 1];
    let mut buf = vec![ZERO; dim];
    for base in 0..(1usize << n) {
        if base & all != 0 {
            continue;
        }
        for (s, slot) in buf.iter_mut().enumerate() {
            *slot = amps[base | offsets[s]];
        }
        for (r, &off) in offsets.iter().enumerate() {
            let row = &matrix[r * dim..(r + 1) * dim];
            amps[base | off] = row.iter().zip(&buf).map(|(m, a)| m * a).sum();
        }
    }
}

/// `ρ ← A ρ B†` where `ρ` is a row-major `2^n × 2^n` matrix, using the
/// vectorized view (row bits are qubits `0..n`, column bits `n..2n`).
pub(crate) fn sandwich(rho: &mut [C64], n: usize, left: &[C64], right: &[C64], targets: &[usize]) {
    apply_matrix(rho, 2 * n, left, targets);
    let conj: Vec<C64> = right.iter().map(|z| z.conj()).collect();
    let col_targets: Vec<usize> = targets.iter().map(|t| t + n).collect();
    apply_matrix(rho, 2 * n, &conj, &col_targets);
}
