use alloc::vec;
use alloc::vec::Vec;

use super::C64;
use crate::math;

/// Eigenvalues of a Hermitian matrix, ascending.
///
/// Uses cyclic Jacobi on the real symmetric embedding `[[A, -B], [B, A]]`
/// of `A + iB`, whose spectrum is that of the input with every value doubled.
pub fn hermitian_eigenvalues(dim: usize, entries: &[C64]) -> Vec<f64> {
    let m = 2 * dim;
    let mut a = vec![0.0; m * m];
    for r in 0..dim {
        for c in 0..dim {
            let z = entries[r * dim + c];
            a[r * m + c] = z.re;
            a[(r + dim) * m + c + dim] = z.re;
            a[r * m + c + dim] = -z.im;
            a[(r + dim) * m + c] = z.im;
        }
    }
    jacobi(&mut a, m);
    let mut ev: Vec<f64> = (0..m).map(|i| a[i * m + i]).collect();
    ev.sort_by(|x, y| x.total_cmp(y));
    ev.into_iter().step_by(2).collect()
}

fn jacobi(a: &mut [f64], m: usize) {
    for _sweep in 0..100 {
        let off: f64 = (0..m)
            .flat_map(|r| (0..m).filter(move |&c| c != r).map(move |c| (r, c)))
            .map(|(r, c)| a[r * m + c] * a[r * m + c])
            .sum();
        if off < 1e-30 {
            return;
        }
        for p in 0..m {
            for q in (p + 1)..m {
                let apq = a[p * m + q];
                if math::abs(apq) < 1e-300 {
                    continue;
                }
                let theta = (a[q * m + q] - a[p * m + p]) / (2.0 * apq);
                let t = theta.signum() / (math::abs(theta) + math::sqrt(theta * theta + 1.0));
                let c = 1.0 / math::sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..m {
                    let akp = a[k * m + p];
                    let akq = a[k * m + q];
                    a[k * m + p] = c * akp - s * akq;
                    a[k * m + q] = s * akp + c * akq;
                }
                for k in 0..m {
                    let apk = a[p * m + k];
                    let aqk = a[q * m + k];
                    a[p * m + k] = c * apk - s * aqk;
                    a[q * m + k] = s * apk + c * aqk;
                }
            }
        }
    }
}
