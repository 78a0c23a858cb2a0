use bellswitch_core::noise::{kraus_ad, kraus_pd};
use bellswitch_core::qcore::{
    measure, tensor, DensityMatrix, KrausChannel, MeasurementBasis, Operator, QuantumState, StateVector, C64,
};
use bellswitch_core::rng::SimRng;
use proptest::prelude::*;

fn state(n: usize) -> impl Strategy<Value = StateVector> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << n)
        .prop_filter("nonzero", |v| v.iter().map(|(a, b)| a * a + b * b).sum::<f64>() > 1e-3)
        .prop_map(|v| StateVector::normalize(v.into_iter().map(|(a, b)| C64::new(a, b)).collect()).unwrap())
}

fn channel() -> impl Strategy<Value = KrausChannel> {
    (0.0f64..=1.0, any::<bool>()).prop_map(|(eta, ad)| if ad { kraus_ad(eta) } else { kraus_pd(eta) }.unwrap())
}

fn mixed(n: usize) -> impl Strategy<Value = DensityMatrix> {
    (state(n), state(n), 0.0f64..=1.0).prop_map(|(a, b, w)| {
        let (ra, rb) = (a.to_density(), b.to_density());
        let entries = ra.entries().iter().zip(rb.entries()).map(|(x, y)| x * w + y * (1.0 - w)).collect();
        DensityMatrix::new(ra.num_qubits(), entries).unwrap()
    })
}

proptest! {
    #[test]
    fn gates_preserve_norm(s in state(3), q in 0usize..3, c in 0usize..3, t in 0usize..3) {
        let mut out = s.apply_unitary(&Operator::hadamard(), &[q]).unwrap();
        if c != t {
            out = out.apply_unitary(&Operator::cnot(), &[c, t]).unwrap();
        }
        prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn channels_preserve_trace_and_positivity(rho in mixed(2), ch in channel(), q in 0usize..2) {
        let out = rho.apply_kraus(&ch, q).unwrap();
        prop_assert!((out.trace() - 1.0).abs() < 1e-12);
        prop_assert!(out.is_hermitian(1e-12));
        prop_assert!(out.min_eigenvalue() > -1e-9);
    }

    #[test]
    fn correlated_noise_is_positive_and_trace_nonincreasing(rho in mixed(3), ch in channel()) {
        let out = rho.apply_correlated_kraus(&ch, &[&[0, 2], &[1]]).unwrap();
        prop_assert!(out.trace() <= 1.0 + 1e-12);
        prop_assert!(out.min_eigenvalue() > -1e-9);
    }

    #[test]
    fn partial_trace_of_product_recovers_factors(a in state(1), b in state(2)) {
        let rho = tensor(&[a.clone(), b.clone()]).unwrap().to_density();
        prop_assert!(rho.partial_trace(&[0]).unwrap().distance(&a.to_density()) < 1e-12);
        prop_assert!(rho.partial_trace(&[1, 2]).unwrap().distance(&b.to_density()) < 1e-12);
    }

    #[test]
    fn permutation_round_trip(s in state(3), perm in Just([0usize, 1, 2]).prop_shuffle()) {
        let mut inv = [0usize; 3];
        for (q, &p) in perm.iter().enumerate() {
            inv[p] = q;
        }
        let back = s.permute_qubits(&perm).unwrap().permute_qubits(&inv).unwrap();
        prop_assert!(back.approx_eq(&s, 1e-14));
        let rho = s.to_density();
        let back = rho.permute_qubits(&perm).unwrap().permute_qubits(&inv).unwrap();
        prop_assert!(back.distance(&rho) < 1e-14);
    }

    #[test]
    fn fidelity_is_a_probability(rho in mixed(2), t in state(2)) {
        let f = rho.fidelity_with_pure(&t).unwrap();
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&f));
    }

    #[test]
    fn post_selection_normalizes(s in state(3), outcome in 0usize..4) {
        let rho = s.to_density();
        let probs = rho.outcome_probabilities(&[0, 2]).unwrap();
        prop_assume!(probs[outcome] > 1e-6);
        let (post, p) = rho.post_select(&[0, 2], outcome).unwrap();
        prop_assert!((p - probs[outcome]).abs() < 1e-12);
        prop_assert!((post.trace() - 1.0).abs() < 1e-12);
    }
}

/// Pearson chi-square against Born probabilities, 3 degrees of freedom.
#[test]
fn measurement_statistics_pass_chi_square() {
    // Critical value of χ²(3) at significance 0.001.
    const CRITICAL: f64 = 16.266;
    const SAMPLES: usize = 10_000;
    let s = StateVector::from_real(&[0.1f64.sqrt(), 0.2f64.sqrt(), 0.3f64.sqrt(), 0.4f64.sqrt()]).unwrap();
    let expected = [0.1, 0.2, 0.3, 0.4];
    let mut rng = SimRng::seed_from(2024);
    let mut counts = [0usize; 4];
    for _ in 0..SAMPLES {
        let (rec, _) = measure(&s, &[0, 1], MeasurementBasis::Computational, &mut rng).unwrap();
        counts[rec.bits_value()] += 1;
    }
    let chi2: f64 = counts
        .iter()
        .zip(expected)
        .map(|(&c, p)| {
            let e = p * SAMPLES as f64;
            (c as f64 - e).powi(2) / e
        })
        .sum();
    assert!(chi2 < CRITICAL, "χ² = {chi2}, counts {counts:?}");
}
