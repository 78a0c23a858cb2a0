use bellswitch_core::bell::BellKind;
use bellswitch_core::protocols::*;
use bellswitch_core::qcore::StateVector;
use bellswitch_core::rng::SimRng;
use proptest::prelude::*;

fn kind() -> impl Strategy<Value = BellKind> {
    prop::sample::select(BellKind::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn noiseless_dialogue_decodes_exactly(n in 1usize..6, seed in any::<u64>(), initial in kind(), bits in prop::collection::vec(any::<bool>(), 24)) {
        let (a, b) = (&bits[..2 * n], &bits[12..12 + 2 * n]);
        let opts = CqdOptions { initial, ..CqdOptions::default() };
        let t = cqd_run(a, b, &opts, &mut SimRng::seed_from(seed)).unwrap();
        prop_assert!(t.is_success());
        prop_assert_eq!(t.delivery(Actor::Bob, DeliveryKind::Message).unwrap(), a);
        prop_assert_eq!(t.delivery(Actor::Alice, DeliveryKind::Message).unwrap(), b);
    }

    #[test]
    fn full_disclosure_teleports_perfectly(n in 1usize..5, seed in any::<u64>(), two in any::<bool>()) {
        let mut rng = SimRng::seed_from(seed);
        let alice: Vec<StateVector> = (0..n).map(|_| StateVector::haar_qubit(&mut rng)).collect();
        let bob: Vec<StateVector> = (0..n).map(|_| StateVector::haar_qubit(&mut rng)).collect();
        let mut cfg = BcstConfig::new(alice, bob)
            .disclose(DisclosurePolicy::full(Direction::AliceToBob))
            .disclose(DisclosurePolicy::full(Direction::BobToAlice));
        cfg.controllers = if two { 2 } else { 1 };
        let t = bcst_run(&cfg, &mut rng).unwrap();
        for d in [Direction::AliceToBob, Direction::BobToAlice] {
            prop_assert!((t.fidelity(d).unwrap() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn permutation_inverse_and_composition(size in 1usize..20, seed in any::<u64>()) {
        let mut rng = SimRng::seed_from(seed);
        let p = Permutation::random(size, &mut rng);
        let q = Permutation::random(size, &mut rng);
        let seq: Vec<usize> = (0..size).collect();
        prop_assert_eq!(p.inverse().apply(&p.apply(&seq).unwrap()).unwrap(), seq.clone());
        prop_assert!(p.after(&p.inverse()).unwrap().is_identity());
        let two_step = q.apply(&p.apply(&seq).unwrap()).unwrap();
        prop_assert_eq!(q.after(&p).unwrap().apply(&seq).unwrap(), two_step);
    }

    #[test]
    fn entropy_and_revealed_information_sum_to_two(raw in prop::array::uniform4(0.0f64..1.0)) {
        let total: f64 = raw.iter().sum();
        prop_assume!(total > 1e-3);
        let p = raw.map(|x| x / total);
        let h = entropy_bits(p).unwrap();
        prop_assert!((0.0..=2.0 + 1e-12).contains(&h));
        prop_assert!((h + info_revealed(p).unwrap() - 2.0).abs() < 1e-12);
    }
}

#[test]
fn disclosure_fidelity_rises_along_a_majorization_chain() {
    let chain = [
        [0.25, 0.25, 0.25, 0.25],
        [0.4, 0.2, 0.2, 0.2],
        [0.55, 0.15, 0.15, 0.15],
        [0.7, 0.1, 0.1, 0.1],
        [1.0, 0.0, 0.0, 0.0],
    ];
    let mut rng = SimRng::seed_from(17);
    let mut last = 0.0;
    for probs in chain {
        let dist = KindDistribution::new(probs).unwrap();
        let f = partial_disclosure_fidelity(&dist, &InputEnsemble::Haar, 20_000, &mut rng).unwrap();
        // A wrong Pauli correction leaves mean Haar fidelity 1/3.
        let oracle = probs[0] + (1.0 - probs[0]) / 3.0;
        assert!((f - oracle).abs() < 0.01, "{probs:?}: {f} vs {oracle}");
        assert!(f >= last);
        last = f;
    }
}

#[test]
fn transcripts_are_deterministic_per_seed() {
    let msg = [true, false, true, true];
    let run = |seed| cqd_run(&msg, &msg, &CqdOptions::default(), &mut SimRng::seed_from(seed)).unwrap();
    assert_eq!(run(5), run(5));
    assert_ne!(run(5).events, run(6).events);
}
