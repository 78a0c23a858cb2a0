//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Reference values come from closed forms typed out here independently of
//! the library, from hand-derived expressions, or from the printed reference numbers.

use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, FRAC_PI_6};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use bellswitch_core::adversary::{
    collusion_game, decoy_detection_rate, travel_qubit_marginal, AttackConfig, BasisStrategy,
};
use bellswitch_core::bell::{BellKind, Dibit};
use bellswitch_core::noise::{
    cqd_fidelity_numeric, numeric_fidelity, pipeline_fidelity, ChannelKind, ChannelParams, CqdRow, Grid,
    InputStateParams, Routing,
};
use bellswitch_core::protocols::{
    bcst_run, cqd_run, entropy_bits, info_revealed, Actor, BcstConfig, CqdOptions, DeliveryKind, Direction,
    DisclosurePolicy,
};
use bellswitch_core::qcore::{PauliCode, StateVector};
use bellswitch_core::rng::SimRng;
use bellswitch_core::Error;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within_time(limit: Duration, start: Instant, detail: String) -> Outcome {
    let took = start.elapsed();
    check(took < limit, format!("{detail}; {:.2} s of {} s", took.as_secs_f64(), limit.as_secs()))
}

fn etas() -> Vec<f64> {
    (0..=10).map(|i| i as f64 / 10.0).collect()
}

/// Phase-damping fidelity in printed form, cos θ on |0⟩.
fn pd_printed(eta: f64, t1: f64, t2: f64) -> f64 {
    let e = eta;
    let q = e * e * (2.0 - 4.0 * e + 3.0 * e * e);
    let (c21, c22) = ((2.0 * t1).cos(), (2.0 * t2).cos());
    let (c41, c42) = ((4.0 * t1).cos(), (4.0 * t2).cos());
    let num = 32.0 - 128.0 * e + 210.0 * e.powi(2) - 164.0 * e.powi(3)
        + 59.0 * e.powi(4)
        + q * (16.0 * c21 * c22 + c41 * c42 + 3.0 * (c41 + c42));
    let den = 16.0 * (2.0 - 8.0 * e + 14.0 * e.powi(2) - 12.0 * e.powi(3) + 5.0 * e.powi(4) + q * c21 * c22);
    num / den
}

/// Amplitude-damping fidelity in printed form, numerator led by −164η.
fn ad_printed(eta: f64, t1: f64, t2: f64) -> f64 {
    let e = eta;
    let (c1, c2) = ((2.0 * t1).cos(), (2.0 * t2).cos());
    let (c41, c42) = ((4.0 * t1).cos(), (4.0 * t2).cos());
    let num = 32.0 - 164.0 * e + 57.0 * e.powi(2) - 26.0 * e.powi(3)
        + 10.0 * e.powi(4)
        + e * (34.0 - 51.0 * e + 30.0 * e * e) * (c1 + c2)
        + e * e * (3.0 - 2.0 * e + 2.0 * e * e) * (c41 + c42)
        + 4.0 * e.powi(3) * (3.0 - 2.0 * e + 2.0 * e * e) * (c1 * c42 + c41 * c2)
        + 16.0 * e * e * (2.0 - 2.0 * e + e * e) * c1 * c2
        + e * e * (1.0 - 2.0 * e + 2.0 * e * e) * c41 * c42;
    let den = 16.0
        * (2.0 - 4.0 * e + 5.0 * e * e - 4.0 * e.powi(3)
            + 2.0 * e.powi(4)
            + e * e * c1 * c2
            + e * (2.0 - 3.0 * e + 2.0 * e * e) * (c1 + c2));
    num / den
}

/// Dialogue fidelities in printed form, in the channel's own rate.
fn dialogue_printed(row: CqdRow, e: f64) -> f64 {
    let ad_den = 4.0 * (1.0 - e + e * e);
    match row {
        CqdRow::AD1 => (4.0 - 8.0 * e + 7.0 * e * e - 2.0 * e.powi(3) + e.powi(4)) / ad_den,
        CqdRow::AD2 => (4.0 - 8.0 * e + 9.0 * e * e - 4.0 * e.powi(3) + e.powi(4)) / ad_den,
        CqdRow::AD3 => (1.0 - e).powi(2) * (4.0 + e * e) / ad_den,
        CqdRow::AD4 => (4.0 - 8.0 * e + 7.0 * e * e - 4.0 * e.powi(3) + e.powi(4)) / ad_den,
        CqdRow::AD5 => (2.0 - e).powi(2) / 4.0,
        CqdRow::PD1 => {
            (2.0 - 6.0 * e + 8.0 * e * e - 4.0 * e.powi(3) + e.powi(4)) / (2.0 * (1.0 - 2.0 * e + 2.0 * e * e))
        }
        CqdRow::PD2 => (2.0 - 2.0 * e + e * e) / 2.0,
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut rng = SimRng::seed_from(1);
    let mut worst: f64 = 0.0;
    let mut runs = 0;
    for k1 in BellKind::ALL {
        for k2 in BellKind::ALL {
            for o in 0..16 {
                let outcomes = vec![Dibit::from_index(o >> 2), Dibit::from_index(o & 3)];
                for _ in 0..100 {
                    let a = vec![StateVector::haar_qubit(&mut rng)];
                    let b = vec![StateVector::haar_qubit(&mut rng)];
                    let mut cfg = BcstConfig::new(a, b)
                        .disclose(DisclosurePolicy::full(Direction::AliceToBob))
                        .disclose(DisclosurePolicy::full(Direction::BobToAlice));
                    cfg.kinds = Some(vec![k1, k2]);
                    cfg.forced_outcomes = Some(outcomes.clone());
                    let t = bcst_run(&cfg, &mut rng).map_err(|e| e.to_string())?;
                    for f in &t.fidelities {
                        for x in &f.per_item {
                            worst = worst.max((1.0 - x).abs());
                        }
                    }
                    runs += 1;
                }
            }
        }
    }
    if worst > 1e-10 {
        return Err(format!("{runs} runs, worst |1 − F| = {worst:e}"));
    }
    within_time(Duration::from_secs(10), start, format!("{runs} runs, worst |1 − F| = {worst:.1e}"))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let grid = Grid::coarse();
    let mut worst: f64 = 0.0;
    let mut compared = 0;
    for p in grid.inputs().map_err(|e| e.to_string())? {
        for &eta in &grid.etas {
            let ch = ChannelParams::pd(eta).unwrap();
            match pipeline_fidelity(ch, p) {
                Ok(f) => {
                    let q = p.complemented();
                    let want = pd_printed(eta, q.theta1, q.theta2);
                    worst = worst.max((f - want).abs());
                    compared += 1;
                }
                Err(Error::ZeroProbability) => {}
                Err(e) => return Err(e.to_string()),
            }
        }
    }
    let spot = pipeline_fidelity(ChannelParams::pd(1.0).unwrap(), InputStateParams::real(FRAC_PI_4, FRAC_PI_4))
        .map_err(|e| e.to_string())?;
    let detail = format!("{compared} points, worst error {worst:.1e}; F_PD(1, π/4, π/4) = {spot}");
    if worst > 1e-9 || (spot - 0.25).abs() > 1e-10 {
        return Err(detail);
    }
    within_time(Duration::from_secs(30), start, detail)
}

fn verify_report() -> Result<serde_json::Value, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_bellswitch"))
        .args(["verify", "--grid", "coarse", "--seed", "7"])
        .output()
        .map_err(|e| e.to_string())?;
    if out.status.code() != Some(0) {
        return Err(format!("verify exited with {:?}", out.status.code()));
    }
    serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())
}

fn criterion_3(report: &serde_json::Value) -> Outcome {
    let grid = Grid::coarse();
    let mut worst0: f64 = 0.0;
    let mut worst1: f64 = 0.0;
    let mut zero_branches = Vec::new();
    for p in grid.inputs().map_err(|e| e.to_string())? {
        let f0 = pipeline_fidelity(ChannelParams::ad(0.0).unwrap(), p).map_err(|e| e.to_string())?;
        worst0 = worst0.max((f0 - 1.0).abs());
        match pipeline_fidelity(ChannelParams::ad(1.0).unwrap(), p) {
            Ok(f1) => {
                let want = p.theta1.sin().powi(2) * p.theta2.sin().powi(2);
                worst1 = worst1.max((f1 - want).abs());
            }
            Err(Error::ZeroProbability) => zero_branches.push((p.theta1, p.theta2)),
            Err(e) => return Err(e.to_string()),
        }
    }
    let printed = ad_printed(1.0, FRAC_PI_4, FRAC_PI_4);
    let entry = report["discrepancies"].as_array().and_then(|ds| {
        ds.iter().find(|d| {
            let pt = &d["point"];
            pt["channel"] == "AD"
                && pt["eta"] == 1.0
                && (pt["theta1"].as_f64() == Some(FRAC_PI_4))
                && (pt["theta2"].as_f64() == Some(FRAC_PI_4))
                && d["note"].as_str().is_some_and(|n| n.contains("AD fidelity"))
        })
    });
    let corrected_164 = report["fit"]["corrections"].as_array().is_some_and(|cs| {
        cs.iter().any(|c| c["printed"] == -164.0 && (c["fitted"].as_f64().unwrap_or(0.0) + 64.0).abs() < 1e-6)
    });
    let (reported_printed, reported_pipeline) = entry
        .map(|d| (d["printed_value"].as_f64().unwrap_or(f64::NAN), d["pipeline_value"].as_f64().unwrap_or(f64::NAN)))
        .unwrap_or((f64::NAN, f64::NAN));
    let detail = format!(
        "F(0) worst {worst0:.1e}, F(1) worst {worst1:.1e} over nonzero-probability points ({} zero branches skipped: {zero_branches:?}); \
         report entry at η=1, θ=π/4: printed {reported_printed}, pipeline {reported_pipeline} (independent printed value {printed}); \
         −164 → −64 correction reported: {corrected_164}",
        zero_branches.len()
    );
    check(
        worst0 < 1e-10
            && worst1 < 1e-10
            && (printed + 6.0).abs() < 1e-12
            && (reported_printed + 6.0).abs() < 1e-9
            && (reported_pipeline - 0.25).abs() < 1e-10
            && corrected_164,
        detail,
    )
}

fn criterion_4(report: &serde_json::Value) -> Outcome {
    let mut worst: f64 = 0.0;
    let mut compared = 0;
    for row in CqdRow::ALL {
        for (init, a, b) in row.members() {
            for eta in etas() {
                let ch = ChannelParams::new(row.kind(), eta).unwrap();
                let got = cqd_fidelity_numeric(init, a, b, ch, Routing::AliceFirst).map_err(|e| e.to_string())?;
                worst = worst.max((got.value - dialogue_printed(row, eta)).abs());
                compared += 1;
            }
        }
    }
    let spots = [
        (CqdRow::AD5.formula(0.5), dialogue_printed(CqdRow::AD5, 0.5), 0.5625),
        (CqdRow::PD2.formula(1.0), dialogue_printed(CqdRow::PD2, 1.0), 0.5),
        (CqdRow::AD2.formula(1.0), dialogue_printed(CqdRow::AD2, 1.0), 0.5),
    ];
    let spots_ok = spots.iter().all(|(lib, typed, want)| (lib - want).abs() < 1e-12 && (typed - want).abs() < 1e-12);
    let flagged = report["flags"]
        .as_array()
        .is_some_and(|fs| fs.iter().any(|f| f.as_str().is_some_and(|s| s.contains("PD1") && s.contains("η_P"))));
    check(
        worst < 1e-9 && spots_ok && flagged,
        format!("{compared} (row member, η) pairs, worst error {worst:.1e}; spot values {spots_ok}; PD1 rate flag {flagged}"),
    )
}

fn criterion_5() -> Outcome {
    const MARGIN: f64 = 1e-6;
    // Printed plots place cos θ on |0⟩; the pipeline uses sin θ.
    let gap = |t2: f64, eta: f64| -> Result<f64, String> {
        let p = InputStateParams::real(FRAC_PI_4, t2).complemented();
        let ad = numeric_fidelity(ChannelParams::ad(eta).unwrap(), p).map_err(|e| e.to_string())?.0;
        let pd = numeric_fidelity(ChannelParams::pd(eta).unwrap(), p).map_err(|e| e.to_string())?.0;
        Ok(ad - pd)
    };
    let mut violations = Vec::new();
    for eta in etas() {
        let g = gap(FRAC_PI_6, eta)?;
        if g < -MARGIN {
            violations.push(format!("η={eta}: F_AD − F_PD = {g:.3e}"));
        }
    }
    let mut pd_wins = Vec::new();
    for eta in etas() {
        if gap(FRAC_PI_3, eta)? < -MARGIN {
            pd_wins.push(eta);
        }
    }
    check(
        violations.is_empty() && !pd_wins.is_empty(),
        format!("θ2=π/6: AD below PD at [{}]; θ2=π/3: PD above AD at η = {pd_wins:?}", violations.join(", ")),
    )
}

fn criterion_6() -> Outcome {
    let mut min_gap = f64::INFINITY;
    let mut min_analytic = f64::INFINITY;
    for i in 1..=19 {
        let eta = i as f64 * 0.05;
        let ch = ChannelParams::pd(eta).unwrap();
        let pd2 = cqd_fidelity_numeric(BellKind::PhiPlus, PauliCode::I, PauliCode::I, ch, Routing::AliceFirst)
            .map_err(|e| e.to_string())?
            .value;
        let pd1 = cqd_fidelity_numeric(BellKind::PsiPlus, PauliCode::I, PauliCode::I, ch, Routing::AliceFirst)
            .map_err(|e| e.to_string())?
            .value;
        min_gap = min_gap.min(pd2 - pd1);
        // Hand-expanded difference of the two closed forms.
        let hand = eta * eta * (1.0 - eta).powi(2) / (2.0 * (1.0 - 2.0 * eta + 2.0 * eta * eta));
        min_analytic = min_analytic.min(dialogue_printed(CqdRow::PD2, eta) - dialogue_printed(CqdRow::PD1, eta));
        if (hand - (dialogue_printed(CqdRow::PD2, eta) - dialogue_printed(CqdRow::PD1, eta))).abs() > 1e-12 {
            return Err(format!("closed-form gap disagrees with its expansion at η={eta}"));
        }
    }
    check(
        min_gap > 1e-6 && min_analytic > 1e-6,
        format!("smallest PD2 − PD1: pipeline {min_gap:.3e}, closed form {min_analytic:.3e}"),
    )
}

fn criterion_7() -> Outcome {
    let grid = Grid::default();
    let mut phase: f64 = 0.0;
    let mut exchange: f64 = 0.0;
    let mut points = 0;
    for kind in [ChannelKind::AmplitudeDamping, ChannelKind::PhaseDamping] {
        for &eta in &grid.etas {
            let ch = ChannelParams::new(kind, eta).unwrap();
            for p in grid.inputs().map_err(|e| e.to_string())? {
                let f = |q: InputStateParams| numeric_fidelity(ch, q).map(|r| r.0).map_err(|e| e.to_string());
                let here = f(p)?;
                let base = f(InputStateParams::real(p.theta1, p.theta2))?;
                let swapped = f(p.exchanged())?;
                phase = phase.max((here - base).abs());
                exchange = exchange.max((here - swapped).abs());
                points += 1;
            }
        }
    }
    check(
        phase < 1e-10 && exchange < 1e-10,
        format!("{points} points; worst phase shift {phase:.1e}, worst exchange {exchange:.1e}"),
    )
}

fn criterion_8() -> Outcome {
    let probs = [1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0];
    let h = entropy_bits(probs).map_err(|e| e.to_string())?;
    let info = info_revealed(probs).map_err(|e| e.to_string())?;
    let oracle: f64 = probs.iter().map(|p| -p * p.log2()).sum();
    check(
        (h - 1.9183).abs() <= 5e-4 && (info - 0.0817).abs() <= 5e-4 && (h - oracle).abs() < 1e-12,
        format!("entropy {h:.6} bits, revealed {info:.6} bits"),
    )
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let trials = 100_000usize;
    let mut rng = SimRng::seed_from(9);
    let rate = decoy_detection_rate(&AttackConfig::intercept_resend(BasisStrategy::RandomZX), trials, &mut rng)
        .map_err(|e| e.to_string())?;
    let half = 2.5758293035489 * (0.25f64 * 0.75 / trials as f64).sqrt();
    let detection_ok = (rate - 0.25).abs() <= half;

    let collusion = collusion_game(2, trials, false, &mut rng.split()).map_err(|e| e.to_string())?;

    let mut rng2 = rng.split();
    let (mut disclosed, mut withheld) = (0.0, 0.0);
    for _ in 0..trials {
        let a = vec![StateVector::haar_qubit(&mut rng2)];
        let b = vec![StateVector::haar_qubit(&mut rng2)];
        let cfg = BcstConfig::new(a, b).disclose(DisclosurePolicy::full(Direction::AliceToBob));
        let t = bcst_run(&cfg, &mut rng2).map_err(|e| e.to_string())?;
        disclosed += t.fidelity(Direction::AliceToBob).unwrap_or(0.0);
        withheld += t.fidelity(Direction::BobToAlice).unwrap_or(0.0);
    }
    let (disclosed, withheld) = (disclosed / trials as f64, withheld / trials as f64);

    let mut marginal: f64 = 0.0;
    for kind in BellKind::ALL {
        for s in 0..4 {
            let rho = travel_qubit_marginal(kind, Dibit::from_index(s)).map_err(|e| e.to_string())?;
            for r in 0..2 {
                for c in 0..2 {
                    let want = if r == c { 0.5 } else { 0.0 };
                    let z = rho.get(r, c);
                    marginal = marginal.max((z.re - want).hypot(z.im));
                }
            }
        }
    }
    let in_band = |x: f64| (0.48..=0.52).contains(&x);
    let detail = format!(
        "detection {rate:.5} (99% CI ±{half:.5}); collusion {collusion:.4}; one-way disclosure: withheld side {withheld:.4}, \
         disclosed side {disclosed:.4}; marginal deviation {marginal:.1e}"
    );
    if !(detection_ok && in_band(collusion) && in_band(withheld) && (disclosed - 1.0).abs() < 1e-10 && marginal < 1e-12)
    {
        return Err(detail);
    }
    within_time(Duration::from_secs(120), start, detail)
}

fn criterion_10() -> Outcome {
    let mut rng = SimRng::seed_from(10);
    let mut cases = 0;
    for initial in BellKind::ALL {
        let options = CqdOptions { initial, ..CqdOptions::default() };
        for sa in 0..4 {
            for sb in 0..4 {
                let a = Dibit::from_index(sa).bits().to_vec();
                let b = Dibit::from_index(sb).bits().to_vec();
                let t = cqd_run(&a, &b, &options, &mut rng).map_err(|e| e.to_string())?;
                let to_bob = t.delivery(Actor::Bob, DeliveryKind::Message);
                let to_alice = t.delivery(Actor::Alice, DeliveryKind::Message);
                if to_bob != Some(a.as_slice()) || to_alice != Some(b.as_slice()) {
                    return Err(format!("{initial} with symbols {sa:02b}/{sb:02b} decoded {to_bob:?}/{to_alice:?}"));
                }
                cases += 1;
            }
        }
    }
    let withheld = CqdOptions { charlie_discloses: false, ..CqdOptions::default() };
    let (runs, n) = (20, 100);
    let (mut right, mut total) = (0usize, 0usize);
    for _ in 0..runs {
        let a: Vec<bool> = (0..2 * n).map(|_| rand_bit(&mut rng)).collect();
        let b: Vec<bool> = (0..2 * n).map(|_| rand_bit(&mut rng)).collect();
        let t = cqd_run(&a, &b, &withheld, &mut rng).map_err(|e| e.to_string())?;
        for (sent, got) in [(&a, Actor::Bob), (&b, Actor::Alice)] {
            let got = t.delivery(got, DeliveryKind::Message).ok_or("no delivery")?;
            for (x, y) in sent.chunks(2).zip(got.chunks(2)) {
                right += (x == y) as usize;
                total += 1;
            }
        }
    }
    let accuracy = right as f64 / total as f64;
    check(
        (accuracy - 0.25).abs() <= 0.02,
        format!("{cases} disclosed cases bit-exact; withheld accuracy {accuracy:.4} over {total} symbols (n = {n})"),
    )
}

fn rand_bit(rng: &mut SimRng) -> bool {
    use rand::Rng;
    rng.random()
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn main() -> ExitCode {
    let report = verify_report();
    let with_report = |f: fn(&serde_json::Value) -> Outcome| report.as_ref().map_err(Clone::clone).and_then(f);
    let criteria: Vec<Criterion> = vec![
        ("noiseless teleportation is exact", Box::new(criterion_1)),
        ("phase-damping closed form", Box::new(criterion_2)),
        ("amplitude-damping endpoints and printed numerator", Box::new(move || with_report(criterion_3))),
        ("dialogue fidelity table", Box::new(move || with_report(criterion_4))),
        ("AD versus PD slices", Box::new(criterion_5)),
        ("phi initial state beats psi under PD", Box::new(criterion_6)),
        ("phase independence and exchange symmetry", Box::new(criterion_7)),
        ("partial disclosure entropy", Box::new(criterion_8)),
        ("security statistics", Box::new(criterion_9)),
        ("dialogue end to end", Box::new(criterion_10)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome =
            std::panic::catch_unwind(std::panic::AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".to_string()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} [{secs:.2} s]: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name} [{secs:.2} s]: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
