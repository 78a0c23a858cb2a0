//! Command execution: each command turns a validated [`RunConfig`] into an
//! artifact and a [`Status`].

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6};

use bellswitch_core::adversary::{
    abort_rate, collusion_game, decoy_detection_rate, encoded_pair_samples, eve_information_gain,
    travel_qubit_marginal, AttackConfig, AttackKind, BasisStrategy, EveAccess, InterceptResend,
};
use bellswitch_core::bell::{BellKind, Dibit};
use bellswitch_core::noise::{
    cqd_fidelity_numeric, default_etas, fidelity_record, verify, ChannelKind, ChannelParams, CqdRow, FidelityRecord,
    Form, Grid, Routing, VerificationReport,
};
use bellswitch_core::protocols::{
    bcst_run, cqd_run_with, cqka_run_with, cqkd_run_with, cqsdc_run_with, partial_disclosure_fidelity, BcstConfig,
    BellInfo, CqdOptions, Direction, DisclosurePolicy, InputEnsemble, Interceptor, KindDistribution, PairingGuess,
    ProtocolTranscript,
};
use bellswitch_core::qcore::StateVector;
use bellswitch_core::rng::SimRng;
use rand::Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::config::{Command, Format, Params, RunConfig};
use crate::error::{CliError, Result, Status};
use crate::format::{
    curves_json, emit_figure_data, summary_csv, summary_json, summary_text, sweep_json, transcript_csv,
    transcript_jsonl, transcript_text, CurvePoint, FigureData, Summary,
};
use crate::num::sig12;

/// Two-sided 99% normal quantile.
const Z99: f64 = 2.5758293035489;

/// Runs the command and writes its artifact. The artifact is written even when
/// the status is an abort or a verification failure.
pub fn run(config: &RunConfig) -> Result<Status> {
    config.validate()?;
    let (body, status) = render(config)?;
    match &config.output.path {
        Some(path) => {
            std::fs::write(path, body).map_err(|e| CliError::config(format!("cannot write {}: {e}", path.display())))?
        }
        None => {
            use std::io::Write;
            std::io::stdout().write_all(body.as_bytes())?;
        }
    }
    Ok(status)
}

/// The artifact a run would write, and its status.
pub fn render(config: &RunConfig) -> Result<(String, Status)> {
    let mut rng = SimRng::seed_from(config.seed);
    let p = config.params();
    let format = config.format();
    match config.command {
        Command::Bcst => transcript_artifact(bcst(p, &mut rng)?, format),
        Command::Cqd | Command::Cqsdc | Command::Cqkd | Command::Cqka => {
            transcript_artifact(dialogue(config.command, p, &mut rng)?, format)
        }
        Command::Attack => Ok((summary_artifact(&attack(p, &mut rng)?, format)?, Status::Ok)),
        Command::Sweep => Ok((sweep(p, format)?, Status::Ok)),
        Command::Verify => verification(p, format),
    }
}

fn transcript_artifact(t: ProtocolTranscript, format: Format) -> Result<(String, Status)> {
    let status = if t.outcome.is_abort() { Status::Abort } else { Status::Ok };
    let body = match format {
        Format::Text => transcript_text(&t),
        Format::Json => transcript_jsonl(&t)?,
        Format::Csv => transcript_csv(&t)?,
    };
    Ok((body, status))
}

fn summary_artifact(s: &Summary, format: Format) -> Result<String> {
    match format {
        Format::Text => Ok(summary_text(s)),
        Format::Json => summary_json(s),
        Format::Csv => summary_csv(s),
    }
}

fn bell_kind(s: &str) -> Option<BellKind> {
    s.parse().ok()
}

fn dibit(s: &str) -> Option<Dibit> {
    match s {
        "00" => Some(Dibit::from_index(0)),
        "01" => Some(Dibit::from_index(1)),
        "10" => Some(Dibit::from_index(2)),
        "11" => Some(Dibit::from_index(3)),
        _ => None,
    }
}

/// `a/b` or a plain decimal.
fn ratio(s: &str) -> Option<f64> {
    match s.split_once('/') {
        Some((a, b)) => Some(a.trim().parse::<f64>().ok()? / b.trim().parse::<f64>().ok()?),
        None => s.parse().ok(),
    }
}

fn distribution(p: Params<'_>, key: &str) -> Result<Option<KindDistribution>> {
    let Some(v) = p.list(key, ratio)? else {
        return Ok(None);
    };
    let probs: [f64; 4] = v.try_into().map_err(|_| CliError::config(format!("{key} needs four probabilities")))?;
    Ok(Some(KindDistribution::new(probs)?))
}

fn initial_kind(p: Params<'_>) -> Result<BellKind> {
    Ok(p.list("initial", bell_kind)?.and_then(|v| v.first().copied()).unwrap_or(BellKind::PhiPlus))
}

fn basis(p: Params<'_>) -> Result<BasisStrategy> {
    Ok(match p.choice("basis", &["random-zx", "fixed-z"], "random-zx")? {
        "fixed-z" => BasisStrategy::FixedZ,
        _ => BasisStrategy::RandomZX,
    })
}

fn bcst(p: Params<'_>, rng: &mut SimRng) -> Result<ProtocolTranscript> {
    let n = p.usize("n", 1)?;
    let directions: &[Direction] = match p.choice("disclose", &["both", "a2b", "b2a", "none"], "both")? {
        "both" => &[Direction::AliceToBob, Direction::BobToAlice],
        "a2b" => &[Direction::AliceToBob],
        "b2a" => &[Direction::BobToAlice],
        _ => &[],
    };
    let bell_info = match p.get("bell-info") {
        None | Some("full") => BellInfo::Full,
        Some("withheld") => BellInfo::Withheld,
        Some(_) => BellInfo::Distribution(distribution(p, "bell-info")?.expect("key present")),
    };
    let controllers =
        u8::try_from(p.usize("controllers", 1)?).map_err(|_| CliError::config("controllers must be 1 or 2"))?;
    let alice: Vec<StateVector> = (0..n).map(|_| StateVector::haar_qubit(rng)).collect();
    let bob: Vec<StateVector> = (0..n).map(|_| StateVector::haar_qubit(rng)).collect();
    let mut cfg = BcstConfig::new(alice, bob);
    for &direction in directions {
        cfg = cfg.disclose(DisclosurePolicy { direction, bell_info, reveal_permutation: true });
    }
    cfg.controllers = controllers;
    cfg.pairing_guess = match p.choice("pairing", &["received", "uniform"], "received")? {
        "uniform" => PairingGuess::Uniform,
        _ => PairingGuess::ReceivedOrder,
    };
    cfg.kinds = p.list("kinds", bell_kind)?;
    cfg.forced_outcomes = p.list("outcomes", dibit)?;
    Ok(bcst_run(&cfg, rng)?)
}

fn random_bits(rng: &mut SimRng, len: usize) -> Vec<bool> {
    (0..len).map(|_| rng.random()).collect()
}

fn dialogue(command: Command, p: Params<'_>, rng: &mut SimRng) -> Result<ProtocolTranscript> {
    let defaults = CqdOptions::default();
    let options = CqdOptions {
        initial: initial_kind(p)?,
        error_threshold: p.f64("threshold", defaults.error_threshold)?,
        decoys_per_leg: p.get("decoys").map(|_| p.usize("decoys", 0)).transpose()?,
        charlie_discloses: !p.bool("withhold")?,
    };
    let mut eve = match p.choice("attack", &["none", "intercept-resend"], "none")? {
        "intercept-resend" => Some(InterceptResend::new(AttackConfig::new(
            AttackKind::InterceptResend,
            basis(p)?,
            p.f64("fraction", 1.0)?,
        )?)),
        _ => None,
    };
    let eve = eve.as_mut().map(|e| e as &mut dyn Interceptor);
    let symbols = p.usize("n", 4)?;
    let t = match command {
        Command::Cqd => {
            let a = p.bits("alice")?.unwrap_or_else(|| random_bits(rng, 2 * symbols));
            let b = p.bits("bob")?.unwrap_or_else(|| random_bits(rng, a.len()));
            if a.len() != b.len() {
                return Err(CliError::config("alice and bob messages differ in length"));
            }
            cqd_run_with(&a, &b, &options, eve, rng)?
        }
        Command::Cqsdc => {
            let m = p.bits("message")?.unwrap_or_else(|| random_bits(rng, 2 * symbols));
            cqsdc_run_with(&m, &options, eve, rng)?
        }
        Command::Cqkd => cqkd_run_with(p.usize("bits", 8)?, &options, eve, rng)?,
        Command::Cqka => {
            let ka = p.bits("ka")?.unwrap_or_else(|| random_bits(rng, 2 * symbols));
            let kb = p.bits("kb")?.unwrap_or_else(|| random_bits(rng, ka.len()));
            cqka_run_with(&ka, &kb, &options, eve, rng)?
        }
        _ => unreachable!("dialogue commands only"),
    };
    Ok(t)
}

fn attack(p: Params<'_>, rng: &mut SimRng) -> Result<Summary> {
    let mode =
        p.choice("mode", &["detection", "abort", "collusion", "marginal", "information", "disclosure"], "detection")?;
    let mut s: Summary = vec![("mode".into(), json!(mode))];
    let strategy = basis(p)?;
    let fraction = p.f64("fraction", 1.0)?;
    let attack_cfg = || AttackConfig::new(AttackKind::InterceptResend, strategy, fraction);
    match mode {
        "detection" => {
            let trials = p.usize("trials", 10_000)?;
            let cfg = attack_cfg()?;
            let rate = decoy_detection_rate(&cfg, trials, rng)?;
            let expected = 0.25 * cfg.attack_fraction;
            let half = Z99 * (expected * (1.0 - expected) / trials as f64).sqrt();
            s.push(("trials".into(), json!(trials)));
            s.push(("detection_rate".into(), json!(rate)));
            s.push(("expected".into(), json!(expected)));
            s.push(("ci99_low".into(), json!(expected - half)));
            s.push(("ci99_high".into(), json!(expected + half)));
            s.push(("within_ci99".into(), json!((rate - expected).abs() <= half)));
        }
        "abort" => {
            let runs = p.usize("runs", 200)?;
            let options = CqdOptions {
                initial: initial_kind(p)?,
                error_threshold: p.f64("threshold", CqdOptions::default().error_threshold)?,
                ..CqdOptions::default()
            };
            let rate = abort_rate(&attack_cfg()?, p.usize("symbols", 4)?, &options, runs, rng)?;
            s.push(("runs".into(), json!(runs)));
            s.push(("abort_rate".into(), json!(rate)));
        }
        "collusion" => {
            let samples = p.usize("samples", 10_000)?;
            let mean = collusion_game(p.usize("n", 2)?, samples, p.bool("informed")?, rng)?;
            s.push(("samples".into(), json!(samples)));
            s.push(("mean_fidelity".into(), json!(mean)));
        }
        "marginal" => {
            let initial = initial_kind(p)?;
            s.push(("initial".into(), json!(initial.ascii())));
            for i in 0..4 {
                let rho = travel_qubit_marginal(initial, Dibit::from_index(i))?;
                let mut dev: f64 = 0.0;
                for r in 0..2 {
                    for c in 0..2 {
                        let target = if r == c { 0.5 } else { 0.0 };
                        dev = dev.max((rho.get(r, c).re - target).hypot(rho.get(r, c).im));
                    }
                }
                s.push((format!("max_deviation_{i:02b}"), json!(dev)));
            }
        }
        "information" => {
            let samples = p.usize("samples", 10_000)?;
            let access = match p.choice("access", &["travel", "both"], "travel")? {
                "both" => EveAccess::BothQubits,
                _ => EveAccess::TravelQubit(strategy),
            };
            let pairs = encoded_pair_samples(initial_kind(p)?, access, samples, rng)?;
            s.push(("samples".into(), json!(samples)));
            s.push(("information_bits".into(), json!(eve_information_gain(&pairs))));
        }
        _ => {
            let dist = distribution(p, "distribution")?.unwrap_or_else(KindDistribution::uniform);
            let samples = p.usize("samples", 10_000)?;
            let mean = partial_disclosure_fidelity(&dist, &InputEnsemble::Haar, samples, rng)?;
            s.push(("entropy_bits".into(), json!(dist.entropy_bits())));
            s.push(("info_revealed".into(), json!(dist.info_revealed())));
            s.push(("samples".into(), json!(samples)));
            s.push(("mean_fidelity".into(), json!(mean)));
        }
    }
    Ok(s)
}

/// Named datasets behind the reference fidelity plots.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    /// Fidelity against θ1 and η at θ2 = π/6.
    Surface,
    /// Fidelity against η at θ1 = π/4, θ2 ∈ {π/6, π/3}.
    Slices,
    /// Dialogue fidelity curves against η.
    Curves,
}

impl Figure {
    fn parse(p: Params<'_>) -> Result<Option<Self>> {
        Ok(match p.get("figure") {
            None => None,
            Some(_) => Some(match p.choice("figure", &["fig1", "fig2", "fig3"], "fig1")? {
                "fig1" => Figure::Surface,
                "fig2" => Figure::Slices,
                _ => Figure::Curves,
            }),
        })
    }

    fn grid(self) -> Grid {
        let fine: Vec<f64> = (0..=8).map(|i| i as f64 * FRAC_PI_2 / 8.0).collect();
        match self {
            Figure::Surface => Grid {
                etas: default_etas(),
                theta1s: fine,
                theta2s: vec![FRAC_PI_6],
                phi1s: vec![0.0],
                phi2s: vec![0.0],
            },
            Figure::Slices | Figure::Curves => Grid {
                etas: (0..=20).map(|i| i as f64 / 20.0).collect(),
                theta1s: vec![FRAC_PI_4],
                theta2s: vec![FRAC_PI_6, FRAC_PI_3],
                phi1s: vec![0.0],
                phi2s: vec![0.0],
            },
        }
    }
}

fn channels(p: Params<'_>) -> Result<Vec<ChannelKind>> {
    Ok(match p.choice("channel", &["ad", "pd", "both"], "both")? {
        "ad" => vec![ChannelKind::AmplitudeDamping],
        "pd" => vec![ChannelKind::PhaseDamping],
        _ => vec![ChannelKind::AmplitudeDamping, ChannelKind::PhaseDamping],
    })
}

/// Evaluates every grid point in parallel; order is restored on output.
pub fn sweep_records(grid: &Grid, kinds: &[ChannelKind], form: Form) -> Result<Vec<FidelityRecord>> {
    let points = grid.points(kinds)?;
    Ok(points
        .par_iter()
        .map(|&(ch, input)| fidelity_record(ch, input, form))
        .collect::<bellswitch_core::Result<Vec<_>>>()?)
}

pub fn curve_points(etas: &[f64], kinds: &[ChannelKind]) -> Result<Vec<CurvePoint>> {
    let jobs: Vec<(CqdRow, f64)> = CqdRow::ALL
        .into_iter()
        .filter(|r| kinds.contains(&r.kind()))
        .flat_map(|r| etas.iter().map(move |&e| (r, e)))
        .collect();
    Ok(jobs
        .par_iter()
        .map(|&(curve, eta)| {
            let (initial, a, b) = curve.representative();
            let ch = ChannelParams::new(curve.kind(), eta)?;
            let f_numeric = cqd_fidelity_numeric(initial, a, b, ch, Routing::AliceFirst)?.value;
            let f_analytic = curve.formula(eta);
            Ok(CurvePoint { eta, curve, f_numeric, f_analytic, abs_err: (f_numeric - f_analytic).abs() })
        })
        .collect::<bellswitch_core::Result<Vec<_>>>()?)
}

fn sweep(p: Params<'_>, format: Format) -> Result<String> {
    let figure = Figure::parse(p)?;
    let mut grid = figure.map(Figure::grid).unwrap_or_default();
    if let Some(v) = p.grid("eta-grid")? {
        grid.etas = v;
    }
    for (key, axis) in [
        ("theta1", &mut grid.theta1s),
        ("theta2", &mut grid.theta2s),
        ("phi1", &mut grid.phi1s),
        ("phi2", &mut grid.phi2s),
    ] {
        if let Some(v) = p.angles(key)? {
            *axis = v;
        }
    }
    let kinds = channels(p)?;
    if figure == Some(Figure::Curves) {
        let points = curve_points(&grid.etas, &kinds)?;
        return match format {
            Format::Json => curves_json(&points),
            _ => emit_figure_data(&FigureData::Curves(points)),
        };
    }
    let form = match p.choice("analytic", &["printed", "corrected"], "corrected")? {
        "printed" => Form::Printed,
        _ => Form::Corrected,
    };
    let records = sweep_records(&grid, &kinds, form)?;
    match format {
        Format::Json => sweep_json(&records),
        _ => emit_figure_data(&FigureData::Surface(records)),
    }
}

fn verification(p: Params<'_>, format: Format) -> Result<(String, Status)> {
    let grid = match p.choice("grid", &["default", "coarse"], "default")? {
        "coarse" => Grid::coarse(),
        _ => Grid::default(),
    };
    let report = verify(&grid)?;
    let status = report_status(&report);
    let body = match format {
        Format::Json => serde_json::to_string_pretty(&report)? + "\n",
        Format::Text => report_text(&report),
        Format::Csv => report_csv(&report)?,
    };
    Ok((body, status))
}

/// Any mismatch the corrected forms cannot explain fails verification.
pub fn report_status(report: &VerificationReport) -> Status {
    if report.passed() {
        Status::Ok
    } else {
        Status::VerificationFailed
    }
}

fn report_text(r: &VerificationReport) -> String {
    let mut out = format!("points\t{}\ntolerance\t{}\n", r.points, sig12(r.tolerance));
    for c in &r.checks {
        out.push_str(&format!(
            "check\t{}\tcompared={}\tmax_err_printed={}\tmax_err_corrected={}\tcatalogued={}\tuncatalogued={}\n",
            c.name,
            c.compared,
            sig12(c.max_err_printed),
            sig12(c.max_err_corrected),
            c.catalogued,
            c.uncatalogued
        ));
    }
    for rc in &r.routings {
        out.push_str(&format!(
            "routing\t{}\t{:?}\tmax_abs_err={}\tlimit_points={}\n",
            rc.row,
            rc.routing,
            sig12(rc.max_abs_err),
            rc.limit_points
        ));
    }
    if let Some(fit) = &r.fit {
        for c in &fit.corrections {
            out.push_str(&format!(
                "correction\t{}\teta^{}\tprinted={}\tfitted={}\n",
                c.basis,
                c.power,
                sig12(c.printed),
                sig12(c.fitted)
            ));
        }
    }
    for f in &r.flags {
        out.push_str(&format!("flag\t{f}\n"));
    }
    out.push_str(&format!("discrepancies\t{}\n", r.discrepancies.len()));
    out.push_str(&format!("passed\t{}\n", r.passed()));
    out
}

fn report_csv(r: &VerificationReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["channel", "eta", "theta1", "theta2", "phi1", "phi2", "printed_value", "pipeline_value", "note"])?;
    for d in &r.discrepancies {
        let pt = d.point;
        w.write_record([
            pt.channel.short().to_string(),
            sig12(pt.eta),
            sig12(pt.theta1),
            sig12(pt.theta2),
            sig12(pt.phi1),
            sig12(pt.phi2),
            sig12(d.printed_value),
            sig12(d.pipeline_value),
            d.note.clone(),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}
