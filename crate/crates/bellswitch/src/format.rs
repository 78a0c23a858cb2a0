//! Artifact encodings: protocol transcripts, sweep tables, figure datasets
//! and flat metric summaries.

use std::cmp::Ordering;

use bellswitch_core::noise::{compare_records, CqdRow, FidelityRecord};
use bellswitch_core::protocols::{Direction, Outcome, ProtocolTranscript};
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::num::sig12;

pub const SWEEP_HEADER: [&str; 9] =
    ["eta", "theta1", "theta2", "phi1", "phi2", "channel", "f_numeric", "f_analytic", "abs_err"];
pub const CURVE_HEADER: [&str; 6] = ["eta", "channel", "curve", "f_numeric", "f_analytic", "abs_err"];
pub const TRANSCRIPT_HEADER: [&str; 5] = ["seq", "step", "actor", "action", "payload"];

pub fn direction_name(d: Direction) -> &'static str {
    match d {
        Direction::AliceToBob => "alice-to-bob",
        Direction::BobToAlice => "bob-to-alice",
    }
}

fn bits_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn escape(field: &str) -> String {
    field.replace('\\', "\\\\").replace('\t', "\\t").replace('\n', "\\n")
}

/// Trailer lines shared by the text and CSV encodings: `(action, payload)`.
fn summary_rows(t: &ProtocolTranscript) -> Vec<(&'static str, String)> {
    let mut rows = Vec::new();
    rows.push((
        "outcome",
        match &t.outcome {
            Outcome::Success => "success".to_string(),
            Outcome::Abort { step, error_rate } => format!("abort step={step} error_rate={}", sig12(*error_rate)),
        },
    ));
    for f in &t.fidelities {
        rows.push(("fidelity", format!("{} {}", direction_name(f.direction), sig12(f.mean))));
    }
    for d in &t.deliveries {
        rows.push(("delivery", format!("{} {:?} {}", d.recipient, d.kind, bits_string(&d.bits)).to_lowercase()));
    }
    rows
}

/// One tab-separated event per line; `#` lines carry the header and the result.
pub fn transcript_text(t: &ProtocolTranscript) -> String {
    let mut out = format!("# protocol {}\n# {}\n", t.protocol, TRANSCRIPT_HEADER.join("\t"));
    for e in &t.events {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\n",
            e.seq,
            escape(&e.step),
            e.actor,
            escape(&e.action),
            escape(&e.payload)
        ));
    }
    for (action, payload) in summary_rows(t) {
        out.push_str(&format!("# {action} {payload}\n"));
    }
    out
}

#[derive(Serialize)]
struct TranscriptSummary<'a> {
    protocol: &'a str,
    outcome: &'a Outcome,
    fidelities: &'a [bellswitch_core::protocols::DirectionFidelity],
    deliveries: &'a [bellswitch_core::protocols::Delivery],
}

/// JSON lines: every event, then one summary object.
pub fn transcript_jsonl(t: &ProtocolTranscript) -> Result<String> {
    let mut out = String::new();
    for e in &t.events {
        out.push_str(&serde_json::to_string(e)?);
        out.push('\n');
    }
    let summary = TranscriptSummary {
        protocol: &t.protocol,
        outcome: &t.outcome,
        fidelities: &t.fidelities,
        deliveries: &t.deliveries,
    };
    out.push_str(&serde_json::to_string(&summary)?);
    out.push('\n');
    Ok(out)
}

/// Events as CSV rows; result rows have an empty `seq` and step `-`.
pub fn transcript_csv(t: &ProtocolTranscript) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(TRANSCRIPT_HEADER)?;
    for e in &t.events {
        w.write_record([e.seq.to_string().as_str(), &e.step, e.actor.name(), &e.action, &e.payload])?;
    }
    for (action, payload) in summary_rows(t) {
        w.write_record(["", "-", "", action, &payload])?;
    }
    finish_csv(w)
}

fn finish_csv(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn sorted(records: &[FidelityRecord]) -> Result<Vec<FidelityRecord>> {
    if records.is_empty() {
        return Err(CliError::config("no records to emit"));
    }
    let mut v = records.to_vec();
    v.sort_by(compare_records);
    Ok(v)
}

pub fn sweep_csv(records: &[FidelityRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SWEEP_HEADER)?;
    for r in sorted(records)? {
        let i = r.input;
        w.write_record([
            sig12(r.channel.eta),
            sig12(i.theta1),
            sig12(i.theta2),
            sig12(i.phi1),
            sig12(i.phi2),
            r.channel.kind.short().to_string(),
            sig12(r.f_numeric),
            sig12(r.f_analytic),
            sig12(r.abs_err),
        ])?;
    }
    finish_csv(w)
}

#[derive(Serialize)]
struct SweepRow {
    eta: f64,
    theta1: f64,
    theta2: f64,
    phi1: f64,
    phi2: f64,
    channel: &'static str,
    f_numeric: f64,
    f_analytic: f64,
    abs_err: f64,
    limit: bool,
}

/// The sweep as a JSON array of row objects, in canonical order.
pub fn sweep_json(records: &[FidelityRecord]) -> Result<String> {
    let rows: Vec<SweepRow> = sorted(records)?
        .into_iter()
        .map(|r| SweepRow {
            eta: r.channel.eta,
            theta1: r.input.theta1,
            theta2: r.input.theta2,
            phi1: r.input.phi1,
            phi2: r.input.phi2,
            channel: r.channel.kind.short(),
            f_numeric: r.f_numeric,
            f_analytic: r.f_analytic,
            abs_err: r.abs_err,
            limit: r.limit,
        })
        .collect();
    Ok(serde_json::to_string_pretty(&rows)? + "\n")
}

/// One point of a dialogue fidelity curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub eta: f64,
    pub curve: CqdRow,
    pub f_numeric: f64,
    pub f_analytic: f64,
    pub abs_err: f64,
}

fn compare_curves(a: &CurvePoint, b: &CurvePoint) -> Ordering {
    (a.curve.kind(), a.curve).cmp(&(b.curve.kind(), b.curve)).then(a.eta.total_cmp(&b.eta))
}

#[derive(Debug, Clone, PartialEq)]
pub enum FigureData {
    /// Teleportation fidelity surfaces and slices.
    Surface(Vec<FidelityRecord>),
    /// Dialogue fidelity curves against η.
    Curves(Vec<CurvePoint>),
}

/// CSV for a figure dataset with canonical columns and row order.
pub fn emit_figure_data(data: &FigureData) -> Result<String> {
    match data {
        FigureData::Surface(records) => sweep_csv(records),
        FigureData::Curves(points) => {
            if points.is_empty() {
                return Err(CliError::config("no records to emit"));
            }
            let mut v = points.clone();
            v.sort_by(compare_curves);
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(CURVE_HEADER)?;
            for p in v {
                w.write_record([
                    sig12(p.eta),
                    p.curve.kind().short().to_string(),
                    p.curve.to_string(),
                    sig12(p.f_numeric),
                    sig12(p.f_analytic),
                    sig12(p.abs_err),
                ])?;
            }
            finish_csv(w)
        }
    }
}

pub fn curves_json(points: &[CurvePoint]) -> Result<String> {
    if points.is_empty() {
        return Err(CliError::config("no records to emit"));
    }
    let mut v = points.to_vec();
    v.sort_by(compare_curves);
    Ok(serde_json::to_string_pretty(&v)? + "\n")
}

/// Ordered `(metric, value)` pairs.
pub type Summary = Vec<(String, serde_json::Value)>;

fn value_text(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::Number(n) => n.as_f64().map(sig12).unwrap_or_else(|| n.to_string()),
        serde_json::Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn summary_text(s: &Summary) -> String {
    s.iter().map(|(k, v)| format!("{k}\t{}\n", value_text(v))).collect()
}

pub fn summary_json(s: &Summary) -> Result<String> {
    let map: serde_json::Map<String, serde_json::Value> = s.iter().cloned().collect();
    Ok(serde_json::to_string_pretty(&map)? + "\n")
}

pub fn summary_csv(s: &Summary) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["metric", "value"])?;
    for (k, v) in s {
        w.write_record([k.as_str(), &value_text(v)])?;
    }
    finish_csv(w)
}
