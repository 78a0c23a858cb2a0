use alloc::vec::Vec;
use core::cmp::Ordering;
use core::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, FRAC_PI_8};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

use super::analytic::{fidelity_in_form, limit_from_below, Form};
use super::pipeline::{fidelity_near, pipeline_fidelity};
use super::{ChannelKind, ChannelParams, InputStateParams};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub etas: Vec<f64>,
    pub theta1s: Vec<f64>,
    pub theta2s: Vec<f64>,
    pub phi1s: Vec<f64>,
    pub phi2s: Vec<f64>,
}

/// `{0, 0.1, …, 1}`.
pub fn default_etas() -> Vec<f64> {
    (0..=10).map(|i| i as f64 / 10.0).collect()
}

impl Default for Grid {
    fn default() -> Self {
        let thetas = alloc::vec![0.0, FRAC_PI_8, FRAC_PI_6, FRAC_PI_4, FRAC_PI_3, FRAC_PI_2];
        let phis = alloc::vec![0.0, FRAC_PI_3];
        Self { etas: default_etas(), theta1s: thetas.clone(), theta2s: thetas, phi1s: phis.clone(), phi2s: phis }
    }
}

impl Grid {
    /// Five equally spaced angles on `[0, π/2]` for each θ, eleven η values, zero phases.
    pub fn coarse() -> Self {
        let thetas: Vec<f64> = (0..5).map(|i| i as f64 * FRAC_PI_8).collect();
        Self {
            etas: default_etas(),
            theta1s: thetas.clone(),
            theta2s: thetas,
            phi1s: alloc::vec![0.0],
            phi2s: alloc::vec![0.0],
        }
    }

    /// Single-point slice along η.
    pub fn eta_slice(etas: Vec<f64>, input: InputStateParams) -> Self {
        Self {
            etas,
            theta1s: alloc::vec![input.theta1],
            theta2s: alloc::vec![input.theta2],
            phi1s: alloc::vec![input.phi1],
            phi2s: alloc::vec![input.phi2],
        }
    }

    pub fn len(&self) -> usize {
        self.etas.len() * self.theta1s.len() * self.theta2s.len() * self.phi1s.len() * self.phi2s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn inputs(&self) -> Result<Vec<InputStateParams>> {
        let mut out = Vec::new();
        for &t1 in &self.theta1s {
            for &t2 in &self.theta2s {
                for &p1 in &self.phi1s {
                    for &p2 in &self.phi2s {
                        out.push(InputStateParams::new(t1, t2, p1, p2)?);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Every `(channel, input)` pair, in canonical order.
    pub fn points(&self, kinds: &[ChannelKind]) -> Result<Vec<(ChannelParams, InputStateParams)>> {
        if self.is_empty() || kinds.is_empty() {
            return Err(Error::EmptyGrid);
        }
        let inputs = self.inputs()?;
        let mut kinds = kinds.to_vec();
        kinds.sort();
        kinds.dedup();
        let mut out = Vec::with_capacity(kinds.len() * self.len());
        for &kind in &kinds {
            for &eta in &self.etas {
                let ch = ChannelParams::new(kind, eta)?;
                out.extend(inputs.iter().map(|&p| (ch, p)));
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FidelityRecord {
    pub channel: ChannelParams,
    pub input: InputStateParams,
    pub f_numeric: f64,
    pub f_analytic: f64,
    pub abs_err: f64,
    /// `f_numeric` is a one-sided η limit at a zero-probability point.
    pub limit: bool,
}

/// Pipeline fidelity; zero-probability points are replaced by the η → η⁻ limit.
pub fn numeric_fidelity(channel: ChannelParams, input: InputStateParams) -> Result<(f64, bool)> {
    match pipeline_fidelity(channel, input) {
        Ok(f) => Ok((f, false)),
        Err(Error::ZeroProbability) => {
            let f = limit_from_below(channel.eta, |e| fidelity_near(ChannelParams::new(channel.kind, e)?, input))?;
            Ok((f, true))
        }
        Err(e) => Err(e),
    }
}

pub fn fidelity_record(channel: ChannelParams, input: InputStateParams, form: Form) -> Result<FidelityRecord> {
    let (f_numeric, limit) = numeric_fidelity(channel, input)?;
    let f_analytic = fidelity_in_form(form, channel, input);
    Ok(FidelityRecord { channel, input, f_numeric, f_analytic, abs_err: (f_numeric - f_analytic).abs(), limit })
}

fn record_key(r: &FidelityRecord) -> (ChannelKind, [f64; 5]) {
    let p = &r.input;
    (r.channel.kind, [r.channel.eta, p.theta1, p.theta2, p.phi1, p.phi2])
}

/// Canonical order: channel kind, then η, θ1, θ2, φ1, φ2.
pub fn compare_records(a: &FidelityRecord, b: &FidelityRecord) -> Ordering {
    let (ka, va) = record_key(a);
    let (kb, vb) = record_key(b);
    ka.cmp(&kb)
        .then_with(|| va.iter().zip(&vb).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(Ordering::Equal))
}

pub fn sweep(grid: &Grid, kinds: &[ChannelKind], form: Form) -> Result<Vec<FidelityRecord>> {
    let mut records =
        grid.points(kinds)?.into_iter().map(|(ch, p)| fidelity_record(ch, p, form)).collect::<Result<Vec<_>>>()?;
    records.sort_by(compare_records);
    Ok(records)
}
