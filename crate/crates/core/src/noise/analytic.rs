//! Closed-form output states and fidelities for the `ψ+ψ+`, `00`-outcome case.
//!
//! The printed forms place `cos θ` on `|0⟩`, the reverse of the pipeline's
//! `sin θ` on `|0⟩`. "Printed" functions evaluate the transcription literally;
//! "corrected" functions apply the coefficient repairs found by the pipeline
//! and evaluate at `θ → π/2 − θ`, so they are directly comparable with it.

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::math;
use crate::qcore::{DensityMatrix, C64};
use crate::{Error, Result};

use super::{ChannelKind, ChannelParams, InputStateParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Form {
    Printed,
    #[default]
    Corrected,
}

/// Number of symmetric angle functions in the AD numerator.
pub const AD_BASIS_LEN: usize = 6;
/// Highest power of η in the AD numerator, plus one.
pub const AD_DEGREE: usize = 6;

pub const AD_BASIS_NAMES: [&str; AD_BASIS_LEN] =
    ["1", "cos2θ1+cos2θ2", "cos4θ1+cos4θ2", "cos2θ1·cos4θ2+cos4θ1·cos2θ2", "cos2θ1·cos2θ2", "cos4θ1·cos4θ2"];

/// AD numerator as transcribed: row `b` holds the η-polynomial multiplying basis function `b`.
pub const PRINTED_AD_NUMERATOR: [[f64; AD_DEGREE]; AD_BASIS_LEN] = [
    [32.0, -164.0, 57.0, -26.0, 10.0, 0.0],
    [0.0, 34.0, -51.0, 30.0, 0.0, 0.0],
    [0.0, 0.0, 3.0, -2.0, 2.0, 0.0],
    [0.0, 0.0, 0.0, 12.0, -8.0, 8.0],
    [0.0, 0.0, 32.0, -32.0, 16.0, 0.0],
    [0.0, 0.0, 1.0, -2.0, 2.0, 0.0],
];

/// AD numerator that reproduces the pipeline.
pub const CORRECTED_AD_NUMERATOR: [[f64; AD_DEGREE]; AD_BASIS_LEN] = [
    [32.0, -64.0, 57.0, -26.0, 10.0, 0.0],
    [0.0, 32.0, -48.0, 28.0, 0.0, 0.0],
    [0.0, 0.0, 3.0, -2.0, 2.0, 0.0],
    [0.0, 0.0, 0.0, 4.0, 0.0, 0.0],
    [0.0, 0.0, 32.0, -32.0, 16.0, 0.0],
    [0.0, 0.0, 1.0, -2.0, 2.0, 0.0],
];

/// Below this magnitude a closed-form denominator is treated as vanishing.
const SINGULAR: f64 = 1e-12;
/// Step for the one-sided η limit of pipeline quantities.
pub const LIMIT_STEP: f64 = 1e-4;

/// Basis functions evaluated at `(θ1, θ2)` in the printed convention.
pub fn ad_basis(theta1: f64, theta2: f64) -> [f64; AD_BASIS_LEN] {
    let (c1, c2) = (math::cos(2.0 * theta1), math::cos(2.0 * theta2));
    let (q1, q2) = (math::cos(4.0 * theta1), math::cos(4.0 * theta2));
    [1.0, c1 + c2, q1 + q2, c1 * q2 + q1 * c2, c1 * c2, q1 * q2]
}

fn horner(coefs: &[f64], x: f64) -> f64 {
    coefs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// Coefficients of `16(2−4η+5η²−4η³+2η⁴ + η²c1c2 + η(2−3η+2η²)(c1+c2))`, printed convention.
fn ad_denominator_poly(theta1: f64, theta2: f64) -> [f64; 5] {
    let (c1, c2) = (math::cos(2.0 * theta1), math::cos(2.0 * theta2));
    let s = c1 + c2;
    [2.0, -4.0 + 2.0 * s, 5.0 + c1 * c2 - 3.0 * s, -4.0 + 2.0 * s, 2.0].map(|c| 16.0 * c)
}

pub fn ad_denominator(eta: f64, theta1: f64, theta2: f64) -> f64 {
    horner(&ad_denominator_poly(theta1, theta2), eta)
}

fn ad_numerator_poly(table: &[[f64; AD_DEGREE]; AD_BASIS_LEN], theta1: f64, theta2: f64) -> [f64; AD_DEGREE] {
    let mut out = [0.0; AD_DEGREE];
    for (b, row) in ad_basis(theta1, theta2).iter().zip(table) {
        out.iter_mut().zip(row).for_each(|(o, c)| *o += b * c);
    }
    out
}

fn pd_polys(theta1: f64, theta2: f64) -> ([f64; 5], [f64; 5]) {
    let (c1, c2) = (math::cos(2.0 * theta1), math::cos(2.0 * theta2));
    let (q1, q2) = (math::cos(4.0 * theta1), math::cos(4.0 * theta2));
    let k = 16.0 * c1 * c2 + q1 * q2 + 3.0 * (q1 + q2);
    // η²(2−4η+3η²) = 2η² − 4η³ + 3η⁴
    let q = [0.0, 0.0, 2.0, -4.0, 3.0];
    let mut num = [32.0, -128.0, 210.0, -164.0, 59.0];
    let mut den = [2.0, -8.0, 14.0, -12.0, 5.0];
    for i in 0..5 {
        num[i] += q[i] * k;
        den[i] = 16.0 * (den[i] + q[i] * c1 * c2);
    }
    (num, den)
}

/// Taylor coefficients of the polynomial `coefs` about `x0`.
fn shift(coefs: &[f64], x0: f64) -> Vec<f64> {
    let mut out = coefs.to_vec();
    // Repeated synthetic division by (x − x0).
    let n = out.len();
    for k in 0..n {
        for j in (k..n - 1).rev() {
            out[j] += x0 * out[j + 1];
        }
    }
    out
}

/// `num(η)/den(η)`; where the denominator vanishes, the ratio of the lowest
/// non-vanishing Taylor coefficients about η.
fn rational(num: &[f64], den: &[f64], eta: f64) -> f64 {
    let d = horner(den, eta);
    if math::abs(d) >= SINGULAR {
        return horner(num, eta) / d;
    }
    let (n, d) = (shift(num, eta), shift(den, eta));
    let scale = den.iter().fold(0.0f64, |m, c| m.max(math::abs(*c)));
    match d.iter().position(|c| math::abs(*c) > SINGULAR * scale.max(1.0)) {
        Some(k) => n.get(k).copied().unwrap_or(0.0) / d[k],
        None => f64::NAN,
    }
}

/// Three-point extrapolation of `lim_{x→η⁻} f(x)`, exact for quadratics.
pub fn limit_from_below(eta: f64, f: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    let h = LIMIT_STEP;
    Ok(3.0 * f(eta - h)? - 3.0 * f(eta - 2.0 * h)? + f(eta - 3.0 * h)?)
}

fn ad_fidelity_with(table: &[[f64; AD_DEGREE]; AD_BASIS_LEN], eta: f64, theta1: f64, theta2: f64) -> f64 {
    rational(&ad_numerator_poly(table, theta1, theta2), &ad_denominator_poly(theta1, theta2), eta)
}

fn pd_fidelity(eta: f64, theta1: f64, theta2: f64) -> f64 {
    let (num, den) = pd_polys(theta1, theta2);
    rational(&num, &den, eta)
}

/// The printed closed-form fidelities, evaluated literally at the given angles.
pub fn analytic_fidelity(channel: ChannelParams, input: InputStateParams) -> f64 {
    match channel.kind {
        ChannelKind::AmplitudeDamping => {
            ad_fidelity_with(&PRINTED_AD_NUMERATOR, channel.eta, input.theta1, input.theta2)
        }
        ChannelKind::PhaseDamping => pd_fidelity(channel.eta, input.theta1, input.theta2),
    }
}

/// Closed-form fidelities that agree with the pipeline (sine-on-|0⟩ convention).
pub fn corrected_fidelity(channel: ChannelParams, input: InputStateParams) -> f64 {
    let p = input.complemented();
    match channel.kind {
        ChannelKind::AmplitudeDamping => ad_fidelity_with(&CORRECTED_AD_NUMERATOR, channel.eta, p.theta1, p.theta2),
        ChannelKind::PhaseDamping => pd_fidelity(channel.eta, p.theta1, p.theta2),
    }
}

pub fn fidelity_in_form(form: Form, channel: ChannelParams, input: InputStateParams) -> f64 {
    match form {
        Form::Printed => analytic_fidelity(channel, input),
        Form::Corrected => corrected_fidelity(channel, input),
    }
}

/// Upper triangle filled row by row; the lower triangle is its conjugate.
fn hermitian(upper: [[C64; 4]; 4]) -> DensityMatrix {
    let mut entries = vec![C64::new(0.0, 0.0); 16];
    for r in 0..4 {
        for c in r..4 {
            entries[r * 4 + c] = upper[r][c];
            entries[c * 4 + r] = upper[r][c].conj();
        }
    }
    entries.iter_mut().step_by(5).for_each(|d| d.im = 0.0);
    DensityMatrix::from_parts(2, entries)
}

struct Trig {
    c1: f64,
    s1: f64,
    c2: f64,
    s2: f64,
    d1: f64,
    d2: f64,
    cos2_1: f64,
    cos2_2: f64,
}

impl Trig {
    fn new(input: &InputStateParams) -> Self {
        Self {
            c1: math::cos(input.theta1),
            s1: math::sin(input.theta1),
            c2: math::cos(input.theta2),
            s2: math::sin(input.theta2),
            d1: math::sin(2.0 * input.theta1),
            d2: math::sin(2.0 * input.theta2),
            cos2_1: math::cos(2.0 * input.theta1),
            cos2_2: math::cos(2.0 * input.theta2),
        }
    }
}

fn phase(angle: f64) -> C64 {
    C64::from_polar(1.0, -angle)
}

fn ad_matrix(eta: f64, input: &InputStateParams, repaired_corner: bool) -> Result<DensityMatrix> {
    if eta >= 1.0 {
        return Err(Error::SingularParameterization);
    }
    let t = Trig::new(input);
    let d = 1.0 - eta;
    let e2 = eta * eta;
    let corner = if repaired_corner { 1.0 + e2 * e2 } else { math::powi(1.0 + eta, 4) };
    let na = 4.0 * math::powi(d, 4)
        / (2.0
            * (horner(&[2.0, -4.0, 5.0, -4.0, 2.0], eta)
                + eta * horner(&[2.0, -3.0, 2.0], eta) * (t.cos2_1 + t.cos2_2)
                + e2 * t.cos2_1 * t.cos2_2));
    let (p1, p2) = (input.phi1, input.phi2);
    let re = |x: f64| C64::new(na * x, 0.0);
    let ph = |x: f64, a: f64| phase(a) * (na * x);
    let z = C64::new(0.0, 0.0);
    let c1s = t.c1 * t.c1;
    let c2s = t.c2 * t.c2;
    let s1s = t.s1 * t.s1;
    let s2s = t.s2 * t.s2;
    Ok(hermitian([
        [
            re(corner * c1s * c2s / math::powi(d, 4)),
            ph(c1s * t.d2 / (2.0 * math::powi(d, 3)), p2),
            ph(t.d1 * c2s / (2.0 * math::powi(d, 3)), p1),
            ph(t.d1 * t.d2 / (4.0 * d * d), input.phi_sum()),
        ],
        [
            z,
            re((c1s * s2s + e2 * s1s * c2s) / (d * d)),
            ph(t.d1 * t.d2 / (4.0 * d * d), input.phi_diff()),
            ph(t.d1 * s2s / (2.0 * d), p1),
        ],
        [z, z, re((e2 * c1s * s2s + s1s * c2s) / (d * d)), ph(s1s * t.d2 / (2.0 * d), p2)],
        [z, z, z, re(s1s * s2s)],
    ]))
}

fn pd_matrix(eta: f64, input: &InputStateParams, repaired_normalizer: bool) -> DensityMatrix {
    let t = Trig::new(input);
    let e2 = eta * eta;
    let cross = if repaired_normalizer { 1.0 } else { 2.0 } * e2 * horner(&[2.0, -4.0, 3.0], eta);
    let bracket = 2.0 * (horner(&[2.0, -8.0, 14.0, -12.0, 5.0], eta) + cross * t.cos2_1 * t.cos2_2);
    let np = math::powi(1.0 - eta, 4) / bracket;
    // P11·N_P with the (1−η)^4 factors cancelled, finite at η = 1.
    let p11_np = 4.0 * math::powi(horner(&[1.0, -2.0, 2.0], eta), 2) / bracket;
    let (p1, p2) = (input.phi1, input.phi2);
    let re = |x: f64| C64::new(x, 0.0);
    let ph = |x: f64, a: f64| phase(a) * (np * x);
    let z = C64::new(0.0, 0.0);
    let c1s = t.c1 * t.c1;
    let c2s = t.c2 * t.c2;
    let s1s = t.s1 * t.s1;
    let s2s = t.s2 * t.s2;
    hermitian([
        [re(p11_np * c1s * c2s), ph(2.0 * c1s * t.d2, p2), ph(2.0 * t.d1 * c2s, p1), ph(t.d1 * t.d2, input.phi_sum())],
        [z, re(np * 4.0 * c1s * s2s), ph(t.d1 * t.d2, input.phi_diff()), ph(2.0 * t.d1 * s2s, p1)],
        [z, z, re(np * 4.0 * s1s * c2s), ph(2.0 * s1s * t.d2, p2)],
        [z, z, z, re(p11_np * s1s * s2s)],
    ])
}

/// The printed output matrices, transcribed literally. The AD form has
/// `(1−η)` denominators and is refused at `η = 1`.
pub fn analytic_rho_out(channel: ChannelParams, input: InputStateParams) -> Result<DensityMatrix> {
    match channel.kind {
        ChannelKind::AmplitudeDamping => ad_matrix(channel.eta, &input, false),
        ChannelKind::PhaseDamping => Ok(pd_matrix(channel.eta, &input, false)),
    }
}

/// Output matrices with the `(0,0)` AD entry and the PD normalizer repaired,
/// evaluated in the pipeline's convention.
pub fn corrected_rho_out(channel: ChannelParams, input: InputStateParams) -> Result<DensityMatrix> {
    let p = input.complemented();
    match channel.kind {
        ChannelKind::AmplitudeDamping => ad_matrix(channel.eta, &p, true),
        ChannelKind::PhaseDamping => Ok(pd_matrix(channel.eta, &p, true)),
    }
}

pub fn rho_in_form(form: Form, channel: ChannelParams, input: InputStateParams) -> Result<DensityMatrix> {
    match form {
        Form::Printed => analytic_rho_out(channel, input),
        Form::Corrected => corrected_rho_out(channel, input),
    }
}
