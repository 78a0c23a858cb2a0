//! Amplitude- and phase-damping noise on bidirectional teleportation and on
//! the dialogue round trip, with closed forms checked against a Kraus pipeline.

mod analytic;
mod channels;
mod input;
mod pipeline;
mod sweep;
mod table2;
mod verify;

pub use analytic::{
    ad_basis, ad_denominator, analytic_fidelity, analytic_rho_out, corrected_fidelity, corrected_rho_out,
    fidelity_in_form, limit_from_below, rho_in_form, Form, AD_BASIS_LEN, AD_BASIS_NAMES, AD_DEGREE,
    CORRECTED_AD_NUMERATOR, LIMIT_STEP, PRINTED_AD_NUMERATOR,
};
pub use channels::{kraus_ad, kraus_pd, ChannelKind, ChannelParams};
pub use input::InputStateParams;
pub use pipeline::{
    bcst_noisy_pipeline, bcst_noisy_pipeline_with, pipeline_fidelity, NoiseModel, NoisyOutput, PipelineOptions,
};
pub use sweep::{compare_records, default_etas, fidelity_record, numeric_fidelity, sweep, FidelityRecord, Grid};
pub use table2::{cqd_fidelity, cqd_fidelity_numeric, cqd_row, CqdEvaluation, CqdRow, Routing};
pub use verify::{
    fit_ad_numerator, verify, CheckSummary, CoefficientCorrection, Discrepancy, NumeratorFit, Point, RoutingComparison,
    VerificationReport, AGREEMENT_TOL,
};
