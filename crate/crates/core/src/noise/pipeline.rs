use serde::{Deserialize, Serialize};

use crate::bell::{bell_state, correction_for, BellKind, Dibit};
use crate::qcore::{tensor, DensityMatrix, Operator, QuantumState, ZERO_BRANCH};
use crate::{Error, Result};

use super::{ChannelParams, InputStateParams};

// Register layout after rearrangement.
const S1: usize = 0;
const S1P: usize = 1;
const R1: usize = 2;
const S2: usize = 3;
const S2P: usize = 4;
const R2: usize = 5;

/// How channel noise acts on the four travelling qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseModel {
    /// One Kraus index per route: the same operator hits `S1` and `R2`, and
    /// another the pair `R1`, `S2`.
    #[default]
    Correlated,
    /// An independent Kraus index on every travelling qubit.
    Independent,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PipelineOptions {
    pub noise: NoiseModel,
    /// Bell kinds of the `(S1, R1)` and `(S2, R2)` pairs.
    pub shared: [BellKind; 2],
    /// Sender outcomes `(unknown bit, shared bit)` of the two teleportations.
    pub outcomes: [Dibit; 2],
}

impl Default for PipelineOptions {
    fn default() -> Self {
        Self { noise: NoiseModel::Correlated, shared: [BellKind::PsiPlus; 2], outcomes: [Dibit::new(false, false); 2] }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoisyOutput {
    /// Corrected two-qubit state of `(R1, R2)`.
    pub rho: DensityMatrix,
    /// Probability of the selected sender outcomes, relative to the noisy trace.
    pub probability: f64,
}

/// Noisy bidirectional teleportation with both senders reading `00` on `ψ+ψ+`.
pub fn bcst_noisy_pipeline(channel: ChannelParams, input: InputStateParams) -> Result<DensityMatrix> {
    Ok(bcst_noisy_pipeline_with(channel, input, &PipelineOptions::default())?.rho)
}

pub fn bcst_noisy_pipeline_with(
    channel: ChannelParams,
    input: InputStateParams,
    options: &PipelineOptions,
) -> Result<NoisyOutput> {
    run(channel, input, options, ZERO_BRANCH)
}

/// `floor` is the selection probability below which the branch counts as empty.
fn run(channel: ChannelParams, input: InputStateParams, options: &PipelineOptions, floor: f64) -> Result<NoisyOutput> {
    let kraus = channel.kraus()?;
    // Natural order S1 R1 S2 R2 S1' S2', moved to S1 S1' R1 S2 S2' R2.
    let psi = tensor(&[bell_state(options.shared[0]), bell_state(options.shared[1]), input.zeta1(), input.zeta2()])?
        .permute_qubits(&[S1, R1, S2, R2, S1P, S2P])?;
    let rho = psi.to_density();

    let noisy = match options.noise {
        NoiseModel::Correlated => rho.apply_correlated_kraus(&kraus, &[&[S1, R2], &[R1, S2]])?,
        NoiseModel::Independent => rho.apply_correlated_kraus(&kraus, &[&[S1], &[R1], &[S2], &[R2]])?,
    };

    let (h, cnot) = (Operator::hadamard(), Operator::cnot());
    let rotated = noisy
        .conjugate_by(&cnot, &[S1P, S1])?
        .conjugate_by(&h, &[S1P])?
        .conjugate_by(&cnot, &[S2P, S2])?
        .conjugate_by(&h, &[S2P])?;

    let [m1, m2] = options.outcomes;
    let selected = rotated.project(&[S1P, S1], m1.index())?.project(&[S2P, S2], m2.index())?;
    let total = rotated.trace();
    let kept = selected.trace();
    if total <= 0.0 || kept <= floor * total {
        return Err(Error::ZeroProbability);
    }
    let reduced = selected.scaled(1.0 / kept).partial_trace(&[R1, R2])?;

    let fix1 = correction_for(m1, options.shared[0]).matrix();
    let fix2 = correction_for(m2, options.shared[1]).matrix();
    let rho = reduced.conjugate_by(&fix1, &[0])?.conjugate_by(&fix2, &[1])?;
    Ok(NoisyOutput { rho, probability: kept / total })
}

/// `⟨T|ρ_out|T⟩` from the pipeline with default options.
pub fn pipeline_fidelity(channel: ChannelParams, input: InputStateParams) -> Result<f64> {
    bcst_noisy_pipeline(channel, input)?.fidelity_with_pure(&input.target())
}

/// Pipeline fidelity for η approached from below. Selection probabilities
/// vanish like a power of `1 − η` near a zero-probability point, so only an
/// exactly empty branch is refused.
pub(crate) fn fidelity_near(channel: ChannelParams, input: InputStateParams) -> Result<f64> {
    run(channel, input, &PipelineOptions::default(), 0.0)?.rho.fidelity_with_pure(&input.target())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::ChannelKind;
    use core::f64::consts::{FRAC_PI_3, FRAC_PI_4, FRAC_PI_6};

    fn input() -> InputStateParams {
        InputStateParams::new(0.4, 1.1, 0.7, -0.3).unwrap()
    }

    #[test]
    fn noiseless_output_is_target() {
        for kind in [ChannelKind::AmplitudeDamping, ChannelKind::PhaseDamping] {
            let rho = bcst_noisy_pipeline(ChannelParams::new(kind, 0.0).unwrap(), input()).unwrap();
            let want = input().target().to_density();
            assert!(rho.distance(&want) < 1e-12);
        }
    }

    #[test]
    fn every_outcome_and_preparation_is_exact_without_noise() {
        let ch = ChannelParams::ad(0.0).unwrap();
        for k1 in BellKind::ALL {
            for k2 in BellKind::ALL {
                for m1 in Dibit::ALL {
                    for m2 in Dibit::ALL {
                        let opts =
                            PipelineOptions { noise: NoiseModel::Correlated, shared: [k1, k2], outcomes: [m1, m2] };
                        let out = bcst_noisy_pipeline_with(ch, input(), &opts).unwrap();
                        let f = out.rho.fidelity_with_pure(&input().target()).unwrap();
                        assert!((f - 1.0).abs() < 1e-10, "{k1} {k2} {m1} {m2}: {f}");
                        assert!((out.probability - 1.0 / 16.0).abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn full_amplitude_damping_leaves_ground_state() {
        let p = InputStateParams::new(FRAC_PI_4, FRAC_PI_3, 0.2, 0.9).unwrap();
        let rho = bcst_noisy_pipeline(ChannelParams::ad(1.0).unwrap(), p).unwrap();
        assert!((rho.get(0, 0).re - 1.0).abs() < 1e-12);
        let f = rho.fidelity_with_pure(&p.target()).unwrap();
        let (a1, _) = p.amplitudes(1);
        let (a2, _) = p.amplitudes(2);
        assert!((f - a1 * a1 * a2 * a2).abs() < 1e-12);
    }

    #[test]
    fn full_dephasing_spot_value() {
        let p = InputStateParams::real(FRAC_PI_4, FRAC_PI_4);
        let f = pipeline_fidelity(ChannelParams::pd(1.0).unwrap(), p).unwrap();
        assert!((f - 0.25).abs() < 1e-12);
    }

    #[test]
    fn ground_state_input_under_full_damping_is_a_zero_branch() {
        let p = InputStateParams::real(0.0, FRAC_PI_6);
        let err = bcst_noisy_pipeline(ChannelParams::ad(1.0).unwrap(), p).unwrap_err();
        assert_eq!(err, Error::ZeroProbability);
    }

    #[test]
    fn independent_model_differs_from_correlated() {
        let ch = ChannelParams::pd(0.4).unwrap();
        let corr = pipeline_fidelity(ch, input()).unwrap();
        let opts = PipelineOptions { noise: NoiseModel::Independent, ..PipelineOptions::default() };
        let ind =
            bcst_noisy_pipeline_with(ch, input(), &opts).unwrap().rho.fidelity_with_pure(&input().target()).unwrap();
        assert!((corr - ind).abs() > 1e-6);
        assert!(ind > 0.0 && ind <= 1.0);
    }
}
