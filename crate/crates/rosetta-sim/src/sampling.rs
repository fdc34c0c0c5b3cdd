//! Monte Carlo measurement harness: Born-rule sampling of detection
//! outcomes, repeated-trial phase estimation by fringe inversion, and the
//! empirical recovery of the shot-noise (1/√N) and Heisenberg (1/N)
//! scaling laws.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::estimation::ProbeState;
use crate::fock::{apply_phase_shift, mach_zehnder, make_fock, NORM_TOLERANCE};
use crate::numeric::{linear_fit, splitmix64};
use crate::protocols::{make_named_state, NamedState};
use crate::qubits::{apply_gate, Gate, QubitRegister};
use crate::{Error, Result};

/// Minimum trials per repetition for scaling runs; keeps the arccos
/// inversion in its linear regime so the log-log fit sees the true slope.
pub const SCALING_MIN_TRIALS: u32 = 100;

/// Phase-estimation scheme families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeKind {
    /// N independent Ramsey qubits, one binary outcome each per trial.
    SeparableQubits,
    /// |N,0⟩ through a Mach–Zehnder, exit photon counts per trial.
    SingleFockMz,
    /// N-photon NOON state, one binary Aₙ outcome per trial.
    Noon,
}

impl SchemeKind {
    /// Maximum-fringe-slope phase this scheme is normally operated at.
    pub fn operating_phase(self, photons: u32) -> f64 {
        match self {
            SchemeKind::Noon => std::f64::consts::FRAC_PI_2 / f64::from(photons),
            _ => std::f64::consts::FRAC_PI_2,
        }
    }

    pub fn with_photons(self, photons: u32) -> Scheme {
        Scheme { kind: self, photons }
    }

    const fn tag(self) -> u64 {
        match self {
            SchemeKind::SeparableQubits => 1,
            SchemeKind::SingleFockMz => 2,
            SchemeKind::Noon => 3,
        }
    }
}

/// A scheme family at a definite photon number.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Scheme {
    pub kind: SchemeKind,
    pub photons: u32,
}

impl Scheme {
    /// Upper edge of the phase branch the arccos inversion can resolve.
    fn branch_upper(self) -> f64 {
        match self.kind {
            SchemeKind::Noon => std::f64::consts::PI / f64::from(self.photons),
            _ => std::f64::consts::PI,
        }
    }
}

/// One phase-estimation run: `repetitions` independent estimates, each
/// built from `trials` measured probes at the fixed true phase.
#[derive(Debug, Clone, Copy)]
pub struct TrialConfig {
    pub true_phi: f64,
    pub trials: u32,
    pub repetitions: u32,
    /// Root seed; together with (scheme, photons, repetition, trial) it
    /// fixes every random stream.
    pub seed: u64,
    pub scheme: Scheme,
}

/// Measurement bases the sampler understands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measurement {
    /// Computational basis of a qubit register.
    QubitComputational,
    /// Photon-number-resolving detectors on every mode.
    ModeCounts,
    /// Binary ±1 outcome of the Aₙ parity-type observable.
    AnBinary,
}

/// A single sampled detection event.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    BasisIndex(usize),
    Counts(Vec<u32>),
    Sign(i8),
}

/// Aggregate of one estimation run.
#[derive(Debug, Clone, Copy)]
pub struct PhaseEstimate {
    /// Mean of the per-repetition estimates.
    pub phi_hat: f64,
    /// Sample standard deviation of the per-repetition estimates.
    pub delta_phi: f64,
    /// Fraction of repetitions whose sample mean had to be clamped into
    /// [−1, 1] before inversion; ≫ 0 flags a misconfigured operating point.
    pub clamped_fraction: f64,
}

/// Empirical Δφ(N) with its fitted power law.
#[derive(Debug, Clone)]
pub struct ScalingResult {
    pub n_values: Vec<u32>,
    pub delta_phi_empirical: Vec<f64>,
    /// Least-squares slope on (ln N, ln Δφ).
    pub fitted_exponent: f64,
    pub exponent_stderr: f64,
}

/// Draw one detection outcome from a normalized state.
///
/// Deterministic given the rng stream position: the unit draw is compared
/// against the cumulative Born weights in the state's fixed storage order.
pub fn sample_outcome(
    state: &ProbeState,
    measurement: Measurement,
    rng: &mut impl Rng,
) -> Result<Outcome> {
    let norm_sqr = match state {
        ProbeState::Fock(s) => s.norm_sqr(),
        ProbeState::Qubit(r) => r.norm_sqr(),
    };
    if (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::NotNormalized { norm_sqr });
    }
    match (measurement, state) {
        (Measurement::QubitComputational, ProbeState::Qubit(reg)) => {
            let target = rng.gen::<f64>() * norm_sqr;
            let amplitudes = reg.amplitudes();
            let mut cumulative = 0.0;
            for (index, amp) in amplitudes.iter().enumerate() {
                cumulative += amp.norm_sqr();
                if cumulative > target {
                    return Ok(Outcome::BasisIndex(index));
                }
            }
            Ok(Outcome::BasisIndex(amplitudes.len() - 1))
        }
        (Measurement::ModeCounts, ProbeState::Fock(state)) => {
            let target = rng.gen::<f64>() * norm_sqr;
            let mut cumulative = 0.0;
            let mut last = None;
            for (occ, amp) in state.iter() {
                cumulative += amp.norm_sqr();
                if cumulative > target {
                    return Ok(Outcome::Counts(occ.counts().to_vec()));
                }
                last = Some(occ);
            }
            Ok(Outcome::Counts(
                last.expect("normalized state has at least one ket").counts().to_vec(),
            ))
        }
        (Measurement::AnBinary, _) => {
            let (first, second) = an_amplitudes(state)?;
            let leak = norm_sqr - first.norm_sqr() - second.norm_sqr();
            if leak > 1e-10 {
                return Err(Error::SubspaceLeakage { weight: leak });
            }
            // P(+1) = |⟨+|ψ⟩|² for the eigenvector (|first⟩+|second⟩)/√2.
            let p_plus = 0.5 * (1.0 + 2.0 * (first.conj() * second).re);
            Ok(if rng.gen::<f64>() < p_plus { Outcome::Sign(1) } else { Outcome::Sign(-1) })
        }
        _ => Err(Error::ObservableStateMismatch),
    }
}

fn an_amplitudes(state: &ProbeState) -> Result<(Complex64, Complex64)> {
    match state {
        ProbeState::Fock(s) => {
            if s.modes() != 2 {
                return Err(Error::NotTwoMode { modes: s.modes() });
            }
            let n = s.total_photons();
            Ok((s.amplitude(&[n, 0]), s.amplitude(&[0, n])))
        }
        ProbeState::Qubit(r) => {
            let amplitudes = r.amplitudes();
            Ok((amplitudes[0], amplitudes[amplitudes.len() - 1]))
        }
    }
}

/// Estimate the phase by fringe inversion over repeated trials.
///
/// Each repetition draws `trials` probe measurements, averages the fringe
/// statistic (whose expectation is cos φ, or cos Nφ for NOON), clamps the
/// mean into [−1, 1], and inverts through arccos (dividing by N for NOON).
/// `delta_phi` is the spread of those estimates, i.e. the empirical
/// precision of an estimate built from `trials` probes.
pub fn estimate_phase(config: &TrialConfig) -> Result<PhaseEstimate> {
    let scheme = config.scheme;
    if scheme.photons == 0 {
        return Err(Error::PhotonNumberTooSmall { photons: 0, min: 1 });
    }
    if config.trials == 0 {
        return Err(Error::ZeroTrials);
    }
    if config.repetitions < 2 {
        return Err(Error::TooFewRepetitions { got: config.repetitions, min: 2 });
    }
    let upper = scheme.branch_upper();
    if !(config.true_phi > 0.0 && config.true_phi < upper) {
        return Err(Error::PhaseOutsideInvertibleBranch { phi: config.true_phi, upper });
    }

    let (probe, measurement) = prepare_probe(scheme, config.true_phi)?;
    let scale = match scheme.kind {
        SchemeKind::Noon => f64::from(scheme.photons),
        _ => 1.0,
    };
    let mut estimates = Vec::with_capacity(config.repetitions as usize);
    let mut clamped = 0u32;
    for repetition in 0..config.repetitions {
        let mut statistic_sum = 0.0;
        for trial in 0..config.trials {
            let mut rng = trial_stream(config.seed, scheme, repetition, trial);
            statistic_sum += trial_statistic(scheme, &probe, measurement, &mut rng)?;
        }
        let mut mean = statistic_sum / f64::from(config.trials);
        if !(-1.0..=1.0).contains(&mean) {
            clamped += 1;
            mean = mean.clamp(-1.0, 1.0);
        }
        estimates.push(mean.acos() / scale);
    }

    let repetitions = f64::from(config.repetitions);
    let phi_hat = estimates.iter().sum::<f64>() / repetitions;
    let spread_sqr = estimates.iter().map(|e| (e - phi_hat).powi(2)).sum::<f64>()
        / (repetitions - 1.0);
    Ok(PhaseEstimate {
        phi_hat,
        delta_phi: spread_sqr.sqrt(),
        clamped_fraction: f64::from(clamped) / repetitions,
    })
}

/// Run `estimate_phase` at each scheme's standard operating point across a
/// range of photon numbers and fit ln Δφ against ln N.
pub fn scaling_experiment(
    kind: SchemeKind,
    n_values: &[u32],
    trials: u32,
    repetitions: u32,
    seed: u64,
) -> Result<ScalingResult> {
    if n_values.len() < 4 {
        return Err(Error::InsufficientScalingRange);
    }
    let min = *n_values.iter().min().expect("nonempty");
    let max = *n_values.iter().max().expect("nonempty");
    if min == 0 {
        return Err(Error::PhotonNumberTooSmall { photons: 0, min: 1 });
    }
    if u64::from(max) < 10 * u64::from(min) {
        return Err(Error::InsufficientScalingRange);
    }
    if trials < SCALING_MIN_TRIALS {
        return Err(Error::TooFewTrials { got: trials, min: SCALING_MIN_TRIALS });
    }

    let mut delta_phi_empirical = Vec::with_capacity(n_values.len());
    for &photons in n_values {
        let config = TrialConfig {
            true_phi: kind.operating_phase(photons),
            trials,
            repetitions,
            seed,
            scheme: kind.with_photons(photons),
        };
        let estimate = estimate_phase(&config)?;
        if estimate.delta_phi <= 0.0 {
            return Err(Error::DegenerateEstimates);
        }
        delta_phi_empirical.push(estimate.delta_phi);
    }

    let x: Vec<f64> = n_values.iter().map(|&n| f64::from(n).ln()).collect();
    let y: Vec<f64> = delta_phi_empirical.iter().map(|d| d.ln()).collect();
    let (fitted_exponent, _, exponent_stderr) = linear_fit(&x, &y);
    Ok(ScalingResult {
        n_values: n_values.to_vec(),
        delta_phi_empirical,
        fitted_exponent,
        exponent_stderr,
    })
}

/// Simulate the scheme's measured probe once; sampling reuses it per trial.
fn prepare_probe(scheme: Scheme, phi: f64) -> Result<(ProbeState, Measurement)> {
    let n = scheme.photons;
    match scheme.kind {
        SchemeKind::SeparableQubits => {
            // One Ramsey qubit; the N photons of a trial are independent
            // draws from this same single-qubit state.
            let mut reg = QubitRegister::new(1)?;
            for gate in [Gate::Hadamard(0), Gate::Phase(0, phi), Gate::Hadamard(0)] {
                reg = apply_gate(&reg, gate)?;
            }
            Ok((reg.into(), Measurement::QubitComputational))
        }
        SchemeKind::SingleFockMz => {
            let exit = mach_zehnder(&make_fock(&[n, 0])?, phi)?;
            Ok((exit.into(), Measurement::ModeCounts))
        }
        SchemeKind::Noon => {
            let probe = apply_phase_shift(&make_named_state(NamedState::Noon, n)?, 0, phi)?;
            Ok((probe.into(), Measurement::AnBinary))
        }
    }
}

/// Fringe statistic of one trial; its expectation is cos φ (cos Nφ for NOON).
fn trial_statistic(
    scheme: Scheme,
    probe: &ProbeState,
    measurement: Measurement,
    rng: &mut ChaCha8Rng,
) -> Result<f64> {
    let n = scheme.photons;
    match scheme.kind {
        SchemeKind::SeparableQubits => {
            let mut sum = 0.0;
            for _ in 0..n {
                match sample_outcome(probe, measurement, rng)? {
                    Outcome::BasisIndex(index) => sum += 1.0 - 2.0 * index as f64,
                    _ => unreachable!("computational sampling yields basis indices"),
                }
            }
            Ok(sum / f64::from(n))
        }
        SchemeKind::SingleFockMz => match sample_outcome(probe, measurement, rng)? {
            Outcome::Counts(counts) => {
                Ok((f64::from(counts[1]) - f64::from(counts[0])) / f64::from(n))
            }
            _ => unreachable!("mode-count sampling yields occupation lists"),
        },
        SchemeKind::Noon => match sample_outcome(probe, measurement, rng)? {
            Outcome::Sign(sign) => Ok(f64::from(sign)),
            _ => unreachable!("binary sampling yields signs"),
        },
    }
}

/// Counter-based per-trial stream: reproducible regardless of execution
/// order, so repetitions could be farmed out in parallel.
fn trial_stream(seed: u64, scheme: Scheme, repetition: u32, trial: u32) -> ChaCha8Rng {
    let mut key = splitmix64(seed ^ scheme.kind.tag());
    key = splitmix64(key ^ u64::from(scheme.photons));
    key = splitmix64(key ^ u64::from(repetition));
    key = splitmix64(key ^ u64::from(trial));
    ChaCha8Rng::seed_from_u64(key)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocols::hom_entangle;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn born_fractions_match_amplitudes() {
        let reg = apply_gate(&QubitRegister::new(1).unwrap(), Gate::Hadamard(0)).unwrap();
        let probe = ProbeState::from(reg);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let draws = 100_000;
        let mut ones = 0u32;
        for _ in 0..draws {
            if let Outcome::BasisIndex(1) =
                sample_outcome(&probe, Measurement::QubitComputational, &mut rng).unwrap()
            {
                ones += 1;
            }
        }
        let fraction = f64::from(ones) / f64::from(draws);
        assert!((fraction - 0.5).abs() < 0.01, "fraction {fraction}");
    }

    #[test]
    fn hom_output_never_coincides() {
        let probe = ProbeState::from(hom_entangle());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10_000 {
            match sample_outcome(&probe, Measurement::ModeCounts, &mut rng).unwrap() {
                Outcome::Counts(counts) => {
                    assert!(counts == [2, 0] || counts == [0, 2], "counts {counts:?}")
                }
                _ => unreachable!(),
            }
        }
    }

    #[test]
    fn noon_binary_outcomes_match_born_probabilities() {
        let n = 3u32;
        let phi = 0.4;
        let state =
            apply_phase_shift(&make_named_state(NamedState::Noon, n).unwrap(), 0, phi).unwrap();
        let probe = ProbeState::from(state);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let draws = 100_000;
        let mut plus = 0u32;
        for _ in 0..draws {
            if let Outcome::Sign(1) =
                sample_outcome(&probe, Measurement::AnBinary, &mut rng).unwrap()
            {
                plus += 1;
            }
        }
        let p = (1.0 + (f64::from(n) * phi).cos()) / 2.0;
        let three_sigma = 3.0 * (p * (1.0 - p) / f64::from(draws)).sqrt();
        let fraction = f64::from(plus) / f64::from(draws);
        assert!((fraction - p).abs() < three_sigma, "fraction {fraction} vs {p}");
    }

    #[test]
    fn sampler_rejects_mismatched_and_leaky_states() {
        let qubit = ProbeState::from(QubitRegister::new(1).unwrap());
        assert!(matches!(
            sample_outcome(&qubit, Measurement::ModeCounts, &mut ChaCha8Rng::seed_from_u64(0)),
            Err(Error::ObservableStateMismatch)
        ));
        // |1,1⟩ has no weight on the Aₙ subspace at all.
        let fock = ProbeState::from(make_fock(&[1, 1]).unwrap());
        assert!(matches!(
            sample_outcome(&fock, Measurement::AnBinary, &mut ChaCha8Rng::seed_from_u64(0)),
            Err(Error::SubspaceLeakage { .. })
        ));
    }

    #[test]
    fn separable_qubits_reach_shot_noise() {
        let config = TrialConfig {
            true_phi: FRAC_PI_2,
            trials: 1,
            repetitions: 10_000,
            seed: 11,
            scheme: SchemeKind::SeparableQubits.with_photons(100),
        };
        let estimate = estimate_phase(&config).unwrap();
        assert!((estimate.delta_phi - 0.1).abs() / 0.1 < 0.15, "{}", estimate.delta_phi);
        assert!((estimate.phi_hat - FRAC_PI_2).abs() < 0.01);
        assert!(estimate.clamped_fraction < 0.01);
    }

    #[test]
    fn single_fock_interferometer_reaches_shot_noise() {
        let n = 16u32;
        let config = TrialConfig {
            true_phi: FRAC_PI_2,
            trials: 1,
            repetitions: 10_000,
            seed: 13,
            scheme: SchemeKind::SingleFockMz.with_photons(n),
        };
        let estimate = estimate_phase(&config).unwrap();
        let shot_noise = 1.0 / f64::from(n).sqrt();
        assert!(
            (estimate.delta_phi - shot_noise).abs() / shot_noise < 0.15,
            "{}",
            estimate.delta_phi
        );
    }

    #[test]
    fn noon_states_reach_heisenberg_per_probe_sensitivity() {
        // A lone Aₙ outcome is ±1, so a trials=1 inversion lands on {0, π/N}
        // and its spread is π/(2N), not 1/N. Averaging 100 trials puts the
        // estimator in its linear regime; the per-probe-use sensitivity
        // √trials·Δφ then shows the Heisenberg value 1/N.
        let n = 10u32;
        let trials = 100u32;
        let config = TrialConfig {
            true_phi: PI / 20.0,
            trials,
            repetitions: 10_000,
            seed: 17,
            scheme: SchemeKind::Noon.with_photons(n),
        };
        let estimate = estimate_phase(&config).unwrap();
        let per_probe = estimate.delta_phi * f64::from(trials).sqrt();
        assert!((per_probe - 0.1).abs() / 0.1 < 0.15, "{per_probe}");
        assert!(estimate.clamped_fraction < 0.01);
    }

    #[test]
    fn coarse_noon_inversion_inflates_the_spread() {
        // The trials=1 two-point distribution {0, π/N} has spread π/(2N):
        // the π/2 inflation over 1/N that the linear regime removes.
        let n = 10u32;
        let config = TrialConfig {
            true_phi: PI / 20.0,
            trials: 1,
            repetitions: 10_000,
            seed: 19,
            scheme: SchemeKind::Noon.with_photons(n),
        };
        let estimate = estimate_phase(&config).unwrap();
        let two_point = PI / (2.0 * f64::from(n));
        assert!((estimate.delta_phi - two_point).abs() / two_point < 0.03);
    }

    #[test]
    fn estimator_error_contracts_with_trials() {
        let run = |trials: u32| {
            estimate_phase(&TrialConfig {
                true_phi: FRAC_PI_2,
                trials,
                repetitions: 2_000,
                seed: 29,
                scheme: SchemeKind::SeparableQubits.with_photons(4),
            })
            .unwrap()
            .delta_phi
        };
        let ratio = run(100) / run(400);
        assert!((1.8..2.2).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn scaling_fits_recover_both_laws() {
        let cases = [
            (SchemeKind::SeparableQubits, vec![2u32, 4, 10, 20], -0.5),
            (SchemeKind::SingleFockMz, vec![2, 4, 10, 20], -0.5),
            (SchemeKind::Noon, vec![2, 4, 8, 32], -1.0),
        ];
        for (kind, n_values, expected) in cases {
            let result = scaling_experiment(kind, &n_values, 100, 400, 23).unwrap();
            assert!(
                (result.fitted_exponent - expected).abs() < 0.1,
                "{kind:?}: {}",
                result.fitted_exponent
            );
            assert!(result.exponent_stderr > 0.0 && result.exponent_stderr < 0.1);
            assert!(result.delta_phi_empirical.iter().all(|d| *d > 0.0));
            let first = result.delta_phi_empirical[0];
            let last = *result.delta_phi_empirical.last().unwrap();
            assert!(last < first);
        }
    }

    #[test]
    fn identical_seeds_reproduce_results_bit_for_bit() {
        let run = || scaling_experiment(SchemeKind::Noon, &[2, 4, 8, 32], 100, 120, 99).unwrap();
        let (a, b) = (run(), run());
        assert_eq!(a.fitted_exponent.to_bits(), b.fitted_exponent.to_bits());
        assert_eq!(a.exponent_stderr.to_bits(), b.exponent_stderr.to_bits());
        for (da, db) in a.delta_phi_empirical.iter().zip(&b.delta_phi_empirical) {
            assert_eq!(da.to_bits(), db.to_bits());
        }

        let config = TrialConfig {
            true_phi: 0.9,
            trials: 3,
            repetitions: 50,
            seed: 41,
            scheme: SchemeKind::SingleFockMz.with_photons(5),
        };
        let (ea, eb) = (estimate_phase(&config).unwrap(), estimate_phase(&config).unwrap());
        assert_eq!(ea.phi_hat.to_bits(), eb.phi_hat.to_bits());
        assert_eq!(ea.delta_phi.to_bits(), eb.delta_phi.to_bits());
    }

    #[test]
    fn estimation_rejects_invalid_configs() {
        let base = TrialConfig {
            true_phi: FRAC_PI_2,
            trials: 10,
            repetitions: 100,
            seed: 0,
            scheme: SchemeKind::SeparableQubits.with_photons(4),
        };
        assert!(matches!(
            estimate_phase(&TrialConfig { trials: 0, ..base }),
            Err(Error::ZeroTrials)
        ));
        assert!(matches!(
            estimate_phase(&TrialConfig { repetitions: 1, ..base }),
            Err(Error::TooFewRepetitions { .. })
        ));
        assert!(matches!(
            estimate_phase(&TrialConfig { true_phi: 0.0, ..base }),
            Err(Error::PhaseOutsideInvertibleBranch { .. })
        ));
        assert!(matches!(
            estimate_phase(&TrialConfig {
                scheme: SchemeKind::SeparableQubits.with_photons(0),
                ..base
            }),
            Err(Error::PhotonNumberTooSmall { .. })
        ));
        // Nφ must stay inside (0, π) for the NOON inversion.
        assert!(matches!(
            estimate_phase(&TrialConfig {
                true_phi: 0.4,
                scheme: SchemeKind::Noon.with_photons(10),
                ..base
            }),
            Err(Error::PhaseOutsideInvertibleBranch { .. })
        ));
    }

    #[test]
    fn scaling_rejects_degenerate_ranges() {
        let kind = SchemeKind::SeparableQubits;
        assert!(matches!(
            scaling_experiment(kind, &[8], 100, 100, 0),
            Err(Error::InsufficientScalingRange)
        ));
        // Four octave-spaced values still span less than a decade.
        assert!(matches!(
            scaling_experiment(kind, &[2, 4, 8, 16], 100, 100, 0),
            Err(Error::InsufficientScalingRange)
        ));
        assert!(matches!(
            scaling_experiment(kind, &[2, 4, 10, 20], 50, 100, 0),
            Err(Error::TooFewTrials { got: 50, min: 100 })
        ));
        assert!(matches!(
            scaling_experiment(kind, &[0, 4, 10, 20], 100, 100, 0),
            Err(Error::PhotonNumberTooSmall { .. })
        ));
    }
}
