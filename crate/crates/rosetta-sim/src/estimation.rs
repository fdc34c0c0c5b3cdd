//! Observables, variances, and the estimation-theory phase sensitivity
//! Δφ = ΔA / |d⟨A⟩/dφ|.
//!
//! Two-mode photon states are treated in the Schwinger picture, where
//! Ĵz = (n̂_a − n̂_b)/2 measures the photon-number imbalance and Ĵ² is fixed
//! by the total photon number. The Â_N parity-like observable
//! |0…0⟩⟨1…1| + h.c. (photonic form |N,0⟩⟨0,N| + h.c.) reads out N-fold
//! fringes on GHZ and NOON states.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::fock::{FockState, OccupationVector};
use crate::numeric::pascal_rows;
use crate::qubits::{self, QubitRegister};
use crate::{Error, Result};

/// Hermitian observables measurable on probe states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Observable {
    Jx,
    Jy,
    Jz,
    /// Ĵ² = j(j+1) with j = N/2; diagonal on a definite-N two-mode state.
    Jsquared,
    /// n̂_a − n̂_b.
    NumberDiff,
    /// Total photon number across all modes.
    NumberSum,
    /// n̂ of one mode.
    ModeNumber(usize),
    /// Â_N = |N,0⟩⟨0,N| + |0,N⟩⟨N,0| (qubits: |0…0⟩⟨1…1| + h.c.).
    AnSubspace,
}

/// A probe prepared in either of the two simulation languages.
#[derive(Debug, Clone)]
pub enum ProbeState {
    Fock(FockState),
    Qubit(QubitRegister),
}

impl From<FockState> for ProbeState {
    fn from(state: FockState) -> Self {
        ProbeState::Fock(state)
    }
}

impl From<QubitRegister> for ProbeState {
    fn from(reg: QubitRegister) -> Self {
        ProbeState::Qubit(reg)
    }
}

/// Error-propagation sensitivity of an observable at one phase value.
#[derive(Debug, Clone, PartialEq)]
pub struct SensitivityReport {
    pub phi: f64,
    pub expectation: f64,
    /// ΔA = √(⟨A²⟩ − ⟨A⟩²).
    pub std_dev: f64,
    /// d⟨A⟩/dφ by central finite difference.
    pub derivative: f64,
    /// ΔA / |d⟨A⟩/dφ|; `None` when the fringe is locally flat.
    pub delta_phi: Option<f64>,
    pub divergent: bool,
}

/// Variances of Ĵz for the three canonical N-photon probe classes, plus the
/// phase uncertainty ΔQ = 1/(2ΔJz) implied by the extreme state at the
/// minimum-uncertainty equality point.
#[derive(Debug, Clone, PartialEq)]
pub struct VarianceCatalog {
    pub photons: u32,
    /// Uniform superposition of all Jz eigenstates: (N²/4 + N/2)/3.
    pub uniform: f64,
    /// (|m=N/2⟩ + |m=−N/2⟩)/√2: N²/4.
    pub extreme: f64,
    /// Binomial amplitudes: N/4.
    pub binomial: f64,
    /// 1/(2·ΔJz_extreme) = 1/N.
    pub delta_q_extreme: f64,
}

/// Both sides of the su(2) minimum-uncertainty condition ΔJx·ΔJy = |⟨Jz⟩|/2.
#[derive(Debug, Clone, PartialEq)]
pub struct IntelligentStateReport {
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
}

/// Absolute derivative below which a fringe counts as flat and Δφ diverges.
pub const DERIVATIVE_TOLERANCE: f64 = 1e-9;

/// Default finite-difference step for d⟨A⟩/dφ.
pub const DEFAULT_DERIVATIVE_STEP: f64 = 1e-5;

const LEAKAGE_TOLERANCE: f64 = 1e-10;

fn two_mode(state: &FockState) -> Result<()> {
    if state.modes() != 2 {
        return Err(Error::NotTwoMode { modes: state.modes() });
    }
    Ok(())
}

/// O|ψ⟩ as a sparse ket map; diagonal observables only rescale amplitudes.
fn apply_observable(
    state: &FockState,
    obs: Observable,
) -> Result<BTreeMap<OccupationVector, Complex64>> {
    let mut out: BTreeMap<OccupationVector, Complex64> = BTreeMap::new();
    let mut add = |occ: OccupationVector, amp: Complex64| {
        *out.entry(occ).or_insert(Complex64::ZERO) += amp;
    };
    match obs {
        Observable::Jx | Observable::Jy => {
            two_mode(state)?;
            // Jx = (â†b̂ + âb̂†)/2, Jy = −i(â†b̂ − âb̂†)/2.
            let (up, down) = match obs {
                Observable::Jx => (Complex64::new(0.5, 0.0), Complex64::new(0.5, 0.0)),
                _ => (Complex64::new(0.0, -0.5), Complex64::new(0.0, 0.5)),
            };
            for (occ, amp) in state.iter() {
                let (na, nb) = (occ.counts()[0], occ.counts()[1]);
                if nb > 0 {
                    let coeff = (((na + 1) * nb) as f64).sqrt();
                    add(
                        OccupationVector::new(vec![na + 1, nb - 1])?,
                        amp * up * coeff,
                    );
                }
                if na > 0 {
                    let coeff = ((na * (nb + 1)) as f64).sqrt();
                    add(
                        OccupationVector::new(vec![na - 1, nb + 1])?,
                        amp * down * coeff,
                    );
                }
            }
        }
        Observable::Jz => {
            two_mode(state)?;
            for (occ, amp) in state.iter() {
                let m = (occ.counts()[0] as f64 - occ.counts()[1] as f64) / 2.0;
                add(occ.clone(), amp * m);
            }
        }
        Observable::Jsquared => {
            two_mode(state)?;
            let j = state.total_photons() as f64 / 2.0;
            for (occ, amp) in state.iter() {
                add(occ.clone(), amp * (j * (j + 1.0)));
            }
        }
        Observable::NumberDiff => {
            two_mode(state)?;
            for (occ, amp) in state.iter() {
                let d = occ.counts()[0] as f64 - occ.counts()[1] as f64;
                add(occ.clone(), amp * d);
            }
        }
        Observable::NumberSum => {
            let n = state.total_photons() as f64;
            for (occ, amp) in state.iter() {
                add(occ.clone(), amp * n);
            }
        }
        Observable::ModeNumber(i) => {
            if i >= state.modes() {
                return Err(Error::ModeOutOfRange { index: i, modes: state.modes() });
            }
            for (occ, amp) in state.iter() {
                add(occ.clone(), amp * occ.counts()[i] as f64);
            }
        }
        Observable::AnSubspace => {
            two_mode(state)?;
            let n = state.total_photons();
            let first = state.amplitude(&[n, 0]);
            let last = state.amplitude(&[0, n]);
            let leakage = state.norm_sqr() - first.norm_sqr() - last.norm_sqr();
            if leakage > LEAKAGE_TOLERANCE {
                return Err(Error::SubspaceLeakage { weight: leakage });
            }
            add(OccupationVector::new(vec![n, 0])?, last);
            add(OccupationVector::new(vec![0, n])?, first);
        }
    }
    Ok(out)
}

fn fock_moments(state: &FockState, obs: Observable) -> Result<(f64, f64)> {
    let image = apply_observable(state, obs)?;
    let mut first = Complex64::ZERO;
    let mut second = 0.0;
    for (occ, amp) in &image {
        first += state.amplitude(occ.counts()).conj() * amp;
        second += amp.norm_sqr();
    }
    debug_assert!(first.im.abs() < 1e-12, "observable must be Hermitian");
    Ok((first.re, second))
}

/// (⟨O⟩, ⟨O²⟩) for the probe; the second moment uses ⟨O²⟩ = ‖O|ψ⟩‖².
fn moments(state: &ProbeState, obs: Observable) -> Result<(f64, f64)> {
    match state {
        ProbeState::Fock(fock) => fock_moments(fock, obs),
        ProbeState::Qubit(reg) => match obs {
            Observable::AnSubspace => {
                Ok((qubits::expect_an(reg)?, qubits::expect_an_sqr(reg)?))
            }
            _ => Err(Error::ObservableStateMismatch),
        },
    }
}

/// ⟨O⟩, exact and real.
pub fn expectation(state: &ProbeState, obs: Observable) -> Result<f64> {
    moments(state, obs).map(|(first, _)| first)
}

/// ⟨O²⟩ − ⟨O⟩², clamped at zero against roundoff.
pub fn variance(state: &ProbeState, obs: Observable) -> Result<f64> {
    let (first, second) = moments(state, obs)?;
    Ok((second - first * first).max(0.0))
}

/// Uniform-amplitude superposition of all N+1 Jz eigenstates |k, N−k⟩.
fn uniform_probe(n: u32) -> Result<FockState> {
    let amp = Complex64::new(((n + 1) as f64).sqrt().recip(), 0.0);
    FockState::superposition((0..=n).map(|k| (vec![k, n - k], amp)).collect())
}

/// (|N,0⟩ + |0,N⟩)/√2 — the extreme Jz superposition (NOON form).
fn extreme_probe(n: u32) -> Result<FockState> {
    let amp = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    FockState::superposition(vec![(vec![n, 0], amp), (vec![0, n], amp)])
}

/// Amplitudes √(C(N,k)/2^N) over |k, N−k⟩ — a coherently split beam.
fn binomial_probe(n: u32) -> Result<FockState> {
    let pascal = pascal_rows(n as usize);
    let scale = 0.5f64.powi(n as i32);
    FockState::superposition(
        (0..=n)
            .map(|k| {
                let w = (pascal[n as usize][k as usize] * scale).sqrt();
                (vec![k, n - k], Complex64::new(w, 0.0))
            })
            .collect(),
    )
}

/// Ĵz variances of the three canonical probe classes at photon number `n`,
/// built as explicit two-mode states and measured through `variance`.
pub fn variance_catalog(n: u32) -> Result<VarianceCatalog> {
    if n == 0 {
        return Err(Error::PhotonNumberTooSmall { photons: 0, min: 1 });
    }
    let uniform = variance(&uniform_probe(n)?.into(), Observable::Jz)?;
    let extreme = variance(&extreme_probe(n)?.into(), Observable::Jz)?;
    let binomial = variance(&binomial_probe(n)?.into(), Observable::Jz)?;
    Ok(VarianceCatalog {
        photons: n,
        uniform,
        extreme,
        binomial,
        delta_q_extreme: 1.0 / (2.0 * extreme.sqrt()),
    })
}

/// Phase sensitivity of a probe family at `phi`: ΔA and the central
/// finite-difference slope of ⟨A⟩, combined as Δφ = ΔA/|d⟨A⟩/dφ|.
pub fn sensitivity<F>(
    family: F,
    obs: Observable,
    phi: f64,
    dphi: f64,
) -> Result<SensitivityReport>
where
    F: Fn(f64) -> Result<ProbeState>,
{
    if !(dphi > 0.0 && dphi <= 0.1) {
        return Err(Error::InvalidDerivativeStep { dphi });
    }
    let at = family(phi)?;
    let (first, second) = moments(&at, obs)?;
    let std_dev = (second - first * first).max(0.0).sqrt();
    let ahead = expectation(&family(phi + dphi)?, obs)?;
    let behind = expectation(&family(phi - dphi)?, obs)?;
    let derivative = (ahead - behind) / (2.0 * dphi);
    let divergent = derivative.abs() < DERIVATIVE_TOLERANCE;
    Ok(SensitivityReport {
        phi,
        expectation: first,
        std_dev,
        derivative,
        delta_phi: (!divergent).then(|| std_dev / derivative.abs()),
        divergent,
    })
}

/// Sensitivity of N independent qubit probes read out together.
///
/// One qubit prepared as (|0⟩ + e^{iφ}|1⟩)/√2 has ⟨Â⟩ = cos φ and Â² = 1;
/// over N product copies the summed observable has mean N⟨Â⟩ and variance
/// N·VarÂ, so Δφ = sin φ/(√N·|sin φ|) = 1/√N at the fringe midpoint.
pub fn shot_noise_sensitivity(n: u32, phi: f64, dphi: f64) -> Result<SensitivityReport> {
    if n == 0 {
        return Err(Error::PhotonNumberTooSmall { photons: 0, min: 1 });
    }
    let single = |phi: f64| -> Result<ProbeState> {
        let reg = QubitRegister::new(1)?;
        let reg = qubits::apply_gate(&reg, qubits::Gate::Hadamard(0))?;
        Ok(qubits::apply_gate(&reg, qubits::Gate::Phase(0, phi))?.into())
    };
    let one = sensitivity(single, Observable::AnSubspace, phi, dphi)?;
    let scale = n as f64;
    let variance_n = scale * (one.std_dev * one.std_dev);
    let derivative = scale * one.derivative;
    let divergent = derivative.abs() < DERIVATIVE_TOLERANCE;
    Ok(SensitivityReport {
        phi,
        expectation: scale * one.expectation,
        std_dev: variance_n.sqrt(),
        derivative,
        delta_phi: (!divergent).then(|| variance_n.sqrt() / derivative.abs()),
        divergent,
    })
}

/// Evaluate ΔJx·ΔJy against |⟨Jz⟩|/2 for a two-mode state.
///
/// Equality marks an intelligent (minimum-uncertainty) state; the Robertson
/// bound lhs ≥ rhs is asserted unconditionally.
pub fn intelligent_state_check(state: &FockState) -> Result<IntelligentStateReport> {
    two_mode(state)?;
    if state.total_photons() == 0 {
        return Err(Error::PhotonNumberTooSmall { photons: 0, min: 1 });
    }
    let probe = ProbeState::Fock(state.clone());
    let lhs = (variance(&probe, Observable::Jx)? * variance(&probe, Observable::Jy)?).sqrt();
    let rhs = expectation(&probe, Observable::Jz)?.abs() / 2.0;
    assert!(
        lhs >= rhs - 1e-12,
        "uncertainty relation violated: ΔJxΔJy = {lhs} < |⟨Jz⟩|/2 = {rhs}"
    );
    Ok(IntelligentStateReport { lhs, rhs, satisfied: (lhs - rhs).abs() <= 1e-9 })
}
