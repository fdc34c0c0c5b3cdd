//! Named interferometer probes and the optical protocols built from them:
//! Hong–Ou–Mandel entangling, N-photon lithography fringes, and the
//! projective "peel-off" device that distils a Yurke-type correlation from a
//! dual Fock state.

use num_complex::Complex64;

use crate::fock::{
    apply_beam_splitter, apply_two_mode_unitary, make_fock, project_counts, BeamSplitter,
    FockState,
};
use crate::numeric::{self, ln_factorials};
use crate::{Error, Result};

/// Benchmark two-mode probe families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedState {
    /// |N,N⟩.
    DualFock,
    /// (|N,0⟩ + |0,N⟩)/√2.
    Noon,
    /// (|(N+1)/2, (N−1)/2⟩ + |(N−1)/2, (N+1)/2⟩)/√2 — the two m = ±1/2
    /// rungs, which need odd total N.
    Yurke,
}

/// Two-fold-coincidence peel-off outcome.
#[derive(Debug, Clone)]
pub struct PeelOffResult {
    /// Renormalized residual on the surviving modes; spans
    /// {|N,N−2⟩, |N−2,N⟩} with equal components.
    pub conditional_state: FockState,
    /// Probability of the (1,1) detector pattern; equals `amplitude_a`².
    pub success_probability: f64,
    /// Closed-form branch amplitude |A| = √(N(N−1)/2) · r² · t^{2N−2}.
    pub amplitude_a: f64,
    pub reflectivity: f64,
}

/// One single-detector post-selection branch.
#[derive(Debug, Clone)]
pub struct DetectorBranch {
    /// (photons at detector c, photons at detector d).
    pub pattern: (u32, u32),
    /// Renormalized residual on the surviving modes.
    pub state: FockState,
    pub probability: f64,
    /// arg(⟨second ket⟩ / ⟨first ket⟩) across the residual's two components;
    /// `None` when either component vanishes.
    pub relative_phase: Option<f64>,
}

/// N-photon absorption fringe on a φ grid.
#[derive(Debug, Clone)]
pub struct DepositionCurve {
    pub phi_grid: Vec<f64>,
    /// |⟨0,0|(â e^{iφ} + b̂)^N|ψ⟩|² up to an N-dependent overall scale.
    pub rate: Vec<f64>,
    /// `rate` scaled to peak 1 — the convention-free fringe shape.
    pub normalized_rate: Vec<f64>,
}

/// Build one of the named two-mode probes with total photon number `n`.
pub fn make_named_state(name: NamedState, n: u32) -> Result<FockState> {
    if n == 0 {
        return Err(Error::PhotonNumberTooSmall { photons: 0, min: 1 });
    }
    let half = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    match name {
        NamedState::DualFock => make_fock(&[n, n]),
        NamedState::Noon => FockState::superposition(vec![
            (vec![n, 0], half),
            (vec![0, n], half),
        ]),
        NamedState::Yurke => {
            if n % 2 == 0 {
                return Err(Error::OddPhotonNumberRequired { photons: n });
            }
            FockState::superposition(vec![
                (vec![(n + 1) / 2, (n - 1) / 2], half),
                (vec![(n - 1) / 2, (n + 1) / 2], half),
            ])
        }
    }
}

/// Send |1,1⟩ through a balanced beam splitter, producing the two-photon
/// NOON state −i(|2,0⟩ + |0,2⟩)/√2 with the coincidence term cancelled.
pub fn hom_entangle() -> FockState {
    let input = make_fock(&[1, 1]).expect("two-mode input");
    apply_beam_splitter(&input, BeamSplitter::balanced(), (0, 1))
        .expect("two-mode pair is valid")
}

/// N-photon absorption rate over a phase grid.
///
/// With the state written over |p, N−p⟩, the absorption amplitude is
/// Σₚ ampₚ·e^{ipφ}·N!/√(p!(N−p)!); the rate is its squared magnitude. The
/// returned `rate` carries an arbitrary overall scale (the N-dependent
/// factor is divided out in log space to dodge overflow); shapes live in
/// `normalized_rate`.
pub fn deposition_rate(state: &FockState, phi_grid: &[f64]) -> Result<DepositionCurve> {
    if state.modes() != 2 {
        return Err(Error::NotTwoMode { modes: state.modes() });
    }
    let n = state.total_photons();
    if n == 0 {
        return Err(Error::PhotonNumberTooSmall { photons: 0, min: 1 });
    }
    let lnf = ln_factorials(n as usize);
    // ln of N!/√(p!(N−p)!), shifted so the largest coefficient is 1.
    let ln_coeff: Vec<f64> = (0..=n as usize)
        .map(|p| lnf[n as usize] - 0.5 * (lnf[p] + lnf[n as usize - p]))
        .collect();
    let ln_peak = ln_coeff.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let terms: Vec<(f64, Complex64)> = (0..=n)
        .map(|p| {
            let weight = (ln_coeff[p as usize] - ln_peak).exp();
            (p as f64, state.amplitude(&[p, n - p]) * weight)
        })
        .filter(|(_, amp)| amp.norm_sqr() > 0.0)
        .collect();

    let rate: Vec<f64> = phi_grid
        .iter()
        .map(|&phi| {
            let sum: Complex64 = terms
                .iter()
                .map(|&(p, amp)| amp * Complex64::from_polar(1.0, p * phi))
                .sum();
            sum.norm_sqr()
        })
        .collect();
    let peak = rate.iter().copied().fold(0.0, f64::max);
    let normalized_rate = if peak > 0.0 {
        rate.iter().map(|r| r / peak).collect()
    } else {
        rate.clone()
    };
    Ok(DepositionCurve { phi_grid: phi_grid.to_vec(), rate, normalized_rate })
}

/// Closed-form two-fold-coincidence amplitude |A| of the peel-off device.
pub fn coincidence_amplitude(n: u32, r2: f64) -> f64 {
    let nf = n as f64;
    (nf * (nf - 1.0) / 2.0).sqrt() * r2 * (1.0 - r2).powi(n as i32 - 1)
}

fn check_peel_inputs(n: u32, min_n: u32, r2: f64) -> Result<()> {
    if n < min_n {
        return Err(Error::PhotonNumberTooSmall { photons: n, min: min_n });
    }
    if !(r2 > 0.0 && r2 < 1.0) {
        return Err(Error::ReflectivityOutOfRange { r2 });
    }
    Ok(())
}

/// Detector-pair mixer of the peel-off device:
/// û† → (i d̂† − ĉ†)/√2, v̂† → (i ĉ† − d̂†)/√2.
const DETECTOR_MIXER: [[Complex64; 2]; 2] = [
    [
        Complex64::new(-std::f64::consts::FRAC_1_SQRT_2, 0.0),
        Complex64::new(0.0, std::f64::consts::FRAC_1_SQRT_2),
    ],
    [
        Complex64::new(0.0, std::f64::consts::FRAC_1_SQRT_2),
        Complex64::new(-std::f64::consts::FRAC_1_SQRT_2, 0.0),
    ],
];

/// Run the four-mode peel-off circuit on |N,N,0,0⟩ up to the detector mixer:
/// tap each input mode with a reflectivity-r2 splitter, then recombine the
/// tapped modes (2,3) on the balanced mixer feeding the detectors.
fn peel_off_circuit(n: u32, r2: f64) -> Result<FockState> {
    let tap = BeamSplitter::from_reflectivity(r2)?;
    let state = make_fock(&[n, n, 0, 0])?;
    let state = apply_beam_splitter(&state, tap, (0, 2))?;
    let state = apply_beam_splitter(&state, tap, (1, 3))?;
    apply_two_mode_unitary(&state, DETECTOR_MIXER, (2, 3))
}

/// Post-select one photon at each detector of the peel-off device.
///
/// The survivors carry (|N,N−2⟩ + |N−2,N⟩)/√2 — two photons peeled off one
/// side or the other with no which-side information — with probability |A|².
pub fn peel_off(n: u32, r2: f64) -> Result<PeelOffResult> {
    check_peel_inputs(n, 2, r2)?;
    let mixed = peel_off_circuit(n, r2)?;
    let (conditional_state, success_probability) = project_counts(&mixed, &[2, 3], &[1, 1])?;
    Ok(PeelOffResult {
        conditional_state,
        success_probability,
        amplitude_a: coincidence_amplitude(n, r2),
        reflectivity: r2,
    })
}

/// Post-select exactly one photon at a single detector (the other silent).
///
/// Returns the (1,0) and (0,1) branches; each residual spans
/// {|N,N−1⟩, |N−1,N⟩} with equal magnitudes and a fixed relative phase that a
/// corrective phase shifter could absorb.
pub fn peel_off_single_detector(n: u32, r2: f64) -> Result<Vec<DetectorBranch>> {
    check_peel_inputs(n, 1, r2)?;
    let mixed = peel_off_circuit(n, r2)?;
    [(1u32, 0u32), (0, 1)]
        .into_iter()
        .map(|pattern| {
            let (state, probability) = project_counts(&mixed, &[2, 3], &[pattern.0, pattern.1])?;
            let first = state.amplitude(&[n, n - 1]);
            let second = state.amplitude(&[n - 1, n]);
            let relative_phase = (first.norm() > 0.0 && second.norm() > 0.0)
                .then(|| (second / first).arg());
            Ok(DetectorBranch { pattern, state, probability, relative_phase })
        })
        .collect()
}

/// Maximize the coincidence probability |A|² over the tap reflectivity.
///
/// The analytic optimum is r2 = 1/N; the golden-section search over the
/// closed form is the numerical cross-check of that claim.
pub fn optimal_reflectivity(n: u32) -> Result<(f64, f64)> {
    if n < 2 {
        return Err(Error::PhotonNumberTooSmall { photons: n, min: 2 });
    }
    let objective = |r2: f64| {
        let a = coincidence_amplitude(n, r2);
        a * a
    };
    let (r2_star, p_star) = numeric::maximize(objective, 0.0, 1.0, 1e-8);
    Ok((r2_star, p_star))
}
