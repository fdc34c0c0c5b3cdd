//! Sparse multimode photon-number states and exact passive linear optics.
//!
//! A state is a map from mode-occupation vectors to complex amplitudes; only
//! nonzero amplitudes are stored. A beam splitter with transmission t and
//! reflection r (t² + r² = 1) acts on a mode pair through the
//! creation-operator substitution
//!
//! ```text
//! â† → i·t·â′† + r·b̂′†,    b̂† → i·t·b̂′† + r·â′†,
//! ```
//!
//! so the balanced 50/50 splitter is t = 1/√2, r = −1/√2. On a two-mode state
//! the su(2) picture uses Ĵx = (â†b̂ + âb̂†)/2, Ĵy = −i(â†b̂ − âb̂†)/2 and
//! Ĵz = (â†â − b̂†b̂)/2; rotations about x and y are applied through the exact
//! closed-form mode substitution they generate, and rotations about z are
//! diagonal phases. All operations conserve total photon number exactly and
//! preserve the norm to machine precision.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::numeric::sector_size;
use crate::{Error, Result};

/// Amplitudes with magnitude below this are dropped after each operation.
pub const PRUNE_THRESHOLD: f64 = 1e-15;

/// Tolerance on Σ|amplitude|² for a state to count as normalized.
pub const NORM_TOLERANCE: f64 = 1e-12;

/// Default cap on the photon-number basis an operation may have to expand.
pub const DEFAULT_BASIS_CAP: u128 = 2_000_000;

/// Basis-size guard, overridable through `ROSETTA_SIM_BASIS_CAP`.
///
/// Read live (not cached) so the limit can be adjusted per process launch;
/// unparsable values fall back to the default.
fn basis_cap() -> u128 {
    std::env::var("ROSETTA_SIM_BASIS_CAP")
        .ok()
        .and_then(|v| v.parse::<u128>().ok())
        .unwrap_or(DEFAULT_BASIS_CAP)
}

fn check_basis_cap(total: u32, modes: usize) -> Result<()> {
    let required = sector_size(total as u64, modes as u64);
    let cap = basis_cap();
    if required > cap {
        return Err(Error::BasisCapExceeded { required, cap });
    }
    Ok(())
}

/// Photon counts per mode, in fixed mode order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OccupationVector(Vec<u32>);

impl OccupationVector {
    pub fn new(counts: Vec<u32>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::EmptyOccupations);
        }
        Ok(Self(counts))
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    pub fn modes(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl std::fmt::Display for OccupationVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "|")?;
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, "⟩")
    }
}

/// Sparse pure state of `modes` bosonic modes with definite total photon
/// number.
///
/// Post-selection can leave the zero vector (an impossible outcome); such a
/// state is kept with no kets and `is_normalized() == false`.
#[derive(Debug, Clone)]
pub struct FockState {
    modes: usize,
    total_photons: u32,
    amplitudes: BTreeMap<OccupationVector, Complex64>,
    normalized: bool,
}

impl FockState {
    /// Normalized superposition of same-length, same-total kets.
    pub fn superposition(kets: Vec<(Vec<u32>, Complex64)>) -> Result<Self> {
        let first = kets.first().ok_or(Error::EmptyOccupations)?;
        let modes = first.0.len();
        if modes == 0 {
            return Err(Error::EmptyOccupations);
        }
        let total: u32 = first.0.iter().sum();
        let mut amplitudes = BTreeMap::new();
        for (occ, amp) in kets {
            if occ.len() != modes {
                return Err(Error::ModeMismatch { left: modes, right: occ.len() });
            }
            let occ = OccupationVector::new(occ)?;
            if occ.total() != total {
                return Err(Error::MixedPhotonNumber);
            }
            *amplitudes.entry(occ).or_insert(Complex64::ZERO) += amp;
        }
        let norm_sqr: f64 = amplitudes.values().map(|a| a.norm_sqr()).sum();
        if norm_sqr <= 0.0 {
            return Err(Error::ZeroNorm);
        }
        let scale = norm_sqr.sqrt().recip();
        let mut state = Self {
            modes,
            total_photons: total,
            amplitudes: amplitudes
                .into_iter()
                .map(|(occ, amp)| (occ, amp * scale))
                .collect(),
            normalized: true,
        };
        state.prune();
        Ok(state)
    }

    fn from_parts(
        modes: usize,
        total_photons: u32,
        amplitudes: BTreeMap<OccupationVector, Complex64>,
        normalized: bool,
    ) -> Self {
        let mut state = Self { modes, total_photons, amplitudes, normalized };
        state.prune();
        state
    }

    fn prune(&mut self) {
        self.amplitudes.retain(|_, amp| amp.norm() >= PRUNE_THRESHOLD);
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn total_photons(&self) -> u32 {
        self.total_photons
    }

    /// Number of kets with nonzero stored amplitude.
    pub fn ket_count(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum()
    }

    /// True unless the state is a flagged post-selection residual with zero
    /// probability.
    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Amplitude of one ket; zero for kets outside the stored support.
    pub fn amplitude(&self, occupations: &[u32]) -> Complex64 {
        self.amplitudes
            .get(&OccupationVector(occupations.to_vec()))
            .copied()
            .unwrap_or(Complex64::ZERO)
    }

    /// Kets and amplitudes in lexicographic occupation order.
    pub fn iter(&self) -> impl Iterator<Item = (&OccupationVector, Complex64)> {
        self.amplitudes.iter().map(|(occ, amp)| (occ, *amp))
    }

    fn check_mode(&self, index: usize) -> Result<()> {
        if index >= self.modes {
            return Err(Error::ModeOutOfRange { index, modes: self.modes });
        }
        Ok(())
    }
}

/// Single basis ket |n₀, n₁, …⟩ from its occupation list.
pub fn make_fock(occupations: &[u32]) -> Result<FockState> {
    FockState::superposition(vec![(occupations.to_vec(), Complex64::ONE)])
}

/// Lossless two-port beam splitter with real transmission and reflection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSplitter {
    t: f64,
    r: f64,
}

impl BeamSplitter {
    pub fn new(t: f64, r: f64) -> Result<Self> {
        let unitary = (0.0..=1.0).contains(&t)
            && (-1.0..=1.0).contains(&r)
            && (t * t + r * r - 1.0).abs() <= NORM_TOLERANCE;
        if !unitary {
            return Err(Error::InvalidBeamSplitter { t, r });
        }
        Ok(Self { t, r })
    }

    /// Balanced 50/50 splitter: t = 1/√2, r = −1/√2.
    pub fn balanced() -> Self {
        Self { t: std::f64::consts::FRAC_1_SQRT_2, r: -std::f64::consts::FRAC_1_SQRT_2 }
    }

    /// Splitter with reflected intensity fraction r² = `r2` (r taken negative
    /// to match the balanced convention).
    pub fn from_reflectivity(r2: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&r2) {
            return Err(Error::ReflectivityOutOfRange { r2 });
        }
        Ok(Self { t: (1.0 - r2).sqrt(), r: -r2.sqrt() })
    }

    pub fn transmission(&self) -> f64 {
        self.t
    }

    pub fn reflection(&self) -> f64 {
        self.r
    }
}

/// Factorization of a 2×2 unitary into phase · rotation · phase:
/// U = diag(e^{ia₀}, e^{ia₁}) · [[cos γ, −sin γ], [sin γ, cos γ]] ·
/// diag(e^{ib₀}, e^{ib₁}), with the `a` diagonal acting first on the state.
struct PairFactors {
    gamma: f64,
    a: [f64; 2],
    b: [f64; 2],
}

fn factor_pair_unitary(u: [[Complex64; 2]; 2]) -> PairFactors {
    let c = u[0][0].norm();
    let s = u[0][1].norm();
    if s == 0.0 {
        return PairFactors { gamma: 0.0, a: [u[0][0].arg(), u[1][1].arg()], b: [0.0; 2] };
    }
    // b₀ is the free gauge; arg(0) = 0 keeps the c = 0 case consistent.
    let a0 = u[0][0].arg();
    let a1 = u[1][0].arg();
    let b1 = (-u[0][1] * Complex64::from_polar(1.0, -a0)).arg();
    let f = PairFactors { gamma: s.atan2(c), a: [a0, a1], b: [0.0, b1] };
    debug_assert!({
        let (rc, rs) = (f.gamma.cos(), f.gamma.sin());
        let rebuilt = [
            [rc * Complex64::from_polar(1.0, a0), -rs * Complex64::from_polar(1.0, a0 + b1)],
            [rs * Complex64::from_polar(1.0, a1), rc * Complex64::from_polar(1.0, a1 + b1)],
        ];
        (0..2).all(|i| (0..2).all(|j| (rebuilt[i][j] - u[i][j]).norm() < 1e-10))
    });
    f
}

/// In-place e^{γK} on one fixed-total pair sector, where K = â†b̂ − b̂†â is the
/// rotation generator: K|k⟩ = cₖ|k+1⟩ − cₖ₋₁|k−1⟩, cₖ = √((k+1)(n−k)), and
/// v[k] is the amplitude with k photons in the first pair mode.
///
/// ‖K‖ = n, so γ is split into ⌈|γ|·n⌉ sub-rotations, each applied by a Taylor
/// series with all terms bounded by ‖v‖: no large intermediates, rounding
/// error grows only linearly in n. (A single binomial expansion of the
/// substituted creation operators is exact in structure but loses ~n digits
/// to cancellation.)
fn rotate_pair_sector(gamma: f64, v: &mut [Complex64]) {
    let n = v.len() - 1;
    if gamma == 0.0 || n == 0 {
        return;
    }
    let couplings: Vec<f64> =
        (0..n).map(|k| (((k + 1) * (n - k)) as f64).sqrt()).collect();
    let steps = (gamma.abs() * n as f64).ceil().max(1.0) as usize;
    let h = gamma / steps as f64;
    let v_norm_sqr: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    let cutoff = 1e-34 * v_norm_sqr;
    let mut term = vec![Complex64::ZERO; n + 1];
    let mut next = vec![Complex64::ZERO; n + 1];
    for _ in 0..steps {
        term.copy_from_slice(v);
        for order in 1..=24 {
            let scale = h / order as f64;
            for k in 0..=n {
                let up = if k > 0 { couplings[k - 1] * term[k - 1] } else { Complex64::ZERO };
                let down = if k < n { couplings[k] * term[k + 1] } else { Complex64::ZERO };
                next[k] = (up - down) * scale;
            }
            std::mem::swap(&mut term, &mut next);
            let mut term_norm_sqr = 0.0;
            for k in 0..=n {
                v[k] += term[k];
                term_norm_sqr += term[k].norm_sqr();
            }
            if term_norm_sqr < cutoff {
                break;
            }
        }
    }
}

/// Apply the mode substitution â† → u₀₀â† + u₀₁b̂†, b̂† → u₁₀â† + u₁₁b̂† to the
/// pair of modes `(p, q)`; `u` must be unitary.
///
/// Kets are grouped by the occupations of all other modes; each group is one
/// su(2) sector of fixed pair total n, rotated as a whole. The diagonal
/// factors of `u` act as exact per-ket phases, so all rounding lives in the
/// real sector rotation.
pub(crate) fn apply_two_mode_unitary(
    state: &FockState,
    u: [[Complex64; 2]; 2],
    pair: (usize, usize),
) -> Result<FockState> {
    let (p, q) = pair;
    state.check_mode(p)?;
    state.check_mode(q)?;
    if p == q {
        return Err(Error::DuplicateModes);
    }
    check_basis_cap(state.total_photons, state.modes)?;
    debug_assert!(
        (u[0][0].norm_sqr() + u[0][1].norm_sqr() - 1.0).abs() < 1e-10
            && (u[1][0].norm_sqr() + u[1][1].norm_sqr() - 1.0).abs() < 1e-10
            && (u[0][0] * u[1][0].conj() + u[0][1] * u[1][1].conj()).norm() < 1e-10,
        "mode-pair matrix must be unitary"
    );
    let f = factor_pair_unitary(u);

    // Group kets into sectors. Zeroing the pair entries of the key is enough:
    // fixed total photon number makes the pair total a function of the rest.
    let mut sectors: BTreeMap<Vec<u32>, Vec<Complex64>> = BTreeMap::new();
    for (occ, amp) in state.iter() {
        let k = occ.counts()[p] as usize;
        let n = k + occ.counts()[q] as usize;
        let mut key = occ.counts().to_vec();
        key[p] = 0;
        key[q] = 0;
        let v = sectors.entry(key).or_insert_with(|| vec![Complex64::ZERO; n + 1]);
        v[k] += amp * Complex64::from_polar(1.0, f.a[0] * k as f64 + f.a[1] * (n - k) as f64);
    }

    let mut out: BTreeMap<OccupationVector, Complex64> = BTreeMap::new();
    for (key, mut v) in sectors {
        let n = v.len() - 1;
        rotate_pair_sector(f.gamma, &mut v);
        for (k, amp) in v.into_iter().enumerate() {
            if amp.norm() < PRUNE_THRESHOLD {
                continue;
            }
            let phase =
                Complex64::from_polar(1.0, f.b[0] * k as f64 + f.b[1] * (n - k) as f64);
            let mut counts = key.clone();
            counts[p] = k as u32;
            counts[q] = (n - k) as u32;
            out.insert(OccupationVector(counts), amp * phase);
        }
    }
    Ok(FockState::from_parts(state.modes, state.total_photons, out, state.normalized))
}

/// Beam-splitter action on the mode pair `(p, q)`.
pub fn apply_beam_splitter(
    state: &FockState,
    bs: BeamSplitter,
    pair: (usize, usize),
) -> Result<FockState> {
    let it = Complex64::new(0.0, bs.t);
    let r = Complex64::new(bs.r, 0.0);
    apply_two_mode_unitary(state, [[it, r], [r, it]], pair)
}

/// Phase shifter exp(iφ n̂) on one mode: each ket with n photons there picks
/// up e^{i·n·φ}.
pub fn apply_phase_shift(state: &FockState, mode: usize, phi: f64) -> Result<FockState> {
    state.check_mode(mode)?;
    let out = state
        .iter()
        .map(|(occ, amp)| {
            let n = occ.counts()[mode] as f64;
            (occ.clone(), amp * Complex64::from_polar(1.0, n * phi))
        })
        .collect();
    Ok(FockState::from_parts(state.modes, state.total_photons, out, state.normalized))
}

/// Rotation generator axis in the su(2) picture of a two-mode state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RotationAxis {
    X,
    Y,
    Z,
}

/// exp(i·angle·Ĵ_axis) on a two-mode state.
///
/// The x and y rotations are applied through the exact mode substitutions
/// they generate,
///
/// ```text
/// exp(iθĴx):  â† → cos(θ/2)â† + i·sin(θ/2)b̂†,   b̂† → cos(θ/2)b̂† + i·sin(θ/2)â†
/// exp(iθĴy):  â† → cos(θ/2)â† − sin(θ/2)b̂†,     b̂† → cos(θ/2)b̂† + sin(θ/2)â†
/// ```
///
/// and exp(iθĴz) multiplies each ket by e^{iθ(n_a−n_b)/2}. The balanced beam
/// splitter equals exp(iπĴx/2) up to the global phase i^N on the N-photon
/// sector.
pub fn schwinger_rotation(state: &FockState, axis: RotationAxis, angle: f64) -> Result<FockState> {
    if state.modes != 2 {
        return Err(Error::NotTwoMode { modes: state.modes });
    }
    let (c, s) = ((angle / 2.0).cos(), (angle / 2.0).sin());
    match axis {
        RotationAxis::X => {
            let diag = Complex64::new(c, 0.0);
            let off = Complex64::new(0.0, s);
            apply_two_mode_unitary(state, [[diag, off], [off, diag]], (0, 1))
        }
        RotationAxis::Y => {
            let diag = Complex64::new(c, 0.0);
            let s = Complex64::new(s, 0.0);
            apply_two_mode_unitary(state, [[diag, -s], [s, diag]], (0, 1))
        }
        RotationAxis::Z => {
            let out = state
                .iter()
                .map(|(occ, amp)| {
                    let half_diff =
                        (occ.counts()[0] as f64 - occ.counts()[1] as f64) / 2.0;
                    (occ.clone(), amp * Complex64::from_polar(1.0, angle * half_diff))
                })
                .collect();
            Ok(FockState::from_parts(state.modes, state.total_photons, out, state.normalized))
        }
    }
}

/// Project the listed modes onto exact photon counts.
///
/// Returns the renormalized residual on the remaining modes (in their
/// original order) and the outcome probability. A zero-probability outcome
/// yields an empty residual flagged as unnormalized.
pub fn project_counts(
    state: &FockState,
    modes: &[usize],
    counts: &[u32],
) -> Result<(FockState, f64)> {
    if modes.len() != counts.len() {
        return Err(Error::CountLengthMismatch { modes: modes.len(), counts: counts.len() });
    }
    for (i, &m) in modes.iter().enumerate() {
        state.check_mode(m)?;
        if modes[..i].contains(&m) {
            return Err(Error::DuplicateModes);
        }
    }
    if modes.len() >= state.modes {
        return Err(Error::ProjectionConsumesAllModes);
    }

    let detected: u32 = counts.iter().sum();
    let residual_total = state.total_photons.saturating_sub(detected);
    let keep: Vec<usize> = (0..state.modes).filter(|i| !modes.contains(i)).collect();

    let mut kept: BTreeMap<OccupationVector, Complex64> = BTreeMap::new();
    let mut probability = 0.0;
    for (occ, amp) in state.iter() {
        let matches = modes
            .iter()
            .zip(counts)
            .all(|(&m, &c)| occ.counts()[m] == c);
        if !matches {
            continue;
        }
        probability += amp.norm_sqr();
        let residual: Vec<u32> = keep.iter().map(|&i| occ.counts()[i]).collect();
        *kept.entry(OccupationVector(residual)).or_insert(Complex64::ZERO) += amp;
    }

    if probability == 0.0 {
        let empty = FockState {
            modes: keep.len(),
            total_photons: residual_total,
            amplitudes: BTreeMap::new(),
            normalized: false,
        };
        return Ok((empty, 0.0));
    }

    let scale = probability.sqrt().recip();
    let amplitudes = kept.into_iter().map(|(occ, amp)| (occ, amp * scale)).collect();
    let residual = FockState::from_parts(keep.len(), residual_total, amplitudes, true);
    Ok((residual, probability.min(1.0)))
}

/// |⟨a|b⟩|²; insensitive to global phase.
pub fn fidelity(a: &FockState, b: &FockState) -> Result<f64> {
    if a.modes != b.modes {
        return Err(Error::ModeMismatch { left: a.modes, right: b.modes });
    }
    let mut overlap = Complex64::ZERO;
    for (occ, amp) in a.iter() {
        overlap += amp.conj() * b.amplitude(occ.counts());
    }
    Ok(overlap.norm_sqr())
}

/// Mach–Zehnder interferometer on a two-mode state: balanced splitter, phase
/// φ on mode 0, balanced splitter.
pub fn mach_zehnder(state: &FockState, phi: f64) -> Result<FockState> {
    if state.modes != 2 {
        return Err(Error::NotTwoMode { modes: state.modes });
    }
    let bs = BeamSplitter::balanced();
    let state = apply_beam_splitter(state, bs, (0, 1))?;
    let state = apply_phase_shift(&state, 0, phi)?;
    apply_beam_splitter(&state, bs, (0, 1))
}
