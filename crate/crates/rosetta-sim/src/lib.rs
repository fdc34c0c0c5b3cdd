//! Deterministic simulation toolkit for quantum-enhanced interferometry.
//!
//! The crate models the same phase-estimation experiment in three equivalent
//! pictures and provides the statistics to compare them:
//!
//! - [`fock`] — sparse multimode photon-number states under passive linear
//!   optics (beam splitters, phase shifters, su(2) rotations, projective
//!   detection);
//! - [`qubits`] — dense state-vector qubit registers with the Hadamard/phase/
//!   CNOT gate set, including GHZ preparation and parity-type readout;
//! - [`estimation`] — observables on either state type, error propagation
//!   Δφ = ΔA/|d⟨A⟩/dφ|, and the variance catalog for (N+1)-level systems;
//! - [`protocols`] — named interferometric resource states and complete
//!   experiments: Hong–Ou–Mandel entangling, N-photon lithography curves, and
//!   beam-splitter peel-off state preparation;
//! - [`sampling`] — seeded Born-rule shot noise, phase estimators, and
//!   log–log scaling fits for the standard quantum limit vs the 1/N limit;
//! - [`cli`] — the `rosetta-sim` command-line frontend with CSV/JSON output.
//!
//! Everything is deterministic: identical inputs (including RNG seeds) give
//! bit-identical results, so every number in the test suite is reproducible.

pub mod cli;
pub mod estimation;
pub mod fock;
mod numeric;
mod output;
pub mod protocols;
pub mod qubits;
pub mod sampling;

pub use estimation::{Observable, ProbeState, SensitivityReport};
pub use fock::{BeamSplitter, FockState, OccupationVector, RotationAxis};
pub use qubits::{Gate, QubitRegister};

/// Unified error type for every fallible operation in the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("occupation list must not be empty")]
    EmptyOccupations,
    #[error("mode index {index} out of range for {modes} modes")]
    ModeOutOfRange { index: usize, modes: usize },
    #[error("mode indices must be distinct")]
    DuplicateModes,
    #[error("mode count mismatch: {left} vs {right}")]
    ModeMismatch { left: usize, right: usize },
    #[error("projection must leave at least one unmeasured mode")]
    ProjectionConsumesAllModes,
    #[error("got {counts} counts for {modes} projected modes")]
    CountLengthMismatch { modes: usize, counts: usize },
    #[error("basis of {required} kets exceeds cap of {cap} (override with ROSETTA_SIM_BASIS_CAP)")]
    BasisCapExceeded { required: u128, cap: u128 },
    #[error("operation requires a two-mode state, got {modes} modes")]
    NotTwoMode { modes: usize },
    #[error("state is not normalized (norm² = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },
    #[error("superposition has zero norm")]
    ZeroNorm,
    #[error("kets mix different total photon numbers")]
    MixedPhotonNumber,
    #[error("beam splitter requires t ∈ [0,1], r ∈ [-1,1] with t² + r² = 1 (got t = {t}, r = {r})")]
    InvalidBeamSplitter { t: f64, r: f64 },
    #[error("qubit index {index} out of range for {qubits}-qubit register")]
    QubitOutOfRange { index: usize, qubits: usize },
    #[error("register of {requested} qubits exceeds cap of {cap}")]
    QubitCapExceeded { requested: usize, cap: usize },
    #[error("control and target qubits must differ")]
    ControlEqualsTarget,
    #[error("weight {weight:.3e} lies outside the two-level measurement subspace")]
    SubspaceLeakage { weight: f64 },
    #[error("photon number must be at least {min}, got {photons}")]
    PhotonNumberTooSmall { photons: u32, min: u32 },
    #[error("this state requires an odd photon number, got {photons}")]
    OddPhotonNumberRequired { photons: u32 },
    #[error("reflectivity must lie strictly between 0 and 1, got {r2}")]
    ReflectivityOutOfRange { r2: f64 },
    #[error("observable is not defined for this state type")]
    ObservableStateMismatch,
    #[error("derivative step must lie in (0, 0.1], got {dphi}")]
    InvalidDerivativeStep { dphi: f64 },
    #[error("phase {phi} outside the invertible branch (0, {upper})")]
    PhaseOutsideInvertibleBranch { phi: f64, upper: f64 },
    #[error("trials must be at least 1")]
    ZeroTrials,
    #[error("repetitions must be at least {min}, got {got}")]
    TooFewRepetitions { got: u32, min: u32 },
    #[error("scaling runs need at least {min} trials per repetition, got {got}")]
    TooFewTrials { got: u32, min: u32 },
    #[error("scaling fit needs at least 4 photon numbers spanning a factor of 10")]
    InsufficientScalingRange,
    #[error("phase estimates collapsed to a single value; increase trials or repetitions")]
    DegenerateEstimates,
    #[error("phase grid needs at least {min} points, got {got}")]
    GridTooSmall { got: usize, min: usize },
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
