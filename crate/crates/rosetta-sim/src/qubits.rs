//! Dense state-vector simulation of small qubit registers.
//!
//! This is the circuit-model leg of the three equivalent pictures: a Hadamard
//! plays the beam splitter, a phase gate plays the path-length shift, and a
//! GHZ state plays the maximally path-entangled photon state. Qubit 0 is the
//! most significant bit of the amplitude index.

use num_complex::Complex64;

use crate::fock;
use crate::{Error, Result};

/// Default cap on register width (amplitude vectors stay ≤ 2²⁰ entries).
pub const DEFAULT_QUBIT_CAP: usize = 20;

/// Fringe offset between the Hadamard circuit and the optical interferometer:
/// `rosetta_fringe(φ)` equals `single_photon_swap_probability(φ + π)`.
///
/// The circuit picture has no i factors, while each beam-splitter transmission
/// carries one; across the interferometer they shift the fringe by half a
/// period.
pub const ROSETTA_PHASE_OFFSET: f64 = std::f64::consts::PI;

/// Single-qubit and two-qubit gates used by the interferometer circuits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    Hadamard(usize),
    /// Multiplies the |1⟩ component of the qubit by e^{iφ}.
    Phase(usize, f64),
    Cnot { control: usize, target: usize },
}

/// Pure state of `n` qubits as a dense amplitude vector of length 2ⁿ.
#[derive(Debug, Clone)]
pub struct QubitRegister {
    n: usize,
    amplitudes: Vec<Complex64>,
}

impl QubitRegister {
    /// |0…0⟩ on `n` qubits, within the default width cap.
    pub fn new(n: usize) -> Result<Self> {
        Self::with_cap(n, DEFAULT_QUBIT_CAP)
    }

    /// |0…0⟩ on `n` qubits with an explicit width cap.
    pub fn with_cap(n: usize, cap: usize) -> Result<Self> {
        if n == 0 || n > cap {
            return Err(Error::QubitCapExceeded { requested: n, cap });
        }
        let mut amplitudes = vec![Complex64::ZERO; 1 << n];
        amplitudes[0] = Complex64::ONE;
        Ok(Self { n, amplitudes })
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Bit mask selecting qubit `q` in an amplitude index (qubit 0 = MSB).
    fn mask(&self, q: usize) -> Result<usize> {
        if q >= self.n {
            return Err(Error::QubitOutOfRange { index: q, qubits: self.n });
        }
        Ok(1 << (self.n - 1 - q))
    }
}

/// Apply one gate, returning the new register.
pub fn apply_gate(reg: &QubitRegister, gate: Gate) -> Result<QubitRegister> {
    let mut amps = reg.amplitudes.clone();
    match gate {
        Gate::Hadamard(q) => {
            let mask = reg.mask(q)?;
            let h = std::f64::consts::FRAC_1_SQRT_2;
            for i in 0..amps.len() {
                if i & mask == 0 {
                    let (lo, hi) = (amps[i], amps[i | mask]);
                    amps[i] = (lo + hi) * h;
                    amps[i | mask] = (lo - hi) * h;
                }
            }
        }
        Gate::Phase(q, phi) => {
            let mask = reg.mask(q)?;
            let factor = Complex64::from_polar(1.0, phi);
            for (i, amp) in amps.iter_mut().enumerate() {
                if i & mask != 0 {
                    *amp *= factor;
                }
            }
        }
        Gate::Cnot { control, target } => {
            let cmask = reg.mask(control)?;
            let tmask = reg.mask(target)?;
            if control == target {
                return Err(Error::ControlEqualsTarget);
            }
            for i in 0..amps.len() {
                if i & cmask != 0 && i & tmask == 0 {
                    amps.swap(i, i | tmask);
                }
            }
        }
    }
    Ok(QubitRegister { n: reg.n, amplitudes: amps })
}

/// Phase φ on every qubit at once: basis state |x⟩ gains e^{i·popcount(x)·φ}.
///
/// Equivalent to chaining `Phase(q, φ)` over all qubits in a single pass;
/// physically this is the one free evolution every qubit sees together.
pub fn collective_phase(reg: &QubitRegister, phi: f64) -> QubitRegister {
    let amplitudes = reg
        .amplitudes
        .iter()
        .enumerate()
        .map(|(i, amp)| amp * Complex64::from_polar(1.0, phi * i.count_ones() as f64))
        .collect();
    QubitRegister { n: reg.n, amplitudes }
}

/// GHZ state (|0…0⟩ + |1…1⟩)/√2 built the circuit way: Hadamard on qubit 0,
/// then a C-NOT fan-out onto every other qubit.
pub fn make_ghz(n: usize) -> Result<QubitRegister> {
    let mut reg = QubitRegister::new(n)?;
    reg = apply_gate(&reg, Gate::Hadamard(0))?;
    for target in 1..n {
        reg = apply_gate(&reg, Gate::Cnot { control: 0, target })?;
    }
    Ok(reg)
}

/// Weight of the register outside span{|0…0⟩, |1…1⟩}.
fn subspace_leakage(reg: &QubitRegister) -> f64 {
    let last = reg.amplitudes.len() - 1;
    reg.norm_sqr() - reg.amplitudes[0].norm_sqr() - reg.amplitudes[last].norm_sqr()
}

/// ⟨Â_N⟩ for Â_N = |0…0⟩⟨1…1| + |1…1⟩⟨0…0|.
///
/// On a phased GHZ state this is cos Nφ. The register must lie in the
/// two-dimensional GHZ subspace (leakage ≤ 1e−10), where Â_N² = 1.
pub fn expect_an(reg: &QubitRegister) -> Result<f64> {
    let leakage = subspace_leakage(reg);
    if leakage > 1e-10 {
        return Err(Error::SubspaceLeakage { weight: leakage });
    }
    let first = reg.amplitudes[0];
    let last = reg.amplitudes[reg.amplitudes.len() - 1];
    Ok(2.0 * (first.conj() * last).re)
}

/// ⟨Â_N²⟩; unity whenever the register lies in the GHZ subspace.
pub fn expect_an_sqr(reg: &QubitRegister) -> Result<f64> {
    let leakage = subspace_leakage(reg);
    if leakage > 1e-10 {
        return Err(Error::SubspaceLeakage { weight: leakage });
    }
    let first = reg.amplitudes[0];
    let last = reg.amplitudes[reg.amplitudes.len() - 1];
    Ok(first.norm_sqr() + last.norm_sqr())
}

/// P(measure |1⟩) after the circuit H · Phase(φ) · H on |0⟩: (1 − cos φ)/2.
pub fn rosetta_fringe(phi: f64) -> f64 {
    let reg = QubitRegister::new(1).expect("one qubit is always within the cap");
    let reg = apply_gate(&reg, Gate::Hadamard(0)).expect("valid index");
    let reg = apply_gate(&reg, Gate::Phase(0, phi)).expect("valid index");
    let reg = apply_gate(&reg, Gate::Hadamard(0)).expect("valid index");
    reg.amplitudes[1].norm_sqr()
}

/// P(the photon of |1,0⟩ exits the interferometer at the other port):
/// (1 + cos φ)/2 with this beam-splitter convention.
pub fn single_photon_swap_probability(phi: f64) -> f64 {
    let input = fock::make_fock(&[1, 0]).expect("two-mode single photon");
    let out = fock::mach_zehnder(&input, phi).expect("two-mode state");
    out.amplitude(&[0, 1]).norm_sqr()
}

/// |⟨a|b⟩|² between equal-width registers.
pub fn fidelity(a: &QubitRegister, b: &QubitRegister) -> Result<f64> {
    if a.n != b.n {
        return Err(Error::ModeMismatch { left: a.n, right: b.n });
    }
    let overlap: Complex64 = a
        .amplitudes
        .iter()
        .zip(&b.amplitudes)
        .map(|(x, y)| x.conj() * y)
        .sum();
    Ok(overlap.norm_sqr())
}
