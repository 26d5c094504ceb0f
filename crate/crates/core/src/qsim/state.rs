//! Dense complex state vectors.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::rng::SplitMix64;

/// Largest simulated register.
pub const MAX_QUBITS: u32 = 24;

/// Norm tolerance checked at construction.
pub const NORM_TOLERANCE: f64 = 1e-9;

const FRAC_1_SQRT_2: f64 = core::f64::consts::FRAC_1_SQRT_2;

/// Amplitudes of a `num_qubits` register; basis index bit `q` is qubit `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: u32,
    amps: Vec<Complex64>,
}

fn check_qubits(num_qubits: u32) -> Result<()> {
    if num_qubits > MAX_QUBITS {
        return Err(Error::RegisterTooLarge { qubits: num_qubits, cap: MAX_QUBITS });
    }
    Ok(())
}

impl StateVector {
    /// `|0…0⟩`.
    pub fn zero(num_qubits: u32) -> Result<Self> {
        Self::basis(num_qubits, 0)
    }

    pub fn basis(num_qubits: u32, index: usize) -> Result<Self> {
        check_qubits(num_qubits)?;
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::InputOutOfRange { input: index, domain: dim });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { num_qubits, amps })
    }

    /// Takes ownership of the amplitudes; they must have norm 1.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if !len.is_power_of_two() {
            return Err(Error::LengthMismatch { expected: len.next_power_of_two(), got: len });
        }
        let num_qubits = len.trailing_zeros();
        check_qubits(num_qubits)?;
        let s = Self { num_qubits, amps };
        let norm = s.norm();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm });
        }
        Ok(s)
    }

    /// Scales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amps: Vec<Complex64>) -> Result<Self> {
        let norm = libm::sqrt(amps.iter().map(|a| a.norm_sqr()).sum::<f64>());
        if norm == 0.0 {
            return Err(Error::NotNormalized { norm });
        }
        Self::from_amplitudes(amps.into_iter().map(|a| a / norm).collect())
    }

    /// Equal superposition over `inputs`, zero elsewhere.
    pub fn uniform_subset(inputs: &[usize], num_qubits: u32) -> Result<Self> {
        if inputs.is_empty() {
            return Err(Error::EmptyInputSet);
        }
        check_qubits(num_qubits)?;
        let dim = 1usize << num_qubits;
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        let a = Complex64::new(1.0 / libm::sqrt(inputs.len() as f64), 0.0);
        for &x in inputs {
            if x >= dim {
                return Err(Error::InputOutOfRange { input: x, domain: dim });
            }
            if amps[x].re != 0.0 {
                return Err(Error::InvalidClass("repeated input in subset".into()));
            }
            amps[x] = a;
        }
        Ok(Self { num_qubits, amps })
    }

    pub fn num_qubits(&self) -> u32 {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn probability(&self, index: usize) -> f64 {
        self.amps[index].norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>())
    }

    pub fn check_wire(&self, wire: u32) -> Result<()> {
        if wire >= self.num_qubits {
            return Err(Error::WireClash(alloc::format!(
                "wire {wire} outside a {}-qubit register",
                self.num_qubits
            )));
        }
        Ok(())
    }

    pub fn hadamard(&mut self, wire: u32) -> Result<()> {
        self.check_wire(wire)?;
        let bit = 1usize << wire;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let (a, b) = (self.amps[i], self.amps[i | bit]);
                self.amps[i] = (a + b) * FRAC_1_SQRT_2;
                self.amps[i | bit] = (a - b) * FRAC_1_SQRT_2;
            }
        }
        Ok(())
    }

    /// Hadamard on every wire whose bit is set in `wires`.
    pub fn hadamard_mask(&mut self, wires: u64) -> Result<()> {
        for w in 0..64 {
            if wires >> w & 1 == 1 {
                self.hadamard(w)?;
            }
        }
        Ok(())
    }

    pub fn hadamard_all(&mut self) {
        for w in 0..self.num_qubits {
            self.hadamard(w).expect("wire in range");
        }
    }

    pub fn pauli_x(&mut self, wire: u32) -> Result<()> {
        self.check_wire(wire)?;
        let bit = 1usize << wire;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                self.amps.swap(i, i | bit);
            }
        }
        Ok(())
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::LengthMismatch { expected: self.dim(), got: other.dim() });
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// `self ⊗ other`, with `other` on the high wires.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        check_qubits(self.num_qubits + other.num_qubits)?;
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for b in &other.amps {
            for a in &self.amps {
                amps.push(a * b);
            }
        }
        Ok(Self { num_qubits: self.num_qubits + other.num_qubits, amps })
    }

    /// Total probability outside `support`.
    pub fn leak_outside(&self, support: &[usize]) -> f64 {
        let inside: f64 = support.iter().map(|&x| self.amps[x].norm_sqr()).sum();
        (self.norm() * self.norm() - inside).max(0.0)
    }
}

/// Samples a basis index with probability `|amplitude|²`.
pub fn measure_all(state: &StateVector, rng: &mut SplitMix64) -> usize {
    let r = rng.next_f64() * state.norm() * state.norm();
    let mut acc = 0.0;
    let mut last = 0;
    for (i, a) in state.amps.iter().enumerate() {
        let p = a.norm_sqr();
        if p == 0.0 {
            continue;
        }
        acc += p;
        last = i;
        if r < acc {
            return i;
        }
    }
    last
}

pub fn measurement_distribution(state: &StateVector) -> Vec<f64> {
    state.amps.iter().map(|a| a.norm_sqr()).collect()
}

/// `Σ |p − q|`.
pub fn tv_distance(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch { expected: p.len(), got: q.len() });
    }
    Ok(p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum())
}

/// `‖s1 − s2‖₂`.
pub fn euclidean_distance(s1: &StateVector, s2: &StateVector) -> Result<f64> {
    if s1.dim() != s2.dim() {
        return Err(Error::LengthMismatch { expected: s1.dim(), got: s2.dim() });
    }
    Ok(libm::sqrt(s1.amps.iter().zip(&s2.amps).map(|(a, b)| (a - b).norm_sqr()).sum()))
}

/// A Haar-ish random state: independent Gaussian real and imaginary parts, normalized.
pub fn random_state(num_qubits: u32, rng: &mut SplitMix64) -> Result<StateVector> {
    check_qubits(num_qubits)?;
    let amps = (0..1usize << num_qubits)
        .map(|_| Complex64::new(gaussian(rng), gaussian(rng)))
        .collect();
    StateVector::normalized(amps)
}

fn gaussian(rng: &mut SplitMix64) -> f64 {
    let u1 = 1.0 - rng.next_f64();
    let u2 = rng.next_f64();
    libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(core::f64::consts::TAU * u2)
}
