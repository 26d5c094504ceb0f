//! Exact state-vector simulation of the quantum query subroutines.
//!
//! Only oracle applications are charged to a ledger; state preparation,
//! Hadamard layers and diffusion are free.

pub mod gf2;
pub mod oracle;
pub mod state;

use alloc::vec::Vec;

use num_complex::Complex64;

pub use gf2::{gf2_nullspace_basis, gf2_rank, gf2_span_contains, SubspaceF2};
pub use oracle::{
    BooleanFunction, FamilyMember, FunctionOracle, OracleSpec, PhaseCounts, QueryKind, QueryLedger,
    QueryRecord,
};
pub use state::{
    euclidean_distance, measure_all, measurement_distribution, random_state, tv_distance,
    StateVector, MAX_QUBITS,
};

use crate::error::{Error, Result};
use crate::rng::SplitMix64;

/// Largest probability allowed to escape the search subspace.
pub const LEAK_TOLERANCE: f64 = 1e-9;

/// `|x, b⟩ ↦ |x, b ⊕ c'(x)⟩` where wire `input_wires[j]` carries bit `j` of `x`.
pub fn apply_qmq(
    state: &mut StateVector,
    oracle: &mut OracleSpec<'_>,
    input_wires: &[u32],
    ancilla_wire: u32,
) -> Result<()> {
    if input_wires.len() != oracle.input_bits() as usize {
        return Err(Error::LengthMismatch {
            expected: oracle.input_bits() as usize,
            got: input_wires.len(),
        });
    }
    let mut seen = 0u64;
    for &w in input_wires.iter().chain(core::iter::once(&ancilla_wire)) {
        state.check_wire(w)?;
        if seen >> w & 1 == 1 {
            return Err(Error::WireClash(alloc::format!("wire {w} used twice")));
        }
        seen |= 1 << w;
    }
    let anc = 1usize << ancilla_wire;
    let amps = state.amplitudes_mut();
    for i in 0..amps.len() {
        if i & anc != 0 {
            continue;
        }
        let x = input_wires
            .iter()
            .enumerate()
            .fold(0usize, |x, (j, &w)| x | (i >> w & 1) << j);
        if oracle.effective(x) {
            amps.swap(i, i | anc);
        }
    }
    oracle.charge_quantum();
    Ok(())
}

/// `|x⟩ ↦ (−1)^{c'(x)} |x⟩` on a register of exactly the oracle's input width.
pub fn apply_phase_oracle(state: &mut StateVector, oracle: &mut OracleSpec<'_>) -> Result<()> {
    if state.num_qubits() != oracle.input_bits() {
        return Err(Error::LengthMismatch {
            expected: oracle.input_bits() as usize,
            got: state.num_qubits() as usize,
        });
    }
    for (x, a) in state.amplitudes_mut().iter_mut().enumerate() {
        if oracle.effective(x) {
            *a = -*a;
        }
    }
    oracle.charge_quantum();
    Ok(())
}

/// Equal superposition over `inputs` in a register sized for the oracle.
pub fn prepare_uniform_subset(inputs: &[usize], num_qubits: u32) -> Result<StateVector> {
    StateVector::uniform_subset(inputs, num_qubits)
}

/// One phase-oracle call followed by inversion about the mean on `span{|x⟩ : x ∈ I}`.
pub fn grover_iterate(
    state: &mut StateVector,
    oracle: &mut OracleSpec<'_>,
    inputs: &[usize],
) -> Result<()> {
    let leak = state.leak_outside(inputs);
    if leak > LEAK_TOLERANCE {
        return Err(Error::SupportLeak { leak });
    }
    apply_phase_oracle(state, oracle)?;
    let amps = state.amplitudes_mut();
    let mean = inputs.iter().map(|&x| amps[x]).sum::<Complex64>() / inputs.len() as f64;
    for &x in inputs {
        amps[x] = mean * 2.0 - amps[x];
    }
    Ok(())
}

/// `⌈(9/2)·√|I|⌉`, computed exactly.
pub fn bbht_budget(subset_size: usize) -> u64 {
    // Smallest b with 2b ≥ 9√s, i.e. 4b² ≥ 81s.
    let target = 81 * subset_size as u128;
    let mut b = libm::ceil(4.5 * libm::sqrt(subset_size as f64)) as u128;
    while b > 0 && 4 * (b - 1) * (b - 1) >= target {
        b -= 1;
    }
    while 4 * b * b < target {
        b += 1;
    }
    b as u64
}

/// Outcome of one [`bbht_subset_search`] call.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BbhtOutcome {
    /// A verified marked input, if one was found.
    pub found: Option<usize>,
    /// The last measured candidate (equal to `found` on success).
    pub last_candidate: Option<usize>,
    pub grover_iterations: u64,
    pub verifications: u64,
}

impl BbhtOutcome {
    /// Oracle calls of both kinds.
    pub fn oracle_calls(&self) -> u64 {
        self.grover_iterations + self.verifications
    }
}

/// Grover search with an unknown number of marked elements, restricted to `I`.
///
/// Rounds draw `j` uniformly from `[0, ⌈M⌉)`, run `j` Grover iterations from the
/// uniform state on `I`, measure, and check the outcome with one classical
/// query. `M` starts at 1 and grows by 6/5 per round up to `√|I|`. Iterations
/// and checks share the hard budget [`bbht_budget`].
pub fn bbht_subset_search(
    oracle: &mut OracleSpec<'_>,
    inputs: &[usize],
    rng: &mut SplitMix64,
) -> Result<BbhtOutcome> {
    if inputs.is_empty() {
        return Err(Error::EmptyInputSet);
    }
    let budget = bbht_budget(inputs.len());
    let cap = libm::sqrt(inputs.len() as f64);
    let mut m = 1.0f64;
    let mut out = BbhtOutcome { found: None, last_candidate: None, grover_iterations: 0, verifications: 0 };
    while out.oracle_calls() < budget {
        let remaining = budget - out.oracle_calls();
        let j = rng.below(libm::ceil(m) as u64).min(remaining - 1);
        let mut state = prepare_uniform_subset(inputs, oracle.input_bits())?;
        for _ in 0..j {
            grover_iterate(&mut state, oracle, inputs)?;
        }
        out.grover_iterations += j;
        let x = measure_all(&state, rng);
        out.last_candidate = Some(x);
        out.verifications += 1;
        if oracle.classical_query(x)? {
            out.found = Some(x);
            break;
        }
        m = (m * 6.0 / 5.0).min(cap);
    }
    Ok(out)
}

/// Bernstein–Vazirani on the whole register: one query, returns `a` for a
/// parity oracle `x ↦ a·x`.
pub fn bernstein_vazirani(oracle: &mut OracleSpec<'_>, rng: &mut SplitMix64) -> Result<u64> {
    let wires = if oracle.input_bits() >= 64 { u64::MAX } else { (1u64 << oracle.input_bits()) - 1 };
    bernstein_vazirani_block(oracle, wires, 0, rng)
}

/// Bernstein–Vazirani on the qubits in `active`, the others held at the bits of
/// `base`. Returns the measured bits of `active` (in place, other bits zero).
pub fn bernstein_vazirani_block(
    oracle: &mut OracleSpec<'_>,
    active: u64,
    base: usize,
    rng: &mut SplitMix64,
) -> Result<u64> {
    let n = oracle.input_bits();
    let mut state = StateVector::basis(n, base & !(active as usize))?;
    state.hadamard_mask(active)?;
    apply_phase_oracle(&mut state, oracle)?;
    state.hadamard_mask(active)?;
    Ok(measure_all(&state, rng) as u64 & active)
}

/// `|x⟩|y⟩ ↦ |x⟩|y ⊕ f(x)⟩` with `x` on wires `0..m` and `y` on `m..2m`.
pub fn apply_function_oracle(state: &mut StateVector, oracle: &mut FunctionOracle<'_>) -> Result<()> {
    let m = oracle.m();
    if state.num_qubits() != 2 * m {
        return Err(Error::LengthMismatch { expected: 2 * m as usize, got: state.num_qubits() as usize });
    }
    let f = oracle.function();
    let xmask = (1usize << m) - 1;
    let src: Vec<Complex64> = state.amplitudes().to_vec();
    let amps = state.amplitudes_mut();
    for (i, a) in src.into_iter().enumerate() {
        let x = i & xmask;
        let y = i >> m;
        let target = x | (y ^ f.evaluate(x as u32) as usize) << m;
        amps[target] = a;
    }
    oracle.charge_quantum();
    Ok(())
}

/// One round of Simon's algorithm: returns a `y` with `y·v = 0` for all `v ∈ V`.
pub fn simon_sample(oracle: &mut FunctionOracle<'_>, rng: &mut SplitMix64) -> Result<u64> {
    let m = oracle.m();
    if oracle.function().is_constant() {
        return Err(Error::ParameterOutOfRange(
            "constant f: V would be all of F₂^m, need dim V < m".into(),
        ));
    }
    let state = simon_final_state(oracle)?;
    Ok((measure_all(&state, rng) & ((1 << m) - 1)) as u64)
}

/// Final state of one Simon round before measurement.
pub fn simon_final_state(oracle: &mut FunctionOracle<'_>) -> Result<StateVector> {
    let m = oracle.m();
    let mut state = StateVector::zero(2 * m)?;
    let xwires = (1u64 << m) - 1;
    state.hadamard_mask(xwires)?;
    apply_function_oracle(&mut state, oracle)?;
    state.hadamard_mask(xwires)?;
    Ok(state)
}
