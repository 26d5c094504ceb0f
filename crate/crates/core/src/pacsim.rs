//! Quantum example states and the inner-product identities behind the PAC
//! sample-complexity lower bounds.
//!
//! A QEX call writes `Σ_x √D(x) |x, c(x)⟩` into a fresh `(n+1)`-qubit slot.
//! Slot `j` of a `t`-call register occupies wires `[j(n+1), (j+1)(n+1))`, with
//! `x` on the low `n` wires of the slot and the label on the top wire.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::concept::{self, Concept, ConceptClass};
use crate::error::{Error, Result};
use crate::qsim::{BooleanFunction, StateVector, MAX_QUBITS};

const WEIGHT_TOLERANCE: f64 = 1e-12;

/// A probability distribution over `{0,1}^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    n: u32,
    weights: Vec<f64>,
}

impl Distribution {
    pub fn new(n: u32, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != 1 << n {
            return Err(Error::LengthMismatch { expected: 1 << n, got: weights.len() });
        }
        if weights.iter().any(|w| w.is_nan() || *w < 0.0) {
            return Err(Error::ParameterOutOfRange("weights must be nonnegative".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_TOLERANCE {
            return Err(Error::NotNormalized { norm: total });
        }
        Ok(Self { n, weights })
    }

    /// Point masses `(x, weight)`, zero elsewhere.
    pub fn from_points(n: u32, points: &[(usize, f64)]) -> Result<Self> {
        let mut weights = vec![0.0; 1 << n];
        for &(x, w) in points {
            if x >= weights.len() {
                return Err(Error::InputOutOfRange { input: x, domain: weights.len() });
            }
            weights[x] += w;
        }
        Self::new(n, weights)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn weight(&self, x: usize) -> f64 {
        self.weights[x]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

fn check_width(c: &dyn BooleanFunction, d: &Distribution) -> Result<()> {
    if c.input_bits() != d.n() {
        return Err(Error::LengthMismatch { expected: d.n() as usize, got: c.input_bits() as usize });
    }
    Ok(())
}

/// `Σ_x √D(x) |x, c(x)⟩` on `n + 1` qubits.
pub fn qex_single_state(c: &dyn BooleanFunction, d: &Distribution) -> Result<StateVector> {
    check_width(c, d)?;
    let n = d.n();
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << (n + 1)];
    for (x, &w) in d.weights().iter().enumerate() {
        amps[x | (c.evaluate(x) as usize) << n] = Complex64::new(libm::sqrt(w), 0.0);
    }
    StateVector::from_amplitudes(amps)
}

/// Applies one QEX call to slot `slot`, which must be in `|0^{n+1}⟩` on every
/// basis state in the support.
pub fn apply_qex(state: &mut StateVector, slot: u32, c: &dyn BooleanFunction, d: &Distribution) -> Result<()> {
    check_width(c, d)?;
    let width = d.n() + 1;
    let shift = slot * width;
    if shift + width > state.num_qubits() {
        return Err(Error::WireClash(alloc::format!("slot {slot} outside the register")));
    }
    let slot_mask = ((1usize << width) - 1) << shift;
    let src = state.amplitudes().to_vec();
    if src.iter().enumerate().any(|(i, a)| i & slot_mask != 0 && a.norm_sqr() > 0.0) {
        return Err(Error::WireClash(alloc::format!("slot {slot} is not in |0⟩")));
    }
    let entries: Vec<(usize, f64)> = d
        .weights()
        .iter()
        .enumerate()
        .filter(|(_, w)| **w > 0.0)
        .map(|(x, &w)| ((x | (c.evaluate(x) as usize) << d.n()) << shift, libm::sqrt(w)))
        .collect();
    let amps = state.amplitudes_mut();
    amps.iter_mut().for_each(|a| *a = Complex64::new(0.0, 0.0));
    for (i, a) in src.into_iter().enumerate() {
        if a.norm_sqr() == 0.0 {
            continue;
        }
        for &(offset, s) in &entries {
            amps[i | offset] += a * s;
        }
    }
    Ok(())
}

/// The state after `t` sequential QEX calls, built call by call.
pub fn qex_t_state(c: &dyn BooleanFunction, d: &Distribution, t: u32) -> Result<StateVector> {
    let qubits = t * (d.n() + 1);
    if qubits > MAX_QUBITS {
        return Err(Error::RegisterTooLarge { qubits, cap: MAX_QUBITS });
    }
    let mut state = StateVector::zero(qubits)?;
    for slot in 0..t {
        apply_qex(&mut state, slot, c, d)?;
    }
    Ok(state)
}

/// `D(x_0) = 1 − 3ε`, `D(x_1) = 3ε`, with `c_0 ≡ 0` and `c_1` the indicator of
/// `x_1`. Here `x_0 = 0`, `x_1 = 1` over one input bit.
pub fn two_point_instance(eps: f64) -> Result<(Concept, Concept, Distribution)> {
    if !(eps > 0.0 && eps < 1.0 / 3.0) {
        return Err(Error::ParameterOutOfRange(alloc::format!("ε = {eps} outside (0, 1/3)")));
    }
    let c0 = Concept::from_fn(1, |_| false)?;
    let c1 = Concept::from_fn(1, |x| x == 1)?;
    let d = Distribution::from_points(1, &[(0, 1.0 - 3.0 * eps), (1, 3.0 * eps)])?;
    Ok((c0, c1, d))
}

/// `⟨e_{c0}|e_{c1}⟩^T`, using the product structure of `T` independent calls.
pub fn t_copy_inner_product(c0: &dyn BooleanFunction, c1: &dyn BooleanFunction, d: &Distribution, t: u32) -> Result<f64> {
    if t == 0 {
        return Err(Error::ParameterOutOfRange("T must be at least 1".into()));
    }
    let single = qex_single_state(c0, d)?.inner(&qex_single_state(c1, d)?)?.re;
    Ok(libm::pow(single, f64::from(t)))
}

/// Explicit `⟨ψ_T^{(0)}|ψ_T^{(1)}⟩` from the full `T`-call states.
pub fn t_copy_inner_product_explicit(
    c0: &dyn BooleanFunction,
    c1: &dyn BooleanFunction,
    d: &Distribution,
    t: u32,
) -> Result<f64> {
    Ok(qex_t_state(c0, d, t)?.inner(&qex_t_state(c1, d, t)?)?.re)
}

/// Smallest `T ≥ 0` with `(1 − 3ε)^{2T} ≤ 4δ`, by search.
pub fn pac_threshold_search(eps: f64, delta: f64) -> u64 {
    let base = (1.0 - 3.0 * eps) * (1.0 - 3.0 * eps);
    let mut t = 0u64;
    let mut v = 1.0;
    while v > 4.0 * delta {
        v *= base;
        t += 1;
    }
    t
}

/// `max(0, ⌈log(4δ) / (2·log(1 − 3ε))⌉)`.
pub fn pac_threshold_closed(eps: f64, delta: f64) -> u64 {
    let v = libm::log2(4.0 * delta) / (2.0 * libm::log2(1.0 - 3.0 * eps));
    libm::ceil(v).max(0.0) as u64
}

/// `H(x) = −x log₂ x − (1−x) log₂(1−x)`, zero at the endpoints.
pub fn binary_entropy(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    -x * libm::log2(x) - (1.0 - x) * libm::log2(1.0 - x)
}

/// Lexicographic greedy code: scan `0..2^d` and keep every string at Hamming
/// distance at least `min_dist` from all kept strings.
pub fn greedy_code(d: u32, min_dist: u32) -> Result<Vec<u32>> {
    if d == 0 || d > 24 {
        return Err(Error::ParameterOutOfRange(alloc::format!("d = {d} outside 1..=24")));
    }
    let mut code: Vec<u32> = Vec::new();
    for s in 0..1u32 << d {
        if code.iter().all(|&c| (c ^ s).count_ones() >= min_dist) {
            code.push(s);
        }
    }
    Ok(code)
}

/// Least pairwise Hamming distance, `None` for fewer than two words.
pub fn min_pairwise_distance(code: &[u32]) -> Option<u32> {
    let mut best = None;
    for (i, &a) in code.iter().enumerate() {
        for &b in &code[i + 1..] {
            let dist = (a ^ b).count_ones();
            best = Some(best.map_or(dist, |m: u32| m.min(dist)));
        }
    }
    best
}

/// The hard PAC instance on a shattered set `x_0, …, x_d`.
#[derive(Debug, Clone, PartialEq)]
pub struct PacHardInstance {
    pub d: u32,
    pub eps: f64,
    pub n: u32,
    /// `x_0, x_1, …, x_d`.
    pub shattered: Vec<usize>,
    pub distribution: Distribution,
    /// Code words; string position `j − 1` (bit `d − j`) is the label of `x_j`.
    pub code: Vec<u32>,
    pub concepts: Vec<Concept>,
}

impl PacHardInstance {
    /// Label of `x_j` (`1 ≤ j ≤ d`) under code word `word`.
    pub fn code_bit(&self, word: u32, j: u32) -> bool {
        word >> (self.d - j) & 1 == 1
    }

    /// `2^{⌈d/6⌉}`, the size the greedy code is compared against.
    pub fn packing_target(&self) -> u64 {
        1 << self.d.div_ceil(6)
    }
}

fn ehkv_distribution(d: u32, eps: f64, n: u32, shattered: &[usize]) -> Result<Distribution> {
    let mut points = vec![(shattered[0], 1.0 - 8.0 * eps)];
    points.extend(shattered[1..].iter().map(|&x| (x, 8.0 * eps / f64::from(d))));
    Distribution::from_points(n, &points)
}

fn check_ehkv(d: u32, eps: f64) -> Result<()> {
    if d == 0 || d > 24 {
        return Err(Error::ParameterOutOfRange(alloc::format!("d = {d} outside 1..=24")));
    }
    if !(eps > 0.0 && eps < 0.125) {
        return Err(Error::ParameterOutOfRange(alloc::format!("ε = {eps} outside (0, 1/8)")));
    }
    Ok(())
}

/// `D(x_0) = 1 − 8ε`, `D(x_i) = 8ε/d`, with `x_i = i` and concepts that are 0
/// at `x_0`, follow the greedy code with distance `⌈d/4⌉` on `x_1..x_d`, and
/// are 0 on every other input.
pub fn ehkv_instance(d: u32, eps: f64, n: u32) -> Result<PacHardInstance> {
    check_ehkv(d, eps)?;
    if n > concept::MAX_INPUT_BITS || (1u64 << n) < u64::from(d) + 1 {
        return Err(Error::VcDimensionInsufficient {
            needed: d as usize + 1,
            found: if n > concept::MAX_INPUT_BITS { 0 } else { (1usize << n).min(d as usize) },
        });
    }
    let shattered: Vec<usize> = (0..=d as usize).collect();
    let code = greedy_code(d, d.div_ceil(4))?;
    let concepts = code
        .iter()
        .map(|&w| Concept::from_fn(n, |x| x >= 1 && x <= d as usize && w >> (d as usize - x) & 1 == 1))
        .collect::<Result<Vec<_>>>()?;
    let distribution = ehkv_distribution(d, eps, n, &shattered)?;
    Ok(PacHardInstance { d, eps, n, shattered, distribution, code, concepts })
}

/// As [`ehkv_instance`] but drawing the shattered set and the concepts from
/// `class`, which must have VC dimension at least `d + 1`.
pub fn ehkv_instance_in_class(class: &ConceptClass, d: u32, eps: f64) -> Result<PacHardInstance> {
    check_ehkv(d, eps)?;
    let needed = d as usize + 1;
    let shattered = find_shattered(class, needed).ok_or(Error::VcDimensionInsufficient {
        needed,
        found: concept::vc_dimension(class),
    })?;
    let code = greedy_code(d, d.div_ceil(4))?;
    let concepts = code
        .iter()
        .map(|&w| {
            class
                .rows()
                .iter()
                .find(|c| {
                    !c.value(shattered[0])
                        && (1..=d).all(|j| c.value(shattered[j as usize]) == (w >> (d - j) & 1 == 1))
                })
                .cloned()
                .expect("shattered set realizes every labeling")
        })
        .collect();
    let distribution = ehkv_distribution(d, eps, class.n(), &shattered)?;
    Ok(PacHardInstance { d, eps, n: class.n(), shattered, distribution, code, concepts })
}

fn find_shattered(class: &ConceptClass, size: usize) -> Option<Vec<usize>> {
    fn grow(class: &ConceptClass, start: usize, size: usize, cur: &mut Vec<usize>) -> bool {
        if cur.len() == size {
            return true;
        }
        for x in start..class.domain_size() {
            cur.push(x);
            if concept::is_shattered(class, cur) && grow(class, x + 1, size, cur) {
                return true;
            }
            cur.pop();
        }
        false
    }
    let mut cur = Vec::new();
    grow(class, 0, size, &mut cur).then_some(cur)
}

/// An explicit `t`-slot state with the normalizer of its `|z⟩` component.
#[derive(Debug, Clone, PartialEq)]
pub struct PacState {
    pub t: u32,
    pub state: StateVector,
    pub alpha: f64,
}

fn slot_index(n: u32, x: usize, label: bool, slot: u32) -> usize {
    (x | (label as usize) << n) << (slot * (n + 1))
}

fn check_register(instance: &PacHardInstance, t: u32) -> Result<u32> {
    if t == 0 {
        return Err(Error::ParameterOutOfRange("t must be at least 1".into()));
    }
    let qubits = t * (instance.n + 1);
    if qubits > MAX_QUBITS {
        return Err(Error::RegisterTooLarge { qubits, cap: MAX_QUBITS });
    }
    Ok(qubits)
}

/// `α² = 1 − (1−8ε)^{t−1}(1 − 8ε + 8tε)`.
pub fn alpha_squared_closed(eps: f64, t: u32) -> f64 {
    1.0 - libm::pow(1.0 - 8.0 * eps, f64::from(t) - 1.0) * (1.0 - 8.0 * eps + 8.0 * f64::from(t) * eps)
}

/// `|φ_t⟩`: the `ξ` terms with at most one slot away from `x_0`, plus `α|z⟩`
/// with `z = |x_1, c(x_1), x_1, 1−c(x_1), 0…0⟩`.
pub fn phi_t_state(instance: &PacHardInstance, concept: usize, t: u32) -> Result<PacState> {
    let qubits = check_register(instance, t)?;
    let c = &instance.concepts[concept];
    let n = instance.n;
    let eps = instance.eps;
    let x0 = instance.shattered[0];
    let base: usize = (0..t).map(|s| slot_index(n, x0, c.value(x0), s)).sum();
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << qubits];
    amps[base] = Complex64::new(libm::pow(1.0 - 8.0 * eps, f64::from(t) / 2.0), 0.0);
    let side = libm::pow(1.0 - 8.0 * eps, (f64::from(t) - 1.0) / 2.0) * libm::sqrt(8.0 * eps / f64::from(instance.d));
    for slot in 0..t {
        for &xi in &instance.shattered[1..] {
            let idx = base - slot_index(n, x0, c.value(x0), slot) + slot_index(n, xi, c.value(xi), slot);
            amps[idx] += Complex64::new(side, 0.0);
        }
    }
    let covered: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    let alpha = libm::sqrt((1.0 - covered).max(0.0));
    if t >= 2 {
        let x1 = instance.shattered[1];
        let z = slot_index(n, x1, c.value(x1), 0) + slot_index(n, x1, !c.value(x1), 1);
        amps[z] += Complex64::new(alpha, 0.0);
    }
    Ok(PacState { t, state: StateVector::from_amplitudes(amps)?, alpha })
}

/// `|ψ_t⟩`: `t` QEX calls for the chosen concept.
pub fn psi_t_state(instance: &PacHardInstance, concept: usize, t: u32) -> Result<PacState> {
    check_register(instance, t)?;
    let state = qex_t_state(&instance.concepts[concept], &instance.distribution, t)?;
    Ok(PacState { t, state, alpha: 0.0 })
}

/// Numeric `⟨ψ_t|φ_t⟩` from the explicit states.
pub fn psi_phi_inner(instance: &PacHardInstance, concept: usize, t: u32) -> Result<f64> {
    let phi = phi_t_state(instance, concept, t)?;
    let psi = psi_t_state(instance, concept, t)?;
    Ok(psi.state.inner(&phi.state)?.re)
}

/// `(1−8ε)^t (1 + 8tε/(1−8ε))`.
pub fn psi_phi_inner_closed(eps: f64, t: u32) -> f64 {
    libm::pow(1.0 - 8.0 * eps, f64::from(t)) * (1.0 + 8.0 * f64::from(t) * eps / (1.0 - 8.0 * eps))
}

/// Checks `|⟨ψ⁰|ψ¹⟩| ≤ 2√(δ(1−δ))` for the smallest `δ` with
/// `⟨ψ⁰|Π|ψ⁰⟩ ≥ 1−δ` and `⟨ψ¹|Π|ψ¹⟩ ≤ δ`, where `Π` projects onto the basis
/// states in `projector`. Errors when that `δ` is not below 1/2.
pub fn fidelity_bound_check(s0: &StateVector, s1: &StateVector, projector: &[usize]) -> Result<bool> {
    let (lhs, bound) = fidelity_bound_terms(s0, s1, projector)?;
    Ok(lhs <= bound + 1e-12)
}

/// `(|⟨ψ⁰|ψ¹⟩|, 2√(δ(1−δ)))` as used by [`fidelity_bound_check`].
pub fn fidelity_bound_terms(s0: &StateVector, s1: &StateVector, projector: &[usize]) -> Result<(f64, f64)> {
    let inner = s0.inner(s1)?;
    let mass = |s: &StateVector| -> Result<f64> {
        projector
            .iter()
            .map(|&x| {
                if x < s.dim() {
                    Ok(s.probability(x))
                } else {
                    Err(Error::InputOutOfRange { input: x, domain: s.dim() })
                }
            })
            .sum()
    };
    let p0 = mass(s0)?;
    let p1 = mass(s1)?;
    let delta = (1.0 - p0).max(p1).max(0.0);
    if delta >= 0.5 {
        return Err(Error::NoSeparatingDelta);
    }
    Ok((libm::sqrt(inner.norm_sqr()), 2.0 * libm::sqrt(delta * (1.0 - delta))))
}

/// `d/100`, the query floor for uniform examples over a shattered set.
pub fn uniform_shattered_floor(d: u32) -> f64 {
    f64::from(d) / 100.0
}

/// `√d / (10000 ε)`, the sample floor for the hard instance.
pub fn ehkv_sample_floor(d: u32, eps: f64) -> f64 {
    libm::sqrt(f64::from(d)) / (10000.0 * eps)
}
