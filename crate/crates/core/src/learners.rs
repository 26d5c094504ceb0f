//! Exact learners from membership queries.
//!
//! * [`quantum_exact_learn`]: repeated subset Grover search over a semi-rich
//!   input set, halving the version space each outer round.
//! * [`classical_halving_learn`]: greedy elimination on the most balanced input.
//! * [`nested_bv_learn`]: one Bernstein–Vazirani run per parity block.

use alloc::vec::Vec;

use crate::concept::{self, Concept, ConceptClass, Rational};
use crate::error::{Error, Result};
use crate::qsim::{self, BooleanFunction, OracleSpec, QueryLedger, QueryRecord};
use crate::rng::SplitMix64;
use crate::zoo::{ClassSpec, ConceptFamily, NestedBvFamily, ParityFamily, PrefixedParityFamily};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LearnResult {
    /// `None` when the version space emptied, which only happens after a
    /// search missed a marked input.
    pub hypothesis: Option<Concept>,
    pub success: bool,
    pub ledger: QueryLedger,
    pub transcript: Vec<QueryRecord>,
    pub outer_iterations: u32,
}

fn truth_table(target: &dyn BooleanFunction) -> Concept {
    Concept::from_fn(target.input_bits(), |x| target.evaluate(x)).expect("oracle width in range")
}

fn locate_target(class: &ConceptClass, target: &dyn BooleanFunction) -> Result<Concept> {
    if target.input_bits() != class.n() {
        return Err(Error::TargetNotInClass);
    }
    let table = truth_table(target);
    class.index_of(table.table()).ok_or(Error::TargetNotInClass)?;
    Ok(table)
}

fn finish(
    oracle: OracleSpec<'_>,
    hypothesis: Option<Concept>,
    target: &Concept,
    outer_iterations: u32,
) -> LearnResult {
    let (ledger, transcript) = oracle.into_parts();
    LearnResult {
        success: hypothesis.as_ref() == Some(target),
        hypothesis,
        ledger,
        transcript,
        outer_iterations,
    }
}

/// `max(1, ⌈log₂(3·log₂|C|)⌉)`, the number of searches per outer round.
pub fn inner_repetitions(class_size: usize) -> u32 {
    if class_size < 2 {
        return 1;
    }
    let x = 3.0 * libm::log2(class_size as f64);
    (libm::ceil(libm::log2(x)) as u32).max(1)
}

/// `⌈log₂ s⌉` for `s ≥ 1`.
pub fn ceil_log2(s: usize) -> u32 {
    if s <= 1 { 0 } else { usize::BITS - (s - 1).leading_zeros() }
}

/// Deterministic quantum-query cap
/// `⌈log₂|C|⌉ · ⌈log₂(3·log₂|C|)⌉ · ⌈4.5·√⌊1/γ̂⌋⌉`.
pub fn quantum_query_cap(class_size: usize, gamma_hat: Rational) -> u64 {
    let inv = gamma_hat.recip().to_integer() as usize;
    u64::from(ceil_log2(class_size)) * u64::from(inner_repetitions(class_size)) * qsim::bbht_budget(inv)
}

/// Quantum exact learning by subset Grover search.
///
/// Each outer round flips the version space `S` to 1-sensitivity (record `K`),
/// builds a semi-rich input set `I` for the flipped view, and runs up to
/// [`inner_repetitions`] searches over `I` against the `K`-flipped oracle, each
/// followed by one classical confirmation query at the returned input. A
/// confirmed 1 at `a` keeps the members of `S` with 1 at `a`; if no search
/// confirms, `S` keeps the members that are 0 on all of `I`.
pub fn quantum_exact_learn(
    class: &ConceptClass,
    target: &dyn BooleanFunction,
    rng: &mut SplitMix64,
) -> Result<LearnResult> {
    if class.len() < 2 {
        return Err(Error::SubsetTooSmall { needed: 2, got: class.len() });
    }
    let truth = locate_target(class, target)?;
    let reps = inner_repetitions(class.len());
    let mut oracle = OracleSpec::new(target);
    let mut s = class.full_set();
    let mut outer = 0u32;
    while s.len() > 1 {
        outer += 1;
        let k = concept::one_sensitive_mask_in(class.view(None), &s);
        let view = class.view(Some(&k));
        let inputs = concept::build_semirich_set_in(view, &s);
        oracle.set_flips(Some(k.clone()))?;
        let mut confirmed = None;
        for _ in 0..reps {
            oracle.set_phase("search");
            let out = qsim::bbht_subset_search(&mut oracle, &inputs, rng)?;
            let a = out.last_candidate.expect("search measures at least once");
            oracle.set_phase("confirm");
            if oracle.classical_query(a)? {
                confirmed = Some(a);
                break;
            }
        }
        s = match confirmed {
            Some(a) => view.with_value_at(a, true, &s),
            None => view.all_zero_on(&inputs, &s),
        };
        oracle.set_flips(None)?;
    }
    let hypothesis = s.first().map(|i| class.row(i).clone());
    Ok(finish(oracle, hypothesis, &truth, outer))
}

/// `⌈log₂|C| / (−log₂(1−γ̂))⌉`.
pub fn halving_query_bound(class_size: usize, gamma_hat: Rational) -> u64 {
    let g = *gamma_hat.numer() as f64 / *gamma_hat.denom() as f64;
    let bound = libm::log2(class_size as f64) / -libm::log2(1.0 - g);
    // Absorb rounding in exact cases such as log₂16 / 1.
    libm::ceil(bound - 1e-12).max(0.0) as u64
}

/// Greedy classical learner: query the input where the version space is most
/// evenly split (smallest input on ties) and drop inconsistent concepts.
pub fn classical_halving_learn(class: &ConceptClass, target: &dyn BooleanFunction) -> Result<LearnResult> {
    let truth = locate_target(class, target)?;
    let view = class.view(None);
    let mut oracle = OracleSpec::new(target);
    oracle.set_phase("halving");
    let mut s = class.full_set();
    while s.len() > 1 {
        let size = s.len();
        let mut best = (0usize, 0usize);
        for x in 0..class.domain_size() {
            let ones = view.ones_at(x, &s);
            let m = ones.min(size - ones);
            if m > best.1 {
                best = (x, m);
            }
        }
        let answer = oracle.classical_query(best.0)?;
        s = view.with_value_at(best.0, answer, &s);
    }
    let hypothesis = s.first().map(|i| class.row(i).clone());
    if hypothesis.is_none() {
        return Err(Error::OracleInconsistent);
    }
    Ok(finish(oracle, hypothesis, &truth, 0))
}

/// Block-wise Bernstein–Vazirani for parity, nested-parity and prefixed-parity
/// classes. One quantum query per block; exact.
pub fn nested_bv_learn(
    spec: &ClassSpec,
    target: &dyn BooleanFunction,
    rng: &mut SplitMix64,
) -> Result<LearnResult> {
    let mut oracle = OracleSpec::new(target);
    oracle.set_phase("bv");
    let (index, family): (u64, alloc::boxed::Box<dyn ConceptFamily>) = match *spec {
        ClassSpec::Parity { n } => {
            check_width(target, n)?;
            (qsim::bernstein_vazirani(&mut oracle, rng)?, alloc::boxed::Box::new(ParityFamily::new(n)?))
        }
        ClassSpec::NestedBv { n, d } => {
            check_width(target, n)?;
            let fam = NestedBvFamily::new(n, d)?;
            let mut a = 0u64;
            for b in 0..fam.blocks() {
                let active = fam.block_mask() << fam.block_shift(b);
                a |= qsim::bernstein_vazirani_block(&mut oracle, active, 0, rng)?;
            }
            (a, alloc::boxed::Box::new(fam))
        }
        ClassSpec::PrefixedParity { n, k } => {
            check_width(target, n)?;
            let fam = PrefixedParityFamily::new(n, k)?;
            let s = fam.suffix_bits();
            let blocks: Vec<u64> = (0..1usize << k)
                .map(|i| qsim::bernstein_vazirani_block(&mut oracle, (1 << s) - 1, i << s, rng))
                .collect::<Result<_>>()?;
            (fam.index_from_blocks(&blocks), alloc::boxed::Box::new(fam))
        }
        _ => {
            return Err(Error::SpecMismatch(alloc::format!(
                "block Bernstein–Vazirani needs a parity-type class, got {spec}"
            )))
        }
    };
    let truth = truth_table(target);
    let hypothesis = family.concept(index);
    Ok(finish(oracle, Some(hypothesis), &truth, 0))
}

fn check_width(target: &dyn BooleanFunction, n: u32) -> Result<()> {
    if target.input_bits() != n {
        return Err(Error::SpecMismatch(alloc::format!(
            "target has {} input bits, class has {n}",
            target.input_bits()
        )));
    }
    Ok(())
}

/// Summary of one trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialOutcome {
    pub target: u64,
    pub success: bool,
    pub quantum: u64,
    pub classical: u64,
    pub outer_iterations: u32,
}

impl TrialOutcome {
    pub fn from_result(target: u64, r: &LearnResult) -> Self {
        Self {
            target,
            success: r.success,
            quantum: r.ledger.quantum(),
            classical: r.ledger.classical(),
            outer_iterations: r.outer_iterations,
        }
    }
}

/// `(min, median, max)`; the median is the lower middle element.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Quantiles {
    pub min: u64,
    pub median: u64,
    pub max: u64,
}

impl Quantiles {
    pub fn of(values: impl IntoIterator<Item = u64>) -> Self {
        let mut v: Vec<u64> = values.into_iter().collect();
        if v.is_empty() {
            return Self::default();
        }
        v.sort_unstable();
        Self { min: v[0], median: v[(v.len() - 1) / 2], max: v[v.len() - 1] }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialReport {
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub quantum: Quantiles,
    pub classical: Quantiles,
    pub seed: u64,
    pub outcomes: Vec<TrialOutcome>,
}

impl TrialReport {
    pub fn from_outcomes(seed: u64, outcomes: Vec<TrialOutcome>) -> Self {
        let successes = outcomes.iter().filter(|o| o.success).count();
        let trials = outcomes.len();
        Self {
            trials,
            successes,
            success_rate: if trials == 0 { 0.0 } else { successes as f64 / trials as f64 },
            quantum: Quantiles::of(outcomes.iter().map(|o| o.quantum)),
            classical: Quantiles::of(outcomes.iter().map(|o| o.classical)),
            seed,
            outcomes,
        }
    }

    pub fn max_outer_iterations(&self) -> u32 {
        self.outcomes.iter().map(|o| o.outer_iterations).max().unwrap_or(0)
    }
}

/// Target and random stream of trial `i`: targets cycle through the class when
/// it has at most `trials` members, otherwise they are drawn from the stream.
pub fn trial_setup(class_size: u64, trials: usize, seed: u64, i: usize) -> (u64, SplitMix64) {
    let mut rng = SplitMix64::derive(seed, i as u64);
    let target = if class_size <= trials as u64 {
        i as u64 % class_size
    } else {
        rng.below(class_size)
    };
    (target, rng)
}

/// Runs `trials` independent trials of `learner(target_index, rng)`.
pub fn run_trials<F>(class_size: u64, trials: usize, seed: u64, mut learner: F) -> Result<TrialReport>
where
    F: FnMut(u64, &mut SplitMix64) -> Result<LearnResult>,
{
    if trials == 0 || class_size == 0 {
        return Err(Error::ParameterOutOfRange("trials and class size must be positive".into()));
    }
    let outcomes = (0..trials)
        .map(|i| {
            let (target, mut rng) = trial_setup(class_size, trials, seed, i);
            learner(target, &mut rng).map(|r| TrialOutcome::from_result(target, &r))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TrialReport::from_outcomes(seed, outcomes))
}
