//! Membership oracles with query accounting.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::concept::{Concept, FlipMask};
use crate::error::{Error, Result};
use crate::zoo::{ConceptFamily, MultiOutputFunction};

/// Anything that can answer `c(x)`.
pub trait BooleanFunction: Sync {
    fn input_bits(&self) -> u32;

    fn evaluate(&self, x: usize) -> bool;
}

impl BooleanFunction for Concept {
    fn input_bits(&self) -> u32 {
        Concept::input_bits(self)
    }

    fn evaluate(&self, x: usize) -> bool {
        self.value(x)
    }
}

/// One concept of a lazily evaluated family.
#[derive(Debug, Clone, Copy)]
pub struct FamilyMember<'a> {
    pub family: &'a dyn ConceptFamily,
    pub index: u64,
}

impl BooleanFunction for FamilyMember<'_> {
    fn input_bits(&self) -> u32 {
        self.family.input_bits()
    }

    fn evaluate(&self, x: usize) -> bool {
        self.family.evaluate(self.index, x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QueryKind {
    Quantum,
    Classical,
}

/// One oracle call. Quantum calls have no single input or answer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryRecord {
    pub phase: String,
    pub kind: QueryKind,
    pub input: Option<usize>,
    pub answer: Option<bool>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PhaseCounts {
    pub quantum: u64,
    pub classical: u64,
}

/// Query counters, overall and per phase label.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QueryLedger {
    quantum: u64,
    classical: u64,
    phases: Vec<(String, PhaseCounts)>,
}

impl QueryLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn quantum(&self) -> u64 {
        self.quantum
    }

    pub fn classical(&self) -> u64 {
        self.classical
    }

    pub fn total(&self) -> u64 {
        self.quantum + self.classical
    }

    /// Per-phase counts in order of first use.
    pub fn phases(&self) -> &[(String, PhaseCounts)] {
        &self.phases
    }

    pub fn phase(&self, label: &str) -> PhaseCounts {
        self.phases.iter().find(|(l, _)| l == label).map(|(_, c)| *c).unwrap_or_default()
    }

    fn slot(&mut self, phase: &str) -> &mut PhaseCounts {
        let at = match self.phases.iter().position(|(l, _)| l == phase) {
            Some(i) => i,
            None => {
                self.phases.push((phase.to_string(), PhaseCounts::default()));
                self.phases.len() - 1
            }
        };
        &mut self.phases[at].1
    }

    pub fn charge(&mut self, phase: &str, kind: QueryKind) {
        match kind {
            QueryKind::Quantum => {
                self.quantum += 1;
                self.slot(phase).quantum += 1;
            }
            QueryKind::Classical => {
                self.classical += 1;
                self.slot(phase).classical += 1;
            }
        }
    }

    /// Adds another ledger's counts, phase by phase.
    pub fn absorb(&mut self, other: &Self) {
        self.quantum += other.quantum;
        self.classical += other.classical;
        for (label, c) in &other.phases {
            let s = self.slot(label);
            s.quantum += c.quantum;
            s.classical += c.classical;
        }
    }
}

/// A hidden concept behind a membership oracle, optionally seen through a
/// column flip. Every call is charged to the ledger and appended to the
/// transcript.
pub struct OracleSpec<'a> {
    target: &'a dyn BooleanFunction,
    flips: Option<FlipMask>,
    ledger: QueryLedger,
    transcript: Vec<QueryRecord>,
    phase: String,
}

impl fmt::Debug for OracleSpec<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OracleSpec")
            .field("input_bits", &self.target.input_bits())
            .field("flips", &self.flips)
            .field("ledger", &self.ledger)
            .finish_non_exhaustive()
    }
}

impl<'a> OracleSpec<'a> {
    pub fn new(target: &'a dyn BooleanFunction) -> Self {
        Self {
            target,
            flips: None,
            ledger: QueryLedger::new(),
            transcript: Vec::new(),
            phase: String::from("main"),
        }
    }

    pub fn with_flips(mut self, flips: FlipMask) -> Result<Self> {
        self.set_flips(Some(flips))?;
        Ok(self)
    }

    pub fn set_flips(&mut self, flips: Option<FlipMask>) -> Result<()> {
        if let Some(f) = &flips {
            if f.len() != self.domain_size() {
                return Err(Error::LengthMismatch { expected: self.domain_size(), got: f.len() });
            }
        }
        self.flips = flips.filter(|f| !f.is_identity());
        Ok(())
    }

    pub fn flips(&self) -> Option<&FlipMask> {
        self.flips.as_ref()
    }

    pub fn set_phase(&mut self, phase: &str) {
        if self.phase != phase {
            self.phase = phase.to_string();
        }
    }

    pub fn input_bits(&self) -> u32 {
        self.target.input_bits()
    }

    pub fn domain_size(&self) -> usize {
        1 << self.target.input_bits()
    }

    pub fn ledger(&self) -> &QueryLedger {
        &self.ledger
    }

    pub fn transcript(&self) -> &[QueryRecord] {
        &self.transcript
    }

    pub fn into_parts(self) -> (QueryLedger, Vec<QueryRecord>) {
        (self.ledger, self.transcript)
    }

    /// Flip-adjusted value, not charged. Only the simulator's oracle gates use it.
    #[inline]
    pub(crate) fn effective(&self, x: usize) -> bool {
        self.target.evaluate(x) ^ self.flips.as_ref().is_some_and(|f| f.is_flipped(x))
    }

    /// One classical membership query (flip-adjusted).
    pub fn classical_query(&mut self, x: usize) -> Result<bool> {
        if x >= self.domain_size() {
            return Err(Error::InputOutOfRange { input: x, domain: self.domain_size() });
        }
        let answer = self.effective(x);
        self.ledger.charge(&self.phase, QueryKind::Classical);
        self.transcript.push(QueryRecord {
            phase: self.phase.clone(),
            kind: QueryKind::Classical,
            input: Some(x),
            answer: Some(answer),
        });
        Ok(answer)
    }

    pub(crate) fn charge_quantum(&mut self) {
        self.ledger.charge(&self.phase, QueryKind::Quantum);
        self.transcript.push(QueryRecord {
            phase: self.phase.clone(),
            kind: QueryKind::Quantum,
            input: None,
            answer: None,
        });
    }
}

/// Oracle for a multi-output function `f: {0,1}^m → {0,1}^m`, counting f-queries.
#[derive(Debug, Clone)]
pub struct FunctionOracle<'a> {
    f: &'a MultiOutputFunction,
    ledger: QueryLedger,
}

impl<'a> FunctionOracle<'a> {
    pub fn new(f: &'a MultiOutputFunction) -> Self {
        Self { f, ledger: QueryLedger::new() }
    }

    pub fn m(&self) -> u32 {
        self.f.m()
    }

    pub fn ledger(&self) -> &QueryLedger {
        &self.ledger
    }

    /// Each f-query simulates as `m` membership queries to the flattened concept.
    pub fn flattened_cost(&self) -> u64 {
        self.ledger.total() * u64::from(self.f.m())
    }

    pub fn classical_query(&mut self, x: u32) -> Result<u32> {
        if x >= 1 << self.f.m() {
            return Err(Error::InputOutOfRange { input: x as usize, domain: 1 << self.f.m() });
        }
        self.ledger.charge("f", QueryKind::Classical);
        Ok(self.f.evaluate(x))
    }

    pub(crate) fn function(&self) -> &'a MultiOutputFunction {
        self.f
    }

    pub(crate) fn charge_quantum(&mut self) {
        self.ledger.charge("f", QueryKind::Quantum);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ledger_phases_sum_to_totals() {
        let c = Concept::from_fn(2, |x| x == 3).unwrap();
        let mut o = OracleSpec::new(&c);
        o.set_phase("a");
        assert!(!o.classical_query(0).unwrap());
        o.charge_quantum();
        o.set_phase("b");
        assert!(o.classical_query(3).unwrap());
        let l = o.ledger();
        assert_eq!((l.quantum(), l.classical()), (1, 2));
        let sum = l.phases().iter().fold((0, 0), |acc, (_, c)| (acc.0 + c.quantum, acc.1 + c.classical));
        assert_eq!(sum, (1, 2));
        assert_eq!(l.phase("a"), PhaseCounts { quantum: 1, classical: 1 });
        assert_eq!(o.transcript().len(), 3);
        assert!(o.classical_query(4).is_err());
    }

    #[test]
    fn flips_invert_answers() {
        let c = Concept::from_fn(2, |x| x == 3).unwrap();
        let mut o = OracleSpec::new(&c).with_flips(FlipMask::from_inputs(4, [0, 3])).unwrap();
        assert!(o.classical_query(0).unwrap());
        assert!(!o.classical_query(3).unwrap());
        assert!(!o.classical_query(1).unwrap());
    }
}
