//! Generators for the named concept classes and seeded random classes.
//!
//! Strings are read most-significant bit first: position `p` of an `n`-bit
//! string is bit `n − 1 − p` of the input integer. The parity concept for `a`
//! has index `a`.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_rational::Ratio;

use crate::bits::BitVec;
use crate::concept::{self, Concept, ConceptClass, ConceptSet, GammaReport, Rational, MAX_INPUT_BITS};
use crate::error::{Error, Result};
use crate::qsim::gf2::SubspaceF2;
use crate::rng::SplitMix64;

/// Largest `|C|·2^n` (in bits) a class may occupy when materialized.
pub const MATERIALIZE_CAP_BITS: u64 = 1 << 28;

/// Largest `|C|` accepted by [`random_class`].
pub const RANDOM_CLASS_CAP: usize = 4096;

/// Largest `m` for V-invariant functions.
pub const MAX_MULTI_OUTPUT_BITS: u32 = 10;

/// Largest prefixed-parity exponent `2^k(n−k)`.
pub const PREFIXED_PARITY_CAP_LOG: u32 = 24;

/// Default number of sampled functions per subspace in a V-invariant class.
pub const DEFAULT_PER_SUBSPACE: usize = 4;

fn check_n(n: u32) -> Result<()> {
    if n == 0 || n > MAX_INPUT_BITS {
        return Err(Error::ParameterOutOfRange(format!("n = {n} outside 1..={MAX_INPUT_BITS}")));
    }
    Ok(())
}

#[inline]
fn parity(v: u64) -> bool {
    v.count_ones() & 1 == 1
}

/// A class whose concepts are evaluated by index rather than stored.
pub trait ConceptFamily: fmt::Debug + Send + Sync {
    fn input_bits(&self) -> u32;

    fn size(&self) -> u64;

    fn evaluate(&self, index: u64, x: usize) -> bool;

    fn concept(&self, index: u64) -> Concept {
        Concept::from_fn(self.input_bits(), |x| self.evaluate(index, x))
            .expect("family input width is in range")
    }

    fn materialize(&self) -> Result<ConceptClass> {
        let n = self.input_bits();
        let bits = self.size().saturating_mul(1 << n);
        if bits > MATERIALIZE_CAP_BITS {
            return Err(Error::ClassTooLarge {
                size: usize::try_from(self.size()).unwrap_or(usize::MAX),
                cap: (MATERIALIZE_CAP_BITS >> n) as usize,
            });
        }
        ConceptClass::new(n, (0..self.size()).map(|i| self.concept(i)).collect())
    }
}

/// `c_a(x) = a·x mod 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParityFamily {
    n: u32,
}

impl ParityFamily {
    pub fn new(n: u32) -> Result<Self> {
        check_n(n)?;
        Ok(Self { n })
    }
}

impl ConceptFamily for ParityFamily {
    fn input_bits(&self) -> u32 {
        self.n
    }

    fn size(&self) -> u64 {
        1 << self.n
    }

    fn evaluate(&self, index: u64, x: usize) -> bool {
        parity(index & x as u64)
    }
}

/// OR of parities over consecutive blocks of the input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NestedBvFamily {
    n: u32,
    d: u32,
    blocks: u32,
    width: u32,
}

impl NestedBvFamily {
    /// `n^{1/d}` blocks of `n^{(d−1)/d}` bits each. For `d = 1` the class is a
    /// single parity block.
    pub fn new(n: u32, d: u32) -> Result<Self> {
        check_n(n)?;
        if d == 0 {
            return Err(Error::ParameterOutOfRange("d must be at least 1".to_string()));
        }
        if d == 1 {
            return Ok(Self { n, d, blocks: 1, width: n });
        }
        let blocks = (1..=n)
            .find(|b| b.checked_pow(d) == Some(n))
            .ok_or_else(|| Error::ParameterOutOfRange(format!("n = {n} is not a perfect {d}-th power")))?;
        Ok(Self { n, d, blocks, width: n / blocks })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn blocks(&self) -> u32 {
        self.blocks
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    /// Left shift placing block `b` (0-based, leftmost first) in the input.
    pub fn block_shift(&self, b: u32) -> u32 {
        self.n - (b + 1) * self.width
    }

    pub fn block_mask(&self) -> u64 {
        (1u64 << self.width) - 1
    }
}

impl ConceptFamily for NestedBvFamily {
    fn input_bits(&self) -> u32 {
        self.n
    }

    fn size(&self) -> u64 {
        1 << self.n
    }

    fn evaluate(&self, index: u64, x: usize) -> bool {
        let ax = index & x as u64;
        (0..self.blocks).any(|b| parity(ax >> self.block_shift(b) & self.block_mask()))
    }
}

/// Concepts `x ↦ a^i·y mod 2` where `i` is the `k`-bit prefix and `y` the suffix.
///
/// Concept index `Σ a^i << (i·(n−k))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrefixedParityFamily {
    n: u32,
    k: u32,
}

impl PrefixedParityFamily {
    pub fn new(n: u32, k: u32) -> Result<Self> {
        check_n(n)?;
        if k == 0 || k >= n {
            return Err(Error::ParameterOutOfRange(format!("k = {k} outside 1..{n}")));
        }
        let log = (1u64 << k) * u64::from(n - k);
        if log > u64::from(PREFIXED_PARITY_CAP_LOG) {
            return Err(Error::ClassTooLarge { size: usize::MAX, cap: 1 << PREFIXED_PARITY_CAP_LOG });
        }
        Ok(Self { n, k })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn suffix_bits(&self) -> u32 {
        self.n - self.k
    }

    /// `a^i` of a concept index.
    pub fn block(&self, index: u64, i: u32) -> u64 {
        index >> (i * self.suffix_bits()) & ((1 << self.suffix_bits()) - 1)
    }

    pub fn index_from_blocks(&self, blocks: &[u64]) -> u64 {
        blocks
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &a)| acc | a << (i as u32 * self.suffix_bits()))
    }
}

impl ConceptFamily for PrefixedParityFamily {
    fn input_bits(&self) -> u32 {
        self.n
    }

    fn size(&self) -> u64 {
        1 << ((1u32 << self.k) * self.suffix_bits())
    }

    fn evaluate(&self, index: u64, x: usize) -> bool {
        let s = self.suffix_bits();
        let i = (x >> s) as u32;
        parity(self.block(index, i) & (x as u64 & ((1 << s) - 1)))
    }
}

pub fn parity_class(n: u32) -> Result<ConceptClass> {
    ParityFamily::new(n)?.materialize()
}

pub fn delta_class(n: u32) -> Result<ConceptClass> {
    check_n(n)?;
    let size = 1usize << n;
    if (size as u64) * (size as u64) > MATERIALIZE_CAP_BITS {
        return Err(Error::ClassTooLarge { size, cap: 1 << 14 });
    }
    ConceptClass::new(n, (0..size).map(|i| Concept::from_fn(n, |x| x == i)).collect::<Result<_>>()?)
}

pub fn nested_bv_class(n: u32, d: u32) -> Result<ConceptClass> {
    NestedBvFamily::new(n, d)?.materialize()
}

pub fn prefixed_parity_class(n: u32, k: u32) -> Result<ConceptClass> {
    PrefixedParityFamily::new(n, k)?.materialize()
}

/// `f: {0,1}^m → {0,1}^m` as a value table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiOutputFunction {
    m: u32,
    table: Vec<u32>,
}

impl MultiOutputFunction {
    pub fn new(m: u32, table: Vec<u32>) -> Result<Self> {
        if m == 0 || m > MAX_MULTI_OUTPUT_BITS {
            return Err(Error::ParameterOutOfRange(format!(
                "m = {m} outside 1..={MAX_MULTI_OUTPUT_BITS}"
            )));
        }
        if table.len() != 1 << m {
            return Err(Error::LengthMismatch { expected: 1 << m, got: table.len() });
        }
        if let Some(&v) = table.iter().find(|&&v| v >= 1 << m) {
            return Err(Error::ParameterOutOfRange(format!("value {v} does not fit in {m} bits")));
        }
        Ok(Self { m, table })
    }

    pub fn from_fn(m: u32, f: impl FnMut(u32) -> u32) -> Result<Self> {
        let size = if m <= MAX_MULTI_OUTPUT_BITS { 1u32 << m } else { 0 };
        Self::new(m, (0..size).map(f).collect())
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    #[inline]
    pub fn evaluate(&self, x: u32) -> u32 {
        self.table[x as usize]
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn is_constant(&self) -> bool {
        self.table.iter().all(|&v| v == self.table[0])
    }
}

/// Number of index bits `⌈log₂ m⌉` appended by [`flatten_to_boolean`].
pub fn flatten_index_bits(m: u32) -> u32 {
    if m <= 1 { 0 } else { 32 - (m - 1).leading_zeros() }
}

/// Input of the flattened concept that reads bit `j` of `f(x)`.
pub fn flatten_input(m: u32, x: u32, j: u32) -> usize {
    ((x as usize) << flatten_index_bits(m)) | j as usize
}

/// Boolean concept `f̃(x, j) = bit j of f(x)`, zero when `j ≥ m`.
pub fn flatten_to_boolean(f: &MultiOutputFunction) -> Concept {
    let m = f.m();
    let jbits = flatten_index_bits(m);
    let jmask = (1usize << jbits) - 1;
    Concept::from_fn(m + jbits, |input| {
        let j = (input & jmask) as u32;
        j < m && f.evaluate((input >> jbits) as u32) >> j & 1 == 1
    })
    .expect("m ≤ 10 gives at most 14 input bits")
}

/// A function constant exactly on the cosets of `span(basis)`, with distinct
/// seeded values per coset.
pub fn v_invariant_function(basis: &[u64], m: u32, seed: u64) -> Result<MultiOutputFunction> {
    if m == 0 || m > MAX_MULTI_OUTPUT_BITS {
        return Err(Error::ParameterOutOfRange(format!("m = {m} outside 1..={MAX_MULTI_OUTPUT_BITS}")));
    }
    let v = SubspaceF2::new(m, basis)?;
    if v.dim() >= m {
        return Err(Error::ParameterOutOfRange(format!("dim V = {} must be below m = {m}", v.dim())));
    }
    let mut rng = SplitMix64::new(seed);
    let mut used = BTreeSet::new();
    let mut value_of = BTreeMap::new();
    let table = (0..1u32 << m)
        .map(|x| {
            *value_of.entry(v.coset_rep(u64::from(x))).or_insert_with(|| loop {
                let candidate = rng.below(1 << m) as u32;
                if used.insert(candidate) {
                    break candidate;
                }
            })
        })
        .collect();
    MultiOutputFunction::new(m, table)
}

/// Checks `f(x) = f(y) ⇔ x ⊕ y ∈ V` for every pair.
pub fn verify_v_invariant(f: &MultiOutputFunction, v: &SubspaceF2) -> bool {
    if v.ambient_dim() != f.m() {
        return false;
    }
    let size = 1u32 << f.m();
    (0..size).all(|x| {
        (x..size).all(|y| (f.evaluate(x) == f.evaluate(y)) == v.contains(u64::from(x ^ y)))
    })
}

/// A V-invariant class: `per_subspace` sampled functions for every `ℓ`-dimensional
/// subspace of F₂^m, flattened to Boolean concepts. Returns the class together
/// with the subspace of each concept.
pub fn v_invariant_class(
    m: u32,
    l: u32,
    per_subspace: usize,
    seed: u64,
) -> Result<(ConceptClass, Vec<SubspaceF2>)> {
    if l >= m {
        return Err(Error::ParameterOutOfRange(format!("ℓ = {l} must be below m = {m}")));
    }
    if per_subspace == 0 {
        return Err(Error::ParameterOutOfRange("at least one function per subspace".to_string()));
    }
    let subspaces = crate::partitions::enumerate_subspaces(m, l)?;
    let n = m + flatten_index_bits(m);
    let total = (subspaces.len() * per_subspace) as u64;
    if total.saturating_mul(1 << n) > MATERIALIZE_CAP_BITS {
        return Err(Error::ClassTooLarge {
            size: total as usize,
            cap: (MATERIALIZE_CAP_BITS >> n) as usize,
        });
    }
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    let mut owners = Vec::new();
    let mut draw = 0u64;
    for (vi, v) in subspaces.iter().enumerate() {
        let mut mine = BTreeSet::new();
        let mut attempts = 0;
        while mine.len() < per_subspace && attempts < 64 * per_subspace {
            attempts += 1;
            let f = v_invariant_function(v.basis(), m, SplitMix64::derive(seed, draw).next_u64())?;
            draw += 1;
            let c = flatten_to_boolean(&f);
            if mine.insert(c.table().clone()) {
                labels.push(format!("V{vi}.{}", mine.len() - 1));
                rows.push(c);
                owners.push(v.clone());
            }
        }
    }
    Ok((ConceptClass::with_labels(n, rows, labels)?, owners))
}

/// `size` distinct seeded truth tables over `n` bits.
///
/// Each row fills its words in order with successive `next_u64` outputs, the
/// bits past `2^n` cleared; rows equal to an earlier row are redrawn.
pub fn random_class(n: u32, size: usize, seed: u64) -> Result<ConceptClass> {
    check_n(n)?;
    let domain = 1usize << n;
    let feasible = if domain >= 12 { RANDOM_CLASS_CAP } else { RANDOM_CLASS_CAP.min(1 << domain) };
    if size == 0 || size > feasible {
        return Err(Error::ParameterOutOfRange(format!(
            "size {size} infeasible for n = {n} (max {feasible})"
        )));
    }
    if (size as u64) * (domain as u64) > MATERIALIZE_CAP_BITS {
        return Err(Error::ClassTooLarge { size, cap: (MATERIALIZE_CAP_BITS as usize) / domain });
    }
    let mut rng = SplitMix64::new(seed);
    let words = domain.div_ceil(64);
    let mut seen = BTreeSet::new();
    let mut rows = Vec::with_capacity(size);
    while rows.len() < size {
        let w: Vec<u64> = (0..words).map(|_| rng.next_u64()).collect();
        let table = BitVec::from_words(domain, w);
        if seen.insert(table.clone()) {
            rows.push(Concept::from_table(table)?);
        }
    }
    ConceptClass::new(n, rows)
}

/// A parsed class description such as `parity:n=6` or `vinv:m=6,l=2,seed=7`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassSpec {
    Parity { n: u32 },
    Delta { n: u32 },
    NestedBv { n: u32, d: u32 },
    PrefixedParity { n: u32, k: u32 },
    VInvariant { m: u32, l: u32, seed: u64, per_subspace: usize },
    Random { n: u32, size: usize, seed: u64 },
}

impl ClassSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            ClassSpec::Parity { .. } => "parity",
            ClassSpec::Delta { .. } => "delta",
            ClassSpec::NestedBv { .. } => "nestedbv",
            ClassSpec::PrefixedParity { .. } => "prefixed",
            ClassSpec::VInvariant { .. } => "vinv",
            ClassSpec::Random { .. } => "rand",
        }
    }

    pub fn seed(&self) -> u64 {
        match *self {
            ClassSpec::VInvariant { seed, .. } | ClassSpec::Random { seed, .. } => seed,
            _ => 0,
        }
    }

    pub fn input_bits(&self) -> u32 {
        match *self {
            ClassSpec::Parity { n }
            | ClassSpec::Delta { n }
            | ClassSpec::NestedBv { n, .. }
            | ClassSpec::PrefixedParity { n, .. }
            | ClassSpec::Random { n, .. } => n,
            ClassSpec::VInvariant { m, .. } => m + flatten_index_bits(m),
        }
    }

    /// Checks the feasibility caps without building anything.
    pub fn validate(&self) -> Result<()> {
        match *self {
            ClassSpec::Parity { n } | ClassSpec::Delta { n } => check_n(n),
            ClassSpec::NestedBv { n, d } => NestedBvFamily::new(n, d).map(|_| ()),
            ClassSpec::PrefixedParity { n, k } => PrefixedParityFamily::new(n, k).map(|_| ()),
            ClassSpec::VInvariant { m, l, per_subspace, .. } => {
                if m == 0 || m > MAX_MULTI_OUTPUT_BITS || l >= m || per_subspace == 0 {
                    return Err(Error::ParameterOutOfRange(format!(
                        "vinv needs 0 ≤ ℓ < m ≤ {MAX_MULTI_OUTPUT_BITS}, s ≥ 1"
                    )));
                }
                Ok(())
            }
            ClassSpec::Random { n, size, .. } => {
                check_n(n)?;
                if size == 0 || size > RANDOM_CLASS_CAP {
                    return Err(Error::ParameterOutOfRange(format!("size {size} infeasible")));
                }
                Ok(())
            }
        }
    }

    /// Lazy evaluator, for the kinds that have one.
    pub fn family(&self) -> Result<Option<Box<dyn ConceptFamily>>> {
        Ok(match *self {
            ClassSpec::Parity { n } => Some(Box::new(ParityFamily::new(n)?)),
            ClassSpec::NestedBv { n, d } => Some(Box::new(NestedBvFamily::new(n, d)?)),
            ClassSpec::PrefixedParity { n, k } => Some(Box::new(PrefixedParityFamily::new(n, k)?)),
            _ => None,
        })
    }

    pub fn materialize(&self) -> Result<ConceptClass> {
        match *self {
            ClassSpec::Parity { n } => parity_class(n),
            ClassSpec::Delta { n } => delta_class(n),
            ClassSpec::NestedBv { n, d } => nested_bv_class(n, d),
            ClassSpec::PrefixedParity { n, k } => prefixed_parity_class(n, k),
            ClassSpec::VInvariant { m, l, seed, per_subspace } => {
                v_invariant_class(m, l, per_subspace, seed).map(|(c, _)| c)
            }
            ClassSpec::Random { n, size, seed } => random_class(n, size, seed),
        }
    }

    /// Closed-form `γ̂` and a witness subset for the materialized class, when known.
    pub fn analytic_gamma_hat(&self, class: &ConceptClass) -> Option<(Rational, ConceptSet)> {
        match *self {
            ClassSpec::Delta { n } => Some((Ratio::new(1, 1 << n), class.full_set())),
            ClassSpec::Parity { n } | ClassSpec::NestedBv { n, d: 1 } => Some(parity_gamma_hat(n, class)),
            _ => None,
        }
    }
}

fn parity_gamma_hat(n: u32, class: &ConceptClass) -> (Rational, ConceptSet) {
    if n == 1 {
        (Ratio::new(1, 2), class.full_set())
    } else {
        (Ratio::new(1, 3), ConceptSet::from_indices(class.len(), [0, 1, 2]))
    }
}

/// `γ̂` by exhaustive search when the class is small enough, otherwise from the
/// generator's closed form.
pub fn gamma_report(class: &ConceptClass, spec: Option<&ClassSpec>) -> Result<GammaReport> {
    if class.len() <= concept::GAMMA_HAT_CAP {
        return concept::gamma_hat(class);
    }
    match spec.and_then(|s| s.analytic_gamma_hat(class)) {
        Some((g, witness)) => Ok(GammaReport::analytic(class, g, witness)),
        None => Err(Error::ClassTooLarge { size: class.len(), cap: concept::GAMMA_HAT_CAP }),
    }
}

impl fmt::Display for ClassSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ClassSpec::Parity { n } => write!(f, "parity:n={n}"),
            ClassSpec::Delta { n } => write!(f, "delta:n={n}"),
            ClassSpec::NestedBv { n, d } => write!(f, "nestedbv:n={n},d={d}"),
            ClassSpec::PrefixedParity { n, k } => write!(f, "prefixed:n={n},k={k}"),
            ClassSpec::VInvariant { m, l, seed, per_subspace } => {
                write!(f, "vinv:m={m},l={l},seed={seed}")?;
                if per_subspace != DEFAULT_PER_SUBSPACE {
                    write!(f, ",s={per_subspace}")?;
                }
                Ok(())
            }
            ClassSpec::Random { n, size, seed } => write!(f, "rand:n={n},size={size},seed={seed}"),
        }
    }
}

impl FromStr for ClassSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::SpecParse(format!("{s:?}: {msg}"));
        let (kind, rest) = s.trim().split_once(':').ok_or_else(|| bad("expected kind:key=value,..."))?;
        let mut params = BTreeMap::new();
        for pair in rest.split(',').filter(|p| !p.is_empty()) {
            let (k, v) = pair.split_once('=').ok_or_else(|| bad("parameter without '='"))?;
            let v: u64 = v.trim().parse().map_err(|_| bad("parameter is not an integer"))?;
            if params.insert(k.trim().to_string(), v).is_some() {
                return Err(bad("repeated parameter"));
            }
        }
        let mut take = |key: &str| -> Result<u64> {
            params.remove(key).ok_or_else(|| bad(&format!("missing parameter {key}")))
        };
        let small = |v: u64| u32::try_from(v).map_err(|_| bad("parameter too large"));
        let spec = match kind.trim() {
            "parity" => ClassSpec::Parity { n: small(take("n")?)? },
            "delta" => ClassSpec::Delta { n: small(take("n")?)? },
            "nestedbv" | "nested_bv" => {
                ClassSpec::NestedBv { n: small(take("n")?)?, d: small(take("d")?)? }
            }
            "prefixed" | "prefixed_parity" => {
                ClassSpec::PrefixedParity { n: small(take("n")?)?, k: small(take("k")?)? }
            }
            "vinv" | "v_invariant" => {
                let m = small(take("m")?)?;
                let l = small(take("l")?)?;
                let seed = take("seed")?;
                let per_subspace = match params.remove("s") {
                    Some(s) => s as usize,
                    None => DEFAULT_PER_SUBSPACE,
                };
                ClassSpec::VInvariant { m, l, seed, per_subspace }
            }
            "rand" | "random" => ClassSpec::Random {
                n: small(take("n")?)?,
                size: take("size")? as usize,
                seed: take("seed")?,
            },
            other => return Err(bad(&format!("unknown class kind {other:?}"))),
        };
        if let Some(extra) = params.keys().next() {
            return Err(bad(&format!("unexpected parameter {extra}")));
        }
        spec.validate()?;
        Ok(spec)
    }
}

/// Parses a string of `0`/`1` characters as an integer, first character most
/// significant.
pub fn parse_bits(s: &str) -> Result<u64> {
    if s.is_empty() || s.len() > 64 {
        return Err(Error::SpecParse(format!("{s:?} is not a bit string")));
    }
    s.bytes().try_fold(0u64, |acc, b| match b {
        b'0' => Ok(acc << 1),
        b'1' => Ok(acc << 1 | 1),
        _ => Err(Error::SpecParse(format!("{s:?} is not a bit string"))),
    })
}

pub fn format_bits(v: u64, width: u32) -> String {
    (0..width).rev().map(|i| if v >> i & 1 == 1 { '1' } else { '0' }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn table(c: &Concept) -> Vec<u8> {
        (0..c.domain_size()).map(|x| c.value(x) as u8).collect()
    }

    #[test]
    fn parity_rows() {
        let c = parity_class(1).unwrap();
        assert_eq!(table(c.row(0)), vec![0, 0]);
        assert_eq!(table(c.row(1)), vec![0, 1]);
        let c = parity_class(2).unwrap();
        assert_eq!(table(c.row(0b11)), vec![0, 1, 1, 0]);
        for n in 1..=8 {
            assert_eq!(parity_class(n).unwrap().len(), 1 << n);
        }
        assert!(parity_class(0).is_err());
        assert!(parity_class(17).is_err());
    }

    #[test]
    fn delta_rows() {
        let c = delta_class(1).unwrap();
        assert_eq!(table(c.row(0)), vec![1, 0]);
        assert_eq!(table(c.row(1)), vec![0, 1]);
        let c = delta_class(4).unwrap();
        for x in 0..16 {
            assert_eq!(c.column(x).count_ones(), 1);
        }
    }

    #[test]
    fn nested_bv_d1_is_parity() {
        for n in 1..=5 {
            assert_eq!(nested_bv_class(n, 1).unwrap(), parity_class(n).unwrap());
        }
    }

    #[test]
    fn nested_bv_block_example() {
        let fam = NestedBvFamily::new(4, 2).unwrap();
        let a = parse_bits("0100").unwrap();
        for x in 0..16usize {
            // Position 1 of the string is bit 2 of the integer.
            assert_eq!(fam.evaluate(a, x), x >> 2 & 1 == 1, "x = {x:04b}");
        }
        assert_eq!(nested_bv_class(4, 2).unwrap().len(), 16);
        assert!(NestedBvFamily::new(6, 2).is_err());
        assert_eq!(NestedBvFamily::new(16, 2).unwrap().blocks(), 4);
        assert_eq!(NestedBvFamily::new(8, 3).unwrap().width(), 4);
    }

    #[test]
    fn prefixed_parity_small() {
        let c = prefixed_parity_class(2, 1).unwrap();
        assert_eq!(c.len(), 4);
        assert!(c.row(0).table().is_zero());
        // Enumerate by hand: inputs (prefix, suffix) in order 00, 01, 10, 11.
        let mut expected: Vec<Vec<u8>> = vec![];
        for a1 in 0..2u8 {
            for a0 in 0..2u8 {
                expected.push(vec![0, a0, 0, a1]);
            }
        }
        let got: Vec<Vec<u8>> = c.rows().iter().map(table).collect();
        let mut e = expected.clone();
        let mut g = got.clone();
        e.sort();
        g.sort();
        assert_eq!(e, g);
        let fam = PrefixedParityFamily::new(5, 2).unwrap();
        assert_eq!(fam.size(), 1 << 12);
        assert!(PrefixedParityFamily::new(16, 4).is_err());
    }

    #[test]
    fn v_invariant_examples() {
        let f = v_invariant_function(&[], 3, 1).unwrap();
        let distinct: BTreeSet<u32> = f.table().iter().copied().collect();
        assert_eq!(distinct.len(), 8);

        let f = v_invariant_function(&[0b11], 2, 9).unwrap();
        assert_eq!(f.evaluate(0b00), f.evaluate(0b11));
        assert_eq!(f.evaluate(0b01), f.evaluate(0b10));
        assert_ne!(f.evaluate(0b00), f.evaluate(0b01));

        assert_eq!(v_invariant_function(&[0b11, 0b11], 2, 0), Err(Error::LinearlyDependent));
    }

    #[test]
    fn v_invariant_many_seeds() {
        let mut rng = SplitMix64::new(5);
        for _ in 0..100 {
            let m = 2 + rng.below(5) as u32;
            let l = rng.below(u64::from(m)) as u32;
            let mut basis = Vec::new();
            while (basis.len() as u32) < l {
                let v = rng.below(1 << m);
                if !crate::qsim::gf2::gf2_span_contains(&basis, v) {
                    basis.push(v);
                }
            }
            let f = v_invariant_function(&basis, m, rng.next_u64()).unwrap();
            assert!(verify_v_invariant(&f, &SubspaceF2::new(m, &basis).unwrap()));
        }
    }

    #[test]
    fn flatten_examples() {
        let zero = MultiOutputFunction::from_fn(3, |_| 0).unwrap();
        assert!(flatten_to_boolean(&zero).table().is_zero());
        let id = MultiOutputFunction::from_fn(2, |x| x).unwrap();
        let c = flatten_to_boolean(&id);
        assert_eq!(c.input_bits(), 3);
        for x in 0..4 {
            for j in 0..2 {
                assert_eq!(c.value(flatten_input(2, x, j)), x >> j & 1 == 1);
            }
        }
        let f = v_invariant_function(&[0b101], 5, 3).unwrap();
        let c = flatten_to_boolean(&f);
        assert_eq!(c.input_bits(), 8);
        for x in 0..32 {
            let back = (0..5).fold(0, |acc, j| acc | (c.value(flatten_input(5, x, j)) as u32) << j);
            assert_eq!(back, f.evaluate(x));
            for j in 5..8 {
                assert!(!c.value(flatten_input(5, x, j)));
            }
        }
    }

    #[test]
    fn random_class_contract() {
        let a = random_class(4, 12, 1).unwrap();
        assert_eq!(a, random_class(4, 12, 1).unwrap());
        assert_eq!(a.len(), 12);
        assert_ne!(a, random_class(4, 12, 2).unwrap());
        let two = random_class(3, 2, 77).unwrap();
        assert_eq!(concept::gamma_hat(&two).unwrap().gamma_hat, Ratio::new(1, 2));
        assert_eq!(random_class(1, 4, 0).unwrap().len(), 4);
        assert!(random_class(1, 5, 0).is_err());
        assert!(random_class(8, 5000, 0).is_err());
    }

    #[test]
    fn random_class_first_row_uses_stream_words() {
        let c = random_class(7, 1, 0).unwrap();
        let mut rng = SplitMix64::new(0);
        assert_eq!(c.row(0).table().words(), &[rng.next_u64(), rng.next_u64()]);
        let c = random_class(2, 1, 0).unwrap();
        assert_eq!(c.row(0).table().words(), &[SplitMix64::new(0).next_u64() & 0xF]);
    }

    #[test]
    fn spec_round_trip() {
        for s in [
            "parity:n=6",
            "delta:n=5",
            "nestedbv:n=16,d=2",
            "prefixed:n=5,k=2",
            "vinv:m=6,l=2,seed=7",
            "vinv:m=4,l=1,seed=0,s=2",
            "rand:n=4,size=12,seed=1",
        ] {
            let spec: ClassSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        for bad in ["parity", "parity:n=x", "parity:n=3,d=2", "blob:n=2", "nestedbv:n=6,d=2", "delta:n=40"] {
            assert!(bad.parse::<ClassSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn analytic_gamma_matches_exhaustive() {
        for n in 1..=4 {
            let spec = ClassSpec::Parity { n };
            let class = spec.materialize().unwrap();
            let (g, w) = spec.analytic_gamma_hat(&class).unwrap();
            assert_eq!(concept::gamma_hat(&class).unwrap().gamma_hat, g, "parity n={n}");
            assert_eq!(concept::gamma_of_subset(&class, &w).unwrap().0, g);
            let spec = ClassSpec::Delta { n };
            let class = spec.materialize().unwrap();
            let (g, w) = spec.analytic_gamma_hat(&class).unwrap();
            assert_eq!(concept::gamma_hat(&class).unwrap().gamma_hat, g, "delta n={n}");
            assert_eq!(concept::gamma_of_subset(&class, &w).unwrap().0, g);
        }
    }

    #[test]
    fn bit_strings() {
        assert_eq!(parse_bits("101").unwrap(), 5);
        assert_eq!(format_bits(5, 4), "0101");
        assert!(parse_bits("12").is_err());
    }
}
