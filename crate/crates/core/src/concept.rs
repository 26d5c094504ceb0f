//! Concept classes as truth-table matrices and their combinatorial parameters.
//!
//! Rows of a [`ConceptClass`] are concepts, columns are inputs. A column-major
//! mirror is built once at construction so that "how many concepts of `S` output
//! 1 at `x`" is a popcount of `column(x) & S`.
//!
//! All γ quantities are exact [`Rational`]s.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_rational::Ratio;

use crate::bits::BitVec;
use crate::error::{Error, Result};

/// Exact reduced fraction used for every γ quantity.
pub type Rational = Ratio<u64>;

/// Largest supported number of input bits.
pub const MAX_INPUT_BITS: u32 = 16;

/// Largest class (or subset) for which γ̂ is computed by full subset enumeration.
pub const GAMMA_HAT_CAP: usize = 20;

/// A Boolean function on `{0,1}^n` stored as its truth table; bit `x` is `c(x)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Concept {
    table: BitVec,
}

impl Concept {
    pub fn from_table(table: BitVec) -> Result<Self> {
        let len = table.len();
        if len < 2 || !len.is_power_of_two() || len > 1 << MAX_INPUT_BITS {
            return Err(Error::InvalidClass(alloc::format!(
                "truth table length {len} is not 2^n for 1 ≤ n ≤ {MAX_INPUT_BITS}"
            )));
        }
        Ok(Self { table })
    }

    pub fn from_fn(n: u32, f: impl FnMut(usize) -> bool) -> Result<Self> {
        check_input_bits(n)?;
        Self::from_table(BitVec::from_fn(1 << n, f))
    }

    pub fn zeros(n: u32) -> Result<Self> {
        Self::from_fn(n, |_| false)
    }

    #[inline]
    pub fn value(&self, x: usize) -> bool {
        self.table.get(x)
    }

    pub fn table(&self) -> &BitVec {
        &self.table
    }

    pub fn into_table(self) -> BitVec {
        self.table
    }

    pub fn input_bits(&self) -> u32 {
        self.table.len().trailing_zeros()
    }

    pub fn domain_size(&self) -> usize {
        self.table.len()
    }
}

impl fmt::Debug for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Concept({:?})", self.table)
    }
}

fn check_input_bits(n: u32) -> Result<()> {
    if n == 0 || n > MAX_INPUT_BITS {
        return Err(Error::ParameterOutOfRange(alloc::format!(
            "n = {n} outside 1..={MAX_INPUT_BITS}"
        )));
    }
    Ok(())
}

/// A set of concept indices into a fixed class.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConceptSet(BitVec);

impl ConceptSet {
    pub fn empty(universe: usize) -> Self {
        Self(BitVec::zeros(universe))
    }

    pub fn full(universe: usize) -> Self {
        Self(BitVec::ones(universe))
    }

    pub fn from_indices(universe: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        Self(BitVec::from_indices(universe, indices))
    }

    pub fn from_bits(bits: BitVec) -> Self {
        Self(bits)
    }

    pub fn universe(&self) -> usize {
        self.0.len()
    }

    /// Number of members.
    pub fn len(&self) -> usize {
        self.0.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_zero()
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.0.len() && self.0.get(i)
    }

    pub fn insert(&mut self, i: usize) {
        self.0.set(i, true);
    }

    pub fn remove(&mut self, i: usize) {
        self.0.set(i, false);
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter_ones()
    }

    pub fn first(&self) -> Option<usize> {
        self.0.first_one()
    }

    pub fn bits(&self) -> &BitVec {
        &self.0
    }

    pub fn union_with(&mut self, other: &Self) {
        self.0.or_assign(&other.0);
    }

    pub fn intersect_with(&mut self, other: &Self) {
        self.0.and_assign(&other.0);
    }

    pub fn difference(&self, other: &Self) -> Self {
        let mut d = self.0.clone();
        d.and_not_assign(&other.0);
        Self(d)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        Self(self.0.and(&other.0))
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for ConceptSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Per-input record of column flips. Bit `x` set means outputs at `x` are
/// inverted, both in the concept matrix and in simulated oracle answers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FlipMask {
    mask: BitVec,
}

impl FlipMask {
    pub fn identity(domain_size: usize) -> Self {
        Self { mask: BitVec::zeros(domain_size) }
    }

    pub fn all(domain_size: usize) -> Self {
        Self { mask: BitVec::ones(domain_size) }
    }

    pub fn from_inputs(domain_size: usize, inputs: impl IntoIterator<Item = usize>) -> Self {
        Self { mask: BitVec::from_indices(domain_size, inputs) }
    }

    pub fn from_bits(mask: BitVec) -> Self {
        Self { mask }
    }

    #[inline]
    pub fn is_flipped(&self, x: usize) -> bool {
        self.mask.get(x)
    }

    pub fn len(&self) -> usize {
        self.mask.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mask.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.mask.is_zero()
    }

    pub fn bits(&self) -> &BitVec {
        &self.mask
    }

    /// Flipped inputs in increasing order.
    pub fn inputs(&self) -> impl Iterator<Item = usize> + '_ {
        self.mask.iter_ones()
    }

    /// Sequential application of `self` then `other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self { mask: self.mask.xor(&other.mask) }
    }
}

impl fmt::Debug for FlipMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.inputs()).finish()
    }
}

/// A concept class: distinct truth tables over `{0,1}^n`.
#[derive(Clone, PartialEq, Eq)]
pub struct ConceptClass {
    n: u32,
    rows: Vec<Concept>,
    labels: Option<Vec<String>>,
    columns: Vec<BitVec>,
}

impl fmt::Debug for ConceptClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConceptClass")
            .field("n", &self.n)
            .field("size", &self.rows.len())
            .finish_non_exhaustive()
    }
}

impl ConceptClass {
    /// Builds a class, dropping repeated rows (first occurrence wins).
    pub fn new(n: u32, rows: Vec<Concept>) -> Result<Self> {
        Self::build(n, rows, None)
    }

    pub fn with_labels(n: u32, rows: Vec<Concept>, labels: Vec<String>) -> Result<Self> {
        if labels.len() != rows.len() {
            return Err(Error::LengthMismatch { expected: rows.len(), got: labels.len() });
        }
        Self::build(n, rows, Some(labels))
    }

    fn build(n: u32, rows: Vec<Concept>, labels: Option<Vec<String>>) -> Result<Self> {
        check_input_bits(n)?;
        if rows.is_empty() {
            return Err(Error::InvalidClass("a class needs at least one concept".to_string()));
        }
        let domain = 1usize << n;
        let mut seen = BTreeSet::new();
        let mut kept = Vec::with_capacity(rows.len());
        let mut kept_labels = labels.as_ref().map(|_| Vec::with_capacity(rows.len()));
        for (i, row) in rows.into_iter().enumerate() {
            if row.domain_size() != domain {
                return Err(Error::LengthMismatch { expected: domain, got: row.domain_size() });
            }
            if seen.insert(row.table.clone()) {
                if let (Some(out), Some(src)) = (kept_labels.as_mut(), labels.as_ref()) {
                    out.push(src[i].clone());
                }
                kept.push(row);
            }
        }
        let size = kept.len();
        let mut columns = alloc::vec![BitVec::zeros(size); domain];
        for (i, row) in kept.iter().enumerate() {
            for x in row.table.iter_ones() {
                columns[x].set(i, true);
            }
        }
        Ok(Self { n, rows: kept, labels: kept_labels, columns })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `N = 2^n`.
    pub fn domain_size(&self) -> usize {
        1 << self.n
    }

    /// `|C|`.
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[Concept] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &Concept {
        &self.rows[i]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, i: usize) -> Option<&str> {
        self.labels.as_ref().map(|l| l[i].as_str())
    }

    #[inline]
    pub fn value(&self, concept: usize, x: usize) -> bool {
        self.rows[concept].value(x)
    }

    /// Bit `i` set iff concept `i` outputs 1 at `x`.
    #[inline]
    pub fn column(&self, x: usize) -> &BitVec {
        &self.columns[x]
    }

    pub fn full_set(&self) -> ConceptSet {
        ConceptSet::full(self.len())
    }

    pub fn index_of(&self, table: &BitVec) -> Option<usize> {
        self.rows.iter().position(|r| &r.table == table)
    }

    pub fn check_input(&self, x: usize) -> Result<()> {
        if x >= self.domain_size() {
            return Err(Error::InputOutOfRange { input: x, domain: self.domain_size() });
        }
        Ok(())
    }

    pub(crate) fn check_set(&self, set: &ConceptSet) -> Result<()> {
        if set.universe() != self.len() {
            return Err(Error::LengthMismatch { expected: self.len(), got: set.universe() });
        }
        Ok(())
    }

    /// The sub-class formed by `set`, in index order.
    pub fn restrict(&self, set: &ConceptSet) -> Result<Self> {
        self.check_set(set)?;
        let rows = set.iter().map(|i| self.rows[i].clone()).collect();
        match &self.labels {
            Some(l) => Self::with_labels(self.n, rows, set.iter().map(|i| l[i].clone()).collect()),
            None => Self::new(self.n, rows),
        }
    }

    pub fn view<'a>(&'a self, flips: Option<&'a FlipMask>) -> ClassView<'a> {
        ClassView { class: self, flips }
    }
}

/// A class seen through an optional column flip.
#[derive(Debug, Clone, Copy)]
pub struct ClassView<'a> {
    class: &'a ConceptClass,
    flips: Option<&'a FlipMask>,
}

impl<'a> ClassView<'a> {
    pub fn class(&self) -> &'a ConceptClass {
        self.class
    }

    pub fn flips(&self) -> Option<&'a FlipMask> {
        self.flips
    }

    #[inline]
    fn flipped(&self, x: usize) -> bool {
        self.flips.is_some_and(|f| f.is_flipped(x))
    }

    #[inline]
    pub fn value(&self, concept: usize, x: usize) -> bool {
        self.class.value(concept, x) ^ self.flipped(x)
    }

    /// Number of concepts of `set` with output 1 at `x` in this view.
    #[inline]
    pub fn ones_at(&self, x: usize, set: &ConceptSet) -> usize {
        let col = self.class.column(x);
        if self.flipped(x) {
            col.and_not_count(set.bits())
        } else {
            col.and_count(set.bits())
        }
    }

    /// The members of `set` with output `value` at `x` in this view.
    pub fn with_value_at(&self, x: usize, value: bool, set: &ConceptSet) -> ConceptSet {
        let mut bits = set.bits().clone();
        if value ^ self.flipped(x) {
            bits.and_assign(self.class.column(x));
        } else {
            bits.and_not_assign(self.class.column(x));
        }
        ConceptSet::from_bits(bits)
    }

    /// The members of `set` that output 0 on every input of `inputs`.
    pub fn all_zero_on(&self, inputs: &[usize], set: &ConceptSet) -> ConceptSet {
        inputs.iter().fold(set.clone(), |acc, &x| self.with_value_at(x, false, &acc))
    }
}

/// Result of a γ̂ computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaReport {
    pub gamma_hat: Rational,
    /// A subset achieving the minimum: the largest such, ties broken towards the
    /// smallest membership bitmask.
    pub witness_subset: ConceptSet,
    /// `γ_x` of the whole class (or of the subset the report was computed for).
    pub per_input_gamma: Vec<Rational>,
    /// `true` when computed by enumerating every subset.
    pub exhaustive: bool,
}

impl GammaReport {
    /// A report for a generator-supplied value, with `witness` a subset known to
    /// achieve it.
    pub fn analytic(class: &ConceptClass, gamma_hat: Rational, witness: ConceptSet) -> Self {
        let full = class.full_set();
        let per_input_gamma = (0..class.domain_size())
            .map(|x| minority_fraction(class.view(None).ones_at(x, &full), full.len()))
            .collect();
        Self { gamma_hat, witness_subset: witness, per_input_gamma, exhaustive: false }
    }

    /// `⌊1/γ̂⌋`.
    pub fn inverse_floor(&self) -> u64 {
        (self.gamma_hat.recip()).to_integer()
    }
}

fn minority_fraction(ones: usize, size: usize) -> Rational {
    Ratio::new(ones.min(size - ones) as u64, size as u64)
}

/// `γ_a^{S}`: the minority-answer fraction of `subset` at `input`.
pub fn gamma_at(class: &ConceptClass, subset: &ConceptSet, input: usize) -> Result<Rational> {
    class.check_set(subset)?;
    class.check_input(input)?;
    let size = subset.len();
    if size == 0 {
        return Err(Error::EmptySubset);
    }
    Ok(minority_fraction(class.view(None).ones_at(input, subset), size))
}

/// `γ^{S}` together with the smallest input achieving it.
pub fn gamma_of_subset(class: &ConceptClass, subset: &ConceptSet) -> Result<(Rational, usize)> {
    class.check_set(subset)?;
    let size = subset.len();
    if size < 2 {
        return Err(Error::SubsetTooSmall { needed: 2, got: size });
    }
    let view = class.view(None);
    let mut best = 0usize;
    let mut witness = 0usize;
    for x in 0..class.domain_size() {
        let ones = view.ones_at(x, subset);
        let m = ones.min(size - ones);
        if m > best {
            best = m;
            witness = x;
        }
    }
    Ok((Ratio::new(best as u64, size as u64), witness))
}

/// Exhaustive `γ̂^C`.
pub fn gamma_hat(class: &ConceptClass) -> Result<GammaReport> {
    gamma_hat_in(class, &class.full_set())
}

/// Exhaustive `γ̂` of the sub-class `set`: the minimum of `γ^{C'}` over all
/// `C' ⊆ set` with `|C'| ≥ 2`.
pub fn gamma_hat_in(class: &ConceptClass, set: &ConceptSet) -> Result<GammaReport> {
    class.check_set(set)?;
    let members = set.to_vec();
    let size = members.len();
    if size < 2 {
        return Err(Error::SubsetTooSmall { needed: 2, got: size });
    }
    if size > GAMMA_HAT_CAP {
        return Err(Error::ClassTooLarge { size, cap: GAMMA_HAT_CAP });
    }
    let (best, witness) = min_gamma_over_subsets(class, &members, |_, _| true)
        .expect("every pair of distinct concepts is a candidate");
    let witness_subset = ConceptSet::from_indices(
        class.len(),
        (0..size).filter(|j| witness >> j & 1 == 1).map(|j| members[j]),
    );
    let view = class.view(None);
    let per_input_gamma =
        (0..class.domain_size()).map(|x| minority_fraction(view.ones_at(x, set), size)).collect();
    Ok(GammaReport {
        gamma_hat: best,
        witness_subset,
        per_input_gamma,
        exhaustive: true,
    })
}

/// Minimum of `γ^{C'}` over subsets `C'` of `members` (as position masks) with
/// `|C'| ≥ 2` that pass `accept(mask, size)`. Ties go to the larger subset, then
/// to the smaller mask. `members.len()` must not exceed [`GAMMA_HAT_CAP`].
pub(crate) fn min_gamma_over_subsets(
    class: &ConceptClass,
    members: &[usize],
    accept: impl Fn(u32, u32) -> bool,
) -> Option<(Rational, u32)> {
    let size = members.len();
    debug_assert!(size <= GAMMA_HAT_CAP);
    let full: u32 = (1u32 << size) - 1;
    // Columns compressed onto member positions. A column and its complement give
    // the same minority counts, and constant columns never help.
    let mut cols: Vec<u32> = (0..class.domain_size())
        .map(|x| {
            let mask = members
                .iter()
                .enumerate()
                .filter(|(_, &c)| class.value(c, x))
                .fold(0u32, |m, (j, _)| m | 1 << j);
            mask.min(!mask & full)
        })
        .filter(|&m| m != 0)
        .collect();
    cols.sort_unstable();
    cols.dedup();

    let (mut best_num, mut best_den) = (1u64, 1u64);
    let mut found: Option<(u32, u32)> = None;
    for sub in 3..=full {
        let sub_size = sub.count_ones();
        if sub_size < 2 || !accept(sub, sub_size) {
            continue;
        }
        let mut k = 0u32;
        for &c in &cols {
            let ones = (c & sub).count_ones();
            let m = ones.min(sub_size - ones);
            if m > k {
                k = m;
                // Already worse than the incumbent: this subset cannot win or tie.
                if found.is_some() && k as u64 * best_den > best_num * sub_size as u64 {
                    break;
                }
            }
        }
        let lhs = k as u64 * best_den;
        let rhs = best_num * sub_size as u64;
        let better = match found {
            None => true,
            Some((_, wsize)) => lhs < rhs || (lhs == rhs && sub_size > wsize),
        };
        if better {
            best_num = k as u64;
            best_den = sub_size as u64;
            found = Some((sub, sub_size));
        }
    }
    found.map(|(mask, _)| (Ratio::new(best_num, best_den), mask))
}

/// Inputs where a strict majority of `subset` outputs 1.
pub fn one_sensitive_mask(class: &ConceptClass, subset: &ConceptSet) -> Result<FlipMask> {
    class.check_set(subset)?;
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    Ok(one_sensitive_mask_in(class.view(None), subset))
}

/// As [`one_sensitive_mask`], relative to a view that may already be flipped.
/// The returned mask is absolute: it is the flip to apply to the unflipped class.
pub fn one_sensitive_mask_in(view: ClassView<'_>, subset: &ConceptSet) -> FlipMask {
    let size = subset.len();
    let class = view.class();
    FlipMask::from_bits(BitVec::from_fn(class.domain_size(), |x| {
        let flip_here = 2 * view.ones_at(x, subset) > size;
        flip_here ^ view.flipped(x)
    }))
}

/// Returns `true` when every column of `subset` in `view` is at most half ones.
pub fn is_one_sensitive(view: ClassView<'_>, subset: &ConceptSet) -> bool {
    let size = subset.len();
    (0..view.class().domain_size()).all(|x| 2 * view.ones_at(x, subset) <= size)
}

/// Column flip of the whole matrix.
pub fn apply_flip(class: &ConceptClass, mask: &FlipMask) -> Result<ConceptClass> {
    if mask.len() != class.domain_size() {
        return Err(Error::LengthMismatch { expected: class.domain_size(), got: mask.len() });
    }
    let rows = class
        .rows()
        .iter()
        .map(|r| Concept { table: r.table.xor(mask.bits()) })
        .collect();
    match class.labels() {
        Some(l) => ConceptClass::with_labels(class.n(), rows, l.to_vec()),
        None => ConceptClass::new(class.n(), rows),
    }
}

/// `c_maj`: 0 at `x` iff at least half of the class outputs 0 there.
pub fn majority_concept(class: &ConceptClass) -> Concept {
    let size = class.len();
    Concept {
        table: BitVec::from_fn(class.domain_size(), |x| 2 * class.column(x).count_ones() > size),
    }
}

/// Semi-rich row condition: at least `⌈|C|/2⌉` concepts output 1 on at least a
/// `gamma` fraction of `inputs`.
pub fn semi_rich_check(class: &ConceptClass, inputs: &[usize], gamma: Rational) -> Result<bool> {
    semi_rich_check_in(class.view(None), &class.full_set(), inputs, gamma)
}

pub fn semi_rich_check_in(
    view: ClassView<'_>,
    set: &ConceptSet,
    inputs: &[usize],
    gamma: Rational,
) -> Result<bool> {
    if inputs.is_empty() {
        return Err(Error::EmptyInputSet);
    }
    for &x in inputs {
        view.class().check_input(x)?;
    }
    let need = *gamma.numer() * inputs.len() as u64;
    let rich = set
        .iter()
        .filter(|&c| {
            let ones = inputs.iter().filter(|&&x| view.value(c, x)).count() as u64;
            ones * gamma.denom() >= need
        })
        .count();
    Ok(2 * rich >= set.len())
}

/// Greedy construction of an input set satisfying the semi-rich row condition
/// for the whole class.
pub fn build_semirich_set(class: &ConceptClass) -> Result<Vec<usize>> {
    let full = class.full_set();
    if full.len() < 2 {
        return Err(Error::SubsetTooSmall { needed: 2, got: full.len() });
    }
    Ok(build_semirich_set_in(class.view(None), &full))
}

/// Greedy semi-rich construction on the sub-class `set` as seen through `view`.
///
/// Each round takes the unused input where the not-yet-covered concepts have the
/// largest minority fraction (smallest index on ties) and marks as covered every
/// concept of `set` whose view outputs 1 there. Stops once at least half of
/// `set` is covered. Output is sorted.
pub fn build_semirich_set_in(view: ClassView<'_>, set: &ConceptSet) -> Vec<usize> {
    let size = set.len();
    let domain = view.class().domain_size();
    let mut covered = ConceptSet::empty(set.universe());
    let mut used = BitVec::zeros(domain);
    let mut inputs = Vec::new();
    while 2 * covered.len() < size {
        let rest = set.difference(&covered);
        let rest_size = rest.len();
        let mut best: Option<(usize, usize)> = None;
        for x in (0..domain).filter(|&x| !used.get(x)) {
            let ones = view.ones_at(x, &rest);
            let m = ones.min(rest_size - ones);
            if best.is_none_or(|(_, b)| m > b) {
                best = Some((x, m));
            }
        }
        let Some((a_max, _)) = best else { break };
        used.set(a_max, true);
        inputs.push(a_max);
        covered.union_with(&view.with_value_at(a_max, true, set));
    }
    inputs.sort_unstable();
    inputs
}

/// VC dimension by depth-first search over shattered input sets.
///
/// Every subset of a shattered set is shattered, so sets are grown one input at
/// a time in increasing order and abandoned as soon as they stop being
/// shattered. The search stops early at `⌊log₂|C|⌋`, which no class can exceed.
pub fn vc_dimension(class: &ConceptClass) -> usize {
    let ceiling = (usize::BITS - 1 - class.len().leading_zeros()) as usize;
    let mut best = 0;
    let mut current = Vec::new();
    grow_shattered(class, 0, &mut current, &mut best, ceiling);
    best
}

fn grow_shattered(
    class: &ConceptClass,
    start: usize,
    current: &mut Vec<usize>,
    best: &mut usize,
    ceiling: usize,
) {
    if current.len() > *best {
        *best = current.len();
    }
    if *best >= ceiling {
        return;
    }
    for x in start..class.domain_size() {
        current.push(x);
        if is_shattered(class, current) {
            grow_shattered(class, x + 1, current, best, ceiling);
            if *best >= ceiling {
                current.pop();
                return;
            }
        }
        current.pop();
    }
}

/// Whether `class` realizes all `2^|inputs|` labelings of `inputs`.
pub fn is_shattered(class: &ConceptClass, inputs: &[usize]) -> bool {
    let k = inputs.len();
    if k > 24 || (1usize << k) > class.len() {
        return false;
    }
    let mut seen = BitVec::zeros(1 << k);
    let mut distinct = 0usize;
    for row in class.rows() {
        let pattern = inputs
            .iter()
            .enumerate()
            .fold(0usize, |p, (j, &x)| p | (row.value(x) as usize) << j);
        if !seen.get(pattern) {
            seen.set(pattern, true);
            distinct += 1;
            if distinct == 1 << k {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;
    use alloc::vec;

    fn r(n: u64, d: u64) -> Rational {
        Ratio::new(n, d)
    }

    fn class_from_strs(n: u32, rows: &[&str]) -> ConceptClass {
        let rows = rows
            .iter()
            .map(|s| Concept::from_fn(n, |x| s.as_bytes()[x] == b'1').unwrap())
            .collect();
        ConceptClass::new(n, rows).unwrap()
    }

    #[test]
    fn gamma_at_examples() {
        let parity = zoo::parity_class(2).unwrap();
        let full = parity.full_set();
        assert_eq!(gamma_at(&parity, &full, 0b00).unwrap(), r(0, 1));
        assert_eq!(gamma_at(&parity, &full, 0b01).unwrap(), r(1, 2));
        let delta = zoo::delta_class(2).unwrap();
        assert_eq!(gamma_at(&delta, &delta.full_set(), 0b10).unwrap(), r(1, 4));
        assert_eq!(
            gamma_at(&delta, &ConceptSet::empty(4), 0),
            Err(Error::EmptySubset)
        );
    }

    #[test]
    fn gamma_of_subset_examples() {
        let parity = zoo::parity_class(2).unwrap();
        let pair = ConceptSet::from_indices(4, [1, 3]);
        assert_eq!(gamma_of_subset(&parity, &pair).unwrap().0, r(1, 2));
        let three = ConceptSet::from_indices(4, [0b00, 0b01, 0b10]);
        assert_eq!(gamma_of_subset(&parity, &three).unwrap().0, r(1, 3));
        let delta = zoo::delta_class(2).unwrap();
        assert_eq!(gamma_of_subset(&delta, &delta.full_set()).unwrap(), (r(1, 4), 0));
        assert!(matches!(
            gamma_of_subset(&delta, &ConceptSet::from_indices(4, [2])),
            Err(Error::SubsetTooSmall { .. })
        ));
    }

    #[test]
    fn gamma_hat_examples() {
        assert_eq!(gamma_hat(&zoo::delta_class(2).unwrap()).unwrap().gamma_hat, r(1, 4));
        let parity = gamma_hat(&zoo::parity_class(2).unwrap()).unwrap();
        assert_eq!(parity.gamma_hat, r(1, 3));
        assert_eq!(parity.witness_subset.len(), 3);
        let two = class_from_strs(2, &["0110", "0111"]);
        assert_eq!(gamma_hat(&two).unwrap().gamma_hat, r(1, 2));
    }

    #[test]
    fn gamma_hat_refuses_large_classes() {
        let big = zoo::delta_class(5).unwrap();
        assert_eq!(gamma_hat(&big), Err(Error::ClassTooLarge { size: 32, cap: GAMMA_HAT_CAP }));
    }

    #[test]
    fn one_sensitive_mask_examples() {
        let delta = zoo::delta_class(2).unwrap();
        assert!(one_sensitive_mask(&delta, &delta.full_set()).unwrap().is_identity());
        let halves = class_from_strs(2, &["1111", "0000"]);
        assert!(one_sensitive_mask(&halves, &halves.full_set()).unwrap().is_identity());
        let col1 = class_from_strs(2, &["0100", "1100", "0110"]);
        let mask = one_sensitive_mask(&col1, &col1.full_set()).unwrap();
        assert_eq!(mask.inputs().collect::<Vec<_>>(), vec![1]);
        let flipped = apply_flip(&col1, &mask).unwrap();
        assert!(is_one_sensitive(flipped.view(None), &flipped.full_set()));
    }

    #[test]
    fn apply_flip_examples() {
        let delta = zoo::delta_class(2).unwrap();
        assert_eq!(apply_flip(&delta, &FlipMask::identity(4)).unwrap(), delta);
        let all = FlipMask::all(4);
        let comp = apply_flip(&delta, &all).unwrap();
        for i in 0..4 {
            assert_eq!(comp.row(i).table(), &delta.row(i).table().not());
        }
        assert_eq!(apply_flip(&comp, &all).unwrap(), delta);
        assert!(matches!(
            apply_flip(&delta, &FlipMask::identity(8)),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn majority_concept_examples() {
        let delta = zoo::delta_class(2).unwrap();
        assert!(majority_concept(&delta).table().is_zero());
        let single = class_from_strs(2, &["0110"]);
        assert_eq!(majority_concept(&single), *single.row(0));
        let pair = class_from_strs(2, &["0110", "1001"]);
        assert!(majority_concept(&pair).table().is_zero());
    }

    #[test]
    fn semi_rich_examples() {
        let all_fire = class_from_strs(2, &["0100", "1100", "0110"]);
        assert!(semi_rich_check(&all_fire, &[1], r(1, 2)).unwrap());
        let delta = zoo::delta_class(2).unwrap();
        assert!(semi_rich_check(&delta, &[0, 1], r(1, 4)).unwrap());
        let zeros = class_from_strs(2, &["0000"]);
        assert!(!semi_rich_check(&zeros, &[0, 3], r(1, 4)).unwrap());
        assert_eq!(semi_rich_check(&delta, &[], r(1, 4)), Err(Error::EmptyInputSet));
    }

    #[test]
    fn build_semirich_examples() {
        let delta = zoo::delta_class(2).unwrap();
        assert_eq!(build_semirich_set(&delta).unwrap(), vec![0, 1]);
        // Rows differ first at input 2.
        let two = class_from_strs(2, &["0100", "0110"]);
        assert_eq!(build_semirich_set(&two).unwrap(), vec![2]);
        let parity = zoo::parity_class(2).unwrap();
        let set = build_semirich_set(&parity).unwrap();
        assert!(set.len() <= 3);
        assert!(semi_rich_check(&parity, &set, r(1, 3)).unwrap());
    }

    #[test]
    fn vc_dimension_examples() {
        assert_eq!(vc_dimension(&zoo::delta_class(2).unwrap()), 1);
        for n in 1..=4 {
            assert_eq!(vc_dimension(&zoo::parity_class(n).unwrap()), n as usize);
        }
        assert_eq!(vc_dimension(&class_from_strs(2, &["0110"])), 0);
    }

    #[test]
    fn rows_are_deduplicated() {
        let c = class_from_strs(2, &["0110", "0110", "1000"]);
        assert_eq!(c.len(), 2);
    }
}
