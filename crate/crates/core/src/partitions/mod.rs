//! Partition learning: identify which piece of a fixed partition of `C` holds
//! the hidden concept.
//!
//! # The family 𝒮
//!
//! A subset `C'` belongs to 𝒮 when every `C'' ⊆ C'` with `|C''| ≥ (3/4)|C'|`
//! meets at least two pieces. That fails exactly when some single piece holds
//! at least `⌈(3/4)|C'|⌉` members of `C'` (take `C''` inside that piece), so
//! membership reduces to comparing the largest induced piece with that bound.
//!
//! # First split
//!
//! The first split of [`algorithm4_build_partition`] runs [`algorithm3`] on a
//! γ̂ witness `C'` rather than on `C`. The resulting `K` (1-sensitivity flips of
//! `C'`), `J` and `I` are then applied to the whole class: `C°` is every concept
//! of `C` that is 0 on all of `I` in the `K ⊕ J` view. The size guarantees hold
//! relative to `C'`, which is what places `C'` in 𝒮.

mod simon;
mod subspaces;

pub use simon::{classical_collision_baseline, simon_partition_learn, CollisionResult, SimonResult};
pub use subspaces::{count_invariant, count_subspaces, enumerate_subspaces, MAX_ENUMERATION_DIM};
pub use crate::qsim::gf2::SubspaceF2;

use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec::Vec;

use crate::concept::{self, ClassView, ConceptClass, ConceptSet, FlipMask, Rational, GAMMA_HAT_CAP};
use crate::error::{Error, Result};
use crate::qsim::{BooleanFunction, OracleSpec, QueryLedger};
use crate::rng::mix64;

/// Disjoint nonempty concept sets covering the class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    universe: usize,
    pieces: Vec<ConceptSet>,
    owner: Vec<usize>,
}

impl Partition {
    pub fn new(universe: usize, pieces: Vec<ConceptSet>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::InvalidClass("a partition needs at least one piece".into()));
        }
        let mut owner = alloc::vec![usize::MAX; universe];
        for (p, piece) in pieces.iter().enumerate() {
            if piece.universe() != universe {
                return Err(Error::LengthMismatch { expected: universe, got: piece.universe() });
            }
            if piece.is_empty() {
                return Err(Error::InvalidClass(alloc::format!("piece {p} is empty")));
            }
            for c in piece.iter() {
                if owner[c] != usize::MAX {
                    return Err(Error::InvalidClass(alloc::format!("concept {c} is in two pieces")));
                }
                owner[c] = p;
            }
        }
        if let Some(c) = owner.iter().position(|&o| o == usize::MAX) {
            return Err(Error::InvalidClass(alloc::format!("concept {c} is in no piece")));
        }
        Ok(Self { universe, pieces, owner })
    }

    pub fn from_indices(universe: usize, pieces: &[Vec<usize>]) -> Result<Self> {
        Self::new(
            universe,
            pieces.iter().map(|p| ConceptSet::from_indices(universe, p.iter().copied())).collect(),
        )
    }

    /// Every concept on its own.
    pub fn singletons(universe: usize) -> Self {
        Self::new(universe, (0..universe).map(|c| ConceptSet::from_indices(universe, [c])).collect())
            .expect("singletons partition any nonempty universe")
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn pieces(&self) -> &[ConceptSet] {
        &self.pieces
    }

    pub fn piece_of(&self, concept: usize) -> usize {
        self.owner[concept]
    }

    pub fn position(&self, set: &ConceptSet) -> Option<usize> {
        self.pieces.iter().position(|p| p == set)
    }

    /// Largest number of members of `set` falling in one piece.
    pub fn largest_induced_piece(&self, set: &ConceptSet) -> usize {
        self.pieces.iter().map(|p| p.bits().and_count(set.bits())).max().unwrap_or(0)
    }

    /// Membership of `set` in the family 𝒮.
    pub fn in_family(&self, set: &ConceptSet) -> bool {
        let size = set.len();
        size >= 2 && self.largest_induced_piece(set) < (3 * size).div_ceil(4)
    }
}

/// Stable 128-bit identifier of a sorted index list.
pub fn version_space_key(set: &ConceptSet) -> u128 {
    let (mut hi, mut lo) = (0x6a09_e667_f3bc_c908u64, 0xbb67_ae85_84ca_a73bu64 ^ set.universe() as u64);
    for i in set.iter() {
        hi = mix64(hi ^ i as u64);
        lo = mix64(lo.wrapping_add(hi).wrapping_add(i as u64));
    }
    (u128::from(hi) << 64) | u128::from(lo)
}

/// What a single split of [`algorithm4_build_partition`] recorded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MemoEntry {
    pub members: ConceptSet,
    /// The set the semi-rich construction ran on (`C'` for the first split).
    pub ground: ConceptSet,
    pub inputs: Vec<usize>,
    pub j_flips: Vec<usize>,
    pub k_flips: Vec<usize>,
    /// Members that are 0 on every input of `I` in the `K ⊕ J` view.
    pub zero: ConceptSet,
    pub star: ConceptSet,
    /// Refinement level, starting at 1.
    pub level: u32,
}

impl MemoEntry {
    /// `K ⊕ J` as a flip mask.
    pub fn view_flips(&self, domain_size: usize) -> FlipMask {
        FlipMask::from_inputs(domain_size, self.k_flips.iter().copied())
            .compose(&FlipMask::from_inputs(domain_size, self.j_flips.iter().copied()))
    }

    /// `(|S°∩G|/|G|, |S★∩G|/|G|)` for the ground set `G`.
    pub fn split_ratios(&self) -> (Rational, Rational) {
        let g = self.ground.len() as u64;
        (
            Rational::new(self.zero.intersection(&self.ground).len() as u64, g),
            Rational::new(self.star.intersection(&self.ground).len() as u64, g),
        )
    }
}

/// Memo tables keyed by version-space identifier.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MemoTables {
    entries: BTreeMap<u128, Vec<MemoEntry>>,
    outer_iterations: u32,
}

impl MemoTables {
    pub fn get(&self, members: &ConceptSet) -> Option<&MemoEntry> {
        self.entries.get(&version_space_key(members))?.iter().find(|e| &e.members == members)
    }

    pub fn insert(&mut self, entry: MemoEntry) {
        let bucket = self.entries.entry(version_space_key(&entry.members)).or_default();
        bucket.retain(|e| e.members != entry.members);
        bucket.push(entry);
    }

    pub fn len(&self) -> usize {
        self.entries.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries ordered by key.
    pub fn entries(&self) -> impl Iterator<Item = (u128, &MemoEntry)> {
        self.entries.iter().flat_map(|(k, v)| v.iter().map(move |e| (*k, e)))
    }

    pub fn outer_iterations(&self) -> u32 {
        self.outer_iterations
    }

    pub fn set_outer_iterations(&mut self, levels: u32) {
        self.outer_iterations = levels;
    }

    /// Largest `|I(S)|` over all splits.
    pub fn max_inputs(&self) -> usize {
        self.entries().map(|(_, e)| e.inputs.len()).max().unwrap_or(0)
    }
}

/// Result of [`gamma_hat_partition`]. `gamma_hat_p` is `None` when 𝒮 is empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionGammaReport {
    pub gamma_hat_p: Option<Rational>,
    pub witness_subset: Option<ConceptSet>,
    pub exhaustive: bool,
}

/// `γ̂_P`: the minimum of `γ^{C'}` over `C' ∈ 𝒮`, by exhaustive enumeration.
pub fn gamma_hat_partition(class: &ConceptClass, partition: &Partition) -> Result<PartitionGammaReport> {
    if partition.universe() != class.len() {
        return Err(Error::LengthMismatch { expected: class.len(), got: partition.universe() });
    }
    if class.len() > GAMMA_HAT_CAP {
        return Err(Error::ClassTooLarge { size: class.len(), cap: GAMMA_HAT_CAP });
    }
    let members: Vec<usize> = (0..class.len()).collect();
    let piece_masks: Vec<u32> = partition
        .pieces()
        .iter()
        .map(|p| p.iter().fold(0u32, |m, c| m | 1 << c))
        .collect();
    let accept = |sub: u32, size: u32| {
        let largest = piece_masks.iter().map(|p| (p & sub).count_ones()).max().unwrap_or(0);
        largest < (3 * size).div_ceil(4)
    };
    let found = concept::min_gamma_over_subsets(class, &members, accept);
    Ok(PartitionGammaReport {
        gamma_hat_p: found.map(|(g, _)| g),
        witness_subset: found.map(|(_, mask)| {
            ConceptSet::from_indices(class.len(), (0..class.len()).filter(|j| mask >> j & 1 == 1))
        }),
        exhaustive: true,
    })
}

/// Greedy semi-rich construction that tracks its own column flips.
///
/// Each round flips the not-yet-covered concepts to 1-sensitivity, takes the
/// unused input where the largest fraction of them outputs 1 in that flipped
/// view (smallest input on ties), and covers the members of `set` that output 1
/// there in the flipped view. The input joins `J` when its column was flipped.
/// Each round covers at most half of the uncovered concepts. Returns `(I, J)`,
/// both sorted.
pub fn algorithm3(view: ClassView<'_>, set: &ConceptSet) -> Result<(Vec<usize>, Vec<usize>)> {
    let size = set.len();
    if size < 2 {
        return Err(Error::SubsetTooSmall { needed: 2, got: size });
    }
    let domain = view.class().domain_size();
    if let Some(x) = (0..domain).find(|&x| 2 * view.ones_at(x, set) > size) {
        return Err(Error::NotOneSensitive { input: x });
    }
    let mut covered = ConceptSet::empty(set.universe());
    let mut used = crate::bits::BitVec::zeros(domain);
    let (mut inputs, mut flips) = (Vec::new(), Vec::new());
    while 2 * covered.len() < size {
        let rest = set.difference(&covered);
        let rest_size = rest.len();
        let mut best: Option<(usize, usize, bool)> = None;
        for x in (0..domain).filter(|&x| !used.get(x)) {
            let ones = view.ones_at(x, &rest);
            let flipped = 2 * ones > rest_size;
            let m = if flipped { rest_size - ones } else { ones };
            if best.is_none_or(|(_, b, _)| m > b) {
                best = Some((x, m, flipped));
            }
        }
        let Some((a_max, _, flipped)) = best else { break };
        used.set(a_max, true);
        inputs.push(a_max);
        if flipped {
            flips.push(a_max);
        }
        covered.union_with(&view.with_value_at(a_max, !flipped, &rest));
    }
    inputs.sort_unstable();
    flips.sort_unstable();
    Ok((inputs, flips))
}

fn split(
    class: &ConceptClass,
    members: &ConceptSet,
    ground: &ConceptSet,
    level: u32,
) -> Result<MemoEntry> {
    let k = concept::one_sensitive_mask_in(class.view(None), ground);
    let (inputs, j_flips) = algorithm3(class.view(Some(&k)), ground)?;
    let k_flips: Vec<usize> = k.inputs().collect();
    let mut entry = MemoEntry {
        members: members.clone(),
        ground: ground.clone(),
        inputs,
        j_flips,
        k_flips,
        zero: ConceptSet::empty(members.universe()),
        star: ConceptSet::empty(members.universe()),
        level,
    };
    let flips = entry.view_flips(class.domain_size());
    entry.zero = class.view(Some(&flips)).all_zero_on(&entry.inputs, members);
    entry.star = members.difference(&entry.zero);
    Ok(entry)
}

/// Breadth-first refinement of `C` into exactly `k` pieces, using `witness` for
/// the first split.
pub fn algorithm4_with_witness(
    class: &ConceptClass,
    k: usize,
    witness: &ConceptSet,
) -> Result<(Partition, MemoTables)> {
    let size = class.len();
    if k < 2 || k > size {
        return Err(Error::ParameterOutOfRange(alloc::format!("k = {k} outside 2..={size}")));
    }
    class.check_set(witness)?;
    let full = class.full_set();
    let mut memo = MemoTables::default();
    let mut queue: VecDeque<ConceptSet> = VecDeque::from([full.clone()]);
    let mut level = 0u32;
    while queue.len() != k {
        level += 1;
        let mut done: Vec<ConceptSet> = Vec::new();
        while let Some(s) = queue.pop_front() {
            if s.len() >= 2 {
                let ground = if s == full { witness } else { &s };
                let entry = split(class, &s, ground, level)?;
                done.push(entry.zero.clone());
                done.push(entry.star.clone());
                memo.insert(entry);
            } else {
                done.push(s);
            }
            if queue.len() + done.len() == k {
                break;
            }
        }
        queue.extend(done);
    }
    memo.set_outer_iterations(level);
    Ok((Partition::new(size, queue.into_iter().collect())?, memo))
}

/// [`algorithm4_with_witness`] with the exhaustive γ̂ witness.
pub fn algorithm4_build_partition(class: &ConceptClass, k: usize) -> Result<(Partition, MemoTables)> {
    let report = concept::gamma_hat(class)?;
    algorithm4_with_witness(class, k, &report.witness_subset)
}

/// Outcome of [`algorithm5_learn_partition`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionLearnResult {
    pub piece: usize,
    pub ledger: QueryLedger,
    pub depth: u32,
}

/// Classical walk down the refinement tree: at each node query all of `I(S)`
/// through the `K ⊕ J` flips and go to `S°` iff every answer is 0.
pub fn algorithm5_learn_partition(
    class: &ConceptClass,
    partition: &Partition,
    memo: &MemoTables,
    target: &dyn BooleanFunction,
) -> Result<PartitionLearnResult> {
    if partition.universe() != class.len() {
        return Err(Error::MemoMismatch("partition and class differ in size".into()));
    }
    let mut oracle = OracleSpec::new(target);
    oracle.set_phase("partition");
    let mut s = class.full_set();
    let mut depth = 0;
    loop {
        if let Some(piece) = partition.position(&s) {
            if memo.get(&s).is_none() {
                let (ledger, _) = oracle.into_parts();
                return Ok(PartitionLearnResult { piece, ledger, depth });
            }
        }
        let entry = memo
            .get(&s)
            .ok_or_else(|| Error::MemoMismatch(alloc::format!("no memo entry for {s:?}")))?;
        oracle.set_flips(Some(entry.view_flips(class.domain_size())))?;
        let mut all_zero = true;
        for &x in &entry.inputs {
            all_zero &= !oracle.classical_query(x)?;
        }
        s = if all_zero { entry.zero.clone() } else { entry.star.clone() };
        depth += 1;
        if s.is_empty() {
            return Err(Error::OracleInconsistent);
        }
    }
}

/// `(1 + j)` where `j` is the least integer with `(3/4)^j·(|C| − 1) < 2`: the
/// number of refinement levels after which every piece of size two or more has
/// been split at least once more, given that each split of a ground set leaves
/// under three quarters on either side.
pub fn provable_level_bound(class_size: usize) -> u32 {
    let mut j = 0u32;
    let mut bound = (class_size as f64) - 1.0;
    while bound >= 2.0 {
        bound *= 0.75;
        j += 1;
    }
    1 + j
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;
    use alloc::vec;

    #[test]
    fn family_membership_rule() {
        let p = Partition::from_indices(4, &[vec![0, 1], vec![2, 3]]).unwrap();
        assert!(p.in_family(&ConceptSet::from_indices(4, [0, 2])));
        assert!(!p.in_family(&ConceptSet::from_indices(4, [0, 1])));
        assert!(p.in_family(&ConceptSet::from_indices(4, [0, 1, 2])));
        assert!(p.in_family(&ConceptSet::from_indices(4, [0, 1, 2, 3])));
        let q = Partition::from_indices(4, &[vec![0, 1, 2], vec![3]]).unwrap();
        assert!(!q.in_family(&ConceptSet::from_indices(4, [0, 1, 2, 3])));
        assert!(q.in_family(&ConceptSet::from_indices(4, [0, 1, 3])));
    }

    #[test]
    fn partition_validation() {
        assert!(Partition::from_indices(3, &[vec![0, 1], vec![1, 2]]).is_err());
        assert!(Partition::from_indices(3, &[vec![0, 1]]).is_err());
        assert!(Partition::from_indices(3, &[vec![0, 1, 2], vec![]]).is_err());
        assert_eq!(Partition::singletons(3).len(), 3);
    }

    #[test]
    fn gamma_hat_partition_examples() {
        let delta = zoo::delta_class(2).unwrap();
        let singles = gamma_hat_partition(&delta, &Partition::singletons(4)).unwrap();
        assert_eq!(singles.gamma_hat_p, Some(concept::gamma_hat(&delta).unwrap().gamma_hat));
        let whole = Partition::from_indices(4, &[vec![0, 1, 2, 3]]).unwrap();
        assert_eq!(gamma_hat_partition(&delta, &whole).unwrap().gamma_hat_p, None);
        // Pairs across pieces have γ = 1/2; any mixed triple has γ = 1/3, and
        // the full class (largest piece 2 < 3) has γ = 1/4.
        let halves = Partition::from_indices(4, &[vec![0, 1], vec![2, 3]]).unwrap();
        let r = gamma_hat_partition(&delta, &halves).unwrap();
        assert_eq!(r.gamma_hat_p, Some(Rational::new(1, 4)));
        assert!(halves.in_family(&r.witness_subset.unwrap()));
    }

    #[test]
    fn algorithm3_examples() {
        let two = zoo::random_class(3, 2, 9).unwrap();
        let k = concept::one_sensitive_mask(&two, &two.full_set()).unwrap();
        let (i, _) = algorithm3(two.view(Some(&k)), &two.full_set()).unwrap();
        assert_eq!(i.len(), 1);

        let delta = zoo::delta_class(2).unwrap();
        let (i, j) = algorithm3(delta.view(None), &delta.full_set()).unwrap();
        assert_eq!(i, vec![0, 1]);
        assert!(j.is_empty());

        let dense = zoo::random_class(2, 3, 0).unwrap();
        let heavy: Vec<_> = (0..4).filter(|&x| 2 * dense.column(x).count_ones() > 3).collect();
        if let Some(&x) = heavy.first() {
            assert_eq!(
                algorithm3(dense.view(None), &dense.full_set()),
                Err(Error::NotOneSensitive { input: x })
            );
        }
    }

    #[test]
    fn algorithm4_and_5_on_delta3() {
        let delta = zoo::delta_class(3).unwrap();
        let g = concept::gamma_hat(&delta).unwrap().gamma_hat;
        for k in [2, 4, 8] {
            let (p, memo) = algorithm4_build_partition(&delta, k).unwrap();
            assert_eq!(p.len(), k);
            assert_eq!(gamma_hat_partition(&delta, &p).unwrap().gamma_hat_p, Some(g));
            for t in 0..8 {
                let r = algorithm5_learn_partition(&delta, &p, &memo, delta.row(t)).unwrap();
                assert_eq!(r.piece, p.piece_of(t));
            }
        }
        let (p, _) = algorithm4_build_partition(&delta, 8).unwrap();
        assert!(p.pieces().iter().all(|s| s.len() == 1));
        assert!(algorithm4_build_partition(&delta, 1).is_err());
        assert!(algorithm4_build_partition(&delta, 9).is_err());
    }

    #[test]
    fn two_concept_partition() {
        let two = zoo::random_class(2, 2, 4).unwrap();
        let (p, memo) = algorithm4_build_partition(&two, 2).unwrap();
        for t in 0..2 {
            let r = algorithm5_learn_partition(&two, &p, &memo, two.row(t)).unwrap();
            assert_eq!(r.piece, p.piece_of(t));
            assert_eq!(r.ledger.classical(), 1);
        }
    }

    #[test]
    fn memo_keys_are_stable() {
        let a = ConceptSet::from_indices(10, [1, 4, 7]);
        assert_eq!(version_space_key(&a), version_space_key(&a.clone()));
        assert_ne!(version_space_key(&a), version_space_key(&ConceptSet::from_indices(10, [1, 4])));
    }

    #[test]
    fn level_bound_values() {
        assert_eq!(provable_level_bound(2), 1);
        assert_eq!(provable_level_bound(3), 2);
        assert_eq!(provable_level_bound(16), 9);
    }
}
