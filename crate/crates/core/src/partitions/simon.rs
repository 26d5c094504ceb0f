//! Learning the hidden subspace of a V-invariant function.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::bits::BitVec;
use crate::error::{Error, Result};
use crate::qsim::{self, gf2, FunctionOracle, SubspaceF2};
use crate::rng::SplitMix64;

/// Outcome of [`simon_partition_learn`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimonResult {
    /// Orthogonal complement of the span of the samples. Equals the hidden
    /// subspace when `complete`.
    pub subspace: SubspaceF2,
    /// Whether the samples reached rank `m − ℓ` within the budget.
    pub complete: bool,
    pub samples: Vec<u64>,
}

/// Draws Simon samples until they span an `(m − ℓ)`-dimensional space or `3m`
/// samples have been taken, then returns the complement of their span.
pub fn simon_partition_learn(
    oracle: &mut FunctionOracle<'_>,
    l: u32,
    rng: &mut SplitMix64,
) -> Result<SimonResult> {
    let m = oracle.m();
    if l >= m {
        return Err(Error::ParameterOutOfRange(alloc::format!("ℓ = {l} must be below m = {m}")));
    }
    let target = (m - l) as usize;
    let mut samples = Vec::new();
    while gf2::gf2_rank(&samples) < target && samples.len() < 3 * m as usize {
        samples.push(qsim::simon_sample(oracle, rng)?);
    }
    let complete = gf2::gf2_rank(&samples) == target;
    let subspace = SubspaceF2::span(m, &gf2::gf2_nullspace_basis(&samples, m)?)?;
    Ok(SimonResult { subspace, complete, samples })
}

/// Outcome of [`classical_collision_baseline`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollisionResult {
    pub subspace: Option<SubspaceF2>,
    pub queries: u64,
    pub collisions: u64,
}

/// Classical search for the hidden subspace: query fresh uniformly random
/// inputs and add `x ⊕ y` for every pair with `f(x) = f(y)`, until the
/// differences span `ℓ` dimensions or `budget` queries are spent.
pub fn classical_collision_baseline(
    oracle: &mut FunctionOracle<'_>,
    l: u32,
    rng: &mut SplitMix64,
    budget: u64,
) -> Result<CollisionResult> {
    let m = oracle.m();
    if l >= m {
        return Err(Error::ParameterOutOfRange(alloc::format!("ℓ = {l} must be below m = {m}")));
    }
    let domain = 1u64 << m;
    let budget = budget.min(domain);
    let mut queried = BitVec::zeros(domain as usize);
    let mut seen: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    let mut basis: Vec<u64> = Vec::new();
    let mut out = CollisionResult { subspace: None, queries: 0, collisions: 0 };
    while (basis.len() as u32) < l && out.queries < budget {
        let x = loop {
            let x = rng.below(domain);
            if !queried.get(x as usize) {
                break x as u32;
            }
        };
        queried.set(x as usize, true);
        let y = oracle.classical_query(x)?;
        out.queries += 1;
        let bucket = seen.entry(y).or_default();
        for &other in bucket.iter() {
            out.collisions += 1;
            let d = u64::from(x ^ other);
            if !gf2::gf2_span_contains(&basis, d) {
                basis.push(d);
            }
        }
        bucket.push(x);
    }
    if basis.len() as u32 == l {
        out.subspace = Some(SubspaceF2::new(m, &basis)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo::{v_invariant_function, verify_v_invariant};

    #[test]
    fn one_dimensional_complement() {
        let basis = [0b1000, 0b0100, 0b0010];
        let f = v_invariant_function(&basis, 4, 3).unwrap();
        let v = SubspaceF2::new(4, &basis).unwrap();
        let mut rng = SplitMix64::new(1);
        for _ in 0..20 {
            let mut o = FunctionOracle::new(&f);
            let r = simon_partition_learn(&mut o, 3, &mut rng).unwrap();
            assert!(o.ledger().quantum() <= 12);
            if r.complete {
                assert_eq!(r.subspace, v);
                assert!(verify_v_invariant(&f, &r.subspace));
            }
        }
    }

    #[test]
    fn injective_function_has_no_collisions() {
        let f = v_invariant_function(&[], 5, 8).unwrap();
        let mut o = FunctionOracle::new(&f);
        let r = classical_collision_baseline(&mut o, 1, &mut SplitMix64::new(2), 1 << 5).unwrap();
        assert_eq!(r.collisions, 0);
        assert_eq!(r.subspace, None);
        assert_eq!(r.queries, 32);
    }

    #[test]
    fn baseline_found_subspace_verifies() {
        let basis = [0b101100, 0b010011];
        let f = v_invariant_function(&basis, 6, 5).unwrap();
        let mut rng = SplitMix64::new(4);
        for _ in 0..20 {
            let mut o = FunctionOracle::new(&f);
            let r = classical_collision_baseline(&mut o, 2, &mut rng, 64).unwrap();
            let v = r.subspace.unwrap();
            assert!(verify_v_invariant(&f, &v));
        }
    }
}
