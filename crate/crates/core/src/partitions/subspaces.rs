//! Counting and enumerating subspaces of F₂^m.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::qsim::gf2::{self, SubspaceF2};

/// Largest `m` accepted by [`enumerate_subspaces`].
pub const MAX_ENUMERATION_DIM: u32 = 6;

/// Every `ℓ`-dimensional subspace of F₂^m, once each, in canonical order.
pub fn enumerate_subspaces(m: u32, l: u32) -> Result<Vec<SubspaceF2>> {
    if m == 0 || m > MAX_ENUMERATION_DIM || l > m {
        return Err(Error::ParameterOutOfRange(alloc::format!(
            "enumeration needs ℓ ≤ m ≤ {MAX_ENUMERATION_DIM}, got m = {m}, ℓ = {l}"
        )));
    }
    let mut found = BTreeSet::new();
    let mut chosen = Vec::with_capacity(l as usize);
    extend(m, l as usize, 1, &mut chosen, &mut found)?;
    Ok(found.into_iter().collect())
}

/// Grows `chosen` by vectors in increasing order, skipping dependent ones.
fn extend(
    m: u32,
    l: usize,
    start: u64,
    chosen: &mut Vec<u64>,
    found: &mut BTreeSet<SubspaceF2>,
) -> Result<()> {
    if chosen.len() == l {
        found.insert(SubspaceF2::new(m, chosen)?);
        return Ok(());
    }
    for v in start..1u64 << m {
        if gf2::gf2_span_contains(chosen, v) {
            continue;
        }
        chosen.push(v);
        extend(m, l, v + 1, chosen, found)?;
        chosen.pop();
    }
    Ok(())
}

/// `N_{m,ℓ} = Π_{i<ℓ} (2^m − 2^i) / (2^ℓ − 2^i)`.
pub fn count_subspaces(m: u32, l: u32) -> Result<BigUint> {
    if m > 64 || l > m {
        return Err(Error::ParameterOutOfRange(alloc::format!("need ℓ ≤ m ≤ 64, got m = {m}, ℓ = {l}")));
    }
    let two = |e: u32| BigUint::one() << e;
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..l {
        num *= two(m) - two(i);
        den *= two(l) - two(i);
    }
    Ok(num / den)
}

/// Largest `m − ℓ` accepted by [`count_invariant`].
pub const MAX_INVARIANT_CODIM: u32 = 20;

/// `I_{m,ℓ} = Π_{i<2^{m−ℓ}} (2^m − i)`: functions constant on the cosets of a
/// fixed `ℓ`-dimensional `V` with distinct values across cosets.
pub fn count_invariant(m: u32, l: u32) -> Result<BigUint> {
    if m > 64 || l > m || m - l > MAX_INVARIANT_CODIM {
        return Err(Error::ParameterOutOfRange(alloc::format!(
            "need ℓ ≤ m ≤ 64 and m − ℓ ≤ {MAX_INVARIANT_CODIM}, got m = {m}, ℓ = {l}"
        )));
    }
    let top = BigUint::one() << m;
    let mut acc = BigUint::one();
    for i in 0..1u64 << (m - l) {
        acc *= &top - BigUint::from(i);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        assert_eq!(count_subspaces(4, 2).unwrap(), BigUint::from(35u32));
        assert_eq!(count_subspaces(3, 1).unwrap(), BigUint::from(7u32));
        assert_eq!(count_subspaces(5, 0).unwrap(), BigUint::one());
        assert_eq!(count_invariant(3, 1).unwrap(), BigUint::from(1680u32));
        assert_eq!(enumerate_subspaces(4, 2).unwrap().len(), 35);
    }

    #[test]
    fn enumeration_has_no_duplicates() {
        let all = enumerate_subspaces(4, 2).unwrap();
        let distinct: BTreeSet<_> = all.iter().map(|s| s.elements()).collect();
        assert_eq!(distinct.len(), all.len());
        assert!(all.iter().all(|s| s.dim() == 2));
        assert!(enumerate_subspaces(7, 2).is_err());
    }
}
