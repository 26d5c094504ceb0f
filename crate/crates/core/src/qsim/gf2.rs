//! Linear algebra over F₂ on packed `u64` vectors.
//!
//! Bit `i` of a vector is coordinate `i`. Elimination pivots on the highest set
//! bit of each row.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Largest supported ambient dimension.
pub const MAX_DIM: u32 = 64;

#[inline]
fn pivot(v: u64) -> u32 {
    63 - v.leading_zeros()
}

#[inline]
fn dim_mask(m: u32) -> u64 {
    if m >= 64 { u64::MAX } else { (1u64 << m) - 1 }
}

/// Fully reduced row-echelon basis of the span of `vectors`, rows sorted by
/// decreasing pivot. Unique for a given span.
pub fn rref(vectors: &[u64]) -> Vec<u64> {
    let mut rows: Vec<u64> = Vec::new();
    for &v in vectors {
        let r = reduce_by(&rows, v);
        if r == 0 {
            continue;
        }
        let p = pivot(r);
        for row in rows.iter_mut() {
            if *row >> p & 1 == 1 {
                *row ^= r;
            }
        }
        let at = rows.iter().position(|&row| pivot(row) < p).unwrap_or(rows.len());
        rows.insert(at, r);
    }
    rows
}

/// Reduces `v` against a fully reduced basis.
#[inline]
fn reduce_by(basis: &[u64], mut v: u64) -> u64 {
    for &row in basis {
        if v >> pivot(row) & 1 == 1 {
            v ^= row;
        }
    }
    v
}

pub fn gf2_rank(vectors: &[u64]) -> usize {
    rref(vectors).len()
}

/// Basis of `{y ∈ F₂^m : y·v = 0 for all v in vectors}`.
pub fn gf2_nullspace_basis(vectors: &[u64], m: u32) -> Result<Vec<u64>> {
    check_vectors(vectors, m)?;
    let rows = rref(vectors);
    let pivots = rows.iter().fold(0u64, |acc, &r| acc | 1 << pivot(r));
    let mut basis = Vec::with_capacity(m as usize - rows.len());
    for f in (0..m).filter(|&f| pivots >> f & 1 == 0) {
        let y = rows
            .iter()
            .filter(|&&r| r >> f & 1 == 1)
            .fold(1u64 << f, |y, &r| y | 1 << pivot(r));
        basis.push(y);
    }
    Ok(basis)
}

pub fn gf2_span_contains(basis: &[u64], v: u64) -> bool {
    reduce_by(&rref(basis), v) == 0
}

/// Inner product over F₂.
#[inline]
pub fn dot(a: u64, b: u64) -> bool {
    (a & b).count_ones() & 1 == 1
}

fn check_vectors(vectors: &[u64], m: u32) -> Result<()> {
    if m == 0 || m > MAX_DIM {
        return Err(Error::ParameterOutOfRange(alloc::format!("dimension {m} outside 1..=64")));
    }
    if let Some(&v) = vectors.iter().find(|&&v| v & !dim_mask(m) != 0) {
        return Err(Error::ParameterOutOfRange(alloc::format!(
            "vector {v:#x} has bits beyond dimension {m}"
        )));
    }
    Ok(())
}

/// A subspace of F₂^m held as its canonical reduced echelon basis.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubspaceF2 {
    m: u32,
    basis: Vec<u64>,
}

impl SubspaceF2 {
    /// Subspace with the given basis; the vectors must be independent.
    pub fn new(m: u32, basis: &[u64]) -> Result<Self> {
        let s = Self::span(m, basis)?;
        if s.basis.len() != basis.len() {
            return Err(Error::LinearlyDependent);
        }
        Ok(s)
    }

    /// Span of arbitrary vectors.
    pub fn span(m: u32, vectors: &[u64]) -> Result<Self> {
        check_vectors(vectors, m)?;
        Ok(Self { m, basis: rref(vectors) })
    }

    pub fn zero(m: u32) -> Result<Self> {
        Self::span(m, &[])
    }

    pub fn ambient_dim(&self) -> u32 {
        self.m
    }

    pub fn dim(&self) -> u32 {
        self.basis.len() as u32
    }

    pub fn basis(&self) -> &[u64] {
        &self.basis
    }

    pub fn contains(&self, v: u64) -> bool {
        v & !dim_mask(self.m) == 0 && reduce_by(&self.basis, v) == 0
    }

    /// Canonical representative of the coset `v + V`.
    pub fn coset_rep(&self, v: u64) -> u64 {
        reduce_by(&self.basis, v)
    }

    /// `V^⊥`.
    pub fn orthogonal_complement(&self) -> Self {
        let basis = gf2_nullspace_basis(&self.basis, self.m).expect("basis lies in F₂^m");
        Self { m: self.m, basis: rref(&basis) }
    }

    /// All `2^dim` elements in increasing order.
    pub fn elements(&self) -> Vec<u64> {
        let mut out: Vec<u64> = (0u64..1 << self.basis.len())
            .map(|sel| {
                self.basis
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| sel >> i & 1 == 1)
                    .fold(0, |acc, (_, &b)| acc ^ b)
            })
            .collect();
        out.sort_unstable();
        out
    }
}
