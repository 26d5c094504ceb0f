//! Exact-learning, partition-learning and PAC sample-complexity machinery over
//! explicit truth-table concept classes.
//!
//! A concept class over `{0,1}^n` is held as a bit-packed `|C| × 2^n` matrix
//! ([`ConceptClass`]). On top of it sit the combinatorial parameters that govern
//! membership-query complexity ([`concept`]), deterministic generators for the
//! standard example classes ([`zoo`]), a dense state-vector simulator for the
//! quantum query subroutines ([`qsim`]), the exact learners themselves
//! ([`learners`]), partition learning and the Simon-style separation
//! ([`partitions`]), and the PAC inner-product checks ([`pacsim`]).
//!
//! The crate is `no_std` and only needs `alloc`; file formats, the CLI and the
//! experiment harness live in the `qlearn` crate.
#![no_std]
#![deny(rust_2018_idioms)]
#![warn(missing_debug_implementations)]

extern crate alloc;

pub mod bits;
pub mod concept;
mod error;
pub mod learners;
pub mod pacsim;
pub mod partitions;
pub mod qsim;
pub mod rng;
pub mod zoo;

pub use bits::BitVec;
pub use concept::{Concept, ConceptClass, ConceptSet, FlipMask, GammaReport, Rational};
pub use error::{Error, Result};
pub use rng::SplitMix64;
