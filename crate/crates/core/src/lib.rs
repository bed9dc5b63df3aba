//! Complementary-divisor arithmetic and split graph factor graphs.
//!
//! A natural number `n` has the Δ property when some difference `|a - b|` of
//! complementary divisors (`ab = n`) is itself the sum of two nonzero such
//! differences. Equivalently, `n` admits a Δ-triple `(x, y, z)` of divisors
//! with `1 < x < y <= z < sqrt(n)` and
//!
//! ```text
//! n/x - x = (n/y - y) + (n/z - z)
//! ```
//!
//! The same numbers are exactly the multiplicities `n` for which some split
//! graph has a factor graph that is an `n`-simple triangle of type 0. This
//! crate decides and witnesses the property ([`delta`]), classifies numbers
//! through cheap structural obstructions ([`classify`]), produces members
//! from cubic generating families ([`polyfam`]), and builds the graph side of
//! the correspondence ([`graphs`], [`realize`]).
//!
//! ```
//! use deltaprop::delta::{delta_triples, has_delta};
//!
//! assert!(has_delta(24).unwrap());
//! let triples = delta_triples(24).unwrap();
//! assert_eq!(triples[0].as_array(), [2, 3, 3]);
//! ```

pub mod arith;
pub mod classify;
pub mod delta;
mod error;
pub mod graphs;
pub mod polyfam;
pub mod realize;
pub mod verify;

pub use arith::{factorize, Factorization, CEILING};
pub use classify::{classify, ClassVerdict, Decision, Rule};
pub use delta::{
    delta_triples, has_delta, DeltaTriple, DescentWitness, DivisorDiffSets, MembershipTable,
    PrimitiveDecomposition, Regime,
};
pub use error::{Error, Result};
pub use graphs::{FactorGraph, GraphStats, SplitGraph, TriangleType};
pub use polyfam::PolyFamily;
pub use realize::RealizationParams;
