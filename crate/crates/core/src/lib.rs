//! Toolkit for the squarefree graph: vertices are the squarefree integers
//! `1..=n`, and two vertices are adjacent when they are coprime.
//!
//! * [`sieve`]: squarefree flags, Möbius values, factor lists, streaming.
//! * [`arith`]: exact degree counts and their closed-form estimates.
//! * [`cover`]: clique covers built by the greedy, capped-greedy and
//!   most-constrained-first strategies, plus an exhaustive validator.
//! * [`lemma`]: margin-bearing checks of the counting lemmas and constants.
//! * [`oracle`]: brute-force independence numbers and the `f(ℓ)` CDF.

pub mod arith;
pub mod cover;
pub mod error;
pub mod lemma;
pub mod oracle;
pub mod report;
pub mod sieve;
pub mod sum;

pub use arith::{DegreeResult, ExactRational};
pub use cover::{CliqueCover, StrategyConfig, StrategyKind};
pub use error::{Error, Result};
pub use lemma::{EpsilonSet, SigmaConstants};
pub use report::VerificationReport;
pub use sieve::{FactorList, MobiusTable, SquarefreeTable};
