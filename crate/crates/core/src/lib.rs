//! Finite multiple zeta(-star) values as truncated multiple harmonic sums
//! modulo primes, together with an exact verification harness for their
//! sum formulas and the relations behind them.
//!
//! An element of `prod_p Z/pZ` modulo finitely many coordinates is sampled
//! on a window of primes ([`evaluator::AdelicSample`]); identities are checked
//! by exact modular equality at every prime above a threshold.

pub mod bernoulli;
pub mod cache;
pub mod cli;
pub mod error;
pub mod evaluator;
pub mod identities;
pub mod modarith;
pub mod words;

pub use error::{Error, Result};
pub use evaluator::{eval_fmzv, AdelicSample, Evaluator, Quantity};
pub use modarith::{Prime, PrimeWindow, Residue};
pub use words::{Index, SignedCombo};
