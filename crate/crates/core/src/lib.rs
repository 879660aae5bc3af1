//! Cirquent calculus for the elementary-base fragment of computability
//! logic.
//!
//! - [`syntax`]: cirquents, the surface grammar, negation, rank.
//! - [`semantics`]: runs, legality and the winning condition.
//! - [`oracle`]: brute-force uniform validity with strategy extraction.
//! - [`calculus`]: the ten inference rules, proofs and the proof checker.
//! - [`purifier`]: purity and the seven-stage purification procedure.
//! - [`prover`]: the decision procedure that emits checkable proofs.
//! - [`harness`]: cirquent enumeration and the prover-vs-oracle sweep.

pub mod calculus;
pub mod harness;
pub mod oracle;
pub mod prover;
pub mod purifier;
pub mod semantics;
pub mod syntax;

pub use syntax::{parse, Cirquent, ClusterId, Kind, Letter, Path, Polarity, Side};
