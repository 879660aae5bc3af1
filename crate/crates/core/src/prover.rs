//! Validity decision with proof construction.
//!
//! The recursion purifies its input, then splits on the root of the pure
//! result. Every recursive call is on a cirquent of strictly smaller rank.
//! The oracle is never consulted for the verdict; it only supplies optional
//! refutations for display.

use std::fmt;

use thiserror::Error;

use crate::calculus::{choose_all, Proof, RuleDescriptor};
use crate::oracle::{decide_uniform_with, OracleCaps, Refutation};
use crate::purifier::{purify, TraceStep};
use crate::syntax::{Cirquent, ClusterId, Kind, Side};

/// Why the procedure rejected its input (the case reached at the top level,
/// after purification).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InvalidCase {
    Falsum,
    Literal,
    /// `⊔`-root, both choices fail.
    ChoiceRoot,
    /// `⊓`-root, some component fails.
    SplitComponent,
    /// `∨`-root, no choice on any `⊔`-disjunct succeeds.
    Disjunction,
    /// `∧`-root whose first non-`⊓` conjunct is a literal.
    LiteralConjunct,
    /// `∧`-root whose first non-`⊓` conjunct admits no successful choice.
    Conjunct,
}

impl fmt::Display for InvalidCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InvalidCase::Falsum => "purifies to F",
            InvalidCase::Literal => "purifies to a literal",
            InvalidCase::ChoiceRoot => "neither choice at the root succeeds",
            InvalidCase::SplitComponent => "a component of the root split is invalid",
            InvalidCase::Disjunction => "no choice in any disjunct succeeds",
            InvalidCase::LiteralConjunct => "a conjunct is a literal",
            InvalidCase::Conjunct => "no choice in the chosen conjunct succeeds",
        })
    }
}

#[derive(Clone, Debug)]
pub enum Verdict {
    Valid { proof: Proof },
    Invalid { reason: InvalidCase, witness: Option<Refutation> },
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid { .. })
    }

    pub fn proof(&self) -> Option<&Proof> {
        match self {
            Verdict::Valid { proof } => Some(proof),
            Verdict::Invalid { .. } => None,
        }
    }
}

pub fn prove(a: &Cirquent) -> Verdict {
    match search(a) {
        Ok(proof) => Verdict::Valid { proof },
        Err(reason) => Verdict::Invalid { reason, witness: None },
    }
}

/// Like [`prove`], attaching the oracle's refutation to an invalid verdict
/// when the input is within `caps`.
pub fn prove_with_witness(a: &Cirquent, caps: OracleCaps) -> Verdict {
    match prove(a) {
        Verdict::Invalid { reason, .. } => {
            let witness = decide_uniform_with(a, caps).ok().and_then(|d| d.refutation);
            Verdict::Invalid { reason, witness }
        }
        valid => valid,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("the proof concludes `{found}` but the trace ends at `{expected}`")]
pub struct DerivationError {
    pub expected: String,
    pub found: String,
}

/// Extends a proof of the trace's final cirquent by the trace's steps in
/// reverse, each citing the line before it.
pub fn derivation_from_trace(trace: &[TraceStep], proof_of_b: Proof) -> Result<Proof, DerivationError> {
    let Some(last) = trace.last() else { return Ok(proof_of_b) };
    let mut proof = proof_of_b;
    match proof.conclusion() {
        Some(c) if *c == last.after => {}
        other => {
            return Err(DerivationError {
                expected: last.after.to_string(),
                found: other.map(|c| c.to_string()).unwrap_or_default(),
            })
        }
    }
    for step in trace.iter().rev() {
        let prev = proof.last_index();
        proof.push(step.before.clone(), step.descriptor.clone(), vec![prev]);
    }
    Ok(proof)
}

fn search(a: &Cirquent) -> Result<Proof, InvalidCase> {
    let purification = purify(a);
    let b = &purification.output;
    let proof = match b {
        Cirquent::Top => Proof::axiom(),
        Cirquent::Bot => return Err(InvalidCase::Falsum),
        Cirquent::Lit { .. } => return Err(InvalidCase::Literal),
        Cirquent::Choice { cluster, .. } if cluster.is_disjunctive() => {
            try_choices(b, [*cluster]).ok_or(InvalidCase::ChoiceRoot)?
        }
        Cirquent::Choice { cluster, left, right } => {
            let mut proof = search(left).map_err(|_| InvalidCase::SplitComponent)?;
            let right_proof = search(right).map_err(|_| InvalidCase::SplitComponent)?;
            let left_line = proof.last_index();
            let right_line = proof.absorb(&right_proof);
            proof.push(b.clone(), RuleDescriptor::Splitting { cluster: *cluster }, vec![left_line, right_line]);
            proof
        }
        Cirquent::Par { kind: Kind::Or, .. } => {
            try_choices(b, choice_clusters(b)).ok_or(InvalidCase::Disjunction)?
        }
        Cirquent::Par { kind: Kind::And, .. } => {
            let conjuncts = b.flatten(Kind::And);
            let pick = conjuncts
                .iter()
                .find(|e| !e.is_choice(Kind::And))
                .expect("a pure conjunction has a conjunct that is not a ⊓-choice");
            match pick {
                Cirquent::Lit { .. } => return Err(InvalidCase::LiteralConjunct),
                Cirquent::Choice { cluster, .. } => try_choices(b, [*cluster]).ok_or(InvalidCase::Conjunct)?,
                Cirquent::Par { kind: Kind::Or, .. } => {
                    try_choices(b, choice_clusters(pick)).ok_or(InvalidCase::Conjunct)?
                }
                other => unreachable!("pure conjunction has conjunct `{other}`"),
            }
        }
    };
    Ok(derivation_from_trace(&purification.trace, proof).expect("purification ends at the proved cirquent"))
}

/// Clusters of the `⊔`-rooted disjuncts of the `∨`-chain `c`, in order, without repeats.
fn choice_clusters(c: &Cirquent) -> Vec<ClusterId> {
    let mut out = Vec::new();
    for item in c.flatten(Kind::Or) {
        if let Cirquent::Choice { cluster, .. } = item {
            if cluster.is_disjunctive() && !out.contains(cluster) {
                out.push(*cluster);
            }
        }
    }
    out
}

/// First success among `chooseAll(b, c, i)` for the given clusters and
/// `i = 0, 1`, extended by the Choosing step that yields `b`.
fn try_choices(b: &Cirquent, clusters: impl IntoIterator<Item = ClusterId>) -> Option<Proof> {
    for cluster in clusters {
        for choice in Side::BOTH {
            if let Ok(mut proof) = search(&choose_all(b, cluster, choice)) {
                let prev = proof.last_index();
                proof.push(b.clone(), RuleDescriptor::Choosing { cluster, choice }, vec![prev]);
                return Some(proof);
            }
        }
    }
    None
}
