use std::fmt;

use thiserror::Error;

use super::{premises_of, RuleDescriptor, RuleError};
use crate::syntax::Cirquent;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Justification {
    Axiom,
    /// `premises` are 1-based indices of earlier lines, in rule order.
    Step { descriptor: RuleDescriptor, premises: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofLine {
    /// 1-based.
    pub index: usize,
    pub cirquent: Cirquent,
    pub justification: Justification,
}

/// A sequence of lines; well-formedness is only established by [`check_proof`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Proof {
    lines: Vec<ProofLine>,
}

impl Proof {
    /// The one-line proof of `⊤`.
    pub fn axiom() -> Proof {
        Proof { lines: vec![ProofLine { index: 1, cirquent: Cirquent::Top, justification: Justification::Axiom }] }
    }

    pub fn from_lines(lines: Vec<ProofLine>) -> Proof {
        Proof { lines }
    }

    pub fn lines(&self) -> &[ProofLine] {
        &self.lines
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn last_index(&self) -> usize {
        self.lines.len()
    }

    pub fn conclusion(&self) -> Option<&Cirquent> {
        self.lines.last().map(|l| &l.cirquent)
    }

    /// Appends a line and returns its index.
    pub fn push(&mut self, cirquent: Cirquent, descriptor: RuleDescriptor, premises: Vec<usize>) -> usize {
        let index = self.lines.len() + 1;
        self.lines.push(ProofLine { index, cirquent, justification: Justification::Step { descriptor, premises } });
        index
    }

    /// Appends the non-axiom lines of `other`, renumbered to follow this
    /// proof; `other`'s axiom is identified with line 1 here. Returns the new
    /// index of `other`'s last line.
    pub fn absorb(&mut self, other: &Proof) -> usize {
        let offset = self.lines.len();
        let map = |i: usize| if i == 1 { 1 } else { i - 1 + offset };
        for line in other.lines.iter().skip(1) {
            let justification = match &line.justification {
                Justification::Axiom => Justification::Axiom,
                Justification::Step { descriptor, premises } => Justification::Step {
                    descriptor: descriptor.clone(),
                    premises: premises.iter().map(|&i| map(i)).collect(),
                },
            };
            self.lines.push(ProofLine { index: self.lines.len() + 1, cirquent: line.cirquent.clone(), justification });
        }
        map(other.lines.len())
    }
}

impl fmt::Display for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in &self.lines {
            write!(f, "{:>3}. {}    ", line.index, line.cirquent)?;
            match &line.justification {
                Justification::Axiom => writeln!(f, "axiom")?,
                Justification::Step { descriptor, premises } => {
                    let ps: Vec<String> = premises.iter().map(|p| p.to_string()).collect();
                    writeln!(f, "{descriptor} from {}", ps.join(","))?
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckFailure {
    #[error("the proof has no lines")]
    Empty,
    #[error("line numbered {found}, expected {expected}")]
    Numbering { expected: usize, found: usize },
    #[error("the first line must be the axiom T")]
    FirstLineNotAxiom,
    #[error("only the first line may be an axiom")]
    StrayAxiom,
    #[error("premise {premise} does not refer to an earlier line")]
    PremiseOutOfRange { premise: usize },
    #[error("rule takes {expected} premise(s), {found} cited")]
    PremiseCount { expected: usize, found: usize },
    #[error("{0}")]
    Rule(#[from] RuleError),
    #[error("premise {position} should be `{expected}` but line {line} is `{found}`")]
    Mismatch { position: usize, line: usize, expected: String, found: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {reason}")]
pub struct CheckError {
    pub line: usize,
    pub reason: CheckFailure,
}

/// Verifies every line and returns the proved cirquent (the last line).
pub fn check_proof(proof: &Proof) -> Result<Cirquent, CheckError> {
    let fail = |line: usize, reason: CheckFailure| Err(CheckError { line, reason });
    if proof.lines.is_empty() {
        return fail(0, CheckFailure::Empty);
    }
    for (n, line) in proof.lines.iter().enumerate() {
        let expected = n + 1;
        if line.index != expected {
            return fail(expected, CheckFailure::Numbering { expected, found: line.index });
        }
        match &line.justification {
            Justification::Axiom if expected == 1 && line.cirquent == Cirquent::Top => {}
            Justification::Axiom if expected == 1 => return fail(1, CheckFailure::FirstLineNotAxiom),
            Justification::Axiom => return fail(expected, CheckFailure::StrayAxiom),
            Justification::Step { .. } if expected == 1 => return fail(1, CheckFailure::FirstLineNotAxiom),
            Justification::Step { descriptor, premises } => {
                if let Some(&bad) = premises.iter().find(|&&p| p == 0 || p >= expected) {
                    return fail(expected, CheckFailure::PremiseOutOfRange { premise: bad });
                }
                if premises.len() != descriptor.premise_count() {
                    return fail(
                        expected,
                        CheckFailure::PremiseCount { expected: descriptor.premise_count(), found: premises.len() },
                    );
                }
                let computed = match premises_of(&line.cirquent, descriptor) {
                    Ok(ps) => ps,
                    Err(e) => return fail(expected, e.into()),
                };
                for (position, (want, &cited)) in computed.iter().zip(premises).enumerate() {
                    let have = &proof.lines[cited - 1].cirquent;
                    if want != have {
                        return fail(
                            expected,
                            CheckFailure::Mismatch {
                                position: position + 1,
                                line: cited,
                                expected: want.to_string(),
                                found: have.to_string(),
                            },
                        );
                    }
                }
            }
        }
    }
    Ok(proof.lines.last().expect("nonempty").cirquent.clone())
}
