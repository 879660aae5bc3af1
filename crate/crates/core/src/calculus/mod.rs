//! The ten inference rules, read conclusion-to-premises.
//!
//! A rule application is named by a [`RuleDescriptor`]: the rule, its
//! variant, and the positions and parameters that pin the application down.
//! Given a conclusion and a descriptor, [`premises_of`] computes the unique
//! premise list or explains why the descriptor does not fit.

mod file;
mod proof;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::syntax::{Cirquent, ClusterId, Kind, Letter, Path, Side, SyntaxError};

pub use file::ProofFileError;
pub use proof::{check_proof, CheckError, CheckFailure, Justification, Proof, ProofLine};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    Commutativity,
    Associativity,
    Identity,
    Domination,
    Choosing,
    Cleansing,
    Distribution,
    Trivialization,
    Quadrilemma,
    Splitting,
}

impl Rule {
    pub const ALL: [Rule; 10] = [
        Rule::Commutativity,
        Rule::Associativity,
        Rule::Identity,
        Rule::Domination,
        Rule::Choosing,
        Rule::Cleansing,
        Rule::Distribution,
        Rule::Trivialization,
        Rule::Quadrilemma,
        Rule::Splitting,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Commutativity => "commutativity",
            Rule::Associativity => "associativity",
            Rule::Identity => "identity",
            Rule::Domination => "domination",
            Rule::Choosing => "choosing",
            Rule::Cleansing => "cleansing",
            Rule::Distribution => "distribution",
            Rule::Trivialization => "trivialization",
            Rule::Quadrilemma => "quadrilemma",
            Rule::Splitting => "splitting",
        }
    }

    pub fn from_name(name: &str) -> Option<Rule> {
        Rule::ALL.into_iter().find(|r| r.name() == name)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// First (`A`) or second (`B`) version of a two-version rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    A,
    B,
}

impl Variant {
    /// Connective kind the variant is about: `∨`-side for `A`, `∧`-side for `B`.
    fn kind(self) -> Kind {
        match self {
            Variant::A => Kind::Or,
            Variant::B => Kind::And,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::A => "a",
            Variant::B => "b",
        })
    }
}

/// One rule application, minus the cirquents themselves.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RuleDescriptor {
    Commutativity { variant: Variant, path: Path },
    Associativity { variant: Variant, path: Path },
    Identity { variant: Variant, path: Path },
    Domination { variant: Variant, path: Path },
    /// Replaces every `⊔`-node of `cluster` by its `choice` child.
    Choosing { cluster: ClusterId, choice: Side },
    /// `inner_path` leads, inside the left (variant a) or right (variant b)
    /// arm of the `⊓ᶜ` at `path`, to an inner `⊓ᶜ` of the same cluster.
    Cleansing { variant: Variant, path: Path, inner_path: Path },
    Distribution { variant: Variant, path: Path },
    Trivialization { path: Path, letter: Letter },
    /// `cluster` is the fresh conjunctive cluster of the premise.
    Quadrilemma { path: Path, cluster: ClusterId },
    Splitting { cluster: ClusterId },
}

impl RuleDescriptor {
    pub fn rule(&self) -> Rule {
        match self {
            RuleDescriptor::Commutativity { .. } => Rule::Commutativity,
            RuleDescriptor::Associativity { .. } => Rule::Associativity,
            RuleDescriptor::Identity { .. } => Rule::Identity,
            RuleDescriptor::Domination { .. } => Rule::Domination,
            RuleDescriptor::Choosing { .. } => Rule::Choosing,
            RuleDescriptor::Cleansing { .. } => Rule::Cleansing,
            RuleDescriptor::Distribution { .. } => Rule::Distribution,
            RuleDescriptor::Trivialization { .. } => Rule::Trivialization,
            RuleDescriptor::Quadrilemma { .. } => Rule::Quadrilemma,
            RuleDescriptor::Splitting { .. } => Rule::Splitting,
        }
    }

    pub fn variant(&self) -> Option<Variant> {
        match self {
            RuleDescriptor::Commutativity { variant, .. }
            | RuleDescriptor::Associativity { variant, .. }
            | RuleDescriptor::Identity { variant, .. }
            | RuleDescriptor::Domination { variant, .. }
            | RuleDescriptor::Cleansing { variant, .. }
            | RuleDescriptor::Distribution { variant, .. } => Some(*variant),
            RuleDescriptor::Choosing { choice: Side::Left, .. } => Some(Variant::A),
            RuleDescriptor::Choosing { choice: Side::Right, .. } => Some(Variant::B),
            _ => None,
        }
    }

    pub fn path(&self) -> Option<&Path> {
        match self {
            RuleDescriptor::Commutativity { path, .. }
            | RuleDescriptor::Associativity { path, .. }
            | RuleDescriptor::Identity { path, .. }
            | RuleDescriptor::Domination { path, .. }
            | RuleDescriptor::Cleansing { path, .. }
            | RuleDescriptor::Distribution { path, .. }
            | RuleDescriptor::Trivialization { path, .. }
            | RuleDescriptor::Quadrilemma { path, .. } => Some(path),
            RuleDescriptor::Choosing { .. } | RuleDescriptor::Splitting { .. } => None,
        }
    }

    pub fn premise_count(&self) -> usize {
        match self {
            RuleDescriptor::Splitting { .. } => 2,
            _ => 1,
        }
    }
}

/// `rule(variant) @ path`, plus the parameters that are not positions.
impl fmt::Display for RuleDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rule())?;
        if let Some(v) = self.variant() {
            write!(f, "({v})")?;
        }
        match self {
            RuleDescriptor::Choosing { cluster, choice } => write!(f, " {cluster}.{choice}"),
            RuleDescriptor::Splitting { cluster } => write!(f, " {cluster}"),
            RuleDescriptor::Cleansing { path, inner_path, .. } => {
                write!(f, " @ {} / {}", label(path), label(inner_path))
            }
            RuleDescriptor::Trivialization { path, letter } => write!(f, " @ {} [{letter}]", label(path)),
            RuleDescriptor::Quadrilemma { path, cluster } => write!(f, " @ {} [{cluster}]", label(path)),
            other => write!(f, " @ {}", label(other.path().expect("positional rule"))),
        }
    }
}

/// Human-facing path text: `ε` for the root.
fn label(path: &Path) -> String {
    if path.is_root() {
        "ε".to_string()
    } else {
        path.to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("{0}")]
    Path(#[from] SyntaxError),
    #[error("{rule} @ {path}: expected {expected}, found `{found}`")]
    Shape { rule: Rule, path: Path, expected: &'static str, found: String },
    #[error("{rule}: side condition failed: {condition}")]
    SideCondition { rule: Rule, condition: String },
}

fn shape(rule: Rule, path: &Path, expected: &'static str, found: &Cirquent) -> RuleError {
    RuleError::Shape { rule, path: path.clone(), expected, found: found.to_string() }
}

/// The premises from which `conclusion` follows by the application `d`.
pub fn premises_of(conclusion: &Cirquent, d: &RuleDescriptor) -> Result<Vec<Cirquent>, RuleError> {
    let rule = d.rule();
    match d {
        RuleDescriptor::Choosing { cluster, choice } => {
            if !cluster.is_disjunctive() {
                return Err(RuleError::SideCondition {
                    rule,
                    condition: format!("{cluster} is not a disjunctive cluster"),
                });
            }
            if !conclusion.contains_cluster(*cluster) {
                return Err(RuleError::SideCondition {
                    rule,
                    condition: format!("{cluster} does not occur in the conclusion"),
                });
            }
            Ok(vec![choose_all(conclusion, *cluster, *choice)])
        }
        RuleDescriptor::Splitting { cluster } => match conclusion {
            Cirquent::Choice { cluster: c, left, right } if c == cluster && c.is_conjunctive() => {
                if left.contains_cluster(*c) || right.contains_cluster(*c) {
                    return Err(RuleError::SideCondition {
                        rule,
                        condition: format!("{c} occurs inside a component"),
                    });
                }
                Ok(vec![(**left).clone(), (**right).clone()])
            }
            other => Err(shape(rule, &Path::root(), "A ⊓ᶜ B with the named cluster at the root", other)),
        },
        RuleDescriptor::Quadrilemma { path, cluster } => {
            if !cluster.is_conjunctive() {
                return Err(RuleError::SideCondition {
                    rule,
                    condition: format!("{cluster} is not a conjunctive cluster"),
                });
            }
            if conclusion.contains_cluster(*cluster) {
                return Err(RuleError::SideCondition {
                    rule,
                    condition: format!("{cluster} occurs in the conclusion"),
                });
            }
            let sub = conclusion.subcirquent_at(path)?;
            let replacement = quadrilemma(sub, *cluster).ok_or_else(|| {
                shape(rule, path, "(A ⊓ᵃ B) ∧ (C ⊓ᵇ D)", sub)
            })?;
            Ok(vec![conclusion.replace_at(path, replacement)?])
        }
        RuleDescriptor::Cleansing { variant, path, inner_path } => {
            let sub = conclusion.subcirquent_at(path)?;
            let Cirquent::Choice { cluster, left, right } = sub else {
                return Err(shape(rule, path, "a ⊓ᶜ node", sub));
            };
            if !cluster.is_conjunctive() {
                return Err(shape(rule, path, "a ⊓ᶜ node", sub));
            }
            let arm = match variant {
                Variant::A => left,
                Variant::B => right,
            };
            let full_inner = path.child(if *variant == Variant::A { Side::Left } else { Side::Right }).join(inner_path);
            let inner = arm.subcirquent_at(inner_path).map_err(|_| SyntaxError::InvalidPath { path: full_inner.clone() })?;
            let kept = match inner {
                Cirquent::Choice { cluster: c, left, right } if c == cluster => match variant {
                    Variant::A => (**left).clone(),
                    Variant::B => (**right).clone(),
                },
                other => return Err(shape(rule, &full_inner, "an inner ⊓ᶜ of the same cluster", other)),
            };
            Ok(vec![conclusion.replace_at(&full_inner, kept)?])
        }
        RuleDescriptor::Trivialization { path, letter } => {
            let sub = conclusion.subcirquent_at(path)?;
            match sub {
                Cirquent::Par { kind: Kind::Or, left, right }
                    if matches!(&**left, Cirquent::Lit { letter: l, positive: false } if l == letter)
                        && matches!(&**right, Cirquent::Lit { letter: l, positive: true } if l == letter) =>
                {
                    Ok(vec![conclusion.replace_at(path, Cirquent::Top)?])
                }
                other => Err(shape(rule, path, "¬p ∨ p for the named letter", other)),
            }
        }
        RuleDescriptor::Commutativity { variant, path }
        | RuleDescriptor::Associativity { variant, path }
        | RuleDescriptor::Identity { variant, path }
        | RuleDescriptor::Domination { variant, path }
        | RuleDescriptor::Distribution { variant, path } => {
            let sub = conclusion.subcirquent_at(path)?;
            let replacement = local_rewrite(rule, *variant, sub).ok_or_else(|| {
                shape(rule, path, expected_shape(rule, *variant), sub)
            })?;
            Ok(vec![conclusion.replace_at(path, replacement)?])
        }
    }
}

fn expected_shape(rule: Rule, variant: Variant) -> &'static str {
    match (rule, variant) {
        (Rule::Commutativity, Variant::A) => "A ∨ B",
        (Rule::Commutativity, Variant::B) => "A ∧ B",
        (Rule::Associativity, Variant::A) => "(A ∨ B) ∨ C",
        (Rule::Associativity, Variant::B) => "(A ∧ B) ∧ C",
        (Rule::Identity, Variant::A) => "A ∨ ⊥",
        (Rule::Identity, Variant::B) => "A ∧ ⊤",
        (Rule::Domination, Variant::A) => "A ∨ ⊤",
        (Rule::Domination, Variant::B) => "A ∧ ⊥",
        (Rule::Distribution, Variant::A) => "(A ∧ B) ∨ C",
        (Rule::Distribution, Variant::B) => "(A ⊓ᶜ B) ∨ C",
        _ => unreachable!("not a local rule"),
    }
}

/// Premise-side replacement for the subcirquent of a positional one-node rule.
fn local_rewrite(rule: Rule, variant: Variant, sub: &Cirquent) -> Option<Cirquent> {
    let kind = variant.kind();
    let Cirquent::Par { kind: k, left, right } = sub else { return None };
    match rule {
        Rule::Commutativity if *k == kind => {
            Some(Cirquent::Par { kind, left: right.clone(), right: left.clone() })
        }
        Rule::Associativity if *k == kind => match &**left {
            Cirquent::Par { kind: k2, left: a, right: b } if *k2 == kind => Some(Cirquent::Par {
                kind,
                left: a.clone(),
                right: Arc::new(Cirquent::Par { kind, left: b.clone(), right: right.clone() }),
            }),
            _ => None,
        },
        Rule::Identity if *k == kind => {
            let unit = if kind == Kind::Or { Cirquent::Bot } else { Cirquent::Top };
            (**right == unit).then(|| (**left).clone())
        }
        Rule::Domination if *k == kind => {
            let absorbing = if kind == Kind::Or { Cirquent::Top } else { Cirquent::Bot };
            (**right == absorbing).then_some(absorbing)
        }
        Rule::Distribution if *k == Kind::Or => {
            let c = right;
            let (a, b) = match (variant, &**left) {
                (Variant::A, Cirquent::Par { kind: Kind::And, left: a, right: b }) => (a, b),
                (Variant::B, Cirquent::Choice { cluster, left: a, right: b }) if cluster.is_conjunctive() => (a, b),
                _ => return None,
            };
            let ac = Arc::new(Cirquent::Par { kind: Kind::Or, left: a.clone(), right: c.clone() });
            let bc = Arc::new(Cirquent::Par { kind: Kind::Or, left: b.clone(), right: c.clone() });
            Some(left.with_children(ac, bc))
        }
        _ => None,
    }
}

/// Premise-side replacement for `(A ⊓ᵃ B) ∧ (C ⊓ᵇ D)`:
/// `((A∧(C⊓ᵇD)) ⊓ᵃ (B∧(C⊓ᵇD))) ⊓ᶜ (((A⊓ᵃB)∧C) ⊓ᵇ ((A⊓ᵃB)∧D))`.
fn quadrilemma(sub: &Cirquent, fresh: ClusterId) -> Option<Cirquent> {
    let Cirquent::Par { kind: Kind::And, left: ab, right: cd } = sub else { return None };
    let (Cirquent::Choice { cluster: a, left: x_a, right: x_b }, Cirquent::Choice { cluster: b, left: x_c, right: x_d }) =
        (&**ab, &**cd)
    else {
        return None;
    };
    if !a.is_conjunctive() || !b.is_conjunctive() {
        return None;
    }
    let and = |l: &Arc<Cirquent>, r: &Arc<Cirquent>| {
        Arc::new(Cirquent::Par { kind: Kind::And, left: l.clone(), right: r.clone() })
    };
    let first = Arc::new(Cirquent::Choice { cluster: *a, left: and(x_a, cd), right: and(x_b, cd) });
    let second = Arc::new(Cirquent::Choice { cluster: *b, left: and(ab, x_c), right: and(ab, x_d) });
    Some(Cirquent::Choice { cluster: fresh, left: first, right: second })
}

/// Replaces every `⊔`-node of `cluster` by (the image of) its `choice` child,
/// outside-in: occurrences inside a discarded child disappear with it.
pub fn choose_all(c: &Cirquent, cluster: ClusterId, choice: Side) -> Cirquent {
    fn go(node: &Arc<Cirquent>, cluster: ClusterId, choice: Side) -> Arc<Cirquent> {
        match &**node {
            Cirquent::Choice { cluster: c, left, right } if *c == cluster => match choice {
                Side::Left => go(left, cluster, choice),
                Side::Right => go(right, cluster, choice),
            },
            Cirquent::Par { left, right, .. } | Cirquent::Choice { left, right, .. } => {
                let l = go(left, cluster, choice);
                let r = go(right, cluster, choice);
                if Arc::ptr_eq(&l, left) && Arc::ptr_eq(&r, right) {
                    node.clone()
                } else {
                    Arc::new(node.with_children(l, r))
                }
            }
            _ => node.clone(),
        }
    }
    let root = Arc::new(c.clone());
    Arc::unwrap_or_clone(go(&root, cluster, choice))
}
