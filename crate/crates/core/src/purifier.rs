//! Purity and the seven-stage purification procedure.
//!
//! A node is *surface* when no choice node lies strictly above it. Each stage
//! is a loop; one iteration rewrites the leftmost-outermost redex of that stage
//! and strictly lowers the rank. An iteration may take several trace steps
//! (commutations and reassociations do not lower the rank on their own).

use std::fmt;

use crate::calculus::{premises_of, RuleDescriptor, Variant};
use crate::syntax::{Cirquent, ClusterId, Kind, Letter, Path, Side};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PurityViolation {
    /// 1 to 7.
    pub condition: u8,
    pub path: Path,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PurityReport {
    pub violations: Vec<PurityViolation>,
}

impl PurityReport {
    pub fn is_pure(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violates(&self, condition: u8) -> bool {
        self.violations.iter().any(|v| v.condition == condition)
    }
}

pub fn is_pure(c: &Cirquent) -> bool {
    check_purity(c).is_pure()
}

/// Every violated condition, each with a witnessing node.
pub fn check_purity(c: &Cirquent) -> PurityReport {
    let mut out = Vec::new();
    scan(c, &mut Vec::new(), true, false, false, &mut out);

    if let Cirquent::Par { kind: Kind::And, .. } = c {
        if c.flatten(Kind::And).iter().all(|item| item.is_choice(Kind::And)) {
            out.push(PurityViolation { condition: 6, path: Path::root() });
        }
    }
    if let Cirquent::Choice { cluster, left, right } = c {
        if cluster.is_conjunctive() && (left.contains_cluster(*cluster) || right.contains_cluster(*cluster)) {
            out.push(PurityViolation { condition: 7, path: Path::root() });
        }
    }
    out.sort_by_key(|v| v.condition);
    PurityReport { violations: out }
}

/// Visits surface nodes only.
fn scan(c: &Cirquent, path: &mut Vec<Side>, is_root: bool, under_or: bool, parent_or: bool, out: &mut Vec<PurityViolation>) {
    let mut flag = |condition| out.push(PurityViolation { condition, path: Path::new(path.clone()) });
    match c {
        Cirquent::Bot if !is_root => flag(1),
        Cirquent::Top if !is_root => flag(5),
        Cirquent::Par { kind: Kind::And, .. } if under_or => flag(2),
        Cirquent::Choice { cluster, .. } if cluster.is_conjunctive() && under_or => flag(3),
        Cirquent::Par { kind: Kind::Or, .. } if !parent_or && has_complementary_pair(c) => flag(4),
        _ => {}
    }
    if let Cirquent::Par { kind, left, right } = c {
        let is_or = *kind == Kind::Or;
        for (side, child) in [(Side::Left, left), (Side::Right, right)] {
            path.push(side);
            scan(child, path, false, under_or || is_or, is_or, out);
            path.pop();
        }
    }
}

/// Letter of the first literal (in chain order) whose complement is also an item.
fn complementary_literal(items: &[&Cirquent]) -> Option<Letter> {
    items.iter().find_map(|item| match item {
        Cirquent::Lit { letter, positive } => items
            .iter()
            .any(|o| matches!(o, Cirquent::Lit { letter: l, positive: p } if l == letter && p != positive))
            .then(|| letter.clone()),
        _ => None,
    })
}

fn has_complementary_pair(chain: &Cirquent) -> bool {
    complementary_literal(&chain.flatten(Kind::Or)).is_some()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub before: Cirquent,
    pub descriptor: RuleDescriptor,
    /// The unique premise of `before` under `descriptor`.
    pub after: Cirquent,
    pub stage: u8,
    /// Counts from 1 within each stage.
    pub iteration: usize,
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} : {} => {}", self.descriptor, self.before, self.after)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Purification {
    pub input: Cirquent,
    pub output: Cirquent,
    pub trace: Vec<TraceStep>,
}

/// One stage iteration, collapsed: the cirquent before its first step and
/// after its last.
#[derive(Clone, Debug)]
pub struct Iteration<'a> {
    pub stage: u8,
    pub iteration: usize,
    pub before: &'a Cirquent,
    pub after: &'a Cirquent,
    pub steps: &'a [TraceStep],
}

impl Purification {
    pub fn iterations(&self) -> Vec<Iteration<'_>> {
        self.trace
            .chunk_by(|a, b| a.stage == b.stage && a.iteration == b.iteration)
            .map(|steps| Iteration {
                stage: steps[0].stage,
                iteration: steps[0].iteration,
                before: &steps[0].before,
                after: &steps[steps.len() - 1].after,
                steps,
            })
            .collect()
    }
}

struct Rewriter {
    current: Cirquent,
    trace: Vec<TraceStep>,
    stage: u8,
    iteration: usize,
}

impl Rewriter {
    fn apply(&mut self, descriptor: RuleDescriptor) {
        let after = match premises_of(&self.current, &descriptor) {
            Ok(mut ps) if ps.len() == 1 => ps.pop().expect("one premise"),
            other => panic!("purification step {descriptor} does not fit {}: {other:?}", self.current),
        };
        let before = std::mem::replace(&mut self.current, after.clone());
        self.trace.push(TraceStep { before, descriptor, after, stage: self.stage, iteration: self.iteration });
    }

    fn at(&self, path: &Path) -> &Cirquent {
        self.current.subcirquent_at(path).expect("redex path exists")
    }

    /// Rearranges the `∨`-chain at `path` into `leaf ∨ rest`, where `leaf` is
    /// the chain item at `rel` below `path`.
    fn bring_to_front(&mut self, path: &Path, rel: &[Side]) {
        match rel {
            [] | [Side::Left] => {}
            [Side::Right] => self.apply(comm(Variant::A, path)),
            [Side::Left, rest @ ..] => {
                self.bring_to_front(&path.child(Side::Left), rest);
                self.apply(assoc(Variant::A, path));
            }
            [Side::Right, rest @ ..] => {
                self.bring_to_front(&path.child(Side::Right), rest);
                self.apply(comm(Variant::A, path));
                self.apply(assoc(Variant::A, path));
            }
        }
    }

    fn run_stage(&mut self, stage: u8, mut iterate: impl FnMut(&mut Self) -> bool) {
        self.stage = stage;
        self.iteration = 1;
        while iterate(self) {
            self.iteration += 1;
        }
    }
}

fn comm(variant: Variant, path: &Path) -> RuleDescriptor {
    RuleDescriptor::Commutativity { variant, path: path.clone() }
}

fn assoc(variant: Variant, path: &Path) -> RuleDescriptor {
    RuleDescriptor::Associativity { variant, path: path.clone() }
}

/// Path of the first surface node (pre-order) satisfying `pred`, which also
/// sees whether the node's parent is a `∨`.
fn find_surface(c: &Cirquent, pred: &impl Fn(&Cirquent, bool) -> bool) -> Option<Path> {
    fn go(c: &Cirquent, parent_or: bool, path: &mut Vec<Side>, pred: &impl Fn(&Cirquent, bool) -> bool) -> bool {
        if pred(c, parent_or) {
            return true;
        }
        if let Cirquent::Par { kind, left, right } = c {
            for (side, child) in [(Side::Left, left), (Side::Right, right)] {
                path.push(side);
                if go(child, *kind == Kind::Or, path, pred) {
                    return true;
                }
                path.pop();
            }
        }
        false
    }
    let mut path = Vec::new();
    go(c, false, &mut path, pred).then(|| Path::new(path))
}

/// Pre-order path to the first choice node of `cluster` anywhere in `c`.
fn find_cluster(c: &Cirquent, cluster: ClusterId) -> Option<Path> {
    fn go(c: &Cirquent, cluster: ClusterId, path: &mut Vec<Side>) -> bool {
        if matches!(c, Cirquent::Choice { cluster: k, .. } if *k == cluster) {
            return true;
        }
        if let Some((l, r)) = c.children() {
            for (side, child) in [(Side::Left, l), (Side::Right, r)] {
                path.push(side);
                if go(child, cluster, path) {
                    return true;
                }
                path.pop();
            }
        }
        false
    }
    let mut path = Vec::new();
    go(c, cluster, &mut path).then(|| Path::new(path))
}

/// Smallest conjunctive cluster with index at least 1 that does not occur in `c`.
pub fn fresh_conjunctive(c: &Cirquent) -> ClusterId {
    let used = c.clusters();
    (1..).map(ClusterId::conjunctive).find(|k| !used.contains(k)).expect("unbounded indices")
}

/// `kind`-node with a child equal to `unit`; commutes first if only the left one is.
fn unit_redex(r: &mut Rewriter, kind: Kind, unit: &Cirquent, rule: fn(Variant, Path) -> RuleDescriptor) -> bool {
    let hit = |n: &Cirquent, _: bool| match n {
        Cirquent::Par { kind: k, left, right } => *k == kind && (**left == *unit || **right == *unit),
        _ => false,
    };
    let Some(path) = find_surface(&r.current, &hit) else { return false };
    let variant = if kind == Kind::Or { Variant::A } else { Variant::B };
    let right_is_unit = r.at(&path).child(Side::Right).is_some_and(|x| **x == *unit);
    if !right_is_unit {
        r.apply(comm(variant, &path));
    }
    r.apply(rule(variant, path));
    true
}

fn identity(variant: Variant, path: Path) -> RuleDescriptor {
    RuleDescriptor::Identity { variant, path }
}

fn domination(variant: Variant, path: Path) -> RuleDescriptor {
    RuleDescriptor::Domination { variant, path }
}

/// `∨`-node with a child matching `is_target`; moves it to the left, then distributes.
fn distribution_redex(r: &mut Rewriter, variant: Variant, is_target: fn(&Cirquent) -> bool) -> bool {
    let hit = |n: &Cirquent, _: bool| match n {
        Cirquent::Par { kind: Kind::Or, left, right } => is_target(left) || is_target(right),
        _ => false,
    };
    let Some(path) = find_surface(&r.current, &hit) else { return false };
    if !is_target(r.at(&path).child(Side::Left).expect("∨-node")) {
        r.apply(comm(Variant::A, &path));
    }
    r.apply(RuleDescriptor::Distribution { variant, path });
    true
}

fn stage1(r: &mut Rewriter) -> bool {
    unit_redex(r, Kind::Or, &Cirquent::Bot, identity) || unit_redex(r, Kind::And, &Cirquent::Bot, domination)
}

fn stage2(r: &mut Rewriter) -> bool {
    distribution_redex(r, Variant::A, |c| c.is_par(Kind::And))
}

fn stage3(r: &mut Rewriter) -> bool {
    distribution_redex(r, Variant::B, |c| c.is_choice(Kind::And))
}

fn stage4(r: &mut Rewriter) -> bool {
    let hit = |n: &Cirquent, parent_or: bool| !parent_or && n.is_par(Kind::Or) && has_complementary_pair(n);
    let Some(path) = find_surface(&r.current, &hit) else { return false };

    let chain = r.at(&path).flatten_with_paths(Kind::Or);
    let items: Vec<&Cirquent> = chain.iter().map(|(_, c)| *c).collect();
    let letter = complementary_literal(&items).expect("chain has a complementary pair");
    let first = |chain: &[(Path, &Cirquent)], positive: bool| {
        chain
            .iter()
            .find(|(_, c)| matches!(c, Cirquent::Lit { letter: l, positive: p } if *l == letter && *p == positive))
            .map(|(p, _)| p.clone())
            .expect("literal present")
    };
    let neg = first(&chain, false);
    r.bring_to_front(&path, neg.steps());

    let rest_path = path.child(Side::Right);
    let rest = r.at(&rest_path).flatten_with_paths(Kind::Or);
    let pos = first(&rest, true);
    let trivialize = |at: Path| RuleDescriptor::Trivialization { path: at, letter: letter.clone() };
    if pos.is_root() {
        // the chain is exactly ¬p ∨ p
        r.apply(trivialize(path));
        return true;
    }
    r.bring_to_front(&rest_path, pos.steps());
    // ¬p ∨ (p ∨ R)  to  (¬p ∨ p) ∨ R
    for _ in 0..2 {
        r.apply(comm(Variant::A, &path));
        r.apply(assoc(Variant::A, &path));
    }
    r.apply(comm(Variant::A, &path));
    r.apply(trivialize(path.child(Side::Left)));
    r.apply(comm(Variant::A, &path));
    r.apply(domination(Variant::A, path));
    true
}

fn stage5(r: &mut Rewriter) -> bool {
    unit_redex(r, Kind::Or, &Cirquent::Top, domination) || unit_redex(r, Kind::And, &Cirquent::Top, identity)
}

fn stage6(r: &mut Rewriter) -> bool {
    let hit = |n: &Cirquent, _: bool| match n {
        Cirquent::Par { kind: Kind::And, left, right } => left.is_choice(Kind::And) && right.is_choice(Kind::And),
        _ => false,
    };
    let Some(path) = find_surface(&r.current, &hit) else { return false };
    let cluster = fresh_conjunctive(&r.current);
    r.apply(RuleDescriptor::Quadrilemma { path, cluster });
    true
}

fn stage7(r: &mut Rewriter) -> bool {
    let Cirquent::Choice { cluster, left, right } = &r.current else { return false };
    if !cluster.is_conjunctive() {
        return false;
    }
    let (variant, inner_path) = if let Some(p) = find_cluster(left, *cluster) {
        (Variant::A, p)
    } else if let Some(p) = find_cluster(right, *cluster) {
        (Variant::B, p)
    } else {
        return false;
    };
    r.apply(RuleDescriptor::Cleansing { variant, path: Path::root(), inner_path });
    true
}

/// Runs stages 1 to 7, each to its fixpoint.
pub fn purify(c: &Cirquent) -> Purification {
    let mut r = Rewriter { current: c.clone(), trace: Vec::new(), stage: 0, iteration: 0 };
    let stages: [fn(&mut Rewriter) -> bool; 7] = [stage1, stage2, stage3, stage4, stage5, stage6, stage7];
    for (n, stage) in stages.into_iter().enumerate() {
        r.run_stage(n as u8 + 1, stage);
    }
    Purification { input: c.clone(), output: r.current, trace: r.trace }
}
