//! Cirquent abstract syntax.
//!
//! A cirquent is a binary tree over `⊤`, `⊥`, literals, the parallel
//! connectives `∨`/`∧` and the clustered choice connectives `⊔ᶜ`/`⊓ᶜ`.
//! Children are reference counted so that rewriting only copies the spine
//! leading to the rewritten position.

mod json;
mod parse;
mod print;
mod rank;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use parse::{parse, Formula, ParseError};
pub use rank::{rank, rank_with_cap, Rank, RankError, DEFAULT_RANK_DIGIT_CAP};

/// An elementary game letter such as `p` or `r1`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(Arc<str>);

impl Letter {
    /// Builds a letter, checking it against `[a-z][a-z0-9_]*`.
    pub fn new(name: &str) -> Result<Self, SyntaxError> {
        let mut chars = name.chars();
        let ok = matches!(chars.next(), Some('a'..='z'))
            && chars.all(|c| matches!(c, 'a'..='z' | '0'..='9' | '_'));
        if ok {
            Ok(Letter(Arc::from(name)))
        } else {
            Err(SyntaxError::BadLetter(name.to_string()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarity {
    /// Clusters of choice disjunctions; resolved by the machine.
    Disjunctive,
    /// Clusters of choice conjunctions; resolved by the environment.
    Conjunctive,
}

impl Polarity {
    pub fn dual(self) -> Self {
        match self {
            Polarity::Disjunctive => Polarity::Conjunctive,
            Polarity::Conjunctive => Polarity::Disjunctive,
        }
    }
}

/// A cluster: a polarity-tagged index. `d7` and `c7` are distinct clusters
/// that are each other's duals.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClusterId {
    pub polarity: Polarity,
    pub index: u32,
}

impl ClusterId {
    pub const fn disjunctive(index: u32) -> Self {
        ClusterId { polarity: Polarity::Disjunctive, index }
    }

    pub const fn conjunctive(index: u32) -> Self {
        ClusterId { polarity: Polarity::Conjunctive, index }
    }

    pub fn dual(self) -> Self {
        ClusterId { polarity: self.polarity.dual(), index: self.index }
    }

    pub fn is_disjunctive(self) -> bool {
        self.polarity == Polarity::Disjunctive
    }

    pub fn is_conjunctive(self) -> bool {
        self.polarity == Polarity::Conjunctive
    }
}

/// Renders as `d<n>` or `c<n>`, the token used by run, policy and proof files.
impl fmt::Display for ClusterId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.polarity {
            Polarity::Disjunctive => 'd',
            Polarity::Conjunctive => 'c',
        };
        write!(f, "{tag}{}", self.index)
    }
}

impl fmt::Debug for ClusterId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl std::str::FromStr for ClusterId {
    type Err = SyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SyntaxError::BadCluster(s.to_string());
        let (polarity, digits) = match s.as_bytes().first() {
            Some(b'd') => (Polarity::Disjunctive, &s[1..]),
            Some(b'c') => (Polarity::Conjunctive, &s[1..]),
            _ => return Err(bad()),
        };
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let index = digits.parse().map_err(|_| bad())?;
        Ok(ClusterId { polarity, index })
    }
}

/// Parallel or choice connective flavour.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    Or,
    And,
}

impl Kind {
    pub fn dual(self) -> Self {
        match self {
            Kind::Or => Kind::And,
            Kind::And => Kind::Or,
        }
    }
}

/// One step of a [`Path`]: into the left or the right child. Also used as
/// the `0`/`1` choice of a move.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::Left, Side::Right];

    pub fn index(self) -> u8 {
        match self {
            Side::Left => 0,
            Side::Right => 1,
        }
    }

    pub fn from_index(i: u8) -> Option<Self> {
        match i {
            0 => Some(Side::Left),
            1 => Some(Side::Right),
            _ => None,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("`{0}` is not a letter (expected [a-z][a-z0-9_]*)")]
    BadLetter(String),
    #[error("`{0}` is not a cluster (expected d<n> or c<n>)")]
    BadCluster(String),
    #[error("`{0}` is not a path (expected dot-separated 0/1 steps)")]
    BadPath(String),
    #[error("path {path} does not address a subcirquent")]
    InvalidPath { path: Path },
}

/// Cirquent AST in official form: negation only on letters.
///
/// A choice node's connective is determined by its cluster's polarity, so a
/// `⊔` can never carry a conjunctive cluster.
#[derive(Clone)]
pub enum Cirquent {
    Top,
    Bot,
    Lit {
        letter: Letter,
        positive: bool,
    },
    Par {
        kind: Kind,
        left: Arc<Cirquent>,
        right: Arc<Cirquent>,
    },
    Choice {
        cluster: ClusterId,
        left: Arc<Cirquent>,
        right: Arc<Cirquent>,
    },
}

impl PartialEq for Cirquent {
    fn eq(&self, other: &Self) -> bool {
        use Cirquent::*;
        match (self, other) {
            (Top, Top) | (Bot, Bot) => true,
            (Lit { letter: a, positive: x }, Lit { letter: b, positive: y }) => x == y && a == b,
            (
                Par { kind: k1, left: l1, right: r1 },
                Par { kind: k2, left: l2, right: r2 },
            ) => k1 == k2 && arc_eq(l1, l2) && arc_eq(r1, r2),
            (
                Choice { cluster: c1, left: l1, right: r1 },
                Choice { cluster: c2, left: l2, right: r2 },
            ) => c1 == c2 && arc_eq(l1, l2) && arc_eq(r1, r2),
            _ => false,
        }
    }
}

impl Eq for Cirquent {}

fn arc_eq(a: &Arc<Cirquent>, b: &Arc<Cirquent>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl std::hash::Hash for Cirquent {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        std::mem::discriminant(self).hash(state);
        match self {
            Cirquent::Top | Cirquent::Bot => {}
            Cirquent::Lit { letter, positive } => {
                letter.hash(state);
                positive.hash(state);
            }
            Cirquent::Par { kind, left, right } => {
                kind.hash(state);
                left.hash(state);
                right.hash(state);
            }
            Cirquent::Choice { cluster, left, right } => {
                cluster.hash(state);
                left.hash(state);
                right.hash(state);
            }
        }
    }
}

/// Root descriptor of a cirquent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Root {
    Top,
    Bot,
    PositiveLit,
    NegativeLit,
    Or,
    And,
    ChoiceOr(ClusterId),
    ChoiceAnd(ClusterId),
}

impl Cirquent {
    pub fn lit(letter: Letter, positive: bool) -> Self {
        Cirquent::Lit { letter, positive }
    }

    /// Positive literal; panics on a malformed letter name.
    pub fn pos(name: &str) -> Self {
        Cirquent::lit(Letter::new(name).expect("valid letter"), true)
    }

    /// Negative literal; panics on a malformed letter name.
    pub fn neg(name: &str) -> Self {
        Cirquent::lit(Letter::new(name).expect("valid letter"), false)
    }

    pub fn par(kind: Kind, left: Cirquent, right: Cirquent) -> Self {
        Cirquent::Par { kind, left: Arc::new(left), right: Arc::new(right) }
    }

    pub fn or(left: Cirquent, right: Cirquent) -> Self {
        Cirquent::par(Kind::Or, left, right)
    }

    pub fn and(left: Cirquent, right: Cirquent) -> Self {
        Cirquent::par(Kind::And, left, right)
    }

    pub fn choice(cluster: ClusterId, left: Cirquent, right: Cirquent) -> Self {
        Cirquent::Choice { cluster, left: Arc::new(left), right: Arc::new(right) }
    }

    pub fn chor(index: u32, left: Cirquent, right: Cirquent) -> Self {
        Cirquent::choice(ClusterId::disjunctive(index), left, right)
    }

    pub fn chand(index: u32, left: Cirquent, right: Cirquent) -> Self {
        Cirquent::choice(ClusterId::conjunctive(index), left, right)
    }

    pub fn root(&self) -> Root {
        match self {
            Cirquent::Top => Root::Top,
            Cirquent::Bot => Root::Bot,
            Cirquent::Lit { positive: true, .. } => Root::PositiveLit,
            Cirquent::Lit { positive: false, .. } => Root::NegativeLit,
            Cirquent::Par { kind: Kind::Or, .. } => Root::Or,
            Cirquent::Par { kind: Kind::And, .. } => Root::And,
            Cirquent::Choice { cluster, .. } if cluster.is_disjunctive() => Root::ChoiceOr(*cluster),
            Cirquent::Choice { cluster, .. } => Root::ChoiceAnd(*cluster),
        }
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Cirquent::Lit { .. })
    }

    pub fn is_par(&self, kind: Kind) -> bool {
        matches!(self, Cirquent::Par { kind: k, .. } if *k == kind)
    }

    /// True for `⊔`-rooted (`Kind::Or`) or `⊓`-rooted (`Kind::And`) cirquents.
    pub fn is_choice(&self, kind: Kind) -> bool {
        match (self, kind) {
            (Cirquent::Choice { cluster, .. }, Kind::Or) => cluster.is_disjunctive(),
            (Cirquent::Choice { cluster, .. }, Kind::And) => cluster.is_conjunctive(),
            _ => false,
        }
    }

    /// Children of a connective node, `None` for atoms.
    pub fn children(&self) -> Option<(&Arc<Cirquent>, &Arc<Cirquent>)> {
        match self {
            Cirquent::Par { left, right, .. } | Cirquent::Choice { left, right, .. } => {
                Some((left, right))
            }
            _ => None,
        }
    }

    pub fn child(&self, side: Side) -> Option<&Arc<Cirquent>> {
        self.children().map(|(l, r)| match side {
            Side::Left => l,
            Side::Right => r,
        })
    }

    /// Same connective, new children.
    pub fn with_children(&self, left: Arc<Cirquent>, right: Arc<Cirquent>) -> Cirquent {
        match self {
            Cirquent::Par { kind, .. } => Cirquent::Par { kind: *kind, left, right },
            Cirquent::Choice { cluster, .. } => Cirquent::Choice { cluster: *cluster, left, right },
            _ => panic!("with_children on an atom"),
        }
    }

    /// De Morgan dual: flips literals, swaps `∨`/`∧` and dualizes clusters.
    pub fn negate(&self) -> Cirquent {
        match self {
            Cirquent::Top => Cirquent::Bot,
            Cirquent::Bot => Cirquent::Top,
            Cirquent::Lit { letter, positive } => Cirquent::lit(letter.clone(), !positive),
            Cirquent::Par { kind, left, right } => Cirquent::Par {
                kind: kind.dual(),
                left: Arc::new(left.negate()),
                right: Arc::new(right.negate()),
            },
            Cirquent::Choice { cluster, left, right } => Cirquent::Choice {
                cluster: cluster.dual(),
                left: Arc::new(left.negate()),
                right: Arc::new(right.negate()),
            },
        }
    }

    pub fn clusters(&self) -> BTreeSet<ClusterId> {
        let mut out = BTreeSet::new();
        self.visit(&mut |c| {
            if let Cirquent::Choice { cluster, .. } = c {
                out.insert(*cluster);
            }
        });
        out
    }

    pub fn letters(&self) -> BTreeSet<Letter> {
        let mut out = BTreeSet::new();
        self.visit(&mut |c| {
            if let Cirquent::Lit { letter, .. } = c {
                out.insert(letter.clone());
            }
        });
        out
    }

    pub fn contains_cluster(&self, cluster: ClusterId) -> bool {
        match self {
            Cirquent::Choice { cluster: c, left, right } => {
                *c == cluster || left.contains_cluster(cluster) || right.contains_cluster(cluster)
            }
            Cirquent::Par { left, right, .. } => {
                left.contains_cluster(cluster) || right.contains_cluster(cluster)
            }
            _ => false,
        }
    }

    /// Number of connective (non-leaf) nodes.
    pub fn connective_count(&self) -> usize {
        match self.children() {
            Some((l, r)) => 1 + l.connective_count() + r.connective_count(),
            None => 0,
        }
    }

    /// Pre-order traversal.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Cirquent)) {
        f(self);
        if let Some((l, r)) = self.children() {
            l.visit(f);
            r.visit(f);
        }
    }

    pub fn subcirquent_at(&self, at: &Path) -> Result<&Cirquent, SyntaxError> {
        let mut node = self;
        for &side in at.steps() {
            node = node
                .child(side)
                .ok_or_else(|| SyntaxError::InvalidPath { path: at.clone() })?;
        }
        Ok(node)
    }

    pub fn replace_at(&self, at: &Path, with: Cirquent) -> Result<Cirquent, SyntaxError> {
        fn go(node: &Cirquent, steps: &[Side], with: Cirquent) -> Option<Cirquent> {
            let Some((&side, rest)) = steps.split_first() else {
                return Some(with);
            };
            let (l, r) = node.children()?;
            Some(match side {
                Side::Left => node.with_children(Arc::new(go(l, rest, with)?), r.clone()),
                Side::Right => node.with_children(l.clone(), Arc::new(go(r, rest, with)?)),
            })
        }
        go(self, at.steps(), with).ok_or_else(|| SyntaxError::InvalidPath { path: at.clone() })
    }

    /// Maximal same-kind `Par` chain below (and including) this node, read as
    /// an n-ary list. A node that is not a `kind`-`Par` is a one-item list.
    pub fn flatten(&self, kind: Kind) -> Vec<&Cirquent> {
        let mut out = Vec::new();
        self.flatten_into(kind, &mut out);
        out
    }

    fn flatten_into<'a>(&'a self, kind: Kind, out: &mut Vec<&'a Cirquent>) {
        match self {
            Cirquent::Par { kind: k, left, right } if *k == kind => {
                left.flatten_into(kind, out);
                right.flatten_into(kind, out);
            }
            other => out.push(other),
        }
    }

    /// Like [`Cirquent::flatten`] but with the path (relative to this node)
    /// of every item.
    pub fn flatten_with_paths(&self, kind: Kind) -> Vec<(Path, &Cirquent)> {
        fn go<'a>(node: &'a Cirquent, kind: Kind, path: &mut Vec<Side>, out: &mut Vec<(Path, &'a Cirquent)>) {
            match node {
                Cirquent::Par { kind: k, left, right } if *k == kind => {
                    path.push(Side::Left);
                    go(left, kind, path, out);
                    path.pop();
                    path.push(Side::Right);
                    go(right, kind, path, out);
                    path.pop();
                }
                other => out.push((Path(path.clone()), other)),
            }
        }
        let mut out = Vec::new();
        go(self, kind, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for Cirquent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print::print(self))
    }
}

impl fmt::Debug for Cirquent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{}`", print::print(self))
    }
}

impl std::str::FromStr for Cirquent {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

/// Canonical surface text of a cirquent, with minimal parentheses.
pub fn print(c: &Cirquent) -> String {
    print::print(c)
}

/// Address of an occurrence: a sequence of left/right steps from the root.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path(Vec<Side>);

impl Path {
    pub fn root() -> Self {
        Path(Vec::new())
    }

    pub fn new(steps: Vec<Side>) -> Self {
        Path(steps)
    }

    pub fn steps(&self) -> &[Side] {
        &self.0
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, side: Side) -> Path {
        let mut steps = self.0.clone();
        steps.push(side);
        Path(steps)
    }

    pub fn join(&self, rest: &Path) -> Path {
        let mut steps = self.0.clone();
        steps.extend_from_slice(&rest.0);
        Path(steps)
    }
}

impl From<&[u8]> for Path {
    /// Panics on steps other than 0 and 1.
    fn from(steps: &[u8]) -> Self {
        Path(steps.iter().map(|&i| Side::from_index(i).expect("path step is 0 or 1")).collect())
    }
}

impl<const N: usize> From<[u8; N]> for Path {
    fn from(steps: [u8; N]) -> Self {
        Path::from(&steps[..])
    }
}

/// Dot-separated steps, e.g. `0.1`; the root path is the empty string.
impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl std::str::FromStr for Path {
    type Err = SyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() {
            return Ok(Path::root());
        }
        s.split('.')
            .map(|t| match t {
                "0" => Ok(Side::Left),
                "1" => Ok(Side::Right),
                _ => Err(SyntaxError::BadPath(s.to_string())),
            })
            .collect::<Result<_, _>>()
            .map(Path)
    }
}
