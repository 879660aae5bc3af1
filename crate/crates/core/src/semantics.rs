//! Runs, legality, interpretations and the winning condition.
//!
//! Legality does not depend on the cirquent: a run is legal when every
//! disjunctive move is the machine's, every conjunctive move is the
//! environment's, and no cluster is chosen twice. The winner of a legal run
//! depends on the run only through the map of chosen sides it induces.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::syntax::{Cirquent, ClusterId, Kind, Letter, Side};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Player {
    /// `⊤`, the machine.
    Machine,
    /// `⊥`, the environment.
    Environment,
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Machine => "T",
            Player::Environment => "B",
        })
    }
}

/// The move `c.0` or `c.1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Move {
    pub cluster: ClusterId,
    pub choice: Side,
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.cluster, self.choice)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LabeledMove {
    pub player: Player,
    pub mv: Move,
}

impl fmt::Display for LabeledMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.player, self.mv)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Run(pub Vec<LabeledMove>);

impl Run {
    pub fn moves(&self) -> &[LabeledMove] {
        &self.0
    }

    pub fn push(&mut self, player: Player, cluster: ClusterId, choice: Side) {
        self.0.push(LabeledMove { player, mv: Move { cluster, choice } });
    }
}

/// `T d1.0; B c2.1`
impl fmt::Display for Run {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, m) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("bad run: {0}")]
    Run(String),
    #[error("bad interpretation: {0}")]
    Interpretation(String),
}

impl FromStr for Run {
    type Err = FormatError;

    /// Semicolon- or whitespace-separated `T d<n>.<i>` / `B c<n>.<i>` pairs.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let tokens: Vec<&str> =
            s.split(|c: char| c == ';' || c.is_whitespace()).filter(|t| !t.is_empty()).collect();
        if tokens.len() % 2 != 0 {
            return Err(FormatError::Run(format!("dangling token `{}`", tokens[tokens.len() - 1])));
        }
        let mut run = Run::default();
        for pair in tokens.chunks(2) {
            let player = match pair[0] {
                "T" => Player::Machine,
                "B" => Player::Environment,
                other => return Err(FormatError::Run(format!("expected label T or B, got `{other}`"))),
            };
            let bad = || FormatError::Run(format!("expected <cluster>.<0|1>, got `{}`", pair[1]));
            let (cl, ch) = pair[1].split_once('.').ok_or_else(bad)?;
            let cluster: ClusterId = cl.parse().map_err(|_| bad())?;
            let choice = match ch {
                "0" => Side::Left,
                "1" => Side::Right,
                _ => return Err(bad()),
            };
            run.push(player, cluster, choice);
        }
        Ok(run)
    }
}

/// First legality condition a run breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("move {index} breaks legality condition {condition}")]
pub struct Violation {
    /// Zero-based position of the offending move.
    pub index: usize,
    /// 2: disjunctive move not by the machine; 3: conjunctive move not by
    /// the environment; 4: second move in the same cluster.
    pub condition: u8,
}

pub fn check_legal(run: &Run) -> Result<(), Violation> {
    resolution_of(run).map(|_| ())
}

/// The cluster-to-side map a legal run induces.
pub fn resolution_of(run: &Run) -> Result<ResolutionMap, Violation> {
    let mut res = ResolutionMap::new();
    for (index, m) in run.0.iter().enumerate() {
        let condition = match (m.mv.cluster.is_disjunctive(), m.player) {
            (true, Player::Environment) => Some(2),
            (false, Player::Machine) => Some(3),
            _ if res.get(m.mv.cluster).is_some() => Some(4),
            _ => None,
        };
        if let Some(condition) = condition {
            return Err(Violation { index, condition });
        }
        res.insert(m.mv.cluster, m.mv.choice);
    }
    Ok(res)
}

/// Partial map from clusters to the side chosen in them.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ResolutionMap(BTreeMap<ClusterId, Side>);

impl ResolutionMap {
    pub fn new() -> Self {
        ResolutionMap(BTreeMap::new())
    }

    pub fn get(&self, cluster: ClusterId) -> Option<Side> {
        self.0.get(&cluster).copied()
    }

    /// Records a choice; returns false (leaving the map unchanged) if the
    /// cluster is already resolved.
    pub fn insert(&mut self, cluster: ClusterId, side: Side) -> bool {
        if self.0.contains_key(&cluster) {
            return false;
        }
        self.0.insert(cluster, side);
        true
    }

    pub fn with(&self, cluster: ClusterId, side: Side) -> Self {
        let mut next = self.clone();
        next.0.insert(cluster, side);
        next
    }

    pub fn remove(&mut self, cluster: ClusterId) -> Option<Side> {
        self.0.remove(&cluster)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (ClusterId, Side)> + '_ {
        self.0.iter().map(|(c, s)| (*c, *s))
    }

    /// Each `(pol, n) ↦ i` becomes `(dual pol, n) ↦ i`.
    pub fn dual(&self) -> Self {
        ResolutionMap(self.0.iter().map(|(c, s)| (c.dual(), *s)).collect())
    }

    /// Every resolution map over `clusters`: each cluster unresolved, 0 or 1.
    pub fn all_over(clusters: &[ClusterId]) -> Vec<ResolutionMap> {
        let mut out = vec![ResolutionMap::new()];
        for &c in clusters {
            let mut next = Vec::with_capacity(out.len() * 3);
            for r in &out {
                next.push(r.clone());
                next.push(r.with(c, Side::Left));
                next.push(r.with(c, Side::Right));
            }
            out = next;
        }
        out
    }

    /// `{d1=0,c2=?}` listing every cluster in `clusters`.
    pub fn render_over(&self, clusters: &[ClusterId]) -> String {
        let parts: Vec<String> = clusters
            .iter()
            .map(|c| match self.get(*c) {
                Some(s) => format!("{c}={s}"),
                None => format!("{c}=?"),
            })
            .collect();
        format!("{{{}}}", parts.join(","))
    }
}

impl FromIterator<(ClusterId, Side)> for ResolutionMap {
    fn from_iter<T: IntoIterator<Item = (ClusterId, Side)>>(iter: T) -> Self {
        ResolutionMap(iter.into_iter().collect())
    }
}

impl fmt::Display for ResolutionMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|(c, s)| format!("{c}={s}")).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Truth values for letters: `true` is `⊤`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interpretation(BTreeMap<Letter, bool>);

impl Interpretation {
    pub fn new() -> Self {
        Interpretation(BTreeMap::new())
    }

    pub fn set(&mut self, letter: Letter, value: bool) {
        self.0.insert(letter, value);
    }

    pub fn get(&self, letter: &Letter) -> Option<bool> {
        self.0.get(letter).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Letter, bool)> + '_ {
        self.0.iter().map(|(l, v)| (l, *v))
    }

    /// All 2^n interpretations of `letters`; the i-th maps `letters[j]` to
    /// bit j of i.
    pub fn all_over(letters: &[Letter]) -> Vec<Interpretation> {
        assert!(letters.len() < 32, "too many letters to enumerate");
        (0u32..1 << letters.len())
            .map(|bits| {
                Interpretation(
                    letters.iter().enumerate().map(|(j, l)| (l.clone(), bits >> j & 1 == 1)).collect(),
                )
            })
            .collect()
    }
}

impl FromIterator<(Letter, bool)> for Interpretation {
    fn from_iter<T: IntoIterator<Item = (Letter, bool)>>(iter: T) -> Self {
        Interpretation(iter.into_iter().collect())
    }
}

/// `p=1,q=0`
impl fmt::Display for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(l, v)| format!("{l}={}", u8::from(*v))).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for Interpretation {
    type Err = FormatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut out = Interpretation::new();
        for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let bad = || FormatError::Interpretation(format!("expected <letter>=<0|1>, got `{item}`"));
            let (name, v) = item.split_once('=').ok_or_else(bad)?;
            let letter = Letter::new(name.trim()).map_err(|_| bad())?;
            let value = match v.trim() {
                "1" => true,
                "0" => false,
                _ => return Err(bad()),
            };
            out.set(letter, value);
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("interpretation does not assign letter `{0}`")]
    UncoveredLetter(Letter),
}

/// Whether the machine wins `c` on a run with resolution `res` under `interp`.
pub fn win_eval(c: &Cirquent, res: &ResolutionMap, interp: &Interpretation) -> Result<bool, SemanticsError> {
    if let Some(missing) = c.letters().into_iter().find(|l| interp.get(l).is_none()) {
        return Err(SemanticsError::UncoveredLetter(missing));
    }
    Ok(eval(c, res, interp))
}

fn eval(c: &Cirquent, res: &ResolutionMap, interp: &Interpretation) -> bool {
    match c {
        Cirquent::Top => true,
        Cirquent::Bot => false,
        Cirquent::Lit { letter, positive } => interp.get(letter).expect("coverage checked") == *positive,
        Cirquent::Par { kind: Kind::Or, left, right } => eval(left, res, interp) || eval(right, res, interp),
        Cirquent::Par { kind: Kind::And, left, right } => eval(left, res, interp) && eval(right, res, interp),
        Cirquent::Choice { cluster, left, right } => match res.get(*cluster) {
            Some(Side::Left) => eval(left, res, interp),
            Some(Side::Right) => eval(right, res, interp),
            // unresolved ⊔ is lost, unresolved ⊓ is won
            None => cluster.is_conjunctive(),
        },
    }
}

/// Whether `res` is won under every interpretation of the letters of `c`.
pub fn won_under_all(c: &Cirquent, res: &ResolutionMap) -> bool {
    let letters: Vec<Letter> = c.letters().into_iter().collect();
    Interpretation::all_over(&letters).iter().all(|i| eval(c, res, i))
}

/// The interpretations (over the letters of `c`) under which `res` is won.
pub fn winners(c: &Cirquent, res: &ResolutionMap) -> Vec<(Interpretation, bool)> {
    let letters: Vec<Letter> = c.letters().into_iter().collect();
    Interpretation::all_over(&letters)
        .into_iter()
        .map(|i| {
            let won = eval(c, res, &i);
            (i, won)
        })
        .collect()
}
