//! Brute-force decision of uniform validity.
//!
//! Play is abstracted to resolution states over the cirquent's clusters.
//! Because winning depends on a run only through the set of moves in it, the
//! order in which concurrent moves arrive never matters, and the machine's
//! options at a state reduce to: make a move in some unresolved disjunctive
//! cluster now, or wait. Waiting is safe iff the state is won under every
//! interpretation and every possible environment move leads to a state from
//! which the machine still wins:
//!
//! ```text
//! WinM(s) = (∃ d unresolved disjunctive, ∃ i: WinM(s[d↦i]))
//!        ∨ (wonUnderAll(s) ∧ ∀ e unresolved conjunctive, ∀ i: WinM(s[e↦i]))
//! ```
//!
//! The recursion strictly shrinks the set of unresolved clusters and is
//! memoized over the at most 3^k states.

mod table;

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::semantics::{self, Interpretation, Player, ResolutionMap, Run};
use crate::syntax::{Cirquent, ClusterId, Side};

pub(crate) use table::{State, Table};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleCaps {
    pub max_clusters: usize,
    pub max_letters: usize,
}

impl Default for OracleCaps {
    fn default() -> Self {
        OracleCaps { max_clusters: 12, max_letters: 10 }
    }
}

/// Hard ceilings on configurable caps: the memo table has 3^clusters entries.
const CLUSTER_CEILING: usize = 16;
const LETTER_CEILING: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{found} clusters exceed the oracle cap of {cap}")]
    TooManyClusters { found: usize, cap: usize },
    #[error("{found} letters exceed the oracle cap of {cap}")]
    TooManyLetters { found: usize, cap: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Action {
    Wait,
    /// Machine move in an unresolved disjunctive cluster.
    Resolve { cluster: ClusterId, choice: Side },
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::Wait => f.write_str("wait"),
            Action::Resolve { cluster, choice } => write!(f, "{cluster}.{choice}"),
        }
    }
}

/// A finite machine strategy: what to do in each resolution state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Policy {
    clusters: Vec<ClusterId>,
    actions: BTreeMap<ResolutionMap, Action>,
}

impl Policy {
    pub fn new(clusters: Vec<ClusterId>, actions: BTreeMap<ResolutionMap, Action>) -> Self {
        Policy { clusters, actions }
    }

    /// Waits in every state over `c`'s clusters.
    pub fn wait_everywhere(c: &Cirquent) -> Self {
        let clusters: Vec<ClusterId> = c.clusters().into_iter().collect();
        let actions = ResolutionMap::all_over(&clusters).into_iter().map(|r| (r, Action::Wait)).collect();
        Policy { clusters, actions }
    }

    pub fn action(&self, state: &ResolutionMap) -> Option<Action> {
        self.actions.get(state).copied()
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ResolutionMap, Action)> + '_ {
        self.actions.iter().map(|(r, a)| (r, *a))
    }

    /// One line per state, `state {d1=0,c2=?} -> wait|d1.0`, sorted.
    pub fn dump(&self) -> String {
        let mut lines: Vec<String> = self
            .actions
            .iter()
            .map(|(r, a)| format!("state {} -> {a}", r.render_over(&self.clusters)))
            .collect();
        lines.sort();
        lines.join("\n")
    }
}

/// The environment's answer in a state from which the machine cannot win.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EnvReply {
    /// Stay put; the state is lost under this interpretation.
    Falsify(Interpretation),
    /// Move in an unresolved conjunctive cluster.
    Move { cluster: ClusterId, choice: Side },
}

impl fmt::Display for EnvReply {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EnvReply::Falsify(i) => write!(f, "falsify {i}"),
            EnvReply::Move { cluster, choice } => write!(f, "{cluster}.{choice}"),
        }
    }
}

/// Environment counter-strategy witnessing invalidity. It is defined on
/// every state reachable from the empty resolution under the replies
/// themselves and arbitrary machine moves; every such state is a machine
/// loss.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Refutation {
    clusters: Vec<ClusterId>,
    replies: BTreeMap<ResolutionMap, EnvReply>,
}

impl Refutation {
    pub fn reply(&self, state: &ResolutionMap) -> Option<&EnvReply> {
        self.replies.get(state)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ResolutionMap, &EnvReply)> + '_ {
        self.replies.iter()
    }

    pub fn len(&self) -> usize {
        self.replies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.replies.is_empty()
    }

    pub fn dump(&self) -> String {
        let mut lines: Vec<String> = self
            .replies
            .iter()
            .map(|(r, a)| format!("state {} -> {a}", r.render_over(&self.clusters)))
            .collect();
        lines.sort();
        lines.join("\n")
    }
}

#[derive(Clone, Debug)]
pub struct Decision {
    pub valid: bool,
    pub policy: Option<Policy>,
    pub refutation: Option<Refutation>,
}

/// Decides uniform validity with the default caps, extracting a policy when
/// valid and a refutation when not.
pub fn decide_uniform(c: &Cirquent) -> Result<Decision, OracleError> {
    decide_uniform_with(c, OracleCaps::default())
}

pub fn decide_uniform_with(c: &Cirquent, caps: OracleCaps) -> Result<Decision, OracleError> {
    let mut solver = Solver::new(c, caps)?;
    let valid = solver.valid();
    Ok(if valid {
        Decision { valid, policy: Some(solver.policy()), refutation: None }
    } else {
        Decision { valid, policy: None, refutation: Some(solver.refutation()) }
    })
}

/// Memoized solver for one cirquent.
pub struct Solver {
    table: Table,
    pow3: Vec<usize>,
    /// 0 unknown, 1 machine loses, 2 machine wins
    memo: Vec<u8>,
    disjunctive: Vec<usize>,
    conjunctive: Vec<usize>,
    buf: Vec<u64>,
}

impl Solver {
    pub fn new(c: &Cirquent, caps: OracleCaps) -> Result<Self, OracleError> {
        let clusters = c.clusters().len();
        let cap = caps.max_clusters.min(CLUSTER_CEILING);
        if clusters > cap {
            return Err(OracleError::TooManyClusters { found: clusters, cap });
        }
        let letters = c.letters().len();
        let cap = caps.max_letters.min(LETTER_CEILING);
        if letters > cap {
            return Err(OracleError::TooManyLetters { found: letters, cap });
        }
        let table = Table::new(c);
        let k = table.clusters.len();
        let pow3: Vec<usize> = (0..=k).map(|i| 3usize.pow(i as u32)).collect();
        let (disjunctive, conjunctive) =
            (0..k).partition(|&slot| table.clusters[slot].is_disjunctive());
        Ok(Solver { memo: vec![0; pow3[k]], pow3, table, disjunctive, conjunctive, buf: Vec::new() })
    }

    pub fn clusters(&self) -> &[ClusterId] {
        &self.table.clusters
    }

    fn key(&self, s: State) -> usize {
        (0..self.table.clusters.len())
            .filter(|&slot| s.is_resolved(slot))
            .map(|slot| self.pow3[slot] * (1 + (s.value >> slot & 1) as usize))
            .sum()
    }

    fn unresolved<'a>(slots: &'a [usize], s: State) -> impl Iterator<Item = usize> + 'a {
        slots.iter().copied().filter(move |&slot| !s.is_resolved(slot))
    }

    pub(crate) fn win(&mut self, s: State) -> bool {
        let key = self.key(s);
        match self.memo[key] {
            1 => return false,
            2 => return true,
            _ => {}
        }
        let value = self.can_wait(s) || self.best_move(s).is_some();
        self.memo[key] = if value { 2 } else { 1 };
        value
    }

    fn can_wait(&mut self, s: State) -> bool {
        if !self.table.won_all(s, &mut self.buf) {
            return false;
        }
        let env: Vec<usize> = Self::unresolved(&self.conjunctive, s).collect();
        env.into_iter().all(|slot| Side::BOTH.iter().all(|&side| self.win(s.with(slot, side))))
    }

    /// Least winning machine move (by cluster, then choice 0 before 1).
    fn best_move(&mut self, s: State) -> Option<(usize, Side)> {
        let mine: Vec<usize> = Self::unresolved(&self.disjunctive, s).collect();
        for slot in mine {
            for side in Side::BOTH {
                if self.win(s.with(slot, side)) {
                    return Some((slot, side));
                }
            }
        }
        None
    }

    pub fn valid(&mut self) -> bool {
        self.win(State::default())
    }

    /// Whether the machine wins from `state` (restricted to this cirquent's
    /// clusters).
    pub fn wins_from(&mut self, state: &ResolutionMap) -> bool {
        let s = self.table.from_map(state);
        self.win(s)
    }

    fn action_at(&mut self, s: State) -> Action {
        if self.can_wait(s) {
            Action::Wait
        } else {
            let (slot, choice) = self.best_move(s).expect("winning state has a witness");
            Action::Resolve { cluster: self.table.clusters[slot], choice }
        }
    }

    /// Winning policy; only meaningful when [`Solver::valid`] holds. Defined
    /// on every winning state reachable from the start under the policy and
    /// arbitrary environment moves, including environment moves that arrive
    /// while the policy is about to move.
    pub fn policy(&mut self) -> Policy {
        let mut actions = BTreeMap::new();
        let mut seen = std::collections::HashSet::new();
        let mut queue = VecDeque::from([State::default()]);
        while let Some(s) = queue.pop_front() {
            if !seen.insert(s) || !self.win(s) {
                continue;
            }
            let action = self.action_at(s);
            if let Action::Resolve { cluster, choice } = action {
                let slot = self.table.slot(cluster).expect("own cluster");
                queue.push_back(s.with(slot, choice));
            }
            for slot in Self::unresolved(&self.conjunctive, s).collect::<Vec<_>>() {
                for side in Side::BOTH {
                    queue.push_back(s.with(slot, side));
                }
            }
            actions.insert(self.table.to_map(s), action);
        }
        Policy { clusters: self.table.clusters.clone(), actions }
    }

    /// Environment counter-strategy; only meaningful when the cirquent is
    /// invalid.
    pub fn refutation(&mut self) -> Refutation {
        let mut replies = BTreeMap::new();
        let mut seen = std::collections::HashSet::new();
        let mut queue = VecDeque::from([State::default()]);
        while let Some(s) = queue.pop_front() {
            if !seen.insert(s) || self.win(s) {
                continue;
            }
            let reply = match self.table.falsifier(s, &mut self.buf) {
                Some(i) => EnvReply::Falsify(i),
                None => {
                    let env: Vec<usize> = Self::unresolved(&self.conjunctive, s).collect();
                    let (slot, side) = env
                        .into_iter()
                        .flat_map(|slot| Side::BOTH.map(|side| (slot, side)))
                        .find(|&(slot, side)| !self.win(s.with(slot, side)))
                        .expect("a lost waiting state has a losing environment move");
                    queue.push_back(s.with(slot, side));
                    EnvReply::Move { cluster: self.table.clusters[slot], choice: side }
                }
            };
            for slot in Self::unresolved(&self.disjunctive, s).collect::<Vec<_>>() {
                for side in Side::BOTH {
                    queue.push_back(s.with(slot, side));
                }
            }
            replies.insert(self.table.to_map(s), reply);
        }
        Refutation { clusters: self.table.clusters.clone(), replies }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimulationError {
    #[error("policy has no action for state {0}")]
    PolicyUndefined(ResolutionMap),
    #[error("policy action {action} is illegal in state {state}")]
    IllegalAction { state: ResolutionMap, action: Action },
    #[error("environment move {index} ({cluster}.{choice}) is illegal")]
    IllegalEnvMove { index: usize, cluster: ClusterId, choice: Side },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    /// Final resolution, restricted to the cirquent's clusters.
    pub state: ResolutionMap,
    pub transcript: Run,
    /// Winner under each interpretation of the cirquent's letters; `true`
    /// means the machine won.
    pub winners: Vec<(Interpretation, bool)>,
}

impl Outcome {
    pub fn won_under_all(&self) -> bool {
        self.winners.iter().all(|(_, w)| *w)
    }
}

/// Plays `policy` against a fixed sequence of environment moves: the machine
/// acts until it waits, then the next environment move arrives, and so on;
/// after the last environment move the machine again acts until it waits.
pub fn simulate(
    c: &Cirquent,
    policy: &Policy,
    env_schedule: &[(ClusterId, Side)],
) -> Result<Outcome, SimulationError> {
    let clusters = c.clusters();
    let mut state = ResolutionMap::new();
    let mut transcript = Run::default();

    let machine_turn = |state: &mut ResolutionMap, transcript: &mut Run| -> Result<(), SimulationError> {
        loop {
            let action = policy.action(state).ok_or_else(|| SimulationError::PolicyUndefined(state.clone()))?;
            match action {
                Action::Wait => return Ok(()),
                Action::Resolve { cluster, choice } => {
                    if !cluster.is_disjunctive() || !clusters.contains(&cluster) || !state.insert(cluster, choice) {
                        return Err(SimulationError::IllegalAction { state: state.clone(), action });
                    }
                    transcript.push(Player::Machine, cluster, choice);
                }
            }
        }
    };

    machine_turn(&mut state, &mut transcript)?;
    let mut foreign = ResolutionMap::new();
    for (index, &(cluster, choice)) in env_schedule.iter().enumerate() {
        let fresh = if !cluster.is_conjunctive() {
            false
        } else if clusters.contains(&cluster) {
            state.insert(cluster, choice)
        } else {
            foreign.insert(cluster, choice)
        };
        if !fresh {
            return Err(SimulationError::IllegalEnvMove { index, cluster, choice });
        }
        transcript.push(Player::Environment, cluster, choice);
        machine_turn(&mut state, &mut transcript)?;
    }
    debug_assert!(semantics::check_legal(&transcript).is_ok());
    let winners = semantics::winners(c, &state);
    Ok(Outcome { state, transcript, winners })
}

/// Every environment schedule over the conjunctive clusters of `c`: each
/// ordered selection of distinct clusters, with every choice of sides.
pub fn all_env_schedules(c: &Cirquent) -> Vec<Vec<(ClusterId, Side)>> {
    let conj: Vec<ClusterId> = c.clusters().into_iter().filter(|c| c.is_conjunctive()).collect();
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn go(
        conj: &[ClusterId],
        used: &mut Vec<bool>,
        current: &mut Vec<(ClusterId, Side)>,
        out: &mut Vec<Vec<(ClusterId, Side)>>,
    ) {
        out.push(current.clone());
        for i in 0..conj.len() {
            if used[i] {
                continue;
            }
            used[i] = true;
            for side in Side::BOTH {
                current.push((conj[i], side));
                go(conj, used, current, out);
                current.pop();
            }
            used[i] = false;
        }
    }
    go(&conj, &mut vec![false; conj.len()], &mut current, &mut out);
    out
}

/// Checks an extracted policy against every environment schedule.
pub fn policy_is_sound(c: &Cirquent, policy: &Policy) -> Result<bool, SimulationError> {
    for schedule in all_env_schedules(c) {
        if !simulate(c, policy, &schedule)?.won_under_all() {
            return Ok(false);
        }
    }
    Ok(true)
}
