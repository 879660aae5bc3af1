//! Interactive play: the user moves for the environment, the machine follows
//! the oracle's policy (or a greedy fallback when no winning policy exists).

use cl16::oracle::{decide_uniform, Action, Policy};
use cl16::semantics::{check_legal, resolution_of, winners, Player, ResolutionMap, Run};
use cl16::{Cirquent, ClusterId, Side};

pub const NO_STRATEGY_BANNER: &str = "no winning strategy exists; the machine plays greedily";

enum Brain {
    Oracle(Policy),
    Greedy,
}

pub struct PlaySession {
    pub cirquent: Cirquent,
    pub state: ResolutionMap,
    pub transcript: Run,
    brain: Brain,
}

#[derive(Debug, PartialEq, Eq)]
pub enum Reply {
    /// Machine moves made in response, in order.
    Moves(Vec<(ClusterId, Side)>),
    State(String),
    Ended(String),
}

impl PlaySession {
    pub fn new(cirquent: Cirquent) -> anyhow::Result<PlaySession> {
        let decision = decide_uniform(&cirquent)?;
        let brain = match decision.policy {
            Some(policy) if decision.valid => Brain::Oracle(policy),
            _ => Brain::Greedy,
        };
        Ok(PlaySession { cirquent, state: ResolutionMap::new(), transcript: Run::default(), brain })
    }

    pub fn has_winning_strategy(&self) -> bool {
        matches!(self.brain, Brain::Oracle(_))
    }

    fn won_count(&self, state: &ResolutionMap) -> usize {
        winners(&self.cirquent, state).iter().filter(|(_, w)| *w).count()
    }

    fn greedy_action(&self) -> Action {
        let mut best = (self.won_count(&self.state), Action::Wait);
        for cluster in self.cirquent.clusters() {
            if !cluster.is_disjunctive() || self.state.get(cluster).is_some() {
                continue;
            }
            for choice in Side::BOTH {
                let n = self.won_count(&self.state.with(cluster, choice));
                if n > best.0 {
                    best = (n, Action::Resolve { cluster, choice });
                }
            }
        }
        best.1
    }

    /// Machine acts until it chooses to wait.
    pub fn machine_turn(&mut self) -> Vec<(ClusterId, Side)> {
        let mut moves = Vec::new();
        loop {
            let action = match &self.brain {
                Brain::Oracle(policy) => policy.action(&self.state).unwrap_or(Action::Wait),
                Brain::Greedy => self.greedy_action(),
            };
            let Action::Resolve { cluster, choice } = action else { break };
            if !self.state.insert(cluster, choice) {
                break;
            }
            self.transcript.push(Player::Machine, cluster, choice);
            moves.push((cluster, choice));
        }
        debug_assert!(check_legal(&self.transcript).is_ok());
        debug_assert_eq!(resolution_of(&self.transcript).ok().as_ref(), Some(&self.state));
        moves
    }

    /// Handles one line of user input. Errors leave the session unchanged.
    pub fn step(&mut self, input: &str) -> Result<Reply, String> {
        match input.trim() {
            "pass" => Ok(Reply::Moves(self.machine_turn())),
            "state" => Ok(Reply::State(self.describe())),
            "end" => Ok(Reply::Ended(self.adjudicate())),
            other => {
                let (cluster, choice) = parse_move(other)?;
                if !cluster.is_conjunctive() {
                    return Err(format!("{cluster} is a disjunctive cluster; only the machine moves there"));
                }
                if !self.cirquent.contains_cluster(cluster) {
                    return Err(format!("{cluster} does not occur in the cirquent"));
                }
                if self.state.get(cluster).is_some() {
                    return Err(format!("{cluster} is already resolved"));
                }
                self.state.insert(cluster, choice);
                self.transcript.push(Player::Environment, cluster, choice);
                Ok(Reply::Moves(self.machine_turn()))
            }
        }
    }

    pub fn describe(&self) -> String {
        let clusters: Vec<ClusterId> = self.cirquent.clusters().into_iter().collect();
        format!("state {}; run: {}", self.state.render_over(&clusters), self.transcript)
    }

    pub fn adjudicate(&self) -> String {
        let results = winners(&self.cirquent, &self.state);
        let mut lines: Vec<String> = results
            .iter()
            .map(|(i, won)| format!("  {}: {}", if i.iter().next().is_none() { "-".to_string() } else { i.to_string() }, winner(*won)))
            .collect();
        let all = results.iter().all(|(_, w)| *w);
        lines.push(if all {
            "T wins under all interpretations".to_string()
        } else {
            "B wins under some interpretation".to_string()
        });
        lines.join("\n")
    }
}

fn winner(machine: bool) -> &'static str {
    if machine {
        "T"
    } else {
        "B"
    }
}

/// `c3=1` or `d2=0`.
fn parse_move(text: &str) -> Result<(ClusterId, Side), String> {
    let usage = || format!("expected c<n>=0|1, pass, state or end; got `{text}`");
    let (cluster, choice) = text.split_once('=').ok_or_else(usage)?;
    let cluster: ClusterId = cluster.trim().parse().map_err(|_| usage())?;
    let choice = match choice.trim() {
        "0" => Side::Left,
        "1" => Side::Right,
        _ => return Err(usage()),
    };
    Ok((cluster, choice))
}
