//! Cirquent generation and the prover-versus-oracle sweep.
//!
//! Enumeration is by connective count. Leaves are `T`, `F` and both literals
//! of every letter; connectives are `∨`, `∧` and a choice connective per
//! cluster. Small trees are materialized once and shared; larger ones are
//! streamed.

use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::Rng;

use crate::calculus::{check_proof, CheckError};
use crate::oracle::{policy_is_sound, OracleCaps, Solver};
use crate::prover::{prove, Verdict};
use crate::syntax::{Cirquent, ClusterId, Kind, Letter};

/// Letters and clusters to build cirquents from.
#[derive(Clone, Debug)]
pub struct Alphabet {
    pub letters: Vec<Letter>,
    pub clusters: Vec<ClusterId>,
}

const LETTER_NAMES: [&str; 8] = ["p", "q", "r", "s", "t", "u", "v", "w"];

impl Alphabet {
    /// The first `letters` of p, q, r, ... and the first `clusters` of
    /// d1, c1, d2, c2, ...
    pub fn standard(letters: usize, clusters: usize) -> Alphabet {
        assert!(letters <= LETTER_NAMES.len(), "at most {} letters", LETTER_NAMES.len());
        Alphabet {
            letters: LETTER_NAMES[..letters].iter().map(|n| Letter::new(n).expect("valid name")).collect(),
            clusters: (0..clusters as u32)
                .map(|i| if i % 2 == 0 { ClusterId::disjunctive(i / 2 + 1) } else { ClusterId::conjunctive(i / 2 + 1) })
                .collect(),
        }
    }

    pub fn leaves(&self) -> Vec<Arc<Cirquent>> {
        let mut out = vec![Arc::new(Cirquent::Top), Arc::new(Cirquent::Bot)];
        for l in &self.letters {
            out.push(Arc::new(Cirquent::lit(l.clone(), true)));
            out.push(Arc::new(Cirquent::lit(l.clone(), false)));
        }
        out
    }

    fn connectives(&self) -> Vec<Connective> {
        let mut out = vec![Connective::Par(Kind::Or), Connective::Par(Kind::And)];
        out.extend(self.clusters.iter().map(|&c| Connective::Choice(c)));
        out
    }

    /// Number of cirquents with exactly `n` connectives.
    pub fn count_exact(&self, n: usize) -> u128 {
        let leaves = self.leaves().len() as u128;
        let conns = self.connectives().len() as u128;
        catalan(n) * conns.pow(n as u32) * leaves.pow(n as u32 + 1)
    }

    pub fn count_up_to(&self, max: usize) -> u128 {
        (0..=max).map(|n| self.count_exact(n)).sum()
    }
}

fn catalan(n: usize) -> u128 {
    (0..n as u128).fold(1, |c, i| c * 2 * (2 * i + 1) / (i + 2))
}

#[derive(Clone, Copy, Debug)]
enum Connective {
    Par(Kind),
    Choice(ClusterId),
}

impl Connective {
    fn build(self, left: Arc<Cirquent>, right: Arc<Cirquent>) -> Cirquent {
        match self {
            Connective::Par(kind) => Cirquent::Par { kind, left, right },
            Connective::Choice(cluster) => Cirquent::Choice { cluster, left, right },
        }
    }
}

/// Streams every cirquent over an alphabet, by increasing connective count.
pub struct Enumerator {
    connectives: Vec<Connective>,
    /// `table[n]`: all trees with exactly `n` connectives, for small `n`.
    table: Vec<Vec<Arc<Cirquent>>>,
}

/// Largest tree size kept in memory (about 0.4M trees for the default sweep).
const MATERIALIZE_LIMIT: usize = 3;

impl Enumerator {
    pub fn new(alphabet: &Alphabet, max_nodes: usize) -> Enumerator {
        let connectives = alphabet.connectives();
        let mut e = Enumerator { connectives, table: vec![alphabet.leaves()] };
        let keep = max_nodes.saturating_sub(1).min(MATERIALIZE_LIMIT);
        for n in 1..=keep {
            let mut trees = Vec::new();
            e.for_each_exact(n, &mut |c| trees.push(Arc::new(c)));
            e.table.push(trees);
        }
        e
    }

    /// Calls `f` on every tree with exactly `n` connectives.
    pub fn for_each_exact(&self, n: usize, f: &mut dyn FnMut(Cirquent)) {
        if n == 0 {
            for leaf in &self.table[0] {
                f((**leaf).clone());
            }
            return;
        }
        for k in 0..n {
            for &conn in &self.connectives {
                self.for_each_arc(k, &mut |l| {
                    self.for_each_arc(n - 1 - k, &mut |r| f(conn.build(l.clone(), r)));
                });
            }
        }
    }

    fn for_each_arc(&self, n: usize, f: &mut dyn FnMut(Arc<Cirquent>)) {
        if let Some(trees) = self.table.get(n) {
            for t in trees {
                f(t.clone());
            }
        } else {
            self.for_each_exact(n, &mut |c| f(Arc::new(c)));
        }
    }

    pub fn for_each_up_to(&self, max: usize, f: &mut dyn FnMut(Cirquent)) {
        for n in 0..=max {
            self.for_each_exact(n, f);
        }
    }
}

/// A random tree with exactly `nodes` connectives over `alphabet`.
pub fn random_cirquent(rng: &mut impl Rng, alphabet: &Alphabet, nodes: usize) -> Cirquent {
    let leaves = alphabet.leaves();
    let conns = alphabet.connectives();
    fn go(rng: &mut impl Rng, leaves: &[Arc<Cirquent>], conns: &[Connective], n: usize) -> Arc<Cirquent> {
        if n == 0 {
            return leaves[rng.gen_range(0..leaves.len())].clone();
        }
        let k = rng.gen_range(0..n);
        let conn = conns[rng.gen_range(0..conns.len())];
        let l = go(rng, leaves, conns, k);
        let r = go(rng, leaves, conns, n - 1 - k);
        Arc::new(conn.build(l, r))
    }
    Arc::unwrap_or_clone(go(rng, &leaves, &conns, nodes))
}

/// A random tree with at most `max_nodes` connectives (size drawn uniformly).
pub fn random_cirquent_up_to(rng: &mut impl Rng, alphabet: &Alphabet, max_nodes: usize) -> Cirquent {
    let n = rng.gen_range(0..=max_nodes);
    random_cirquent(rng, alphabet, n)
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SweepOptions {
    /// Also simulate the oracle's policy on every valid cirquent.
    pub check_policies: bool,
}

/// Outcome of comparing the prover with the oracle on one cirquent.
#[derive(Clone, Debug)]
pub enum Finding {
    Disagreement { cirquent: Cirquent, prover: bool, oracle: bool },
    BadProof { cirquent: Cirquent, error: CheckError },
    WrongConclusion { cirquent: Cirquent, concluded: Cirquent },
    UnsoundPolicy { cirquent: Cirquent, detail: String },
    OracleRefused { cirquent: Cirquent, detail: String },
}

#[derive(Clone, Debug, Default)]
pub struct SweepReport {
    pub checked: u64,
    pub agreements: u64,
    pub valid: u64,
    pub proofs_checked: u64,
    pub policies_checked: u64,
    pub disagreements: u64,
    pub proof_failures: u64,
    pub policy_failures: u64,
    pub oracle_refusals: u64,
    /// The first few findings, in discovery order.
    pub findings: Vec<Finding>,
    pub prove_time: Duration,
    pub oracle_time: Duration,
    pub check_time: Duration,
    pub policy_time: Duration,
}

const KEPT_FINDINGS: usize = 50;

impl SweepReport {
    pub fn all_agree(&self) -> bool {
        self.disagreements == 0 && self.proof_failures == 0 && self.oracle_refusals == 0
    }

    pub fn clean(&self) -> bool {
        self.all_agree() && self.policy_failures == 0
    }

    pub fn agreement_percent(&self) -> f64 {
        if self.checked == 0 {
            100.0
        } else {
            100.0 * self.agreements as f64 / self.checked as f64
        }
    }

    fn note(&mut self, f: Finding) {
        if self.findings.len() < KEPT_FINDINGS {
            self.findings.push(f);
        }
    }

    pub fn merge(&mut self, other: SweepReport) {
        self.checked += other.checked;
        self.agreements += other.agreements;
        self.valid += other.valid;
        self.proofs_checked += other.proofs_checked;
        self.policies_checked += other.policies_checked;
        self.disagreements += other.disagreements;
        self.proof_failures += other.proof_failures;
        self.policy_failures += other.policy_failures;
        self.oracle_refusals += other.oracle_refusals;
        self.prove_time += other.prove_time;
        self.oracle_time += other.oracle_time;
        self.check_time += other.check_time;
        self.policy_time += other.policy_time;
        for f in other.findings {
            self.note(f);
        }
    }

    /// Compares prover and oracle on `c`, checking any proof produced.
    pub fn examine(&mut self, c: &Cirquent, opts: SweepOptions) {
        self.checked += 1;

        let t = Instant::now();
        let verdict = prove(c);
        self.prove_time += t.elapsed();

        let t = Instant::now();
        let mut solver = match Solver::new(c, OracleCaps::default()) {
            Ok(s) => s,
            Err(e) => {
                self.oracle_refusals += 1;
                self.note(Finding::OracleRefused { cirquent: c.clone(), detail: e.to_string() });
                return;
            }
        };
        let oracle = solver.valid();
        self.oracle_time += t.elapsed();

        if verdict.is_valid() == oracle {
            self.agreements += 1;
        } else {
            self.disagreements += 1;
            self.note(Finding::Disagreement { cirquent: c.clone(), prover: verdict.is_valid(), oracle });
        }

        if let Verdict::Valid { proof } = &verdict {
            self.valid += 1;
            let t = Instant::now();
            let checked = check_proof(proof);
            self.check_time += t.elapsed();
            self.proofs_checked += 1;
            match checked {
                Ok(concluded) if concluded == *c => {}
                Ok(concluded) => {
                    self.proof_failures += 1;
                    self.note(Finding::WrongConclusion { cirquent: c.clone(), concluded });
                }
                Err(error) => {
                    self.proof_failures += 1;
                    self.note(Finding::BadProof { cirquent: c.clone(), error });
                }
            }
        }

        if opts.check_policies && oracle {
            let t = Instant::now();
            let policy = solver.policy();
            let sound = policy_is_sound(c, &policy);
            self.policy_time += t.elapsed();
            self.policies_checked += 1;
            match sound {
                Ok(true) => {}
                Ok(false) => {
                    self.policy_failures += 1;
                    self.note(Finding::UnsoundPolicy { cirquent: c.clone(), detail: "a run is lost".into() });
                }
                Err(e) => {
                    self.policy_failures += 1;
                    self.note(Finding::UnsoundPolicy { cirquent: c.clone(), detail: e.to_string() });
                }
            }
        }
    }
}

/// Every cirquent with at most `max_nodes` connectives over `alphabet`.
pub fn exhaustive_sweep(alphabet: &Alphabet, max_nodes: usize, opts: SweepOptions) -> SweepReport {
    let mut report = SweepReport::default();
    let e = Enumerator::new(alphabet, max_nodes);
    e.for_each_up_to(max_nodes, &mut |c| report.examine(&c, opts));
    report
}

/// `samples` random cirquents with at most `max_nodes` connectives.
pub fn random_sweep(
    rng: &mut impl Rng,
    alphabet: &Alphabet,
    max_nodes: usize,
    samples: usize,
    opts: SweepOptions,
) -> SweepReport {
    let mut report = SweepReport::default();
    for _ in 0..samples {
        let c = random_cirquent_up_to(rng, alphabet, max_nodes);
        report.examine(&c, opts);
    }
    report
}
