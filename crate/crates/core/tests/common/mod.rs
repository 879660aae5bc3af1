//! Shared generators and reference checks for the integration tests.
//!
//! The reference checks here are written independently of the library's own
//! evaluators so that agreement between the two means something.

#![allow(dead_code)]

use std::collections::BTreeSet;

use cl16::calculus::{RuleDescriptor, Variant};
use cl16::harness::{random_cirquent, Alphabet};
use cl16::syntax::{Cirquent, ClusterId, Kind, Letter, Path, Side};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn letter(name: &str) -> Letter {
    Letter::new(name).unwrap()
}

/// Classical truth value; `None` if `c` contains a choice connective.
pub fn classical_value(c: &Cirquent, truth: &dyn Fn(&Letter) -> bool) -> Option<bool> {
    Some(match c {
        Cirquent::Top => true,
        Cirquent::Bot => false,
        Cirquent::Lit { letter, positive } => truth(letter) == *positive,
        Cirquent::Par { kind: Kind::Or, left, right } => {
            classical_value(left, truth)? | classical_value(right, truth)?
        }
        Cirquent::Par { kind: Kind::And, left, right } => {
            classical_value(left, truth)? & classical_value(right, truth)?
        }
        Cirquent::Choice { .. } => return None,
    })
}

/// Truth-table tautology check for choice-free cirquents.
pub fn is_tautology(c: &Cirquent) -> Option<bool> {
    let letters: Vec<Letter> = c.letters().into_iter().collect();
    let mut all = true;
    for row in 0u32..1 << letters.len() {
        let truth = |l: &Letter| {
            let j = letters.iter().position(|x| x == l).unwrap();
            row >> j & 1 == 1
        };
        all &= classical_value(c, &truth)?;
    }
    Some(all)
}

/// Whether `c` is pure, judged by direct reading of the seven conditions.
pub fn reference_pure(c: &Cirquent) -> bool {
    fn surface<'a>(c: &'a Cirquent, ancestors: &mut Vec<&'a Cirquent>, out: &mut Vec<(&'a Cirquent, Vec<&'a Cirquent>)>) {
        out.push((c, ancestors.clone()));
        if let Cirquent::Par { left, right, .. } = c {
            ancestors.push(c);
            surface(left, ancestors, out);
            surface(right, ancestors, out);
            ancestors.pop();
        }
    }
    let mut nodes = Vec::new();
    surface(c, &mut Vec::new(), &mut nodes);
    let is_root = |anc: &Vec<&Cirquent>| anc.is_empty();
    let under_or = |anc: &Vec<&Cirquent>| anc.iter().any(|a| a.is_par(Kind::Or));
    for (node, anc) in &nodes {
        let bad = match node {
            Cirquent::Bot | Cirquent::Top => !is_root(anc),
            Cirquent::Par { kind: Kind::And, .. } => under_or(anc),
            Cirquent::Choice { cluster, .. } => cluster.is_conjunctive() && under_or(anc),
            Cirquent::Par { kind: Kind::Or, .. } => {
                // every ∨-subchain is inside the chain of its topmost ∨ ancestor,
                // so checking each ∨-node's own flattening suffices
                let mut lits = BTreeSet::new();
                let mut clash = false;
                for item in node.flatten(Kind::Or) {
                    if let Cirquent::Lit { letter, positive } = item {
                        clash |= lits.contains(&(letter.clone(), !positive));
                        lits.insert((letter.clone(), *positive));
                    }
                }
                clash
            }
            _ => false,
        };
        if bad {
            return false;
        }
    }
    match c {
        Cirquent::Par { kind: Kind::And, .. } => !c.flatten(Kind::And).iter().all(|i| i.is_choice(Kind::And)),
        Cirquent::Choice { cluster, left, right } if cluster.is_conjunctive() => {
            !left.contains_cluster(*cluster) && !right.contains_cluster(*cluster)
        }
        _ => true,
    }
}

/// Paths to every leaf of `c`.
pub fn leaf_paths(c: &Cirquent) -> Vec<Path> {
    fn go(c: &Cirquent, path: &mut Vec<Side>, out: &mut Vec<Path>) {
        match c.children() {
            Some((l, r)) => {
                path.push(Side::Left);
                go(l, path, out);
                path.pop();
                path.push(Side::Right);
                go(r, path, out);
                path.pop();
            }
            None => out.push(Path::new(path.clone())),
        }
    }
    let mut out = Vec::new();
    go(c, &mut Vec::new(), &mut out);
    out
}

/// A random context of `nodes` connectives with `redex` put in place of a
/// random leaf; returns the result and the redex's path.
pub fn plug(r: &mut impl Rng, alphabet: &Alphabet, nodes: usize, redex: Cirquent) -> (Cirquent, Path) {
    let ctx = random_cirquent(r, alphabet, nodes);
    let leaves = leaf_paths(&ctx);
    let at = leaves[r.gen_range(0..leaves.len())].clone();
    (ctx.replace_at(&at, redex).unwrap(), at)
}

/// Alphabet for single rule applications: three letters, clusters d1, c1, c2.
pub fn application_alphabet() -> Alphabet {
    let mut a = Alphabet::standard(3, 0);
    a.clusters = vec![ClusterId::disjunctive(1), ClusterId::conjunctive(1), ClusterId::conjunctive(2)];
    a
}

fn small(r: &mut impl Rng, a: &Alphabet) -> Cirquent {
    let n = r.gen_range(0..=1);
    random_cirquent(r, a, n)
}

fn pick_conjunctive(r: &mut impl Rng, a: &Alphabet) -> ClusterId {
    let conj: Vec<ClusterId> = a.clusters.iter().copied().filter(|c| c.is_conjunctive()).collect();
    conj[r.gen_range(0..conj.len())]
}

fn variant(r: &mut impl Rng) -> Variant {
    if r.gen_bool(0.5) {
        Variant::A
    } else {
        Variant::B
    }
}

/// A random conclusion to which `descriptor` applies, for rule `rule`.
pub fn random_application(r: &mut impl Rng, a: &Alphabet, rule: cl16::calculus::Rule) -> (Cirquent, RuleDescriptor) {
    use cl16::calculus::Rule;
    let ctx = r.gen_range(0..=2);
    let (x, y, z) = (small(r, a), small(r, a), small(r, a));
    let par = |k: Kind, l: Cirquent, rr: Cirquent| Cirquent::par(k, l, rr);
    let kind_of = |v: Variant| if v == Variant::A { Kind::Or } else { Kind::And };
    match rule {
        Rule::Commutativity | Rule::Associativity | Rule::Identity | Rule::Domination => {
            let v = variant(r);
            let k = kind_of(v);
            let redex = match rule {
                Rule::Commutativity => par(k, x, y),
                Rule::Associativity => par(k, par(k, x, y), z),
                Rule::Identity => par(k, x, if k == Kind::Or { Cirquent::Bot } else { Cirquent::Top }),
                _ => par(k, x, if k == Kind::Or { Cirquent::Top } else { Cirquent::Bot }),
            };
            let (c, path) = plug(r, a, ctx, redex);
            let d = match rule {
                Rule::Commutativity => RuleDescriptor::Commutativity { variant: v, path },
                Rule::Associativity => RuleDescriptor::Associativity { variant: v, path },
                Rule::Identity => RuleDescriptor::Identity { variant: v, path },
                _ => RuleDescriptor::Domination { variant: v, path },
            };
            (c, d)
        }
        Rule::Distribution => {
            let v = variant(r);
            let inner = match v {
                Variant::A => par(Kind::And, x, y),
                Variant::B => Cirquent::choice(pick_conjunctive(r, a), x, y),
            };
            let (c, path) = plug(r, a, ctx, par(Kind::Or, inner, z));
            (c, RuleDescriptor::Distribution { variant: v, path })
        }
        Rule::Trivialization => {
            let l = a.letters[r.gen_range(0..a.letters.len())].clone();
            let redex = par(Kind::Or, Cirquent::lit(l.clone(), false), Cirquent::lit(l.clone(), true));
            let (c, path) = plug(r, a, ctx, redex);
            (c, RuleDescriptor::Trivialization { path, letter: l })
        }
        Rule::Cleansing => {
            let v = variant(r);
            let cl = pick_conjunctive(r, a);
            let arm_nodes = r.gen_range(0..=1);
            let (arm, inner_path) = plug(r, a, arm_nodes, Cirquent::choice(cl, x, y));
            let node = match v {
                Variant::A => Cirquent::choice(cl, arm, z),
                Variant::B => Cirquent::choice(cl, z, arm),
            };
            let (c, path) = plug(r, a, ctx, node);
            (c, RuleDescriptor::Cleansing { variant: v, path, inner_path })
        }
        Rule::Quadrilemma => {
            let w = small(r, a);
            let (ca, cb) = (pick_conjunctive(r, a), pick_conjunctive(r, a));
            let redex = par(Kind::And, Cirquent::choice(ca, x, y), Cirquent::choice(cb, z, w));
            let (c, path) = plug(r, a, ctx, redex);
            let used = c.clusters();
            let fresh = (1..).map(ClusterId::conjunctive).find(|k| !used.contains(k)).unwrap();
            (c, RuleDescriptor::Quadrilemma { path, cluster: fresh })
        }
        Rule::Choosing => {
            let ds: Vec<ClusterId> = a.clusters.iter().copied().filter(|c| c.is_disjunctive()).collect();
            let d = ds[r.gen_range(0..ds.len())];
            let (c, _) = plug(r, a, ctx, Cirquent::choice(d, x, y));
            let choice = if r.gen_bool(0.5) { Side::Left } else { Side::Right };
            (c, RuleDescriptor::Choosing { cluster: d, choice })
        }
        Rule::Splitting => {
            let cl = pick_conjunctive(r, a);
            let mut without = a.clone();
            without.clusters.retain(|k| *k != cl);
            let n = r.gen_range(0..=2);
            let left = random_cirquent(r, &without, n);
            let n = r.gen_range(0..=2);
            let right = random_cirquent(r, &without, n);
            (Cirquent::choice(cl, left, right), RuleDescriptor::Splitting { cluster: cl })
        }
    }
}
