//! Bit-parallel evaluation of a cirquent over all interpretations at once.
//!
//! Clusters and letters are numbered by slot. A game state is a pair of
//! bitmasks (which slots are resolved, and to which side). Interpretations
//! are processed 64 at a time: bit `b` of chunk `k` stands for the
//! interpretation numbered `64k + b`, in which letter slot `j` is true iff
//! bit `j` of that number is set.

use crate::semantics::{Interpretation, ResolutionMap};
use crate::syntax::{Cirquent, ClusterId, Kind, Letter, Side};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub(crate) struct State {
    pub resolved: u32,
    pub value: u32,
}

impl State {
    pub fn is_resolved(self, slot: usize) -> bool {
        self.resolved >> slot & 1 == 1
    }

    pub fn with(self, slot: usize, side: Side) -> State {
        let bit = 1u32 << slot;
        State {
            resolved: self.resolved | bit,
            value: match side {
                Side::Left => self.value & !bit,
                Side::Right => self.value | bit,
            },
        }
    }
}

#[derive(Clone, Copy, Debug)]
enum Node {
    Const(bool),
    Lit { slot: usize, positive: bool },
    Par { kind: Kind, left: usize, right: usize },
    Choice { slot: usize, disjunctive: bool, left: usize, right: usize },
}

const PATTERNS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

#[derive(Clone, Debug)]
pub(crate) struct Table {
    pub clusters: Vec<ClusterId>,
    pub letters: Vec<Letter>,
    nodes: Vec<Node>,
    chunks: usize,
    last_mask: u64,
}

impl Table {
    pub fn new(c: &Cirquent) -> Table {
        let clusters: Vec<ClusterId> = c.clusters().into_iter().collect();
        let letters: Vec<Letter> = c.letters().into_iter().collect();
        assert!(clusters.len() <= 32 && letters.len() <= 30);
        let mut t = Table { clusters, letters, nodes: Vec::new(), chunks: 0, last_mask: 0 };
        t.compile(c);
        let interps = 1usize << t.letters.len();
        t.chunks = interps.div_ceil(64);
        t.last_mask = if interps >= 64 { u64::MAX } else { (1u64 << interps) - 1 };
        t
    }

    fn compile(&mut self, c: &Cirquent) -> usize {
        let node = match c {
            Cirquent::Top => Node::Const(true),
            Cirquent::Bot => Node::Const(false),
            Cirquent::Lit { letter, positive } => Node::Lit {
                slot: self.letters.binary_search(letter).expect("letter collected"),
                positive: *positive,
            },
            Cirquent::Par { kind, left, right } => {
                let left = self.compile(left);
                let right = self.compile(right);
                Node::Par { kind: *kind, left, right }
            }
            Cirquent::Choice { cluster, left, right } => {
                let left = self.compile(left);
                let right = self.compile(right);
                Node::Choice {
                    slot: self.clusters.binary_search(cluster).expect("cluster collected"),
                    disjunctive: cluster.is_disjunctive(),
                    left,
                    right,
                }
            }
        };
        self.nodes.push(node);
        self.nodes.len() - 1
    }

    pub fn slot(&self, cluster: ClusterId) -> Option<usize> {
        self.clusters.binary_search(&cluster).ok()
    }

    fn letter_bits(&self, slot: usize, chunk: usize) -> u64 {
        if slot < 6 {
            PATTERNS[slot]
        } else if chunk >> (slot - 6) & 1 == 1 {
            u64::MAX
        } else {
            0
        }
    }

    fn eval_chunk(&self, state: State, chunk: usize, buf: &mut Vec<u64>) -> u64 {
        buf.clear();
        for node in &self.nodes {
            let v = match *node {
                Node::Const(b) => {
                    if b {
                        u64::MAX
                    } else {
                        0
                    }
                }
                Node::Lit { slot, positive } => {
                    let bits = self.letter_bits(slot, chunk);
                    if positive {
                        bits
                    } else {
                        !bits
                    }
                }
                Node::Par { kind: Kind::Or, left, right } => buf[left] | buf[right],
                Node::Par { kind: Kind::And, left, right } => buf[left] & buf[right],
                Node::Choice { slot, disjunctive, left, right } => {
                    if !state.is_resolved(slot) {
                        if disjunctive {
                            0
                        } else {
                            u64::MAX
                        }
                    } else if state.value >> slot & 1 == 0 {
                        buf[left]
                    } else {
                        buf[right]
                    }
                }
            };
            buf.push(v);
        }
        *buf.last().expect("nonempty cirquent")
    }

    fn chunk_mask(&self, chunk: usize) -> u64 {
        if chunk + 1 == self.chunks {
            self.last_mask
        } else {
            u64::MAX
        }
    }

    /// Won under every interpretation.
    pub fn won_all(&self, state: State, buf: &mut Vec<u64>) -> bool {
        (0..self.chunks).all(|k| {
            let mask = self.chunk_mask(k);
            self.eval_chunk(state, k, buf) & mask == mask
        })
    }

    #[cfg(test)]
    pub fn won_count(&self, state: State, buf: &mut Vec<u64>) -> u32 {
        (0..self.chunks).map(|k| (self.eval_chunk(state, k, buf) & self.chunk_mask(k)).count_ones()).sum()
    }

    /// Some interpretation under which `state` is lost.
    pub fn falsifier(&self, state: State, buf: &mut Vec<u64>) -> Option<Interpretation> {
        for k in 0..self.chunks {
            let lost = !self.eval_chunk(state, k, buf) & self.chunk_mask(k);
            if lost != 0 {
                let number = k * 64 + lost.trailing_zeros() as usize;
                return Some(self.interpretation(number));
            }
        }
        None
    }

    pub fn interpretation(&self, number: usize) -> Interpretation {
        self.letters.iter().enumerate().map(|(j, l)| (l.clone(), number >> j & 1 == 1)).collect()
    }

    pub fn to_map(&self, state: State) -> ResolutionMap {
        self.clusters
            .iter()
            .enumerate()
            .filter(|(slot, _)| state.is_resolved(*slot))
            .map(|(slot, c)| (*c, if state.value >> slot & 1 == 0 { Side::Left } else { Side::Right }))
            .collect()
    }

    /// Restriction of `res` to this cirquent's clusters.
    pub fn from_map(&self, res: &ResolutionMap) -> State {
        let mut s = State::default();
        for (c, side) in res.iter() {
            if let Some(slot) = self.slot(c) {
                s = s.with(slot, side);
            }
        }
        s
    }
}
