//! The termination measure on cirquents:
//! atoms have rank 1, choice nodes add their children's ranks, `∧` nodes
//! raise 5 to that sum and `∨` nodes build a tower of 5s of that height.
//!
//! Values are exact; evaluation stops with [`RankError`] once a result would
//! exceed the configured number of decimal digits.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use thiserror::Error;

use super::{Cirquent, Kind};

pub const DEFAULT_RANK_DIGIT_CAP: u64 = 100_000;

const LOG10_5: f64 = 0.698_970_004_336_018_8;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rank(BigUint);

impl Rank {
    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn into_inner(self) -> BigUint {
        self.0
    }
}

impl From<u64> for Rank {
    fn from(v: u64) -> Self {
        Rank(BigUint::from(v))
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.0.to_string();
        if s.len() > 40 {
            write!(f, "Rank({}...{} digits)", &s[..10], s.len())
        } else {
            write!(f, "Rank({s})")
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("rank exceeds the cap of {cap} decimal digits")]
pub struct RankError {
    pub cap: u64,
}

/// Rank with the default digit cap.
pub fn rank(c: &Cirquent) -> Result<Rank, RankError> {
    rank_with_cap(c, DEFAULT_RANK_DIGIT_CAP)
}

pub fn rank_with_cap(c: &Cirquent, max_digits: u64) -> Result<Rank, RankError> {
    eval(c, max_digits).map(Rank)
}

fn eval(c: &Cirquent, cap: u64) -> Result<BigUint, RankError> {
    match c {
        Cirquent::Top | Cirquent::Bot | Cirquent::Lit { .. } => Ok(BigUint::one()),
        Cirquent::Choice { left, right, .. } => {
            check(eval(left, cap)? + eval(right, cap)?, cap)
        }
        Cirquent::Par { kind: Kind::And, left, right } => {
            pow5(&(eval(left, cap)? + eval(right, cap)?), cap)
        }
        Cirquent::Par { kind: Kind::Or, left, right } => {
            tower5(&(eval(left, cap)? + eval(right, cap)?), cap)
        }
    }
}

fn check(v: BigUint, cap: u64) -> Result<BigUint, RankError> {
    // bits * log10(2) over-approximates the digit count by at most one
    if (v.bits() as f64) * std::f64::consts::LOG10_2 > cap as f64 + 1.0
        && v.to_string().len() as u64 > cap
    {
        return Err(RankError { cap });
    }
    Ok(v)
}

/// 5^e, refusing results above the digit cap before computing them.
fn pow5(e: &BigUint, cap: u64) -> Result<BigUint, RankError> {
    let e = e.to_u64().ok_or(RankError { cap })?;
    let digits = (e as f64) * LOG10_5 + 1.0;
    if digits.floor() > cap as f64 {
        return Err(RankError { cap });
    }
    let e = u32::try_from(e).map_err(|_| RankError { cap })?;
    Ok(BigUint::from(5u32).pow(e))
}

/// Tetration: a tower of `height` fives.
fn tower5(height: &BigUint, cap: u64) -> Result<BigUint, RankError> {
    let mut acc = BigUint::from(5u32);
    let mut level = BigUint::one();
    while &level < height {
        acc = pow5(&acc, cap)?;
        level += 1u32;
    }
    Ok(acc)
}
