//! Decrease-key rank policies.
//!
//! A policy decides the rank `k` given to the node created by a decrease-key
//! on a node of rank `r`, and what happens to the children of the old node:
//! the lazy family leaves them in place and gives the old node a second
//! parent, the eager family moves the low-ranked ones, the naive family does
//! neither.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::common::HeapError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Lazy,
    Eager,
    Naive,
}

/// Unbounded non-decreasing functions for the small regime `k = r - f(r)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SmallFn {
    /// `f(r) = r`, i.e. `k = 0`.
    Identity,
    /// `f(r) = ceil(sqrt(r + 1))`.
    CeilSqrt,
    /// `f(r) = floor(log2(r + 2))`.
    Log2,
}

impl SmallFn {
    pub fn eval(self, r: u32) -> u32 {
        match self {
            SmallFn::Identity => r,
            SmallFn::CeilSqrt => {
                let n = r as u64 + 1;
                let mut s = (n as f64).sqrt() as u64;
                while s * s < n {
                    s += 1;
                }
                while s > 0 && (s - 1) * (s - 1) >= n {
                    s -= 1;
                }
                s as u32
            }
            SmallFn::Log2 => 31 - (r + 2).leading_zeros(),
        }
    }

    fn name(self) -> &'static str {
        match self {
            SmallFn::Identity => "r",
            SmallFn::CeilSqrt => "sqrt",
            SmallFn::Log2 => "log",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    /// `k = r - j`.
    Large(u32),
    /// `k = r - f(r)`.
    Small(SmallFn),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RankPolicy {
    pub family: Family,
    pub regime: Regime,
}

impl RankPolicy {
    /// The structure of the original two-parent heap: lazy, `k = r - 2`.
    pub const LAZY_R2: RankPolicy = RankPolicy { family: Family::Lazy, regime: Regime::Large(2) };
    /// The one-root one-parent structure: eager, `k = r - 2`.
    pub const EAGER_R2: RankPolicy = RankPolicy { family: Family::Eager, regime: Regime::Large(2) };

    pub const fn new(family: Family, regime: Regime) -> Self {
        RankPolicy { family, regime }
    }

    /// Rank of the node created by decrease-key on a node of rank `r`:
    /// `max(0, k(r))`.
    pub fn new_rank(&self, r: u32) -> u32 {
        policy_rank(self.regime, r)
    }

    /// Whether a decrease-key always drops the rank by at least two, the
    /// condition under which rank-r nodes keep `F_{r+3} - 1` descendants.
    pub fn keeps_fibonacci_bound(&self) -> bool {
        (2..=64).all(|r| self.new_rank(r) + 2 <= r)
    }
}

/// `max(0, k(r))` for the given regime.
pub fn policy_rank(regime: Regime, r: u32) -> u32 {
    match regime {
        Regime::Large(j) => r.saturating_sub(j),
        Regime::Small(f) => r.saturating_sub(f.eval(r)),
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Lazy => "lazy",
            Family::Eager => "eager",
            Family::Naive => "naive",
        })
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Regime::Large(j) => write!(f, "large{j}"),
            Regime::Small(s) => write!(f, "small-{}", s.name()),
        }
    }
}

impl fmt::Display for RankPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.family, self.regime)
    }
}

impl FromStr for Family {
    type Err = HeapError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lazy" => Ok(Family::Lazy),
            "eager" => Ok(Family::Eager),
            "naive" => Ok(Family::Naive),
            _ => Err(HeapError::InvalidVariant(format!("unknown family `{s}`"))),
        }
    }
}

impl FromStr for Regime {
    type Err = HeapError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(j) = s.strip_prefix("large") {
            return j
                .parse()
                .map(Regime::Large)
                .map_err(|_| HeapError::InvalidVariant(format!("bad large regime `{s}`")));
        }
        match s {
            "small-r" | "small" => Ok(Regime::Small(SmallFn::Identity)),
            "small-sqrt" => Ok(Regime::Small(SmallFn::CeilSqrt)),
            "small-log" => Ok(Regime::Small(SmallFn::Log2)),
            _ => Err(HeapError::InvalidVariant(format!("unknown regime `{s}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn large_regime_clamps_at_zero() {
        assert_eq!(policy_rank(Regime::Large(2), 7), 5);
        assert_eq!(policy_rank(Regime::Large(2), 2), 0);
        assert_eq!(policy_rank(Regime::Large(2), 1), 0);
        assert_eq!(policy_rank(Regime::Large(0), 9), 9);
    }

    #[test]
    fn small_functions() {
        // f(8) = ceil(sqrt 9) = 3
        assert_eq!(SmallFn::CeilSqrt.eval(8), 3);
        assert_eq!(policy_rank(Regime::Small(SmallFn::CeilSqrt), 8), 5);
        assert_eq!(SmallFn::CeilSqrt.eval(0), 1);
        assert_eq!(SmallFn::CeilSqrt.eval(3), 2);
        assert_eq!(SmallFn::CeilSqrt.eval(4), 3);
        assert_eq!(SmallFn::Log2.eval(0), 1);
        assert_eq!(SmallFn::Log2.eval(6), 3);
        assert_eq!(policy_rank(Regime::Small(SmallFn::Identity), 11), 0);
    }

    #[test]
    fn small_functions_are_non_decreasing_and_positive() {
        for f in [SmallFn::Identity, SmallFn::CeilSqrt, SmallFn::Log2] {
            for r in 1..2000 {
                assert!(f.eval(r) >= f.eval(r - 1));
                assert!(f.eval(r) >= 1);
            }
        }
    }

    #[test]
    fn names_round_trip() {
        for regime in [
            Regime::Large(0),
            Regime::Large(2),
            Regime::Small(SmallFn::Identity),
            Regime::Small(SmallFn::CeilSqrt),
            Regime::Small(SmallFn::Log2),
        ] {
            assert_eq!(regime.to_string().parse::<Regime>().unwrap(), regime);
        }
        assert!("large".parse::<Regime>().is_err());
        assert!("fancy".parse::<Family>().is_err());
    }

    #[test]
    fn fibonacci_bound_needs_a_drop_of_two() {
        assert!(RankPolicy::LAZY_R2.keeps_fibonacci_bound());
        assert!(RankPolicy::new(Family::Lazy, Regime::Large(3)).keeps_fibonacci_bound());
        assert!(!RankPolicy::new(Family::Lazy, Regime::Large(1)).keeps_fibonacci_bound());
        assert!(!RankPolicy::new(Family::Lazy, Regime::Large(0)).keeps_fibonacci_bound());
        assert!(RankPolicy::new(Family::Eager, Regime::Small(SmallFn::Identity)).keeps_fibonacci_bound());
        assert!(RankPolicy::new(Family::Lazy, Regime::Small(SmallFn::Log2)).keeps_fibonacci_bound());
    }
}
