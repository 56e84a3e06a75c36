use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Mul};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// A natural number or the countable cardinal ω.
///
/// Arithmetic is cardinal arithmetic: `a + ω = ω`, `a · ω = ω` for `a ≥ 1` and
/// `0 · ω = 0`. Finite overflow is a defect and panics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExtNat {
    Fin(u64),
    Omega,
}

impl ExtNat {
    pub const ZERO: ExtNat = ExtNat::Fin(0);
    pub const ONE: ExtNat = ExtNat::Fin(1);

    pub fn is_zero(self) -> bool {
        self == ExtNat::ZERO
    }

    pub fn is_omega(self) -> bool {
        self == ExtNat::Omega
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            ExtNat::Fin(n) => Some(n),
            ExtNat::Omega => None,
        }
    }
}

impl Default for ExtNat {
    fn default() -> Self {
        ExtNat::ZERO
    }
}

impl From<u64> for ExtNat {
    fn from(n: u64) -> Self {
        ExtNat::Fin(n)
    }
}

impl Ord for ExtNat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtNat::Fin(a), ExtNat::Fin(b)) => a.cmp(b),
            (ExtNat::Fin(_), ExtNat::Omega) => Ordering::Less,
            (ExtNat::Omega, ExtNat::Fin(_)) => Ordering::Greater,
            (ExtNat::Omega, ExtNat::Omega) => Ordering::Equal,
        }
    }
}

impl PartialOrd for ExtNat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for ExtNat {
    type Output = ExtNat;

    fn add(self, rhs: ExtNat) -> ExtNat {
        match (self, rhs) {
            (ExtNat::Fin(a), ExtNat::Fin(b)) => {
                ExtNat::Fin(a.checked_add(b).expect("multiplicity overflow"))
            }
            _ => ExtNat::Omega,
        }
    }
}

impl Mul for ExtNat {
    type Output = ExtNat;

    fn mul(self, rhs: ExtNat) -> ExtNat {
        match (self, rhs) {
            (ExtNat::Fin(0), _) | (_, ExtNat::Fin(0)) => ExtNat::ZERO,
            (ExtNat::Fin(a), ExtNat::Fin(b)) => {
                ExtNat::Fin(a.checked_mul(b).expect("multiplicity overflow"))
            }
            _ => ExtNat::Omega,
        }
    }
}

impl Sum for ExtNat {
    fn sum<I: Iterator<Item = ExtNat>>(iter: I) -> ExtNat {
        iter.fold(ExtNat::ZERO, Add::add)
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNat::Fin(n) => write!(f, "{n}"),
            ExtNat::Omega => f.write_str("w"),
        }
    }
}

impl FromStr for ExtNat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "w" | "ω" | "omega" | "aleph0" => Ok(ExtNat::Omega),
            t => t
                .parse::<u64>()
                .map(ExtNat::Fin)
                .map_err(|_| format!("invalid multiplicity `{t}`")),
        }
    }
}
