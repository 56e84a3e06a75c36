//! Canonical text rendering of groups.
//!
//! ```text
//! 0                       trivial group
//! Z   Z^3                 free summands
//! Z/8 (Z/2)^3             torsion summands (prime powers after normalization)
//! (+)_{w} Z/2             countably infinite direct sum
//! Z^r[1..w]               free summand of symbolic rank r, 1 <= r <= w
//! Z (+) Z/2               direct sums
//! [0 ; (+)_{w} Z/2]       bounded value: lower ; upper
//! ```
//!
//! Summands are printed ℤ first, then symbolic ranks, then torsion ordered by prime
//! and exponent. The parser also accepts composite orders (`Z/48`) and explicit
//! finite counts (`(+)_{3} Z`), normalizing both.

use std::fmt;
use std::str::FromStr;

use super::{normalize, AbelianGroup, CyclicOrder, ExtNat, GroupValue, SymbolicRank};
use crate::error::AlgebraError;

const SUM: &str = " (+) ";

fn term(base: &str, wrapped: &str, mult: ExtNat) -> String {
    match mult {
        ExtNat::Fin(1) => base.to_string(),
        ExtNat::Fin(m) => format!("{wrapped}^{m}"),
        ExtNat::Omega => format!("(+)_{{w}} {base}"),
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut terms = Vec::new();
        let free = self.free_mult();
        if !free.is_zero() {
            terms.push(term("Z", "Z", free));
        }
        for s in self.symbolic_ranks() {
            terms.push(format!("Z^{}[{}..{}]", s.name(), s.lower(), s.upper()));
        }
        for (order, mult) in self.factors() {
            if let Some(o) = order.order() {
                let base = format!("Z/{o}");
                terms.push(term(&base, &format!("({base})"), mult));
            }
        }
        f.write_str(&terms.join(SUM))
    }
}

impl fmt::Display for GroupValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupValue::Exact(g) => write!(f, "{g}"),
            GroupValue::Bounded { lower, upper } => write!(f, "[{lower} ; {upper}]"),
        }
    }
}

fn parse_err(input: &str, reason: impl Into<String>) -> AlgebraError {
    AlgebraError::Parse {
        input: input.to_string(),
        reason: reason.into(),
    }
}

fn parse_count(s: &str, whole: &str) -> Result<ExtNat, AlgebraError> {
    s.parse::<ExtNat>().map_err(|e| parse_err(whole, e))
}

fn parse_order(s: &str, whole: &str) -> Result<i128, AlgebraError> {
    s.parse::<i128>()
        .map_err(|_| parse_err(whole, format!("invalid order `{s}`")))
}

fn parse_term(raw: &str, whole: &str) -> Result<AbelianGroup, AlgebraError> {
    let t = raw.trim();
    if let Some(rest) = t.strip_prefix("(+)_{") {
        let close = rest
            .find('}')
            .ok_or_else(|| parse_err(whole, "unterminated `(+)_{`"))?;
        let count = parse_count(&rest[..close], whole)?;
        let inner = parse_term(&rest[close + 1..], whole)?;
        return Ok(inner.scale(count));
    }
    if t == "0" {
        return Ok(AbelianGroup::zero());
    }
    if t == "Z" {
        return Ok(AbelianGroup::free(1u64));
    }
    if let Some(rest) = t.strip_prefix("(Z/") {
        let (order, count) = rest
            .split_once(")^")
            .ok_or_else(|| parse_err(whole, format!("expected `(Z/k)^m` in `{t}`")))?;
        let order = parse_order(order, whole)?;
        let count = parse_count(count, whole)?;
        return normalize(&[(order, count)]);
    }
    if let Some(order) = t.strip_prefix("Z/") {
        return normalize(&[(parse_order(order, whole)?, ExtNat::ONE)]);
    }
    if let Some(exp) = t.strip_prefix("Z^") {
        if let Some(open) = exp.find('[') {
            let name = &exp[..open];
            let bounds = exp[open + 1..]
                .strip_suffix(']')
                .ok_or_else(|| parse_err(whole, "unterminated rank bounds"))?;
            let (lo, hi) = bounds
                .split_once("..")
                .ok_or_else(|| parse_err(whole, "rank bounds must read `lo..hi`"))?;
            let rank = SymbolicRank::new(
                name,
                parse_count(lo, whole)?,
                parse_count(hi, whole)?,
            )?;
            return Ok(AbelianGroup::symbolic(rank));
        }
        return Ok(AbelianGroup::free(parse_count(exp, whole)?));
    }
    Err(parse_err(whole, format!("unrecognized summand `{t}`")))
}

impl FromStr for AbelianGroup {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let collapsed = s.split_whitespace().collect::<Vec<_>>().join(" ");
        if collapsed.is_empty() {
            return Err(parse_err(s, "empty expression"));
        }
        collapsed
            .split(SUM)
            .map(|t| parse_term(t, s))
            .try_fold(AbelianGroup::zero(), |acc, g| Ok(acc.direct_sum(&g?)))
    }
}

impl FromStr for GroupValue {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if let Some(inner) = t.strip_prefix('[') {
            let inner = inner
                .strip_suffix(']')
                .ok_or_else(|| parse_err(s, "unterminated `[`"))?;
            let (lo, hi) = inner
                .split_once(';')
                .ok_or_else(|| parse_err(s, "bounded value must read `[lower ; upper]`"))?;
            return GroupValue::bounded(lo.parse()?, hi.parse()?);
        }
        Ok(GroupValue::Exact(t.parse()?))
    }
}

impl CyclicOrder {
    /// Rendering of a single summand of this order.
    pub fn label(self) -> String {
        match self.order() {
            None => "Z".to_string(),
            Some(o) => format!("Z/{o}"),
        }
    }
}
