use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::ExtNat;
use crate::error::AlgebraError;

/// Largest cyclic order accepted by [`normalize`]; trial division stays cheap below it.
pub const MAX_FACTOR_ORDER: u128 = 1 << 48;

/// Order of a cyclic summand: ℤ itself or ℤ/p^k.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CyclicOrder {
    Free,
    PrimePower { prime: u64, exp: u32 },
}

impl CyclicOrder {
    pub fn prime_power(prime: u64, exp: u32) -> CyclicOrder {
        debug_assert!(exp >= 1 && is_prime(prime));
        CyclicOrder::PrimePower { prime, exp }
    }

    /// Group order, `None` for ℤ.
    pub fn order(self) -> Option<u128> {
        match self {
            CyclicOrder::Free => None,
            CyclicOrder::PrimePower { prime, exp } => Some((prime as u128).pow(exp)),
        }
    }
}

/// A free summand of unknown rank in `[lower, upper]`, `lower >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SymbolicRank {
    name: String,
    lower: ExtNat,
    upper: ExtNat,
}

impl SymbolicRank {
    pub fn new(name: &str, lower: ExtNat, upper: ExtNat) -> Result<Self, AlgebraError> {
        let valid_name = !name.is_empty()
            && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
            && name.chars().next().is_some_and(|c| c.is_ascii_alphabetic());
        if !valid_name || lower < ExtNat::ONE || lower > upper {
            return Err(AlgebraError::InvalidSymbolicRank(format!(
                "{name}[{lower}..{upper}]"
            )));
        }
        Ok(SymbolicRank {
            name: name.to_string(),
            lower,
            upper,
        })
    }

    /// A positive rank with no upper bound, as in `ℤ^r`.
    pub fn positive(name: &str) -> Self {
        Self::new(name, ExtNat::ONE, ExtNat::Omega).expect("valid symbolic name")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn lower(&self) -> ExtNat {
        self.lower
    }

    pub fn upper(&self) -> ExtNat {
        self.upper
    }
}

/// A countably generated abelian group in primary-decomposition canonical form.
///
/// Every torsion summand is ℤ/p^k, multiplicities are [`ExtNat`] and never zero, and
/// symbolic free summands are absorbed as soon as the ℤ-multiplicity is ω. Two values
/// are isomorphic exactly when they compare equal.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianGroup {
    factors: BTreeMap<CyclicOrder, ExtNat>,
    symbolic: Vec<SymbolicRank>,
}

impl AbelianGroup {
    pub fn zero() -> Self {
        Self::default()
    }

    /// ℤ^m.
    pub fn free(mult: impl Into<ExtNat>) -> Self {
        Self::from_factors([(CyclicOrder::Free, mult.into())])
    }

    /// ℤ/order, CRT-split; `order = 0` means ℤ. Panics on invalid orders.
    pub fn cyclic(order: u64) -> Self {
        normalize(&[(order as i128, ExtNat::ONE)]).expect("valid cyclic order")
    }

    /// `mult` copies of ℤ/order (or ℤ when `order = 0`).
    pub fn cyclic_mult(order: u64, mult: impl Into<ExtNat>) -> Self {
        normalize(&[(order as i128, mult.into())]).expect("valid cyclic order")
    }

    pub fn symbolic(rank: SymbolicRank) -> Self {
        let mut g = Self::zero();
        g.symbolic.push(rank);
        g
    }

    pub fn from_factors(iter: impl IntoIterator<Item = (CyclicOrder, ExtNat)>) -> Self {
        let mut g = Self::zero();
        for (order, mult) in iter {
            g.add_factor(order, mult);
        }
        g.canonicalize();
        g
    }

    fn add_factor(&mut self, order: CyclicOrder, mult: ExtNat) {
        if mult.is_zero() {
            return;
        }
        let e = self.factors.entry(order).or_insert(ExtNat::ZERO);
        *e = *e + mult;
    }

    fn canonicalize(&mut self) {
        self.factors.retain(|_, m| !m.is_zero());
        if self.free_mult().is_omega() {
            self.symbolic.clear();
        }
        self.symbolic.sort();
    }

    pub fn factors(&self) -> impl Iterator<Item = (CyclicOrder, ExtNat)> + '_ {
        self.factors.iter().map(|(o, m)| (*o, *m))
    }

    pub fn multiplicity(&self, order: CyclicOrder) -> ExtNat {
        self.factors.get(&order).copied().unwrap_or_default()
    }

    pub fn symbolic_ranks(&self) -> &[SymbolicRank] {
        &self.symbolic
    }

    pub fn has_symbolic(&self) -> bool {
        !self.symbolic.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.factors.is_empty() && self.symbolic.is_empty()
    }

    /// Multiplicity of the exact ℤ summands (symbolic ranks not included).
    pub fn free_mult(&self) -> ExtNat {
        self.multiplicity(CyclicOrder::Free)
    }

    /// Smallest and largest free rank compatible with the symbolic summands.
    pub fn free_rank_bounds(&self) -> (ExtNat, ExtNat) {
        let base = self.free_mult();
        let lo = self.symbolic.iter().map(|s| s.lower).sum::<ExtNat>() + base;
        let hi = self.symbolic.iter().map(|s| s.upper).sum::<ExtNat>() + base;
        (lo, hi)
    }

    pub fn is_torsion(&self) -> bool {
        self.free_mult().is_zero() && self.symbolic.is_empty()
    }

    /// Exact finite order, `None` if the group is infinite.
    pub fn order(&self) -> Option<u128> {
        if !self.is_torsion() {
            return None;
        }
        let mut total: u128 = 1;
        for (order, mult) in self.factors() {
            let m = mult.finite()?;
            let o = order.order()?;
            for _ in 0..m {
                total = total.checked_mul(o)?;
            }
        }
        Some(total)
    }

    /// The group with its symbolic free summands dropped.
    pub fn without_symbolic(&self) -> AbelianGroup {
        Self::from_factors(self.factors())
    }

    pub fn torsion_part(&self) -> AbelianGroup {
        Self::from_factors(self.factors().filter(|(o, _)| *o != CyclicOrder::Free))
    }

    /// Direct sum; ω absorbs finite and symbolic free ranks.
    pub fn direct_sum(&self, other: &AbelianGroup) -> AbelianGroup {
        let mut g = self.clone();
        for (o, m) in other.factors() {
            g.add_factor(o, m);
        }
        g.symbolic.extend(other.symbolic.iter().cloned());
        g.canonicalize();
        g
    }

    /// κ-fold direct sum. A symbolic rank summed ω times is ω copies of ℤ.
    pub fn scale(&self, kappa: ExtNat) -> AbelianGroup {
        let mut g = Self::from_factors(self.factors().map(|(o, m)| (o, m * kappa)));
        match kappa {
            ExtNat::Fin(0) => {}
            ExtNat::Omega => {
                if self.has_symbolic() {
                    g.add_factor(CyclicOrder::Free, ExtNat::Omega);
                }
            }
            ExtNat::Fin(k) => {
                for s in &self.symbolic {
                    for _ in 0..k {
                        g.symbolic.push(s.clone());
                    }
                }
            }
        }
        g.canonicalize();
        g
    }

    /// The subgroup of elements killed by `n`.
    pub fn n_torsion(&self, n: u64) -> AbelianGroup {
        assert!(n >= 1, "n-torsion needs n >= 1");
        let parts = self.factors().filter_map(|(order, mult)| match order {
            CyclicOrder::Free => None,
            CyclicOrder::PrimePower { prime, exp } => {
                let v = valuation(n, prime).min(exp);
                (v > 0).then(|| (CyclicOrder::prime_power(prime, v), mult))
            }
        });
        Self::from_factors(parts.collect::<Vec<_>>())
    }

    /// `self ⊗ other`. Fails when a symbolic rank meets a finitely repeated torsion
    /// summand or another symbolic rank without an absorbing ω.
    pub fn tensor(&self, other: &AbelianGroup) -> Result<AbelianGroup, AlgebraError> {
        let mut g = AbelianGroup::zero();
        for (a, ma) in self.factors() {
            for (b, mb) in other.factors() {
                if let Some(c) = tensor_cyclic(a, b) {
                    g.add_factor(c, ma * mb);
                }
            }
        }
        let mut pending = Vec::new();
        let mut unrepresentable = false;
        for (sym, grp) in [(self, other), (other, self)] {
            for s in &sym.symbolic {
                for (o, m) in grp.factors() {
                    match (o, m) {
                        (_, ExtNat::Omega) => g.add_factor(o, ExtNat::Omega),
                        (CyclicOrder::Free, ExtNat::Fin(k)) => {
                            pending.extend(std::iter::repeat_n(s.clone(), k as usize))
                        }
                        _ => unrepresentable = true,
                    }
                }
            }
        }
        g.canonicalize();
        if unrepresentable {
            return Err(AlgebraError::SymbolicTensorTorsion);
        }
        if !g.free_mult().is_omega() {
            // ℤ^r ⊗ ℤ^s has no canonical form unless an ω-fold ℤ absorbs it
            if self.has_symbolic() && other.has_symbolic() {
                return Err(AlgebraError::SymbolicTensorTorsion);
            }
            g.symbolic.extend(pending);
        }
        g.canonicalize();
        Ok(g)
    }

    /// `Tor(self, other)`; free and symbolic summands contribute nothing.
    pub fn tor(&self, other: &AbelianGroup) -> AbelianGroup {
        let mut g = AbelianGroup::zero();
        for (a, ma) in self.factors() {
            for (b, mb) in other.factors() {
                if let (
                    CyclicOrder::PrimePower { prime: p, exp: i },
                    CyclicOrder::PrimePower { prime: q, exp: j },
                ) = (a, b)
                {
                    if p == q {
                        g.add_factor(CyclicOrder::prime_power(p, i.min(j)), ma * mb);
                    }
                }
            }
        }
        g.canonicalize();
        g
    }

    /// Number of cyclic summands of order `p^j` with `j >= m`.
    pub fn count_at_least(&self, prime: u64, m: u32) -> ExtNat {
        self.factors()
            .filter(|(o, _)| matches!(o, CyclicOrder::PrimePower { prime: p, exp } if *p == prime && *exp >= m))
            .map(|(_, mult)| mult)
            .sum()
    }

    /// Whether a group of this isomorphism type can be a subgroup of `upper`.
    ///
    /// Necessary and sufficient for direct sums of cyclic groups; symbolic ranks are
    /// compared through their rank bounds.
    pub fn embeds_into(&self, upper: &AbelianGroup) -> bool {
        let primes: std::collections::BTreeSet<(u64, u32)> = self
            .factors()
            .filter_map(|(o, _)| match o {
                CyclicOrder::PrimePower { prime, exp } => Some((prime, exp)),
                CyclicOrder::Free => None,
            })
            .collect();
        let torsion_ok = primes
            .iter()
            .all(|&(p, m)| self.count_at_least(p, m) <= upper.count_at_least(p, m));
        let (lo_rank, _) = self.free_rank_bounds();
        let (_, hi_rank) = upper.free_rank_bounds();
        torsion_ok && lo_rank <= hi_rank
    }
}

fn tensor_cyclic(a: CyclicOrder, b: CyclicOrder) -> Option<CyclicOrder> {
    match (a, b) {
        (CyclicOrder::Free, x) | (x, CyclicOrder::Free) => Some(x),
        (
            CyclicOrder::PrimePower { prime: p, exp: i },
            CyclicOrder::PrimePower { prime: q, exp: j },
        ) => (p == q).then(|| CyclicOrder::prime_power(p, i.min(j))),
    }
}

fn valuation(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization by trial division.
pub fn factorize(n: u128) -> Result<Vec<(u64, u32)>, AlgebraError> {
    if n > MAX_FACTOR_ORDER {
        return Err(AlgebraError::OrderTooLarge(n));
    }
    let mut n = n as u64;
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut k = 0;
            while n.is_multiple_of(d) {
                n /= d;
                k += 1;
            }
            out.push((d, k));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    Ok(out)
}

/// Builds the canonical form of `⊕ (ℤ/order)^mult`, where order 0 stands for ℤ.
pub fn normalize(raw: &[(i128, ExtNat)]) -> Result<AbelianGroup, AlgebraError> {
    let mut parts = Vec::new();
    for &(order, mult) in raw {
        match order {
            o if o < 0 => return Err(AlgebraError::NegativeOrder(o)),
            0 => parts.push((CyclicOrder::Free, mult)),
            1 => return Err(AlgebraError::OrderOne),
            o => {
                for (p, k) in factorize(o as u128)? {
                    parts.push((CyclicOrder::prime_power(p, k), mult));
                }
            }
        }
    }
    Ok(AbelianGroup::from_factors(parts))
}
