use serde::{Deserialize, Serialize};

use super::{AbelianGroup, ExtNat};
use crate::error::AlgebraError;

/// A homology value: an exact group, or a group known only up to a sandwich
/// `lower ⊆ G ⊆ upper` (up to isomorphism).
///
/// A `Bounded` whose bounds are isomorphic never exists: every constructor and
/// operation resolves it to `Exact`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupValue {
    Exact(AbelianGroup),
    Bounded {
        lower: AbelianGroup,
        upper: AbelianGroup,
    },
}

impl GroupValue {
    pub fn zero() -> Self {
        GroupValue::Exact(AbelianGroup::zero())
    }

    pub fn bounded(lower: AbelianGroup, upper: AbelianGroup) -> Result<Self, AlgebraError> {
        if !lower.embeds_into(&upper) {
            return Err(AlgebraError::NotEmbeddable {
                lower: lower.to_string(),
                upper: upper.to_string(),
            });
        }
        Ok(Self::resolve(lower, upper))
    }

    /// `0 ⊆ G ⊆ upper`.
    pub fn at_most(upper: AbelianGroup) -> Self {
        Self::resolve(AbelianGroup::zero(), upper)
    }

    fn resolve(lower: AbelianGroup, upper: AbelianGroup) -> Self {
        if lower == upper {
            GroupValue::Exact(lower)
        } else {
            GroupValue::Bounded { lower, upper }
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, GroupValue::Exact(_))
    }

    pub fn exact(&self) -> Option<&AbelianGroup> {
        match self {
            GroupValue::Exact(g) => Some(g),
            GroupValue::Bounded { .. } => None,
        }
    }

    /// The exact group, or an error naming the bounded value.
    pub fn require_exact(&self) -> Result<&AbelianGroup, AlgebraError> {
        self.exact()
            .ok_or_else(|| AlgebraError::BoundedInExact(self.to_string()))
    }

    pub fn lower(&self) -> &AbelianGroup {
        match self {
            GroupValue::Exact(g) => g,
            GroupValue::Bounded { lower, .. } => lower,
        }
    }

    pub fn upper(&self) -> &AbelianGroup {
        match self {
            GroupValue::Exact(g) => g,
            GroupValue::Bounded { upper, .. } => upper,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.exact().is_some_and(AbelianGroup::is_zero)
    }

    /// Direct sum with bounds added pointwise, then sandwich-resolved.
    pub fn direct_sum(&self, other: &GroupValue) -> GroupValue {
        Self::resolve(
            self.lower().direct_sum(other.lower()),
            self.upper().direct_sum(other.upper()),
        )
    }

    /// κ-fold direct sum.
    pub fn countable_sum(&self, kappa: ExtNat) -> GroupValue {
        Self::resolve(self.lower().scale(kappa), self.upper().scale(kappa))
    }

    /// `n`-torsion, monotone in the bounds.
    pub fn n_torsion(&self, n: u64) -> GroupValue {
        Self::resolve(self.lower().n_torsion(n), self.upper().n_torsion(n))
    }
}

impl From<AbelianGroup> for GroupValue {
    fn from(g: AbelianGroup) -> Self {
        GroupValue::Exact(g)
    }
}

/// Sum of any number of values.
pub fn sum_all<'a>(values: impl IntoIterator<Item = &'a GroupValue>) -> GroupValue {
    values
        .into_iter()
        .fold(GroupValue::zero(), |acc, v| acc.direct_sum(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::SymbolicRank;

    const W: ExtNat = ExtNat::Omega;

    #[test]
    fn sandwich_resolves_under_absorption() {
        let a: GroupValue = AbelianGroup::cyclic_mult(2, W).into();
        let b = GroupValue::at_most(AbelianGroup::cyclic_mult(2, W));
        assert!(!b.is_exact());
        assert_eq!(a.direct_sum(&b), a);
    }

    #[test]
    fn zero_is_neutral() {
        let g: GroupValue = AbelianGroup::cyclic(12).into();
        assert_eq!(g.direct_sum(&GroupValue::zero()), g);
        let b = GroupValue::at_most(AbelianGroup::cyclic(4));
        assert_eq!(b.direct_sum(&GroupValue::zero()), b);
    }

    #[test]
    fn symbolic_rank_summed_omega_times() {
        let r: GroupValue = AbelianGroup::symbolic(SymbolicRank::positive("r")).into();
        let total = (0..5).fold(GroupValue::zero(), |acc, _| acc.direct_sum(&r));
        assert_eq!(total.exact().unwrap().symbolic_ranks().len(), 5);
        assert_eq!(r.countable_sum(W), AbelianGroup::free(W).into());
        let with_torsion = r.direct_sum(&AbelianGroup::cyclic_mult(2, W).into());
        assert_eq!(
            with_torsion.countable_sum(W),
            AbelianGroup::free(W)
                .direct_sum(&AbelianGroup::cyclic_mult(2, W))
                .into()
        );
    }

    #[test]
    fn countable_sum_examples() {
        let g: GroupValue = AbelianGroup::free(1u64)
            .direct_sum(&AbelianGroup::cyclic(2))
            .into();
        assert_eq!(
            g.countable_sum(W),
            AbelianGroup::free(W)
                .direct_sum(&AbelianGroup::cyclic_mult(2, W))
                .into()
        );
        assert_eq!(g.countable_sum(ExtNat::ZERO), GroupValue::zero());
    }

    #[test]
    fn bounded_rejects_non_embedding() {
        assert!(GroupValue::bounded(AbelianGroup::cyclic(4), AbelianGroup::cyclic(2)).is_err());
        assert_eq!(
            GroupValue::bounded(AbelianGroup::cyclic(2), AbelianGroup::cyclic(2)).unwrap(),
            AbelianGroup::cyclic(2).into()
        );
    }
}
