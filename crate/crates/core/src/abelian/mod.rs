//! Exact arithmetic on countably generated abelian groups.
//!
//! Groups are kept in primary decomposition with [`ExtNat`] multiplicities, which
//! makes `⊕`, `⊗`, `Tor` and `n`-torsion pointwise per prime. Maps between finite
//! sums of one coefficient group are integer matrices, handled in [`matrix`].

mod extnat;
mod group;
pub mod matrix;
mod text;
mod value;

pub use extnat::ExtNat;
pub use group::{factorize, MAX_FACTOR_ORDER, normalize, AbelianGroup, CyclicOrder, SymbolicRank};
pub use matrix::{
    ker_coker_with_symbolic, matrix_ker_coker, smith_normal_form, IntMatrix, SnfResult,
};
pub use value::{sum_all, GroupValue};

use crate::error::AlgebraError;

/// `a ⊕ b` on values.
pub fn direct_sum(a: &GroupValue, b: &GroupValue) -> GroupValue {
    a.direct_sum(b)
}

/// `⊕_κ a`.
pub fn countable_sum(a: &GroupValue, kappa: ExtNat) -> GroupValue {
    a.countable_sum(kappa)
}

pub fn tensor(a: &AbelianGroup, b: &AbelianGroup) -> Result<AbelianGroup, AlgebraError> {
    a.tensor(b)
}

pub fn tor(a: &AbelianGroup, b: &AbelianGroup) -> AbelianGroup {
    a.tor(b)
}

pub fn n_torsion(a: &AbelianGroup, n: u64) -> AbelianGroup {
    a.n_torsion(n)
}
