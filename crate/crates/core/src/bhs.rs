//! The Bass–Heller–Swan decomposition
//! `K_q(R[ℤ]) ≅ K_q(R) ⊕ K_{q-1}(R) ⊕ NK_q(R) ⊕ NK_q(R)` and the groups derived
//! from it: the kernel of the index-`n` induction `ind_n`, the class terms `N_q`, and
//! the cokernel `C(K_q(R))` of the map induced by `ℤ → ℤ ⊕ ℤ, 1 ↦ (2, n)`.
//!
//! `ind_n` is the identity on `K_q(R)`, multiplication by `n` on `K_{q-1}(R)`, and an
//! undetermined (Frobenius) endomorphism on the Nil-terms. Everything that depends on
//! the Nil part is therefore carried as a [`GroupValue::Bounded`] sandwich.

use crate::abelian::{ker_coker_with_symbolic, ExtNat, GroupValue, IntMatrix};
use crate::error::{EngineError, ProfileError};
use crate::ktheory::KTheoryProfile;

/// The four summands of `K_q(R[ℤ])`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BhsDecomposition {
    pub kq: GroupValue,
    pub kq_minus_1: GroupValue,
    /// `NK_q(R) ⊕ NK_q(R)`.
    pub nil_pair: GroupValue,
    pub total: GroupValue,
}

/// `ker(ind_n) ≅ T₁ ⊕ T₂`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndKernel {
    /// `n`-torsion of `K_{q-1}(R)`.
    pub t1: GroupValue,
    /// A subgroup of the `n`-torsion of `NK_q(R)²`.
    pub t2: GroupValue,
    pub n: u64,
}

impl IndKernel {
    pub fn total(&self) -> GroupValue {
        self.t1.direct_sum(&self.t2)
    }
}

pub fn k_of_laurent(profile: &KTheoryProfile, q: i64) -> Result<BhsDecomposition, ProfileError> {
    let kq = profile.get_k(q)?;
    let kq_minus_1 = profile.get_k(q - 1)?;
    let nil_pair = profile.get_nk(q)?.countable_sum(ExtNat::Fin(2));
    let total = kq.direct_sum(&kq_minus_1).direct_sum(&nil_pair);
    Ok(BhsDecomposition {
        kq,
        kq_minus_1,
        nil_pair,
        total,
    })
}

pub fn ind_kernel(profile: &KTheoryProfile, q: i64, n: u64) -> Result<IndKernel, EngineError> {
    if n < 2 {
        return Err(EngineError::IndexTooSmall {
            n: n as i64,
            min: 2,
        });
    }
    let t1 = profile.get_k(q - 1)?.n_torsion(n);
    let nil_pair = profile.get_nk(q)?.countable_sum(ExtNat::Fin(2));
    let t2 = GroupValue::at_most(nil_pair.upper().n_torsion(n));
    Ok(IndKernel { t1, t2, n })
}

/// `N_q = K_{q-1}(R) ⊕ NK_q(R) ⊕ NK_q(R)`, the part of `K_q(R[ℤ])` outside `K_q(R)`.
pub fn n_q_class_term(profile: &KTheoryProfile, q: i64) -> Result<GroupValue, ProfileError> {
    let d = k_of_laurent(profile, q)?;
    Ok(d.kq_minus_1.direct_sum(&d.nil_pair))
}

/// The column `[2; n]` presenting `x ↦ (2x, nx)`.
pub fn ind_pair_matrix(n: u64) -> IntMatrix {
    IntMatrix::column(&[2, n as i128])
}

fn check_odd(n: u64) -> Result<(), EngineError> {
    if n < 3 {
        return Err(EngineError::IndexTooSmall {
            n: n as i64,
            min: 3,
        });
    }
    if n.is_multiple_of(2) {
        return Err(EngineError::EvenN(n as i64));
    }
    Ok(())
}

/// Cokernel of `[2; n] ⊗ K` on each bound of `K`.
fn pair_cokernel(k: &GroupValue, n: u64) -> Result<GroupValue, EngineError> {
    let m = ind_pair_matrix(n);
    let (_, lo) = ker_coker_with_symbolic(&m, k.lower())?;
    let (_, hi) = ker_coker_with_symbolic(&m, k.upper())?;
    Ok(GroupValue::bounded(lo, hi)?)
}

/// `C̄(K_q(R))`: `C(K_q(R))` without its distinguished `K_q(R)` summand.
pub fn big_c_bar(profile: &KTheoryProfile, q: i64, n: u64) -> Result<GroupValue, EngineError> {
    check_odd(n)?;
    let d = k_of_laurent(profile, q)?;
    let lower_part = pair_cokernel(&d.kq_minus_1, n)?;
    // four Nil copies on the two vertices, modulo an opaque image
    let nil_quotient = GroupValue::at_most(d.nil_pair.upper().scale(ExtNat::Fin(2)));
    Ok(lower_part.direct_sum(&nil_quotient))
}

/// `C(K_q(R)) = K_q(R) ⊕ coker([2; n] ⊗ K_{q-1}(R)) ⊕ (Nil quotient)`, `n` odd.
pub fn big_c(profile: &KTheoryProfile, q: i64, n: u64) -> Result<GroupValue, EngineError> {
    let bar = big_c_bar(profile, q, n)?;
    Ok(profile.get_k(q)?.direct_sum(&bar))
}
