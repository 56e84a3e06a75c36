//! Bredon homology of dihedral Artin groups `A_n = ⟨a, b | prod(a,b;n) = prod(b,a;n)⟩`
//! with respect to the family of virtually cyclic subgroups, with coefficients in
//! the algebraic K-theory of group rings `K_q(R[-])`.
//!
//! The crate is layered bottom-up:
//!
//! * [`abelian`]: canonical forms of countably generated abelian groups, Smith
//!   normal form, kernels and cokernels of integer matrices tensored with a group.
//! * [`ktheory`]: K-theory profiles of coefficient rings (`K_q` and Nil-terms).
//! * [`bhs`]: the Bass–Heller–Swan decomposition of `K_q(R[ℤ])` and the groups
//!   built from it.
//! * [`artin`]: structure of `A_n`: center, commensurators, tree models, ordinary
//!   homology, and the catalog of commensurability classes.
//! * [`engine`]: the Mayer–Vietoris assembly of `H_i^vc(A_n; K_q(R[-]))` and the
//!   E₂ page.
//! * [`oracle`]: brute-force verification through explicit truncated matrices.

pub mod abelian;
pub mod artin;
pub mod bhs;
mod document;
pub mod engine;
pub mod error;
pub mod ktheory;
pub mod oracle;

pub use abelian::{AbelianGroup, ExtNat, GroupValue, IntMatrix};
pub use error::{AlgebraError, EngineError, ProfileError};
