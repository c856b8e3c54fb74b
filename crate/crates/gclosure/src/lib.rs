//! Exact construction and verification of G-closure data for rank-n algebras
//! over commutative rings.
//!
//! The library is organized bottom-up:
//!
//! * [`ring`] — a tower of exactly computable base rings (ℤ, ℚ, ℤ/m, GF(p),
//!   polynomial and monic-quotient extensions), together with division-free
//!   determinants, echelon/Hermite/Smith/Howell normal forms, root finding,
//!   and primoid testing.
//! * [`algebra`] — rank-n algebras presented by structure constants, with
//!   characteristic polynomials, norms, traces, discriminants, and
//!   homomorphism search.
//! * [`tensor`] — tensor powers A^⊗n, permutation actions, and orbit-sum
//!   bases of the invariant subrings (A^⊗n)^G.
//! * [`ferrand`] — the canonical homomorphism (A^⊗n)^{Sₙ} → R evaluated on
//!   the orbit basis.
//! * [`closure`] — closure data as first-class values: verification,
//!   induction, the Sₙ action, base change, resolvent and closure algebras,
//!   faithfulness, and a brute-force enumeration oracle.
//! * [`catalog`] — the explicit parameterizations: discriminant algebras,
//!   the square-root-of-discriminant correspondence, cubic resolvents and
//!   D₄ data, factorization data, product data, and 1-closure data.
//! * [`serialize`] — document forms for algebras, closure data, and reports.

pub mod algebra;
pub mod catalog;
pub mod closure;
pub mod error;
pub mod ferrand;
pub mod ring;
pub mod serialize;
pub mod tensor;

pub use error::{Error, Result};
