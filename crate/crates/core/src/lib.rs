//! Symmetry classes of tensors attached to irreducible characters of the
//! symmetric group, the induced operators `K_χ(T)`, their higher-order
//! directional derivatives, and the norm identities and immanant bounds built
//! on top of them.
//!
//! Everything here is desk scale: tensor spaces are formed explicitly in the
//! `e_α = e_{α(1)} ⊗ … ⊗ e_{α(m)}` basis, so `n^m` is capped (4096 by default).
//!
//! Module map:
//!
//! - [`combinat`]: partitions, majorization, multi-indices `Γ_{m,n}`, orbits.
//! - [`symgroup`]: irreducible characters of `S_m` (Murnaghan–Nakayama).
//! - [`denselin`]: dense complex matrices, Jacobi eigen/SVD, polar form.
//! - [`symclass`]: the projector `K_χ`, the bases `Δ̄ ⊆ Δ̂`, `K_χ(A)` and `D^k K_χ`.
//! - [`norms`]: closed-form derivative norms, immanants and perturbation bounds.

pub mod combinat;
pub mod denselin;
mod error;
pub mod norms;
pub mod random;
pub mod symclass;
pub mod symgroup;

pub use error::{Error, Result};

/// Schema tag embedded in every serialized report.
pub const REPORT_SCHEMA: &str = "kchi-report/1";
