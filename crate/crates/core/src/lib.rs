//! Desk-scale laboratory for the groups `PSL_d(O)` over small rings of
//! S-integers.
//!
//! The crate is organised by subsystem:
//!
//! * [`rings`]: exact arithmetic in `Z`, `Z[1/N]`, `Z[i]` and their finite
//!   quotients, two-generator ideals and the base bijection `b: Z -> O`.
//! * [`matgroup`]: `SL_d`/`PSL_d` matrices, elementary matrices, congruence
//!   kernels, trace classes, the `sigma`/`tau` ring structure on
//!   `E_{1,d}`, basis completion and torus spans.
//! * [`spectra`]: ratio sets `delta S`, `delta^2 S`, the extremal count
//!   `f(n)` and reconstruction of `S` from `delta S`.
//! * [`goedel`]: integer codes for finitely supported perturbations of the
//!   infinite identity matrix, and the transported group law on codes.
//! * [`quotientlab`]: fully enumerated `PSL_n(F_q)` with conjugacy classes,
//!   product-set growth, commutator spectra and sampled relations.
//! * [`folang`]: first-order formulas in the language of groups, evaluated
//!   by enumeration over a [`quotientlab::FinGroup`].

pub mod error;
pub mod folang;
pub mod goedel;
pub mod linalg;
pub mod matgroup;
pub mod pairing;
pub mod quotientlab;
pub mod rings;
pub mod spectra;

#[cfg(test)]
mod testutil;

pub use error::{Error, Result};

/// Version stamped into reports and cache file names.
pub const CODE_VERSION: &str = concat!("psllab-", env!("CARGO_PKG_VERSION"));
