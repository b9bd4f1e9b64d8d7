//! Three-mode bosonic squeezing toolkit.
//!
//! The central object is the squeeze operator
//!
//! > S₃ = exp[μ(a₁a₂ − a₁†a₂†) + ν(a₁a₃ − a₁†a₃†)],
//!
//! in which mode 1 is pair-coupled to modes 2 and 3 with real strengths μ
//! and ν. Everything S₃ does is computed along two independent routes and
//! cross-checked:
//!
//! * **Closed form** ([`generator`], [`squeezing`], [`wigner`]): S₃ acts on
//!   quadratures as the symplectic pair (e^{−Λ}, e^{Λ}) of a real symmetric
//!   3×3 coupling matrix Λ, which exponentiates in closed form. Quadrature
//!   variances, the uncertainty product, and the Wigner function of the
//!   squeezed vacuum all follow analytically.
//! * **Truncated Fock space** ([`fock`]): mode operators are sparse matrices
//!   on a photon-number basis with a per-mode cutoff, and exp of the
//!   anti-Hermitian generator is applied to state vectors by scaled Taylor
//!   steps. This backend knows nothing about the closed forms.
//!
//! Agreement between the two routes, at tolerances tied to the truncation
//! tail, is the correctness story; see the `selfcheck` subcommand of the
//! companion CLI crate.
//!
//! All types are immutable after construction and all operations are pure,
//! so everything here is `Send + Sync` and safe to use from parallel sweeps.

use thiserror::Error;

pub mod expm;
pub mod fock;
pub mod generator;
pub mod sparse;
pub mod squeezing;
pub mod wigner;

/// Errors shared by all modules.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An input was outside the documented domain (non-finite, wrong
    /// dimension, out-of-range tolerance, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// A requested state does not fit the Fock cutoff at the required
    /// truncation tail. `suggested_cutoff` is the smallest per-mode photon
    /// number that would.
    #[error("truncation: {msg} (suggested cutoff: {suggested_cutoff})")]
    Truncation {
        msg: String,
        suggested_cutoff: usize,
    },
    /// A result is computable but cannot meet its documented accuracy.
    #[error("precision: {0}")]
    Precision(String),
    /// An iteration budget was exhausted (too many exponential substeps or
    /// series terms).
    #[error("resource budget exceeded: {0}")]
    Resource(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_finite(name: &str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "{name} must be finite, got {value}"
        )))
    }
}
