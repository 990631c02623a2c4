//! Constructive trigonometric approximation toolkit.
//!
//! The crate is organised bottom-up:
//!
//! - [`fncore`]: the periodic function model, grid norms, adaptive quadrature
//!   and series summation.
//! - [`trig`]: trigonometric polynomials, Fourier coefficients, Fourier /
//!   Fejér / de la Vallée Poussin sums, Lebesgue constants and `ℓ(x)`.
//! - [`smoothness`]: finite differences, the moduli `ω_r` and `ω*_{2k}`,
//!   Steklov averages and the smoothing operators built on them.
//! - [`bestapprox`]: best uniform approximation by a discrete exchange
//!   algorithm, and best `L₂` approximation.
//! - [`constants`]: exact and quadrature-backed evaluation of the named
//!   constants of Jackson–Stechkin type inequalities.

pub mod bestapprox;
pub mod constants;
pub mod error;
pub mod fncore;
pub mod smoothness;
pub mod trig;

pub use error::{Error, Result};
pub use fncore::{GridSpec, PeriodicFunction, QuadResult, Sampled};
pub use trig::{FourierCoeffs, TrigPoly};
