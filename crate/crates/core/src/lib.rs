//! Finite (periodic, N-player) and infinite Riccati systems whose stationary
//! solutions are scaled Catalan numbers.
//!
//! The crate solves both systems several independent ways and measures how the
//! finite solution converges to the infinite one as `N` grows:
//!
//! * [`catalan`] exact Catalan numbers and the stationary solution,
//! * [`scalar`] the closed-form per-mode Riccati solution `f_t(x)`, its ODE
//!   oracle, the generating function `S_t(z)` and the spectrum of the block
//!   matrix `M`,
//! * [`finite`] the periodic system by direct RK4, by the DFT/closed form and by
//!   matrix Riccati stepping,
//! * [`infinite`] the Catalan functions by exact lower-triangular truncation and
//!   by Fourier quadrature of `f_t`,
//! * [`convergence`] gap, product-sum, tail-sum and Gronwall measurements,
//! * [`table`] and [`cli`] the command-line surface.

pub mod catalan;
pub mod cli;
pub mod convergence;
mod error;
pub mod finite;
pub mod infinite;
pub mod linalg;
pub mod ode;
mod params;
pub mod scalar;
pub mod table;

pub use error::{Error, Result};
pub use params::{RiccatiParams, TimeGrid};
