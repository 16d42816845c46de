//! Pseudospectral laboratory for the nonlocal Kuramoto-Sivashinsky equation
//!
//! ```text
//! u_t − ∂²u − μ(1 − ∂²)^{-1/2} u − ½(∂u)² = 0
//! ```
//!
//! on a large periodic box. Fields live in Fourier space ([`SpectralField`]),
//! the linear part is applied exactly per mode ([`symbol`]), and the mild
//! formulation is solved either by Picard iteration in a time-weighted norm or
//! by exponential time differencing ([`solver`]). [`lemmas`] and
//! [`experiments`] turn the analytic estimates into numerical checks.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod experiments;
pub mod field;
pub mod grid;
pub mod lemmas;
pub mod quadrature;
pub mod solver;
pub mod symbol;

pub use error::{KsError, Result};
pub use field::{japanese_bracket_pow, SobolevIndex, SpectralField};
pub use grid::Grid;
pub use solver::{Scheme, SolverConfig, Trajectory};
pub use symbol::{phi, phi_functions, semigroup_apply, PhiSymbol, SymbolParams};
