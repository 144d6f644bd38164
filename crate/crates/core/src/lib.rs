//! Onset of convection in a horizontal fluid layer with a uniform internal
//! heat source between two rigid, perfectly conducting walls.
//!
//! The marginal-stability system
//!
//! ```text
//! (D^2 - a^2)^2 W - a^2 Ra Theta = 0
//! (D^2 - a^2) Theta + (1 - N z) W = 0,       W = DW = Theta = 0 at z = +-1/2
//! ```
//!
//! is projected onto integrated shifted-Legendre bases whose inner products
//! are known in closed form. The crate provides
//!
//! * [`slp_basis`]: the bases, exact and by recurrence;
//! * [`inner_products`]: the projection integrals, closed form versus exact
//!   integration;
//! * [`galerkin`]: assembly, the eigen-solve, neutral curves and critical
//!   points;
//! * [`oracle`]: an independent finite-difference solver and quadrature;
//! * [`chandrasekhar`]: beam-function bases and the parity argument that
//!   removes `N` from single-parity projections.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chandrasekhar;
pub mod error;
pub mod galerkin;
pub mod inner_products;
pub mod oracle;
pub mod poly;
pub mod rational;
pub mod reference;
pub mod slp_basis;

pub use error::{Result, StabilityError};
pub use galerkin::{
    assemble, basic_state_profile, critical_rayleigh, neutral_curve, secular_determinant,
    solve_rayleigh, BasicStateParams, GalerkinBlocks, GalerkinSolver, ProblemParams,
    RayleighSolution,
};
pub use rational::Rational;
