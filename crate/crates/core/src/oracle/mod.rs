//! Verification routes that share no code path with the Galerkin solver:
//! a finite-difference discretisation of the marginal-stability system and
//! adaptive quadrature for non-polynomial integrands.

mod finite_difference;
mod quadrature;

pub use finite_difference::{
    fd_rayleigh, fd_rayleigh_in_frame, oracle_critical, oracle_rayleigh, richardson, Frame,
    GridSpec, OracleEstimate, RichardsonEstimate, DEFAULT_BASE_GRID,
};
pub use quadrature::adaptive_quadrature;
