//! Numerical laboratory for equilibrium problems `EP(φ, S)`.
//!
//! The crate is organised bottom-up:
//!
//! * [`geometry`] – low-dimensional polyhedral geometry: convex pieces, unions
//!   of pieces, polyhedral cones with double description, polytopes, projections
//!   and distances.
//! * [`analysis`] – piecewise-smooth functions built from max/sum nodes over
//!   smooth expression trees, with active-gradient-hull subdifferentials.
//! * [`problems`] – the equilibrium-problem abstraction and its MP / VIP /
//!   saddle / Nash specialisations, stationarity and monotonicity probes.
//! * [`sharpness`] – weak sharpness, strong non-degeneracy, augmented weak
//!   sharpness and the ψ diagnostic.
//! * [`solvers`] – feasible-sequence generators, the projected residual ρ and
//!   the finite-identification verifier.
//! * [`corpus`] – the worked instances with their expected verdicts.
//! * [`cli`] – the batch runner behind the `sharpeq` binary.

pub mod analysis;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod geometry;
pub mod problems;
pub mod sharpness;
pub mod solvers;
pub mod tol;

pub use error::{Error, Result};
pub use geometry::Point;
