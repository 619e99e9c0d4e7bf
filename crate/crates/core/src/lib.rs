//! Stability certificates for parameterized generalized equations
//! `0 ∈ f(x, y) + N_D(g(x, y))` with a convex polyhedral set `D`.
//!
//! The crate has three layers:
//!
//! * exact building blocks: rationals, dense linear algebra, a Bland-rule
//!   simplex and polyhedral geometry ([`polyhedra`]);
//! * subspace-containing derivatives of the normal-cone map and their
//!   transformation rules ([`subspace`], [`calculus`]);
//! * the stability conditions themselves ([`stability`]) plus an independent
//!   sampling oracle built from the explicit solution graph ([`oracle`]).

pub mod calculus;
pub mod error;
pub mod fixtures;
pub mod io;
pub mod linalg;
pub mod lp;
pub mod oracle;
pub mod polyhedra;
pub mod problem;
pub mod rational;
pub mod stability;
pub mod subspace;

pub use error::{Error, Result};
