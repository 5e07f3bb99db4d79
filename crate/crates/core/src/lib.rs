//! Exact-arithmetic convex geometry and K-stability invariants of
//! polarized toric pairs.
//!
//! The crate is organized as a small stack:
//! rational scalars and vectors, exact polytopes and mixed volumes,
//! polarized toric pairs with divisor positivity and intersection numbers,
//! valuative invariants and thresholds, and toric test configurations with
//! their Donaldson-Futaki and J functionals. Seeded instance generators and
//! property suites live in `instances` / `suites`; `report` holds the JSON
//! input/output schema used by the command-line front end.

pub mod error;
pub mod fan;
pub mod invariants;
pub mod mixed;
pub mod piecewise;
pub mod linalg;
pub mod polytope;
pub mod rational;
pub mod testconfig;
pub mod toric;
pub mod vector;

pub use error::{Error, Result};
pub use polytope::{from_halfspaces, hull, AffineEquation, Halfspace, LatticePolytope};
pub use rational::{format_rational, parse_rational, rat, rat_int, Rational};
pub use vector::QVec;
