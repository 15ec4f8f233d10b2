//! Exact computation of the Σ⁰ invariant of ℤⁿ-modules through tropical
//! geometry, with push dynamics and a hyperbolic-plane verifier.

pub mod amoeba;
pub mod dynamics;
pub mod error;
pub mod groebner;
pub mod hyperbolic;
pub mod job;
pub mod linalg;
pub mod lp;
mod par;
pub mod plot;
pub mod polyhedra;
pub mod rational;
pub mod ring;
pub mod sigma;
pub mod tropical;
pub mod valuation;

pub use error::{Error, Result};
pub use rational::{ExtRational, Rational};
pub use ring::{Character, CoefficientDomain, Direction, LaurentPoly, Monomial};
