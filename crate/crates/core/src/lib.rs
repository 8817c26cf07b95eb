//! Exact derivation of the KP and n-Gelfand–Dikii hierarchies in the
//! variables u_{s,t} = ∂_s∂₁^t v, v = −ln τ, and Taylor coefficients of the
//! Witten solution.

pub mod cache;
pub mod cli;
pub mod combinatorics;
pub mod error;
pub mod gd;
pub mod jet;
pub mod kp;
pub mod poly;
pub mod rational;
pub mod render;
pub mod selfcheck;
pub mod witten;

pub use error::{Error, Result};
pub use jet::{JetMonomial, JetPolynomial, JetVariable};
pub use rational::Rational;
