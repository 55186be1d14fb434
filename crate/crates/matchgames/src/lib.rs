//! Nonlocal games built from graph matchings: game constructors, exact
//! classical and nonsignaling values, the explicit perfect correlations,
//! noncommutative sum-of-squares verification, numeric quantum strategies
//! and projective-packing certificates.

pub mod corr;
pub mod enumerate;
pub mod error;
mod fastrat;
pub mod fpm;
pub mod game;
pub mod graph;
pub mod lp;
pub mod nc;
pub mod nsvalue;
pub mod packing;
pub mod quantum;
pub mod rational;

pub use error::{Error, Result};
pub use rational::Rational;
