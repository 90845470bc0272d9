//! Exact finite probability: schemes, bundles, conditional expectation as
//! orthogonal projection, fiber products and Markov chains.
//!
//! Every scalar is an exact [`Rational`]; all identities are checked with
//! exact equality.

pub mod algebra;
pub mod bundle;
pub mod cli;
pub mod condexp;
pub mod error;
pub mod fiberprod;
pub mod format;
pub mod label;
pub mod laws;
pub mod markov;
pub mod rational;
pub mod scheme;
pub mod stats;
pub mod variable;

pub use algebra::Partition;
pub use bundle::{compose, Bundle};
pub use condexp::{cond_covariance, cond_expectation, cond_probability, cond_variance};
pub use error::{Error, Result};
pub use fiberprod::{
    check_scheme_iso, cond_independent, fiber_product, FiberProduct, IsoFailure, SchemeIso,
};
pub use label::Label;
pub use markov::{coordinate_functions, markov_build, markov_verify};
pub use rational::Rational;
pub use scheme::Scheme;
pub use stats::{chebyshev_check, linear_regression, wlln_certificate};
pub use variable::{
    distribution_scheme, expectation, indicator, inner_product, joint, probability, Event,
    RandomFunction, RandomVariable,
};
