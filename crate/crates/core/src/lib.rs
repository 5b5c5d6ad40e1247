//! Exact-arithmetic engine for structural causal models: counterfactuals,
//! actual causation, blameworthiness, praiseworthiness and intention.
//!
//! All probabilities, utilities and scores are exact rationals. Every
//! operation is a pure function of immutable inputs, so models and
//! epistemic states can be shared freely across threads.

pub mod cause;
pub mod epistemic;
pub mod error;
pub mod intention;
pub mod rational;
pub mod responsibility;
pub mod scenario;
pub mod scm;
mod search;

pub use error::{Error, Result};
pub use rational::Rational;
