//! Exact Bayesian model of a doctor diagnosing with help from an AI
//! recommender.
//!
//! The crate computes posteriors, persuasion thresholds, attribution of
//! disagreements, career-concern accuracy comparisons and a costly
//! extra-signal extension, all in exact rational arithmetic, and checks
//! every closed form against a brute-force enumeration of the outcome
//! space ([`oracle`]).

pub mod attribution;
pub mod career;
pub mod diagnosis;
pub mod error;
pub mod freeride;
pub mod model;
pub mod montecarlo;
pub mod oracle;
pub mod rational;
pub mod sweep;
pub mod thresholds;

pub use error::{Error, Result};
pub use model::{validate_params, Dim, ModelParams, Outcome, Role, Signal};
pub use oracle::{AiView, InformationSet, Oracle, Regime};
pub use rational::{LikelihoodRatio, Rational};
