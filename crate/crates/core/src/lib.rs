//! Exact sender values for persuasion games with transparent motives under
//! cheap talk, mediation, mediation with money burning (budgeted or not) and
//! Bayesian persuasion, together with saddle certificates and explicit
//! money-burning mechanisms.
//!
//! All arithmetic is over arbitrary-precision rationals; every linear program
//! is solved by an exact simplex method whose optimality certificate is
//! re-checked before a value is returned.

pub mod envelope;
pub mod error;
pub mod fixtures;
pub mod geometry;
pub mod lp;
pub mod mechanism;
pub mod model;
pub mod oracle;
pub mod par;
pub mod rational;
pub mod solvers;

pub use envelope::{Budget, WeightedEnvelopeQuery};
pub use error::{Error, Result};
pub use geometry::PiecewiseValueStructure;
pub use model::{Belief, PersuasionGame, PriorDomain, RawGame, SubjectivePrior};
pub use par::Execution;
pub use rational::Rational;
pub use solvers::{PosteriorDistribution, ProtocolReport, SaddleCertificate};
