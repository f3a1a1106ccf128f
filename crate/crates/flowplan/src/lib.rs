//! Risk-bounded trajectory planning for stochastic agents.
//!
//! A convex trajectory planner proposes candidate control trajectories, a
//! validator samples probabilistic flow tubes around each candidate and
//! assesses obstacle-collision risk, and unsafe candidates are refined with
//! synthesized halfspace safety constraints until the plan's risk falls below
//! the requested bound. Dynamics may be closed form (the stochastic Dubins
//! agent) or learned from trajectory data via a pair of variational
//! autoencoders with a linear latent dynamics map.

pub mod error;
pub mod geometry;
pub mod rng;
pub mod special;

pub use error::{Error, Result};
