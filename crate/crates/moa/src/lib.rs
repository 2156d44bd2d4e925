//! Multi-objective analysis toolkit.
//!
//! Runs a seeded NSGA-II over parameterized models, aggregates the Pareto
//! fronts of repeated runs into attainment surfaces (the optimistic Ψ0 and
//! the conservative Ψ1), quantifies run-to-run disparity with hypervolumes
//! measured against a conservative nadir, and mines the resulting fronts
//! (clustering, decision trees, autocorrelation along the front, compromise
//! and neighborhood selection).
//!
//! Objectives are maximized internally; problems declare per-objective
//! orientation and minimized objectives are negated at ingestion. Exports
//! undo the negation.

pub mod aggregate;
pub mod error;
pub mod indicators;
pub mod mining;
pub mod nsga2;
pub mod pareto;
pub mod problems;

pub use error::{Error, Result};
