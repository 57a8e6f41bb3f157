//! Byzantine-robust vector aggregation rules and the geometric validity
//! conditions used to judge them, built around minimum enclosing balls.

pub mod aggregate;
pub mod error;
pub mod geometry;
pub mod io;
pub mod linalg;
pub mod oracle;
pub mod pointset;
pub mod scenarios;
pub mod validity;

pub use aggregate::{aggregate, aggregate_with, AggregateOptions, AggregateResult, CandidateBalls, Rule};
pub use error::{Error, Result};
pub use geometry::{meb, Ball};
pub use pointset::{Label, PointSet};
pub use validity::{Certificate, Condition};
