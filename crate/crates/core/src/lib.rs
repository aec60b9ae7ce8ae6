//! Computational workbench for coded shift spaces and their invariant
//! measures: language oracles, exact Prokhorov-type distances between
//! finitely supported measures, and constructive closing, linking and
//! generic-point engines.

pub mod error;
pub mod graphview;
pub mod harness;
pub mod orbitlab;
pub mod rational;
pub mod seqcore;
pub mod simplexmetrics;
pub mod systems;

pub use error::{Error, Result};
