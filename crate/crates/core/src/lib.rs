//! Sum-rank metric codes and their geometry over small finite fields.
//!
//! The crate computes exact sum-rank covering radii and saturation radii,
//! verifies saturating/cutting/minimal properties through two independent
//! algorithmic routes, evaluates the sphere-covering and quadratic length
//! bounds, builds the classical families of saturating systems, and runs
//! exhaustive shortest-length searches with certificates.
//!
//! Everything is exact integer arithmetic; all enumerations are bounded by
//! configurable guards and fail loudly rather than truncate.

pub mod bounds;
pub mod codes;
pub mod config;
pub mod constructions;
pub mod error;
pub mod field;
pub mod io;
mod linalg;
pub mod search;
pub mod systems;

pub use config::Config;
pub use error::{Error, Result};
pub use field::{FieldContext, Fqm};
