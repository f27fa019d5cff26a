//! Runtime configuration: enumeration guards, tolerances, worker count.

use crate::error::{Error, Result};

/// Enumeration guards and tolerances.
///
/// All exhaustive computations are bounded by one of these knobs and fail
/// with [`Error::TooLarge`] instead of truncating. Environment variables
/// provide defaults (`SRC_FIELD_GUARD_LOG2`, `SRC_GUARD_LOG2`, `SRC_FQ_TOL`,
/// `SRC_JOBS`); command-line flags take precedence over both.
#[derive(Debug, Clone)]
pub struct Config {
    /// Largest admissible field: q^m <= 2^field_guard_log2.
    pub field_guard_log2: u32,
    /// Bound on ambient/coset/candidate enumerations: q^{mN} <= 2^enum_guard_log2.
    pub enum_guard_log2: u32,
    /// Truncation tolerance for the infinite product f(q).
    pub fq_tol: f64,
    /// Worker count for data-parallel enumerations. 1 = fully sequential.
    pub jobs: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            field_guard_log2: env_u32("SRC_FIELD_GUARD_LOG2", 20),
            enum_guard_log2: env_u32("SRC_GUARD_LOG2", 24),
            fq_tol: env_f64("SRC_FQ_TOL", 1e-9),
            jobs: env_u32("SRC_JOBS", 1) as usize,
        }
    }
}

impl Config {
    /// Checks `size_log2 <= limit`, naming the computation and the knob on failure.
    pub(crate) fn check_enum(&self, what: &'static str, size_log2: f64) -> Result<()> {
        if size_log2 > self.enum_guard_log2 as f64 {
            return Err(Error::TooLarge {
                what,
                needed_log2: size_log2,
                limit_log2: self.enum_guard_log2,
                knob: "SRC_GUARD_LOG2",
            });
        }
        Ok(())
    }

    pub(crate) fn check_field(&self, what: &'static str, size_log2: f64) -> Result<()> {
        if size_log2 > self.field_guard_log2 as f64 {
            return Err(Error::TooLarge {
                what,
                needed_log2: size_log2,
                limit_log2: self.field_guard_log2,
                knob: "SRC_FIELD_GUARD_LOG2",
            });
        }
        Ok(())
    }
}

fn env_u32(name: &str, default: u32) -> u32 {
    std::env::var(name)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(default)
}

fn env_f64(name: &str, default: f64) -> f64 {
    std::env::var(name)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(default)
}

/// log2 of q^e as a float, for guard checks.
pub(crate) fn pow_log2(q: u64, e: u32) -> f64 {
    (q as f64).log2() * e as f64
}
