//! Error and input-validation types.
//!
//! The construction algorithms assume general position: distinct radii,
//! distinct center y-coordinates in each of the three rotated frames, no
//! tangencies. Inputs violating that are rejected up front with a
//! [`Violation`] report instead of being perturbed.

use crate::arcs::Frame;
use thiserror::Error;

/// A single general-position violation found during input validation.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// Two radii closer than the radius tolerance.
    RadiusTie { a: u64, b: u64, delta: f64 },
    /// Two center y-coordinates closer than the coordinate tolerance
    /// in one of the rotated frames.
    CenterYTie { frame: Frame, a: u64, b: u64, delta: f64 },
    /// A coordinate or radius is NaN or infinite.
    NonFinite { id: u64 },
    /// Radius is zero or negative.
    NonPositiveRadius { id: u64, r: f64 },
    /// Duplicate disk id in the input.
    DuplicateId { id: u64 },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::RadiusTie { a, b, delta } => {
                write!(f, "disks {a} and {b}: radii within tolerance (|dr| = {delta:e})")
            }
            Violation::CenterYTie { frame, a, b, delta } => {
                write!(
                    f,
                    "disks {a} and {b}: center y within tolerance in {frame} frame (|dy| = {delta:e})"
                )
            }
            Violation::NonFinite { id } => write!(f, "disk {id}: non-finite coordinate or radius"),
            Violation::NonPositiveRadius { id, r } => {
                write!(f, "disk {id}: radius {r} is not positive")
            }
            Violation::DuplicateId { id } => write!(f, "duplicate disk id {id}"),
        }
    }
}

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A geometric predicate hit a configuration it cannot order reliably
    /// (tangency, shared boundary point, coincident circles, ...).
    #[error("degenerate configuration: {0}")]
    DegenerateInput(String),

    /// Two subarcs that should share an owner disk do not.
    #[error("arcs belong to different disks ({a} vs {b})")]
    ArcOwnerMismatch { a: u64, b: u64 },

    /// Input failed general-position validation; every violation is listed.
    #[error("input validation failed with {} violation(s): {}", .0.len(), format_violations(.0))]
    Validation(Vec<Violation>),

    /// Malformed file contents (disk lists, serialized structures).
    #[error("parse error: {0}")]
    Parse(String),

    /// Structure file had a valid header but an incompatible version.
    #[error("unsupported structure file version {0}")]
    UnsupportedVersion(u32),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn format_violations(v: &[Violation]) -> String {
    let mut out = String::new();
    for (i, viol) in v.iter().enumerate() {
        if i > 0 {
            out.push_str("; ");
        }
        out.push_str(&viol.to_string());
        if i == 7 && v.len() > 8 {
            out.push_str(&format!("; ... ({} more)", v.len() - 8));
            break;
        }
    }
    out
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
