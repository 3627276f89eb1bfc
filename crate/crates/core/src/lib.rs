//! Largest-disk point location.
//!
//! Given n planar disks in general position, build a linear-size structure
//! that answers "which is the largest input disk containing q?" in
//! O(log n) time. Two builders are provided: a quadratic reference
//! construction and a divide-and-conquer construction running in
//! O(n log^3 n).
//!
//! The core is generic over the scalar type via [`scalar::Float`];
//! concrete f64 aliases live at the crate root.

pub mod arcs;
pub mod codec;
pub mod dc;
pub mod engine;
pub mod error;
pub mod geom;
pub mod instance;
pub mod locator;
pub mod naive;
mod pslab;
pub mod scalar;
pub mod sweep;
pub mod union;
pub mod validate;

#[cfg(test)]
pub(crate) mod brute;

pub use arcs::{Arc, ArcMap, Frame, Sector};
pub use error::{Error, Result, Violation};
pub use geom::{circle_crossings, CircleCrossing, Disk, Point, Tolerance};

/// f64 point.
pub type Point64 = Point<f64>;
/// f64 disk.
pub type Disk64 = Disk<f64>;
/// f64 tolerances.
pub type Tolerance64 = Tolerance<f64>;
/// f64 arc.
pub type Arc64 = Arc<f64>;
/// f64 arc map.
pub type ArcMap64 = ArcMap<f64>;
/// f32 point.
pub type Point32 = Point<f32>;
/// f32 disk.
pub type Disk32 = Disk<f32>;
/// f32 tolerances.
pub type Tolerance32 = Tolerance<f32>;
