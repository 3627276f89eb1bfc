//! Scalar abstraction for the geometry kernel.
//!
//! Everything geometric is generic over [`Float`], which bundles the
//! num-traits float machinery with the per-type tolerance defaults the
//! rest of the crate relies on. f64 is the intended workhorse; f32 is
//! supported for small, unit-scale inputs where its ~7 significant digits
//! still separate the quantities we compare.

use std::fmt::{Debug, Display};

/// Scalar type usable by the geometry kernel and search structures.
pub trait Float:
    num_traits::Float
    + num_traits::FloatConst
    + num_traits::FromPrimitive
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Geometric slack: coordinate/length differences below this are
    /// treated as coincidence (degenerate) rather than ordered.
    fn default_eps_geom() -> Self;
    /// Minimum separation required between any two disk radii.
    fn default_eps_radius() -> Self;
    /// Minimum separation required between disk center y-coordinates
    /// (checked in every rotated frame).
    fn default_eps_coord() -> Self;

    /// Lossy conversion from f64 (used when ingesting f64 file formats).
    fn from_f64_lossy(x: f64) -> Self;
    /// Widening/identity conversion to f64 (used for reporting and serialization).
    fn as_f64(self) -> f64;
}

impl Float for f64 {
    #[inline]
    fn default_eps_geom() -> f64 {
        1e-9
    }
    #[inline]
    fn default_eps_radius() -> f64 {
        1e-7
    }
    #[inline]
    fn default_eps_coord() -> f64 {
        1e-7
    }
    #[inline]
    fn from_f64_lossy(x: f64) -> f64 {
        x
    }
    #[inline]
    fn as_f64(self) -> f64 {
        self
    }
}

impl Float for f32 {
    #[inline]
    fn default_eps_geom() -> f32 {
        1e-4
    }
    #[inline]
    fn default_eps_radius() -> f32 {
        1e-3
    }
    #[inline]
    fn default_eps_coord() -> f32 {
        1e-3
    }
    #[inline]
    fn from_f64_lossy(x: f64) -> f32 {
        x as f32
    }
    #[inline]
    fn as_f64(self) -> f64 {
        self as f64
    }
}
