//! Basic planar primitives: points, disks, rotations, circle intersections.
//!
//! Circle–circle intersection is the one predicate the whole construction
//! leans on. It reports tangencies and coincident circles as degenerate
//! instead of guessing, so everything downstream can assume transversal
//! crossings.

use crate::error::{Error, Result};
use crate::scalar::Float;

/// A point in the plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point<F> {
    pub x: F,
    pub y: F,
}

impl<F: Float> Point<F> {
    #[inline]
    pub fn new(x: F, y: F) -> Self {
        Point { x, y }
    }

    #[inline]
    pub fn dist(self, other: Point<F>) -> F {
        self.dist2(other).sqrt()
    }

    #[inline]
    pub fn dist2(self, other: Point<F>) -> F {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    /// Rotate about the origin by `angle` radians (counterclockwise).
    #[inline]
    pub fn rotated(self, angle: F) -> Point<F> {
        let (s, c) = angle.sin_cos();
        Point::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }
}

/// A closed disk with a caller-assigned id.
///
/// Ids are stable through rotation and serialization; all query answers
/// are reported in terms of them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disk<F> {
    pub id: u64,
    pub center: Point<F>,
    pub radius: F,
}

impl<F: Float> Disk<F> {
    #[inline]
    pub fn new(id: u64, center: Point<F>, radius: F) -> Self {
        Disk { id, center, radius }
    }

    #[inline]
    pub fn contains(&self, p: Point<F>) -> bool {
        p.dist2(self.center) <= self.radius * self.radius
    }

    /// The point on the boundary at angle `theta` (measured from the center,
    /// zero pointing right, counterclockwise positive).
    #[inline]
    pub fn boundary_point(&self, theta: F) -> Point<F> {
        let (s, c) = theta.sin_cos();
        Point::new(self.center.x + self.radius * c, self.center.y + self.radius * s)
    }

    /// Angle of `p` as seen from the center.
    #[inline]
    pub fn angle_of(&self, p: Point<F>) -> F {
        (p.y - self.center.y).atan2(p.x - self.center.x)
    }

    /// True iff `q` lies in the right part of the disk: the closed
    /// 120-degree sector between the radii at orientations -pi/3 and
    /// +pi/3. Equivalently, q is in the disk and within 60 degrees of
    /// the +x direction as seen from the center.
    #[inline]
    pub fn in_right_portion(&self, q: Point<F>) -> bool {
        let wx = q.x - self.center.x;
        let wy = q.y - self.center.y;
        let n2 = wx * wx + wy * wy;
        if n2 > self.radius * self.radius {
            return false;
        }
        // angle(w) in [-60deg, 60deg]  <=>  w.x >= |w|/2, squared
        let two = F::from_f64_lossy(2.0);
        wx >= F::zero() && (two * wx) * (two * wx) >= n2
    }
}

/// Tolerances used by predicates and validation.
#[derive(Debug, Clone, Copy)]
pub struct Tolerance<F> {
    /// Geometric coincidence slack (lengths, coordinates, sliver pruning).
    pub eps_geom: F,
    /// Minimum radius separation accepted by validation.
    pub eps_radius: F,
    /// Minimum center-y separation (per rotated frame) accepted by validation.
    pub eps_coord: F,
}

impl<F: Float> Default for Tolerance<F> {
    fn default() -> Self {
        Tolerance {
            eps_geom: F::default_eps_geom(),
            eps_radius: F::default_eps_radius(),
            eps_coord: F::default_eps_coord(),
        }
    }
}

/// One transversal crossing of two circles, with the crossing angle as
/// seen from each center.
#[derive(Debug, Clone, Copy)]
pub struct CircleCrossing<F> {
    pub point: Point<F>,
    /// Angle of `point` around the first circle's center.
    pub theta_a: F,
    /// Angle of `point` around the second circle's center.
    pub theta_b: F,
}

/// Intersect two circle boundaries.
///
/// Returns `None` when the circles are disjoint or nested with clearance,
/// the two crossings otherwise. Tangencies (internal or external) and
/// coincident circles are reported as [`Error::DegenerateInput`].
///
/// The first crossing returned is the one to the left of the directed
/// line from `a.center` to `b.center`.
pub fn circle_crossings<F: Float>(
    a: &Disk<F>,
    b: &Disk<F>,
    tol: &Tolerance<F>,
) -> Result<Option<(CircleCrossing<F>, CircleCrossing<F>)>> {
    let d2 = a.center.dist2(b.center);
    let d = d2.sqrt();
    let sum = a.radius + b.radius;
    let diff = (a.radius - b.radius).abs();

    if d <= tol.eps_geom && diff <= tol.eps_geom {
        return Err(Error::DegenerateInput(format!(
            "circles {} and {} coincide",
            a.id, b.id
        )));
    }
    if (d - sum).abs() <= tol.eps_geom {
        return Err(Error::DegenerateInput(format!(
            "circles {} and {} are externally tangent",
            a.id, b.id
        )));
    }
    if (d - diff).abs() <= tol.eps_geom {
        return Err(Error::DegenerateInput(format!(
            "circles {} and {} are internally tangent",
            a.id, b.id
        )));
    }
    if d > sum || d < diff {
        return Ok(None);
    }

    // Standard two-circle intersection: foot of the radical axis at
    // distance `m` along a->b, crossings offset by `h` perpendicular.
    let m = (d2 + a.radius * a.radius - b.radius * b.radius) / (d + d);
    let h2 = a.radius * a.radius - m * m;
    if h2 <= F::zero() {
        // Numerically grazing; the tangency guards above should have
        // caught anything this close.
        return Err(Error::DegenerateInput(format!(
            "circles {} and {} graze within precision",
            a.id, b.id
        )));
    }
    let h = h2.sqrt();
    let ux = (b.center.x - a.center.x) / d;
    let uy = (b.center.y - a.center.y) / d;
    let foot = Point::new(a.center.x + m * ux, a.center.y + m * uy);
    // +90deg rotation of (ux, uy) is (-uy, ux): the left side.
    let left = Point::new(foot.x - h * uy, foot.y + h * ux);
    let right = Point::new(foot.x + h * uy, foot.y - h * ux);
    let mk = |p: Point<F>| CircleCrossing {
        point: p,
        theta_a: a.angle_of(p),
        theta_b: b.angle_of(p),
    };
    Ok(Some((mk(left), mk(right))))
}

/// Intersect the segment {origin + t·dir | 0 ≤ t ≤ t_max} (dir a unit
/// vector) with the boundary circle of `d`. Returns the parameters and
/// points, at most two, in ascending t. Grazing contacts are returned as
/// regular candidates; callers that classify regions by midpoint sampling
/// absorb them, callers that need transversality must check separately.
pub(crate) fn segment_circle_crossings<F: Float>(
    origin: Point<F>,
    dir: Point<F>,
    t_max: F,
    d: &Disk<F>,
) -> Vec<(F, Point<F>)> {
    // |origin + t·dir − c|² = r², with |dir| = 1.
    let wx = origin.x - d.center.x;
    let wy = origin.y - d.center.y;
    let b = wx * dir.x + wy * dir.y;
    let c = wx * wx + wy * wy - d.radius * d.radius;
    let disc = b * b - c;
    if disc <= F::zero() {
        return Vec::new();
    }
    let root = disc.sqrt();
    let mut out = Vec::new();
    for t in [-b - root, -b + root] {
        if t >= F::zero() && t <= t_max {
            out.push((t, Point::new(origin.x + t * dir.x, origin.y + t * dir.y)));
        }
    }
    out
}
