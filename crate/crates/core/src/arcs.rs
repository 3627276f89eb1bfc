//! Disk tripartition and the algebra of right-arc subarcs.
//!
//! Each disk is split into three 120-degree portions by the radii at
//! orientations pi/3, pi, -pi/3. This module models the right portion
//! (a sector) and its bounding arc, arc-minus-sector subtraction, the
//! two trimming rules that larger disks apply to smaller disks' arcs,
//! conjugate points, and the per-frame arc map the builders produce.
//!
//! Subarcs are angle intervals in [-pi/3, pi/3]; interval intersection
//! is exact in angle space, so the running intersection across many
//! trimming steps accumulates no coordinate rounding.

use crate::error::{Error, Result};
use crate::geom::{circle_crossings, segment_circle_crossings, Disk, Point, Tolerance};
use crate::scalar::Float;

/// The three map frames. Each frame answers rightward ray shooting after
/// the plane is rotated so that the frame's ray direction becomes +x.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Frame {
    /// Ray direction 0 (no rotation).
    Right,
    /// Ray direction +2pi/3; geometry is rotated by -2pi/3.
    Top,
    /// Ray direction -2pi/3; geometry is rotated by +2pi/3.
    Bottom,
}

impl Frame {
    pub const ALL: [Frame; 3] = [Frame::Right, Frame::Top, Frame::Bottom];

    /// The rotation applied to input geometry to bring this frame's ray
    /// direction onto +x.
    pub fn rotation<F: Float>(self) -> F {
        let two_thirds = F::FRAC_PI_3() * F::from_f64_lossy(2.0);
        match self {
            Frame::Right => F::zero(),
            Frame::Top => -two_thirds,
            Frame::Bottom => two_thirds,
        }
    }
}

impl std::fmt::Display for Frame {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Frame::Right => "right",
            Frame::Top => "top",
            Frame::Bottom => "bottom",
        })
    }
}

/// The right portion T_d of a disk: the closed 120-degree sector between
/// orientations -pi/3 and +pi/3, with its apex at the disk center.
#[derive(Debug, Clone, Copy)]
pub struct Sector<F> {
    pub disk: Disk<F>,
}

impl<F: Float> Sector<F> {
    #[inline]
    pub fn new(disk: Disk<F>) -> Self {
        Sector { disk }
    }

    /// Closed membership: inside the disk and within 60 degrees of the
    /// +x direction as seen from the center.
    #[inline]
    pub fn contains(&self, p: Point<F>) -> bool {
        self.disk.in_right_portion(p)
    }

    /// Rightward ray distance from `p` to this sector region, `None` if
    /// the ray misses it.
    pub fn dist_x(&self, p: Point<F>) -> Option<F> {
        if self.contains(p) {
            return Some(F::zero());
        }
        let d = &self.disk;
        let mut best: Option<F> = None;
        let mut consider = |x: F| {
            if x >= p.x {
                let dist = x - p.x;
                if best.map_or(true, |b| dist < b) {
                    best = Some(dist);
                }
            }
        };
        // The bounding arc at this height, if the height is within the
        // arc's band.
        let dy = p.y - d.center.y;
        let half_height = d.radius * F::from_f64_lossy(0.75).sqrt();
        if dy.abs() <= half_height {
            consider(d.center.x + (d.radius * d.radius - dy * dy).sqrt());
        }
        // The two radial edges; each spans a vertical band of height
        // r*sqrt(3)/2 on one side of the center.
        if dy >= -half_height && dy <= F::zero() {
            consider(d.center.x + (-dy) / F::from_f64_lossy(3.0).sqrt());
        }
        if dy >= F::zero() && dy <= half_height {
            consider(d.center.x + dy / F::from_f64_lossy(3.0).sqrt());
        }
        best
    }
}

/// A connected subarc of some disk's right arc, as an angle interval.
/// `lo > hi` encodes the canonical empty arc.
#[derive(Debug, Clone, Copy)]
pub struct Arc<F> {
    pub disk: Disk<F>,
    pub lo: F,
    pub hi: F,
}

impl<F: Float> Arc<F> {
    /// The full right arc A_d, spanning [-pi/3, pi/3].
    #[inline]
    pub fn full(disk: Disk<F>) -> Self {
        Arc { disk, lo: -F::FRAC_PI_3(), hi: F::FRAC_PI_3() }
    }

    /// The canonical empty arc for `disk`.
    #[inline]
    pub fn empty(disk: Disk<F>) -> Self {
        Arc { disk, lo: F::FRAC_PI_3(), hi: -F::FRAC_PI_3() }
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    /// Angular coincidence threshold for this arc: the geometric epsilon
    /// expressed as arc length, floored away from f64 resolution.
    #[inline]
    pub fn eps_angle(&self, tol: &Tolerance<F>) -> F {
        let floor = F::epsilon() * F::from_f64_lossy(32.0);
        (tol.eps_geom / self.disk.radius).max(floor)
    }

    #[inline]
    pub fn point_at(&self, theta: F) -> Point<F> {
        self.disk.boundary_point(theta)
    }

    /// Lower endpoint (smallest y; right arcs are y-monotone in theta).
    #[inline]
    pub fn bottom(&self) -> Point<F> {
        self.point_at(self.lo)
    }

    #[inline]
    pub fn top(&self) -> Point<F> {
        self.point_at(self.hi)
    }

    /// Rightward ray distance from `q` to this arc, `None` on a miss.
    /// The ray meets the owner circle's right half at a single height-
    /// determined point; it hits iff that point's angle is in range.
    pub fn dist_x(&self, q: Point<F>) -> Option<F> {
        if self.is_empty() {
            return None;
        }
        let d = &self.disk;
        let dy = q.y - d.center.y;
        if dy.abs() > d.radius {
            return None;
        }
        let x = d.center.x + (d.radius * d.radius - dy * dy).sqrt();
        if x < q.x {
            return None;
        }
        let theta = dy.atan2(x - d.center.x);
        if theta >= self.lo && theta <= self.hi {
            Some(x - q.x)
        } else {
            None
        }
    }
}

/// The full right arc of a disk; alias for [`Arc::full`].
#[inline]
pub fn right_arc<F: Float>(d: Disk<F>) -> Arc<F> {
    Arc::full(d)
}

/// Components of `a` minus the right sector of `s`, bottom to top.
///
/// Candidate split angles come from exact circle/circle and circle/edge
/// intersections; cells between candidates are classified by midpoint
/// membership, which also absorbs spurious candidates from grazing
/// contacts. Components shorter than the angular epsilon are dropped.
/// More than two surviving components contradicts the homothety of the
/// sectors and is reported as degenerate.
pub fn subtract_sector<F: Float>(
    a: &Arc<F>,
    s: &Sector<F>,
    tol: &Tolerance<F>,
) -> Result<Vec<Arc<F>>> {
    if a.is_empty() {
        return Ok(Vec::new());
    }
    let d = &a.disk;
    let d2 = &s.disk;
    let gap = d.center.dist(d2.center) - (d.radius + d2.radius);
    if gap > tol.eps_geom {
        return Ok(vec![*a]); // circles disjoint: the sector cannot touch the arc
    }

    let eps_ang = a.eps_angle(tol);
    let mut cuts: Vec<F> = Vec::with_capacity(6);
    let mut push = |theta: F| {
        if theta > a.lo + eps_ang && theta < a.hi - eps_ang {
            cuts.push(theta);
        }
    };

    // Crossings of the two circles that land on the sector's arc third.
    if let Some((p, q)) = circle_crossings(d, d2, tol)? {
        for cr in [p, q] {
            if cr.theta_b.abs() <= F::FRAC_PI_3() {
                push(cr.theta_a);
            }
        }
    }
    // Crossings of our circle with the sector's two radial edges.
    for upper in [false, true] {
        let ang = if upper { F::FRAC_PI_3() } else { -F::FRAC_PI_3() };
        let (sin, cos) = ang.sin_cos();
        let dir = Point::new(cos, sin);
        for (_, pt) in segment_circle_crossings(d2.center, dir, d2.radius, d) {
            push(d.angle_of(pt));
        }
    }

    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cuts.dedup_by(|x, y| (*x - *y).abs() <= eps_ang);

    // Classify each cell by its midpoint and collect uncovered runs.
    let mut bounds = Vec::with_capacity(cuts.len() + 2);
    bounds.push(a.lo);
    bounds.extend_from_slice(&cuts);
    bounds.push(a.hi);
    let half = F::from_f64_lossy(0.5);
    let mut out: Vec<Arc<F>> = Vec::new();
    let mut open: Option<F> = None;
    for w in bounds.windows(2) {
        let mid = (w[0] + w[1]) * half;
        let covered = s.contains(a.point_at(mid));
        match (covered, open) {
            (false, None) => open = Some(w[0]),
            (true, Some(start)) => {
                out.push(Arc { disk: *d, lo: start, hi: w[0] });
                open = None;
            }
            _ => {}
        }
    }
    if let Some(start) = open {
        out.push(Arc { disk: *d, lo: start, hi: a.hi });
    }
    out.retain(|c| c.hi - c.lo > eps_ang);

    if out.len() > 2 {
        return Err(Error::DegenerateInput(format!(
            "arc of disk {} minus sector of disk {} has {} components",
            d.id,
            d2.id,
            out.len()
        )));
    }
    Ok(out)
}

/// One trimming step: the subarc of `a` that survives against the larger
/// disk `d2`. With one remaining component (or none) that component is
/// the answer; with two, the component on the side of `a`'s center away
/// from `d2`'s center survives — top when `a`'s owner is centered higher
/// than `d2`, bottom otherwise.
pub fn apply_rule<F: Float>(a: &Arc<F>, d2: &Disk<F>, tol: &Tolerance<F>) -> Result<Arc<F>> {
    debug_assert!(d2.radius > a.disk.radius);
    let comps = subtract_sector(a, &Sector::new(*d2), tol)?;
    Ok(match comps.len() {
        0 => Arc::empty(a.disk),
        1 => comps[0],
        _ => {
            if a.disk.center.y > d2.center.y {
                comps[1]
            } else {
                comps[0]
            }
        }
    })
}

/// The other point of `owner`'s right arc on the vertical line through
/// `p`: reflection across the horizontal line through the center. Points
/// within the angular epsilon of the apex (theta = 0) have no usable
/// conjugate and are rejected.
pub fn conjugate_point<F: Float>(
    p: Point<F>,
    owner: &Disk<F>,
    tol: &Tolerance<F>,
) -> Result<Point<F>> {
    let theta = owner.angle_of(p);
    if theta.abs() * owner.radius <= tol.eps_geom {
        return Err(Error::DegenerateInput(format!(
            "conjugate of the apex point of disk {} is the point itself",
            owner.id
        )));
    }
    let two = F::from_f64_lossy(2.0);
    Ok(Point::new(p.x, two * owner.center.y - p.y))
}

/// Interval intersection of two subarcs of the same disk's right arc.
pub fn intersect_arcs<F: Float>(a: &Arc<F>, b: &Arc<F>) -> Result<Arc<F>> {
    if a.disk.id != b.disk.id {
        return Err(Error::ArcOwnerMismatch { a: a.disk.id, b: b.disk.id });
    }
    if a.is_empty() || b.is_empty() {
        return Ok(Arc::empty(a.disk));
    }
    let lo = a.lo.max(b.lo);
    let hi = a.hi.min(b.hi);
    if lo > hi {
        Ok(Arc::empty(a.disk))
    } else {
        Ok(Arc { disk: a.disk, lo, hi })
    }
}

/// A finished per-frame map: at most one surviving arc per disk, arcs
/// pairwise non-crossing (endpoint-on-interior contacts allowed).
#[derive(Debug, Clone)]
pub struct ArcMap<F> {
    pub frame: Frame,
    arcs: Vec<Arc<F>>, // sorted by disk id, no empties
}

impl<F: Float> ArcMap<F> {
    pub fn new(frame: Frame, mut arcs: Vec<Arc<F>>) -> Self {
        arcs.retain(|a| !a.is_empty());
        arcs.sort_by_key(|a| a.disk.id);
        debug_assert!(arcs.windows(2).all(|w| w[0].disk.id < w[1].disk.id));
        ArcMap { frame, arcs }
    }

    #[inline]
    pub fn arcs(&self) -> &[Arc<F>] {
        &self.arcs
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn arc_for(&self, disk_id: u64) -> Option<&Arc<F>> {
        self.arcs
            .binary_search_by_key(&disk_id, |a| a.disk.id)
            .ok()
            .map(|i| &self.arcs[i])
    }

    /// All transversally crossing arc pairs, by exact pairwise circle
    /// intersection. A crossing point strictly interior to both arcs
    /// (beyond the angular epsilon) is transversal; shared endpoints and
    /// endpoint-on-interior contacts are not counted.
    pub fn transversal_crossings(&self, tol: &Tolerance<F>) -> Result<Vec<(u64, u64)>> {
        let mut out = Vec::new();
        for i in 0..self.arcs.len() {
            for j in i + 1..self.arcs.len() {
                let a = &self.arcs[i];
                let b = &self.arcs[j];
                let Some((p, q)) = circle_crossings(&a.disk, &b.disk, tol)? else {
                    continue;
                };
                for cr in [p, q] {
                    let ea = a.eps_angle(tol);
                    let eb = b.eps_angle(tol);
                    let inside_a = cr.theta_a > a.lo + ea && cr.theta_a < a.hi - ea;
                    let inside_b = cr.theta_b > b.lo + eb && cr.theta_b < b.hi - eb;
                    if inside_a && inside_b {
                        out.push((a.disk.id, b.disk.id));
                        break;
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Rightward ray distance to a region or arc; `None` when the ray misses.
pub trait RayTarget<F: Float> {
    fn dist_x(&self, p: Point<F>) -> Option<F>;
}

impl<F: Float> RayTarget<F> for Arc<F> {
    fn dist_x(&self, p: Point<F>) -> Option<F> {
        Arc::dist_x(self, p)
    }
}

impl<F: Float> RayTarget<F> for Sector<F> {
    fn dist_x(&self, p: Point<F>) -> Option<F> {
        Sector::dist_x(self, p)
    }
}

/// Free-function form of [`RayTarget::dist_x`].
pub fn dist_x_to_region<F: Float, R: RayTarget<F>>(p: Point<F>, region: &R) -> Option<F> {
    region.dist_x(p)
}
