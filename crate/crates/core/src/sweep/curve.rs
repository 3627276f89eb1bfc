//! Curves handled by the sweep: right-arc pieces and straight segments.
//!
//! Every curve is y-monotone and single-valued in x per height — arc
//! pieces live on the right third of their circle, segments are radial
//! edges sloped at ±60 degrees — so the sweep status is a total x-order
//! at any height.

use crate::error::{Error, Result};
use crate::geom::{circle_crossings, segment_circle_crossings, Disk, Point, Tolerance};
use crate::scalar::Float;

#[derive(Debug, Clone, Copy)]
pub enum CurveGeom<F> {
    /// Piece of a disk's right arc; `lo < hi` within [-pi/3, pi/3], so
    /// the lower endpoint is at angle `lo`.
    Arc { disk: Disk<F>, lo: F, hi: F },
    /// Straight segment, stored with `a` the lower endpoint (a.y < b.y).
    Seg { a: Point<F>, b: Point<F> },
}

/// A sweep participant. `family` separates the two input collections
/// (the pair being overlaid); `up` is the boundary chain direction of
/// the source region — the interior lies west of an upward edge — and
/// `tag` indexes the caller's bookkeeping arrays.
#[derive(Debug, Clone, Copy)]
pub struct Curve<F> {
    pub geom: CurveGeom<F>,
    pub family: u8,
    pub up: bool,
    pub source: u64,
    pub tag: u32,
}

impl<F: Float> Curve<F> {
    pub fn arc_piece(disk: Disk<F>, lo: F, hi: F, family: u8, tag: u32) -> Self {
        debug_assert!(lo < hi);
        Curve { geom: CurveGeom::Arc { disk, lo, hi }, family, up: true, source: disk.id, tag }
    }

    /// Segment from chain-directed endpoints; stores them y-normalized
    /// and remembers the direction in `up`.
    pub fn seg(p0: Point<F>, p1: Point<F>, source: u64, family: u8, tag: u32) -> Self {
        let up = p1.y > p0.y;
        let (a, b) = if up { (p0, p1) } else { (p1, p0) };
        Curve { geom: CurveGeom::Seg { a, b }, family, up, source, tag }
    }

    /// Sweep span: the closed y-interval the curve occupies.
    pub fn y_range(&self) -> (F, F) {
        match self.geom {
            CurveGeom::Arc { disk, lo, hi } => {
                (disk.center.y + disk.radius * lo.sin(), disk.center.y + disk.radius * hi.sin())
            }
            CurveGeom::Seg { a, b } => (a.y, b.y),
        }
    }

    /// Lower endpoint (the point where the sweep first meets the curve).
    pub fn lower_point(&self) -> Point<F> {
        match self.geom {
            CurveGeom::Arc { disk, lo, .. } => disk.boundary_point(lo),
            CurveGeom::Seg { a, .. } => a,
        }
    }

    /// x-coordinate at height `y`; `y` is clamped into the curve's span,
    /// so calls at event heights on the boundary are safe.
    pub fn x_at(&self, y: F) -> F {
        match self.geom {
            CurveGeom::Arc { disk, .. } => {
                let dy = (y - disk.center.y).max(-disk.radius).min(disk.radius);
                disk.center.x + (disk.radius * disk.radius - dy * dy).sqrt()
            }
            CurveGeom::Seg { a, b } => {
                if b.y == a.y {
                    return a.x;
                }
                let t = ((y - a.y) / (b.y - a.y)).max(F::zero()).min(F::one());
                a.x + (b.x - a.x) * t
            }
        }
    }

    /// dx/dy at height `y`, used to break x-ties at insertion: of two
    /// curves through one point, the one with the smaller slope lies
    /// west just above it.
    pub fn slope_at(&self, y: F) -> F {
        match self.geom {
            CurveGeom::Arc { disk, .. } => {
                let dy = (y - disk.center.y).max(-disk.radius).min(disk.radius);
                let dx = (disk.radius * disk.radius - dy * dy).sqrt();
                if dx <= F::zero() {
                    // vertical tangent; sign carries which way it bends
                    return -dy.signum() * F::from_f64_lossy(1e12);
                }
                -dy / dx
            }
            CurveGeom::Seg { a, b } => (b.x - a.x) / (b.y - a.y),
        }
    }

    /// For an arc piece, the angle of a point known to lie on it.
    pub fn angle_of(&self, p: Point<F>) -> F {
        match self.geom {
            CurveGeom::Arc { disk, .. } => disk.angle_of(p),
            CurveGeom::Seg { .. } => unreachable!("angle_of on a segment"),
        }
    }
}

/// Transversal crossing points of two curves, restricted to the open
/// overlap of their y-spans. Tangential contacts are rejected: the
/// sweep cannot order curves through them.
pub fn curve_crossings<F: Float>(
    c1: &Curve<F>,
    c2: &Curve<F>,
    tol: &Tolerance<F>,
) -> Result<Vec<Point<F>>> {
    let (lo1, hi1) = c1.y_range();
    let (lo2, hi2) = c2.y_range();
    let (ylo, yhi) = (lo1.max(lo2), hi1.min(hi2));
    if ylo >= yhi {
        return Ok(Vec::new());
    }
    let in_window = |p: &Point<F>| p.y > ylo && p.y < yhi;

    let mut out = Vec::new();
    match (&c1.geom, &c2.geom) {
        (CurveGeom::Arc { disk: d1, lo: a1, hi: b1 }, CurveGeom::Arc { disk: d2, lo: a2, hi: b2 }) => {
            if let Some((p, q)) = circle_crossings(d1, d2, tol)? {
                for cr in [p, q] {
                    if cr.theta_a >= *a1
                        && cr.theta_a <= *b1
                        && cr.theta_b >= *a2
                        && cr.theta_b <= *b2
                        && in_window(&cr.point)
                    {
                        out.push(cr.point);
                    }
                }
            }
        }
        (CurveGeom::Seg { .. }, CurveGeom::Arc { .. }) => {
            return curve_crossings(c2, c1, tol);
        }
        (CurveGeom::Arc { disk, lo, hi }, CurveGeom::Seg { a, b }) => {
            let len = a.dist(*b);
            if len <= tol.eps_geom {
                return Ok(Vec::new());
            }
            let dir = Point::new((b.x - a.x) / len, (b.y - a.y) / len);
            let hits = segment_circle_crossings(*a, dir, len, disk);
            if hits.len() == 2 && (hits[1].0 - hits[0].0).abs() <= tol.eps_geom {
                return Err(Error::DegenerateInput(format!(
                    "segment tangent to circle of disk {}",
                    disk.id
                )));
            }
            for (_, p) in hits {
                let theta = disk.angle_of(p);
                if theta >= *lo && theta <= *hi && in_window(&p) {
                    out.push(p);
                }
            }
        }
        (CurveGeom::Seg { a: a1, b: b1 }, CurveGeom::Seg { a: a2, b: b2 }) => {
            let d1 = Point::new(b1.x - a1.x, b1.y - a1.y);
            let d2 = Point::new(b2.x - a2.x, b2.y - a2.y);
            let denom = d1.x * d2.y - d1.y * d2.x;
            let scale = (d1.x.abs() + d1.y.abs()) * (d2.x.abs() + d2.y.abs());
            if denom.abs() <= scale * F::epsilon() * F::from_f64_lossy(64.0) {
                // Parallel: a collinear overlap cannot be swept.
                let cross = (a2.x - a1.x) * d1.y - (a2.y - a1.y) * d1.x;
                let d1len = (d1.x * d1.x + d1.y * d1.y).sqrt();
                if cross.abs() <= tol.eps_geom * d1len && yhi - ylo > tol.eps_geom {
                    return Err(Error::DegenerateInput(
                        "collinear overlapping edges".into(),
                    ));
                }
                return Ok(Vec::new());
            }
            let t = ((a2.x - a1.x) * d2.y - (a2.y - a1.y) * d2.x) / denom;
            let p = Point::new(a1.x + d1.x * t, a1.y + d1.y * t);
            if in_window(&p) {
                out.push(p);
            }
        }
    }
    out.sort_by(|p, q| p.y.partial_cmp(&q.y).unwrap());
    Ok(out)
}
