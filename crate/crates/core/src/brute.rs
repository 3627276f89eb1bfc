//! Brute-force oracles used by the test suites.
//!
//! Everything here trades speed for obviousness: dense sampling with
//! bisection refinement, linear scans. Production code never calls into
//! this module; tests compare against it.

use crate::arcs::{Arc, Sector};
use crate::geom::{Disk, Point};
use crate::scalar::Float;

/// Uncovered components of `arc` minus the union of `sectors`, found by
/// dense angle sampling with bisection refinement at the transitions.
/// Returns angle intervals in ascending order.
pub fn components_by_sampling<F: Float>(
    arc: &Arc<F>,
    sectors: &[Sector<F>],
    samples: usize,
) -> Vec<(F, F)> {
    if arc.is_empty() {
        return Vec::new();
    }
    let covered = |theta: F| -> bool {
        let p = arc.disk.boundary_point(theta);
        sectors.iter().any(|s| s.contains(p))
    };
    let n = samples.max(8);
    let span = arc.hi - arc.lo;
    let step = span / F::from_usize(n).unwrap();
    let theta_at = |i: usize| arc.lo + step * F::from_usize(i).unwrap();

    // Bisect a transition between grid neighbors down to ~1e-14 of span.
    let refine = |mut lo: F, mut hi: F| -> F {
        let lo_state = covered(lo);
        for _ in 0..48 {
            let mid = (lo + hi) / F::from_f64_lossy(2.0);
            if covered(mid) == lo_state {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (lo + hi) / F::from_f64_lossy(2.0)
    };

    let mut out = Vec::new();
    let mut run_start: Option<F> = None;
    let mut prev_state = covered(arc.lo);
    if !prev_state {
        run_start = Some(arc.lo);
    }
    for i in 1..=n {
        let t = if i == n { arc.hi } else { theta_at(i) };
        let state = covered(t);
        if state != prev_state {
            let boundary = refine(theta_at(i - 1), t);
            if state {
                // uncovered -> covered: close the run
                out.push((run_start.take().unwrap(), boundary));
            } else {
                run_start = Some(boundary);
            }
            prev_state = state;
        }
    }
    if let Some(s) = run_start {
        out.push((s, arc.hi));
    }
    out
}

/// Linear-scan rightward ray shooting over a set of arcs: the arc (and
/// distance) first hit by the ray from `q` toward +x, if any.
pub fn first_arc_right_scan<'a, F: Float, I>(arcs: I, q: Point<F>) -> Option<(&'a Arc<F>, F)>
where
    I: IntoIterator<Item = &'a Arc<F>>,
{
    let mut best: Option<(&Arc<F>, F)> = None;
    for a in arcs {
        if let Some(d) = a.dist_x(q) {
            match best {
                Some((_, bd)) if bd <= d => {}
                _ => best = Some((a, d)),
            }
        }
    }
    best
}

/// Membership of `p` in the union of the given sectors, by linear scan.
pub fn in_any_sector<F: Float>(sectors: &[Sector<F>], p: Point<F>) -> bool {
    sectors.iter().any(|s| s.contains(p))
}

/// Largest disk containing `q`, by linear scan.
pub fn largest_containing<'a, F: Float, I>(disks: I, q: Point<F>) -> Option<&'a Disk<F>>
where
    I: IntoIterator<Item = &'a Disk<F>>,
{
    let mut best: Option<&Disk<F>> = None;
    for d in disks {
        if d.contains(q) {
            match best {
                Some(b) if b.radius >= d.radius => {}
                _ => best = Some(d),
            }
        }
    }
    best
}

/// True iff `p` lies within `eps` of some disk's boundary circle.
pub fn near_any_boundary<F: Float>(disks: &[Disk<F>], p: Point<F>, eps: F) -> bool {
    disks.iter().any(|d| (d.center.dist(p) - d.radius).abs() <= eps)
}

/// Euclidean distance from `p` to the segment `a..b`.
pub fn dist_point_segment<F: Float>(p: Point<F>, a: Point<F>, b: Point<F>) -> F {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let len2 = dx * dx + dy * dy;
    if len2 <= F::zero() {
        return p.dist(a);
    }
    let t = (((p.x - a.x) * dx + (p.y - a.y) * dy) / len2).max(F::zero()).min(F::one());
    p.dist(Point::new(a.x + dx * t, a.y + dy * t))
}

/// True iff `p` lies within `band` of any edge (arc or radius) of any of
/// the given sectors. Used to discard probes whose membership is
/// tolerance-sensitive.
pub fn near_sector_boundary<F: Float>(sectors: &[Sector<F>], p: Point<F>, band: F) -> bool {
    let third = F::PI() / F::from_f64_lossy(3.0);
    sectors.iter().any(|s| {
        let d = &s.disk;
        if (d.center.dist(p) - d.radius).abs() <= band && d.center.dist(p) <= d.radius + band {
            let theta = d.angle_of(p);
            if theta.abs() <= third + band / d.radius {
                return true;
            }
        }
        dist_point_segment(p, d.center, d.boundary_point(third)) <= band
            || dist_point_segment(p, d.center, d.boundary_point(-third)) <= band
    })
}

/// A deterministic probe grid over the instance's bounding box, expanded
/// so some probes fall outside every disk. Grid offsets are irrational
/// fractions of the cell, keeping probes away from symmetric features
/// like exact center heights.
pub fn probe_grid<F: Float>(disks: &[Disk<F>], count: usize) -> Vec<Point<F>> {
    let mut lo = Point::new(F::from_f64_lossy(-1.0), F::from_f64_lossy(-1.0));
    let mut hi = Point::new(F::one(), F::one());
    for d in disks {
        lo.x = lo.x.min(d.center.x - d.radius);
        lo.y = lo.y.min(d.center.y - d.radius);
        hi.x = hi.x.max(d.center.x + d.radius);
        hi.y = hi.y.max(d.center.y + d.radius);
    }
    let pad = F::from_f64_lossy(2.0);
    (lo.x, lo.y, hi.x, hi.y) = (lo.x - pad, lo.y - pad, hi.x + pad, hi.y + pad);

    let side = (count as f64).sqrt().ceil() as usize;
    let side = side.max(2);
    let n = F::from_usize(side).unwrap();
    let (fx, fy) = (F::from_f64_lossy(0.381_966_011), F::from_f64_lossy(0.618_033_988));
    let mut out = Vec::with_capacity(side * side);
    for i in 0..side {
        for j in 0..side {
            let tx = (F::from_usize(i).unwrap() + fx) / n;
            let ty = (F::from_usize(j).unwrap() + fy) / n;
            out.push(Point::new(lo.x + (hi.x - lo.x) * tx, lo.y + (hi.y - lo.y) * ty));
        }
    }
    out
}

/// Sampled rightward ray distance to an arbitrary region given by a
/// membership predicate: smallest t > 0 with `inside(q + (t, 0))`,
/// scanned out to `x_max` and refined by bisection. `None` if the scan
/// never enters the region.
pub fn ray_dist_sampling<F: Float>(
    inside: impl Fn(Point<F>) -> bool,
    q: Point<F>,
    x_max: F,
    steps: usize,
) -> Option<F> {
    if inside(q) {
        return Some(F::zero());
    }
    let n = steps.max(16);
    let dt = x_max / F::from_usize(n).unwrap();
    let at = |t: F| Point::new(q.x + t, q.y);
    let mut prev = F::zero();
    for i in 1..=n {
        let t = dt * F::from_usize(i).unwrap();
        if inside(at(t)) {
            // refine the entry point
            let (mut lo, mut hi) = (prev, t);
            for _ in 0..48 {
                let mid = (lo + hi) / F::from_f64_lossy(2.0);
                if inside(at(mid)) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return Some((lo + hi) / F::from_f64_lossy(2.0));
        }
        prev = t;
    }
    None
}
