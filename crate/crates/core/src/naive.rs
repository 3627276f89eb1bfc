//! Quadratic reference construction of the right-arc map.
//!
//! For every disk d, the surviving arc is the interval intersection of
//! the trimming-rule results of d against each strictly larger disk,
//! each rule evaluated on d's full right arc. This is the construction
//! the divide-and-conquer builder is checked against.

use crate::arcs::{apply_rule, intersect_arcs, Arc, ArcMap, Frame};
use crate::error::Result;
use crate::geom::{Disk, Point, Tolerance};
use crate::scalar::Float;
use crate::validate::ensure_valid;

/// Build the right-frame map by pairwise rule application; O(n^2).
pub fn build_naive<F: Float>(disks: &[Disk<F>], tol: &Tolerance<F>) -> Result<ArcMap<F>> {
    ensure_valid(disks, tol)?;
    frame_map_naive(disks, Frame::Right, tol)
}

/// Same construction on pre-validated, pre-rotated disks; tags the
/// output with `frame` without rotating anything itself.
pub(crate) fn frame_map_naive<F: Float>(
    disks: &[Disk<F>],
    frame: Frame,
    tol: &Tolerance<F>,
) -> Result<ArcMap<F>> {
    // Largest first, so each disk only looks at the prefix before it.
    let mut order: Vec<usize> = (0..disks.len()).collect();
    order.sort_by(|&i, &j| disks[j].radius.partial_cmp(&disks[i].radius).unwrap());

    let mut arcs = Vec::with_capacity(disks.len());
    for (rank, &i) in order.iter().enumerate() {
        let d = disks[i];
        let full = Arc::full(d);
        let mut acc = full;
        // Deliberately bare: every larger disk gets a rule application,
        // with no distance prefilter and no early exit on empty. This
        // builder is the reference; its cost is meant to be plainly
        // quadratic so the recursive builder has something to beat.
        for &j in &order[..rank] {
            let kept = apply_rule(&full, &disks[j], tol)?;
            acc = intersect_arcs(&acc, &kept)?;
        }
        if !acc.is_empty() {
            arcs.push(acc);
        }
    }
    Ok(ArcMap::new(frame, arcs))
}

/// Reference three-frame query by linear scan over map arcs: for each
/// frame, rotate q, take the first arc hit by the rightward ray, and
/// keep the candidate's disk if it actually contains q; the winner is
/// the largest such candidate.
pub fn query_linear<F: Float>(
    maps: &[ArcMap<F>; 3],
    disks: &[Disk<F>],
    q: Point<F>,
) -> Option<Disk<F>> {
    let mut best: Option<Disk<F>> = None;
    for m in maps {
        let rq = q.rotated(m.frame.rotation::<F>());
        let mut hit: Option<(F, u64)> = None;
        for a in m.arcs() {
            if let Some(dist) = a.dist_x(rq) {
                if hit.map_or(true, |(h, _)| dist < h) {
                    hit = Some((dist, a.disk.id));
                }
            }
        }
        let Some((_, id)) = hit else { continue };
        let Some(d) = disks.iter().find(|d| d.id == id) else { continue };
        if d.contains(q) && best.map_or(true, |b| d.radius > b.radius) {
            best = Some(*d);
        }
    }
    best
}

/// The three frame maps of an instance, built naively. Each frame's map
/// is built over a copy of the instance with centers rotated into that
/// frame; arcs stay in rotated coordinates.
pub fn build_naive_frames<F: Float>(
    disks: &[Disk<F>],
    tol: &Tolerance<F>,
) -> Result<[ArcMap<F>; 3]> {
    ensure_valid(disks, tol)?;
    let mut maps = Vec::with_capacity(3);
    for frame in Frame::ALL {
        let rot = frame.rotation::<F>();
        let rotated: Vec<Disk<F>> =
            disks.iter().map(|d| Disk::new(d.id, d.center.rotated(rot), d.radius)).collect();
        maps.push(frame_map_naive(&rotated, frame, tol)?);
    }
    Ok(maps.try_into().unwrap())
}
