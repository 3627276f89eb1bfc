//! Rightward ray shooting over a finished arc map in O(log n)
//! comparisons and linear space.
//!
//! The arcs of one map are y-monotone and pairwise non-crossing, so a
//! horizontal line meets them in a left-to-right order that changes
//! only where an arc begins or ends. Those endpoint heights cut the
//! plane into slabs; inside one slab the order is fixed. The build
//! replays an upward sweep once, inserting each arc at its bottom
//! endpoint and removing it at its top, and freezes the order after
//! every event into a [`PersistentOrder`] version — one version per
//! slab, O(1) new nodes per event. A query binary-searches its slab
//! among the boundary heights, then descends that slab's frozen tree
//! comparing arc x-positions against the query point at the query's
//! own height.

use crate::arcs::{Arc, ArcMap};
use crate::error::{Error, Result};
use crate::geom::{Point, Tolerance};
use crate::pslab::PersistentOrder;
use crate::scalar::Float;

/// Frozen slab structure for one arc map.
#[derive(Debug)]
pub struct Locator<F> {
    arcs: Vec<Arc<F>>,
    /// Circle coordinates of each arc, packed separately so the query
    /// descent touches 24 bytes per visited node instead of a full
    /// [`Arc`] record; at large n the descent is cache-miss-bound.
    hot: Vec<HotArc<F>>,
    /// Ascending arc-endpoint heights; slab `i` spans
    /// `boundaries[i-1] .. boundaries[i]` and maps to version `i`.
    boundaries: Vec<F>,
    order: PersistentOrder,
}

#[derive(Debug, Clone, Copy)]
struct HotArc<F> {
    cx: F,
    cy: F,
    r: F,
}

fn pack_hot<F: Float>(arcs: &[Arc<F>]) -> Vec<HotArc<F>> {
    arcs.iter()
        .map(|a| HotArc { cx: a.disk.center.x, cy: a.disk.center.y, r: a.disk.radius })
        .collect()
}

/// X-position of the arc at height `y`. Right arcs keep their polar
/// angle within sixty degrees of the positive x-axis, so the crossing
/// is always on the + branch of the circle equation.
fn arc_x_at<F: Float>(a: &Arc<F>, y: F) -> F {
    let d = &a.disk;
    let dy = (y - d.center.y).max(-d.radius).min(d.radius);
    d.center.x + (d.radius * d.radius - dy * dy).sqrt()
}

fn hot_x_at<F: Float>(h: &HotArc<F>, y: F) -> F {
    let dy = (y - h.cy).max(-h.r).min(h.r);
    h.cx + (h.r * h.r - dy * dy).sqrt()
}

/// Sweep the map's arc endpoints bottom to top and freeze the slab
/// order at every step.
///
/// Fails with [`Error::DegenerateInput`] when two endpoint heights
/// coincide within `eps_geom`: the slab between them would be too thin
/// to order reliably.
pub fn build_locator<F: Float>(m: &ArcMap<F>, tol: &Tolerance<F>) -> Result<Locator<F>> {
    let arcs: Vec<Arc<F>> = m.arcs().to_vec();
    let mut events: Vec<(F, bool, u32)> = Vec::with_capacity(2 * arcs.len());
    for (i, a) in arcs.iter().enumerate() {
        events.push((a.bottom().y, true, i as u32));
        events.push((a.top().y, false, i as u32));
    }
    events.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
    for w in events.windows(2) {
        if w[1].0 - w[0].0 <= tol.eps_geom {
            return Err(Error::DegenerateInput(format!(
                "arc endpoints of disks {} and {} share height {} within tolerance",
                arcs[w[0].2 as usize].disk.id,
                arcs[w[1].2 as usize].disk.id,
                w[0].0.as_f64(),
            )));
        }
    }

    let mut order = PersistentOrder::new(0x51ab_07de);
    order.snapshot(); // version 0: below every arc, empty
    for (j, &(y, is_insert, idx)) in events.iter().enumerate() {
        if is_insert {
            // Position the arc by comparing x at the midpoint of the
            // slab just above this event, where every arc present
            // genuinely spans the slab. An insert always has an event
            // above it: its own arc's top endpoint.
            let mid = (y + events[j + 1].0) * F::from_f64_lossy(0.5);
            let xa = arc_x_at(&arcs[idx as usize], mid);
            order.insert(idx, |other| xa < arc_x_at(&arcs[other as usize], mid));
        } else {
            order.remove(idx);
        }
        order.snapshot();
    }
    let boundaries = events.into_iter().map(|e| e.0).collect();
    let hot = pack_hot(&arcs);
    Ok(Locator { arcs, hot, boundaries, order })
}

impl<F: Float> Locator<F> {
    /// Serialization view: arcs, slab boundaries, frozen order.
    pub(crate) fn parts(&self) -> (&[Arc<F>], &[F], &PersistentOrder) {
        (&self.arcs, &self.boundaries, &self.order)
    }

    /// Reassemble from serialized parts; inverse of [`Self::parts`].
    pub(crate) fn from_parts(
        arcs: Vec<Arc<F>>,
        boundaries: Vec<F>,
        order: PersistentOrder,
    ) -> Locator<F> {
        let hot = pack_hot(&arcs);
        Locator { arcs, hot, boundaries, order }
    }

    /// Id of the disk whose arc the rightward ray from `q` hits first,
    /// if any. Points exactly on a slab boundary resolve to the slab
    /// above.
    pub fn first_arc_right(&self, q: Point<F>) -> Option<u64> {
        self.first_arc_right_counted(q).0
    }

    /// Same, also counting comparisons: slab binary-search probes plus
    /// tree-descent x-comparisons.
    pub fn first_arc_right_counted(&self, q: Point<F>) -> (Option<u64>, usize) {
        let mut comps = 0usize;
        let mut lo = 0usize;
        let mut hi = self.boundaries.len();
        while lo < hi {
            comps += 1;
            let mid = (lo + hi) / 2;
            if self.boundaries[mid] <= q.y {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        let hit = self
            .order
            .successor(lo, |i| hot_x_at(&self.hot[i as usize], q.y) > q.x, &mut comps);
        (hit.map(|i| self.arcs[i as usize].disk.id), comps)
    }

    /// Number of stored entries — persistent tree nodes, version
    /// roots, slab boundaries, and the packed coordinate table — for
    /// space accounting.
    pub fn entry_count(&self) -> usize {
        self.order.node_count() + self.order.version_count() + self.boundaries.len() + self.hot.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }
}
