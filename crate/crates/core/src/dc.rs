//! Divide-and-conquer map construction.
//!
//! The disks are split at the median radius. The smaller half's map is
//! built recursively; merging it with the larger half organizes the
//! larger disks into a balanced tree over their center heights. For each
//! surviving small arc, the larger disks strictly above its center
//! decompose into O(log n) canonical subtrees, and one sweep per subtree
//! keeps the lowest piece of the arc outside that subtree's sector
//! union. Disks strictly below are handled the same way mirrored,
//! keeping the highest piece. Intersecting every kept piece with the arc
//! from the recursive call reproduces, arc for arc, what the quadratic
//! rule fold computes.
//!
//! Tree levels are processed bottom-up one at a time: a level's sector
//! unions are merged from the previous level's, then the previous
//! level's are dropped, so at most two levels are ever live and peak
//! memory stays linear in the number of disks.

use crate::arcs::{intersect_arcs, Arc, ArcMap, Frame, Sector};
use crate::error::Result;
use crate::geom::{Disk, Point, Tolerance};
use crate::naive::frame_map_naive;
use crate::scalar::Float;
use crate::sweep::curve::Curve;
use crate::sweep::kernel::{sweep, SweepMode};
use crate::union::{merge_unions, SectorUnion};
use crate::validate::ensure_valid;
use std::collections::BTreeMap;
use std::ops::Range;

/// Which side of a task's center a group of larger disks lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Above,
    Below,
}

/// One smaller-half arc being trimmed against the larger half.
#[derive(Debug, Clone)]
pub struct TrimTask<F> {
    pub disk: Disk<F>,
    /// The arc surviving the recursive build over the smaller half.
    pub a_minus: Arc<F>,
    /// Running intersection of the per-subtree kept pieces. Every piece
    /// is computed from the full right arc, not from this accumulator,
    /// so the result is independent of the order subtrees are visited.
    pub acc: Arc<F>,
}

impl<F: Float> TrimTask<F> {
    pub fn new(a_minus: Arc<F>) -> Self {
        let disk = a_minus.disk;
        TrimTask { disk, a_minus, acc: Arc::full(disk) }
    }
}

/// Implicit balanced tree over the larger-half disks sorted by center
/// height. Node 1 is the root; node `k`'s children are `2k` and `2k+1`;
/// leaves are padded to a power of two. Padding leaves are never
/// materialized: a canonical cover of a range of real leaves consists of
/// fully real nodes only.
#[derive(Debug)]
pub struct YTree<F> {
    ys: Vec<F>,
    size: usize,
}

impl<F: Float> YTree<F> {
    /// `ys` must be strictly increasing; validation rejects center
    /// height ties up front, so sorted real instances always qualify.
    pub fn new(ys: Vec<F>) -> Self {
        debug_assert!(ys.windows(2).all(|w| w[0] < w[1]));
        let size = ys.len().next_power_of_two().max(1);
        YTree { ys, size }
    }

    pub fn len(&self) -> usize {
        self.ys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ys.is_empty()
    }

    /// Depth of the leaf level; the root sits at depth 0.
    pub fn leaf_depth(&self) -> u32 {
        self.size.ilog2()
    }

    /// Half-open range of leaf indices below `node`.
    pub fn leaf_range(&self, node: usize) -> Range<usize> {
        let d = node.ilog2();
        let width = self.size >> d;
        let lo = (node - (1 << d)) * width;
        lo..lo + width
    }

    /// Leaf indices of the disks strictly above or strictly below
    /// height `y`. Above is a suffix, below a prefix, since leaves are
    /// in ascending height order.
    pub fn side_range(&self, y: F, side: Side) -> Range<usize> {
        match side {
            Side::Above => self.ys.partition_point(|&v| v <= y)..self.ys.len(),
            Side::Below => 0..self.ys.partition_point(|&v| v < y),
        }
    }

    /// Canonical cover: O(log n) nodes whose leaf ranges partition
    /// `range`, listed in leaf order.
    pub fn cover(&self, range: Range<usize>) -> Vec<usize> {
        let mut out = Vec::new();
        self.cover_into(range, &mut out);
        out
    }

    fn cover_into(&self, range: Range<usize>, out: &mut Vec<usize>) {
        out.clear();
        let mut l = range.start + self.size;
        let mut r = range.end + self.size;
        while l < r {
            if l & 1 == 1 {
                out.push(l);
                l += 1;
            }
            if r & 1 == 1 {
                r -= 1;
                out.push(r);
            }
            l >>= 1;
            r >>= 1;
        }
        out.sort_unstable_by_key(|&n| self.leaf_range(n).start);
    }
}

/// Materialized node-to-task assignment: for each task, the canonical
/// nodes covering the larger disks on `side` of its center, grouped by
/// node. The level-by-level build re-derives the same assignment one
/// depth at a time instead of storing it, to keep memory linear; this
/// form exists for callers that want the whole picture at once.
pub fn assign_buckets<F: Float>(
    tree: &YTree<F>,
    tasks: &[TrimTask<F>],
    side: Side,
) -> Vec<(usize, Vec<usize>)> {
    let mut buckets: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (ti, t) in tasks.iter().enumerate() {
        for node in tree.cover(tree.side_range(t.disk.center.y, side)) {
            buckets.entry(node).or_default().push(ti);
        }
    }
    buckets.into_iter().collect()
}

/// For each arc, the lowest piece of `arc \ u`: the piece containing the
/// arc's bottom endpoint if that endpoint lies outside `u`, otherwise
/// the piece starting at the first boundary contact above it (empty if
/// there is none). All arcs are swept together in one pass; each arc
/// retires after at most two boundary contacts, so the pass costs
/// O((k + s) log) for k arcs and s boundary edges rather than k x s.
pub fn lowest_escape_subarcs<F: Float>(
    arcs: &[Arc<F>],
    u: &SectorUnion<F>,
    tol: &Tolerance<F>,
) -> Result<Vec<Arc<F>>> {
    lowest_escape_inner(arcs, u, tol).map(|(out, _)| out)
}

/// Mirror image of [`lowest_escape_subarcs`]: the piece containing the
/// top endpoint, or starting at the first boundary contact below it.
pub fn highest_escape_subarcs<F: Float>(
    arcs: &[Arc<F>],
    u: &SectorUnion<F>,
    tol: &Tolerance<F>,
) -> Result<Vec<Arc<F>>> {
    highest_escape_inner(arcs, u, tol).map(|(out, _)| out)
}

fn lowest_escape_inner<F: Float>(
    arcs: &[Arc<F>],
    u: &SectorUnion<F>,
    tol: &Tolerance<F>,
) -> Result<(Vec<Arc<F>>, usize)> {
    if u.is_empty() {
        return Ok((arcs.to_vec(), 0));
    }
    let mut curves = Vec::new();
    let mut owner = Vec::new(); // arc-family curve index -> arcs index
    for (i, a) in arcs.iter().enumerate() {
        if a.is_empty() {
            continue;
        }
        curves.push(Curve::arc_piece(a.disk, a.lo, a.hi, 0, curves.len() as u32));
        owner.push(i);
    }
    for e in u.edges() {
        curves.push(e.to_curve(1, curves.len() as u32));
    }
    let swept = sweep(&curves, &SweepMode::arc_trim(), tol)?;

    let mut out: Vec<Arc<F>> = arcs.iter().map(|a| Arc::empty(a.disk)).collect();
    for (ci, &ai) in owner.iter().enumerate() {
        let a = &arcs[ai];
        let hits = &swept.crossings[ci];
        let clamp = |p: Point<F>| a.disk.angle_of(p).max(a.lo).min(a.hi);
        let kept = if swept.start_inside[ci] {
            match hits.len() {
                0 => None,
                1 => Some((clamp(hits[0]), a.hi)),
                _ => Some((clamp(hits[0]), clamp(hits[1]))),
            }
        } else if hits.is_empty() {
            Some((a.lo, a.hi))
        } else {
            Some((a.lo, clamp(hits[0])))
        };
        if let Some((lo, hi)) = kept {
            if hi - lo > a.eps_angle(tol) {
                out[ai] = Arc { disk: a.disk, lo, hi };
            }
        }
    }
    Ok((out, swept.events))
}

fn highest_escape_inner<F: Float>(
    arcs: &[Arc<F>],
    u: &SectorUnion<F>,
    tol: &Tolerance<F>,
) -> Result<(Vec<Arc<F>>, usize)> {
    if u.is_empty() {
        return Ok((arcs.to_vec(), 0));
    }
    let flipped: Vec<Arc<F>> = arcs.iter().map(mirror_arc).collect();
    let (out, events) = lowest_escape_inner(&flipped, &u.mirrored(), tol)?;
    Ok((out.iter().map(mirror_arc).collect(), events))
}

fn mirror_disk<F: Float>(d: &Disk<F>) -> Disk<F> {
    Disk::new(d.id, Point::new(d.center.x, -d.center.y), d.radius)
}

/// Reflecting across the x axis sends the angle interval [lo, hi] to
/// [-hi, -lo]; the right portion is symmetric, so full arcs stay full.
fn mirror_arc<F: Float>(a: &Arc<F>) -> Arc<F> {
    let disk = mirror_disk(&a.disk);
    if a.is_empty() {
        Arc::empty(disk)
    } else {
        Arc { disk, lo: -a.hi, hi: -a.lo }
    }
}

/// Work counters accumulated over every merge of one build.
#[derive(Debug, Clone, Copy, Default)]
pub struct DcStats {
    /// Total leaves under materialized tree nodes (union-building work).
    pub node_disk_sum: usize,
    /// Total canonical-node assignments over all tasks (trimming work).
    pub bucket_sum: usize,
    /// Sweep events processed across all escape sweeps.
    pub sweep_events: usize,
    /// Number of merge steps taken.
    pub merges: usize,
    /// Max over merges of (leaves + assignments) / (n log2 n) at that
    /// merge's instance size n; the budget the construction must hold.
    pub max_work_ratio: f64,
    /// Boundary edges summed over every sector union built.
    pub union_edges: usize,
    /// Sectors summed over the same unions; edges / sectors is the
    /// union-linearity ratio.
    pub union_sectors: usize,
}

/// Build the map for one frame by median-radius recursion. Produces the
/// same map as [`crate::naive::build_naive`] up to endpoint roundoff.
pub fn build_dc<F: Float>(disks: &[Disk<F>], tol: &Tolerance<F>) -> Result<ArcMap<F>> {
    build_dc_with_stats(disks, tol).map(|(m, _)| m)
}

/// [`build_dc`], also reporting the work counters.
pub fn build_dc_with_stats<F: Float>(
    disks: &[Disk<F>],
    tol: &Tolerance<F>,
) -> Result<(ArcMap<F>, DcStats)> {
    ensure_valid(disks, tol)?;
    let mut stats = DcStats::default();
    let map = build_frame(disks, Frame::Right, tol, &mut stats)?;
    Ok((map, stats))
}

/// One map per frame, sharing a single validation pass. Each frame's map
/// is built over a copy of the input rotated into that frame.
pub fn build_dc_frames<F: Float>(
    disks: &[Disk<F>],
    tol: &Tolerance<F>,
) -> Result<[ArcMap<F>; 3]> {
    ensure_valid(disks, tol)?;
    let mut stats = DcStats::default();
    let mut maps = Vec::with_capacity(3);
    for frame in Frame::ALL {
        let rot = frame.rotation::<F>();
        let rotated: Vec<Disk<F>> = disks
            .iter()
            .map(|d| Disk::new(d.id, d.center.rotated(rot), d.radius))
            .collect();
        maps.push(build_frame(&rotated, frame, tol, &mut stats)?);
    }
    let mut it = maps.into_iter();
    Ok([it.next().unwrap(), it.next().unwrap(), it.next().unwrap()])
}

/// Merge a built map over the smaller disks with the raw larger disks:
/// build the larger half's map recursively, then trim each smaller arc
/// against the larger sectors through the canonical tree decomposition.
/// Every disk in `d_plus` must be larger than every arc owner in
/// `m_minus`.
pub fn merge_maps<F: Float>(
    m_minus: ArcMap<F>,
    d_plus: &[Disk<F>],
    tol: &Tolerance<F>,
) -> Result<ArcMap<F>> {
    let mut stats = DcStats::default();
    let frame = m_minus.frame;
    merge_inner(m_minus, d_plus, frame, tol, &mut stats)
}

fn build_frame<F: Float>(
    disks: &[Disk<F>],
    frame: Frame,
    tol: &Tolerance<F>,
    stats: &mut DcStats,
) -> Result<ArcMap<F>> {
    if disks.len() <= 4 {
        return frame_map_naive(disks, frame, tol);
    }
    let mut by_radius = disks.to_vec();
    by_radius.sort_by(|a, b| a.radius.partial_cmp(&b.radius).unwrap());
    let mid = by_radius.len() / 2;
    let m_minus = build_frame(&by_radius[..mid], frame, tol, stats)?;
    merge_inner(m_minus, &by_radius[mid..], frame, tol, stats)
}

fn merge_inner<F: Float>(
    m_minus: ArcMap<F>,
    d_plus: &[Disk<F>],
    frame: Frame,
    tol: &Tolerance<F>,
    stats: &mut DcStats,
) -> Result<ArcMap<F>> {
    debug_assert!({
        let min_plus = d_plus.iter().map(|d| d.radius).fold(F::infinity(), |a, b| a.min(b));
        m_minus.arcs().iter().all(|a| a.disk.radius < min_plus)
    });
    if d_plus.is_empty() {
        return Ok(m_minus);
    }
    let m_plus = build_frame(d_plus, frame, tol, stats)?;
    let mut tasks: Vec<TrimTask<F>> = m_minus.arcs().iter().map(|a| TrimTask::new(*a)).collect();
    if tasks.is_empty() {
        return Ok(m_plus);
    }
    trim_against(d_plus, &mut tasks, tol, stats)?;
    let mut arcs: Vec<Arc<F>> = m_plus.arcs().to_vec();
    for t in &tasks {
        let survived = intersect_arcs(&t.acc, &t.a_minus)?;
        if !survived.is_empty() {
            arcs.push(survived);
        }
    }
    Ok(ArcMap::new(frame, arcs))
}

/// The trimming pass: one bottom-up walk over the height tree of
/// `d_plus`, intersecting each task's accumulator with the kept piece at
/// each of its canonical nodes.
fn trim_against<F: Float>(
    d_plus: &[Disk<F>],
    tasks: &mut [TrimTask<F>],
    tol: &Tolerance<F>,
    stats: &mut DcStats,
) -> Result<()> {
    let s = d_plus.len();
    let mut order: Vec<usize> = (0..s).collect();
    order.sort_by(|&a, &b| d_plus[a].center.y.partial_cmp(&d_plus[b].center.y).unwrap());
    let leaf_disk: Vec<Disk<F>> = order.iter().map(|&i| d_plus[i]).collect();
    let tree = YTree::new(leaf_disk.iter().map(|d| d.center.y).collect());

    let mut dv = 0usize;
    let mut sv = 0usize;
    let mut below: Vec<Option<SectorUnion<F>>> = Vec::new();
    let mut cover = Vec::new();
    for depth in (0..=tree.leaf_depth()).rev() {
        let first = 1usize << depth;
        let mut unions: Vec<Option<SectorUnion<F>>> = Vec::with_capacity(first);
        for i in 0..first {
            let node = first + i;
            let range = tree.leaf_range(node);
            if range.end > s {
                // Padding below this node; it can never be canonical
                // for a real leaf range, so it is never needed.
                unions.push(None);
                continue;
            }
            dv += range.len();
            let u = if depth == tree.leaf_depth() {
                SectorUnion::from_sector(&Sector::new(leaf_disk[range.start]), tol)
            } else {
                let l = below[2 * i].as_ref().expect("real node has real children");
                let r = below[2 * i + 1].as_ref().expect("real node has real children");
                merge_unions(l, r, tol)?
            };
            stats.union_edges += u.edge_count();
            stats.union_sectors += range.len();
            unions.push(Some(u));
        }

        let mut above_bucket: Vec<Vec<u32>> = vec![Vec::new(); first];
        let mut below_bucket: Vec<Vec<u32>> = vec![Vec::new(); first];
        for (ti, t) in tasks.iter().enumerate() {
            if t.acc.is_empty() {
                continue; // nothing can revive an empty intersection
            }
            let y = t.disk.center.y;
            for (side, bucket) in
                [(Side::Above, &mut above_bucket), (Side::Below, &mut below_bucket)]
            {
                tree.cover_into(tree.side_range(y, side), &mut cover);
                for &node in cover.iter().filter(|&&n| n.ilog2() == depth) {
                    bucket[node - first].push(ti as u32);
                }
            }
        }

        for i in 0..first {
            for (bucket, from_top) in [(&above_bucket[i], false), (&below_bucket[i], true)] {
                if bucket.is_empty() {
                    continue;
                }
                sv += bucket.len();
                let u = unions[i].as_ref().expect("canonical nodes are fully real");
                let full: Vec<Arc<F>> =
                    bucket.iter().map(|&ti| Arc::full(tasks[ti as usize].disk)).collect();
                let (pieces, events) = if from_top {
                    highest_escape_inner(&full, u, tol)?
                } else {
                    lowest_escape_inner(&full, u, tol)?
                };
                stats.sweep_events += events;
                for (k, &ti) in bucket.iter().enumerate() {
                    let t = &mut tasks[ti as usize];
                    t.acc = intersect_arcs(&t.acc, &pieces[k])?;
                }
            }
        }
        below = unions;
    }

    stats.node_disk_sum += dv;
    stats.bucket_sum += sv;
    stats.merges += 1;
    let n = (s + tasks.len()) as f64;
    let ratio = (dv + sv) as f64 / (n * n.log2().max(1.0));
    if ratio > stats.max_work_ratio {
        stats.max_work_ratio = ratio;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arcs::apply_rule;
    use crate::brute;
    use crate::instance::random_instance;
    use crate::naive::build_naive;
    use crate::union::union_of_sectors;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tol() -> Tolerance<f64> {
        Tolerance::default()
    }

    fn disk(id: u64, x: f64, y: f64, r: f64) -> Disk<f64> {
        Disk::new(id, Point::new(x, y), r)
    }

    /// Small task disks in a band below, larger union disks in a band
    /// above; all radii and center heights distinct by stratification.
    fn layered(seed: u64, n_small: usize, n_big: usize) -> (Vec<Disk<f64>>, Vec<Disk<f64>>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        fn strat(i: usize, n: usize, rng: &mut ChaCha8Rng) -> f64 {
            (i as f64 + rng.gen_range(0.1..0.9)) / n as f64
        }
        let mut small = Vec::new();
        for i in 0..n_small {
            let y = -3.2 + 3.0 * strat(i, n_small, &mut rng);
            let r = 0.5 + 0.4 * strat(i, n_small, &mut rng);
            small.push(disk(i as u64, rng.gen_range(-6.0..6.0), y, r));
        }
        let mut big = Vec::new();
        for i in 0..n_big {
            let y = 0.2 + 2.8 * strat(i, n_big, &mut rng);
            let r = 1.2 + 1.5 * strat(i, n_big, &mut rng);
            big.push(disk((n_small + i) as u64, rng.gen_range(-8.0..8.0), y, r));
        }
        (small, big)
    }

    fn assert_maps_close(a: &ArcMap<f64>, b: &ArcMap<f64>, tol_ang: f64) {
        assert_eq!(a.frame, b.frame);
        let ids = |m: &ArcMap<f64>| m.arcs().iter().map(|x| x.disk.id).collect::<Vec<_>>();
        assert_eq!(ids(a), ids(b), "different surviving arc sets");
        for (x, y) in a.arcs().iter().zip(b.arcs()) {
            assert!(
                (x.lo - y.lo).abs() <= tol_ang && (x.hi - y.hi).abs() <= tol_ang,
                "arc of disk {} differs: [{}, {}] vs [{}, {}]",
                x.disk.id,
                x.lo,
                x.hi,
                y.lo,
                y.hi
            );
        }
    }

    #[test]
    fn ytree_covers_flatten_to_exact_ranges() {
        let t = YTree::new((0..16).map(|i| i as f64).collect());
        assert_eq!(t.leaf_depth(), 4);
        assert!(t.cover(t.side_range(99.0, Side::Above)).is_empty());
        assert_eq!(t.cover(t.side_range(-1.0, Side::Above)), vec![1]);
        for k in 0..16 {
            let mut leaves = Vec::new();
            for n in t.cover(t.side_range(k as f64, Side::Above)) {
                leaves.extend(t.leaf_range(n));
            }
            assert_eq!(leaves, ((k + 1)..16).collect::<Vec<_>>());
            let mut leaves = Vec::new();
            for n in t.cover(t.side_range(k as f64, Side::Below)) {
                leaves.extend(t.leaf_range(n));
            }
            assert_eq!(leaves, (0..k).collect::<Vec<_>>());
        }
        // Non-power-of-two leaf count: covers never reach into padding.
        let t = YTree::new((0..11).map(|i| i as f64).collect());
        for k in 0..11 {
            let cov = t.cover(t.side_range(k as f64, Side::Above));
            assert!(cov.len() <= t.leaf_depth() as usize + 1);
            let mut leaves = Vec::new();
            for n in cov {
                let r = t.leaf_range(n);
                assert!(r.end <= 11, "node {n} spills into padding");
                leaves.extend(r);
            }
            assert_eq!(leaves, ((k + 1)..11).collect::<Vec<_>>());
        }
    }

    #[test]
    fn assign_buckets_flattens_to_side_filter() {
        let (_, big) = layered(42, 4, 13);
        let ys: Vec<f64> = big.iter().map(|d| d.center.y).collect();
        let tree = YTree::new(ys.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let tasks: Vec<TrimTask<f64>> = (0..40)
            .map(|i| TrimTask::new(Arc::full(disk(500 + i, 0.0, rng.gen_range(-0.5..3.5), 0.3))))
            .collect();
        for side in [Side::Above, Side::Below] {
            let buckets = assign_buckets(&tree, &tasks, side);
            let mut per_task: Vec<Vec<usize>> = vec![Vec::new(); tasks.len()];
            for (node, tis) in &buckets {
                for &ti in tis {
                    per_task[ti].extend(tree.leaf_range(*node));
                }
            }
            for (ti, t) in tasks.iter().enumerate() {
                per_task[ti].sort_unstable();
                let want: Vec<usize> = (0..ys.len())
                    .filter(|&i| match side {
                        Side::Above => ys[i] > t.disk.center.y,
                        Side::Below => ys[i] < t.disk.center.y,
                    })
                    .collect();
                assert_eq!(per_task[ti], want, "task {ti} {side:?}");
            }
        }
    }

    #[test]
    fn escape_against_empty_union_is_identity() {
        let a = Arc::full(disk(0, 0.0, 0.0, 1.0));
        let u = SectorUnion::empty(&tol());
        for out in [
            lowest_escape_subarcs(&[a], &u, &tol()).unwrap(),
            highest_escape_subarcs(&[a], &u, &tol()).unwrap(),
        ] {
            assert_eq!(out.len(), 1);
            assert!((out[0].lo - a.lo).abs() < 1e-12 && (out[0].hi - a.hi).abs() < 1e-12);
        }
    }

    #[test]
    fn swallowed_arc_escapes_nowhere() {
        // The wide sector contains the whole unit-disk arc: bottom
        // endpoint inside, no boundary contact, nothing survives.
        let small = Arc::full(disk(0, 0.0, 0.0, 1.0));
        let u = SectorUnion::from_sector(&Sector::new(disk(1, -4.0, 0.1, 10.0)), &tol());
        assert!(lowest_escape_subarcs(&[small], &u, &tol()).unwrap()[0].is_empty());
        assert!(highest_escape_subarcs(&[small], &u, &tol()).unwrap()[0].is_empty());
    }

    #[test]
    fn escape_cuts_at_first_contact() {
        // The sector at (0.3, 0.8) covers the upper part of the unit
        // arc; the single uncovered piece hugs the bottom endpoint, so
        // both sweeps must find it: the lowest directly, the highest
        // via its first contact below the covered top endpoint.
        let small = disk(0, 0.0, 0.0, 1.0);
        let big = disk(1, 0.3, 0.8, 2.0);
        let u = SectorUnion::from_sector(&Sector::new(big), &tol());
        let comps = brute::components_by_sampling(&Arc::full(small), &[Sector::new(big)], 4000);
        assert_eq!(comps.len(), 1);
        let low = lowest_escape_subarcs(&[Arc::full(small)], &u, &tol()).unwrap()[0];
        let high = highest_escape_subarcs(&[Arc::full(small)], &u, &tol()).unwrap()[0];
        for got in [low, high] {
            assert!(!got.is_empty());
            assert!((got.lo - comps[0].0).abs() < 1e-6, "lo {} vs {}", got.lo, comps[0].0);
            assert!((got.hi - comps[0].1).abs() < 1e-6, "hi {} vs {}", got.hi, comps[0].1);
        }
    }

    #[test]
    fn escape_pieces_match_sampled_components() {
        for seed in [11, 12, 13] {
            let (small, big) = layered(seed, 24, 16);
            let sectors: Vec<Sector<f64>> = big.iter().map(|d| Sector::new(*d)).collect();
            let u = union_of_sectors(&sectors, &tol()).unwrap();
            let arcs: Vec<Arc<f64>> = small.iter().map(|d| Arc::full(*d)).collect();
            let lows = lowest_escape_subarcs(&arcs, &u, &tol()).unwrap();
            let highs = highest_escape_subarcs(&arcs, &u, &tol()).unwrap();
            for (i, a) in arcs.iter().enumerate() {
                let comps = brute::components_by_sampling(a, &sectors, 6000);
                match comps.first() {
                    None => assert!(lows[i].is_empty(), "seed {seed} arc {i}"),
                    Some(&(lo, hi)) => {
                        assert!(
                            (lows[i].lo - lo).abs() < 1e-6 && (lows[i].hi - hi).abs() < 1e-6,
                            "seed {seed} arc {i}: lowest [{}, {}] vs sampled [{lo}, {hi}]",
                            lows[i].lo,
                            lows[i].hi
                        );
                    }
                }
                match comps.last() {
                    None => assert!(highs[i].is_empty(), "seed {seed} arc {i}"),
                    Some(&(lo, hi)) => {
                        assert!(
                            (highs[i].lo - lo).abs() < 1e-6 && (highs[i].hi - hi).abs() < 1e-6,
                            "seed {seed} arc {i}: highest [{}, {}] vs sampled [{lo}, {hi}]",
                            highs[i].lo,
                            highs[i].hi
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn rule_fold_equals_side_pieces() {
        // For every disk: folding the keep rule over all larger disks on
        // one side of its center equals the side's escape piece against
        // their joint sector union, including agreeing on emptiness.
        let mut sorted = random_instance::<f64>(150, 21, &tol());
        sorted.sort_by(|a, b| a.radius.partial_cmp(&b.radius).unwrap());
        let mut checked = 0;
        for i in 0..sorted.len() {
            let d = sorted[i];
            for side in [Side::Above, Side::Below] {
                let group: Vec<Disk<f64>> = sorted[i + 1..]
                    .iter()
                    .filter(|x| match side {
                        Side::Above => x.center.y > d.center.y,
                        Side::Below => x.center.y < d.center.y,
                    })
                    .copied()
                    .collect();
                if group.is_empty() {
                    continue;
                }
                let mut fold = Arc::full(d);
                for x in &group {
                    fold = intersect_arcs(&fold, &apply_rule(&Arc::full(d), x, &tol()).unwrap())
                        .unwrap();
                    if fold.is_empty() {
                        break;
                    }
                }
                let sectors: Vec<Sector<f64>> = group.iter().map(|x| Sector::new(*x)).collect();
                let u = union_of_sectors(&sectors, &tol()).unwrap();
                let piece = match side {
                    Side::Above => lowest_escape_subarcs(&[Arc::full(d)], &u, &tol()).unwrap()[0],
                    Side::Below => highest_escape_subarcs(&[Arc::full(d)], &u, &tol()).unwrap()[0],
                };
                assert_eq!(fold.is_empty(), piece.is_empty(), "disk {} {:?}", d.id, side);
                if !fold.is_empty() {
                    assert!(
                        (fold.lo - piece.lo).abs() < 1e-6 && (fold.hi - piece.hi).abs() < 1e-6,
                        "disk {} {:?}: fold [{}, {}] vs piece [{}, {}]",
                        d.id,
                        side,
                        fold.lo,
                        fold.hi,
                        piece.lo,
                        piece.hi
                    );
                }
                checked += 1;
            }
        }
        assert!(checked > 200, "exercised only {checked} folds");
    }

    #[test]
    fn side_pieces_decompose_over_partitions() {
        // Splitting the larger disks into arbitrary groups and
        // intersecting the per-group side pieces gives the same arc as
        // the whole fold: the per-node trims can be applied in any
        // grouping and order.
        let mut sorted = random_instance::<f64>(64, 33, &tol());
        sorted.sort_by(|a, b| a.radius.partial_cmp(&b.radius).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for i in (0..sorted.len() - 1).step_by(3) {
            let d = sorted[i];
            let larger = &sorted[i + 1..];
            let mut want = Arc::full(d);
            for x in larger {
                want = intersect_arcs(&want, &apply_rule(&Arc::full(d), x, &tol()).unwrap())
                    .unwrap();
            }
            let pieces = 1 + rng.gen_range(0..4usize.min(larger.len()));
            let mut groups: Vec<Vec<Disk<f64>>> = vec![Vec::new(); pieces];
            for x in larger {
                groups[rng.gen_range(0..pieces)].push(*x);
            }
            let mut got = Arc::full(d);
            for g in &groups {
                let above: Vec<Sector<f64>> = g
                    .iter()
                    .filter(|x| x.center.y > d.center.y)
                    .map(|x| Sector::new(*x))
                    .collect();
                let below: Vec<Sector<f64>> = g
                    .iter()
                    .filter(|x| x.center.y < d.center.y)
                    .map(|x| Sector::new(*x))
                    .collect();
                let ua = union_of_sectors(&above, &tol()).unwrap();
                let ub = union_of_sectors(&below, &tol()).unwrap();
                let low = lowest_escape_subarcs(&[Arc::full(d)], &ua, &tol()).unwrap()[0];
                let high = highest_escape_subarcs(&[Arc::full(d)], &ub, &tol()).unwrap()[0];
                got = intersect_arcs(&got, &low).unwrap();
                got = intersect_arcs(&got, &high).unwrap();
            }
            assert_eq!(want.is_empty(), got.is_empty(), "disk {}", d.id);
            if !want.is_empty() {
                assert!(
                    (want.lo - got.lo).abs() < 1e-6 && (want.hi - got.hi).abs() < 1e-6,
                    "disk {}: [{}, {}] vs [{}, {}]",
                    d.id,
                    want.lo,
                    want.hi,
                    got.lo,
                    got.hi
                );
            }
        }
    }

    #[test]
    fn merge_keeps_disjoint_halves_whole() {
        // Larger disks far to the right: nobody trims anybody across the
        // split, and the larger pair's mutual trim still happens.
        let small = vec![disk(0, 0.0, 0.0, 1.0), disk(1, 1.0, 2.5, 1.3)];
        let big = vec![disk(2, 40.0, 1.0, 2.0), disk(3, 44.0, -1.0, 2.6)];
        let m_minus = build_naive(&small, &tol()).unwrap();
        let merged = merge_maps(m_minus, &big, &tol()).unwrap();
        let all: Vec<Disk<f64>> = small.iter().chain(big.iter()).copied().collect();
        let naive = build_naive(&all, &tol()).unwrap();
        assert_eq!(merged.len(), 4);
        assert_maps_close(&naive, &merged, 1e-9);
    }

    #[test]
    fn merge_drops_swallowed_arcs() {
        let small = disk(0, 0.0, 0.0, 1.0);
        let big = disk(1, -4.0, 0.1, 10.0);
        let m_minus = build_naive(&[small], &tol()).unwrap();
        let merged = merge_maps(m_minus, &[big], &tol()).unwrap();
        assert_eq!(merged.len(), 1);
        assert_eq!(merged.arcs()[0].disk.id, 1);
    }

    #[test]
    fn merge_matches_naive_on_radius_split() {
        let mut disks = random_instance::<f64>(128, 77, &tol());
        disks.sort_by(|a, b| a.radius.partial_cmp(&b.radius).unwrap());
        let m_minus = build_naive(&disks[..64], &tol()).unwrap();
        let merged = merge_maps(m_minus, &disks[64..], &tol()).unwrap();
        let naive = build_naive(&disks, &tol()).unwrap();
        assert_maps_close(&naive, &merged, 1e-7);
    }

    #[test]
    fn dc_matches_naive_across_sizes() {
        for (n, seed) in
            [(1, 1), (2, 2), (3, 3), (4, 4), (5, 5), (8, 6), (16, 7), (33, 8), (64, 9), (129, 10)]
        {
            let disks = random_instance::<f64>(n, seed, &tol());
            let naive = build_naive(&disks, &tol()).unwrap();
            let dc = build_dc(&disks, &tol()).unwrap();
            assert_maps_close(&naive, &dc, 1e-7);
        }
    }

    #[test]
    fn dc_matches_naive_512() {
        let disks = random_instance::<f64>(512, 99, &tol());
        let naive = build_naive(&disks, &tol()).unwrap();
        let dc = build_dc(&disks, &tol()).unwrap();
        assert_maps_close(&naive, &dc, 1e-7);
    }

    #[test]
    fn dc_frames_match_naive_frames() {
        let disks = random_instance::<f64>(96, 15, &tol());
        let naive = crate::naive::build_naive_frames(&disks, &tol()).unwrap();
        let dc = build_dc_frames(&disks, &tol()).unwrap();
        for (a, b) in naive.iter().zip(dc.iter()) {
            assert_maps_close(a, b, 1e-7);
        }
    }

    #[test]
    fn merge_work_stays_within_budget() {
        for (n, seed) in [(256, 41), (1024, 42)] {
            let disks = random_instance::<f64>(n, seed, &tol());
            let (_, stats) = build_dc_with_stats(&disks, &tol()).unwrap();
            assert!(stats.merges >= 1 && stats.sweep_events > 0);
            assert!(
                stats.max_work_ratio <= 4.0,
                "work ratio {} at n = {n}",
                stats.max_work_ratio
            );
        }
    }
}
