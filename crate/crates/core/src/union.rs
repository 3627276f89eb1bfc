//! Unions of homothetic right sectors: boundary construction, merging,
//! and point membership.
//!
//! A union's boundary is a set of closed chains of straight segments
//! (pieces of sector radii) and circular arcs (pieces of right arcs),
//! each tagged with its source disk. Chains are directed with the union
//! interior on the left, which makes every radius piece run downward and
//! every arc piece upward — the invariant the sweeps and the membership
//! test lean on.
//!
//! Merging two unions is one run of the sweep kernel over the overlay of
//! their boundaries: each edge keeps the parts outside the other union,
//! and the surviving pieces are stitched back into chains by matching
//! endpoints. Membership is a lazily built y-slab decomposition —
//! binary-search the slab, binary-search the edge order inside it, and
//! the first edge east of the point faces the interior iff it runs up.

use crate::arcs::Sector;
use crate::error::{Error, Result};
use crate::geom::{Disk, Point, Tolerance};
use crate::scalar::Float;
use crate::sweep::curve::Curve;
use crate::sweep::kernel::{sweep, SweepMode, SweepOutput};
use std::collections::HashMap;
use std::ops::Range;
use std::sync::OnceLock;

#[derive(Debug, Clone, Copy)]
pub enum UEdge<F> {
    /// Straight piece of a sector radius, traversed `a -> b` with the
    /// union interior on the left (always downward for right sectors).
    Seg { a: Point<F>, b: Point<F>, source: u64 },
    /// Piece of `disk`'s right arc from angle `lo` up to `hi`,
    /// counterclockwise; the interior lies west of it.
    Arc { disk: Disk<F>, lo: F, hi: F },
}

impl<F: Float> UEdge<F> {
    pub fn source(&self) -> u64 {
        match self {
            UEdge::Seg { source, .. } => *source,
            UEdge::Arc { disk, .. } => disk.id,
        }
    }

    /// Chain-order start point.
    pub fn start(&self) -> Point<F> {
        match self {
            UEdge::Seg { a, .. } => *a,
            UEdge::Arc { disk, lo, .. } => disk.boundary_point(*lo),
        }
    }

    /// Chain-order end point.
    pub fn end(&self) -> Point<F> {
        match self {
            UEdge::Seg { b, .. } => *b,
            UEdge::Arc { disk, hi, .. } => disk.boundary_point(*hi),
        }
    }

    /// True when travel direction has increasing y (interior west).
    pub fn runs_up(&self) -> bool {
        match self {
            UEdge::Seg { a, b, .. } => b.y > a.y,
            UEdge::Arc { .. } => true,
        }
    }

    fn y_span(&self) -> (F, F) {
        match self {
            UEdge::Seg { a, b, .. } => (a.y.min(b.y), a.y.max(b.y)),
            UEdge::Arc { disk, lo, hi } => (
                disk.center.y + disk.radius * lo.sin(),
                disk.center.y + disk.radius * hi.sin(),
            ),
        }
    }

    fn x_at(&self, y: F) -> F {
        match self {
            UEdge::Seg { a, b, .. } => {
                if b.y == a.y {
                    return a.x;
                }
                let t = ((y - a.y) / (b.y - a.y)).max(F::zero()).min(F::one());
                a.x + (b.x - a.x) * t
            }
            UEdge::Arc { disk, .. } => {
                let dy = (y - disk.center.y).max(-disk.radius).min(disk.radius);
                disk.center.x + (disk.radius * disk.radius - dy * dy).sqrt()
            }
        }
    }

    pub(crate) fn to_curve(&self, family: u8, tag: u32) -> Curve<F> {
        match self {
            UEdge::Seg { a, b, source } => Curve::seg(*a, *b, *source, family, tag),
            UEdge::Arc { disk, lo, hi } => Curve::arc_piece(*disk, *lo, *hi, family, tag),
        }
    }

    /// Contribution to the signed area integral along the chain
    /// direction; clockwise holes subtract themselves.
    fn area_term(&self) -> F {
        let half = F::from_f64_lossy(0.5);
        match self {
            UEdge::Seg { a, b, .. } => (a.x + b.x) * half * (b.y - a.y),
            UEdge::Arc { disk, lo, hi } => {
                let (c, r) = (disk.center, disk.radius);
                c.x * r * (hi.sin() - lo.sin())
                    + r * r * half * ((*hi - *lo) + hi.sin() * hi.cos() - lo.sin() * lo.cos())
            }
        }
    }
}

#[derive(Debug, Clone)]
struct SlabIndex<F> {
    /// Slab boundaries, ascending (all distinct edge-endpoint heights).
    ys: Vec<F>,
    /// Per slab: edge indices sorted west-to-east at the slab midline.
    slabs: Vec<Vec<u32>>,
}

/// Union of homothetic right sectors. Immutable after construction; the
/// membership index is built lazily on first query.
#[derive(Debug, Clone)]
pub struct SectorUnion<F> {
    edges: Vec<UEdge<F>>,
    chains: Vec<Range<usize>>,
    /// Sorted ids of the disks whose sectors this union covers.
    sources: Vec<u64>,
    eps: F,
    slab: OnceLock<SlabIndex<F>>,
}

impl<F: Float> SectorUnion<F> {
    pub fn empty(tol: &Tolerance<F>) -> Self {
        SectorUnion {
            edges: Vec::new(),
            chains: Vec::new(),
            sources: Vec::new(),
            eps: tol.eps_geom,
            slab: OnceLock::new(),
        }
    }

    /// Three-edge boundary of a single sector: down the lower radius,
    /// up the arc, down the upper radius.
    pub fn from_sector(s: &Sector<F>, tol: &Tolerance<F>) -> Self {
        let d = s.disk;
        let third = F::PI() / F::from_f64_lossy(3.0);
        let edges = vec![
            UEdge::Seg { a: d.center, b: d.boundary_point(-third), source: d.id },
            UEdge::Arc { disk: d, lo: -third, hi: third },
            UEdge::Seg { a: d.boundary_point(third), b: d.center, source: d.id },
        ];
        SectorUnion {
            edges,
            chains: vec![0..3],
            sources: vec![d.id],
            eps: tol.eps_geom,
            slab: OnceLock::new(),
        }
    }

    pub fn edges(&self) -> &[UEdge<F>] {
        &self.edges
    }

    /// Reflection across the x axis. Chains are traversed in reverse so
    /// the interior stays on the left; radial edges keep running down and
    /// arc edges up, which the sweep kernel relies on.
    pub(crate) fn mirrored(&self) -> SectorUnion<F> {
        let flip = |p: Point<F>| Point::new(p.x, -p.y);
        let mut edges = Vec::with_capacity(self.edges.len());
        let mut chains = Vec::with_capacity(self.chains.len());
        for r in &self.chains {
            let from = edges.len();
            for e in self.edges[r.clone()].iter().rev() {
                edges.push(match e {
                    UEdge::Seg { a, b, source } => {
                        UEdge::Seg { a: flip(*b), b: flip(*a), source: *source }
                    }
                    UEdge::Arc { disk, lo, hi } => UEdge::Arc {
                        disk: Disk::new(disk.id, flip(disk.center), disk.radius),
                        lo: -*hi,
                        hi: -*lo,
                    },
                });
            }
            chains.push(from..edges.len());
        }
        SectorUnion {
            edges,
            chains,
            sources: self.sources.clone(),
            eps: self.eps,
            slab: OnceLock::new(),
        }
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn chains(&self) -> impl Iterator<Item = &[UEdge<F>]> {
        self.chains.iter().map(|r| &self.edges[r.clone()])
    }

    pub fn chain_count(&self) -> usize {
        self.chains.len()
    }

    pub fn sources(&self) -> &[u64] {
        &self.sources
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Area enclosed by the boundary chains.
    pub fn area(&self) -> F {
        self.edges.iter().map(|e| e.area_term()).fold(F::zero(), |s, t| s + t)
    }

    /// Closed-set membership of `p`.
    pub fn contains(&self, p: Point<F>) -> bool {
        if self.edges.is_empty() {
            return false;
        }
        let idx = self.slab.get_or_init(|| build_slab_index(&self.edges));
        if p.y < idx.ys[0] || p.y > *idx.ys.last().unwrap() {
            return false;
        }
        // boundary heights resolve to the slab above
        let k = idx.ys.partition_point(|&y| y <= p.y);
        let k = k.saturating_sub(1).min(idx.slabs.len() - 1);
        let slab = &idx.slabs[k];
        // Edges do not cross inside a slab, so their midline order is
        // their order at p.y as well.
        let i = slab.partition_point(|&e| self.edges[e as usize].x_at(p.y) < p.x - self.eps);
        if i == slab.len() {
            return false;
        }
        let e = &self.edges[slab[i] as usize];
        if (e.x_at(p.y) - p.x).abs() <= self.eps {
            return true; // on the boundary itself
        }
        e.runs_up()
    }
}

fn build_slab_index<F: Float>(edges: &[UEdge<F>]) -> SlabIndex<F> {
    let mut ys = Vec::with_capacity(edges.len() * 2);
    for e in edges {
        let (lo, hi) = e.y_span();
        ys.push(lo);
        ys.push(hi);
    }
    ys.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ys.dedup();
    let half = F::from_f64_lossy(0.5);
    let mut slabs = Vec::with_capacity(ys.len().saturating_sub(1));
    for w in ys.windows(2) {
        let mid = (w[0] + w[1]) * half;
        let mut in_slab: Vec<u32> = (0..edges.len() as u32)
            .filter(|&i| {
                let (lo, hi) = edges[i as usize].y_span();
                lo <= mid && mid <= hi
            })
            .collect();
        in_slab.sort_by(|&a, &b| {
            edges[a as usize].x_at(mid).partial_cmp(&edges[b as usize].x_at(mid)).unwrap()
        });
        slabs.push(in_slab);
    }
    SlabIndex { ys, slabs }
}

/// Union of a set of right sectors, built by balanced pairwise merging.
pub fn union_of_sectors<F: Float>(
    sectors: &[Sector<F>],
    tol: &Tolerance<F>,
) -> Result<SectorUnion<F>> {
    match sectors.len() {
        0 => Ok(SectorUnion::empty(tol)),
        1 => Ok(SectorUnion::from_sector(&sectors[0], tol)),
        n => {
            let (a, b) = sectors.split_at(n / 2);
            let ua = union_of_sectors(a, tol)?;
            let ub = union_of_sectors(b, tol)?;
            merge_unions(&ua, &ub, tol)
        }
    }
}

/// Boundary of the set union of two unions.
pub fn merge_unions<F: Float>(
    u1: &SectorUnion<F>,
    u2: &SectorUnion<F>,
    tol: &Tolerance<F>,
) -> Result<SectorUnion<F>> {
    if u1.is_empty() {
        return Ok(u2.clone());
    }
    if u2.is_empty() {
        return Ok(u1.clone());
    }
    if u1.sources == u2.sources {
        return Ok(u1.clone()); // same sector set, same union
    }
    if u1.sources.iter().any(|s| u2.sources.binary_search(s).is_ok()) {
        // A shared source means identical boundary pieces in both
        // operands, which the sweep cannot order.
        return Err(Error::DegenerateInput(
            "merge operands share source disks; they must be disjoint or identical".into(),
        ));
    }

    let mut curves = Vec::with_capacity(u1.edge_count() + u2.edge_count());
    for (fam, u) in [(0u8, u1), (1u8, u2)] {
        for e in &u.edges {
            let tag = curves.len() as u32;
            curves.push(e.to_curve(fam, tag));
        }
    }
    let out = sweep(&curves, &SweepMode::union_merge(), tol)?;

    let mut pieces = Vec::with_capacity(curves.len());
    for (idx, e) in u1.edges.iter().chain(u2.edges.iter()).enumerate() {
        split_kept_pieces(e, &out, idx, tol, &mut pieces);
    }

    let (edges, chains) = stitch_chains(pieces, tol)?;
    let mut sources = Vec::with_capacity(u1.sources.len() + u2.sources.len());
    sources.extend_from_slice(&u1.sources);
    sources.extend_from_slice(&u2.sources);
    sources.sort_unstable();
    Ok(SectorUnion { edges, chains, sources, eps: tol.eps_geom, slab: OnceLock::new() })
}

/// All boundary edges, with source tags, in chain order.
pub fn boundary_edges<F: Float>(u: &SectorUnion<F>) -> &[UEdge<F>] {
    u.edges()
}

/// Closed-set membership of `p` in the union.
pub fn point_in_union<F: Float>(u: &SectorUnion<F>, p: Point<F>) -> bool {
    u.contains(p)
}

/// Cut `e` at its recorded crossings with the other family and keep the
/// pieces outside the other union, in chain orientation.
fn split_kept_pieces<F: Float>(
    e: &UEdge<F>,
    out: &SweepOutput<F>,
    idx: usize,
    tol: &Tolerance<F>,
    pieces: &mut Vec<UEdge<F>>,
) {
    let (ylo, yhi) = e.y_span();
    if yhi - ylo <= tol.eps_geom {
        return; // mirror of the kernel's sliver skip
    }
    let cuts = &out.crossings[idx];
    let inside0 = out.start_inside[idx];
    match e {
        UEdge::Seg { a, b, source } => {
            let up = b.y > a.y;
            let (plo, phi) = if up { (*a, *b) } else { (*b, *a) };
            let mut pts = Vec::with_capacity(cuts.len() + 2);
            pts.push(plo);
            pts.extend_from_slice(cuts);
            pts.push(phi);
            for i in 0..pts.len() - 1 {
                let inside = inside0 ^ (i % 2 == 1);
                let (p, q) = (pts[i], pts[i + 1]);
                if inside || q.y - p.y <= tol.eps_geom {
                    continue;
                }
                let (a2, b2) = if up { (p, q) } else { (q, p) };
                pieces.push(UEdge::Seg { a: a2, b: b2, source: *source });
            }
        }
        UEdge::Arc { disk, lo, hi } => {
            let mut angs = Vec::with_capacity(cuts.len() + 2);
            angs.push(*lo);
            for p in cuts {
                angs.push(disk.angle_of(*p).max(*lo).min(*hi));
            }
            angs.push(*hi);
            for i in 0..angs.len() - 1 {
                let inside = inside0 ^ (i % 2 == 1);
                let (alo, ahi) = (angs[i], angs[i + 1]);
                let dy = disk.radius * (ahi.sin() - alo.sin());
                if inside || dy <= tol.eps_geom {
                    continue;
                }
                pieces.push(UEdge::Arc { disk: *disk, lo: alo, hi: ahi });
            }
        }
    }
}

/// Reassemble loose pieces into closed chains by matching each piece's
/// end to the nearest unused start point. The match radius absorbs
/// dropped slivers and the angle/point round trips on arc endpoints.
fn stitch_chains<F: Float>(
    pieces: Vec<UEdge<F>>,
    tol: &Tolerance<F>,
) -> Result<(Vec<UEdge<F>>, Vec<Range<usize>>)> {
    if pieces.is_empty() {
        return Ok((Vec::new(), Vec::new()));
    }
    let match_r = tol.eps_geom * F::from_f64_lossy(8.0);
    let cell = match_r.as_f64().max(f64::MIN_POSITIVE);
    let key = |p: Point<F>| -> (i64, i64) {
        ((p.x.as_f64() / cell).floor() as i64, (p.y.as_f64() / cell).floor() as i64)
    };
    let mut by_start: HashMap<(i64, i64), Vec<u32>> = HashMap::new();
    for (i, p) in pieces.iter().enumerate() {
        by_start.entry(key(p.start())).or_default().push(i as u32);
    }

    let mut used = vec![false; pieces.len()];
    let mut edges = Vec::with_capacity(pieces.len());
    let mut chains = Vec::new();
    for seed in 0..pieces.len() {
        if used[seed] {
            continue;
        }
        let chain_from = edges.len();
        let origin = pieces[seed].start();
        used[seed] = true;
        edges.push(pieces[seed]);
        let mut cursor = pieces[seed].end();
        loop {
            // nearest unused piece starting at the cursor
            let (kx, ky) = key(cursor);
            let mut best: Option<(F, u32)> = None;
            for dx in -1..=1 {
                for dy in -1..=1 {
                    if let Some(cands) = by_start.get(&(kx + dx, ky + dy)) {
                        for &c in cands {
                            if used[c as usize] {
                                continue;
                            }
                            let d = pieces[c as usize].start().dist(cursor);
                            if d <= match_r && best.map_or(true, |(bd, _)| d < bd) {
                                best = Some((d, c));
                            }
                        }
                    }
                }
            }
            match best {
                Some((_, c)) => {
                    used[c as usize] = true;
                    edges.push(pieces[c as usize]);
                    cursor = pieces[c as usize].end();
                }
                None => {
                    if cursor.dist(origin) <= match_r {
                        chains.push(chain_from..edges.len());
                        break;
                    }
                    return Err(Error::DegenerateInput(format!(
                        "merged boundary does not close near ({:?}, {:?})",
                        cursor.x, cursor.y
                    )));
                }
            }
        }
    }
    Ok((edges, chains))
}
