//! The assembled query structure: three frame maps with their
//! locators, over one shared disk list.
//!
//! A query rotates the point into each frame, shoots the rightward ray
//! through that frame's locator, and collects at most three candidate
//! disks. Each candidate is re-checked for actual containment — a
//! locator hit need not contain the query point — and the largest
//! containing candidate wins. Distinct radii are enforced at build
//! time, so the final selection is tie-free.

use std::collections::HashMap;

use crate::arcs::{ArcMap, Frame};
use crate::dc::build_dc_frames;
use crate::error::Result;
use crate::geom::{Disk, Point, Tolerance};
use crate::locator::{build_locator, Locator};
use crate::naive::build_naive_frames;
use crate::scalar::Float;

/// Immutable after construction; queries borrow it freely.
#[derive(Debug)]
pub struct Structure<F> {
    disks: Vec<Disk<F>>,
    frames: [(ArcMap<F>, Locator<F>); 3],
    by_id: HashMap<u64, usize>,
}

/// Result of one point query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QueryAnswer {
    /// Largest disk containing the point, if any.
    pub best: Option<u64>,
    /// The raw locator hit per frame (right, top, bottom), for
    /// diagnostics; hits need not contain the point.
    pub candidates: [Option<u64>; 3],
}

/// Build the full structure with the divide-and-conquer map builder.
pub fn preprocess<F: Float>(disks: &[Disk<F>], tol: &Tolerance<F>) -> Result<Structure<F>> {
    assemble(disks, build_dc_frames(disks, tol)?, tol)
}

/// Build the full structure with the quadratic reference builder.
pub fn preprocess_naive<F: Float>(disks: &[Disk<F>], tol: &Tolerance<F>) -> Result<Structure<F>> {
    assemble(disks, build_naive_frames(disks, tol)?, tol)
}

fn assemble<F: Float>(
    disks: &[Disk<F>],
    maps: [ArcMap<F>; 3],
    tol: &Tolerance<F>,
) -> Result<Structure<F>> {
    let [mr, mt, mb] = maps;
    let lr = build_locator(&mr, tol)?;
    let lt = build_locator(&mt, tol)?;
    let lb = build_locator(&mb, tol)?;
    Ok(Structure::from_parts(disks.to_vec(), [(mr, lr), (mt, lt), (mb, lb)]))
}

impl<F: Float> Structure<F> {
    /// Reassemble from deserialized parts; the caller vouches that maps
    /// and locators were built over `disks` in the standard frames.
    pub(crate) fn from_parts(
        disks: Vec<Disk<F>>,
        frames: [(ArcMap<F>, Locator<F>); 3],
    ) -> Structure<F> {
        let by_id = disks.iter().enumerate().map(|(i, d)| (d.id, i)).collect();
        Structure { disks, frames, by_id }
    }

    pub fn disks(&self) -> &[Disk<F>] {
        &self.disks
    }

    pub fn map(&self, frame: Frame) -> &ArcMap<F> {
        &self.frames[frame_index(frame)].0
    }

    pub fn locator(&self, frame: Frame) -> &Locator<F> {
        &self.frames[frame_index(frame)].1
    }

    /// Largest disk containing `q`. The point must keep clear of disk
    /// boundaries by the geometric tolerance.
    pub fn query(&self, q: Point<F>) -> QueryAnswer {
        self.query_counted(q).0
    }

    /// [`Self::query`], also reporting the worst single-locator
    /// comparison count among the three frame probes.
    pub fn query_counted(&self, q: Point<F>) -> (QueryAnswer, usize) {
        let mut candidates = [None; 3];
        let mut worst = 0usize;
        let mut best: Option<&Disk<F>> = None;
        for (i, frame) in Frame::ALL.into_iter().enumerate() {
            let rq = q.rotated(frame.rotation());
            let (hit, comps) = self.frames[i].1.first_arc_right_counted(rq);
            worst = worst.max(comps);
            candidates[i] = hit;
            if let Some(id) = hit {
                let d = &self.disks[self.by_id[&id]];
                if d.contains(q) && best.map_or(true, |b| d.radius > b.radius) {
                    best = Some(d);
                }
            }
        }
        (QueryAnswer { best: best.map(|d| d.id), candidates }, worst)
    }
}

fn frame_index(frame: Frame) -> usize {
    match frame {
        Frame::Right => 0,
        Frame::Top => 1,
        Frame::Bottom => 2,
    }
}

/// Ground truth by linear scan: the maximum-radius disk containing `q`.
pub fn oracle_query<F: Float>(disks: &[Disk<F>], q: Point<F>) -> Option<u64> {
    let mut best: Option<&Disk<F>> = None;
    for d in disks {
        if d.contains(q) {
            match best {
                Some(b) if b.radius >= d.radius => {}
                _ => best = Some(d),
            }
        }
    }
    best.map(|d| d.id)
}
