//! Partially persistent ordered set, the storage engine behind the
//! locator's slab ordering.
//!
//! A treap over u32 payloads evolves through a sequence of insertions
//! and removals at the latest version; `snapshot` freezes the current
//! state, and `successor` answers order queries against any frozen
//! version. Persistence uses node copying with one spare pointer slot
//! per node: overwriting a pointer a second time copies the node and
//! relinks the copy upward, copying ancestors only while their own
//! spare slots are full. Treap updates make O(1) expected rotations, so
//! total node count stays linear in the number of operations, and every
//! version shares all untouched structure.
//!
//! Balance metadata (priorities) and the parent/handle bookkeeping are
//! ephemeral — they describe only the latest version, which is the only
//! one ever updated. Frozen versions need just payloads and pointers.

use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const NIL: u32 = u32::MAX;

#[derive(Debug)]
struct PNode {
    payload: u32,
    left: u32,
    right: u32,
    /// Stamp (upcoming version index) at which this node was allocated;
    /// both original pointers are freely mutable at that stamp.
    created: u32,
    /// The spare slot: overrides `left` or `right` (per `extra_right`)
    /// for reads at versions >= extra_version. NIL version = unused.
    extra_version: u32,
    extra_target: u32,
    extra_right: bool,
}

/// One node's persistent links, as dumped for serialization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct FrozenNode {
    pub payload: u32,
    pub left: u32,
    pub right: u32,
    pub extra_version: u32,
    pub extra_target: u32,
    pub extra_right: bool,
}

#[derive(Debug)]
pub(crate) struct PersistentOrder {
    nodes: Vec<PNode>,
    roots: Vec<u32>,
    // Latest-version-only state:
    parent: Vec<u32>,
    node_of: Vec<u32>,
    pri: Vec<u64>,
    cur_root: u32,
    rng: ChaCha8Rng,
}

impl PersistentOrder {
    pub fn new(seed: u64) -> Self {
        PersistentOrder {
            nodes: Vec::new(),
            roots: Vec::new(),
            parent: Vec::new(),
            node_of: Vec::new(),
            pri: Vec::new(),
            cur_root: NIL,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Total persistent nodes ever allocated (the space that matters).
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn version_count(&self) -> usize {
        self.roots.len()
    }

    /// Freeze the current state; returns its version index.
    pub fn snapshot(&mut self) -> usize {
        self.roots.push(self.cur_root);
        self.roots.len() - 1
    }

    fn stamp(&self) -> u32 {
        self.roots.len() as u32
    }

    fn read(&self, x: u32, right: bool, t: u32) -> u32 {
        let n = &self.nodes[x as usize];
        if n.extra_version != NIL && n.extra_right == right && n.extra_version <= t {
            n.extra_target
        } else if right {
            n.right
        } else {
            n.left
        }
    }

    fn read_live(&self, x: u32, right: bool) -> u32 {
        // Stamps stay far below NIL-1, so this sees every committed write.
        self.read(x, right, NIL - 1)
    }

    fn alloc(&mut self, payload: u32) -> u32 {
        let id = self.nodes.len() as u32;
        self.nodes.push(PNode {
            payload,
            left: NIL,
            right: NIL,
            created: self.stamp(),
            extra_version: NIL,
            extra_target: NIL,
            extra_right: false,
        });
        self.parent.push(NIL);
        self.node_of[payload as usize] = id;
        id
    }

    /// Point `x`'s `right`/left child at `v` in the live tree, without
    /// disturbing frozen versions: mutate in place when the node is
    /// fresh or its spare slot can take the write, otherwise copy.
    /// Returns the node now holding the state; a returned copy must be
    /// relinked into the parent by the caller.
    fn write_child(&mut self, x: u32, right: bool, v: u32) -> u32 {
        let stamp = self.stamp();
        let live_l = self.read_live(x, false);
        let live_r = self.read_live(x, true);
        let n = &mut self.nodes[x as usize];
        let out = if n.created == stamp {
            if right {
                n.right = v;
            } else {
                n.left = v;
            }
            x
        } else if n.extra_version == NIL || (n.extra_version == stamp && n.extra_right == right) {
            // Unused slot, or a same-stamp overwrite no frozen version
            // has seen yet.
            n.extra_version = stamp;
            n.extra_right = right;
            n.extra_target = v;
            x
        } else {
            let payload = n.payload;
            let copy = self.nodes.len() as u32;
            self.nodes.push(PNode {
                payload,
                left: if right { live_l } else { v },
                right: if right { v } else { live_r },
                created: stamp,
                extra_version: NIL,
                extra_target: NIL,
                extra_right: false,
            });
            self.parent.push(self.parent[x as usize]);
            self.node_of[payload as usize] = copy;
            for ch in [self.nodes[copy as usize].left, self.nodes[copy as usize].right] {
                if ch != NIL {
                    self.parent[ch as usize] = copy;
                }
            }
            copy
        };
        if v != NIL {
            self.parent[v as usize] = out;
        }
        out
    }

    /// Link `v` in place of the subtree under the deepest path entry,
    /// cascading copies upward until a write sticks in place.
    fn attach(&mut self, path: &mut Vec<(u32, bool)>, mut v: u32) {
        while let Some((x, dir)) = path.pop() {
            let x2 = self.write_child(x, dir, v);
            if x2 == x {
                return;
            }
            v = x2;
        }
        self.cur_root = v;
        if v != NIL {
            self.parent[v as usize] = NIL;
        }
    }

    /// Insert a payload, positioned by `go_left(existing)` = "does the
    /// new payload sort before this one". Each payload may be present
    /// at most once at a time.
    pub fn insert(&mut self, payload: u32, mut go_left: impl FnMut(u32) -> bool) {
        let p = payload as usize;
        if self.node_of.len() <= p {
            self.node_of.resize(p + 1, NIL);
            self.pri.resize(p + 1, 0);
        }
        debug_assert!(self.node_of[p] == NIL, "payload {payload} already present");
        self.pri[p] = self.rng.next_u64();

        let mut path: Vec<(u32, bool)> = Vec::new();
        let mut x = self.cur_root;
        while x != NIL {
            let dir = !go_left(self.nodes[x as usize].payload);
            path.push((x, dir));
            x = self.read_live(x, dir);
        }
        let mut cur = self.alloc(payload);
        while let Some(&(pn, dir)) = path.last() {
            if self.pri[self.nodes[pn as usize].payload as usize] >= self.pri[p] {
                break;
            }
            path.pop();
            // Rotate cur above pn: pn takes cur's subtree facing it,
            // then hangs off cur on that side.
            let inner = self.read_live(cur, !dir);
            let p2 = self.write_child(pn, dir, inner);
            cur = self.write_child(cur, !dir, p2);
        }
        self.attach(&mut path, cur);
    }

    /// Remove a payload by handle — no comparator involved, so removal
    /// is immune to coordinate near-ties. The node is spliced out and
    /// its subtrees merged, leaving a single link for [`Self::attach`]
    /// to rewrite; the merge walks the subtrees' facing spines, which
    /// have O(1) expected total length under random priorities.
    pub fn remove(&mut self, payload: u32) {
        let x = self.node_of[payload as usize];
        debug_assert!(x != NIL, "payload {payload} absent");
        let mut path: Vec<(u32, bool)> = Vec::new();
        {
            let mut c = x;
            let mut up = self.parent[c as usize];
            while up != NIL {
                path.push((up, self.read_live(up, true) == c));
                c = up;
                up = self.parent[c as usize];
            }
            path.reverse();
        }
        let l = self.read_live(x, false);
        let r = self.read_live(x, true);
        let merged = self.merge(l, r);
        self.attach(&mut path, merged);
        self.node_of[payload as usize] = NIL;
    }

    /// Merge two treaps where every payload in `a` sorts before every
    /// payload in `b`. Every changed link is written through the
    /// persistence layer; unchanged links are left alone to spare the
    /// nodes' spare slots.
    fn merge(&mut self, a: u32, b: u32) -> u32 {
        if a == NIL {
            return b;
        }
        if b == NIL {
            return a;
        }
        let pa = self.pri[self.nodes[a as usize].payload as usize];
        let pb = self.pri[self.nodes[b as usize].payload as usize];
        if pa > pb {
            let old = self.read_live(a, true);
            let sub = self.merge(old, b);
            if sub == old {
                self.parent[sub as usize] = a;
                a
            } else {
                self.write_child(a, true, sub)
            }
        } else {
            let old = self.read_live(b, false);
            let sub = self.merge(a, old);
            if sub == old {
                self.parent[sub as usize] = b;
                b
            } else {
                self.write_child(b, false, sub)
            }
        }
    }

    /// Dump the query-relevant state — per-node links and the version
    /// roots — for serialization. Ephemeral build state (priorities,
    /// parents, handles) is not part of the dump.
    pub fn frozen_dump(&self) -> (Vec<FrozenNode>, Vec<u32>) {
        let nodes = self
            .nodes
            .iter()
            .map(|n| FrozenNode {
                payload: n.payload,
                left: n.left,
                right: n.right,
                extra_version: n.extra_version,
                extra_target: n.extra_target,
                extra_right: n.extra_right,
            })
            .collect();
        (nodes, self.roots.clone())
    }

    /// Rebuild a query-only instance from a dump. The result answers
    /// [`Self::successor`] for every dumped version; it must not be
    /// mutated further.
    pub fn from_frozen(nodes: Vec<FrozenNode>, roots: Vec<u32>) -> PersistentOrder {
        let n = nodes.len();
        let nodes = nodes
            .into_iter()
            .map(|f| PNode {
                payload: f.payload,
                left: f.left,
                right: f.right,
                created: 0,
                extra_version: f.extra_version,
                extra_target: f.extra_target,
                extra_right: f.extra_right,
            })
            .collect();
        let cur_root = roots.last().copied().unwrap_or(NIL);
        PersistentOrder {
            nodes,
            roots,
            parent: vec![NIL; n],
            node_of: Vec::new(),
            pri: Vec::new(),
            cur_root,
            rng: ChaCha8Rng::seed_from_u64(0),
        }
    }

    /// Leftmost payload satisfying `is_after`, in the frozen `version`;
    /// `comparisons` counts predicate evaluations.
    pub fn successor(
        &self,
        version: usize,
        mut is_after: impl FnMut(u32) -> bool,
        comparisons: &mut usize,
    ) -> Option<u32> {
        let t = version as u32;
        let mut x = self.roots[version];
        let mut best = None;
        while x != NIL {
            *comparisons += 1;
            let payload = self.nodes[x as usize].payload;
            if is_after(payload) {
                best = Some(payload);
                x = self.read(x, false, t);
            } else {
                x = self.read(x, true, t);
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    /// Drive a random insert/remove history, snapshotting after every
    /// operation, then check successor queries against sorted-list
    /// snapshots for every version ever frozen.
    #[test]
    fn versioned_successor_matches_reference_sets() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let keys: Vec<f64> = (0..300).map(|_| rng.gen_range(-100.0..100.0)).collect();
        let mut order = PersistentOrder::new(99);
        let mut live: Vec<u32> = Vec::new();
        let mut absent: Vec<u32> = (0..300).collect();
        let mut history: Vec<Vec<u32>> = Vec::new();

        order.snapshot();
        history.push(Vec::new());
        for _ in 0..600 {
            let do_insert = !absent.is_empty() && (live.is_empty() || rng.gen_bool(0.55));
            if do_insert {
                let i = rng.gen_range(0..absent.len());
                let p = absent.swap_remove(i);
                order.insert(p, |other| keys[p as usize] < keys[other as usize]);
                live.push(p);
            } else if !live.is_empty() {
                let i = rng.gen_range(0..live.len());
                let p = live.swap_remove(i);
                order.remove(p);
            } else {
                break;
            }
            let v = order.snapshot();
            let mut snap = live.clone();
            snap.sort_by(|&a, &b| keys[a as usize].partial_cmp(&keys[b as usize]).unwrap());
            assert_eq!(v, history.len());
            history.push(snap);
        }

        let mut comps = 0usize;
        for (v, snap) in history.iter().enumerate() {
            for _ in 0..40 {
                let probe = rng.gen_range(-110.0..110.0);
                let want = snap.iter().copied().find(|&p| keys[p as usize] > probe);
                let got = order.successor(v, |p| keys[p as usize] > probe, &mut comps);
                assert_eq!(got, want, "version {v}, probe {probe}");
            }
        }
        // Old versions must also see their *own* extremes, not the
        // latest tree's.
        for (v, snap) in history.iter().enumerate() {
            let mut c = 0;
            let lowest = order.successor(v, |_| true, &mut c);
            assert_eq!(lowest, snap.first().copied(), "version {v}");
        }
        assert!(comps > 0);
    }

    #[test]
    fn node_count_stays_linear_in_operations() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let n = 2000u32;
        let keys: Vec<f64> = (0..n).map(|_| rng.gen_range(-1e6..1e6)).collect();
        let mut order = PersistentOrder::new(17);
        order.snapshot();
        // Interleave inserts and removes the way a y-sweep does: every
        // payload enters once and leaves once.
        let mut live: Vec<u32> = Vec::new();
        let mut next = 0u32;
        let mut ops = 0usize;
        while next < n || !live.is_empty() {
            let insert = next < n && (live.is_empty() || rng.gen_bool(0.5));
            if insert {
                let p = next;
                next += 1;
                order.insert(p, |other| keys[p as usize] < keys[other as usize]);
                live.push(p);
            } else {
                let i = rng.gen_range(0..live.len());
                let p = live.swap_remove(i);
                order.remove(p);
            }
            ops += 1;
            order.snapshot();
        }
        assert_eq!(ops, 2 * n as usize);
        // Expected copies per operation are O(1); leave generous slack.
        assert!(
            order.node_count() <= 6 * n as usize,
            "{} nodes for {} operations",
            order.node_count(),
            ops
        );
    }

    #[test]
    fn rebuild_is_deterministic() {
        let build = || {
            let keys: Vec<f64> = (0..64).map(|i| (i as f64 * 0.731).sin()).collect();
            let mut order = PersistentOrder::new(5);
            order.snapshot();
            for p in 0..64u32 {
                order.insert(p, |other| keys[p as usize] < keys[other as usize]);
                order.snapshot();
            }
            for p in (0..64u32).step_by(2) {
                order.remove(p);
                order.snapshot();
            }
            order
        };
        let a = build();
        let b = build();
        assert_eq!(a.node_count(), b.node_count());
        assert_eq!(a.roots, b.roots);
        let mut c = 0;
        for v in 0..a.version_count() {
            assert_eq!(
                a.successor(v, |p| p >= 20, &mut c),
                b.successor(v, |p| p >= 20, &mut c)
            );
        }
    }
}
