//! Arena-backed treap used as the sweep status structure.
//!
//! Keys are implicit: every ordering decision is delegated to a caller
//! closure evaluating curve positions at the current sweep height, so
//! the same structure serves as a mixed status order and as per-family
//! membership orders. Nodes carry parent pointers so neighbor queries
//! and removals work from a handle without any key search; adjacent
//! nodes can swap payloads in O(1) when two curves cross.

/// Sentinel for "no node".
pub const NIL: u32 = u32::MAX;

#[derive(Clone, Copy)]
struct Node {
    item: u32,
    prio: u64,
    left: u32,
    right: u32,
    parent: u32,
}

pub struct Treap {
    nodes: Vec<Node>,
    free: Vec<u32>,
    root: u32,
    rng: u64,
    len: usize,
}

impl Treap {
    pub fn new(seed: u64) -> Self {
        Treap { nodes: Vec::new(), free: Vec::new(), root: NIL, rng: seed | 1, len: 0 }
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn item(&self, h: u32) -> u32 {
        self.nodes[h as usize].item
    }

    fn next_prio(&mut self) -> u64 {
        // SplitMix64 step
        self.rng = self.rng.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.rng;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    fn alloc(&mut self, item: u32) -> u32 {
        let prio = self.next_prio();
        let node = Node { item, prio, left: NIL, right: NIL, parent: NIL };
        match self.free.pop() {
            Some(h) => {
                self.nodes[h as usize] = node;
                h
            }
            None => {
                self.nodes.push(node);
                (self.nodes.len() - 1) as u32
            }
        }
    }

    /// Insert `item`; `go_left(existing)` answers whether the new item
    /// orders before the existing one. Comparisons happen only on the
    /// descent path, and a comparison error leaves the treap untouched.
    pub fn insert_by<E>(
        &mut self,
        item: u32,
        mut go_left: impl FnMut(u32) -> Result<bool, E>,
    ) -> Result<u32, E> {
        if self.root == NIL {
            let h = self.alloc(item);
            self.root = h;
            self.len += 1;
            return Ok(h);
        }
        // Pure descent first so errors cannot leave a half-linked node.
        let mut cur = self.root;
        let (parent, left_side) = loop {
            let n = &self.nodes[cur as usize];
            if go_left(n.item)? {
                if n.left == NIL {
                    break (cur, true);
                }
                cur = n.left;
            } else {
                if n.right == NIL {
                    break (cur, false);
                }
                cur = n.right;
            }
        };
        let h = self.alloc(item);
        self.nodes[h as usize].parent = parent;
        if left_side {
            self.nodes[parent as usize].left = h;
        } else {
            self.nodes[parent as usize].right = h;
        }
        self.len += 1;
        // Bubble up while the heap order is violated (min-heap on prio).
        while self.nodes[h as usize].parent != NIL {
            let p = self.nodes[h as usize].parent;
            if self.nodes[h as usize].prio >= self.nodes[p as usize].prio {
                break;
            }
            self.rotate_up(h);
        }
        Ok(h)
    }

    /// Rotate `h` one step up, preserving in-order sequence.
    fn rotate_up(&mut self, h: u32) {
        let p = self.nodes[h as usize].parent;
        debug_assert_ne!(p, NIL);
        let g = self.nodes[p as usize].parent;
        let h_is_left = self.nodes[p as usize].left == h;
        let inner = if h_is_left {
            let inner = self.nodes[h as usize].right;
            self.nodes[h as usize].right = p;
            self.nodes[p as usize].left = inner;
            inner
        } else {
            let inner = self.nodes[h as usize].left;
            self.nodes[h as usize].left = p;
            self.nodes[p as usize].right = inner;
            inner
        };
        if inner != NIL {
            self.nodes[inner as usize].parent = p;
        }
        self.nodes[p as usize].parent = h;
        self.nodes[h as usize].parent = g;
        if g == NIL {
            self.root = h;
        } else if self.nodes[g as usize].left == p {
            self.nodes[g as usize].left = h;
        } else {
            self.nodes[g as usize].right = h;
        }
    }

    /// Remove the node behind `h`. The handle becomes invalid.
    pub fn remove(&mut self, h: u32) {
        // Rotate down to a leaf, then unlink.
        loop {
            let n = self.nodes[h as usize];
            if n.left == NIL && n.right == NIL {
                break;
            }
            let child = if n.left == NIL {
                n.right
            } else if n.right == NIL {
                n.left
            } else if self.nodes[n.left as usize].prio <= self.nodes[n.right as usize].prio {
                n.left
            } else {
                n.right
            };
            self.rotate_up(child);
        }
        let p = self.nodes[h as usize].parent;
        if p == NIL {
            self.root = NIL;
        } else if self.nodes[p as usize].left == h {
            self.nodes[p as usize].left = NIL;
        } else {
            self.nodes[p as usize].right = NIL;
        }
        self.free.push(h);
        self.len -= 1;
    }

    /// In-order predecessor handle.
    pub fn prev(&self, h: u32) -> Option<u32> {
        let n = &self.nodes[h as usize];
        if n.left != NIL {
            let mut cur = n.left;
            while self.nodes[cur as usize].right != NIL {
                cur = self.nodes[cur as usize].right;
            }
            return Some(cur);
        }
        let mut cur = h;
        loop {
            let p = self.nodes[cur as usize].parent;
            if p == NIL {
                return None;
            }
            if self.nodes[p as usize].right == cur {
                return Some(p);
            }
            cur = p;
        }
    }

    /// In-order successor handle.
    pub fn next(&self, h: u32) -> Option<u32> {
        let n = &self.nodes[h as usize];
        if n.right != NIL {
            let mut cur = n.right;
            while self.nodes[cur as usize].left != NIL {
                cur = self.nodes[cur as usize].left;
            }
            return Some(cur);
        }
        let mut cur = h;
        loop {
            let p = self.nodes[cur as usize].parent;
            if p == NIL {
                return None;
            }
            if self.nodes[p as usize].left == cur {
                return Some(p);
            }
            cur = p;
        }
    }

    /// Swap the payloads of two nodes. Only sound for in-order-adjacent
    /// nodes whose curves have just crossed, so the sequence stays sorted.
    pub fn swap_items(&mut self, h1: u32, h2: u32) {
        let a = self.nodes[h1 as usize].item;
        let b = self.nodes[h2 as usize].item;
        self.nodes[h1 as usize].item = b;
        self.nodes[h2 as usize].item = a;
    }

    /// Leftmost node whose item satisfies `is_after` (a monotone
    /// threshold along the in-order sequence), or `None`.
    pub fn lower_bound_by<E>(
        &self,
        mut is_after: impl FnMut(u32) -> Result<bool, E>,
    ) -> Result<Option<u32>, E> {
        let mut best = None;
        let mut cur = self.root;
        while cur != NIL {
            let n = &self.nodes[cur as usize];
            if is_after(n.item)? {
                best = Some(cur);
                cur = n.left;
            } else {
                cur = n.right;
            }
        }
        Ok(best)
    }

    #[cfg(test)]
    fn in_order(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.len);
        let mut stack = Vec::new();
        let mut cur = self.root;
        while cur != NIL || !stack.is_empty() {
            while cur != NIL {
                stack.push(cur);
                cur = self.nodes[cur as usize].left;
            }
            let h = stack.pop().unwrap();
            out.push(self.nodes[h as usize].item);
            cur = self.nodes[h as usize].right;
        }
        out
    }

    #[cfg(test)]
    fn check(&self) {
        // parent links + heap order
        fn walk(t: &Treap, h: u32, parent: u32) {
            if h == NIL {
                return;
            }
            let n = &t.nodes[h as usize];
            assert_eq!(n.parent, parent);
            if parent != NIL {
                assert!(n.prio >= t.nodes[parent as usize].prio);
            }
            walk(t, n.left, h);
            walk(t, n.right, h);
        }
        walk(self, self.root, NIL);
        assert_eq!(self.in_order().len(), self.len);
    }
}
