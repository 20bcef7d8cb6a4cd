//! Cartesian-tree position heap of a string, built right to left.
//!
//! Suffixes are inserted shortest first. For each new suffix `S[i..]` the
//! parent of the new node is found by climbing from the previously inserted
//! node until an ancestor `v` carries a reversed suffix link labeled with the
//! number of front pointers of `PD(S[i..i+|v|])`; the link target is the
//! longest prefix of `PD(S[i..])` already in the heap.

use crate::encodings::{pd_encode, pd_window_access, Char, PdSequence, SlidingPdState};
use crate::error::{Error, Result};
use crate::heap::{NodeId, PositionHeap};

/// Counters collected while building.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BuildStats {
    /// Ancestors visited while searching for reversed suffix links, summed
    /// over all insertions. Bounded by `3n`.
    pub climb_steps: usize,
    /// Child lookups performed while extending maximal reach pointers.
    pub mrp_steps: usize,
}

/// Position heap over the PD encodings of all suffixes of a text.
#[derive(Clone, Debug)]
pub struct Cph {
    text: Vec<Char>,
    pd: PdSequence,
    heap: PositionHeap,
    stats: BuildStats,
}

impl Cph {
    /// Builds the edge-sorted heap with maximal reach pointers.
    pub fn build(text: Vec<Char>) -> Result<Self> {
        if text.is_empty() {
            return Err(Error::EmptyText);
        }
        let pd = pd_encode(&text);
        let (heap, climb_steps) = construct(&text, &pd);
        let mut cph = Self {
            text,
            pd,
            heap,
            stats: BuildStats {
                climb_steps,
                mrp_steps: 0,
            },
        };
        cph.heap.finalize();
        cph.compute_mrp();
        Ok(cph)
    }

    /// Extends each node along its own suffix until the heap runs out.
    ///
    /// The walk starts at the node instead of the root: the root-to-node
    /// path is a prefix of the suffix's PD by construction.
    fn compute_mrp(&mut self) {
        let n = self.text.len();
        let mut steps = 0;
        for u in 1..self.heap.len() {
            let i = self.heap.position(u);
            let mut x = u;
            let mut d = self.heap.depth(u);
            while d < n - i + 1 {
                steps += 1;
                match self.heap.child(x, pd_window_access(&self.pd, i, d + 1)) {
                    Some(c) => {
                        x = c;
                        d += 1;
                    }
                    None => break,
                }
            }
            self.heap.set_mrp(u, x);
        }
        self.stats.mrp_steps = steps;
    }

    /// Rebuilds an index from persisted heap rows.
    pub(crate) fn from_rows(text: Vec<Char>, rows: &[(u32, u32, u32, u32)]) -> Result<Self> {
        if text.is_empty() {
            return Err(Error::EmptyText);
        }
        if rows.len() != text.len() {
            return Err(Error::InvalidIndex(format!(
                "{} heap rows for a text of length {}",
                rows.len(),
                text.len()
            )));
        }
        let heap = PositionHeap::from_rows(text.len(), rows).map_err(Error::InvalidIndex)?;
        let pd = pd_encode(&text);
        Ok(Self {
            text,
            pd,
            heap,
            stats: BuildStats::default(),
        })
    }

    pub fn text(&self) -> &[Char] {
        &self.text
    }

    /// PD encoding of the whole text.
    pub fn pd(&self) -> &PdSequence {
        &self.pd
    }

    pub fn len(&self) -> usize {
        self.text.len()
    }

    pub fn is_empty(&self) -> bool {
        self.text.is_empty()
    }

    pub fn heap(&self) -> &PositionHeap {
        &self.heap
    }

    pub fn stats(&self) -> BuildStats {
        self.stats
    }

    /// The node `u(i)` created for suffix `i`.
    pub fn node_at_position(&self, i: usize) -> Result<NodeId> {
        if i == 0 || i > self.len() {
            return Err(Error::PositionOutOfRange {
                position: i,
                len: self.len(),
            });
        }
        Ok(self.heap.node_of(i).expect("every position owns a node"))
    }

    pub fn is_descendant(&self, x: NodeId, u: NodeId) -> bool {
        self.heap.is_descendant(x, u)
    }
}

/// Right-to-left online construction. Returns the heap and the total number
/// of climb steps.
fn construct(text: &[Char], pd: &PdSequence) -> (PositionHeap, usize) {
    let n = text.len();
    let mut heap = PositionHeap::with_root(n, n, false);
    let mut window = SlidingPdState::new();

    window.prepend(text[n - 1]);
    let mut last = heap.push_leaf(0, 0, n);
    heap.set_rsl(0, 0, last);

    let mut climb_steps = 0;
    for i in (1..n).rev() {
        let fronts = window.prepend(text[i - 1]);

        // Climb from the parent of the last node; the last node itself has
        // no outgoing links yet.
        let mut below = last;
        let mut v = heap.parent(last).expect("last node is never the root");
        let (a, p) = loop {
            climb_steps += 1;
            let (up, dv) = heap.climb_view(v);
            let a = fronts.partition_point(|&f| f <= dv + 1) as u32;
            if let Some(p) = heap.rsl(v, a) {
                break (a, p);
            }
            below = v;
            v = up.expect("rsl(root, 0) always exists");
        };

        let dp = heap.climb_view(p).1;
        let label = pd_window_access(pd, i, dp + 1);
        let u = heap.push_leaf(p, label, i);
        let b = if fronts.binary_search(&(dp + 1)).is_ok() {
            a + 1
        } else {
            a
        };
        heap.set_rsl(below, b, u);
        last = u;
    }
    (heap, climb_steps)
}
