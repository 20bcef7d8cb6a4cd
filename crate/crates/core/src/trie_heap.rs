//! Cartesian-tree position heap of a reversed trie.
//!
//! One heap node is inserted per FP-trie class, shallowest classes first
//! (decreasing representative id). The parent of each new node is found by
//! walking up from the heap node of the class's FP-trie parent, one
//! front-pointer range at a time: inside the range where the expected link
//! label is `a`, the deepest ancestor marked with `a` is the link source.

use smallvec::SmallVec;

use crate::error::Result;
use crate::heap::{NodeId, PositionHeap};
use crate::trie::{FpNode, FpTrie, ReversedTrie};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TrieBuildStats {
    /// Range probes summed over all insertions.
    pub range_probes: usize,
    /// Largest number of range probes for a single insertion.
    pub max_range_probes: usize,
    /// Child steps taken below the link target before a free slot was found.
    pub extra_descents: usize,
    /// Insertions whose suffix-link source was absent, so no link was set.
    pub unlinked: usize,
    /// Child lookups performed while extending maximal reach pointers.
    pub mrp_steps: usize,
}

#[derive(Clone, Debug)]
pub struct TrieCph {
    heap: PositionHeap,
    stats: TrieBuildStats,
}

type Kids = SmallVec<[(u32, u32); 2]>;

fn kid(kids: &[Kids], v: NodeId, label: u32) -> Option<NodeId> {
    let k = &kids[v];
    k.binary_search_by_key(&label, |&(l, _)| l)
        .ok()
        .map(|j| k[j].1 as usize)
}

impl TrieCph {
    pub fn build(t: &ReversedTrie, f: &FpTrie) -> Self {
        let order = f.insertion_order();
        let mut heap = PositionHeap::with_root(t.len(), order.len(), true);
        let mut kids: Vec<Kids> = Vec::with_capacity(order.len() + 1);
        kids.push(Kids::new());
        let mut heap_of_fp = vec![0usize; f.nodes().len()];
        let mut stats = TrieBuildStats::default();

        for &w in &order {
            let node = &f.nodes()[w];
            let rep = node.id;
            let fronts = &node.fronts;
            let count_upto = |len: usize| fronts.partition_point(|&x| x as usize <= len);
            let u = heap_of_fp[node.parent];

            let mut bottom = u;
            let mut a = count_upto(heap.depth(u) + 1);
            let mut probes = 0;
            let mut p = loop {
                probes += 1;
                let top_depth = if a == 0 {
                    0
                } else {
                    fronts[a - 1] as usize - 1
                };
                let top = heap.ancestor_at_depth(bottom, top_depth);
                if heap.rsl(top, a as u32).is_some() {
                    let v = deepest_marked(&heap, bottom, top_depth, a as u32);
                    break heap.rsl(v, a as u32).unwrap();
                }
                if a == 0 {
                    // Only the very first insertion finds the root unlinked.
                    debug_assert!(heap.is_empty());
                    break 0;
                }
                bottom = heap.parent(top).expect("front pointers are >= 2");
                a -= 1;
            };
            stats.range_probes += probes;
            stats.max_range_probes = stats.max_range_probes.max(probes);

            let label = loop {
                let c = t.pd_at(rep, heap.depth(p) + 1);
                match kid(&kids, p, c) {
                    Some(x) => {
                        p = x;
                        stats.extra_descents += 1;
                    }
                    None => break c,
                }
            };
            let new = heap.push_leaf(p, label, rep);
            let slot = kids[p].partition_point(|&(l, _)| l < label);
            kids[p].insert(slot, (label, new as u32));
            kids.push(Kids::new());
            heap_of_fp[w] = new;

            let len = heap.depth(new);
            let b = count_upto(len) as u32;
            match link_source(t, &heap, &kids, node, u, len - 1) {
                Some(src) => heap.set_rsl(src, b, new),
                None => stats.unlinked += 1,
            }
        }

        let mut cph = Self { heap, stats };
        cph.heap.finalize();
        cph.compute_mrp(t);
        cph
    }

    fn compute_mrp(&mut self, t: &ReversedTrie) {
        let mut steps = 0;
        for u in 1..self.heap.len() {
            let rep = self.heap.position(u);
            let limit = t.depth(rep);
            let mut x = u;
            while self.heap.depth(x) < limit {
                steps += 1;
                match self.heap.child(x, t.pd_at(rep, self.heap.depth(x) + 1)) {
                    Some(c) => x = c,
                    None => break,
                }
            }
            self.heap.set_mrp(u, x);
        }
        self.stats.mrp_steps = steps;
    }

    pub(crate) fn from_rows(max_position: usize, rows: &[(u32, u32, u32, u32)]) -> Result<Self> {
        let heap = PositionHeap::from_rows(max_position, rows)
            .map_err(crate::error::Error::InvalidIndex)?;
        Ok(Self {
            heap,
            stats: TrieBuildStats::default(),
        })
    }

    pub fn heap(&self) -> &PositionHeap {
        &self.heap
    }

    pub fn stats(&self) -> TrieBuildStats {
        self.stats
    }

    /// Nearest ancestor-or-self of `v` carrying a reversed suffix link
    /// labeled `a`.
    pub fn nma_query(&self, v: NodeId, a: u32) -> Option<NodeId> {
        nearest_marked(&self.heap, v, a)
    }
}

fn nearest_marked(heap: &PositionHeap, mut v: NodeId, a: u32) -> Option<NodeId> {
    loop {
        if heap.rsl(v, a).is_some() {
            return Some(v);
        }
        v = heap.parent(v)?;
    }
}

/// Deepest node marked with `a` on the path from depth `top_depth` down to
/// `bottom`, given that the node at `top_depth` is marked. Marks for `a`
/// within one front-pointer range form a prefix of the path, so binary
/// search over depth finds the lowest one.
fn deepest_marked(heap: &PositionHeap, bottom: NodeId, top_depth: usize, a: u32) -> NodeId {
    let mut lo = top_depth;
    let mut hi = heap.depth(bottom);
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        if heap.rsl(heap.ancestor_at_depth(bottom, mid), a).is_some() {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    heap.ancestor_at_depth(bottom, lo)
}

/// The node spelling the first `len` PD symbols of the FP-trie parent's path
/// string, if present. `u` is the heap node of that parent.
fn link_source(
    t: &ReversedTrie,
    heap: &PositionHeap,
    kids: &[Kids],
    node: &FpNode,
    u: NodeId,
    len: usize,
) -> Option<NodeId> {
    if len <= heap.depth(u) {
        return Some(heap.ancestor_at_depth(u, len));
    }
    let parent_rep = t.parent(node.id)?;
    let mut x = u;
    for d in heap.depth(u) + 1..=len {
        x = kid(kids, x, t.pd_at(parent_rep, d))?;
    }
    Some(x)
}

/// Everything needed to answer ct-matching queries over a trie.
#[derive(Clone, Debug)]
pub struct TrieIndex {
    trie: ReversedTrie,
    fp: FpTrie,
    cph: TrieCph,
}

impl TrieIndex {
    pub fn build(trie: ReversedTrie) -> Self {
        let fp = FpTrie::build(&trie);
        let cph = TrieCph::build(&trie, &fp);
        Self { trie, fp, cph }
    }

    pub(crate) fn from_parts(trie: ReversedTrie, fp: FpTrie, cph: TrieCph) -> Self {
        Self { trie, fp, cph }
    }

    pub fn trie(&self) -> &ReversedTrie {
        &self.trie
    }

    pub fn fp_trie(&self) -> &FpTrie {
        &self.fp
    }

    pub fn cph(&self) -> &TrieCph {
        &self.cph
    }

    pub fn heap(&self) -> &PositionHeap {
        self.cph.heap()
    }
}
