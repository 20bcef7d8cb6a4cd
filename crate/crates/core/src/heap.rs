//! Topology shared by the string and trie position heaps.
//!
//! Nodes are numbered in insertion order with the root at 0. Each non-root
//! node remembers the text position (string) or FP-trie id (trie) whose
//! suffix created it. Reversed suffix links are only populated while a heap
//! is being built; a heap loaded from disk has none.

use std::collections::HashMap;

use smallvec::SmallVec;

pub(crate) const NIL: u32 = u32::MAX;

/// Index of a heap node; the root is 0.
pub type NodeId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HeapNode {
    /// Position (or FP-trie id) that created the node; 0 for the root.
    pub position: u32,
    /// Parent index; [`u32::MAX`] for the root.
    pub parent: u32,
    /// Label of the edge from the parent; 0 for the root.
    pub label: u32,
    pub depth: u32,
    /// Maximal reach pointer. Self when the walk ends at the node itself.
    pub mrp: u32,
}

type LinkMap = SmallVec<[(u32, u32); 2]>;

// Set on a head label when the node has further links in `rsl_more`.
const MORE: u32 = 1 << 31;

// What a climb reads at each ancestor, kept together.
#[derive(Clone, Copy, Debug)]
struct Slot {
    parent: u32,
    depth: u32,
    label: u32,
    target: u32,
}

#[derive(Clone, Debug)]
pub struct PositionHeap {
    nodes: Vec<HeapNode>,
    pos_to_node: Vec<u32>,
    // Skew-binary jump pointers; support level-ancestor queries while the
    // heap grows leaf by leaf. Empty when not requested.
    jump: Vec<u32>,
    // First link of each node inline, label NIL when absent; later links
    // go to the side table.
    slots: Vec<Slot>,
    rsl_more: HashMap<u32, LinkMap>,
    rsl_writes: usize,

    child_start: Vec<u32>,
    child_ids: Vec<u32>,
    child_labels: Vec<u32>,
    pre_in: Vec<u32>,
    pre_out: Vec<u32>,
    order: Vec<u32>,
    rank: Vec<u32>,
    height: u32,
}

impl PositionHeap {
    /// A heap holding only the root, for positions `1..=max_position`.
    /// With `level_ancestor`, jump pointers are kept for
    /// [`ancestor_at_depth`](Self::ancestor_at_depth).
    pub(crate) fn with_root(max_position: usize, capacity: usize, level_ancestor: bool) -> Self {
        let mut nodes = Vec::with_capacity(capacity + 1);
        nodes.push(HeapNode {
            position: 0,
            parent: NIL,
            label: 0,
            depth: 0,
            mrp: 0,
        });
        let mut jump = Vec::new();
        if level_ancestor {
            jump.reserve(capacity + 1);
            jump.push(0);
        }
        let mut slots = Vec::with_capacity(capacity + 1);
        slots.push(Slot {
            parent: NIL,
            depth: 0,
            label: NIL,
            target: 0,
        });
        Self {
            nodes,
            pos_to_node: vec![NIL; max_position + 1],
            jump,
            slots,
            rsl_more: HashMap::new(),
            rsl_writes: 0,
            child_start: Vec::new(),
            child_ids: Vec::new(),
            child_labels: Vec::new(),
            pre_in: Vec::new(),
            pre_out: Vec::new(),
            order: Vec::new(),
            rank: Vec::new(),
            height: 0,
        }
    }

    /// Appends a leaf under `parent`.
    pub(crate) fn push_leaf(&mut self, parent: NodeId, label: u32, position: usize) -> NodeId {
        let id = self.nodes.len();
        let depth = self.nodes[parent].depth + 1;
        self.nodes.push(HeapNode {
            position: position as u32,
            parent: parent as u32,
            label,
            depth,
            mrp: id as u32,
        });
        if !self.jump.is_empty() {
            let j1 = self.jump[parent] as usize;
            let j2 = self.jump[j1] as usize;
            let d = |v: usize| self.nodes[v].depth;
            let jump = if parent != 0 && d(parent) - d(j1) == d(j1) - d(j2) {
                j2
            } else {
                parent
            };
            self.jump.push(jump as u32);
        }
        self.slots.push(Slot {
            parent: parent as u32,
            depth,
            label: NIL,
            target: 0,
        });
        debug_assert_eq!(self.pos_to_node[position], NIL);
        self.pos_to_node[position] = id as u32;
        self.height = self.height.max(depth);
        id
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.len() == 1
    }

    pub fn nodes(&self) -> &[HeapNode] {
        &self.nodes
    }

    pub fn node(&self, v: NodeId) -> &HeapNode {
        &self.nodes[v]
    }

    pub fn height(&self) -> usize {
        self.height as usize
    }

    #[inline]
    pub fn depth(&self, v: NodeId) -> usize {
        self.nodes[v].depth as usize
    }

    #[inline]
    pub fn parent(&self, v: NodeId) -> Option<NodeId> {
        let p = self.nodes[v].parent;
        (p != NIL).then_some(p as usize)
    }

    #[inline]
    pub fn label(&self, v: NodeId) -> u32 {
        self.nodes[v].label
    }

    #[inline]
    pub fn position(&self, v: NodeId) -> usize {
        self.nodes[v].position as usize
    }

    #[inline]
    pub fn mrp(&self, v: NodeId) -> NodeId {
        self.nodes[v].mrp as usize
    }

    pub(crate) fn set_mrp(&mut self, v: NodeId, target: NodeId) {
        self.nodes[v].mrp = target as u32;
    }

    /// Node created for `position`, if any.
    #[inline]
    pub fn node_of(&self, position: usize) -> Option<NodeId> {
        self.pos_to_node
            .get(position)
            .copied()
            .filter(|&v| v != NIL)
            .map(|v| v as usize)
    }

    /// Ancestor-or-self of `v` at depth `depth`. Logarithmic with jump
    /// pointers, a parent walk otherwise.
    pub fn ancestor_at_depth(&self, mut v: NodeId, depth: usize) -> NodeId {
        debug_assert!(depth <= self.depth(v));
        if self.jump.is_empty() {
            while self.depth(v) > depth {
                v = self.nodes[v].parent as usize;
            }
            return v;
        }
        while self.depth(v) > depth {
            let j = self.jump[v] as usize;
            v = if self.depth(j) >= depth {
                j
            } else {
                self.nodes[v].parent as usize
            };
        }
        v
    }

    /// Parent and depth as seen by construction, read from the same slot
    /// as the links.
    #[inline]
    pub(crate) fn climb_view(&self, v: NodeId) -> (Option<NodeId>, usize) {
        let s = &self.slots[v];
        (
            (s.parent != NIL).then_some(s.parent as usize),
            s.depth as usize,
        )
    }

    /// Reversed suffix link `rsl(v, a)`.
    #[inline]
    pub fn rsl(&self, v: NodeId, a: u32) -> Option<NodeId> {
        let Slot {
            label: head,
            target: t,
            ..
        } = self.slots[v];
        if head == NIL {
            return None;
        }
        if head & !MORE == a {
            return Some(t as usize);
        }
        if head & MORE == 0 {
            return None;
        }
        let links = &self.rsl_more[&(v as u32)];
        links
            .binary_search_by_key(&a, |&(k, _)| k)
            .ok()
            .map(|k| links[k].1 as usize)
    }

    /// All `(label, target)` links leaving `v`, ascending by label.
    pub fn rsl_entries(&self, v: NodeId) -> impl Iterator<Item = (u32, NodeId)> + '_ {
        let Slot {
            label: head,
            target: t,
            ..
        } = self.slots[v];
        let mut all = LinkMap::new();
        if head != NIL {
            all.push((head & !MORE, t));
            if head & MORE != 0 {
                all.extend_from_slice(&self.rsl_more[&(v as u32)]);
            }
        }
        all.sort_unstable();
        all.into_iter().map(|(a, t)| (a, t as usize))
    }

    /// Records `rsl(v, a) = target`. Every link is written once.
    pub(crate) fn set_rsl(&mut self, v: NodeId, a: u32, target: NodeId) {
        assert!(a < MORE, "link label {a} out of range");
        if self.rsl(v, a).is_some() {
            panic!("reversed suffix link ({v}, {a}) written twice");
        }
        let slot = &mut self.slots[v];
        if slot.label == NIL {
            slot.label = a;
            slot.target = target as u32;
        } else {
            slot.label |= MORE;
            let links = self.rsl_more.entry(v as u32).or_default();
            let k = links.partition_point(|&(x, _)| x < a);
            links.insert(k, (a, target as u32));
        }
        self.rsl_writes += 1;
    }

    /// Number of link writes performed during construction.
    pub fn rsl_writes(&self) -> usize {
        self.rsl_writes
    }

    /// Sorts children by label with a two-pass counting sort and assigns
    /// Euler-tour intervals so that ancestry is interval containment.
    pub(crate) fn finalize(&mut self) {
        let n = self.nodes.len();
        let max_label = self.nodes[1..].iter().map(|x| x.label).max().unwrap_or(0) as usize;

        // Pass 1: by label.
        let mut count = vec![0u32; max_label + 2];
        for x in &self.nodes[1..] {
            count[x.label as usize + 1] += 1;
        }
        for k in 1..count.len() {
            count[k] += count[k - 1];
        }
        let mut by_label = vec![(0u32, 0u32); n - 1];
        for (v, x) in self.nodes.iter().enumerate().skip(1) {
            let slot = &mut count[x.label as usize];
            by_label[*slot as usize] = (x.parent, v as u32);
            *slot += 1;
        }

        // Pass 2: stable by parent, which yields the CSR layout directly.
        let mut start = vec![0u32; n + 1];
        for x in &self.nodes[1..] {
            start[x.parent as usize + 1] += 1;
        }
        for k in 1..start.len() {
            start[k] += start[k - 1];
        }
        let mut fill = start.clone();
        let mut child_ids = vec![0u32; n - 1];
        for &(p, v) in &by_label {
            child_ids[fill[p as usize] as usize] = v;
            fill[p as usize] += 1;
        }
        self.child_labels = child_ids
            .iter()
            .map(|&c| self.nodes[c as usize].label)
            .collect();
        drop(by_label);
        self.child_start = start;
        self.child_ids = child_ids;

        // Children are created after their parents, so subtree sizes come
        // from one backward sweep and preorder ranks from one forward sweep.
        let mut size = vec![1u32; n];
        for v in (1..n).rev() {
            size[self.nodes[v].parent as usize] += size[v];
        }
        let mut rank = vec![0u32; n];
        for v in 0..n {
            let mut next = rank[v] + 1;
            for &c in self.children(v) {
                rank[c as usize] = next;
                next += size[c as usize];
            }
        }
        let mut order = vec![0u32; n];
        let mut pre_in = vec![0u32; n];
        let mut pre_out = vec![0u32; n];
        for v in 0..n {
            let r = rank[v];
            order[r as usize] = v as u32;
            // Before entering v: r entries and r - depth exits.
            pre_in[v] = 2 * r - self.nodes[v].depth + 1;
            pre_out[v] = pre_in[v] + 2 * size[v] - 1;
        }
        self.pre_in = pre_in;
        self.pre_out = pre_out;
        self.order = order;
        self.rank = rank;
    }

    /// Children of `v` ordered by label. Requires a finalized heap.
    pub fn children(&self, v: NodeId) -> &[u32] {
        let lo = self.child_start[v] as usize;
        let hi = self.child_start[v + 1] as usize;
        &self.child_ids[lo..hi]
    }

    /// Child of `v` along `label`, by binary search.
    #[inline]
    pub fn child(&self, v: NodeId, label: u32) -> Option<NodeId> {
        let lo = self.child_start[v] as usize;
        let hi = self.child_start[v + 1] as usize;
        self.child_labels[lo..hi]
            .binary_search(&label)
            .ok()
            .map(|k| self.child_ids[lo + k] as usize)
    }

    /// Euler-tour interval of `v`.
    pub fn interval(&self, v: NodeId) -> (u32, u32) {
        (self.pre_in[v], self.pre_out[v])
    }

    /// Descendant-or-self test.
    #[inline]
    pub fn is_descendant(&self, x: NodeId, u: NodeId) -> bool {
        self.pre_in[u] <= self.pre_in[x] && self.pre_out[x] <= self.pre_out[u]
    }

    /// `u` and all its descendants, in preorder.
    pub fn subtree(&self, u: NodeId) -> &[u32] {
        let size = (self.pre_out[u] - self.pre_in[u]).div_ceil(2) as usize;
        let lo = self.rank[u] as usize;
        &self.order[lo..lo + size]
    }

    /// Path label from the root to `v`.
    pub fn path_label(&self, mut v: NodeId) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.depth(v));
        while let Some(p) = self.parent(v) {
            out.push(self.label(v));
            v = p;
        }
        out.reverse();
        out
    }

    /// Rebuilds a heap from its persisted rows, one per non-root node in
    /// insertion order: `(position, parent, label, mrp)`.
    pub(crate) fn from_rows(
        max_position: usize,
        rows: &[(u32, u32, u32, u32)],
    ) -> Result<Self, String> {
        let mut heap = Self::with_root(max_position, rows.len(), false);
        for (k, &(position, parent, label, _)) in rows.iter().enumerate() {
            let id = k + 1;
            if parent as usize >= id {
                return Err(format!("node {id}: parent {parent} is not an earlier node"));
            }
            let position = position as usize;
            if position == 0 || position > max_position {
                return Err(format!("node {id}: position {position} out of range"));
            }
            if heap.pos_to_node[position] != NIL {
                return Err(format!("node {id}: position {position} repeated"));
            }
            heap.push_leaf(parent as usize, label, position);
        }
        for (k, &(_, _, _, mrp)) in rows.iter().enumerate() {
            if mrp as usize > rows.len() {
                return Err(format!("node {}: mrp {mrp} out of range", k + 1));
            }
            heap.set_mrp(k + 1, mrp as usize);
        }
        heap.finalize();
        Ok(heap)
    }

    /// Persisted rows; inverse of [`from_rows`](Self::from_rows).
    pub(crate) fn rows(&self) -> Vec<(u32, u32, u32, u32)> {
        self.nodes[1..]
            .iter()
            .map(|x| (x.position, x.parent, x.label, x.mrp))
            .collect()
    }
}
