//! Reversed tries: input parsing, canonical ids, ancestor queries and
//! random access to the PD encoding of any root-ward path string.
//!
//! Node ids are bottom-up level-order ranks: the deepest level is numbered
//! first and the root gets the largest id `N`. The path string of a node `x`
//! reads edge labels from `x` up to the root, so the path strings of `x`'s
//! ancestors are exactly its suffixes.

use std::cmp::Ordering;
use std::collections::HashMap;

use crate::encodings::Char;
use crate::error::{Error, Result};

/// Binary-lifting ancestor table over a forest given by parent pointers.
/// Roots point to themselves.
#[derive(Clone, Debug)]
pub(crate) struct JumpTable {
    levels: Vec<Vec<u32>>,
}

impl JumpTable {
    pub(crate) fn new(parent: Vec<u32>) -> Self {
        let n = parent.len();
        let mut levels = vec![parent];
        let mut span = 1usize;
        while span < n {
            let prev = levels.last().unwrap();
            let next: Vec<u32> = prev.iter().map(|&p| prev[p as usize]).collect();
            levels.push(next);
            span <<= 1;
        }
        Self { levels }
    }

    /// Follows `steps` parent pointers from `x`.
    #[inline]
    pub(crate) fn jump(&self, mut x: usize, mut steps: usize) -> usize {
        let mut k = 0;
        while steps > 0 {
            if steps & 1 == 1 {
                x = self.levels[k][x] as usize;
            }
            steps >>= 1;
            k += 1;
        }
        x
    }
}

/// A labeled tree read leaf to root.
#[derive(Clone, Debug)]
pub struct ReversedTrie {
    // All per-node vectors are indexed by canonical id; slot 0 is unused.
    parent: Vec<u32>,
    label: Vec<Char>,
    depth: Vec<u32>,
    child_start: Vec<u32>,
    child_ids: Vec<u32>,
    alphabet: Vec<Char>,
    rank: Vec<u32>,
    // Row-major (node, label rank) tables.
    na: Vec<u32>,
    cnt: Vec<u32>,
    up: JumpTable,
    chain: JumpTable,
}

/// Unvalidated description of a trie: `parents[k]` is the index of node
/// `k`'s parent (`None` for the root) and `labels[k]` the label on the edge
/// above it.
struct RawTrie<'a> {
    parents: &'a [Option<usize>],
    labels: &'a [Char],
}

impl ReversedTrie {
    /// Builds a trie from parent indices; ties inside a level are broken by
    /// ascending input index.
    pub fn from_parents(parents: &[Option<usize>], labels: &[Char]) -> Result<Self> {
        let (trie, _) = Self::canonicalize(RawTrie { parents, labels }, |a, b| a.cmp(&b))?;
        Ok(trie)
    }

    /// The chain whose leaf spells `s` (leaf to root). Node ids coincide with
    /// text positions: `str(i) = s[i..]`.
    pub fn chain(s: &[Char]) -> Result<Self> {
        let n = s.len();
        // Input index d is the node at depth d; its edge carries s[n - d].
        let parents: Vec<Option<usize>> = (0..=n).map(|d| d.checked_sub(1)).collect();
        let labels: Vec<Char> = (0..=n).map(|d| if d == 0 { 0 } else { s[n - d] }).collect();
        Self::from_parents(&parents, &labels)
    }

    fn canonicalize(
        raw: RawTrie<'_>,
        tie: impl Fn(usize, usize) -> Ordering,
    ) -> Result<(Self, Vec<usize>)> {
        let total = raw.parents.len();
        let roots: Vec<usize> = (0..total).filter(|&k| raw.parents[k].is_none()).collect();
        let root = match roots.as_slice() {
            [] => return Err(Error::TrieShape("no root".into())),
            [r] => *r,
            _ => return Err(Error::TrieShape(format!("{} roots", roots.len()))),
        };

        let mut kids: Vec<Vec<usize>> = vec![Vec::new(); total];
        for (k, p) in raw.parents.iter().enumerate() {
            if let Some(p) = *p {
                if p >= total {
                    return Err(Error::TrieShape(format!("node {k} has unknown parent {p}")));
                }
                kids[p].push(k);
            }
        }
        for (p, ks) in kids.iter().enumerate() {
            let mut seen: Vec<Char> = ks.iter().map(|&k| raw.labels[k]).collect();
            seen.sort_unstable();
            if let Some(w) = seen.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::TrieShape(format!(
                    "node {p} has two children labeled {}",
                    w[0]
                )));
            }
        }

        let mut depth = vec![u32::MAX; total];
        depth[root] = 0;
        let mut bfs = vec![root];
        let mut head = 0;
        while head < bfs.len() {
            let v = bfs[head];
            head += 1;
            for &c in &kids[v] {
                depth[c] = depth[v] + 1;
                bfs.push(c);
            }
        }
        if bfs.len() != total {
            return Err(Error::TrieShape("cycle or unreachable node".into()));
        }

        let mut order: Vec<usize> = (0..total).collect();
        order.sort_by(|&a, &b| depth[b].cmp(&depth[a]).then_with(|| tie(a, b)));
        let mut canon = vec![0usize; total];
        for (rank, &k) in order.iter().enumerate() {
            canon[k] = rank + 1;
        }

        let n = total;
        let mut parent = vec![0u32; n + 1];
        let mut label = vec![0; n + 1];
        let mut dep = vec![0u32; n + 1];
        for k in 0..total {
            let id = canon[k];
            parent[id] = raw.parents[k].map_or(id as u32, |p| canon[p] as u32);
            label[id] = if k == root { 0 } else { raw.labels[k] };
            dep[id] = depth[k];
        }
        Ok((Self::assemble(parent, label, dep), canon))
    }

    /// Derives children lists and ancestor tables. `parent[root] == root`.
    fn assemble(parent: Vec<u32>, label: Vec<Char>, depth: Vec<u32>) -> Self {
        let n = parent.len() - 1;
        let root = n;

        let mut child_start = vec![0u32; n + 2];
        for id in 1..n {
            child_start[parent[id] as usize + 1] += 1;
        }
        for k in 1..child_start.len() {
            child_start[k] += child_start[k - 1];
        }
        let mut fill = child_start.clone();
        let mut child_ids = vec![0u32; n.saturating_sub(1)];
        for (id, &p) in parent.iter().enumerate().take(n).skip(1) {
            let p = p as usize;
            child_ids[fill[p] as usize] = id as u32;
            fill[p] += 1;
        }

        let mut alphabet: Vec<Char> = label[1..n].to_vec();
        alphabet.sort_unstable();
        alphabet.dedup();
        let sigma = alphabet.len();
        let mut rank = vec![0u32; n + 1];
        for id in 1..n {
            rank[id] = alphabet.binary_search(&label[id]).unwrap() as u32;
        }

        // Parents always carry larger ids, so descending id order visits
        // every parent before its children.
        let mut na = vec![root as u32; (n + 1) * sigma];
        let mut cnt = vec![0u32; (n + 1) * sigma];
        for id in (1..n).rev() {
            let p = parent[id] as usize;
            for a in 0..sigma {
                let from_parent = na[p * sigma + a];
                na[id * sigma + a] = if p != root && rank[p] as usize == a {
                    p as u32
                } else {
                    from_parent
                };
                cnt[id * sigma + a] = cnt[p * sigma + a];
            }
            cnt[id * sigma + rank[id] as usize] += 1;
        }

        let mut pred = vec![0u32; n + 1];
        pred[root] = root as u32;
        for id in 1..n {
            pred[id] = na[id * sigma + rank[id] as usize];
        }
        let mut up_parent = parent.clone();
        up_parent[0] = 0;
        let mut chain_parent = pred;
        chain_parent[0] = 0;

        Self {
            up: JumpTable::new(up_parent),
            chain: JumpTable::new(chain_parent),
            parent,
            label,
            depth,
            child_start,
            child_ids,
            alphabet,
            rank,
            na,
            cnt,
        }
    }

    /// Number of nodes `N`, root included.
    pub fn len(&self) -> usize {
        self.parent.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn root(&self) -> usize {
        self.len()
    }

    pub fn parent(&self, x: usize) -> Option<usize> {
        (x != self.root()).then(|| self.parent[x] as usize)
    }

    /// Label of the edge above `x`.
    pub fn label(&self, x: usize) -> Char {
        self.label[x]
    }

    pub fn depth(&self, x: usize) -> usize {
        self.depth[x] as usize
    }

    pub fn height(&self) -> usize {
        self.depth[1] as usize
    }

    /// Children in the root-to-leaf orientation.
    pub fn children(&self, x: usize) -> &[u32] {
        &self.child_ids[self.child_start[x] as usize..self.child_start[x + 1] as usize]
    }

    /// Distinct edge labels, ascending.
    pub fn alphabet(&self) -> &[Char] {
        &self.alphabet
    }

    /// The root-ward path string of `x`.
    pub fn path_string(&self, mut x: usize) -> Vec<Char> {
        let mut out = Vec::with_capacity(self.depth(x));
        while x != self.root() {
            out.push(self.label[x]);
            x = self.parent[x] as usize;
        }
        out
    }

    /// The `j`-th ancestor of `x`.
    pub fn level_anc(&self, x: usize, j: usize) -> Result<usize> {
        if j > self.depth(x) {
            return Err(Error::AncestorOutOfRange {
                distance: j,
                depth: self.depth(x),
            });
        }
        Ok(self.up.jump(x, j))
    }

    #[inline]
    pub(crate) fn anc(&self, x: usize, j: usize) -> usize {
        self.up.jump(x, j)
    }

    /// Deepest proper ancestor of `x` whose edge carries `a`, or the root.
    pub fn na(&self, x: usize, a: Char) -> usize {
        match self.alphabet.binary_search(&a) {
            Ok(r) => self.na[x * self.alphabet.len() + r] as usize,
            Err(_) => self.root(),
        }
    }

    /// Number of `a`-labeled edges between `x` and the root.
    pub fn cnt(&self, x: usize, a: Char) -> usize {
        match self.alphabet.binary_search(&a) {
            Ok(r) => self.cnt[x * self.alphabet.len() + r] as usize,
            Err(_) => 0,
        }
    }

    /// `PD(str(x))[l]`, for `1 <= l <= depth(x)`.
    pub fn pd_access(&self, x: usize, l: usize) -> Result<u32> {
        if l == 0 || l > self.depth(x) {
            return Err(Error::PositionOutOfRange {
                position: l,
                len: self.depth(x),
            });
        }
        Ok(self.pd_at(x, l))
    }

    /// Unchecked [`pd_access`](Self::pd_access).
    ///
    /// Position `l` of `str(x)` is the edge above `z = anc(x, l - 1)`. Its
    /// nearest left neighbor with a label `<= label(z)` is the shallowest
    /// node strictly below `z` carrying such a label. Per label, that node is
    /// located by jumping along the label's predecessor chain from the
    /// deepest occurrence.
    pub(crate) fn pd_at(&self, x: usize, l: usize) -> u32 {
        let z = self.anc(x, l - 1);
        let sigma = self.alphabet.len();
        let dz = self.depth[z];
        let mut best = u32::MAX;
        for a in 0..=self.rank[z] as usize {
            let inside = self.cnt[x * sigma + a] - self.cnt[z * sigma + a];
            if inside == 0 {
                continue;
            }
            let deepest = if self.rank[x] as usize == a {
                x
            } else {
                self.na[x * sigma + a] as usize
            };
            let y = self.chain.jump(deepest, inside as usize - 1);
            best = best.min(self.depth[y] - dz);
        }
        if best == u32::MAX {
            0
        } else {
            best
        }
    }
}

/// A parsed trie document together with its external-to-canonical id map.
#[derive(Clone, Debug)]
pub struct ParsedTrie {
    pub trie: ReversedTrie,
    /// `(external id, canonical id)` in input order.
    pub ids: Vec<(String, usize)>,
}

impl ParsedTrie {
    /// Two-column `external canonical` listing.
    pub fn id_map_document(&self) -> String {
        let mut out = String::new();
        for (ext, id) in &self.ids {
            out.push_str(ext);
            out.push(' ');
            out.push_str(&id.to_string());
            out.push('\n');
        }
        out
    }
}

/// Parses `<id> <parent|-> [label]` lines. Blank lines and `#` comments are
/// ignored. Within a level, canonical ids follow ascending external id:
/// numerically when every id is an integer, lexicographically otherwise.
pub fn parse_trie(doc: &str) -> Result<ParsedTrie> {
    let mut ext: Vec<String> = Vec::new();
    let mut parent_tokens: Vec<Option<(String, usize)>> = Vec::new();
    let mut labels: Vec<Char> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();

    for (k, line) in doc.lines().enumerate() {
        let line_no = k + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let syntax = |message: &str| Error::TrieSyntax {
            line: line_no,
            message: message.to_string(),
        };
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let (id, parent, label) = match tokens.as_slice() {
            [id, "-"] => (*id, None, 0),
            [_, "-", _] => return Err(syntax("root line must not carry a label")),
            [id, parent, label] => {
                let label = label
                    .parse::<Char>()
                    .map_err(|_| syntax(&format!("bad label {label:?}")))?;
                (*id, Some(parent.to_string()), label)
            }
            [_, _] => return Err(syntax("non-root line needs a label")),
            _ => return Err(syntax("expected `<id> <parent|-> [label]`")),
        };
        if index.insert(id.to_string(), ext.len()).is_some() {
            return Err(syntax(&format!("duplicate id {id:?}")));
        }
        ext.push(id.to_string());
        parent_tokens.push(parent.map(|p| (p, line_no)));
        labels.push(label);
    }

    let mut parents = Vec::with_capacity(ext.len());
    for tok in &parent_tokens {
        parents.push(match tok {
            None => None,
            Some((p, line)) => Some(*index.get(p).ok_or_else(|| Error::TrieSyntax {
                line: *line,
                message: format!("unknown parent {p:?}"),
            })?),
        });
    }

    let numeric: Option<Vec<u64>> = ext.iter().map(|e| e.parse::<u64>().ok()).collect();
    let raw = RawTrie {
        parents: &parents,
        labels: &labels,
    };
    let (trie, canon) = match &numeric {
        Some(keys) => ReversedTrie::canonicalize(raw, |a, b| keys[a].cmp(&keys[b]))?,
        None => ReversedTrie::canonicalize(raw, |a, b| ext[a].cmp(&ext[b]))?,
    };
    let ids = ext.into_iter().zip(canon).collect();
    Ok(ParsedTrie { trie, ids })
}

/// A node of the FP-trie: one equivalence class of ct-matching path strings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpNode {
    /// Representative: the smallest canonical id in the class (root: `N`).
    pub id: usize,
    /// Index of the parent FP-trie node; the root points to itself.
    pub parent: usize,
    /// FP value of the first character of the class's path strings.
    pub fp: u32,
    pub depth: usize,
    /// Canonical ids of the class, ascending.
    pub members: Vec<usize>,
    /// Front pointers of the representative's PD, ascending.
    pub fronts: Vec<u32>,
}

/// Quotient of a reversed trie by ct-equivalence of path strings.
#[derive(Clone, Debug)]
pub struct FpTrie {
    // Index 0 is the root.
    nodes: Vec<FpNode>,
    of_node: Vec<u32>,
    by_id: HashMap<usize, usize>,
}

impl FpTrie {
    /// Depth-first traversal carrying one sliding PD window for the current
    /// root-ward path. Descending prepends the child's label; backtracking
    /// restores the window from the saved resolved entries.
    pub fn build(t: &ReversedTrie) -> Self {
        let root = t.root();
        let mut nodes = vec![FpNode {
            id: root,
            parent: 0,
            fp: 0,
            depth: 0,
            members: Vec::new(),
            fronts: Vec::new(),
        }];
        let mut kids: Vec<Vec<(u32, u32)>> = vec![Vec::new()];
        let mut of_node = vec![0u32; t.len() + 1];

        let mut window = crate::encodings::SlidingPdState::new();
        let mut undo: Vec<(usize, Char)> = Vec::new();
        let mut frames: Vec<(usize, usize, usize)> = vec![(root, 0, 0)];
        while let Some(frame) = frames.last_mut() {
            let (y, next, undo_start) = *frame;
            let ys = t.children(y);
            if next < ys.len() {
                frame.1 += 1;
                let x = ys[next] as usize;
                let fronts = window.prepend(t.label(x));
                let fp = fronts.len() as u32;
                let py = of_node[y] as usize;
                let slot = match kids[py].iter().find(|&&(f, _)| f == fp) {
                    Some(&(_, c)) => c as usize,
                    None => {
                        let c = nodes.len();
                        nodes.push(FpNode {
                            id: usize::MAX,
                            parent: py,
                            fp,
                            depth: nodes[py].depth + 1,
                            members: Vec::new(),
                            fronts: Vec::new(),
                        });
                        kids.push(Vec::new());
                        kids[py].push((fp, c as u32));
                        c
                    }
                };
                let node = &mut nodes[slot];
                if x < node.id {
                    node.id = x;
                    node.fronts = fronts.iter().map(|&f| f as u32).collect();
                }
                node.members.push(x);
                of_node[x] = slot as u32;

                let start = undo.len();
                undo.extend_from_slice(window.last_removed());
                frames.push((x, 0, start));
            } else {
                frames.pop();
                if y != root {
                    window.retract(&undo[undo_start..]);
                    undo.truncate(undo_start);
                }
            }
        }

        let mut by_id = HashMap::with_capacity(nodes.len());
        for (k, node) in nodes.iter_mut().enumerate() {
            node.members.sort_unstable();
            by_id.insert(node.id, k);
        }
        Self {
            nodes,
            of_node,
            by_id,
        }
    }

    /// Reassembles an FP-trie from persisted nodes (index 0 = root).
    pub(crate) fn from_nodes(t: &ReversedTrie, nodes: Vec<FpNode>) -> Result<Self> {
        let bad = |m: String| Error::InvalidIndex(m);
        if nodes.is_empty() || nodes[0].id != t.root() {
            return Err(bad("FP-trie must start with the root".into()));
        }
        let mut of_node = vec![u32::MAX; t.len() + 1];
        of_node[t.root()] = 0;
        let mut by_id = HashMap::with_capacity(nodes.len());
        for (k, node) in nodes.iter().enumerate() {
            if k > 0 {
                if node.parent >= k {
                    return Err(bad(format!(
                        "FP node {k}: parent {} not earlier",
                        node.parent
                    )));
                }
                if node.members.first() != Some(&node.id) {
                    return Err(bad(format!("FP node {k}: id is not the least member")));
                }
                for &x in &node.members {
                    if x == 0 || x >= t.len() || of_node[x] != u32::MAX {
                        return Err(bad(format!("FP node {k}: bad member {x}")));
                    }
                    of_node[x] = k as u32;
                }
            }
            by_id.insert(node.id, k);
        }
        if of_node[1..].contains(&u32::MAX) {
            return Err(bad("FP-trie classes do not cover the trie".into()));
        }
        Ok(Self {
            nodes,
            of_node,
            by_id,
        })
    }

    /// Nodes, root first.
    pub fn nodes(&self) -> &[FpNode] {
        &self.nodes
    }

    /// Number of classes `N'` (the root is not a class).
    pub fn class_count(&self) -> usize {
        self.nodes.len() - 1
    }

    /// FP-trie node index holding trie node `x`.
    pub fn node_of(&self, x: usize) -> usize {
        self.of_node[x] as usize
    }

    /// FP-trie node index with representative `id`.
    pub fn index_of_id(&self, id: usize) -> Option<usize> {
        self.by_id.get(&id).copied()
    }

    /// Non-root node indices ordered by decreasing representative id.
    pub fn insertion_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (1..self.nodes.len()).collect();
        order.sort_unstable_by(|&a, &b| self.nodes[b].id.cmp(&self.nodes[a].id));
        order
    }

    /// FP labels from node `v` up to the root.
    pub fn fp_path(&self, mut v: usize) -> Vec<u32> {
        let mut out = Vec::new();
        while v != 0 {
            out.push(self.nodes[v].fp);
            v = self.nodes[v].parent;
        }
        out
    }
}
