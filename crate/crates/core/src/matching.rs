//! Ct-matching queries over a finalized heap.
//!
//! The pattern is cut greedily into blocks, each the longest prefix of the
//! remainder (re-encoded from its own start) that the heap spells. With one
//! block, occurrences are read off the subtree plus the ancestors whose mrp
//! lands inside it. With several, candidates come from the path to the first
//! block node, are filtered block by block with the descendant test, and
//! are finally verified at the zero positions of each block.

use crate::encodings::{pd_encode, pd_window_access, Char, PdSequence};
use crate::error::{Error, Result};
use crate::heap::{NodeId, PositionHeap};
use crate::string_heap::Cph;
use crate::trie_heap::TrieIndex;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Block {
    pub node: NodeId,
    /// 1-based start inside the pattern.
    pub start: usize,
    pub len: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub blocks: Vec<Block>,
}

impl Factorization {
    pub fn k(&self) -> usize {
        self.blocks.len()
    }

    /// Total length of the first `l` blocks.
    pub fn lsum(&self, l: usize) -> usize {
        self.blocks[..l].iter().map(|b| b.len).sum()
    }
}

/// Greedy left-to-right factorization of a pattern with PD `pd_p`.
///
/// Panics if the heap has no 0-child under the root (empty heap).
pub fn factorize(heap: &PositionHeap, pd_p: &PdSequence) -> Factorization {
    let m = pd_p.len();
    let mut blocks = Vec::new();
    let mut start = 1;
    while start <= m {
        let mut v = 0;
        let mut len = 0;
        while start + len <= m {
            match heap.child(v, pd_window_access(pd_p, start, len + 1)) {
                Some(x) => {
                    v = x;
                    len += 1;
                }
                None => break,
            }
        }
        assert!(len > 0, "heap has no child along 0 under the root");
        blocks.push(Block {
            node: v,
            start,
            len,
        });
        start += len;
    }
    Factorization { blocks }
}

/// Per-query counters.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct QueryTrace {
    pub blocks: usize,
    /// Candidates produced from the first block (multi-block queries only).
    pub candidates: usize,
    /// Candidates left after the descendant filter.
    pub survivors: usize,
    /// Text-side symbols compared during verification, summed.
    pub verify_probes: usize,
}

/// Text side of a query: heap positions are text positions for strings and
/// FP-trie representatives for tries.
trait Text {
    fn heap(&self) -> &PositionHeap;
    fn max_len(&self) -> usize;
    fn suffix_len(&self, pos: usize) -> usize;
    /// Position whose suffix starts `off` symbols after that of `pos`.
    fn shift(&self, pos: usize, off: usize) -> usize;
    /// `j`-th PD symbol of the suffix at `pos`.
    fn pd_at(&self, pos: usize, j: usize) -> u32;
}

impl Text for Cph {
    fn heap(&self) -> &PositionHeap {
        Cph::heap(self)
    }
    fn max_len(&self) -> usize {
        self.len()
    }
    fn suffix_len(&self, pos: usize) -> usize {
        self.len() - pos + 1
    }
    fn shift(&self, pos: usize, off: usize) -> usize {
        pos + off
    }
    fn pd_at(&self, pos: usize, j: usize) -> u32 {
        pd_window_access(self.pd(), pos, j)
    }
}

impl Text for TrieIndex {
    fn heap(&self) -> &PositionHeap {
        TrieIndex::heap(self)
    }
    fn max_len(&self) -> usize {
        self.trie().height()
    }
    fn suffix_len(&self, pos: usize) -> usize {
        self.trie().depth(pos)
    }
    fn shift(&self, pos: usize, off: usize) -> usize {
        let f = self.fp_trie();
        f.nodes()[f.node_of(self.trie().anc(pos, off))].id
    }
    fn pd_at(&self, pos: usize, j: usize) -> u32 {
        self.trie().pd_at(pos, j)
    }
}

fn locate<T: Text>(text: &T, p: &[Char], trace: &mut QueryTrace) -> Result<Vec<usize>> {
    let m = p.len();
    if m == 0 {
        return Err(Error::EmptyPattern);
    }
    let heap = text.heap();
    if heap.len() < 2 || m > text.max_len() {
        return Ok(Vec::new());
    }
    let pd_p = pd_encode(p);
    let fact = factorize(heap, &pd_p);
    trace.blocks = fact.k();
    let u1 = fact.blocks[0].node;
    let mut out = Vec::new();

    if fact.k() == 1 {
        out.extend(heap.subtree(u1).iter().map(|&v| heap.position(v as usize)));
        let mut x = heap.parent(u1);
        while let Some(v) = x {
            if v == 0 {
                break;
            }
            if heap.is_descendant(heap.mrp(v), u1) {
                out.push(heap.position(v));
            }
            x = heap.parent(v);
        }
        return Ok(out);
    }

    let mut x = Some(u1);
    while let Some(v) = x {
        if v == 0 {
            break;
        }
        if heap.mrp(v) == u1 && text.suffix_len(heap.position(v)) >= m {
            out.push(heap.position(v));
        }
        x = heap.parent(v);
    }
    trace.candidates = out.len();

    let mut offset = fact.blocks[0].len;
    for b in &fact.blocks[1..] {
        out.retain(|&i| {
            let x = heap
                .node_of(text.shift(i, offset))
                .expect("every position owns a node");
            heap.is_descendant(x, b.node) || heap.is_descendant(heap.mrp(x), b.node)
        });
        offset += b.len;
    }
    trace.survivors = out.len();

    // Global indices where some block's re-anchored PD is 0.
    let checks: Vec<usize> = fact
        .blocks
        .iter()
        .flat_map(|b| {
            let pd = &pd_p;
            (1..=b.len)
                .filter(move |&y| pd_window_access(pd, b.start, y) == 0)
                .map(move |y| b.start + y - 1)
        })
        .collect();
    out.retain(|&i| {
        checks.iter().all(|&g| {
            trace.verify_probes += 1;
            text.pd_at(i, g) == pd_p.at(g)
        })
    });
    Ok(out)
}

/// All 1-based positions `i` with `S[i..i+m-1]` ct-matching `p`, ascending.
pub fn query_string(cph: &Cph, p: &[Char]) -> Result<Vec<usize>> {
    query_string_traced(cph, p).map(|(occ, _)| occ)
}

pub fn query_string_traced(cph: &Cph, p: &[Char]) -> Result<(Vec<usize>, QueryTrace)> {
    let mut trace = QueryTrace::default();
    let mut occ = locate(cph, p, &mut trace)?;
    occ.sort_unstable();
    Ok((occ, trace))
}

/// All canonical trie ids whose path string starts with a ct-match of `p`,
/// ascending.
pub fn query_trie(idx: &TrieIndex, p: &[Char]) -> Result<Vec<usize>> {
    query_trie_traced(idx, p).map(|(occ, _)| occ)
}

pub fn query_trie_traced(idx: &TrieIndex, p: &[Char]) -> Result<(Vec<usize>, QueryTrace)> {
    let mut trace = QueryTrace::default();
    let reps = locate(idx, p, &mut trace)?;
    let f = idx.fp_trie();
    let mut occ: Vec<usize> = reps
        .into_iter()
        .flat_map(|rep| {
            let w = f
                .index_of_id(rep)
                .expect("heap positions are representatives");
            f.nodes()[w].members.iter().copied()
        })
        .collect();
    occ.sort_unstable();
    Ok((occ, trace))
}
