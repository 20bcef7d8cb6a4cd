//! Sequence encodings for Cartesian-tree matching.
//!
//! Two sequences ct-match when their Cartesian trees coincide, which is the
//! case exactly when their parent-distance (PD) encodings are equal. The
//! front-pointer-count (FP) encoding carries the same information but, unlike
//! PD, is suffix-consistent: `fp(S)[i]` depends only on `S[i..]`.
//!
//! All positions in this module are 1-based, matching the way occurrences are
//! reported. Storage is 0-based.

use crate::error::{Error, Result};

/// A text or pattern character. Ordering is numeric.
pub type Char = u32;

/// Parent-distance encoding: `pd[i]` is the distance from `i` to the nearest
/// position `j < i` with `S[j] <= S[i]`, or 0 when there is none.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PdSequence(Vec<u32>);

impl PdSequence {
    pub fn from_values(values: Vec<u32>) -> Self {
        Self(values)
    }

    pub fn values(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Value at 1-based position `i`.
    #[inline]
    pub fn at(&self, i: usize) -> u32 {
        self.0[i - 1]
    }

    /// Positions holding 0, ascending.
    pub fn zero_positions(&self) -> Vec<usize> {
        positions_where(&self.0, |_, v| v == 0)
    }

    /// Positions `i >= 2` whose pointer lands on position 1.
    pub fn front_pointers(&self) -> Vec<usize> {
        front_pointers(&self.0)
    }
}

/// FP encoding: `fp[i]` is the number of front pointers of `pd(S[i..])`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FpSequence(Vec<u32>);

impl FpSequence {
    pub fn from_values(values: Vec<u32>) -> Self {
        Self(values)
    }

    pub fn values(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn at(&self, i: usize) -> u32 {
        self.0[i - 1]
    }
}

fn positions_where(values: &[u32], pred: impl Fn(usize, u32) -> bool) -> Vec<usize> {
    values
        .iter()
        .enumerate()
        .filter(|&(k, &v)| pred(k + 1, v))
        .map(|(k, _)| k + 1)
        .collect()
}

/// Encodes `s` with a monotone stack in O(n).
pub fn pd_encode(s: &[Char]) -> PdSequence {
    let mut out = Vec::with_capacity(s.len());
    let mut stack: Vec<usize> = Vec::new();
    for (k, &c) in s.iter().enumerate() {
        while let Some(&top) = stack.last() {
            if s[top] > c {
                stack.pop();
            } else {
                break;
            }
        }
        out.push(stack.last().map_or(0, |&j| (k - j) as u32));
        stack.push(k);
    }
    PdSequence(out)
}

/// Ascending positions `i >= 2` with `i - u[i] == 1`.
pub fn front_pointers(u: &[u32]) -> Vec<usize> {
    positions_where(u, |i, v| i >= 2 && i - v as usize == 1)
}

/// Encodes `s` right to left through [`SlidingPdState`] in O(n) total.
pub fn fp_encode(s: &[Char]) -> FpSequence {
    let mut out = vec![0; s.len()];
    let mut state = SlidingPdState::new();
    for (k, &c) in s.iter().enumerate().rev() {
        out[k] = state.prepend(c).len() as u32;
    }
    FpSequence(out)
}

/// Two sequences ct-match iff they have equal length and equal PD encodings.
pub fn ct_match(s1: &[Char], s2: &[Char]) -> bool {
    s1.len() == s2.len() && pd_encode(s1) == pd_encode(s2)
}

/// `PD(S[i..])[j]` read off the PD of the whole of `S` in constant time.
///
/// A global pointer survives in the window iff it lands at or after `i`.
#[inline]
pub fn pd_window_access(pd: &PdSequence, i: usize, j: usize) -> u32 {
    debug_assert!(i >= 1 && j >= 1 && i + j - 1 <= pd.len());
    let g = i + j - 1;
    let v = pd.0[g - 1];
    if v > 0 && g - v as usize >= i {
        v
    } else {
        0
    }
}

/// Zero positions of a right-to-left growing PD window.
///
/// Prepending a character resolves the pending zeros whose value is not
/// smaller than it; those resolved positions are exactly the front pointers
/// of the new window. Pending entries are kept as (offset from the right end,
/// value) so the same state works for strings and for root-ward trie paths.
#[derive(Clone, Debug, Default)]
pub struct SlidingPdState {
    len: usize,
    // Top of the stack is the leftmost pending zero.
    pending: Vec<(usize, Char)>,
    removed: Vec<(usize, Char)>,
    resolved: Vec<usize>,
}

impl SlidingPdState {
    pub fn new() -> Self {
        Self::default()
    }

    /// Current window length.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Start of the window within a text of length `n`.
    pub fn window_start(&self, n: usize) -> usize {
        n + 1 - self.len
    }

    /// Prepends `c` and returns the local positions (ascending) that stopped
    /// being zeros, i.e. the front pointers of the new window's PD.
    pub fn prepend(&mut self, c: Char) -> &[usize] {
        self.len += 1;
        self.removed.clear();
        self.resolved.clear();
        while let Some(&(r, v)) = self.pending.last() {
            if c > v {
                break;
            }
            self.pending.pop();
            self.removed.push((r, v));
            self.resolved.push(self.len - r + 1);
        }
        self.pending.push((self.len, c));
        &self.resolved
    }

    /// Front pointers produced by the last [`prepend`](Self::prepend).
    pub fn resolved(&self) -> &[usize] {
        &self.resolved
    }

    /// Raw entries removed by the last prepend; feed them to
    /// [`retract`](Self::retract) to undo it.
    pub fn last_removed(&self) -> &[(usize, Char)] {
        &self.removed
    }

    /// Undoes the most recent prepend whose removed entries were `removed`.
    pub fn retract(&mut self, removed: &[(usize, Char)]) {
        let top = self.pending.pop();
        debug_assert_eq!(top.map(|(r, _)| r), Some(self.len));
        self.pending.extend(removed.iter().rev().copied());
        self.len -= 1;
        self.removed.clear();
        self.resolved.clear();
    }

    /// Zero positions of the current window, ascending.
    pub fn pending_positions(&self) -> Vec<usize> {
        self.pending
            .iter()
            .rev()
            .map(|&(r, _)| self.len - r + 1)
            .collect()
    }
}

/// Cartesian tree over 1-based positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartesianTree {
    root: Option<usize>,
    // 0 marks an absent child; index 0 is unused.
    left: Vec<usize>,
    right: Vec<usize>,
}

impl CartesianTree {
    /// Rightmost-spine construction. Equal values attach to the right, so the
    /// root is the leftmost minimum.
    pub fn build(s: &[Char]) -> Self {
        let n = s.len();
        let mut left = vec![0; n + 1];
        let mut right = vec![0; n + 1];
        let mut spine: Vec<usize> = Vec::new();
        for i in 1..=n {
            let mut last = 0;
            while let Some(&top) = spine.last() {
                if s[top - 1] > s[i - 1] {
                    last = spine.pop().unwrap();
                } else {
                    break;
                }
            }
            left[i] = last;
            if let Some(&top) = spine.last() {
                right[top] = i;
            }
            spine.push(i);
        }
        Self {
            root: spine.first().copied(),
            left,
            right,
        }
    }

    pub fn len(&self) -> usize {
        self.left.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn root(&self) -> Option<usize> {
        self.root
    }

    pub fn left(&self, pos: usize) -> Option<usize> {
        Some(self.left[pos]).filter(|&c| c != 0)
    }

    pub fn right(&self, pos: usize) -> Option<usize> {
        Some(self.right[pos]).filter(|&c| c != 0)
    }

    /// Positions in in-order; always `1..=n`.
    pub fn in_order(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len());
        let mut stack = Vec::new();
        let mut cur = self.root;
        while cur.is_some() || !stack.is_empty() {
            while let Some(c) = cur {
                stack.push(c);
                cur = self.left(c);
            }
            let c = stack.pop().unwrap();
            out.push(c);
            cur = self.right(c);
        }
        out
    }
}

/// The pointer graph of a PD encoding. A pair `(j, i)` records that
/// position `i` points back to `j = i - pd[i]`; zero entries carry no pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PdDag {
    len: usize,
    // Sorted ascending.
    edges: Vec<(usize, usize)>,
}

impl PdDag {
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Number of positions pointing at `node`.
    pub fn in_degree(&self, node: usize) -> usize {
        let lo = self.edges.partition_point(|&(j, _)| j < node);
        let hi = self.edges.partition_point(|&(j, _)| j <= node);
        hi - lo
    }
}

pub fn dag_from_pd(pd: &PdSequence) -> PdDag {
    let mut edges: Vec<(usize, usize)> = pd
        .values()
        .iter()
        .enumerate()
        .filter(|&(_, &v)| v > 0)
        .map(|(k, &v)| (k + 1 - v as usize, k + 1))
        .collect();
    edges.sort_unstable();
    PdDag {
        len: pd.len(),
        edges,
    }
}

/// Rebuilds the pointer graph from an FP encoding alone.
///
/// Scanning right to left, position `i` adopts the `fp[i]` leftmost nodes in
/// `(i..n]` that no earlier step adopted. Those unadopted nodes are exactly
/// the pending zeros of the suffix, so a stack suffices.
pub fn dag_from_fp(fp: &FpSequence) -> Result<PdDag> {
    let n = fp.len();
    let mut unmarked: Vec<usize> = Vec::new();
    let mut edges = Vec::new();
    for i in (1..=n).rev() {
        let need = fp.at(i) as usize;
        if need > unmarked.len() {
            return Err(Error::MalformedFp {
                position: i,
                needed: need,
                available: unmarked.len(),
            });
        }
        for _ in 0..need {
            let target = unmarked.pop().unwrap();
            edges.push((i, target));
        }
        unmarked.push(i);
    }
    edges.sort_unstable();
    Ok(PdDag { len: n, edges })
}
