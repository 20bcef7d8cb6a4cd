//! Cartesian-tree position heaps over integer strings and reversed tries.
//!
//! Build an index with [`Cph::build`] or [`TrieIndex::build`], query it with
//! [`query_string`] or [`query_trie`], and persist it with [`index_file`].

pub mod bench;
pub mod encodings;
pub mod error;
pub mod heap;
pub mod index_file;
pub mod matching;
pub mod oracle;
pub mod string_heap;
pub mod trie;
pub mod trie_heap;

pub use encodings::{
    ct_match, dag_from_fp, dag_from_pd, fp_encode, front_pointers, pd_encode, pd_window_access,
    CartesianTree, Char, FpSequence, PdDag, PdSequence, SlidingPdState,
};
pub use error::{Error, Result};
pub use heap::{HeapNode, NodeId, PositionHeap};
pub use matching::{factorize, query_string, query_trie, Factorization};
pub use string_heap::{BuildStats, Cph};
pub use trie::{parse_trie, FpNode, FpTrie, ParsedTrie, ReversedTrie};
pub use trie_heap::{TrieBuildStats, TrieCph, TrieIndex};
