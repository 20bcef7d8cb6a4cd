//! On-disk index format.
//!
//! A compact JSON document with a fixed field order. Only primary data is
//! stored: the text or the trie, the FP-trie classes and the heap rows
//! `[position, parent, label, mrp]` in insertion order. Children, intervals
//! and the trie lookup tables are rebuilt when loading.

use serde::{Deserialize, Serialize};

use crate::encodings::Char;
use crate::error::{Error, Result};
use crate::string_heap::Cph;
use crate::trie::{FpNode, FpTrie, ReversedTrie};
use crate::trie_heap::{TrieCph, TrieIndex};

pub const VERSION: u32 = 1;

type Row = (u32, u32, u32, u32);
type FpRow = (u32, u32, u32, Vec<u32>, Vec<u32>);

#[derive(Serialize, Deserialize)]
struct StringDoc {
    version: u32,
    kind: String,
    text: Vec<Char>,
    heap: Vec<Row>,
}

#[derive(Serialize, Deserialize)]
struct TrieDoc {
    version: u32,
    kind: String,
    /// `[id, parent, label]` for ids `1..N`; the root is `N` and is implied.
    trie: Vec<(u32, u32, Char)>,
    /// `[id, parent, fp, members, fronts]`, root first.
    fp: Vec<FpRow>,
    heap: Vec<Row>,
}

#[derive(Deserialize)]
struct Header {
    version: u32,
    kind: String,
}

/// A loaded index of either kind.
#[derive(Clone, Debug)]
pub enum Index {
    String(Box<Cph>),
    Trie(Box<TrieIndex>),
}

impl Index {
    pub fn to_json(&self) -> String {
        match self {
            Index::String(c) => save_string(c),
            Index::Trie(t) => save_trie(t),
        }
    }
}

pub const STRING_KIND: &str = "string-cph";
pub const TRIE_KIND: &str = "trie-cph";

pub fn save_string(cph: &Cph) -> String {
    let doc = StringDoc {
        version: VERSION,
        kind: STRING_KIND.into(),
        text: cph.text().to_vec(),
        heap: cph.heap().rows(),
    };
    serde_json::to_string(&doc).expect("plain data serializes")
}

pub fn save_trie(idx: &TrieIndex) -> String {
    let t = idx.trie();
    let trie = (1..t.len())
        .map(|x| (x as u32, t.parent(x).unwrap() as u32, t.label(x)))
        .collect();
    let fp = idx
        .fp_trie()
        .nodes()
        .iter()
        .map(|n| {
            (
                n.id as u32,
                n.parent as u32,
                n.fp,
                n.members.iter().map(|&x| x as u32).collect(),
                n.fronts.clone(),
            )
        })
        .collect();
    let doc = TrieDoc {
        version: VERSION,
        kind: TRIE_KIND.into(),
        trie,
        fp,
        heap: idx.heap().rows(),
    };
    serde_json::to_string(&doc).expect("plain data serializes")
}

pub fn load(doc: &str) -> Result<Index> {
    let header: Header = serde_json::from_str(doc)?;
    if header.version != VERSION {
        return Err(Error::InvalidIndex(format!(
            "unsupported version {}",
            header.version
        )));
    }
    match header.kind.as_str() {
        STRING_KIND => {
            let d: StringDoc = serde_json::from_str(doc)?;
            Ok(Index::String(Box::new(Cph::from_rows(d.text, &d.heap)?)))
        }
        TRIE_KIND => load_trie(serde_json::from_str(doc)?).map(|t| Index::Trie(Box::new(t))),
        other => Err(Error::InvalidIndex(format!("unknown kind {other:?}"))),
    }
}

fn load_trie(d: TrieDoc) -> Result<TrieIndex> {
    let n = d.trie.len() + 1;
    let mut parents: Vec<Option<usize>> = vec![None; n];
    let mut labels: Vec<Char> = vec![0; n];
    for (k, &(id, parent, label)) in d.trie.iter().enumerate() {
        if id as usize != k + 1 || parent as usize > n || parent == 0 {
            return Err(Error::InvalidIndex(format!("bad trie record {k}")));
        }
        parents[k] = Some(parent as usize - 1);
        labels[k] = label;
    }
    let trie = ReversedTrie::from_parents(&parents, &labels)?;
    // Canonical ids must survive the round trip unchanged.
    for (k, &(_, parent, label)) in d.trie.iter().enumerate() {
        let x = k + 1;
        if trie.parent(x) != Some(parent as usize) || trie.label(x) != label {
            return Err(Error::InvalidIndex(
                "trie records are not in canonical order".into(),
            ));
        }
    }
    let nodes =
        d.fp.into_iter()
            .map(|(id, parent, fp, members, fronts)| FpNode {
                id: id as usize,
                parent: parent as usize,
                fp,
                depth: 0,
                members: members.into_iter().map(|x| x as usize).collect(),
                fronts,
            })
            .collect::<Vec<_>>();
    let fp = FpTrie::from_nodes(&trie, with_depths(nodes)?)?;
    if d.heap.len() != fp.class_count() {
        return Err(Error::InvalidIndex(format!(
            "{} heap rows for {} classes",
            d.heap.len(),
            fp.class_count()
        )));
    }
    let cph = TrieCph::from_rows(trie.len(), &d.heap)?;
    Ok(TrieIndex::from_parts(trie, fp, cph))
}

fn with_depths(mut nodes: Vec<FpNode>) -> Result<Vec<FpNode>> {
    for k in 1..nodes.len() {
        let p = nodes[k].parent;
        if p >= k {
            return Err(Error::InvalidIndex(format!(
                "FP node {k}: parent {p} not earlier"
            )));
        }
        nodes[k].depth = nodes[p].depth + 1;
    }
    Ok(nodes)
}
