//! Brute-force references and deterministic instance generators.
//!
//! Nothing here shares a code path with the index: windows are re-encoded
//! from raw characters every time.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::encodings::{pd_encode, Char};
use crate::error::{Error, Result};
use crate::trie::ReversedTrie;

/// All `i` (1-based) with `s[i..i+m-1]` ct-matching `p`.
pub fn brute_match_string(s: &[Char], p: &[Char]) -> Vec<usize> {
    let m = p.len();
    if m == 0 || m > s.len() {
        return Vec::new();
    }
    let want = pd_encode(p);
    (0..=s.len() - m)
        .filter(|&k| pd_encode(&s[k..k + m]) == want)
        .map(|k| k + 1)
        .collect()
}

/// All trie nodes whose path string starts with something ct-matching `p`.
pub fn brute_match_trie(t: &ReversedTrie, p: &[Char]) -> Vec<usize> {
    let m = p.len();
    if m == 0 {
        return Vec::new();
    }
    let want = pd_encode(p);
    (1..t.len())
        .filter(|&x| t.depth(x) >= m && pd_encode(&t.path_string(x)[..m]) == want)
        .collect()
}

/// Inserts, for each string in turn, its shortest prefix not yet present and
/// returns those prefixes. Panics if some string is a prefix of an earlier
/// one.
pub fn naive_sequence_hash_tree(strings: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let mut present: HashSet<Vec<u32>> = HashSet::new();
    present.insert(Vec::new());
    strings
        .iter()
        .map(|w| {
            let len = (1..=w.len())
                .find(|&l| !present.contains(&w[..l]))
                .expect("string is a prefix of an earlier one");
            present.insert(w[..len].to_vec());
            w[..len].to_vec()
        })
        .collect()
}

/// Node strings of the position heap of `s`, indexed by position - 1.
pub fn naive_string_heap(s: &[Char]) -> Vec<Vec<u32>> {
    let n = s.len();
    let suffixes: Vec<Vec<u32>> = (1..=n)
        .rev()
        .map(|i| pd_encode(&s[i - 1..]).values().to_vec())
        .collect();
    let mut nodes = naive_sequence_hash_tree(&suffixes);
    nodes.reverse();
    nodes
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    UniformRandom,
    Increasing,
    AllEqual,
    /// `1 12 122 ... 1 2^k 1`; the size field is `k`.
    Lemma8,
    RandomTrie,
    /// Chain trie over a uniformly random string of `size - 1` characters.
    ChainTrie,
}

impl Family {
    pub fn is_trie(self) -> bool {
        matches!(self, Family::RandomTrie | Family::ChainTrie)
    }
}

/// Deterministic description of a test instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GenSpec {
    pub seed: u64,
    /// Text length, node count (tries, root included) or `k` (lemma8).
    pub size: usize,
    pub sigma: u32,
    pub family: Family,
}

impl GenSpec {
    pub fn sequence(seed: u64, n: usize, sigma: u32, family: Family) -> Self {
        Self {
            seed,
            size: n,
            sigma,
            family,
        }
    }

    pub fn trie(seed: u64, nodes: usize, sigma: u32) -> Self {
        Self {
            seed,
            size: nodes,
            sigma,
            family: Family::RandomTrie,
        }
    }
}

#[derive(Clone, Debug)]
pub enum Instance {
    Sequence(Vec<Char>),
    Trie(Box<ReversedTrie>),
}

pub fn generate(spec: &GenSpec) -> Result<Instance> {
    if spec.family.is_trie() {
        generate_trie(spec).map(|t| Instance::Trie(Box::new(t)))
    } else {
        generate_sequence(spec).map(Instance::Sequence)
    }
}

fn uniform(rng: &mut ChaCha8Rng, n: usize, sigma: u32) -> Vec<Char> {
    (0..n).map(|_| rng.gen_range(1..=sigma)).collect()
}

pub fn generate_sequence(spec: &GenSpec) -> Result<Vec<Char>> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    match spec.family {
        Family::UniformRandom => {
            if spec.sigma == 0 {
                return Err(Error::InvalidGenSpec("sigma must be positive".into()));
            }
            Ok(uniform(&mut rng, spec.size, spec.sigma))
        }
        Family::Increasing => Ok((1..=spec.size as Char).collect()),
        Family::AllEqual => Ok(vec![1; spec.size]),
        Family::Lemma8 => {
            let mut s = Vec::new();
            for j in 0..=spec.size {
                s.push(1);
                s.extend(std::iter::repeat_n(2, j));
            }
            s.push(1);
            Ok(s)
        }
        Family::RandomTrie | Family::ChainTrie => Err(Error::InvalidGenSpec(format!(
            "{:?} does not produce a sequence",
            spec.family
        ))),
    }
}

pub fn generate_trie(spec: &GenSpec) -> Result<ReversedTrie> {
    if spec.sigma == 0 {
        return Err(Error::InvalidGenSpec("sigma must be positive".into()));
    }
    if spec.size == 0 {
        return Err(Error::InvalidGenSpec(
            "a trie needs at least its root".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    match spec.family {
        Family::RandomTrie => {
            let n = spec.size;
            let mut parents: Vec<Option<usize>> = vec![None];
            let mut labels: Vec<Char> = vec![0];
            let mut used: HashSet<(usize, Char)> = HashSet::new();
            for k in 1..n {
                loop {
                    let p = rng.gen_range(0..k);
                    let l = rng.gen_range(1..=spec.sigma);
                    if used.insert((p, l)) {
                        parents.push(Some(p));
                        labels.push(l);
                        break;
                    }
                }
            }
            ReversedTrie::from_parents(&parents, &labels)
        }
        Family::ChainTrie => ReversedTrie::chain(&uniform(&mut rng, spec.size - 1, spec.sigma)),
        other => Err(Error::InvalidGenSpec(format!(
            "{other:?} does not produce a trie"
        ))),
    }
}
