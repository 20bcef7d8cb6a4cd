use proptest::prelude::*;

use cph_core::index_file::{self, Index};
use cph_core::oracle;
use cph_core::{
    ct_match, dag_from_fp, dag_from_pd, fp_encode, front_pointers, pd_encode, pd_window_access,
    query_string, query_trie, CartesianTree, Char, Cph, ReversedTrie, TrieIndex,
};

fn seq(max_len: usize, sigma: Char) -> impl Strategy<Value = Vec<Char>> {
    prop::collection::vec(1..=sigma, 1..=max_len)
}

/// Parent choices for nodes 1.., each pointing to an earlier node, plus labels.
fn trie() -> impl Strategy<Value = ReversedTrie> {
    (1usize..60, 1u32..6).prop_flat_map(|(n, sigma)| {
        prop::collection::vec((any::<prop::sample::Index>(), 1..=sigma), n).prop_map(move |picks| {
            let mut parents = vec![None];
            let mut labels = vec![0];
            let mut used = std::collections::HashSet::new();
            for (ix, label) in picks {
                let p = ix.index(parents.len());
                if used.insert((p, label)) {
                    parents.push(Some(p));
                    labels.push(label);
                }
            }
            ReversedTrie::from_parents(&parents, &labels).unwrap()
        })
    })
}

fn same_shape(a: &CartesianTree, b: &CartesianTree) -> bool {
    a.len() == b.len()
        && a.root() == b.root()
        && (1..=a.len()).all(|i| a.left(i) == b.left(i) && a.right(i) == b.right(i))
}

proptest! {
    #[test]
    fn encodings_agree_on_ct_equivalence(a in seq(8, 3), b in seq(8, 3)) {
        let pd = pd_encode(&a) == pd_encode(&b);
        let fp = fp_encode(&a) == fp_encode(&b);
        let ct = same_shape(&CartesianTree::build(&a), &CartesianTree::build(&b));
        prop_assert_eq!(pd, fp);
        prop_assert_eq!(pd, ct);
        prop_assert_eq!(pd, ct_match(&a, &b));
    }

    #[test]
    fn pd_values_point_back(s in seq(40, 6)) {
        let pd = pd_encode(&s);
        for i in 1..=s.len() {
            let d = pd.at(i) as usize;
            prop_assert!(d < i);
            if d > 0 {
                prop_assert!(s[i - 1 - d] <= s[i - 1]);
                prop_assert!(s[i - d..i - 1].iter().all(|&x| x > s[i - 1]));
            } else {
                prop_assert!(s[..i - 1].iter().all(|&x| x > s[i - 1]));
            }
        }
    }

    #[test]
    fn fp_is_dag_in_degree(s in seq(40, 5)) {
        let fp = fp_encode(&s);
        let dag = dag_from_pd(&pd_encode(&s));
        for i in 1..=s.len() {
            prop_assert_eq!(fp.at(i) as usize, dag.in_degree(i));
            let suffix = pd_encode(&s[i - 1..]);
            prop_assert_eq!(fp.at(i) as usize, front_pointers(suffix.values()).len());
        }
        prop_assert_eq!(dag_from_fp(&fp).unwrap(), dag);
    }

    #[test]
    fn windowed_access_matches_reencoding(
        s in seq(30, 4),
        ix in any::<prop::sample::Index>(),
        jx in any::<prop::sample::Index>(),
    ) {
        let i = ix.index(s.len()) + 1;
        let j = jx.index(s.len() - i + 1) + 1;
        prop_assert_eq!(pd_window_access(&pd_encode(&s), i, j), pd_encode(&s[i - 1..]).at(j));
    }

    #[test]
    fn heap_nodes_are_suffix_prefixes(s in seq(60, 4)) {
        let cph = Cph::build(s.clone()).unwrap();
        let h = cph.heap();
        prop_assert_eq!(h.len(), s.len() + 1);
        prop_assert!(cph.stats().climb_steps <= 3 * s.len());
        for i in 1..=s.len() {
            let u = cph.node_at_position(i).unwrap();
            let pd = pd_encode(&s[i - 1..]);
            let path = h.path_label(u);
            prop_assert_eq!(&pd.values()[..path.len()], path.as_slice());
            let m = h.mrp(u);
            prop_assert!(h.is_descendant(m, u));
            let mpath = h.path_label(m);
            prop_assert_eq!(&pd.values()[..h.depth(m)], mpath.as_slice());
        }
    }

    #[test]
    fn string_queries_match_oracle(s in seq(80, 4), p in seq(10, 4)) {
        let cph = Cph::build(s.clone()).unwrap();
        prop_assert_eq!(query_string(&cph, &p).unwrap(), oracle::brute_match_string(&s, &p));
    }

    #[test]
    fn window_queries_match_oracle(
        s in seq(80, 3),
        ax in any::<prop::sample::Index>(),
        mx in any::<prop::sample::Index>(),
    ) {
        let at = ax.index(s.len());
        let m = mx.index((s.len() - at).min(19)) + 1;
        let p = &s[at..at + m];
        let cph = Cph::build(s.clone()).unwrap();
        let got = query_string(&cph, p).unwrap();
        prop_assert!(got.contains(&(at + 1)));
        prop_assert_eq!(got, oracle::brute_match_string(&s, p));
    }

    #[test]
    fn trie_queries_match_oracle(t in trie(), p in seq(6, 3)) {
        let idx = TrieIndex::build(t.clone());
        prop_assert_eq!(idx.heap().len(), idx.fp_trie().class_count() + 1);
        prop_assert_eq!(query_trie(&idx, &p).unwrap(), oracle::brute_match_trie(&t, &p));
    }

    #[test]
    fn fp_classes_ct_match(t in trie()) {
        let f = cph_core::FpTrie::build(&t);
        for node in &f.nodes()[1..] {
            let rep = pd_encode(&t.path_string(node.id));
            for &x in &node.members {
                prop_assert_eq!(t.depth(x), node.depth);
                prop_assert_eq!(&pd_encode(&t.path_string(x)), &rep);
            }
        }
    }

    #[test]
    fn persistence_round_trips(s in seq(60, 5), t in trie()) {
        for idx in [Index::String(Box::new(Cph::build(s.clone()).unwrap())), Index::Trie(Box::new(TrieIndex::build(t.clone())))] {
            let doc = idx.to_json();
            prop_assert_eq!(index_file::load(&doc).unwrap().to_json(), doc);
        }
    }
}
