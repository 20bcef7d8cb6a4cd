//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints its PASS/FAIL line; exits non-zero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use cph_core::index_file::{self, Index};
use cph_core::oracle::{self, Family, GenSpec};
use cph_core::{
    ct_match, dag_from_fp, dag_from_pd, fp_encode, front_pointers, pd_encode, pd_window_access,
    query_string, query_trie, Char, Cph, PositionHeap, ReversedTrie, TrieIndex,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn digits(s: &str) -> Vec<Char> {
    s.bytes().map(|b| (b - b'0') as Char).collect()
}

fn splitmix(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn random_seq(seed: u64, n: usize, sigma: u32) -> Vec<Char> {
    oracle::generate_sequence(&GenSpec::sequence(seed, n, sigma, Family::UniformRandom)).unwrap()
}

/// Random patterns of several lengths plus windows cut from `text`.
fn string_patterns(seed: u64, s: &[Char], sigma: u32) -> Vec<Vec<Char>> {
    let mut out = Vec::new();
    for k in 0..3u64 {
        let r = splitmix(seed ^ (k << 48));
        let m = 1 + (r % 32) as usize;
        out.push(random_seq(r, m, sigma));
        let m = m.min(s.len());
        let at = (r >> 20) as usize % (s.len() - m + 1);
        out.push(s[at..at + m].to_vec());
    }
    out
}

fn trie_patterns(seed: u64, t: &ReversedTrie, sigma: u32) -> Vec<Vec<Char>> {
    let mut out = Vec::new();
    for k in 0..3u64 {
        let r = splitmix(seed ^ (k << 48));
        let m = 1 + (r % 12) as usize;
        out.push(random_seq(r, m, sigma));
        let x = 1 + (r >> 20) as usize % (t.len() - 1);
        out.push(t.path_string(x)[..m.min(t.depth(x))].to_vec());
    }
    out
}

fn string_case(c: u64) -> (Vec<Char>, u32) {
    let sigmas = [2, 3, 4, 8, 16];
    let sigma = sigmas[c as usize % 5];
    let r = splitmix(c);
    let n = 1 + (r % 256) as usize;
    let family = match c % 8 {
        5 => Family::Increasing,
        6 => Family::AllEqual,
        7 => Family::Lemma8,
        _ => Family::UniformRandom,
    };
    let size = if family == Family::Lemma8 {
        1 + (r >> 32) as usize % 20
    } else {
        n
    };
    (
        oracle::generate_sequence(&GenSpec::sequence(r, size, sigma, family)).unwrap(),
        sigma,
    )
}

fn random_trie(c: u64) -> (ReversedTrie, u32) {
    let r = splitmix(c ^ 0x7472_6965);
    let sigma = 1 + (r % 8) as u32;
    let nodes = 2 + (r >> 8) as usize % 255;
    (
        oracle::generate_trie(&GenSpec::trie(r, nodes, sigma)).unwrap(),
        sigma,
    )
}

fn chain_trie(c: u64) -> (ReversedTrie, u32) {
    let r = splitmix(c ^ 0x6368_6169);
    let sigma = 1 + (r % 8) as u32;
    let spec = GenSpec {
        seed: r,
        size: 2 + (r >> 8) as usize % 255,
        sigma,
        family: Family::ChainTrie,
    };
    (oracle::generate_trie(&spec).unwrap(), sigma)
}

fn criterion_1() -> Outcome {
    let t0 = Instant::now();
    let mut queries = 0;
    for c in 0..2000 {
        let (s, sigma) = string_case(c);
        let cph = Cph::build(s.clone()).map_err(|e| e.to_string())?;
        for p in string_patterns(c, &s, sigma) {
            queries += 1;
            let got = query_string(&cph, &p).map_err(|e| e.to_string())?;
            check(got == oracle::brute_match_string(&s, &p), || {
                format!("case {c}: S={s:?} P={p:?} got {got:?}")
            })?;
        }
    }
    let secs = t0.elapsed().as_secs_f64();
    check(secs < 30.0, || format!("took {secs:.1} s"))?;
    Ok(format!("2000 cases, {queries} queries, {secs:.2} s"))
}

fn criterion_2() -> Outcome {
    let mut queries = 0;
    for c in 0..600 {
        let (t, sigma) = if c < 500 {
            random_trie(c)
        } else {
            chain_trie(c)
        };
        let idx = TrieIndex::build(t.clone());
        for p in trie_patterns(c, &t, sigma) {
            queries += 1;
            let got = query_trie(&idx, &p).map_err(|e| e.to_string())?;
            check(got == oracle::brute_match_trie(&t, &p), || {
                format!("trie case {c}: P={p:?} got {got:?}")
            })?;
        }
    }
    Ok(format!("500 random + 100 chain tries, {queries} queries"))
}

fn criterion_3() -> Outcome {
    let s1 = digits("316486759");
    let s2 = digits("713286945");
    let want = digits("001212141");
    check(pd_encode(&s1).values() == want.as_slice(), || {
        "PD(S1)".into()
    })?;
    check(pd_encode(&s2).values() == want.as_slice(), || {
        "PD(S2)".into()
    })?;
    check(ct_match(&s1, &s2), || "ct_match(S1, S2)".into())?;
    check(
        front_pointers(&digits("01214501")) == vec![2, 3, 5, 6],
        || "front pointers of 01214501".into(),
    )?;
    let fp = digits("0200");
    check(fp_encode(&digits("5343")).values() == fp.as_slice(), || {
        "FP(5343)".into()
    })?;
    check(fp_encode(&digits("4253")).values() == fp.as_slice(), || {
        "FP(4253)".into()
    })?;
    let s = oracle::generate_sequence(&GenSpec::sequence(0, 4, 2, Family::Lemma8)).unwrap();
    check(s == digits("1121221222122221"), || {
        format!("lemma8 string {s:?}")
    })?;
    let cph = Cph::build(s).unwrap();
    let h = cph.heap();
    let v = [0, 1, 1]
        .iter()
        .try_fold(0, |v, &c| h.child(v, c))
        .ok_or("no node 011")?;
    check(h.children(v).len() == 4, || {
        format!("node 011 has {} children", h.children(v).len())
    })?;
    Ok("PD, front pointers, FP and lemma8 fixtures".into())
}

/// Node count is checked by the caller; everything else here.
fn heap_invariants(h: &PositionHeap, sigma: usize) -> Result<(), String> {
    let mut entries = 0;
    for v in 0..h.len() {
        check(h.children(v).len() <= h.depth(v) + 1, || {
            format!(
                "node {v} has {} children at depth {}",
                h.children(v).len(),
                h.depth(v)
            )
        })?;
        for (a, u) in h.rsl_entries(v) {
            entries += 1;
            check(a as usize <= sigma, || {
                format!("rsl label {a} > sigma {sigma}")
            })?;
            let (Some(pv), Some(pu)) = (h.parent(v), h.parent(u)) else {
                continue;
            };
            for (a2, u2) in h.rsl_entries(pv) {
                if u2 == pu {
                    check(a2 <= a && a - a2 <= 1, || {
                        format!("monotonicity: rsl({v},{a})={u}, rsl({pv},{a2})={pu}")
                    })?;
                }
            }
        }
    }
    check(entries == h.rsl_writes(), || {
        format!("{} rsl writes for {entries} entries", h.rsl_writes())
    })
}

fn distinct(s: &[Char]) -> usize {
    let mut d = s.to_vec();
    d.sort_unstable();
    d.dedup();
    d.len()
}

fn criterion_4() -> Outcome {
    let mut heaps = 0;
    for c in 0..2000 {
        let (s, _) = string_case(c);
        let cph = Cph::build(s.clone()).unwrap();
        check(cph.heap().len() == s.len() + 1, || {
            format!("case {c}: node count")
        })?;
        heap_invariants(cph.heap(), distinct(&s)).map_err(|e| format!("string case {c}: {e}"))?;
        heaps += 1;
    }
    for c in 0..600 {
        let (t, _) = if c < 500 {
            random_trie(c)
        } else {
            chain_trie(c)
        };
        let idx = TrieIndex::build(t.clone());
        check(idx.heap().len() == idx.fp_trie().class_count() + 1, || {
            format!("trie case {c}: node count")
        })?;
        heap_invariants(idx.heap(), t.alphabet().len())
            .map_err(|e| format!("trie case {c}: {e}"))?;
        heaps += 1;
    }
    Ok(format!("{heaps} heaps"))
}

fn criterion_5() -> Outcome {
    let mut equal = 0;
    for c in 0..1000u64 {
        let r = splitmix(c ^ 0x6c65_6d36);
        let n = 1 + (r % 8) as usize;
        let sigma = 2 + (r >> 8) as u32 % 3;
        let s1 = random_seq(r, n, sigma);
        // Every third pair is an order-preserving relabeling of the first.
        let s2 = if c % 3 == 0 {
            s1.iter().map(|&x| 3 * x + 1).collect()
        } else {
            random_seq(r ^ 1, n, sigma)
        };
        let (p1, p2) = (pd_encode(&s1), pd_encode(&s2));
        let (f1, f2) = (fp_encode(&s1), fp_encode(&s2));
        check((p1 == p2) == (f1 == f2), || format!("{s1:?} vs {s2:?}"))?;
        equal += (p1 == p2) as usize;
        for (s, p, f) in [(&s1, &p1, &f1), (&s2, &p2, &f2)] {
            let from_fp = dag_from_fp(f).map_err(|e| e.to_string())?;
            check(from_fp == dag_from_pd(p), || {
                format!("DAG mismatch for {s:?}")
            })?;
        }
    }
    Ok(format!("1000 pairs, {equal} with equal encodings"))
}

fn window_agrees(s: &[Char]) -> bool {
    let pd = pd_encode(s);
    (1..=s.len()).all(|i| {
        let direct = pd_encode(&s[i - 1..]);
        (1..=s.len() - i + 1).all(|j| pd_window_access(&pd, i, j) == direct.at(j))
    })
}

fn criterion_6() -> Outcome {
    let mut strings = 0;
    for n in 1..=9u32 {
        for code in 0..3usize.pow(n) {
            let mut x = code;
            let s: Vec<Char> = (0..n)
                .map(|_| {
                    let c = (x % 3) as Char + 1;
                    x /= 3;
                    c
                })
                .collect();
            check(window_agrees(&s), || format!("{s:?}"))?;
            strings += 1;
        }
    }
    for c in 0..200 {
        let r = splitmix(c ^ 0x7769_6e64);
        let s = random_seq(r, 10 + (r % 190) as usize, 1 + (r >> 8) as u32 % 12);
        check(window_agrees(&s), || format!("{s:?}"))?;
    }
    Ok(format!("{strings} exhaustive strings + 200 random"))
}

fn criterion_7() -> Outcome {
    for c in 0..100 {
        let r = splitmix(c ^ 0x7061_7468);
        let sigma = 1 + (r % 6) as u32;
        let s = random_seq(r, 1 + (r >> 8) as usize % 120, sigma);
        let cph = Cph::build(s.clone()).unwrap();
        let idx = TrieIndex::build(ReversedTrie::chain(&s).unwrap());
        check(idx.heap().nodes() == cph.heap().nodes(), || {
            format!("heap shape or mrp differs for {s:?}")
        })?;
        for p in string_patterns(c, &s, sigma) {
            let a = query_string(&cph, &p).unwrap();
            let b = query_trie(&idx, &p).unwrap();
            check(a == b, || format!("S={s:?} P={p:?}: {a:?} vs {b:?}"))?;
        }
    }
    Ok("100 strings".into())
}

fn criterion_8() -> Outcome {
    let big = random_seq(8, 1_000_000, 4);
    let t0 = Instant::now();
    let cph = Cph::build(big).unwrap();
    let secs = t0.elapsed().as_secs_f64();
    check(secs < 10.0, || format!("n = 10^6 took {secs:.2} s"))?;
    check(cph.stats().climb_steps <= 3_000_000, || {
        "climb > 3n at n = 10^6".into()
    })?;
    drop(cph);

    let (ratio, climb) = cph_core::bench::doubling_build_ratio(500_000, 4, 8, 5);
    for (n, c) in [500_000, 1_000_000].into_iter().zip(climb) {
        check(c <= 3 * n, || format!("climb > 3n at n = {n}"))?;
    }
    check(ratio < 2.6, || {
        format!("n vs 2n build-time ratio {ratio:.2}")
    })?;
    Ok(format!(
        "n = 10^6 in {secs:.2} s, climb/n = {:.3}, 2n/n time ratio {ratio:.2}",
        climb[1] as f64 / 1e6
    ))
}

fn criterion_9() -> Outcome {
    for c in 0..100 {
        let idx = if c % 2 == 0 {
            let (s, _) = string_case(c + 5000);
            Index::String(Box::new(Cph::build(s).unwrap()))
        } else {
            Index::Trie(Box::new(TrieIndex::build(random_trie(c + 5000).0)))
        };
        let doc = idx.to_json();
        let back = index_file::load(&doc).map_err(|e| format!("case {c}: {e}"))?;
        check(back.to_json() == doc, || {
            format!("case {c}: re-serialization differs")
        })?;
        for m in 1..=8 {
            let p = random_seq(splitmix(c) ^ m, m as usize, 4);
            let (a, b) = match (&idx, &back) {
                (Index::String(x), Index::String(y)) => {
                    (query_string(x, &p).unwrap(), query_string(y, &p).unwrap())
                }
                (Index::Trie(x), Index::Trie(y)) => {
                    (query_trie(x, &p).unwrap(), query_trie(y, &p).unwrap())
                }
                _ => return Err(format!("case {c}: kind changed")),
            };
            check(a == b, || format!("case {c}: answers differ for {p:?}"))?;
        }
    }
    Ok("100 indexes".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("oracle exactness, strings", criterion_1),
        ("oracle exactness, tries", criterion_2),
        ("encoding and heap fixtures", criterion_3),
        ("structural invariants", criterion_4),
        ("FP/PD equivalence", criterion_5),
        ("windowed PD access", criterion_6),
        ("chain-trie degeneration", criterion_7),
        ("linearity evidence", criterion_8),
        ("persistence", criterion_9),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {} ({name}): PASS  {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL  {why}", k + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
