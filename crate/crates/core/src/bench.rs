//! Construction and query timing over generated texts.

use std::fmt::Write as _;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::matching::query_string;
use crate::oracle::{generate_sequence, Family, GenSpec};
use crate::string_heap::Cph;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub sigma: u32,
    /// Mean build time in seconds over the repeats.
    pub build_secs: f64,
    pub climb_steps: usize,
    pub queries_per_sec: f64,
}

impl BenchRow {
    pub fn climb_ratio(&self) -> f64 {
        self.climb_steps as f64 / self.n as f64
    }

    pub fn climb_within_bound(&self) -> bool {
        self.climb_steps <= 3 * self.n
    }
}

const QUERIES: usize = 200;
const QUERY_LEN: usize = 8;

/// One row per `(n, sigma)`; the text for each row comes from `seed`.
pub fn run(ns: &[usize], sigmas: &[u32], seed: u64, repeats: usize) -> Vec<BenchRow> {
    let repeats = repeats.max(1);
    let mut rows = Vec::new();
    for &sigma in sigmas {
        for &n in ns {
            let text = generate_sequence(&GenSpec::sequence(seed, n, sigma, Family::UniformRandom))
                .expect("bench specs are valid");
            let mut total = 0.0;
            let mut climb = 0;
            let mut last = None;
            for _ in 0..repeats {
                let t0 = Instant::now();
                let cph = Cph::build(text.clone()).expect("non-empty text");
                total += t0.elapsed().as_secs_f64();
                climb = cph.stats().climb_steps;
                last = Some(cph);
            }
            let cph = last.unwrap();

            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
            let m = QUERY_LEN.min(n);
            let patterns: Vec<_> = (0..QUERIES)
                .map(|_| {
                    let at = rng.gen_range(0..=n - m);
                    text[at..at + m].to_vec()
                })
                .collect();
            let t0 = Instant::now();
            for p in &patterns {
                std::hint::black_box(query_string(&cph, p).unwrap());
            }
            let qsecs = t0.elapsed().as_secs_f64().max(1e-9);

            rows.push(BenchRow {
                n,
                sigma,
                build_secs: total / repeats as f64,
                climb_steps: climb,
                queries_per_sec: QUERIES as f64 / qsecs,
            });
        }
    }
    rows
}

/// Mean build time of `2n` over mean build time of `n`, alternating the
/// two sizes across repeats after one untimed build of each. Also returns
/// the climb steps at `n` and `2n`.
pub fn doubling_build_ratio(n: usize, sigma: u32, seed: u64, repeats: usize) -> (f64, [usize; 2]) {
    let texts = [n, 2 * n].map(|len| {
        generate_sequence(&GenSpec::sequence(seed, len, sigma, Family::UniformRandom))
            .expect("bench specs are valid")
    });
    let mut total = [0.0; 2];
    let mut climb = [0; 2];
    for round in 0..=repeats.max(1) {
        for (k, text) in texts.iter().enumerate() {
            let text = text.clone();
            let t0 = Instant::now();
            let cph = Cph::build(text).expect("non-empty text");
            let secs = t0.elapsed().as_secs_f64();
            if round > 0 {
                total[k] += secs;
            }
            climb[k] = cph.stats().climb_steps;
        }
    }
    (total[1] / total[0].max(1e-12), climb)
}

/// Build-time ratio of each row against the row with half its length and
/// the same alphabet, when present.
pub fn doubling_ratio(rows: &[BenchRow], row: &BenchRow) -> Option<f64> {
    if !row.n.is_multiple_of(2) {
        return None;
    }
    rows.iter()
        .find(|r| r.sigma == row.sigma && r.n * 2 == row.n)
        .map(|half| row.build_secs / half.build_secs.max(1e-12))
}

pub fn format_table(rows: &[BenchRow]) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "{:>10} {:>6} {:>12} {:>12} {:>8} {:>6} {:>8} {:>12}",
        "n", "sigma", "build_ms", "climb", "climb/n", "<=3n", "x2", "queries/s"
    )
    .unwrap();
    for r in rows {
        let ratio = doubling_ratio(rows, r).map_or("-".to_string(), |x| format!("{x:.2}"));
        writeln!(
            out,
            "{:>10} {:>6} {:>12.3} {:>12} {:>8.3} {:>6} {:>8} {:>12.0}",
            r.n,
            r.sigma,
            r.build_secs * 1e3,
            r.climb_steps,
            r.climb_ratio(),
            if r.climb_within_bound() { "ok" } else { "FAIL" },
            ratio,
            r.queries_per_sec
        )
        .unwrap();
    }
    out
}
