use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use cph_core::index_file::{self, Index};
use cph_core::oracle::{self, Family, GenSpec};
use cph_core::{
    bench, dag_from_pd, fp_encode, parse_trie, pd_encode, query_string, query_trie, Char, Cph,
    ReversedTrie, TrieIndex,
};

#[derive(Parser)]
#[command(name = "cph", version, about = "Cartesian-tree position heap indexes")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Index an integer string.
    BuildString {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Ints)]
        format: Format,
        #[arg(long)]
        output: PathBuf,
    },
    /// Index a trie document (`<id> <parent|-> [label]` per line).
    BuildTrie {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        /// Write the external-to-canonical id map here.
        #[arg(long)]
        id_map: Option<PathBuf>,
    },
    /// Report occurrences of one or more patterns.
    Query {
        #[arg(long)]
        index: PathBuf,
        #[arg(
            long,
            conflicts_with = "patterns",
            required_unless_present = "patterns"
        )]
        pattern: Option<String>,
        /// File with one whitespace-separated pattern per line.
        #[arg(long)]
        patterns: Option<PathBuf>,
    },
    /// Compare indexes against the brute-force matcher on generated cases.
    Verify(VerifyArgs),
    /// Time construction and queries on random strings.
    Bench {
        #[arg(long, value_delimiter = ',', default_values_t = [1000usize, 2000, 4000])]
        n: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_values_t = [4u32])]
        sigma: Vec<u32>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        repeats: usize,
    },
    /// Print an encoding of a string.
    Encode {
        #[command(flatten)]
        which: EncodeKind,
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Ints)]
        format: Format,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct EncodeKind {
    #[arg(long)]
    pd: bool,
    #[arg(long)]
    fp: bool,
    #[arg(long)]
    dag: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Kind::String)]
    kind: Kind,
    #[arg(long, default_value_t = 100)]
    cases: usize,
    #[arg(long, default_value_t = 64)]
    max_n: usize,
    #[arg(long, value_delimiter = ',', default_values_t = [2u32, 3, 4, 8])]
    sigma: Vec<u32>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Test hook: drop the last occurrence from every index answer.
    #[arg(long, hide = true)]
    inject_fault: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Ints,
    Bytes,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    String,
    Trie,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cmd: Cmd) -> Result<bool> {
    match cmd {
        Cmd::BuildString {
            input,
            format,
            output,
        } => {
            let text = read_text(&input, format)?;
            let cph = Cph::build(text)?;
            let st = cph.stats();
            let n = cph.len();
            eprintln!("heap nodes: {}", cph.heap().len());
            eprintln!("height: {}", cph.heap().height());
            eprintln!("climb steps: {} (3n = {})", st.climb_steps, 3 * n);
            eprintln!("mrp steps: {}", st.mrp_steps);
            write_file(&output, &index_file::save_string(&cph))?;
            Ok(true)
        }
        Cmd::BuildTrie {
            input,
            output,
            id_map,
        } => {
            let doc = read_input(&input)?;
            let parsed =
                parse_trie(&String::from_utf8(doc).context("trie document is not UTF-8")?)?;
            if let Some(path) = id_map {
                write_file(&path, &parsed.id_map_document())?;
            }
            let idx = TrieIndex::build(parsed.trie);
            let st = idx.cph().stats();
            eprintln!("trie nodes: {}", idx.trie().len());
            eprintln!("classes: {}", idx.fp_trie().class_count());
            eprintln!("heap nodes: {}", idx.heap().len());
            eprintln!("height: {}", idx.heap().height());
            eprintln!(
                "range probes: {} (max per insertion {})",
                st.range_probes, st.max_range_probes
            );
            eprintln!("mrp steps: {}", st.mrp_steps);
            write_file(&output, &index_file::save_trie(&idx))?;
            Ok(true)
        }
        Cmd::Query {
            index,
            pattern,
            patterns,
        } => {
            let doc = fs::read_to_string(&index)
                .with_context(|| format!("cannot read index {}", index.display()))?;
            let idx = index_file::load(&doc)?;
            let lines: Vec<String> = match (pattern, patterns) {
                (Some(p), _) => vec![p],
                (None, Some(path)) => String::from_utf8(read_input(&path)?)?
                    .lines()
                    .map(str::to_string)
                    .collect(),
                (None, None) => unreachable!("clap requires one of them"),
            };
            let mut out = io::stdout().lock();
            for line in lines {
                let p = parse_ints(&line)?;
                let occ = match &idx {
                    Index::String(c) => query_string(c, &p)?,
                    Index::Trie(t) => query_trie(t, &p)?,
                };
                writeln!(out, "{}", join(&occ, " "))?;
            }
            Ok(true)
        }
        Cmd::Verify(args) => verify(&args),
        Cmd::Bench {
            n,
            sigma,
            seed,
            repeats,
        } => {
            if n.contains(&0) || sigma.contains(&0) {
                bail!("n and sigma must be positive");
            }
            let rows = bench::run(&n, &sigma, seed, repeats);
            print!("{}", bench::format_table(&rows));
            Ok(rows.iter().all(bench::BenchRow::climb_within_bound))
        }
        Cmd::Encode {
            which,
            input,
            format,
        } => {
            let text = read_text(&input, format)?;
            if text.is_empty() {
                return Ok(true);
            }
            if which.dag {
                for (j, i) in dag_from_pd(&pd_encode(&text)).edges() {
                    println!("{j} {i}");
                }
            } else if which.fp {
                println!("{}", join(fp_encode(&text).values(), " "));
            } else {
                println!("{}", join(pd_encode(&text).values(), " "));
            }
            Ok(true)
        }
    }
}

fn read_input(path: &Path) -> Result<Vec<u8>> {
    if path.as_os_str() == "-" {
        let mut buf = Vec::new();
        io::stdin().read_to_end(&mut buf)?;
        return Ok(buf);
    }
    fs::read(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}

fn read_text(path: &Path, format: Format) -> Result<Vec<Char>> {
    let raw = read_input(path)?;
    match format {
        Format::Bytes => Ok(raw.into_iter().map(Char::from).collect()),
        Format::Ints => parse_ints(std::str::from_utf8(&raw).context("input is not UTF-8")?),
    }
}

fn parse_ints(s: &str) -> Result<Vec<Char>> {
    s.split_whitespace()
        .map(|t| {
            t.parse::<Char>()
                .with_context(|| format!("bad character {t:?}"))
        })
        .collect()
}

fn join<T: ToString>(xs: &[T], sep: &str) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(sep)
}

/// A generated text: a string or a trie.
#[derive(Clone)]
enum Case {
    Str(Vec<Char>),
    Trie(Box<ReversedTrie>),
}

impl Case {
    fn answer(&self, p: &[Char], fault: bool) -> Result<Vec<usize>> {
        let mut occ = match self {
            Case::Str(s) => query_string(&Cph::build(s.clone())?, p)?,
            Case::Trie(t) => query_trie(&TrieIndex::build((**t).clone()), p)?,
        };
        if fault {
            occ.pop();
        }
        Ok(occ)
    }

    fn expected(&self, p: &[Char]) -> Vec<usize> {
        match self {
            Case::Str(s) => oracle::brute_match_string(s, p),
            Case::Trie(t) => oracle::brute_match_trie(t, p),
        }
    }

    fn size(&self) -> usize {
        match self {
            Case::Str(s) => s.len(),
            Case::Trie(t) => t.len(),
        }
    }

    fn describe(&self) -> String {
        match self {
            Case::Str(s) => format!("text: {}", join(s, " ")),
            Case::Trie(t) => {
                let mut out = String::from("trie (id parent label):");
                for x in 1..t.len() {
                    out.push_str(&format!("\n  {x} {} {}", t.parent(x).unwrap(), t.label(x)));
                }
                out.push_str(&format!("\n  {} -", t.root()));
                out
            }
        }
    }
}

struct Failure {
    case: Case,
    pattern: Vec<Char>,
}

impl Failure {
    fn fails(&self, fault: bool) -> bool {
        self.case.answer(&self.pattern, fault).ok() != Some(self.case.expected(&self.pattern))
    }
}

fn generate_case(args: &VerifyArgs, c: usize) -> Result<(Case, String)> {
    let seed = args.seed.wrapping_add(c as u64);
    let sigma = args.sigma[c % args.sigma.len()];
    let n = 1 + (seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) >> 33) as usize % args.max_n;
    Ok(match args.kind {
        Kind::String => {
            let family = [
                Family::UniformRandom,
                Family::UniformRandom,
                Family::Increasing,
                Family::AllEqual,
                Family::Lemma8,
            ][c % 5];
            let size = if family == Family::Lemma8 {
                // Length (k+1)(k+2)/2 + 1 must stay within max_n.
                (0..)
                    .take_while(|k| (k + 1) * (k + 2) / 2 < n.max(2))
                    .last()
                    .unwrap()
            } else {
                n
            };
            let s = oracle::generate_sequence(&GenSpec::sequence(seed, size, sigma, family))?;
            let d = format!("n={} sigma={sigma} family={family:?}", s.len());
            (Case::Str(s), d)
        }
        Kind::Trie => {
            let family = if c % 5 == 4 {
                Family::ChainTrie
            } else {
                Family::RandomTrie
            };
            let spec = GenSpec {
                seed,
                size: n + 1,
                sigma,
                family,
            };
            let t = oracle::generate_trie(&spec)?;
            let d = format!("N={} sigma={sigma} family={family:?}", t.len());
            (Case::Trie(Box::new(t)), d)
        }
    })
}

fn patterns_for(case: &Case, seed: u64, sigma: u32) -> Result<Vec<Vec<Char>>> {
    let mut out = Vec::new();
    let h = match case {
        Case::Str(s) => s.len(),
        Case::Trie(t) => t.height(),
    };
    for (k, m) in [1usize, 2, 3, 5, 8, 13, 32].into_iter().enumerate() {
        let spec = GenSpec::sequence(
            seed ^ ((k as u64 + 1) << 40),
            m,
            sigma.max(2),
            Family::UniformRandom,
        );
        out.push(oracle::generate_sequence(&spec)?);
        if m <= h {
            let text = match case {
                Case::Str(s) => s[(seed as usize * 7 + k) % (s.len() - m + 1)..].to_vec(),
                Case::Trie(t) => {
                    let deep: Vec<usize> = (1..t.len()).filter(|&x| t.depth(x) >= m).collect();
                    t.path_string(deep[(seed as usize + k) % deep.len()])
                }
            };
            out.push(text[..m].to_vec());
        }
    }
    Ok(out)
}

/// Greedily removes text characters and pattern characters while the
/// failure persists.
fn shrink(mut f: Failure, fault: bool) -> Failure {
    loop {
        let mut progressed = false;
        if let Case::Str(s) = &f.case {
            for j in 0..s.len() {
                if s.len() == 1 {
                    break;
                }
                let mut t = s.clone();
                t.remove(j);
                let cand = Failure {
                    case: Case::Str(t),
                    pattern: f.pattern.clone(),
                };
                if cand.fails(fault) {
                    f = cand;
                    progressed = true;
                    break;
                }
            }
        }
        for j in 0..f.pattern.len() {
            if f.pattern.len() == 1 {
                break;
            }
            let mut p = f.pattern.clone();
            p.remove(j);
            let cand = Failure {
                case: f.case.clone(),
                pattern: p,
            };
            if cand.fails(fault) {
                f = cand;
                progressed = true;
                break;
            }
        }
        if !progressed {
            return f;
        }
    }
}

fn verify(args: &VerifyArgs) -> Result<bool> {
    if args.sigma.is_empty() || args.sigma.contains(&0) {
        bail!("--sigma needs positive values");
    }
    if args.max_n == 0 {
        bail!("--max-n must be positive");
    }
    let mut agree = 0;
    let mut failures: Vec<Failure> = Vec::new();
    for c in 0..args.cases {
        let (case, desc) = generate_case(args, c)?;
        let sigma = args.sigma[c % args.sigma.len()];
        let patterns = patterns_for(&case, args.seed.wrapping_add(c as u64), sigma)?;
        let mut bad = None;
        for p in &patterns {
            if case.answer(p, args.inject_fault)? != case.expected(p) {
                bad = Some(p.clone());
                break;
            }
        }
        match bad {
            None => {
                agree += 1;
                println!("case {c}: {desc} patterns={} ok", patterns.len());
            }
            Some(pattern) => {
                println!(
                    "case {c}: {desc} MISMATCH on pattern {}",
                    join(&pattern, " ")
                );
                failures.push(Failure { case, pattern });
            }
        }
    }
    println!("{agree}/{} agree", args.cases);
    let Some(worst) = failures
        .into_iter()
        .min_by_key(|f| (f.case.size(), f.pattern.len()))
    else {
        return Ok(true);
    };
    let f = shrink(worst, args.inject_fault);
    println!("minimal failing instance:");
    println!("{}", f.case.describe());
    println!("pattern: {}", join(&f.pattern, " "));
    println!("expected: {}", join(&f.case.expected(&f.pattern), " "));
    println!(
        "got: {}",
        join(&f.case.answer(&f.pattern, args.inject_fault)?, " ")
    );
    Ok(false)
}
