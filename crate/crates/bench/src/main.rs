use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ophash::lsh::{evaluate_recall, gold_standard, Sourcing};
use ophash::{build_index, query_candidates, FamilyConfig, LshIndex, LshParams, Scheme};

use ophash_bench::data::{
    generate_corpus, load_corpus, unify_universe, word_pair, write_corpus, CorpusFormat,
    CorpusSpec, PlantTier, WORD_PAIRS, WORD_PAIR_UNIVERSE,
};
use ophash_bench::error::{usage, EXIT_USAGE};
use ophash_bench::mse::{run_mse_experiment, MseConfig, NamedPair};
use ophash_bench::report::{emit, render_csv, Row};
use ophash_bench::retrieval::{paired_summary, run_retrieval_experiment, RetrievalConfig};
use ophash_bench::verify::{run_verify, VerifyConfig};
use ophash_bench::{BenchError, Result};

#[derive(Parser)]
#[command(name = "ophash", version, about = "One permutation hashing: experiments and tools")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the exhaustive and sampled checks; exit 2 if any fails.
    Verify(VerifyArgs),
    /// Empirical MSE versus closed-form variance over a k grid.
    Mse(MseArgs),
    /// Paired (K, L) retrieval runs of both schemes.
    Retrieve(RetrieveArgs),
    /// Write a synthetic sparse corpus (train and query files).
    GenCorpus(GenCorpusArgs),
    /// Build an index and serialize it.
    Index(IndexArgs),
    /// Query a serialized index.
    Query(QueryArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Rotation,
    Bidirectional,
    Both,
}

impl SchemeArg {
    fn schemes(self) -> Vec<Scheme> {
        match self {
            Self::Rotation => vec![Scheme::Rotation],
            Self::Bidirectional => vec![Scheme::Bidirectional],
            Self::Both => Scheme::ALL.to_vec(),
        }
    }

    fn single(self) -> Result<Scheme> {
        match self {
            Self::Rotation => Ok(Scheme::Rotation),
            Self::Bidirectional => Ok(Scheme::Bidirectional),
            Self::Both => Err(usage("this command needs a single scheme")),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Indices,
    Svmlight,
}

impl From<FormatArg> for CorpusFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Indices => CorpusFormat::Indices,
            FormatArg::Svmlight => CorpusFormat::SvmLight,
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Sampled hash families per census configuration.
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    /// Force the densification offset C (negative control).
    #[arg(long, hide = true)]
    force_offset: Option<u32>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MseArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_enum, default_value = "both")]
    scheme: SchemeArg,
    /// Comma-separated k grid.
    #[arg(long, value_delimiter = ',', default_value = "16,32,64,128,256,512,1024")]
    k: Vec<u64>,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    /// Comma-separated word-pair presets; all twelve by default.
    #[arg(long, value_delimiter = ',')]
    pairs: Vec<String>,
    /// Custom pair instead of presets: `f1,f2,a`.
    #[arg(long, value_delimiter = ',', value_name = "F1,F2,A")]
    custom: Option<Vec<u64>>,
    #[arg(long = "D", default_value_t = WORD_PAIR_UNIVERSE)]
    universe: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CorpusArgs {
    #[arg(long, default_value_t = 10_000)]
    n_train: usize,
    #[arg(long, default_value_t = 1_000)]
    n_query: usize,
    /// Mean nonzeros per item.
    #[arg(long, default_value_t = 73)]
    nnz: u32,
    #[arg(long, default_value_t = 1.0)]
    zipf: f64,
    /// Planted neighbors per query as `count:resemblance`, comma-separated.
    #[arg(long, value_delimiter = ',', default_value = "4:0.8,6:0.5")]
    plant: Vec<String>,
}

impl CorpusArgs {
    fn spec(&self, universe: u32, seed: u64) -> Result<CorpusSpec> {
        let planted = self
            .plant
            .iter()
            .map(|t| {
                let (c, r) = t
                    .split_once(':')
                    .ok_or_else(|| usage(format!("bad tier {t:?}, expected count:resemblance")))?;
                Ok(PlantTier {
                    count: c.parse().map_err(|_| usage(format!("bad count in {t:?}")))?,
                    resemblance: r.parse().map_err(|_| usage(format!("bad resemblance in {t:?}")))?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(CorpusSpec {
            n_train: self.n_train,
            n_query: self.n_query,
            universe,
            mean_nnz: self.nnz,
            zipf_exponent: self.zipf,
            planted,
            seed,
        })
    }
}

#[derive(Args)]
struct RetrieveArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_enum, default_value = "both")]
    scheme: SchemeArg,
    /// Hashes per table.
    #[arg(long = "K")]
    hashes: u32,
    /// Comma-separated table counts.
    #[arg(long = "L", value_delimiter = ',', required = true)]
    tables: Vec<u32>,
    #[arg(long, default_value_t = 10)]
    runs: u32,
    /// Training file; a synthetic corpus is generated when absent.
    #[arg(long, requires = "queries")]
    train: Option<PathBuf>,
    #[arg(long, requires = "train")]
    queries: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "indices")]
    format: FormatArg,
    /// Universe size; inferred from the files when absent.
    #[arg(long = "D")]
    universe: Option<u32>,
    #[arg(long, default_value_t = 10)]
    gold_n: usize,
    /// Directory caching gold-standard neighbor lists.
    #[arg(long)]
    gold_cache: Option<PathBuf>,
    /// Independent hash family per table instead of one shared family.
    #[arg(long)]
    per_table: bool,
    #[command(flatten)]
    corpus: CorpusArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenCorpusArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long = "D", default_value_t = 47_236)]
    universe: u32,
    #[command(flatten)]
    corpus: CorpusArgs,
    #[arg(long, value_enum, default_value = "indices")]
    format: FormatArg,
    /// Output directory; receives `train.txt` and `query.txt`.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct IndexArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_enum, default_value = "bidirectional")]
    scheme: SchemeArg,
    #[arg(long = "K")]
    hashes: u32,
    #[arg(long = "L")]
    tables: u32,
    #[arg(long)]
    train: PathBuf,
    #[arg(long, value_enum, default_value = "indices")]
    format: FormatArg,
    #[arg(long = "D")]
    universe: Option<u32>,
    #[arg(long)]
    per_table: bool,
    /// Index file to write.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct QueryArgs {
    #[arg(long)]
    index: PathBuf,
    #[arg(long)]
    queries: PathBuf,
    #[arg(long, value_enum, default_value = "indices")]
    format: FormatArg,
    /// Training file, for recall against exact neighbors.
    #[arg(long)]
    train: Option<PathBuf>,
    #[arg(long, default_value_t = 10)]
    gold_n: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn verify(a: VerifyArgs) -> Result<()> {
    let cfg = VerifyConfig {
        seed: a.seed,
        census_trials: a.trials,
        forced_offset: a.force_offset,
    };
    let report = run_verify(&cfg)?;
    let text = report.render(&cfg);
    emit(a.out.as_deref(), text.as_bytes())?;
    if report.passed() {
        Ok(())
    } else {
        Err(BenchError::Verification(format!(
            "{} of {} checks failed",
            report.failures(),
            report.checks.len()
        )))
    }
}

fn mse(a: MseArgs) -> Result<()> {
    let universe = a.universe as u64;
    if a.custom.as_ref().is_some_and(|c| c.len() != 3) {
        return Err(usage("--custom takes exactly three values: f1,f2,a"));
    }
    let pairs = match (&a.custom, a.pairs.is_empty()) {
        (Some(c), true) => vec![NamedPair {
            name: "custom".into(),
            f1: c[0],
            f2: c[1],
            a: c[2],
            universe,
        }],
        (Some(_), false) => return Err(usage("--custom and --pairs are exclusive")),
        (None, true) => WORD_PAIRS
            .iter()
            .map(|p| NamedPair::from_word_pair(p, universe))
            .collect(),
        (None, false) => a
            .pairs
            .iter()
            .map(|n| {
                word_pair(n)
                    .map(|p| NamedPair::from_word_pair(p, universe))
                    .ok_or_else(|| usage(format!("unknown pair {n:?}")))
            })
            .collect::<Result<_>>()?,
    };
    let cfg = MseConfig {
        pairs,
        ks: a.k,
        trials: a.trials,
        seed: a.seed,
        schemes: a.scheme.schemes(),
    };
    let (rows, notes) = run_mse_experiment(&cfg)?;
    emit(a.out.as_deref(), &render_csv(&notes, &rows)?)
}

fn load_pair(
    train: &Path,
    queries: &Path,
    format: CorpusFormat,
    universe: Option<u32>,
    notes: &mut Vec<String>,
) -> Result<(Vec<ophash::SparseBinarySet>, Vec<ophash::SparseBinarySet>, u32)> {
    let mut t = load_corpus(train, format, universe)?;
    let mut q = load_corpus(queries, format, universe)?;
    let d = t.universe.max(q.universe);
    if t.inferred {
        notes.push(format!("D inferred from the data as {d}"));
    }
    unify_universe(&mut t.sets, d)?;
    unify_universe(&mut q.sets, d)?;
    Ok((t.sets, q.sets, d))
}

fn retrieve(a: RetrieveArgs) -> Result<()> {
    let mut notes = Vec::new();
    let (train, queries, d, dataset) = match (&a.train, &a.queries) {
        (Some(t), Some(q)) => {
            let (tr, qs, d) = load_pair(t, q, a.format.into(), a.universe, &mut notes)?;
            (tr, qs, d, t.display().to_string())
        }
        _ => {
            let spec = a.corpus.spec(a.universe.unwrap_or(47_236), a.seed)?;
            let c = generate_corpus(&spec)?;
            notes.push(format!("synthetic corpus {spec:?}"));
            (c.train, c.queries, c.universe, "synthetic".to_string())
        }
    };
    let cfg = RetrievalConfig {
        dataset,
        k: a.hashes,
        ls: a.tables,
        runs: a.runs,
        seed: a.seed,
        schemes: a.scheme.schemes(),
        gold_n: a.gold_n,
        sourcing: if a.per_table { Sourcing::PerTable } else { Sourcing::Shared },
        gold_cache: a.gold_cache,
    };
    let (rows, more) = run_retrieval_experiment(&train, &queries, d, &cfg)?;
    notes.extend(more);
    for s in paired_summary(&rows) {
        let line = format!(
            "K={} L={}: recall {:.4} vs {:.4}, candidates {:.1} vs {:.1} (rotation vs bidirectional), \
             bidirectional fewer in {}/{} runs, sign test p = {:.4}",
            s.k,
            s.l,
            s.recall_rotation,
            s.recall_bidirectional,
            s.candidates_rotation,
            s.candidates_bidirectional,
            s.bidirectional_fewer,
            s.runs,
            s.sign_test_p
        );
        eprintln!("{line}");
        notes.push(line);
    }
    emit(a.out.as_deref(), &render_csv(&notes, &rows)?)
}

fn gen_corpus(a: GenCorpusArgs) -> Result<()> {
    let spec = a.corpus.spec(a.universe, a.seed)?;
    let c = generate_corpus(&spec)?;
    std::fs::create_dir_all(&a.out).map_err(BenchError::io(&a.out))?;
    write_corpus(&a.out.join("train.txt"), &c.train, a.format.into())?;
    write_corpus(&a.out.join("query.txt"), &c.queries, a.format.into())?;
    eprintln!(
        "wrote {} training items and {} queries over D = {} to {}",
        c.train.len(),
        c.queries.len(),
        c.universe,
        a.out.display()
    );
    Ok(())
}

fn index(a: IndexArgs) -> Result<()> {
    let t = load_corpus(&a.train, a.format.into(), a.universe)?;
    if t.inferred {
        eprintln!("D inferred from the data as {}", t.universe);
    }
    let cfg = FamilyConfig::new(t.universe, a.scheme.single()?, a.seed).with_sourcing(if a.per_table {
        Sourcing::PerTable
    } else {
        Sourcing::Shared
    });
    let idx = build_index(&t.sets, LshParams::new(a.hashes, a.tables)?, cfg)?;
    if !idx.skipped().is_empty() {
        log::warn!("{} empty items skipped", idx.skipped().len());
    }
    let f = File::create(&a.out).map_err(BenchError::io(&a.out))?;
    idx.write_to(BufWriter::new(f))?;
    eprintln!("indexed {} items into {}", idx.items() as usize - idx.skipped().len(), a.out.display());
    Ok(())
}

struct QueryRow {
    query: usize,
    candidates: usize,
    scanned: u64,
    recall: Option<f64>,
    ids: String,
}

impl Row for QueryRow {
    fn header() -> &'static [&'static str] {
        &["query", "candidates", "scanned", "recall", "ids"]
    }

    fn fields(&self) -> Vec<String> {
        vec![
            self.query.to_string(),
            self.candidates.to_string(),
            self.scanned.to_string(),
            self.recall.map_or(String::new(), |r| r.to_string()),
            self.ids.clone(),
        ]
    }
}

fn query(a: QueryArgs) -> Result<()> {
    let f = File::open(&a.index).map_err(BenchError::io(&a.index))?;
    let idx = LshIndex::read_from(BufReader::new(f))?;
    let d = idx.config().universe;
    let qs = load_corpus(&a.queries, a.format.into(), Some(d))?.sets;
    let mut notes = vec![format!(
        "index K={} L={} scheme={} D={d}",
        idx.params().hashes_per_table(),
        idx.params().tables(),
        idx.config().scheme
    )];
    let recall = match &a.train {
        Some(t) => {
            let train = load_corpus(t, a.format.into(), Some(d))?.sets;
            let gold = gold_standard(&train, &qs, a.gold_n)?;
            let rep = evaluate_recall(&idx, &qs, &gold)?;
            notes.push(format!("mean recall {:.4}", rep.mean_recall));
            Some(rep.per_query)
        }
        None => None,
    };
    let rows = qs
        .iter()
        .enumerate()
        .map(|(i, q)| {
            let r = if q.is_empty() {
                Default::default()
            } else {
                query_candidates(q, &idx)?
            };
            Ok(QueryRow {
                query: i,
                candidates: r.candidates.len(),
                scanned: r.scanned,
                recall: recall.as_ref().and_then(|v| v[i].recall),
                ids: r.candidates.iter().map(u32::to_string).collect::<Vec<_>>().join(" "),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    emit(a.out.as_deref(), &render_csv(&notes, &rows)?)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let result = match cli.command {
        Command::Verify(a) => verify(a),
        Command::Mse(a) => mse(a),
        Command::Retrieve(a) => retrieve(a),
        Command::GenCorpus(a) => gen_corpus(a),
        Command::Index(a) => index(a),
        Command::Query(a) => query(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
