//! Synthetic pairs and corpora, and corpus files.

use std::collections::HashSet;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use ophash::oracle::stream_rng;
use ophash::{PairStats, SparseBinarySet};
use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Zipf};
use rayon::prelude::*;

use crate::error::{usage, BenchError, Result};

/// Counts of a pair of sets to realize on `[0, universe)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SyntheticPairSpec {
    pub f1: u32,
    pub f2: u32,
    pub a: u32,
    pub universe: u32,
    pub seed: u64,
}

impl SyntheticPairSpec {
    pub fn validate(&self) -> Result<()> {
        if self.a > self.f1.min(self.f2) {
            return Err(usage(format!("a = {} exceeds min(f1, f2)", self.a)));
        }
        if self.f1 as u64 + self.f2 as u64 - self.a as u64 > self.universe as u64 {
            return Err(usage(format!("union does not fit in D = {}", self.universe)));
        }
        Ok(())
    }
}

/// Two sets with exactly `f1`, `f2` elements and `a` in common, drawn
/// uniformly without replacement.
pub fn generate_pair(spec: &SyntheticPairSpec) -> Result<(SparseBinarySet, SparseBinarySet)> {
    spec.validate()?;
    let SyntheticPairSpec { f1, f2, a, universe, seed } = *spec;
    let union = (f1 + f2 - a) as usize;
    let mut rng = stream_rng(seed, 0);
    let picked = sample(&mut rng, universe as usize, union).into_vec();
    let ix = |r: std::ops::Range<u32>| picked[r.start as usize..r.end as usize].iter().map(|&x| x as u32);
    let s1 = ix(0..f1).collect();
    let s2 = ix(0..a).chain(ix(f1..f1 + f2 - a)).collect();
    Ok((
        SparseBinarySet::new(universe, s1)?,
        SparseBinarySet::new(universe, s2)?,
    ))
}

/// A word pair given by its two frequencies and resemblance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WordPair {
    pub name: &'static str,
    pub f1: u32,
    pub f2: u32,
    pub resemblance: f64,
}

impl WordPair {
    /// Intersection size implied by the rounded resemblance.
    pub fn intersection(&self) -> u32 {
        let r = self.resemblance;
        (r * (self.f1 + self.f2) as f64 / (1.0 + r)).round() as u32
    }

    pub fn stats(&self, universe: u64, k: u64) -> Result<PairStats> {
        Ok(PairStats::new(
            self.f1 as u64,
            self.f2 as u64,
            self.intersection() as u64,
            universe,
            k,
        )?)
    }
}

/// Universe of the word-pair presets: `2^16` documents.
pub const WORD_PAIR_UNIVERSE: u32 = 1 << 16;

/// Document frequencies and resemblances of twelve word pairs over a
/// `2^16`-document web crawl.
pub const WORD_PAIRS: [WordPair; 12] = [
    WordPair { name: "HONG-KONG", f1: 940, f2: 948, resemblance: 0.925 },
    WordPair { name: "RIGHTS-RESERVED", f1: 12_234, f2: 11_272, resemblance: 0.877 },
    WordPair { name: "A-THE", f1: 39_063, f2: 42_754, resemblance: 0.644 },
    WordPair { name: "UNITED-STATES", f1: 4_079, f2: 3_981, resemblance: 0.591 },
    WordPair { name: "TOGO-GREENLAND", f1: 231, f2: 200, resemblance: 0.528 },
    WordPair { name: "ANTILLES-ALBANIA", f1: 184, f2: 275, resemblance: 0.457 },
    WordPair { name: "CREDIT-CARD", f1: 2_999, f2: 2_697, resemblance: 0.285 },
    WordPair { name: "COSTA-RICO", f1: 773, f2: 611, resemblance: 0.234 },
    WordPair { name: "LOW-PAY", f1: 2_936, f2: 2_828, resemblance: 0.112 },
    WordPair { name: "VIRUSES-ANTIVIRUS", f1: 212, f2: 152, resemblance: 0.113 },
    WordPair { name: "REVIEW-PAPER", f1: 3_197, f2: 1_944, resemblance: 0.078 },
    WordPair { name: "FUNNIEST-ADDICT", f1: 68, f2: 77, resemblance: 0.028 },
];

pub fn word_pair(name: &str) -> Option<&'static WordPair> {
    WORD_PAIRS.iter().find(|p| p.name.eq_ignore_ascii_case(name))
}

/// Near-duplicates planted next to every query.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlantTier {
    pub count: usize,
    pub resemblance: f64,
}

/// Shape of a synthetic sparse corpus. Background items draw features from
/// a Zipf law over a randomly relabeled universe; every query additionally
/// gets planted neighbors in the training set.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusSpec {
    /// Training items, planted ones included.
    pub n_train: usize,
    pub n_query: usize,
    pub universe: u32,
    /// Item sizes are uniform on `[mean/2, 3 mean/2]`.
    pub mean_nnz: u32,
    pub zipf_exponent: f64,
    pub planted: Vec<PlantTier>,
    pub seed: u64,
}

impl Default for CorpusSpec {
    /// Dimensionality and sparsity of a news-text corpus (47,236 features,
    /// about 73 per document), scaled down to 10^4 training items.
    fn default() -> Self {
        Self {
            n_train: 10_000,
            n_query: 1_000,
            universe: 47_236,
            mean_nnz: 73,
            zipf_exponent: 1.0,
            planted: vec![
                PlantTier { count: 4, resemblance: 0.8 },
                PlantTier { count: 6, resemblance: 0.5 },
            ],
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    pub universe: u32,
    pub train: Vec<SparseBinarySet>,
    pub queries: Vec<SparseBinarySet>,
}

impl CorpusSpec {
    fn planted_per_query(&self) -> usize {
        self.planted.iter().map(|t| t.count).sum()
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_query == 0 || self.n_train == 0 {
            return Err(usage("corpus needs at least one training item and one query"));
        }
        if self.n_train < self.n_query * self.planted_per_query() {
            return Err(usage(format!(
                "{} training items cannot hold {} planted neighbors per query",
                self.n_train,
                self.planted_per_query()
            )));
        }
        if self.mean_nnz == 0 || 3 * self.mean_nnz as u64 / 2 > self.universe as u64 / 4 {
            return Err(usage("mean nonzeros must be positive and well below D"));
        }
        if self.planted.iter().any(|t| !(t.resemblance > 0.0 && t.resemblance <= 1.0)) {
            return Err(usage("planted resemblance must be in (0, 1]"));
        }
        if !(self.zipf_exponent > 0.0) {
            return Err(usage("Zipf exponent must be positive"));
        }
        Ok(())
    }
}

struct FeatureSampler {
    zipf: Zipf<f64>,
    labels: Vec<u32>,
}

impl FeatureSampler {
    fn new(spec: &CorpusSpec) -> Self {
        let mut labels: Vec<u32> = (0..spec.universe).collect();
        labels.shuffle(&mut stream_rng(spec.seed, u64::MAX));
        Self {
            zipf: Zipf::new(spec.universe as u64, spec.zipf_exponent).expect("validated exponent"),
            labels,
        }
    }

    fn draw<R: Rng>(&self, rng: &mut R) -> u32 {
        self.labels[self.zipf.sample(rng) as usize - 1]
    }

    /// `n` distinct features, none in `avoid`.
    fn distinct<R: Rng>(&self, rng: &mut R, n: usize, avoid: &HashSet<u32>) -> Vec<u32> {
        let mut out = HashSet::with_capacity(n);
        while out.len() < n {
            let x = self.draw(rng);
            if !avoid.contains(&x) {
                out.insert(x);
            }
        }
        let mut out: Vec<u32> = out.into_iter().collect();
        out.sort_unstable();
        out
    }

    fn size<R: Rng>(rng: &mut R, mean: u32) -> usize {
        rng.gen_range(mean.div_ceil(2)..=mean + mean / 2) as usize
    }
}

/// Neighbor of `q` of the same size sharing `2 |q| r / (1 + r)` features,
/// so its resemblance to `q` is `r` up to rounding of one element.
fn plant<R: Rng>(q: &[u32], r: f64, fs: &FeatureSampler, rng: &mut R) -> Vec<u32> {
    let f = q.len();
    let shared = ((2.0 * f as f64 * r / (1.0 + r)).round() as usize).clamp(1, f);
    let mut out: Vec<u32> = sample(rng, f, shared).into_iter().map(|i| q[i]).collect();
    let avoid: HashSet<u32> = q.iter().copied().collect();
    out.extend(fs.distinct(rng, f - shared, &avoid));
    out
}

pub fn generate_corpus(spec: &CorpusSpec) -> Result<Corpus> {
    spec.validate()?;
    let fs = FeatureSampler::new(spec);
    let d = spec.universe;
    let none = HashSet::new();
    let queries: Vec<Vec<u32>> = (0..spec.n_query)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(spec.seed, i as u64);
            let n = FeatureSampler::size(&mut rng, spec.mean_nnz);
            fs.distinct(&mut rng, n, &none)
        })
        .collect();
    let planted: Vec<Vec<u32>> = queries
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, q)| {
            let mut rng = stream_rng(spec.seed, (1 << 40) + i as u64);
            spec.planted
                .iter()
                .flat_map(|t| std::iter::repeat(t.resemblance).take(t.count))
                .map(|r| plant(q, r, &fs, &mut rng))
                .collect::<Vec<_>>()
        })
        .collect();
    let background = spec.n_train - planted.len();
    let mut train: Vec<Vec<u32>> = (0..background)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(spec.seed, (2 << 40) + i as u64);
            let n = FeatureSampler::size(&mut rng, spec.mean_nnz);
            fs.distinct(&mut rng, n, &none)
        })
        .chain(planted.into_par_iter())
        .collect();
    train.shuffle(&mut stream_rng(spec.seed, 3 << 40));
    let to_sets = |v: Vec<Vec<u32>>| -> Result<Vec<SparseBinarySet>> {
        v.into_iter()
            .map(|ix| Ok(SparseBinarySet::new(d, ix)?))
            .collect()
    };
    Ok(Corpus {
        universe: d,
        train: to_sets(train)?,
        queries: to_sets(queries)?,
    })
}

/// Corpus file layouts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CorpusFormat {
    /// Whitespace-separated feature indices, optionally after an `id:` label.
    #[default]
    Indices,
    /// `label idx:val ...`; any nonzero value marks the feature present.
    SvmLight,
}

impl FromStr for CorpusFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "indices" => Ok(Self::Indices),
            "svmlight" | "svm-light" => Ok(Self::SvmLight),
            _ => Err(format!("unknown format {s:?}, expected indices or svmlight")),
        }
    }
}

impl fmt::Display for CorpusFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Indices => "indices",
            Self::SvmLight => "svmlight",
        })
    }
}

fn parse_line(line: &str, format: CorpusFormat) -> std::result::Result<Vec<u32>, String> {
    let index = |t: &str| {
        t.parse::<u32>()
            .map_err(|_| format!("invalid feature index {t:?}"))
    };
    let mut tokens = line.split_whitespace().peekable();
    match format {
        CorpusFormat::Indices => {
            if tokens.peek().is_some_and(|t| t.ends_with(':')) {
                tokens.next();
            }
            tokens.map(index).collect()
        }
        CorpusFormat::SvmLight => {
            tokens.next();
            let mut out = Vec::new();
            for t in tokens {
                if t.starts_with("qid:") {
                    continue;
                }
                let (i, v) = t
                    .split_once(':')
                    .ok_or_else(|| format!("expected idx:val, got {t:?}"))?;
                let v: f64 = v.parse().map_err(|_| format!("invalid value {v:?}"))?;
                if v != 0.0 {
                    out.push(index(i)?);
                }
            }
            Ok(out)
        }
    }
}

/// Sets read from a file, and the universe they live in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadedCorpus {
    pub sets: Vec<SparseBinarySet>,
    pub universe: u32,
    /// Whether `universe` was inferred as max index + 1.
    pub inferred: bool,
}

/// One set per line; blank lines are empty sets and `#` lines are skipped.
/// With `universe = None` the universe is inferred from the largest index.
pub fn load_corpus(path: &Path, format: CorpusFormat, universe: Option<u32>) -> Result<LoadedCorpus> {
    let file = File::open(path).map_err(BenchError::io(path))?;
    let mut rows = Vec::new();
    for (n, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(BenchError::io(path))?;
        if line.trim_start().starts_with('#') {
            continue;
        }
        let ix = parse_line(&line, format).map_err(|msg| BenchError::Parse {
            path: path.into(),
            line: n + 1,
            msg,
        })?;
        if let (Some(d), Some(&bad)) = (universe, ix.iter().find(|&&x| universe.is_some_and(|d| x >= d))) {
            return Err(BenchError::Parse {
                path: path.into(),
                line: n + 1,
                msg: format!("index {bad} out of range for D = {d}"),
            });
        }
        rows.push(ix);
    }
    if rows.is_empty() {
        return Err(BenchError::EmptyCorpus { path: path.into() });
    }
    let inferred = universe.is_none();
    let universe = match universe {
        Some(d) => d,
        None => {
            let max = rows.iter().flatten().max().copied().unwrap_or(0);
            max.checked_add(1)
                .ok_or_else(|| usage("feature index too large"))?
        }
    };
    let sets = rows
        .into_iter()
        .map(|ix| Ok(SparseBinarySet::new(universe, ix)?))
        .collect::<Result<_>>()?;
    Ok(LoadedCorpus {
        sets,
        universe,
        inferred,
    })
}

pub fn write_corpus(path: &Path, sets: &[SparseBinarySet], format: CorpusFormat) -> Result<()> {
    let file = File::create(path).map_err(BenchError::io(path))?;
    let mut w = BufWriter::new(file);
    let mut write = || -> std::io::Result<()> {
        for s in sets {
            let mut line = String::new();
            for (i, x) in s.indices().iter().enumerate() {
                match format {
                    CorpusFormat::Indices if i > 0 => line.push(' '),
                    CorpusFormat::Indices => {}
                    CorpusFormat::SvmLight if i == 0 => line.push_str("1 "),
                    CorpusFormat::SvmLight => line.push(' '),
                }
                line.push_str(&x.to_string());
                if format == CorpusFormat::SvmLight {
                    line.push_str(":1");
                }
            }
            if format == CorpusFormat::SvmLight && s.is_empty() {
                line.push('1');
            }
            writeln!(w, "{line}")?;
        }
        w.flush()
    };
    write().map_err(BenchError::io(path))
}

/// Puts every set on the larger of the two universes.
pub fn unify_universe(sets: &mut [SparseBinarySet], universe: u32) -> Result<()> {
    for s in sets.iter_mut() {
        if s.universe() != universe {
            *s = std::mem::replace(s, SparseBinarySet::empty(0)).with_universe(universe)?;
        }
    }
    Ok(())
}
