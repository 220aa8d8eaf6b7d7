//! Sample generation and replicated selection experiments.

use std::io::Write;
use std::path::Path;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimation::{EstimatedProvider, Grid2d, Sample, MIN_OBSERVATIONS};
use crate::oracle::{FeatureId, Scenario, ScenarioSpec};
use crate::selection::{select_all, MethodSpec, SelectionTrace};

pub const MIN_EXPERIMENT_N: usize = 50;

/// Unordered first pairs that form a relevance-optimal set:
/// (X, Y), (X, X-Y), (Y, X-Y), (3X+1, Y), (3X+1, X-Y).
pub const OPTIMAL_PAIRS: [(FeatureId, FeatureId); 5] = [
    (FeatureId::V1, FeatureId::V7),
    (FeatureId::V1, FeatureId::V4),
    (FeatureId::V7, FeatureId::V4),
    (FeatureId::V2, FeatureId::V7),
    (FeatureId::V2, FeatureId::V4),
];

/// Draws `n` rows of the ten benchmark features and the class.
pub fn generate_sample<R: Rng + ?Sized>(spec: &ScenarioSpec, n: usize, rng: &mut R) -> Result<Sample> {
    spec.validate()?;
    if n < MIN_OBSERVATIONS {
        return Err(Error::InvalidSample(format!(
            "need at least {MIN_OBSERVATIONS} observations, got {n}"
        )));
    }
    let uniform = Uniform::new_inclusive(-spec.delta, spec.delta)
        .map_err(|e| Error::InvalidScenario(e.to_string()))?;
    let draw = |rng: &mut R| match spec.scenario {
        Scenario::Uniform => uniform.sample(rng),
        Scenario::Gaussian => StandardNormal.sample(rng),
    };
    let mut columns: Vec<Vec<f64>> = (0..10).map(|_| Vec::with_capacity(n)).collect();
    let mut labels = Vec::with_capacity(n);
    for _ in 0..n {
        let x: f64 = draw(rng);
        let y: f64 = draw(rng);
        let z: f64 = draw(rng);
        let w: f64 = draw(rng);
        let row = [
            x,
            spec.a * x + spec.b,
            y * y,
            x - y,
            z,
            z * z,
            y,
            x * x,
            w + spec.d,
            z + w,
        ];
        for (col, v) in columns.iter_mut().zip(row) {
            col.push(v);
        }
        labels.push(u8::from(x + spec.k * y >= 0.0));
    }
    Sample::new(Sample::default_names(10), columns, labels)
}

/// Whether the first two selections form one of [`OPTIMAL_PAIRS`]. Traces
/// with fewer than two selections count as misses.
pub fn optimal_pair_hit(t: &SelectionTrace) -> bool {
    if t.selected.len() < 2 {
        return false;
    }
    let (a, b) = (t.selected[0], t.selected[1]);
    OPTIMAL_PAIRS.iter().any(|&(p, q)| {
        let (p, q) = (p.index(), q.index());
        (a == p && b == q) || (a == q && b == p)
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    /// Scenario and shape parameters; its `k` is replaced by each entry of `ks`.
    pub spec: ScenarioSpec,
    pub ks: Vec<f64>,
    pub ns: Vec<usize>,
    pub methods: Vec<MethodSpec>,
    pub replicates: usize,
    pub seed: u64,
    pub grid: Grid2d,
    pub keep_traces: bool,
}

impl ExperimentConfig {
    pub fn new(spec: ScenarioSpec, ks: Vec<f64>, ns: Vec<usize>, methods: Vec<MethodSpec>, replicates: usize, seed: u64) -> Self {
        ExperimentConfig {
            spec,
            ks,
            ns,
            methods,
            replicates,
            seed,
            grid: Grid2d::default(),
            keep_traces: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidExperiment(m));
        if self.replicates == 0 {
            return bad("replicates must be at least 1".into());
        }
        if self.ks.is_empty() || self.ns.is_empty() || self.methods.is_empty() {
            return bad("k, n and methods must each have at least one entry".into());
        }
        if let Some(n) = self.ns.iter().find(|&&n| n < MIN_EXPERIMENT_N) {
            return bad(format!("sample sizes must be at least {MIN_EXPERIMENT_N}, got {n}"));
        }
        for &k in &self.ks {
            ScenarioSpec { k, ..self.spec }.validate()?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellResult {
    pub scenario: Scenario,
    pub k: f64,
    pub n: usize,
    pub method: MethodSpec,
    pub hits: usize,
    /// Replicates that produced a usable sample.
    pub replicates: usize,
    /// Replicates dropped because a feature was constant or a class missing.
    pub failures: usize,
}

impl CellResult {
    pub fn frequency(&self) -> f64 {
        if self.replicates == 0 {
            0.0
        } else {
            self.hits as f64 / self.replicates as f64
        }
    }

    /// Binomial standard error of [`CellResult::frequency`].
    pub fn std_error(&self) -> f64 {
        if self.replicates == 0 {
            return 0.0;
        }
        let p = self.frequency();
        (p * (1.0 - p) / self.replicates as f64).sqrt()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ReplicateTrace {
    pub k: f64,
    pub n: usize,
    pub replicate: usize,
    pub trace: SelectionTrace,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentResult {
    pub seed: u64,
    pub cells: Vec<CellResult>,
    pub traces: Vec<ReplicateTrace>,
    #[serde(skip)]
    pub runtime: Duration,
}

impl ExperimentResult {
    pub fn cell(&self, k: f64, n: usize, method: &MethodSpec) -> Option<&CellResult> {
        self.cells
            .iter()
            .find(|c| c.k == k && c.n == n && c.method == *method)
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// RNG for one replicate: the key mixes the master seed with the cell
/// (k, n), and the replicate index selects the ChaCha stream.
pub fn replicate_rng(seed: u64, k: f64, n: usize, replicate: usize) -> ChaCha8Rng {
    let key = splitmix(splitmix(splitmix(seed) ^ k.to_bits()) ^ n as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(key);
    rng.set_stream(replicate as u64);
    rng
}

enum Outcome {
    Traces(Vec<SelectionTrace>),
    Failed,
}

fn run_replicate(c: &ExperimentConfig, spec: &ScenarioSpec, n: usize, r: usize) -> Result<Outcome> {
    let mut rng = replicate_rng(c.seed, spec.k, n, r);
    let sample = generate_sample(spec, n, &mut rng)?;
    match EstimatedProvider::new(sample, c.grid) {
        Ok(p) => Ok(Outcome::Traces(c.methods.iter().map(|m| select_all(m, &p)).collect())),
        Err(Error::DegenerateSample(_)) => Ok(Outcome::Failed),
        Err(e) => Err(e),
    }
}

/// Runs every (k, n) cell, replicates in parallel. Results depend only on
/// the configuration, not on scheduling.
pub fn run_experiment(c: &ExperimentConfig) -> Result<ExperimentResult> {
    c.validate()?;
    let start = Instant::now();
    let mut cells = Vec::new();
    let mut traces = Vec::new();
    for &k in &c.ks {
        let spec = ScenarioSpec { k, ..c.spec };
        for &n in &c.ns {
            let outcomes: Vec<Outcome> = (0..c.replicates)
                .into_par_iter()
                .map(|r| run_replicate(c, &spec, n, r))
                .collect::<Result<_>>()?;
            let failures = outcomes.iter().filter(|o| matches!(o, Outcome::Failed)).count();
            for (mi, m) in c.methods.iter().enumerate() {
                let hits = outcomes
                    .iter()
                    .filter(|o| matches!(o, Outcome::Traces(t) if optimal_pair_hit(&t[mi])))
                    .count();
                cells.push(CellResult {
                    scenario: spec.scenario,
                    k,
                    n,
                    method: *m,
                    hits,
                    replicates: c.replicates - failures,
                    failures,
                });
            }
            if c.keep_traces {
                for (replicate, o) in outcomes.into_iter().enumerate() {
                    if let Outcome::Traces(ts) = o {
                        traces.extend(ts.into_iter().map(|trace| ReplicateTrace {
                            k,
                            n,
                            replicate,
                            trace,
                        }));
                    }
                }
            }
        }
    }
    Ok(ExperimentResult {
        seed: c.seed,
        cells,
        traces,
        runtime: start.elapsed(),
    })
}

pub const CSV_HEADER: [&str; 8] = ["scenario", "k", "n", "method", "beta", "frequency", "replicates", "seed"];

/// One row per cell; the runtime is deliberately left out so reruns are
/// byte-identical.
pub fn emit_csv<W: Write>(r: &ExperimentResult, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(CSV_HEADER)?;
    for c in &r.cells {
        w.write_record([
            c.scenario.to_string(),
            c.k.to_string(),
            c.n.to_string(),
            c.method.key().to_string(),
            c.method.beta().map(|b| b.to_string()).unwrap_or_default(),
            format!("{:.4}", c.frequency()),
            c.replicates.to_string(),
            r.seed.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit_csv_path(r: &ExperimentResult, path: &Path) -> Result<()> {
    emit_csv(r, std::fs::File::create(path)?)
}

pub fn write_traces_json<W: Write>(r: &ExperimentResult, writer: W) -> Result<()> {
    serde_json::to_writer_pretty(writer, &r.traces)?;
    Ok(())
}
