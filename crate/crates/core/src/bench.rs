//! Multi-seed benchmarking, parameter sweeps and training-label generation.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::exact_mvc;
use crate::generate::Family;
use crate::graph::Graph;
use crate::io::{load_instance, Instance, InstanceFormat};
use crate::search::{solve, SolveConfig, SolveResult};

/// Per-instance summary over all seeds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub name: String,
    pub n: usize,
    pub m: usize,
    pub min_size: usize,
    /// Mean best size, rounded to one decimal.
    pub avg_size: f64,
    /// Mean time-to-best; absent unless every run reached `min_size`
    /// under a wall-clock budget.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub avg_time_to_best: Option<f64>,
    pub runs: usize,
    pub sizes: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchFailure {
    pub name: String,
    pub error: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub seeds: Vec<u64>,
    pub rows: Vec<BenchRow>,
    pub failures: Vec<BenchFailure>,
}

fn round1(x: f64) -> f64 {
    (x * 10.0).round() / 10.0
}

fn summarize(inst: &Instance, runs: &[SolveResult]) -> BenchRow {
    let sizes: Vec<usize> = runs.iter().map(|r| r.best_size).collect();
    let min_size = sizes.iter().copied().min().unwrap_or(0);
    let avg = sizes.iter().sum::<usize>() as f64 / sizes.len().max(1) as f64;
    let avg_time_to_best = if runs.iter().all(|r| r.best_size == min_size) {
        runs.iter()
            .map(|r| r.time_to_best_seconds)
            .sum::<Option<f64>>()
            .map(|t| t / runs.len() as f64)
    } else {
        None
    };
    BenchRow {
        name: inst.name.clone(),
        n: inst.graph.n(),
        m: inst.graph.m(),
        min_size,
        avg_size: round1(avg),
        avg_time_to_best,
        runs: runs.len(),
        sizes,
    }
}

/// Runs every (instance, seed) pair in parallel. Each run owns its state.
pub fn bench_instances(instances: &[Instance], seeds: &[u64], cfg: &SolveConfig) -> BenchReport {
    let jobs: Vec<(usize, u64)> = (0..instances.len())
        .flat_map(|i| seeds.iter().map(move |&s| (i, s)))
        .collect();
    let results: Vec<(usize, Result<SolveResult>)> = jobs
        .par_iter()
        .map(|&(i, seed)| {
            let cfg = SolveConfig {
                seed,
                ..cfg.clone()
            };
            (i, solve(&instances[i].graph, &cfg))
        })
        .collect();

    let mut report = BenchReport {
        seeds: seeds.to_vec(),
        ..Default::default()
    };
    for (i, inst) in instances.iter().enumerate() {
        let mut runs = Vec::new();
        let mut error = None;
        for (j, r) in &results {
            if *j != i {
                continue;
            }
            match r {
                Ok(r) => runs.push(r.clone()),
                Err(e) => error = Some(e.to_string()),
            }
        }
        match error {
            Some(error) => report.failures.push(BenchFailure {
                name: inst.name.clone(),
                error,
            }),
            None => report.rows.push(summarize(inst, &runs)),
        }
    }
    report
}

/// Loads each path, recording load failures instead of aborting.
pub fn load_all(
    paths: &[PathBuf],
    format: Option<InstanceFormat>,
) -> (Vec<Instance>, Vec<BenchFailure>) {
    let mut ok = Vec::new();
    let mut failed = Vec::new();
    for p in paths {
        match load_instance(p, format) {
            Ok(inst) => ok.push(inst),
            Err(e) => {
                log::error!("{}: {e}", p.display());
                failed.push(BenchFailure {
                    name: p.display().to_string(),
                    error: e.to_string(),
                });
            }
        }
    }
    (ok, failed)
}

pub fn bench_paths(
    paths: &[PathBuf],
    format: Option<InstanceFormat>,
    seeds: &[u64],
    cfg: &SolveConfig,
) -> BenchReport {
    let (instances, failures) = load_all(paths, format);
    let mut report = bench_instances(&instances, seeds, cfg);
    report.failures.splice(0..0, failures);
    report
}

impl BenchReport {
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        let width = self
            .rows
            .iter()
            .map(|r| r.name.len())
            .chain(std::iter::once(8))
            .max()
            .unwrap();
        writeln!(
            out,
            "{:<width$}  {:>9}  {:>10}  {:>8}  {:>10}  {:>5}",
            "instance", "n", "Min.", "Avg.", "t_Avg.", "runs"
        )
        .unwrap();
        for r in &self.rows {
            let t = r
                .avg_time_to_best
                .map(|t| format!("{t:.3}"))
                .unwrap_or_else(|| "-".into());
            writeln!(
                out,
                "{:<width$}  {:>9}  {:>10}  {:>8.1}  {:>10}  {:>5}",
                r.name, r.n, r.min_size, r.avg_size, t, r.runs
            )
            .unwrap();
        }
        for f in &self.failures {
            writeln!(out, "{:<width$}  FAILED: {}", f.name, f.error).unwrap();
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TuneRow {
    pub ctner_max: usize,
    pub bms_num: usize,
    /// Instances whose best size over all seeds reached the target.
    pub hits: usize,
    pub instances: usize,
}

/// Grid sweep over `(ctner_max, bms_num)`; `targets[i]` is the size that
/// counts as a hit for `instances[i]`.
pub fn tune(
    instances: &[Instance],
    targets: &[usize],
    ctner_values: &[usize],
    bms_values: &[usize],
    seeds: &[u64],
    cfg: &SolveConfig,
) -> Vec<TuneRow> {
    assert_eq!(instances.len(), targets.len());
    let mut rows = Vec::new();
    for &ctner_max in ctner_values {
        for &bms_num in bms_values {
            let cell = SolveConfig {
                ctner_max,
                bms_num,
                ..cfg.clone()
            };
            let report = bench_instances(instances, seeds, &cell);
            let hits = report
                .rows
                .iter()
                .filter(|row| {
                    instances
                        .iter()
                        .position(|i| i.name == row.name)
                        .is_some_and(|i| row.min_size <= targets[i])
                })
                .count();
            rows.push(TuneRow {
                ctner_max,
                bms_num,
                hits,
                instances: instances.len(),
            });
        }
    }
    rows
}

pub const LABEL_FORMAT: &str = "mvc-labels";
pub const MAX_LABEL_VERTICES: usize = 250;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabelRecord {
    pub graph_id: String,
    pub family: String,
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    /// 1 when the vertex belongs to the stored optimum.
    pub labels: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabelDataset {
    pub format: String,
    pub version: u32,
    pub note: String,
    pub families: Vec<String>,
    pub records: Vec<LabelRecord>,
}

impl LabelDataset {
    pub fn new(families: Vec<String>) -> Self {
        LabelDataset {
            format: LABEL_FORMAT.into(),
            version: 1,
            note: "labels mark one minimum vertex cover per graph; other optima may exist. \
                   udg families are random geometric graphs in the unit square."
                .into(),
            families,
            records: Vec::new(),
        }
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string(self)?;
        std::fs::write(path, text).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// Solves `g` exactly and returns its labeled record, or `None` if the node
/// budget ran out.
pub fn label_graph(
    graph_id: String,
    family: String,
    g: &Graph,
    node_budget: u64,
) -> Option<LabelRecord> {
    match exact_mvc(g, node_budget) {
        Ok(res) => {
            let mut labels = vec![0u8; g.n()];
            for &v in &res.one_optimum {
                labels[v] = 1;
            }
            Some(LabelRecord {
                graph_id,
                family,
                n: g.n(),
                edges: g.edges().iter().map(|&(u, v)| [u, v]).collect(),
                labels,
            })
        }
        Err(e) => {
            log::warn!("{graph_id}: skipped, {e}");
            None
        }
    }
}

#[derive(Clone, Debug)]
pub struct LabelGenConfig {
    pub count: usize,
    pub min_n: usize,
    pub max_n: usize,
    pub families: Vec<Family>,
    pub seed: u64,
    pub node_budget: u64,
}

/// Generates `count` random graphs (cycling through `families`) and labels
/// each with an exact optimum. Returns the dataset and the number skipped.
pub fn generate_labels(cfg: &LabelGenConfig) -> Result<(LabelDataset, usize)> {
    if cfg.families.is_empty() {
        return Err(Error::Config("no graph families given".into()));
    }
    if cfg.min_n > cfg.max_n || cfg.max_n > MAX_LABEL_VERTICES {
        return Err(Error::Config(format!(
            "vertex range {}..={} must be ordered and at most {MAX_LABEL_VERTICES}",
            cfg.min_n, cfg.max_n
        )));
    }
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(cfg.seed);
    let graphs: Vec<(String, Family, Graph)> = (0..cfg.count)
        .map(|i| {
            let fam = cfg.families[i % cfg.families.len()];
            let n = rng.gen_range(cfg.min_n..=cfg.max_n);
            (format!("g{i:05}"), fam, fam.sample(n, &mut rng))
        })
        .collect();
    let records: Vec<Option<LabelRecord>> = graphs
        .par_iter()
        .map(|(id, fam, g)| label_graph(id.clone(), fam.describe(), g, cfg.node_budget))
        .collect();
    let mut ds = LabelDataset::new(cfg.families.iter().map(|f| f.describe()).collect());
    let mut skipped = 0;
    for r in records {
        match r {
            Some(r) => ds.records.push(r),
            None => skipped += 1,
        }
    }
    Ok((ds, skipped))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::Budget;

    fn star(leaves: usize) -> Graph {
        Graph::from_edges((1..=leaves).map(|i| (0, i)), 0)
    }

    #[test]
    fn empty_bench() {
        let report = bench_instances(&[], &[1, 2], &SolveConfig::with_steps(10, 1));
        assert!(report.rows.is_empty());
        assert!(report.render_table().starts_with("instance"));
    }

    #[test]
    fn bench_star_rows() {
        let inst = Instance::from_graph("star", star(6));
        let cfg = SolveConfig::with_steps(500, 1);
        let report = bench_instances(&[inst], &(1..=10).collect::<Vec<_>>(), &cfg);
        let row = &report.rows[0];
        assert_eq!((row.min_size, row.runs), (1, 10));
        assert_eq!(row.avg_size, 1.0);
        assert_eq!(row.avg_time_to_best, None);
    }

    #[test]
    fn time_average_only_when_all_runs_hit_min() {
        let inst = Instance::from_graph("x", star(2));
        let mk = |size, t| SolveResult {
            best_cover: vec![],
            best_size: size,
            time_to_best_seconds: Some(t),
            steps_to_best: 0,
            trace: vec![],
            steps_executed: 0,
            initial_size: size,
        };
        let row = summarize(&inst, &[mk(3, 1.0), mk(3, 2.0)]);
        assert_eq!(row.avg_time_to_best, Some(1.5));
        let row = summarize(&inst, &[mk(3, 1.0), mk(4, 2.0)]);
        assert_eq!(
            (row.min_size, row.avg_size, row.avg_time_to_best),
            (3, 3.5, None)
        );
    }

    #[test]
    fn failed_config_recorded() {
        let inst = Instance::from_graph("star", star(3));
        let cfg = SolveConfig {
            budget: Budget::Seconds(-1.0),
            ..Default::default()
        };
        let report = bench_instances(&[inst], &[1], &cfg);
        assert!(report.rows.is_empty());
        assert_eq!(report.failures.len(), 1);
    }

    #[test]
    fn star_labels() {
        let rec = label_graph("s".into(), "star".into(), &star(9), 1000).unwrap();
        assert_eq!(rec.labels[0], 1);
        assert!(rec.labels[1..].iter().all(|&l| l == 0));
        let k3 = Graph::from_edges([(0, 1), (1, 2), (0, 2)], 0);
        let rec = label_graph("k3".into(), "k".into(), &k3, 1000).unwrap();
        assert_eq!(rec.labels.iter().filter(|&&l| l == 1).count(), 2);
    }

    #[test]
    fn label_range_checked() {
        let cfg = LabelGenConfig {
            count: 1,
            min_n: 10,
            max_n: 400,
            families: vec![Family::Gnp { p: 0.1 }],
            seed: 1,
            node_budget: 10,
        };
        assert!(generate_labels(&cfg).is_err());
    }
}
