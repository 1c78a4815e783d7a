use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gcnivc::bench::{self, LabelDataset, LabelGenConfig};
use gcnivc::exact::exact_mvc;
use gcnivc::generate::Family;
use gcnivc::io::{self, ResultFile};
use gcnivc::search::{initial_cover, Budget, InitMethod, SolveConfig};
use gcnivc::{Error, GcnModel, InstanceFormat, ProbabilitySource, Result};

#[derive(Parser)]
#[command(name = "gcnivc", version, about = "Minimum vertex cover local search")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance and write a JSON result.
    Solve(SolveArgs),
    /// Run every instance under several seeds and report Min/Avg/t_Avg.
    Bench(BenchArgs),
    /// Sweep ctner_max x bms_num and count instances reaching a target size.
    Tune(TuneArgs),
    /// Generate small random graphs labeled with an exact minimum cover.
    GenLabels(GenLabelsArgs),
}

#[derive(Args, Clone)]
struct SearchArgs {
    /// Wall-clock cutoff in seconds.
    #[arg(long, default_value_t = 10.0, conflicts_with = "steps")]
    cutoff: f64,
    /// Iteration budget instead of a wall-clock cutoff (deterministic).
    #[arg(long)]
    steps: Option<u64>,
    #[arg(long, default_value_t = gcnivc::search::DEFAULT_BMS_NUM)]
    bms_num: usize,
    #[arg(long, default_value_t = gcnivc::search::DEFAULT_CTNER_MAX)]
    ctner_max: usize,
    /// GCN weights file; degree-based scores are used when omitted.
    #[arg(long)]
    model: Option<PathBuf>,
    /// Initial construction: gcn or greedy.
    #[arg(long, default_value = "gcn", value_parser = parse_init)]
    init: InitMethod,
    /// Replace container-based removal with plain min-loss removal.
    #[arg(long)]
    no_crv: bool,
    /// Drop dcnumber from every tie-break.
    #[arg(long)]
    no_dcnumber: bool,
    /// Stop once a cover of this size is found.
    #[arg(long)]
    target: Option<usize>,
}

fn parse_init(s: &str) -> std::result::Result<InitMethod, String> {
    match s {
        "gcn" => Ok(InitMethod::Gcn),
        "greedy" => Ok(InitMethod::Greedy),
        other => Err(format!("unknown init `{other}`, expected gcn or greedy")),
    }
}

impl SearchArgs {
    fn config(&self, seed: u64) -> Result<SolveConfig> {
        let prob_source = match &self.model {
            Some(path) => ProbabilitySource::Model(GcnModel::load(path)?),
            None => ProbabilitySource::DegreeFallback,
        };
        let budget = match self.steps {
            Some(n) => Budget::Steps(n),
            None => Budget::Seconds(self.cutoff),
        };
        let cfg = SolveConfig {
            budget,
            bms_num: self.bms_num,
            ctner_max: self.ctner_max,
            seed,
            prob_source,
            init: self.init,
            use_crv: !self.no_crv,
            use_dcnumber: !self.no_dcnumber,
            target_size: self.target,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args)]
struct SolveArgs {
    instance: PathBuf,
    /// dimacs, edges, mtx or gset; detected from the file when omitted.
    #[arg(long)]
    format: Option<InstanceFormat>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Only build the initial cover and report its size.
    #[arg(long)]
    construct_only: bool,
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[command(flatten)]
    search: SearchArgs,
}

#[derive(Args)]
struct BenchArgs {
    /// Instance files or directories.
    #[arg(required = false)]
    instances: Vec<PathBuf>,
    #[arg(long)]
    format: Option<InstanceFormat>,
    /// Seed list such as `1-10` or `1,3,5`.
    #[arg(long, default_value = "1-10", value_parser = parse_seeds)]
    seeds: Seeds,
    /// Machine-readable report path.
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[command(flatten)]
    search: SearchArgs,
}

#[derive(Args)]
struct TuneArgs {
    #[arg(required = false)]
    instances: Vec<PathBuf>,
    #[arg(long)]
    format: Option<InstanceFormat>,
    #[arg(long, default_value = "1-10", value_parser = parse_seeds)]
    seeds: Seeds,
    /// Comma-separated ctner_max values.
    #[arg(long, value_delimiter = ',', default_values_t = [1usize, 2, 3, 4])]
    ctner: Vec<usize>,
    /// Comma-separated bms_num values.
    #[arg(long, value_delimiter = ',', default_values_t = [47usize, 48, 49, 50, 51, 52, 53])]
    bms: Vec<usize>,
    /// Target sizes as `name=size`; instances without one use the exact optimum.
    #[arg(long = "target-size", value_parser = parse_target)]
    targets: Vec<(String, usize)>,
    /// Node budget for computing exact targets.
    #[arg(long, default_value_t = 5_000_000)]
    exact_budget: u64,
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[command(flatten)]
    search: SearchArgs,
}

#[derive(Args)]
struct GenLabelsArgs {
    #[arg(long, default_value_t = 100)]
    count: usize,
    #[arg(long, default_value_t = 20)]
    min_n: usize,
    #[arg(long, default_value_t = 60)]
    max_n: usize,
    /// Edge probabilities for G(n, p) graphs.
    #[arg(long, value_delimiter = ',', default_values_t = [0.05f64, 0.1, 0.2])]
    gnp: Vec<f64>,
    /// Connection radii for unit-disk style graphs.
    #[arg(long, value_delimiter = ',', default_values_t = [0.15f64, 0.25])]
    udg: Vec<f64>,
    /// Label these instance files instead of (in addition to) random graphs.
    #[arg(long)]
    input: Vec<PathBuf>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 5_000_000)]
    node_budget: u64,
    #[arg(long, short)]
    output: PathBuf,
}

#[derive(Clone, Debug)]
struct Seeds(Vec<u64>);

fn parse_seeds(s: &str) -> std::result::Result<Seeds, String> {
    let mut out = Vec::new();
    for part in s.split(',').filter(|p| !p.is_empty()) {
        if let Some((a, b)) = part.split_once('-') {
            let a: u64 = a.trim().parse().map_err(|_| format!("bad seed `{a}`"))?;
            let b: u64 = b.trim().parse().map_err(|_| format!("bad seed `{b}`"))?;
            if a > b {
                return Err(format!("empty seed range {part}"));
            }
            out.extend(a..=b);
        } else {
            out.push(
                part.trim()
                    .parse()
                    .map_err(|_| format!("bad seed `{part}`"))?,
            );
        }
    }
    Ok(Seeds(out))
}

fn parse_target(s: &str) -> std::result::Result<(String, usize), String> {
    let (name, size) = s
        .split_once('=')
        .ok_or_else(|| format!("expected name=size, got `{s}`"))?;
    let size = size.parse().map_err(|_| format!("bad size in `{s}`"))?;
    Ok((name.to_string(), size))
}

/// Expands directories one level into their regular files, sorted.
fn expand_paths(paths: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for p in paths {
        if p.is_dir() {
            let mut files: Vec<PathBuf> = std::fs::read_dir(p)
                .map_err(|e| Error::Io {
                    path: p.clone(),
                    source: e,
                })?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.is_file())
                .collect();
            files.sort();
            out.extend(files);
        } else {
            out.push(p.clone());
        }
    }
    Ok(out)
}

fn write_json<T: serde::Serialize>(value: &T, path: &Path) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    std::fs::write(path, text + "\n").map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

fn cmd_solve(args: SolveArgs) -> Result<()> {
    let inst = io::load_instance(&args.instance, args.format)?;
    let cfg = args.search.config(args.seed)?;
    let g = &inst.graph;
    println!("instance {}: n = {}, m = {}", inst.name, g.n(), g.m());

    if args.construct_only {
        let init = initial_cover(g, &cfg)?;
        let valid = g.is_vertex_cover(&init.in_cover);
        println!(
            "initial cover: size = {}, valid = {valid}, before cleanup = {}, redundant removed = {}",
            init.size(),
            init.stats.cover_size_before_cleanup,
            init.stats.redundant_removed
        );
        if let Some(out) = &args.output {
            let report = serde_json::json!({
                "instance": inst.name,
                "init": cfg.echo().init,
                "prob_source": cfg.echo().prob_source,
                "initial_size": init.size(),
                "valid": valid,
                "cover_size_before_cleanup": init.stats.cover_size_before_cleanup,
                "redundant_removed": init.stats.redundant_removed,
                "cover": inst.external_ids(&init.vertices()),
            });
            write_json(&report, out)?;
        }
        return Ok(());
    }

    let result = gcnivc::solve(g, &cfg)?;
    debug_assert!(g.is_cover_list(&result.best_cover));
    let t = result
        .time_to_best_seconds
        .map(|t| format!("{t:.3}s"))
        .unwrap_or_else(|| format!("step {}", result.steps_to_best));
    println!(
        "best size {} (initial {}), found at {t}, {} steps",
        result.best_size, result.initial_size, result.steps_executed
    );
    if let Some(out) = &args.output {
        io::write_result(&ResultFile::new(&inst, args.seed, cfg.echo(), &result), out)?;
    }
    Ok(())
}

fn cmd_bench(args: BenchArgs) -> Result<()> {
    let cfg = args.search.config(1)?;
    let paths = expand_paths(&args.instances)?;
    let report = bench::bench_paths(&paths, args.format, &args.seeds.0, &cfg);
    print!("{}", report.render_table());
    if let Some(out) = &args.output {
        write_json(&report, out)?;
    }
    Ok(())
}

fn cmd_tune(args: TuneArgs) -> Result<()> {
    let cfg = args.search.config(1)?;
    let paths = expand_paths(&args.instances)?;
    let (loaded, failures) = bench::load_all(&paths, args.format);
    for f in &failures {
        eprintln!("{}: {}", f.name, f.error);
    }
    let mut instances = Vec::new();
    let mut targets = Vec::new();
    for inst in loaded {
        let target = match args.targets.iter().find(|(n, _)| *n == inst.name) {
            Some(&(_, t)) => Some(t),
            None => match exact_mvc(&inst.graph, args.exact_budget) {
                Ok(r) => Some(r.optimum_size),
                Err(e) => {
                    eprintln!("{}: no target given and {e}; skipped", inst.name);
                    None
                }
            },
        };
        if let Some(t) = target {
            instances.push(inst);
            targets.push(t);
        }
    }
    let rows = bench::tune(
        &instances,
        &targets,
        &args.ctner,
        &args.bms,
        &args.seeds.0,
        &cfg,
    );
    println!("{:>6}  {:>7}  {:>5}", "ctner", "bms_num", "hits");
    for r in &rows {
        println!(
            "{:>6}  {:>7}  {:>2}/{}",
            r.ctner_max, r.bms_num, r.hits, r.instances
        );
    }
    if let Some(out) = &args.output {
        write_json(&rows, out)?;
    }
    Ok(())
}

fn cmd_gen_labels(args: GenLabelsArgs) -> Result<()> {
    let families: Vec<Family> = args
        .gnp
        .iter()
        .map(|&p| Family::Gnp { p })
        .chain(args.udg.iter().map(|&radius| Family::Geometric { radius }))
        .collect();
    let (mut ds, mut skipped) = if args.count > 0 {
        bench::generate_labels(&LabelGenConfig {
            count: args.count,
            min_n: args.min_n,
            max_n: args.max_n,
            families,
            seed: args.seed,
            node_budget: args.node_budget,
        })?
    } else {
        (LabelDataset::new(Vec::new()), 0)
    };
    for path in &args.input {
        let inst = io::load_instance(path, None)?;
        if inst.graph.n() > bench::MAX_LABEL_VERTICES {
            log::warn!("{}: {} vertices, skipped", inst.name, inst.graph.n());
            skipped += 1;
            continue;
        }
        match bench::label_graph(
            inst.name.clone(),
            "file".into(),
            &inst.graph,
            args.node_budget,
        ) {
            Some(r) => ds.records.push(r),
            None => skipped += 1,
        }
    }
    ds.save(&args.output)?;
    println!(
        "wrote {} labeled graphs ({skipped} skipped)",
        ds.records.len()
    );
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let res = match cli.cmd {
        Command::Solve(a) => cmd_solve(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Tune(a) => cmd_tune(a),
        Command::GenLabels(a) => cmd_gen_labels(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
