//! Benchmark instance readers and result writers.
//!
//! Supported inputs:
//! - DIMACS (`p edge n m` / `p col n m` header, `e u v` lines, 1-based, `c` comments)
//! - plain edge lists (`u v` per line, `%` or `#` comments)
//! - MatrixMarket coordinate files (1-based, any symmetry, trailing values ignored)
//! - Gset (`n m` header then `u v w`, 1-based; never auto-detected)
//!
//! Plain edge lists carry arbitrary ids. They are compacted to dense ranks
//! unless the file starts with a `# vertices: N` hint, which pins ids
//! verbatim (this is what [`write_edge_list`] emits).

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::search::SolveResult;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InstanceFormat {
    DimacsEdge,
    PlainEdgeList,
    MatrixMarket,
    Gset,
}

impl std::str::FromStr for InstanceFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "dimacs" | "dimacs-edge" | "clq" => Ok(Self::DimacsEdge),
            "edges" | "edge-list" | "plain" | "plain-edge-list" => Ok(Self::PlainEdgeList),
            "mtx" | "matrix-market" => Ok(Self::MatrixMarket),
            "gset" => Ok(Self::Gset),
            other => Err(format!("unknown instance format `{other}`")),
        }
    }
}

/// A loaded benchmark graph plus the bookkeeping needed to report results
/// in the file's own vertex ids.
#[derive(Clone, Debug)]
pub struct Instance {
    pub name: String,
    pub format: InstanceFormat,
    pub graph: Graph,
    /// External id of each dense vertex.
    pub original_ids: Vec<u64>,
    /// Edge lines that did not survive as edges (duplicates and self-loops).
    pub dropped_lines: usize,
}

impl Instance {
    pub fn from_graph(name: impl Into<String>, graph: Graph) -> Self {
        let original_ids = (0..graph.n() as u64).collect();
        Instance {
            name: name.into(),
            format: InstanceFormat::PlainEdgeList,
            graph,
            original_ids,
            dropped_lines: 0,
        }
    }

    pub fn external_ids(&self, cover: &[Vertex]) -> Vec<u64> {
        cover.iter().map(|&v| self.original_ids[v]).collect()
    }
}

fn is_comment(line: &str) -> bool {
    line.starts_with('%') || line.starts_with('#') || line.starts_with("c ") || line == "c"
}

/// Picks a format from the file head.
pub fn detect_format(text: &str) -> InstanceFormat {
    if text.trim_start().starts_with("%%MatrixMarket") {
        return InstanceFormat::MatrixMarket;
    }
    for raw in text.lines() {
        let line = raw.trim();
        if line.is_empty() || is_comment(line) {
            continue;
        }
        if line.starts_with('p') {
            return InstanceFormat::DimacsEdge;
        }
        break;
    }
    InstanceFormat::PlainEdgeList
}

pub fn load_instance(path: &Path, format: Option<InstanceFormat>) -> Result<Instance> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    parse_instance(&name, &text, format)
}

pub fn parse_instance(name: &str, text: &str, format: Option<InstanceFormat>) -> Result<Instance> {
    let format = format.unwrap_or_else(|| detect_format(text));
    let (graph, original_ids, lines) = match format {
        InstanceFormat::DimacsEdge => parse_dimacs(text)?,
        InstanceFormat::MatrixMarket => parse_matrix_market(text)?,
        InstanceFormat::Gset => parse_gset(text)?,
        InstanceFormat::PlainEdgeList => parse_plain(text)?,
    };
    let dropped_lines = lines - graph.m();
    if dropped_lines > 0 {
        log::warn!("{name}: dropped {dropped_lines} duplicate or self-loop edge lines");
    }
    Ok(Instance {
        name: name.to_string(),
        format,
        graph,
        original_ids,
        dropped_lines,
    })
}

fn int_token(tok: Option<&str>, line: usize, what: &str) -> Result<u64> {
    let tok = tok.ok_or_else(|| Error::parse(line, format!("missing {what}")))?;
    tok.parse::<u64>()
        .map_err(|_| Error::parse(line, format!("expected integer {what}, found `{tok}`")))
}

/// Reads a 1-based endpoint and checks it against the declared vertex count.
fn one_based(tok: Option<&str>, n: usize, line: usize) -> Result<Vertex> {
    let id = int_token(tok, line, "endpoint")?;
    if id == 0 || id as usize > n {
        return Err(Error::parse(line, format!("endpoint {id} outside 1..={n}")));
    }
    Ok(id as usize - 1)
}

type Parsed = (Graph, Vec<u64>, usize);

fn one_based_ids(n: usize) -> Vec<u64> {
    (1..=n as u64).collect()
}

fn parse_dimacs(text: &str) -> Result<Parsed> {
    let mut declared: Option<(usize, usize)> = None;
    let mut pairs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || is_comment(line) {
            continue;
        }
        let mut toks = line.split_whitespace();
        match toks.next() {
            Some("p") => {
                if declared.is_some() {
                    return Err(Error::parse(lineno, "duplicate problem line"));
                }
                match toks.next() {
                    Some("edge") | Some("col") | Some("edges") => {}
                    other => {
                        return Err(Error::parse(
                            lineno,
                            format!("unsupported problem kind {other:?}"),
                        ))
                    }
                }
                let n = int_token(toks.next(), lineno, "vertex count")? as usize;
                let m = int_token(toks.next(), lineno, "edge count")? as usize;
                declared = Some((n, m));
            }
            Some("e") => {
                let (n, _) =
                    declared.ok_or_else(|| Error::parse(lineno, "edge line before `p` header"))?;
                let u = one_based(toks.next(), n, lineno)?;
                let v = one_based(toks.next(), n, lineno)?;
                pairs.push((u, v));
            }
            Some(other) => {
                return Err(Error::parse(
                    lineno,
                    format!("unexpected line kind `{other}`"),
                ))
            }
            None => unreachable!(),
        }
    }
    let (n, m) = declared.ok_or_else(|| Error::parse(1, "missing `p edge n m` header"))?;
    let lines = pairs.len();
    let g = Graph::from_edges(pairs, n);
    if g.m() != m {
        log::info!("declared {m} edges, parsed {}", g.m());
    }
    Ok((g, one_based_ids(n), lines))
}

fn parse_matrix_market(text: &str) -> Result<Parsed> {
    let mut lines = text.lines().enumerate();
    let header = lines
        .next()
        .map(|(_, l)| l.trim().to_ascii_lowercase())
        .unwrap_or_default();
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.first() != Some(&"%%matrixmarket") || fields.get(1) != Some(&"matrix") {
        return Err(Error::parse(
            1,
            "expected `%%MatrixMarket matrix ...` header",
        ));
    }
    if fields.get(2) != Some(&"coordinate") {
        return Err(Error::parse(
            1,
            "only coordinate MatrixMarket files are supported",
        ));
    }

    let mut size: Option<usize> = None;
    let mut pairs = Vec::new();
    for (idx, raw) in lines {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let mut toks = line.split_whitespace();
        match size {
            None => {
                let rows = int_token(toks.next(), lineno, "row count")? as usize;
                let cols = int_token(toks.next(), lineno, "column count")? as usize;
                int_token(toks.next(), lineno, "entry count")?;
                if rows != cols {
                    return Err(Error::parse(
                        lineno,
                        format!("adjacency matrix must be square, got {rows}x{cols}"),
                    ));
                }
                size = Some(rows);
            }
            Some(n) => {
                let u = one_based(toks.next(), n, lineno)?;
                let v = one_based(toks.next(), n, lineno)?;
                pairs.push((u, v));
            }
        }
    }
    let n = size.ok_or_else(|| Error::parse(1, "missing size line"))?;
    let lines = pairs.len();
    Ok((Graph::from_edges(pairs, n), one_based_ids(n), lines))
}

fn parse_gset(text: &str) -> Result<Parsed> {
    let mut size: Option<usize> = None;
    let mut pairs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || is_comment(line) {
            continue;
        }
        let mut toks = line.split_whitespace();
        match size {
            None => {
                let n = int_token(toks.next(), lineno, "vertex count")? as usize;
                int_token(toks.next(), lineno, "edge count")?;
                size = Some(n);
            }
            Some(n) => {
                let u = one_based(toks.next(), n, lineno)?;
                let v = one_based(toks.next(), n, lineno)?;
                pairs.push((u, v));
            }
        }
    }
    let n = size.ok_or_else(|| Error::parse(1, "missing `n m` header"))?;
    let lines = pairs.len();
    Ok((Graph::from_edges(pairs, n), one_based_ids(n), lines))
}

fn vertex_hint(line: &str) -> Option<&str> {
    let rest = line.trim_start_matches(['#', '%']).trim();
    rest.strip_prefix("vertices:").map(str::trim)
}

fn parse_plain(text: &str) -> Result<Parsed> {
    let mut hint: Option<usize> = None;
    let mut raw_pairs: Vec<(u64, u64)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('%') || line.starts_with('#') {
            if raw_pairs.is_empty() {
                if let Some(tok) = vertex_hint(line) {
                    hint = Some(int_token(Some(tok), lineno, "vertex hint")? as usize);
                }
            }
            continue;
        }
        let mut toks = line.split_whitespace();
        let u = int_token(toks.next(), lineno, "endpoint")?;
        let v = int_token(toks.next(), lineno, "endpoint")?;
        if let Some(n) = hint {
            if u as usize >= n || v as usize >= n {
                return Err(Error::parse(
                    lineno,
                    format!("endpoint outside 0..{n} declared by vertex hint"),
                ));
            }
        }
        raw_pairs.push((u, v));
    }
    let lines = raw_pairs.len();

    if let Some(n) = hint {
        let g = Graph::from_edges(raw_pairs.iter().map(|&(u, v)| (u as usize, v as usize)), n);
        return Ok((g, (0..n as u64).collect(), lines));
    }

    let mut ids: Vec<u64> = raw_pairs.iter().flat_map(|&(u, v)| [u, v]).collect();
    ids.sort_unstable();
    ids.dedup();
    let rank = |x: u64| ids.binary_search(&x).unwrap();
    let g = Graph::from_edges(
        raw_pairs.iter().map(|&(u, v)| (rank(u), rank(v))),
        ids.len(),
    );
    Ok((g, ids, lines))
}

/// Serializes `g` as a plain edge list that [`load_instance`] reads back
/// into an identical graph.
pub fn edge_list_string(g: &Graph) -> String {
    let mut out = String::new();
    writeln!(out, "# vertices: {}", g.n()).unwrap();
    writeln!(out, "# edges: {}", g.m()).unwrap();
    for &(u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

pub fn write_edge_list(g: &Graph, path: &Path) -> Result<()> {
    fs::write(path, edge_list_string(g)).map_err(|e| Error::io(path, e))
}

/// Parameter echo stored next to a result.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub cutoff_seconds: Option<f64>,
    pub step_budget: Option<u64>,
    pub bms_num: usize,
    pub ctner_max: usize,
    pub prob_source: String,
    pub init: String,
    pub crv: bool,
    pub dcnumber: bool,
    pub target_size: Option<usize>,
}

/// On-disk form of one solver run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultFile {
    pub instance: String,
    pub seed: u64,
    pub config: ConfigEcho,
    pub n: usize,
    pub m: usize,
    pub best_size: usize,
    pub time_to_best_seconds: Option<f64>,
    pub steps_to_best: u64,
    pub steps_executed: u64,
    pub initial_size: usize,
    /// Cover vertices in the instance's own ids.
    pub cover: Vec<u64>,
    /// `(elapsed_seconds, cover_size)` at each improvement.
    pub trace: Vec<(Option<f64>, usize)>,
}

impl ResultFile {
    pub fn new(instance: &Instance, seed: u64, config: ConfigEcho, result: &SolveResult) -> Self {
        ResultFile {
            instance: instance.name.clone(),
            seed,
            config,
            n: instance.graph.n(),
            m: instance.graph.m(),
            best_size: result.best_size,
            time_to_best_seconds: result.time_to_best_seconds,
            steps_to_best: result.steps_to_best,
            steps_executed: result.steps_executed,
            initial_size: result.initial_size,
            cover: instance.external_ids(&result.best_cover),
            trace: result
                .trace
                .iter()
                .map(|p| (p.elapsed_seconds, p.size))
                .collect(),
        }
    }

    /// Maps the stored cover back to dense ids of `instance`.
    pub fn dense_cover(&self, instance: &Instance) -> Option<Vec<Vertex>> {
        self.cover
            .iter()
            .map(|id| instance.original_ids.binary_search(id).ok())
            .collect()
    }
}

pub fn write_result(result: &ResultFile, path: &Path) -> Result<()> {
    let text = serde_json::to_string_pretty(result)?;
    fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
}

pub fn read_result(path: &Path) -> Result<ResultFile> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}
