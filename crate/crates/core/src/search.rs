//! Swap-based local search over vertex covers.
//!
//! Each iteration removes up to three vertices (container-sampled removal
//! when the current set is a full cover, a BMS min-loss vertex, a uniform
//! random vertex) and re-adds up to two endpoints of uncovered edges. All
//! scoring quantities are maintained incrementally:
//!
//! - `loss(v)`, `v` in cover: incident edges covered only by `v`
//! - `gain(v)`, `v` outside: incident uncovered edges
//! - `dcnumber(v)`: incident edges with both endpoints in the cover
//! - vertex and edge ages as step stamps
//!
//! Off-domain values (loss outside the cover, gain inside it) are kept at 0.

use std::cmp::Reverse;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Serialize};

use crate::construct::{gcn_construct, greedy_construct, InitialCover};
use crate::dynset::IndexedSet;
use crate::error::{Error, Result};
use crate::gcn::ProbabilitySource;
use crate::graph::{EdgeId, Graph, Vertex};
use crate::io::ConfigEcho;

pub const DEFAULT_BMS_NUM: usize = 50;
pub const DEFAULT_CTNER_MAX: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Budget {
    /// Wall-clock cutoff, checked once per iteration.
    Seconds(f64),
    /// Fixed iteration count. Timing fields of the result are left empty so
    /// repeated runs serialize identically.
    Steps(u64),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitMethod {
    #[default]
    Gcn,
    Greedy,
}

#[derive(Clone, Debug)]
pub struct SolveConfig {
    pub budget: Budget,
    pub bms_num: usize,
    /// Containers hold cover vertices of degree `1..=ctner_max`.
    pub ctner_max: usize,
    pub seed: u64,
    pub prob_source: ProbabilitySource,
    pub init: InitMethod,
    /// When false, removal from a full cover always takes the min-loss vertex.
    pub use_crv: bool,
    /// When false, dcnumber is dropped from every tie-break chain.
    pub use_dcnumber: bool,
    /// Stop as soon as a cover this small is found.
    pub target_size: Option<usize>,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            budget: Budget::Seconds(10.0),
            bms_num: DEFAULT_BMS_NUM,
            ctner_max: DEFAULT_CTNER_MAX,
            seed: 1,
            prob_source: ProbabilitySource::DegreeFallback,
            init: InitMethod::Gcn,
            use_crv: true,
            use_dcnumber: true,
            target_size: None,
        }
    }
}

impl SolveConfig {
    pub fn with_steps(steps: u64, seed: u64) -> Self {
        SolveConfig {
            budget: Budget::Steps(steps),
            seed,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.bms_num == 0 {
            return Err(Error::Config("bms_num must be at least 1".into()));
        }
        if let Budget::Seconds(s) = self.budget {
            if s.is_nan() || s <= 0.0 {
                return Err(Error::Config(format!("cutoff must be positive, got {s}")));
            }
        }
        Ok(())
    }

    pub fn echo(&self) -> ConfigEcho {
        let (cutoff_seconds, step_budget) = match self.budget {
            Budget::Seconds(s) => (Some(s), None),
            Budget::Steps(n) => (None, Some(n)),
        };
        ConfigEcho {
            cutoff_seconds,
            step_budget,
            bms_num: self.bms_num,
            ctner_max: self.ctner_max,
            prob_source: self.prob_source.label().to_string(),
            init: match self.init {
                InitMethod::Gcn => "gcn".into(),
                InitMethod::Greedy => "greedy".into(),
            },
            crv: self.use_crv,
            dcnumber: self.use_dcnumber,
            target_size: self.target_size,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub elapsed_seconds: Option<f64>,
    pub step: u64,
    pub size: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    /// Sorted ascending.
    pub best_cover: Vec<Vertex>,
    pub best_size: usize,
    pub time_to_best_seconds: Option<f64>,
    pub steps_to_best: u64,
    /// One entry per improvement; sizes strictly decrease.
    pub trace: Vec<TracePoint>,
    pub steps_executed: u64,
    pub initial_size: usize,
}

/// Incrementally maintained search state over one graph.
#[derive(Clone, Debug)]
pub struct SearchState<'g> {
    g: &'g Graph,
    in_cover: Vec<bool>,
    loss: Vec<u32>,
    gain: Vec<u32>,
    dcnumber: Vec<u32>,
    /// Step at which each vertex last left the cover.
    vertex_stamp: Vec<i64>,
    /// Step at which each edge last became uncovered.
    edge_stamp: Vec<i64>,
    uncovered: IndexedSet,
    cover: IndexedSet,
    /// `containers[i - 1]` holds cover vertices of degree `i`.
    containers: Vec<IndexedSet>,
    step: i64,
    rng: Xoshiro256PlusPlus,
    use_dcnumber: bool,
}

impl<'g> SearchState<'g> {
    /// Builds the state for `initial`, which must cover every edge. Every
    /// vertex starts with age 1.
    pub fn new(g: &'g Graph, initial: &InitialCover, cfg: &SolveConfig) -> Self {
        assert_eq!(initial.in_cover.len(), g.n());
        let n = g.n();
        let mut st = SearchState {
            g,
            in_cover: vec![false; n],
            loss: vec![0; n],
            gain: vec![0; n],
            dcnumber: vec![0; n],
            vertex_stamp: vec![-1; n],
            edge_stamp: vec![0; g.m()],
            uncovered: IndexedSet::new(g.m()),
            cover: IndexedSet::new(n),
            containers: (0..cfg.ctner_max).map(|_| IndexedSet::new(n)).collect(),
            step: 0,
            rng: Xoshiro256PlusPlus::seed_from_u64(cfg.seed),
            use_dcnumber: cfg.use_dcnumber,
        };
        for v in 0..n {
            if initial.in_cover[v] {
                st.in_cover[v] = true;
                st.cover.insert(v);
                st.container_insert(v);
            }
        }
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            match (st.in_cover[u], st.in_cover[v]) {
                (true, true) => {
                    st.dcnumber[u] += 1;
                    st.dcnumber[v] += 1;
                }
                (true, false) => st.loss[u] += 1,
                (false, true) => st.loss[v] += 1,
                (false, false) => {
                    st.uncovered.insert(e);
                    st.gain[u] += 1;
                    st.gain[v] += 1;
                }
            }
        }
        st
    }

    pub fn graph(&self) -> &Graph {
        self.g
    }

    pub fn in_cover(&self) -> &[bool] {
        &self.in_cover
    }

    pub fn cover_size(&self) -> usize {
        self.cover.len()
    }

    pub fn cover_members(&self) -> &[Vertex] {
        self.cover.as_slice()
    }

    pub fn loss(&self, v: Vertex) -> u32 {
        self.loss[v]
    }

    pub fn gain(&self, v: Vertex) -> u32 {
        self.gain[v]
    }

    pub fn dcnumber(&self, v: Vertex) -> u32 {
        self.dcnumber[v]
    }

    pub fn age(&self, v: Vertex) -> i64 {
        self.step - self.vertex_stamp[v]
    }

    pub fn edge_age(&self, e: EdgeId) -> i64 {
        self.step - self.edge_stamp[e]
    }

    pub fn uncovered_edges(&self) -> &[EdgeId] {
        self.uncovered.as_slice()
    }

    pub fn is_uncovered(&self, e: EdgeId) -> bool {
        self.uncovered.contains(e)
    }

    pub fn container(&self, degree: usize) -> &[Vertex] {
        self.containers[degree - 1].as_slice()
    }

    pub fn container_count(&self) -> usize {
        self.containers.len()
    }

    pub fn step(&self) -> i64 {
        self.step
    }

    pub fn advance(&mut self) {
        self.step += 1;
    }

    /// Pins the age stamp of `v`; used to set up tie scenarios in tests.
    pub fn set_vertex_stamp(&mut self, v: Vertex, stamp: i64) {
        self.vertex_stamp[v] = stamp;
    }

    pub fn set_edge_stamp(&mut self, e: EdgeId, stamp: i64) {
        self.edge_stamp[e] = stamp;
    }

    pub fn rng(&mut self) -> &mut Xoshiro256PlusPlus {
        &mut self.rng
    }

    fn container_slot(&self, v: Vertex) -> Option<usize> {
        let d = self.g.degree(v);
        (d >= 1 && d <= self.containers.len()).then(|| d - 1)
    }

    fn container_insert(&mut self, v: Vertex) {
        if let Some(i) = self.container_slot(v) {
            self.containers[i].insert(v);
        }
    }

    fn container_remove(&mut self, v: Vertex) {
        if let Some(i) = self.container_slot(v) {
            self.containers[i].remove(v);
        }
    }

    pub fn remove_vertex(&mut self, v: Vertex) {
        assert!(self.in_cover[v], "vertex {v} is not in the cover");
        let g = self.g;
        self.in_cover[v] = false;
        self.cover.remove(v);
        self.container_remove(v);
        for (&u, &e) in g.neighbors(v).iter().zip(g.incident_edges(v)) {
            if self.in_cover[u] {
                self.loss[u] += 1;
                self.dcnumber[u] -= 1;
                self.dcnumber[v] -= 1;
            } else {
                self.uncovered.insert(e);
                self.edge_stamp[e] = self.step;
                self.gain[u] += 1;
            }
        }
        // Edges that only v covered are now exactly v's uncovered edges.
        self.gain[v] = self.loss[v];
        self.loss[v] = 0;
        self.vertex_stamp[v] = self.step;
    }

    pub fn add_vertex(&mut self, v: Vertex) {
        assert!(!self.in_cover[v], "vertex {v} is already in the cover");
        let g = self.g;
        self.in_cover[v] = true;
        self.cover.insert(v);
        self.container_insert(v);
        let mut loss = 0;
        for (&u, &e) in g.neighbors(v).iter().zip(g.incident_edges(v)) {
            if self.in_cover[u] {
                self.loss[u] -= 1;
                self.dcnumber[u] += 1;
                self.dcnumber[v] += 1;
            } else {
                self.uncovered.remove(e);
                self.gain[u] -= 1;
                loss += 1;
            }
        }
        self.loss[v] = loss;
        self.gain[v] = 0;
    }

    fn dc_key(&self, v: Vertex) -> u32 {
        if self.use_dcnumber {
            self.dcnumber[v]
        } else {
            0
        }
    }

    /// Lower is a better removal candidate: loss, then older, then fewer
    /// dc-edges, then smaller id.
    fn removal_key(&self, v: Vertex) -> (u32, Reverse<i64>, u32, Vertex) {
        (self.loss[v], Reverse(self.age(v)), self.dc_key(v), v)
    }

    /// BMS: the best removal candidate among `num` samples drawn with
    /// replacement from the cover. `None` when the cover is empty.
    pub fn bms_min_loss(&mut self, num: usize) -> Option<Vertex> {
        let mut best = self.cover.sample(&mut self.rng)?;
        for _ in 1..num {
            let v = self.cover.sample(&mut self.rng).unwrap();
            if self.removal_key(v) < self.removal_key(best) {
                best = v;
            }
        }
        Some(best)
    }

    /// BMS over uncovered edges keeping the oldest sample (ties: smaller id).
    pub fn bms_oldest_uncovered_edge(&mut self, num: usize) -> Option<EdgeId> {
        let mut best = self.uncovered.sample(&mut self.rng)?;
        for _ in 1..num {
            let e = self.uncovered.sample(&mut self.rng).unwrap();
            if (self.edge_stamp[e], e) < (self.edge_stamp[best], best) {
                best = e;
            }
        }
        Some(best)
    }

    /// dc-edges that adding `v` would create: its incident edges that are
    /// already covered. Endpoints of an uncovered edge have no dc-edges of
    /// their own, so this is what the addition tie-break compares.
    pub fn dcnumber_if_added(&self, v: Vertex) -> u32 {
        debug_assert!(!self.in_cover[v]);
        self.g.degree(v) as u32 - self.gain[v]
    }

    /// Endpoint of uncovered edge `e` to add: larger gain, then older, then
    /// more prospective dc-edges, then smaller id.
    pub fn pick_add_endpoint(&self, e: EdgeId) -> Vertex {
        assert!(self.uncovered.contains(e), "edge {e} is covered");
        let (a, b) = self.g.edge(e);
        let key = |v: Vertex| {
            let dc = if self.use_dcnumber {
                self.dcnumber_if_added(v)
            } else {
                0
            };
            (self.gain[v], self.age(v), dc, Reverse(v))
        };
        if key(a) >= key(b) {
            a
        } else {
            b
        }
    }

    /// Removal step applied to a full cover.
    ///
    /// With `use_crv`, a random member of the containers is drawn and then
    /// challenged `bms_num` times per non-empty container; a challenger `u`
    /// replaces the incumbent `v` when `d(v)·age(u) < d(u)·age(v)`. When the
    /// containers are empty (or `use_crv` is off) the min-loss cover vertex
    /// is removed, ties by larger age then smaller id.
    pub fn crv_remove(&mut self, bms_num: usize, use_crv: bool) -> Option<Vertex> {
        let total: usize = self.containers.iter().map(IndexedSet::len).sum();
        let chosen = if use_crv && total > 0 {
            let mut r = self.rng.gen_range(0..total);
            let mut v = 0;
            for c in &self.containers {
                if r < c.len() {
                    v = c.get(r);
                    break;
                }
                r -= c.len();
            }
            for i in 0..self.containers.len() {
                if self.containers[i].is_empty() {
                    continue;
                }
                for _ in 0..bms_num {
                    let u = self.containers[i].sample(&mut self.rng).unwrap();
                    if self.crv_prefers(u, v) {
                        v = u;
                    }
                }
            }
            Some(v)
        } else {
            self.cover
                .iter()
                .min_by_key(|&v| (self.loss[v], Reverse(self.age(v)), v))
        };
        if let Some(v) = chosen {
            self.remove_vertex(v);
        }
        chosen
    }

    /// Challenger `u` against incumbent `v`: `d(v)·age(u) < d(u)·age(v)`,
    /// i.e. `u` wins when its age per degree is strictly smaller.
    pub fn crv_prefers(&self, challenger: Vertex, incumbent: Vertex) -> bool {
        let lhs = self.g.degree(incumbent) as i128 * self.age(challenger) as i128;
        let rhs = self.g.degree(challenger) as i128 * self.age(incumbent) as i128;
        lhs < rhs
    }

    pub fn random_cover_vertex(&mut self) -> Option<Vertex> {
        self.cover.sample(&mut self.rng)
    }

    pub fn random_uncovered_edge(&mut self) -> Option<EdgeId> {
        self.uncovered.sample(&mut self.rng)
    }

    /// One search iteration; the caller records a full cover beforehand.
    fn iterate(&mut self, cfg: &SolveConfig) {
        if self.uncovered.is_empty() {
            self.crv_remove(cfg.bms_num, cfg.use_crv);
        }
        if let Some(u1) = self.bms_min_loss(cfg.bms_num) {
            self.remove_vertex(u1);
        }
        if let Some(u2) = self.random_cover_vertex() {
            self.remove_vertex(u2);
        }
        if let Some(e) = self.bms_oldest_uncovered_edge(cfg.bms_num) {
            let w = self.pick_add_endpoint(e);
            self.add_vertex(w);
        }
        if let Some(e) = self.random_uncovered_edge() {
            let w = self.pick_add_endpoint(e);
            self.add_vertex(w);
        }
    }
}

struct Recorder {
    start: Instant,
    timed: bool,
    best_cover: Vec<Vertex>,
    best_size: usize,
    time_to_best: Option<f64>,
    steps_to_best: u64,
    trace: Vec<TracePoint>,
}

impl Recorder {
    fn offer(&mut self, st: &SearchState) {
        if !st.uncovered.is_empty() || st.cover_size() >= self.best_size {
            return;
        }
        let mut cover = st.cover_members().to_vec();
        cover.sort_unstable();
        let elapsed = self.timed.then(|| self.start.elapsed().as_secs_f64());
        self.best_size = cover.len();
        self.best_cover = cover;
        self.time_to_best = elapsed;
        self.steps_to_best = st.step as u64;
        self.trace.push(TracePoint {
            elapsed_seconds: elapsed,
            step: st.step as u64,
            size: self.best_size,
        });
    }
}

/// Builds the initial cover selected by `cfg` and runs the local search.
pub fn solve(g: &Graph, cfg: &SolveConfig) -> Result<SolveResult> {
    cfg.validate()?;
    let start = Instant::now();
    let initial = initial_cover(g, cfg)?;
    Ok(run_search(g, &initial, cfg, start))
}

pub fn initial_cover(g: &Graph, cfg: &SolveConfig) -> Result<InitialCover> {
    Ok(match cfg.init {
        InitMethod::Gcn => gcn_construct(g, &cfg.prob_source.probability(g)?),
        InitMethod::Greedy => greedy_construct(g),
    })
}

/// Local search from a caller-supplied cover. `start` anchors the timing.
pub fn solve_from(g: &Graph, initial: &InitialCover, cfg: &SolveConfig) -> Result<SolveResult> {
    cfg.validate()?;
    if !g.is_vertex_cover(&initial.in_cover) {
        return Err(Error::Config("initial set is not a vertex cover".into()));
    }
    Ok(run_search(g, initial, cfg, Instant::now()))
}

fn run_search(g: &Graph, initial: &InitialCover, cfg: &SolveConfig, start: Instant) -> SolveResult {
    let mut st = SearchState::new(g, initial, cfg);
    let mut rec = Recorder {
        start,
        timed: matches!(cfg.budget, Budget::Seconds(_)),
        best_cover: Vec::new(),
        best_size: usize::MAX,
        time_to_best: None,
        steps_to_best: 0,
        trace: Vec::new(),
    };
    rec.offer(&st);

    if g.m() > 0 {
        loop {
            if cfg.target_size.is_some_and(|t| rec.best_size <= t) {
                break;
            }
            let done = match cfg.budget {
                Budget::Steps(n) => st.step as u64 >= n,
                Budget::Seconds(s) => start.elapsed().as_secs_f64() >= s,
            };
            if done {
                break;
            }
            st.advance();
            rec.offer(&st);
            st.iterate(cfg);
        }
        rec.offer(&st);
    }

    SolveResult {
        best_size: rec.best_size,
        best_cover: rec.best_cover,
        time_to_best_seconds: rec.time_to_best,
        steps_to_best: rec.steps_to_best,
        trace: rec.trace,
        steps_executed: st.step as u64,
        initial_size: initial.size(),
    }
}
