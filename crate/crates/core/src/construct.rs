//! Initial cover construction: probability-guided `pscore` construction and
//! the max-degree edge-greedy baseline. Both finish with the same
//! redundancy sweep.

use std::cmp::Reverse;

use crate::graph::{Graph, Vertex};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConstructionStats {
    pub cover_size_before_cleanup: usize,
    pub redundant_removed: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InitialCover {
    pub in_cover: Vec<bool>,
    pub pscore: Vec<u64>,
    pub stats: ConstructionStats,
}

impl InitialCover {
    pub fn size(&self) -> usize {
        self.in_cover.iter().filter(|&&b| b).count()
    }

    pub fn vertices(&self) -> Vec<Vertex> {
        self.in_cover
            .iter()
            .enumerate()
            .filter_map(|(v, &b)| b.then_some(v))
            .collect()
    }

    /// Every vertex of an edged graph.
    pub fn full(g: &Graph) -> Self {
        InitialCover {
            in_cover: (0..g.n()).map(|v| g.degree(v) > 0).collect(),
            pscore: (0..g.n()).map(|v| g.degree(v) as u64).collect(),
            stats: ConstructionStats::default(),
        }
    }
}

/// Number of edges covered only by `v`, for each `v` in the cover.
pub fn loss_of(g: &Graph, in_cover: &[bool]) -> Vec<u64> {
    let mut loss = vec![0u64; g.n()];
    for &(u, v) in g.edges() {
        match (in_cover[u], in_cover[v]) {
            (true, false) => loss[u] += 1,
            (false, true) => loss[v] += 1,
            _ => {}
        }
    }
    loss
}

/// Drops cover vertices whose loss is zero, scanning by descending pscore
/// (ties by ascending id). Each removal raises the loss of its neighbors,
/// which are all in the cover.
fn remove_redundant(g: &Graph, in_cover: &mut [bool], pscore: &[u64]) -> usize {
    let mut loss = loss_of(g, in_cover);
    let mut order: Vec<Vertex> = (0..g.n()).filter(|&v| in_cover[v]).collect();
    order.sort_by_key(|&v| (Reverse(pscore[v]), v));
    let mut removed = 0;
    for v in order {
        if loss[v] == 0 {
            in_cover[v] = false;
            removed += 1;
            for &u in g.neighbors(v) {
                loss[u] += 1;
            }
        }
    }
    removed
}

fn finish(g: &Graph, mut in_cover: Vec<bool>, pscore: Vec<u64>) -> InitialCover {
    let before = in_cover.iter().filter(|&&b| b).count();
    let removed = remove_redundant(g, &mut in_cover, &pscore);
    InitialCover {
        in_cover,
        pscore,
        stats: ConstructionStats {
            cover_size_before_cleanup: before,
            redundant_removed: removed,
        },
    }
}

/// Probability-guided construction.
///
/// `pscore(v)` starts at `d(v)` and gains one for each incident edge where
/// `v` has the strictly higher probability. Edges are then scanned in id
/// order and an uncovered edge takes its higher-pscore endpoint (ties:
/// higher degree, then smaller id).
pub fn gcn_construct(g: &Graph, prob: &[f64]) -> InitialCover {
    assert_eq!(prob.len(), g.n(), "one probability per vertex");
    let mut pscore: Vec<u64> = (0..g.n()).map(|v| g.degree(v) as u64).collect();
    for &(a, b) in g.edges() {
        if prob[a] > prob[b] {
            pscore[a] += 1;
        } else if prob[a] < prob[b] {
            pscore[b] += 1;
        }
    }

    let mut in_cover = vec![false; g.n()];
    for &(a, b) in g.edges() {
        if in_cover[a] || in_cover[b] {
            continue;
        }
        let key = |v: Vertex| (pscore[v], g.degree(v), Reverse(v));
        let pick = if key(a) > key(b) { a } else { b };
        in_cover[pick] = true;
    }
    finish(g, in_cover, pscore)
}

/// Edge-greedy baseline: an uncovered edge takes its higher-degree endpoint
/// (ties: smaller id).
pub fn greedy_construct(g: &Graph) -> InitialCover {
    let pscore: Vec<u64> = (0..g.n()).map(|v| g.degree(v) as u64).collect();
    let mut in_cover = vec![false; g.n()];
    for &(a, b) in g.edges() {
        if in_cover[a] || in_cover[b] {
            continue;
        }
        let pick = if (g.degree(a), Reverse(a)) > (g.degree(b), Reverse(b)) {
            a
        } else {
            b
        };
        in_cover[pick] = true;
    }
    finish(g, in_cover, pscore)
}
