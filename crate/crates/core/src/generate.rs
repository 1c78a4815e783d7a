//! Random graph families used for label generation and fuzzing.

use rand::Rng;

use crate::graph::Graph;

/// Erdős–Rényi `G(n, p)`.
pub fn gnp<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(edges, n)
}

/// Unit-disk style graph: `n` points uniform in the unit square, joined
/// when closer than `radius`.
pub fn geometric<R: Rng + ?Sized>(n: usize, radius: f64, rng: &mut R) -> Graph {
    let pts: Vec<(f64, f64)> = (0..n).map(|_| (rng.gen(), rng.gen())).collect();
    let r2 = radius * radius;
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let (dx, dy) = (pts[u].0 - pts[v].0, pts[u].1 - pts[v].1);
            if dx * dx + dy * dy < r2 {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(edges, n)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Family {
    Gnp { p: f64 },
    Geometric { radius: f64 },
}

impl Family {
    pub fn sample<R: Rng + ?Sized>(self, n: usize, rng: &mut R) -> Graph {
        match self {
            Family::Gnp { p } => gnp(n, p, rng),
            Family::Geometric { radius } => geometric(n, radius, rng),
        }
    }

    pub fn describe(self) -> String {
        match self {
            Family::Gnp { p } => format!("gnp(p={p})"),
            Family::Geometric { radius } => format!("udg(r={radius})"),
        }
    }
}
