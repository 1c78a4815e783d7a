//! Immutable undirected simple graph in compressed adjacency form.
//!
//! Vertices are dense `0..n` ids. Edges are stored once as `(u, v)` with
//! `u < v` and addressed by edge id; every vertex also carries the ids of
//! its incident edges so the local search can walk edges without hashing.

use serde::{Deserialize, Serialize};

pub type Vertex = usize;
pub type EdgeId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    /// `offsets[v]..offsets[v + 1]` indexes `neighbors` and `incident`.
    offsets: Vec<usize>,
    neighbors: Vec<Vertex>,
    /// Edge id parallel to `neighbors`: `incident[i]` joins `v` and `neighbors[i]`.
    incident: Vec<EdgeId>,
    edges: Vec<(Vertex, Vertex)>,
}

impl Graph {
    /// Builds a graph from raw endpoint pairs.
    ///
    /// Self-loops and duplicates (in either orientation) are dropped, and
    /// surviving edges keep the order of their first occurrence. The vertex
    /// count is `max(n_hint, max id + 1)`.
    pub fn from_edges<I>(pairs: I, n_hint: usize) -> Self
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut raw: Vec<(Vertex, Vertex)> = Vec::new();
        let mut n = n_hint;
        for (a, b) in pairs {
            if a == b {
                continue;
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            n = n.max(v + 1);
            raw.push((u, v));
        }

        // Dedup while keeping first-occurrence order.
        let mut order: Vec<usize> = (0..raw.len()).collect();
        order.sort_by_key(|&i| (raw[i], i));
        let mut keep = vec![false; raw.len()];
        for (k, &i) in order.iter().enumerate() {
            if k == 0 || raw[order[k - 1]] != raw[i] {
                keep[i] = true;
            }
        }
        let edges: Vec<(Vertex, Vertex)> = raw
            .iter()
            .zip(&keep)
            .filter_map(|(&e, &k)| k.then_some(e))
            .collect();

        let mut degree = vec![0usize; n];
        for &(u, v) in &edges {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let total = *offsets.last().unwrap();
        let mut slots: Vec<(Vertex, EdgeId)> = vec![(0, 0); total];
        let mut fill = offsets[..n].to_vec();
        for (id, &(u, v)) in edges.iter().enumerate() {
            slots[fill[u]] = (v, id);
            fill[u] += 1;
            slots[fill[v]] = (u, id);
            fill[v] += 1;
        }
        for v in 0..n {
            slots[offsets[v]..offsets[v + 1]].sort_unstable();
        }
        let (neighbors, incident) = slots.into_iter().unzip();

        Graph {
            n,
            offsets,
            neighbors,
            incident,
            edges,
        }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_edges(std::iter::empty(), n)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn degree(&self, v: Vertex) -> usize {
        assert!(v < self.n, "vertex {v} out of range (n = {})", self.n);
        self.offsets[v + 1] - self.offsets[v]
    }

    /// Sorted neighbor list of `v`.
    #[inline]
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Ids of the edges incident to `v`, parallel to [`Graph::neighbors`].
    #[inline]
    pub fn incident_edges(&self, v: Vertex) -> &[EdgeId] {
        &self.incident[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn edge(&self, e: EdgeId) -> (Vertex, Vertex) {
        self.edges[e]
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n && v < self.n && self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Edge density `m / n^2`; zero for the vertexless graph.
    pub fn density(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.m() as f64 / (self.n as f64 * self.n as f64)
        }
    }

    /// True when every edge has at least one endpoint flagged in `in_cover`.
    pub fn is_vertex_cover(&self, in_cover: &[bool]) -> bool {
        in_cover.len() == self.n && self.edges.iter().all(|&(u, v)| in_cover[u] || in_cover[v])
    }

    /// Same check for an explicit vertex list.
    pub fn is_cover_list(&self, cover: &[Vertex]) -> bool {
        let mut flags = vec![false; self.n];
        for &v in cover {
            if v >= self.n {
                return false;
            }
            flags[v] = true;
        }
        self.is_vertex_cover(&flags)
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn permuted(&self, perm: &[Vertex]) -> Graph {
        assert_eq!(perm.len(), self.n);
        Graph::from_edges(self.edges.iter().map(|&(u, v)| (perm[u], perm[v])), self.n)
    }
}
