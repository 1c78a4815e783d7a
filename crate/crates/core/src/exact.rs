//! Exact minimum vertex cover by branch and bound, for small graphs.
//!
//! Reductions: isolated vertices are dropped and a degree-1 vertex forces
//! its neighbor into the cover. Otherwise we branch on a maximum-degree
//! vertex `v`: take `v`, or take all of `N(v)`. A node is pruned when the
//! partial cover plus a greedy maximal matching on the remaining graph
//! cannot beat the incumbent, which starts as the greedy construction.

use thiserror::Error;

use crate::construct::greedy_construct;
use crate::graph::{Graph, Vertex};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactResult {
    pub optimum_size: usize,
    /// Sorted ascending.
    pub one_optimum: Vec<Vertex>,
    pub nodes_explored: u64,
}

#[derive(Clone, Copy, Debug, Error, PartialEq, Eq)]
#[error("branch and bound gave up after {nodes} nodes")]
pub struct BudgetExceeded {
    pub nodes: u64,
}

/// Size of a greedy maximal matching; a lower bound on any cover.
pub fn matching_lower_bound(g: &Graph) -> usize {
    let mut matched = vec![false; g.n()];
    let mut size = 0;
    for &(u, v) in g.edges() {
        if !matched[u] && !matched[v] {
            matched[u] = true;
            matched[v] = true;
            size += 1;
        }
    }
    size
}

pub fn exact_mvc(g: &Graph, node_budget: u64) -> Result<ExactResult, BudgetExceeded> {
    let greedy = greedy_construct(g).vertices();
    let mut bnb = Bnb {
        g,
        alive: vec![true; g.n()],
        deg: (0..g.n()).map(|v| g.degree(v)).collect(),
        alive_edges: g.m(),
        trail: Vec::new(),
        cover: Vec::new(),
        best_size: greedy.len(),
        best: greedy,
        nodes: 0,
        budget: node_budget,
        matched: vec![false; g.n()],
    };
    bnb.search()?;
    let mut one_optimum = bnb.best;
    one_optimum.sort_unstable();
    Ok(ExactResult {
        optimum_size: bnb.best_size,
        one_optimum,
        nodes_explored: bnb.nodes,
    })
}

struct Bnb<'g> {
    g: &'g Graph,
    alive: Vec<bool>,
    /// Degree within the alive subgraph.
    deg: Vec<usize>,
    alive_edges: usize,
    /// Deleted vertices in deletion order.
    trail: Vec<Vertex>,
    cover: Vec<Vertex>,
    best: Vec<Vertex>,
    best_size: usize,
    nodes: u64,
    budget: u64,
    matched: Vec<bool>,
}

impl Bnb<'_> {
    fn delete(&mut self, v: Vertex) {
        debug_assert!(self.alive[v]);
        self.alive[v] = false;
        for &u in self.g.neighbors(v) {
            if self.alive[u] {
                self.deg[u] -= 1;
                self.alive_edges -= 1;
            }
        }
        self.trail.push(v);
    }

    fn take(&mut self, v: Vertex) {
        self.cover.push(v);
        self.delete(v);
    }

    fn undo(&mut self, trail_len: usize, cover_len: usize) {
        while self.trail.len() > trail_len {
            let v = self.trail.pop().unwrap();
            self.alive[v] = true;
            for &u in self.g.neighbors(v) {
                if self.alive[u] {
                    self.deg[u] += 1;
                    self.alive_edges += 1;
                }
            }
        }
        self.cover.truncate(cover_len);
    }

    fn reduce(&mut self) {
        loop {
            let mut changed = false;
            for v in 0..self.g.n() {
                if !self.alive[v] {
                    continue;
                }
                match self.deg[v] {
                    0 => self.delete(v),
                    1 => {
                        let w = *self
                            .g
                            .neighbors(v)
                            .iter()
                            .find(|&&u| self.alive[u])
                            .unwrap();
                        self.take(w);
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                break;
            }
        }
    }

    fn lower_bound(&mut self) -> usize {
        let g = self.g;
        self.matched.iter_mut().for_each(|m| *m = false);
        let mut size = 0;
        for u in 0..g.n() {
            if !self.alive[u] || self.matched[u] {
                continue;
            }
            if let Some(&w) = g
                .neighbors(u)
                .iter()
                .find(|&&w| self.alive[w] && !self.matched[w])
            {
                self.matched[u] = true;
                self.matched[w] = true;
                size += 1;
            }
        }
        size
    }

    fn search(&mut self) -> Result<(), BudgetExceeded> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(BudgetExceeded { nodes: self.nodes });
        }
        let (trail_mark, cover_mark) = (self.trail.len(), self.cover.len());
        self.reduce();

        if self.alive_edges == 0 {
            if self.cover.len() < self.best_size {
                self.best_size = self.cover.len();
                self.best = self.cover.clone();
            }
            self.undo(trail_mark, cover_mark);
            return Ok(());
        }
        if self.cover.len() + self.lower_bound() >= self.best_size {
            self.undo(trail_mark, cover_mark);
            return Ok(());
        }

        let v = (0..self.g.n())
            .filter(|&v| self.alive[v])
            .max_by_key(|&v| (self.deg[v], std::cmp::Reverse(v)))
            .unwrap();

        let (t, c) = (self.trail.len(), self.cover.len());
        self.take(v);
        let res = self.search();
        self.undo(t, c);
        res?;

        let nbrs: Vec<Vertex> = self
            .g
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&u| self.alive[u])
            .collect();
        for u in nbrs {
            self.take(u);
        }
        self.delete(v);
        let res = self.search();
        self.undo(trail_mark, cover_mark);
        res
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle() {
        let g = Graph::from_edges([(0, 1), (1, 2), (0, 2)], 0);
        let r = exact_mvc(&g, 1_000).unwrap();
        assert_eq!(r.optimum_size, 2);
        assert!(g.is_cover_list(&r.one_optimum));
    }

    #[test]
    fn path5() {
        let g = Graph::from_edges((1..5).map(|i| (i - 1, i)), 0);
        let r = exact_mvc(&g, 1_000).unwrap();
        assert_eq!(r.optimum_size, 2);
        assert_eq!(r.one_optimum, vec![1, 3]);
    }

    #[test]
    fn edgeless() {
        let r = exact_mvc(&Graph::empty(4), 10).unwrap();
        assert_eq!(r.optimum_size, 0);
        assert!(r.one_optimum.is_empty());
    }

    #[test]
    fn petersen_needs_branching() {
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
        let g = Graph::from_edges(outer.chain(spokes).chain(inner), 0);
        let r = exact_mvc(&g, 100_000).unwrap();
        assert_eq!(r.optimum_size, 6);
        assert!(g.is_cover_list(&r.one_optimum));
    }

    #[test]
    fn budget_signal() {
        let mut e = Vec::new();
        for i in 0..12 {
            for j in i + 1..12 {
                if (i * 7 + j * 3) % 5 != 0 {
                    e.push((i, j));
                }
            }
        }
        let g = Graph::from_edges(e, 0);
        assert_eq!(exact_mvc(&g, 1), Err(BudgetExceeded { nodes: 2 }));
    }
}
