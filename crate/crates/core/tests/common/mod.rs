//! Reference computations shared by the integration suites. Everything here
//! is written from the definitions, independently of the library's
//! incremental or sparse code paths.

#![allow(dead_code)]

use gcnivc::gcn::{compute_features, GcnModel, Matrix};
use gcnivc::{Graph, SearchState};
use rand::Rng;

/// Minimum vertex cover size by enumerating all `2^n` subsets
/// (as `n` minus the largest independent set).
pub fn exhaustive_mvc(g: &Graph) -> usize {
    let n = g.n();
    assert!(n <= 22, "exhaustive enumeration is for tiny graphs");
    let adj: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &u| m | (1 << u)))
        .collect();
    let mut independent = vec![false; 1 << n];
    independent[0] = true;
    let mut best = 0;
    for mask in 1u32..(1 << n) {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let ok = independent[rest as usize] && adj[low] & rest == 0;
        independent[mask as usize] = ok;
        if ok {
            best = best.max(mask.count_ones() as usize);
        }
    }
    n - best
}

/// Checks every maintained quantity of `st` against a from-scratch
/// recomputation based on cover membership alone.
pub fn check_state(st: &SearchState) -> Result<(), String> {
    let g = st.graph();
    let c = st.in_cover();
    let n = g.n();
    let mut loss = vec![0u32; n];
    let mut gain = vec![0u32; n];
    let mut dc = vec![0u32; n];
    let mut uncovered = Vec::new();
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        match (c[u], c[v]) {
            (true, true) => {
                dc[u] += 1;
                dc[v] += 1;
            }
            (true, false) => loss[u] += 1,
            (false, true) => loss[v] += 1,
            (false, false) => {
                gain[u] += 1;
                gain[v] += 1;
                uncovered.push(e);
            }
        }
    }
    for v in 0..n {
        if st.loss(v) != loss[v] {
            return Err(format!("loss({v}) = {} expected {}", st.loss(v), loss[v]));
        }
        if st.gain(v) != gain[v] {
            return Err(format!("gain({v}) = {} expected {}", st.gain(v), gain[v]));
        }
        if st.dcnumber(v) != dc[v] {
            return Err(format!(
                "dcnumber({v}) = {} expected {}",
                st.dcnumber(v),
                dc[v]
            ));
        }
    }
    let mut got: Vec<usize> = st.uncovered_edges().to_vec();
    got.sort_unstable();
    if got != uncovered {
        return Err(format!("uncovered {got:?} expected {uncovered:?}"));
    }
    for e in 0..g.m() {
        if st.is_uncovered(e) != uncovered.binary_search(&e).is_ok() {
            return Err(format!("membership of edge {e} is stale"));
        }
    }
    let mut members: Vec<usize> = st.cover_members().to_vec();
    members.sort_unstable();
    let expect: Vec<usize> = (0..n).filter(|&v| c[v]).collect();
    if members != expect {
        return Err(format!("cover members {members:?} expected {expect:?}"));
    }
    for d in 1..=st.container_count() {
        let mut got = st.container(d).to_vec();
        got.sort_unstable();
        let expect: Vec<usize> = (0..n).filter(|&v| c[v] && g.degree(v) == d).collect();
        if got != expect {
            return Err(format!("container {d} = {got:?} expected {expect:?}"));
        }
    }
    Ok(())
}

/// Forward pass with an explicit dense `n x n` normalized adjacency.
pub fn dense_forward(model: &GcnModel, g: &Graph) -> Vec<f64> {
    let n = g.n();
    let mut a = vec![vec![0.0; n]; n];
    for (v, row) in a.iter_mut().enumerate() {
        row[v] = 1.0;
    }
    for &(u, v) in g.edges() {
        a[u][v] = 1.0;
        a[v][u] = 1.0;
    }
    let dhat: Vec<f64> = a.iter().map(|row| row.iter().sum()).collect();
    for u in 0..n {
        for v in 0..n {
            a[u][v] /= (dhat[u] * dhat[v]).sqrt();
        }
    }

    let feats = compute_features(g);
    let mut h: Vec<Vec<f64>> = (0..n).map(|v| feats.row(v).to_vec()).collect();
    let last = model.layers().len() - 1;
    for (l, w) in model.layers().iter().enumerate() {
        let hw: Vec<Vec<f64>> = h
            .iter()
            .map(|row| {
                (0..w.cols())
                    .map(|j| (0..w.rows()).map(|k| row[k] * w.get(k, j)).sum())
                    .collect()
            })
            .collect();
        h = (0..n)
            .map(|i| {
                (0..w.cols())
                    .map(|j| {
                        let z: f64 = (0..n).map(|k| a[i][k] * hw[k][j]).sum();
                        if l == last {
                            1.0 / (1.0 + (-z).exp())
                        } else {
                            z.max(0.0)
                        }
                    })
                    .collect()
            })
            .collect();
    }
    h.into_iter().map(|row| row[0]).collect()
}

pub fn random_model<R: Rng>(rng: &mut R, hidden: &[usize]) -> GcnModel {
    let mut dims = vec![4];
    dims.extend_from_slice(hidden);
    dims.push(1);
    let layers = dims
        .windows(2)
        .map(|d| {
            let data = (0..d[0] * d[1]).map(|_| rng.gen_range(-1.0..1.0)).collect();
            Matrix::from_vec(d[0], d[1], data).unwrap()
        })
        .collect();
    GcnModel::new(layers).unwrap()
}
