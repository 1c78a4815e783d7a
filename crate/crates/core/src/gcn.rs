//! GCN inference producing per-vertex cover-membership probabilities.
//!
//! Each layer computes `act(Â_norm · H · W)` where `Â_norm` is the
//! self-looped adjacency normalized by `1/sqrt((d(u)+1)(d(v)+1))`. Hidden
//! layers use ReLU and the last layer a logistic sigmoid.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const FEATURE_DIM: usize = 4;
pub const MODEL_FORMAT_VERSION: u32 = 1;

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Model(format!(
                "{rows}x{cols} matrix needs {} values, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, x: f64) {
        self.data[r * self.cols + c] = x;
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn matmul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matmul dimension mismatch");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            let dst = &mut out.data[r * rhs.cols..(r + 1) * rhs.cols];
            for (k, &a) in self.row(r).iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                for (o, &b) in dst.iter_mut().zip(rhs.row(k)) {
                    *o += a * b;
                }
            }
        }
        out
    }
}

/// Input features, one row per vertex:
/// `[1, d(v), m/n^2, mean_{u in N(v)} d(u) / d(v)]`, last column 0 when `d(v) = 0`.
pub type NodeFeatures = Matrix;

pub fn compute_features(g: &Graph) -> NodeFeatures {
    let n = g.n();
    let density = g.density();
    let mut feats = Matrix::zeros(n, FEATURE_DIM);
    for v in 0..n {
        let d = g.degree(v);
        let ratio = if d == 0 {
            0.0
        } else {
            let sum: usize = g.neighbors(v).iter().map(|&u| g.degree(u)).sum();
            (sum as f64 / d as f64) / d as f64
        };
        feats.set(v, 0, 1.0);
        feats.set(v, 1, d as f64);
        feats.set(v, 2, density);
        feats.set(v, 3, ratio);
    }
    feats
}

/// Symmetric sparse matrix in CSR layout; every row stores its diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix {
    n: usize,
    offsets: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl SparseMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry `(r, c)`, zero when not stored.
    pub fn get(&self, r: usize, c: usize) -> f64 {
        let span = self.offsets[r]..self.offsets[r + 1];
        match self.cols[span.clone()].binary_search(&c) {
            Ok(i) => self.vals[span.start + i],
            Err(_) => 0.0,
        }
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.offsets[r]..self.offsets[r + 1];
        self.cols[span.clone()]
            .iter()
            .copied()
            .zip(self.vals[span].iter().copied())
    }

    pub fn row_sum(&self, r: usize) -> f64 {
        self.row(r).map(|(_, x)| x).sum()
    }

    /// `self · rhs`. Each output cell sums its terms in ascending value
    /// order, so the result does not depend on how vertices are numbered.
    pub fn mul_dense(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.n, rhs.rows());
        let cols = rhs.cols();
        let mut out = Matrix::zeros(self.n, cols);
        let mut terms = Vec::new();
        for r in 0..self.n {
            for k in 0..cols {
                terms.clear();
                terms.extend(self.row(r).map(|(c, a)| a * rhs.get(c, k)));
                terms.sort_unstable_by(f64::total_cmp);
                out.set(r, k, terms.iter().sum());
            }
        }
        out
    }
}

pub fn normalized_adjacency(g: &Graph) -> SparseMatrix {
    let n = g.n();
    let scale: Vec<f64> = (0..n)
        .map(|v| 1.0 / ((g.degree(v) + 1) as f64).sqrt())
        .collect();
    let mut offsets = Vec::with_capacity(n + 1);
    let mut cols = Vec::with_capacity(n + 2 * g.m());
    let mut vals = Vec::with_capacity(n + 2 * g.m());
    offsets.push(0);
    for v in 0..n {
        let mut diag_done = false;
        for &u in g.neighbors(v) {
            if !diag_done && u > v {
                cols.push(v);
                vals.push(1.0 / (g.degree(v) + 1) as f64);
                diag_done = true;
            }
            cols.push(u);
            // scale[u] * scale[v] in canonical order so (u,v) and (v,u) match bitwise
            vals.push(scale[u.min(v)] * scale[u.max(v)]);
        }
        if !diag_done {
            cols.push(v);
            vals.push(1.0 / (g.degree(v) + 1) as f64);
        }
        offsets.push(cols.len());
    }
    SparseMatrix {
        n,
        offsets,
        cols,
        vals,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GcnModel {
    layers: Vec<Matrix>,
}

impl GcnModel {
    /// Validates that the layers chain from [`FEATURE_DIM`] inputs to one output.
    pub fn new(layers: Vec<Matrix>) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::Model("model has no layers".into()));
        }
        if layers[0].rows() != FEATURE_DIM {
            return Err(Error::Model(format!(
                "first layer takes {} inputs, features have {FEATURE_DIM}",
                layers[0].rows()
            )));
        }
        for (i, pair) in layers.windows(2).enumerate() {
            if pair[0].cols() != pair[1].rows() {
                return Err(Error::Model(format!(
                    "dimension chain broken between layer {i} ({}x{}) and layer {} ({}x{})",
                    pair[0].rows(),
                    pair[0].cols(),
                    i + 1,
                    pair[1].rows(),
                    pair[1].cols()
                )));
            }
        }
        let last = layers.last().unwrap();
        if last.cols() != 1 {
            return Err(Error::Model(format!(
                "last layer must produce 1 output, produces {}",
                last.cols()
            )));
        }
        if layers
            .iter()
            .any(|w| w.as_slice().iter().any(|x| !x.is_finite()))
        {
            return Err(Error::Model("non-finite weight".into()));
        }
        Ok(GcnModel { layers })
    }

    pub fn layers(&self) -> &[Matrix] {
        &self.layers
    }

    pub fn dims(&self) -> Vec<usize> {
        std::iter::once(self.layers[0].rows())
            .chain(self.layers.iter().map(Matrix::cols))
            .collect()
    }

    /// Full-batch forward pass over `g`. Output is one probability per vertex.
    pub fn forward(&self, g: &Graph, feats: &NodeFeatures) -> Result<Vec<f64>> {
        if feats.cols() != self.layers[0].rows() {
            return Err(Error::Model(format!(
                "features have {} columns, model expects {}",
                feats.cols(),
                self.layers[0].rows()
            )));
        }
        if feats.rows() != g.n() {
            return Err(Error::Model(format!(
                "features have {} rows for {} vertices",
                feats.rows(),
                g.n()
            )));
        }
        let adj = normalized_adjacency(g);
        let mut h = feats.clone();
        let last = self.layers.len() - 1;
        for (i, w) in self.layers.iter().enumerate() {
            h = adj.mul_dense(&h.matmul(w));
            if i == last {
                h.data.iter_mut().for_each(|x| *x = sigmoid(*x));
            } else {
                h.data.iter_mut().for_each(|x| *x = x.max(0.0));
            }
        }
        Ok(h.data)
    }

    pub fn to_file(&self) -> ModelFile {
        ModelFile {
            version: MODEL_FORMAT_VERSION,
            dims: self.dims(),
            layers: self.layers.iter().map(|w| w.as_slice().to_vec()).collect(),
        }
    }

    pub fn from_file(file: ModelFile) -> Result<Self> {
        if file.version != MODEL_FORMAT_VERSION {
            return Err(Error::Model(format!("unknown version {}", file.version)));
        }
        if file.dims.len() != file.layers.len() + 1 {
            return Err(Error::Model(format!(
                "{} dims listed for {} layers",
                file.dims.len(),
                file.layers.len()
            )));
        }
        let mut layers = Vec::with_capacity(file.layers.len());
        for (i, data) in file.layers.into_iter().enumerate() {
            let (rows, cols) = (file.dims[i], file.dims[i + 1]);
            let w = Matrix::from_vec(rows, cols, data)
                .map_err(|e| Error::Model(format!("layer {i}: dimension chain broken: {e}")))?;
            layers.push(w);
        }
        GcnModel::new(layers)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_file(serde_json::from_str(&text)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string(&self.to_file())?;
        fs::write(path, text).map_err(|e| Error::io(path, e))
    }
}

/// Weights file exchanged with the trainer.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub version: u32,
    pub dims: Vec<usize>,
    /// Row-major `dims[i] x dims[i+1]` weights per layer.
    pub layers: Vec<Vec<f64>>,
}

pub fn load_model(path: &Path) -> Result<GcnModel> {
    GcnModel::load(path)
}

#[inline]
fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

#[derive(Clone, Debug, PartialEq)]
pub enum ProbabilitySource {
    Model(GcnModel),
    DegreeFallback,
}

impl ProbabilitySource {
    pub fn label(&self) -> &'static str {
        match self {
            ProbabilitySource::Model(_) => "model",
            ProbabilitySource::DegreeFallback => "degree",
        }
    }

    /// Per-vertex scores. Only their pairwise order matters downstream.
    pub fn probability(&self, g: &Graph) -> Result<Vec<f64>> {
        match self {
            ProbabilitySource::Model(model) => model.forward(g, &compute_features(g)),
            ProbabilitySource::DegreeFallback => {
                let denom = (g.max_degree() + 1) as f64;
                Ok((0..g.n()).map(|v| g.degree(v) as f64 / denom).collect())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(n: usize) -> Graph {
        let mut e = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                e.push((i, j));
            }
        }
        Graph::from_edges(e, n)
    }

    fn star(leaves: usize) -> Graph {
        Graph::from_edges((1..=leaves).map(|i| (0, i)), 0)
    }

    #[test]
    fn features_triangle() {
        let f = compute_features(&k(3));
        for v in 0..3 {
            assert_eq!(f.row(v), &[1.0, 2.0, 3.0 / 9.0, 1.0]);
        }
    }

    #[test]
    fn features_star() {
        let f = compute_features(&star(3));
        assert!((f.get(0, 3) - 1.0 / 3.0).abs() < 1e-15);
        for leaf in 1..=3 {
            assert_eq!(f.get(leaf, 3), 3.0);
        }
        assert_eq!(f.get(0, 2), 3.0 / 16.0);
    }

    #[test]
    fn features_isolated_vertex() {
        let g = Graph::from_edges([(0, 1)], 3);
        assert_eq!(compute_features(&g).row(2), &[1.0, 0.0, 1.0 / 9.0, 0.0]);
    }

    #[test]
    fn adjacency_single_vertex() {
        let a = normalized_adjacency(&Graph::empty(1));
        assert_eq!(a.get(0, 0), 1.0);
    }

    #[test]
    fn adjacency_k2() {
        let a = normalized_adjacency(&k(2));
        for (r, c) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            assert!((a.get(r, c) - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_model_outputs_half() {
        let model = GcnModel::new(vec![Matrix::zeros(4, 16), Matrix::zeros(16, 1)]).unwrap();
        let g = star(4);
        let out = model.forward(&g, &compute_features(&g)).unwrap();
        assert!(out.iter().all(|&p| p == 0.5));
    }

    #[test]
    fn symmetric_vertices_match() {
        let w = Matrix::from_vec(4, 1, vec![0.0, 1.0, 0.0, 0.0]).unwrap();
        let model = GcnModel::new(vec![w]).unwrap();
        let g = k(2);
        let out = model.forward(&g, &compute_features(&g)).unwrap();
        assert_eq!(out[0], out[1]);
    }

    #[test]
    fn broken_chain_rejected() {
        let err = GcnModel::new(vec![Matrix::zeros(4, 16), Matrix::zeros(8, 1)]).unwrap_err();
        assert!(matches!(err, Error::Model(_)));
        assert!(GcnModel::new(vec![Matrix::zeros(3, 1)]).is_err());
        assert!(GcnModel::new(vec![Matrix::zeros(4, 2)]).is_err());
        let mut w = Matrix::zeros(4, 1);
        w.set(0, 0, f64::NAN);
        assert!(GcnModel::new(vec![w]).is_err());
    }

    #[test]
    fn model_file_checks() {
        let good = ModelFile {
            version: 1,
            dims: vec![4, 16, 1],
            layers: vec![vec![0.1; 64], vec![0.2; 16]],
        };
        assert_eq!(GcnModel::from_file(good.clone()).unwrap().layers().len(), 2);

        let mut short = good.clone();
        short.layers[1] = vec![0.2; 8];
        assert!(GcnModel::from_file(short).is_err());

        let mut v2 = good;
        v2.version = 2;
        assert!(GcnModel::from_file(v2).is_err());
    }

    #[test]
    fn feature_width_checked() {
        let model = GcnModel::new(vec![Matrix::zeros(4, 1)]).unwrap();
        let g = k(3);
        assert!(model.forward(&g, &Matrix::zeros(3, 5)).is_err());
    }

    #[test]
    fn degree_fallback() {
        let p = ProbabilitySource::DegreeFallback
            .probability(&star(3))
            .unwrap();
        assert!(p[1..].iter().all(|&leaf| p[0] > leaf));
        let p = ProbabilitySource::DegreeFallback
            .probability(&k(5))
            .unwrap();
        assert!(p.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn model_source_delegates() {
        let w = Matrix::from_vec(4, 1, vec![0.3, -0.2, 1.0, 0.5]).unwrap();
        let model = GcnModel::new(vec![w]).unwrap();
        let g = star(4);
        let direct = model.forward(&g, &compute_features(&g)).unwrap();
        let via = ProbabilitySource::Model(model).probability(&g).unwrap();
        assert_eq!(direct, via);
    }
}
