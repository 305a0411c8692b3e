use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::welded_tree::TreeStructure;

/// The adjacency operator restricted to uniform column states.
#[derive(Debug, Clone, Serialize)]
pub struct ReducedWalk {
    pub n: u32,
    /// `(2n+2) x (2n+2)`, row major.
    pub matrix: Vec<Vec<f64>>,
    /// Vertices per column.
    pub occupancy: Vec<usize>,
    /// `||(I - P) A P||` measured while building.
    pub residual: f64,
    #[serde(skip)]
    eigen: Eigen,
}

#[derive(Debug, Clone, Default)]
struct Eigen {
    values: Vec<f64>,
    /// `vectors[i][k]` is component `i` of eigenvector `k`.
    vectors: Vec<Vec<f64>>,
}

/// Projects the adjacency matrix of `s` onto its column states.
///
/// Every entry is `<col_i|A|col_j>` evaluated by summing over explicit edges,
/// and the residual is `max_j ||A col_j - P A col_j||`.
pub fn build_reduced(s: &TreeStructure) -> ReducedWalk {
    let cols = s.column_count();
    let column: Vec<usize> = (0..s.vertex_count()).map(|v| s.column(v) as usize).collect();
    let mut occupancy = vec![0usize; cols];
    for &c in &column {
        occupancy[c] += 1;
    }
    let mut m = vec![vec![0.0; cols]; cols];
    let mut residual: f64 = 0.0;
    let mut image = vec![0.0; s.vertex_count()];
    for j in 0..cols {
        // A |col_j>, with |col_j> = N_j^{-1/2} sum of its vertices.
        image.iter_mut().for_each(|x| *x = 0.0);
        let amp = 1.0 / (occupancy[j] as f64).sqrt();
        for v in (0..s.vertex_count()).filter(|&v| column[v] == j) {
            for &w in s.neighbors(v) {
                image[w] += amp;
            }
        }
        let mut overlap = vec![0.0; cols];
        for (w, &x) in image.iter().enumerate() {
            overlap[column[w]] += x / (occupancy[column[w]] as f64).sqrt();
        }
        let mut r2 = 0.0;
        for (w, &x) in image.iter().enumerate() {
            let c = column[w];
            let d = x - overlap[c] / (occupancy[c] as f64).sqrt();
            r2 += d * d;
        }
        residual = residual.max(r2.sqrt());
        for (i, o) in overlap.into_iter().enumerate() {
            m[i][j] = o;
        }
    }
    let eigen = decompose(&m);
    ReducedWalk {
        n: s.height(),
        matrix: m,
        occupancy,
        residual,
        eigen,
    }
}

fn decompose(m: &[Vec<f64>]) -> Eigen {
    let d = m.len();
    let sym = SymmetricEigen::new(DMatrix::from_fn(d, d, |i, j| m[i][j]));
    let vecs = &sym.eigenvectors;
    Eigen {
        values: sym.eigenvalues.iter().copied().collect(),
        vectors: (0..d).map(|i| (0..d).map(|k| vecs[(i, k)]).collect()).collect(),
    }
}

impl ReducedWalk {
    pub fn dimension(&self) -> usize {
        self.matrix.len()
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        let d = self.dimension();
        (0..d).all(|i| (0..d).all(|j| (self.matrix[i][j] - self.matrix[j][i]).abs() <= tol))
    }

    /// No entries beyond the first off-diagonal.
    pub fn is_tridiagonal(&self, tol: f64) -> bool {
        let d = self.dimension();
        (0..d).all(|i| (0..d).all(|j| i.abs_diff(j) <= 1 || self.matrix[i][j].abs() <= tol))
    }

    /// `e^{-iAt}` applied to the entrance column, as `(re, im)` per column.
    pub fn evolve(&self, t: f64) -> Vec<(f64, f64)> {
        let e = &self.eigen;
        let d = self.dimension();
        let phase: Vec<(f64, f64)> = (0..d)
            .map(|k| {
                let (s, c) = (e.values[k] * t).sin_cos();
                (e.vectors[0][k] * c, -e.vectors[0][k] * s)
            })
            .collect();
        e.vectors
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&phase)
                    .fold((0.0, 0.0), |(a, b), (&v, &(re, im))| (a + v * re, b + v * im))
            })
            .collect()
    }
}

/// `|<exit col| e^{-iAt} |entrance col>|^2`.
pub fn evolve_exit_probability(rw: &ReducedWalk, t: f64) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    let e = &rw.eigen;
    let last = e.vectors.len() - 1;
    let (mut re, mut im) = (0.0, 0.0);
    for k in 0..e.values.len() {
        let w = e.vectors[0][k] * e.vectors[last][k];
        let (s, c) = (e.values[k] * t).sin_cos();
        re += w * c;
        im -= w * s;
    }
    (re * re + im * im).min(1.0)
}
