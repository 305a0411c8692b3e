//! Dense-matrix reference executor.
//!
//! Every layer is turned into an explicit `2^W x 2^W` matrix over the full
//! wire count `W`, built column by column from single-gate matrices, and
//! applied by matrix-vector multiplication. Ancilla wires start in `|0>`
//! from the beginning, so ANC and DISCARD are identities.

use num_complex::Complex64;
use welded_core::circuits::{Gate, Layer, Tier};
use welded_core::welded_tree::{ColorCode, Label};

pub const DENSE_WIDTH_CAP: usize = 10;

pub type Matrix = Vec<Vec<Complex64>>;

fn bit(i: usize, w: usize) -> usize {
    (i >> w) & 1
}

fn register(i: usize, wires: &[usize]) -> u64 {
    let mut v = 0u64;
    for (j, &w) in wires.iter().enumerate() {
        v |= (bit(i, w) as u64) << j;
    }
    v
}

/// Matrix of one gate on `width` wires, as `m[row][col]`.
pub fn gate_matrix(gate: &Gate, width: usize, oracle: &mut dyn FnMut(Label, ColorCode) -> Label) -> Matrix {
    let dim = 1usize << width;
    let mut m = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for col in 0..dim {
        match gate {
            Gate::Hadamard(w) => {
                let lo = col & !(1 << w);
                let hi = col | (1 << w);
                let sign = if bit(col, *w) == 1 { -1.0 } else { 1.0 };
                m[lo][col] += Complex64::new(h, 0.0);
                m[hi][col] += Complex64::new(sign * h, 0.0);
            }
            Gate::Phase(w) => {
                m[col][col] = if bit(col, *w) == 1 { Complex64::new(0.0, 1.0) } else { Complex64::new(1.0, 0.0) };
            }
            Gate::Not(w) => m[col ^ (1 << w)][col] = Complex64::new(1.0, 0.0),
            Gate::Cnot { control, target } => {
                let row = if bit(col, *control) == 1 { col ^ (1 << target) } else { col };
                m[row][col] = Complex64::new(1.0, 0.0);
            }
            Gate::Toffoli { c1, c2, target } => {
                let row = if bit(col, *c1) & bit(col, *c2) == 1 { col ^ (1 << target) } else { col };
                m[row][col] = Complex64::new(1.0, 0.0);
            }
            Gate::Query(q) => {
                let x = Label(register(col, &q.x));
                let c = register(col, &q.c) as ColorCode;
                let y = oracle(x, c).0;
                let mut row = col;
                for (j, &w) in q.y.iter().enumerate() {
                    if (y >> j) & 1 == 1 {
                        row ^= 1 << w;
                    }
                }
                m[row][col] = Complex64::new(1.0, 0.0);
            }
            Gate::AncillaIntro(_) | Gate::Discard(_) => m[col][col] = Complex64::new(1.0, 0.0),
        }
    }
    m
}

pub fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let mut out = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i][k];
            if aik.norm_sqr() == 0.0 {
                continue;
            }
            for j in 0..n {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

pub fn identity(dim: usize) -> Matrix {
    (0..dim)
        .map(|i| (0..dim).map(|j| Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0)).collect())
        .collect()
}

/// Product of the layer's gate matrices, later gates on the left.
pub fn layer_matrix(layer: &Layer, width: usize, oracle: &mut dyn FnMut(Label, ColorCode) -> Label) -> Matrix {
    assert!(width <= DENSE_WIDTH_CAP, "dense width {width} over cap");
    let mut m = identity(1 << width);
    for g in &layer.gates {
        m = matmul(&gate_matrix(g, width, oracle), &m);
    }
    m
}

pub fn apply(m: &Matrix, v: &[Complex64]) -> Vec<Complex64> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

/// Amplitudes after each layer of `tier` from basis input `input`, on
/// `width` wires.
pub fn run_layers(
    tier: &Tier,
    input: u128,
    width: usize,
    oracle: &mut dyn FnMut(Label, ColorCode) -> Label,
) -> Vec<Vec<Complex64>> {
    let mut v = vec![Complex64::new(0.0, 0.0); 1 << width];
    v[input as usize] = Complex64::new(1.0, 0.0);
    let mut out = Vec::new();
    for layer in &tier.layers {
        v = apply(&layer_matrix(layer, width, oracle), &v);
        out.push(v.clone());
    }
    out
}

pub fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum()
}
