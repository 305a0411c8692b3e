use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::welded_tree::{BlackBoxTree, TreeStructure};

/// Largest height the full-graph propagator accepts.
pub const FULL_GRAPH_MAX_HEIGHT: u32 = 7;

/// Bound on the spectral radius of a graph of maximum degree three.
const SPECTRAL_BOUND: f64 = 3.0;
/// Largest `SPECTRAL_BOUND * dt` per Chebyshev segment.
const SEGMENT: f64 = 16.0;

/// Walk state on every vertex after evolving from the entrance.
#[derive(Debug, Clone)]
pub struct FullGraphState {
    pub amplitudes: Vec<Complex64>,
    pub exit: f64,
    pub total: f64,
}

/// `J_0(z) ..= J_k(z)` by Miller's backward recurrence, normalized with
/// `J_0 + 2 sum J_2m = 1`.
fn bessel_j(k: usize, z: f64) -> Vec<f64> {
    let mut out = vec![0.0; k + 1];
    if z == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let start = (k.max(z.ceil() as usize) + 40) & !1;
    let (mut next, mut cur) = (0.0f64, 1e-300f64);
    let mut norm = 0.0;
    for m in (0..=start).rev() {
        if m <= k {
            out[m] = cur;
        }
        if m % 2 == 0 {
            norm += if m == 0 { cur } else { 2.0 * cur };
        }
        if m == 0 {
            break;
        }
        let prev = 2.0 * m as f64 / z * cur - next;
        next = cur;
        cur = prev;
        if cur.abs() > 1e250 {
            next *= 1e-250;
            cur *= 1e-250;
            norm *= 1e-250;
            out.iter_mut().for_each(|x| *x *= 1e-250);
        }
    }
    out.iter_mut().for_each(|x| *x /= norm);
    out
}

fn scaled_adjacency(s: &TreeStructure, x: &[Complex64], out: &mut [Complex64]) {
    for (v, o) in out.iter_mut().enumerate() {
        *o = s.neighbors(v).iter().map(|&w| x[w]).sum::<Complex64>() / SPECTRAL_BOUND;
    }
}

/// One Chebyshev segment: `e^{-iA dt} psi`.
fn segment(s: &TreeStructure, psi: &[Complex64], dt: f64) -> Vec<Complex64> {
    let z = SPECTRAL_BOUND * dt;
    let terms = z.ceil() as usize + 30;
    let j = bessel_j(terms, z);
    let dim = psi.len();
    let mut prev = psi.to_vec();
    let mut cur = vec![Complex64::default(); dim];
    scaled_adjacency(s, &prev, &mut cur);
    let mut out: Vec<Complex64> = psi.iter().map(|&a| a * j[0]).collect();
    // (-i)^k
    let mut phase = Complex64::new(0.0, -1.0);
    let mut scratch = vec![Complex64::default(); dim];
    for (k, &jk) in j.iter().enumerate().skip(1) {
        let c = phase * (2.0 * jk);
        out.iter_mut().zip(&cur).for_each(|(o, &t)| *o += c * t);
        if k == terms {
            break;
        }
        scaled_adjacency(s, &cur, &mut scratch);
        for (p, &a) in prev.iter_mut().zip(&scratch) {
            *p = 2.0 * a - *p;
        }
        std::mem::swap(&mut prev, &mut cur);
        phase *= Complex64::new(0.0, -1.0);
    }
    out
}

/// Evolves the entrance vertex under the full adjacency matrix for time `t`
/// with a Chebyshev expansion of the propagator.
pub fn full_graph_evolve(s: &TreeStructure, t: f64) -> Result<FullGraphState> {
    let n = s.height();
    if n > FULL_GRAPH_MAX_HEIGHT {
        return Err(Error::SizeCap(format!(
            "full-graph walk needs n <= {FULL_GRAPH_MAX_HEIGHT}, got {n}"
        )));
    }
    let mut psi = vec![Complex64::default(); s.vertex_count()];
    psi[s.entrance()] = Complex64::new(1.0, 0.0);
    let pieces = (SPECTRAL_BOUND * t / SEGMENT).ceil().max(1.0) as usize;
    let dt = t / pieces as f64;
    if t > 0.0 {
        for _ in 0..pieces {
            psi = segment(s, &psi, dt);
        }
    }
    let total = psi.iter().map(|a| a.norm_sqr()).sum();
    Ok(FullGraphState {
        exit: psi[s.exit()].norm_sqr(),
        total,
        amplitudes: psi,
    })
}

/// Probability on the exit vertex after time `t`.
pub fn full_graph_walk(bbt: &BlackBoxTree, t: f64) -> Result<f64> {
    Ok(full_graph_evolve(bbt.structure(), t)?.exit)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bessel_values() {
        let j = bessel_j(3, 1.0);
        assert!((j[0] - 0.765_197_686_557_966_6).abs() < 1e-14);
        assert!((j[1] - 0.440_050_585_744_933_5).abs() < 1e-14);
        assert!((j[3] - 0.019_563_353_982_668_4).abs() < 1e-14);
        let j = bessel_j(60, 16.0);
        assert!((j[0] - -0.174_899_073_983_629_2).abs() < 1e-13);
    }
}
