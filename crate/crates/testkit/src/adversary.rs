//! Circuits that query labels they were never told.

use welded_core::circuits::{Gate, HybridCircuit, HybridKind, Layer, QueryWires, Tier};
use welded_core::rng::{rng_from_seed, uniform_u64};
use welded_core::welded_tree::label_mask;

/// One quantum tier on `4n + 4` wires that queries `guesses` hardcoded
/// random labels with random colors, XORing every answer into the output
/// register, which is the first `2n` wires. With `superpose` the low half of the label register is put
/// through Hadamards first, so each query covers `2^n` strings.
pub fn guess_circuit(n: u32, guesses: usize, superpose: bool, seed: u64) -> HybridCircuit {
    let k = 2 * n as usize;
    let width = 2 * k + 4;
    let y: Vec<usize> = (0..k).collect();
    let c = [k, k + 1, k + 2, k + 3];
    let x: Vec<usize> = (k + 4..width).collect();
    let mut rng = rng_from_seed(seed);
    let mut layers = vec![Layer::grow(n as usize, width)];
    if superpose {
        layers.push(Layer::square(width, x[..n as usize].iter().map(|&w| Gate::Hadamard(w)).collect()));
    }
    let (mut label, mut color) = (0u64, 0u64);
    for _ in 0..guesses {
        let next = uniform_u64(&mut rng, 1, label_mask(n));
        let hue = uniform_u64(&mut rng, 1, 10);
        let flips = (0..k)
            .filter(|j| ((label ^ next) >> j) & 1 == 1)
            .map(|j| Gate::Not(x[j]))
            .chain((0..4).filter(|j| ((color ^ hue) >> j) & 1 == 1).map(|j| Gate::Not(c[j])))
            .collect();
        (label, color) = (next, hue);
        layers.push(Layer::square(width, flips));
        layers.push(Layer::square(width, vec![Gate::Query(QueryWires { x: x.clone(), c, y: y.clone() })]));
    }
    HybridCircuit::new(n, width, HybridKind::AllQuantum, vec![Tier::quantum(n as usize, layers)])
}
