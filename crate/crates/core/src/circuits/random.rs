//! Seeded random circuit families.
//!
//! Wires are grouped into label registers (`2n` wires), color registers
//! (4 wires) and scratch wires. Label register 0 occupies wires `0..2n`, so
//! it is what the output is read from. A small register machine tracks what
//! each label register holds, which lets the generator build circuits whose
//! every query reads a label the simulators already know.

use rand::RngCore;
use serde::{Deserialize, Serialize};

use super::circuit::{HybridCircuit, HybridKind, JozsaBlock, JozsaCircuit};
use super::gate::{Gate, QueryWires, Wire};
use super::layer::Layer;
use super::tier::{Tier, TierKind};
use crate::rng::{rng_from_seed, shuffle, uniform_index, uniform_u64, unit_f64, Rng64};

/// How query gates are wired.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QueryStyle {
    /// No query gates.
    None,
    /// Any label register as `x`; `y` preferably not in superposition.
    Random,
    /// `x` is always zero, a label produced by earlier queries, or derived
    /// from those only through phases; `y` is always zero beforehand or
    /// being uncomputed.
    Truthful,
    /// Like `Truthful`, plus queries on a hardcoded random label.
    Guess,
}

/// Shape of a random hybrid circuit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomCircuitConfig {
    pub n: u32,
    pub width: usize,
    pub tiers: usize,
    pub classical_depth: usize,
    pub quantum_depth: usize,
    pub kind: HybridKind,
    pub style: QueryStyle,
    /// Chance that a layer tries to place a query.
    pub query_rate: f64,
    /// Chance that a free color or scratch wire gets a Hadamard.
    pub hadamard_rate: f64,
}

impl RandomCircuitConfig {
    pub fn new(n: u32, width: usize, tiers: usize, depth: usize, style: QueryStyle) -> Self {
        Self {
            n,
            width,
            tiers,
            classical_depth: depth,
            quantum_depth: depth,
            kind: HybridKind::Alternating,
            style,
            query_rate: 0.6,
            hadamard_rate: 0.35,
        }
    }
}

/// Register groups over `0..width`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layout {
    pub labels: Vec<Vec<Wire>>,
    pub colors: Vec<Vec<Wire>>,
    pub scratch: Vec<Wire>,
}

impl Layout {
    /// Label register 0 first, then alternating color and label registers
    /// while they fit; the rest is scratch.
    pub fn pack(n: u32, width: usize) -> Self {
        Self::pack_range(n, 0, width)
    }

    pub fn pack_range(n: u32, start: Wire, end: Wire) -> Self {
        let k = 2 * n as usize;
        let mut next = start;
        let mut labels = Vec::new();
        let mut colors = Vec::new();
        let mut want_color = false;
        loop {
            let size = if want_color { 4 } else { k };
            if next + size > end {
                // a smaller register kind may still fit
                let other = if want_color { k } else { 4 };
                if next + other > end {
                    break;
                }
                want_color = !want_color;
                continue;
            }
            let reg: Vec<Wire> = (next..next + size).collect();
            if want_color {
                colors.push(reg);
            } else {
                labels.push(reg);
            }
            next += size;
            want_color = !want_color;
        }
        Self {
            labels,
            colors,
            scratch: (next..end).collect(),
        }
    }

    fn free_wires(&self) -> Vec<Wire> {
        self.colors.iter().flatten().chain(&self.scratch).copied().collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Holds {
    Zero,
    Known,
    Guess,
    Junk,
}

#[derive(Debug, Clone)]
struct Machine {
    n: u32,
    layout: Layout,
    holds: Vec<Holds>,
    version: Vec<u64>,
    color_version: Vec<u64>,
    // for Known registers written by one query: (x reg, x version, c reg, c version)
    source: Vec<Option<(usize, u64, usize, u64)>>,
    superposed: Vec<bool>,
    style: QueryStyle,
}

impl Machine {
    fn new(n: u32, layout: Layout, width: usize, style: QueryStyle) -> Self {
        let labels = layout.labels.len();
        let colors = layout.colors.len();
        Self {
            n,
            layout,
            holds: vec![Holds::Zero; labels],
            version: vec![0; labels],
            color_version: vec![0; colors],
            source: vec![None; labels],
            superposed: vec![false; width],
            style,
        }
    }

    fn label_of_wire(&self, w: Wire) -> Option<usize> {
        self.layout.labels.iter().position(|r| r.contains(&w))
    }

    fn color_of_wire(&self, w: Wire) -> Option<usize> {
        self.layout.colors.iter().position(|r| r.contains(&w))
    }

    /// Registers the effect of writing wire `w` other than by a query.
    fn touch(&mut self, w: Wire, junk: bool) {
        if let Some(r) = self.label_of_wire(w) {
            self.version[r] += 1;
            self.source[r] = None;
            if junk {
                self.holds[r] = Holds::Junk;
            }
        }
        if let Some(c) = self.color_of_wire(w) {
            self.color_version[c] += 1;
        }
    }

    fn measure(&mut self, wires: impl Iterator<Item = Wire>) {
        for w in wires {
            if w < self.superposed.len() {
                self.superposed[w] = false;
            }
        }
    }

    fn reg_superposed(&self, r: usize) -> bool {
        self.layout.labels[r].iter().any(|&w| self.superposed[w])
    }

    /// Picks a query `(x reg, c reg, y reg)` allowed by the style, or `None`.
    fn choose_query(&self, rng: &mut Rng64, busy: &[bool], guess_ok: bool) -> Option<(usize, usize, usize)> {
        let regs = self.layout.labels.len();
        if self.layout.colors.is_empty() || regs < 2 || self.style == QueryStyle::None {
            return None;
        }
        let free_reg = |r: &Vec<Wire>| r.iter().all(|&w| !busy[w]);
        let mut options = Vec::new();
        for x in 0..regs {
            for y in 0..regs {
                if x == y || !free_reg(&self.layout.labels[x]) || !free_reg(&self.layout.labels[y]) {
                    continue;
                }
                for c in 0..self.layout.colors.len() {
                    // an untouched color register reads 0, which is never a color
                    if !free_reg(&self.layout.colors[c]) || self.color_version[c] == 0 {
                        continue;
                    }
                    let ok = match self.style {
                        QueryStyle::None => false,
                        QueryStyle::Random => true,
                        QueryStyle::Truthful | QueryStyle::Guess => {
                            let x_ok = match self.holds[x] {
                                Holds::Zero | Holds::Known => true,
                                Holds::Guess => guess_ok,
                                Holds::Junk => false,
                            };
                            let y_ok = self.holds[y] == Holds::Zero || self.is_uncompute(x, c, y);
                            x_ok && y_ok
                        }
                    };
                    if ok {
                        options.push((x, c, y));
                    }
                }
            }
        }
        if options.is_empty() {
            return None;
        }
        let fresh: Vec<_> = options.iter().copied().filter(|&(x, c, y)| !self.is_uncompute(x, c, y)).collect();
        if !fresh.is_empty() && unit_f64(rng.next_u64()) < 0.75 {
            options = fresh;
        }
        if matches!(self.style, QueryStyle::Truthful | QueryStyle::Guess) {
            // walking from a learned label is what reaches new vertices
            let onward: Vec<_> = options.iter().copied().filter(|&(x, _, _)| self.holds[x] != Holds::Zero).collect();
            if !onward.is_empty() && unit_f64(rng.next_u64()) < 0.7 {
                options = onward;
            }
        }
        if self.style == QueryStyle::Random {
            // prefer y registers that are not in superposition
            let clean: Vec<_> = options.iter().copied().filter(|&(_, _, y)| !self.reg_superposed(y)).collect();
            if !clean.is_empty() && unit_f64(rng.next_u64()) < 0.8 {
                return Some(clean[uniform_index(rng, clean.len())]);
            }
        }
        Some(options[uniform_index(rng, options.len())])
    }

    fn is_uncompute(&self, x: usize, c: usize, y: usize) -> bool {
        self.source[y] == Some((x, self.version[x], c, self.color_version[c]))
    }

    fn apply_query(&mut self, x: usize, c: usize, y: usize) {
        let uncompute = self.is_uncompute(x, c, y);
        let sup = self.reg_superposed(x)
            || self.layout.colors[c].iter().any(|&w| self.superposed[w])
            || self.reg_superposed(y);
        self.version[y] += 1;
        if uncompute {
            self.holds[y] = Holds::Zero;
            self.source[y] = None;
        } else {
            self.holds[y] = match (self.holds[y], self.holds[x]) {
                (Holds::Zero, Holds::Zero | Holds::Known) => Holds::Known,
                _ => Holds::Junk,
            };
            self.source[y] = (self.holds[y] == Holds::Known).then_some((x, self.version[x], c, self.color_version[c]));
        }
        for &w in &self.layout.labels[y] {
            self.superposed[w] = sup;
        }
    }

    fn query_gate(&self, x: usize, c: usize, y: usize) -> Gate {
        let cw = &self.layout.colors[c];
        Gate::Query(QueryWires {
            x: self.layout.labels[x].clone(),
            c: [cw[0], cw[1], cw[2], cw[3]],
            y: self.layout.labels[y].clone(),
        })
    }
}

struct LayerBuilder<'a> {
    machine: &'a mut Machine,
    rng: &'a mut Rng64,
    quantum: bool,
    hadamard_rate: f64,
    query_rate: f64,
    /// Wires available to this tier; Jozsa classical tiers see only R1.
    scope: usize,
}

impl LayerBuilder<'_> {
    fn build(&mut self, width: usize, guess_ok: bool) -> Layer {
        let mut busy = vec![false; self.machine.superposed.len()];
        for b in busy.iter_mut().skip(self.scope) {
            *b = true;
        }
        let mut gates = Vec::new();
        if unit_f64(self.rng.next_u64()) < self.query_rate {
            if let Some((x, c, y)) = self.machine.choose_query(self.rng, &busy, guess_ok) {
                let g = self.machine.query_gate(x, c, y);
                for w in g.wires() {
                    busy[w] = true;
                }
                self.machine.apply_query(x, c, y);
                gates.push(g);
            }
        }
        // label registers: phases only in truthful styles, anything otherwise
        let truthful = matches!(self.machine.style, QueryStyle::Truthful | QueryStyle::Guess);
        let mut label_wires: Vec<Wire> = self.machine.layout.labels.iter().flatten().copied().collect();
        label_wires.retain(|&w| w < self.scope);
        let mut free: Vec<Wire> = self.machine.layout.free_wires();
        free.retain(|&w| w < self.scope);
        if !truthful {
            free.extend(label_wires.iter().copied());
        } else if self.quantum {
            for &w in &label_wires {
                if !busy[w] && unit_f64(self.rng.next_u64()) < 0.1 {
                    busy[w] = true;
                    gates.push(Gate::Phase(w));
                }
            }
        }
        shuffle(self.rng, &mut free);
        for i in 0..free.len() {
            let w = free[i];
            if busy[w] {
                continue;
            }
            let roll = unit_f64(self.rng.next_u64());
            let others: Vec<Wire> = free[i + 1..].iter().copied().filter(|&v| !busy[v]).collect();
            let gate = if self.quantum && roll < self.hadamard_rate {
                Some(Gate::Hadamard(w))
            } else if self.quantum && roll < self.hadamard_rate + 0.1 {
                Some(Gate::Phase(w))
            } else if roll < 0.6 {
                Some(Gate::Not(w))
            } else if roll < 0.8 && !others.is_empty() {
                Some(Gate::Cnot {
                    control: others[uniform_index(self.rng, others.len())],
                    target: w,
                })
            } else if others.len() >= 2 {
                let a = uniform_index(self.rng, others.len());
                let mut b = uniform_index(self.rng, others.len() - 1);
                if b >= a {
                    b += 1;
                }
                Some(Gate::Toffoli {
                    c1: others[a],
                    c2: others[b],
                    target: w,
                })
            } else {
                None
            };
            if let Some(g) = gate {
                let ws = g.wires();
                for &v in &ws {
                    busy[v] = true;
                }
                let target = *ws.last().unwrap();
                let sup = match &g {
                    Gate::Hadamard(_) => true,
                    Gate::Phase(_) | Gate::Not(_) => self.machine.superposed[target],
                    _ => ws.iter().any(|&v| self.machine.superposed[v]),
                };
                if !matches!(g, Gate::Phase(_)) {
                    self.machine.touch(target, true);
                }
                self.machine.superposed[target] = sup;
                gates.push(g);
            }
        }
        Layer::square(width, gates)
    }

    /// X gates loading a random label into a zero register, marking it a guess.
    fn load_guess(&mut self, width: usize) -> Option<Layer> {
        let n = self.machine.n;
        let zeros: Vec<usize> = (1..self.machine.layout.labels.len())
            .filter(|&r| self.machine.holds[r] == Holds::Zero && self.machine.layout.labels[r].iter().all(|&w| w < self.scope))
            .collect();
        if zeros.is_empty() {
            return None;
        }
        let r = zeros[uniform_index(self.rng, zeros.len())];
        let label = uniform_u64(self.rng, 1, (1u64 << (2 * n)) - 1);
        let gates = self.machine.layout.labels[r]
            .iter()
            .enumerate()
            .filter(|(j, _)| (label >> j) & 1 == 1)
            .map(|(_, &w)| Gate::Not(w))
            .collect();
        self.machine.holds[r] = Holds::Guess;
        self.machine.version[r] += 1;
        self.machine.source[r] = None;
        Some(Layer::square(width, gates))
    }
}

fn depth<R: RngCore>(rng: &mut R, max: usize) -> usize {
    1 + uniform_index(rng, max.max(1))
}

/// A random hybrid circuit per `cfg`, deterministic in `seed`.
pub fn random_hybrid(cfg: &RandomCircuitConfig, seed: u64) -> HybridCircuit {
    let mut rng = rng_from_seed(seed);
    let layout = Layout::pack(cfg.n, cfg.width);
    let mut machine = Machine::new(cfg.n, layout, cfg.width, cfg.style);
    let m = cfg.n as usize;
    let mut tiers = Vec::with_capacity(cfg.tiers);
    for i in 0..cfg.tiers {
        let kind = cfg.kind.expected_tier(i);
        let quantum = kind == TierKind::Quantum;
        let max = if quantum { cfg.quantum_depth } else { cfg.classical_depth };
        let d = depth(&mut rng, max);
        let mut layers = Vec::with_capacity(d);
        let width_in = if i == 0 { m } else { cfg.width };
        if i == 0 {
            layers.push(Layer::grow(m, cfg.width));
        }
        let mut builder = LayerBuilder {
            machine: &mut machine,
            rng: &mut rng,
            quantum,
            hadamard_rate: cfg.hadamard_rate,
            query_rate: cfg.query_rate,
            scope: cfg.width,
        };
        let mut guessed = false;
        while layers.len() < d {
            if cfg.style == QueryStyle::Guess && !guessed && layers.len() + 1 < d {
                if let Some(l) = builder.load_guess(cfg.width) {
                    layers.push(l);
                    guessed = true;
                    continue;
                }
            }
            let l = builder.build(cfg.width, guessed);
            layers.push(l);
        }
        if quantum {
            machine.measure(0..cfg.width);
        }
        tiers.push(Tier::new(kind, width_in, layers));
    }
    HybridCircuit::new(cfg.n, cfg.width, cfg.kind, tiers)
}

/// Shape of a random Jozsa circuit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomJozsaConfig {
    pub n: u32,
    pub width: usize,
    pub blocks: usize,
    pub classical_depth: usize,
    pub quantum_depth: usize,
    pub style: QueryStyle,
    pub query_rate: f64,
    pub hadamard_rate: f64,
}

/// A random Jozsa circuit. `R1` registers are packed first, so classical
/// tiers can query when `R1` is wide enough.
pub fn random_jozsa(cfg: &RandomJozsaConfig, seed: u64) -> JozsaCircuit {
    let mut rng = rng_from_seed(seed);
    let r1 = cfg.width / 2;
    let mut layout = Layout::pack_range(cfg.n, 0, r1);
    let upper = Layout::pack_range(cfg.n, r1, cfg.width);
    layout.labels.extend(upper.labels);
    layout.colors.extend(upper.colors);
    layout.scratch.extend(upper.scratch);
    let mut machine = Machine::new(cfg.n, layout, cfg.width, cfg.style);
    let mut blocks = Vec::with_capacity(cfg.blocks);
    for b in 0..cfg.blocks {
        let mut qlayers = Vec::new();
        let width_in = if b == 0 { cfg.n as usize } else { cfg.width };
        if b == 0 {
            qlayers.push(Layer::grow(width_in, cfg.width));
        }
        let dq = depth(&mut rng, cfg.quantum_depth);
        {
            let mut builder = LayerBuilder {
                machine: &mut machine,
                rng: &mut rng,
                quantum: true,
                hadamard_rate: cfg.hadamard_rate,
                query_rate: cfg.query_rate,
                scope: cfg.width,
            };
            while qlayers.len() < dq {
                qlayers.push(builder.build(cfg.width, false));
            }
        }
        machine.measure(0..r1);
        let dc = depth(&mut rng, cfg.classical_depth);
        let mut clayers = Vec::with_capacity(dc);
        {
            let mut builder = LayerBuilder {
                machine: &mut machine,
                rng: &mut rng,
                quantum: false,
                hadamard_rate: 0.0,
                query_rate: cfg.query_rate,
                scope: r1,
            };
            for _ in 0..dc {
                clayers.push(builder.build(r1, false));
            }
        }
        blocks.push(JozsaBlock {
            quantum: Tier::quantum(width_in, qlayers),
            classical: Tier::classical(r1, clayers),
        });
    }
    JozsaCircuit::new(cfg.n, cfg.width, blocks)
}

/// A random quantum tier of `width` wires without queries.
pub fn random_query_free_tier(width: usize, depth: usize, seed: u64) -> Tier {
    let mut rng = rng_from_seed(seed);
    let layout = Layout {
        labels: Vec::new(),
        colors: Vec::new(),
        scratch: (0..width).collect(),
    };
    let mut machine = Machine::new(1, layout, width, QueryStyle::None);
    let mut builder = LayerBuilder {
        machine: &mut machine,
        rng: &mut rng,
        quantum: true,
        hadamard_rate: 0.35,
        query_rate: 0.0,
        scope: width,
    };
    Tier::quantum(width, (0..depth).map(|_| builder.build(width, false)).collect())
}

/// A random quantum tier at height `n` whose layers may hold queries.
pub fn random_query_tier(n: u32, width: usize, depth: usize, seed: u64) -> Tier {
    let mut rng = rng_from_seed(seed);
    let mut machine = Machine::new(n, Layout::pack(n, width), width, QueryStyle::Random);
    let mut builder = LayerBuilder {
        machine: &mut machine,
        rng: &mut rng,
        quantum: true,
        hadamard_rate: 0.35,
        query_rate: 0.7,
        scope: width,
    };
    Tier::quantum(width, (0..depth).map(|_| builder.build(width, false)).collect())
}
