//! Exact consistency ratio and membership probabilities by enumerating
//! every labeling a run can observe.
//!
//! The welding and coloring of a template tree are kept, known labels are
//! placed along recorded colors, and every other vertex gets a uniformly
//! random injective label. Labels are only drawn when the replayed run first
//! looks at them: an odometer walks every sequence of such draws, each path
//! weighted by its probability. Labels never observed keep the closed form
//! `unlabeled / available`.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use welded_core::circuits::HybridCircuit;
use welded_core::hybrid_sim::{few_tier_output, KnownVertices};
use welded_core::statevec::Bits;
use welded_core::welded_tree::{label_mask, BlackBoxTree, ColorCode, Label, Oracle, Vertex, NUM_COLORS};

/// Places the known labels on the template's vertices by following colors
/// from the entrance.
pub fn place_along_colors(v: &KnownVertices, template: &BlackBoxTree) -> Option<HashMap<Vertex, Label>> {
    let inv = v.invalid();
    let mut at: HashMap<Label, Vertex> = HashMap::from([(Label::ENTRANCE, template.structure().entrance())]);
    let mut queue = VecDeque::from([Label::ENTRANCE]);
    while let Some(x) = queue.pop_front() {
        let Some(ans) = v.answers(x) else { continue };
        let p = at[&x];
        for c in 1..=NUM_COLORS {
            let y = ans[(c - 1) as usize];
            match (y == inv, template.coloring().neighbor(p, c)) {
                (true, None) => {}
                (false, Some(q)) => match at.get(&y) {
                    Some(&r) if r != q => return None,
                    Some(_) => {}
                    None => {
                        if at.values().any(|&r| r == q) {
                            return None;
                        }
                        at.insert(y, q);
                        queue.push_back(y);
                    }
                },
                _ => return None,
            }
        }
    }
    Some(at.into_iter().map(|(l, q)| (q, l)).collect())
}

#[derive(Debug, Clone)]
struct Labeling {
    label_of: HashMap<Vertex, Label>,
    vertex_of: HashMap<Label, Vertex>,
    excluded: HashSet<Label>,
}

struct Path<'t> {
    template: &'t BlackBoxTree,
    n: u32,
    lab: Labeling,
    script: Vec<(usize, usize)>,
    cursor: usize,
    weight: f64,
    calls: u64,
}

impl Path<'_> {
    fn available(&self) -> u64 {
        label_mask(self.n) - self.lab.label_of.len() as u64 - self.lab.excluded.len() as u64
    }

    fn unlabeled(&self) -> u64 {
        self.template.structure().vertex_count() as u64 - self.lab.label_of.len() as u64
    }

    fn choose(&mut self, count: usize) -> usize {
        let k = if self.cursor < self.script.len() {
            self.script[self.cursor].0
        } else {
            self.script.push((0, count));
            0
        };
        debug_assert_eq!(self.script[self.cursor].1, count);
        self.cursor += 1;
        k
    }

    fn free_strings(&self) -> Vec<Label> {
        (0..label_mask(self.n))
            .map(Label)
            .filter(|l| !self.lab.vertex_of.contains_key(l) && !self.lab.excluded.contains(l))
            .collect()
    }

    fn assign(&mut self, v: Vertex, l: Label) {
        self.lab.label_of.insert(v, l);
        self.lab.vertex_of.insert(l, v);
    }

    /// The vertex carrying `x`, drawing that fact if not yet decided.
    fn locate(&mut self, x: Label) -> Option<Vertex> {
        if let Some(&v) = self.lab.vertex_of.get(&x) {
            return Some(v);
        }
        if x == Label::invalid(self.n) || self.lab.excluded.contains(&x) {
            return None;
        }
        let a = self.available() as f64;
        let free: Vec<Vertex> =
            (0..self.template.structure().vertex_count()).filter(|v| !self.lab.label_of.contains_key(v)).collect();
        let k = self.choose(free.len() + 1);
        if k < free.len() {
            self.weight /= a;
            self.assign(free[k], x);
            Some(free[k])
        } else {
            self.weight *= (a - free.len() as f64) / a;
            self.lab.excluded.insert(x);
            None
        }
    }

    fn label(&mut self, w: Vertex) -> Label {
        if let Some(&l) = self.lab.label_of.get(&w) {
            return l;
        }
        let free = self.free_strings();
        let k = self.choose(free.len());
        self.weight /= free.len() as f64;
        self.assign(w, free[k]);
        free[k]
    }

    fn membership(&self, b: Label) -> f64 {
        if self.lab.vertex_of.contains_key(&b) {
            1.0
        } else if b == Label::invalid(self.n) || self.lab.excluded.contains(&b) {
            0.0
        } else {
            self.unlabeled() as f64 / self.available() as f64
        }
    }
}

struct PathOracle<'p, 't>(&'p mut Path<'t>);

impl Oracle for PathOracle<'_, '_> {
    fn height(&self) -> u32 {
        self.0.n
    }

    fn query(&mut self, x: Label, c: ColorCode) -> Label {
        self.0.calls += 1;
        let Some(v) = self.0.locate(x) else { return Label::invalid(self.0.n) };
        match self.0.template.coloring().neighbor(v, c) {
            Some(w) => self.0.label(w),
            None => Label::invalid(self.0.n),
        }
    }

    fn queries(&self) -> u64 {
        self.0.calls
    }
}

/// Exact values from an enumeration.
#[derive(Debug, Clone)]
pub struct Exhaustive {
    pub paths: u64,
    /// Total weight of all paths; 1 up to rounding.
    pub total: f64,
    pub ratio: f64,
    /// `P[b valid | output = target]` per candidate, `None` when the ratio is 0.
    pub membership: Vec<(Label, Option<f64>)>,
}

/// Enumerates every labeling path of the first `tiers` tiers simulated on
/// trees consistent with `v`, giving up after `path_cap` paths.
pub fn exhaustive_estimates(
    circuit: &HybridCircuit,
    template: &BlackBoxTree,
    v: &KnownVertices,
    tiers: usize,
    seed: u64,
    target: Bits,
    candidates: &[Label],
    path_cap: u64,
) -> Option<Exhaustive> {
    let placed = place_along_colors(v, template)?;
    let base = Labeling {
        vertex_of: placed.iter().map(|(&q, &l)| (l, q)).collect(),
        label_of: placed,
        excluded: HashSet::new(),
    };
    let mut script: Vec<(usize, usize)> = Vec::new();
    let (mut paths, mut total, mut hit) = (0u64, 0.0f64, 0.0f64);
    let mut member = vec![0.0f64; candidates.len()];
    loop {
        let mut path = Path {
            template,
            n: circuit.n,
            lab: base.clone(),
            script: std::mem::take(&mut script),
            cursor: 0,
            weight: 1.0,
            calls: 0,
        };
        let out = few_tier_output::<f64, _>(circuit, PathOracle(&mut path), tiers, seed).ok()?;
        paths += 1;
        total += path.weight;
        if out == target {
            hit += path.weight;
            for (m, &b) in member.iter_mut().zip(candidates) {
                *m += path.weight * path.membership(b);
            }
        }
        script = path.script;
        script.truncate(path.cursor);
        while let Some(&(k, count)) = script.last() {
            if k + 1 < count {
                break;
            }
            script.pop();
        }
        match script.last_mut() {
            Some(last) => last.0 += 1,
            None => break,
        }
        if paths >= path_cap {
            return None;
        }
    }
    Some(Exhaustive {
        paths,
        total,
        ratio: hit,
        membership: candidates
            .iter()
            .zip(member)
            .map(|(&b, m)| (b, (hit > 0.0).then(|| m / hit)))
            .collect(),
    })
}

/// Every label of `hist` missing from `v`'s labels, ascending.
pub fn history_candidates(v: &KnownVertices, hist: &KnownVertices) -> Vec<Label> {
    let known: BTreeSet<Label> = v.labels();
    hist.labels().into_iter().filter(|l| !known.contains(l)).collect()
}
