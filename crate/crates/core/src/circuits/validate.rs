use std::fmt;

use super::circuit::{Circuit, HybridCircuit, JozsaCircuit};
use super::gate::{Gate, GateKind};
use super::tier::{Tier, TierKind};
use crate::error::{Error, Result};

/// A structural problem, located by 1-based tier, layer and gate.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Diagnostic {
    pub tier: Option<usize>,
    pub layer: Option<usize>,
    pub gate: Option<usize>,
    pub message: String,
}

impl Diagnostic {
    fn circuit(message: impl Into<String>) -> Self {
        Self {
            tier: None,
            layer: None,
            gate: None,
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut loc = Vec::new();
        if let Some(t) = self.tier {
            loc.push(format!("tier {t}"));
        }
        if let Some(l) = self.layer {
            loc.push(format!("layer {l}"));
        }
        if let Some(g) = self.gate {
            loc.push(format!("gate {g}"));
        }
        if loc.is_empty() {
            write!(f, "{}", self.message)
        } else {
            write!(f, "{}: {}", loc.join(" "), self.message)
        }
    }
}

struct Sink<'a> {
    out: &'a mut Vec<Diagnostic>,
    tier: Option<usize>,
}

impl Sink<'_> {
    fn tier(&mut self, msg: impl Into<String>) {
        self.out.push(Diagnostic {
            tier: self.tier,
            layer: None,
            gate: None,
            message: msg.into(),
        });
    }

    fn layer(&mut self, layer: usize, msg: impl Into<String>) {
        self.out.push(Diagnostic {
            tier: self.tier,
            layer: Some(layer + 1),
            gate: None,
            message: msg.into(),
        });
    }

    fn gate(&mut self, layer: usize, gate: usize, msg: impl Into<String>) {
        self.out.push(Diagnostic {
            tier: self.tier,
            layer: Some(layer + 1),
            gate: Some(gate + 1),
            message: msg.into(),
        });
    }
}

/// Checks the layer-level rules of one tier. `tier_index` is 0-based.
pub fn validate_tier(tier: &Tier, n: u32, tier_index: Option<usize>) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mut sink = Sink {
        out: &mut out,
        tier: tier_index.map(|i| i + 1),
    };
    let mut live = tier.width_in;
    let mut high_water = tier.width_in;
    let reg = 2 * n as usize;
    for (li, layer) in tier.layers.iter().enumerate() {
        if layer.width_in > live {
            sink.layer(
                li,
                format!("incompatible: needs {} inputs but only {live} wires are live", layer.width_in),
            );
        }
        let (w_in, w_out) = (layer.width_in, layer.width_out);
        let mut used = vec![false; w_in.max(w_out).max(high_water)];
        let grows = w_out > w_in;
        if grows && w_in < high_water {
            sink.layer(li, format!("grows from {w_in} but wires up to {high_water} were already used"));
        }
        let mut intros = 0;
        let mut discards = 0;
        for (gi, gate) in layer.gates.iter().enumerate() {
            let kind = gate.kind();
            if tier.kind == TierKind::Classical && !kind.is_classical() {
                sink.gate(li, gi, format!("{} gate in a classical layer", kind.name()));
            }
            for w in gate.wires() {
                let ok = match kind {
                    GateKind::AncillaIntro => (w_in..w_out).contains(&w),
                    GateKind::Discard => (w_out..w_in).contains(&w),
                    _ => w < w_in,
                };
                if !ok {
                    sink.gate(li, gi, format!("{} on wire {w} outside its allowed range", kind.name()));
                    continue;
                }
                if std::mem::replace(&mut used[w], true) {
                    sink.gate(li, gi, format!("wire {w} used twice in one layer"));
                }
            }
            match gate {
                Gate::AncillaIntro(_) => intros += 1,
                Gate::Discard(_) => discards += 1,
                Gate::Query(q) => {
                    if q.x.len() != reg || q.y.len() != reg {
                        sink.gate(
                            li,
                            gi,
                            format!("query registers x={} y={} but n={n} needs {reg}", q.x.len(), q.y.len()),
                        );
                    }
                }
                _ => {}
            }
        }
        let want_intros = w_out.saturating_sub(w_in);
        let want_discards = w_in.saturating_sub(w_out);
        if intros != want_intros {
            sink.layer(li, format!("{intros} ancillas for a change {w_in} -> {w_out}"));
        }
        if discards != want_discards {
            sink.layer(li, format!("{discards} discards for a change {w_in} -> {w_out}"));
        }
        high_water = high_water.max(w_out);
        live = w_out;
    }
    out
}

fn check_arity(sink: &mut Sink<'_>, tier: &Tier, m: usize, s: usize) {
    let (tm, ts, _) = tier.arity();
    if tm != m || ts != s {
        sink.tier(format!("arity ({tm},{ts}) but ({m},{s}) required"));
    }
}

pub fn validate_hybrid(c: &HybridCircuit) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    if c.tiers.is_empty() {
        out.push(Diagnostic::circuit("circuit has no tiers"));
        return out;
    }
    if c.output_width() == 0 {
        out.push(Diagnostic::circuit("last tier has no outputs"));
    }
    for (i, tier) in c.tiers.iter().enumerate() {
        out.extend(validate_tier(tier, c.n, Some(i)));
        let mut sink = Sink {
            out: &mut out,
            tier: Some(i + 1),
        };
        let want = c.kind.expected_tier(i);
        if tier.kind != want {
            sink.tier(format!("is {} but {} is required here", tier.kind.name(), want.name()));
        }
        if i > 0 && tier.width_in > c.tiers[i - 1].width_out() {
            sink.tier(format!(
                "incompatible: {} inputs after a tier with {} outputs",
                tier.width_in,
                c.tiers[i - 1].width_out()
            ));
        }
        let m = if i == 0 { c.input_width() } else { c.width };
        check_arity(&mut sink, tier, m, c.width);
        if tier.max_width() > c.width {
            sink.tier(format!("reaches width {} above the circuit width {}", tier.max_width(), c.width));
        }
    }
    out
}

pub fn validate_jozsa(c: &JozsaCircuit) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    if c.width % 2 != 0 {
        out.push(Diagnostic::circuit(format!("width {} is odd", c.width)));
    }
    if c.r1_width != c.width / 2 {
        out.push(Diagnostic::circuit(format!(
            "measurement acts on {} wires but must act on width/2 = {}",
            c.r1_width,
            c.width / 2
        )));
    }
    if c.blocks.is_empty() {
        out.push(Diagnostic::circuit("circuit has no tiers"));
    }
    for (b, block) in c.blocks.iter().enumerate() {
        let (qi, ci) = (2 * b, 2 * b + 1);
        out.extend(validate_tier(&block.quantum, c.n, Some(qi)));
        out.extend(validate_tier(&block.classical, c.n, Some(ci)));
        let mut sink = Sink {
            out: &mut out,
            tier: Some(qi + 1),
        };
        if block.quantum.kind != TierKind::Quantum {
            sink.tier("must be quantum");
        }
        let m = if b == 0 { c.input_width() } else { c.width };
        check_arity(&mut sink, &block.quantum, m, c.width);
        if block.quantum.max_width() > c.width {
            sink.tier("exceeds the circuit width");
        }
        sink.tier = Some(ci + 1);
        if block.classical.kind != TierKind::Classical {
            sink.tier("must be classical");
        }
        check_arity(&mut sink, &block.classical, c.r1_width, c.r1_width);
        if block.classical.max_width() > c.r1_width {
            sink.tier("leaves register R1");
        }
    }
    out
}

pub fn validate(c: &Circuit) -> Vec<Diagnostic> {
    match c {
        Circuit::Hybrid(h) => validate_hybrid(h),
        Circuit::Jozsa(j) => validate_jozsa(j),
    }
}

/// `Ok` iff `diagnostics` is empty.
pub fn ensure_valid(diagnostics: Vec<Diagnostic>) -> Result<()> {
    if diagnostics.is_empty() {
        Ok(())
    } else {
        let text: Vec<String> = diagnostics.iter().map(ToString::to_string).collect();
        Err(Error::InvalidCircuit(text.join("; ")))
    }
}
