//! Line-oriented circuit format.
//!
//! ```text
//! welded-circuit v1
//! kind hybrid            # hybrid | hybrid-quantum | jozsa
//! n 2
//! width 12
//! tier classical 2       # kind and input width
//! layer 2 12 | ANC(2) ANC(3) ANC(4) ANC(5) ANC(6) ANC(7) ANC(8) ANC(9) ANC(10) ANC(11)
//! end
//! tier quantum 12
//! layer 12 12 | H(4) QUERY(0,1,2,3,4,5,6,7,8,9,10,11)
//! end
//! ```
//!
//! Jozsa circuits add `r1 <wires>` to the header and list their tiers as
//! quantum, classical, quantum, classical, and so on. `QUERY` takes the
//! `2n` x-wires, the 4 color wires and the `2n` y-wires in that order.
//! Everything after `#` is a comment.

use std::fmt::Write as _;

use super::circuit::{Circuit, HybridCircuit, HybridKind, JozsaBlock, JozsaCircuit};
use super::gate::{Gate, GateKind, QueryWires, Wire};
use super::layer::Layer;
use super::tier::{Tier, TierKind};
use super::validate::{ensure_valid, validate};
use crate::error::{Error, Result};

pub const HEADER: &str = "welded-circuit v1";

fn gate_text(g: &Gate) -> String {
    let wires: Vec<String> = g.wires().iter().map(ToString::to_string).collect();
    format!("{}({})", g.kind().name(), wires.join(","))
}

fn write_tier(out: &mut String, tier: &Tier) {
    writeln!(out, "tier {} {}", tier.kind.name(), tier.width_in).unwrap();
    for layer in &tier.layers {
        write!(out, "layer {} {} |", layer.width_in, layer.width_out).unwrap();
        for g in &layer.gates {
            write!(out, " {}", gate_text(g)).unwrap();
        }
        out.push('\n');
    }
    out.push_str("end\n");
}

/// Canonical text form.
pub fn print(c: &Circuit) -> String {
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    match c {
        Circuit::Hybrid(h) => {
            let kind = match h.kind {
                HybridKind::Alternating => "hybrid",
                HybridKind::AllQuantum => "hybrid-quantum",
            };
            writeln!(out, "kind {kind}\nn {}\nwidth {}", h.n, h.width).unwrap();
            h.tiers.iter().for_each(|t| write_tier(&mut out, t));
        }
        Circuit::Jozsa(j) => {
            writeln!(out, "kind jozsa\nn {}\nwidth {}\nr1 {}", j.n, j.width, j.r1_width).unwrap();
            for b in &j.blocks {
                write_tier(&mut out, &b.quantum);
                write_tier(&mut out, &b.classical);
            }
        }
    }
    out
}

struct Cursor<'a> {
    line: usize,
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err<T>(&self, at: usize, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            line: self.line,
            column: self.text[..at].chars().count() + 1,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.text[self.pos..].starts_with([' ', '\t']) {
            self.pos += 1;
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.text.len()
    }

    fn word(&mut self) -> Result<(usize, &'a str)> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.text[start..];
        let len = rest
            .find(|ch: char| !(ch.is_ascii_alphanumeric() || ch == '-' || ch == '_' || ch == '.'))
            .unwrap_or(rest.len());
        if len == 0 {
            return self.err(start, "expected a word");
        }
        self.pos += len;
        Ok((start, &rest[..len]))
    }

    fn number(&mut self) -> Result<usize> {
        let (at, w) = self.word()?;
        w.parse().or_else(|_| self.err(at, format!("expected a number, found {w:?}")))
    }

    fn expect(&mut self, ch: char) -> Result<()> {
        self.skip_ws();
        if self.text[self.pos..].starts_with(ch) {
            self.pos += ch.len_utf8();
            Ok(())
        } else {
            self.err(self.pos, format!("expected {ch:?}"))
        }
    }

    fn peek(&mut self, ch: char) -> bool {
        self.skip_ws();
        self.text[self.pos..].starts_with(ch)
    }

    fn finish(&mut self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            self.err(self.pos, "unexpected trailing text")
        }
    }
}

fn parse_gate(cur: &mut Cursor<'_>, n: u32) -> Result<Gate> {
    let (at, name) = cur.word()?;
    let kind = match GateKind::from_name(name) {
        Some(k) => k,
        None => return cur.err(at, format!("unknown gate {name:?}")),
    };
    cur.expect('(')?;
    let mut wires: Vec<Wire> = Vec::new();
    if !cur.peek(')') {
        loop {
            wires.push(cur.number()?);
            if cur.peek(',') {
                cur.expect(',')?;
            } else {
                break;
            }
        }
    }
    cur.expect(')')?;
    let want = match kind {
        GateKind::Cnot => 2,
        GateKind::Toffoli => 3,
        GateKind::Query => QueryWires::width_for(n),
        _ => 1,
    };
    if wires.len() != want {
        return cur.err(at, format!("{name} takes {want} wires, got {}", wires.len()));
    }
    let w = &wires;
    Ok(match kind {
        GateKind::Hadamard => Gate::Hadamard(w[0]),
        GateKind::Phase => Gate::Phase(w[0]),
        GateKind::Not => Gate::Not(w[0]),
        GateKind::AncillaIntro => Gate::AncillaIntro(w[0]),
        GateKind::Discard => Gate::Discard(w[0]),
        GateKind::Cnot => Gate::Cnot {
            control: w[0],
            target: w[1],
        },
        GateKind::Toffoli => Gate::Toffoli {
            c1: w[0],
            c2: w[1],
            target: w[2],
        },
        GateKind::Query => {
            let k = 2 * n as usize;
            Gate::Query(QueryWires {
                x: w[..k].to_vec(),
                c: [w[k], w[k + 1], w[k + 2], w[k + 3]],
                y: w[k + 4..].to_vec(),
            })
        }
    })
}

#[derive(Clone, Copy, PartialEq)]
enum Kind {
    Hybrid(HybridKind),
    Jozsa,
}

/// Parses the text form. The result is not validated; see [`parse_validated`].
pub fn parse(text: &str) -> Result<Circuit> {
    let mut kind = None;
    let mut n: Option<u32> = None;
    let mut width = None;
    let mut r1 = None;
    let mut tiers: Vec<Tier> = Vec::new();
    let mut open: Option<Tier> = None;
    let mut saw_header = false;
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let body = raw.split('#').next().unwrap_or("");
        let mut cur = Cursor {
            line: line_no,
            text: body,
            pos: 0,
        };
        if cur.at_end() {
            continue;
        }
        if !saw_header {
            if body.trim() != HEADER {
                return cur.err(cur.pos, format!("expected header {HEADER:?}"));
            }
            saw_header = true;
            continue;
        }
        let (at, keyword) = cur.word()?;
        match keyword {
            "kind" | "n" | "width" | "r1" if open.is_some() || !tiers.is_empty() => {
                return cur.err(at, format!("{keyword} must come before the first tier"));
            }
            "kind" => {
                let (at, k) = cur.word()?;
                kind = Some(match k {
                    "hybrid" => Kind::Hybrid(HybridKind::Alternating),
                    "hybrid-quantum" => Kind::Hybrid(HybridKind::AllQuantum),
                    "jozsa" => Kind::Jozsa,
                    _ => return cur.err(at, format!("unknown circuit kind {k:?}")),
                });
            }
            "n" => n = Some(cur.number()? as u32),
            "width" => width = Some(cur.number()?),
            "r1" => r1 = Some(cur.number()?),
            "tier" => {
                if open.is_some() {
                    return cur.err(at, "previous tier is missing `end`");
                }
                if n.is_none() {
                    return cur.err(at, "`n` must be given before the first tier");
                }
                let (at, k) = cur.word()?;
                let tk = match k {
                    "classical" => TierKind::Classical,
                    "quantum" => TierKind::Quantum,
                    _ => return cur.err(at, format!("unknown tier kind {k:?}")),
                };
                let w = cur.number()?;
                open = Some(Tier::new(tk, w, Vec::new()));
            }
            "layer" => {
                let Some(tier) = open.as_mut() else {
                    return cur.err(at, "layer outside a tier");
                };
                let w_in = cur.number()?;
                let w_out = cur.number()?;
                let mut gates = Vec::new();
                if !cur.at_end() {
                    cur.expect('|')?;
                    while !cur.at_end() {
                        gates.push(parse_gate(&mut cur, n.unwrap())?);
                    }
                }
                tier.layers.push(Layer::new(w_in, w_out, gates));
            }
            "end" => match open.take() {
                Some(t) => tiers.push(t),
                None => return cur.err(at, "`end` without a tier"),
            },
            other => return cur.err(at, format!("unknown keyword {other:?}")),
        }
        cur.finish()?;
    }
    let eof = |message: &str| Error::Parse {
        line: last_line.max(1),
        column: 1,
        message: message.into(),
    };
    if !saw_header {
        return Err(eof("empty circuit file"));
    }
    if open.is_some() {
        return Err(eof("last tier is missing `end`"));
    }
    let kind = kind.ok_or_else(|| eof("missing `kind`"))?;
    let n = n.ok_or_else(|| eof("missing `n`"))?;
    let width = width.ok_or_else(|| eof("missing `width`"))?;
    match kind {
        Kind::Hybrid(hk) => {
            if r1.is_some() {
                return Err(eof("`r1` is only meaningful for jozsa circuits"));
            }
            Ok(HybridCircuit::new(n, width, hk, tiers).into())
        }
        Kind::Jozsa => {
            if tiers.len() % 2 != 0 {
                return Err(eof("jozsa circuits list tiers in quantum/classical pairs"));
            }
            let mut blocks = Vec::new();
            let mut it = tiers.into_iter();
            while let (Some(quantum), Some(classical)) = (it.next(), it.next()) {
                blocks.push(JozsaBlock { quantum, classical });
            }
            let mut j = JozsaCircuit::new(n, width, blocks);
            if let Some(r) = r1 {
                j.r1_width = r;
            }
            Ok(j.into())
        }
    }
}

/// Parses and then validates.
pub fn parse_validated(text: &str) -> Result<Circuit> {
    let c = parse(text)?;
    ensure_valid(validate(&c))?;
    Ok(c)
}
