//! Text format for decorated graphs, with JSON and DOT emitters.
//!
//! Grammar (one statement per line, `#` starts a comment):
//!
//! ```text
//! vertex <id> <B|D|P|Y2|Y111|Y12|Y3>
//! edge <id>[.<slot>] <id>[.<slot>] g=<int>|<odd>/2|? [rev]
//! ```
//!
//! Slots are numeric; for doubly winding pieces the names `marked` and
//! `unmarked` are also accepted. A missing slot picks the first free one.
//! Syntax errors carry line and column; semantic checks are deferred to
//! `DecoratedGraph::validate`.

use crate::decomp::Decomposition;
use crate::graph::{DecoratedGraph, SlotRef, VertexKind, Y12_MARKED, Y12_UNMARKED};
use crate::halfint::HalfInt;
use crate::presentations::{dihedral_presentation, cyclic_presentation, Family};
use crate::cw::GroupPresentation;
use std::collections::HashMap;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
#[error("line {line}, column {col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

fn err<T>(line: usize, col: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, col, msg: msg.into() })
}

fn kind_of(name: &str) -> Option<VertexKind> {
    Some(match name {
        "B" => VertexKind::B,
        "D" => VertexKind::D,
        "P" => VertexKind::P,
        "Y2" => VertexKind::Y2,
        "Y111" => VertexKind::Y111,
        "Y12" => VertexKind::Y12,
        "Y3" => VertexKind::Y3,
        _ => return None,
    })
}

/// Parses the text form of a decorated graph.
pub fn parse(text: &str) -> Result<DecoratedGraph, ParseError> {
    let mut g = DecoratedGraph::new();
    let mut names: HashMap<String, usize> = HashMap::new();
    let mut used: Vec<Vec<bool>> = Vec::new();
    for (li, raw) in text.lines().enumerate() {
        let line = li + 1;
        let stripped = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        if stripped.trim().is_empty() {
            continue;
        }
        // tokens with their 1-based column positions
        let mut tokens: Vec<(usize, &str)> = Vec::new();
        let mut pos = 0;
        for piece in stripped.split_whitespace() {
            let at = stripped[pos..].find(piece).unwrap() + pos;
            tokens.push((at + 1, piece));
            pos = at + piece.len();
        }
        match tokens[0].1 {
            "vertex" => {
                if tokens.len() != 3 {
                    return err(line, tokens[0].0, "expected: vertex <id> <kind>");
                }
                let (idc, id) = tokens[1];
                let (kc, kname) = tokens[2];
                if names.contains_key(id) {
                    return err(line, idc, format!("duplicate vertex id `{id}`"));
                }
                let Some(kind) = kind_of(kname) else {
                    return err(line, kc, format!("unknown vertex kind `{kname}`"));
                };
                let v = g.add_vertex(kind);
                names.insert(id.to_string(), v);
                used.push(vec![false; kind.arity()]);
            }
            "edge" => {
                if tokens.len() < 4 || tokens.len() > 5 {
                    return err(
                        line,
                        tokens[0].0,
                        "expected: edge <id>[.<slot>] <id>[.<slot>] g=<deco> [rev]",
                    );
                }
                let a = endpoint(tokens[1], line, &names, &g, &mut used)?;
                let b = endpoint(tokens[2], line, &names, &g, &mut used)?;
                let (gc, gtok) = tokens[3];
                let Some(val) = gtok.strip_prefix("g=") else {
                    return err(line, gc, "expected decoration `g=...`");
                };
                let deco = parse_deco(val, line, gc)?;
                let rev = if tokens.len() == 5 {
                    let (rc, rtok) = tokens[4];
                    if rtok != "rev" {
                        return err(line, rc, format!("unexpected trailing token `{rtok}`"));
                    }
                    true
                } else {
                    false
                };
                let e = g.add_edge(a, b, deco);
                g.edges[e].reversed = rev;
            }
            _ => return err(line, tokens[0].0, format!("unknown statement `{}`", tokens[0].1)),
        }
    }
    Ok(g)
}

fn endpoint(
    tok: (usize, &str),
    line: usize,
    names: &HashMap<String, usize>,
    g: &DecoratedGraph,
    used: &mut [Vec<bool>],
) -> Result<SlotRef, ParseError> {
    let (col, text) = tok;
    let (id, slot_name) = match text.split_once('.') {
        Some((i, s)) => (i, Some(s)),
        None => (text, None),
    };
    let Some(&v) = names.get(id) else {
        return err(line, col, format!("unknown vertex `{id}`"));
    };
    let kind = g.vertices[v];
    let slot = match slot_name {
        Some("marked") if kind == VertexKind::Y12 => Y12_MARKED,
        Some("unmarked") if kind == VertexKind::Y12 => Y12_UNMARKED,
        Some(s) => match s.parse::<usize>() {
            Ok(n) if n < kind.arity() => n,
            Ok(n) => {
                return err(line, col, format!("slot {n} out of range for `{id}`"));
            }
            Err(_) => return err(line, col, format!("bad slot `{s}`")),
        },
        None => match used[v].iter().position(|&u| !u) {
            Some(n) => n,
            None => return err(line, col, format!("no free slot on `{id}`")),
        },
    };
    if used[v][slot] {
        return err(line, col, format!("slot {slot} of `{id}` already used"));
    }
    used[v][slot] = true;
    Ok(SlotRef::new(v, slot))
}

fn parse_deco(val: &str, line: usize, col: usize) -> Result<Option<HalfInt>, ParseError> {
    if val == "?" {
        return Ok(None);
    }
    if let Some(num) = val.strip_suffix("/2") {
        let Ok(k) = num.parse::<i64>() else {
            return err(line, col, format!("bad decoration `{val}`"));
        };
        if k % 2 == 0 {
            return err(line, col, format!("`{val}`: write even numerators as integers"));
        }
        return Ok(Some(HalfInt::from_doubled(k)));
    }
    match val.parse::<i64>() {
        Ok(n) => Ok(Some(HalfInt::from_int(n))),
        Err(_) => err(line, col, format!("bad decoration `{val}`")),
    }
}

/// Canonical text form: vertices named `v0`, `v1`, ... with explicit
/// slots. `parse(emit_text(g))` reproduces `g` exactly.
pub fn emit_text(g: &DecoratedGraph) -> String {
    let mut out = String::from("# shadow graph\n");
    for (i, k) in g.vertices.iter().enumerate() {
        writeln!(out, "vertex v{i} {}", k.name()).unwrap();
    }
    for e in &g.edges {
        let deco = match e.decoration {
            Some(d) => format!("{d}"),
            None => "?".into(),
        };
        let rev = if e.reversed { " rev" } else { "" };
        writeln!(
            out,
            "edge v{}.{} v{}.{} g={}{}",
            e.a.vertex, e.a.slot, e.b.vertex, e.b.slot, deco, rev
        )
        .unwrap();
    }
    out
}

/// Deterministic JSON rendering of a decomposition with its numerical
/// invariants.
pub fn emit_json(d: &Decomposition) -> String {
    let mut root = serde_json::Map::new();
    root.insert(
        "blocks".into(),
        d.blocks.iter().map(|b| b.name().into()).collect::<Vec<serde_json::Value>>().into(),
    );
    root.insert(
        "assembly".into(),
        d.assemblies
            .iter()
            .map(|(p, q)| {
                serde_json::json!([[p.block, p.slot], [q.block, q.slot]])
            })
            .collect::<Vec<_>>()
            .into(),
    );
    root.insert(
        "filled".into(),
        d.filled.iter().map(|p| serde_json::json!([p.block, p.slot])).collect::<Vec<_>>().into(),
    );
    root.insert("s3xs1".into(), d.s3xs1.into());
    root.insert("cp2_plus".into(), d.cp2_plus.into());
    root.insert("cp2_minus".into(), d.cp2_minus.into());
    root.insert("s4".into(), d.s4.into());
    root.insert("chi".into(), d.euler().into());
    root.insert("sigma".into(), d.sigma().into());
    root.insert("h1".into(), format!("{}", d.h1()).into());
    root.insert("form_type".into(), d.form_type().into());
    root.insert("spin".into(), match d.spin {
        Some(b) => b.into(),
        None => serde_json::Value::Null,
    });
    root.insert(
        "trace".into(),
        d.trace.iter().map(|t| t.clone().into()).collect::<Vec<serde_json::Value>>().into(),
    );
    serde_json::to_string_pretty(&serde_json::Value::Object(root)).unwrap()
}

/// DOT rendering: one node per piece with a kind-specific shape, one
/// labelled edge per graph edge.
pub fn emit_dot(g: &DecoratedGraph) -> String {
    let shape = |k: VertexKind| match k {
        VertexKind::B => "plaintext",
        VertexKind::D => "circle",
        VertexKind::P => "triangle",
        VertexKind::Y2 => "diamond",
        VertexKind::Y111 => "box",
        VertexKind::Y12 => "house",
        VertexKind::Y3 => "hexagon",
    };
    let mut out = String::from("graph shadow {\n");
    for (i, k) in g.vertices.iter().enumerate() {
        writeln!(out, "  v{i} [label=\"{}\" shape={}];", k.name(), shape(*k)).unwrap();
    }
    for e in &g.edges {
        let deco = match e.decoration {
            Some(d) => format!("{d}"),
            None => "?".into(),
        };
        let rev = if e.reversed { " style=dashed" } else { "" };
        writeln!(
            out,
            "  v{} -- v{} [label=\"{}\" taillabel=\"{}\" headlabel=\"{}\"{}];",
            e.a.vertex, e.b.vertex, deco, e.a.slot, e.b.slot, rev
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

/// Presentation input: a named family (`C:n`, `D:2n`) or an explicit
/// presentation `gens=k; rels=word,word,...` where words use letters
/// `a..` with uppercase meaning inverse.
pub enum PresentationInput {
    Family(Family),
    Explicit(GroupPresentation),
}

impl PresentationInput {
    pub fn presentation(&self) -> GroupPresentation {
        match self {
            PresentationInput::Family(Family::C(n)) => cyclic_presentation(*n),
            PresentationInput::Family(Family::D(m)) => dihedral_presentation(*m),
            PresentationInput::Explicit(p) => p.clone(),
        }
    }
}

pub fn parse_presentation_spec(text: &str) -> Result<PresentationInput, String> {
    let text = text.trim();
    if let Some(n) = text.strip_prefix("C:") {
        let n: u64 = n.parse().map_err(|_| format!("bad cyclic order `{n}`"))?;
        if n == 0 {
            return Err("cyclic order must be positive".into());
        }
        return Ok(PresentationInput::Family(Family::C(n)));
    }
    if let Some(m) = text.strip_prefix("D:") {
        let m: u64 = m.parse().map_err(|_| format!("bad dihedral order `{m}`"))?;
        if m % 2 != 0 || m < 4 {
            return Err("dihedral order must be even and at least 4".into());
        }
        return Ok(PresentationInput::Family(Family::D(m)));
    }
    let mut gens: Option<usize> = None;
    let mut rels: Option<Vec<Vec<(usize, i64)>>> = None;
    for part in text.split(';') {
        let part = part.trim();
        if let Some(n) = part.strip_prefix("gens=") {
            gens = Some(n.trim().parse().map_err(|_| format!("bad generator count `{n}`"))?);
        } else if let Some(words) = part.strip_prefix("rels=") {
            let k = gens.ok_or("gens= must come before rels=")?;
            let mut out = Vec::new();
            for word in words.split(',') {
                let mut rel = Vec::new();
                for ch in word.trim().chars() {
                    let (idx, sign) = if ch.is_ascii_lowercase() {
                        ((ch as u8 - b'a') as usize, 1)
                    } else if ch.is_ascii_uppercase() {
                        ((ch as u8 - b'A') as usize, -1)
                    } else {
                        return Err(format!("bad letter `{ch}` in relator"));
                    };
                    if idx >= k {
                        return Err(format!("letter `{ch}` exceeds {k} generators"));
                    }
                    rel.push((idx, sign));
                }
                out.push(rel);
            }
            rels = Some(out);
        } else if !part.is_empty() {
            return Err(format!("unknown clause `{part}`"));
        }
    }
    match (gens, rels) {
        (Some(k), rels) => Ok(PresentationInput::Explicit(GroupPresentation {
            generators: (0..k).map(|i| ((b'a' + i as u8) as char).to_string()).collect(),
            relators: rels.unwrap_or_default(),
        })),
        _ => Err("expected `C:n`, `D:2n`, or `gens=k; rels=...`".into()),
    }
}
