//! The move catalog: pattern matching and graph rewriting, with a ledger of
//! topological effects.
//!
//! Moves fall into effect classes: some relate two graphs encoding the same
//! block, some record a connected-sum splitting or a de-assembly along an
//! S2 x S1, some fill a boundary with the solid piece D3 x S1, and a few are
//! surgery composites that change the block in a documented way.

use crate::boundary::{subtree_near_slope, SlopeError};
use crate::decomp::BlockKind;
use crate::graph::{
    DecoratedGraph, Edge, SlotRef, VertexKind, Y12_MARKED, Y12_UNMARKED,
};
use crate::halfint::HalfInt;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MoveKind {
    /// Polyhedron-preserving rearrangements (reversal flags, slot swaps).
    Innocuous(u8),
    /// Block-preserving local thickening rewrites, variants 1-8.
    Thickening(u8),
    Sum,
    Assemble,
    Fill,
    VerticalCut,
    HorizontalCut,
    /// 1: Moebius piece de-assembly; 2: order-3 piece de-assembly;
    /// 3-4: pants piece reductions.
    Reduction(u8),
    /// Fiber-parallel filling: the piece splits as a double connected sum.
    Scoppia,
    Surgery,
    Bubble,
    MoveLeaf1,
    MoveLeaf2,
    Elimina5a,
    Elimina5b,
    StaccaCut,
    StaccaGen1,
    StaccaGen2,
    MoveFruit,
    BadBranchRewrite,
    BadBranchReduce0,
    BadBranchReduce1,
    Flat(u8),
    Simplify(u8),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EffectClass {
    SameBlock,
    Deassembled,
    ConnectedSumSplit,
    Filled,
    SurgeryPerformed,
    BaseCase,
}

/// Static effect table.
pub fn effect_of(kind: MoveKind) -> EffectClass {
    use MoveKind::*;
    match kind {
        Innocuous(_) | Thickening(_) | Assemble | Bubble | MoveLeaf1 | MoveLeaf2 | MoveFruit
        | BadBranchRewrite | Flat(_) => EffectClass::SameBlock,
        Simplify(5) | Simplify(9) | Simplify(11) | Simplify(12..=17) => EffectClass::SameBlock,
        Simplify(1) | Simplify(4) | Simplify(10) | Simplify(21) | Simplify(22) | VerticalCut
        | Reduction(_) | BadBranchReduce0 => EffectClass::Deassembled,
        Sum | Simplify(2) | Simplify(3) | Simplify(6) | Simplify(7) | Simplify(8)
        | Simplify(20) | HorizontalCut | Scoppia | StaccaCut | StaccaGen1 | StaccaGen2
        | BadBranchReduce1 => EffectClass::ConnectedSumSplit,
        Fill => EffectClass::Filled,
        Surgery | Elimina5a | Elimina5b => EffectClass::SurgeryPerformed,
        Simplify(18) | Simplify(19) => EffectClass::BaseCase,
        Simplify(_) => EffectClass::SameBlock,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BaseCaseKind {
    S4,
    Cp2Plus,
    Cp2Minus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LedgerEvent {
    SameBlock,
    ConnectedSumSplit { components: usize },
    Deassembled { block: Option<BlockKind> },
    Filled { s3xs1: usize },
    SurgeryPerformed,
    BaseCase(BaseCaseKind),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveInstance {
    pub kind: MoveKind,
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    pub params: Vec<i64>,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum MoveError {
    #[error("anchor no longer matches the pattern: {0}")]
    StaleAnchor(String),
    #[error("rewrite not representable on vertex-free graphs: {0}")]
    Unsupported(String),
}

// ---------------------------------------------------------------------------
// small graph-editing helpers

/// Drops the given vertices and edges, remapping indices. Panics if a
/// surviving edge still references a dropped vertex.
fn compact(
    g: &DecoratedGraph,
    dead_v: &HashSet<usize>,
    dead_e: &HashSet<usize>,
) -> (DecoratedGraph, Vec<Option<usize>>) {
    let mut out = DecoratedGraph::new();
    let mut map = vec![None; g.vertices.len()];
    for (i, &k) in g.vertices.iter().enumerate() {
        if !dead_v.contains(&i) {
            map[i] = Some(out.add_vertex(k));
        }
    }
    for (ei, e) in g.edges.iter().enumerate() {
        if dead_e.contains(&ei) {
            continue;
        }
        let na = map[e.a.vertex].expect("edge references removed vertex");
        let nb = map[e.b.vertex].expect("edge references removed vertex");
        out.edges.push(Edge {
            a: SlotRef::new(na, e.a.slot),
            b: SlotRef::new(nb, e.b.slot),
            decoration: e.decoration,
            reversed: e.reversed,
        });
    }
    (out, map)
}

/// Far endpoint of edge `e` as seen from vertex `v`. For self edges returns
/// the `b` endpoint.
fn far_end(g: &DecoratedGraph, e: usize, v: usize) -> SlotRef {
    let ed = &g.edges[e];
    if ed.a.vertex == v {
        ed.b
    } else {
        ed.a
    }
}

fn is_unmarked_slot(g: &DecoratedGraph, s: SlotRef) -> bool {
    g.vertices[s.vertex] == VertexKind::Y12 && s.slot == Y12_UNMARKED
}

fn vertices_of_component(g: &DecoratedGraph, v: usize) -> Vec<usize> {
    g.components().into_iter().find(|c| c.contains(&v)).unwrap()
}

/// Vertices of the subtree reached from `base` through edge `e`.
fn subtree_vertices(g: &DecoratedGraph, base: usize, e: usize) -> Vec<usize> {
    let start = far_end(g, e, base).vertex;
    let mut seen: HashSet<usize> = [base, start].into_iter().collect();
    let mut stack = vec![start];
    let mut out = vec![start];
    while let Some(v) = stack.pop() {
        for (ei, _) in g.incident(v) {
            if ei == e {
                continue;
            }
            let w = far_end(g, ei, v).vertex;
            if seen.insert(w) {
                out.push(w);
                stack.push(w);
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// rewrites

/// Connected sum: removes the two anchor discs and bridges the freed edges
/// through a three-valent circle carrying a 0-gleam disc leaf.
pub(crate) fn rewrite_sum(
    g: &DecoratedGraph,
    d1: usize,
    d2: usize,
) -> Result<DecoratedGraph, MoveError> {
    if d1 == d2
        || g.vertices.get(d1) != Some(&VertexKind::D)
        || g.vertices.get(d2) != Some(&VertexKind::D)
    {
        return Err(MoveError::StaleAnchor("sum needs two distinct disc vertices".into()));
    }
    let (e1, _) = g.edge_at(SlotRef::new(d1, 0)).unwrap();
    let (e2, _) = g.edge_at(SlotRef::new(d2, 0)).unwrap();
    if e1 == e2 {
        return Err(MoveError::StaleAnchor("both discs bound the same edge".into()));
    }
    let u = far_end(g, e1, d1);
    let v = far_end(g, e2, d2);
    let (a, b) = (g.edges[e1].decoration, g.edges[e2].decoration);
    let mut h = g.clone();
    let j = h.add_vertex(VertexKind::Y111);
    let l = h.add_vertex(VertexKind::D);
    h.add_edge(u, SlotRef::new(j, 0), a);
    h.add_edge(v, SlotRef::new(j, 1), b);
    h.add_edge_int(SlotRef::new(j, 2), SlotRef::new(l, 0), 0);
    let (out, _) = compact(&h, &[d1, d2].into_iter().collect(), &[e1, e2].into_iter().collect());
    Ok(out)
}

/// Assembling: consumes two flat boundary circles and joins the freed edges
/// through a pants piece whose third boundary carries a bubble (a pair of
/// +1/-1 discs over a three-valent circle).
pub(crate) fn rewrite_assemble(
    g: &DecoratedGraph,
    b1: usize,
    b2: usize,
) -> Result<DecoratedGraph, MoveError> {
    if b1 == b2
        || g.vertices.get(b1) != Some(&VertexKind::B)
        || g.vertices.get(b2) != Some(&VertexKind::B)
    {
        return Err(MoveError::StaleAnchor("assemble needs two distinct flat vertices".into()));
    }
    let (e1, _) = g.edge_at(SlotRef::new(b1, 0)).unwrap();
    let (e2, _) = g.edge_at(SlotRef::new(b2, 0)).unwrap();
    if e1 == e2 {
        return Err(MoveError::StaleAnchor("both flats bound the same edge".into()));
    }
    let u = far_end(g, e1, b1);
    let v = far_end(g, e2, b2);
    let half_if_odd = |s: SlotRef| {
        if is_unmarked_slot(g, s) {
            HalfInt::from_doubled(1)
        } else {
            HalfInt::ZERO
        }
    };
    let a = g.edges[e1].decoration.unwrap_or_else(|| half_if_odd(u));
    let b = g.edges[e2].decoration.unwrap_or_else(|| half_if_odd(v));
    let mut h = g.clone();
    let p = h.add_vertex(VertexKind::P);
    let j = h.add_vertex(VertexKind::Y111);
    let cp = h.add_vertex(VertexKind::D);
    let cm = h.add_vertex(VertexKind::D);
    h.add_edge(u, SlotRef::new(p, 0), Some(a));
    h.add_edge(v, SlotRef::new(p, 1), Some(b));
    h.add_edge_int(SlotRef::new(p, 2), SlotRef::new(j, 0), 0);
    h.add_edge_int(SlotRef::new(j, 1), SlotRef::new(cp, 0), 1);
    h.add_edge_int(SlotRef::new(j, 2), SlotRef::new(cm, 0), -1);
    let (out, _) = compact(&h, &[b1, b2].into_iter().collect(), &[e1, e2].into_iter().collect());
    Ok(out)
}

/// Inserts a bubble on edge `e` in place: the edge is re-pointed at a new
/// pants vertex; all other edge indices are preserved.
pub(crate) fn bubble_insert(g: &DecoratedGraph, e: usize) -> Result<DecoratedGraph, MoveError> {
    let edge = g.edges.get(e).ok_or_else(|| MoveError::StaleAnchor("no such edge".into()))?;
    let (sa, sb, d) = (edge.a, edge.b, edge.decoration);
    let mut h = g.clone();
    let p = h.add_vertex(VertexKind::P);
    let j = h.add_vertex(VertexKind::Y111);
    let cp = h.add_vertex(VertexKind::D);
    let cm = h.add_vertex(VertexKind::D);
    // split the decoration across the two half-edges respecting parity
    let (d1, d2) = match d {
        None => (None, None), // framing edge: keep both halves framing-free
        Some(d) => {
            let a_odd = is_unmarked_slot(g, sa);
            let b_odd = is_unmarked_slot(g, sb);
            let half = HalfInt::from_doubled(1);
            let d1 = if a_odd {
                if d.is_half_odd() {
                    d
                } else {
                    d - half
                }
            } else if d.is_integer() {
                d
            } else {
                HalfInt::ZERO
            };
            let _ = b_odd;
            (Some(d1), Some(d - d1))
        }
    };
    if d1.is_none() && !(g.vertices[sa.vertex] == VertexKind::B || g.vertices[sb.vertex] == VertexKind::B) {
        return Err(MoveError::Unsupported("undecorated edge without flat endpoint".into()));
    }
    // re-point the original edge at the pants, push the rest at the end
    h.edges[e] = Edge { a: sa, b: SlotRef::new(p, 0), decoration: d1, reversed: edge.reversed };
    h.add_edge(SlotRef::new(p, 1), sb, d2);
    h.add_edge_int(SlotRef::new(p, 2), SlotRef::new(j, 0), 0);
    h.add_edge_int(SlotRef::new(j, 1), SlotRef::new(cp, 0), 1);
    h.add_edge_int(SlotRef::new(j, 2), SlotRef::new(cm, 0), -1);
    Ok(h)
}

/// Detects the bubble-bridge pattern at a pants vertex: some slot leads by a
/// 0-gleam edge to a three-valent circle capped by +1 and -1 discs.
pub(crate) fn bubble_pattern(g: &DecoratedGraph, p: usize) -> Option<(usize, usize, [usize; 2])> {
    if g.vertices.get(p) != Some(&VertexKind::P) {
        return None;
    }
    for slot in 0..3 {
        let (e, _) = g.edge_at(SlotRef::new(p, slot))?;
        if g.edges[e].decoration != Some(HalfInt::ZERO) {
            continue;
        }
        let far = far_end(g, e, p);
        if far.vertex == p || g.vertices[far.vertex] != VertexKind::Y111 {
            continue;
        }
        let j = far.vertex;
        let mut caps = Vec::new();
        let mut gleams = Vec::new();
        for s in 0..3 {
            let (ce, _) = g.edge_at(SlotRef::new(j, s)).unwrap();
            if ce == e {
                continue;
            }
            let c = far_end(g, ce, j);
            if g.vertices[c.vertex] != VertexKind::D {
                break;
            }
            caps.push(c.vertex);
            gleams.push(g.edges[ce].decoration.map(|d| d.doubled()));
        }
        if caps.len() == 2 {
            let mut gl: Vec<Option<i64>> = gleams.clone();
            gl.sort();
            if gl == vec![Some(-2), Some(2)] {
                return Some((slot, j, [caps[0], caps[1]]));
            }
        }
    }
    None
}

/// Cuts a bubble bridge: removes the pants, the bubble circle and its caps,
/// and caps the two freed edges with flat boundary circles. Returns the new
/// graph plus the indices of the two new flat vertices (first the one on the
/// pants slot-0 side).
pub(crate) fn bubble_deassemble(
    g: &DecoratedGraph,
    p: usize,
) -> Result<(DecoratedGraph, Vec<Option<usize>>, (usize, usize)), MoveError> {
    let (neck_slot, j, caps) = bubble_pattern(g, p)
        .ok_or_else(|| MoveError::StaleAnchor("no bubble bridge at this pants vertex".into()))?;
    let side_slots: Vec<usize> = (0..3).filter(|&s| s != neck_slot).collect();
    let (e1, _) = g.edge_at(SlotRef::new(p, side_slots[0])).unwrap();
    let (e2, _) = g.edge_at(SlotRef::new(p, side_slots[1])).unwrap();
    let (neck, _) = g.edge_at(SlotRef::new(p, neck_slot)).unwrap();
    let u = far_end(g, e1, p);
    let v = far_end(g, e2, p);
    let mut dead_e: HashSet<usize> = [e1, e2, neck].into_iter().collect();
    for s in 0..3 {
        dead_e.insert(g.edge_at(SlotRef::new(j, s)).unwrap().0);
    }
    let mut h = g.clone();
    let nb1 = h.add_vertex(VertexKind::B);
    let nb2 = h.add_vertex(VertexKind::B);
    h.add_edge(u, SlotRef::new(nb1, 0), g.edges[e1].decoration);
    h.add_edge(v, SlotRef::new(nb2, 0), g.edges[e2].decoration);
    let dead_v: HashSet<usize> = [p, j, caps[0], caps[1]].into_iter().collect();
    let (out, map) = compact(&h, &dead_v, &dead_e);
    let pair = (map[nb1].unwrap(), map[nb2].unwrap());
    Ok((out, map, pair))
}

/// Splits a three-valent circle whose filling meridian runs parallel to the
/// fibration: the circle is removed and each of its three edges is capped
/// with a disc (double connected sum).
pub(crate) fn scoppia_split(
    g: &DecoratedGraph,
    y: usize,
) -> Result<(DecoratedGraph, Vec<Option<usize>>), MoveError> {
    if g.vertices.get(y) != Some(&VertexKind::Y111) {
        return Err(MoveError::StaleAnchor("scoppia anchor must be a three-valent circle".into()));
    }
    let mut h = g.clone();
    // replace every endpoint at y (self loops get two fresh discs)
    for ei in 0..h.edges.len() {
        for side in 0..2 {
            let s = if side == 0 { h.edges[ei].a } else { h.edges[ei].b };
            if s.vertex == y {
                let d = h.add_vertex(VertexKind::D);
                let ns = SlotRef::new(d, 0);
                if side == 0 {
                    h.edges[ei].a = ns;
                } else {
                    h.edges[ei].b = ns;
                }
            }
        }
    }
    let (out, map) = compact(&h, &[y].into_iter().collect(), &HashSet::new());
    Ok((out, map))
}

/// De-assembles a Moebius or order-3 piece: the piece is replaced by a flat
/// boundary circle, re-appearing as its own block component. Returns the new
/// graph and the two new flat vertices (main side, block side).
pub(crate) fn reduce_singular_boundary(
    g: &DecoratedGraph,
    y: usize,
) -> Result<(DecoratedGraph, Vec<Option<usize>>, (usize, usize), BlockKind), MoveError> {
    let (kind, block) = match g.vertices.get(y) {
        Some(&VertexKind::Y2) => (VertexKind::Y2, BlockKind::M2),
        Some(&VertexKind::Y3) => (VertexKind::Y3, BlockKind::M3),
        _ => return Err(MoveError::StaleAnchor("reduction anchor must be Y2 or Y3".into())),
    };
    let (e, _) = g.edge_at(SlotRef::new(y, 0)).unwrap();
    let u = far_end(g, e, y);
    if g.vertices[u.vertex] == VertexKind::B && vertices_of_component(g, y).len() == 2 {
        return Err(MoveError::StaleAnchor("already a standalone block".into()));
    }
    let mut h = g.clone();
    let b_main = h.add_vertex(VertexKind::B);
    h.add_edge(u, SlotRef::new(b_main, 0), g.edges[e].decoration);
    let y_new = h.add_vertex(kind);
    let b_new = h.add_vertex(VertexKind::B);
    h.add_edge(SlotRef::new(y_new, 0), SlotRef::new(b_new, 0), None);
    let (out, map) =
        compact(&h, &[y].into_iter().collect(), &[e].into_iter().collect());
    let pair = (map[b_main].unwrap(), map[b_new].unwrap());
    Ok((out, map, pair, block))
}

/// Fills the boundary circle at flat vertex `b` with the solid piece
/// D3 x S1, absorbing pieces per the index-dropping rules. Returns the new
/// graph and how many S3 x S1 summands split off.
pub(crate) fn rewrite_fill(
    g: &DecoratedGraph,
    b: usize,
) -> Result<(DecoratedGraph, usize), MoveError> {
    if g.vertices.get(b) != Some(&VertexKind::B) {
        return Err(MoveError::StaleAnchor("fill anchor must be a flat vertex".into()));
    }
    let (e, _) = g.edge_at(SlotRef::new(b, 0)).unwrap();
    let target = far_end(g, e, b);
    let mut h = g.clone();
    let mut dead_v: HashSet<usize> = [b].into_iter().collect();
    let mut dead_e: HashSet<usize> = [e].into_iter().collect();
    let mut s3xs1 = 0usize;
    fill_slot(&mut h, target, &mut dead_v, &mut dead_e, &mut s3xs1)?;
    let (out, _) = compact(&h, &dead_v, &dead_e);
    Ok((out, s3xs1))
}

fn fill_slot(
    h: &mut DecoratedGraph,
    target: SlotRef,
    dead_v: &mut HashSet<usize>,
    dead_e: &mut HashSet<usize>,
    s3xs1: &mut usize,
) -> Result<(), MoveError> {
    match h.vertices[target.vertex] {
        VertexKind::D => {
            // the disc caps the filler: a 0-gleam sphere splits off
            let nd = h.add_vertex(VertexKind::D);
            h.add_edge_int(target, SlotRef::new(nd, 0), 0);
            Ok(())
        }
        VertexKind::P => Err(MoveError::Unsupported(
            "filling a pants boundary leaves a free-group piece outside the block set".into(),
        )),
        VertexKind::Y111 => {
            let v = target.vertex;
            dead_v.insert(v);
            let others: Vec<usize> = (0..3)
                .filter(|&s| s != target.slot)
                .map(|s| h.edge_at(SlotRef::new(v, s)).unwrap().0)
                .collect();
            if others[0] == others[1] {
                return Err(MoveError::Unsupported("filled circle has a self edge".into()));
            }
            let x = far_end(h, others[0], v);
            let y = far_end(h, others[1], v);
            let d = match (h.edges[others[0]].decoration, h.edges[others[1]].decoration) {
                (Some(p), Some(q)) => Some(p + q),
                (None, Some(q)) | (Some(q), None) => Some(q),
                (None, None) => None,
            };
            dead_e.insert(others[0]);
            dead_e.insert(others[1]);
            h.add_edge(x, y, d);
            Ok(())
        }
        VertexKind::Y2 | VertexKind::Y3 => {
            dead_v.insert(target.vertex);
            *s3xs1 += 1;
            Ok(())
        }
        VertexKind::Y12 => {
            let v = target.vertex;
            if target.slot == Y12_UNMARKED {
                // the doubly winding sheet survives as a Moebius piece
                h.vertices[v] = VertexKind::Y2;
                Ok(())
            } else {
                // the filler absorbs the piece and propagates along the
                // singly winding sheet
                dead_v.insert(v);
                let (ue, _) = h.edge_at(SlotRef::new(v, Y12_UNMARKED)).unwrap();
                dead_e.insert(ue);
                let z = far_end(h, ue, v);
                fill_slot(h, z, dead_v, dead_e, s3xs1)
            }
        }
        VertexKind::B => Err(MoveError::Unsupported(
            "filling across a product piece leaves a bare solid block".into(),
        )),
    }
}

/// Fat-leaf sign flip: a +-1 disc leaf over a three-valent circle changes
/// sign and both neighboring decorations compensate by twice the old sign.
pub(crate) fn rewrite_move_leaf1(
    g: &DecoratedGraph,
    leaf: usize,
    j: usize,
) -> Result<DecoratedGraph, MoveError> {
    let (e, _) = g
        .edge_at(SlotRef::new(leaf, 0))
        .ok_or_else(|| MoveError::StaleAnchor("leaf has no edge".into()))?;
    if g.vertices.get(leaf) != Some(&VertexKind::D)
        || g.vertices.get(j) != Some(&VertexKind::Y111)
        || far_end(g, e, leaf).vertex != j
    {
        return Err(MoveError::StaleAnchor("move-leaf anchor must be a disc on a circle".into()));
    }
    let eps = match g.edges[e].decoration {
        Some(d) if d.doubled().abs() == 2 => d.as_int(),
        _ => return Err(MoveError::StaleAnchor("leaf gleam must be +1 or -1".into())),
    };
    let mut h = g.clone();
    h.edges[e].decoration = Some(HalfInt::from_int(-eps));
    for (ei, _) in g.incident(j) {
        if ei == e {
            continue;
        }
        if let Some(d) = h.edges[ei].decoration {
            h.edges[ei].decoration = Some(d + HalfInt::from_int(2 * eps));
        }
    }
    Ok(h)
}

/// The fruit pattern: a Y12 whose doubly winding sheet is capped by a disc
/// with gleam `a` = +-1 and whose singly winding sheet carries the half-odd
/// decoration forced by the section condition (a = -1 with 1/2, a = +1 with
/// -1/2).
pub(crate) fn fruit_state(g: &DecoratedGraph, y: usize) -> Option<(i64, usize, usize)> {
    if g.vertices.get(y) != Some(&VertexKind::Y12) {
        return None;
    }
    let (me, _) = g.edge_at(SlotRef::new(y, Y12_MARKED))?;
    let cap = far_end(g, me, y);
    if g.vertices[cap.vertex] != VertexKind::D {
        return None;
    }
    let a = g.edges[me].decoration?.doubled();
    let (ue, _) = g.edge_at(SlotRef::new(y, Y12_UNMARKED))?;
    let x = g.edges[ue].decoration?.doubled();
    match (a, x) {
        (-2, 1) | (2, -1) => Some((a / 2, me, ue)),
        _ => None,
    }
}

/// Toggles a fruit between its two legal decorations: (a, x) -> (-a, x + a).
pub(crate) fn rewrite_move_fruit(
    g: &DecoratedGraph,
    y: usize,
) -> Result<DecoratedGraph, MoveError> {
    let (a, me, ue) = fruit_state(g, y)
        .ok_or_else(|| MoveError::StaleAnchor("not a fruit in a legal state".into()))?;
    let mut h = g.clone();
    h.edges[me].decoration = Some(HalfInt::from_int(-a));
    h.edges[ue].decoration =
        Some(h.edges[ue].decoration.unwrap() + HalfInt::from_int(a));
    Ok(h)
}

/// The doubled-fruit chain: disc - Y12 - Y12 - disc with the singly winding
/// sheets joined. Returns (y1, y2, cap1, cap2).
pub(crate) fn chain_pattern(g: &DecoratedGraph, y: usize) -> Option<(usize, usize, usize, usize)> {
    if g.vertices.get(y) != Some(&VertexKind::Y12) {
        return None;
    }
    let (me, _) = g.edge_at(SlotRef::new(y, Y12_MARKED))?;
    let c1 = far_end(g, me, y);
    if g.vertices[c1.vertex] != VertexKind::D {
        return None;
    }
    let (ue, _) = g.edge_at(SlotRef::new(y, Y12_UNMARKED))?;
    let other = far_end(g, ue, y);
    if other.vertex == y || !is_unmarked_slot(g, other) {
        return None;
    }
    let y2 = other.vertex;
    let (me2, _) = g.edge_at(SlotRef::new(y2, Y12_MARKED))?;
    let c2 = far_end(g, me2, y2);
    if g.vertices[c2.vertex] != VertexKind::D {
        return None;
    }
    Some((y, y2, c1.vertex, c2.vertex))
}

/// Surgery composite on the doubled-fruit chain: the two projective-plane
/// pieces joined by an annulus become a single projective plane with a
/// bubble on its region.
pub(crate) fn rewrite_chain_surgery(
    g: &DecoratedGraph,
    y: usize,
) -> Result<DecoratedGraph, MoveError> {
    let (y1, y2, c1, c2) = chain_pattern(g, y)
        .ok_or_else(|| MoveError::StaleAnchor("not a doubled-fruit chain".into()))?;
    if vertices_of_component(g, y1).len() != 4 {
        return Err(MoveError::StaleAnchor("chain must be a whole component".into()));
    }
    let dead_v: HashSet<usize> = [y1, y2, c1, c2].into_iter().collect();
    let dead_e: HashSet<usize> = g
        .edges
        .iter()
        .enumerate()
        .filter(|(_, e)| dead_v.contains(&e.a.vertex) || dead_v.contains(&e.b.vertex))
        .map(|(i, _)| i)
        .collect();
    let mut h = g.clone();
    let m = h.add_vertex(VertexKind::Y2);
    let p = h.add_vertex(VertexKind::P);
    let d = h.add_vertex(VertexKind::D);
    let j = h.add_vertex(VertexKind::Y111);
    let cp = h.add_vertex(VertexKind::D);
    let cm = h.add_vertex(VertexKind::D);
    h.add_edge_int(SlotRef::new(m, 0), SlotRef::new(p, 0), 0);
    h.add_edge_int(SlotRef::new(p, 1), SlotRef::new(d, 0), 0);
    h.add_edge_int(SlotRef::new(p, 2), SlotRef::new(j, 0), 0);
    h.add_edge_int(SlotRef::new(j, 1), SlotRef::new(cp, 0), 1);
    h.add_edge_int(SlotRef::new(j, 2), SlotRef::new(cm, 0), -1);
    let (out, _) = compact(&h, &dead_v, &dead_e);
    Ok(out)
}

/// Cuts the tree at an edge over a junction when both sides fill solid tori
/// with section meridians: each side is replaced by the corresponding fat
/// leaf (a disc with the branch torsion as gleam).
pub(crate) fn rewrite_stacca(
    g: &DecoratedGraph,
    v: usize,
    e: usize,
) -> Result<DecoratedGraph, MoveError> {
    let w = far_end(g, e, v).vertex;
    let near_sub = subtree_near_slope(g, v, e)
        .map_err(|err| MoveError::StaleAnchor(format!("subtree slope: {err}")))?;
    let near_main = subtree_near_slope(g, w, e)
        .map_err(|err| MoveError::StaleAnchor(format!("main slope: {err}")))?;
    if near_sub.section.abs() != 1 || near_main.section.abs() != 1 {
        return Err(MoveError::StaleAnchor("cut circle is not section-filled on both sides".into()));
    }
    let q_sub = near_sub.fiber * near_sub.section;
    let q_main = near_main.fiber * near_main.section;
    let sv = if g.edges[e].a.vertex == v { g.edges[e].a } else { g.edges[e].b };
    let sw = if g.edges[e].a.vertex == v { g.edges[e].b } else { g.edges[e].a };
    if is_unmarked_slot(g, sv) || is_unmarked_slot(g, sw) {
        return Err(MoveError::Unsupported("cut edge has odd parity".into()));
    }
    let mut h = g.clone();
    let dm = h.add_vertex(VertexKind::D);
    let ds = h.add_vertex(VertexKind::D);
    h.add_edge_int(sv, SlotRef::new(dm, 0), q_sub);
    h.add_edge_int(sw, SlotRef::new(ds, 0), q_main);
    let (out, _) = compact(&h, &HashSet::new(), &[e].into_iter().collect());
    Ok(out)
}

// ---------------------------------------------------------------------------
// find_moves / apply_move

pub fn find_moves(g: &DecoratedGraph, kinds: &[MoveKind]) -> Vec<MoveInstance> {
    let mut out = Vec::new();
    let comps = g.components();
    let comp_of = |v: usize| comps.iter().position(|c| c.contains(&v)).unwrap();
    for &kind in kinds {
        match kind {
            MoveKind::Sum => {
                let ds: Vec<usize> = (0..g.vertices.len())
                    .filter(|&v| g.vertices[v] == VertexKind::D)
                    .collect();
                for (i, &d1) in ds.iter().enumerate() {
                    for &d2 in &ds[i + 1..] {
                        if comp_of(d1) != comp_of(d2) {
                            out.push(MoveInstance {
                                kind,
                                vertices: vec![d1, d2],
                                edges: vec![],
                                params: vec![],
                            });
                        }
                    }
                }
            }
            MoveKind::Assemble => {
                let bs: Vec<usize> = (0..g.vertices.len())
                    .filter(|&v| g.vertices[v] == VertexKind::B)
                    .collect();
                for (i, &b1) in bs.iter().enumerate() {
                    for &b2 in &bs[i + 1..] {
                        let (e1, _) = g.edge_at(SlotRef::new(b1, 0)).unwrap();
                        let (e2, _) = g.edge_at(SlotRef::new(b2, 0)).unwrap();
                        if e1 != e2 {
                            out.push(MoveInstance {
                                kind,
                                vertices: vec![b1, b2],
                                edges: vec![],
                                params: vec![],
                            });
                        }
                    }
                }
            }
            MoveKind::Fill => {
                for v in 0..g.vertices.len() {
                    if g.vertices[v] != VertexKind::B {
                        continue;
                    }
                    if rewrite_fill(g, v).is_ok() {
                        out.push(MoveInstance { kind, vertices: vec![v], edges: vec![], params: vec![] });
                    }
                }
            }
            MoveKind::Bubble => {
                for e in 0..g.edges.len() {
                    if bubble_insert(g, e).is_ok() {
                        out.push(MoveInstance { kind, vertices: vec![], edges: vec![e], params: vec![] });
                    }
                }
            }
            MoveKind::VerticalCut => {
                for v in 0..g.vertices.len() {
                    if bubble_pattern(g, v).is_some() {
                        out.push(MoveInstance { kind, vertices: vec![v], edges: vec![], params: vec![] });
                    }
                }
            }
            MoveKind::Scoppia => {
                for v in 0..g.vertices.len() {
                    if g.vertices[v] != VertexKind::Y111 {
                        continue;
                    }
                    for (e, _) in g.incident(v) {
                        match subtree_near_slope(g, v, e) {
                            Ok(s) if s.fiber == 0 => {
                                out.push(MoveInstance {
                                    kind,
                                    vertices: vec![v],
                                    edges: vec![e],
                                    params: vec![],
                                });
                                break;
                            }
                            Err(SlopeError::FiberBounds) => {
                                // an inner circle splits first; skip here
                            }
                            _ => {}
                        }
                    }
                }
            }
            MoveKind::Reduction(k @ (1 | 2)) => {
                let want = if k == 1 { VertexKind::Y2 } else { VertexKind::Y3 };
                for v in 0..g.vertices.len() {
                    if g.vertices[v] == want && reduce_singular_boundary(g, v).is_ok() {
                        out.push(MoveInstance { kind, vertices: vec![v], edges: vec![], params: vec![] });
                    }
                }
            }
            MoveKind::MoveLeaf1 => {
                for v in 0..g.vertices.len() {
                    if g.vertices[v] != VertexKind::D {
                        continue;
                    }
                    let (e, _) = g.edge_at(SlotRef::new(v, 0)).unwrap();
                    let far = far_end(g, e, v);
                    if far.vertex != v
                        && g.vertices[far.vertex] == VertexKind::Y111
                        && matches!(g.edges[e].decoration, Some(d) if d.doubled().abs() == 2)
                    {
                        let eps = g.edges[e].decoration.unwrap().as_int();
                        out.push(MoveInstance {
                            kind,
                            vertices: vec![v, far.vertex],
                            edges: vec![e],
                            params: vec![eps],
                        });
                    }
                }
            }
            MoveKind::MoveFruit => {
                for v in 0..g.vertices.len() {
                    if let Some((a, _, _)) = fruit_state(g, v) {
                        out.push(MoveInstance { kind, vertices: vec![v], edges: vec![], params: vec![a] });
                    }
                }
            }
            MoveKind::Elimina5a | MoveKind::Elimina5b => {
                for v in 0..g.vertices.len() {
                    if let Some((y1, y2, c1, _)) = chain_pattern(g, v) {
                        if y1 > y2 || vertices_of_component(g, v).len() != 4 {
                            continue;
                        }
                        let cap_edge = g.edge_at(SlotRef::new(c1, 0)).unwrap().0;
                        let cap = g.edges[cap_edge].decoration.unwrap().doubled();
                        let is_a = cap >= 0;
                        if (kind == MoveKind::Elimina5a) == is_a {
                            out.push(MoveInstance { kind, vertices: vec![v], edges: vec![], params: vec![] });
                        }
                    }
                }
            }
            MoveKind::StaccaCut => {
                for v in 0..g.vertices.len() {
                    if g.vertices[v] != VertexKind::Y111 {
                        continue;
                    }
                    for (e, _) in g.incident(v) {
                        if subtree_vertices(g, v, e).len() < 2 {
                            continue;
                        }
                        let w = far_end(g, e, v).vertex;
                        let ok = matches!(subtree_near_slope(g, v, e), Ok(s) if s.section.abs() == 1)
                            && matches!(subtree_near_slope(g, w, e), Ok(s) if s.section.abs() == 1);
                        if ok {
                            out.push(MoveInstance { kind, vertices: vec![v], edges: vec![e], params: vec![] });
                        }
                    }
                }
            }
            MoveKind::Simplify(18) => {
                for c in &comps {
                    if let Some(n) = sphere_component(g, c) {
                        if n == 0 {
                            out.push(MoveInstance {
                                kind,
                                vertices: c.clone(),
                                edges: vec![],
                                params: vec![0],
                            });
                        }
                    }
                }
            }
            MoveKind::Simplify(19) => {
                for c in &comps {
                    if let Some(n) = sphere_component(g, c) {
                        if n.abs() == 1 {
                            out.push(MoveInstance {
                                kind,
                                vertices: c.clone(),
                                edges: vec![],
                                params: vec![n],
                            });
                        }
                    }
                }
            }
            _ => {}
        }
    }
    out
}

/// A two-disc component: returns its gleam.
pub(crate) fn sphere_component(g: &DecoratedGraph, comp: &[usize]) -> Option<i64> {
    if comp.len() != 2
        || comp.iter().any(|&v| g.vertices[v] != VertexKind::D)
    {
        return None;
    }
    let (e, _) = g.edge_at(SlotRef::new(comp[0], 0))?;
    let d = g.edges[e].decoration?;
    if d.is_integer() {
        Some(d.as_int())
    } else {
        None
    }
}

pub fn apply_move(
    g: &DecoratedGraph,
    inst: &MoveInstance,
) -> Result<(DecoratedGraph, LedgerEvent), MoveError> {
    match inst.kind {
        MoveKind::Sum => {
            let out = rewrite_sum(g, inst.vertices[0], inst.vertices[1])?;
            Ok((out, LedgerEvent::ConnectedSumSplit { components: 2 }))
        }
        MoveKind::Assemble => {
            let out = rewrite_assemble(g, inst.vertices[0], inst.vertices[1])?;
            Ok((out, LedgerEvent::SameBlock))
        }
        MoveKind::Fill => {
            let (out, s3) = rewrite_fill(g, inst.vertices[0])?;
            Ok((out, LedgerEvent::Filled { s3xs1: s3 }))
        }
        MoveKind::Bubble => {
            let out = bubble_insert(g, inst.edges[0])?;
            Ok((out, LedgerEvent::SameBlock))
        }
        MoveKind::VerticalCut => {
            let (out, _, _) = bubble_deassemble(g, inst.vertices[0])?;
            Ok((out, LedgerEvent::Deassembled { block: None }))
        }
        MoveKind::Scoppia | MoveKind::HorizontalCut => {
            let (out, _) = scoppia_split(g, inst.vertices[0])?;
            Ok((out, LedgerEvent::ConnectedSumSplit { components: 3 }))
        }
        MoveKind::Reduction(1 | 2) => {
            let (out, _, _, block) = reduce_singular_boundary(g, inst.vertices[0])?;
            Ok((out, LedgerEvent::Deassembled { block: Some(block) }))
        }
        MoveKind::MoveLeaf1 => {
            let out = rewrite_move_leaf1(g, inst.vertices[0], inst.vertices[1])?;
            Ok((out, LedgerEvent::SameBlock))
        }
        MoveKind::MoveFruit => {
            let out = rewrite_move_fruit(g, inst.vertices[0])?;
            Ok((out, LedgerEvent::SameBlock))
        }
        MoveKind::Elimina5a | MoveKind::Elimina5b => {
            let out = rewrite_chain_surgery(g, inst.vertices[0])?;
            Ok((out, LedgerEvent::SurgeryPerformed))
        }
        MoveKind::StaccaCut => {
            let out = rewrite_stacca(g, inst.vertices[0], inst.edges[0])?;
            Ok((out, LedgerEvent::ConnectedSumSplit { components: 2 }))
        }
        MoveKind::Simplify(k @ (18 | 19)) => {
            let dead_v: HashSet<usize> = inst.vertices.iter().copied().collect();
            let dead_e: HashSet<usize> = g
                .edges
                .iter()
                .enumerate()
                .filter(|(_, e)| dead_v.contains(&e.a.vertex))
                .map(|(i, _)| i)
                .collect();
            let (out, _) = compact(g, &dead_v, &dead_e);
            let case = if k == 18 {
                BaseCaseKind::S4
            } else if inst.params[0] > 0 {
                BaseCaseKind::Cp2Plus
            } else {
                BaseCaseKind::Cp2Minus
            };
            Ok((out, LedgerEvent::BaseCase(case)))
        }
        other => Err(MoveError::Unsupported(format!(
            "{:?} is catalogued but has no graph-level rewrite",
            other
        ))),
    }
}

// ---------------------------------------------------------------------------
// doubles

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum DoubleError {
    #[error("input has boundary")]
    HasBoundary,
    #[error("input carries decorations")]
    Decorated,
    #[error("edge {0} is odd: its region cannot be gleam-free")]
    OddEdge(usize),
}

/// Shadow of the double of the gleam-free thickening: every decoration is
/// set to zero and one bubble is inserted on an edge of each region.
pub fn double_with_bubbles(g: &DecoratedGraph) -> Result<DecoratedGraph, DoubleError> {
    if !g.is_closed() {
        return Err(DoubleError::HasBoundary);
    }
    for (ei, e) in g.edges.iter().enumerate() {
        if let Some(d) = e.decoration {
            if d != HalfInt::ZERO {
                return Err(DoubleError::Decorated);
            }
        }
        if crate::graph::Parity::Odd == g.edge_parity(ei) {
            return Err(DoubleError::OddEdge(ei));
        }
        let _ = e;
    }
    let mut h = g.clone();
    for e in h.edges.iter_mut() {
        e.decoration = Some(HalfInt::ZERO);
    }
    let reps: Vec<usize> = crate::graph::regions(&h).iter().map(|r| r.edges[0]).collect();
    for e in reps {
        // bubble_insert keeps existing edge indices stable
        h = bubble_insert(&h, e).expect("bubble insertion on a decorated closed edge");
    }
    Ok(h)
}

// ---------------------------------------------------------------------------
// fuzzing

use crate::decomp::{Decomposition, Port};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum PieceKind {
    Block(BlockKind),
    Sphere(i64),
}

impl PieceKind {
    fn vertex_cost(self) -> usize {
        match self {
            PieceKind::Block(BlockKind::N1 | BlockKind::N2 | BlockKind::M2 | BlockKind::M3) => 2,
            PieceKind::Block(BlockKind::M12) => 3,
            PieceKind::Block(BlockKind::N3 | BlockKind::M111) => 4,
            PieceKind::Sphere(_) => 2,
        }
    }
}

/// Generates a graph whose decomposition is known by construction: base
/// block graphs joined by assembly bridges, plus gleamed spheres joined by
/// connected sums. At most 15 vertices.
pub fn fuzz_block(seed: u64, size: usize) -> (DecoratedGraph, Decomposition) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let catalog = [
        PieceKind::Block(BlockKind::N1),
        PieceKind::Block(BlockKind::N2),
        PieceKind::Block(BlockKind::N3),
        PieceKind::Block(BlockKind::M2),
        PieceKind::Block(BlockKind::M111),
        PieceKind::Block(BlockKind::M12),
        PieceKind::Block(BlockKind::M3),
        PieceKind::Sphere(0),
        PieceKind::Sphere(1),
        PieceKind::Sphere(-1),
    ];
    let mut budget: i64 = 15;
    let target = size.clamp(1, 4);
    let mut pieces: Vec<PieceKind> = Vec::new();
    while pieces.len() < target {
        let p = catalog[rng.gen_range(0..catalog.len())];
        if budget - p.vertex_cost() as i64 >= 0 {
            budget -= p.vertex_cost() as i64;
            pieces.push(p);
        } else {
            break;
        }
    }
    if pieces.is_empty() {
        pieces.push(PieceKind::Sphere(0));
        budget -= 2;
    }

    // plan assemblies between block ports of different pieces (each bridge
    // costs 4 vertices)
    let mut open_ports: Vec<(usize, usize)> = Vec::new(); // (piece, slot)
    for (pi, p) in pieces.iter().enumerate() {
        if let PieceKind::Block(b) = p {
            for s in 0..b.slots() {
                open_ports.push((pi, s));
            }
        }
    }
    let mut planned_asm: Vec<((usize, usize), (usize, usize))> = Vec::new();
    let n_asm = rng.gen_range(0..=2usize);
    for _ in 0..n_asm {
        if budget < 4 {
            break;
        }
        // pick two open ports on different pieces
        let mut choices = Vec::new();
        for (i, &a) in open_ports.iter().enumerate() {
            for (j, &b) in open_ports.iter().enumerate() {
                if i < j && a.0 != b.0 {
                    choices.push((i, j));
                }
            }
        }
        if choices.is_empty() {
            break;
        }
        let (i, j) = choices[rng.gen_range(0..choices.len())];
        let (pa, pb) = (open_ports[i], open_ports[j]);
        open_ports.remove(j);
        open_ports.remove(i);
        planned_asm.push((pa, pb));
        budget -= 4;
    }

    // plan sums between sphere ends (each sphere has two disc ends; sums
    // keep the vertex count, so no budget change); keep the sum graph a
    // forest by only joining distinct sum components
    let sphere_ids: Vec<usize> = pieces
        .iter()
        .enumerate()
        .filter(|(_, p)| matches!(p, PieceKind::Sphere(_)))
        .map(|(i, _)| i)
        .collect();
    let mut ends: Vec<usize> = sphere_ids.iter().map(|_| 2usize).collect();
    let mut sum_comp: Vec<usize> = (0..sphere_ids.len()).collect();
    let mut planned_sums: Vec<(usize, usize)> = Vec::new(); // indices into sphere_ids
    let n_sums = if sphere_ids.len() >= 2 { rng.gen_range(0..sphere_ids.len()) } else { 0 };
    for _ in 0..n_sums {
        let mut choices = Vec::new();
        for i in 0..sphere_ids.len() {
            for j in 0..sphere_ids.len() {
                if i < j && ends[i] > 0 && ends[j] > 0 && sum_comp[i] != sum_comp[j] {
                    choices.push((i, j));
                }
            }
        }
        if choices.is_empty() {
            break;
        }
        let (i, j) = choices[rng.gen_range(0..choices.len())];
        ends[i] -= 1;
        ends[j] -= 1;
        let (ci, cj) = (sum_comp[i], sum_comp[j]);
        for c in sum_comp.iter_mut() {
            if *c == cj {
                *c = ci;
            }
        }
        planned_sums.push((i, j));
    }

    // ---- emission ----
    let mut g = DecoratedGraph::new();
    let mut expected = Decomposition::new();
    expected.trace.push(format!("fuzz seed={seed} size={size}"));

    // bridges first: each planned assembly gets a pants + bubble, exposing
    // two free pants slots
    let mut bridge_slots: Vec<(SlotRef, SlotRef)> = Vec::new();
    for _ in &planned_asm {
        let p = g.add_vertex(VertexKind::P);
        let j = g.add_vertex(VertexKind::Y111);
        let cp = g.add_vertex(VertexKind::D);
        let cm = g.add_vertex(VertexKind::D);
        g.add_edge_int(SlotRef::new(p, 2), SlotRef::new(j, 0), 0);
        g.add_edge_int(SlotRef::new(j, 1), SlotRef::new(cp, 0), 1);
        g.add_edge_int(SlotRef::new(j, 2), SlotRef::new(cm, 0), -1);
        bridge_slots.push((SlotRef::new(p, 0), SlotRef::new(p, 1)));
    }
    // port target: bridge slot or fresh flat vertex
    let mut port_target: std::collections::HashMap<(usize, usize), SlotRef> = Default::default();
    for (bi, &(pa, pb)) in planned_asm.iter().enumerate() {
        port_target.insert(pa, bridge_slots[bi].0);
        port_target.insert(pb, bridge_slots[bi].1);
    }

    let mut block_index: std::collections::HashMap<usize, usize> = Default::default();
    for (pi, piece) in pieces.iter().enumerate() {
        match piece {
            PieceKind::Block(bk) => {
                let bi = expected.add_block(*bk);
                block_index.insert(pi, bi);
                let target = |g: &mut DecoratedGraph, slot: usize| -> (SlotRef, bool) {
                    match port_target.get(&(pi, slot)) {
                        Some(&s) => (s, true),
                        None => {
                            let b = g.add_vertex(VertexKind::B);
                            (SlotRef::new(b, 0), false)
                        }
                    }
                };
                match bk {
                    BlockKind::N1 => {
                        let d = g.add_vertex(VertexKind::D);
                        let (t, wired) = target(&mut g, 0);
                        let deco = if wired { Some(HalfInt::ZERO) } else { None };
                        g.add_edge(SlotRef::new(d, 0), t, deco);
                    }
                    BlockKind::N2 => {
                        let (t0, w0) = target(&mut g, 0);
                        let (t1, w1) = target(&mut g, 1);
                        let deco = if w0 && w1 { Some(HalfInt::ZERO) } else { None };
                        g.add_edge(t0, t1, deco);
                    }
                    BlockKind::N3 | BlockKind::M111 => {
                        let core = g.add_vertex(if *bk == BlockKind::N3 {
                            VertexKind::P
                        } else {
                            VertexKind::Y111
                        });
                        for s in 0..3 {
                            let (t, wired) = target(&mut g, s);
                            let deco = if wired { Some(HalfInt::ZERO) } else { None };
                            g.add_edge(SlotRef::new(core, s), t, deco);
                        }
                    }
                    BlockKind::M2 | BlockKind::M3 => {
                        let core = g.add_vertex(if *bk == BlockKind::M2 {
                            VertexKind::Y2
                        } else {
                            VertexKind::Y3
                        });
                        let (t, wired) = target(&mut g, 0);
                        let deco = if wired { Some(HalfInt::ZERO) } else { None };
                        g.add_edge(SlotRef::new(core, 0), t, deco);
                    }
                    BlockKind::M12 => {
                        let core = g.add_vertex(VertexKind::Y12);
                        for s in [Y12_MARKED, Y12_UNMARKED] {
                            let (t, wired) = target(&mut g, s);
                            let deco = if wired {
                                // odd edge off the singly winding sheet
                                Some(if s == Y12_UNMARKED {
                                    HalfInt::from_doubled(1)
                                } else {
                                    HalfInt::ZERO
                                })
                            } else {
                                None
                            };
                            g.add_edge(SlotRef::new(core, s), t, deco);
                        }
                    }
                }
            }
            PieceKind::Sphere(_) => {}
        }
    }
    for &(pa, pb) in &planned_asm {
        expected.assemblies.push((
            Port { block: block_index[&pa.0], slot: pa.1 },
            Port { block: block_index[&pb.0], slot: pb.1 },
        ));
    }

    // spheres: emit each sum component as a path of discs joined through
    // three-valent circles with 0-gleam disc leaves
    let mut comp_members: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for (si, &c) in sum_comp.iter().enumerate() {
        comp_members.entry(c).or_default().push(si);
    }
    for (_, members) in comp_members {
        // order members into a path using planned_sums adjacency (forest of
        // max-degree-2 vertices = disjoint paths)
        let mut order = vec![members[0]];
        loop {
            let mut advanced = false;
            let last = *order.last().unwrap();
            for &(i, j) in &planned_sums {
                let next = if i == last { j } else if j == last { i } else { continue };
                if !order.contains(&next) {
                    order.push(next);
                    advanced = true;
                    break;
                }
            }
            let first = order[0];
            for &(i, j) in &planned_sums {
                let prev = if i == first { j } else if j == first { i } else { continue };
                if !order.contains(&prev) {
                    order.insert(0, prev);
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                break;
            }
        }
        let gleam_of = |si: usize| -> i64 {
            match pieces[sphere_ids[si]] {
                PieceKind::Sphere(n) => n,
                _ => unreachable!(),
            }
        };
        // record summands
        for &si in &order {
            match gleam_of(si) {
                0 => expected.s4 += 1,
                1 => expected.cp2_plus += 1,
                -1 => expected.cp2_minus += 1,
                _ => unreachable!(),
            }
        }
        // emit the path: D - (n1) - J - (n2) - J - ... - (nk) - D
        let start = g.add_vertex(VertexKind::D);
        let mut prev = SlotRef::new(start, 0);
        for (k, &si) in order.iter().enumerate() {
            let n = gleam_of(si);
            if k + 1 < order.len() {
                let j = g.add_vertex(VertexKind::Y111);
                let l = g.add_vertex(VertexKind::D);
                g.add_edge_int(prev, SlotRef::new(j, 0), n);
                g.add_edge_int(SlotRef::new(j, 2), SlotRef::new(l, 0), 0);
                prev = SlotRef::new(j, 1);
            } else {
                let end = g.add_vertex(VertexKind::D);
                g.add_edge_int(prev, SlotRef::new(end, 0), n);
            }
        }
    }

    debug_assert!(g.validate().is_ok());
    (g, expected)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::{boundary_h1, is_candidate_shadow, CandidateResult};
    use crate::graph::builders;
    use num_bigint::BigInt;

    fn h1_order(g: &DecoratedGraph) -> BigInt {
        let h = boundary_h1(g);
        assert_eq!(h.rank, 0, "expected finite boundary homology");
        h.torsion_order()
    }

    /// Plumbing caterpillar: line decorations with +1 leaves at junctions.
    fn caterpillar(seq: &[i64]) -> DecoratedGraph {
        let mut g = DecoratedGraph::new();
        let n = seq.len();
        assert!(n >= 1);
        let start = g.add_vertex(VertexKind::D);
        let mut prev = SlotRef::new(start, 0);
        for (i, &e) in seq.iter().enumerate() {
            let left = if i == 0 { 0 } else { 1 };
            let right = if i == n - 1 { 0 } else { 1 };
            let a = e - left - right;
            if i + 1 < n {
                let j = g.add_vertex(VertexKind::Y111);
                let l = g.add_vertex(VertexKind::D);
                g.add_edge_int(prev, SlotRef::new(j, 0), a);
                g.add_edge_int(SlotRef::new(j, 2), SlotRef::new(l, 0), 1);
                prev = SlotRef::new(j, 1);
            } else {
                let end = g.add_vertex(VertexKind::D);
                g.add_edge_int(prev, SlotRef::new(end, 0), a);
            }
        }
        g
    }

    #[test]
    fn sum_preserves_homology_and_candidacy() {
        // CP2 # CP2bar built from two gleamed spheres
        let mut g = builders::sphere(1);
        let other = builders::sphere(-1);
        let off = g.vertices.len();
        for k in other.vertices {
            g.add_vertex(k);
        }
        for e in other.edges {
            g.edges.push(Edge {
                a: SlotRef::new(e.a.vertex + off, e.a.slot),
                b: SlotRef::new(e.b.vertex + off, e.b.slot),
                decoration: e.decoration,
                reversed: e.reversed,
            });
        }
        let insts = find_moves(&g, &[MoveKind::Sum]);
        assert_eq!(insts.len(), 4); // 2 discs x 2 discs across components
        let (sum, ev) = apply_move(&g, &insts[0]).unwrap();
        assert_eq!(ev, LedgerEvent::ConnectedSumSplit { components: 2 });
        sum.validate().unwrap();
        assert!(boundary_h1(&sum).is_trivial());
        assert_eq!(is_candidate_shadow(&sum), CandidateResult::Yes { h: 0 });
        assert!(crate::cw::homology(&sum, crate::cw::Coefficients::Integers)[1].is_trivial());
        // the sum junction now splits: fiber-parallel filling at the 0-leaf
        let scop = find_moves(&sum, &[MoveKind::Scoppia]);
        assert_eq!(scop.len(), 1);
        let (split, _) = apply_move(&sum, &scop[0]).unwrap();
        split.validate().unwrap();
        let spheres: Vec<i64> = split
            .components()
            .iter()
            .filter_map(|c| sphere_component(&split, c))
            .collect();
        let mut s = spheres.clone();
        s.sort();
        assert_eq!(s, vec![-1, 0, 1]); // the capped 0-leaf is a neutral sphere
    }

    #[test]
    fn assemble_two_discs_gives_sphere_bundle_shadow() {
        let mut g = builders::disc();
        let other = builders::disc();
        let off = g.vertices.len();
        for k in other.vertices {
            g.add_vertex(k);
        }
        for e in other.edges {
            g.edges.push(Edge {
                a: SlotRef::new(e.a.vertex + off, e.a.slot),
                b: SlotRef::new(e.b.vertex + off, e.b.slot),
                decoration: e.decoration,
                reversed: e.reversed,
            });
        }
        let insts = find_moves(&g, &[MoveKind::Assemble]);
        assert_eq!(insts.len(), 1);
        let (asm, ev) = apply_move(&g, &insts[0]).unwrap();
        assert_eq!(ev, LedgerEvent::SameBlock);
        asm.validate().unwrap();
        assert!(asm.is_closed());
        // chi(X) = 3, boundary S3 (h = 0), so chi(M) = 4
        assert_eq!(asm.euler_char(), 3);
        assert_eq!(is_candidate_shadow(&asm), CandidateResult::Yes { h: 0 });
        // and the bridge is found and cut again
        let cuts = find_moves(&asm, &[MoveKind::VerticalCut]);
        assert_eq!(cuts.len(), 1);
        let (cut, _) = apply_move(&asm, &cuts[0]).unwrap();
        cut.validate().unwrap();
        assert_eq!(cut.components().len(), 2);
        assert_eq!(cut.vertices.iter().filter(|&&k| k == VertexKind::B).count(), 2);
    }

    #[test]
    fn fill_rules() {
        // disc block: fill gives the 0-gleam sphere
        let g = builders::disc();
        let b = g.vertices.iter().position(|&k| k == VertexKind::B).unwrap();
        let (f, s3) = rewrite_fill(&g, b).unwrap();
        assert_eq!(s3, 0);
        assert_eq!(sphere_component(&f, &[0, 1]), Some(0));

        // three-valent block: filling one boundary merges the other two
        let g = builders::y111_block();
        let b = g.vertices.iter().position(|&k| k == VertexKind::B).unwrap();
        let (f, s3) = rewrite_fill(&g, b).unwrap();
        assert_eq!(s3, 0);
        f.validate().unwrap();
        assert_eq!(f.vertices, vec![VertexKind::B, VertexKind::B]);
        assert_eq!(f.edges.len(), 1);

        // Y12 block: filling the unmarked side leaves the Moebius block
        let g = builders::y12_block();
        let b = {
            let y = g.vertices.iter().position(|&k| k == VertexKind::Y12).unwrap();
            let (e, _) = g.edge_at(SlotRef::new(y, Y12_UNMARKED)).unwrap();
            far_end(&g, e, y).vertex
        };
        let (f, s3) = rewrite_fill(&g, b).unwrap();
        assert_eq!(s3, 0);
        f.validate().unwrap();
        assert!(f.vertices.contains(&VertexKind::Y2));

        // Moebius block: filling closes off S3 x S1
        let g = builders::moebius_block();
        let b = g.vertices.iter().position(|&k| k == VertexKind::B).unwrap();
        let (f, s3) = rewrite_fill(&g, b).unwrap();
        assert_eq!(s3, 1);
        assert!(f.vertices.is_empty());

        // pants block: not representable
        let g = builders::pants_block();
        let b = g.vertices.iter().position(|&k| k == VertexKind::B).unwrap();
        assert!(matches!(rewrite_fill(&g, b), Err(MoveError::Unsupported(_))));
    }

    #[test]
    fn move_leaf_preserves_boundary() {
        for seq in [vec![2, 3], vec![-1, 4], vec![3, 0, 2], vec![2, 2, 2]] {
            let g = caterpillar(&seq);
            let insts = find_moves(&g, &[MoveKind::MoveLeaf1]);
            assert!(!insts.is_empty());
            let before = boundary_h1(&g);
            for inst in insts {
                let (h, ev) = apply_move(&g, &inst).unwrap();
                assert_eq!(ev, LedgerEvent::SameBlock);
                h.validate().unwrap();
                assert_eq!(boundary_h1(&h), before, "seq {:?} inst {:?}", seq, inst);
            }
        }
    }

    #[test]
    fn move_fruit_toggles_between_legal_states() {
        // fruit hanging off a junction line, closed with a disc
        let mut g = DecoratedGraph::new();
        let d = g.add_vertex(VertexKind::D);
        let y = g.add_vertex(VertexKind::Y12);
        let cap = g.add_vertex(VertexKind::D);
        g.add_edge(SlotRef::new(d, 0), SlotRef::new(y, Y12_UNMARKED), Some(HalfInt::from_doubled(1)));
        g.add_edge_int(SlotRef::new(y, Y12_MARKED), SlotRef::new(cap, 0), -1);
        g.validate().unwrap();
        let before = boundary_h1(&g);
        let insts = find_moves(&g, &[MoveKind::MoveFruit]);
        assert_eq!(insts.len(), 1);
        let (h, _) = apply_move(&g, &insts[0]).unwrap();
        h.validate().unwrap();
        assert_eq!(boundary_h1(&h), before);
        // decorations are now the mirror state (+1, -1/2)
        let me = h.edge_at(SlotRef::new(y, Y12_MARKED)).unwrap().0;
        let ue = h.edge_at(SlotRef::new(y, Y12_UNMARKED)).unwrap().0;
        assert_eq!(h.edges[me].decoration, Some(HalfInt::from_int(1)));
        assert_eq!(h.edges[ue].decoration, Some(HalfInt::from_doubled(-1)));
        // and toggling back is the identity on decorations
        let insts2 = find_moves(&h, &[MoveKind::MoveFruit]);
        let (back, _) = apply_move(&h, &insts2[0]).unwrap();
        assert_eq!(back.edges[me].decoration, g.edges[me].decoration);
        assert_eq!(back.edges[ue].decoration, g.edges[ue].decoration);
    }

    #[test]
    fn stacca_cut_is_multiplicative_on_chains() {
        for seq in [vec![2, 3, 4], vec![3, -2, 5], vec![2, 3, 2, 3]] {
            let g = caterpillar(&seq);
            let total = h1_order(&g);
            let insts = find_moves(&g, &[MoveKind::StaccaCut]);
            for inst in insts {
                let (h, _) = apply_move(&g, &inst).unwrap();
                h.validate().unwrap();
                let comps = h.components();
                assert_eq!(comps.len(), 2, "seq {:?}", seq);
                let mut product = BigInt::from(1);
                for c in comps {
                    let sub = h.induced(&c);
                    product *= h1_order(&sub);
                }
                assert_eq!(product, total, "seq {:?} inst {:?}", seq, inst);
            }
        }
    }

    #[test]
    fn reduction_detaches_moebius_block() {
        // Moebius piece glued to a disc through a gleam: reduces to the
        // standalone Moebius block plus a disc block
        let mut g = DecoratedGraph::new();
        let y = g.add_vertex(VertexKind::Y2);
        let d = g.add_vertex(VertexKind::D);
        g.add_edge_int(SlotRef::new(y, 0), SlotRef::new(d, 0), 3);
        let insts = find_moves(&g, &[MoveKind::Reduction(1)]);
        assert_eq!(insts.len(), 1);
        let (h, ev) = apply_move(&g, &insts[0]).unwrap();
        assert_eq!(ev, LedgerEvent::Deassembled { block: Some(BlockKind::M2) });
        h.validate().unwrap();
        assert_eq!(h.components().len(), 2);
        // the standalone block is not an anchor
        assert!(find_moves(&builders::moebius_block(), &[MoveKind::Reduction(1)]).is_empty());
    }

    #[test]
    fn chain_surgery_preserves_boundary_group() {
        // decoration search: integer marked caps and joining gleam with
        // boundary a single S2 x S1
        let mut found = None;
        'outer: for m1 in -2..=2i64 {
            for x in -2..=2i64 {
                for m2 in -2..=2i64 {
                    let mut g = DecoratedGraph::new();
                    let d1 = g.add_vertex(VertexKind::D);
                    let y1 = g.add_vertex(VertexKind::Y12);
                    let y2 = g.add_vertex(VertexKind::Y12);
                    let d2 = g.add_vertex(VertexKind::D);
                    g.add_edge_int(SlotRef::new(d1, 0), SlotRef::new(y1, Y12_MARKED), m1);
                    g.add_edge_int(
                        SlotRef::new(y1, Y12_UNMARKED),
                        SlotRef::new(y2, Y12_UNMARKED),
                        x,
                    );
                    g.add_edge_int(SlotRef::new(y2, Y12_MARKED), SlotRef::new(d2, 0), m2);
                    g.validate().unwrap();
                    let h = boundary_h1(&g);
                    if h.is_free() && h.rank == 1 {
                        found = Some(g);
                        break 'outer;
                    }
                }
            }
        }
        let g = found.expect("some doubled-fruit chain has S2 x S1 boundary");
        let before = boundary_h1(&g);
        let insts = find_moves(&g, &[MoveKind::Elimina5a, MoveKind::Elimina5b]);
        assert_eq!(insts.len(), 1);
        let (h, ev) = apply_move(&g, &insts[0]).unwrap();
        assert_eq!(ev, LedgerEvent::SurgeryPerformed);
        h.validate().unwrap();
        assert_eq!(boundary_h1(&h), before);
        // result contains the Moebius piece plus a bubble bridge
        assert!(h.vertices.contains(&VertexKind::Y2));
        assert_eq!(find_moves(&h, &[MoveKind::VerticalCut]).len(), 1);
    }

    #[test]
    fn doubles_are_candidates() {
        // sphere
        let mut raw = DecoratedGraph::new();
        let a = raw.add_vertex(VertexKind::D);
        let b = raw.add_vertex(VertexKind::D);
        raw.add_edge(SlotRef::new(a, 0), SlotRef::new(b, 0), Some(HalfInt::ZERO));
        let d = double_with_bubbles(&raw).unwrap();
        d.validate().unwrap();
        assert_eq!(is_candidate_shadow(&d), CandidateResult::Yes { h: 0 });
        assert_eq!(d.euler_char(), 3); // each bubble adds one to chi(X)

        // three-valent circle with three discs: 3 regions, 3 bubbles
        let mut raw = DecoratedGraph::new();
        let y = raw.add_vertex(VertexKind::Y111);
        for s in 0..3 {
            let dd = raw.add_vertex(VertexKind::D);
            raw.add_edge(SlotRef::new(y, s), SlotRef::new(dd, 0), Some(HalfInt::ZERO));
        }
        let d = double_with_bubbles(&raw).unwrap();
        d.validate().unwrap();
        let cand = is_candidate_shadow(&d);
        // chi(X) = 3, doubled manifold chi = 6 = chi(X_d) - h + 1
        assert_eq!(d.euler_char(), 6);
        assert_eq!(cand, CandidateResult::Yes { h: 1 });
    }

    #[test]
    fn fuzz_outputs_validate() {
        for seed in 0..40u64 {
            let (g, expected) = fuzz_block(seed, 1 + (seed % 4) as usize);
            g.validate().unwrap_or_else(|e| panic!("seed {seed}: {e}"));
            assert!(g.vertices.len() <= 15, "seed {seed}");
            assert!(
                matches!(is_candidate_shadow(&g), CandidateResult::Yes { .. }),
                "seed {seed}"
            );
            // construction record is internally consistent
            let _ = expected.euler();
            let _ = expected.h1();
        }
    }
}
