//! Decorated graphs encoding vertex-free shadowed polyhedra.
//!
//! Vertices are elementary pieces (flat boundary circles, fat discs, pants,
//! Moebius bands and the three kinds of singular circles), each carrying a
//! fixed number of slots. Every slot is filled by exactly one edge endpoint;
//! self edges and parallel edges are allowed. Edges optionally carry a
//! half-integer decoration (gleam contribution).

use crate::halfint::HalfInt;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use thiserror::Error;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum VertexKind {
    /// Flat boundary circle.
    B,
    /// Fat vertex: disc.
    D,
    /// Pair of pants.
    P,
    /// Moebius band.
    Y2,
    /// Singular circle, trivial monodromy: three sheets each winding once.
    Y111,
    /// Singular circle, two sheets: one winding twice (marked slot 0),
    /// one winding once (unmarked slot 1).
    Y12,
    /// Singular circle, one sheet winding three times.
    Y3,
}

impl VertexKind {
    pub fn arity(self) -> usize {
        match self {
            VertexKind::B | VertexKind::D | VertexKind::Y2 | VertexKind::Y3 => 1,
            VertexKind::Y12 => 2,
            VertexKind::P | VertexKind::Y111 => 3,
        }
    }

    /// Surface-type vertices merge the regions of their incident edges.
    pub fn is_surface(self) -> bool {
        matches!(self, VertexKind::D | VertexKind::P | VertexKind::Y2)
    }

    pub fn is_singular(self) -> bool {
        matches!(self, VertexKind::Y111 | VertexKind::Y12 | VertexKind::Y3)
    }

    /// Euler characteristic contribution of the piece.
    pub fn euler(self) -> i64 {
        match self {
            VertexKind::D => 1,
            VertexKind::P => -1,
            _ => 0,
        }
    }

    /// How many times a sheet in the given slot winds around the circle.
    pub fn winding(self, slot: usize) -> usize {
        match (self, slot) {
            (VertexKind::Y12, 0) => 2,
            (VertexKind::Y3, 0) => 3,
            _ => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            VertexKind::B => "B",
            VertexKind::D => "D",
            VertexKind::P => "P",
            VertexKind::Y2 => "Y2",
            VertexKind::Y111 => "Y111",
            VertexKind::Y12 => "Y12",
            VertexKind::Y3 => "Y3",
        }
    }
}

pub const Y12_MARKED: usize = 0;
pub const Y12_UNMARKED: usize = 1;

/// One endpoint of an edge: a vertex slot.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct SlotRef {
    pub vertex: usize,
    pub slot: usize,
}

impl SlotRef {
    pub fn new(vertex: usize, slot: usize) -> Self {
        SlotRef { vertex, slot }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Edge {
    pub a: SlotRef,
    pub b: SlotRef,
    /// Gleam contribution. None is only legal on edges with a B endpoint
    /// (framing data, not part of the polyhedron).
    pub decoration: Option<HalfInt>,
    /// Orientation-reversing identification of the gluing circle.
    pub reversed: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Clone, Default, Serialize, Deserialize)]
pub struct DecoratedGraph {
    pub vertices: Vec<VertexKind>,
    pub edges: Vec<Edge>,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("slot {slot} of vertex {vertex} is out of range for its kind")]
    SlotOutOfRange { vertex: usize, slot: usize },
    #[error("slot {slot} of vertex {vertex} is used by {count} edge endpoints")]
    SlotNotMatched { vertex: usize, slot: usize, count: usize },
    #[error("edge {edge} has decoration {deco} but parity {parity:?}")]
    DecorationParity { edge: usize, deco: HalfInt, parity: Parity },
    #[error("edge {edge} has no decoration but neither endpoint is a flat vertex")]
    MissingDecoration { edge: usize },
    #[error("edge {edge} references vertex {vertex} which does not exist")]
    DanglingVertex { edge: usize, vertex: usize },
}

impl DecoratedGraph {
    pub fn new() -> Self {
        DecoratedGraph::default()
    }

    pub fn add_vertex(&mut self, kind: VertexKind) -> usize {
        self.vertices.push(kind);
        self.vertices.len() - 1
    }

    pub fn add_edge(&mut self, a: SlotRef, b: SlotRef, decoration: Option<HalfInt>) -> usize {
        self.edges.push(Edge { a, b, decoration, reversed: false });
        self.edges.len() - 1
    }

    pub fn add_edge_int(&mut self, a: SlotRef, b: SlotRef, deco: i64) -> usize {
        self.add_edge(a, b, Some(HalfInt::from_int(deco)))
    }

    /// Parity of an edge: odd iff exactly one endpoint sits in the unmarked
    /// slot of a Y12 vertex. Odd edges carry half-odd decorations, even
    /// edges integer ones.
    pub fn edge_parity(&self, e: usize) -> Parity {
        let edge = &self.edges[e];
        let unmarked = |s: SlotRef| {
            self.vertices[s.vertex] == VertexKind::Y12 && s.slot == Y12_UNMARKED
        };
        if unmarked(edge.a) != unmarked(edge.b) {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn has_flat_endpoint(&self, e: usize) -> bool {
        let edge = &self.edges[e];
        self.vertices[edge.a.vertex] == VertexKind::B
            || self.vertices[edge.b.vertex] == VertexKind::B
    }

    pub fn validate(&self) -> Result<(), GraphError> {
        // every slot filled exactly once
        let mut fill: HashMap<(usize, usize), usize> = HashMap::new();
        for (ei, edge) in self.edges.iter().enumerate() {
            for s in [edge.a, edge.b] {
                if s.vertex >= self.vertices.len() {
                    return Err(GraphError::DanglingVertex { edge: ei, vertex: s.vertex });
                }
                if s.slot >= self.vertices[s.vertex].arity() {
                    return Err(GraphError::SlotOutOfRange { vertex: s.vertex, slot: s.slot });
                }
                *fill.entry((s.vertex, s.slot)).or_insert(0) += 1;
            }
        }
        for (vi, kind) in self.vertices.iter().enumerate() {
            for slot in 0..kind.arity() {
                let count = fill.get(&(vi, slot)).copied().unwrap_or(0);
                if count != 1 {
                    return Err(GraphError::SlotNotMatched { vertex: vi, slot, count });
                }
            }
        }
        // decoration parity
        for (ei, edge) in self.edges.iter().enumerate() {
            match edge.decoration {
                Some(d) => {
                    let parity = self.edge_parity(ei);
                    let ok = match parity {
                        Parity::Even => d.is_integer(),
                        Parity::Odd => d.is_half_odd(),
                    };
                    if !ok {
                        return Err(GraphError::DecorationParity { edge: ei, deco: d, parity });
                    }
                }
                None => {
                    if !self.has_flat_endpoint(ei) {
                        return Err(GraphError::MissingDecoration { edge: ei });
                    }
                }
            }
        }
        Ok(())
    }

    /// Connected components of the graph, as vertex index sets.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertices.len();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for e in &self.edges {
            adj[e.a.vertex].push(e.b.vertex);
            adj[e.b.vertex].push(e.a.vertex);
        }
        let mut seen = vec![false; n];
        let mut comps = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    /// Extracts the induced subgraph on a vertex set, remapping indices.
    /// Panics if an edge crosses the set boundary.
    pub fn induced(&self, verts: &[usize]) -> DecoratedGraph {
        let mut map = HashMap::new();
        let mut g = DecoratedGraph::new();
        for &v in verts {
            map.insert(v, g.add_vertex(self.vertices[v]));
        }
        for e in &self.edges {
            let ia = map.get(&e.a.vertex);
            let ib = map.get(&e.b.vertex);
            match (ia, ib) {
                (Some(&na), Some(&nb)) => {
                    g.edges.push(Edge {
                        a: SlotRef::new(na, e.a.slot),
                        b: SlotRef::new(nb, e.b.slot),
                        decoration: e.decoration,
                        reversed: e.reversed,
                    });
                }
                (None, None) => {}
                _ => panic!("induced subgraph cut an edge"),
            }
        }
        g
    }

    /// Euler characteristic of the polyhedron.
    pub fn euler_char(&self) -> i64 {
        self.vertices.iter().map(|k| k.euler()).sum()
    }

    pub fn is_closed(&self) -> bool {
        !self.vertices.iter().any(|&k| k == VertexKind::B)
    }

    /// Degree (number of incident edge endpoints) of a vertex.
    pub fn degree(&self, v: usize) -> usize {
        self.vertices[v].arity()
    }

    /// All edges incident to a vertex, with the endpoint that touches it.
    pub fn incident(&self, v: usize) -> Vec<(usize, SlotRef)> {
        let mut out = Vec::new();
        for (ei, e) in self.edges.iter().enumerate() {
            if e.a.vertex == v {
                out.push((ei, e.a));
            }
            if e.b.vertex == v {
                out.push((ei, e.b));
            }
        }
        out
    }

    /// The edge occupying a given slot, plus which endpoint sits there.
    pub fn edge_at(&self, s: SlotRef) -> Option<(usize, bool)> {
        for (ei, e) in self.edges.iter().enumerate() {
            if e.a == s {
                return Some((ei, false));
            }
            if e.b == s {
                return Some((ei, true));
            }
        }
        None
    }
}

/// One region of the polyhedron: a maximal union of edges glued through
/// surface-type vertices, together with its attachments to singular
/// circles and boundary circles.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Region {
    pub edges: Vec<usize>,
    /// Surface vertices interior to the region.
    pub surface_vertices: Vec<usize>,
    /// Attachments: (vertex, slot, winding) at singular or flat vertices.
    pub attachments: Vec<(usize, usize, usize)>,
    /// Total gleam: sum of member decorations. None if any member edge is
    /// undecorated (framing-only region at the boundary).
    pub gleam: Option<HalfInt>,
    /// Odd iff the region meets an odd number of unmarked Y12 slots.
    pub parity: Parity,
}

/// Union-find region computation: edges merge when incident to the same
/// surface vertex (D, P, Y2); singular vertices and B never merge.
pub fn regions(g: &DecoratedGraph) -> Vec<Region> {
    let ne = g.edges.len();
    let mut parent: Vec<usize> = (0..ne).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let r = find(parent, parent[x]);
            parent[x] = r;
        }
        parent[x]
    }
    for v in 0..g.vertices.len() {
        if !g.vertices[v].is_surface() {
            continue;
        }
        let inc = g.incident(v);
        for w in inc.windows(2) {
            let ra = find(&mut parent, w[0].0);
            let rb = find(&mut parent, w[1].0);
            if ra != rb {
                parent[ra] = rb;
            }
        }
    }
    let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
    for e in 0..ne {
        let r = find(&mut parent, e);
        groups.entry(r).or_default().push(e);
    }
    let mut regions: Vec<Region> = Vec::new();
    let mut keys: Vec<usize> = groups.keys().copied().collect();
    keys.sort_unstable();
    for k in keys {
        let mut edges = groups[&k].clone();
        edges.sort_unstable();
        let mut surface_vertices = Vec::new();
        let mut attachments = Vec::new();
        let mut gleam = Some(HalfInt::ZERO);
        let mut odd_count = 0usize;
        for &ei in &edges {
            let e = &g.edges[ei];
            match e.decoration {
                Some(d) => {
                    if let Some(total) = gleam.as_mut() {
                        *total += d;
                    }
                }
                None => gleam = None,
            }
            for s in [e.a, e.b] {
                let kind = g.vertices[s.vertex];
                if kind.is_surface() {
                    if !surface_vertices.contains(&s.vertex) {
                        surface_vertices.push(s.vertex);
                    }
                } else {
                    attachments.push((s.vertex, s.slot, kind.winding(s.slot)));
                    if kind == VertexKind::Y12 && s.slot == Y12_UNMARKED {
                        odd_count += 1;
                    }
                }
            }
        }
        surface_vertices.sort_unstable();
        regions.push(Region {
            edges,
            surface_vertices,
            attachments,
            gleam,
            parity: if odd_count % 2 == 0 { Parity::Even } else { Parity::Odd },
        });
    }
    regions
}

impl fmt::Debug for DecoratedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "graph:")?;
        for (i, k) in self.vertices.iter().enumerate() {
            writeln!(f, "  vertex {} {}", i, k.name())?;
        }
        for e in &self.edges {
            let deco = match e.decoration {
                Some(d) => format!("{}", d),
                None => "?".into(),
            };
            writeln!(
                f,
                "  edge {}.{} {}.{} g={}{}",
                e.a.vertex,
                e.a.slot,
                e.b.vertex,
                e.b.slot,
                deco,
                if e.reversed { " rev" } else { "" }
            )?;
        }
        Ok(())
    }
}

/// Builders for the recurring small graphs.
pub mod builders {
    use super::*;

    /// Sphere made of two discs: D -(n)- D.
    pub fn sphere(n: i64) -> DecoratedGraph {
        let mut g = DecoratedGraph::new();
        let d1 = g.add_vertex(VertexKind::D);
        let d2 = g.add_vertex(VertexKind::D);
        g.add_edge_int(SlotRef::new(d1, 0), SlotRef::new(d2, 0), n);
        g
    }

    /// Annulus: B - B (shadow of the product block).
    pub fn annulus() -> DecoratedGraph {
        let mut g = DecoratedGraph::new();
        let b1 = g.add_vertex(VertexKind::B);
        let b2 = g.add_vertex(VertexKind::B);
        g.add_edge(SlotRef::new(b1, 0), SlotRef::new(b2, 0), None);
        g
    }

    /// Disc: D - B.
    pub fn disc() -> DecoratedGraph {
        let mut g = DecoratedGraph::new();
        let d = g.add_vertex(VertexKind::D);
        let b = g.add_vertex(VertexKind::B);
        g.add_edge(SlotRef::new(d, 0), SlotRef::new(b, 0), None);
        g
    }

    /// Pants with three flat boundaries: P + 3 B.
    pub fn pants_block() -> DecoratedGraph {
        let mut g = DecoratedGraph::new();
        let p = g.add_vertex(VertexKind::P);
        for slot in 0..3 {
            let b = g.add_vertex(VertexKind::B);
            g.add_edge(SlotRef::new(p, slot), SlotRef::new(b, 0), None);
        }
        g
    }

    /// Moebius band with flat boundary: Y2 + B.
    pub fn moebius_block() -> DecoratedGraph {
        let mut g = DecoratedGraph::new();
        let y = g.add_vertex(VertexKind::Y2);
        let b = g.add_vertex(VertexKind::B);
        g.add_edge(SlotRef::new(y, 0), SlotRef::new(b, 0), None);
        g
    }

    /// Y111 + 3 B.
    pub fn y111_block() -> DecoratedGraph {
        let mut g = DecoratedGraph::new();
        let y = g.add_vertex(VertexKind::Y111);
        for slot in 0..3 {
            let b = g.add_vertex(VertexKind::B);
            g.add_edge(SlotRef::new(y, slot), SlotRef::new(b, 0), None);
        }
        g
    }

    /// Y12 + 2 B.
    pub fn y12_block() -> DecoratedGraph {
        let mut g = DecoratedGraph::new();
        let y = g.add_vertex(VertexKind::Y12);
        for slot in 0..2 {
            let b = g.add_vertex(VertexKind::B);
            g.add_edge(SlotRef::new(y, slot), SlotRef::new(b, 0), None);
        }
        g
    }

    /// Y3 + B.
    pub fn y3_block() -> DecoratedGraph {
        let mut g = DecoratedGraph::new();
        let y = g.add_vertex(VertexKind::Y3);
        let b = g.add_vertex(VertexKind::B);
        g.add_edge(SlotRef::new(y, 0), SlotRef::new(b, 0), None);
        g
    }

    /// Pants with three projective planes: three Y12 circles, each carrying
    /// a doubly winding disc. Odd edges take gleam 1/2, marked caps 0.
    pub fn pants_three_projective_planes() -> DecoratedGraph {
        let mut g = DecoratedGraph::new();
        let p = g.add_vertex(VertexKind::P);
        for slot in 0..3 {
            let y = g.add_vertex(VertexKind::Y12);
            let d = g.add_vertex(VertexKind::D);
            g.add_edge(
                SlotRef::new(p, slot),
                SlotRef::new(y, Y12_UNMARKED),
                Some(HalfInt::from_doubled(1)),
            );
            g.add_edge_int(SlotRef::new(y, Y12_MARKED), SlotRef::new(d, 0), 0);
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::builders::*;
    use super::*;

    #[test]
    fn validate_accepts_blocks() {
        for g in [sphere(1), annulus(), disc(), pants_block(), moebius_block(), y111_block(), y12_block(), y3_block()] {
            g.validate().unwrap();
        }
    }

    #[test]
    fn validate_rejects_open_slot() {
        let mut g = DecoratedGraph::new();
        g.add_vertex(VertexKind::P);
        let d = g.add_vertex(VertexKind::D);
        g.add_edge_int(SlotRef::new(0, 0), SlotRef::new(d, 0), 0);
        assert!(matches!(g.validate(), Err(GraphError::SlotNotMatched { .. })));
    }

    #[test]
    fn parity_rules() {
        // Y12 unmarked to D: odd, demands half-odd decoration
        let mut g = DecoratedGraph::new();
        let y = g.add_vertex(VertexKind::Y12);
        let d1 = g.add_vertex(VertexKind::D);
        let d2 = g.add_vertex(VertexKind::D);
        let e1 = g.add_edge(
            SlotRef::new(y, Y12_UNMARKED),
            SlotRef::new(d1, 0),
            Some(HalfInt::from_doubled(1)),
        );
        let e2 = g.add_edge_int(SlotRef::new(y, Y12_MARKED), SlotRef::new(d2, 0), -1);
        assert_eq!(g.edge_parity(e1), Parity::Odd);
        assert_eq!(g.edge_parity(e2), Parity::Even);
        g.validate().unwrap();
        // integer decoration on the odd edge must fail
        g.edges[e1].decoration = Some(HalfInt::from_int(1));
        assert!(matches!(g.validate(), Err(GraphError::DecorationParity { .. })));
    }

    #[test]
    fn unmarked_to_unmarked_is_even() {
        let mut g = DecoratedGraph::new();
        let y1 = g.add_vertex(VertexKind::Y12);
        let y2 = g.add_vertex(VertexKind::Y12);
        let d1 = g.add_vertex(VertexKind::D);
        let d2 = g.add_vertex(VertexKind::D);
        let e = g.add_edge_int(SlotRef::new(y1, Y12_UNMARKED), SlotRef::new(y2, Y12_UNMARKED), 3);
        g.add_edge_int(SlotRef::new(y1, Y12_MARKED), SlotRef::new(d1, 0), 0);
        g.add_edge_int(SlotRef::new(y2, Y12_MARKED), SlotRef::new(d2, 0), 0);
        assert_eq!(g.edge_parity(e), Parity::Even);
        g.validate().unwrap();
    }

    #[test]
    fn regions_merge_through_surfaces() {
        // sphere: one region, gleam n
        let g = sphere(5);
        let rs = regions(&g);
        assert_eq!(rs.len(), 1);
        assert_eq!(rs[0].gleam, Some(HalfInt::from_int(5)));
        assert_eq!(rs[0].parity, Parity::Even);

        // Y111 block: three separate regions
        let g = y111_block();
        let rs = regions(&g);
        assert_eq!(rs.len(), 3);
        assert!(rs.iter().all(|r| r.gleam.is_none()));
    }

    #[test]
    fn euler_contributions() {
        assert_eq!(sphere(0).euler_char(), 2);
        assert_eq!(disc().euler_char(), 1);
        assert_eq!(pants_block().euler_char(), -1);
        assert_eq!(annulus().euler_char(), 0);
        assert_eq!(y111_block().euler_char(), 0);
        assert_eq!(moebius_block().euler_char(), 0);
    }
}
