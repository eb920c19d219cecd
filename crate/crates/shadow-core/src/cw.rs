//! CW structure of the polyhedron carried by a decorated graph.
//!
//! Cells: every edge of the graph contributes a circle (one 0-cell, one
//! loop 1-cell); singular vertices and Y2 contribute a core circle; pieces
//! contribute connecting arcs and one 2-cell per sheet, attached by an
//! explicit boundary word. The words make the fundamental group available,
//! and their abelianizations give the boundary matrices.

use crate::graph::{DecoratedGraph, SlotRef, VertexKind};
use crate::linalg::{cokernel, AbelianGroup, IntMatrix, Mod2Matrix};
use num_traits::Signed;

/// 1-cell: either a loop at a 0-cell or an arc between two 0-cells.
#[derive(Clone, Debug)]
pub struct Cell1 {
    pub from: usize,
    pub to: usize,
    pub name: String,
}

/// 2-cell attached along a word in the 1-cells (index, exponent sign).
#[derive(Clone, Debug)]
pub struct Cell2 {
    pub word: Vec<(usize, i64)>,
    pub name: String,
}

pub struct CwComplex {
    pub n0: usize,
    pub cells1: Vec<Cell1>,
    pub cells2: Vec<Cell2>,
}

impl CwComplex {
    /// d1: n0 x n1 incidence matrix.
    pub fn boundary1(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.n0, self.cells1.len());
        for (j, c) in self.cells1.iter().enumerate() {
            m.add_to(c.to, j, &1.into());
            m.add_to(c.from, j, &(-1).into());
        }
        m
    }

    /// d2: n1 x n2 abelianized boundary words.
    pub fn boundary2(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.cells1.len(), self.cells2.len());
        for (j, c) in self.cells2.iter().enumerate() {
            for &(i, s) in &c.word {
                m.add_to(i, j, &s.into());
            }
        }
        m
    }
}

/// Builds the CW complex of the underlying polyhedron (gleams play no role
/// in the homotopy type).
pub fn cw_structure(g: &DecoratedGraph) -> CwComplex {
    let mut n0 = 0usize;
    let mut cells1 = Vec::new();
    let mut cells2 = Vec::new();

    // one circle per edge: 0-cell v_e, loop a_e
    let mut edge_vertex = Vec::with_capacity(g.edges.len());
    let mut edge_loop = Vec::with_capacity(g.edges.len());
    for ei in 0..g.edges.len() {
        let v = n0;
        n0 += 1;
        edge_vertex.push(v);
        let idx = cells1.len();
        cells1.push(Cell1 { from: v, to: v, name: format!("a{}", ei) });
        edge_loop.push(idx);
    }

    // loop orientation of the circle as seen from one side of the edge:
    // the `reversed` flag flips side b.
    let side_sign = |s: SlotRef, ei: usize| -> i64 {
        let e = &g.edges[ei];
        if e.b == s && e.a != s && e.reversed {
            -1
        } else {
            1
        }
    };

    for (vi, &kind) in g.vertices.iter().enumerate() {
        let slots: Vec<SlotRef> = (0..kind.arity()).map(|s| SlotRef::new(vi, s)).collect();
        let edge_of = |s: SlotRef| g.edge_at(s).expect("validated graph").0;
        match kind {
            VertexKind::B => {}
            VertexKind::D => {
                let ei = edge_of(slots[0]);
                cells2.push(Cell2 {
                    word: vec![(edge_loop[ei], side_sign(slots[0], ei))],
                    name: format!("D{}", vi),
                });
            }
            VertexKind::P => {
                // arcs t1: v_e0 -> v_e1, t2: v_e0 -> v_e2; boundary word
                // a0 t1 a1 t1^-1 t2 a2 t2^-1 (all three circles once)
                let e0 = edge_of(slots[0]);
                let e1 = edge_of(slots[1]);
                let e2 = edge_of(slots[2]);
                let t1 = cells1.len();
                cells1.push(Cell1 {
                    from: edge_vertex[e0],
                    to: edge_vertex[e1],
                    name: format!("p{}t1", vi),
                });
                let t2 = cells1.len();
                cells1.push(Cell1 {
                    from: edge_vertex[e0],
                    to: edge_vertex[e2],
                    name: format!("p{}t2", vi),
                });
                cells2.push(Cell2 {
                    word: vec![
                        (edge_loop[e0], side_sign(slots[0], e0)),
                        (t1, 1),
                        (edge_loop[e1], side_sign(slots[1], e1)),
                        (t1, -1),
                        (t2, 1),
                        (edge_loop[e2], side_sign(slots[2], e2)),
                        (t2, -1),
                    ],
                    name: format!("P{}", vi),
                });
            }
            VertexKind::Y2 => {
                // core circle m, arc t from edge circle; sheet word a t m^-2 t^-1
                let e0 = edge_of(slots[0]);
                let w = n0;
                n0 += 1;
                let m = cells1.len();
                cells1.push(Cell1 { from: w, to: w, name: format!("m{}", vi) });
                let t = cells1.len();
                cells1.push(Cell1 { from: edge_vertex[e0], to: w, name: format!("y2t{}", vi) });
                cells2.push(Cell2 {
                    word: vec![
                        (edge_loop[e0], side_sign(slots[0], e0)),
                        (t, 1),
                        (m, -2),
                        (t, -1),
                    ],
                    name: format!("Y2_{}", vi),
                });
            }
            VertexKind::Y111 | VertexKind::Y12 | VertexKind::Y3 => {
                // core circle, plus one annular sheet per slot attaching the
                // edge circle to the core with the slot's winding
                let w = n0;
                n0 += 1;
                let m = cells1.len();
                cells1.push(Cell1 { from: w, to: w, name: format!("c{}", vi) });
                for s in &slots {
                    let ei = edge_of(*s);
                    let t = cells1.len();
                    cells1.push(Cell1 {
                        from: edge_vertex[ei],
                        to: w,
                        name: format!("t{}_{}", vi, s.slot),
                    });
                    let k = kind.winding(s.slot) as i64;
                    cells2.push(Cell2 {
                        word: vec![
                            (edge_loop[ei], side_sign(*s, ei)),
                            (t, 1),
                            (m, -k),
                            (t, -1),
                        ],
                        name: format!("S{}_{}", vi, s.slot),
                    });
                }
            }
        }
    }

    CwComplex { n0, cells1, cells2 }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Coefficients {
    Integers,
    Mod2,
}

/// Homology of the polyhedron in degrees 0, 1, 2. For mod-2 coefficients
/// the groups are reported as (Z/2)^rank via the torsion vector.
pub fn homology(g: &DecoratedGraph, coeff: Coefficients) -> [AbelianGroup; 3] {
    let cw = cw_structure(g);
    let d1 = cw.boundary1();
    let d2 = cw.boundary2();
    match coeff {
        Coefficients::Integers => {
            let h0 = {
                // coker(d1) with rank only (no torsion in degree 0)
                cokernel(&d1)
            };
            let h1 = homology_middle(&d1, &d2);
            let h2 = AbelianGroup::free(crate::linalg::kernel_rank(&d2));
            [h0, h1, h2]
        }
        Coefficients::Mod2 => {
            let m1 = Mod2Matrix::from_int_matrix(&d1);
            let m2 = Mod2Matrix::from_int_matrix(&d2);
            let r1 = m1.rank();
            let r2 = m2.rank();
            let b0 = cw.n0 - r1;
            let b1 = (cw.cells1.len() - r1) - r2;
            let b2 = cw.cells2.len() - r2;
            [mod2_group(b0), mod2_group(b1), mod2_group(b2)]
        }
    }
}

fn mod2_group(rank: usize) -> AbelianGroup {
    AbelianGroup { rank: 0, torsion: vec![num_bigint::BigInt::from(2); rank] }
}

/// ker(d1)/im(d2) using the standard Smith-form change of basis.
fn homology_middle(d1: &IntMatrix, d2: &IntMatrix) -> AbelianGroup {
    // Rows of ker basis: compute a basis of ker(d1) via SNF of d1, then
    // express im(d2) in that basis and take the cokernel.
    let snf1 = crate::linalg::smith_normal_form(d1);
    let r1 = snf1.divisors.len();
    let n1 = d1.cols;
    // kernel basis = last (n1 - r1) columns of v
    let kdim = n1 - r1;
    // d2 in kernel coordinates: v^{-1} * d2, keep last kdim rows.
    // v is unimodular; solve v * x = d2 column by column via SNF of v.
    let vinv_d2 = unimodular_solve(&snf1.v, d2);
    let mut m = IntMatrix::zeros(kdim, d2.cols);
    for i in 0..kdim {
        for j in 0..d2.cols {
            m.set(i, j, vinv_d2.get(r1 + i, j).clone());
        }
    }
    cokernel(&m)
}

/// Solves v * x = b for unimodular v (exact, via SNF of v).
fn unimodular_solve(v: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let snf = crate::linalg::smith_normal_form(v);
    // u*v*w = d (diag of units) => v^{ -1 } = w * d^{-1} * u
    let n = v.rows;
    let mut x = IntMatrix::zeros(n, b.cols);
    for j in 0..b.cols {
        // y = u * b_j
        let mut y = vec![num_bigint::BigInt::from(0); n];
        for i in 0..n {
            let mut s = num_bigint::BigInt::from(0);
            for k in 0..n {
                s += snf.u.get(i, k) * b.get(k, j);
            }
            y[i] = s;
        }
        // z = d^{-1} y (diagonal entries are +-1 for unimodular v)
        for (i, yi) in y.iter_mut().enumerate() {
            let d = snf.d.get(i, i);
            assert!(
                d.clone().abs() == num_bigint::BigInt::from(1),
                "matrix not unimodular"
            );
            if d < &num_bigint::BigInt::from(0) {
                *yi = -yi.clone();
            }
        }
        // x_j = w * z
        for i in 0..n {
            let mut s = num_bigint::BigInt::from(0);
            for k in 0..n {
                s += snf.v.get(i, k) * &y[k];
            }
            x.set(i, j, s);
        }
    }
    x
}

/// Finite presentation of the fundamental group.
#[derive(Clone, Debug)]
pub struct GroupPresentation {
    pub generators: Vec<String>,
    /// Relators as words over generator indices with exponents.
    pub relators: Vec<Vec<(usize, i64)>>,
}

/// pi_1 via a spanning tree of the 1-skeleton: non-tree 1-cells generate,
/// 2-cell boundary words give relators (tree letters dropped).
/// Only meaningful for connected graphs.
pub fn pi1_presentation(g: &DecoratedGraph) -> GroupPresentation {
    let cw = cw_structure(g);
    // spanning forest over 0-cells using 1-cells
    let mut parent: Vec<usize> = (0..cw.n0).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let r = find(parent, parent[x]);
            parent[x] = r;
        }
        parent[x]
    }
    let mut in_tree = vec![false; cw.cells1.len()];
    for (i, c) in cw.cells1.iter().enumerate() {
        let a = find(&mut parent, c.from);
        let b = find(&mut parent, c.to);
        if a != b {
            parent[a] = b;
            in_tree[i] = true;
        }
    }
    let mut gen_index = vec![usize::MAX; cw.cells1.len()];
    let mut generators = Vec::new();
    for (i, c) in cw.cells1.iter().enumerate() {
        if !in_tree[i] {
            gen_index[i] = generators.len();
            generators.push(c.name.clone());
        }
    }
    let mut relators = Vec::new();
    for c in &cw.cells2 {
        let mut word = Vec::new();
        for &(i, s) in &c.word {
            if !in_tree[i] {
                word.push((gen_index[i], s));
            }
        }
        relators.push(word);
    }
    GroupPresentation { generators, relators }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::builders::*;
    use crate::graph::{DecoratedGraph, SlotRef, VertexKind};

    #[test]
    fn sphere_homology() {
        let g = sphere(0);
        let h = homology(&g, Coefficients::Integers);
        assert_eq!(format!("{}", h[0]), "Z");
        assert_eq!(format!("{}", h[1]), "0");
        assert_eq!(format!("{}", h[2]), "Z");
    }

    #[test]
    fn triple_hat_pi1() {
        // Y3 circle capped by a disc: pi1 = Z/3
        let mut g = DecoratedGraph::new();
        let y = g.add_vertex(VertexKind::Y3);
        let d = g.add_vertex(VertexKind::D);
        g.add_edge_int(SlotRef::new(y, 0), SlotRef::new(d, 0), 0);
        g.validate().unwrap();
        let h = homology(&g, Coefficients::Integers);
        assert_eq!(format!("{}", h[1]), "Z/3");
        let p = pi1_presentation(&g);
        // one surviving generator with relator x^3 after dropping the disc relator
        let ab = cokernel(&presentation_matrix(&p));
        assert_eq!(format!("{}", ab), "Z/3");
    }

    fn presentation_matrix(p: &GroupPresentation) -> IntMatrix {
        let mut m = IntMatrix::zeros(p.generators.len(), p.relators.len());
        for (j, r) in p.relators.iter().enumerate() {
            for &(i, s) in r {
                m.add_to(i, j, &s.into());
            }
        }
        m
    }

    #[test]
    fn projective_plane_homology() {
        // Moebius band capped with a disc
        let mut g = DecoratedGraph::new();
        let y = g.add_vertex(VertexKind::Y2);
        let d = g.add_vertex(VertexKind::D);
        g.add_edge_int(SlotRef::new(y, 0), SlotRef::new(d, 0), 0);
        let h = homology(&g, Coefficients::Integers);
        assert_eq!(format!("{}", h[0]), "Z");
        assert_eq!(format!("{}", h[1]), "Z/2");
        assert_eq!(format!("{}", h[2]), "0");
        let h2 = homology(&g, Coefficients::Mod2);
        assert_eq!(h2[1].torsion.len(), 1);
        assert_eq!(h2[2].torsion.len(), 1);
    }

    #[test]
    fn pants_three_projective_planes_homology() {
        let g = pants_three_projective_planes();
        g.validate().unwrap();
        let hz = homology(&g, Coefficients::Integers);
        assert_eq!(hz[2].rank, 1); // H2 = Z
        let h2 = homology(&g, Coefficients::Mod2);
        assert_eq!(h2[2].torsion.len(), 3); // (Z/2)^3
    }
}
