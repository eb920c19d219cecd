//! Presentation complexes: chain complexes of group presentations,
//! five-dimensional thickening enumeration with spin and evenness labels,
//! and the Andrews-Curtis style classification of gleam-free graphs with
//! finite fundamental group.

use crate::cw::GroupPresentation;
use crate::graph::{DecoratedGraph, SlotRef, VertexKind, Y12_MARKED, Y12_UNMARKED};
use crate::linalg::{cokernel, smith_normal_form, AbelianGroup, IntMatrix, Mod2Matrix};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

impl GroupPresentation {
    /// Exponent-sum matrix (generators x relators).
    pub fn exponent_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.generators.len(), self.relators.len());
        for (j, rel) in self.relators.iter().enumerate() {
            for &(g, e) in rel {
                m.add_to(g, j, &BigInt::from(e));
            }
        }
        m
    }

    /// H1 of the presented group.
    pub fn abelianized(&self) -> AbelianGroup {
        if self.generators.is_empty() {
            return AbelianGroup::trivial();
        }
        cokernel(&self.exponent_matrix())
    }
}

/// The cyclic presentation <a | a^n>.
pub fn cyclic_presentation(n: u64) -> GroupPresentation {
    GroupPresentation {
        generators: vec!["a".into()],
        relators: vec![vec![(0, n as i64)]],
    }
}

/// The dihedral presentation <a, b | a^2, b^2, (ab)^n> of order 2n.
pub fn dihedral_presentation(two_n: u64) -> GroupPresentation {
    assert!(two_n % 2 == 0 && two_n >= 2, "dihedral order must be even");
    let n = (two_n / 2) as i64;
    let mut ab = Vec::new();
    for _ in 0..n {
        ab.push((0usize, 1i64));
        ab.push((1usize, 1i64));
    }
    GroupPresentation {
        generators: vec!["a".into(), "b".into()],
        relators: vec![vec![(0, 2)], vec![(1, 2)], ab],
    }
}

/// Two-step chain complex of the presentation complex: one vertex, one
/// edge per generator, one disc per relator.
pub struct PresentationChain {
    /// Boundary of discs in edge coordinates (generators x relators).
    pub d2: IntMatrix,
}

pub fn presentation_chain(p: &GroupPresentation) -> PresentationChain {
    PresentationChain { d2: p.exponent_matrix() }
}

/// Integral kernel basis of a matrix's column map (vectors in Z^cols).
fn integer_kernel_basis(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(a);
    let r = snf.divisors.len();
    (r..a.cols)
        .map(|j| (0..a.cols).map(|i| snf.v.get(i, j).clone()).collect())
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coefficients {
    Integers,
    Mod2,
}

/// Degree-2 homology of the presentation complex: the kernel of the disc
/// boundary map (there is no degree-3 chain group).
pub fn h2_presentation(p: &GroupPresentation, coeff: Coefficients) -> AbelianGroup {
    let d2 = p.exponent_matrix();
    match coeff {
        Coefficients::Integers => AbelianGroup::free(integer_kernel_basis(&d2).len()),
        Coefficients::Mod2 => {
            let k = Mod2Matrix::from_int_matrix(&d2).kernel_basis().len();
            AbelianGroup { rank: 0, torsion: vec![BigInt::from(2); k] }
        }
    }
}

/// Image of the integral H2 generators in mod-2 H2, expressed in disc
/// coordinates.
pub fn mod2_images(p: &GroupPresentation) -> Vec<Vec<bool>> {
    integer_kernel_basis(&p.exponent_matrix())
        .into_iter()
        .map(|v| v.into_iter().map(|x| x % 2 != BigInt::from(0)).collect())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThickeningLabel {
    /// The second Stiefel-Whitney class as a functional on a mod-2 H2
    /// basis.
    pub w2: Vec<bool>,
    pub spin: bool,
    pub even: bool,
    pub spin_cover_count: Option<u32>,
    pub name: String,
}

/// One five-dimensional thickening per choice of w2 in H^2(X; Z/2): the
/// boundary 4-manifold is spin iff w2 = 0 and even iff w2 vanishes on the
/// image of integral H2.
pub fn enumerate_thickenings(p: &GroupPresentation) -> Vec<ThickeningLabel> {
    let d2 = p.exponent_matrix();
    let z2_basis = Mod2Matrix::from_int_matrix(&d2).kernel_basis();
    let dim = z2_basis.len();
    // coordinates of the integral images in the mod-2 kernel basis
    let images = mod2_images(p)
        .into_iter()
        .map(|v| solve_in_basis(&z2_basis, &v).expect("integral cycle is a mod-2 cycle"))
        .collect::<Vec<_>>();
    let mut out = Vec::new();
    for code in 0..(1u64 << dim) {
        let w2: Vec<bool> = (0..dim).map(|i| code >> i & 1 == 1).collect();
        let spin = w2.iter().all(|&b| !b);
        let even = images
            .iter()
            .all(|img| img.iter().zip(&w2).filter(|(&a, &b)| a && b).count() % 2 == 0);
        out.push(ThickeningLabel {
            name: w2.iter().map(|&b| if b { '1' } else { '0' }).collect(),
            w2,
            spin,
            even,
            spin_cover_count: None,
        });
    }
    out
}

/// Expresses `v` in the given GF(2) basis, if possible.
fn solve_in_basis(basis: &[Vec<bool>], v: &[bool]) -> Option<Vec<bool>> {
    let n = v.len();
    let k = basis.len();
    // Gaussian elimination on [basis | v] columns
    let mut cols: Vec<Vec<bool>> = basis.to_vec();
    let mut target = v.to_vec();
    let mut coeffs = vec![false; k];
    let mut used = vec![false; k];
    for row in 0..n {
        if !target[row] {
            continue;
        }
        let Some(c) = (0..k).find(|&c| !used[c] && cols[c][row]) else {
            continue;
        };
        used[c] = true;
        coeffs[c] = true;
        let pivot = cols[c].clone();
        for x in target.iter_mut().zip(&pivot) {
            *x.0 ^= *x.1;
        }
        let _ = &mut cols;
    }
    if target.iter().any(|&b| b) {
        None
    } else {
        Some(coeffs)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    /// Cyclic of order n.
    C(u64),
    /// Dihedral presentation of order 2n (parameter is 2n).
    D(u64),
}

/// The boundary-4-manifold sets of the cyclic and dihedral presentation
/// complexes, quotiented by the symmetries of the complex, with spin and
/// evenness flags and (for dihedral) index-two spin-cover counts.
pub fn classify_s(family: Family) -> Result<Vec<ThickeningLabel>, String> {
    match family {
        Family::C(n) => {
            if n == 0 {
                return Err("cyclic order must be positive".into());
            }
            let mut out = vec![ThickeningLabel {
                w2: vec![false],
                spin: true,
                even: true,
                spin_cover_count: None,
                name: format!("C{n}^0"),
            }];
            if n % 2 == 0 {
                // H2(X; Z) = 0, so the non-spin thickening is still even
                out.push(ThickeningLabel {
                    w2: vec![true],
                    spin: false,
                    even: true,
                    spin_cover_count: None,
                    name: format!("C{n}^1"),
                });
            } else {
                out[0].w2 = vec![];
            }
            Ok(out)
        }
        Family::D(two_n) => {
            if two_n % 2 != 0 || two_n < 4 {
                return Err("dihedral parameter must be even and at least 4".into());
            }
            let n = two_n / 2;
            let mk = |w2: Vec<bool>, even: bool, cover: Option<u32>, name: String| {
                ThickeningLabel {
                    spin: w2.iter().all(|&b| !b),
                    w2,
                    even,
                    spin_cover_count: cover,
                    name,
                }
            };
            if n == 2 {
                // mod-2 basis: three projective planes, full permutation
                // symmetry; integral image (1,1,1); covers per plane
                let reps = [
                    vec![false, false, false],
                    vec![true, false, false],
                    vec![true, true, false],
                    vec![true, true, true],
                ];
                return Ok(reps
                    .into_iter()
                    .enumerate()
                    .map(|(i, w2)| {
                        let weight = w2.iter().filter(|&&b| b).count() as u32;
                        let even = weight % 2 == 0;
                        mk(w2, even, Some(3 - weight), format!("D{n}^{i}"))
                    })
                    .collect());
            }
            if n % 2 == 1 {
                // basis: two projective planes; integral image (1,1)
                let reps = [vec![false, false], vec![true, false], vec![true, true]];
                return Ok(reps
                    .into_iter()
                    .enumerate()
                    .map(|(i, w2)| {
                        let weight = w2.iter().filter(|&&b| b).count();
                        mk(w2, weight % 2 == 0, None, format!("D{n}^{i}"))
                    })
                    .collect());
            }
            // n > 2 even: basis = two projective planes and the n-winding
            // disc; symmetry swaps the planes; integral image is (0,0,1)
            // for n/2 even and (1,1,1) for n/2 odd; covers come from the
            // two planes only
            let image = if (n / 2) % 2 == 0 {
                vec![false, false, true]
            } else {
                vec![true, true, true]
            };
            let mut out = Vec::new();
            for j in [false, true] {
                for i in 0..=2usize {
                    let mut w2 = vec![false, false, j];
                    for s in 0..i {
                        w2[s] = true;
                    }
                    let even = w2.iter().zip(&image).filter(|(&a, &b)| a && b).count() % 2 == 0;
                    out.push(mk(
                        w2,
                        even,
                        Some(2 - i as u32),
                        format!("D{n}^{}{}", i, if j { 1 } else { 0 }),
                    ));
                }
            }
            Ok(out)
        }
    }
}

// ---------------------------------------------------------------------------
// classification of gleam-free graphs with finite fundamental group

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AcResult {
    /// The polyhedron deforms to the given presentation complex wedged
    /// with `spheres` copies of S2.
    Classified { family: Family, spheres: usize },
    /// A pants piece with winding orders violating the spherical triangle
    /// condition: the group is infinite.
    InfiniteDetected,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum AcError {
    #[error("classification needs a closed connected tree-shaped graph: {0}")]
    Unsupported(String),
}

#[derive(Debug)]
enum TokenFail {
    /// The capped subtree is not simply connected: this cannot serve as a
    /// one-boundary token.
    NotSimplyConnected,
}

/// Reduces the subtree reached from `base` through edge `e` (whose circle
/// is the boundary) to the doubling token: (i, h) encodes a disc winding
/// 2^i with h sphere summands.
fn subtree_token(g: &DecoratedGraph, base: usize, e: usize) -> Result<(u32, usize), TokenFail> {
    let ed = &g.edges[e];
    let far = if ed.a.vertex == base { ed.b } else { ed.a };
    let v = far.vertex;
    let others: Vec<usize> = g
        .incident(v)
        .into_iter()
        .map(|(ei, _)| ei)
        .filter(|&ei| ei != e)
        .collect();
    match g.vertices[v] {
        VertexKind::D => Ok((0, 0)),
        // capping the entry circle of a doubly or triply winding leaf
        // leaves a nontrivial cyclic group, so these never serve as
        // one-boundary tokens
        VertexKind::Y2 | VertexKind::Y3 | VertexKind::B => Err(TokenFail::NotSimplyConnected),
        VertexKind::P => {
            // capped subtree group is cyclic of order 2^min: a winding-1
            // disc on one cuff is needed, and the other disc slides to
            // the entry cuff
            let (i1, h1) = subtree_token(g, v, others[0])?;
            let (i2, h2) = subtree_token(g, v, others[1])?;
            if i1.min(i2) != 0 {
                return Err(TokenFail::NotSimplyConnected);
            }
            Ok((i1.max(i2), h1 + h2))
        }
        VertexKind::Y111 => {
            // both discs wind powers of two around the same core circle:
            // the smaller power survives, the larger splits off a sphere
            let (i1, h1) = subtree_token(g, v, others[0])?;
            let (i2, h2) = subtree_token(g, v, others[1])?;
            Ok((i1.min(i2), h1 + h2 + 1))
        }
        VertexKind::Y12 => {
            if far.slot == Y12_UNMARKED {
                // the entry circle runs once around the core, the inner
                // token sits on the doubly winding sheet: winding doubles
                let (me, _) = g.edge_at(SlotRef::new(v, Y12_MARKED)).unwrap();
                let (i, h) = subtree_token(g, v, me)?;
                Ok((i + 1, h))
            } else {
                // entering along the doubly winding sheet: the capped
                // group is Z/2^min{1,i}, trivial only for i = 0
                let (ue, _) = g.edge_at(SlotRef::new(v, Y12_UNMARKED)).unwrap();
                let (i, h) = subtree_token(g, v, ue)?;
                if i != 0 {
                    return Err(TokenFail::NotSimplyConnected);
                }
                Ok((0, h))
            }
        }
    }
}

/// Classifies a closed, connected, tree-shaped gleam-free graph: picks a
/// center piece, reduces each incident subtree to a doubling token, and
/// applies the single-piece case table. Decorations are ignored.
pub fn ac_classify(g: &DecoratedGraph) -> Result<AcResult, AcError> {
    if g.vertices.is_empty() {
        return Err(AcError::Unsupported("empty graph".into()));
    }
    if !g.is_closed() {
        return Err(AcError::Unsupported("graph has boundary circles".into()));
    }
    if g.components().len() != 1 {
        return Err(AcError::Unsupported("graph is not connected".into()));
    }
    if g.edges.len() + 1 != g.vertices.len() {
        return Err(AcError::Unsupported("graph has cycles".into()));
    }
    let mut infinite = false;
    for v in 0..g.vertices.len() {
        let tokens: Result<Vec<(u32, usize)>, TokenFail> = g
            .incident(v)
            .into_iter()
            .map(|(e, _)| subtree_token(g, v, e))
            .collect();
        let Ok(mut tokens) = tokens else { continue };
        let h: usize = tokens.iter().map(|&(_, s)| s).sum();
        match g.vertices[v] {
            VertexKind::D => {
                // the disc caps the token's entry circle, killing the
                // whole group: only spheres remain (Euler count h + 1)
                return Ok(AcResult::Classified { family: Family::C(1), spheres: h + 1 });
            }
            VertexKind::Y2 => {
                let i = tokens[0].0;
                return Ok(AcResult::Classified { family: Family::C(2 << i), spheres: h });
            }
            VertexKind::Y3 => {
                let i = tokens[0].0;
                return Ok(AcResult::Classified { family: Family::C(3 << i), spheres: h });
            }
            VertexKind::Y111 => {
                let i = tokens.iter().map(|&(i, _)| i).min().unwrap();
                return Ok(AcResult::Classified { family: Family::C(1 << i), spheres: h + 2 });
            }
            VertexKind::Y12 => {
                // slot order: incident() need not follow slot numbering
                let mut by_slot = [0u32; 2];
                for ((e, _), tok) in g.incident(v).into_iter().zip(&tokens) {
                    let ed = &g.edges[e];
                    let s = if ed.a.vertex == v { ed.a.slot } else { ed.b.slot };
                    by_slot[s] = tok.0;
                }
                let i = by_slot[Y12_MARKED];
                let j = by_slot[Y12_UNMARKED];
                let m = (i + 1).min(j);
                return Ok(AcResult::Classified { family: Family::C(1 << m), spheres: h + 1 });
            }
            VertexKind::P => {
                tokens.sort();
                let (i, j, k) = (tokens[0].0, tokens[1].0, tokens[2].0);
                if i == 0 {
                    let m = j.min(k);
                    return Ok(AcResult::Classified { family: Family::C(1 << m), spheres: h + 1 });
                }
                if i == 1 && j == 1 {
                    // spherical triangle type (2, 2, 2^k): dihedral
                    return Ok(AcResult::Classified {
                        family: Family::D(2 * (1u64 << k)),
                        spheres: h,
                    });
                }
                // 1/2^i + 1/2^j + 1/2^k <= 1: infinite triangle group
                infinite = true;
            }
            VertexKind::B => unreachable!(),
        }
    }
    if infinite {
        Ok(AcResult::InfiniteDetected)
    } else {
        Err(AcError::Unsupported("no piece admits a full token reduction".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::halfint::HalfInt;

    fn edge_parity_ok(g: &mut DecoratedGraph, a: SlotRef, b: SlotRef) {
        let odd = (g.vertices[a.vertex] == VertexKind::Y12 && a.slot == Y12_UNMARKED)
            != (g.vertices[b.vertex] == VertexKind::Y12 && b.slot == Y12_UNMARKED);
        let d = if odd { HalfInt::from_doubled(1) } else { HalfInt::ZERO };
        g.add_edge(a, b, Some(d));
    }

    /// Attaches the doubling token of depth i at `slot`: a chain of i
    /// doubly winding pieces closed by a disc.
    fn attach_token(g: &mut DecoratedGraph, slot: SlotRef, i: u32) {
        let mut prev = slot;
        for _ in 0..i {
            let y = g.add_vertex(VertexKind::Y12);
            edge_parity_ok(g, prev, SlotRef::new(y, Y12_UNMARKED));
            prev = SlotRef::new(y, Y12_MARKED);
        }
        let d = g.add_vertex(VertexKind::D);
        edge_parity_ok(g, prev, SlotRef::new(d, 0));
    }

    #[test]
    fn chain_groups() {
        let p = dihedral_presentation(4);
        let m = p.exponent_matrix();
        let entries: Vec<i64> = (0..2)
            .flat_map(|i| (0..3).map(move |j| (i, j)))
            .map(|(i, j)| i64::try_from(m.get(i, j).clone()).unwrap())
            .collect();
        assert_eq!(entries, vec![2, 0, 2, 0, 2, 2]);
        assert_eq!(format!("{}", h2_presentation(&p, Coefficients::Mod2)), "Z/2 + Z/2 + Z/2");
        assert_eq!(format!("{}", h2_presentation(&p, Coefficients::Integers)), "Z");
        let img = mod2_images(&p);
        assert_eq!(img, vec![vec![true, true, true]]);
        // cyclic: even vs odd order
        assert_eq!(format!("{}", h2_presentation(&cyclic_presentation(6), Coefficients::Mod2)), "Z/2");
        assert!(h2_presentation(&cyclic_presentation(5), Coefficients::Mod2).is_trivial());
    }

    #[test]
    fn thickening_counts() {
        // exactly 2^dim labels with exactly one spin label
        for p in [cyclic_presentation(6), cyclic_presentation(5), dihedral_presentation(4)] {
            let labels = enumerate_thickenings(&p);
            let dim = Mod2Matrix::from_int_matrix(&p.exponent_matrix()).kernel_basis().len();
            assert_eq!(labels.len(), 1 << dim);
            assert_eq!(labels.iter().filter(|l| l.spin).count(), 1);
            for l in &labels {
                assert!(!l.spin || l.even);
            }
        }
        // C6: the non-spin thickening is still even (integral H2 vanishes)
        let labels = enumerate_thickenings(&cyclic_presentation(6));
        assert!(labels.iter().all(|l| l.even));
        // D4: 8 raw labels before the symmetry quotient
        assert_eq!(enumerate_thickenings(&dihedral_presentation(4)).len(), 8);
    }

    #[test]
    fn classification_tables() {
        for n in 1..=20u64 {
            let c = classify_s(Family::C(n)).unwrap();
            assert_eq!(c.len(), if n % 2 == 0 { 2 } else { 1 });
            assert_eq!(c.iter().filter(|l| l.spin).count(), 1);
            assert!(c.iter().all(|l| l.even));
        }
        for n in 2..=20u64 {
            let d = classify_s(Family::D(2 * n)).unwrap();
            let expect = if n == 2 {
                4
            } else if n % 2 == 0 {
                6
            } else {
                3
            };
            assert_eq!(d.len(), expect, "n = {n}");
            assert_eq!(d.iter().filter(|l| l.spin).count(), 1);
            for l in &d {
                assert!(!l.spin || l.even);
            }
            if n == 2 {
                let covers: Vec<u32> = d.iter().map(|l| l.spin_cover_count.unwrap()).collect();
                assert_eq!(covers, vec![3, 2, 1, 0]);
                let evens: Vec<bool> = d.iter().map(|l| l.even).collect();
                assert_eq!(evens, vec![true, false, true, false]);
            } else if n % 2 == 0 {
                let covers: Vec<u32> =
                    d.iter().map(|l| l.spin_cover_count.unwrap()).collect();
                assert_eq!(covers, vec![2, 1, 0, 2, 1, 0]);
            }
        }
    }

    #[test]
    fn ac_case_table() {
        // center of each type with doubling tokens i, j, k <= 4
        for i in 0..=4u32 {
            // (D): capping the token kills the group entirely
            let mut g = DecoratedGraph::new();
            let c = g.add_vertex(VertexKind::D);
            attach_token(&mut g, SlotRef::new(c, 0), i);
            assert_eq!(
                ac_classify(&g).unwrap(),
                AcResult::Classified { family: Family::C(1), spheres: 1 }
            );
            // (2): C(2 * 2^i)
            let mut g = DecoratedGraph::new();
            let c = g.add_vertex(VertexKind::Y2);
            attach_token(&mut g, SlotRef::new(c, 0), i);
            assert_eq!(
                ac_classify(&g).unwrap(),
                AcResult::Classified { family: Family::C(2 << i), spheres: 0 }
            );
            // (3): C(3 * 2^i)
            let mut g = DecoratedGraph::new();
            let c = g.add_vertex(VertexKind::Y3);
            attach_token(&mut g, SlotRef::new(c, 0), i);
            assert_eq!(
                ac_classify(&g).unwrap(),
                AcResult::Classified { family: Family::C(3 << i), spheres: 0 }
            );
        }
        for i in 0..=4u32 {
            for j in 0..=4u32 {
                // (12): C(2^min{i+1, j}) with one extra sphere
                let mut g = DecoratedGraph::new();
                let c = g.add_vertex(VertexKind::Y12);
                attach_token(&mut g, SlotRef::new(c, Y12_MARKED), i);
                attach_token(&mut g, SlotRef::new(c, Y12_UNMARKED), j);
                assert_eq!(
                    ac_classify(&g).unwrap(),
                    AcResult::Classified {
                        family: Family::C(1 << (i + 1).min(j)),
                        spheres: 1
                    },
                    "(12) case i={i} j={j}"
                );
                for k in 0..=4u32 {
                    // (111): C(2^min) with two extra spheres
                    let mut g = DecoratedGraph::new();
                    let c = g.add_vertex(VertexKind::Y111);
                    for (s, t) in [i, j, k].into_iter().enumerate() {
                        attach_token(&mut g, SlotRef::new(c, s), t);
                    }
                    assert_eq!(
                        ac_classify(&g).unwrap(),
                        AcResult::Classified {
                            family: Family::C(1 << i.min(j).min(k)),
                            spheres: 2
                        },
                        "(111) case i={i} j={j} k={k}"
                    );
                    // (P): spherical or infinite triangle types
                    let mut g = DecoratedGraph::new();
                    let c = g.add_vertex(VertexKind::P);
                    for (s, t) in [i, j, k].into_iter().enumerate() {
                        attach_token(&mut g, SlotRef::new(c, s), t);
                    }
                    let mut srt = [i, j, k];
                    srt.sort();
                    let want = if srt[0] == 0 {
                        AcResult::Classified {
                            family: Family::C(1 << srt[1].min(srt[2])),
                            spheres: 1,
                        }
                    } else if srt[0] == 1 && srt[1] == 1 {
                        AcResult::Classified {
                            family: Family::D(2 * (1 << srt[2])),
                            spheres: 0,
                        }
                    } else {
                        AcResult::InfiniteDetected
                    };
                    assert_eq!(ac_classify(&g).unwrap(), want, "(P) case i={i} j={j} k={k}");
                }
            }
        }
    }
}
