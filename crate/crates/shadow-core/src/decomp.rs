//! Blocks and decompositions.
//!
//! A block is a compact oriented 4-manifold whose boundary components are
//! all S2 x S1. The generating set consists of the thickenings of the five
//! Y-type pieces plus three product blocks:
//!
//! * N1 = D2 x S2 (shadow: a disc), chi = 2;
//! * N2 = S2 x S1 x I (shadow: an annulus), chi = 0;
//! * N3 = pants x S2 (shadow: a pair of pants), chi = -2;
//! * M2, M111, M12, M3: twisted S1-bundly thickenings of the Moebius,
//!   Y111, Y12, Y3 pieces, all with chi = 0.
//!
//! A decomposition presents a manifold as blocks assembled along S2 x S1
//! pairs, plus connected summands: copies of CP2 (either orientation),
//! copies of S3 x S1 (arising from fillings), and implicit S4 terms.

use crate::linalg::{cokernel, AbelianGroup, IntMatrix};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BlockKind {
    N1,
    N2,
    N3,
    M2,
    M111,
    M12,
    M3,
}

impl BlockKind {
    pub fn name(self) -> &'static str {
        match self {
            BlockKind::N1 => "N1",
            BlockKind::N2 => "N2",
            BlockKind::N3 => "N3",
            BlockKind::M2 => "M2",
            BlockKind::M111 => "M111",
            BlockKind::M12 => "M12",
            BlockKind::M3 => "M3",
        }
    }

    pub fn euler(self) -> i64 {
        match self {
            BlockKind::N1 => 2,
            BlockKind::N3 => -2,
            _ => 0,
        }
    }

    /// Number of boundary components (assembly slots).
    pub fn slots(self) -> usize {
        match self {
            BlockKind::N1 | BlockKind::M2 | BlockKind::M111 | BlockKind::M12 | BlockKind::M3 => {
                match self {
                    BlockKind::M111 => 3,
                    BlockKind::M12 => 2,
                    _ => 1,
                }
            }
            BlockKind::N2 => 2,
            BlockKind::N3 => 3,
        }
    }

    /// Rank of the free part of H1 of the block.
    pub fn h1_generators(self) -> usize {
        match self {
            BlockKind::N1 => 0,
            BlockKind::N3 => 2,
            _ => 1,
        }
    }

    /// Class of the framed boundary knot of each slot in the block's H1,
    /// as a coefficient vector over the block's generators.
    pub fn slot_winding(self, slot: usize) -> Vec<i64> {
        match self {
            BlockKind::N1 => vec![],
            BlockKind::N2 => vec![1],
            BlockKind::N3 => match slot {
                0 => vec![1, 0],
                1 => vec![0, 1],
                _ => vec![-1, -1],
            },
            BlockKind::M2 => vec![2],
            BlockKind::M111 => vec![1],
            BlockKind::M12 => {
                if slot == crate::graph::Y12_MARKED {
                    vec![2]
                } else {
                    vec![1]
                }
            }
            BlockKind::M3 => vec![3],
        }
    }
}

/// A boundary slot of a block instance inside a decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Port {
    pub block: usize,
    pub slot: usize,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Decomposition {
    pub blocks: Vec<BlockKind>,
    /// Pairs of slots glued along S2 x S1.
    pub assemblies: Vec<(Port, Port)>,
    /// Slots capped off with D3 x S1.
    pub filled: Vec<Port>,
    /// Connected summands S3 x S1.
    pub s3xs1: usize,
    pub cp2_plus: usize,
    pub cp2_minus: usize,
    /// Neutral S4 summands encountered (recorded for the trace only).
    pub s4: usize,
    /// Whether the thickening is spin (from the input graph's gleam form).
    pub spin: Option<bool>,
    pub trace: Vec<String>,
}

impl Decomposition {
    pub fn new() -> Self {
        Decomposition::default()
    }

    pub fn add_block(&mut self, k: BlockKind) -> usize {
        self.blocks.push(k);
        self.blocks.len() - 1
    }

    /// Absorbs another decomposition as further connected summands,
    /// reindexing its block references.
    pub fn merge(&mut self, other: Decomposition) {
        let off = self.blocks.len();
        self.blocks.extend(other.blocks);
        let shift = |p: Port| Port { block: p.block + off, slot: p.slot };
        self.assemblies.extend(other.assemblies.into_iter().map(|(a, b)| (shift(a), shift(b))));
        self.filled.extend(other.filled.into_iter().map(shift));
        self.s3xs1 += other.s3xs1;
        self.cp2_plus += other.cp2_plus;
        self.cp2_minus += other.cp2_minus;
        self.s4 += other.s4;
        self.trace.extend(other.trace);
    }

    /// Slots neither assembled nor filled (the boundary of the result).
    pub fn open_ports(&self) -> Vec<Port> {
        let mut used: Vec<Vec<bool>> =
            self.blocks.iter().map(|b| vec![false; b.slots()]).collect();
        for (a, b) in &self.assemblies {
            used[a.block][a.slot] = true;
            used[b.block][b.slot] = true;
        }
        for p in &self.filled {
            used[p.block][p.slot] = true;
        }
        let mut open = Vec::new();
        for (bi, slots) in used.iter().enumerate() {
            for (si, &u) in slots.iter().enumerate() {
                if !u {
                    open.push(Port { block: bi, slot: si });
                }
            }
        }
        open
    }

    pub fn is_closed(&self) -> bool {
        self.open_ports().is_empty()
    }

    /// Connected components of the block assembly graph.
    fn assembly_components(&self) -> Vec<Vec<usize>> {
        let n = self.blocks.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        for (a, b) in &self.assemblies {
            let (ra, rb) = (find(&mut parent, a.block), find(&mut parent, b.block));
            if ra != rb {
                parent[ra] = rb;
            }
        }
        let mut comps: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for i in 0..n {
            let r = find(&mut parent, i);
            comps.entry(r).or_default().push(i);
        }
        comps.into_values().collect()
    }

    /// Euler characteristic of the presented manifold: the assembled
    /// components and the extra summands are joined by connected sum.
    pub fn euler(&self) -> i64 {
        let mut summands: Vec<i64> = self
            .assembly_components()
            .iter()
            .map(|c| c.iter().map(|&b| self.blocks[b].euler()).sum())
            .collect();
        summands.extend(std::iter::repeat(3).take(self.cp2_plus + self.cp2_minus));
        summands.extend(std::iter::repeat(0).take(self.s3xs1));
        if summands.is_empty() {
            return 2; // the empty decomposition is S4
        }
        2 + summands.iter().map(|c| c - 2).sum::<i64>()
    }

    pub fn sigma(&self) -> i64 {
        self.cp2_plus as i64 - self.cp2_minus as i64
    }

    /// First homology of the presented manifold: block generators modulo
    /// knot identifications, plus one Z per S3 x S1 summand.
    ///
    /// A filled slot glues in D3 x S1, whose core circle is identified with
    /// the slot's winding class without bounding, so fillings impose no
    /// relation (only disc-block slots, i.e. assembled N1's, kill windings).
    pub fn h1(&self) -> AbelianGroup {
        let mut offset = Vec::with_capacity(self.blocks.len());
        let mut ngen = 0;
        for b in &self.blocks {
            offset.push(ngen);
            ngen += b.h1_generators();
        }
        let vec_of = |p: &Port| -> Vec<(usize, i64)> {
            self.blocks[p.block]
                .slot_winding(p.slot)
                .into_iter()
                .enumerate()
                .filter(|&(_, c)| c != 0)
                .map(|(i, c)| (offset[p.block] + i, c))
                .collect()
        };
        let nrel = self.assemblies.len();
        let mut m = IntMatrix::zeros(ngen.max(1), nrel);
        let mut col = 0;
        for (a, b) in &self.assemblies {
            for (i, c) in vec_of(a) {
                m.add_to(i, col, &BigInt::from(c));
            }
            for (i, c) in vec_of(b) {
                m.add_to(i, col, &BigInt::from(-c));
            }
            col += 1;
        }
        let mut g = if ngen == 0 { AbelianGroup::trivial() } else { cokernel(&m) };
        // each assembly beyond a spanning forest of the assembly multigraph
        // closes a loop crossing the gluing S2 x S1, adding a free class
        g.rank +=
            self.assemblies.len() + self.assembly_components().len() - self.blocks.len();
        g.rank += self.s3xs1;
        g
    }

    /// Intersection-form class of a closed decomposition: definite-plus-
    /// indefinite odd diagonal form when CP2 summands are present, k
    /// hyperbolic summands otherwise.
    pub fn form_type(&self) -> String {
        let h1 = self.h1();
        let b2 = self.euler() - 2 + 2 * h1.rank as i64;
        if self.cp2_plus + self.cp2_minus > 0 {
            let m = (b2 + self.sigma()) / 2;
            let n = (b2 - self.sigma()) / 2;
            format!("{}[-1] + {}[+1]", n, m)
        } else {
            format!("{}H", b2 / 2)
        }
    }

    /// Canonical comparison key: block multiset, extra summands, and the
    /// assembly multigraph collapsed to (kind, winding) endpoint pairs.
    pub fn signature_key(&self) -> String {
        let mut blocks: Vec<&str> = self.blocks.iter().map(|b| b.name()).collect();
        blocks.sort();
        let mut asm: Vec<String> = self
            .assemblies
            .iter()
            .map(|(a, b)| {
                let mut ends = [
                    format!("{}:{:?}", self.blocks[a.block].name(), self.blocks[a.block].slot_winding(a.slot)),
                    format!("{}:{:?}", self.blocks[b.block].name(), self.blocks[b.block].slot_winding(b.slot)),
                ];
                ends.sort();
                format!("{}--{}", ends[0], ends[1])
            })
            .collect();
        asm.sort();
        let mut filled: Vec<String> = self
            .filled
            .iter()
            .map(|p| format!("{}:{:?}", self.blocks[p.block].name(), self.blocks[p.block].slot_winding(p.slot)))
            .collect();
        filled.sort();
        format!(
            "blocks={:?} asm={:?} filled={:?} s3xs1={} cp2=({},{})",
            blocks, asm, filled, self.s3xs1, self.cp2_plus, self.cp2_minus
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cp2_invariants() {
        let mut d = Decomposition::new();
        d.cp2_plus = 1;
        assert_eq!(d.euler(), 3);
        assert_eq!(d.sigma(), 1);
        assert!(d.h1().is_trivial());
        assert_eq!(d.form_type(), "0[-1] + 1[+1]");
    }

    #[test]
    fn s2xs2_from_two_n1() {
        // N1 u N1 glued along their S2 x S1 boundaries is an S2-bundle
        // over S2: chi = 4, sigma = 0, simply connected, form 1H
        let mut d = Decomposition::new();
        let a = d.add_block(BlockKind::N1);
        let b = d.add_block(BlockKind::N1);
        d.assemblies.push((Port { block: a, slot: 0 }, Port { block: b, slot: 0 }));
        assert_eq!(d.euler(), 4);
        assert_eq!(d.sigma(), 0);
        assert!(d.h1().is_trivial());
        assert_eq!(d.form_type(), "1H");
        assert!(d.is_closed());
    }

    #[test]
    fn c21_from_m2_and_n1() {
        // the Moebius block capped with N1: H1 = Z/2, chi = 2
        let mut d = Decomposition::new();
        let a = d.add_block(BlockKind::M2);
        let b = d.add_block(BlockKind::N1);
        d.assemblies.push((Port { block: a, slot: 0 }, Port { block: b, slot: 0 }));
        assert_eq!(d.euler(), 2);
        let h = d.h1();
        assert_eq!(format!("{}", h), "Z/2");
    }

    #[test]
    fn triple_hat_blocks() {
        // M3 capped with N1: H1 = Z/3
        let mut d = Decomposition::new();
        let a = d.add_block(BlockKind::M3);
        let b = d.add_block(BlockKind::N1);
        d.assemblies.push((Port { block: a, slot: 0 }, Port { block: b, slot: 0 }));
        assert_eq!(format!("{}", d.h1()), "Z/3");
        assert_eq!(d.euler(), 2);
    }

    #[test]
    fn s3xs1_counts() {
        let mut d = Decomposition::new();
        d.s3xs1 = 1;
        assert_eq!(d.euler(), 0);
        assert_eq!(format!("{}", d.h1()), "Z");
    }

    #[test]
    fn filled_m2_is_s3xs1() {
        // filling the Moebius block's boundary with D3 x S1 gives S3 x S1:
        // the winding-2 circle is identified with the filler core, nothing
        // is killed, H1 stays Z
        let mut d = Decomposition::new();
        let a = d.add_block(BlockKind::M2);
        d.filled.push(Port { block: a, slot: 0 });
        assert!(d.is_closed());
        assert_eq!(d.euler(), 0);
        assert_eq!(format!("{}", d.h1()), "Z");
    }

    #[test]
    fn n3_capped_three_ways() {
        // pants x S2 with all three ends capped by N1: simply connected,
        // chi = -2 + 6 = 4... joined: 2 + (chi_sum - 2) with one component
        let mut d = Decomposition::new();
        let p = d.add_block(BlockKind::N3);
        for slot in 0..3 {
            let c = d.add_block(BlockKind::N1);
            d.assemblies.push((Port { block: p, slot }, Port { block: c, slot: 0 }));
        }
        assert_eq!(d.euler(), 4);
        assert!(d.h1().is_trivial());
    }
}
