//! Exact-arithmetic calculus for vertex-free shadows of smooth 4-manifolds.
//!
//! A shadow here is a decorated graph: vertices are elementary pieces
//! (discs, pants, Moebius bands and the three singular pieces mapping to
//! the letters Y111, Y12, Y3), edges are circle gluings decorated by
//! integer or half-odd gleams. The crate computes homology of the
//! polyhedron and of the boundary of its thickening, applies the
//! calculus moves, and normalizes closed graphs into connected sums of
//! the standard blocks.

pub mod halfint;
pub mod linalg;
pub mod graph;
pub mod cw;
pub mod boundary;
pub mod plumbing;
pub mod decomp;
pub mod moves;
pub mod normalize;
pub mod presentations;
pub mod textio;
