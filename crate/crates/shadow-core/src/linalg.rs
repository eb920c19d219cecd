//! Exact integer linear algebra: Smith normal form, cokernels, mod-2 rank.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Dense integer matrix with arbitrary-precision entries.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = IntMatrix::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged row");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, BigInt::from(v));
            }
        }
        m
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::from(1));
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: &BigInt) {
        self.data[i * self.cols + j] += v;
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[target] += q * row[src]
    fn row_op(&mut self, target: usize, src: usize, q: &BigInt) {
        for j in 0..self.cols {
            let v = self.get(src, j) * q;
            self.add_to(target, j, &v);
        }
    }

    fn col_op(&mut self, target: usize, src: usize, q: &BigInt) {
        for i in 0..self.rows {
            let v = self.get(i, src) * q;
            self.add_to(i, target, &v);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j).clone();
            self.set(i, j, v);
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            for j in 0..self.cols {
                write!(f, "{}{}", self.get(i, j), if j + 1 == self.cols { "" } else { " " })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Result of a Smith normal form computation: u * a * v = d with u, v
/// unimodular and d diagonal, each divisor dividing the next.
pub struct SmithForm {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    /// Nonzero diagonal entries, positive, in divisibility order.
    pub divisors: Vec<BigInt>,
}

/// Smith normal form. Pivot selection: smallest nonzero absolute value,
/// ties broken by position (row-major), which keeps entry growth tame.
pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let mut d = a.clone();
    let mut u = IntMatrix::identity(a.rows);
    let mut v = IntMatrix::identity(a.cols);
    let n = a.rows.min(a.cols);
    let mut t = 0; // current corner

    while t < n {
        // find pivot: smallest |entry| among rows/cols >= t
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..d.rows {
            for j in t..d.cols {
                if !d.get(i, j).is_zero() {
                    let better = match pivot {
                        None => true,
                        Some((pi, pj)) => d.get(i, j).abs() < d.get(pi, pj).abs(),
                    };
                    if better {
                        pivot = Some((i, j));
                    }
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        // clear row and column t
        let mut clean = true;
        for i in (t + 1)..d.rows {
            if !d.get(i, t).is_zero() {
                let q = -(d.get(i, t) / d.get(t, t));
                d.row_op(i, t, &q);
                u.row_op(i, t, &q);
                if !d.get(i, t).is_zero() {
                    clean = false;
                }
            }
        }
        for j in (t + 1)..d.cols {
            if !d.get(t, j).is_zero() {
                let q = -(d.get(t, j) / d.get(t, t));
                d.col_op(j, t, &q);
                v.col_op(j, t, &q);
                if !d.get(t, j).is_zero() {
                    clean = false;
                }
            }
        }
        if !clean {
            continue; // remainder became the new smaller pivot candidate
        }

        // enforce divisibility of the remaining block by d[t][t]
        let mut fixed = true;
        'outer: for i in (t + 1)..d.rows {
            for j in (t + 1)..d.cols {
                if !(d.get(i, j) % d.get(t, t)).is_zero() {
                    // fold row i into row t and restart the corner
                    let one = BigInt::from(1);
                    d.row_op(t, i, &one);
                    u.row_op(t, i, &one);
                    fixed = false;
                    break 'outer;
                }
            }
        }
        if fixed {
            if d.get(t, t).is_negative() {
                d.negate_row(t);
                u.negate_row(t);
            }
            t += 1;
        }
    }

    let mut divisors = Vec::new();
    for i in 0..n {
        if !d.get(i, i).is_zero() {
            divisors.push(d.get(i, i).clone());
        }
    }
    SmithForm { d, u, v, divisors }
}

/// Finitely generated abelian group: Z^rank + sum of Z/d_i with the d_i
/// in divisibility order, each > 1.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianGroup {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        AbelianGroup { rank: 0, torsion: vec![] }
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroup { rank, torsion: vec![] }
    }

    pub fn cyclic(n: u64) -> Self {
        if n == 0 {
            AbelianGroup::free(1)
        } else if n == 1 {
            AbelianGroup::trivial()
        } else {
            AbelianGroup { rank: 0, torsion: vec![BigInt::from(n)] }
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().product()
    }

    pub fn direct_sum(&self, other: &AbelianGroup) -> AbelianGroup {
        // recompute divisor chain of the concatenation
        let all: Vec<BigInt> = self.torsion.iter().chain(other.torsion.iter()).cloned().collect();
        let mut m = IntMatrix::zeros(all.len(), all.len());
        for (i, t) in all.iter().enumerate() {
            m.set(i, i, t.clone());
        }
        let snf = smith_normal_form(&m);
        let torsion = snf.divisors.into_iter().filter(|d| d > &BigInt::from(1)).collect();
        AbelianGroup { rank: self.rank + other.rank, torsion }
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.rank == 1 {
            parts.push("Z".to_string());
        } else if self.rank > 1 {
            parts.push(format!("Z^{}", self.rank));
        }
        for t in &self.torsion {
            parts.push(format!("Z/{}", t));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl fmt::Debug for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Cokernel of the column space: Z^rows / im(a).
pub fn cokernel(a: &IntMatrix) -> AbelianGroup {
    let snf = smith_normal_form(a);
    let rank = a.rows - snf.divisors.len();
    let torsion = snf
        .divisors
        .into_iter()
        .filter(|d| d > &BigInt::from(1))
        .collect();
    AbelianGroup { rank, torsion }
}

/// Kernel rank over Z (nullity of the column space map Z^cols -> Z^rows).
pub fn kernel_rank(a: &IntMatrix) -> usize {
    let snf = smith_normal_form(a);
    a.cols - snf.divisors.len()
}

/// Matrix over GF(2), packed as bool rows.
#[derive(Clone)]
pub struct Mod2Matrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<bool>,
}

impl Mod2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mod2Matrix { rows, cols, data: vec![false; rows * cols] }
    }

    pub fn from_int_matrix(a: &IntMatrix) -> Self {
        let mut m = Mod2Matrix::zeros(a.rows, a.cols);
        for i in 0..a.rows {
            for j in 0..a.cols {
                m.set(i, j, (a.get(i, j) % 2i32).abs() == BigInt::from(1));
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        self.data[i * self.cols + j] = v;
    }

    /// Gaussian elimination; returns rank. Reduces self to row echelon form.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            if rank >= m.rows {
                break;
            }
            let Some(p) = (rank..m.rows).find(|&i| m.get(i, col)) else { continue };
            // swap rows p, rank
            for j in 0..m.cols {
                let a = m.get(rank, j);
                let b = m.get(p, j);
                m.set(rank, j, b);
                m.set(p, j, a);
            }
            for i in 0..m.rows {
                if i != rank && m.get(i, col) {
                    for j in 0..m.cols {
                        let v = m.get(i, j) ^ m.get(rank, j);
                        m.set(i, j, v);
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    /// Basis of the kernel (column vectors), as bool vectors of length cols.
    pub fn kernel_basis(&self) -> Vec<Vec<bool>> {
        let mut m = self.clone();
        let mut pivot_of_col: Vec<Option<usize>> = vec![None; m.cols];
        let mut rank = 0;
        for col in 0..m.cols {
            if rank >= m.rows {
                break;
            }
            let Some(p) = (rank..m.rows).find(|&i| m.get(i, col)) else { continue };
            for j in 0..m.cols {
                let a = m.get(rank, j);
                let b = m.get(p, j);
                m.set(rank, j, b);
                m.set(p, j, a);
            }
            for i in 0..m.rows {
                if i != rank && m.get(i, col) {
                    for j in 0..m.cols {
                        let v = m.get(i, j) ^ m.get(rank, j);
                        m.set(i, j, v);
                    }
                }
            }
            pivot_of_col[col] = Some(rank);
            rank += 1;
        }
        let free_cols: Vec<usize> =
            (0..m.cols).filter(|&c| pivot_of_col[c].is_none()).collect();
        let mut basis = Vec::new();
        for &fc in &free_cols {
            let mut v = vec![false; m.cols];
            v[fc] = true;
            for c in 0..m.cols {
                if let Some(r) = pivot_of_col[c] {
                    if m.get(r, fc) {
                        v[c] = true;
                    }
                }
            }
            basis.push(v);
        }
        basis
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snf_diag_1_3() {
        let a = IntMatrix::from_rows(&[vec![2, 1], vec![1, 2]]);
        let snf = smith_normal_form(&a);
        assert_eq!(snf.divisors, vec![BigInt::from(1), BigInt::from(3)]);
        assert_eq!(format!("{}", cokernel(&a)), "Z/3");
    }

    #[test]
    fn snf_divisibility_chain() {
        let a = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        let snf = smith_normal_form(&a);
        assert_eq!(snf.divisors, vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn cokernel_with_rank() {
        // Z^3 / <(2,0,0)> = Z^2 + Z/2
        let a = IntMatrix::from_rows(&[vec![2], vec![0], vec![0]]);
        let g = cokernel(&a);
        assert_eq!(g.rank, 2);
        assert_eq!(g.torsion, vec![BigInt::from(2)]);
    }

    #[test]
    fn snf_uav_identity_check() {
        let a = IntMatrix::from_rows(&[vec![6, 4, 2], vec![4, 8, 0], vec![2, 0, 10]]);
        let snf = smith_normal_form(&a);
        // verify u*a*v == d
        let mut prod = IntMatrix::zeros(3, 3);
        for i in 0..3 {
            for j in 0..3 {
                let mut s = BigInt::zero();
                for k in 0..3 {
                    for l in 0..3 {
                        s += snf.u.get(i, k) * a.get(k, l) * snf.v.get(l, j);
                    }
                }
                prod.set(i, j, s);
            }
        }
        assert_eq!(prod, snf.d);
        // divisibility
        for w in snf.divisors.windows(2) {
            assert!((&w[1] % &w[0]).is_zero());
        }
    }

    #[test]
    fn mod2_rank_and_kernel() {
        let a = IntMatrix::from_rows(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]);
        let m = Mod2Matrix::from_int_matrix(&a);
        assert_eq!(m.rank(), 2);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0], vec![true, true, true]);
    }

    #[test]
    fn abelian_direct_sum_normalizes() {
        let a = AbelianGroup::cyclic(2);
        let b = AbelianGroup::cyclic(3);
        let s = a.direct_sum(&b);
        assert_eq!(format!("{}", s), "Z/6");
    }
}
