//! Integer lattices: vectors, matrices, Smith normal form, kernels.

use std::fmt;
use std::ops::{Add, Deref, Neg, Sub};

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

/// A vector in `Λ` (or `Λ̌`), in coordinates of a fixed basis.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct LatticeVec(SmallVec<[i64; 4]>);

impl LatticeVec {
    pub fn zero(dim: usize) -> Self {
        LatticeVec(SmallVec::from_elem(0, dim))
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Self::zero(dim);
        v.0[i] = 1;
        v
    }

    pub fn from_slice(xs: &[i64]) -> Self {
        LatticeVec(SmallVec::from_slice(xs))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn dot(&self, other: &[i64]) -> i64 {
        self.0.iter().zip(other).map(|(a, b)| a * b).sum()
    }

    pub fn scale(&self, k: i64) -> Self {
        LatticeVec(self.0.iter().map(|x| x * k).collect())
    }

    /// Largest absolute coordinate.
    pub fn radius(&self) -> i64 {
        self.0.iter().map(|x| x.abs()).max().unwrap_or(0)
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn to_vec(&self) -> Vec<i64> {
        self.0.to_vec()
    }

    pub(crate) fn coords_mut(&mut self) -> &mut [i64] {
        &mut self.0
    }
}

impl Deref for LatticeVec {
    type Target = [i64];
    fn deref(&self) -> &[i64] {
        &self.0
    }
}

impl FromIterator<i64> for LatticeVec {
    fn from_iter<T: IntoIterator<Item = i64>>(iter: T) -> Self {
        LatticeVec(iter.into_iter().collect())
    }
}

impl From<Vec<i64>> for LatticeVec {
    fn from(v: Vec<i64>) -> Self {
        LatticeVec(SmallVec::from_vec(v))
    }
}

impl<const N: usize> From<[i64; N]> for LatticeVec {
    fn from(v: [i64; N]) -> Self {
        LatticeVec::from_slice(&v)
    }
}

impl Add for &LatticeVec {
    type Output = LatticeVec;
    fn add(self, rhs: &LatticeVec) -> LatticeVec {
        debug_assert_eq!(self.dim(), rhs.dim());
        self.0
            .iter()
            .zip(rhs.0.iter())
            .map(|(a, b)| a + b)
            .collect()
    }
}

impl Sub for &LatticeVec {
    type Output = LatticeVec;
    fn sub(self, rhs: &LatticeVec) -> LatticeVec {
        debug_assert_eq!(self.dim(), rhs.dim());
        self.0
            .iter()
            .zip(rhs.0.iter())
            .map(|(a, b)| a - b)
            .collect()
    }
}

impl Neg for &LatticeVec {
    type Output = LatticeVec;
    fn neg(self) -> LatticeVec {
        self.0.iter().map(|a| -a).collect()
    }
}

impl fmt::Debug for LatticeVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

impl fmt::Display for LatticeVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Dense integer matrix, row-major. Acts on column vectors.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        IntMatrix {
            rows: r,
            cols: c,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, cols: &[LatticeVec]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, v) in cols.iter().enumerate() {
            assert_eq!(v.dim(), rows);
            for i in 0..rows {
                m[(i, j)] = v[i];
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> LatticeVec {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows);
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[i64]) -> LatticeVec {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn sub(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self[(i, j)] == i64::from(i == j)))
    }

    /// Exact determinant (fraction-free elimination in `i128`).
    pub fn det(&self) -> i64 {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return 1;
        }
        let mut a: Vec<Vec<i128>> = (0..n)
            .map(|i| self.row(i).iter().map(|&x| x as i128).collect())
            .collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| a[i][k] != 0) else {
                return 0;
            };
            if p != k {
                a.swap(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) / prev;
                }
                a[i][k] = 0;
            }
            prev = a[k][k];
        }
        (sign * a[n - 1][n - 1]) as i64
    }

    /// Inverse of a unimodular matrix.
    pub fn unimodular_inverse(&self) -> Option<IntMatrix> {
        let snf = smith_normal_form(self);
        if snf.diagonal.len() != self.rows || snf.diagonal.iter().any(|&d| d != 1) {
            return None;
        }
        // U A V = I  =>  A^{-1} = V U
        Some(snf.v.mul(&snf.u))
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_rows())
    }
}

/// `u · a · v = diag(diagonal)` with `u`, `v` unimodular and `d_1 | d_2 | …`.
///
/// `diagonal` has length `min(rows, cols)`; entries are nonnegative and zeros come last.
#[derive(Clone, Debug)]
pub struct Snf {
    pub diagonal: Vec<i64>,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl Snf {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|&&d| d != 0).count()
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> Snf {
    let (m, n) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    let row_swap = |x: &mut IntMatrix, i: usize, j: usize| {
        for c in 0..x.cols {
            x.data.swap(i * x.cols + c, j * x.cols + c);
        }
    };
    let col_swap = |x: &mut IntMatrix, i: usize, j: usize| {
        for r in 0..x.rows {
            x.data.swap(r * x.cols + i, r * x.cols + j);
        }
    };
    // row_i -= q * row_j
    let row_axpy = |x: &mut IntMatrix, i: usize, j: usize, q: i64| {
        for c in 0..x.cols {
            let t = x[(j, c)];
            x[(i, c)] -= q * t;
        }
    };
    let col_axpy = |x: &mut IntMatrix, i: usize, j: usize, q: i64| {
        for r in 0..x.rows {
            let t = x[(r, j)];
            x[(r, i)] -= q * t;
        }
    };

    let mut t = 0;
    while t < m.min(n) {
        // pivot: smallest nonzero absolute value in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if d[(i, j)] != 0 && best.is_none_or(|(bi, bj)| d[(i, j)].abs() < d[(bi, bj)].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        row_swap(&mut d, t, pi);
        row_swap(&mut u, t, pi);
        col_swap(&mut d, t, pj);
        col_swap(&mut v, t, pj);

        loop {
            let mut done = true;
            for i in t + 1..m {
                let q = Integer::div_floor(&d[(i, t)], &d[(t, t)]);
                if q != 0 {
                    row_axpy(&mut d, i, t, q);
                    row_axpy(&mut u, i, t, q);
                }
                if d[(i, t)] != 0 {
                    done = false;
                }
            }
            for j in t + 1..n {
                let q = Integer::div_floor(&d[(t, j)], &d[(t, t)]);
                if q != 0 {
                    col_axpy(&mut d, j, t, q);
                    col_axpy(&mut v, j, t, q);
                }
                if d[(t, j)] != 0 {
                    done = false;
                }
            }
            if done {
                // divisibility of the remaining block
                let bad = (t + 1..m)
                    .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                    .find(|&(i, j)| d[(i, j)] % d[(t, t)] != 0);
                match bad {
                    None => break,
                    Some((i, _)) => {
                        // fold row i into row t and continue reducing
                        row_axpy(&mut d, t, i, -1);
                        row_axpy(&mut u, t, i, -1);
                        continue;
                    }
                }
            }
            // move a smaller remainder into the pivot position
            let mut best = (t, t);
            for i in t..m {
                if d[(i, t)] != 0 && d[(i, t)].abs() < d[best].abs() {
                    best = (i, t);
                }
            }
            for j in t..n {
                if d[(t, j)] != 0 && d[(t, j)].abs() < d[best].abs() {
                    best = (t, j);
                }
            }
            if best.0 != t {
                row_swap(&mut d, t, best.0);
                row_swap(&mut u, t, best.0);
            } else if best.1 != t {
                col_swap(&mut d, t, best.1);
                col_swap(&mut v, t, best.1);
            }
        }
        if d[(t, t)] < 0 {
            for c in 0..n {
                d[(t, c)] = -d[(t, c)];
            }
            for c in 0..m {
                u[(t, c)] = -u[(t, c)];
            }
        }
        t += 1;
    }
    let diagonal = (0..m.min(n)).map(|i| d[(i, i)]).collect();
    Snf { diagonal, u, v }
}

/// A basis (as columns) of the integer kernel `{x : a x = 0}`.
pub fn integer_kernel(a: &IntMatrix) -> Vec<LatticeVec> {
    let snf = smith_normal_form(a);
    let r = snf.rank();
    (r..a.cols).map(|j| snf.v.column(j)).collect()
}

/// Structure of a finitely generated abelian group `Z^n / span(generators)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientGroup {
    pub ambient_rank: usize,
    pub free_rank: usize,
    /// Invariant factors greater than one, in divisibility order.
    pub invariant_factors: Vec<i64>,
    #[serde(skip)]
    u: IntMatrix,
    #[serde(skip)]
    diagonal: Vec<i64>,
}

/// Image of a lattice vector in a [`QuotientGroup`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct QuotientImage {
    pub free: Vec<i64>,
    /// Residues modulo the invariant factors.
    pub torsion: Vec<i64>,
}

impl QuotientImage {
    pub fn is_zero(&self) -> bool {
        self.free.iter().all(|&x| x == 0) && self.torsion.iter().all(|&x| x == 0)
    }
}

impl QuotientGroup {
    /// `Z^n` modulo the column span of `relations` (an `n × k` matrix).
    pub fn new(relations: &IntMatrix) -> Self {
        let n = relations.rows;
        let snf = smith_normal_form(relations);
        let mut diagonal = vec![0; n];
        diagonal[..snf.diagonal.len()].copy_from_slice(&snf.diagonal);
        let invariant_factors = diagonal.iter().copied().filter(|&d| d > 1).collect();
        let free_rank = diagonal.iter().filter(|&&d| d == 0).count();
        QuotientGroup {
            ambient_rank: n,
            free_rank,
            invariant_factors,
            u: snf.u,
            diagonal,
        }
    }

    pub fn torsion_order(&self) -> i64 {
        self.invariant_factors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    pub fn image(&self, x: &[i64]) -> QuotientImage {
        let y = self.u.apply(x);
        let mut free = Vec::new();
        let mut torsion = Vec::new();
        for (i, &d) in self.diagonal.iter().enumerate() {
            match d {
                0 => free.push(y[i]),
                1 => {}
                d => torsion.push(y[i].rem_euclid(d)),
            }
        }
        QuotientImage { free, torsion }
    }

    /// All characters of the torsion part, as residue tuples, in lexicographic order.
    pub fn torsion_characters(&self) -> Vec<Vec<i64>> {
        let mut out = vec![vec![]];
        for &d in &self.invariant_factors {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..d).map(move |r| {
                        let mut p = prefix.clone();
                        p.push(r);
                        p
                    })
                })
                .collect();
        }
        out
    }

    /// Value of the character `psi` on a torsion image, as a phase `a/b ∈ [0, 1)` in lowest terms.
    pub fn character_phase(&self, psi: &[i64], torsion: &[i64]) -> (i64, i64) {
        let l = self
            .invariant_factors
            .iter()
            .fold(1i64, |acc, &d| acc.lcm(&d));
        let num: i64 = psi
            .iter()
            .zip(torsion)
            .zip(&self.invariant_factors)
            .map(|((p, x), d)| p * x * (l / d))
            .sum::<i64>()
            .rem_euclid(l);
        let g = num.gcd(&l);
        (num / g, l / g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn check_snf(a: &IntMatrix) {
        let s = smith_normal_form(a);
        let d = s.u.mul(a).mul(&s.v);
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                let expect = if i == j { s.diagonal[i] } else { 0 };
                assert_eq!(d[(i, j)], expect, "{a:?} -> {d:?}");
            }
        }
        assert_eq!(s.u.det().abs(), 1);
        assert_eq!(s.v.det().abs(), 1);
        let nz: Vec<i64> = s.diagonal.iter().copied().filter(|&x| x != 0).collect();
        for w in nz.windows(2) {
            assert_eq!(w[1] % w[0], 0, "divisibility {:?}", s.diagonal);
        }
        assert!(s.diagonal.iter().all(|&x| x >= 0));
        // zeros last
        let first_zero = s
            .diagonal
            .iter()
            .position(|&x| x == 0)
            .unwrap_or(s.diagonal.len());
        assert!(s.diagonal[first_zero..].iter().all(|&x| x == 0));
    }

    #[test]
    fn snf_small_cases() {
        check_snf(&IntMatrix::from_rows(&[vec![-2]]));
        check_snf(&IntMatrix::from_rows(&[
            vec![2, 4, 4],
            vec![-6, 6, 12],
            vec![10, -4, -16],
        ]));
        check_snf(&IntMatrix::from_rows(&[vec![0, 0], vec![0, 0]]));
        check_snf(&IntMatrix::from_rows(&[vec![6, 4], vec![4, 6], vec![2, 2]]));
        let s = smith_normal_form(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(s.diagonal, vec![1, 6]);
    }

    #[test]
    fn quotient_of_minus_two() {
        let q = QuotientGroup::new(&IntMatrix::from_rows(&[vec![-2]]));
        assert_eq!(q.invariant_factors, vec![2]);
        assert_eq!(q.free_rank, 0);
        assert_eq!(q.image(&[1]).torsion, vec![1]);
        assert_eq!(q.image(&[2]).torsion, vec![0]);
        assert_eq!(q.torsion_characters(), vec![vec![0], vec![1]]);
        assert_eq!(q.character_phase(&[1], &[1]), (1, 2));
    }

    #[test]
    fn kernel_basis() {
        let a = IntMatrix::from_rows(&[vec![1, 1, 0], vec![0, 2, 2]]);
        let k = integer_kernel(&a);
        assert_eq!(k.len(), 1);
        assert!(a.apply(&k[0]).is_zero());
        assert_eq!(k[0].radius(), 1);
    }

    proptest! {
        #[test]
        fn snf_is_a_factorization(rows in 1usize..4, cols in 1usize..4,
                                  entries in proptest::collection::vec(-6i64..7, 16)) {
            let data: Vec<Vec<i64>> = (0..rows)
                .map(|i| (0..cols).map(|j| entries[i * 4 + j]).collect())
                .collect();
            check_snf(&IntMatrix::from_rows(&data));
        }

        #[test]
        fn kernel_vectors_vanish(entries in proptest::collection::vec(-4i64..5, 6)) {
            let a = IntMatrix::from_rows(&[entries[0..3].to_vec(), entries[3..6].to_vec()]);
            for k in integer_kernel(&a) {
                prop_assert!(a.apply(&k).is_zero());
            }
        }
    }
}
