//! Dense matrices over any [`RingElem`], with fraction-free elimination.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::field::{FieldSpec, Scalar};
use crate::ring::RingElem;

#[derive(Clone, PartialEq)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: fmt::Debug> fmt::Debug for Matrix<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[E]> = self.data.chunks(self.cols.max(1)).collect();
        f.debug_list().entries(rows).finish()
    }
}

impl<E> Index<(usize, usize)> for Matrix<E> {
    type Output = E;
    fn index(&self, (i, j): (usize, usize)) -> &E {
        &self.data[i * self.cols + j]
    }
}

impl<E> IndexMut<(usize, usize)> for Matrix<E> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut E {
        &mut self.data[i * self.cols + j]
    }
}

impl<E> Matrix<E> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Panics unless every row has the same length.
    pub fn from_rows(rows: Vec<Vec<E>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> impl Iterator<Item = &E> {
        self.data.iter()
    }

    pub fn map<F>(&self, f: impl FnMut(&E) -> F) -> Matrix<F> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn try_map<F, Err>(&self, f: impl FnMut(&E) -> Result<F, Err>) -> Result<Matrix<F>, Err> {
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect::<Result<_, _>>()?,
        })
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<E>>
    where
        E: Clone,
    {
        self.data
            .chunks(self.cols.max(1))
            .map(<[E]>::to_vec)
            .collect()
    }
}

impl<E: RingElem> Matrix<E> {
    pub fn filled(rows: usize, cols: usize, value: &E) -> Self {
        Matrix::from_fn(rows, cols, |_, _| value.clone())
    }

    /// Zero matrix; `like` supplies the ring context.
    pub fn zeros(rows: usize, cols: usize, like: &E) -> Self {
        Self::filled(rows, cols, &like.zero_like())
    }

    pub fn identity(n: usize, like: &E) -> Self {
        let (z, o) = (like.zero_like(), like.one_like());
        Matrix::from_fn(n, n, |i, j| if i == j { o.clone() } else { z.clone() })
    }

    pub fn scalar(n: usize, value: &E) -> Self {
        let z = value.zero_like();
        Matrix::from_fn(n, n, |i, j| if i == j { value.clone() } else { z.clone() })
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, rhs: &Matrix<E>) -> Matrix<E> {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let mut out = Vec::with_capacity(self.rows * rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc: Option<E> = None;
                for k in 0..self.cols {
                    let a = &self[(i, k)];
                    let b = &rhs[(k, j)];
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    let p = a.times(b);
                    acc = Some(match acc {
                        None => p,
                        Some(x) => x.plus(&p),
                    });
                }
                out.push(acc.unwrap_or_else(|| self.any_entry().zero_like()));
            }
        }
        Matrix {
            rows: self.rows,
            cols: rhs.cols,
            data: out,
        }
    }

    fn any_entry(&self) -> &E {
        self.data.first().expect("matrix has at least one entry")
    }

    pub fn add(&self, rhs: &Matrix<E>) -> Matrix<E> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.plus(b))
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Matrix<E>) -> Matrix<E> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.minus(b))
                .collect(),
        }
    }

    pub fn scale(&self, k: &E) -> Matrix<E> {
        self.map(|a| a.times(k))
    }

    pub fn neg(&self) -> Matrix<E> {
        self.map(RingElem::negated)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(RingElem::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = &self[(i, j)];
                    if i == j {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    /// `Some(c)` when the matrix is `c·I`.
    pub fn as_scalar(&self) -> Option<E> {
        if !self.is_square() || self.rows == 0 {
            return None;
        }
        let c = self[(0, 0)].clone();
        let ok = (0..self.rows).all(|i| {
            (0..self.cols).all(|j| {
                if i == j {
                    self[(i, j)] == c
                } else {
                    self[(i, j)].is_zero()
                }
            })
        });
        ok.then_some(c)
    }

    /// Block matrix; every block in a block row must share its row count, and likewise columns.
    pub fn from_blocks(blocks: &[Vec<Matrix<E>>]) -> Matrix<E> {
        let row_sizes: Vec<usize> = blocks.iter().map(|r| r[0].rows).collect();
        let col_sizes: Vec<usize> = blocks[0].iter().map(|b| b.cols).collect();
        let rows: usize = row_sizes.iter().sum();
        let cols: usize = col_sizes.iter().sum();
        let mut data = Vec::with_capacity(rows * cols);
        for (bi, &rs) in row_sizes.iter().enumerate() {
            for i in 0..rs {
                for (bj, &cs) in col_sizes.iter().enumerate() {
                    let b = &blocks[bi][bj];
                    assert_eq!((b.rows, b.cols), (rs, cs), "block shape mismatch");
                    data.extend_from_slice(b.row(i));
                }
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix<E> {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| {
            self[(rows[i], cols[j])].clone()
        })
    }

    /// Determinant by Bareiss elimination. `None` only if an exact division fails,
    /// which cannot happen over an integral domain with a correct `div_exact`.
    pub fn det(&self) -> Option<E> {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return None;
        }
        let mut a = self.clone();
        let mut prev = a[(0, 0)].one_like();
        let mut negate = false;
        for k in 0..n {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&p| !a[(p, k)].is_zero()) {
                    Some(p) => {
                        a.swap_rows(k, p);
                        negate = !negate;
                    }
                    None => return Some(a[(0, 0)].zero_like()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = a[(k, k)]
                        .times(&a[(i, j)])
                        .minus(&a[(i, k)].times(&a[(k, j)]));
                    a[(i, j)] = v.div_exact(&prev)?;
                }
            }
            prev = a[(k, k)].clone();
        }
        let d = a[(n - 1, n - 1)].clone();
        Some(if negate { d.negated() } else { d })
    }

    /// `(X, d)` with `self · X = d · I` and `d = ±det`, via fraction-free Gauss–Jordan.
    /// `None` for singular matrices.
    pub fn adjugate_pair(&self) -> Option<(Matrix<E>, E)> {
        assert!(self.is_square());
        let n = self.rows;
        if n == 0 {
            return None;
        }
        let like = self.any_entry();
        let ident = Matrix::identity(n, like);
        let mut a = Matrix::from_blocks(&[vec![self.clone(), ident]]);
        let w = 2 * n;
        let mut prev = like.one_like();
        for k in 0..n {
            if a[(k, k)].is_zero() {
                let p = (k + 1..n).find(|&p| !a[(p, k)].is_zero())?;
                a.swap_rows(k, p);
            }
            for i in 0..n {
                if i == k {
                    continue;
                }
                for j in 0..w {
                    if j == k {
                        continue;
                    }
                    let v = a[(k, k)]
                        .times(&a[(i, j)])
                        .minus(&a[(i, k)].times(&a[(k, j)]));
                    a[(i, j)] = v.div_exact(&prev)?;
                }
                a[(i, k)] = like.zero_like();
            }
            prev = a[(k, k)].clone();
        }
        let d = a[(n - 1, n - 1)].clone();
        let x = Matrix::from_fn(n, n, |i, j| a[(i, n + j)].clone());
        Some((x, d))
    }

    /// Exact inverse; `None` unless the determinant is a unit of the ring.
    pub fn inverse(&self) -> Option<Matrix<E>> {
        let (x, d) = self.adjugate_pair()?;
        x.try_map(|e| e.div_exact(&d).ok_or(())).ok()
    }
}

/// Reduced row echelon form over a field, returning the pivot columns.
pub fn rref(m: &Matrix<Scalar>) -> (Matrix<Scalar>, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let Some(p) = (r..a.rows).find(|&p| !a[(p, c)].is_zero()) else {
            continue;
        };
        a.swap_rows(r, p);
        let inv = a[(r, c)].inv().expect("nonzero pivot");
        for j in c..a.cols {
            a[(r, j)] = &a[(r, j)] * &inv;
        }
        for i in 0..a.rows {
            if i != r && !a[(i, c)].is_zero() {
                let f = a[(i, c)].clone();
                for j in c..a.cols {
                    let v = &a[(i, j)] - &(&f * &a[(r, j)]);
                    a[(i, j)] = v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

impl Matrix<Scalar> {
    pub fn field(&self) -> Option<FieldSpec> {
        self.data.first().map(Scalar::field)
    }

    pub fn rank(&self) -> usize {
        match self.field() {
            Some(_) => rref(self).1.len(),
            None => 0,
        }
    }

    /// Basis of `{x : self · x = 0}`.
    pub fn nullspace(&self, field: FieldSpec) -> Vec<Vec<Scalar>> {
        if self.rows == 0 {
            return (0..self.cols)
                .map(|k| {
                    (0..self.cols)
                        .map(|j| field.from_int(i64::from(j == k)))
                        .collect()
                })
                .collect();
        }
        let (r, pivots) = rref(self);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![field.zero(); self.cols];
                x[f] = field.one();
                for (row, &p) in pivots.iter().enumerate() {
                    x[p] = -&r[(row, f)];
                }
                x
            })
            .collect()
    }

    pub fn nullity(&self, field: FieldSpec) -> usize {
        let _ = field;
        self.cols
            - if self.rows == 0 {
                0
            } else {
                rref(self).1.len()
            }
    }
}
