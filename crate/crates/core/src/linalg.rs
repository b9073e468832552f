//! Dense exact linear algebra over any [`Field`].
//!
//! Plain Gauss-Jordan elimination, pivoting on the first nonzero entry
//! scanning top to bottom. Subspaces are stored by an RREF basis, so two
//! subspaces are equal exactly when their bases are equal entrywise.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix{}x{}[", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str("; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|e| self.field.format(e)).collect();
            f.write_str(&row.join(", "))?;
        }
        f.write_str("]")
    }
}

impl Matrix {
    pub fn new(field: &Field, rows: usize, cols: usize, data: Vec<Elem>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        Self::new(field, rows, cols, vec![field.zero(); rows * cols])
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        Self::from_fn(field, n, n, |i, j| if i == j { field.one() } else { field.zero() })
    }

    pub fn from_fn(field: &Field, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Elem) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self::new(field, rows, cols, data)
    }

    /// Builds a matrix from rows of equal length `cols`.
    pub fn from_rows(field: &Field, cols: usize, rows: Vec<Vec<Elem>>) -> Self {
        let n = rows.len();
        let data: Vec<Elem> = rows
            .into_iter()
            .flat_map(|r| {
                assert_eq!(r.len(), cols, "ragged rows");
                r
            })
            .collect();
        Self::new(field, n, cols, data)
    }

    /// Convenience constructor from small integers.
    pub fn from_i64(field: &Field, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| field.from_i64(x)).collect())
            .collect();
        Self::from_rows(field, cols, rows)
    }

    /// A single column.
    pub fn column(field: &Field, v: Vec<Elem>) -> Self {
        let n = v.len();
        Self::new(field, n, 1, v)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Elem] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| self.field.is_zero(e))
    }

    pub fn is_identity(&self) -> bool {
        *self == Matrix::identity(&self.field, self.rows)
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(&self.field, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let k = &self.field;
        let mut out = Matrix::zeros(k, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if k.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = k.add(&out.data[idx], &k.mul(a, other.get(l, j)));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        let k = &self.field;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(k.zero(), |acc, (a, b)| k.add(&acc, &k.mul(a, b)))
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape(), "matrix sum shape");
        let k = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| k.add(a, b)).collect();
        Matrix::new(k, self.rows, self.cols, data)
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape(), "matrix difference shape");
        let k = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| k.sub(a, b)).collect();
        Matrix::new(k, self.rows, self.cols, data)
    }

    pub fn scale(&self, s: &Elem) -> Matrix {
        self.map_same(|x| self.field.mul(s, x))
    }

    /// Applies `f` entrywise, staying in the same field.
    pub fn map_same(&self, f: impl Fn(&Elem) -> Elem) -> Matrix {
        Matrix::new(&self.field, self.rows, self.cols, self.data.iter().map(f).collect())
    }

    /// Applies `f` entrywise, landing in `target`.
    pub fn map_into(&self, target: &Field, f: impl Fn(&Elem) -> Elem) -> Matrix {
        Matrix::new(target, self.rows, self.cols, self.data.iter().map(f).collect())
    }

    /// Coerces a matrix over the base of `ext` into `ext`.
    pub fn extend_to(&self, ext: &Field) -> Matrix {
        debug_assert_eq!(ext.base(), Some(&self.field));
        self.map_into(ext, |x| ext.embed(x.clone()))
    }

    /// Kronecker product.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let k = &self.field;
        Matrix::from_fn(k, self.rows * other.rows, self.cols * other.cols, |i, j| {
            k.mul(
                self.get(i / other.rows, j / other.cols),
                other.get(i % other.rows, j % other.cols),
            )
        })
    }

    pub fn vstack(field: &Field, cols: usize, blocks: &[Matrix]) -> Matrix {
        let mut data = Vec::new();
        let mut rows = 0;
        for b in blocks {
            assert_eq!(b.cols, cols, "vstack width");
            data.extend(b.data.iter().cloned());
            rows += b.rows;
        }
        Matrix::new(field, rows, cols, data)
    }

    pub fn hstack(field: &Field, rows: usize, blocks: &[Matrix]) -> Matrix {
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(field, rows, cols);
        let mut offset = 0;
        for b in blocks {
            assert_eq!(b.rows, rows, "hstack height");
            for i in 0..rows {
                for j in 0..b.cols {
                    out.set(i, offset + j, b.get(i, j).clone());
                }
            }
            offset += b.cols;
        }
        out
    }

    /// Rows `rows` and columns `cols` (index lists).
    pub fn block_diag(field: &Field, blocks: &[Matrix]) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(field, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(r0 + i, c0 + j, b.get(i, j).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        Matrix::from_fn(&self.field, rows.len(), cols.len(), |i, j| {
            self.get(rows[i], cols[j]).clone()
        })
    }

    pub fn pow(&self, n: usize) -> Matrix {
        assert!(self.is_square(), "power of a non-square matrix");
        (0..n).fold(Matrix::identity(&self.field, self.rows), |acc, _| acc.mul(self))
    }

    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        rref(self)
    }

    pub fn rank(&self) -> usize {
        rref(self).1.len()
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(self.clone());
        }
        let aug = Matrix::hstack(&self.field, n, &[self.clone(), Matrix::identity(&self.field, n)]);
        let (r, pivots) = rref(&aug);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        let rows: Vec<usize> = (0..n).collect();
        Some(r.select(&rows, &cols))
    }

    pub fn kernel(&self) -> Subspace {
        kernel(self)
    }

    /// Column space, as a subspace of `field^rows`.
    pub fn image(&self) -> Subspace {
        Subspace::span(&self.field, self.rows, &self.transpose())
    }

    /// Solves `self * x = rhs`.
    pub fn solve(&self, rhs: &[Elem]) -> Result<Vec<Elem>> {
        solve(self, rhs)
    }

    /// Solves `self * X = rhs` column by column.
    pub fn solve_matrix(&self, rhs: &Matrix) -> Result<Matrix> {
        if rhs.rows != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: rhs.rows,
            });
        }
        let cols = (0..rhs.cols)
            .map(|j| self.solve(&rhs.col(j)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_rows(&self.field, self.cols, cols).transpose())
    }
}

/// Reduced row echelon form and pivot columns.
pub fn rref(m: &Matrix) -> (Matrix, Vec<usize>) {
    let k = m.field.clone();
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let Some(p) = (r..a.rows).find(|&i| !k.is_zero(a.get(i, c))) else {
            continue;
        };
        if p != r {
            for j in 0..a.cols {
                a.data.swap(p * a.cols + j, r * a.cols + j);
            }
        }
        let inv = k.inv(a.get(r, c)).expect("nonzero pivot");
        for j in c..a.cols {
            let v = k.mul(a.get(r, j), &inv);
            a.set(r, j, v);
        }
        for i in 0..a.rows {
            if i == r {
                continue;
            }
            let f = a.get(i, c).clone();
            if k.is_zero(&f) {
                continue;
            }
            for j in c..a.cols {
                let v = k.sub(a.get(i, j), &k.mul(&f, a.get(r, j)));
                a.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// `{v : m v = 0}`.
pub fn kernel(m: &Matrix) -> Subspace {
    let k = &m.field;
    let (r, pivots) = rref(m);
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    let vectors: Vec<Vec<Elem>> = free
        .iter()
        .map(|&f| {
            let mut v = vec![k.zero(); m.cols];
            v[f] = k.one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = k.neg(r.get(i, f));
            }
            v
        })
        .collect();
    Subspace::span(k, m.cols, &Matrix::from_rows(k, m.cols, vectors))
}

/// A particular solution of `m x = rhs` with free variables set to zero.
pub fn solve(m: &Matrix, rhs: &[Elem]) -> Result<Vec<Elem>> {
    if rhs.len() != m.rows {
        return Err(Error::DimensionMismatch {
            expected: m.rows,
            found: rhs.len(),
        });
    }
    let k = &m.field;
    let aug = Matrix::hstack(k, m.rows, &[m.clone(), Matrix::column(k, rhs.to_vec())]);
    let (r, pivots) = rref(&aug);
    if pivots.last() == Some(&m.cols) {
        return Err(Error::NoSolution);
    }
    let mut x = vec![k.zero(); m.cols];
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = r.get(i, m.cols).clone();
    }
    Ok(x)
}

pub fn intersect(a: &Subspace, b: &Subspace) -> Result<Subspace> {
    a.intersect(b)
}

/// `ker (t - λ I)^order`.
pub fn generalized_eigenspace(t: &Matrix, lambda: &Elem, order: usize) -> Result<Subspace> {
    if !t.is_square() {
        return Err(Error::NotSquare {
            rows: t.rows,
            cols: t.cols,
        });
    }
    let k = &t.field;
    let shifted = t.sub(&Matrix::identity(k, t.rows).scale(lambda));
    Ok(kernel(&shifted.pow(order.max(1))))
}

/// A subspace of `field^ambient`, stored by its RREF basis (rows).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    basis: Matrix,
}

impl Subspace {
    pub fn zero(field: &Field, ambient: usize) -> Self {
        Subspace {
            basis: Matrix::zeros(field, 0, ambient),
        }
    }

    pub fn full(field: &Field, ambient: usize) -> Self {
        Subspace {
            basis: Matrix::identity(field, ambient),
        }
    }

    /// Span of the rows of `vectors`.
    pub fn span(field: &Field, ambient: usize, vectors: &Matrix) -> Self {
        assert_eq!(vectors.cols, ambient, "span ambient dimension");
        let (r, pivots) = rref(vectors);
        let rows: Vec<usize> = (0..pivots.len()).collect();
        let cols: Vec<usize> = (0..ambient).collect();
        Subspace {
            basis: Matrix::from_fn(field, rows.len(), cols.len(), |i, j| r.get(i, j).clone()),
        }
    }

    pub fn field(&self) -> &Field {
        &self.basis.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    /// RREF basis, one vector per row.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    /// Pivot columns of the RREF basis.
    pub fn pivots(&self) -> Vec<usize> {
        let k = self.field();
        (0..self.dim())
            .map(|i| {
                self.basis
                    .row(i)
                    .iter()
                    .position(|e| !k.is_zero(e))
                    .expect("nonzero basis row")
            })
            .collect()
    }

    /// Coordinates of `v` in the stored basis, or `None` if `v` is outside.
    pub fn coords(&self, v: &[Elem]) -> Option<Vec<Elem>> {
        solve(&self.basis.transpose(), v).ok()
    }

    pub fn contains(&self, v: &[Elem]) -> bool {
        self.coords(v).is_some()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.row_vecs().iter().all(|v| self.contains(v))
    }

    /// Matrix whose kernel is this subspace.
    pub fn constraints(&self) -> Matrix {
        kernel(&self.basis).basis
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        if self.ambient_dim() != other.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                found: other.ambient_dim(),
            });
        }
        let n = self.ambient_dim();
        let stacked = Matrix::vstack(self.field(), n, &[self.constraints(), other.constraints()]);
        Ok(kernel(&stacked))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        if self.ambient_dim() != other.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                found: other.ambient_dim(),
            });
        }
        let n = self.ambient_dim();
        let stacked = Matrix::vstack(self.field(), n, &[self.basis.clone(), other.basis.clone()]);
        Ok(Subspace::span(self.field(), n, &stacked))
    }

    /// Matrix (in this basis) of a linear map that preserves the subspace:
    /// column `k` holds the coordinates of `m * b_k`.
    pub fn restrict_map(&self, m: &Matrix) -> Result<Matrix> {
        let cols = self
            .basis
            .row_vecs()
            .iter()
            .map(|b| self.coords(&m.mul_vec(b)).ok_or(Error::NoSolution))
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_rows(self.field(), self.dim(), cols).transpose())
    }
}
