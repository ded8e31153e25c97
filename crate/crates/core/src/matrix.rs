//! Dense matrices over a (possibly noncommutative) ring.

use std::fmt;

use crate::numfield::FieldElement;

/// Ring operations needed by the dense matrix code.
///
/// Elements carry their own parent (tower or division algebra), so identities
/// are produced from an existing element.
pub trait Ring: Clone + PartialEq + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
}

/// Rings where invertibility can be decided elementwise.
pub trait DivisionRing: Ring {
    /// `None` for zero (and for zero divisors, when the ring is not a division ring).
    fn try_inv(&self) -> Option<Self>;
}

/// Rings with an anti-automorphism of order at most two.
pub trait InvolutiveRing: Ring {
    fn conj(&self) -> Self;
}

impl Ring for FieldElement {
    fn zero_like(&self) -> Self {
        FieldElement::zero(self.tower())
    }
    fn one_like(&self) -> Self {
        FieldElement::one(self.tower())
    }
    fn is_zero(&self) -> bool {
        FieldElement::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        FieldElement::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        FieldElement::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        FieldElement::mul(self, other)
    }
    fn neg(&self) -> Self {
        FieldElement::neg(self)
    }
}

impl DivisionRing for FieldElement {
    fn try_inv(&self) -> Option<Self> {
        FieldElement::try_inv(self).ok()
    }
}

impl InvolutiveRing for FieldElement {
    fn conj(&self) -> Self {
        self.clone()
    }
}

#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Ring> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize, template: &T) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![template.zero_like(); rows * cols],
        }
    }

    pub fn identity(n: usize, template: &T) -> Self {
        let mut m = Self::zeros(n, n, template);
        for i in 0..n {
            m.data[i * n + i] = template.one_like();
        }
        m
    }

    pub fn diagonal(entries: &[T]) -> Self {
        assert!(
            !entries.is_empty(),
            "diagonal matrix needs at least one entry"
        );
        let n = entries.len();
        let mut m = Self::zeros(n, n, &entries[0]);
        for (i, e) in entries.iter().enumerate() {
            m.data[i * n + i] = e.clone();
        }
        m
    }

    /// Builds from row vectors; all rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
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

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self.data[i * self.cols + j] = value;
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Ring::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn diagonal_entries(&self) -> Vec<T> {
        (0..self.rows.min(self.cols))
            .map(|i| self.get(i, i).clone())
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "matrix shape mismatch"
        );
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.add(b))
            .collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "matrix shape mismatch"
        );
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.sub(b))
            .collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn neg(&self) -> Self {
        self.map(Ring::neg)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let template = self
            .data
            .first()
            .or(other.data.first())
            .expect("nonempty matrix");
        let mut out = Self::zeros(self.rows, other.cols, template);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    out.data[idx] = out.data[idx].add(&a.mul(b));
                }
            }
        }
        out
    }

    /// `c * self`, multiplying every entry on the left.
    pub fn scale_left(&self, c: &T) -> Self {
        self.map(|x| c.mul(x))
    }

    /// `self * c`, multiplying every entry on the right.
    pub fn scale_right(&self, c: &T) -> Self {
        self.map(|x| x.mul(c))
    }

    pub fn submatrix(&self, row0: usize, col0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| self.get(row0 + i, col0 + j).clone())
    }

    pub fn set_block(&mut self, row0: usize, col0: usize, block: &Self) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(row0 + i, col0 + j, block.get(i, j).clone());
            }
        }
    }

    pub fn block_diag(blocks: &[Self]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let template = blocks
            .iter()
            .find_map(|b| b.data.first())
            .expect("nonempty blocks");
        let mut out = Self::zeros(rows, cols, template);
        let (mut r, mut c) = (0, 0);
        for b in blocks {
            out.set_block(r, c, b);
            r += b.rows;
            c += b.cols;
        }
        out
    }

    /// Kronecker product where `f(a, b)` combines an entry of `self` with one of `other`.
    pub fn kron_with<U: Ring>(&self, other: &Matrix<U>, f: impl Fn(&T, &U) -> U) -> Matrix<U> {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        Matrix::from_fn(rows, cols, |i, j| {
            f(
                self.get(i / other.rows, j / other.cols),
                other.get(i % other.rows, j % other.cols),
            )
        })
    }

    /// Block-diagonal `I_k (x) self`.
    pub fn repeat_diag(&self, k: usize) -> Self {
        Self::block_diag(&vec![self.clone(); k])
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }
}

impl<T: InvolutiveRing> Matrix<T> {
    /// Entrywise involution followed by transposition.
    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }
}

impl<T: DivisionRing> Matrix<T> {
    /// Inverse by Gauss-Jordan elimination with left multiplication by pivot inverses.
    ///
    /// Pivots are the first entry in the column that `try_inv` accepts, so over a
    /// ring with zero divisors this may return `None` for an invertible matrix.
    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square(), "inverse of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Some(self.clone());
        }
        let mut a = self.clone();
        let mut inv = Self::identity(n, &self.data[0]);
        for col in 0..n {
            let (pivot_row, pivot_inv) =
                (col..n).find_map(|r| a.get(r, col).try_inv().map(|p| (r, p)))?;
            a.swap_rows(col, pivot_row);
            inv.swap_rows(col, pivot_row);
            for j in 0..n {
                let x = pivot_inv.mul(a.get(col, j));
                a.set(col, j, x);
                let y = pivot_inv.mul(inv.get(col, j));
                inv.set(col, j, y);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a.get(r, col).clone();
                if factor.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let x = a.get(r, j).sub(&factor.mul(a.get(col, j)));
                    a.set(r, j, x);
                    let y = inv.get(r, j).sub(&factor.mul(inv.get(col, j)));
                    inv.set(r, j, y);
                }
            }
        }
        Some(inv)
    }
}

/// Reduced row echelon form over a field; returns the pivot columns.
pub fn row_reduce(m: &mut Matrix<FieldElement>) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m.cols() {
        if row == m.rows() {
            break;
        }
        let Some(p) = (row..m.rows()).find(|&r| !m.get(r, col).is_zero()) else {
            continue;
        };
        m.swap_rows(row, p);
        let inv = m.get(row, col).try_inv().expect("nonzero pivot");
        for j in 0..m.cols() {
            let x = m.get(row, j).mul(&inv);
            m.set(row, j, x);
        }
        for r in 0..m.rows() {
            if r == row || m.get(r, col).is_zero() {
                continue;
            }
            let factor = m.get(r, col).clone();
            for j in 0..m.cols() {
                let x = m.get(r, j).sub(&factor.mul(m.get(row, j)));
                m.set(r, j, x);
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// Solves `m x = b` over a field for square invertible `m`.
pub fn solve(m: &Matrix<FieldElement>, b: &[FieldElement]) -> Option<Vec<FieldElement>> {
    let n = m.rows();
    let mut aug = Matrix::from_fn(n, n + 1, |i, j| {
        if j < n {
            m.get(i, j).clone()
        } else {
            b[i].clone()
        }
    });
    let pivots = row_reduce(&mut aug);
    if pivots.len() != n || pivots.last() == Some(&n) {
        return None;
    }
    Some((0..n).map(|i| aug.get(i, n).clone()).collect())
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{:?}", self.data[i * self.cols + j])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::FieldTower;

    fn int_matrix(t: &FieldTower, rows: &[&[i64]]) -> Matrix<FieldElement> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| {
                    r.iter()
                        .map(|&x| FieldElement::from_integer(t, x))
                        .collect()
                })
                .collect(),
        )
    }

    #[test]
    fn inverse_over_rationals() {
        let q = FieldTower::rationals();
        let m = int_matrix(&q, &[&[0, 1, 2], &[1, 0, 3], &[4, -3, 8]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(3, &FieldElement::one(&q)));
        let singular = int_matrix(&q, &[&[1, 2], &[2, 4]]);
        assert!(singular.inverse().is_none());
    }

    #[test]
    fn solve_linear_system() {
        let t = FieldTower::from_rational_radicands(&[2]).unwrap();
        let m = int_matrix(&t, &[&[2, 1], &[1, 3]]);
        let b = vec![t.generator(0), FieldElement::one(&t)];
        let x = solve(&m, &b).unwrap();
        assert_eq!(m.get(0, 0).mul(&x[0]).add(&m.get(0, 1).mul(&x[1])), b[0]);
        assert_eq!(m.get(1, 0).mul(&x[0]).add(&m.get(1, 1).mul(&x[1])), b[1]);
    }

    #[test]
    fn block_and_kronecker() {
        let q = FieldTower::rationals();
        let a = int_matrix(&q, &[&[1, 2]]);
        let b = int_matrix(&q, &[&[3], &[4]]);
        let d = Matrix::block_diag(&[a.clone(), b.clone()]);
        assert_eq!((d.rows(), d.cols()), (3, 3));
        let k = a.kron_with(&b, |x, y| x.mul(y));
        assert_eq!(k, int_matrix(&q, &[&[3, 6], &[4, 8]]));
    }
}
