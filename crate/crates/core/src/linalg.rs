//! Dense matrices over Q(q) and the elimination routines built on them.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix is singular")]
    Singular,
    #[error("shape mismatch: {0}x{1} vs {2}x{3}")]
    Shape(usize, usize, usize, usize),
}

/// Row-major dense matrix of scalars.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for k in 0..n {
            m[(k, k)] = Scalar::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if let Some(bad) = rows.iter().find(|x| x.len() != c) {
            return Err(LinalgError::Shape(r, c, 1, bad.len()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// The matrix unit with a single 1 at `(i, j)`.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m[(i, j)] = Scalar::one();
        m
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

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        if c.is_zero() {
            return Matrix::zeros(self.rows, self.cols);
        }
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn trace(&self) -> Scalar {
        (0..self.rows.min(self.cols)).map(|k| &self[(k, k)]).sum()
    }

    pub fn checked_mul(&self, rhs: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != rhs.rows {
            return Err(LinalgError::Shape(self.rows, self.cols, rhs.rows, rhs.cols));
        }
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn pow(&self, e: u32) -> Matrix {
        let mut acc = Matrix::identity(self.rows);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Kronecker product `self ⊗ rhs`, rows/columns ordered lexicographically.
    pub fn kron(&self, rhs: &Matrix) -> Matrix {
        Matrix::from_fn(self.rows * rhs.rows, self.cols * rhs.cols, |i, j| {
            let a = &self[(i / rhs.rows, j / rhs.cols)];
            if a.is_zero() {
                return Scalar::zero();
            }
            a * &rhs[(i % rhs.rows, j % rhs.cols)]
        })
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<Matrix, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::Shape(self.rows, self.cols, self.cols, self.rows));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .filter(|&r| !a[(r, col)].is_zero())
                .min_by_key(|&r| a[(r, col)].term_count())
                .ok_or(LinalgError::Singular)?;
            a.swap_rows(col, pivot);
            inv.swap_rows(col, pivot);
            let p = a[(col, col)].inv().expect("nonzero pivot");
            a.scale_row(col, &p);
            inv.scale_row(col, &p);
            for r in 0..n {
                if r != col && !a[(r, col)].is_zero() {
                    let f = a[(r, col)].clone();
                    a.sub_row_multiple(r, col, &f);
                    inv.sub_row_multiple(r, col, &f);
                }
            }
        }
        Ok(inv)
    }

    pub fn rank(&self) -> usize {
        let mut basis = EchelonBasis::new(self.rows);
        (0..self.cols).filter(|&j| basis.insert(self.column(j)).is_some()).count()
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn scale_row(&mut self, r: usize, c: &Scalar) {
        for j in 0..self.cols {
            let v = &self[(r, j)] * c;
            self[(r, j)] = v;
        }
    }

    /// row[r] -= f * row[src]
    fn sub_row_multiple(&mut self, r: usize, src: usize, f: &Scalar) {
        for j in 0..self.cols {
            let s = &self[(src, j)];
            if !s.is_zero() {
                let v = &self[(r, j)] - &(f * s);
                self[(r, j)] = v;
            }
        }
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.checked_mul(rhs).expect("matrix shape mismatch")
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| -a).collect() }
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Incrementally built echelon form of a set of column vectors, using
/// fraction-free updates `v <- p*v - v[piv]*e`. The pivot of each new
/// vector is its entry with the fewest terms, which keeps coefficient
/// growth in Q(q) small.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    len: usize,
    vectors: Vec<(usize, Vec<Scalar>)>,
}

impl EchelonBasis {
    pub fn new(len: usize) -> Self {
        EchelonBasis { len, vectors: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    /// Pivot positions in insertion order.
    pub fn pivots(&self) -> Vec<usize> {
        self.vectors.iter().map(|v| v.0).collect()
    }

    /// Residual of `v` after elimination against the stored vectors; zero
    /// exactly when `v` lies in their span.
    pub fn reduce(&self, mut v: Vec<Scalar>) -> Vec<Scalar> {
        assert_eq!(v.len(), self.len);
        for (piv, e) in &self.vectors {
            if v[*piv].is_zero() {
                continue;
            }
            let f = v[*piv].clone();
            let p = &e[*piv];
            for (x, y) in v.iter_mut().zip(e) {
                if y.is_zero() {
                    *x = &*x * p;
                } else if x.is_zero() {
                    *x = -(&f * y);
                } else {
                    *x = &(&*x * p) - &(&f * y);
                }
            }
            remove_content(&mut v);
        }
        v
    }

    /// Adds `v` if it is independent of the stored vectors, returning the
    /// chosen pivot position.
    pub fn insert(&mut self, v: Vec<Scalar>) -> Option<usize> {
        let r = self.reduce(v);
        let piv = r
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .min_by_key(|(k, x)| (x.term_count(), *k))
            .map(|(k, _)| k)?;
        self.vectors.push((piv, r));
        Some(piv)
    }
}

/// Divides out a common monomial or constant factor when every entry is a
/// Laurent polynomial.
fn remove_content(v: &mut [Scalar]) {
    let nz: Vec<&Scalar> = v.iter().filter(|x| !x.is_zero()).collect();
    if nz.is_empty() || !nz.iter().all(|x| x.is_laurent()) {
        return;
    }
    let low = nz.iter().map(|x| x.numerator().lowest_exponent().unwrap()).min().unwrap();
    let lead = nz[0].numerator().lowest_coefficient().unwrap().clone();
    if low == 0 && num::One::is_one(&lead) {
        return;
    }
    let f = Scalar::q_pow(low) * Scalar::from_rational(lead);
    let inv = f.inv().unwrap();
    for x in v.iter_mut() {
        if !x.is_zero() {
            *x = &*x * &inv;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> Scalar {
        x.parse().unwrap()
    }

    fn m(rows: &[&[&str]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|x| s(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(&[&["1", "q"], &["1 - q", "2"]]);
        let inv = a.inverse().unwrap();
        assert_eq!(&a * &inv, Matrix::identity(2));
        assert_eq!(&inv * &a, Matrix::identity(2));
    }

    #[test]
    fn singular_detected() {
        let a = m(&[&["1", "q"], &["q^-1", "1"]]);
        assert_eq!(a.inverse(), Err(LinalgError::Singular));
        assert_eq!(a.rank(), 1);
        assert!(!a.is_invertible());
    }

    #[test]
    fn echelon_membership() {
        let mut b = EchelonBasis::new(3);
        assert!(b.insert(vec![s("1"), s("q"), s("0")]).is_some());
        assert!(b.insert(vec![s("q"), s("q^2"), s("0")]).is_none());
        assert!(b.insert(vec![s("0"), s("1"), s("1 + q")]).is_some());
        let r = b.reduce(vec![s("1"), s("q + 1"), s("1 + q")]);
        assert!(r.iter().all(Scalar::is_zero));
        assert_eq!(b.rank(), 2);
    }

    #[test]
    fn kron_of_identities() {
        assert_eq!(Matrix::identity(2).kron(&Matrix::identity(3)), Matrix::identity(6));
    }
}
