use std::collections::BTreeMap;
use std::fmt;

use crate::linalg::Matrix;
use crate::scalar::Scalar;

pub(crate) fn ipow(d: usize, p: usize) -> usize {
    d.checked_pow(p as u32).expect("tensor dimension overflow")
}

/// Flat index of a tuple of 1-based labels; the first factor is the most
/// significant digit, so index order is lexicographic tuple order.
pub fn tuple_index(dim: usize, labels: &[usize]) -> Option<usize> {
    labels.iter().try_fold(0usize, |acc, &a| (1..=dim).contains(&a).then(|| acc * dim + (a - 1)))
}

/// Inverse of [`tuple_index`].
pub fn index_tuple(dim: usize, grade: usize, mut idx: usize) -> Vec<usize> {
    let mut out = vec![0; grade];
    for slot in out.iter_mut().rev() {
        *slot = idx % dim + 1;
        idx /= dim;
    }
    out
}

/// An element of `V^{⊗p}` stored as a sparse map from basis tuples to
/// coefficients. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Tensor {
    dim: usize,
    grade: usize,
    entries: BTreeMap<usize, Scalar>,
}

impl Tensor {
    pub fn zero(dim: usize, grade: usize) -> Self {
        Tensor { dim, grade, entries: BTreeMap::new() }
    }

    /// The grade-0 tensor `1`.
    pub fn unit(dim: usize) -> Self {
        Self::from_index(dim, 0, 0, Scalar::one())
    }

    /// `e_{a_1} ⊗ ... ⊗ e_{a_p}` with 1-based labels; `None` if a label is out of range.
    pub fn basis(dim: usize, labels: &[usize]) -> Option<Self> {
        let idx = tuple_index(dim, labels)?;
        Some(Self::from_index(dim, labels.len(), idx, Scalar::one()))
    }

    pub fn from_index(dim: usize, grade: usize, idx: usize, coef: Scalar) -> Self {
        let mut t = Self::zero(dim, grade);
        t.add_at(idx, &coef);
        t
    }

    /// Builds from `(labels, coefficient)` pairs; panics on labels of the wrong
    /// grade or out of range.
    pub fn from_terms<'a, I>(dim: usize, grade: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (&'a [usize], Scalar)>,
    {
        let mut t = Self::zero(dim, grade);
        for (labels, c) in terms {
            assert_eq!(labels.len(), grade, "tuple length must equal the grade");
            t.add_at(tuple_index(dim, labels).expect("label out of range"), &c);
        }
        t
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Coefficient of the basis tuple with the given 1-based labels.
    pub fn coefficient(&self, labels: &[usize]) -> Scalar {
        tuple_index(self.dim, labels)
            .and_then(|i| self.entries.get(&i).cloned())
            .unwrap_or_else(Scalar::zero)
    }

    pub fn coefficient_at(&self, idx: usize) -> Scalar {
        self.entries.get(&idx).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Stored `(flat index, coefficient)` pairs in lexicographic order.
    pub fn raw_entries(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.entries.iter().map(|(k, v)| (*k, v))
    }

    /// Stored `(labels, coefficient)` pairs in lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (Vec<usize>, &Scalar)> + '_ {
        self.entries.iter().map(|(k, v)| (index_tuple(self.dim, self.grade, *k), v))
    }

    pub fn add_at(&mut self, idx: usize, coef: &Scalar) {
        if coef.is_zero() {
            return;
        }
        debug_assert!(idx < ipow(self.dim, self.grade));
        match self.entries.get_mut(&idx) {
            Some(v) => {
                *v += coef;
                if v.is_zero() {
                    self.entries.remove(&idx);
                }
            }
            None => {
                self.entries.insert(idx, coef.clone());
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Tensor, c: &Scalar) {
        assert_eq!((self.dim, self.grade), (other.dim, other.grade));
        if c.is_zero() {
            return;
        }
        for (k, v) in &other.entries {
            self.add_at(*k, &(v * c));
        }
    }

    pub fn add(&self, other: &Tensor) -> Tensor {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::one());
        out
    }

    pub fn sub(&self, other: &Tensor) -> Tensor {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::from_int(-1));
        out
    }

    pub fn scale(&self, c: &Scalar) -> Tensor {
        let mut out = Tensor::zero(self.dim, self.grade);
        out.add_scaled(self, c);
        out
    }

    /// The tensor product `self ⊗ other` in `V^{⊗(p+r)}`.
    pub fn concat(&self, other: &Tensor) -> Tensor {
        assert_eq!(self.dim, other.dim);
        let shift = ipow(self.dim, other.grade);
        let mut out = Tensor::zero(self.dim, self.grade + other.grade);
        for (a, x) in &self.entries {
            for (b, y) in &other.entries {
                out.add_at(a * shift + b, &(x * y));
            }
        }
        out
    }

    pub fn to_dense(&self) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); ipow(self.dim, self.grade)];
        for (k, c) in &self.entries {
            v[*k] = c.clone();
        }
        v
    }

    pub fn from_dense(dim: usize, grade: usize, v: &[Scalar]) -> Tensor {
        assert_eq!(v.len(), ipow(dim, grade));
        let mut t = Tensor::zero(dim, grade);
        for (k, c) in v.iter().enumerate() {
            t.add_at(k, c);
        }
        t
    }
}

impl fmt::Debug for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `(q^-1)*e1⊗e2 + e2⊗e1` style rendering.
impl fmt::Display for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "0");
        }
        for (k, (labels, c)) in self.terms().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let word = if labels.is_empty() {
                "1".to_string()
            } else {
                labels.iter().map(|a| format!("e{a}")).collect::<Vec<_>>().join("⊗")
            };
            if c.is_one() {
                write!(f, "{word}")?;
            } else {
                write!(f, "({c})*{word}")?;
            }
        }
        Ok(())
    }
}

/// A linear operator on `V^{⊗p}`, stored as sparse columns.
#[derive(Clone, PartialEq, Eq)]
pub struct TensorOperator {
    dim: usize,
    grade: usize,
    cols: Vec<BTreeMap<usize, Scalar>>,
}

impl TensorOperator {
    pub fn zero(dim: usize, grade: usize) -> Self {
        TensorOperator { dim, grade, cols: vec![BTreeMap::new(); ipow(dim, grade)] }
    }

    pub fn identity(dim: usize, grade: usize) -> Self {
        let mut op = Self::zero(dim, grade);
        for (k, col) in op.cols.iter_mut().enumerate() {
            col.insert(k, Scalar::one());
        }
        op
    }

    /// Builds the operator column by column from the images of basis tensors.
    pub fn from_columns(dim: usize, grade: usize, mut image: impl FnMut(usize) -> Tensor) -> Self {
        let cols = (0..ipow(dim, grade))
            .map(|k| {
                let t = image(k);
                debug_assert_eq!((t.dim, t.grade), (dim, grade));
                t.entries
            })
            .collect();
        TensorOperator { dim, grade, cols }
    }

    pub fn from_matrix(dim: usize, grade: usize, m: &Matrix) -> Self {
        let n = ipow(dim, grade);
        assert_eq!((m.rows(), m.cols()), (n, n));
        Self::from_columns(dim, grade, |j| Tensor::from_dense(dim, grade, &m.column(j)))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    /// Side length `d^p`.
    pub fn size(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, j: usize) -> Tensor {
        Tensor { dim: self.dim, grade: self.grade, entries: self.cols[j].clone() }
    }

    pub fn entry(&self, i: usize, j: usize) -> Scalar {
        self.cols[j].get(&i).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    pub fn nonzero_count(&self) -> usize {
        self.cols.iter().map(|c| c.len()).sum()
    }

    pub fn apply(&self, x: &Tensor) -> Tensor {
        assert_eq!((x.dim, x.grade), (self.dim, self.grade));
        let mut out = Tensor::zero(self.dim, self.grade);
        for (j, c) in &x.entries {
            for (i, a) in &self.cols[*j] {
                out.add_at(*i, &(a * c));
            }
        }
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &TensorOperator) -> TensorOperator {
        assert_eq!((self.dim, self.grade), (other.dim, other.grade));
        let cols = other
            .cols
            .iter()
            .map(|col| {
                let t = Tensor { dim: self.dim, grade: self.grade, entries: col.clone() };
                self.apply(&t).entries
            })
            .collect();
        TensorOperator { dim: self.dim, grade: self.grade, cols }
    }

    pub fn add(&self, other: &TensorOperator) -> TensorOperator {
        self.lin_comb(other, &Scalar::one())
    }

    pub fn sub(&self, other: &TensorOperator) -> TensorOperator {
        self.lin_comb(other, &Scalar::from_int(-1))
    }

    fn lin_comb(&self, other: &TensorOperator, c: &Scalar) -> TensorOperator {
        assert_eq!((self.dim, self.grade), (other.dim, other.grade));
        let cols = self
            .cols
            .iter()
            .zip(&other.cols)
            .map(|(a, b)| {
                let mut t = Tensor { dim: self.dim, grade: self.grade, entries: a.clone() };
                t.add_scaled(&Tensor { dim: self.dim, grade: self.grade, entries: b.clone() }, c);
                t.entries
            })
            .collect();
        TensorOperator { dim: self.dim, grade: self.grade, cols }
    }

    pub fn scale(&self, c: &Scalar) -> TensorOperator {
        TensorOperator::zero(self.dim, self.grade).lin_comb(self, c)
    }

    /// `self ⊗ id_V`, acting on `V^{⊗(p+1)}`.
    pub fn tensor_identity(&self) -> TensorOperator {
        let d = self.dim;
        let cols = (0..self.size() * d)
            .map(|j| self.cols[j / d].iter().map(|(i, a)| (i * d + j % d, a.clone())).collect())
            .collect();
        TensorOperator { dim: d, grade: self.grade + 1, cols }
    }

    pub fn to_matrix(&self) -> Matrix {
        let n = self.size();
        let mut m = Matrix::zeros(n, n);
        for (j, col) in self.cols.iter().enumerate() {
            for (i, a) in col {
                m[(*i, j)] = a.clone();
            }
        }
        m
    }
}

impl fmt::Debug for TensorOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "TensorOperator(d={}, p={}) {{", self.dim, self.grade)?;
        for (j, col) in self.cols.iter().enumerate() {
            if !col.is_empty() {
                let t = Tensor { dim: self.dim, grade: self.grade, entries: col.clone() };
                writeln!(f, "  {:?} -> {}", index_tuple(self.dim, self.grade, j), t)?;
            }
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_round_trip() {
        for idx in 0..27 {
            let t = index_tuple(3, 3, idx);
            assert_eq!(tuple_index(3, &t), Some(idx));
        }
        assert_eq!(tuple_index(2, &[3]), None);
        assert_eq!(tuple_index(2, &[]), Some(0));
    }

    #[test]
    fn concat_and_zero_cleanup() {
        let a = Tensor::basis(2, &[1]).unwrap();
        let b = Tensor::basis(2, &[2]).unwrap();
        let ab = a.concat(&b);
        assert_eq!(ab, Tensor::basis(2, &[1, 2]).unwrap());
        assert!(ab.sub(&ab).is_zero());
        assert_eq!(Tensor::unit(2).concat(&a), a);
    }

    #[test]
    fn tensor_identity_matches_kron() {
        let m = Matrix::from_fn(2, 2, |i, j| Scalar::from_int((i * 2 + j) as i64));
        let op = TensorOperator::from_matrix(2, 1, &m);
        assert_eq!(op.tensor_identity().to_matrix(), m.kron(&Matrix::identity(2)));
    }
}
