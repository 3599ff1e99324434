//! Braidings on `V ⊗ V`, the operators they induce on tensor powers, braid
//! lifts of permutations and quantum symmetrizers.

mod document;
mod tensor;

use std::fmt;

use thiserror::Error;

use crate::linalg::Matrix;
use crate::perm::{self, Perm, PermError};
use crate::scalar::Scalar;

pub use document::{parse_braiding_document, BraidingDocError};
pub use tensor::{index_tuple, tuple_index, Tensor, TensorOperator};
pub(crate) use tensor::ipow;

/// Which braiding axioms hold for a candidate matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub invertible: bool,
    pub yang_baxter: bool,
    pub quadratic: bool,
}

impl AxiomReport {
    pub fn all_hold(&self) -> bool {
        self.invertible && self.yang_baxter && self.quadratic
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = |b: bool| if b { "ok" } else { "FAILS" };
        write!(
            f,
            "invertible: {}, Yang-Baxter: {}, quadratic relation: {}",
            mark(self.invertible),
            mark(self.yang_baxter),
            mark(self.quadratic)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BraidingError {
    #[error("braiding matrix must be d^2 x d^2, got {0}x{1}")]
    Shape(usize, usize),
    #[error("braiding axioms violated ({0})")]
    Axioms(AxiomReport),
    #[error("Hecke parameter must be nonzero")]
    ZeroParameter,
    #[error("braiding is not in Hecke form (σ+id)(σ-ν·id)=0; negate it first")]
    NotHecke,
    #[error("position {i} out of range for grade {p}")]
    PositionOutOfRange { i: usize, p: usize },
    #[error("permutation size {w} does not match grade {p}")]
    GradeMismatch { w: usize, p: usize },
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// The braidings shipped with the library.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Builtin {
    /// `-c` for the type-A braiding `c`, Hecke with `ν = q^-2`.
    SlExterior,
    /// `-c^∨` for the dual braiding, Hecke with `ν = q^2`.
    SlDual,
    /// The flip `e_a ⊗ e_b ↦ e_b ⊗ e_a`, Hecke with `ν = 1`.
    Flip,
}

impl Builtin {
    pub fn name(self) -> &'static str {
        match self {
            Builtin::SlExterior => "sl-exterior",
            Builtin::SlDual => "sl-dual",
            Builtin::Flip => "flip",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "sl-exterior" => Some(Builtin::SlExterior),
            "sl-dual" => Some(Builtin::SlDual),
            "flip" => Some(Builtin::Flip),
            _ => None,
        }
    }

    /// The braiding on `V = C^{N+1}`.
    pub fn build(self, n: usize) -> Braiding {
        match self {
            Builtin::SlExterior => builtin_c(n).negate().expect("-c is a braiding"),
            Builtin::SlDual => builtin_c_dual(n).negate().expect("-c^∨ is a braiding"),
            Builtin::Flip => flip(n + 1),
        }
    }
}

/// An invertible operator on `V ⊗ V` satisfying the Yang-Baxter equation and
/// a quadratic relation `(σ - λ1)(σ - λ2) = 0`.
///
/// The matrix acts on `e_a ⊗ e_b` ordered lexicographically; column `(a, b)`
/// holds the image of `e_a ⊗ e_b`.
#[derive(Clone, PartialEq, Eq)]
pub struct Braiding {
    dim: usize,
    matrix: Matrix,
    eigenvalues: (Scalar, Scalar),
    cols: Vec<Vec<(usize, Scalar)>>,
}

impl fmt::Debug for Braiding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Braiding")
            .field("dim", &self.dim)
            .field("eigenvalues", &(self.eigenvalues.0.to_string(), self.eigenvalues.1.to_string()))
            .finish_non_exhaustive()
    }
}

/// Validates `matrix` as a Hecke braiding `(σ + id)(σ - ν·id) = 0`.
pub fn validate_braiding(matrix: Matrix, nu: Scalar) -> Result<Braiding, BraidingError> {
    if nu.is_zero() {
        return Err(BraidingError::ZeroParameter);
    }
    Braiding::with_quadratic(matrix, Scalar::from_int(-1), nu)
}

impl Braiding {
    /// Validates `matrix` against the relation `(σ - λ1)(σ - λ2) = 0`.
    pub fn with_quadratic(matrix: Matrix, l1: Scalar, l2: Scalar) -> Result<Self, BraidingError> {
        let b = Self::unchecked(matrix, l1, l2)?;
        let report = b.check_axioms();
        if report.all_hold() {
            Ok(b)
        } else {
            Err(BraidingError::Axioms(report))
        }
    }

    fn unchecked(matrix: Matrix, l1: Scalar, l2: Scalar) -> Result<Self, BraidingError> {
        let n = matrix.rows();
        let dim = (n as f64).sqrt().round() as usize;
        if !matrix.is_square() || dim * dim != n || dim == 0 {
            return Err(BraidingError::Shape(matrix.rows(), matrix.cols()));
        }
        let cols = (0..n)
            .map(|j| (0..n).filter(|&i| !matrix[(i, j)].is_zero()).map(|i| (i, matrix[(i, j)].clone())).collect())
            .collect();
        Ok(Braiding { dim, matrix, eigenvalues: (l1, l2), cols })
    }

    /// Evaluates every axiom without short-circuiting.
    pub fn check_axioms(&self) -> AxiomReport {
        let id = Matrix::identity(self.matrix.rows());
        let a = &self.matrix - &id.scale(&self.eigenvalues.0);
        let b = &self.matrix - &id.scale(&self.eigenvalues.1);
        AxiomReport {
            invertible: self.matrix.is_invertible(),
            yang_baxter: self.satisfies_yang_baxter(),
            quadratic: (&a * &b).is_zero(),
        }
    }

    /// `σ_1 σ_2 σ_1 = σ_2 σ_1 σ_2` on `V^{⊗3}`.
    pub fn satisfies_yang_baxter(&self) -> bool {
        (0..ipow(self.dim, 3)).all(|k| {
            let e = Tensor::from_index(self.dim, 3, k, Scalar::one());
            self.apply_word(&[1, 2, 1], &e) == self.apply_word(&[2, 1, 2], &e)
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// The two roots of the quadratic relation.
    pub fn eigenvalues(&self) -> (&Scalar, &Scalar) {
        (&self.eigenvalues.0, &self.eigenvalues.1)
    }

    /// `ν` such that `(σ + id)(σ - ν·id) = 0`, if the relation has a root `-1`.
    pub fn hecke_param(&self) -> Option<Scalar> {
        let minus_one = Scalar::from_int(-1);
        if self.eigenvalues.0 == minus_one {
            Some(self.eigenvalues.1.clone())
        } else if self.eigenvalues.1 == minus_one {
            Some(self.eigenvalues.0.clone())
        } else {
            None
        }
    }

    /// `ν`, or [`BraidingError::NotHecke`].
    pub fn require_hecke(&self) -> Result<Scalar, BraidingError> {
        self.hecke_param().ok_or(BraidingError::NotHecke)
    }

    /// `-σ`, whose quadratic relation has the negated roots. Re-validated.
    pub fn negate(&self) -> Result<Braiding, BraidingError> {
        Braiding::with_quadratic(-&self.matrix, -&self.eigenvalues.0, -&self.eigenvalues.1)
    }

    /// Applies `σ` to tensor factors `i, i+1` (1-based).
    pub fn apply_at(&self, i: usize, x: &Tensor) -> Tensor {
        let p = x.grade();
        assert!(i >= 1 && i < p, "position {i} out of range for grade {p}");
        let d = self.dim;
        let stride = ipow(d, p - i - 1);
        let mut out = Tensor::zero(d, p);
        for (idx, c) in x.raw_entries() {
            let pair = (idx / stride) % (d * d);
            let base = idx - pair * stride;
            for (row, a) in &self.cols[pair] {
                out.add_at(base + row * stride, &(a * c));
            }
        }
        out
    }

    /// `σ_{i_1} ⋯ σ_{i_l}` applied to `x`, rightmost letter first.
    pub fn apply_word(&self, letters: &[usize], x: &Tensor) -> Tensor {
        letters.iter().rev().fold(x.clone(), |acc, &i| self.apply_at(i, &acc))
    }

    /// `T_w x` along the canonical reduced word of `w`.
    pub fn apply_lift(&self, w: &Perm, x: &Tensor) -> Tensor {
        assert_eq!(w.size(), x.grade());
        self.apply_word(&w.reduced_word().letters, x)
    }
}

/// `id^{⊗(i-1)} ⊗ σ ⊗ id^{⊗(p-i-1)}` on `V^{⊗p}`.
pub fn sigma_i(b: &Braiding, p: usize, i: usize) -> Result<TensorOperator, BraidingError> {
    if i == 0 || i >= p {
        return Err(BraidingError::PositionOutOfRange { i, p });
    }
    Ok(TensorOperator::from_columns(b.dim, p, |k| {
        b.apply_at(i, &Tensor::from_index(b.dim, p, k, Scalar::one()))
    }))
}

/// Operator of a word in the `σ_i`.
pub fn word_operator(b: &Braiding, p: usize, letters: &[usize]) -> Result<TensorOperator, BraidingError> {
    if let Some(&i) = letters.iter().find(|&&i| i == 0 || i >= p) {
        return Err(BraidingError::PositionOutOfRange { i, p });
    }
    Ok(TensorOperator::from_columns(b.dim, p, |k| {
        b.apply_word(letters, &Tensor::from_index(b.dim, p, k, Scalar::one()))
    }))
}

/// The braid lift `T_w = σ_{i_1} ⋯ σ_{i_l}` of `w` along its canonical reduced word.
pub fn braid_lift(b: &Braiding, w: &Perm) -> TensorOperator {
    word_operator(b, w.size(), &w.reduced_word().letters).expect("reduced word letters are in range")
}

/// The quantum symmetrizer `A^{(p)} = Σ_{w ∈ S_p} T_w`.
///
/// Assembled through the coset factorization
/// `A^{(p)} = (1 + σ_{p-1} + σ_{p-2}σ_{p-1} + ... + σ_1⋯σ_{p-1}) (A^{(p-1)} ⊗ id)`,
/// which is the same sum grouped by minimal coset representatives.
pub fn symmetrizer(b: &Braiding, p: usize) -> Result<TensorOperator, BraidingError> {
    symmetrizer_bounded(b, p, perm::DEFAULT_ENUMERATION_BOUND)
}

pub fn symmetrizer_bounded(b: &Braiding, p: usize, bound: usize) -> Result<TensorOperator, BraidingError> {
    Ok(symmetrizers_up_to(b, p, bound)?.pop().unwrap())
}

/// `A^{(0)}, ..., A^{(p)}`.
pub fn symmetrizers_up_to(b: &Braiding, p: usize, bound: usize) -> Result<Vec<TensorOperator>, BraidingError> {
    if p > bound {
        return Err(PermError::BoundExceeded { p, bound }.into());
    }
    let d = b.dim;
    let mut out = vec![TensorOperator::identity(d, 0)];
    for k in 1..=p {
        let lifted = out[k - 1].tensor_identity();
        let next = TensorOperator::from_columns(d, k, |j| {
            let x = lifted.column(j);
            let mut acc = x.clone();
            let mut y = x;
            for pos in (1..k).rev() {
                if y.is_zero() {
                    break;
                }
                y = b.apply_at(pos, &y);
                acc.add_scaled(&y, &Scalar::one());
            }
            acc
        });
        out.push(next);
    }
    Ok(out)
}

/// `Σ_{w ∈ S_p} T_w` summed literally over the enumerated group.
pub fn symmetrizer_by_enumeration(b: &Braiding, p: usize) -> Result<TensorOperator, BraidingError> {
    let group = perm::enumerate_group(p)?;
    Ok(TensorOperator::from_columns(b.dim, p, |k| {
        let e = Tensor::from_index(b.dim, p, k, Scalar::one());
        let mut acc = Tensor::zero(b.dim, p);
        for w in &group {
            acc.add_scaled(&b.apply_lift(w, &e), &Scalar::one());
        }
        acc
    }))
}

fn square_matrix_from_action(d: usize, mut image: impl FnMut(usize, usize) -> Vec<((usize, usize), Scalar)>) -> Matrix {
    let mut m = Matrix::zeros(d * d, d * d);
    for i in 1..=d {
        for j in 1..=d {
            for ((a, b), v) in image(i, j) {
                m[((a - 1) * d + (b - 1), (i - 1) * d + (j - 1))] = v;
            }
        }
    }
    m
}

/// The type-A braiding `c = q^{-1} R` on `V = C^{N+1}`:
/// `c(e_i⊗e_i) = e_i⊗e_i`, `c(e_i⊗e_j) = q^{-1} e_j⊗e_i` for `i < j`, and
/// `c(e_i⊗e_j) = q^{-1} e_j⊗e_i + (1 - q^{-2}) e_i⊗e_j` for `i > j`.
///
/// Satisfies `(c - id)(c + q^{-2} id) = 0`; it is not itself in Hecke form,
/// [`Braiding::negate`] gives the Hecke braiding with `ν = q^{-2}`.
pub fn builtin_c(n: usize) -> Braiding {
    assert!(n >= 1);
    let d = n + 1;
    let qi = Scalar::q_pow(-1);
    let off = Scalar::one() - Scalar::q_pow(-2);
    let m = square_matrix_from_action(d, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => vec![((i, i), Scalar::one())],
        std::cmp::Ordering::Less => vec![((j, i), qi.clone())],
        std::cmp::Ordering::Greater => vec![((j, i), qi.clone()), ((i, j), off.clone())],
    });
    Braiding::with_quadratic(m, Scalar::one(), -Scalar::q_pow(-2)).expect("c satisfies the braiding axioms")
}

/// The dual braiding `c^∨ = (c^{-1})^t` on `V^*`:
/// `c^∨(f_i⊗f_j) = q f_j⊗f_i + (1 - q^2) f_i⊗f_j` for `i < j` and
/// `q f_j⊗f_i` for `i > j`. Satisfies `(c^∨ - id)(c^∨ + q^2 id) = 0`.
pub fn builtin_c_dual(n: usize) -> Braiding {
    assert!(n >= 1);
    let d = n + 1;
    let q = Scalar::q();
    let off = Scalar::one() - Scalar::q_pow(2);
    let m = square_matrix_from_action(d, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => vec![((i, i), Scalar::one())],
        std::cmp::Ordering::Less => vec![((j, i), q.clone()), ((i, j), off.clone())],
        std::cmp::Ordering::Greater => vec![((j, i), q.clone())],
    });
    Braiding::with_quadratic(m, Scalar::one(), -Scalar::q_pow(2)).expect("c^∨ satisfies the braiding axioms")
}

/// The classical flip on `C^d`, Hecke with `ν = 1`.
pub fn flip(d: usize) -> Braiding {
    let m = square_matrix_from_action(d, |i, j| vec![((j, i), Scalar::one())]);
    validate_braiding(m, Scalar::one()).expect("flip is a braiding")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> Scalar {
        x.parse().unwrap()
    }

    fn e(d: usize, labels: &[usize]) -> Tensor {
        Tensor::basis(d, labels).unwrap()
    }

    #[test]
    fn builtin_c_action() {
        let c = builtin_c(1);
        let x = c.apply_at(1, &e(2, &[1, 2]));
        assert_eq!(x, e(2, &[2, 1]).scale(&s("q^-1")));
        let y = c.apply_at(1, &e(2, &[2, 1]));
        assert_eq!(y, e(2, &[1, 2]).scale(&s("q^-1")).add(&e(2, &[2, 1]).scale(&s("1 - q^-2"))));
        let c2 = builtin_c(2);
        assert_eq!(c2.apply_at(1, &e(3, &[3, 3])), e(3, &[3, 3]));
        assert_eq!(c.hecke_param(), None);
    }

    #[test]
    fn builtin_dual_action() {
        let cd = builtin_c_dual(1);
        assert_eq!(cd.apply_at(1, &e(2, &[2, 1])), e(2, &[1, 2]).scale(&Scalar::q()));
    }

    #[test]
    fn validation_cases() {
        let f = flip(2);
        assert_eq!(f.hecke_param(), Some(Scalar::one()));
        let minus_c = builtin_c(1).negate().unwrap();
        assert_eq!(minus_c.hecke_param(), Some(s("q^-2")));
        assert!(validate_braiding(minus_c.matrix().clone(), s("q^-2")).is_ok());
        match validate_braiding(Matrix::identity(4), Scalar::q()) {
            Err(BraidingError::Axioms(r)) => {
                assert!(r.invertible && r.yang_baxter && !r.quadratic);
            }
            other => panic!("expected a quadratic failure, got {other:?}"),
        }
        assert!(matches!(validate_braiding(Matrix::identity(3), Scalar::one()), Err(BraidingError::Shape(3, 3))));
        assert!(matches!(validate_braiding(Matrix::zeros(4, 4), Scalar::one()), Err(BraidingError::Axioms(_))));
    }

    #[test]
    fn negation_is_an_involution() {
        let c = builtin_c(2);
        assert_eq!(c.negate().unwrap().negate().unwrap(), c);
        // -flip still squares to the identity, so it re-validates with ν = 1
        assert_eq!(flip(2).negate().unwrap().hecke_param(), Some(Scalar::one()));
    }

    #[test]
    fn sigma_operators() {
        let b = builtin_c(1).negate().unwrap();
        assert_eq!(sigma_i(&b, 2, 1).unwrap().to_matrix(), *b.matrix());
        let s2 = sigma_i(&b, 3, 2).unwrap();
        assert_eq!(s2.apply(&e(2, &[1, 1, 2])), e(2, &[1, 2, 1]).scale(&s("-q^-1")));
        let s1 = sigma_i(&b, 4, 1).unwrap();
        let s3 = sigma_i(&b, 4, 3).unwrap();
        assert_eq!(s1.compose(&s3), s3.compose(&s1));
        assert!(sigma_i(&b, 3, 3).is_err());
        assert!(sigma_i(&b, 3, 0).is_err());
    }

    #[test]
    fn lifts() {
        let b = builtin_c(1).negate().unwrap();
        assert_eq!(braid_lift(&b, &Perm::identity(3)), TensorOperator::identity(2, 3));
        assert_eq!(braid_lift(&b, &Perm::new(vec![2, 1]).unwrap()).to_matrix(), *b.matrix());
        let w = Perm::from_word(3, &[1, 2, 1]).unwrap();
        assert_eq!(w, Perm::from_word(3, &[2, 1, 2]).unwrap());
        assert_eq!(word_operator(&b, 3, &[1, 2, 1]).unwrap(), word_operator(&b, 3, &[2, 1, 2]).unwrap());
    }

    #[test]
    fn small_symmetrizers() {
        let b = builtin_c(1).negate().unwrap();
        assert_eq!(symmetrizer(&b, 1).unwrap(), TensorOperator::identity(2, 1));
        let a2 = symmetrizer(&b, 2).unwrap();
        assert_eq!(a2.apply(&e(2, &[1, 2])), e(2, &[1, 2]).sub(&e(2, &[2, 1]).scale(&s("q^-1"))));
        assert!(symmetrizer(&b, 8).is_err());
    }

    #[test]
    fn factorized_symmetrizer_matches_enumeration() {
        for b in [builtin_c(1).negate().unwrap(), builtin_c(2).negate().unwrap(), flip(2)] {
            for p in 0..=4 {
                if b.dim() == 3 && p == 4 {
                    continue;
                }
                assert_eq!(symmetrizer(&b, p).unwrap(), symmetrizer_by_enumeration(&b, p).unwrap(), "p={p}");
            }
        }
    }
}
