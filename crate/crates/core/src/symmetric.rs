//! The quantum symmetric algebra `S_σ(V) = ⊕_p Im A^{(p)}`: bases of its
//! graded components, the quantum shuffle product and the deconcatenation
//! coproduct.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::braid::{self, index_tuple, ipow, Braiding, BraidingError, Tensor, TensorOperator};
use crate::linalg::{EchelonBasis, Matrix};
use crate::perm::{self, Perm};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymmetricError {
    #[error("tensor of grade {actual} cannot be split as ({left}, {right})")]
    GradeMismatch { actual: usize, left: usize, right: usize },
    #[error("tensor does not lie in the grade-{0} component")]
    NotInComponent(usize),
    #[error(transparent)]
    Braiding(#[from] BraidingError),
}

/// A basis of `S^p_σ(V)` together with a left inverse of its embedding.
///
/// The basis is the set of the first linearly independent columns of
/// `A^{(p)}` in lexicographic column order.
#[derive(Clone, Debug)]
pub struct ComponentBasis {
    dim: usize,
    grade: usize,
    columns: Vec<usize>,
    vectors: Vec<Tensor>,
    pivots: Vec<usize>,
    pivot_inverse: Matrix,
}

impl ComponentBasis {
    /// Column-space basis of a symmetrizer.
    pub fn from_symmetrizer(a: &TensorOperator) -> Self {
        let (dim, grade) = (a.dim(), a.grade());
        let mut ech = EchelonBasis::new(a.size());
        let mut columns = Vec::new();
        let mut vectors = Vec::new();
        for j in 0..a.size() {
            let col = a.column(j);
            if col.is_zero() {
                continue;
            }
            if ech.insert(col.to_dense()).is_some() {
                columns.push(j);
                vectors.push(col);
            }
        }
        let pivots = ech.pivots();
        let restricted = Matrix::from_fn(pivots.len(), vectors.len(), |r, c| vectors[c].coefficient_at(pivots[r]));
        let pivot_inverse = restricted.inverse().expect("pivot rows of an echelon basis are independent");
        ComponentBasis { dim, grade, columns, vectors, pivots, pivot_inverse }
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn space_dim(&self) -> usize {
        self.dim
    }

    /// `dim S^p_σ(V)`.
    pub fn dimension(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Tensor] {
        &self.vectors
    }

    /// Labels of the columns of `A^{(p)}` chosen as basis vectors.
    pub fn source_columns(&self) -> Vec<Vec<usize>> {
        self.columns.iter().map(|&j| index_tuple(self.dim, self.grade, j)).collect()
    }

    /// `Σ_k coords[k] · b_k`.
    pub fn embed(&self, coords: &[Scalar]) -> Tensor {
        assert_eq!(coords.len(), self.dimension());
        let mut t = Tensor::zero(self.dim, self.grade);
        for (c, v) in coords.iter().zip(&self.vectors) {
            t.add_scaled(v, c);
        }
        t
    }

    /// Coordinates read off the pivot rows. Exact for tensors in the
    /// component; use [`ComponentBasis::try_project`] to check membership.
    pub fn project(&self, x: &Tensor) -> Vec<Scalar> {
        let restricted: Vec<Scalar> = self.pivots.iter().map(|&r| x.coefficient_at(r)).collect();
        self.pivot_inverse.apply(&restricted)
    }

    pub fn try_project(&self, x: &Tensor) -> Result<Vec<Scalar>, SymmetricError> {
        let c = self.project(x);
        if self.embed(&c) == *x {
            Ok(c)
        } else {
            Err(SymmetricError::NotInComponent(self.grade))
        }
    }

    pub fn contains(&self, x: &Tensor) -> bool {
        self.try_project(x).is_ok()
    }

    /// The `d^p × dim` matrix whose columns are the basis vectors.
    pub fn embedding_matrix(&self) -> Matrix {
        Matrix::from_fn(ipow(self.dim, self.grade), self.dimension(), |r, c| self.vectors[c].coefficient_at(r))
    }
}

/// Basis of `S^p_σ(V)` computed from `A^{(p)}`.
pub fn component_basis(b: &Braiding, p: usize) -> Result<ComponentBasis, SymmetricError> {
    Ok(ComponentBasis::from_symmetrizer(&braid::symmetrizer(b, p)?))
}

/// Dimensions of the graded components up to a bound, and the top grade `M`
/// when the pattern `dim S^M = 1, dim S^p = 0 (M < p ≤ bound)` is observed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradeProfile {
    pub dims: Vec<usize>,
    pub top: Option<usize>,
}

impl GradeProfile {
    pub fn from_dims(dims: Vec<usize>) -> Self {
        let top = dims.iter().position(|&d| d == 0).and_then(|z| {
            let ok = z >= 1 && dims[z - 1] == 1 && dims[z..].iter().all(|&d| d == 0);
            ok.then(|| z - 1)
        });
        GradeProfile { dims, top }
    }

    pub fn bound(&self) -> usize {
        self.dims.len() - 1
    }
}

pub fn grade_profile(b: &Braiding, bound: usize) -> Result<GradeProfile, SymmetricError> {
    let (profile, _) = profile_with_bases(b, bound)?;
    Ok(profile)
}

/// The profile and the component bases for grades `0..=bound`.
pub fn profile_with_bases(b: &Braiding, bound: usize) -> Result<(GradeProfile, Vec<ComponentBasis>), SymmetricError> {
    let syms = braid::symmetrizers_up_to(b, bound, perm::DEFAULT_ENUMERATION_BOUND)?;
    let bases: Vec<ComponentBasis> = syms.iter().map(ComponentBasis::from_symmetrizer).collect();
    let profile = GradeProfile::from_dims(bases.iter().map(|c| c.dimension()).collect());
    Ok((profile, bases))
}

/// The quantum shuffle product `Σ_{w ∈ S_{i,j}} T_w (x ⊗ y)`.
pub fn shuffle_product(b: &Braiding, x: &Tensor, y: &Tensor) -> Tensor {
    let xy = x.concat(y);
    let mut acc = Tensor::zero(b.dim(), xy.grade());
    for w in perm::enumerate_shuffles(x.grade(), y.grade()) {
        acc.add_scaled(&b.apply_lift(&w, &xy), &Scalar::one());
    }
    acc
}

/// Applies a single shuffle's lift to a concatenation; helper for callers
/// that precompute shuffle sets.
pub fn apply_shuffles(b: &Braiding, shuffles: &[Perm], xy: &Tensor) -> Tensor {
    let mut acc = Tensor::zero(b.dim(), xy.grade());
    for w in shuffles {
        acc.add_scaled(&b.apply_lift(w, xy), &Scalar::one());
    }
    acc
}

/// An element of `V^{⊗i} ⊗ V^{⊗j}` keyed by pairs of flat indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitTensor {
    dim: usize,
    left: usize,
    right: usize,
    entries: BTreeMap<(usize, usize), Scalar>,
}

impl SplitTensor {
    pub fn left_grade(&self) -> usize {
        self.left
    }

    pub fn right_grade(&self) -> usize {
        self.right
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// `(left labels, right labels, weight)` in lexicographic order.
    pub fn terms(&self) -> Vec<(Vec<usize>, Vec<usize>, Scalar)> {
        self.entries
            .iter()
            .map(|((a, b), c)| (index_tuple(self.dim, self.left, *a), index_tuple(self.dim, self.right, *b), c.clone()))
            .collect()
    }

    /// The bilinear expansion as `(left tensor, right tensor, weight)` triples.
    pub fn pairs(&self) -> Vec<(Tensor, Tensor, Scalar)> {
        self.entries
            .iter()
            .map(|((a, b), c)| {
                (
                    Tensor::from_index(self.dim, self.left, *a, Scalar::one()),
                    Tensor::from_index(self.dim, self.right, *b, Scalar::one()),
                    c.clone(),
                )
            })
            .collect()
    }

    /// Reassembles into `V^{⊗(i+j)}`.
    pub fn to_tensor(&self) -> Tensor {
        let shift = ipow(self.dim, self.right);
        let mut t = Tensor::zero(self.dim, self.left + self.right);
        for ((a, b), c) in &self.entries {
            t.add_at(a * shift + b, c);
        }
        t
    }

    /// Coefficient matrix `C` with `self = Σ C[a][b] u_a ⊗ v_b` for the two
    /// component bases, or an error if `self` is outside `S^i ⊗ S^j`.
    pub fn project(&self, left: &ComponentBasis, right: &ComponentBasis) -> Result<Matrix, SymmetricError> {
        assert_eq!((left.grade(), right.grade()), (self.left, self.right));
        let mut by_right: BTreeMap<usize, Tensor> = BTreeMap::new();
        for ((a, b), c) in &self.entries {
            by_right.entry(*b).or_insert_with(|| Tensor::zero(self.dim, self.left)).add_at(*a, c);
        }
        let mut rows: Vec<Tensor> = vec![Tensor::zero(self.dim, self.right); left.dimension()];
        for (b, col) in &by_right {
            let coords = left.try_project(col).map_err(|_| SymmetricError::NotInComponent(self.left))?;
            for (k, c) in coords.iter().enumerate() {
                rows[k].add_at(*b, c);
            }
        }
        let mut out = Matrix::zeros(left.dimension(), right.dimension());
        for (k, row) in rows.iter().enumerate() {
            let coords = right.try_project(row).map_err(|_| SymmetricError::NotInComponent(self.right))?;
            for (m, c) in coords.into_iter().enumerate() {
                out[(k, m)] = c;
            }
        }
        Ok(out)
    }
}

/// The `(i, j)` part of the deconcatenation coproduct.
pub fn deconcat(x: &Tensor, i: usize, j: usize) -> Result<SplitTensor, SymmetricError> {
    if i + j != x.grade() {
        return Err(SymmetricError::GradeMismatch { actual: x.grade(), left: i, right: j });
    }
    let shift = ipow(x.dim(), j);
    let entries = x.raw_entries().map(|(k, c)| ((k / shift, k % shift), c.clone())).collect();
    Ok(SplitTensor { dim: x.dim(), left: i, right: j, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::{builtin_c, flip, Builtin};

    fn s(x: &str) -> Scalar {
        x.parse().unwrap()
    }

    fn e(d: usize, labels: &[usize]) -> Tensor {
        Tensor::basis(d, labels).unwrap()
    }

    fn binom(n: usize, k: usize) -> usize {
        if k > n {
            return 0;
        }
        (0..k).fold(1, |acc, t| acc * (n - t) / (t + 1))
    }

    #[test]
    fn exterior_components() {
        let b = Builtin::SlExterior.build(1);
        let c2 = component_basis(&b, 2).unwrap();
        assert_eq!(c2.dimension(), 1);
        assert_eq!(c2.vectors()[0], e(2, &[1, 2]).sub(&e(2, &[2, 1]).scale(&s("q^-1"))));
        assert_eq!(component_basis(&Builtin::SlExterior.build(2), 2).unwrap().dimension(), 3);
        assert_eq!(component_basis(&b, 0).unwrap().dimension(), 1);
        assert_eq!(component_basis(&flip(3), 0).unwrap().dimension(), 1);
    }

    #[test]
    fn profiles() {
        let p1 = grade_profile(&Builtin::SlExterior.build(1), 4).unwrap();
        assert_eq!(p1, GradeProfile { dims: vec![1, 2, 1, 0, 0], top: Some(2) });
        let p2 = grade_profile(&Builtin::SlExterior.build(2), 5).unwrap();
        assert_eq!(p2, GradeProfile { dims: vec![1, 3, 3, 1, 0, 0], top: Some(3) });
        let pf = grade_profile(&flip(2), 4).unwrap();
        assert_eq!(pf, GradeProfile { dims: vec![1, 2, 3, 4, 5], top: None });
        // no zero observed yet: no top is declared
        assert_eq!(grade_profile(&Builtin::SlExterior.build(1), 2).unwrap().top, None);
    }

    #[test]
    fn exterior_dimensions_are_binomial() {
        for n in 1..=3 {
            let p = grade_profile(&Builtin::SlExterior.build(n), n + 2).unwrap();
            for (k, d) in p.dims.iter().enumerate() {
                assert_eq!(*d, binom(n + 1, k), "N={n} p={k}");
            }
            assert_eq!(p.top, Some(n + 1));
        }
    }

    #[test]
    fn shuffle_examples() {
        let b = Builtin::SlExterior.build(1);
        let x = shuffle_product(&b, &e(2, &[1]), &e(2, &[2]));
        assert_eq!(x, e(2, &[1, 2]).sub(&e(2, &[2, 1]).scale(&s("q^-1"))));
        let y = e(2, &[2, 1]).add(&e(2, &[1, 1]).scale(&s("q")));
        assert_eq!(shuffle_product(&b, &y, &Tensor::unit(2)), y);
        assert_eq!(shuffle_product(&b, &Tensor::unit(2), &y), y);
    }

    #[test]
    fn shuffle_of_components_lands_in_component() {
        for b in [Builtin::SlExterior.build(2), Builtin::SlDual.build(1), flip(2)] {
            let bases: Vec<_> = (0..=3).map(|p| component_basis(&b, p).unwrap()).collect();
            for i in 0..=3 {
                for j in 0..=3 - i {
                    for u in bases[i].vectors() {
                        for v in bases[j].vectors() {
                            assert!(bases[i + j].contains(&shuffle_product(&b, u, v)), "i={i} j={j}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn iterated_shuffle_is_the_symmetrizer() {
        let b = builtin_c(2).negate().unwrap();
        let a3 = braid::symmetrizer(&b, 3).unwrap();
        for labels in [[1, 2, 3], [3, 1, 2], [2, 2, 1]] {
            let inner = shuffle_product(&b, &e(3, &[labels[1]]), &e(3, &[labels[2]]));
            let outer = shuffle_product(&b, &e(3, &[labels[0]]), &inner);
            assert_eq!(outer, a3.apply(&e(3, &labels)));
        }
    }

    #[test]
    fn shuffle_is_associative_on_vectors() {
        let b = Builtin::SlExterior.build(1);
        let vs = [e(2, &[1]), e(2, &[2]), e(2, &[1]).add(&e(2, &[2]).scale(&s("q")))];
        for x in &vs {
            for y in &vs {
                for z in &vs {
                    let l = shuffle_product(&b, &shuffle_product(&b, x, y), z);
                    let r = shuffle_product(&b, x, &shuffle_product(&b, y, z));
                    assert_eq!(l, r);
                }
            }
        }
    }

    #[test]
    fn deconcat_examples() {
        let x = e(2, &[1, 2]);
        let d = deconcat(&x, 1, 1).unwrap();
        assert_eq!(d.terms(), vec![(vec![1], vec![2], Scalar::one())]);
        let y = e(2, &[1, 2]).sub(&e(2, &[2, 1]).scale(&s("q^-1")));
        let d = deconcat(&y, 1, 1).unwrap();
        assert_eq!(d.terms(), vec![(vec![1], vec![2], Scalar::one()), (vec![2], vec![1], s("-q^-1"))]);
        let d = deconcat(&y, 2, 0).unwrap();
        assert_eq!(d.pairs(), vec![(e(2, &[1, 2]), Tensor::unit(2), Scalar::one()), (e(2, &[2, 1]), Tensor::unit(2), s("-q^-1"))]);
        assert_eq!(d.to_tensor(), y);
        assert!(matches!(deconcat(&y, 2, 1), Err(SymmetricError::GradeMismatch { .. })));
    }

    #[test]
    fn coproduct_closes_on_components() {
        for b in [Builtin::SlExterior.build(2), Builtin::SlDual.build(2), flip(2)] {
            let bases: Vec<_> = (0..=3).map(|p| component_basis(&b, p).unwrap()).collect();
            for p in 0..=3 {
                for x in bases[p].vectors() {
                    for i in 0..=p {
                        let split = deconcat(x, i, p - i).unwrap();
                        let c = split.project(&bases[i], &bases[p - i]).unwrap();
                        // re-expanding the coefficients gives back the split exactly
                        let mut back = Tensor::zero(b.dim(), p);
                        for a in 0..bases[i].dimension() {
                            for m in 0..bases[p - i].dimension() {
                                back.add_scaled(&bases[i].vectors()[a].concat(&bases[p - i].vectors()[m]), &c[(a, m)]);
                            }
                        }
                        assert_eq!(back, *x);
                    }
                }
            }
        }
    }

    #[test]
    fn projection_rejects_outside_vectors() {
        let b = Builtin::SlExterior.build(1);
        let c2 = component_basis(&b, 2).unwrap();
        assert!(!c2.contains(&e(2, &[1, 2])));
        assert!(c2.contains(&c2.vectors()[0].scale(&s("1 + q"))));
    }
}
