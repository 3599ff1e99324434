//! The quantum exterior algebra of `V = C^{N+1}` for the type-A braiding `-c`,
//! its wedge basis, the basis `E_{i⃗ j⃗}` of endomorphisms, closed trace
//! formulas, partial traces and the quantum trace twisted by `K`.
//!
//! In `∧^p` the relations are `e_i ∧ e_i = 0` and
//! `e_j ∧ e_i = -q^{-1} e_i ∧ e_j` for `i < j`. The wedge `e_{i⃗}` is realized
//! in `S^p_σ(V)` as `A^{(p)}(e_{i_1} ⊗ ⋯ ⊗ e_{i_p})`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::Rng;
use thiserror::Error;

use crate::braid::{Builtin, Tensor};
use crate::endo::{EndoContext, EndoError, GradedEndo};
use crate::linalg::Matrix;
use crate::perm::{self, inversions};
use crate::random::{random_scalar, EntryShape};
use crate::scalar::Scalar;
use crate::symmetric::shuffle_product;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExteriorError {
    #[error("wedge index {0:?} is not strictly increasing with entries from 1")]
    NotIncreasing(Vec<usize>),
    #[error("index {index} exceeds the dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("expected grade {expected}, got {got}")]
    GradeMismatch { expected: usize, got: usize },
    #[error("matrix must be {expected}x{expected}, got {rows}x{cols}")]
    Shape { expected: usize, rows: usize, cols: usize },
    #[error("partial trace needs a positive grade on a space of positive dimension")]
    NothingToTrace,
    #[error("retained index {index} does not lie in the {dim}-dimensional subspace")]
    NotInSubspace { index: usize, dim: usize },
    #[error(transparent)]
    Endo(#[from] EndoError),
}

/// A strictly increasing tuple `i_1 < ⋯ < i_p` of 1-based indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WedgeIndex(Vec<usize>);

impl WedgeIndex {
    pub fn new(indices: Vec<usize>) -> Result<Self, ExteriorError> {
        let ok = indices.first().is_none_or(|&i| i >= 1) && indices.windows(2).all(|w| w[0] < w[1]);
        if ok {
            Ok(WedgeIndex(indices))
        } else {
            Err(ExteriorError::NotIncreasing(indices))
        }
    }

    pub fn empty() -> Self {
        WedgeIndex(Vec::new())
    }

    /// All increasing `p`-tuples from `1..=dim`, in lexicographic order.
    pub fn all(dim: usize, p: usize) -> Vec<WedgeIndex> {
        fn rec(start: usize, dim: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<WedgeIndex>) {
            if left == 0 {
                out.push(WedgeIndex(cur.clone()));
                return;
            }
            for i in start..=dim {
                if dim - i + 1 < left {
                    break;
                }
                cur.push(i);
                rec(i + 1, dim, left - 1, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(1, dim, p, &mut Vec::new(), &mut out);
        out
    }

    pub fn grade(&self) -> usize {
        self.0.len()
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn max_index(&self) -> usize {
        self.0.last().copied().unwrap_or(0)
    }

    fn sum(&self) -> i64 {
        self.0.iter().map(|&i| i as i64).sum()
    }

    fn check_dim(&self, dim: usize) -> Result<(), ExteriorError> {
        match self.0.last() {
            Some(&i) if i > dim => Err(ExteriorError::IndexOutOfRange { index: i, dim }),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for WedgeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|i| format!("e{i}")).collect();
        write!(f, "{}", parts.join("∧"))
    }
}

/// An element of `∧^p`, as coefficients on increasing wedges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WedgeElement {
    grade: usize,
    terms: BTreeMap<WedgeIndex, Scalar>,
}

impl WedgeElement {
    pub fn zero(grade: usize) -> Self {
        WedgeElement { grade, terms: BTreeMap::new() }
    }

    pub fn basis(index: WedgeIndex) -> Self {
        let grade = index.grade();
        WedgeElement { grade, terms: BTreeMap::from([(index, Scalar::one())]) }
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, index: &WedgeIndex) -> Scalar {
        self.terms.get(index).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&WedgeIndex, &Scalar)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, index: WedgeIndex, c: &Scalar) {
        assert_eq!(index.grade(), self.grade);
        let slot = self.terms.entry(index).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    /// The wedge product, reduced to normal form.
    pub fn wedge(&self, other: &WedgeElement) -> WedgeElement {
        let mut out = WedgeElement::zero(self.grade + other.grade);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let word: Vec<usize> = a.0.iter().chain(&b.0).copied().collect();
                for (idx, c) in wedge_normal_form(&word).terms {
                    out.add_term(idx, &(&(x * y) * &c));
                }
            }
        }
        out
    }
}

impl fmt::Display for WedgeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(k, c)| format!("({c})*{k}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `-q^{-1}`, the exchange factor of the exterior relations.
fn exchange() -> Scalar {
    -Scalar::q_pow(-1)
}

/// Normal form of `e_{w_1} ∧ ⋯ ∧ e_{w_p}`: zero on a repeated index, else
/// `(-q^{-1})^{inv(w)}` times the sorted wedge.
pub fn wedge_normal_form(word: &[usize]) -> WedgeElement {
    let mut sorted = word.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) || sorted.first() == Some(&0) {
        return WedgeElement::zero(word.len());
    }
    let c = exchange().pow(inversions(word) as i32);
    let mut out = WedgeElement::zero(word.len());
    out.add_term(WedgeIndex(sorted), &c);
    out
}

/// `δ_{t,p-t}(e_{i⃗}) = Σ_{w ∈ S_{t,p-t}} (-q)^{-l(w)} e_{i_{w(1..t)}} ⊗ e_{i_{w(t+1..p)}}`.
pub fn wedge_coproduct(x: &WedgeIndex, t: usize) -> Result<Vec<(WedgeIndex, WedgeIndex, Scalar)>, ExteriorError> {
    let p = x.grade();
    if t > p {
        return Err(ExteriorError::GradeMismatch { expected: p, got: t });
    }
    let mq = -Scalar::q();
    Ok(perm::enumerate_shuffles(t, p - t)
        .into_iter()
        .map(|w| {
            let pick = |r: std::ops::RangeInclusive<usize>| WedgeIndex(r.map(|k| x.0[w.apply(k) - 1]).collect());
            let c = mq.pow(-(w.length() as i32));
            (pick(1..=t), pick(t + 1..=p), c)
        })
        .collect())
}

/// The basis endomorphism `E_{i⃗ j⃗} = E_{i_1 j_1} ∗ ⋯ ∗ E_{i_p j_p}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ConvBasisEndo {
    pub rows: WedgeIndex,
    pub cols: WedgeIndex,
}

impl ConvBasisEndo {
    pub fn new(rows: WedgeIndex, cols: WedgeIndex) -> Result<Self, ExteriorError> {
        if rows.grade() != cols.grade() {
            return Err(ExteriorError::GradeMismatch { expected: rows.grade(), got: cols.grade() });
        }
        Ok(ConvBasisEndo { rows, cols })
    }

    pub fn grade(&self) -> usize {
        self.rows.grade()
    }
}

/// The matrix of `E_{i⃗ j⃗}` in the wedge basis: the unit sending `e_{j⃗}` to `e_{i⃗}`.
pub fn conv_basis_endo_matrix(e: &ConvBasisEndo, dim: usize) -> Result<WedgeEndo, ExteriorError> {
    let mut m = WedgeEndo::zero(dim, e.grade());
    m.set(&e.rows, &e.cols, Scalar::one())?;
    Ok(m)
}

/// A grade-`p` endomorphism of `∧^p(C^dim)`, with `matrix[(i⃗, j⃗)] = a^{i⃗}_{j⃗}`
/// the coefficient of `E_{i⃗ j⃗}`; rows and columns follow [`WedgeIndex::all`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WedgeEndo {
    dim: usize,
    grade: usize,
    matrix: Matrix,
}

impl WedgeEndo {
    pub fn zero(dim: usize, grade: usize) -> Self {
        let n = WedgeIndex::all(dim, grade).len();
        WedgeEndo { dim, grade, matrix: Matrix::zeros(n, n) }
    }

    pub fn identity(dim: usize, grade: usize) -> Self {
        let n = WedgeIndex::all(dim, grade).len();
        WedgeEndo { dim, grade, matrix: Matrix::identity(n) }
    }

    pub fn from_matrix(dim: usize, grade: usize, matrix: Matrix) -> Result<Self, ExteriorError> {
        let n = WedgeIndex::all(dim, grade).len();
        if matrix.rows() != n || matrix.cols() != n {
            return Err(ExteriorError::Shape { expected: n, rows: matrix.rows(), cols: matrix.cols() });
        }
        Ok(WedgeEndo { dim, grade, matrix })
    }

    pub fn from_records<'a, I>(dim: usize, grade: usize, records: I) -> Result<Self, ExteriorError>
    where
        I: IntoIterator<Item = (&'a WedgeIndex, &'a WedgeIndex, &'a Scalar)>,
    {
        let mut m = WedgeEndo::zero(dim, grade);
        for (r, c, v) in records {
            let cur = m.coefficient(r, c)?;
            m.set(r, c, &cur + v)?;
        }
        Ok(m)
    }

    pub fn random<R: Rng + ?Sized>(dim: usize, grade: usize, rng: &mut R, shape: &EntryShape) -> Self {
        let n = WedgeIndex::all(dim, grade).len();
        WedgeEndo { dim, grade, matrix: Matrix::from_fn(n, n, |_, _| random_scalar(rng, shape)) }
    }

    /// `dim V`, i.e. `N + 1`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn indices(&self) -> Vec<WedgeIndex> {
        WedgeIndex::all(self.dim, self.grade)
    }

    fn position(&self, w: &WedgeIndex) -> Result<usize, ExteriorError> {
        if w.grade() != self.grade {
            return Err(ExteriorError::GradeMismatch { expected: self.grade, got: w.grade() });
        }
        w.check_dim(self.dim)?;
        Ok(self.indices().binary_search(w).expect("valid wedge index is enumerated"))
    }

    pub fn coefficient(&self, rows: &WedgeIndex, cols: &WedgeIndex) -> Result<Scalar, ExteriorError> {
        Ok(self.matrix[(self.position(rows)?, self.position(cols)?)].clone())
    }

    pub fn set(&mut self, rows: &WedgeIndex, cols: &WedgeIndex, v: Scalar) -> Result<(), ExteriorError> {
        let (r, c) = (self.position(rows)?, self.position(cols)?);
        self.matrix[(r, c)] = v;
        Ok(())
    }

    /// Nonzero `(i⃗, j⃗, a^{i⃗}_{j⃗})` in lexicographic order.
    pub fn records(&self) -> Vec<(WedgeIndex, WedgeIndex, Scalar)> {
        let idx = self.indices();
        let mut out = Vec::new();
        for (r, ri) in idx.iter().enumerate() {
            for (c, ci) in idx.iter().enumerate() {
                let v = &self.matrix[(r, c)];
                if !v.is_zero() {
                    out.push((ri.clone(), ci.clone(), v.clone()));
                }
            }
        }
        out
    }

    pub fn add(&self, other: &WedgeEndo) -> Result<WedgeEndo, ExteriorError> {
        self.same_shape(other)?;
        Ok(WedgeEndo { dim: self.dim, grade: self.grade, matrix: &self.matrix + &other.matrix })
    }

    pub fn compose(&self, other: &WedgeEndo) -> Result<WedgeEndo, ExteriorError> {
        self.same_shape(other)?;
        Ok(WedgeEndo { dim: self.dim, grade: self.grade, matrix: &self.matrix * &other.matrix })
    }

    fn same_shape(&self, other: &WedgeEndo) -> Result<(), ExteriorError> {
        if self.grade != other.grade {
            return Err(ExteriorError::GradeMismatch { expected: self.grade, got: other.grade });
        }
        if self.dim != other.dim {
            return Err(ExteriorError::IndexOutOfRange { index: other.dim, dim: self.dim });
        }
        Ok(())
    }
}

/// An element of `⊕_p ∧^p(V) ⊗ ∧^p(V^*)`, keyed by `(i⃗, j⃗)` for
/// `e_{i⃗} ⊗ f_{j⃗}`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BiWedge {
    terms: BTreeMap<(WedgeIndex, WedgeIndex), Scalar>,
}

impl BiWedge {
    pub fn terms(&self) -> impl Iterator<Item = (&(WedgeIndex, WedgeIndex), &Scalar)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, key: (WedgeIndex, WedgeIndex), c: &Scalar) {
        let slot = self.terms.entry(key).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    /// `(e_a ⊗ f_b)(e_c ⊗ f_d) = (e_a ∧ e_c) ⊗ (f_b ∧ f_d)`; both factors obey
    /// the same exterior relations.
    pub fn product(&self, other: &BiWedge) -> BiWedge {
        let mut out = BiWedge::default();
        for ((a, b), x) in &self.terms {
            for ((c, d), y) in &other.terms {
                let left = WedgeElement::basis(a.clone()).wedge(&WedgeElement::basis(c.clone()));
                let right = WedgeElement::basis(b.clone()).wedge(&WedgeElement::basis(d.clone()));
                let xy = x * y;
                for (i, u) in left.terms() {
                    for (j, v) in right.terms() {
                        out.add_term((i.clone(), j.clone()), &(&xy * &(u * v)));
                    }
                }
            }
        }
        out
    }
}

/// `ι(E_{i⃗ j⃗}) = e_{i⃗} ⊗ f_{j⃗}`, extended linearly.
pub fn iota(a: &WedgeEndo) -> BiWedge {
    let mut out = BiWedge::default();
    for (r, c, v) in a.records() {
        out.add_term((r, c), &v);
    }
    out
}

/// Inverse of [`iota`] on one grade.
pub fn iota_inverse(x: &BiWedge, dim: usize, grade: usize) -> Result<WedgeEndo, ExteriorError> {
    WedgeEndo::from_records(dim, grade, x.terms().map(|((r, c), v)| (r, c, v)))
}

/// `K = diag(q^N, q^{N-2}, …, q^{-N})` on `V = C^{N+1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KMatrix {
    pub n: usize,
}

impl KMatrix {
    pub fn diagonal(&self) -> Vec<Scalar> {
        (0..=self.n).map(|k| Scalar::q_pow(self.n as i32 - 2 * k as i32)).collect()
    }

    /// Eigenvalue of `ρ^p(K)` on `e_{i⃗}`: the product of the diagonal entries
    /// at `i⃗`, which is `q^{p(N+2) - 2Σi}`.
    pub fn wedge_eigenvalue(&self, w: &WedgeIndex) -> Scalar {
        let d = self.diagonal();
        w.indices().iter().map(|&i| d[i - 1].clone()).product()
    }

    /// `ρ^p(K)` as a diagonal matrix in the wedge basis.
    pub fn wedge_action(&self, p: usize) -> Matrix {
        let idx = WedgeIndex::all(self.n + 1, p);
        Matrix::from_fn(idx.len(), idx.len(), |r, c| if r == c { self.wedge_eigenvalue(&idx[r]) } else { Scalar::zero() })
    }
}

/// `Tr_q A = Σ_{l⃗} q^{(p+1)p - 2Σl} a^{l⃗}_{l⃗}`.
pub fn q_trace_closed(a: &WedgeEndo) -> Scalar {
    let p = a.grade as i64;
    a.indices()
        .iter()
        .enumerate()
        .filter(|(k, _)| !a.matrix[(*k, *k)].is_zero())
        .map(|(k, l)| &Scalar::q_pow(((p + 1) * p - 2 * l.sum()) as i32) * &a.matrix[(k, k)])
        .sum()
}

/// The same trace summed over `(p, N+1-p)`-shuffles `w` with weight
/// `(-q)^{-2l(w)}` on `a^{w(1)…w(p)}_{w(1)…w(p)}`.
pub fn q_trace_closed_shuffle(a: &WedgeEndo) -> Scalar {
    let p = a.grade;
    let mq = -Scalar::q();
    let mut acc = Scalar::zero();
    for w in perm::enumerate_shuffles(p, a.dim - p) {
        let l = WedgeIndex((1..=p).map(|k| w.apply(k)).collect());
        let c = a.coefficient(&l, &l).expect("shuffle images are valid wedge indices");
        if !c.is_zero() {
            acc += &(&mq.pow(-2 * w.length() as i32) * &c);
        }
    }
    acc
}

/// How a grade-1 matrix is raised to the `p`-th power.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PowerMode {
    /// `A^p = A ∘ ⋯ ∘ A`, a grade-1 endomorphism.
    Composition,
    /// `A^{∗p} = A ∗ ⋯ ∗ A`, a grade-`p` endomorphism.
    Convolution,
}

/// Closed formulas for `Tr_q(A^p)` and `Tr_q(A^{∗p})`, with `a^j_i = A[(j, i)]`.
pub fn q_trace_powers(a: &Matrix, p: usize, mode: PowerMode) -> Result<Scalar, ExteriorError> {
    let d = a.rows();
    if a.cols() != d {
        return Err(ExteriorError::Shape { expected: d, rows: a.rows(), cols: a.cols() });
    }
    match mode {
        PowerMode::Composition => {
            let ap = a.pow(p as u32);
            Ok((0..d).map(|i| &Scalar::q_pow(-2 * i as i32) * &ap[(i, i)]).sum())
        }
        PowerMode::Convolution => {
            if p > d {
                return Ok(Scalar::zero());
            }
            let group = perm::enumerate_group(p).map_err(|_| ExteriorError::GradeMismatch { expected: d, got: p })?;
            let mq = -Scalar::q();
            let mut acc = Scalar::zero();
            for w in perm::enumerate_shuffles(p, d - p) {
                let l: Vec<usize> = (1..=p).map(|k| w.apply(k)).collect();
                let mut inner = Scalar::zero();
                for theta in &group {
                    for tau in &group {
                        let mut term = mq.pow(-((theta.length() + tau.length()) as i32));
                        for k in 1..=p {
                            let x = &a[(l[tau.apply(k) - 1] - 1, l[theta.apply(k) - 1] - 1)];
                            if x.is_zero() {
                                term = Scalar::zero();
                                break;
                            }
                            term *= x;
                        }
                        inner += &term;
                    }
                }
                acc += &(&mq.pow(-2 * w.length() as i32) * &inner);
            }
            Ok(acc)
        }
    }
}

/// `(Tr_q)_{p+1}`: sends `E_{i⃗ j⃗}` of grade `p+1` on `C^{d}` to
/// `δ_{i_{p+1} j_{p+1}} q^{-2(i_{p+1}-1)} E_{(i_1..i_p)(j_1..j_p)}` on `C^{d-1}`.
pub fn partial_trace(a: &WedgeEndo) -> Result<WedgeEndo, ExteriorError> {
    if a.grade == 0 || a.dim == 0 {
        return Err(ExteriorError::NothingToTrace);
    }
    let target = a.dim - 1;
    let mut out = WedgeEndo::zero(target, a.grade - 1);
    for (r, c, v) in a.records() {
        let (last_r, last_c) = (r.max_index(), c.max_index());
        if last_r != last_c {
            continue;
        }
        let keep_r = WedgeIndex(r.0[..a.grade - 1].to_vec());
        let keep_c = WedgeIndex(c.0[..a.grade - 1].to_vec());
        let top = keep_r.max_index().max(keep_c.max_index());
        if top > target {
            return Err(ExteriorError::NotInSubspace { index: top, dim: target });
        }
        let cur = out.coefficient(&keep_r, &keep_c)?;
        let w = &v * &Scalar::q_pow(-2 * (last_r as i32 - 1));
        out.set(&keep_r, &keep_c, &cur + &w)?;
    }
    Ok(out)
}

/// `(Tr_q)_1 ⋯ (Tr_q)_p A`, a scalar.
pub fn partial_trace_chain(a: &WedgeEndo) -> Result<Scalar, ExteriorError> {
    let mut cur = a.clone();
    while cur.grade > 0 {
        cur = partial_trace(&cur)?;
    }
    Ok(cur.matrix[(0, 0)].clone())
}

/// `tr_q A = tr(ρ^p(K) A)` on `V = C^{N+1}`.
pub fn quantum_trace(a: &WedgeEndo) -> Result<Scalar, ExteriorError> {
    if a.dim == 0 {
        return Ok(a.matrix.trace());
    }
    let k = KMatrix { n: a.dim - 1 }.wedge_action(a.grade);
    Ok((&k * &a.matrix).trace())
}

/// The generic machinery for `-c` at `N`, with the change of basis between
/// the wedge basis and the component bases.
pub struct ExteriorContext {
    n: usize,
    ctx: Arc<EndoContext>,
    wedge_to_generic: Vec<Matrix>,
    generic_to_wedge: Vec<Matrix>,
}

impl ExteriorContext {
    pub fn new(n: usize) -> Result<Self, ExteriorError> {
        Self::with_context(EndoContext::sl_exterior(n)?)
    }

    /// Wraps an existing context built from the type-A braiding.
    pub fn with_context(ctx: Arc<EndoContext>) -> Result<Self, ExteriorError> {
        let d = ctx.braiding().dim();
        if d == 0 || *ctx.braiding() != Builtin::SlExterior.build(d - 1) {
            return Err(EndoError::ContextMismatch.into());
        }
        let n = d - 1;
        let mut wedge_to_generic = Vec::new();
        let mut generic_to_wedge = Vec::new();
        for p in 0..=ctx.max_grade() {
            let idx = WedgeIndex::all(d, p);
            let basis = ctx.basis(p);
            let mut w = Matrix::zeros(basis.dimension(), idx.len());
            for (c, i) in idx.iter().enumerate() {
                let coords = basis.try_project(&wedge_vector(&ctx, i)).map_err(EndoError::from)?;
                for (r, x) in coords.into_iter().enumerate() {
                    w[(r, c)] = x;
                }
            }
            let inv = w.inverse().map_err(|_| EndoError::ContextMismatch)?;
            wedge_to_generic.push(w);
            generic_to_wedge.push(inv);
        }
        Ok(ExteriorContext { n, ctx, wedge_to_generic, generic_to_wedge })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.n + 1
    }

    pub fn context(&self) -> &Arc<EndoContext> {
        &self.ctx
    }

    /// Columns: component-basis coordinates of the wedges `e_{i⃗}`.
    pub fn change_of_basis(&self, p: usize) -> &Matrix {
        &self.wedge_to_generic[p]
    }

    pub fn to_generic(&self, a: &WedgeEndo) -> Result<GradedEndo, ExteriorError> {
        self.check(a)?;
        let p = a.grade;
        let m = &(&self.wedge_to_generic[p] * &a.matrix) * &self.generic_to_wedge[p];
        Ok(GradedEndo::single_grade(&self.ctx, p, m)?)
    }

    /// Grade-`p` component of a graded endomorphism, in the wedge basis.
    pub fn from_generic(&self, a: &GradedEndo, p: usize) -> Result<WedgeEndo, ExteriorError> {
        if !Arc::ptr_eq(a.context(), &self.ctx) {
            return Err(EndoError::ContextMismatch.into());
        }
        if p > self.ctx.max_grade() {
            return Err(EndoError::GradeOutOfRange { grade: p, max: self.ctx.max_grade() }.into());
        }
        let m = &(&self.generic_to_wedge[p] * a.component(p)) * &self.wedge_to_generic[p];
        WedgeEndo::from_matrix(self.dim(), p, m)
    }

    /// `Tr_q A` through `α` and the top grade.
    pub fn generic_q_trace(&self, a: &WedgeEndo) -> Result<Scalar, ExteriorError> {
        Ok(self.to_generic(a)?.q_trace()?)
    }

    /// `A ∗ B` computed by the generic machinery, in the wedge basis.
    pub fn star(&self, a: &WedgeEndo, b: &WedgeEndo) -> Result<WedgeEndo, ExteriorError> {
        let (i, j) = (a.grade, b.grade);
        let x = self.to_generic(a)?;
        let y = self.to_generic(b)?;
        let m = self.ctx.star(i, x.component(i), j, y.component(j))?;
        self.from_generic(&GradedEndo::single_grade(&self.ctx, i + j, m)?, i + j)
    }

    fn check(&self, a: &WedgeEndo) -> Result<(), ExteriorError> {
        if a.dim != self.dim() {
            return Err(ExteriorError::IndexOutOfRange { index: a.dim, dim: self.dim() });
        }
        if a.grade > self.ctx.max_grade() {
            return Err(EndoError::GradeOutOfRange { grade: a.grade, max: self.ctx.max_grade() }.into());
        }
        Ok(())
    }
}

/// `e_{i⃗} = A^{(p)}(e_{i_1} ⊗ ⋯ ⊗ e_{i_p})`, built as an iterated shuffle.
pub fn wedge_vector(ctx: &EndoContext, w: &WedgeIndex) -> Tensor {
    let d = ctx.braiding().dim();
    let mut acc = Tensor::unit(d);
    for &i in w.indices().iter().rev() {
        let e = Tensor::basis(d, &[i]).expect("index within range");
        acc = shuffle_product(ctx.braiding(), &e, &acc);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::builtin_c_dual;
    use crate::linalg::EchelonBasis;
    use crate::scalar::q_factorial;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    fn s(x: &str) -> Scalar {
        x.parse().unwrap()
    }

    fn w(v: &[usize]) -> WedgeIndex {
        WedgeIndex::new(v.to_vec()).unwrap()
    }

    fn shape() -> EntryShape {
        EntryShape::default()
    }

    #[test]
    fn wedge_indices() {
        assert_eq!(WedgeIndex::all(3, 2), vec![w(&[1, 2]), w(&[1, 3]), w(&[2, 3])]);
        assert_eq!(WedgeIndex::all(3, 0), vec![WedgeIndex::empty()]);
        assert!(WedgeIndex::all(2, 3).is_empty());
        assert!(WedgeIndex::new(vec![2, 1]).is_err());
        assert!(WedgeIndex::new(vec![0, 1]).is_err());
        assert_eq!(w(&[1, 3]).to_string(), "e1∧e3");
    }

    #[test]
    fn normal_forms() {
        assert_eq!(wedge_normal_form(&[1, 2]), WedgeElement::basis(w(&[1, 2])));
        let x = wedge_normal_form(&[2, 1]);
        assert_eq!(x.coefficient(&w(&[1, 2])), s("-q^-1"));
        assert!(wedge_normal_form(&[3, 1, 3]).is_zero());
        assert_eq!(wedge_normal_form(&[3, 2, 1]).coefficient(&w(&[1, 2, 3])), s("-q^-3"));
    }

    #[test]
    fn coproduct_examples() {
        let d = wedge_coproduct(&w(&[1, 2]), 1).unwrap();
        assert_eq!(d, vec![(w(&[1]), w(&[2]), Scalar::one()), (w(&[2]), w(&[1]), s("-q^-1"))]);
        let d = wedge_coproduct(&w(&[1, 2]), 0).unwrap();
        assert_eq!(d, vec![(WedgeIndex::empty(), w(&[1, 2]), Scalar::one())]);
        let d = wedge_coproduct(&w(&[1, 2, 3]), 1).unwrap();
        let coeffs: Vec<Scalar> = d.iter().map(|t| t.2.clone()).collect();
        assert_eq!(coeffs, vec![Scalar::one(), s("-q^-1"), s("q^-2")]);
        assert!(wedge_coproduct(&w(&[1]), 2).is_err());
    }

    #[test]
    fn coproduct_matches_machinery() {
        for n in 1..=2 {
            let ext = ExteriorContext::new(n).unwrap();
            let ctx = ext.context();
            for p in 0..=n + 1 {
                for x in WedgeIndex::all(n + 1, p) {
                    for t in 0..=p {
                        let mut expected = Tensor::zero(n + 1, p);
                        for (l, r, c) in wedge_coproduct(&x, t).unwrap() {
                            expected.add_scaled(&wedge_vector(ctx, &l).concat(&wedge_vector(ctx, &r)), &c);
                        }
                        assert_eq!(wedge_vector(ctx, &x), expected, "n={n} x={x} t={t}");
                    }
                }
            }
        }
    }

    #[test]
    fn wedge_basis_is_the_component_basis() {
        for n in 1..=3 {
            let ext = ExteriorContext::new(n).unwrap();
            for p in 0..=n + 1 {
                assert_eq!(*ext.change_of_basis(p), Matrix::identity(ext.change_of_basis(p).rows()), "n={n} p={p}");
            }
        }
    }

    #[test]
    fn dual_relations() {
        // the kernel of id - c^∨ contains f_i ⊗ f_i and f_i ⊗ f_j + q f_j ⊗ f_i
        let n = 2;
        let d = n + 1;
        let cd = builtin_c_dual(n);
        let m = &Matrix::identity(d * d) - cd.matrix();
        let kernel_test = |v: Tensor| assert!(m.apply(&v.to_dense()).iter().all(Scalar::is_zero), "{v}");
        for i in 1..=d {
            kernel_test(Tensor::basis(d, &[i, i]).unwrap());
            for j in i + 1..=d {
                kernel_test(Tensor::basis(d, &[i, j]).unwrap().add(&Tensor::basis(d, &[j, i]).unwrap().scale(&Scalar::q())));
            }
        }
        let mut ech = EchelonBasis::new(d * d);
        for r in 0..d * d {
            ech.insert(m.row(r).to_vec());
        }
        assert_eq!(d * d - ech.rank(), d * (d + 1) / 2);
    }

    #[test]
    fn conv_basis_matches_iterated_star() {
        let n = 2;
        let ext = ExteriorContext::new(n).unwrap();
        let d = n + 1;
        for p in 1..=d {
            for r in WedgeIndex::all(d, p) {
                for c in WedgeIndex::all(d, p) {
                    let mut acc = conv_basis_endo_matrix(&ConvBasisEndo::new(w(&r.0[..1]), w(&c.0[..1])).unwrap(), d).unwrap();
                    for k in 1..p {
                        let unit = conv_basis_endo_matrix(&ConvBasisEndo::new(w(&[r.0[k]]), w(&[c.0[k]])).unwrap(), d).unwrap();
                        acc = ext.star(&acc, &unit).unwrap();
                    }
                    let e = conv_basis_endo_matrix(&ConvBasisEndo::new(r.clone(), c.clone()).unwrap(), d).unwrap();
                    assert_eq!(acc, e, "{r} {c}");
                }
            }
        }
    }

    #[test]
    fn star_rules_at_n1() {
        let ext = ExteriorContext::new(1).unwrap();
        let unit = |i: usize, j: usize| conv_basis_endo_matrix(&ConvBasisEndo::new(w(&[i]), w(&[j])).unwrap(), 2).unwrap();
        let x = ext.star(&unit(1, 2), &unit(2, 1)).unwrap();
        assert_eq!(x.coefficient(&w(&[1, 2]), &w(&[1, 2])).unwrap(), s("-q^-1"));
        assert!(ext.star(&unit(1, 1), &unit(1, 2)).unwrap().matrix().is_zero());
        assert!(ext.star(&unit(1, 1), &unit(2, 1)).unwrap().matrix().is_zero());
    }

    #[test]
    fn iota_examples() {
        let e11 = conv_basis_endo_matrix(&ConvBasisEndo::new(w(&[1]), w(&[1])).unwrap(), 2).unwrap();
        let t = iota(&e11);
        assert_eq!(t.terms().collect::<Vec<_>>(), vec![(&(w(&[1]), w(&[1])), &Scalar::one())]);
        let mut rng = StdRng::seed_from_u64(2);
        let a = WedgeEndo::random(3, 2, &mut rng, &shape());
        assert_eq!(iota_inverse(&iota(&a), 3, 2).unwrap(), a);
    }

    #[test]
    fn closed_trace_examples() {
        for i in 1..=3 {
            let e = conv_basis_endo_matrix(&ConvBasisEndo::new(w(&[i]), w(&[i])).unwrap(), 3).unwrap();
            assert_eq!(q_trace_closed(&e), Scalar::q_pow(-2 * (i as i32 - 1)));
        }
        assert_eq!(q_trace_closed(&WedgeEndo::identity(3, 1)), s("1 + q^-2 + q^-4"));
        assert_eq!(q_trace_closed(&WedgeEndo::identity(2, 2)), Scalar::one());
        let mut rng = StdRng::seed_from_u64(9);
        for p in 0..=3 {
            let a = WedgeEndo::random(3, p, &mut rng, &shape());
            assert_eq!(q_trace_closed(&a), q_trace_closed_shuffle(&a));
        }
    }

    #[test]
    fn closed_trace_matches_generic() {
        let mut rng = StdRng::seed_from_u64(4);
        for n in 1..=2 {
            let ext = ExteriorContext::new(n).unwrap();
            for p in 0..=n + 1 {
                let a = WedgeEndo::random(n + 1, p, &mut rng, &shape());
                assert_eq!(ext.generic_q_trace(&a).unwrap(), q_trace_closed(&a), "n={n} p={p}");
            }
        }
    }

    #[test]
    fn power_traces() {
        let mut rng = StdRng::seed_from_u64(6);
        let ext = ExteriorContext::new(1).unwrap();
        let a = crate::random::random_matrix(&mut rng, 2, &shape());
        let pw = ext.context().star_powers(&a).unwrap();
        let a2 = GradedEndo::single_grade(ext.context(), 2, pw[2].clone()).unwrap();
        assert_eq!(q_trace_powers(&a, 2, PowerMode::Convolution).unwrap(), a2.q_trace().unwrap());
        let ap = GradedEndo::grade1(ext.context(), a.pow(3)).unwrap();
        assert_eq!(q_trace_powers(&a, 3, PowerMode::Composition).unwrap(), ap.q_trace().unwrap());
        // diagonal case at the top grade
        let diag = Matrix::from_fn(3, 3, |r, c| if r == c { Scalar::from_int(r as i64 + 2) } else { Scalar::zero() });
        let nu = Scalar::q_pow(-2);
        assert_eq!(q_trace_powers(&diag, 3, PowerMode::Convolution).unwrap(), &q_factorial(3, &nu) * &Scalar::from_int(24));
    }

    #[test]
    fn partial_trace_examples() {
        let e = conv_basis_endo_matrix(&ConvBasisEndo::new(w(&[1, 2]), w(&[1, 2])).unwrap(), 2).unwrap();
        let t = partial_trace(&e).unwrap();
        assert_eq!((t.dim(), t.grade()), (1, 1));
        assert_eq!(t.coefficient(&w(&[1]), &w(&[1])).unwrap(), s("q^-2"));
        let off = conv_basis_endo_matrix(&ConvBasisEndo::new(w(&[1, 2]), w(&[1, 3])).unwrap(), 3).unwrap();
        assert!(partial_trace(&off).unwrap().matrix().is_zero());
        assert_eq!(partial_trace(&WedgeEndo::identity(2, 0)), Err(ExteriorError::NothingToTrace));
        let mut rng = StdRng::seed_from_u64(8);
        for p in 0..=3usize {
            let a = WedgeEndo::random(3, p, &mut rng, &shape());
            let chain = partial_trace_chain(&a).unwrap();
            let pref = (-Scalar::q()).pow((p * p.saturating_sub(1)) as i32);
            assert_eq!(&pref * &chain, q_trace_closed(&a));
        }
    }

    #[test]
    fn quantum_trace_examples() {
        assert_eq!(quantum_trace(&WedgeEndo::identity(2, 1)).unwrap(), s("q + q^-1"));
        assert_eq!(KMatrix { n: 2 }.diagonal(), vec![s("q^2"), Scalar::one(), s("q^-2")]);
        let mut rng = StdRng::seed_from_u64(10);
        for n in 0..=3usize {
            for p in 0..=n + 1 {
                let a = WedgeEndo::random(n + 1, p, &mut rng, &shape());
                let ratio = Scalar::q_pow(-((p * (n + 1 - p)) as i32));
                assert_eq!(q_trace_closed(&a), &ratio * &quantum_trace(&a).unwrap(), "n={n} p={p}");
            }
        }
    }
}
