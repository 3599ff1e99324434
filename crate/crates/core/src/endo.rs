//! Graded endomorphisms `⊕_{p=0}^{M} End S^p_σ(V)` with the composition,
//! convolution and third products, the convolution exponential, the map `α`
//! and the q-trace.
//!
//! Grade-`p` components are square matrices in the component basis of
//! [`crate::symmetric::ComponentBasis`]: column `k` holds the coordinates of
//! the image of the `k`-th basis vector.

use std::fmt;
use std::sync::{Arc, OnceLock};

use rand::Rng;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::braid::{Braiding, BraidingError, Builtin};
use crate::linalg::Matrix;
use crate::random::{random_matrix, EntryShape};
use crate::scalar::{q_factorial, sign, Scalar};
use crate::symmetric::{self, deconcat, ComponentBasis, GradeProfile, SymmetricError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EndoError {
    #[error("endomorphisms belong to different contexts")]
    ContextMismatch,
    #[error("grade {i} + grade {j} exceeds the maximal grade {max}")]
    GradeOverflow { i: usize, j: usize, max: usize },
    #[error("grade {grade} is outside 0..={max}")]
    GradeOutOfRange { grade: usize, max: usize },
    #[error("grade {grade} component must be {expected}x{expected}, got {rows}x{cols}")]
    Shape { grade: usize, expected: usize, rows: usize, cols: usize },
    #[error("expected {expected} components, got {got}")]
    ComponentCount { expected: usize, got: usize },
    #[error("the context has no top grade with a one-dimensional component")]
    NoTopGrade,
    #[error(transparent)]
    Braiding(#[from] BraidingError),
    #[error(transparent)]
    Symmetric(#[from] SymmetricError),
}

/// Where the braiding of a context came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BraidingSource {
    Builtin { kind: Builtin, n: usize },
    /// Hex SHA-256 of the braiding's canonical text document.
    Document { sha256: String },
}

/// Identifies a context in serialized endomorphisms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContextDescriptor {
    pub source: BraidingSource,
    pub max_grade: usize,
}

impl fmt::Display for ContextDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.source {
            BraidingSource::Builtin { kind, n } => write!(f, "{} N={n}", kind.name())?,
            BraidingSource::Document { sha256 } => write!(f, "braiding sha256:{sha256}")?,
        }
        write!(f, " M={}", self.max_grade)
    }
}

pub fn braiding_digest(b: &Braiding) -> String {
    hex::encode(Sha256::digest(b.to_document().as_bytes()))
}

/// Structure constants of `A_i ∗ B_j` for one split `(i, j)`.
#[derive(Debug)]
struct SplitTable {
    /// For each basis vector `b_k` of `S^{i+j}`, the nonzero coefficients
    /// `(a, b, c)` of `δ_{i,j}(b_k) = Σ c·u_a ⊗ v_b`.
    coproduct: Vec<Vec<(usize, usize, Scalar)>>,
    /// `shuffle[a][b]` = coordinates of `sh(u_a ⊗ v_b)` in `S^{i+j}`.
    shuffle: Vec<Vec<Vec<Scalar>>>,
}

/// The braiding, its component bases up to the maximal grade `M`, and the
/// precomputed coproduct and shuffle tables. Shared read-only between
/// endomorphisms; two contexts are equal only if they are the same object.
pub struct EndoContext {
    braiding: Braiding,
    nu: Scalar,
    profile: GradeProfile,
    max_grade: usize,
    bases: Vec<ComponentBasis>,
    splits: Vec<Vec<SplitTable>>,
    descriptor: ContextDescriptor,
    exp_unit: OnceLock<Vec<Matrix>>,
    exp_unit_inv: OnceLock<Vec<Matrix>>,
}

impl fmt::Debug for EndoContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EndoContext")
            .field("descriptor", &self.descriptor.to_string())
            .field("dims", &self.profile.dims)
            .finish_non_exhaustive()
    }
}

impl EndoContext {
    /// Context for a builtin braiding on `V = C^{N+1}`. `bound` caps the
    /// profile computation; builtins of exterior type reach their top at
    /// `N+1`, so any `bound ≥ N+2` gives the full algebra.
    pub fn builtin(kind: Builtin, n: usize, bound: usize) -> Result<Arc<Self>, EndoError> {
        Self::build(kind.build(n), BraidingSource::Builtin { kind, n }, bound)
    }

    /// Context for the type-A exterior braiding `-c` at `N`.
    pub fn sl_exterior(n: usize) -> Result<Arc<Self>, EndoError> {
        Self::builtin(Builtin::SlExterior, n, n + 2)
    }

    /// Context for an arbitrary Hecke braiding, identified by its digest.
    pub fn from_braiding(b: Braiding, bound: usize) -> Result<Arc<Self>, EndoError> {
        let sha256 = braiding_digest(&b);
        Self::build(b, BraidingSource::Document { sha256 }, bound)
    }

    /// Rebuilds the context named by a descriptor, given its braiding.
    pub fn for_descriptor(b: Braiding, d: &ContextDescriptor) -> Result<Arc<Self>, EndoError> {
        let ctx = Self::build(b.clone(), d.source.clone(), d.max_grade + 1)?;
        if ctx.max_grade == d.max_grade {
            return Ok(ctx);
        }
        Self::build(b, d.source.clone(), d.max_grade)
    }

    fn build(braiding: Braiding, source: BraidingSource, bound: usize) -> Result<Arc<Self>, EndoError> {
        let nu = braiding.require_hecke()?;
        let (profile, mut bases) = symmetric::profile_with_bases(&braiding, bound)?;
        let max_grade = profile.top.unwrap_or(bound);
        bases.truncate(max_grade + 1);
        let mut splits = Vec::with_capacity(max_grade + 1);
        for i in 0..=max_grade {
            let mut row = Vec::with_capacity(max_grade + 1 - i);
            for j in 0..=max_grade - i {
                row.push(split_table(&braiding, &bases[i], &bases[j], &bases[i + j])?);
            }
            splits.push(row);
        }
        let descriptor = ContextDescriptor { source, max_grade };
        Ok(Arc::new(EndoContext {
            braiding,
            nu,
            profile,
            max_grade,
            bases,
            splits,
            descriptor,
            exp_unit: OnceLock::new(),
            exp_unit_inv: OnceLock::new(),
        }))
    }

    pub fn braiding(&self) -> &Braiding {
        &self.braiding
    }

    /// The Hecke parameter `ν`.
    pub fn nu(&self) -> &Scalar {
        &self.nu
    }

    pub fn profile(&self) -> &GradeProfile {
        &self.profile
    }

    /// `M`: the top grade if one was found, else the truncation bound.
    pub fn max_grade(&self) -> usize {
        self.max_grade
    }

    /// The top grade `M` with `dim S^M = 1`, if the profile has one.
    pub fn top(&self) -> Option<usize> {
        self.profile.top
    }

    pub fn descriptor(&self) -> &ContextDescriptor {
        &self.descriptor
    }

    pub fn basis(&self, p: usize) -> &ComponentBasis {
        &self.bases[p]
    }

    /// `dim S^p_σ(V)`.
    pub fn dim(&self, p: usize) -> usize {
        self.bases[p].dimension()
    }

    /// `A_i ∗ B_j = sh ∘ (A_i ⊗ B_j) ∘ δ_{i,j}` as a grade-`(i+j)` matrix.
    pub fn star(&self, i: usize, a: &Matrix, j: usize, b: &Matrix) -> Result<Matrix, EndoError> {
        if i + j > self.max_grade {
            return Err(EndoError::GradeOverflow { i, j, max: self.max_grade });
        }
        self.check_shape(i, a)?;
        self.check_shape(j, b)?;
        let table = &self.splits[i][j];
        let (di, dj, dr) = (self.dim(i), self.dim(j), self.dim(i + j));
        let mut out = Matrix::zeros(dr, dr);
        if a.is_zero() || b.is_zero() {
            return Ok(out);
        }
        for (k, terms) in table.coproduct.iter().enumerate() {
            // (A ⊗ B) δ(b_k) = Σ_{a', b'} (A D_k Bᵀ)[a', b'] u_{a'} ⊗ v_{b'}
            let mut image = vec![vec![Scalar::zero(); dj]; di];
            for (sa, sb, c) in terms {
                for (ta, row) in image.iter_mut().enumerate() {
                    let x = &a[(ta, *sa)];
                    if x.is_zero() {
                        continue;
                    }
                    let xc = x * c;
                    for (tb, slot) in row.iter_mut().enumerate() {
                        let y = &b[(tb, *sb)];
                        if !y.is_zero() {
                            *slot += &(&xc * y);
                        }
                    }
                }
            }
            for (ta, row) in image.iter().enumerate() {
                for (tb, w) in row.iter().enumerate() {
                    if w.is_zero() {
                        continue;
                    }
                    for (m, s) in table.shuffle[ta][tb].iter().enumerate() {
                        if !s.is_zero() {
                            out[(m, k)] += &(w * s);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// `A_1^{∗p}` for `p = 0..=M`.
    pub fn star_powers(&self, a1: &Matrix) -> Result<Vec<Matrix>, EndoError> {
        self.check_shape(1, a1)?;
        let mut out = vec![Matrix::identity(self.dim(0))];
        for p in 1..=self.max_grade {
            let next = self.star(p - 1, &out[p - 1], 1, a1)?;
            out.push(next);
        }
        Ok(out)
    }

    /// `I_p` as a matrix.
    pub fn identity_matrix(&self, p: usize) -> Matrix {
        Matrix::identity(self.dim(p))
    }

    fn exp_components(&self, a1: &Matrix, inverse: bool) -> Result<Vec<Matrix>, EndoError> {
        let powers = self.star_powers(a1)?;
        Ok(powers
            .iter()
            .enumerate()
            .map(|(p, m)| {
                let mut c = q_factorial(p as u32, &self.nu).inv().expect("q-factorials of a Hecke parameter are nonzero");
                if inverse {
                    let e = (p * p.saturating_sub(1) / 2) as i32;
                    c = &(&c * &sign(p as i64)) * &self.nu.pow(e);
                }
                m.scale(&c)
            })
            .collect())
    }

    fn exp_unit(&self) -> &[Matrix] {
        self.exp_unit.get_or_init(|| {
            self.exp_components(&self.identity_matrix(1), false).expect("grade-1 identity has the right shape")
        })
    }

    fn exp_unit_inv(&self) -> &[Matrix] {
        self.exp_unit_inv.get_or_init(|| {
            self.exp_components(&self.identity_matrix(1), true).expect("grade-1 identity has the right shape")
        })
    }

    fn check_shape(&self, p: usize, m: &Matrix) -> Result<(), EndoError> {
        if p > self.max_grade {
            return Err(EndoError::GradeOutOfRange { grade: p, max: self.max_grade });
        }
        let n = self.dim(p);
        if m.rows() != n || m.cols() != n {
            return Err(EndoError::Shape { grade: p, expected: n, rows: m.rows(), cols: m.cols() });
        }
        Ok(())
    }
}

fn split_table(
    b: &Braiding,
    left: &ComponentBasis,
    right: &ComponentBasis,
    total: &ComponentBasis,
) -> Result<SplitTable, EndoError> {
    let (i, j) = (left.grade(), right.grade());
    let mut coproduct = Vec::with_capacity(total.dimension());
    for x in total.vectors() {
        let c = deconcat(x, i, j)?.project(left, right)?;
        let mut terms = Vec::new();
        for a in 0..c.rows() {
            for bb in 0..c.cols() {
                if !c[(a, bb)].is_zero() {
                    terms.push((a, bb, c[(a, bb)].clone()));
                }
            }
        }
        coproduct.push(terms);
    }
    let mut shuffle = Vec::with_capacity(left.dimension());
    for u in left.vectors() {
        let mut row = Vec::with_capacity(right.dimension());
        for v in right.vectors() {
            row.push(total.try_project(&symmetric::shuffle_product(b, u, v))?);
        }
        shuffle.push(row);
    }
    Ok(SplitTable { coproduct, shuffle })
}

/// An element `A = (A_0, …, A_M)` of `⊕_p End S^p_σ(V)`.
#[derive(Clone)]
pub struct GradedEndo {
    ctx: Arc<EndoContext>,
    comps: Vec<Matrix>,
}

impl PartialEq for GradedEndo {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ctx, &other.ctx) && self.comps == other.comps
    }
}

impl Eq for GradedEndo {}

impl fmt::Debug for GradedEndo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut d = f.debug_struct("GradedEndo");
        d.field("context", &self.ctx.descriptor.to_string());
        for (p, m) in self.comps.iter().enumerate() {
            if !m.is_zero() {
                d.field(&format!("A_{p}"), m);
            }
        }
        d.finish()
    }
}

impl GradedEndo {
    pub fn zero(ctx: &Arc<EndoContext>) -> Self {
        let comps = (0..=ctx.max_grade).map(|p| Matrix::zeros(ctx.dim(p), ctx.dim(p))).collect();
        GradedEndo { ctx: ctx.clone(), comps }
    }

    /// `𝐈 = (I_0, …, I_M)`, the unit of composition.
    pub fn identity(ctx: &Arc<EndoContext>) -> Self {
        let comps = (0..=ctx.max_grade).map(|p| ctx.identity_matrix(p)).collect();
        GradedEndo { ctx: ctx.clone(), comps }
    }

    /// `I_0 = (I_0, 0, …, 0)`, the unit of convolution and of the third product.
    pub fn unit(ctx: &Arc<EndoContext>) -> Self {
        Self::grade_identity(ctx, 0)
    }

    /// `I_p` placed in grade `p`.
    pub fn grade_identity(ctx: &Arc<EndoContext>, p: usize) -> Self {
        Self::single_grade(ctx, p, ctx.identity_matrix(p)).expect("identity has the right shape")
    }

    /// An endomorphism supported in one grade.
    pub fn single_grade(ctx: &Arc<EndoContext>, p: usize, m: Matrix) -> Result<Self, EndoError> {
        ctx.check_shape(p, &m)?;
        let mut e = Self::zero(ctx);
        e.comps[p] = m;
        Ok(e)
    }

    /// A grade-1 endomorphism given as a `d×d` matrix on `V = S^1`.
    pub fn grade1(ctx: &Arc<EndoContext>, m: Matrix) -> Result<Self, EndoError> {
        Self::single_grade(ctx, 1, m)
    }

    pub fn from_components(ctx: &Arc<EndoContext>, comps: Vec<Matrix>) -> Result<Self, EndoError> {
        if comps.len() != ctx.max_grade + 1 {
            return Err(EndoError::ComponentCount { expected: ctx.max_grade + 1, got: comps.len() });
        }
        for (p, m) in comps.iter().enumerate() {
            ctx.check_shape(p, m)?;
        }
        Ok(GradedEndo { ctx: ctx.clone(), comps })
    }

    /// Random components in every grade.
    pub fn random<R: Rng + ?Sized>(ctx: &Arc<EndoContext>, rng: &mut R, shape: &EntryShape) -> Self {
        let comps = (0..=ctx.max_grade).map(|p| random_matrix(rng, ctx.dim(p), shape)).collect();
        GradedEndo { ctx: ctx.clone(), comps }
    }

    /// A random endomorphism supported in grade `p`.
    pub fn random_single<R: Rng + ?Sized>(ctx: &Arc<EndoContext>, p: usize, rng: &mut R, shape: &EntryShape) -> Self {
        Self::single_grade(ctx, p, random_matrix(rng, ctx.dim(p), shape)).expect("random matrix has the right shape")
    }

    pub fn context(&self) -> &Arc<EndoContext> {
        &self.ctx
    }

    pub fn component(&self, p: usize) -> &Matrix {
        &self.comps[p]
    }

    pub fn components(&self) -> &[Matrix] {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Matrix::is_zero)
    }

    /// Grades with a nonzero component.
    pub fn support(&self) -> Vec<usize> {
        (0..self.comps.len()).filter(|&p| !self.comps[p].is_zero()).collect()
    }

    fn same_context(&self, other: &GradedEndo) -> Result<(), EndoError> {
        if Arc::ptr_eq(&self.ctx, &other.ctx) {
            Ok(())
        } else {
            Err(EndoError::ContextMismatch)
        }
    }

    fn zip(&self, other: &GradedEndo, f: impl Fn(&Matrix, &Matrix) -> Matrix) -> Result<GradedEndo, EndoError> {
        self.same_context(other)?;
        let comps = self.comps.iter().zip(&other.comps).map(|(a, b)| f(a, b)).collect();
        Ok(GradedEndo { ctx: self.ctx.clone(), comps })
    }

    pub fn add(&self, other: &GradedEndo) -> Result<GradedEndo, EndoError> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &GradedEndo) -> Result<GradedEndo, EndoError> {
        self.zip(other, |a, b| a - b)
    }

    pub fn scale(&self, c: &Scalar) -> GradedEndo {
        GradedEndo { ctx: self.ctx.clone(), comps: self.comps.iter().map(|m| m.scale(c)).collect() }
    }

    /// `(A ∘ B)_p = A_p ∘ B_p`.
    pub fn compose(&self, other: &GradedEndo) -> Result<GradedEndo, EndoError> {
        self.zip(other, |a, b| a * b)
    }

    /// `(A ∗ B)_p = Σ_l A_l ∗ B_{p-l}`.
    pub fn convolve(&self, other: &GradedEndo) -> Result<GradedEndo, EndoError> {
        self.same_context(other)?;
        Ok(GradedEndo { ctx: self.ctx.clone(), comps: convolve_components(&self.ctx, &self.comps, &other.comps) })
    }

    /// `α(A) = A ∗ e^{∗I_1}_ν`.
    pub fn alpha(&self) -> GradedEndo {
        GradedEndo { ctx: self.ctx.clone(), comps: convolve_components(&self.ctx, &self.comps, self.ctx.exp_unit()) }
    }

    /// `α^{-1}(A) = A ∗ (e^{∗I_1}_ν)^{-1}`.
    pub fn alpha_inv(&self) -> GradedEndo {
        GradedEndo { ctx: self.ctx.clone(), comps: convolve_components(&self.ctx, &self.comps, self.ctx.exp_unit_inv()) }
    }

    /// `A × B = α^{-1}((αA) ∘ (αB))`.
    pub fn third_product(&self, other: &GradedEndo) -> Result<GradedEndo, EndoError> {
        self.same_context(other)?;
        Ok(self.alpha().compose(&other.alpha())?.alpha_inv())
    }

    /// The scalar `Tr_q A` with `(αA)_M = (Tr_q A)·I_M`.
    pub fn q_trace(&self) -> Result<Scalar, EndoError> {
        let m = match self.ctx.top() {
            Some(m) if m == self.ctx.max_grade && self.ctx.dim(m) == 1 => m,
            _ => return Err(EndoError::NoTopGrade),
        };
        let exp = self.ctx.exp_unit();
        let mut acc = Scalar::zero();
        for k in 0..=m {
            if self.comps[k].is_zero() {
                continue;
            }
            acc += &self.ctx.star(k, &self.comps[k], m - k, &exp[m - k])?[(0, 0)];
        }
        Ok(acc)
    }
}

fn convolve_components(ctx: &EndoContext, a: &[Matrix], b: &[Matrix]) -> Vec<Matrix> {
    (0..=ctx.max_grade)
        .map(|p| {
            let mut acc = Matrix::zeros(ctx.dim(p), ctx.dim(p));
            for l in 0..=p {
                if a[l].is_zero() || b[p - l].is_zero() {
                    continue;
                }
                acc = &acc + &ctx.star(l, &a[l], p - l, &b[p - l]).expect("grades within the context");
            }
            acc
        })
        .collect()
}

/// `e^{∗A}_ν = (I_0, A/(1)_ν!, A^{∗2}/(2)_ν!, …)` for a grade-1 `A`.
pub fn conv_exp(ctx: &Arc<EndoContext>, a1: &Matrix) -> Result<GradedEndo, EndoError> {
    Ok(GradedEndo { ctx: ctx.clone(), comps: ctx.exp_components(a1, false)? })
}

/// `(e^{∗A}_ν)^{-1}`, with `p`-th component `(-1)^p ν^{p(p-1)/2} A^{∗p}/(p)_ν!`.
pub fn conv_exp_inv(ctx: &Arc<EndoContext>, a1: &Matrix) -> Result<GradedEndo, EndoError> {
    Ok(GradedEndo { ctx: ctx.clone(), comps: ctx.exp_components(a1, true)? })
}

/// Which coefficient in the closed expansion of `(A_i × B_j)_r` reproduces
/// the product defined through `α`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignAgreement {
    /// Only the coefficient `ν^{s(s-1)/2}/(s)_ν!` agrees.
    Unsigned,
    /// Only the coefficient `(-1)^s ν^{s(s-1)/2}/(s)_ν!` agrees.
    Signed,
    /// The two expansions coincide here and both agree.
    Both,
    Neither,
}

/// The closed expansion
/// `(A_i × B_j)_r = Σ_s c_s ((A_i ∗ I_{r-s-i}) ∘ (B_j ∗ I_{r-s-j})) ∗ I_1^{∗s}`
/// evaluated with both candidate coefficients `c_s`, next to the product
/// computed from the definition.
#[derive(Clone, Debug)]
pub struct ClosedThirdProduct {
    pub unsigned: Matrix,
    pub signed: Matrix,
    pub definitional: Matrix,
}

impl ClosedThirdProduct {
    pub fn agreement(&self) -> SignAgreement {
        match (self.unsigned == self.definitional, self.signed == self.definitional) {
            (true, true) => SignAgreement::Both,
            (true, false) => SignAgreement::Unsigned,
            (false, true) => SignAgreement::Signed,
            (false, false) => SignAgreement::Neither,
        }
    }
}

pub fn third_product_closed(
    ctx: &Arc<EndoContext>,
    i: usize,
    a: &Matrix,
    j: usize,
    b: &Matrix,
    r: usize,
) -> Result<ClosedThirdProduct, EndoError> {
    if r > ctx.max_grade {
        return Err(EndoError::GradeOutOfRange { grade: r, max: ctx.max_grade });
    }
    let unit_powers = ctx.star_powers(&ctx.identity_matrix(1))?;
    let n = ctx.dim(r);
    let (mut unsigned, mut signed) = (Matrix::zeros(n, n), Matrix::zeros(n, n));
    for s in 0..=r {
        let g = r - s;
        if g < i || g < j {
            continue;
        }
        let left = ctx.star(i, a, g - i, &ctx.identity_matrix(g - i))?;
        let right = ctx.star(j, b, g - j, &ctx.identity_matrix(g - j))?;
        let term = ctx.star(g, &(&left * &right), s, &unit_powers[s])?;
        let c = &ctx.nu.pow((s * s.saturating_sub(1) / 2) as i32)
            * &q_factorial(s as u32, &ctx.nu).inv().expect("q-factorials of a Hecke parameter are nonzero");
        unsigned = &unsigned + &term.scale(&c);
        signed = &signed + &term.scale(&(&c * &sign(s as i64)));
    }
    let x = GradedEndo::single_grade(ctx, i, a.clone())?;
    let y = GradedEndo::single_grade(ctx, j, b.clone())?;
    let definitional = x.third_product(&y)?.component(r).clone();
    Ok(ClosedThirdProduct { unsigned, signed, definitional })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::flip;
    use crate::scalar::{q_binomial, q_int};
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    fn s(x: &str) -> Scalar {
        x.parse().unwrap()
    }

    fn shape() -> EntryShape {
        EntryShape { min_exp: -1, max_exp: 1, max_coeff: 2, density: 0.5 }
    }

    #[test]
    fn context_dims_and_descriptor() {
        let ctx = EndoContext::sl_exterior(2).unwrap();
        assert_eq!(ctx.max_grade(), 3);
        assert_eq!(ctx.top(), Some(3));
        assert_eq!(*ctx.nu(), s("q^-2"));
        assert_eq!((0..=3).map(|p| ctx.dim(p)).collect::<Vec<_>>(), vec![1, 3, 3, 1]);
        assert_eq!(ctx.descriptor().to_string(), "sl-exterior N=2 M=3");
        let f = EndoContext::builtin(Builtin::Flip, 1, 3).unwrap();
        assert_eq!((f.max_grade(), f.top()), (3, None));
        assert!(matches!(EndoContext::from_braiding(crate::braid::builtin_c(1), 4), Err(EndoError::Braiding(_))));
    }

    #[test]
    fn descriptor_rebuild() {
        let b = Builtin::SlExterior.build(1);
        let ctx = EndoContext::from_braiding(b.clone(), 5).unwrap();
        let again = EndoContext::for_descriptor(b, ctx.descriptor()).unwrap();
        assert_eq!(again.descriptor(), ctx.descriptor());
        let f = EndoContext::builtin(Builtin::Flip, 1, 3).unwrap();
        let again = EndoContext::for_descriptor(flip(2), f.descriptor()).unwrap();
        assert_eq!(again.max_grade(), 3);
    }

    #[test]
    fn unit_star_products() {
        let ctx = EndoContext::sl_exterior(2).unwrap();
        let nu = ctx.nu().clone();
        let a = Matrix::from_fn(3, 3, |r, c| Scalar::from_int((r * 3 + c) as i64));
        assert_eq!(ctx.star(0, &ctx.identity_matrix(0), 1, &a).unwrap(), a);
        assert_eq!(ctx.star(1, &a, 0, &ctx.identity_matrix(0)).unwrap(), a);
        let i11 = ctx.star(1, &ctx.identity_matrix(1), 1, &ctx.identity_matrix(1)).unwrap();
        assert_eq!(i11, ctx.identity_matrix(2).scale(&q_int(2, &nu)));
        for i in 0..=3 {
            for j in 0..=3 - i {
                let x = ctx.star(i, &ctx.identity_matrix(i), j, &ctx.identity_matrix(j)).unwrap();
                assert_eq!(x, ctx.identity_matrix(i + j).scale(&q_binomial((i + j) as i64, i as i64, &nu)));
            }
        }
        assert!(matches!(ctx.star(2, &ctx.identity_matrix(2), 2, &ctx.identity_matrix(2)), Err(EndoError::GradeOverflow { .. })));
    }

    #[test]
    fn unit_powers_on_the_flip() {
        let ctx = EndoContext::builtin(Builtin::Flip, 1, 4).unwrap();
        let pw = ctx.star_powers(&ctx.identity_matrix(1)).unwrap();
        for (p, m) in pw.iter().enumerate() {
            assert_eq!(*m, ctx.identity_matrix(p).scale(&q_factorial(p as u32, ctx.nu())));
        }
    }

    #[test]
    fn exterior_star_of_matrix_units() {
        // E_12 ∗ E_21 acts on the top wedge by -q^-1
        let ctx = EndoContext::sl_exterior(1).unwrap();
        let e12 = Matrix::unit(2, 0, 1);
        let e21 = Matrix::unit(2, 1, 0);
        let x = ctx.star(1, &e12, 1, &e21).unwrap();
        assert_eq!(x, Matrix::identity(1).scale(&s("-q^-1")));
    }

    #[test]
    fn exponentials() {
        let ctx = EndoContext::sl_exterior(2).unwrap();
        assert_eq!(conv_exp(&ctx, &ctx.identity_matrix(1)).unwrap(), GradedEndo::identity(&ctx));
        let zero = Matrix::zeros(3, 3);
        assert_eq!(conv_exp(&ctx, &zero).unwrap(), GradedEndo::unit(&ctx));
        assert_eq!(conv_exp_inv(&ctx, &zero).unwrap(), GradedEndo::unit(&ctx));
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..3 {
            let a = random_matrix(&mut rng, 3, &shape());
            let e = conv_exp(&ctx, &a).unwrap();
            let ei = conv_exp_inv(&ctx, &a).unwrap();
            assert_eq!(ei.convolve(&e).unwrap(), GradedEndo::unit(&ctx));
            assert_eq!(e.convolve(&ei).unwrap(), GradedEndo::unit(&ctx));
            let pw = ctx.star_powers(&a).unwrap();
            assert_eq!(e.component(2).scale(&q_factorial(2, ctx.nu())), pw[2]);
        }
        let inv = conv_exp_inv(&ctx, &ctx.identity_matrix(1)).unwrap();
        let expected = ctx.star_powers(&ctx.identity_matrix(1)).unwrap()[2].scale(&(ctx.nu() / &q_factorial(2, ctx.nu())));
        assert_eq!(*inv.component(2), expected);
    }

    #[test]
    fn products_and_units() {
        let ctx = EndoContext::sl_exterior(1).unwrap();
        let mut rng = StdRng::seed_from_u64(3);
        let a = GradedEndo::random(&ctx, &mut rng, &shape());
        let b = GradedEndo::random(&ctx, &mut rng, &shape());
        let c = GradedEndo::random(&ctx, &mut rng, &shape());
        let id = GradedEndo::identity(&ctx);
        let unit = GradedEndo::unit(&ctx);
        assert_eq!(id.compose(&a).unwrap(), a);
        assert_eq!(unit.convolve(&a).unwrap(), a);
        assert_eq!(a.convolve(&unit).unwrap(), a);
        assert_eq!(unit.third_product(&a).unwrap(), a);
        assert_eq!(a.third_product(&unit).unwrap(), a);
        assert_eq!(a.compose(&b).unwrap().compose(&c).unwrap(), a.compose(&b.compose(&c).unwrap()).unwrap());
        assert_eq!(a.convolve(&b).unwrap().convolve(&c).unwrap(), a.convolve(&b.convolve(&c).unwrap()).unwrap());
        let l = a.third_product(&b).unwrap().third_product(&c).unwrap();
        let r = a.third_product(&b.third_product(&c).unwrap()).unwrap();
        assert_eq!(l, r);
        assert_eq!(a.alpha().alpha_inv(), a);
        assert_eq!(unit.alpha(), conv_exp(&ctx, &ctx.identity_matrix(1)).unwrap());
        let other = EndoContext::sl_exterior(1).unwrap();
        assert_eq!(a.compose(&GradedEndo::identity(&other)), Err(EndoError::ContextMismatch));
    }

    #[test]
    fn q_trace_examples() {
        let ctx = EndoContext::sl_exterior(1).unwrap();
        assert_eq!(GradedEndo::unit(&ctx).q_trace().unwrap(), Scalar::one());
        let e22 = GradedEndo::grade1(&ctx, Matrix::unit(2, 1, 1)).unwrap();
        assert_eq!(e22.q_trace().unwrap(), s("q^-2"));
        let e11 = GradedEndo::grade1(&ctx, Matrix::unit(2, 0, 0)).unwrap();
        assert_eq!(e11.q_trace().unwrap(), Scalar::one());
        let flip_ctx = EndoContext::builtin(Builtin::Flip, 1, 3).unwrap();
        assert_eq!(GradedEndo::unit(&flip_ctx).q_trace(), Err(EndoError::NoTopGrade));
    }

    #[test]
    fn closed_third_product_sign() {
        let ctx = EndoContext::sl_exterior(1).unwrap();
        let mut rng = StdRng::seed_from_u64(5);
        let a = random_matrix(&mut rng, 2, &shape());
        let b = random_matrix(&mut rng, 2, &shape());
        let rep = third_product_closed(&ctx, 1, &a, 1, &b, 2).unwrap();
        assert_eq!(rep.agreement(), SignAgreement::Signed);
        let rep = third_product_closed(&ctx, 1, &a, 1, &b, 1).unwrap();
        assert_eq!(rep.agreement(), SignAgreement::Both);
        assert_eq!(rep.definitional, &a * &b);
        let rep = third_product_closed(&ctx, 1, &a, 1, &b, 0).unwrap();
        assert!(rep.definitional.is_zero() && rep.agreement() == SignAgreement::Both);
    }
}
