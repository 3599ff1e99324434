//! Identity suites: exact checks of the algebraic identities over random and
//! exhaustive inputs, each reporting the first counterexample found.

use std::sync::Arc;

use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::Serialize;
use thiserror::Error;

use crate::braid::{self, builtin_c, builtin_c_dual, Braiding, Builtin};
use crate::endo::{self, conv_exp, conv_exp_inv, EndoContext, EndoError, GradedEndo, SignAgreement};
use crate::exterior::{
    self, conv_basis_endo_matrix, iota, iota_inverse, partial_trace_chain, q_trace_closed, q_trace_closed_shuffle,
    q_trace_powers, quantum_trace, ConvBasisEndo, ExteriorContext, ExteriorError, PowerMode, WedgeEndo, WedgeIndex,
};
use crate::linalg::Matrix;
use crate::perm::DEFAULT_ENUMERATION_BOUND;
use crate::random::{random_matrix, EntryShape};
use crate::scalar::{q_binomial, q_factorial, Scalar};
use crate::symmetric::{self, SymmetricError};

pub const DEFAULT_MAX_N: usize = 3;
pub const DEFAULT_MAX_P: usize = 5;
pub const DEFAULT_SAMPLES: usize = 20;
pub const DEFAULT_SEED: u64 = 20_240_917;

/// Suite names with one-line descriptions, in the order `all` runs them.
pub const SUITES: &[(&str, &str)] = &[
    ("braiding-axioms", "Yang-Baxter and quadratic relations of the builtin braidings"),
    ("symmetrizer", "(A^(p))^2 = (p)_nu! A^(p)"),
    ("grade-profile", "dimensions of the graded components"),
    ("unit-powers", "I_1^{*p} = (p)_nu! I_p and I_i * I_j = binom(i+j, i)_nu I_{i+j}"),
    ("exp-inverse", "inverse of the convolution exponential"),
    ("products", "associativity and units of composition and convolution"),
    ("third-product", "associativity, unit, vanishing and top-grade composition of the third product"),
    ("third-product-closed", "closed expansion of the third product, both sign conventions"),
    ("trace-morphism", "Tr_q is additive, multiplicative and commutative for the third product"),
    ("closed-trace", "Tr_q through the generic machinery equals the closed weighted diagonal sum"),
    ("trace-forms", "monotone-tuple and shuffle forms of the closed trace agree"),
    ("power-traces", "closed traces of composition and convolution powers"),
    ("partial-trace", "Tr_q A = (-q)^{p(p-1)} (Tr_q)_1 ... (Tr_q)_p A"),
    ("quantum-trace", "Tr_q A = q^{-p(N+1-p)} tr(rho^p(K) A)"),
    ("star-rules", "star products of matrix units and multiplicativity of iota"),
];

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
    #[error("{what} = {value} exceeds the default bound {bound}; pass an explicit override to run it")]
    BoundExceeded { what: &'static str, value: usize, bound: usize },
    #[error(transparent)]
    Endo(#[from] EndoError),
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
    #[error(transparent)]
    Symmetric(#[from] SymmetricError),
    #[error(transparent)]
    Braiding(#[from] braid::BraidingError),
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub n: usize,
    pub max_p: usize,
    pub samples: usize,
    pub seed: u64,
    /// A braiding to use instead of the builtin `sl-exterior` at `n`.
    /// Suites specific to the type-A exterior algebra are skipped for it.
    pub braiding: Option<Braiding>,
    /// Lift the default bounds on `n` and `max_p`.
    pub unbounded: bool,
    pub shape: EntryShape,
}

impl VerifyConfig {
    pub fn new(n: usize) -> Self {
        VerifyConfig {
            n,
            max_p: DEFAULT_MAX_P,
            samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
            braiding: None,
            unbounded: false,
            shape: EntryShape::default(),
        }
    }

    fn check_bounds(&self) -> Result<(), VerifyError> {
        if self.unbounded {
            return Ok(());
        }
        if self.n > DEFAULT_MAX_N {
            return Err(VerifyError::BoundExceeded { what: "N", value: self.n, bound: DEFAULT_MAX_N });
        }
        if self.max_p > DEFAULT_ENUMERATION_BOUND {
            return Err(VerifyError::BoundExceeded { what: "max-p", value: self.max_p, bound: DEFAULT_ENUMERATION_BOUND });
        }
        Ok(())
    }
}

/// Outcome of one identity over all its cases.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityResult {
    pub identity: String,
    pub passed: bool,
    pub cases: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
    pub results: Vec<IdentityResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }
}

struct Check {
    identity: String,
    cases: usize,
    counterexample: Option<String>,
    note: Option<String>,
}

impl Check {
    fn new(identity: impl Into<String>) -> Self {
        Check { identity: identity.into(), cases: 0, counterexample: None, note: None }
    }

    fn case(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.counterexample.is_none() {
            self.counterexample = Some(describe());
        }
    }

    fn fail(&mut self, describe: impl Into<String>) {
        self.case(false, || describe.into());
    }

    fn finish(self) -> IdentityResult {
        IdentityResult {
            identity: self.identity,
            passed: self.counterexample.is_none(),
            cases: self.cases,
            counterexample: self.counterexample,
            note: self.note,
        }
    }
}

struct Env<'a> {
    cfg: &'a VerifyConfig,
    braiding: Braiding,
    type_a: bool,
    rng: StdRng,
}

impl Env<'_> {
    fn context(&self) -> Result<Arc<EndoContext>, VerifyError> {
        if self.type_a && self.cfg.braiding.is_none() {
            return Ok(EndoContext::sl_exterior(self.cfg.n)?);
        }
        Ok(EndoContext::from_braiding(self.braiding.clone(), self.cfg.max_p)?)
    }

    fn random_grade1(&mut self, d: usize) -> Matrix {
        random_matrix(&mut self.rng, d, &self.cfg.shape)
    }
}

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|s| s.0).collect()
}

/// Runs one suite, or every suite for `"all"`.
pub fn run(name: &str, cfg: &VerifyConfig) -> Result<Vec<SuiteReport>, VerifyError> {
    cfg.check_bounds()?;
    if name == "all" {
        return SUITES.iter().map(|(s, _)| run_one(s, cfg)).collect();
    }
    Ok(vec![run_one(name, cfg)?])
}

fn run_one(name: &str, cfg: &VerifyConfig) -> Result<SuiteReport, VerifyError> {
    let Some(pos) = SUITES.iter().position(|s| s.0 == name) else {
        return Err(VerifyError::UnknownSuite(name.to_string()));
    };
    let standard = Builtin::SlExterior.build(cfg.n);
    let braiding = cfg.braiding.clone().unwrap_or_else(|| standard.clone());
    let type_a = braiding == standard;
    let mut env = Env { cfg, braiding, type_a, rng: StdRng::seed_from_u64(cfg.seed.wrapping_add(pos as u64)) };
    let needs_type_a = matches!(
        name,
        "closed-trace" | "trace-forms" | "power-traces" | "partial-trace" | "quantum-trace" | "star-rules"
    );
    let mut report = SuiteReport { suite: name.to_string(), n: cfg.n, skipped: None, results: Vec::new() };
    if needs_type_a && !env.type_a {
        report.skipped = Some("requires the sl-exterior braiding".into());
        return Ok(report);
    }
    let results = match name {
        "braiding-axioms" => braiding_axioms(&mut env)?,
        "symmetrizer" => symmetrizer_suite(&mut env)?,
        "grade-profile" => grade_profile_suite(&mut env)?,
        "unit-powers" => unit_powers(&mut env)?,
        "exp-inverse" => exp_inverse(&mut env)?,
        "products" => products(&mut env)?,
        "third-product" => third_product(&mut env)?,
        "third-product-closed" => third_product_closed(&mut env)?,
        "trace-morphism" => trace_morphism(&mut env)?,
        "closed-trace" => closed_trace(&mut env)?,
        "trace-forms" => trace_forms(&mut env)?,
        "power-traces" => power_traces(&mut env)?,
        "partial-trace" => partial_trace(&mut env)?,
        "quantum-trace" => quantum_trace_suite(&mut env)?,
        "star-rules" => star_rules(&mut env)?,
        _ => unreachable!("suite table and dispatch agree"),
    };
    report.results = results;
    Ok(report)
}

fn braiding_axioms(env: &mut Env) -> Result<Vec<IdentityResult>, VerifyError> {
    let n = env.cfg.n;
    let mut out = Vec::new();
    let mut candidates = vec![
        ("c".to_string(), builtin_c(n)),
        ("-c".to_string(), builtin_c(n).negate()?),
        ("c^dual".to_string(), builtin_c_dual(n)),
        ("-c^dual".to_string(), builtin_c_dual(n).negate()?),
    ];
    if let Some(b) = &env.cfg.braiding {
        candidates.push(("input".to_string(), b.clone()));
    }
    let mut ybe = Check::new("Yang-Baxter equation on V^{⊗3}");
    let mut quad = Check::new("quadratic relation (sigma - l1)(sigma - l2) = 0");
    let mut inv = Check::new("invertibility");
    for (label, b) in &candidates {
        let r = b.check_axioms();
        ybe.case(r.yang_baxter, || format!("{label} at N={n}"));
        quad.case(r.quadratic, || format!("{label} at N={n}"));
        inv.case(r.invertible, || format!("{label} at N={n}"));
    }
    out.extend([ybe.finish(), quad.finish(), inv.finish()]);
    let mut dual = Check::new("c^dual = (c^{-1})^T");
    let c = builtin_c(n);
    match c.matrix().inverse() {
        Ok(ci) => dual.case(ci.transpose() == *builtin_c_dual(n).matrix(), || format!("N={n}")),
        Err(_) => dual.fail(format!("c is singular at N={n}")),
    }
    out.push(dual.finish());
    let mut hecke = Check::new("-c is of Hecke type with nu = q^-2");
    hecke.case(builtin_c(n).negate()?.hecke_param() == Some(Scalar::q_pow(-2)), || format!("N={n}"));
    out.push(hecke.finish());
    Ok(out)
}

fn symmetrizer_suite(env: &mut Env) -> Result<Vec<IdentityResult>, VerifyError> {
    let b = &env.braiding;
    let nu = b.require_hecke()?;
    let top = (env.cfg.n + 2).min(env.cfg.max_p);
    let syms = braid::symmetrizers_up_to(b, top, DEFAULT_ENUMERATION_BOUND)?;
    let mut check = Check::new("(A^(p))^2 = (p)_nu! A^(p)");
    for (p, a) in syms.iter().enumerate().skip(1) {
        let lhs = a.compose(a);
        let rhs = a.scale(&q_factorial(p as u32, &nu));
        check.case(lhs == rhs, || format!("p={p}"));
    }
    let mut lit = Check::new("factored symmetrizer equals the sum of all braid lifts");
    for (p, a) in syms.iter().enumerate().take(4.min(top + 1)) {
        lit.case(*a == braid::symmetrizer_by_enumeration(b, p)?, || format!("p={p}"));
    }
    Ok(vec![check.finish(), lit.finish()])
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, t| acc * (n - t) / (t + 1))
}

fn grade_profile_suite(env: &mut Env) -> Result<Vec<IdentityResult>, VerifyError> {
    let n = env.cfg.n;
    let bound = if env.type_a { n + 2 } else { env.cfg.max_p };
    let profile = symmetric::grade_profile(&env.braiding, bound)?;
    let d = env.braiding.dim();
    let mut low = Check::new("dim S^0 = 1 and dim S^1 = dim V");
    low.case(profile.dims[0] == 1, || format!("dim S^0 = {}", profile.dims[0]));
    if profile.dims.len() > 1 {
        low.case(profile.dims[1] == d, || format!("dim S^1 = {}", profile.dims[1]));
    }
    let mut out = vec![low.finish()];
    if env.type_a {
        let mut check = Check::new("dim S^p = binom(N+1, p) for p <= N+2");
        for (p, &dim) in profile.dims.iter().enumerate() {
            check.case(dim == binomial(n + 1, p), || format!("p={p}: dim {dim}, expected {}", binomial(n + 1, p)));
        }
        let mut top = Check::new("top grade M = N+1");
        top.case(profile.top == Some(n + 1), || format!("top {:?}", profile.top));
        out.extend([check.finish(), top.finish()]);
    }
    let mut res = Check::new("profile recorded");
    res.note = Some(format!("dims {:?}, top {:?}", profile.dims, profile.top));
    res.case(true, String::new);
    out.push(res.finish());
    Ok(out)
}

fn unit_powers(env: &mut Env) -> Result<Vec<IdentityResult>, VerifyError> {
    let mut contexts = vec![env.context()?];
    if env.type_a {
        // the nu = 1 flip has no top grade; check it up to a small bound
        contexts.push(EndoContext::builtin(Builtin::Flip, env.cfg.n, env.cfg.max_p.min(4))?);
    }
    let mut powers = Check::new("I_1^{*p} = (p)_nu! I_p");
    let mut pairs = Check::new("I_i * I_j = binom(i+j, i)_nu I_{i+j}");
    for ctx in &contexts {
        let label = ctx.descriptor().to_string();
        let nu = ctx.nu().clone();
        let pw = ctx.star_powers(&ctx.identity_matrix(1))?;
        for (p, m) in pw.iter().enumerate() {
            powers.case(*m == ctx.identity_matrix(p).scale(&q_factorial(p as u32, &nu)), || format!("{label}, p={p}"));
        }
        let m = ctx.max_grade();
        for i in 0..=m {
            for j in 0..=m - i {
                let x = ctx.star(i, &ctx.identity_matrix(i), j, &ctx.identity_matrix(j))?;
                let c = q_binomial((i + j) as i64, i as i64, &nu);
                pairs.case(x == ctx.identity_matrix(i + j).scale(&c), || format!("{label}, i={i}, j={j}"));
            }
        }
    }
    Ok(vec![powers.finish(), pairs.finish()])
}

fn exp_inverse(env: &mut Env) -> Result<Vec<IdentityResult>, VerifyError> {
    let ctx = env.context()?;
    let unit = GradedEndo::unit(&ctx);
    let mut left = Check::new("exp_inv(A) * exp(A) = I_0");
    let mut right = Check::new("exp(A) * exp_inv(A) = I_0");
    let mut unit_exp = Check::new("exp(I_1) = (I_0, I_1, ..., I_M)");
    unit_exp.case(conv_exp(&ctx, &ctx.identity_matrix(1))? == GradedEndo::identity(&ctx), || "exp(I_1)".into());
    for k in 0..env.cfg.samples {
        let a = env.random_grade1(ctx.dim(1));
        let e = conv_exp(&ctx, &a)?;
        let ei = conv_exp_inv(&ctx, &a)?;
        left.case(ei.convolve(&e)? == unit, || format!("sample {k}: A = {a:?}"));
        right.case(e.convolve(&ei)? == unit, || format!("sample {k}: A = {a:?}"));
    }
    Ok(vec![left.finish(), right.finish(), unit_exp.finish()])
}

fn triples(env: &mut Env, ctx: &Arc<EndoContext>) -> Vec<[GradedEndo; 3]> {
    let count = env.cfg.samples.div_ceil(2);
    (0..count)
        .map(|_| {
            let shape = env.cfg.shape;
            std::array::from_fn(|_| GradedEndo::random(ctx, &mut env.rng, &shape))
        })
        .collect()
}

fn products(env: &mut Env) -> Result<Vec<IdentityResult>, VerifyError> {
    let ctx = env.context()?;
    let id = GradedEndo::identity(&ctx);
    let unit = GradedEndo::unit(&ctx);
    let mut comp = Check::new("(A ∘ B) ∘ C = A ∘ (B ∘ C)");
    let mut conv = Check::new("(A * B) * C = A * (B * C)");
    let mut units = Check::new("𝐈 ∘ A = A ∘ 𝐈 = A and I_0 * A = A * I_0 = A");
    for (k, [a, b, c]) in triples(env, &ctx).into_iter().enumerate() {
        comp.case(a.compose(&b)?.compose(&c)? == a.compose(&b.compose(&c)?)?, || format!("triple {k}"));
        conv.case(a.convolve(&b)?.convolve(&c)? == a.convolve(&b.convolve(&c)?)?, || format!("triple {k}"));
        let ok = id.compose(&a)? == a && a.compose(&id)? == a && unit.convolve(&a)? == a && a.convolve(&unit)? == a;
        units.case(ok, || format!("triple {k}"));
    }
    Ok(vec![comp.finish(), conv.finish(), units.finish()])
}

fn third_product(env: &mut Env) -> Result<Vec<IdentityResult>, VerifyError> {
    let ctx = env.context()?;
    let unit = GradedEndo::unit(&ctx);
    let m = ctx.max_grade();
    let mut assoc = Check::new("(A × B) × C = A × (B × C)");
    let mut units = Check::new("I_0 × A = A × I_0 = A");
    let mut round = Check::new("alpha_inv(alpha(A)) = A");
    let mut alpha_top = Check::new("alpha(A)_M = sum_k A_k * I_{M-k}");
    for (k, [a, b, c]) in triples(env, &ctx).into_iter().enumerate() {
        let l = a.third_product(&b)?.third_product(&c)?;
        let r = a.third_product(&b.third_product(&c)?)?;
        assoc.case(l == r, || format!("triple {k}"));
        units.case(unit.third_product(&a)? == a && a.third_product(&unit)? == a, || format!("sample {k}"));
        round.case(a.alpha().alpha_inv() == a, || format!("sample {k}"));
        let mut top = Matrix::zeros(ctx.dim(m), ctx.dim(m));
        for q in 0..=m {
            top = &top + &ctx.star(q, a.component(q), m - q, &ctx.identity_matrix(m - q))?;
        }
        alpha_top.case(*a.alpha().component(m) == top, || format!("sample {k}"));
    }
    let mut vanish = Check::new("(A_i × B_j)_r = 0 for r < max(i, j)");
    let mut diag = Check::new("(A_r × B_r)_r = A_r ∘ B_r");
    let shape = env.cfg.shape;
    for i in 0..=m {
        for j in 0..=m {
            let a = GradedEndo::random_single(&ctx, i, &mut env.rng, &shape);
            let b = GradedEndo::random_single(&ctx, j, &mut env.rng, &shape);
            let x = a.third_product(&b)?;
            for r in 0..i.max(j) {
                vanish.case(x.component(r).is_zero(), || format!("i={i}, j={j}, r={r}"));
            }
            if i == j {
                diag.case(*x.component(i) == a.component(i) * b.component(i), || format!("r={i}"));
            }
        }
    }
    Ok(vec![assoc.finish(), units.finish(), round.finish(), alpha_top.finish(), vanish.finish(), diag.finish()])
}

fn third_product_closed(env: &mut Env) -> Result<Vec<IdentityResult>, VerifyError> {
    let ctx = env.context()?;
    let m = ctx.max_grade();
    let shape = env.cfg.shape;
    let mut check = Check::new("closed expansion of (A_i × B_j)_r agrees with the definition under one consistent sign");
    let (mut signed, mut unsigned, mut both, mut neither) = (0usize, 0usize, 0usize, 0usize);
    for i in 0..=m {
        for j in 0..=m {
            for r in 0..=m {
                let a = random_matrix(&mut env.rng, ctx.dim(i), &shape);
                let b = random_matrix(&mut env.rng, ctx.dim(j), &shape);
                let rep = endo::third_product_closed(&ctx, i, &a, j, &b, r)?;
                let agreement = rep.agreement();
                match agreement {
                    SignAgreement::Signed => signed += 1,
                    SignAgreement::Unsigned => unsigned += 1,
                    SignAgreement::Both => both += 1,
                    SignAgreement::Neither => neither += 1,
                }
                let consistent = agreement != SignAgreement::Neither && !(signed > 0 && unsigned > 0);
                check.case(consistent, || format!("i={i}, j={j}, r={r}: {agreement:?}"));
            }
        }
    }
    let winner = match (signed > 0, unsigned > 0) {
        (true, false) => "the (-1)^s nu^{s(s-1)/2}/(s)_nu! coefficient matches the definition",
        (false, true) => "the nu^{s(s-1)/2}/(s)_nu! coefficient without sign matches the definition",
        (false, false) => "both coefficients give the same result on every case",
        (true, true) => "inconsistent: each coefficient matches somewhere",
    };
    check.note = Some(format!(
        "{winner}; signed only: {signed}, unsigned only: {unsigned}, coincide: {both}, neither: {neither}"
    ));
    Ok(vec![check.finish()])
}

fn trace_morphism(env: &mut Env) -> Result<Vec<IdentityResult>, VerifyError> {
    let ctx = env.context()?;
    if ctx.top().is_none() {
        let mut c = Check::new("Tr_q requires a top grade");
        c.fail("no top grade within the bound");
        return Ok(vec![c.finish()]);
    }
    let shape = env.cfg.shape;
    let mut add = Check::new("Tr_q(A + B) = Tr_q A + Tr_q B");
    let mut mul = Check::new("Tr_q(A × B) = Tr_q A · Tr_q B");
    let mut comm = Check::new("Tr_q(A × B) = Tr_q(B × A)");
    let mut unit = Check::new("Tr_q I_0 = 1");
    unit.case(GradedEndo::unit(&ctx).q_trace()?.is_one(), || "I_0".into());
    for k in 0..env.cfg.samples {
        let a = GradedEndo::random(&ctx, &mut env.rng, &shape);
        let b = GradedEndo::random(&ctx, &mut env.rng, &shape);
        let (ta, tb) = (a.q_trace()?, b.q_trace()?);
        add.case(a.add(&b)?.q_trace()? == &ta + &tb, || format!("pair {k}"));
        let tab = a.third_product(&b)?.q_trace()?;
        mul.case(tab == &ta * &tb, || format!("pair {k}"));
        comm.case(tab == b.third_product(&a)?.q_trace()?, || format!("pair {k}"));
    }
    Ok(vec![unit.finish(), add.finish(), mul.finish(), comm.finish()])
}

fn closed_trace(env: &mut Env) -> Result<Vec<IdentityResult>, VerifyError> {
    let n = env.cfg.n;
    let ext = ExteriorContext::new(n)?;
    let mut basis = Check::new("wedge basis and component basis are related by an invertible change of basis");
    for p in 0..=n + 1 {
        basis.case(ext.change_of_basis(p).is_invertible(), || format!("p={p}"));
    }
    let mut check = Check::new("Tr_q A via alpha = sum_l q^{(p+1)p - 2 sum l} a^l_l");
    for p in 0..=n + 1 {
        for k in 0..env.cfg.samples {
            let a = WedgeEndo::random(n + 1, p, &mut env.rng, &env.cfg.shape);
            let generic = ext.generic_q_trace(&a)?;
            let closed = q_trace_closed(&a);
            check.case(generic == closed, || format!("p={p}, sample {k}: generic {generic}, closed {closed}"));
        }
    }
    Ok(vec![basis.finish(), check.finish()])
}

fn trace_forms(env: &mut Env) -> Result<Vec<IdentityResult>, VerifyError> {
    let n = env.cfg.n;
    let d = n + 1;
    let mut check = Check::new("monotone-tuple form = shuffle form, on every matrix unit");
    for p in 0..=d {
        for r in WedgeIndex::all(d, p) {
            for c in WedgeIndex::all(d, p) {
                let e = conv_basis_endo_matrix(&ConvBasisEndo::new(r.clone(), c.clone())?, d)?;
                check.case(q_trace_closed(&e) == q_trace_closed_shuffle(&e), || format!("E[{r}; {c}]"));
            }
        }
    }
    Ok(vec![check.finish()])
}

fn power_traces(env: &mut Env) -> Result<Vec<IdentityResult>, VerifyError> {
    let n = env.cfg.n;
    let d = n + 1;
    let ext = ExteriorContext::new(n)?;
    let ctx = ext.context().clone();
    let mut conv = Check::new("closed Tr_q(A^{*p}) = Tr_q of the computed convolution power");
    let mut comp = Check::new("closed Tr_q(A^p) = Tr_q of the matrix power");
    let samples = env.cfg.samples.div_ceil(4).max(1);
    for k in 0..samples {
        let a = env.random_grade1(d);
        let pw = ctx.star_powers(&a)?;
        for (p, apk) in pw.iter().enumerate() {
            let brute = GradedEndo::single_grade(&ctx, p, apk.clone())?.q_trace()?;
            conv.case(q_trace_powers(&a, p, PowerMode::Convolution)? == brute, || format!("sample {k}, p={p}"));
            let brute = GradedEndo::grade1(&ctx, a.pow(p as u32))?.q_trace()?;
            comp.case(q_trace_powers(&a, p, PowerMode::Composition)? == brute, || format!("sample {k}, p={p}"));
        }
    }
    let mut diag = Check::new("diagonal A: Tr_q A^{*(N+1)} = (N+1)_{q^-2}! prod a_ii and Tr_q A^p = sum q^{-2(i-1)} a_ii^p");
    let nu = Scalar::q_pow(-2);
    for k in 0..samples {
        let entries: Vec<Scalar> = (0..d).map(|_| crate::random::random_scalar(&mut env.rng, &env.cfg.shape)).collect();
        let a = Matrix::from_fn(d, d, |r, c| if r == c { entries[r].clone() } else { Scalar::zero() });
        let prod: Scalar = entries.iter().cloned().product();
        let expect = &q_factorial(d as u32, &nu) * &prod;
        diag.case(q_trace_powers(&a, d, PowerMode::Convolution)? == expect, || format!("sample {k}, convolution"));
        for p in 0..=d {
            let expect: Scalar =
                entries.iter().enumerate().map(|(i, x)| &Scalar::q_pow(-2 * i as i32) * &x.pow(p as i32)).sum();
            diag.case(q_trace_powers(&a, p, PowerMode::Composition)? == expect, || format!("sample {k}, p={p}"));
        }
    }
    Ok(vec![conv.finish(), comp.finish(), diag.finish()])
}

fn partial_trace(env: &mut Env) -> Result<Vec<IdentityResult>, VerifyError> {
    let n = env.cfg.n;
    let ext = ExteriorContext::new(n)?;
    let mut check = Check::new("Tr_q A = (-q)^{p(p-1)} (Tr_q)_1 ... (Tr_q)_p A");
    let mq = -Scalar::q();
    for p in 0..=3.min(n + 1) {
        for k in 0..env.cfg.samples {
            let a = WedgeEndo::random(n + 1, p, &mut env.rng, &env.cfg.shape);
            let chain = &mq.pow((p * p.saturating_sub(1)) as i32) * &partial_trace_chain(&a)?;
            let direct = ext.generic_q_trace(&a)?;
            check.case(chain == direct, || format!("p={p}, sample {k}: chain {chain}, Tr_q {direct}"));
        }
    }
    let mut unit = Check::new("(Tr_q)_2 E[e1∧e2; e1∧e2] = q^-2 E[e1; e1]");
    if n >= 1 {
        let e = conv_basis_endo_matrix(&ConvBasisEndo::new(WedgeIndex::new(vec![1, 2])?, WedgeIndex::new(vec![1, 2])?)?, 2)?;
        let t = exterior::partial_trace(&e)?;
        let w1 = WedgeIndex::new(vec![1])?;
        unit.case(t.coefficient(&w1, &w1)? == Scalar::q_pow(-2) && t.records().len() == 1, || format!("{t:?}"));
    }
    Ok(vec![check.finish(), unit.finish()])
}

fn quantum_trace_suite(env: &mut Env) -> Result<Vec<IdentityResult>, VerifyError> {
    let n = env.cfg.n;
    let ext = ExteriorContext::new(n)?;
    let mut first = Check::new("grade 1: Tr_q A = q^{-N} tr_q A");
    let mut all = Check::new("Tr_q A = q^{-p(N+1-p)} tr_q A");
    for p in 0..=n + 1 {
        let ratio = Scalar::q_pow(-((p * (n + 1 - p)) as i32));
        for k in 0..env.cfg.samples {
            let a = WedgeEndo::random(n + 1, p, &mut env.rng, &env.cfg.shape);
            let tq = ext.generic_q_trace(&a)?;
            let tr = quantum_trace(&a)?;
            all.case(tq == &ratio * &tr, || format!("p={p}, sample {k}: Tr_q {tq}, tr_q {tr}"));
            if p == 1 {
                first.case(tq == &Scalar::q_pow(-(n as i32)) * &tr, || format!("sample {k}"));
            }
        }
    }
    Ok(vec![first.finish(), all.finish()])
}

fn star_rules(env: &mut Env) -> Result<Vec<IdentityResult>, VerifyError> {
    let n = env.cfg.n;
    let d = n + 1;
    let ext = ExteriorContext::new(n)?;
    let w1 = |i: usize| WedgeIndex::new(vec![i]).expect("single index");
    let unit = |i: usize, j: usize| conv_basis_endo_matrix(&ConvBasisEndo::new(w1(i), w1(j)).expect("same grade"), d);
    let mut table = vec![vec![None; d * d]; d * d];
    for i in 1..=d {
        for j in 1..=d {
            for k in 1..=d {
                for l in 1..=d {
                    table[(i - 1) * d + j - 1][(k - 1) * d + l - 1] = Some(ext.star(&unit(i, j)?, &unit(k, l)?)?);
                }
            }
        }
    }
    let star = |i: usize, j: usize, k: usize, l: usize| -> &WedgeEndo {
        table[(i - 1) * d + j - 1][(k - 1) * d + l - 1].as_ref().expect("filled above")
    };
    let x = Scalar::q_pow(-1);
    let scaled = |e: &WedgeEndo| WedgeEndo::from_matrix(d, 2, e.matrix().scale(&-&x)).expect("same shape");
    let mut same_row = Check::new("E_ij * E_ik = 0");
    let mut same_col = Check::new("E_ij * E_kj = 0");
    let mut rows = Check::new("E_kj * E_il = -q^-1 E_ij * E_kl for i < k");
    let mut cols = Check::new("E_il * E_kj = -q^-1 E_ij * E_kl for j < l");
    for i in 1..=d {
        for j in 1..=d {
            for k in 1..=d {
                same_row.case(star(i, j, i, k).matrix().is_zero(), || format!("i={i}, j={j}, k={k}"));
                same_col.case(star(i, j, k, j).matrix().is_zero(), || format!("i={i}, j={j}, k={k}"));
                for l in 1..=d {
                    if i < k {
                        rows.case(*star(k, j, i, l) == scaled(star(i, j, k, l)), || format!("i={i}, j={j}, k={k}, l={l}"));
                    }
                    if j < l {
                        cols.case(*star(i, l, k, j) == scaled(star(i, j, k, l)), || format!("i={i}, j={j}, k={k}, l={l}"));
                    }
                }
            }
        }
    }
    let mut mult = Check::new("iota(A * B) = iota(A) iota(B) on pairs of basis elements");
    let mut bases: Vec<Vec<WedgeEndo>> = Vec::new();
    for p in 0..=d {
        let idx = WedgeIndex::all(d, p);
        let mut list = Vec::new();
        for r in &idx {
            for c in &idx {
                list.push(conv_basis_endo_matrix(&ConvBasisEndo::new(r.clone(), c.clone())?, d)?);
            }
        }
        bases.push(list);
    }
    for s in 0..=d {
        for t in 0..=d - s {
            for a in &bases[s] {
                for b in &bases[t] {
                    let lhs = iota(&ext.star(a, b)?);
                    let rhs = iota(a).product(&iota(b));
                    mult.case(lhs == rhs, || format!("{:?} * {:?}", a.records(), b.records()));
                }
            }
        }
    }
    let mut inverse = Check::new("iota is a bijection on each grade");
    for (p, list) in bases.iter().enumerate() {
        for a in list {
            inverse.case(iota_inverse(&iota(a), d, p)? == *a, || format!("p={p}"));
        }
    }
    Ok(vec![same_row.finish(), same_col.finish(), rows.finish(), cols.finish(), mult.finish(), inverse.finish()])
}

/// Renders reports as text lines, one per identity.
pub fn render_text(reports: &[SuiteReport]) -> String {
    let mut out = String::new();
    for r in reports {
        if let Some(why) = &r.skipped {
            out.push_str(&format!("SKIP {} (N={}): {why}\n", r.suite, r.n));
            continue;
        }
        for i in &r.results {
            let status = if i.passed { "PASS" } else { "FAIL" };
            let plural = if i.cases == 1 { "case" } else { "cases" };
            out.push_str(&format!("{status} {} (N={}): {} [{} {plural}]", r.suite, r.n, i.identity, i.cases));
            if let Some(c) = &i.counterexample {
                out.push_str(&format!(" counterexample: {c}"));
            }
            out.push('\n');
            if let Some(note) = &i.note {
                out.push_str(&format!("     note: {note}\n"));
            }
        }
    }
    out
}
