//! Design verification (per family and per arbitrary index set), maximal
//! class detection, and numerical synthesis by projected gradient descent.

use num_complex::Complex;
use rand::distributions::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::config::{pow_u32, Configuration, Field};
use crate::error::{Error, Result};
use crate::indices::{ComplexIndexSet, IndexSet, PqIndex, RealIndexSet};
use crate::poly::{BivariatePoly, RealPolynomial};
use crate::potentials::{
    evaluate, evaluate_weighted_monomial, moment_complex, moment_real, single_index_complex,
    single_index_real, Potential, WeightedForm,
};
use crate::scalar::{KahanSum, Scalar};


/// How weights enter a verification or synthesis run.
#[derive(Clone, Debug, PartialEq)]
pub enum WeightsMode<T> {
    /// Uniform `1/n`; vectors must be unit norm.
    Uniform,
    /// Explicit weights (normalized); vectors must be unit norm.
    Explicit(Vec<T>),
    /// m-weights inferred from the vector norms; unnormalized vectors allowed.
    MWeights(u32),
}

impl<T: Scalar> WeightsMode<T> {
    pub fn label(&self) -> String {
        match self {
            WeightsMode::Uniform => "uniform".into(),
            WeightsMode::Explicit(_) => "explicit".into(),
            WeightsMode::MWeights(m) => format!("m-weights({m})"),
        }
    }
}

/// One verified quantity: a single-index potential residual or a moment
/// equality.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TestIndex {
    Harm(u32),
    H(u32, u32),
    Moment(u32),
    /// The norm-weighted second moment condition of the full-design check.
    MomentSecond(u32),
}

impl std::fmt::Display for TestIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TestIndex::Harm(k) => write!(f, "{k}"),
            TestIndex::H(p, q) => write!(f, "({p},{q})"),
            TestIndex::Moment(m) => write!(f, "m={m}"),
            TestIndex::MomentSecond(m) => write!(f, "m={m} (norm-weighted)"),
        }
    }
}

/// Per-index residuals of a verification run.
#[derive(Clone, Debug)]
pub struct VerificationReport<T> {
    pub entries: Vec<(TestIndex, T)>,
    pub pass: bool,
    pub tol: T,
    pub weights: String,
}

impl<T: Scalar> VerificationReport<T> {
    fn from_entries(entries: Vec<(TestIndex, T)>, tol: T, weights: String) -> Self {
        let pass = entries.iter().all(|(_, r)| *r <= tol);
        Self { entries, pass, tol, weights }
    }

    pub fn max_residual(&self) -> T {
        self.entries
            .iter()
            .map(|(_, r)| *r)
            .fold(T::neg_infinity(), |a, b| if b > a { b } else { a })
    }
}

fn resolve_weights<T: Scalar>(
    config: &Configuration<T>,
    mode: &WeightsMode<T>,
) -> Result<(Configuration<T>, Vec<T>)> {
    match mode {
        WeightsMode::Uniform => {
            config.require_unit_norm(T::epsilon().sqrt())?;
            let n = config.len();
            Ok((config.clone(), vec![T::one() / T::of_usize(n); n]))
        }
        WeightsMode::Explicit(w) => {
            config.require_unit_norm(T::epsilon().sqrt())?;
            let total: T = w.iter().copied().sum();
            if total <= T::zero() {
                return Err(Error::Invalid("weights must have a positive sum".into()));
            }
            Ok((config.clone(), w.iter().map(|&x| x / total).collect()))
        }
        WeightsMode::MWeights(m) => {
            let w = config.m_weights(*m)?;
            Ok((config.normalized()?, w))
        }
    }
}

/// Residual of the single-index canonical potential `Q_k` / `Q_pq` under the
/// given weights.
fn single_index_residual<T: Scalar>(
    config: &Configuration<T>,
    weights: &[T],
    index: TestIndex,
) -> Result<T> {
    let d = config.dimension();
    let pot: Potential<T> = match index {
        TestIndex::Harm(k) => single_index_real(d, k)?,
        TestIndex::H(p, q) => single_index_complex(d, p, q)?,
        _ => return Err(Error::Invalid("moment indices have no single-index potential".into())),
    };
    Ok(evaluate(&pot, &config.gramian(), weights)?.residual)
}

/// Verifies a configuration against every index in `indices`: each
/// single-index canonical-potential residual must be at most `tol`.
pub fn verify<T: Scalar>(
    config: &Configuration<T>,
    weights_mode: &WeightsMode<T>,
    indices: &IndexSet,
    tol: T,
) -> Result<VerificationReport<T>> {
    let (cfg, weights) = resolve_weights(config, weights_mode)?;
    let mut entries = Vec::new();
    match indices {
        IndexSet::Real(set) => {
            for k in set.members() {
                let r = single_index_residual(&cfg, &weights, TestIndex::Harm(k))?;
                entries.push((TestIndex::Harm(k), r));
            }
        }
        IndexSet::Complex(set) => {
            for idx in set.members() {
                let r = single_index_residual(&cfg, &weights, TestIndex::H(idx.p, idx.q))?;
                entries.push((TestIndex::H(idx.p, idx.q), r));
            }
        }
    }
    Ok(VerificationReport::from_entries(entries, tol, weights_mode.label()))
}

/// Spherical `t`-design test through the two moment equalities at
/// `m in {t-1, t}`. Real configurations use plain power sums against
/// `b_m(R^d)`; complex ones use `Re(z)^m` against `b_m(R^{2d})`.
pub fn verify_t_design<T: Scalar>(
    config: &Configuration<T>,
    weights_mode: &WeightsMode<T>,
    t: u32,
    tol: T,
) -> Result<VerificationReport<T>> {
    let (cfg, weights) = resolve_weights(config, weights_mode)?;
    let gram = cfg.gramian();
    let n = gram.n();
    let d = cfg.dimension();
    let mut entries = Vec::new();
    for m in [t.saturating_sub(1), t] {
        let target = match cfg.field() {
            Field::Real => moment_real::<T>(d, m)?,
            Field::Complex => moment_real::<T>(2 * d, m)?,
        };
        let mut acc = KahanSum::new();
        for j in 0..n {
            for k in 0..n {
                let z = gram.get(j, k);
                let term = match cfg.field() {
                    Field::Real => z.powu(m).re,
                    Field::Complex => pow_u32(z.re, m),
                };
                acc.add(weights[j] * weights[k] * term);
            }
        }
        entries.push((TestIndex::Moment(m), acc.value() - target));
    }
    Ok(VerificationReport::from_entries(entries, tol, weights_mode.label()))
}

/// Weighted half-design test with implicit m-weights: equality in the
/// homogeneous inequality, optionally together with the norm-weighted
/// `(m-1)`-condition that upgrades it to a full weighted `m`-design.
///
/// With `scale_aware` the tolerance is multiplied by `(sum |v|^m)^2`, making
/// the verdict invariant under global scaling.
pub fn verify_half_design_m_weights<T: Scalar>(
    config: &Configuration<T>,
    m: u32,
    also_t_design: bool,
    tol: T,
    scale_aware: bool,
) -> Result<VerificationReport<T>> {
    let norms = config.norms();
    let scale: T = norms.iter().map(|&x| pow_u32(x, m)).sum();
    let tol = if scale_aware { tol * scale * scale } else { tol };
    let mut entries = Vec::new();
    let half = evaluate_weighted_monomial(config, WeightedForm::HalfDesign { m })?;
    entries.push((TestIndex::Moment(m), half.residual));
    if also_t_design {
        let second = evaluate_weighted_monomial(config, WeightedForm::TDesignSecond { m })?;
        entries.push((TestIndex::MomentSecond(m - 1), second.residual));
    }
    Ok(VerificationReport::from_entries(entries, tol, format!("m-weights({m})")))
}

/// The maximal set of indices (up to `degree_cap`) whose single-index
/// residual is at most `tol`; the complex result is reported in `tau*` form.
pub fn max_class<T: Scalar>(
    config: &Configuration<T>,
    weights_mode: &WeightsMode<T>,
    degree_cap: u32,
    tol: T,
) -> Result<IndexSet> {
    let (cfg, weights) = resolve_weights(config, weights_mode)?;
    match cfg.field() {
        Field::Real => {
            let mut out = RealIndexSet::new([0]);
            for k in 1..=degree_cap {
                let r = single_index_residual(&cfg, &weights, TestIndex::Harm(k))?;
                if r <= tol {
                    out.insert(k);
                }
            }
            Ok(IndexSet::Real(out))
        }
        Field::Complex => {
            let mut out = ComplexIndexSet::new([(0, 0)]);
            for total in 1..=degree_cap {
                for p in 0..=total {
                    let q = total - p;
                    if p < q {
                        continue; // conjugate pair shares the residual
                    }
                    let r = single_index_residual(&cfg, &weights, TestIndex::H(p, q))?;
                    if r <= tol {
                        out.insert(PqIndex::new(p, q));
                        out.insert(PqIndex::new(q, p));
                    }
                }
            }
            Ok(IndexSet::Complex(out.tau_star()))
        }
    }
}

// ---------------------------------------------------------------------------
// synthesis
// ---------------------------------------------------------------------------

/// Options for [`synthesize`].
#[derive(Clone, Debug)]
pub struct SynthesisOptions<T> {
    pub max_iters: usize,
    pub restarts: usize,
    pub tol: T,
    /// Worker threads for the restarts (the result is independent of this).
    pub threads: usize,
}

impl<T: Scalar> Default for SynthesisOptions<T> {
    fn default() -> Self {
        Self { max_iters: 5000, restarts: 8, tol: T::of(1e-9), threads: 1 }
    }
}

/// Outcome of a synthesis run.
#[derive(Clone, Debug)]
pub struct SynthesisResult<T> {
    pub configuration: Configuration<T>,
    pub residual: T,
    pub iterations: usize,
    pub restart: usize,
    pub restarts_used: usize,
    pub seed: u64,
    pub converged: bool,
}

enum Objective<T> {
    /// Canonical potential under uniform weights on the product of spheres.
    CanonicalReal { deriv: RealPolynomial<T>, poly: RealPolynomial<T>, d: usize, n: usize },
    CanonicalComplex {
        poly: BivariatePoly<T>,
        fz: BivariatePoly<T>,
        fzb: BivariatePoly<T>,
        d: usize,
        n: usize,
    },
    /// `sum <v_j,v_k>^m - b_m (sum |v|^m)^2` over unnormalized real vectors.
    WeightedReal { m: u32, bm: T, d: usize, n: usize },
    /// `sum Re(z^p conj(z)^q) - b_pq (sum |v|^{p+q})^2`, complex vectors.
    WeightedComplex { p: u32, q: u32, bpq: T, d: usize, n: usize },
}

impl<T: Scalar> Objective<T> {
    fn coords(&self) -> usize {
        match self {
            Objective::CanonicalReal { d, n, .. } | Objective::WeightedReal { m: _, bm: _, d, n } => d * n,
            Objective::CanonicalComplex { d, n, .. }
            | Objective::WeightedComplex { d, n, .. } => 2 * d * n,
        }
    }

    fn n(&self) -> usize {
        match self {
            Objective::CanonicalReal { n, .. }
            | Objective::CanonicalComplex { n, .. }
            | Objective::WeightedReal { n, .. }
            | Objective::WeightedComplex { n, .. } => *n,
        }
    }

    fn block(&self) -> usize {
        self.coords() / self.n()
    }

    fn on_sphere(&self) -> bool {
        matches!(self, Objective::CanonicalReal { .. } | Objective::CanonicalComplex { .. })
    }

    fn vector(&self, x: &[T], j: usize) -> Vec<Complex<T>> {
        let b = self.block();
        match self {
            Objective::CanonicalReal { .. } | Objective::WeightedReal { .. } => {
                x[j * b..(j + 1) * b].iter().map(|&v| Complex::new(v, T::zero())).collect()
            }
            _ => x[j * b..(j + 1) * b]
                .chunks(2)
                .map(|c| Complex::new(c[0], c[1]))
                .collect(),
        }
    }

    fn inner(&self, x: &[T], j: usize, k: usize) -> Complex<T> {
        let b = self.block();
        match self {
            Objective::CanonicalReal { .. } | Objective::WeightedReal { .. } => {
                let mut acc = T::zero();
                for i in 0..b {
                    acc = acc + x[j * b + i] * x[k * b + i];
                }
                Complex::new(acc, T::zero())
            }
            _ => {
                let mut acc = Complex::new(T::zero(), T::zero());
                for i in (0..b).step_by(2) {
                    let a = Complex::new(x[j * b + i], x[j * b + i + 1]);
                    let c = Complex::new(x[k * b + i], x[k * b + i + 1]);
                    acc = acc + a * c.conj();
                }
                acc
            }
        }
    }

    fn value(&self, x: &[T]) -> T {
        let n = self.n();
        let mut acc = KahanSum::new();
        match self {
            Objective::CanonicalReal { poly, .. } => {
                for j in 0..n {
                    for k in 0..n {
                        acc.add(poly.eval(self.inner(x, j, k).re));
                    }
                }
                acc.value() / (T::of_usize(n) * T::of_usize(n))
            }
            Objective::CanonicalComplex { poly, .. } => {
                for j in 0..n {
                    for k in 0..n {
                        acc.add(poly.eval(self.inner(x, j, k)).re);
                    }
                }
                acc.value() / (T::of_usize(n) * T::of_usize(n))
            }
            Objective::WeightedReal { m, bm, .. } => {
                for j in 0..n {
                    for k in 0..n {
                        acc.add(pow_u32(self.inner(x, j, k).re, *m));
                    }
                }
                let norm_sum: T =
                    (0..n).map(|j| pow_u32(self.inner(x, j, j).re.sqrt(), *m)).sum();
                acc.value() - *bm * norm_sum * norm_sum
            }
            Objective::WeightedComplex { p, q, bpq, .. } => {
                for j in 0..n {
                    for k in 0..n {
                        let z = self.inner(x, j, k);
                        acc.add((z.powu(*p) * z.conj().powu(*q)).re);
                    }
                }
                let s = *p + *q;
                let norm_sum: T =
                    (0..n).map(|j| pow_u32(self.inner(x, j, j).re.sqrt(), s)).sum();
                acc.value() - *bpq * norm_sum * norm_sum
            }
        }
    }

    fn gradient(&self, x: &[T], out: &mut [T]) {
        let n = self.n();
        let b = self.block();
        out.iter_mut().for_each(|v| *v = T::zero());
        match self {
            Objective::CanonicalReal { deriv, d, .. } => {
                let w2 = T::one() / (T::of_usize(n) * T::of_usize(n));
                for j in 0..n {
                    for k in 0..n {
                        let fp = deriv.eval(self.inner(x, j, k).re);
                        let c = T::of(2.0) * w2 * fp;
                        for i in 0..*d {
                            out[j * b + i] = out[j * b + i] + c * x[k * b + i];
                        }
                    }
                }
            }
            Objective::CanonicalComplex { fz, fzb, d, .. } => {
                let w2 = T::one() / (T::of_usize(n) * T::of_usize(n));
                for j in 0..n {
                    let vj_block = j * b;
                    for k in 0..n {
                        let zjk = self.inner(x, j, k);
                        let zkj = zjk.conj();
                        let coeff = (fz.eval(zkj) + fzb.eval(zjk)).scale(w2);
                        for i in 0..*d {
                            let vk = Complex::new(x[k * b + 2 * i], x[k * b + 2 * i + 1]);
                            let w = coeff * vk;
                            out[vj_block + 2 * i] = out[vj_block + 2 * i] + T::of(2.0) * w.re;
                            out[vj_block + 2 * i + 1] =
                                out[vj_block + 2 * i + 1] + T::of(2.0) * w.im;
                        }
                    }
                }
            }
            Objective::WeightedReal { m, bm, d, .. } => {
                let mf = T::of_u32(*m);
                for j in 0..n {
                    for k in 0..n {
                        let z = self.inner(x, j, k).re;
                        let c = T::of(2.0) * mf * pow_u32(z, *m - 1);
                        for i in 0..*d {
                            out[j * b + i] = out[j * b + i] + c * x[k * b + i];
                        }
                    }
                }
                let norms: Vec<T> = (0..n).map(|j| self.inner(x, j, j).re.sqrt()).collect();
                let norm_sum: T = norms.iter().map(|&v| pow_u32(v, *m)).sum();
                for j in 0..n {
                    if norms[j].is_zero() {
                        continue;
                    }
                    let c = -T::of(2.0) * *bm * norm_sum * mf * pow_u32(norms[j], *m) / (norms[j] * norms[j]);
                    for i in 0..*d {
                        out[j * b + i] = out[j * b + i] + c * x[j * b + i];
                    }
                }
            }
            Objective::WeightedComplex { p, q, bpq, d, .. } => {
                let s = *p + *q;
                for j in 0..n {
                    for k in 0..n {
                        let zjk = self.inner(x, j, k);
                        let zkj = zjk.conj();
                        // d/dz (z^p zb^q) and d/dzb at the two mirror entries
                        let fz = if *p == 0 {
                            Complex::new(T::zero(), T::zero())
                        } else {
                            (zkj.powu(*p - 1) * zkj.conj().powu(*q)).scale(T::of_u32(*p))
                        };
                        let fzb = if *q == 0 {
                            Complex::new(T::zero(), T::zero())
                        } else {
                            (zjk.powu(*p) * zjk.conj().powu(*q - 1)).scale(T::of_u32(*q))
                        };
                        let coeff = fz + fzb;
                        for i in 0..*d {
                            let vk = Complex::new(x[k * b + 2 * i], x[k * b + 2 * i + 1]);
                            let w = coeff * vk;
                            out[j * b + 2 * i] = out[j * b + 2 * i] + T::of(2.0) * w.re;
                            out[j * b + 2 * i + 1] = out[j * b + 2 * i + 1] + T::of(2.0) * w.im;
                        }
                    }
                }
                let norms: Vec<T> = (0..n).map(|j| self.inner(x, j, j).re.sqrt()).collect();
                let norm_sum: T = norms.iter().map(|&v| pow_u32(v, s)).sum();
                for j in 0..n {
                    if norms[j].is_zero() {
                        continue;
                    }
                    let c = -T::of(2.0) * *bpq * norm_sum * T::of_u32(s) * pow_u32(norms[j], s)
                        / (norms[j] * norms[j]);
                    for i in 0..b {
                        out[j * b + i] = out[j * b + i] + c * x[j * b + i];
                    }
                }
            }
        }
    }

    /// Retraction: per-vector renormalization on the sphere, or global scale
    /// normalization `sum |v|^m = 1` for the weighted objectives.
    fn retract(&self, x: &mut [T]) {
        let n = self.n();
        let b = self.block();
        if self.on_sphere() {
            for j in 0..n {
                let norm = x[j * b..(j + 1) * b]
                    .iter()
                    .map(|&v| v * v)
                    .sum::<T>()
                    .sqrt();
                if norm > T::zero() {
                    x[j * b..(j + 1) * b].iter_mut().for_each(|v| *v = *v / norm);
                }
            }
        } else {
            let m = match self {
                Objective::WeightedReal { m, .. } => *m,
                Objective::WeightedComplex { p, q, .. } => *p + *q,
                _ => unreachable!(),
            };
            let norm_sum: T = (0..n)
                .map(|j| pow_u32(self.inner(x, j, j).re.sqrt(), m))
                .sum();
            if norm_sum > T::zero() {
                let scale = norm_sum.powf(-T::one() / T::of_u32(m));
                x.iter_mut().for_each(|v| *v = *v * scale);
            }
        }
    }

    /// Projects the gradient on the tangent space of the constraint set.
    fn project_gradient(&self, x: &[T], g: &mut [T]) {
        if !self.on_sphere() {
            return;
        }
        let n = self.n();
        let b = self.block();
        for j in 0..n {
            let dot: T = (0..b).map(|i| g[j * b + i] * x[j * b + i]).sum();
            let nrm: T = (0..b).map(|i| x[j * b + i] * x[j * b + i]).sum();
            let c = dot / nrm;
            for i in 0..b {
                g[j * b + i] = g[j * b + i] - c * x[j * b + i];
            }
        }
    }

    fn to_configuration(&self, x: &[T]) -> Result<Configuration<T>> {
        let n = self.n();
        let field = match self {
            Objective::CanonicalReal { .. } | Objective::WeightedReal { .. } => Field::Real,
            _ => Field::Complex,
        };
        let d = match self {
            Objective::CanonicalReal { d, .. }
            | Objective::CanonicalComplex { d, .. }
            | Objective::WeightedReal { d, .. }
            | Objective::WeightedComplex { d, .. } => *d,
        };
        let vectors = (0..n).map(|j| self.vector(x, j)).collect();
        Configuration::new(field, d, vectors, None)
    }
}

fn build_objective<T: Scalar>(
    field: Field,
    d: usize,
    n: usize,
    indices: &IndexSet,
    weights_mode: &WeightsMode<T>,
) -> Result<Objective<T>> {
    match weights_mode {
        WeightsMode::Uniform => {
            let pot = Potential::canonical(d, indices)?;
            match (field, pot.monomial()) {
                (Field::Real, crate::poly::MonomialPoly::Real(p)) => Ok(Objective::CanonicalReal {
                    deriv: p.derivative(),
                    poly: p.clone(),
                    d,
                    n,
                }),
                (Field::Complex, crate::poly::MonomialPoly::Complex(p)) => {
                    Ok(Objective::CanonicalComplex {
                        fz: p.derivative_z(),
                        fzb: p.derivative_zbar(),
                        poly: p.clone(),
                        d,
                        n,
                    })
                }
                _ => Err(Error::Invalid("field does not match the index set".into())),
            }
        }
        WeightsMode::MWeights(_) => match indices {
            IndexSet::Real(set) => {
                let m = set.max().ok_or(Error::EmptyIndexSet)?;
                let expect: Vec<u32> = (0..=m).filter(|k| (m - k) % 2 == 0 && *k > 0).collect();
                let got: Vec<u32> = set.members().filter(|&k| k > 0).collect();
                if got != expect {
                    return Err(Error::Invalid(
                        "m-weight synthesis supports half-design index sets {m, m-2, ...}".into(),
                    ));
                }
                Ok(Objective::WeightedReal { m, bm: moment_real::<T>(d, m)?, d, n })
            }
            IndexSet::Complex(set) => {
                let top = set
                    .members()
                    .max_by_key(|i| i.total())
                    .ok_or(Error::EmptyIndexSet)?;
                let (p, q) = (top.p, top.q);
                let expect: Vec<PqIndex> = (0..=p.min(q))
                    .map(|j| PqIndex::new(p - j, q - j))
                    .filter(|i| i.total() > 0)
                    .collect();
                let mut got: Vec<PqIndex> = set.members().filter(|i| i.total() > 0).collect();
                got.sort();
                let mut expect = expect;
                expect.sort();
                if got != expect {
                    return Err(Error::Invalid(
                        "m-weight synthesis supports Hom(p,q) index sets {(p-j,q-j)}".into(),
                    ));
                }
                Ok(Objective::WeightedComplex { p, q, bpq: moment_complex::<T>(d, p, q)?, d, n })
            }
        },
        WeightsMode::Explicit(_) => Err(Error::Invalid(
            "synthesis supports uniform weights or m-weights".into(),
        )),
    }
}

struct RestartOutcome<T> {
    x: Vec<T>,
    residual: T,
    iterations: usize,
}

fn run_restart<T: Scalar>(
    obj: &Objective<T>,
    seed: u64,
    max_iters: usize,
    tol: T,
) -> RestartOutcome<T>
where
    StandardNormal: Distribution<T>,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = StandardNormal;
    let mut x: Vec<T> = (0..obj.coords()).map(|_| normal.sample(&mut rng)).collect();
    obj.retract(&mut x);

    let mut f = obj.value(&x);
    let mut g = vec![T::zero(); obj.coords()];
    let mut step = T::of(0.1);
    let (step_min, step_max) = (T::of(1e-12), T::of(1e4));
    let armijo = T::of(1e-4);
    let mut prev: Option<(Vec<T>, Vec<T>)> = None; // (x, raw gradient)
    let mut iterations = 0usize;

    for it in 0..max_iters {
        iterations = it + 1;
        obj.gradient(&x, &mut g);
        // Barzilai-Borwein step suggestion from the previous raw gradient
        if let Some((px, pg)) = &prev {
            let mut ss = T::zero();
            let mut sy = T::zero();
            for i in 0..x.len() {
                let s = x[i] - px[i];
                let y = g[i] - pg[i];
                ss = ss + s * s;
                sy = sy + s * y;
            }
            if sy > T::zero() {
                step = (ss / sy).max(step_min).min(step_max);
            }
        }
        prev = Some((x.clone(), g.clone()));

        let mut gt = g.clone();
        obj.project_gradient(&x, &mut gt);
        let gnorm2: T = gt.iter().map(|&v| v * v).sum();
        if f <= tol || gnorm2 <= T::of(1e-30) {
            break;
        }

        let mut alpha = step;
        let mut accepted = false;
        for _ in 0..60 {
            let mut cand = x.clone();
            for i in 0..cand.len() {
                cand[i] = cand[i] - alpha * gt[i];
            }
            obj.retract(&mut cand);
            let fc = obj.value(&cand);
            if fc <= f - armijo * alpha * gnorm2 {
                x = cand;
                f = fc;
                accepted = true;
                break;
            }
            alpha = alpha * T::of(0.5);
        }
        if !accepted {
            break; // line search stalled at numerical floor
        }
        if f <= tol {
            break;
        }
    }
    RestartOutcome { x, residual: f, iterations }
}

/// Canonical-potential (or m-weighted monomial) minimization over `n`
/// points: projected gradient descent with a Barzilai-Borwein step and an
/// Armijo backtracking line search; best over `restarts` deterministic
/// restarts.
pub fn synthesize<T: Scalar>(
    field: Field,
    d: usize,
    n: usize,
    indices: &IndexSet,
    weights_mode: &WeightsMode<T>,
    seed: u64,
    opts: &SynthesisOptions<T>,
) -> Result<SynthesisResult<T>>
where
    StandardNormal: Distribution<T>,
{
    if n == 0 {
        return Err(Error::Invalid("synthesis needs n >= 1".into()));
    }
    let obj = build_objective(field, d, n, indices, weights_mode)?;
    let seeds: Vec<u64> = (0..opts.restarts)
        .map(|r| seed.wrapping_add((r as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)))
        .collect();

    let outcomes: Vec<RestartOutcome<T>> = if opts.threads > 1 && opts.restarts > 1 {
        let workers = opts.threads.min(opts.restarts);
        let chunk_len = opts.restarts.div_ceil(workers);
        let mut slots: Vec<Option<RestartOutcome<T>>> =
            (0..opts.restarts).map(|_| None).collect();
        std::thread::scope(|scope| {
            for (slot_chunk, seed_chunk) in slots.chunks_mut(chunk_len).zip(seeds.chunks(chunk_len))
            {
                let obj = &obj;
                scope.spawn(move || {
                    for (slot, &s) in slot_chunk.iter_mut().zip(seed_chunk) {
                        *slot = Some(run_restart(obj, s, opts.max_iters, opts.tol));
                    }
                });
            }
        });
        slots.into_iter().map(|s| s.unwrap()).collect()
    } else {
        seeds
            .iter()
            .map(|&s| run_restart(&obj, s, opts.max_iters, opts.tol))
            .collect()
    };

    // deterministic reduction: minimal residual, ties to the lowest restart
    let mut best = 0usize;
    for (r, o) in outcomes.iter().enumerate() {
        if o.residual < outcomes[best].residual {
            best = r;
        }
    }
    let chosen = &outcomes[best];
    let configuration = obj.to_configuration(&chosen.x)?;
    Ok(SynthesisResult {
        configuration,
        residual: chosen.residual,
        iterations: chosen.iterations,
        restart: best,
        restarts_used: outcomes.len(),
        seed,
        converged: chosen.residual <= opts.tol,
    })
}

/// Norm-relative disagreement between the analytic gradient and a central
/// finite difference with step `h`, at a random configuration drawn from
/// `seed`. Exposed for the gradient-correctness acceptance suite.
pub fn gradient_check<T: Scalar>(
    field: Field,
    d: usize,
    n: usize,
    indices: &IndexSet,
    weights_mode: &WeightsMode<T>,
    seed: u64,
    h: T,
) -> Result<T>
where
    StandardNormal: Distribution<T>,
{
    let obj = build_objective(field, d, n, indices, weights_mode)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = StandardNormal;
    let mut x: Vec<T> = (0..obj.coords()).map(|_| normal.sample(&mut rng)).collect();
    obj.retract(&mut x);
    let mut g = vec![T::zero(); obj.coords()];
    obj.gradient(&x, &mut g);
    let mut fd = vec![T::zero(); obj.coords()];
    for i in 0..x.len() {
        let mut xp = x.clone();
        xp[i] = xp[i] + h;
        let mut xm = x.clone();
        xm[i] = xm[i] - h;
        fd[i] = (obj.value(&xp) - obj.value(&xm)) / (T::of(2.0) * h);
    }
    let gnorm: T = g.iter().map(|&v| v * v).sum::<T>().sqrt();
    let dnorm: T = g
        .iter()
        .zip(&fd)
        .map(|(&a, &b)| (a - b) * (a - b))
        .sum::<T>()
        .sqrt();
    Ok(dnorm / gnorm.max(T::of(1e-12)))
}
