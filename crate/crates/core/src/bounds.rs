//! Upper, lower, absolute, Fisher-type and special bounds on the number of
//! points in spherical designs and codes, with tightness certificates.

use num_complex::Complex;

use crate::config::{angle_set, Configuration};
use crate::error::{Error, Result};
use crate::gegenbauer::{
    complex_q, dim_h, dim_harm, jacobi_poly, real_q, to_geg_basis_complex, ComplexExpansion,
    GegExpansion, COEFF_TOL,
};
use crate::indices::{complex_set_product, real_set_product, ComplexIndexSet, IndexSet, PqIndex, RealIndexSet};
use crate::poly::{BivariatePoly, MonomialPoly, RealPolynomial};
use crate::potentials::Potential;
use crate::roots::{complex_roots, real_roots_in_interval};
use crate::scalar::Scalar;

/// Which bound produced a report.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundKind {
    UpperAcode,
    LowerLp,
    AbsoluteLower,
    FisherUpper,
    SAngular,
    Special,
    RealPart,
}

/// Bound values are exact integers when they come from dimension counts.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BoundValue<T> {
    Exact(u64),
    Approx(T),
}

impl<T: Scalar> BoundValue<T> {
    pub fn as_scalar(&self) -> T {
        match self {
            BoundValue::Exact(n) => T::of_u64(*n),
            BoundValue::Approx(v) => *v,
        }
    }
}

/// The polynomial whose roots constrain the angles of a tight configuration:
/// either in the angle `z` itself or in `x = |z|^2` (projective bounds).
#[derive(Clone, Debug)]
pub enum TightnessPoly<T> {
    Angle(MonomialPoly<T>),
    SquaredModulus(RealPolynomial<T>),
}

impl<T: Scalar> TightnessPoly<T> {
    /// Residual of an angle against the certificate, normalized by the
    /// certificate's value at 1.
    pub fn residual(&self, alpha: Complex<T>) -> T {
        match self {
            TightnessPoly::Angle(p) => {
                let scale = p.eval_at_one().norm().max(T::one());
                p.eval(alpha).norm() / scale
            }
            TightnessPoly::SquaredModulus(p) => {
                let scale = p.eval(T::one()).abs().max(T::one());
                p.eval(alpha.norm_sqr()).abs() / scale
            }
        }
    }
}

/// Outcome of a bound computation.
#[derive(Clone, Debug)]
pub struct BoundReport<T> {
    pub kind: BoundKind,
    pub value: BoundValue<T>,
    pub valid: bool,
    pub violated: Option<String>,
    /// Domain condition the bound was checked against, echoed for reports.
    pub domain: Option<String>,
    pub tightness_poly: Option<TightnessPoly<T>>,
    /// Solved roots of the tightness polynomial (angle values; for
    /// projective bounds these are the `x = |z|^2` values).
    pub tight_roots: Vec<Complex<T>>,
    /// Index set a tight configuration must be a design for.
    pub design_indices: Option<IndexSet>,
}

impl<T: Scalar> BoundReport<T> {
    fn new(kind: BoundKind, value: BoundValue<T>) -> Self {
        Self {
            kind,
            value,
            valid: true,
            violated: None,
            domain: None,
            tightness_poly: None,
            tight_roots: Vec::new(),
            design_indices: None,
        }
    }
}

/// Roots of a certificate polynomial when it has exploitable structure:
/// univariate in the angle (real field or holomorphic) or projective
/// (`z^eps g(|z|^2)`).
fn structured_roots<T: Scalar>(poly: &TightnessPoly<T>) -> Result<Vec<Complex<T>>> {
    match poly {
        TightnessPoly::SquaredModulus(p) => Ok(real_roots_in_interval(p, T::zero(), T::one(), T::of(1e-10))?
            .into_iter()
            .map(|x| Complex::new(x, T::zero()))
            .collect()),
        TightnessPoly::Angle(MonomialPoly::Real(p)) => {
            Ok(real_roots_in_interval(p, -T::one(), T::one(), T::of(1e-10))?
                .into_iter()
                .map(|x| Complex::new(x, T::zero()))
                .collect())
        }
        TightnessPoly::Angle(MonomialPoly::Complex(p)) => {
            let tol = T::of(COEFF_TOL);
            if let Some(coeffs) = p.holomorphic_form(tol) {
                let mut roots = complex_roots(&coeffs)?;
                roots.retain(|r| r.norm() <= T::one() + T::of(1e-9));
                return Ok(roots);
            }
            if let Some((eps, g)) = p.projective_form(tol) {
                let mut out: Vec<Complex<T>> = real_roots_in_interval(&g, T::zero(), T::one(), T::of(1e-10))?
                    .into_iter()
                    .map(|x| Complex::new(x, T::zero()))
                    .collect();
                if eps > 0 && !out.iter().any(|r| r.norm() <= T::of(1e-12)) {
                    out.insert(0, Complex::new(T::zero(), T::zero()));
                }
                return Ok(out);
            }
            Ok(Vec::new())
        }
    }
}

/// Upper bound `n <= F(1)/f_0` for `A`-codes: `F` must be a potential with a
/// positive constant and `Re F(alpha) <= 0` on the angle set.
pub fn upper_bound_acode<T: Scalar>(
    potential: &Potential<T>,
    angles: &[Complex<T>],
) -> Result<BoundReport<T>> {
    let tol = T::of(COEFF_TOL);
    if !potential.expansion().is_potential(tol) {
        return Err(Error::InvalidPotential(
            "expansion".into(),
            "a negative Gegenbauer coefficient".into(),
        ));
    }
    let f0 = potential.floor();
    if f0 <= T::zero() {
        return Err(Error::InvalidPotential("constant".into(), format!("f_0 = {f0} must be positive")));
    }
    let poly = potential.monomial();
    for a in angles {
        let v = poly.eval(*a).re + potential.b0();
        if v > tol {
            return Err(Error::PreconditionFailed(format!(
                "Re F({a}) = {v} exceeds 0 on the angle set"
            )));
        }
    }
    let f1 = poly.eval_at_one().re + potential.b0();
    let mut report = BoundReport::new(BoundKind::UpperAcode, BoundValue::Approx(f1 / f0));
    let tight = TightnessPoly::Angle(shifted_monomial(poly, potential.b0()));
    report.tight_roots = structured_roots(&tight).unwrap_or_default();
    report.tightness_poly = Some(tight);
    report.design_indices = Some(nonconstant_support(potential.expansion(), tol));
    report.domain = Some("Re F <= 0 on the angle set, f_0 > 0".into());
    Ok(report)
}

fn shifted_monomial<T: Scalar>(poly: &MonomialPoly<T>, b0: T) -> MonomialPoly<T> {
    if b0.is_zero() {
        return poly.clone();
    }
    match poly {
        MonomialPoly::Real(p) => MonomialPoly::Real(p.add(&RealPolynomial::constant(b0))),
        MonomialPoly::Complex(p) => {
            MonomialPoly::Complex(p.add(&BivariatePoly::constant(Complex::new(b0, T::zero()))))
        }
    }
}

fn nonconstant_support<T: Scalar>(e: &GegExpansion<T>, tol: T) -> IndexSet {
    match e.trimmed(tol).support() {
        IndexSet::Real(s) => IndexSet::Real(RealIndexSet::new(s.members().filter(|&k| k > 0))),
        IndexSet::Complex(s) => IndexSet::Complex(ComplexIndexSet::new(
            s.members().filter(|i| i.total() > 0).map(|i| (i.p, i.q)),
        )),
    }
}

/// Lower bound `n >= F(1)/f_0` for `P`-designs from a signed expansion whose
/// positive support is exactly the design's indices plus the constant, and
/// which is (real-part) nonnegative on the domain. Nonnegativity is checked
/// on a dense grid: 2001 points on `[-1,1]`, or a 201 x 256 polar grid on
/// the closed disk.
pub fn lower_bound<T: Scalar>(
    expansion: &GegExpansion<T>,
    design: &IndexSet,
) -> Result<BoundReport<T>> {
    let tol = T::of(COEFF_TOL);
    let f0 = expansion.constant_term();
    if f0 <= T::zero() {
        return Err(Error::PreconditionFailed(format!("constant term {f0} must be positive")));
    }
    let poly = expansion.to_monomial()?;
    // positive support must equal L u {0}
    match (expansion, design) {
        (GegExpansion::Real(e), IndexSet::Real(l)) => {
            let mut pos = RealIndexSet::new(e.iter().filter(|&(_, c)| c > tol).map(|(k, _)| k));
            pos.insert(0);
            let mut want = l.clone();
            want.insert(0);
            if pos != want {
                return Err(Error::PreconditionFailed(format!(
                    "positive support {pos} differs from L u {{0}} = {want}"
                )));
            }
        }
        (GegExpansion::Complex(e), IndexSet::Complex(tau)) => {
            let mut pos = ComplexIndexSet::new(
                e.iter().filter(|&(_, c)| c.re > tol).map(|(i, _)| (i.p, i.q)),
            );
            pos.insert(PqIndex::new(0, 0));
            let mut want = tau.clone();
            want.insert(PqIndex::new(0, 0));
            if pos != want {
                return Err(Error::PreconditionFailed(format!(
                    "positive support {pos} differs from tau u {{0}} = {want}"
                )));
            }
        }
        _ => return Err(Error::Invalid("expansion field does not match the index set".into())),
    }
    // nonnegativity on the domain
    match &poly {
        MonomialPoly::Real(p) => {
            let m = 2001usize;
            for i in 0..m {
                let x = -T::one() + T::of(2.0) * T::of_usize(i) / T::of_usize(m - 1);
                let v = p.eval(x);
                if v < -tol {
                    return Err(Error::PreconditionFailed(format!("F({x}) = {v} < 0")));
                }
            }
        }
        MonomialPoly::Complex(p) => {
            let (nr, na) = (201usize, 256usize);
            for i in 0..nr {
                let r = T::of_usize(i) / T::of_usize(nr - 1);
                for a in 0..na {
                    let theta = T::of(2.0) * T::PI() * T::of_usize(a) / T::of_usize(na);
                    let z = Complex::from_polar(r, theta);
                    let v = p.eval(z).re;
                    if v < -tol {
                        return Err(Error::PreconditionFailed(format!("Re F({z}) = {v} < 0")));
                    }
                }
            }
        }
    }
    let f1 = poly.eval_at_one().re;
    let mut report = BoundReport::new(BoundKind::LowerLp, BoundValue::Approx(f1 / f0));
    // equality forces the design to integrate the negative support too
    let negative = match expansion {
        GegExpansion::Real(e) => IndexSet::Real(RealIndexSet::new(
            e.iter().filter(|&(_, c)| c < -tol).map(|(k, _)| k),
        )),
        GegExpansion::Complex(e) => IndexSet::Complex(ComplexIndexSet::new(
            e.iter().filter(|&(_, c)| c.re < -tol).map(|(i, _)| (i.p, i.q)),
        )),
    };
    let tight = TightnessPoly::Angle(poly);
    report.tight_roots = structured_roots(&tight).unwrap_or_default();
    report.tightness_poly = Some(tight);
    report.design_indices = Some(negative);
    report.domain = Some("F >= 0 on the angle domain".into());
    Ok(report)
}

/// Variant selector for [`absolute_lower_real`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AbsoluteVariant {
    /// `F = (sum_E Q_k)^2`: designs for `E . E`, bound `sum dim Harm_k`.
    Square,
    /// `F = (Q_1/d + 1)(sum_E Q_k)^2` with `E` of one parity: designs for
    /// `{0,1}.(E.E)`, bound `2 sum dim Harm_k`.
    OddEven,
}

/// Absolute (dimension-count) lower bounds for real designs.
pub fn absolute_lower_real<T: Scalar>(
    d: usize,
    e: &RealIndexSet,
    variant: AbsoluteVariant,
) -> Result<BoundReport<T>> {
    if e.is_empty() {
        return Err(Error::EmptyIndexSet);
    }
    let mut dim_sum: u64 = 0;
    for k in e.members() {
        dim_sum = dim_sum
            .checked_add(dim_harm(d, k)?)
            .ok_or(Error::Overflow("absolute_lower_real"))?;
    }
    let q_sum = {
        let mut acc = RealPolynomial::zero();
        for k in e.members() {
            acc = acc.add(&real_q::<T>(d, k)?);
        }
        acc
    };
    let ee = real_set_product(e, e);
    let (value, indices, tight) = match variant {
        AbsoluteVariant::Square => (
            dim_sum,
            IndexSet::Real(ee),
            TightnessPoly::Angle(MonomialPoly::Real(q_sum)),
        ),
        AbsoluteVariant::OddEven => {
            let parities: Vec<u32> = e.members().map(|k| k % 2).collect();
            if parities.windows(2).any(|w| w[0] != w[1]) {
                return Err(Error::PreconditionFailed(
                    "odd/even variant needs indices of a single parity".into(),
                ));
            }
            let l = real_set_product(&RealIndexSet::new([0, 1]), &ee);
            // angles of a tight design are -1 or roots of the Q sum
            let poly = q_sum.mul(&RealPolynomial::new(vec![T::one(), T::one()]));
            (
                dim_sum.checked_mul(2).ok_or(Error::Overflow("absolute_lower_real"))?,
                IndexSet::Real(l),
                TightnessPoly::Angle(MonomialPoly::Real(poly)),
            )
        }
    };
    let mut report = BoundReport::new(BoundKind::AbsoluteLower, BoundValue::Exact(value));
    report.tight_roots = structured_roots(&tight).unwrap_or_default();
    report.tightness_poly = Some(tight);
    report.design_indices = Some(indices);
    Ok(report)
}

/// Absolute lower bound `n >= sum_E dim H(p,q)` for complex designs of class
/// containing `E . E^rev`; tight angles are roots of `Q_E`.
pub fn absolute_lower_complex<T: Scalar>(d: usize, e: &ComplexIndexSet) -> Result<BoundReport<T>> {
    if e.is_empty() {
        return Err(Error::EmptyIndexSet);
    }
    let mut dim_sum: u64 = 0;
    for idx in e.members() {
        dim_sum = dim_sum
            .checked_add(dim_h(d, idx.p, idx.q)?)
            .ok_or(Error::Overflow("absolute_lower_complex"))?;
    }
    let mut q_e = BivariatePoly::zero();
    for idx in e.members() {
        q_e = q_e.add(&complex_q::<T>(d, idx.p, idx.q)?);
    }
    let mut report = BoundReport::new(BoundKind::AbsoluteLower, BoundValue::Exact(dim_sum));
    let tight = TightnessPoly::Angle(MonomialPoly::Complex(q_e));
    report.tight_roots = structured_roots(&tight).unwrap_or_default();
    report.tightness_poly = Some(tight);
    report.design_indices = Some(IndexSet::Complex(complex_set_product(e, &e.reverse())));
    Ok(report)
}

/// Fisher-type (rank) upper bound: for an annihilator polynomial `F` with
/// `F(1) = 1`, any code whose angles are roots of `F` has at most
/// `sum_{(p,q) in supp F} dim H(p,q)` points.
pub fn fisher_bound<T: Scalar>(expansion: &ComplexExpansion<T>) -> Result<BoundReport<T>> {
    let f1 = expansion.value_at_one()?;
    if f1.norm() <= T::of(1e-14) {
        return Err(Error::ZeroAtOne);
    }
    let normalized = expansion.scale(Complex::new(T::one(), T::zero()) / f1);
    let trim = normalized.trimmed(T::of(COEFF_TOL));
    let mut dim_sum: u64 = 0;
    for (idx, _) in trim.iter() {
        dim_sum = dim_sum
            .checked_add(dim_h(expansion.dimension(), idx.p, idx.q)?)
            .ok_or(Error::Overflow("fisher_bound"))?;
    }
    let mut report = BoundReport::new(BoundKind::FisherUpper, BoundValue::Exact(dim_sum));
    let tight = TightnessPoly::Angle(MonomialPoly::Complex(trim.to_poly()?));
    report.tight_roots = structured_roots(&tight).unwrap_or_default();
    report.tightness_poly = Some(tight);
    report.design_indices = Some(IndexSet::Complex(trim.support()));
    Ok(report)
}

/// Checks the Fisher equality certificate: at `n` equal to the bound, the
/// normalized annihilator must equal `(1/n) sum_tau Q_pq` coefficient-wise
/// (tolerance `1e-9`). Returns the certificate flag together with whether
/// `(0,0)` lies in the support (the tight code is then a `tau`-design).
pub fn fisher_equality<T: Scalar>(expansion: &ComplexExpansion<T>, n: u64) -> Result<(bool, bool)> {
    let f1 = expansion.value_at_one()?;
    if f1.norm() <= T::of(1e-14) {
        return Err(Error::ZeroAtOne);
    }
    let normalized = expansion.scale(Complex::new(T::one(), T::zero()) / f1);
    let trim = normalized.trimmed(T::of(COEFF_TOL));
    let inv_n = T::one() / T::of_u64(n);
    let tol = T::of(1e-9);
    let equal = trim
        .iter()
        .all(|(_, c)| (c - Complex::new(inv_n, T::zero())).norm() <= tol);
    let zero_in = trim.support().contains(PqIndex::new(0, 0));
    Ok((equal, zero_in))
}

/// Specification of an annihilator polynomial to build.
#[derive(Clone, Debug)]
pub enum AnnihilatorSpec<T> {
    /// `prod_j (Re z - a_j)/(1 - a_j)`.
    RealParts(Vec<T>),
    /// `prod_j (z - alpha_j)/(1 - alpha_j)`.
    Angles(Vec<Complex<T>>),
    /// `z^eps prod (|z|^2 - a)/(1 - a)` with `eps = 1` iff zero is an angle.
    Projective { nonzero_angles: Vec<T>, include_zero: bool },
}

/// Builds the annihilator in monomial form, normalized to `F(1) = 1`.
pub fn annihilator_poly<T: Scalar>(spec: &AnnihilatorSpec<T>) -> Result<BivariatePoly<T>> {
    let one = Complex::new(T::one(), T::zero());
    let mut f = BivariatePoly::constant(one);
    match spec {
        AnnihilatorSpec::RealParts(parts) => {
            for &a in parts {
                if (a - T::one()).abs() <= T::of(1e-14) {
                    return Err(Error::AngleAtOne);
                }
                let half = Complex::new(T::of(0.5) / (T::one() - a), T::zero());
                let factor = BivariatePoly::from_terms([
                    (1, 0, half),
                    (0, 1, half),
                    (0, 0, Complex::new(-a / (T::one() - a), T::zero())),
                ])?;
                f = f.mul(&factor)?;
            }
        }
        AnnihilatorSpec::Angles(alphas) => {
            for &alpha in alphas {
                if (alpha - one).norm() <= T::of(1e-14) {
                    return Err(Error::AngleAtOne);
                }
                let scale = one / (one - alpha);
                let factor = BivariatePoly::from_terms([(1, 0, scale), (0, 0, -alpha * scale)])?;
                f = f.mul(&factor)?;
            }
        }
        AnnihilatorSpec::Projective { nonzero_angles, include_zero } => {
            for &a in nonzero_angles {
                if (a - T::one()).abs() <= T::of(1e-14) {
                    return Err(Error::AngleAtOne);
                }
                let scale = T::one() / (T::one() - a);
                let factor = BivariatePoly::from_terms([
                    (1, 1, Complex::new(scale, T::zero())),
                    (0, 0, Complex::new(-a * scale, T::zero())),
                ])?;
                f = f.mul(&factor)?;
            }
            if *include_zero {
                f = f.mul(&BivariatePoly::monomial(1, 0)?)?;
            }
        }
    }
    Ok(f)
}

/// Builds an annihilator and expands it in the `Q_pq^(d)` basis.
///
/// `d = 1` supports holomorphic annihilators only (the polynomials `Q_k0`
/// reduce to plain powers there).
pub fn annihilator<T: Scalar>(spec: &AnnihilatorSpec<T>, d: usize) -> Result<ComplexExpansion<T>> {
    let poly = annihilator_poly(spec)?;
    if d == 1 {
        if let Some(coeffs) = poly.holomorphic_form(T::zero()) {
            let mut e = ComplexExpansion::new(1);
            for (p, c) in coeffs.into_iter().enumerate() {
                e.add(PqIndex::new(p as u32, 0), c);
            }
            return Ok(e.trimmed(T::of(1e-12)));
        }
        return Err(Error::DimensionTooSmall(1, "d = 1 supports holomorphic annihilators only"));
    }
    let e = to_geg_basis_complex(&poly, d)?;
    let scale = e.iter().map(|(_, c)| c.norm()).fold(T::one(), |a, b| if b > a { b } else { a });
    Ok(e.trimmed(T::of(1e-12) * scale))
}

/// Upper bound for `s`-angular line sets in `C^d`:
/// `n <= C(s+d-1, d-1) C(s-eps+d-1, d-1)` with `eps = 1` iff zero is an
/// angle; tight angle values `x = |z|^2` are roots of
/// `x^eps P_{s-eps}^{(d-1,eps)}(2x - 1)`.
pub fn s_angular_bound<T: Scalar>(d: usize, s: u32, with_zero: bool) -> Result<BoundReport<T>> {
    if s < 1 {
        return Err(Error::Invalid("s-angular bounds need s >= 1".into()));
    }
    let eps = u32::from(with_zero);
    let b1 = crate::gegenbauer::binomial((s + d as u32 - 1) as i64, d as i64 - 1)?;
    let b2 = crate::gegenbauer::binomial((s - eps + d as u32 - 1) as i64, d as i64 - 1)?;
    let value = b1.checked_mul(b2).ok_or(Error::Overflow("s_angular_bound"))?;
    let value = u64::try_from(value).map_err(|_| Error::Overflow("s_angular_bound"))?;
    let jac = jacobi_poly::<T>(s - eps, T::of_usize(d) - T::one(), T::of_u32(eps))
        .compose_affine(T::of(2.0), -T::one());
    let poly = jac.mul(&RealPolynomial::monomial(eps as usize));
    let mut report = BoundReport::new(BoundKind::SAngular, BoundValue::Exact(value));
    let tight = TightnessPoly::SquaredModulus(poly);
    report.tight_roots = structured_roots(&tight).unwrap_or_default();
    report.tightness_poly = Some(tight);
    report.domain = Some(format!("s = {s} angles, zero {}an angle", if with_zero { "" } else { "not " }));
    Ok(report)
}

/// Special (relative) bounds for projective angle sets, from potentials that
/// vanish on the angles. `angles` holds the values `a = |z|^2`.
pub fn special_bounds<T: Scalar>(d: usize, angles: &[T]) -> Result<BoundReport<T>> {
    let df = T::of_usize(d);
    let mut sorted = angles.to_vec();
    sorted.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let report = |value: T, domain: String, spec: AnnihilatorSpec<T>| -> Result<BoundReport<T>> {
        let mut r = BoundReport::new(BoundKind::Special, BoundValue::Approx(value));
        r.domain = Some(domain);
        let poly = annihilator_poly(&spec)?;
        let tight = TightnessPoly::Angle(MonomialPoly::Complex(poly));
        r.tight_roots = structured_roots(&tight).unwrap_or_default();
        r.tightness_poly = Some(tight);
        Ok(r)
    };
    match sorted.as_slice() {
        [a] => {
            if a.is_zero() {
                // F(z) = z: n <= d (holomorphic route, not a limit of the
                // one-angle bound)
                return report(
                    df,
                    "single angle 0".into(),
                    AnnihilatorSpec::Projective { nonzero_angles: vec![], include_zero: true },
                );
            }
            let denom = T::one() - df * *a;
            if denom <= T::zero() {
                return Err(Error::OutOfValidityDomain(format!(
                    "single-angle bound needs 1 - d a > 0 (a = {a}, d = {d})"
                )));
            }
            report(
                df * (T::one() - *a) / denom,
                "single angle a with a < 1/d".into(),
                AnnihilatorSpec::Projective { nonzero_angles: vec![*a], include_zero: false },
            )
        }
        [z, a] if z.is_zero() => {
            let denom = T::of(2.0) - (df + T::one()) * *a;
            if denom <= T::zero() {
                return Err(Error::OutOfValidityDomain(format!(
                    "angles {{0, a}} need a < 2/(d+1) (a = {a}, d = {d})"
                )));
            }
            report(
                df * (df + T::one()) * (T::one() - *a) / denom,
                "angles {0, a} with a < 2/(d+1)".into(),
                AnnihilatorSpec::Projective { nonzero_angles: vec![*a], include_zero: true },
            )
        }
        [a, b] => {
            let sum_ok = *a + *b <= T::of(4.0) / (df + T::of(2.0));
            let denom = df * (df + T::one()) * *a * *b - (df + T::one()) * (*a + *b) + T::of(2.0);
            if !sum_ok || denom <= T::zero() {
                return Err(Error::OutOfValidityDomain(format!(
                    "angles {{a, b}} need a+b <= 4/(d+2) and d(d+1)ab - (d+1)(a+b) + 2 > 0 \
                     (a = {a}, b = {b}, d = {d})"
                )));
            }
            report(
                df * (df + T::one()) * (T::one() - *a) * (T::one() - *b) / denom,
                "angles {a, b} with a+b <= 4/(d+2), d(d+1)ab - (d+1)(a+b) + 2 > 0".into(),
                AnnihilatorSpec::Projective {
                    nonzero_angles: vec![*a, *b],
                    include_zero: false,
                },
            )
        }
        _ => Err(Error::Invalid("special bounds cover one or two projective angles".into())),
    }
}

/// Certificate from checking a configuration against a bound report: the
/// point count must meet the bound and every angle must be a root of the
/// tightness polynomial.
#[derive(Clone, Debug)]
pub struct TightnessCertificate<T> {
    pub pass: bool,
    pub n_matches: bool,
    pub worst_root_residual: T,
}

pub fn tightness_check<T: Scalar>(
    config: &Configuration<T>,
    report: &BoundReport<T>,
    tol: T,
) -> Result<TightnessCertificate<T>> {
    config.require_unit_norm(T::epsilon().sqrt())?;
    let n = T::of_usize(config.len());
    let n_matches = match report.value {
        BoundValue::Exact(v) => config.len() as u64 == v,
        BoundValue::Approx(v) => (n - v).abs() <= tol * v.abs().max(T::one()),
    };
    let poly = report
        .tightness_poly
        .as_ref()
        .ok_or_else(|| Error::Invalid("bound report carries no tightness polynomial".into()))?;
    let angles = angle_set(&config.gramian(), &config.weights_or_uniform(), T::of(1e-9))?;
    let mut worst = T::zero();
    for a in &angles.angles {
        let r = poly.residual(*a);
        if r > worst {
            worst = r;
        }
    }
    Ok(TightnessCertificate { pass: n_matches && worst <= tol, n_matches, worst_root_residual: worst })
}
