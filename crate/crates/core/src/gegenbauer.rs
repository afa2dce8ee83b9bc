//! Real Gegenbauer polynomials `Q_k^(d)`, complex disk polynomials
//! `Q_pq^(d)`, dimensions of the irreducible spaces they reproduce, basis
//! conversion, and product/sum linearization.
//!
//! Normalizations follow the reproducing-kernel convention
//! `Q_k(1) = dim Harm_k(R^d)` and `Q_pq(1) = dim H(p,q)`.

use std::collections::BTreeMap;

use num_complex::Complex;

use crate::config::Field;
use crate::error::{Error, Result};
use crate::indices::{complex_index_product, ComplexIndexSet, IndexSet, PqIndex, RealIndexSet};
use crate::poly::{check_degree, BivariatePoly, MonomialPoly, RealPolynomial};
use crate::quadrature::{geg_inner_complex, geg_inner_real};
use crate::scalar::Scalar;

/// Tolerance under which a numerically obtained coefficient counts as zero
/// (and a slightly negative one as nonnegative).
pub const COEFF_TOL: f64 = 1e-10;

// ---------------------------------------------------------------------------
// exact integer arithmetic
// ---------------------------------------------------------------------------

/// Exact binomial coefficient, zero for `n < k` or negative arguments.
pub fn binomial(n: i64, k: i64) -> Result<i128> {
    if k < 0 || n < 0 || n < k {
        return Ok(0);
    }
    let k = k.min(n - k) as i128;
    let n = n as i128;
    let mut acc: i128 = 1;
    for i in 1..=k {
        acc = acc
            .checked_mul(n - k + i)
            .ok_or(Error::Overflow("binomial"))?;
        acc /= i; // exact at every step
    }
    Ok(acc)
}

fn to_u64(x: i128, what: &'static str) -> Result<u64> {
    u64::try_from(x).map_err(|_| Error::Overflow(what))
}

/// `dim Harm_k(R^d) = C(k+d-1, d-1) - C(k+d-3, d-1)`.
pub fn dim_harm(d: usize, k: u32) -> Result<u64> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d, "harmonic spaces need d >= 2"));
    }
    let d = d as i64;
    let k = k as i64;
    let v = binomial(k + d - 1, d - 1)?
        .checked_sub(binomial(k + d - 3, d - 1)?)
        .ok_or(Error::Overflow("dim_harm"))?;
    to_u64(v, "dim_harm")
}

/// `dim H(p,q)` for the complex sphere of `C^d`. For `d = 1` the space is
/// nonzero only when `p = 0` or `q = 0`.
pub fn dim_h(d: usize, p: u32, q: u32) -> Result<u64> {
    if d == 0 {
        return Err(Error::DimensionTooSmall(0, "dimension must be positive"));
    }
    if d == 1 {
        return Ok(if p == 0 || q == 0 { 1 } else { 0 });
    }
    let dd = d as i64;
    let (p, q) = (p as i64, q as i64);
    let prod = binomial(p + dd - 2, p)?
        .checked_mul(binomial(q + dd - 2, q)?)
        .ok_or(Error::Overflow("dim_h"))?
        .checked_mul((p + q + dd - 1) as i128)
        .ok_or(Error::Overflow("dim_h"))?;
    debug_assert_eq!(prod % (dd - 1) as i128, 0);
    to_u64(prod / (dd - 1) as i128, "dim_h")
}

fn factorial_t<T: Scalar>(n: usize) -> T {
    (1..=n).fold(T::one(), |acc, i| acc * T::of_usize(i))
}

fn binomial_t<T: Scalar>(n: usize, k: usize) -> T {
    if k > n {
        return T::zero();
    }
    let k = k.min(n - k);
    let mut acc = T::one();
    for i in 1..=k {
        acc = acc * T::of_usize(n - k + i) / T::of_usize(i);
    }
    acc
}

/// Rising factorial `(x)_n = x (x+1) ... (x+n-1)`.
fn pochhammer<T: Scalar>(x: T, n: usize) -> T {
    (0..n).fold(T::one(), |acc, i| acc * (x + T::of_usize(i)))
}

/// Falling factorial `x (x-1) ... (x-n+1)`.
fn falling<T: Scalar>(x: T, n: usize) -> T {
    (0..n).fold(T::one(), |acc, i| acc * (x - T::of_usize(i)))
}

// ---------------------------------------------------------------------------
// the polynomials
// ---------------------------------------------------------------------------

/// `Q_k^(d)` by the three-term recurrence
/// `lambda_{k+1} Q_{k+1} = x Q_k - (1 - lambda_{k-1}) Q_{k-1}`,
/// `lambda_k = k / (2k + d - 2)`, seeded `Q_0 = 1`, `Q_1 = d x`.
pub fn real_q<T: Scalar>(d: usize, k: u32) -> Result<RealPolynomial<T>> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d, "Gegenbauer polynomials need d >= 2"));
    }
    check_degree(k as usize)?;
    let mut prev = RealPolynomial::constant(T::one());
    if k == 0 {
        return Ok(prev);
    }
    let mut cur = RealPolynomial::new(vec![T::zero(), T::of_usize(d)]);
    // lambda_0 = 0 for every d (the k = 0 quotient is 0/0 at d = 2)
    let lambda = |m: u32| {
        if m == 0 {
            T::zero()
        } else {
            T::of_u32(m) / (T::of(2.0) * T::of_u32(m) + T::of_usize(d) - T::of(2.0))
        }
    };
    for m in 1..k {
        let next = RealPolynomial::monomial(1)
            .mul(&cur)
            .sub(&prev.scale(T::one() - lambda(m - 1)))
            .scale(T::one() / lambda(m + 1));
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// `Q_k^(d)` from the explicit alternating sum; retained as an independent
/// cross-check of the recurrence.
pub fn real_q_explicit<T: Scalar>(d: usize, k: u32) -> Result<RealPolynomial<T>> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d, "Gegenbauer polynomials need d >= 2"));
    }
    check_degree(k as usize)?;
    if k == 0 {
        return Ok(RealPolynomial::constant(T::one()));
    }
    let k = k as usize;
    let mut coeffs = vec![T::zero(); k + 1];
    let lead = T::of(2.0) * T::of_usize(k) + T::of_usize(d) - T::of(2.0);
    for j in 0..=k / 2 {
        // d (d+2) ... (d + 2k - 2j - 4), an empty product when the upper end
        // falls below d
        let terms = (k - j).saturating_sub(1);
        let mut num = T::one();
        for i in 0..terms {
            num = num * (T::of_usize(d) + T::of(2.0) * T::of_usize(i));
        }
        let den = T::of(2.0).powi(j as i32) * factorial_t::<T>(j) * factorial_t::<T>(k - 2 * j);
        let sign = if j % 2 == 0 { T::one() } else { -T::one() };
        coeffs[k - 2 * j] = sign * lead * num / den;
    }
    Ok(RealPolynomial::new(coeffs))
}

/// Disk polynomial `Q_pq^(d)` as a bivariate monomial table. For `d = 1`
/// this is `z^p` (`q = 0`), `conj(z)^q` (`p = 0`) or the zero polynomial.
pub fn complex_q<T: Scalar>(d: usize, p: u32, q: u32) -> Result<BivariatePoly<T>> {
    if d == 0 {
        return Err(Error::DimensionTooSmall(0, "dimension must be positive"));
    }
    check_degree((p + q) as usize)?;
    let (p, q) = (p as usize, q as usize);
    if d == 1 {
        if p != 0 && q != 0 {
            return Ok(BivariatePoly::zero());
        }
        return BivariatePoly::monomial(p, q);
    }
    let total = p + q;
    // leading coefficient (p+q+d-1) (d+p+q-2)! / ((d-1)! p! q!)
    let mut c = if total == 0 {
        T::one()
    } else {
        T::of_usize(total + d - 1) * binomial_t::<T>(d + total - 2, d - 1)
            * binomial_t::<T>(total, p)
            / T::of_usize(total)
    };
    let mut out = BivariatePoly::with_shape(p + 1, q + 1);
    for j in 0..=p.min(q) {
        out.set(p - j, q - j, Complex::new(c, T::zero()));
        // ratio of consecutive terms in the alternating factorial sum
        c = c * -(T::of_usize(p - j) * T::of_usize(q - j))
            / (T::of_usize(j + 1) * T::of_usize(d + total - j - 2));
    }
    Ok(out)
}

/// Jacobi polynomial `P_k^{(a,b)}` in the monomial basis.
pub fn jacobi_poly<T: Scalar>(k: u32, a: T, b: T) -> RealPolynomial<T> {
    let two = T::of(2.0);
    let mut prev = RealPolynomial::constant(T::one());
    if k == 0 {
        return prev;
    }
    let mut cur = RealPolynomial::new(vec![(a - b) / two, (a + b + two) / two]);
    for m in 2..=k {
        let m_t = T::of_u32(m);
        let c = two * m_t + a + b;
        let denom = two * m_t * (m_t + a + b) * (c - two);
        let lin = RealPolynomial::new(vec![a * a - b * b, c * (c - two)]).scale((c - T::one()) / denom);
        let next = lin
            .mul(&cur)
            .sub(&prev.scale(two * (m_t + a - T::one()) * (m_t + b - T::one()) * c / denom));
        prev = cur;
        cur = next;
    }
    cur
}

/// The weight parameter of the Hoggar polynomial family: `1/2` for the real
/// sphere, `1` for the complex sphere.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HoggarWeight {
    Half,
    One,
}

/// Hoggar's degree-`k` polynomials `Q_k^eps`, related to the Gegenbauer
/// polynomials by `Q_{2k+eps}(x) = x^eps Q_k^eps(x^2)` (weight 1/2) and
/// `Q_{k+eps,k}(z) = z^eps Q_k^eps(|z|^2)` (weight 1).
pub fn hoggar_q<T: Scalar>(weight: HoggarWeight, d: usize, eps: u32, k: u32) -> Result<RealPolynomial<T>> {
    if !(eps == 0 || eps == 1) {
        return Err(Error::Invalid("Hoggar parameter eps must be 0 or 1".into()));
    }
    check_degree(k as usize)?;
    let m = match weight {
        HoggarWeight::Half => T::of(0.5),
        HoggarWeight::One => T::one(),
    };
    let md = m * T::of_usize(d);
    let k_us = k as usize;
    let eps_us = eps as usize;
    let lead = pochhammer(md, 2 * k_us + eps_us)
        / (pochhammer(m, k_us + eps_us) * factorial_t::<T>(k_us));
    let mut coeffs = vec![T::zero(); k_us + 1];
    for i in 0..=k_us {
        let sign = if i % 2 == 0 { T::one() } else { -T::one() };
        let num = falling(T::of_usize(k_us) + m + T::of_u32(eps) - T::one(), i);
        let den = falling(T::of(2.0) * T::of_usize(k_us) + md + T::of_u32(eps) - T::of(2.0), i);
        coeffs[k_us - i] = sign * binomial_t::<T>(k_us, i) * num / den * lead;
    }
    Ok(RealPolynomial::new(coeffs))
}

// ---------------------------------------------------------------------------
// expansions in the Q basis
// ---------------------------------------------------------------------------

/// Finite expansion `sum_k f_k Q_k^(d)` with real coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct RealExpansion<T> {
    d: usize,
    coeffs: BTreeMap<u32, T>,
}

impl<T: Scalar> RealExpansion<T> {
    pub fn new(d: usize) -> Self {
        Self { d, coeffs: BTreeMap::new() }
    }

    pub fn from_coeffs(d: usize, coeffs: impl IntoIterator<Item = (u32, T)>) -> Self {
        let mut out = Self::new(d);
        for (k, c) in coeffs {
            out.add(k, c);
        }
        out
    }

    pub fn dimension(&self) -> usize {
        self.d
    }

    pub fn add(&mut self, k: u32, c: T) {
        let entry = self.coeffs.entry(k).or_insert_with(T::zero);
        *entry = *entry + c;
        if entry.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    pub fn coeff(&self, k: u32) -> T {
        self.coeffs.get(&k).copied().unwrap_or_else(T::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, T)> + '_ {
        self.coeffs.iter().map(|(&k, &c)| (k, c))
    }

    pub fn constant_term(&self) -> T {
        self.coeff(0)
    }

    pub fn support(&self) -> RealIndexSet {
        RealIndexSet::new(self.coeffs.keys().copied())
    }

    /// Drops coefficients of magnitude at most `tol`.
    pub fn trimmed(&self, tol: T) -> Self {
        Self {
            d: self.d,
            coeffs: self.coeffs.iter().filter(|(_, c)| c.abs() > tol).map(|(&k, &c)| (k, c)).collect(),
        }
    }

    pub fn scale(&self, s: T) -> Self {
        Self { d: self.d, coeffs: self.coeffs.iter().map(|(&k, &c)| (k, c * s)).collect() }
    }

    pub fn is_potential(&self, tol: T) -> bool {
        self.coeffs.values().all(|&c| c >= -tol)
    }

    /// `sum f_k Q_k(1) = sum f_k dim Harm_k`.
    pub fn value_at_one(&self) -> Result<T> {
        let mut acc = T::zero();
        for (&k, &c) in &self.coeffs {
            acc = acc + c * T::of_u64(dim_harm(self.d, k)?);
        }
        Ok(acc)
    }

    pub fn to_poly(&self) -> Result<RealPolynomial<T>> {
        let mut acc = RealPolynomial::zero();
        for (&k, &c) in &self.coeffs {
            acc = acc.add(&real_q::<T>(self.d, k)?.scale(c));
        }
        Ok(acc)
    }
}

/// Finite expansion `sum_{pq} f_pq Q_pq^(d)`; coefficients may be complex
/// (annihilator polynomials use that freedom).
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexExpansion<T> {
    d: usize,
    coeffs: BTreeMap<PqIndex, Complex<T>>,
}

impl<T: Scalar> ComplexExpansion<T> {
    pub fn new(d: usize) -> Self {
        Self { d, coeffs: BTreeMap::new() }
    }

    pub fn from_coeffs(d: usize, coeffs: impl IntoIterator<Item = ((u32, u32), Complex<T>)>) -> Self {
        let mut out = Self::new(d);
        for ((p, q), c) in coeffs {
            out.add(PqIndex::new(p, q), c);
        }
        out
    }

    pub fn dimension(&self) -> usize {
        self.d
    }

    pub fn add(&mut self, idx: PqIndex, c: Complex<T>) {
        let zero = Complex::new(T::zero(), T::zero());
        let entry = self.coeffs.entry(idx).or_insert(zero);
        *entry = *entry + c;
        if entry.norm_sqr().is_zero() {
            self.coeffs.remove(&idx);
        }
    }

    pub fn coeff(&self, idx: PqIndex) -> Complex<T> {
        self.coeffs.get(&idx).copied().unwrap_or_else(|| Complex::new(T::zero(), T::zero()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (PqIndex, Complex<T>)> + '_ {
        self.coeffs.iter().map(|(&k, &c)| (k, c))
    }

    pub fn constant_term(&self) -> Complex<T> {
        self.coeff(PqIndex::new(0, 0))
    }

    pub fn support(&self) -> ComplexIndexSet {
        ComplexIndexSet::new(self.coeffs.keys().map(|i| (i.p, i.q)))
    }

    pub fn trimmed(&self, tol: T) -> Self {
        Self {
            d: self.d,
            coeffs: self.coeffs.iter().filter(|(_, c)| c.norm() > tol).map(|(&k, &c)| (k, c)).collect(),
        }
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self { d: self.d, coeffs: self.coeffs.iter().map(|(&k, &c)| (k, c * s)).collect() }
    }

    pub fn is_potential(&self, tol: T) -> bool {
        self.coeffs.values().all(|c| c.im.abs() <= tol && c.re >= -tol)
    }

    pub fn value_at_one(&self) -> Result<Complex<T>> {
        let zero = Complex::new(T::zero(), T::zero());
        let mut acc = zero;
        for (&idx, &c) in &self.coeffs {
            acc = acc + c.scale(T::of_u64(dim_h(self.d, idx.p, idx.q)?));
        }
        Ok(acc)
    }

    pub fn to_poly(&self) -> Result<BivariatePoly<T>> {
        let mut acc = BivariatePoly::zero();
        for (&idx, &c) in &self.coeffs {
            acc = acc.add(&complex_q::<T>(self.d, idx.p, idx.q)?.scale(c));
        }
        Ok(acc)
    }
}

/// A Gegenbauer-basis expansion over either field.
#[derive(Clone, Debug)]
pub enum GegExpansion<T> {
    Real(RealExpansion<T>),
    Complex(ComplexExpansion<T>),
}

impl<T: Scalar> GegExpansion<T> {
    pub fn field(&self) -> Field {
        match self {
            GegExpansion::Real(_) => Field::Real,
            GegExpansion::Complex(_) => Field::Complex,
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            GegExpansion::Real(e) => e.dimension(),
            GegExpansion::Complex(e) => e.dimension(),
        }
    }

    /// All coefficients real and nonnegative (within `tol`).
    pub fn is_potential(&self, tol: T) -> bool {
        match self {
            GegExpansion::Real(e) => e.is_potential(tol),
            GegExpansion::Complex(e) => e.is_potential(tol),
        }
    }

    pub fn constant_term(&self) -> T {
        match self {
            GegExpansion::Real(e) => e.constant_term(),
            GegExpansion::Complex(e) => e.constant_term().re,
        }
    }

    pub fn value_at_one(&self) -> Result<Complex<T>> {
        match self {
            GegExpansion::Real(e) => Ok(Complex::new(e.value_at_one()?, T::zero())),
            GegExpansion::Complex(e) => e.value_at_one(),
        }
    }

    pub fn support(&self) -> IndexSet {
        match self {
            GegExpansion::Real(e) => IndexSet::Real(e.support()),
            GegExpansion::Complex(e) => IndexSet::Complex(e.support()),
        }
    }

    pub fn to_monomial(&self) -> Result<MonomialPoly<T>> {
        Ok(match self {
            GegExpansion::Real(e) => MonomialPoly::Real(e.to_poly()?),
            GegExpansion::Complex(e) => MonomialPoly::Complex(e.to_poly()?),
        })
    }

    pub fn trimmed(&self, tol: T) -> Self {
        match self {
            GegExpansion::Real(e) => GegExpansion::Real(e.trimmed(tol)),
            GegExpansion::Complex(e) => GegExpansion::Complex(e.trimmed(tol)),
        }
    }
}

// ---------------------------------------------------------------------------
// basis conversion
// ---------------------------------------------------------------------------

/// Quadrature projection `<f, Q_k>_geg / Q_k(1)`, the independent oracle
/// for the coefficient-space conversion below.
pub fn project_real<T: Scalar>(f: &RealPolynomial<T>, d: usize, k: u32) -> Result<T> {
    let qk = real_q::<T>(d, k)?;
    Ok(geg_inner_real(f, &qk, d)? / T::of_u64(dim_harm(d, k)?))
}

/// Quadrature projection `<f, Q_pq>_{D,d} / Q_pq(1)`.
pub fn project_complex<T: Scalar>(
    f: &BivariatePoly<T>,
    d: usize,
    p: u32,
    q: u32,
) -> Result<Complex<T>> {
    let qpq = complex_q::<T>(d, p, q)?;
    Ok(geg_inner_complex(f, &qpq, d)?.scale(T::one() / T::of_u64(dim_h(d, p, q)?)))
}

/// Expands a univariate polynomial in the `Q_k^(d)` basis (the coefficients
/// `f_k = <f, Q_k>_geg / Q_k(1)`), computed by graded synthetic division.
/// Division keeps the tiny high-order coefficients relatively accurate where
/// direct quadrature would leave them with an absolute error that the large
/// monomial coefficients of `Q_k` then amplify.
pub fn to_geg_basis_real<T: Scalar>(f: &RealPolynomial<T>, d: usize) -> Result<RealExpansion<T>> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d, "Gegenbauer basis needs d >= 2"));
    }
    check_degree(f.degree())?;
    let mut rem: Vec<T> = f.coeffs().to_vec();
    let mut out = RealExpansion::new(d);
    for k in (0..rem.len()).rev() {
        let qk = real_q::<T>(d, k as u32)?;
        let fk = rem[k] / qk.coeff(k);
        if !fk.is_zero() {
            for (j, r) in rem.iter_mut().enumerate().take(k + 1) {
                *r = *r - fk * qk.coeff(j);
            }
            out.add(k as u32, fk);
        }
    }
    Ok(out)
}

/// Reconstructs the monomial form of a real expansion.
pub fn from_geg_basis_real<T: Scalar>(e: &RealExpansion<T>) -> Result<RealPolynomial<T>> {
    e.to_poly()
}

/// Expands a bivariate polynomial in the `Q_pq^(d)` basis (`d >= 2`) by
/// graded division: `z^p conj(z)^q` is the leading term of `Q_pq` alone.
pub fn to_geg_basis_complex<T: Scalar>(f: &BivariatePoly<T>, d: usize) -> Result<ComplexExpansion<T>> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(
            d,
            "disk basis conversion needs d >= 2; d = 1 supports only plain powers",
        ));
    }
    let rows = f.degree_z();
    let cols = f.degree_zbar();
    check_degree(rows + cols)?;
    let mut rem = f.clone();
    let mut out = ComplexExpansion::new(d);
    for total in (0..=rows + cols).rev() {
        for p in 0..=rows.min(total) {
            let q = total - p;
            if q > cols {
                continue;
            }
            let c = rem.get(p, q);
            if c.norm_sqr().is_zero() {
                continue;
            }
            let qpq = complex_q::<T>(d, p as u32, q as u32)?;
            let fpq = c / qpq.get(p, q);
            rem = rem.sub(&qpq.scale(fpq));
            out.add(PqIndex::new(p as u32, q as u32), fpq);
        }
    }
    Ok(out)
}

pub fn from_geg_basis_complex<T: Scalar>(e: &ComplexExpansion<T>) -> Result<BivariatePoly<T>> {
    e.to_poly()
}

// ---------------------------------------------------------------------------
// products and sums
// ---------------------------------------------------------------------------

/// Expansion of `Q_k^(d) Q_l^(d)` on `{Q_{k+l-2j}}`. Uses Rogers' closed
/// form for `d >= 3`; for `d = 2` the Gegenbauer parameter vanishes, so the
/// coefficients come from quadrature projection instead.
pub fn rogers_product<T: Scalar>(d: usize, k: u32, l: u32) -> Result<RealExpansion<T>> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d, "Gegenbauer products need d >= 2"));
    }
    if d == 2 {
        let prod = real_q::<T>(d, k)?.mul(&real_q::<T>(d, l)?);
        let mut out = RealExpansion::new(d);
        for m in crate::indices::real_product(k, l).members() {
            let qm = real_q::<T>(d, m)?;
            let c = geg_inner_real(&prod, &qm, d)? / T::of_u64(dim_harm(d, m)?);
            out.add(m, c);
        }
        return Ok(out.trimmed(T::of(COEFF_TOL)));
    }
    let nu = (T::of_usize(d) - T::of(2.0)) / T::of(2.0);
    let (k_us, l_us) = (k as usize, l as usize);
    let mut out = RealExpansion::new(d);
    for j in 0..=k_us.min(l_us) {
        let kj = T::of_usize(k_us) + nu;
        let lj = T::of_usize(l_us) + nu;
        let num = kj
            * lj
            * factorial_t::<T>(k_us + l_us - 2 * j)
            * pochhammer(nu, j)
            * pochhammer(nu, k_us - j)
            * pochhammer(nu, l_us - j)
            * pochhammer(nu + nu, k_us + l_us - j);
        let den = nu
            * (T::of_usize(k_us + l_us - j) + nu)
            * factorial_t::<T>(j)
            * factorial_t::<T>(k_us - j)
            * factorial_t::<T>(l_us - j)
            * pochhammer(nu, k_us + l_us - j)
            * pochhammer(nu + nu, k_us + l_us - 2 * j);
        out.add((k_us + l_us - 2 * j) as u32, num / den);
    }
    Ok(out)
}

/// Expansion of `Q_pq^(d) Q_rs^(d)` by quadrature projection onto the index
/// product `(p,q).(r,s)` (with the even-`j` restriction for `d = 2` and
/// equal factors). Tiny negative coefficients are clipped to zero.
pub fn complex_product<T: Scalar>(d: usize, a: (u32, u32), b: (u32, u32)) -> Result<ComplexExpansion<T>> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d, "disk products need d >= 2"));
    }
    let (a, b) = (PqIndex::new(a.0, a.1), PqIndex::new(b.0, b.1));
    let prod = complex_q::<T>(d, a.p, a.q)?.mul(&complex_q::<T>(d, b.p, b.q)?)?;
    let support = complex_index_product(a, b, d == 2);
    let mut out = ComplexExpansion::new(d);
    let mut scale = T::one();
    let mut raw = Vec::new();
    for idx in support.members() {
        let qpq = complex_q::<T>(d, idx.p, idx.q)?;
        let c = geg_inner_complex(&prod, &qpq, d)?.scale(T::one() / T::of_u64(dim_h(d, idx.p, idx.q)?));
        if c.norm() > scale {
            scale = c.norm();
        }
        raw.push((idx, c));
    }
    let tol = T::of(COEFF_TOL) * scale;
    for (idx, c) in raw {
        if c.norm() <= tol {
            continue;
        }
        out.add(idx, Complex::new(c.re.max(T::zero()), T::zero()));
    }
    Ok(out)
}

/// `sum_{j <= min(p,q)} Q_{p-j,q-j}^(d)`, which equals
/// `(d/(p+q+d)) Q_pq^(d+1)` pointwise.
pub fn sum_identity<T: Scalar>(d: usize, p: u32, q: u32) -> ComplexExpansion<T> {
    let one = Complex::new(T::one(), T::zero());
    ComplexExpansion::from_coeffs(d, (0..=p.min(q)).map(|j| ((p - j, q - j), one)))
}

/// Coefficients `c_j = (d-1)! p! q! / (j! (p+q+d-1-j)!)` of the telescoping
/// identity `sum_j c_j Q_{p-j,q-j} = z^p conj(z)^q`.
pub fn telescoping<T: Scalar>(d: usize, p: u32, q: u32) -> Vec<T> {
    let (p, q) = (p as usize, q as usize);
    (0..=p.min(q))
        .map(|j| {
            // (d-1)! p! q! / (j! (p+q+d-1-j)!) assembled as binomial ratios
            // to avoid gigantic intermediates
            let mut c = T::one() / binomial_t::<T>(p + q + d - 1 - j, d - 1);
            c = c * factorial_t::<T>(p) * factorial_t::<T>(q)
                / (factorial_t::<T>(j) * factorial_t::<T>(p + q - 2 * j))
                / pochhammer(T::of_usize(p + q - 2 * j + 1), j);
            c
        })
        .collect()
}

/// The exact Gegenbauer expansion of the monomial `z^p conj(z)^q` given by
/// the telescoping identity.
pub fn monomial_expansion_complex<T: Scalar>(d: usize, p: u32, q: u32) -> ComplexExpansion<T> {
    let cs = telescoping::<T>(d, p, q);
    ComplexExpansion::from_coeffs(
        d,
        cs.into_iter()
            .enumerate()
            .map(|(j, c)| ((p - j as u32, q - j as u32), Complex::new(c, T::zero()))),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    type T = f64;

    #[test]
    fn real_q_first_values() {
        for d in [2usize, 3, 5, 8] {
            let q0 = real_q::<T>(d, 0).unwrap();
            assert_eq!(q0.coeffs(), &[1.0]);
            let q1 = real_q::<T>(d, 1).unwrap();
            assert_eq!(q1.coeffs(), &[0.0, d as f64]);
        }
        // Q_2^(3) = 7.5 x^2 - 2.5
        let q2 = real_q::<T>(3, 2).unwrap();
        assert!((q2.coeff(2) - 7.5).abs() < 1e-12);
        assert!((q2.coeff(0) + 2.5).abs() < 1e-12);
        assert!(q2.coeff(1).abs() < 1e-15);
        // Q_2(1) = (1/2) d(d+2)(1 - 1/d)
        for d in 2..=8 {
            let q2 = real_q::<T>(d, 2).unwrap();
            let want = 0.5 * d as f64 * (d + 2) as f64 * (1.0 - 1.0 / d as f64);
            assert!((q2.eval(1.0) - want).abs() < 1e-10);
        }
        assert!(real_q::<T>(1, 3).is_err());
    }

    #[test]
    fn recurrence_matches_explicit_sum() {
        for d in 2..=6 {
            for k in 0..=12 {
                let a = real_q::<T>(d, k).unwrap();
                let b = real_q_explicit::<T>(d, k).unwrap();
                for j in 0..=k as usize {
                    let scale = a.coeff(j).abs().max(1.0);
                    assert!(
                        (a.coeff(j) - b.coeff(j)).abs() < 1e-10 * scale,
                        "d={d} k={k} j={j}: {} vs {}",
                        a.coeff(j),
                        b.coeff(j)
                    );
                }
            }
        }
    }

    #[test]
    fn q_at_one_is_dimension() {
        for d in 2..=6 {
            for k in 0..=10 {
                let q = real_q::<T>(d, k).unwrap();
                let dim = dim_harm(d, k).unwrap() as f64;
                assert!((q.eval(1.0) - dim).abs() < 1e-9 * dim.max(1.0), "d={d} k={k}");
            }
        }
    }

    #[test]
    fn dims() {
        assert_eq!(dim_harm(3, 2).unwrap(), 5);
        assert_eq!(dim_harm(3, 0).unwrap(), 1);
        assert_eq!(dim_harm(4, 1).unwrap(), 4);
        for d in 2..=6 {
            assert_eq!(dim_h(d, 0, 0).unwrap(), 1);
            assert_eq!(dim_h(d, 1, 1).unwrap(), (d * d - 1) as u64);
        }
        assert_eq!(dim_h(1, 3, 0).unwrap(), 1);
        assert_eq!(dim_h(1, 2, 1).unwrap(), 0);
    }

    #[test]
    fn complex_q_known_forms() {
        for d in 2..=5 {
            // Q_10 = d z
            let q10 = complex_q::<T>(d, 1, 0).unwrap();
            assert_eq!(q10.get(1, 0).re, d as f64);
            // Q_11 = d(d+1)(|z|^2 - 1/d)
            let q11 = complex_q::<T>(d, 1, 1).unwrap();
            assert!((q11.get(1, 1).re - (d * (d + 1)) as f64).abs() < 1e-12);
            assert!((q11.get(0, 0).re + (d + 1) as f64).abs() < 1e-12);
        }
        // d = 1 degeneracy
        assert!(complex_q::<T>(1, 2, 1).unwrap().is_zero());
        assert_eq!(complex_q::<T>(1, 2, 0).unwrap().get(2, 0).re, 1.0);
    }

    #[test]
    fn complex_q_value_at_one_is_dimension() {
        let one = Complex::new(1.0, 0.0);
        for d in 2..=4 {
            for p in 0..=5u32 {
                for q in 0..=5u32 {
                    let poly = complex_q::<T>(d, p, q).unwrap();
                    let dim = dim_h(d, p, q).unwrap() as f64;
                    assert!(
                        (poly.eval(one).re - dim).abs() < 1e-9 * dim.max(1.0),
                        "d={d} p={p} q={q}"
                    );
                }
            }
        }
    }

    #[test]
    fn conjugation_symmetry() {
        // coefficients of Q_pq and Q_qp are transposes of each other
        for d in 2..=4 {
            for p in 0..4u32 {
                for q in 0..4u32 {
                    let a = complex_q::<T>(d, p, q).unwrap();
                    let b = complex_q::<T>(d, q, p).unwrap();
                    assert_eq!(a.conj(), b, "d={d} p={p} q={q}");
                }
            }
        }
    }

    #[test]
    fn telescoping_small_cases() {
        // p=q=1: c_0 = 1/(d(d+1)), c_1 = 1/d
        for d in 2..=5 {
            let c = telescoping::<T>(d, 1, 1);
            assert!((c[0] - 1.0 / (d * (d + 1)) as f64).abs() < 1e-14);
            assert!((c[1] - 1.0 / d as f64).abs() < 1e-14);
        }
        // p=1, q=0: single coefficient 1/d
        let c = telescoping::<T>(3, 1, 0);
        assert_eq!(c.len(), 1);
        assert!((c[0] - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn telescoping_reconstructs_monomial() {
        let mut rng = 0x8badf00du64;
        let mut next = move || {
            rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((rng >> 33) as f64 / (1u64 << 31) as f64) - 1.0
        };
        for d in 2..=4 {
            for p in 0..=4u32 {
                for q in 0..=4u32 {
                    let exp = monomial_expansion_complex::<T>(d, p, q);
                    let poly = exp.to_poly().unwrap();
                    for _ in 0..10 {
                        let z = Complex::new(next() * 0.6, next() * 0.6);
                        let want = z.powu(p) * z.conj().powu(q);
                        assert!((poly.eval(z) - want).norm() < 1e-11, "d={d} p={p} q={q}");
                    }
                }
            }
        }
    }

    #[test]
    fn sum_identity_matches_higher_dimension() {
        let mut state = 1u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(99);
            ((state >> 33) as f64 / (1u64 << 31) as f64) - 1.0
        };
        for d in 2..=4usize {
            for (p, q) in [(1u32, 1u32), (2, 1), (2, 2), (3, 2)] {
                let lhs = sum_identity::<T>(d, p, q).to_poly().unwrap();
                let rhs = complex_q::<T>(d + 1, p, q).unwrap();
                for _ in 0..20 {
                    let z = Complex::new(next() * 0.7, next() * 0.7);
                    let want = rhs.eval(z).scale(d as f64 / ((p + q) as f64 + d as f64));
                    assert!((lhs.eval(z) - want).norm() < 1e-11, "d={d} p={p} q={q}");
                }
            }
        }
    }

    #[test]
    fn basis_round_trip_real() {
        // x^2 = (2/(d(d+2))) Q_2 + (1/d) Q_0
        for d in 2..=6 {
            let f = RealPolynomial::<T>::monomial(2);
            let e = to_geg_basis_real(&f, d).unwrap();
            assert!((e.coeff(2) - 2.0 / (d * (d + 2)) as f64).abs() < 1e-12);
            assert!((e.coeff(0) - 1.0 / d as f64).abs() < 1e-12);
            assert!(e.coeff(1).abs() < 1e-12);
            let back = from_geg_basis_real(&e).unwrap();
            assert!((back.coeff(2) - 1.0).abs() < 1e-10);
            assert!(back.coeff(0).abs() < 1e-10);
        }
    }

    #[test]
    fn basis_round_trip_complex() {
        // z conj(z) = Q_11/(d(d+1)) + Q_00/d
        for d in 2..=4 {
            let f = BivariatePoly::<T>::monomial(1, 1).unwrap();
            let e = to_geg_basis_complex(&f, d).unwrap();
            assert!((e.coeff(PqIndex::new(1, 1)).re - 1.0 / (d * (d + 1)) as f64).abs() < 1e-12);
            assert!((e.coeff(PqIndex::new(0, 0)).re - 1.0 / d as f64).abs() < 1e-12);
            let back = from_geg_basis_complex(&e).unwrap();
            assert!((back.get(1, 1).re - 1.0).abs() < 1e-10);
        }
        // constant
        let one = BivariatePoly::<T>::constant(Complex::new(1.0, 0.0));
        let e = to_geg_basis_complex(&one, 3).unwrap();
        assert!((e.coeff(PqIndex::new(0, 0)).re - 1.0).abs() < 1e-13);
    }

    #[test]
    fn division_matches_quadrature_projection() {
        let mut state = 99u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(7);
            ((state >> 33) as f64 / (1u64 << 31) as f64) - 1.0
        };
        for d in 2..=4usize {
            let coeffs: Vec<f64> = (0..=8).map(|_| next()).collect();
            let f = RealPolynomial::new(coeffs);
            let e = to_geg_basis_real(&f, d).unwrap();
            for k in 0..=8u32 {
                let via_quad = project_real(&f, d, k).unwrap();
                assert!((e.coeff(k) - via_quad).abs() < 1e-11, "d={d} k={k}");
            }
            let mut table = Vec::new();
            for p in 0..=3usize {
                for q in 0..=3usize {
                    table.push((p, q, Complex::new(next(), next())));
                }
            }
            let f = BivariatePoly::from_terms(table).unwrap();
            let e = to_geg_basis_complex(&f, d).unwrap();
            for p in 0..=3u32 {
                for q in 0..=3u32 {
                    let via_quad = project_complex(&f, d, p, q).unwrap();
                    assert!(
                        (e.coeff(PqIndex::new(p, q)) - via_quad).norm() < 1e-10,
                        "d={d} p={p} q={q}"
                    );
                }
            }
        }
    }

    #[test]
    fn rogers_small_cases() {
        // Q_1 Q_1 = (2d/(d+2)) Q_2 + d Q_0
        for d in 3..=6 {
            let e = rogers_product::<T>(d, 1, 1).unwrap();
            assert!((e.coeff(2) - 2.0 * d as f64 / (d + 2) as f64).abs() < 1e-12);
            assert!((e.coeff(0) - d as f64).abs() < 1e-12);
        }
        // Q_k Q_0 = Q_k
        let e = rogers_product::<T>(4, 5, 0).unwrap();
        assert_eq!(e.iter().count(), 1);
        assert!((e.coeff(5) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rogers_matches_quadrature() {
        for d in [3usize, 4, 5] {
            for k in 0..=4u32 {
                for l in 0..=4u32 {
                    let closed = rogers_product::<T>(d, k, l).unwrap();
                    let prod = real_q::<T>(d, k).unwrap().mul(&real_q::<T>(d, l).unwrap());
                    let projected = to_geg_basis_real(&prod, d).unwrap();
                    for (m, c) in closed.iter() {
                        assert!(
                            (c - projected.coeff(m)).abs() < 1e-9 * c.abs().max(1.0),
                            "d={d} k={k} l={l} m={m}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn rogers_d2_support_is_chebyshev() {
        // for d = 2, Q_2 Q_2 = Q_4 + 2 Q_0 (Chebyshev), middle index absent
        let e = rogers_product::<T>(2, 2, 2).unwrap();
        assert!((e.coeff(4) - 1.0).abs() < 1e-9);
        assert!((e.coeff(0) - 2.0).abs() < 1e-9);
        assert!(e.coeff(2).abs() < 1e-9);
    }

    #[test]
    fn complex_product_cases() {
        // Q_10 Q_01 = (d/(d+1)) Q_11 + d Q_00
        for d in 2..=4 {
            let e = complex_product::<T>(d, (1, 0), (0, 1)).unwrap();
            assert!((e.coeff(PqIndex::new(1, 1)).re - d as f64 / (d + 1) as f64).abs() < 1e-9);
            assert!((e.coeff(PqIndex::new(0, 0)).re - d as f64).abs() < 1e-9);
        }
        // Q_pq Q_00 = Q_pq
        let e = complex_product::<T>(3, (2, 1), (0, 0)).unwrap();
        assert_eq!(e.iter().count(), 1);
        assert!((e.coeff(PqIndex::new(2, 1)).re - 1.0).abs() < 1e-9);
        // d=2 same-index product: odd-j indices excluded
        let e = complex_product::<T>(2, (1, 1), (1, 1)).unwrap();
        assert!(e.coeff(PqIndex::new(1, 1)).norm() == 0.0);
        assert!(e.coeff(PqIndex::new(2, 2)).re > 0.0);
        assert!(e.coeff(PqIndex::new(0, 0)).re > 0.0);
    }

    #[test]
    fn hoggar_relations() {
        // m=1/2, eps=1, k=0: constant d (so that x * Q_0^1(x^2) = d x = Q_1)
        for d in 2..=5 {
            let h = hoggar_q::<T>(HoggarWeight::Half, d, 1, 0).unwrap();
            assert!((h.coeff(0) - d as f64).abs() < 1e-12);
        }
        // m=1, eps=0, k=1: Q_1^0(u) = d(d+1)u - (d+1), matching Q_11
        for d in 2..=5 {
            let h = hoggar_q::<T>(HoggarWeight::One, d, 0, 1).unwrap();
            assert!((h.coeff(1) - (d * (d + 1)) as f64).abs() < 1e-10);
            assert!((h.coeff(0) + (d + 1) as f64).abs() < 1e-10);
        }
        // m=1, eps=1, k=1, d=2: z Q_1^1(|z|^2) = Q_21^(2)(z) = 12 z|z|^2 - 8z
        let h = hoggar_q::<T>(HoggarWeight::One, 2, 1, 1).unwrap();
        assert!((h.coeff(1) - 12.0).abs() < 1e-10);
        assert!((h.coeff(0) + 8.0).abs() < 1e-10);

        // general relations against the Gegenbauer polynomials
        for d in 2..=4usize {
            for eps in 0..=1u32 {
                for k in 0..=4u32 {
                    let h = hoggar_q::<T>(HoggarWeight::Half, d, eps, k).unwrap();
                    let lhs = real_q::<T>(d, 2 * k + eps).unwrap();
                    let rhs = h.compose_square().mul(&RealPolynomial::monomial(eps as usize));
                    for j in 0..=lhs.degree() {
                        let scale = lhs.coeff(j).abs().max(1.0);
                        assert!((lhs.coeff(j) - rhs.coeff(j)).abs() < 1e-9 * scale);
                    }
                    let h = hoggar_q::<T>(HoggarWeight::One, d, eps, k).unwrap();
                    let qk = complex_q::<T>(d, k + eps, k).unwrap();
                    let z = Complex::new(0.31, -0.42);
                    let want = z.powu(eps) * h.eval_complex(Complex::new(z.norm_sqr(), 0.0));
                    assert!((qk.eval(z) - want).norm() < 1e-9, "d={d} eps={eps} k={k}");
                }
            }
        }
    }

    #[test]
    fn jacobi_values() {
        // P_k^{(a,b)}(1) = C(k+a, k)
        for k in 0..=6u32 {
            let p = jacobi_poly::<T>(k, 2.0, 0.0);
            let want = binomial_t::<f64>(k as usize + 2, k as usize);
            assert!((p.eval(1.0) - want).abs() < 1e-10);
        }
    }

    #[test]
    fn addition_formula() {
        // Q_k^(2d)(<x,y>_R) = sum_{p+q=k} Q_pq^(d)(z) at random unit vectors
        let mut state = 42u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            ((state >> 33) as f64 / (1u64 << 31) as f64) - 1.0
        };
        for d in [2usize, 3] {
            for k in 0..=6u32 {
                let mut x: Vec<f64> = (0..2 * d).map(|_| next()).collect();
                let mut y: Vec<f64> = (0..2 * d).map(|_| next()).collect();
                let nx = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                let ny = y.iter().map(|v| v * v).sum::<f64>().sqrt();
                x.iter_mut().for_each(|v| *v /= nx);
                y.iter_mut().for_each(|v| *v /= ny);
                let dot: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
                let z: Complex<f64> = (0..d)
                    .map(|i| Complex::new(x[i], x[i + d]) * Complex::new(y[i], y[i + d]).conj())
                    .sum();
                let lhs = real_q::<T>(2 * d, k).unwrap().eval(dot);
                let rhs: Complex<f64> = (0..=k)
                    .map(|p| complex_q::<T>(d, p, k - p).unwrap().eval(z))
                    .sum();
                assert!((lhs - rhs.re).abs() < 1e-10 * lhs.abs().max(1.0), "d={d} k={k}");
                assert!(rhs.im.abs() < 1e-10);
            }
        }
    }
}
