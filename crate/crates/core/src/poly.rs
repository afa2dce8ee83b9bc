//! Monomial-basis polynomials: univariate in `x` and bivariate in `(z, conj z)`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Hard cap on monomial degrees; storage is dense and coefficients are built
/// from factorial ratios that lose accuracy well past this point.
pub const MAX_DEGREE: usize = 40;

pub(crate) fn check_degree(deg: usize) -> Result<()> {
    if deg > MAX_DEGREE {
        return Err(Error::DegreeTooLarge(deg, MAX_DEGREE));
    }
    Ok(())
}

/// Univariate polynomial `sum_k c_k x^k` with scalar coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct RealPolynomial<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> RealPolynomial<T> {
    /// Builds from coefficients `c_0, c_1, ...` (low degree first).
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(T::zero());
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: vec![T::zero()] }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![T::zero(); k + 1];
        coeffs[k] = T::one();
        Self { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).copied().unwrap_or_else(T::zero)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Horner evaluation.
    pub fn eval(&self, x: T) -> T {
        let mut acc = T::zero();
        for &c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_complex(&self, z: Complex<T>) -> Complex<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + Complex::new(c, T::zero());
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * T::of_usize(k))
            .collect();
        Self::new(coeffs)
    }

    pub fn scale(&self, s: T) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + other.coeff(k)).collect();
        Self::new(coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-T::one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![T::zero(); self.degree() + other.degree() + 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j] + a * b;
            }
        }
        Self::new(coeffs)
    }

    /// Composition with `a*x + b` (affine substitution).
    pub fn compose_affine(&self, a: T, b: T) -> Self {
        let mut acc = Self::zero();
        let lin = Self::new(vec![b, a]);
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&Self::constant(c));
        }
        acc
    }

    /// Substitutes `x -> x^2` (degree doubles).
    pub fn compose_square(&self) -> Self {
        let mut coeffs = vec![T::zero(); 2 * self.degree() + 1];
        for (k, &c) in self.coeffs.iter().enumerate() {
            coeffs[2 * k] = c;
        }
        Self::new(coeffs)
    }
}

/// Bivariate polynomial `sum_{p,q} c_{pq} z^p conj(z)^q` stored as a dense
/// `(p_max+1) x (q_max+1)` table of complex coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct BivariatePoly<T> {
    rows: usize, // powers of z: 0..rows
    cols: usize, // powers of conj(z): 0..cols
    coeffs: Vec<Complex<T>>,
}

impl<T: Scalar> BivariatePoly<T> {
    pub fn zero() -> Self {
        Self { rows: 1, cols: 1, coeffs: vec![Complex::new(T::zero(), T::zero())] }
    }

    pub fn constant(c: Complex<T>) -> Self {
        Self { rows: 1, cols: 1, coeffs: vec![c] }
    }

    /// `z^p conj(z)^q`.
    pub fn monomial(p: usize, q: usize) -> Result<Self> {
        check_degree(p + q)?;
        let mut out = Self::with_shape(p + 1, q + 1);
        out.set(p, q, Complex::new(T::one(), T::zero()));
        Ok(out)
    }

    pub fn with_shape(rows: usize, cols: usize) -> Self {
        Self { rows, cols, coeffs: vec![Complex::new(T::zero(), T::zero()); rows * cols] }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (usize, usize, Complex<T>)>) -> Result<Self> {
        let terms: Vec<_> = terms.into_iter().collect();
        let rows = terms.iter().map(|t| t.0).max().unwrap_or(0) + 1;
        let cols = terms.iter().map(|t| t.1).max().unwrap_or(0) + 1;
        check_degree(rows + cols - 2)?;
        let mut out = Self::with_shape(rows, cols);
        for (p, q, c) in terms {
            let cur = out.get(p, q);
            out.set(p, q, cur + c);
        }
        Ok(out)
    }

    pub fn get(&self, p: usize, q: usize) -> Complex<T> {
        if p < self.rows && q < self.cols {
            self.coeffs[p * self.cols + q]
        } else {
            Complex::new(T::zero(), T::zero())
        }
    }

    pub fn set(&mut self, p: usize, q: usize, c: Complex<T>) {
        assert!(p < self.rows && q < self.cols);
        self.coeffs[p * self.cols + q] = c;
    }

    /// Max power of `z` with a nonzero coefficient.
    pub fn degree_z(&self) -> usize {
        for p in (0..self.rows).rev() {
            if (0..self.cols).any(|q| self.get(p, q).norm_sqr() != T::zero()) {
                return p;
            }
        }
        0
    }

    /// Max power of `conj(z)` with a nonzero coefficient.
    pub fn degree_zbar(&self) -> usize {
        for q in (0..self.cols).rev() {
            if (0..self.rows).any(|p| self.get(p, q).norm_sqr() != T::zero()) {
                return q;
            }
        }
        0
    }

    /// Total degree in `(z, conj z)`.
    pub fn total_degree(&self) -> usize {
        let mut deg = 0;
        for p in 0..self.rows {
            for q in 0..self.cols {
                if self.get(p, q).norm_sqr() != T::zero() {
                    deg = deg.max(p + q);
                }
            }
        }
        deg
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.norm_sqr() == T::zero())
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, Complex<T>)> + '_ {
        (0..self.rows).flat_map(move |p| {
            (0..self.cols).filter_map(move |q| {
                let c = self.get(p, q);
                (c.norm_sqr() != T::zero()).then_some((p, q, c))
            })
        })
    }

    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        // Horner in z with inner Horner in conj(z).
        let zb = z.conj();
        let mut acc = Complex::new(T::zero(), T::zero());
        for p in (0..self.rows).rev() {
            let mut row = Complex::new(T::zero(), T::zero());
            for q in (0..self.cols).rev() {
                row = row * zb + self.coeffs[p * self.cols + q];
            }
            acc = acc * z + row;
        }
        acc
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        let mut out = self.clone();
        for c in &mut out.coeffs {
            *c = *c * s;
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let rows = self.rows.max(other.rows);
        let cols = self.cols.max(other.cols);
        let mut out = Self::with_shape(rows, cols);
        for p in 0..rows {
            for q in 0..cols {
                out.set(p, q, self.get(p, q) + other.get(p, q));
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex::new(-T::one(), T::zero())))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let rows = self.rows + other.rows - 1;
        let cols = self.cols + other.cols - 1;
        check_degree(rows + cols - 2)?;
        let mut out = Self::with_shape(rows, cols);
        for (p1, q1, c1) in self.terms() {
            for (p2, q2, c2) in other.terms() {
                let cur = out.get(p1 + p2, q1 + q2);
                out.set(p1 + p2, q1 + q2, cur + c1 * c2);
            }
        }
        Ok(out)
    }

    /// Complex conjugate as a polynomial: `conj(F)(z) = F(conj z)`, which
    /// swaps the roles of `z` and `conj(z)` and conjugates coefficients.
    pub fn conj(&self) -> Self {
        let mut out = Self::with_shape(self.cols, self.rows);
        for (p, q, c) in self.terms() {
            out.set(q, p, c.conj());
        }
        out
    }

    /// Partial derivative with respect to `z`.
    pub fn derivative_z(&self) -> Self {
        if self.rows <= 1 {
            return Self::zero();
        }
        let mut out = Self::with_shape(self.rows - 1, self.cols);
        for (p, q, c) in self.terms() {
            if p > 0 {
                out.set(p - 1, q, c * T::of_usize(p));
            }
        }
        out
    }

    /// Partial derivative with respect to `conj(z)`.
    pub fn derivative_zbar(&self) -> Self {
        if self.cols <= 1 {
            return Self::zero();
        }
        let mut out = Self::with_shape(self.rows, self.cols - 1);
        for (p, q, c) in self.terms() {
            if q > 0 {
                out.set(p, q - 1, c * T::of_usize(q));
            }
        }
        out
    }

    /// True when every coefficient has negligible imaginary part.
    pub fn is_real(&self, tol: T) -> bool {
        self.coeffs.iter().all(|c| c.im.abs() <= tol)
    }

    /// If `F(z) = z^eps g(|z|^2)` (or its conjugate, `conj(z)^eps g`),
    /// returns `(eps, g)`: the structure of projective polynomials, whose
    /// terms all lie on one diagonal `p - q = +/- eps`.
    pub fn projective_form(&self, tol: T) -> Option<(usize, RealPolynomial<T>)> {
        let mut diff: Option<isize> = None;
        for (p, q, c) in self.terms() {
            if c.norm() <= tol {
                continue;
            }
            let d = p as isize - q as isize;
            match diff {
                None => diff = Some(d),
                Some(e) if e == d => {}
                _ => return None,
            }
        }
        let diff = diff.unwrap_or(0);
        let eps = diff.unsigned_abs();
        // coefficients of g along the diagonal, indexed by min(p, q)
        let mut coeffs = vec![T::zero(); self.rows.max(self.cols)];
        for (p, q, c) in self.terms() {
            if p as isize - q as isize == diff {
                coeffs[p.min(q)] = c.re;
            }
        }
        Some((eps, RealPolynomial::new(coeffs)))
    }

    /// If `F` only involves powers of `z` (holomorphic), returns the
    /// univariate complex coefficient list.
    pub fn holomorphic_form(&self, tol: T) -> Option<Vec<Complex<T>>> {
        for (_, q, c) in self.terms() {
            if q > 0 && c.norm() > tol {
                return None;
            }
        }
        Some((0..self.rows).map(|p| self.get(p, 0)).collect())
    }
}

impl<T: Scalar> From<&RealPolynomial<T>> for BivariatePoly<T> {
    /// Views `sum c_k x^k` as a polynomial in `z` alone.
    fn from(p: &RealPolynomial<T>) -> Self {
        let mut out = Self::with_shape(p.degree() + 1, 1);
        for (k, &c) in p.coeffs().iter().enumerate() {
            out.set(k, 0, Complex::new(c, T::zero()));
        }
        out
    }
}

/// A monomial-form polynomial over either scalar field.
#[derive(Clone, Debug)]
pub enum MonomialPoly<T> {
    Real(RealPolynomial<T>),
    Complex(BivariatePoly<T>),
}

impl<T: Scalar> MonomialPoly<T> {
    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        match self {
            MonomialPoly::Real(p) => p.eval_complex(z),
            MonomialPoly::Complex(p) => p.eval(z),
        }
    }

    pub fn eval_at_one(&self) -> Complex<T> {
        self.eval(Complex::new(T::one(), T::zero()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type P = RealPolynomial<f64>;

    #[test]
    fn horner_and_arith() {
        let p = P::new(vec![1.0, -2.0, 3.0]); // 1 - 2x + 3x^2
        assert_eq!(p.eval(2.0), 9.0);
        assert_eq!(p.degree(), 2);
        let q = p.mul(&P::monomial(1));
        assert_eq!(q.coeff(3), 3.0);
        assert_eq!(p.derivative().coeffs(), &[-2.0, 6.0]);
    }

    #[test]
    fn affine_composition() {
        // (2x-1)^2 = 4x^2 - 4x + 1
        let p = P::monomial(2).compose_affine(2.0, -1.0);
        assert_eq!(p.coeffs(), &[1.0, -4.0, 4.0]);
    }

    #[test]
    fn bivariate_eval_and_conj() {
        // F = z^2 conj(z) + 2
        let f = BivariatePoly::<f64>::from_terms([
            (2, 1, num_complex::Complex::new(1.0, 0.0)),
            (0, 0, num_complex::Complex::new(2.0, 0.0)),
        ])
        .unwrap();
        let z = num_complex::Complex::new(0.3, -0.4);
        let want = z * z * z.conj() + 2.0;
        assert!((f.eval(z) - want).norm() < 1e-15);
        // conj(F)(z) = F(conj z)
        assert!((f.conj().eval(z) - f.eval(z.conj())).norm() < 1e-15);
    }

    #[test]
    fn projective_and_holomorphic_forms() {
        // z(|z|^2 - a) = z^2 conj(z) - a z
        let a = 0.25;
        let f = BivariatePoly::<f64>::from_terms([
            (2, 1, num_complex::Complex::new(1.0, 0.0)),
            (1, 0, num_complex::Complex::new(-a, 0.0)),
        ])
        .unwrap();
        let (eps, g) = f.projective_form(0.0).unwrap();
        assert_eq!(eps, 1);
        assert_eq!(g.coeffs(), &[-a, 1.0]);
        assert!(f.holomorphic_form(0.0).is_none());

        let h = BivariatePoly::<f64>::from_terms([
            (1, 0, num_complex::Complex::new(3.0, 0.0)),
            (0, 0, num_complex::Complex::new(1.0, 0.0)),
        ])
        .unwrap();
        assert!(h.holomorphic_form(0.0).is_some());
    }

    #[test]
    fn degree_cap_enforced() {
        assert!(BivariatePoly::<f64>::monomial(30, 20).is_err());
        assert!(BivariatePoly::<f64>::monomial(20, 20).is_ok());
    }
}
