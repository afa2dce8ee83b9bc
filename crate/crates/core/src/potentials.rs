//! Moment constants, potential construction, and evaluation of
//! `A_{F,w}(Phi) = sum_{j,k} w_j w_k F(<v_j,v_k>)` on Gramians.

use num_complex::Complex;

use crate::config::{pow_u32, AngleSet, Configuration, Field, Gramian};
use crate::error::{Error, Result};
use crate::gegenbauer::{
    monomial_expansion_complex, real_q, ComplexExpansion, GegExpansion, RealExpansion, COEFF_TOL,
};
use crate::indices::{IndexSet, PqIndex};
use crate::poly::{BivariatePoly, MonomialPoly, RealPolynomial};
use crate::scalar::{KahanSum, Scalar};

/// `b_m(R^d) = 1*3*5*...*(m-1) / (d(d+2)...(d+m-2))`, zero for odd `m`.
pub fn moment_real<T: Scalar>(d: usize, m: u32) -> Result<T> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d, "real moments need d >= 2"));
    }
    if m % 2 == 1 {
        return Ok(T::zero());
    }
    let mut acc = T::one();
    for i in (1..m).step_by(2) {
        acc = acc * T::of_u32(i);
    }
    for i in (0..m).step_by(2) {
        acc = acc / (T::of_usize(d) + T::of_u32(i));
    }
    Ok(acc)
}

/// `b_{p,q}(C^d)`: zero for `p != q`, else `(d-1)! p! / (d-1+p)! = 1/C(d-1+p, p)`.
pub fn moment_complex<T: Scalar>(d: usize, p: u32, q: u32) -> Result<T> {
    if d < 1 {
        return Err(Error::DimensionTooSmall(d, "complex moments need d >= 1"));
    }
    if p != q {
        return Ok(T::zero());
    }
    let mut acc = T::one();
    for i in 1..=p {
        acc = acc * T::of_u32(i) / (T::of_usize(d) - T::one() + T::of_u32(i));
    }
    Ok(acc)
}

/// How a potential was built.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Canonical,
    MonomialHalf,
    HomPq,
    HomMComplex,
    Custom,
}

/// The monomial-form potential families of the weighted theory.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonomialFamily {
    /// `F(x) = x^m - b_m(R^d)`, a potential for real `Hom_m`.
    HalfDesign { m: u32 },
    /// `F(z) = z^p conj(z)^q - b_pq(C^d)`, a potential for `Hom(p,q)`.
    HomPq { p: u32, q: u32 },
    /// `F(z) = 2^m Re(z)^m - 2^m b_m(R^{2d})`, a potential for `Hom_m(C^d)`.
    HomComplex { m: u32 },
}

/// A univariate polynomial with nonnegative Gegenbauer coefficients, stored
/// in the Q basis (source of truth) together with its monomial view.
#[derive(Clone, Debug)]
pub struct Potential<T> {
    expansion: GegExpansion<T>,
    monomial: MonomialPoly<T>,
    b0: T,
    provenance: Provenance,
}

impl<T: Scalar> Potential<T> {
    /// Canonical potential: coefficient one on every nonconstant index. For
    /// the complex field the index set is first closed to `tau*`, so equal
    /// design classes get equal canonical potentials.
    pub fn canonical(d: usize, indices: &IndexSet) -> Result<Self> {
        let expansion = match indices {
            IndexSet::Real(set) => {
                let mut e = RealExpansion::new(d);
                for k in set.members().filter(|&k| k > 0) {
                    e.add(k, T::one());
                }
                if e.iter().count() == 0 {
                    return Err(Error::EmptyIndexSet);
                }
                GegExpansion::Real(e)
            }
            IndexSet::Complex(set) => {
                let star = set.tau_star();
                let mut e = ComplexExpansion::new(d);
                for idx in star.members().filter(|i| i.total() > 0) {
                    e.add(idx, Complex::new(T::one(), T::zero()));
                }
                if e.iter().count() == 0 {
                    return Err(Error::EmptyIndexSet);
                }
                GegExpansion::Complex(e)
            }
        };
        let monomial = expansion.to_monomial()?;
        Ok(Self { expansion, monomial, b0: T::zero(), provenance: Provenance::Canonical })
    }

    /// Monomial-form potential of one of the weighted families, stored with
    /// its exact Gegenbauer expansion.
    pub fn monomial_family(d: usize, family: MonomialFamily) -> Result<Self> {
        match family {
            MonomialFamily::HalfDesign { m } => {
                if m == 0 {
                    return Err(Error::EmptyIndexSet);
                }
                let bm = moment_real::<T>(d, m)?;
                // closed-form expansion of x^m - b_m on Q_m, Q_{m-2}, ...
                // with prefactor m! / (d(d+2)...(d+2m-2))
                let mut pref = factorial_as_scalar::<T>(m);
                for i in 0..m {
                    pref = pref / (T::of_usize(d) + T::of(2.0) * T::of_u32(i));
                }
                let mut e = RealExpansion::new(d);
                let mut c_a = T::one(); // c_{m,0}
                let mut a = 0u32;
                loop {
                    if 2 * a + 1 > m {
                        break;
                    }
                    e.add(m - 2 * a, pref * c_a);
                    a += 1;
                    if 2 * a + 1 > m {
                        break;
                    }
                    // c_{m,a} = c_{m,a-1} * (d + 2(m-a)) / (2a)
                    c_a = c_a * (T::of_usize(d) + T::of(2.0) * T::of_u32(m - a))
                        / (T::of(2.0) * T::of_u32(a));
                }
                let mut mono = vec![T::zero(); m as usize + 1];
                mono[m as usize] = T::one();
                mono[0] = -bm;
                Ok(Self {
                    expansion: GegExpansion::Real(e),
                    monomial: MonomialPoly::Real(RealPolynomial::new(mono)),
                    b0: T::zero(),
                    provenance: Provenance::MonomialHalf,
                })
            }
            MonomialFamily::HomPq { p, q } => {
                if p + q == 0 {
                    return Err(Error::EmptyIndexSet);
                }
                let bpq = moment_complex::<T>(d, p, q)?;
                let mut e = monomial_expansion_complex::<T>(d, p, q);
                e.add(PqIndex::new(0, 0), Complex::new(-bpq, T::zero()));
                let mut mono = BivariatePoly::monomial(p as usize, q as usize)?;
                mono = mono.sub(&BivariatePoly::constant(Complex::new(bpq, T::zero())));
                Ok(Self {
                    expansion: GegExpansion::Complex(e),
                    monomial: MonomialPoly::Complex(mono),
                    b0: T::zero(),
                    provenance: Provenance::HomPq,
                })
            }
            MonomialFamily::HomComplex { m } => {
                if m == 0 {
                    return Err(Error::EmptyIndexSet);
                }
                let b = pow_u32(T::of(2.0), m) * moment_real::<T>(2 * d, m)?;
                let mut e = ComplexExpansion::new(d);
                let mut mono = BivariatePoly::zero();
                for j in 0..=m {
                    let c = binom_as_scalar::<T>(m, j);
                    let term = monomial_expansion_complex::<T>(d, j, m - j).scale(Complex::new(c, T::zero()));
                    for (idx, v) in term.iter() {
                        e.add(idx, v);
                    }
                    mono = mono.add(
                        &BivariatePoly::monomial(j as usize, (m - j) as usize)?
                            .scale(Complex::new(c, T::zero())),
                    );
                }
                e.add(PqIndex::new(0, 0), Complex::new(-b, T::zero()));
                mono = mono.sub(&BivariatePoly::constant(Complex::new(b, T::zero())));
                Ok(Self {
                    expansion: GegExpansion::Complex(e),
                    monomial: MonomialPoly::Complex(mono),
                    b0: T::zero(),
                    provenance: Provenance::HomMComplex,
                })
            }
        }
    }

    /// Wraps a caller-supplied expansion.
    pub fn custom(expansion: GegExpansion<T>) -> Result<Self> {
        let monomial = expansion.to_monomial()?;
        Ok(Self { expansion, monomial, b0: T::zero(), provenance: Provenance::Custom })
    }

    /// Adds a constant offset ("potential with constant"); shifts the value
    /// and the floor equally, never the minimizers.
    pub fn with_constant(mut self, b0: T) -> Self {
        self.b0 = b0;
        self
    }

    pub fn expansion(&self) -> &GegExpansion<T> {
        &self.expansion
    }

    pub fn monomial(&self) -> &MonomialPoly<T> {
        &self.monomial
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn is_potential(&self) -> bool {
        self.expansion.is_potential(T::of(COEFF_TOL))
    }

    /// The guaranteed lower bound `f_0 + b_0` of the evaluation.
    pub fn floor(&self) -> T {
        self.expansion.constant_term() + self.b0
    }

    pub fn b0(&self) -> T {
        self.b0
    }
}

/// Result of evaluating a potential on a Gramian.
#[derive(Clone, Copy, Debug)]
pub struct PotentialValue<T> {
    /// `A_{F,w}(Phi) + b_0`.
    pub value: T,
    /// The floor `f_0 + b_0`.
    pub floor: T,
    /// `value - floor`; nonnegative (within tolerance) for potentials.
    pub residual: T,
}

fn factorial_as_scalar<T: Scalar>(m: u32) -> T {
    (1..=m).fold(T::one(), |acc, i| acc * T::of_u32(i))
}

fn binom_as_scalar<T: Scalar>(n: u32, k: u32) -> T {
    let k = k.min(n - k);
    let mut acc = T::one();
    for i in 1..=k {
        acc = acc * T::of_u32(n - k + i) / T::of_u32(i);
    }
    acc
}

/// Compensated double sum `sum_{j,k} w_j w_k F(G_jk)`, returned with its
/// (diagnostic) imaginary part.
pub fn weighted_sum<T: Scalar>(
    poly: &MonomialPoly<T>,
    gram: &Gramian<T>,
    weights: &[T],
) -> Result<Complex<T>> {
    let n = gram.n();
    if weights.len() != n {
        return Err(Error::Invalid(format!("{} weights for {n} vectors", weights.len())));
    }
    let mut re = KahanSum::new();
    let mut im = KahanSum::new();
    for j in 0..n {
        for k in 0..n {
            let v = poly.eval(gram.get(j, k));
            let w = weights[j] * weights[k];
            re.add(w * v.re);
            im.add(w * v.im);
        }
    }
    Ok(Complex::new(re.value(), im.value()))
}

/// Evaluates `A_{F,w}` on a Gramian. The complex conjugate-pair structure of
/// Hermitian Gramians makes the sum real; the imaginary part is discarded
/// after the compensated summation (tests assert it is negligible).
pub fn evaluate<T: Scalar>(
    potential: &Potential<T>,
    gram: &Gramian<T>,
    weights: &[T],
) -> Result<PotentialValue<T>> {
    let total = weighted_sum(potential.monomial(), gram, weights)?;
    let value = total.re + potential.b0();
    let floor = potential.floor();
    Ok(PotentialValue { value, floor, residual: value - floor })
}

/// The angle-multiset form of the same sum, `F(1) sum_j w_j^2 +
/// sum_alpha m_{w,alpha} F(alpha)`, valid for unit-norm configurations.
pub fn angle_form_value<T: Scalar>(poly: &MonomialPoly<T>, angles: &AngleSet<T>) -> T {
    let mut acc = KahanSum::new();
    acc.add(poly.eval_at_one().re * angles.diagonal_weight);
    for (a, &m) in angles.angles.iter().zip(&angles.weighted) {
        acc.add(m * poly.eval(*a).re);
    }
    acc.value()
}

/// The weighted monomial inequalities, evaluated on unnormalized vectors
/// (the m-weights are implicit in the homogeneity of both sides).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightedForm {
    /// `sum <v_j,v_k>^m >= b_m(R^d) (sum |v|^m)^2`.
    HalfDesign { m: u32 },
    /// `sum |v_j||v_k| <v_j,v_k>^{m-1} >= b_{m-1}(R^d) (sum |v|^m)^2`.
    TDesignSecond { m: u32 },
    /// `sum <v_j,v_k>^p conj<v_j,v_k>^q >= b_pq(C^d) (sum |v|^{p+q})^2`.
    HomPq { p: u32, q: u32 },
    /// `sum Re(<v_j,v_k>)^m >= b_m(R^{2d}) (sum |v|^m)^2`.
    HomComplex { m: u32 },
}

/// Returns LHS, RHS and their difference for the requested inequality.
pub fn evaluate_weighted_monomial<T: Scalar>(
    config: &Configuration<T>,
    form: WeightedForm,
) -> Result<PotentialValue<T>> {
    let norms = config.norms();
    if norms.iter().all(|n| n.is_zero()) {
        return Err(Error::AllZeroVectors);
    }
    let gram = config.gramian();
    let n = gram.n();
    let d = config.dimension();
    let weight_order = match form {
        WeightedForm::HalfDesign { m } | WeightedForm::TDesignSecond { m } => m,
        WeightedForm::HomPq { p, q } => p + q,
        WeightedForm::HomComplex { m } => m,
    };
    let norm_sum: T = norms.iter().map(|&x| pow_u32(x, weight_order)).sum();
    let rhs = match form {
        WeightedForm::HalfDesign { m } => moment_real::<T>(d, m)?,
        WeightedForm::TDesignSecond { m } => moment_real::<T>(d, m - 1)?,
        WeightedForm::HomPq { p, q } => {
            if config.field() != Field::Complex {
                return Err(Error::Invalid("Hom(p,q) forms need a complex configuration".into()));
            }
            moment_complex::<T>(d, p, q)?
        }
        WeightedForm::HomComplex { m } => {
            if config.field() != Field::Complex {
                return Err(Error::Invalid("Hom_m(C^d) forms need a complex configuration".into()));
            }
            moment_real::<T>(2 * d, m)?
        }
    } * norm_sum
        * norm_sum;
    let mut lhs = KahanSum::new();
    for j in 0..n {
        for k in 0..n {
            let z = gram.get(j, k);
            let term = match form {
                WeightedForm::HalfDesign { m } => z.powu(m).re,
                WeightedForm::TDesignSecond { m } => (z.powu(m - 1) * (norms[j] * norms[k])).re,
                WeightedForm::HomPq { p, q } => (z.powu(p) * z.conj().powu(q)).re,
                WeightedForm::HomComplex { m } => pow_u32(z.re, m),
            };
            lhs.add(term);
        }
    }
    let value = lhs.value();
    Ok(PotentialValue { value, floor: rhs, residual: value - rhs })
}

/// Splits a real-coefficient expansion into `f_0 + F^+ - F^-` where both
/// parts have nonnegative coefficients and no constant term.
pub fn decompose<T: Scalar>(
    expansion: &GegExpansion<T>,
) -> Result<(T, GegExpansion<T>, GegExpansion<T>)> {
    match expansion {
        GegExpansion::Real(e) => {
            let mut plus = RealExpansion::new(e.dimension());
            let mut minus = RealExpansion::new(e.dimension());
            for (k, c) in e.iter() {
                if k == 0 {
                    continue;
                }
                if c > T::zero() {
                    plus.add(k, c);
                } else {
                    minus.add(k, -c);
                }
            }
            Ok((e.constant_term(), GegExpansion::Real(plus), GegExpansion::Real(minus)))
        }
        GegExpansion::Complex(e) => {
            let tol = T::of(COEFF_TOL);
            let mut plus = ComplexExpansion::new(e.dimension());
            let mut minus = ComplexExpansion::new(e.dimension());
            for (idx, c) in e.iter() {
                if c.im.abs() > tol {
                    return Err(Error::ComplexCoefficients);
                }
                if idx.total() == 0 {
                    continue;
                }
                if c.re > T::zero() {
                    plus.add(idx, Complex::new(c.re, T::zero()));
                } else {
                    minus.add(idx, Complex::new(-c.re, T::zero()));
                }
            }
            Ok((e.constant_term().re, GegExpansion::Complex(plus), GegExpansion::Complex(minus)))
        }
    }
}

/// Off-diagonal sum `sum_{j != k} F(<v_j,v_k>)`; no weights.
pub fn pair_energy<T: Scalar>(config: &Configuration<T>, poly: &MonomialPoly<T>) -> Result<T> {
    config.require_unit_norm(T::epsilon().sqrt())?;
    let gram = config.gramian();
    let n = gram.n();
    let mut acc = KahanSum::new();
    for j in 0..n {
        for k in 0..n {
            if j != k {
                acc.add(poly.eval(gram.get(j, k)).re);
            }
        }
    }
    Ok(acc.value())
}

/// Builds the canonical single-index potential `Q_k` (real field).
pub fn single_index_real<T: Scalar>(d: usize, k: u32) -> Result<Potential<T>> {
    let mut e = RealExpansion::new(d);
    e.add(k, T::one());
    Potential::custom(GegExpansion::Real(e))
}

/// Builds the canonical single-index potential `Q_pq` (complex field).
pub fn single_index_complex<T: Scalar>(d: usize, p: u32, q: u32) -> Result<Potential<T>> {
    let mut e = ComplexExpansion::new(d);
    e.add(PqIndex::new(p, q), Complex::new(T::one(), T::zero()));
    Potential::custom(GegExpansion::Complex(e))
}

/// Convenience: `Q_k` as a monomial polynomial for quick evaluation.
pub fn q_poly_real<T: Scalar>(d: usize, k: u32) -> Result<RealPolynomial<T>> {
    real_q(d, k)
}
