//! Gauss–Jacobi quadrature and the Gegenbauer/disk inner products.
//!
//! Nodes and weights come from the Golub–Welsch algorithm: eigenvalues and
//! first eigenvector components of the symmetric Jacobi matrix, computed by
//! the classical implicit-QL iteration for symmetric tridiagonal matrices.
//! Weights are normalized to sum to one, so every inner product below is
//! against a probability measure and `<1,1> = 1` holds exactly.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::poly::{BivariatePoly, RealPolynomial};
use crate::scalar::Scalar;

/// Largest integrand degree the rules will serve.
pub const MAX_QUAD_DEGREE: usize = 160;

/// A Gauss–Jacobi rule for the weight `(1-x)^alpha (1+x)^beta` on `[-1,1]`,
/// with weights normalized to sum to one.
#[derive(Clone, Debug)]
pub struct GaussJacobi<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Scalar> GaussJacobi<T> {
    pub fn new(n: usize, alpha: T, beta: T) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("quadrature needs at least one node".into()));
        }
        let neg_one = -T::one();
        if alpha <= neg_one || beta <= neg_one {
            return Err(Error::Invalid("Jacobi parameters must exceed -1".into()));
        }
        let two = T::of(2.0);
        let four = T::of(4.0);
        let mut diag = vec![T::zero(); n];
        let mut off = vec![T::zero(); n];
        diag[0] = (beta - alpha) / (alpha + beta + two);
        for i in 1..n {
            let fi = T::of_usize(i);
            let s = two * fi + alpha + beta;
            diag[i] = (beta * beta - alpha * alpha) / (s * (s + two));
            let num = if i == 1 {
                four * (T::one() + alpha) * (T::one() + beta)
                    / ((s * s) * (s + T::one()))
            } else {
                four * fi * (fi + alpha) * (fi + beta) * (fi + alpha + beta)
                    / ((s * s) * (s + T::one()) * (s - T::one()))
            };
            off[i - 1] = num.sqrt();
        }
        let mut first = vec![T::zero(); n];
        first[0] = T::one();
        imtqlx(&mut diag, &mut off, &mut first)?;
        let mut weights: Vec<T> = first.iter().map(|&z| z * z).collect();
        let total: T = weights.iter().copied().sum();
        for w in &mut weights {
            *w = *w / total;
        }
        Ok(Self { nodes: diag, weights })
    }

    pub fn integrate(&self, f: impl Fn(T) -> T) -> T {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Implicit-QL diagonalization of a symmetric tridiagonal matrix.
///
/// `d` holds the diagonal and `e` the subdiagonal (`e[n-1]` is scratch).
/// `z` is transformed alongside: seeded with `(1,0,...,0)` it ends up as the
/// first component of each eigenvector, which is what Golub–Welsch needs.
/// On return `d` is sorted ascending with `z` permuted to match.
fn imtqlx<T: Scalar>(d: &mut [T], e: &mut [T], z: &mut [T]) -> Result<()> {
    let n = d.len();
    if n == 1 {
        return Ok(());
    }
    let prec = T::epsilon();
    e[n - 1] = T::zero();
    let max_iter = 50;

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                if e[m].abs() <= prec * (d[m].abs() + d[m + 1].abs()) {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            if iter >= max_iter {
                return Err(Error::Invalid("eigenvalue iteration failed to converge".into()));
            }
            iter += 1;

            let mut g = (d[l + 1] - d[l]) / (T::of(2.0) * e[l]);
            let mut r = (g * g + T::one()).sqrt();
            let sign_r = if g >= T::zero() { r.abs() } else { -r.abs() };
            g = d[m] - d[l] + e[l] / (g + sign_r);
            let mut s = T::one();
            let mut c = T::one();
            let mut p = T::zero();

            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                if g.abs() <= f.abs() {
                    c = g / f;
                    r = (c * c + T::one()).sqrt();
                    e[i + 1] = f * r;
                    s = T::one() / r;
                    c = c * s;
                } else {
                    s = f / g;
                    r = (s * s + T::one()).sqrt();
                    e[i + 1] = g * r;
                    c = T::one() / r;
                    s = s * c;
                }
                g = d[i + 1] - p;
                r = (d[i] - g) * s + T::of(2.0) * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            d[l] = d[l] - p;
            e[l] = g;
            e[m] = T::zero();
        }
    }

    // selection sort, permuting z alongside
    for i in 0..n {
        let mut k = i;
        for j in (i + 1)..n {
            if d[j] < d[k] {
                k = j;
            }
        }
        if k != i {
            d.swap(i, k);
            z.swap(i, k);
        }
    }
    Ok(())
}

fn check_quad_degree(deg: usize) -> Result<()> {
    if deg > MAX_QUAD_DEGREE {
        return Err(Error::QuadratureDegreeExceeded(deg, MAX_QUAD_DEGREE));
    }
    Ok(())
}

/// Rule for the Gegenbauer weight `(1-x^2)^((d-3)/2)` exact up to integrand
/// degree `deg`, normalized to a probability measure.
pub fn gegenbauer_rule<T: Scalar>(d: usize, deg: usize) -> Result<GaussJacobi<T>> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d, "Gegenbauer weight needs d >= 2"));
    }
    check_quad_degree(deg)?;
    let exp = (T::of_usize(d) - T::of(3.0)) / T::of(2.0);
    GaussJacobi::new(deg / 2 + 8, exp, exp)
}

/// `<f,g>_geg`: normalized Gegenbauer inner product on `[-1,1]` for the
/// sphere of `R^d`.
pub fn geg_inner_real<T: Scalar>(
    f: &RealPolynomial<T>,
    g: &RealPolynomial<T>,
    d: usize,
) -> Result<T> {
    let rule = gegenbauer_rule::<T>(d, f.degree() + g.degree())?;
    Ok(rule.integrate(|x| f.eval(x) * g.eval(x)))
}

/// The disk grid: radial Gauss–Jacobi nodes in `u = 2r^2 - 1` tensored with
/// equispaced angles, normalized as a probability measure on the disk.
pub struct DiskRule<T> {
    pub radii: Vec<T>,
    pub radial_weights: Vec<T>,
    pub angles: usize,
}

impl<T: Scalar> DiskRule<T> {
    /// Exact for integrands of total degree `deg` in `(z, conj z)`.
    pub fn new(d: usize, deg: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::DimensionTooSmall(
                d,
                "disk quadrature needs d >= 2; use the circle inner product for d = 1",
            ));
        }
        check_quad_degree(deg)?;
        // Weight (1-|z|^2)^(d-2) dA becomes, after u = 2r^2 - 1, the Jacobi
        // weight (1-u)^(d-2) up to constants absorbed by normalization.
        let radial = GaussJacobi::new(deg / 2 + 8, T::of_usize(d) - T::of(2.0), T::zero())?;
        let radii = radial
            .nodes
            .iter()
            .map(|&u| ((T::one() + u) / T::of(2.0)).sqrt())
            .collect();
        Ok(Self { radii, radial_weights: radial.weights, angles: 2 * deg + 4 })
    }

    pub fn integrate(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> Complex<T> {
        let n_ang = T::of_usize(self.angles);
        let mut total = Complex::new(T::zero(), T::zero());
        for (&r, &w) in self.radii.iter().zip(&self.radial_weights) {
            let mut ring = Complex::new(T::zero(), T::zero());
            for a in 0..self.angles {
                let theta = T::of(2.0) * T::PI() * T::of_usize(a) / n_ang;
                let z = Complex::from_polar(r, theta);
                ring = ring + f(z);
            }
            total = total + ring.scale(w / n_ang);
        }
        total
    }
}

/// `<f,g>_{D,d}`: normalized inner product on the unit disk for the complex
/// sphere of `C^d` (`d >= 2`).
pub fn geg_inner_complex<T: Scalar>(
    f: &BivariatePoly<T>,
    g: &BivariatePoly<T>,
    d: usize,
) -> Result<Complex<T>> {
    let deg = f.total_degree() + g.total_degree();
    let rule = DiskRule::new(d, deg)?;
    Ok(rule.integrate(|z| f.eval(z) * g.eval(z).conj()))
}

/// Circle average `(1/2pi) int f(e^it) conj(g(e^it)) dt`, the `d = 1` inner
/// product.
pub fn circle_inner<T: Scalar>(
    f: &BivariatePoly<T>,
    g: &BivariatePoly<T>,
) -> Complex<T> {
    let deg = f.total_degree() + g.total_degree();
    let n = 2 * deg + 4;
    let mut total = Complex::new(T::zero(), T::zero());
    for a in 0..n {
        let theta = T::of(2.0) * T::PI() * T::of_usize(a) / T::of_usize(n);
        let z = Complex::from_polar(T::one(), theta);
        total = total + f.eval(z) * g.eval(z).conj();
    }
    total.scale(T::one() / T::of_usize(n))
}
