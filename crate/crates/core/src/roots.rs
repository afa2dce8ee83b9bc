//! Polynomial root finding and interval minimization for the bound
//! certificates.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::poly::RealPolynomial;
use crate::scalar::Scalar;

/// All complex roots of `sum_k coeffs[k] z^k` by Durand–Kerner iteration
/// with deterministic initial guesses, followed by a Newton polish.
///
/// The certificate polynomials this serves are low degree with simple,
/// well-separated roots.
pub fn complex_roots<T: Scalar>(coeffs: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
    let mut c: Vec<Complex<T>> = coeffs.to_vec();
    while c.len() > 1 && c.last().unwrap().norm() == T::zero() {
        c.pop();
    }
    if c.len() <= 1 {
        return Ok(Vec::new());
    }
    let n = c.len() - 1;
    let lead = *c.last().unwrap();
    let monic: Vec<Complex<T>> = c.iter().map(|&x| x / lead).collect();
    // Cauchy-style radius bound
    let radius = T::one()
        + monic
            .iter()
            .take(n)
            .map(|x| x.norm())
            .fold(T::zero(), |a, b| if b > a { b } else { a });
    let eval = |z: Complex<T>| -> Complex<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for &ck in monic.iter().rev() {
            acc = acc * z + ck;
        }
        acc
    };
    // staggered initial guesses on a circle, angle offset to dodge symmetry
    let mut roots: Vec<Complex<T>> = (0..n)
        .map(|i| {
            let theta =
                T::of(2.0) * T::PI() * T::of_usize(i) / T::of_usize(n) + T::of(0.3964);
            Complex::from_polar(radius * T::of(0.8), theta)
        })
        .collect();
    let tol = T::epsilon() * T::of(64.0) * radius;
    let mut converged = false;
    for _ in 0..600 {
        let mut max_step = T::zero();
        for i in 0..n {
            let mut denom = Complex::new(T::one(), T::zero());
            for j in 0..n {
                if j != i {
                    denom = denom * (roots[i] - roots[j]);
                }
            }
            if denom.norm() == T::zero() {
                // coincident iterates: nudge deterministically
                roots[i] = roots[i] + Complex::new(tol + tol, tol);
                continue;
            }
            let step = eval(roots[i]) / denom;
            roots[i] = roots[i] - step;
            if step.norm() > max_step {
                max_step = step.norm();
            }
        }
        if max_step <= tol {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Invalid("root iteration failed to converge".into()));
    }
    // Newton polish against the original (non-monic) polynomial
    let deriv: Vec<Complex<T>> = c
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &x)| x.scale(T::of_usize(k)))
        .collect();
    let eval_c = |cs: &[Complex<T>], z: Complex<T>| -> Complex<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for &ck in cs.iter().rev() {
            acc = acc * z + ck;
        }
        acc
    };
    for r in &mut roots {
        for _ in 0..3 {
            let dp = eval_c(&deriv, *r);
            if dp.norm() == T::zero() {
                break;
            }
            *r = *r - eval_c(&c, *r) / dp;
        }
    }
    roots.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
    Ok(roots)
}

/// Real roots of a real polynomial inside `[lo, hi]`, deduplicated.
pub fn real_roots_in_interval<T: Scalar>(
    poly: &RealPolynomial<T>,
    lo: T,
    hi: T,
    tol: T,
) -> Result<Vec<T>> {
    let coeffs: Vec<Complex<T>> = poly
        .coeffs()
        .iter()
        .map(|&x| Complex::new(x, T::zero()))
        .collect();
    let all = complex_roots(&coeffs)?;
    let scale = T::one()
        + poly
            .coeffs()
            .iter()
            .map(|x| x.abs())
            .fold(T::zero(), |a, b| if b > a { b } else { a });
    let mut out: Vec<T> = Vec::new();
    for r in all {
        if r.im.abs() > T::of(1e-7) * scale {
            continue;
        }
        let x = r.re;
        if x < lo - tol || x > hi + tol {
            continue;
        }
        let x = if x < lo {
            lo
        } else if x > hi {
            hi
        } else {
            x
        };
        if !out.iter().any(|&y| (y - x).abs() <= tol) {
            out.push(x);
        }
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(out)
}

/// Minimum of a polynomial on `[lo, hi]` by dense sampling plus a local
/// Newton polish on the derivative.
pub fn min_on_interval<T: Scalar>(poly: &RealPolynomial<T>, lo: T, hi: T) -> (T, T) {
    let samples = 2001usize;
    let mut best_x = lo;
    let mut best_v = poly.eval(lo);
    for i in 0..samples {
        let x = lo + (hi - lo) * T::of_usize(i) / T::of_usize(samples - 1);
        let v = poly.eval(x);
        if v < best_v {
            best_v = v;
            best_x = x;
        }
    }
    let d1 = poly.derivative();
    let d2 = d1.derivative();
    let mut x = best_x;
    for _ in 0..40 {
        let g = d1.eval(x);
        let h = d2.eval(x);
        if h <= T::zero() || g.abs() < T::epsilon() {
            break;
        }
        let step = g / h;
        let nx = x - step;
        if nx < lo || nx > hi {
            break;
        }
        x = nx;
        if step.abs() < T::epsilon() * (T::one() + x.abs()) {
            break;
        }
    }
    let v = poly.eval(x);
    if v < best_v {
        (x, v)
    } else {
        (best_x, best_v)
    }
}
