//! Reference configurations used throughout the worked examples.

use num_complex::Complex;

use crate::config::{Configuration, Field};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// The `d+1` vertices of the regular simplex in `R^d`, unit vectors with
/// pairwise inner products `-1/d`.
pub fn simplex<T: Scalar>(d: usize) -> Result<Configuration<T>> {
    if d < 1 {
        return Err(Error::DimensionTooSmall(d, "simplex needs d >= 1"));
    }
    let n = d + 1;
    let target = -T::one() / T::of_usize(d);
    let mut v = vec![vec![T::zero(); d]; n];
    for i in 0..d {
        let head: T = v[i][..i].iter().map(|&x| x * x).sum();
        v[i][i] = (T::one() - head).sqrt();
        for j in (i + 1)..n {
            let dot: T = (0..i).map(|k| v[j][k] * v[i][k]).sum();
            v[j][i] = (target - dot) / v[i][i];
        }
    }
    Configuration::from_real_vectors(d, v)
}

/// `{ +/- e_i }`, the `2d` vertices of the orthoplex (cross-polytope).
pub fn orthoplex<T: Scalar>(d: usize) -> Result<Configuration<T>> {
    let mut v = Vec::with_capacity(2 * d);
    for i in 0..d {
        for sign in [T::one(), -T::one()] {
            let mut e = vec![T::zero(); d];
            e[i] = sign;
            v.push(e);
        }
    }
    Configuration::from_real_vectors(d, v)
}

/// The standard orthonormal basis of `R^d` or `C^d`.
pub fn orthonormal<T: Scalar>(d: usize, field: Field) -> Result<Configuration<T>> {
    let vectors: Vec<Vec<Complex<T>>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| Complex::new(if i == j { T::one() } else { T::zero() }, T::zero()))
                .collect()
        })
        .collect();
    Configuration::new(field, d, vectors, None)
}

/// The 12 icosahedron vertices, built from the golden ratio.
pub fn icosahedron<T: Scalar>() -> Result<Configuration<T>> {
    let phi = (T::one() + T::of(5.0).sqrt()) / T::of(2.0);
    let norm = (T::one() + phi * phi).sqrt();
    let a = T::one() / norm;
    let b = phi / norm;
    let zero = T::zero();
    let mut v = Vec::with_capacity(12);
    for s1 in [T::one(), -T::one()] {
        for s2 in [T::one(), -T::one()] {
            v.push(vec![zero, s1 * a, s2 * b]);
            v.push(vec![s1 * a, s2 * b, zero]);
            v.push(vec![s2 * b, zero, s1 * a]);
        }
    }
    Configuration::from_real_vectors(3, v)
}

/// The `n`-th roots of unity as vectors in `C^1`.
pub fn roots_of_unity<T: Scalar>(n: usize) -> Result<Configuration<T>> {
    if n == 0 {
        return Err(Error::Invalid("roots_of_unity needs n >= 1".into()));
    }
    let vectors = (0..n)
        .map(|k| {
            let theta = T::of(2.0) * T::PI() * T::of_usize(k) / T::of_usize(n);
            vec![Complex::from_polar(T::one(), theta)]
        })
        .collect();
    Configuration::new(Field::Complex, 1, vectors, None)
}

/// Looks up a builtin by name. `params` supplies `d` or `n` where needed and
/// `scale` an optional global scaling factor.
pub fn builtin_configuration<T: Scalar>(
    name: &str,
    param: Option<usize>,
    scale: Option<T>,
) -> Result<Configuration<T>> {
    let need = |what: &str| {
        param.ok_or_else(|| Error::Invalid(format!("builtin `{name}` needs --{what}")))
    };
    let cfg = match name {
        "simplex" => simplex::<T>(need("d")?)?,
        "orthoplex" => orthoplex::<T>(need("d")?)?,
        "orthonormal" | "orthonormal-real" => orthonormal::<T>(need("d")?, Field::Real)?,
        "orthonormal-complex" => orthonormal::<T>(need("d")?, Field::Complex)?,
        "icosahedron" => icosahedron::<T>()?,
        "roots-of-unity" | "roots_of_unity" => roots_of_unity::<T>(need("n")?)?,
        other => return Err(Error::UnknownName(other.into())),
    };
    Ok(match scale {
        Some(s) => cfg.scaled(s),
        None => cfg,
    })
}
