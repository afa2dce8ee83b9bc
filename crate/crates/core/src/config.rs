//! Configurations, Gramians, angle multisets and m-weights.

use num_complex::Complex;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Scalar field the configuration lives over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

impl std::fmt::Display for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Field::Real => write!(f, "real"),
            Field::Complex => write!(f, "complex"),
        }
    }
}

impl std::str::FromStr for Field {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "real" | "r" => Ok(Field::Real),
            "complex" | "c" => Ok(Field::Complex),
            other => Err(Error::Parse(format!("unknown field `{other}`"))),
        }
    }
}

/// A sequence of vectors in `R^d` or `C^d` with optional weights.
///
/// Values are immutable after construction. Weights, when present, are
/// normalized to sum to one on construction.
#[derive(Clone, Debug)]
pub struct Configuration<T> {
    field: Field,
    dimension: usize,
    vectors: Vec<Vec<Complex<T>>>,
    weights: Option<Vec<T>>,
}

impl<T: Scalar> Configuration<T> {
    pub fn new(
        field: Field,
        dimension: usize,
        vectors: Vec<Vec<Complex<T>>>,
        weights: Option<Vec<T>>,
    ) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::DimensionTooSmall(0, "dimension must be positive"));
        }
        if vectors.is_empty() {
            return Err(Error::Invalid("a configuration needs at least one vector".into()));
        }
        for (index, v) in vectors.iter().enumerate() {
            if v.len() != dimension {
                return Err(Error::DimensionMismatch {
                    index,
                    expected: dimension,
                    got: v.len(),
                });
            }
            if field == Field::Real && v.iter().any(|c| !c.im.is_zero()) {
                return Err(Error::Parse(format!(
                    "vector {index} has a nonzero imaginary part in a real configuration"
                )));
            }
        }
        let weights = match weights {
            None => None,
            Some(w) => {
                if w.len() != vectors.len() {
                    return Err(Error::Invalid(format!(
                        "{} weights for {} vectors",
                        w.len(),
                        vectors.len()
                    )));
                }
                let total: T = w.iter().copied().sum();
                if total <= T::zero() {
                    return Err(Error::Invalid("weights must have a positive sum".into()));
                }
                Some(w.into_iter().map(|x| x / total).collect())
            }
        };
        Ok(Self { field, dimension, vectors, weights })
    }

    pub fn from_real_vectors(dimension: usize, vectors: Vec<Vec<T>>) -> Result<Self> {
        let vectors = vectors
            .into_iter()
            .map(|v| v.into_iter().map(|x| Complex::new(x, T::zero())).collect())
            .collect();
        Self::new(Field::Real, dimension, vectors, None)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn vectors(&self) -> &[Vec<Complex<T>>] {
        &self.vectors
    }

    pub fn explicit_weights(&self) -> Option<&[T]> {
        self.weights.as_deref()
    }

    /// Stored weights, or uniform `1/n`.
    pub fn weights_or_uniform(&self) -> Vec<T> {
        match &self.weights {
            Some(w) => w.clone(),
            None => vec![T::one() / T::of_usize(self.len()); self.len()],
        }
    }

    pub fn norms(&self) -> Vec<T> {
        self.vectors
            .iter()
            .map(|v| v.iter().map(|c| c.norm_sqr()).sum::<T>().sqrt())
            .collect()
    }

    pub fn is_unit_norm(&self, tol: T) -> bool {
        self.norms().iter().all(|&n| (n - T::one()).abs() <= tol)
    }

    pub fn require_unit_norm(&self, tol: T) -> Result<()> {
        for (index, n) in self.norms().into_iter().enumerate() {
            if (n - T::one()).abs() > tol {
                return Err(Error::NonUnitNorm { index, norm: n.as_f64() });
            }
        }
        Ok(())
    }

    /// Scales every vector by `factor`.
    pub fn scaled(&self, factor: T) -> Self {
        let vectors = self
            .vectors
            .iter()
            .map(|v| v.iter().map(|c| c.scale(factor)).collect())
            .collect();
        Self { field: self.field, dimension: self.dimension, vectors, weights: self.weights.clone() }
    }

    /// Normalizes every vector to the unit sphere (zero vectors are rejected).
    pub fn normalized(&self) -> Result<Self> {
        let norms = self.norms();
        if norms.iter().any(|n| n.is_zero()) {
            return Err(Error::AllZeroVectors);
        }
        let vectors = self
            .vectors
            .iter()
            .zip(&norms)
            .map(|(v, &n)| v.iter().map(|c| c.scale(T::one() / n)).collect())
            .collect();
        Ok(Self { field: self.field, dimension: self.dimension, vectors, weights: self.weights.clone() })
    }

    /// Applies a matrix (rows of `u`) to every vector.
    pub fn transformed(&self, u: &[Vec<Complex<T>>]) -> Result<Self> {
        if u.len() != self.dimension || u.iter().any(|r| r.len() != self.dimension) {
            return Err(Error::Invalid("transform shape does not match dimension".into()));
        }
        let vectors = self
            .vectors
            .iter()
            .map(|v| {
                u.iter()
                    .map(|row| {
                        row.iter()
                            .zip(v)
                            .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + *a * *b)
                    })
                    .collect()
            })
            .collect();
        Ok(Self { field: self.field, dimension: self.dimension, vectors, weights: self.weights.clone() })
    }

    /// `<v_j, v_k>` with the inner product conjugate-linear in the second
    /// argument, Hermitian-symmetrized.
    pub fn gramian(&self) -> Gramian<T> {
        let n = self.len();
        let mut g = vec![Complex::new(T::zero(), T::zero()); n * n];
        for j in 0..n {
            for k in j..n {
                let mut s = Complex::new(T::zero(), T::zero());
                for i in 0..self.dimension {
                    s = s + self.vectors[j][i] * self.vectors[k][i].conj();
                }
                if j == k {
                    s = Complex::new(s.re, T::zero());
                }
                g[j * n + k] = s;
                g[k * n + j] = s.conj();
            }
        }
        Gramian { n, entries: g }
    }

    /// The m-weights `|v_j|^m / sum_l |v_l|^m`.
    pub fn m_weights(&self, m: u32) -> Result<Vec<T>> {
        let norms = self.norms();
        if norms.iter().all(|n| n.is_zero()) {
            return Err(Error::AllZeroVectors);
        }
        let powers: Vec<T> = norms.iter().map(|&n| pow_u32(n, m)).collect();
        let total: T = powers.iter().copied().sum();
        Ok(powers.into_iter().map(|p| p / total).collect())
    }
}

pub(crate) fn pow_u32<T: Scalar>(base: T, exp: u32) -> T {
    let mut acc = T::one();
    for _ in 0..exp {
        acc = acc * base;
    }
    acc
}

/// Hermitian matrix of inner products; the sole input design verification
/// needs.
#[derive(Clone, Debug)]
pub struct Gramian<T> {
    n: usize,
    entries: Vec<Complex<T>>,
}

impl<T: Scalar> Gramian<T> {
    /// Builds from row-major entries, Hermitian-symmetrizing. Rejects inputs
    /// whose asymmetry exceeds `tol` or with negative diagonal entries.
    pub fn from_entries(n: usize, entries: Vec<Complex<T>>, tol: T) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::Invalid(format!("{} entries for a {n}x{n} Gramian", entries.len())));
        }
        let mut worst = T::zero();
        for j in 0..n {
            if entries[j * n + j].re < T::zero() {
                return Err(Error::Invalid(format!("negative diagonal entry at {j}")));
            }
            for k in j..n {
                let asym = (entries[j * n + k] - entries[k * n + j].conj()).norm();
                if asym > worst {
                    worst = asym;
                }
            }
        }
        if worst > tol {
            return Err(Error::NonHermitianGramian(worst.as_f64()));
        }
        let mut out = entries;
        for j in 0..n {
            out[j * n + j] = Complex::new(out[j * n + j].re, T::zero());
            for k in (j + 1)..n {
                let avg = (out[j * n + k] + out[k * n + j].conj()).scale(T::of(0.5));
                out[j * n + k] = avg;
                out[k * n + j] = avg.conj();
            }
        }
        Ok(Self { n, entries: out })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, j: usize, k: usize) -> Complex<T> {
        self.entries[j * self.n + k]
    }

    pub fn max_abs(&self) -> T {
        self.entries
            .iter()
            .map(|c| c.norm())
            .fold(T::zero(), |a, b| if b > a { b } else { a })
    }

    /// Positive semidefiniteness within tolerance, decided by pivoted
    /// Cholesky: all pivots must stay above `-tol * max |G|`.
    pub fn is_psd(&self, tol: T) -> bool {
        let n = self.n;
        let mut a = self.entries.clone();
        let floor = -tol * self.max_abs();
        let mut order: Vec<usize> = (0..n).collect();
        for step in 0..n {
            // pick the largest remaining diagonal entry as pivot
            let (rel, &piv_idx) = order[step..]
                .iter()
                .enumerate()
                .max_by(|x, y| {
                    let dx = a[x.1 * n + x.1].re;
                    let dy = a[y.1 * n + y.1].re;
                    dx.partial_cmp(&dy).unwrap()
                })
                .unwrap();
            order.swap(step, step + rel);
            let piv = a[piv_idx * n + piv_idx].re;
            if piv < floor {
                return false;
            }
            if piv <= tol * self.max_abs().max(T::one()) {
                // remaining block is numerically zero: check its diagonal
                return order[step..]
                    .iter()
                    .all(|&i| a[i * n + i].re >= floor);
            }
            for &j in &order[step + 1..] {
                for &k in &order[step + 1..] {
                    let upd = a[j * n + piv_idx] * a[piv_idx * n + k].scale(T::one() / piv);
                    a[j * n + k] = a[j * n + k] - upd;
                }
            }
        }
        true
    }
}

/// Distinct off-diagonal inner products with their multiplicities.
#[derive(Clone, Debug)]
pub struct AngleSet<T> {
    /// Cluster centers.
    pub angles: Vec<Complex<T>>,
    /// Number of Gramian entries in each cluster.
    pub counts: Vec<usize>,
    /// Weighted multiplicities `m_{w,alpha} = sum w_j w_k` over the cluster.
    pub weighted: Vec<T>,
    /// `sum_j w_j^2`, the weighted multiplicity of the diagonal.
    pub diagonal_weight: T,
    /// Diagonal Gramian values (squared norms).
    pub diagonal: Vec<T>,
}

impl<T: Scalar> AngleSet<T> {
    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    /// True if for every angle its conjugate appears with equal multiplicity
    /// (within `tol`).
    pub fn conjugation_closed(&self, tol: T) -> bool {
        self.angles.iter().zip(&self.weighted).all(|(a, &m)| {
            self.angles
                .iter()
                .zip(&self.weighted)
                .any(|(b, &mb)| (*b - a.conj()).norm() <= tol && (mb - m).abs() <= tol)
        })
    }
}

/// Clusters the off-diagonal Gramian entries into distinct angles.
///
/// Entries within `tol` of a cluster center join it; the final centers must
/// be pairwise farther than `2 tol` apart or the clustering is ambiguous.
pub fn angle_set<T: Scalar>(gram: &Gramian<T>, weights: &[T], tol: T) -> Result<AngleSet<T>> {
    let n = gram.n();
    if weights.len() != n {
        return Err(Error::Invalid(format!("{} weights for {n} vectors", weights.len())));
    }
    let mut centers: Vec<Complex<T>> = Vec::new();
    let mut sums: Vec<Complex<T>> = Vec::new();
    let mut counts: Vec<usize> = Vec::new();
    let mut weighted: Vec<T> = Vec::new();
    for j in 0..n {
        for k in 0..n {
            if j == k {
                continue;
            }
            let z = gram.get(j, k);
            let wjk = weights[j] * weights[k];
            match centers.iter().position(|c| (*c - z).norm() <= tol) {
                Some(i) => {
                    sums[i] = sums[i] + z;
                    counts[i] += 1;
                    weighted[i] = weighted[i] + wjk;
                    centers[i] = sums[i].scale(T::one() / T::of_usize(counts[i]));
                }
                None => {
                    centers.push(z);
                    sums.push(z);
                    counts.push(1);
                    weighted.push(wjk);
                }
            }
        }
    }
    for i in 0..centers.len() {
        for j in (i + 1)..centers.len() {
            if (centers[i] - centers[j]).norm() < T::of(2.0) * tol {
                return Err(Error::ClusterAmbiguity(
                    format!("{:?}", centers[i]),
                    format!("{:?}", centers[j]),
                ));
            }
        }
    }
    let diagonal: Vec<T> = (0..n).map(|j| gram.get(j, j).re).collect();
    let diagonal_weight = weights.iter().map(|&w| w * w).sum();
    Ok(AngleSet { angles: centers, counts, weighted, diagonal_weight, diagonal })
}

// ---------------------------------------------------------------------------
// JSON serialization
// ---------------------------------------------------------------------------

fn value_to_scalar<T: Scalar>(v: &Value, what: &str) -> Result<T> {
    v.as_f64()
        .map(T::of)
        .ok_or_else(|| Error::Parse(format!("expected a number for {what}, got {v}")))
}

/// Parses the configuration JSON format:
/// `{"field":"real"|"complex","dimension":d,"vectors":[...],"weights":[...]?}`
/// where real vector entries are bare numbers and complex entries are
/// `[re,im]` pairs (bare numbers are also accepted as real parts).
pub fn load_configuration<T: Scalar>(bytes: &[u8]) -> Result<Configuration<T>> {
    let root: Value =
        serde_json::from_slice(bytes).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))?;
    let obj = root
        .as_object()
        .ok_or_else(|| Error::Parse("top level must be an object".into()))?;
    let field: Field = obj
        .get("field")
        .and_then(|v| v.as_str())
        .ok_or_else(|| Error::Parse("missing string field `field`".into()))?
        .parse()?;
    let dimension = obj
        .get("dimension")
        .and_then(|v| v.as_u64())
        .ok_or_else(|| Error::Parse("missing positive integer `dimension`".into()))?
        as usize;
    let raw_vectors = obj
        .get("vectors")
        .and_then(|v| v.as_array())
        .ok_or_else(|| Error::Parse("missing array `vectors`".into()))?;
    let mut vectors = Vec::with_capacity(raw_vectors.len());
    for (i, rv) in raw_vectors.iter().enumerate() {
        let arr = rv
            .as_array()
            .ok_or_else(|| Error::Parse(format!("vector {i} must be an array")))?;
        let mut vec = Vec::with_capacity(arr.len());
        for entry in arr {
            let c = match entry {
                Value::Array(pair) => {
                    if pair.len() != 2 {
                        return Err(Error::Parse(format!(
                            "complex entry in vector {i} must be [re,im]"
                        )));
                    }
                    Complex::new(
                        value_to_scalar(&pair[0], "re")?,
                        value_to_scalar(&pair[1], "im")?,
                    )
                }
                other => Complex::new(value_to_scalar::<T>(other, "coordinate")?, T::zero()),
            };
            vec.push(c);
        }
        vectors.push(vec);
    }
    let weights = match obj.get("weights") {
        None | Some(Value::Null) => None,
        Some(Value::Array(arr)) => Some(
            arr.iter()
                .map(|v| value_to_scalar(v, "weight"))
                .collect::<Result<Vec<T>>>()?,
        ),
        Some(other) => return Err(Error::Parse(format!("weights must be an array, got {other}"))),
    };
    Configuration::new(field, dimension, vectors, weights)
}

/// Serializes a configuration back to the JSON wire format.
pub fn save_configuration<T: Scalar>(config: &Configuration<T>) -> Vec<u8> {
    let vectors: Vec<Value> = config
        .vectors()
        .iter()
        .map(|v| {
            Value::Array(
                v.iter()
                    .map(|c| match config.field() {
                        Field::Real => json!(c.re.as_f64()),
                        Field::Complex => json!([c.re.as_f64(), c.im.as_f64()]),
                    })
                    .collect(),
            )
        })
        .collect();
    let mut obj = serde_json::Map::new();
    obj.insert("field".into(), json!(config.field().to_string()));
    obj.insert("dimension".into(), json!(config.dimension()));
    obj.insert("vectors".into(), Value::Array(vectors));
    if let Some(w) = config.explicit_weights() {
        obj.insert(
            "weights".into(),
            Value::Array(w.iter().map(|x| json!(x.as_f64())).collect()),
        );
    }
    let mut out = serde_json::to_vec_pretty(&Value::Object(obj)).expect("serialization");
    out.push(b'\n');
    out
}
