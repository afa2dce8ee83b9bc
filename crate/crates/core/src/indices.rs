//! Index-set bookkeeping for the polynomial spaces `P_L` (real) and `P_tau`
//! (complex): products, reverses, closures and named design families.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index `(p,q)` of the irreducible space `H(p,q)`, ordered by total degree
/// `p+q` first, then `p` (the canonical serialization order).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PqIndex {
    pub p: u32,
    pub q: u32,
}

impl PqIndex {
    pub fn new(p: u32, q: u32) -> Self {
        Self { p, q }
    }

    pub fn rev(self) -> Self {
        Self { p: self.q, q: self.p }
    }

    pub fn total(self) -> u32 {
        self.p + self.q
    }
}

impl Ord for PqIndex {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.total(), self.p).cmp(&(other.total(), other.p))
    }
}

impl PartialOrd for PqIndex {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PqIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

/// Finite subset of natural numbers indexing `Harm_k` spaces.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealIndexSet(BTreeSet<u32>);

impl RealIndexSet {
    pub fn new(members: impl IntoIterator<Item = u32>) -> Self {
        Self(members.into_iter().collect())
    }

    pub fn members(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().copied()
    }

    pub fn contains(&self, k: u32) -> bool {
        self.0.contains(&k)
    }

    pub fn insert(&mut self, k: u32) {
        self.0.insert(k);
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn union(&self, other: &Self) -> Self {
        Self(self.0.union(&other.0).copied().collect())
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn max(&self) -> Option<u32> {
        self.0.iter().next_back().copied()
    }
}

impl fmt::Display for RealIndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|k| k.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Finite subset of `N^2` indexing `H(p,q)` spaces, kept in canonical order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexIndexSet(BTreeSet<PqIndex>);

impl ComplexIndexSet {
    pub fn new(members: impl IntoIterator<Item = (u32, u32)>) -> Self {
        Self(members.into_iter().map(|(p, q)| PqIndex::new(p, q)).collect())
    }

    pub fn members(&self) -> impl Iterator<Item = PqIndex> + '_ {
        self.0.iter().copied()
    }

    pub fn contains(&self, idx: PqIndex) -> bool {
        self.0.contains(&idx)
    }

    pub fn insert(&mut self, idx: PqIndex) {
        self.0.insert(idx);
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn union(&self, other: &Self) -> Self {
        Self(self.0.union(&other.0).copied().collect())
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.0.is_subset(&other.0)
    }

    /// `tau^rev = {(q,p) : (p,q) in tau}`.
    pub fn reverse(&self) -> Self {
        Self(self.0.iter().map(|i| i.rev()).collect())
    }

    /// The class closure `tau* = tau u tau^rev u {(0,0)}`.
    pub fn tau_star(&self) -> Self {
        let mut out = self.union(&self.reverse());
        out.insert(PqIndex::new(0, 0));
        out
    }

    /// Minkowski sum `E + E'`.
    pub fn minkowski(&self, other: &Self) -> Self {
        let mut out = BTreeSet::new();
        for a in &self.0 {
            for b in &other.0 {
                out.insert(PqIndex::new(a.p + b.p, a.q + b.q));
            }
        }
        Self(out)
    }

    /// The convolution `E * E = E + E^rev`.
    pub fn convolution(&self) -> Self {
        self.minkowski(&self.reverse())
    }

    /// A lower set contains `(p-1,q)` and `(p,q-1)` along with `(p,q)`.
    pub fn is_lower_set(&self) -> bool {
        self.0.iter().all(|i| {
            (i.p == 0 || self.contains(PqIndex::new(i.p - 1, i.q)))
                && (i.q == 0 || self.contains(PqIndex::new(i.p, i.q - 1)))
        })
    }

    pub fn max_total(&self) -> Option<u32> {
        self.0.iter().map(|i| i.total()).max()
    }
}

impl fmt::Display for ComplexIndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// An index set over either field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum IndexSet {
    Real(RealIndexSet),
    Complex(ComplexIndexSet),
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexSet::Real(s) => s.fmt(f),
            IndexSet::Complex(s) => s.fmt(f),
        }
    }
}

/// `k . l = {k+l-2j : 0 <= j <= min(k,l)}`, the support of `Q_k Q_l`.
pub fn real_product(k: u32, l: u32) -> RealIndexSet {
    RealIndexSet::new((0..=k.min(l)).map(|j| k + l - 2 * j))
}

/// Extension of `real_product` to sets.
pub fn real_set_product(a: &RealIndexSet, b: &RealIndexSet) -> RealIndexSet {
    let mut out = RealIndexSet::default();
    for k in a.members() {
        for l in b.members() {
            out = out.union(&real_product(k, l));
        }
    }
    out
}

/// `(p,q) . (r,s) = {(p+r-j, q+s-j) : 0 <= j <= mu}`, `mu = min(p,s)+min(q,r)`.
///
/// With `d2_same_index` set and the two factors equal, only even `j` enter
/// (the `d = 2` correction to the multiplication rule).
pub fn complex_index_product(
    a: PqIndex,
    b: PqIndex,
    d2_same_index: bool,
) -> ComplexIndexSet {
    let mu = a.p.min(b.q) + a.q.min(b.p);
    let restrict = d2_same_index && a == b;
    ComplexIndexSet::new(
        (0..=mu)
            .filter(|j| !restrict || j % 2 == 0)
            .map(|j| (a.p + b.p - j, a.q + b.q - j)),
    )
}

/// Extension of the complex index product to sets (no `d = 2` restriction;
/// that special case applies to single equal factors only).
pub fn complex_set_product(a: &ComplexIndexSet, b: &ComplexIndexSet) -> ComplexIndexSet {
    let mut out = ComplexIndexSet::default();
    for i in a.members() {
        for j in b.members() {
            out = out.union(&complex_index_product(i, j, false));
        }
    }
    out
}

/// The named design families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// `Pi_t`: polynomials of degree at most `t`.
    TDesign(u32),
    /// `Hom_m` on the real sphere: indices `m, m-2, ...`.
    HalfDesign(u32),
    /// A single `Harm_m`.
    HarmonicIndex(u32),
    /// `Hom(p,q)` on the complex sphere: `(p-j, q-j)`.
    PqDesign(u32, u32),
    /// `Hom(t,t)`: projective indices `(0,0), ..., (t,t)`.
    TtDesign(u32),
    /// `Hom_m(C^d)`: all `(p,q)` with `p+q` in `m, m-2, ...`.
    HomMComplex(u32),
}

/// Field tag shared with the configuration module.
pub use crate::config::Field;

/// Builds the index set of a named family. The field resolves the families
/// that exist on both spheres (`t:` and `harm:`); complex-only families
/// ignore it.
pub fn named_family(field: Field, family: Family) -> IndexSet {
    match (family, field) {
        (Family::TDesign(t), Field::Real) => IndexSet::Real(RealIndexSet::new(0..=t)),
        (Family::TDesign(t), Field::Complex) => IndexSet::Complex(ComplexIndexSet::new(
            (0..=t).flat_map(|m| (0..=m).map(move |p| (p, m - p))),
        )),
        (Family::HalfDesign(m), _) => {
            IndexSet::Real(RealIndexSet::new((0..=m).filter(|k| (m - k) % 2 == 0)))
        }
        (Family::HarmonicIndex(m), Field::Real) => IndexSet::Real(RealIndexSet::new([m])),
        (Family::HarmonicIndex(m), Field::Complex) => {
            IndexSet::Complex(ComplexIndexSet::new((0..=m).map(|p| (p, m - p))))
        }
        (Family::PqDesign(p, q), _) => IndexSet::Complex(ComplexIndexSet::new(
            (0..=p.min(q)).map(|j| (p - j, q - j)),
        )),
        (Family::TtDesign(t), _) => {
            IndexSet::Complex(ComplexIndexSet::new((0..=t).map(|k| (k, k))))
        }
        (Family::HomMComplex(m), _) => IndexSet::Complex(ComplexIndexSet::new(
            (0..=m)
                .filter(|k| (m - k) % 2 == 0)
                .flat_map(|k| (0..=k).map(move |p| (p, k - p))),
        )),
    }
}

/// Parses the CLI index-set syntax: a raw set (`"0,2,4"` real,
/// `"(1,1),(2,2)"` complex) or a family shorthand (`t:5`, `half:4`, `tt:3`,
/// `pq:2,1`, `harm:6`, `hom:4`).
pub fn parse_index_spec(spec: &str, field: Field) -> Result<IndexSet> {
    let spec = spec.trim();
    if let Some((name, args)) = spec.split_once(':') {
        let nums: Vec<u32> = args
            .split(',')
            .map(|a| {
                a.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad family parameter `{a}`")))
            })
            .collect::<Result<_>>()?;
        let one = |name: &str| -> Result<u32> {
            if nums.len() == 1 {
                Ok(nums[0])
            } else {
                Err(Error::Parse(format!("family `{name}` takes one parameter")))
            }
        };
        let family = match name.trim() {
            "t" => Family::TDesign(one("t")?),
            "half" => Family::HalfDesign(one("half")?),
            "harm" => Family::HarmonicIndex(one("harm")?),
            "tt" => Family::TtDesign(one("tt")?),
            "hom" => Family::HomMComplex(one("hom")?),
            "pq" => {
                if nums.len() != 2 {
                    return Err(Error::Parse("family `pq` takes two parameters".into()));
                }
                Family::PqDesign(nums[0], nums[1])
            }
            other => return Err(Error::UnknownFamily(other.into())),
        };
        return Ok(named_family(field, family));
    }
    if spec.contains('(') {
        let mut members = Vec::new();
        for part in spec.split(')').filter(|s| !s.trim().trim_matches(',').is_empty()) {
            let inner = part.trim().trim_start_matches(',').trim().trim_start_matches('(');
            let (p, q) = inner
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("bad index pair `{part}`")))?;
            let p = p.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad index `{p}`")))?;
            let q = q.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad index `{q}`")))?;
            members.push((p, q));
        }
        if members.is_empty() {
            return Err(Error::Parse("empty index set".into()));
        }
        return Ok(IndexSet::Complex(ComplexIndexSet::new(members)));
    }
    let members: Vec<u32> = spec
        .split(',')
        .map(|a| {
            a.trim()
                .parse::<u32>()
                .map_err(|_| Error::Parse(format!("bad index `{a}`")))
        })
        .collect::<Result<_>>()?;
    if members.is_empty() {
        return Err(Error::Parse("empty index set".into()));
    }
    match field {
        Field::Real => Ok(IndexSet::Real(RealIndexSet::new(members))),
        Field::Complex => Err(Error::Parse(
            "complex index sets use (p,q) pairs or a family shorthand".into(),
        )),
    }
}
