//! Dense d-dimensional matrices of order n with exact rational entries.
//!
//! Entries are stored row-major: the last coordinate varies fastest. A
//! k-plane is the submatrix obtained by fixing d-k coordinates; lines are
//! 1-planes and hyperplanes are (d-1)-planes.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

pub type IndexTuple = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tensor {
    dim: usize,
    order: usize,
    entries: Vec<Rational>,
}

/// `n^d`, or an error when it does not fit in memory-addressable size.
pub(crate) fn volume(dim: usize, order: usize) -> Result<usize> {
    u32::try_from(dim)
        .ok()
        .and_then(|d| order.checked_pow(d))
        .ok_or_else(|| Error::InvalidArgument(format!("order {order}^{dim} overflows")))
}

impl Tensor {
    pub fn new(dim: usize, order: usize, entries: Vec<Rational>) -> Result<Self> {
        if dim == 0 || order == 0 {
            return Err(Error::InvalidArgument(format!(
                "dimension and order must be positive (got d={dim}, n={order})"
            )));
        }
        let len = volume(dim, order)?;
        if entries.len() != len {
            return Err(Error::ShapeMismatch(format!(
                "expected {len} entries for d={dim}, n={order}, got {}",
                entries.len()
            )));
        }
        Ok(Tensor { dim, order, entries })
    }

    pub fn from_fn(dim: usize, order: usize, mut f: impl FnMut(&[usize]) -> Rational) -> Result<Self> {
        let len = volume(dim, order)?;
        let mut idx = vec![0; dim];
        let mut entries = Vec::with_capacity(len);
        for _ in 0..len {
            entries.push(f(&idx));
            increment(&mut idx, order);
        }
        Tensor::new(dim, order, entries)
    }

    pub fn zeros(dim: usize, order: usize) -> Result<Self> {
        Tensor::new(dim, order, vec![Rational::zero(); volume(dim, order)?])
    }

    /// The all-ones matrix `J`.
    pub fn ones(dim: usize, order: usize) -> Result<Self> {
        Tensor::new(dim, order, vec![Rational::one(); volume(dim, order)?])
    }

    /// `n^{-1} J`: every entry equals `1/n`.
    pub fn uniform(dim: usize, order: usize) -> Result<Self> {
        let v = Rational::new(BigInt::one(), BigInt::from(order.max(1)));
        Tensor::new(dim, order, vec![v; volume(dim, order)?])
    }

    /// A (0,1)-matrix with ones exactly at `cells`.
    pub fn from_support<'a>(
        dim: usize,
        order: usize,
        cells: impl IntoIterator<Item = &'a [usize]>,
    ) -> Result<Self> {
        let mut t = Tensor::zeros(dim, order)?;
        for c in cells {
            let off = t.checked_offset(c)?;
            t.entries[off] = Rational::one();
        }
        Ok(t)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Rational> {
        self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    #[inline]
    pub fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.dim);
        idx.iter().fold(0, |acc, &i| acc * self.order + i)
    }

    pub fn checked_offset(&self, idx: &[usize]) -> Result<usize> {
        if idx.len() != self.dim || idx.iter().any(|&i| i >= self.order) {
            return Err(Error::ShapeMismatch(format!(
                "index {idx:?} invalid for d={}, n={}",
                self.dim, self.order
            )));
        }
        Ok(self.offset(idx))
    }

    pub fn coords(&self, mut offset: usize) -> IndexTuple {
        let mut idx = vec![0; self.dim];
        for slot in idx.iter_mut().rev() {
            *slot = offset % self.order;
            offset /= self.order;
        }
        idx
    }

    pub fn get(&self, idx: &[usize]) -> &Rational {
        &self.entries[self.offset(idx)]
    }

    pub fn same_shape(&self, other: &Tensor) -> bool {
        self.dim == other.dim && self.order == other.order
    }

    fn require_same_shape(&self, other: &Tensor) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::ShapeMismatch(format!(
                "(d={}, n={}) vs (d={}, n={})",
                self.dim, self.order, other.dim, other.order
            )))
        }
    }

    /// Offsets of the nonzero entries, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.entries.len()).filter(|&i| !self.entries[i].is_zero()).collect()
    }

    /// The (0,1)-matrix with the same support.
    pub fn support_indicator(&self) -> Tensor {
        let entries = self
            .entries
            .iter()
            .map(|v| if v.is_zero() { Rational::zero() } else { Rational::one() })
            .collect();
        Tensor { dim: self.dim, order: self.order, entries }
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.iter().all(|v| !v.is_negative())
    }

    pub fn first_negative(&self) -> Option<IndexTuple> {
        self.entries.iter().position(|v| v.is_negative()).map(|o| self.coords(o))
    }

    pub fn scale(&self, c: &Rational) -> Tensor {
        let entries = self.entries.iter().map(|v| v * c).collect();
        Tensor { dim: self.dim, order: self.order, entries }
    }

    pub fn checked_add(&self, other: &Tensor) -> Result<Tensor> {
        self.require_same_shape(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Ok(Tensor { dim: self.dim, order: self.order, entries })
    }

    pub fn checked_sub(&self, other: &Tensor) -> Result<Tensor> {
        self.require_same_shape(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        Ok(Tensor { dim: self.dim, order: self.order, entries })
    }

    /// `(1-t) self + t other`.
    pub fn lerp(&self, other: &Tensor, t: &Rational) -> Result<Tensor> {
        self.require_same_shape(other)?;
        let s = Rational::one() - t;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a * &s + b * t)
            .collect();
        Ok(Tensor { dim: self.dim, order: self.order, entries })
    }

    /// Reorders axes: axis `k` of the result is axis `perm[k]` of `self`.
    pub fn permute_axes(&self, perm: &[usize]) -> Result<Tensor> {
        check_permutation(perm, self.dim)?;
        let mut src = vec![0; self.dim];
        Tensor::from_fn(self.dim, self.order, |idx| {
            for (k, &p) in perm.iter().enumerate() {
                src[p] = idx[k];
            }
            self.get(&src).clone()
        })
    }

    /// Relabels values along one axis: `result[.. v ..] = self[.. sigma^{-1}(v) ..]`.
    pub fn permute_values(&self, axis: usize, sigma: &[usize]) -> Result<Tensor> {
        if axis >= self.dim {
            return Err(Error::InvalidArgument(format!("axis {axis} out of range")));
        }
        check_permutation(sigma, self.order)?;
        let mut inv = vec![0; self.order];
        for (i, &s) in sigma.iter().enumerate() {
            inv[s] = i;
        }
        let mut src = vec![0; self.dim];
        Tensor::from_fn(self.dim, self.order, |idx| {
            src.copy_from_slice(idx);
            src[axis] = inv[idx[axis]];
            self.get(&src).clone()
        })
    }

    /// Entries as integers over the least common denominator:
    /// `self = numerators / denominator`.
    pub fn integer_form(&self) -> (Vec<BigInt>, BigInt) {
        let den = rational::common_denominator(self.entries.iter());
        let nums = self
            .entries
            .iter()
            .map(|v| v.numer() * (&den / v.denom()))
            .collect();
        (nums, den)
    }
}

/// Advances a mixed-radix index in row-major order; returns false on wrap.
pub(crate) fn increment(idx: &mut [usize], order: usize) -> bool {
    for slot in idx.iter_mut().rev() {
        *slot += 1;
        if *slot < order {
            return true;
        }
        *slot = 0;
    }
    false
}

pub(crate) fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(Error::InvalidArgument(format!("permutation {perm:?} has wrong length")));
    }
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(Error::InvalidArgument(format!("{perm:?} is not a permutation")));
        }
    }
    Ok(())
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

impl fmt::Display for Tensor {
    /// Layers of the trailing two axes, blank lines between layers.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.order;
        let strs: Vec<String> = self.entries.iter().map(rational::format).collect();
        let width = strs.iter().map(String::len).max().unwrap_or(1);
        if self.dim == 1 {
            return writeln!(f, "{}", strs.join(" "));
        }
        for (r, row) in strs.chunks(n).enumerate() {
            if r > 0 && r % n == 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = row.iter().map(|s| format!("{s:>width$}")).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Planes

/// A k-plane: the free axes range over all values, the others are fixed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlaneSpec {
    coords: Vec<Option<usize>>,
}

impl PlaneSpec {
    /// `fixed_values` lists the values of the non-free axes in ascending axis order.
    pub fn new(dim: usize, free_axes: &[usize], fixed_values: &[usize]) -> Result<Self> {
        let mut coords = vec![Some(usize::MAX); dim];
        for &a in free_axes {
            if a >= dim || coords[a].is_none() {
                return Err(Error::InvalidArgument(format!("bad free axes {free_axes:?}")));
            }
            coords[a] = None;
        }
        let mut vals = fixed_values.iter();
        for c in coords.iter_mut().filter(|c| c.is_some()) {
            *c = Some(*vals.next().ok_or_else(|| {
                Error::InvalidArgument("too few fixed values for plane".into())
            })?);
        }
        if vals.next().is_some() {
            return Err(Error::InvalidArgument("too many fixed values for plane".into()));
        }
        Ok(PlaneSpec { coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn free_axes(&self) -> Vec<usize> {
        (0..self.coords.len()).filter(|&a| self.coords[a].is_none()).collect()
    }

    pub fn fixed(&self) -> Vec<(usize, usize)> {
        self.coords
            .iter()
            .enumerate()
            .filter_map(|(a, c)| c.map(|v| (a, v)))
            .collect()
    }

    pub fn contains(&self, idx: &[usize]) -> bool {
        idx.len() == self.coords.len()
            && self.coords.iter().zip(idx).all(|(c, &i)| c.is_none_or(|v| v == i))
    }

    /// Every s-plane of a d-dimensional matrix of order n, grouped by free axes.
    pub fn all(dim: usize, order: usize, s: usize) -> Vec<PlaneSpec> {
        let mut out = Vec::new();
        for free in combinations(dim, s) {
            let mut fixed = vec![0; dim - s];
            loop {
                out.push(PlaneSpec::new(dim, &free, &fixed).expect("valid plane"));
                if dim == s || !increment(&mut fixed, order) {
                    break;
                }
            }
        }
        out
    }
}

impl fmt::Display for PlaneSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coords
            .iter()
            .map(|c| c.map_or_else(|| "*".to_string(), |v| v.to_string()))
            .collect();
        write!(f, "({})", parts.join(","))
    }
}

pub fn plane_sum(a: &Tensor, p: &PlaneSpec) -> Result<Rational> {
    if p.dim() != a.dim || p.fixed().iter().any(|&(_, v)| v >= a.order) {
        return Err(Error::ShapeMismatch(format!(
            "plane {p} does not fit d={}, n={}",
            a.dim, a.order
        )));
    }
    let free = p.free_axes();
    let mut idx: Vec<usize> = p.coords.iter().map(|c| c.unwrap_or(0)).collect();
    let mut sub = vec![0; free.len()];
    let mut sum = Rational::zero();
    loop {
        for (k, &axis) in free.iter().enumerate() {
            idx[axis] = sub[k];
        }
        sum += a.get(&idx);
        if free.is_empty() || !increment(&mut sub, a.order) {
            break;
        }
    }
    Ok(sum)
}

/// Sums of all s-planes, in the order of [`PlaneSpec::all`].
pub fn plane_sums(a: &Tensor, s: usize) -> Result<Vec<(PlaneSpec, Rational)>> {
    check_plane_order(a, s)?;
    let (d, n) = (a.dim, a.order);
    let mut out = Vec::new();
    for free in combinations(d, s) {
        let fixed_axes: Vec<usize> = (0..d).filter(|x| !free.contains(x)).collect();
        let buckets = n.pow((d - s) as u32);
        let mut sums = vec![Rational::zero(); buckets];
        let mut idx = vec![0; d];
        for v in &a.entries {
            let b = fixed_axes.iter().fold(0, |acc, &ax| acc * n + idx[ax]);
            if !v.is_zero() {
                sums[b] += v;
            }
            increment(&mut idx, n);
        }
        let mut fixed = vec![0; d - s];
        for sum in sums {
            out.push((PlaneSpec::new(d, &free, &fixed)?, sum));
            increment(&mut fixed, n);
        }
    }
    Ok(out)
}

fn check_plane_order(a: &Tensor, s: usize) -> Result<()> {
    if s == 0 || s >= a.dim {
        Err(Error::PlaneOrderOutOfRange { s, dim: a.dim })
    } else {
        Ok(())
    }
}

/// Why a tensor fails a stochasticity predicate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NegativeEntry { index: IndexTuple, value: Rational },
    NotZeroOne { index: IndexTuple, value: Rational },
    PlaneSum { plane: PlaneSpec, sum: Rational, expected: Rational },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NegativeEntry { index, value } => {
                write!(f, "negative entry {value} at {index:?}")
            }
            Violation::NotZeroOne { index, value } => {
                write!(f, "entry {value} at {index:?} is not 0 or 1")
            }
            Violation::PlaneSum { plane, sum, expected } => {
                write!(f, "plane {plane} sums to {sum}, expected {expected}")
            }
        }
    }
}

/// First reason `a` is not in Ω_s, or `None` when it is.
pub fn polystochastic_violation(a: &Tensor, s: usize) -> Result<Option<Violation>> {
    plane_violation(a, s, &Rational::one())
}

/// Checks nonnegativity and that every s-plane sums to `expected`.
pub fn plane_violation(a: &Tensor, s: usize, expected: &Rational) -> Result<Option<Violation>> {
    check_plane_order(a, s)?;
    if let Some(index) = a.first_negative() {
        let value = a.get(&index).clone();
        return Ok(Some(Violation::NegativeEntry { index, value }));
    }
    Ok(plane_sums(a, s)?
        .into_iter()
        .find(|(_, sum)| sum != expected)
        .map(|(plane, sum)| Violation::PlaneSum { plane, sum, expected: expected.clone() }))
}

pub fn is_polystochastic(a: &Tensor, s: usize) -> Result<bool> {
    Ok(polystochastic_violation(a, s)?.is_none())
}

/// First reason `a` is not in Λ_s, or `None` when it is.
pub fn permutation_violation(a: &Tensor, s: usize) -> Result<Option<Violation>> {
    check_plane_order(a, s)?;
    if let Some(o) = a.entries.iter().position(|v| !v.is_zero() && !v.is_one()) {
        return Ok(Some(Violation::NotZeroOne { index: a.coords(o), value: a.entries[o].clone() }));
    }
    polystochastic_violation(a, s)
}

pub fn is_permutation_matrix(a: &Tensor, s: usize) -> Result<bool> {
    Ok(permutation_violation(a, s)?.is_none())
}

// ---------------------------------------------------------------------------
// Product

/// The contraction product `(A×B)(i_1..i_{p-1}, i_p..i_{p+q-2}) = Σ_j A(i_1..i_{p-1}, j) B(j, i_p..)`.
///
/// With both tensors flattened to matrices (`n^{p-1} × n` and `n × n^{q-1}`)
/// this is ordinary matrix multiplication.
pub fn product(a: &Tensor, b: &Tensor) -> Result<Tensor> {
    if a.order != b.order {
        return Err(Error::ShapeMismatch(format!(
            "product needs equal orders, got {} and {}",
            a.order, b.order
        )));
    }
    if a.dim < 2 || b.dim < 2 {
        return Err(Error::InvalidArgument(format!(
            "product needs dimensions >= 2, got {} and {}",
            a.dim, b.dim
        )));
    }
    let n = a.order;
    let rows = a.entries.len() / n;
    let cols = b.entries.len() / n;
    let mut out = vec![Rational::zero(); rows * cols];
    for r in 0..rows {
        for j in 0..n {
            let x = &a.entries[r * n + j];
            if x.is_zero() {
                continue;
            }
            let brow = &b.entries[j * cols..(j + 1) * cols];
            let orow = &mut out[r * cols..(r + 1) * cols];
            for (o, y) in orow.iter_mut().zip(brow) {
                if !y.is_zero() {
                    *o += x * y;
                }
            }
        }
    }
    Tensor::new(a.dim + b.dim - 2, n, out)
}

// ---------------------------------------------------------------------------
// Convex combinations

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexCombination {
    terms: Vec<(Rational, Tensor)>,
}

impl ConvexCombination {
    /// Validates positive weights summing to exactly one over equal shapes.
    pub fn new(terms: Vec<(Rational, Tensor)>) -> Result<Self> {
        let Some((_, first)) = terms.first() else {
            return Err(Error::InvalidCombination("no terms".into()));
        };
        if let Some((_, t)) = terms.iter().find(|(_, t)| !t.same_shape(first)) {
            return Err(Error::ShapeMismatch(format!(
                "term of shape (d={}, n={}) in a combination of (d={}, n={})",
                t.dim, t.order, first.dim, first.order
            )));
        }
        if let Some((w, _)) = terms.iter().find(|(w, _)| !w.is_positive()) {
            return Err(Error::InvalidCombination(format!("non-positive weight {w}")));
        }
        let total: Rational = terms.iter().map(|(w, _)| w).sum();
        if !total.is_one() {
            return Err(Error::InvalidCombination(format!("weights sum to {total}")));
        }
        Ok(ConvexCombination { terms })
    }

    /// Equal weights `1/m` over `m` tensors.
    pub fn average(tensors: Vec<Tensor>) -> Result<Self> {
        let w = Rational::new(BigInt::one(), BigInt::from(tensors.len().max(1)));
        ConvexCombination::new(tensors.into_iter().map(|t| (w.clone(), t)).collect())
    }

    pub fn terms(&self) -> &[(Rational, Tensor)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Rational, Tensor)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.terms[0].1.dim
    }

    pub fn order(&self) -> usize {
        self.terms[0].1.order
    }
}

/// The exact weighted sum.
pub fn combine(c: &ConvexCombination) -> Tensor {
    let first = &c.terms[0].1;
    let mut entries = vec![Rational::zero(); first.entries.len()];
    for (w, t) in &c.terms {
        for (e, v) in entries.iter_mut().zip(&t.entries) {
            if !v.is_zero() {
                *e += w * v;
            }
        }
    }
    Tensor { dim: first.dim, order: first.order, entries }
}

pub fn uniform(dim: usize, order: usize) -> Result<Tensor> {
    Tensor::uniform(dim, order)
}

// ---------------------------------------------------------------------------
// JSON

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
pub(crate) enum JsonScalar {
    Int(i64),
    Str(String),
}

impl JsonScalar {
    pub(crate) fn from_rational(r: &Rational) -> Self {
        match (rational::is_integer(r), i64::try_from(r.numer())) {
            (true, Ok(v)) => JsonScalar::Int(v),
            _ => JsonScalar::Str(rational::format(r)),
        }
    }

    pub(crate) fn to_rational(&self) -> Result<Rational> {
        match self {
            JsonScalar::Int(v) => Ok(rational::int(*v)),
            JsonScalar::Str(s) => rational::parse(s),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct TensorJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    kind: Option<String>,
    dim: usize,
    order: usize,
    entries: Vec<JsonScalar>,
}

impl Serialize for Tensor {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        TensorJson {
            kind: None,
            dim: self.dim,
            order: self.order,
            entries: self.entries.iter().map(JsonScalar::from_rational).collect(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Tensor {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = TensorJson::deserialize(de)?;
        let entries = raw
            .entries
            .iter()
            .map(JsonScalar::to_rational)
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        if raw.kind.as_deref() == Some("latin") {
            // A Latin hypercube stores symbols, not matrix entries.
            return Err(D::Error::custom("expected a tensor, found kind \"latin\""));
        }
        Tensor::new(raw.dim, raw.order, entries).map_err(D::Error::custom)
    }
}

impl Tensor {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("tensor serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}
