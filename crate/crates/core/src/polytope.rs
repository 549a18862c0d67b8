//! Faces and decompositions in the polytopes of polystochastic matrices.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_cover::ExactCover;
use crate::latin::{self, LatinHypercube};
use crate::limits::Limits;
use crate::linalg;
use crate::permanent;
use crate::rational::{self, Rational};
use crate::tensor::{self, ConvexCombination, JsonScalar, Tensor};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexReport {
    pub is_vertex: bool,
    /// Dimension of the solutions of "every line sums to one" supported on `Supp(A)`.
    pub freedom_dim: usize,
    /// An integer direction with zero line sums inside `Supp(A)`, when one exists.
    pub witness_direction: Option<Tensor>,
}

fn require_polystochastic(a: &Tensor) -> Result<()> {
    if let Some(v) = tensor::polystochastic_violation(a, 1)? {
        return Err(Error::NotPolystochastic(v.to_string()));
    }
    Ok(())
}

/// Decides whether `A ∈ Ω₁` is a vertex: `A` is the only polystochastic
/// matrix on its support exactly when the line-sum system restricted to the
/// support has a unique solution.
pub fn is_vertex(a: &Tensor) -> Result<VertexReport> {
    require_polystochastic(a)?;
    let (d, n) = (a.dim(), a.order());
    let support = a.support();
    let lines_per_axis = a.len() / n;
    let mut rows = vec![vec![Rational::zero(); support.len()]; d * lines_per_axis];
    for (j, &off) in support.iter().enumerate() {
        let c = a.coords(off);
        for axis in 0..d {
            // Index the line through `c` along `axis` by the remaining coordinates.
            let line = (0..d).filter(|&b| b != axis).fold(0, |acc, b| acc * n + c[b]);
            rows[axis * lines_per_axis + line][j] = Rational::one();
        }
    }
    rows.retain(|r| r.iter().any(|v| !v.is_zero()));
    let ech = linalg::rref(rows, support.len());
    let freedom_dim = ech.nullity();
    let witness_direction = ech.kernel_vector().map(|x| {
        let den = rational::common_denominator(&x);
        let mut entries = vec![Rational::zero(); a.len()];
        for (v, &off) in x.iter().zip(&support) {
            entries[off] = v * Rational::from_integer(den.clone());
        }
        Tensor::new(d, n, entries).expect("same shape")
    });
    Ok(VertexReport { is_vertex: freedom_dim == 0, freedom_dim, witness_direction })
}

// ---------------------------------------------------------------------------
// Certificates

/// An explicit convex combination of s-permutation matrices equal to `target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HullCertificate {
    pub target: Tensor,
    pub s: usize,
    pub terms: ConvexCombination,
}

impl HullCertificate {
    /// Checks every term is in `Λ_s` and the weighted sum equals the target exactly.
    pub fn verify(&self) -> Result<()> {
        if !self.terms.terms()[0].1.same_shape(&self.target) {
            return Err(Error::ShapeMismatch("terms and target differ in shape".into()));
        }
        for (i, (_, t)) in self.terms.terms().iter().enumerate() {
            if let Some(v) = tensor::permutation_violation(t, self.s)? {
                return Err(Error::NotPermutationMatrix(format!("term {i}: {v}")));
            }
        }
        let sum = tensor::combine(&self.terms);
        if sum != self.target {
            let off = (0..sum.len()).find(|&o| sum.entries()[o] != self.target.entries()[o]).unwrap_or(0);
            return Err(Error::InvalidCombination(format!(
                "combination has {} at {:?}, target has {}",
                sum.entries()[off],
                sum.coords(off),
                self.target.entries()[off]
            )));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    weight: JsonScalar,
    tensor: Tensor,
}

#[derive(Serialize, Deserialize)]
struct CertificateJson {
    s: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    target: Option<Tensor>,
    terms: Vec<TermJson>,
}

impl Serialize for HullCertificate {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        CertificateJson {
            s: self.s,
            target: Some(self.target.clone()),
            terms: self
                .terms
                .terms()
                .iter()
                .map(|(w, t)| TermJson { weight: JsonScalar::Str(rational::format(w)), tensor: t.clone() })
                .collect(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for HullCertificate {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = CertificateJson::deserialize(de)?;
        let terms = raw
            .terms
            .into_iter()
            .map(|t| Ok((t.weight.to_rational()?, t.tensor)))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        let terms = ConvexCombination::new(terms).map_err(D::Error::custom)?;
        let target = raw.target.unwrap_or_else(|| tensor::combine(&terms));
        Ok(HullCertificate { target, s: raw.s, terms })
    }
}

// ---------------------------------------------------------------------------
// Two-dimensional Birkhoff decomposition

/// A perfect matching of the bipartite support graph, `row -> column`.
fn perfect_matching(a: &Tensor) -> Option<Vec<usize>> {
    let n = a.order();
    let adj: Vec<Vec<usize>> =
        (0..n).map(|i| (0..n).filter(|&j| !a.entries()[i * n + j].is_zero()).collect()).collect();
    let mut owner = vec![usize::MAX; n];

    fn augment(i: usize, adj: &[Vec<usize>], owner: &mut [usize], seen: &mut [bool]) -> bool {
        for &j in &adj[i] {
            if seen[j] {
                continue;
            }
            seen[j] = true;
            if owner[j] == usize::MAX || augment(owner[j], adj, owner, seen) {
                owner[j] = i;
                return true;
            }
        }
        false
    }

    for i in 0..n {
        if !augment(i, &adj, &mut owner, &mut vec![false; n]) {
            return None;
        }
    }
    let mut row_to_col = vec![0; n];
    for (j, &i) in owner.iter().enumerate() {
        row_to_col[i] = j;
    }
    Some(row_to_col)
}

/// Greedy Birkhoff decomposition of a doubly stochastic matrix into at
/// most `(n-1)² + 1` permutation matrices.
pub fn birkhoff_decompose(a: &Tensor) -> Result<HullCertificate> {
    if a.dim() != 2 {
        return Err(Error::InvalidArgument(format!("Birkhoff decomposition needs dimension 2, got {}", a.dim())));
    }
    require_polystochastic(a)?;
    let n = a.order();
    let mut rest = a.clone().into_entries();
    let mut terms = Vec::new();
    while rest.iter().any(|v| !v.is_zero()) {
        let current = Tensor::new(2, n, rest.clone())?;
        let m = perfect_matching(&current).expect("doubly stochastic matrices have a positive diagonal");
        let w = (0..n).map(|i| &rest[i * n + m[i]]).min().expect("n >= 1").clone();
        for (i, &j) in m.iter().enumerate() {
            rest[i * n + j] -= &w;
        }
        let p = Tensor::from_fn(2, n, |x| if m[x[0]] == x[1] { Rational::one() } else { Rational::zero() })?;
        terms.push((w, p));
    }
    Ok(HullCertificate { target: a.clone(), s: 1, terms: ConvexCombination::new(terms)? })
}

// ---------------------------------------------------------------------------
// Covers by disjoint transversals

/// A partition of the cells of a Latin square into transversals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransversalCover {
    /// The transversals as members of `Λ₂(3,n)`; they sum to `P`.
    pub parts: Vec<Tensor>,
    /// `M(i,j) = k` when cell `(i,j)` lies in `parts[k]`.
    pub mate: LatinHypercube,
}

impl TransversalCover {
    /// `n⁻¹P` as an average of the parts.
    pub fn certificate(&self) -> Result<HullCertificate> {
        let terms = ConvexCombination::average(self.parts.clone())?;
        Ok(HullCertificate { target: tensor::combine(&terms), s: 2, terms })
    }
}

pub fn transversal_cover(p: &Tensor) -> Result<Option<TransversalCover>> {
    transversal_cover_with(p, &Limits::default())
}

/// Searches for `n` disjoint transversals of `H(P)`; `CapExceeded` means undecided.
pub fn transversal_cover_with(p: &Tensor, limits: &Limits) -> Result<Option<TransversalCover>> {
    if p.dim() != 3 {
        return Err(Error::InvalidArgument(format!("transversal cover needs dimension 3, got {}", p.dim())));
    }
    let h = latin::h_of_p(p)?;
    let n = h.order();
    let ts = permanent::transversals(&h);
    let mut dl = ExactCover::new(n * n);
    for t in &ts {
        let items: Vec<usize> = t.cells.iter().map(|c| c[0] * n + c[1]).collect();
        dl.add_option(&items);
    }
    let Some(sol) = dl.first_solution(limits.cover_nodes, "transversal cover search")? else {
        return Ok(None);
    };
    let mut mate = vec![0; n * n];
    let mut parts = Vec::with_capacity(n);
    for (k, &o) in sol.iter().enumerate() {
        let cells = &ts[o].cells;
        for c in cells {
            mate[c[0] * n + c[1]] = k;
        }
        parts.push(Tensor::from_support(3, n, cells.iter().map(Vec::as_slice))?);
    }
    Ok(Some(TransversalCover { parts, mate: LatinHypercube::new(2, n, mate)? }))
}

// ---------------------------------------------------------------------------

/// Exact rank of the flattened tensors, and whether they are independent.
pub fn rank_independent(ms: &[Tensor]) -> Result<(usize, bool)> {
    if let Some(first) = ms.first() {
        if ms.iter().any(|m| !m.same_shape(first)) {
            return Err(Error::ShapeMismatch("tensors of different shapes".into()));
        }
    }
    let rows: Vec<Vec<Rational>> = ms.iter().map(|m| m.entries().to_vec()).collect();
    let r = linalg::rank(rows);
    Ok((r, r == ms.len()))
}

/// Divides a direction by the gcd of its entries and makes its first nonzero entry positive.
pub fn normalize_direction(t: &Tensor) -> Tensor {
    let nums: Vec<BigInt> = t.entries().iter().map(|v| v.numer().clone()).collect();
    let g = nums.iter().fold(BigInt::zero(), |g, v| num_integer::Integer::gcd(&g, v));
    if g.is_zero() {
        return t.clone();
    }
    let sign = t.entries().iter().find(|v| !v.is_zero()).map_or(BigInt::one(), |v| v.numer().signum());
    let f = Rational::from_integer(g * sign).recip();
    t.scale(&f)
}
