//! Zero-permanent families, orthogonal pairs, hull witnesses and
//! perturbation scans.

use std::collections::BTreeSet;

use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::latin::{self, LatinHypercube, PartialHypercube};
use crate::limits::Limits;
use crate::permanent;
use crate::polytope::{self, HullCertificate};
use crate::rational::{self, Rational};
use crate::tensor::{self, ConvexCombination, Tensor};

/// Largest `r` with `r(r-1) < n`.
pub fn max_window(n: usize) -> usize {
    let mut r = 1;
    while (r + 1) * r < n {
        r += 1;
    }
    r
}

// ---------------------------------------------------------------------------
// Families agreeing with the cyclic hypercube outside a window

/// Hypercubes of dimension `d-1` that agree with the cyclic one outside `r`
/// consecutive hyperplanes (indices taken mod n) along `axis`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroFamilySpec {
    pub d: usize,
    pub n: usize,
    pub r: usize,
    pub window_start: usize,
    pub axis: usize,
}

impl ZeroFamilySpec {
    /// Maximal `r` and the window on the last `r` hyperplanes of axis 0.
    pub fn new(d: usize, n: usize) -> Self {
        let r = max_window(n);
        ZeroFamilySpec { d, n, r, window_start: n.saturating_sub(r), axis: 0 }
    }

    /// Sets `r` and moves the window back onto the last `r` hyperplanes.
    pub fn with_r(mut self, r: usize) -> Self {
        self.r = r;
        self.window_start = self.n.saturating_sub(r);
        self
    }

    pub fn with_window_start(mut self, start: usize) -> Self {
        self.window_start = start;
        self
    }

    pub fn with_axis(mut self, axis: usize) -> Self {
        self.axis = axis;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let &ZeroFamilySpec { d, n, r, window_start, axis } = self;
        if d < 3 || d % 2 == 0 {
            return Err(Error::InvalidArgument(format!("d = {d} must be odd and at least 3")));
        }
        if n < 2 || n % 2 == 1 {
            return Err(Error::InvalidArgument(format!("n = {n} must be even")));
        }
        if r == 0 || r * (r - 1) >= n {
            return Err(Error::InvalidArgument(format!("window length r = {r} needs 1 <= r and r(r-1) < n = {n}")));
        }
        if window_start >= n || axis >= d - 1 {
            return Err(Error::InvalidArgument(format!("window start {window_start} or axis {axis} out of range")));
        }
        Ok(())
    }

    pub fn in_window(&self, x: &[usize]) -> bool {
        (x[self.axis] + self.n - self.window_start) % self.n < self.r
    }

    /// `cyclic(d-1, n)` with the window cleared.
    pub fn partial(&self) -> Result<PartialHypercube> {
        self.validate()?;
        let c = latin::cyclic(self.d - 1, self.n)?;
        Ok(PartialHypercube::from_hypercube(&c, |x| self.in_window(x)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyMode {
    Enumerate,
    /// `count` independent randomized completions, so repeats are possible.
    Sample { count: usize, seed: u64 },
}

pub fn zero_family(spec: &ZeroFamilySpec, mode: FamilyMode) -> Result<Vec<LatinHypercube>> {
    zero_family_with(spec, mode, &Limits::default())
}

pub fn zero_family_with(spec: &ZeroFamilySpec, mode: FamilyMode, limits: &Limits) -> Result<Vec<LatinHypercube>> {
    let p = spec.partial()?;
    match mode {
        FamilyMode::Enumerate => latin::completions(&p, limits.enumeration_nodes),
        FamilyMode::Sample { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count)
                .map(|_| {
                    latin::random_completion(&p, &mut rng, limits.enumeration_nodes)?
                        .ok_or_else(|| Error::InvalidArgument("window has no completion".into()))
                })
                .collect()
        }
    }
}

// ---------------------------------------------------------------------------
// Linearly independent zero-permanent squares

/// The square obtained from `cyclic(2,n)` by switching the n/2-cycle between
/// rows `2a-2` and `2a` through column `2b-2`, then the intercalate this
/// creates in rows `2a-1`, `2a-2` at columns `2b-2`, `2b-1` (0-based rows
/// and columns; `a`, `b` count from one).
pub fn lab(n: usize, a: usize, b: usize) -> Result<LatinHypercube> {
    if n < 4 || n % 2 == 1 {
        return Err(Error::InvalidArgument(format!("L_(a,b) needs even n >= 4, got {n}")));
    }
    if a == 0 || 2 * a >= n || b == 0 || b > n / 2 {
        return Err(Error::InvalidArgument(format!("(a, b) = ({a}, {b}) out of range for n = {n}")));
    }
    let (row, col) = (2 * a - 2, 2 * b - 2);
    let c = latin::cyclic(2, n)?;
    let step = latin::switch_row_cycle(&c, row, row + 2, col)?;
    latin::switch_row_cycle(&step, row + 1, row, col)
}

/// Linearly independent members of `Λ₁(d,n)` all of whose combinations with
/// `P(cyclic(d-1,n))` have zero permanent.
pub fn independent_zero_set(d: usize, n: usize) -> Result<Vec<Tensor>> {
    if d < 3 || d.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("d = {d} must be odd and at least 3")));
    }
    if n < 4 || n % 2 == 1 {
        return Err(Error::InvalidArgument(format!("n = {n} must be even and at least 4")));
    }
    if n <= 6 {
        let c = latin::cyclic(d - 1, n)?;
        return Ok(vec![latin::p_of_h(&latin::interchange_hyperplanes(&c, 0, 0, 1)?)]);
    }
    let r = max_window(n);
    let mut out = Vec::new();
    for a in 1..=(r - 1) / 2 {
        for b in 1..=n / 2 {
            out.push(latin::p_of_h(&latin::lift(&lab(n, a, b)?, d - 1)?));
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// The order-6 example

const A6_DATA: &str = include_str!("../data/a6.txt");

struct A6Parsed {
    matrix: Tensor,
    terms: Vec<(Rational, Tensor)>,
}

fn parse_a6() -> Result<A6Parsed> {
    let n = 6;
    let mut entries = Vec::with_capacity(216);
    let mut terms = Vec::new();
    for line in A6_DATA.lines().map(str::trim) {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        if line.starts_with("term") {
            tokens.next();
            let w = rational::parse(tokens.next().ok_or_else(|| Error::Parse("missing weight".into()))?)?;
            let cells = tokens
                .enumerate()
                .map(|(layer, t)| {
                    let b = t.as_bytes();
                    if b.len() != 2 || !(b'1'..=b'6').contains(&b[0]) || !(b'1'..=b'6').contains(&b[1]) {
                        return Err(Error::Parse(format!("bad cell {t:?}")));
                    }
                    Ok(vec![layer, (b[0] - b'1') as usize, (b[1] - b'1') as usize])
                })
                .collect::<Result<Vec<_>>>()?;
            if cells.len() != n {
                return Err(Error::Parse(format!("term with {} layers", cells.len())));
            }
            terms.push((w, Tensor::from_support(3, n, cells.iter().map(Vec::as_slice))?));
        } else {
            for t in tokens {
                entries.push(rational::parse(t)?);
            }
        }
    }
    Ok(A6Parsed { matrix: Tensor::new(3, n, entries)?, terms })
}

/// The order-6 matrix in `Ω₁(3,6)`, indexed `(layer, row, column)`.
pub fn a6() -> Tensor {
    parse_a6().expect("bundled data parses").matrix
}

/// `(1/6)·a6()` as a convex combination of eight members of `Λ₂(3,6)`.
pub fn a6_certificate() -> HullCertificate {
    let parsed = parse_a6().expect("bundled data parses");
    let sixth = rational::ratio(1, 6);
    let terms = parsed.terms.into_iter().map(|(w, t)| (w * &sixth, t)).collect();
    HullCertificate {
        target: parsed.matrix.scale(&sixth),
        s: 2,
        terms: ConvexCombination::new(terms).expect("weights sum to one"),
    }
}

// ---------------------------------------------------------------------------
// Orthogonal pairs

fn gf_mul(mut a: usize, mut b: usize, m: u32, poly: usize) -> usize {
    let mut out = 0;
    while b != 0 {
        if b & 1 == 1 {
            out ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a >> m & 1 == 1 {
            a ^= poly;
        }
    }
    out
}

/// Irreducible polynomials over GF(2), bit i = coefficient of x^i.
fn irreducible(m: u32) -> Option<usize> {
    Some(match m {
        1 => 0b11,
        2 => 0b111,
        3 => 0b1011,
        4 => 0b10011,
        5 => 0b100101,
        6 => 0b1000011,
        _ => return None,
    })
}

fn field_pair(n: usize) -> Option<(LatinHypercube, LatinHypercube)> {
    let m = n.trailing_zeros();
    let poly = irreducible(m)?;
    let alpha = 2;
    let l1 = LatinHypercube::from_fn(2, n, |x| x[0] ^ x[1]).ok()?;
    let l2 = LatinHypercube::from_fn(2, n, |x| gf_mul(alpha, x[0], m, poly) ^ x[1]).ok()?;
    Some((l1, l2))
}

fn product_square(a: &LatinHypercube, b: &LatinHypercube) -> LatinHypercube {
    let m = b.order();
    LatinHypercube::from_fn(2, a.order() * m, |x| {
        a.get(&[x[0] / m, x[1] / m]) * m + b.get(&[x[0] % m, x[1] % m])
    })
    .expect("products of Latin squares are Latin")
}

const MOLS_SEED: u64 = 0x6d6f6c73;
const MOLS_ATTEMPTS: usize = 64;

/// Random squares until one has a transversal cover; its mate completes the pair.
fn searched_pair(n: usize, limits: &Limits) -> Result<(LatinHypercube, LatinHypercube)> {
    let mut rng = ChaCha8Rng::seed_from_u64(MOLS_SEED ^ n as u64);
    let empty = PartialHypercube::empty(2, n)?;
    for _ in 0..MOLS_ATTEMPTS {
        let l = latin::random_completion(&empty, &mut rng, limits.enumeration_nodes)?
            .expect("the empty square completes");
        match polytope::transversal_cover_with(&latin::p_of_h(&l), limits) {
            Ok(Some(cover)) => return Ok((l, cover.mate)),
            Ok(None) | Err(Error::CapExceeded { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::CapExceeded { what: "orthogonal mate search", cap: MOLS_ATTEMPTS as u64 })
}

/// Two orthogonal Latin squares of order `n`, for `n > 2`, `n ≠ 6`.
pub fn mols_pair(n: usize) -> Result<(LatinHypercube, LatinHypercube)> {
    mols_pair_with(n, &Limits::default())
}

pub fn mols_pair_with(n: usize, limits: &Limits) -> Result<(LatinHypercube, LatinHypercube)> {
    if n <= 2 || n == 6 || n > 64 {
        return Err(Error::InvalidArgument(format!("no orthogonal pair is constructed for n = {n}")));
    }
    if n % 2 == 1 {
        return Ok((latin::linear_hypercube(2, n, 0, &[1, 1])?, latin::linear_hypercube(2, n, 0, &[2, 1])?));
    }
    if n.is_power_of_two() {
        return field_pair(n).ok_or_else(|| Error::InvalidArgument(format!("no field of order {n}")));
    }
    if n.is_multiple_of(4) {
        let two = 1 << n.trailing_zeros();
        let (a1, a2) = mols_pair_with(two, limits)?;
        let (b1, b2) = mols_pair_with(n / two, limits)?;
        return Ok((product_square(&a1, &b1), product_square(&a2, &b2)));
    }
    searched_pair(n, limits)
}

// ---------------------------------------------------------------------------
// Hull witnesses

/// `matrix ∈ Ω₁(d,n)`, different from the uniform matrix, together with a
/// certificate that `n^{2-d}·matrix` is a convex combination of
/// (d-1)-permutation matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HullWitness {
    pub matrix: Tensor,
    pub certificate: HullCertificate,
}

fn base_witness(n: usize, limits: &Limits) -> Result<HullWitness> {
    if n == 6 {
        return Ok(HullWitness { matrix: a6(), certificate: a6_certificate() });
    }
    let (l1, _) = mols_pair_with(n, limits)?;
    let p = latin::p_of_h(&l1);
    let cover = polytope::transversal_cover_with(&p, limits)?
        .ok_or_else(|| Error::InvalidArgument(format!("first square of order {n} has no orthogonal mate")))?;
    Ok(HullWitness { matrix: p, certificate: cover.certificate()? })
}

/// Builds the witness for dimension `d ≥ 3` from the three-dimensional one
/// by repeated products with it.
pub fn hull_witness(d: usize, n: usize) -> Result<HullWitness> {
    hull_witness_with(d, n, &Limits::default())
}

pub fn hull_witness_with(d: usize, n: usize, limits: &Limits) -> Result<HullWitness> {
    if d < 3 || n < 3 {
        return Err(Error::InvalidArgument(format!("hull witness needs d >= 3 and n >= 3, got d={d}, n={n}")));
    }
    let base = base_witness(n, limits)?;
    let mut current = base.clone();
    for dim in 4..=d {
        let size = (current.certificate.terms.len() as u64)
            .saturating_mul(base.certificate.terms.len() as u64)
            .saturating_mul(tensor::volume(dim, n)? as u64);
        if size > limits.enumeration_nodes {
            return Err(Error::CapExceeded { what: "hull witness product", cap: limits.enumeration_nodes });
        }
        let matrix = tensor::product(&current.matrix, &base.matrix)?;
        let mut merged: Vec<(Rational, Tensor)> = Vec::new();
        for (c, p) in current.certificate.terms.terms() {
            for (e, q) in base.certificate.terms.terms() {
                let t = tensor::product(p, q)?;
                let w = c * e;
                match merged.iter_mut().find(|(_, u)| *u == t) {
                    Some((v, _)) => *v += w,
                    None => merged.push((w, t)),
                }
            }
        }
        let scale = Rational::new(One::one(), num_traits::pow(num_bigint::BigInt::from(n), dim - 2));
        current = HullWitness {
            certificate: HullCertificate {
                target: matrix.scale(&scale),
                s: dim - 1,
                terms: ConvexCombination::new(merged)?,
            },
            matrix,
        };
    }
    Ok(current)
}

// ---------------------------------------------------------------------------
// Perturbations of the uniform matrix

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanResult {
    pub epsilons: Vec<Rational>,
    /// `Per((1-ε)U + εV)` for each ε.
    pub values: Vec<Rational>,
    /// `Per(U) = (n!)^{d-1} / n^n`.
    pub baseline: Rational,
}

pub const DEFAULT_EPSILONS: [(i64, i64); 4] = [(1, 100), (1, 50), (1, 20), (1, 10)];

pub fn default_epsilons() -> Vec<Rational> {
    DEFAULT_EPSILONS.iter().map(|&(p, q)| rational::ratio(p, q)).collect()
}

/// `(n!)^{d-1} / n^n`.
pub fn uniform_permanent(d: usize, n: usize) -> Rational {
    Rational::new(
        num_traits::pow(rational::factorial(n), d - 1),
        num_traits::pow(num_bigint::BigInt::from(n), n),
    )
}

/// Exact permanents along the segment from the uniform matrix towards `V`;
/// each ε must lie in `[0, 1]`.
pub fn perturbation_scan(v: &Tensor, epsilons: &[Rational]) -> Result<ScanResult> {
    if let Some(bad) = tensor::polystochastic_violation(v, 1)? {
        return Err(Error::NotPolystochastic(bad.to_string()));
    }
    if let Some(e) = epsilons.iter().find(|e| rational::is_negative(e) || **e > Rational::one()) {
        return Err(Error::InvalidArgument(format!("epsilon {e} outside [0, 1]")));
    }
    let u = Tensor::uniform(v.dim(), v.order())?;
    let values = epsilons
        .iter()
        .map(|e| Ok(permanent::permanent1(&u.lerp(v, e)?)?.value))
        .collect::<Result<Vec<_>>>()?;
    Ok(ScanResult { epsilons: epsilons.to_vec(), values, baseline: uniform_permanent(v.dim(), v.order()) })
}

// ---------------------------------------------------------------------------

/// Number of species among the lifts to dimension `d-1` of the Latin squares
/// agreeing with `cyclic(2,n)` outside the last `r` rows, `r` maximal.
pub fn count_zero_species(n: usize, d: usize) -> Result<usize> {
    count_zero_species_with(n, d, &Limits::default())
}

pub fn count_zero_species_with(n: usize, d: usize, limits: &Limits) -> Result<usize> {
    if n < 2 || n % 2 == 1 || n > 6 {
        return Err(Error::InvalidArgument(format!("species count needs even n <= 6, got {n}")));
    }
    if d < 3 || d.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("d = {d} must be odd and at least 3")));
    }
    let r = max_window(n);
    let c = latin::cyclic(2, n)?;
    let p = PartialHypercube::from_hypercube(&c, |x| x[0] >= n - r);
    let mut forms = BTreeSet::new();
    for l in latin::completions(&p, limits.enumeration_nodes)? {
        let h = latin::lift(&l, d - 1)?;
        forms.insert(latin::canonical_form(&h, limits.species_nodes)?);
    }
    Ok(forms.len())
}
