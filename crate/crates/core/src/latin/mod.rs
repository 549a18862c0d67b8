//! Latin hypercubes and their correspondence with 1-permutation matrices.
//!
//! A Latin hypercube of dimension k and order n is a k-dimensional array
//! over the symbols `0..n` in which every line holds each symbol once. It
//! corresponds to the (k+1)-dimensional (0,1)-matrix `P` with
//! `P(x_0, .., x_{k-1}, H(x)) = 1`.
//!
//! Everything is 0-based. The usual 1-based conventions (coordinates and
//! symbols in `1..=n`) differ from these by a uniform shift; see [`delta`] for
//! why the Delta-function statements carry over unchanged.

mod complete;
mod io;
mod species;

pub use complete::{PartialHypercube, completions, for_each_completion, random_completion};
pub use species::{SpeciesOutcome, apply_group, canonical_form, species_equivalent, species_equivalent_with};

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::tensor::{self, IndexTuple, Tensor, increment, volume};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatinHypercube {
    dim: usize,
    order: usize,
    symbols: Vec<usize>,
}

/// A cell of a hypercube together with its symbol.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cell {
    pub coords: IndexTuple,
    pub symbol: usize,
}

/// Shift and coefficients of a linear hypercube `H(x) = s + Σ c_i x_i mod n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Linear {
    pub shift: usize,
    pub coeffs: Vec<usize>,
}

impl LatinHypercube {
    /// Validates the Latin property.
    pub fn new(dim: usize, order: usize, symbols: Vec<usize>) -> Result<Self> {
        let h = LatinHypercube::new_unchecked(dim, order, symbols)?;
        h.validate()?;
        Ok(h)
    }

    fn new_unchecked(dim: usize, order: usize, symbols: Vec<usize>) -> Result<Self> {
        if dim == 0 || order == 0 {
            return Err(Error::InvalidArgument(format!(
                "dimension and order must be positive (got k={dim}, n={order})"
            )));
        }
        if order > 64 {
            return Err(Error::InvalidArgument(format!("order {order} exceeds 64")));
        }
        let len = volume(dim, order)?;
        if symbols.len() != len {
            return Err(Error::ShapeMismatch(format!(
                "expected {len} symbols for k={dim}, n={order}, got {}",
                symbols.len()
            )));
        }
        Ok(LatinHypercube { dim, order, symbols })
    }

    pub(crate) fn from_fn(dim: usize, order: usize, mut f: impl FnMut(&[usize]) -> usize) -> Result<Self> {
        let len = volume(dim, order)?;
        let mut idx = vec![0; dim];
        let mut symbols = Vec::with_capacity(len);
        for _ in 0..len {
            symbols.push(f(&idx));
            increment(&mut idx, order);
        }
        LatinHypercube::new(dim, order, symbols)
    }

    fn validate(&self) -> Result<()> {
        let n = self.order;
        if let Some(&s) = self.symbols.iter().find(|&&s| s >= n) {
            return Err(Error::NotLatin(format!("symbol {s} out of range for order {n}")));
        }
        let full: u64 = if n == 64 { u64::MAX } else { (1 << n) - 1 };
        for axis in 0..self.dim {
            let stride = n.pow((self.dim - 1 - axis) as u32);
            for start in 0..self.symbols.len() {
                // Line starts are the cells whose coordinate on `axis` is zero.
                if !(start / stride).is_multiple_of(n) {
                    continue;
                }
                let mut seen = 0u64;
                for t in 0..n {
                    seen |= 1 << self.symbols[start + t * stride];
                }
                if seen != full {
                    return Err(Error::NotLatin(format!(
                        "line along axis {axis} through {:?} repeats a symbol",
                        self.coords(start)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn symbols(&self) -> &[usize] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn offset(&self, idx: &[usize]) -> usize {
        idx.iter().fold(0, |acc, &i| acc * self.order + i)
    }

    pub fn coords(&self, mut offset: usize) -> IndexTuple {
        let mut idx = vec![0; self.dim];
        for slot in idx.iter_mut().rev() {
            *slot = offset % self.order;
            offset /= self.order;
        }
        idx
    }

    pub fn get(&self, idx: &[usize]) -> usize {
        self.symbols[self.offset(idx)]
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        (0..self.symbols.len()).map(|o| Cell { coords: self.coords(o), symbol: self.symbols[o] })
    }

    pub fn cell(&self, idx: &[usize]) -> Cell {
        Cell { coords: idx.to_vec(), symbol: self.get(idx) }
    }
}

// ---------------------------------------------------------------------------
// Correspondence with 1-permutation matrices

/// The (k+1)-dimensional 1-permutation matrix of `h`.
pub fn p_of_h(h: &LatinHypercube) -> Tensor {
    let mut cells = Vec::with_capacity(h.len());
    for (o, &s) in h.symbols.iter().enumerate() {
        let mut c = h.coords(o);
        c.push(s);
        cells.push(c);
    }
    Tensor::from_support(h.dim + 1, h.order, cells.iter().map(Vec::as_slice))
        .expect("cells are in range")
}

/// Inverse of [`p_of_h`].
pub fn h_of_p(p: &Tensor) -> Result<LatinHypercube> {
    if p.dim() < 2 {
        return Err(Error::NotPermutationMatrix(format!("dimension {} < 2", p.dim())));
    }
    if let Some(v) = tensor::permutation_violation(p, 1)? {
        return Err(Error::NotPermutationMatrix(v.to_string()));
    }
    let n = p.order();
    let mut symbols = vec![0; p.len() / n];
    for off in p.support() {
        symbols[off / n] = off % n;
    }
    LatinHypercube::new(p.dim() - 1, n, symbols)
}

// ---------------------------------------------------------------------------
// Constructions

/// `H(x) = x_0 + .. + x_{k-1} mod n`.
pub fn cyclic(k: usize, n: usize) -> Result<LatinHypercube> {
    LatinHypercube::from_fn(k, n, |x| x.iter().sum::<usize>() % n)
}

/// `H(x) = s + Σ c_i x_i mod n`; every coefficient must be a unit mod n.
pub fn linear_hypercube(k: usize, n: usize, shift: i64, coeffs: &[i64]) -> Result<LatinHypercube> {
    if coeffs.len() != k {
        return Err(Error::InvalidArgument(format!(
            "{} coefficients given for dimension {k}",
            coeffs.len()
        )));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("order must be positive".into()));
    }
    let m = n as i64;
    let reduced: Vec<usize> = coeffs.iter().map(|c| c.rem_euclid(m) as usize).collect();
    if n > 1 {
        if let Some(index) = reduced.iter().position(|&c| c.gcd(&n) != 1) {
            return Err(Error::CoefficientNotCoprime { index, coeff: coeffs[index], order: n });
        }
    }
    let s = shift.rem_euclid(m) as usize;
    LatinHypercube::from_fn(k, n, |x| {
        (s + x.iter().zip(&reduced).map(|(xi, c)| xi * c).sum::<usize>()) % n
    })
}

/// Reads off `s = H(0..0)` and `c_i = H(e_i) - s`, then checks every cell.
pub fn detect_linear(h: &LatinHypercube) -> Option<Linear> {
    let n = h.order;
    let origin = vec![0; h.dim];
    let shift = h.get(&origin);
    let coeffs: Vec<usize> = (0..h.dim)
        .map(|a| {
            if n == 1 {
                return 0;
            }
            let mut e = origin.clone();
            e[a] = 1;
            (h.get(&e) + n - shift) % n
        })
        .collect();
    let ok = h.cells().all(|c| {
        let v = shift + c.coords.iter().zip(&coeffs).map(|(x, k)| x * k).sum::<usize>();
        v % n == c.symbol
    });
    ok.then_some(Linear { shift, coeffs })
}

/// `Δ = (symbol - Σ coords) mod n`.
///
/// The 1-based Delta of the same cell is `(e+1) - Σ(x_i+1) = Δ + 1 - k`, so
/// over a transversal (n cells) the two sums differ by `n(1-k) ≡ 0 mod n`.
/// The parity dichotomy of transversal Delta-sums therefore holds verbatim
/// in 0-based form.
pub fn delta(h: &LatinHypercube, c: &Cell) -> usize {
    let n = h.order;
    let s = c.coords.iter().fold(0, |acc, x| (acc + x) % n);
    (c.symbol % n + n - s) % n
}

/// `H(x_0, .., x_{k-1}) = L(x_0, x_1) + Σ_{i≥2} x_i mod n`.
pub fn lift(l: &LatinHypercube, k: usize) -> Result<LatinHypercube> {
    if l.dim != 2 {
        return Err(Error::InvalidArgument(format!("lift needs a Latin square, got dimension {}", l.dim)));
    }
    if k < 2 {
        return Err(Error::InvalidArgument(format!("lift target dimension {k} < 2")));
    }
    let n = l.order;
    LatinHypercube::from_fn(k, n, |x| (l.get(&x[..2]) + x[2..].iter().sum::<usize>()) % n)
}

fn require_square(l: &LatinHypercube, rows: &[usize], col: usize) -> Result<()> {
    if l.dim != 2 {
        return Err(Error::InvalidArgument(format!("expected a Latin square, got dimension {}", l.dim)));
    }
    if rows.iter().chain([&col]).any(|&v| v >= l.order) {
        return Err(Error::InvalidArgument(format!("row/column index out of range for order {}", l.order)));
    }
    Ok(())
}

/// Columns of the row-cycle between rows `r1` and `r2` through column `start`,
/// in tracing order.
pub fn row_cycle(l: &LatinHypercube, r1: usize, r2: usize, start: usize) -> Result<Vec<usize>> {
    require_square(l, &[r1, r2], start)?;
    if r1 == r2 {
        return Err(Error::InvalidArgument("row-cycle needs two distinct rows".into()));
    }
    let n = l.order;
    let mut col_of = vec![0; n];
    for c in 0..n {
        col_of[l.get(&[r1, c])] = c;
    }
    let mut cols = vec![start];
    let mut c = col_of[l.get(&[r2, start])];
    while c != start {
        cols.push(c);
        c = col_of[l.get(&[r2, c])];
    }
    Ok(cols)
}

/// Swaps the two row segments of the row-cycle through `(r1, start_col)`.
pub fn switch_row_cycle(l: &LatinHypercube, r1: usize, r2: usize, start_col: usize) -> Result<LatinHypercube> {
    let cols = row_cycle(l, r1, r2, start_col)?;
    let mut out = l.clone();
    for c in cols {
        let (a, b) = (l.offset(&[r1, c]), l.offset(&[r2, c]));
        out.symbols.swap(a, b);
    }
    debug_assert!(out.validate().is_ok());
    Ok(out)
}

/// Interchanges hyperplanes `i` and `j` along `axis`. Axis `k` (one past the
/// last coordinate) is the symbol direction and swaps the symbols `i`, `j`.
pub fn interchange_hyperplanes(h: &LatinHypercube, axis: usize, i: usize, j: usize) -> Result<LatinHypercube> {
    let n = h.order;
    if axis > h.dim || i >= n || j >= n {
        return Err(Error::InvalidArgument(format!(
            "hyperplane interchange (axis {axis}, {i}, {j}) out of range for k={}, n={n}",
            h.dim
        )));
    }
    let swap = |v: usize| if v == i { j } else if v == j { i } else { v };
    let symbols = if axis == h.dim {
        h.symbols.iter().map(|&s| swap(s)).collect()
    } else {
        let mut src = vec![0; h.dim];
        (0..h.len())
            .map(|o| {
                let mut idx = h.coords(o);
                idx[axis] = swap(idx[axis]);
                src.copy_from_slice(&idx);
                h.get(&src)
            })
            .collect()
    };
    Ok(LatinHypercube { dim: h.dim, order: n, symbols })
}

/// True iff superimposing the two squares yields all n² ordered pairs.
pub fn are_orthogonal(a: &LatinHypercube, b: &LatinHypercube) -> bool {
    if a.dim != 2 || b.dim != 2 || a.order != b.order {
        return false;
    }
    let n = a.order;
    let mut seen = vec![false; n * n];
    a.symbols
        .iter()
        .zip(&b.symbols)
        .all(|(&x, &y)| !std::mem::replace(&mut seen[x * n + y], true))
}

/// Number of cells where the two hypercubes disagree.
pub fn hamming_distance(a: &LatinHypercube, b: &LatinHypercube) -> usize {
    a.symbols.iter().zip(&b.symbols).filter(|(x, y)| x != y).count()
}
