//! Exact multidimensional permanents.
//!
//! A 1-diagonal of a d-dimensional matrix of order n is a set of n cells
//! `(i, σ_2(i), .., σ_d(i))` with every `σ_k` a permutation. The 1-permanent
//! sums the products over all of them. The search assigns `i = 0, 1, ..`
//! in order and, for each `i`, walks the nonzero entries of the hyperplane
//! `A(i, ..)` in row-major order, keeping one used-value bitmask per axis.
//! Zero entries are never visited, so the cost tracks the number of partial
//! diagonals inside the support.
//!
//! Entries are rescaled to integers over their common denominator first; the
//! sums run in checked `i128` and are redone with big integers on overflow.

use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_cover::ExactCover;
use crate::latin::{self, LatinHypercube};
use crate::limits::Limits;
use crate::rational::Rational;
use crate::tensor::{IndexTuple, Tensor, combinations, increment};

/// An s-diagonal: n^s cells, no two in a common (d-s)-plane.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Diagonal {
    pub s: usize,
    pub cells: Vec<IndexTuple>,
}

impl Diagonal {
    /// Checks size, bounds and that no two cells share `s` coordinate positions.
    pub fn is_valid_for(&self, dim: usize, order: usize) -> bool {
        if self.s == 0 || self.s >= dim {
            return false;
        }
        let Some(expected) = order.checked_pow(self.s as u32) else {
            return false;
        };
        if self.cells.len() != expected
            || self.cells.iter().any(|c| c.len() != dim || c.iter().any(|&x| x >= order))
        {
            return false;
        }
        for fixed in combinations(dim, self.s) {
            let mut seen = std::collections::HashSet::new();
            for c in &self.cells {
                let key: Vec<usize> = fixed.iter().map(|&a| c[a]).collect();
                if !seen.insert(key) {
                    return false;
                }
            }
        }
        true
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.cells).expect("cells serialize")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermanentResult {
    pub value: Rational,
    /// Diagonals whose entries are all nonzero (positive for nonnegative input).
    pub diagonal_count: u64,
    /// The first such diagonal in enumeration order.
    pub witness: Option<Diagonal>,
}

// ---------------------------------------------------------------------------
// Support search

trait Exact: Clone + Send + Sync {
    fn nil() -> Self;
    fn mul(&self, other: &Self) -> Option<Self>;
    fn add(&self, other: &Self) -> Option<Self>;
}

impl Exact for i128 {
    fn nil() -> Self {
        0
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        self.checked_mul(*other)
    }
    fn add(&self, other: &Self) -> Option<Self> {
        self.checked_add(*other)
    }
}

impl Exact for BigInt {
    fn nil() -> Self {
        Zero::zero()
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn add(&self, other: &Self) -> Option<Self> {
        Some(self + other)
    }
}

/// Nonzero entries of each hyperplane `A(i, ..)`, with the bit masks of
/// their trailing coordinates (axis `a ≥ 1`, value `v` → bit `(a-1)n + v`).
struct Support<T> {
    dim: usize,
    order: usize,
    words: usize,
    levels: Vec<Level<T>>,
}

struct Level<T> {
    coords: Vec<usize>,
    masks: Vec<u64>,
    values: Vec<T>,
}

impl<T> Level<T> {
    fn len(&self) -> usize {
        self.values.len()
    }
}

impl<T: Exact> Support<T> {
    fn build(a: &Tensor, value: impl Fn(usize) -> Option<T>) -> Support<T> {
        let (d, n) = (a.dim(), a.order());
        let words = ((d - 1) * n).div_ceil(64).max(1);
        let per_level = a.len() / n;
        let mut levels = Vec::with_capacity(n);
        for i in 0..n {
            let mut level = Level { coords: Vec::new(), masks: Vec::new(), values: Vec::new() };
            let mut rest = vec![0; d - 1];
            for off in i * per_level..(i + 1) * per_level {
                if let Some(v) = value(off) {
                    let mut mask = vec![0u64; words];
                    for (k, &x) in rest.iter().enumerate() {
                        let bit = k * n + x;
                        mask[bit / 64] |= 1 << (bit % 64);
                    }
                    level.coords.extend_from_slice(&rest);
                    level.masks.extend_from_slice(&mask);
                    level.values.push(v);
                }
                increment(&mut rest, n);
            }
            levels.push(level);
        }
        Support { dim: d, order: n, words, levels }
    }

    #[inline]
    fn fits(&self, level: usize, c: usize, used: &[u64]) -> bool {
        let m = &self.levels[level].masks[c * self.words..(c + 1) * self.words];
        m.iter().zip(used).all(|(a, b)| a & b == 0)
    }

    #[inline]
    fn toggle(&self, level: usize, c: usize, used: &mut [u64]) {
        let m = &self.levels[level].masks[c * self.words..(c + 1) * self.words];
        for (u, x) in used.iter_mut().zip(m) {
            *u ^= x;
        }
    }

    fn cells(&self, path: &[usize]) -> Vec<IndexTuple> {
        let k = self.dim - 1;
        path.iter()
            .enumerate()
            .map(|(i, &c)| {
                let mut cell = vec![i];
                cell.extend_from_slice(&self.levels[i].coords[c * k..(c + 1) * k]);
                cell
            })
            .collect()
    }

    /// Sum of products below `level`; `None` on overflow.
    fn sum_from(
        &self,
        level: usize,
        used: &mut [u64],
        prefix: &T,
        path: &mut Vec<usize>,
        out: &mut Tally<T>,
    ) -> Option<()> {
        if level == self.order {
            out.sum = out.sum.add(prefix)?;
            out.count += 1;
            if out.witness.is_none() {
                out.witness = Some(path.clone());
            }
            return Some(());
        }
        for c in 0..self.levels[level].len() {
            if !self.fits(level, c, used) {
                continue;
            }
            let p = prefix.mul(&self.levels[level].values[c])?;
            self.toggle(level, c, used);
            path.push(c);
            let r = self.sum_from(level + 1, used, &p, path, out);
            path.pop();
            self.toggle(level, c, used);
            r?;
        }
        Some(())
    }

    fn tally(&self) -> Option<Tally<T>> {
        if self.order == 0 {
            return None;
        }
        let branches: Vec<Option<Tally<T>>> = (0..self.levels[0].len())
            .into_par_iter()
            .map(|c| {
                let mut used = vec![0u64; self.words];
                self.toggle(0, c, &mut used);
                let mut out = Tally::empty();
                let mut path = vec![c];
                self.sum_from(1, &mut used, &self.levels[0].values[c].clone(), &mut path, &mut out)?;
                Some(out)
            })
            .collect();
        let mut total: Tally<T> = Tally::empty();
        for b in branches {
            let b = b?;
            total.sum = total.sum.add(&b.sum)?;
            total.count += b.count;
            if total.witness.is_none() {
                total.witness = b.witness;
            }
        }
        Some(total)
    }

    /// Visits diagonals in enumeration order until the visitor breaks.
    fn visit_from<F>(&self, level: usize, used: &mut [u64], path: &mut Vec<usize>, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        if level == self.order {
            return visit(path);
        }
        for c in 0..self.levels[level].len() {
            if !self.fits(level, c, used) {
                continue;
            }
            self.toggle(level, c, used);
            path.push(c);
            let r = self.visit_from(level + 1, used, path, visit);
            path.pop();
            self.toggle(level, c, used);
            r?;
        }
        ControlFlow::Continue(())
    }

    fn visit<F>(&self, mut visit: F)
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        let mut used = vec![0u64; self.words];
        let _ = self.visit_from(0, &mut used, &mut Vec::with_capacity(self.order), &mut visit);
    }
}

struct Tally<T> {
    sum: T,
    count: u64,
    witness: Option<Vec<usize>>,
}

impl<T: Exact> Tally<T> {
    fn empty() -> Self {
        Tally { sum: T::nil(), count: 0, witness: None }
    }
}

impl Support<i128> {
    /// The support of `P(h)` without building the tensor.
    fn of_hypercube(h: &LatinHypercube) -> Support<i128> {
        let (k, n) = (h.dim(), h.order());
        let d = k + 1;
        let words = ((d - 1) * n).div_ceil(64).max(1);
        let per_level = h.len() / n;
        let mut levels = Vec::with_capacity(n);
        for i in 0..n {
            let mut level = Level { coords: Vec::new(), masks: Vec::new(), values: Vec::new() };
            for o in i * per_level..(i + 1) * per_level {
                let mut rest = h.coords(o)[1..].to_vec();
                rest.push(h.symbols()[o]);
                let mut mask = vec![0u64; words];
                for (a, &x) in rest.iter().enumerate() {
                    let bit = a * n + x;
                    mask[bit / 64] |= 1 << (bit % 64);
                }
                level.coords.extend_from_slice(&rest);
                level.masks.extend_from_slice(&mask);
                level.values.push(1);
            }
            levels.push(level);
        }
        Support { dim: d, order: n, words, levels }
    }
}

fn support_only(a: &Tensor) -> Support<i128> {
    Support::build(a, |off| (!a.entries()[off].is_zero()).then_some(1))
}

fn check_dim(a: &Tensor) -> Result<()> {
    if a.dim() < 2 {
        return Err(Error::InvalidArgument(format!("permanent needs dimension >= 2, got {}", a.dim())));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Public operations

/// The exact 1-permanent with the count of nonzero diagonals and the first one found.
pub fn permanent1(a: &Tensor) -> Result<PermanentResult> {
    check_dim(a)?;
    let (nums, den) = a.integer_form();
    let small: Option<Vec<i128>> = nums.iter().map(|v| v.to_i64().map(i128::from)).collect();
    let via_small = small.and_then(|small| {
        let sup = Support::build(a, |off| (small[off] != 0).then_some(small[off]));
        sup.tally().map(|t| (BigInt::from(t.sum), t.count, t.witness.map(|w| sup.cells(&w))))
    });
    let (sum, count, witness) = match via_small {
        Some(r) => r,
        None => {
            let sup = Support::build(a, |off| (!nums[off].is_zero()).then(|| nums[off].clone()));
            let t = sup.tally().expect("big integers never overflow");
            (t.sum, t.count, t.witness.map(|w| sup.cells(&w)))
        }
    };
    let scale = num_traits::pow(den, a.order());
    Ok(PermanentResult {
        value: Rational::new(sum, scale),
        diagonal_count: count,
        witness: witness.map(|cells| Diagonal { s: 1, cells }),
    })
}

/// The first nonzero 1-diagonal in enumeration order, if any.
pub fn first_nonzero_diagonal(a: &Tensor) -> Result<Option<Diagonal>> {
    check_dim(a)?;
    let sup = support_only(a);
    let mut found = None;
    sup.visit(|path| {
        found = Some(sup.cells(path));
        ControlFlow::Break(())
    });
    Ok(found.map(|cells| Diagonal { s: 1, cells }))
}

/// Whether `permanent1(a) > 0`; decided on the support with early exit.
pub fn has_positive_diagonal(a: &Tensor) -> Result<bool> {
    if let Some(idx) = a.first_negative() {
        return Err(Error::NegativeEntry(idx));
    }
    Ok(first_nonzero_diagonal(a)?.is_some())
}

/// Every nonzero 1-diagonal, in enumeration order.
pub fn nonzero_diagonals(a: &Tensor) -> Result<Vec<Diagonal>> {
    check_dim(a)?;
    let sup = support_only(a);
    let mut out = Vec::new();
    sup.visit(|path| {
        out.push(Diagonal { s: 1, cells: sup.cells(path) });
        ControlFlow::Continue(())
    });
    Ok(out)
}

/// The exact s-permanent, by exact-cover search for supports of
/// (d-s)-permutation matrices inside `Supp(A)`.
pub fn permanent_s(a: &Tensor, s: usize) -> Result<PermanentResult> {
    permanent_s_with(a, s, &Limits::default())
}

pub fn permanent_s_with(a: &Tensor, s: usize, limits: &Limits) -> Result<PermanentResult> {
    let (d, n) = (a.dim(), a.order());
    if s == 0 || s >= d {
        return Err(Error::PlaneOrderOutOfRange { s, dim: d });
    }
    let (nums, den) = a.integer_form();
    let planes_per = n.pow(s as u32);
    let fixed_sets = combinations(d, s);
    let mut dl = ExactCover::new(fixed_sets.len() * planes_per);
    let support = a.support();
    for &off in &support {
        let c = a.coords(off);
        let items: Vec<usize> = fixed_sets
            .iter()
            .enumerate()
            .map(|(f, axes)| f * planes_per + axes.iter().fold(0, |acc, &ax| acc * n + c[ax]))
            .collect();
        dl.add_option(&items);
    }
    let mut sum = BigInt::zero();
    let mut count = 0u64;
    let mut witness: Option<Vec<usize>> = None;
    dl.search(limits.permanent_s_nodes, "s-permanent search", |sol| {
        let prod = sol.iter().fold(BigInt::one(), |acc, &o| acc * &nums[support[o]]);
        sum += prod;
        count += 1;
        if witness.is_none() {
            let mut cells: Vec<usize> = sol.iter().map(|&o| support[o]).collect();
            cells.sort_unstable();
            witness = Some(cells);
        }
        ControlFlow::Continue(())
    })?;
    let scale = num_traits::pow(den, planes_per);
    Ok(PermanentResult {
        value: Rational::new(sum, scale),
        diagonal_count: count,
        witness: witness.map(|offs| Diagonal { s, cells: offs.into_iter().map(|o| a.coords(o)).collect() }),
    })
}

/// Number of transversals of `h`, i.e. the permanent of `P(h)`.
pub fn count_transversals(h: &LatinHypercube) -> u64 {
    Support::of_hypercube(h).tally().map_or(0, |t| t.count)
}

/// Visits the transversals of `h`, as diagonals of `P(h)`, in enumeration
/// order until the visitor breaks.
pub fn for_each_transversal<F>(h: &LatinHypercube, mut visit: F)
where
    F: FnMut(Diagonal) -> ControlFlow<()>,
{
    let sup = Support::of_hypercube(h);
    sup.visit(|path| visit(Diagonal { s: 1, cells: sup.cells(path) }));
}

/// All transversals of `h` as diagonals of `P(h)`, in enumeration order.
pub fn transversals(h: &LatinHypercube) -> Vec<Diagonal> {
    let mut out = Vec::new();
    for_each_transversal(h, |t| {
        out.push(t);
        ControlFlow::Continue(())
    });
    out
}

/// A mixed transversal of the family: a positive diagonal of the support of
/// `Σ P(H_i)`. Returns the first one in enumeration order.
pub fn mixed_transversal_exists(hs: &[LatinHypercube]) -> Result<Option<Diagonal>> {
    let Some(first) = hs.first() else {
        return Err(Error::InvalidArgument("empty family".into()));
    };
    if let Some(h) = hs.iter().find(|h| h.dim() != first.dim() || h.order() != first.order()) {
        return Err(Error::ShapeMismatch(format!(
            "(k={}, n={}) vs (k={}, n={})",
            h.dim(),
            h.order(),
            first.dim(),
            first.order()
        )));
    }
    let mut union = latin::p_of_h(first);
    for h in &hs[1..] {
        union = union.checked_add(&latin::p_of_h(h))?;
    }
    first_nonzero_diagonal(&union)
}

/// `Σ Δ(α) mod n` over a transversal of `h`, checked against the parity
/// dichotomy: 0 when n is odd or the matrix dimension k+1 is even, n/2 otherwise.
pub fn delta_sum_check(h: &LatinHypercube, t: &Diagonal) -> Result<usize> {
    let (k, n) = (h.dim(), h.order());
    if t.s != 1 || !t.is_valid_for(k + 1, n) {
        return Err(Error::NotTransversal(format!("{:?} is not a diagonal of a {}-dimensional matrix", t.cells, k + 1)));
    }
    let mut sum = 0;
    for cell in &t.cells {
        let (coords, symbol) = cell.split_at(k);
        if h.get(coords) != symbol[0] {
            return Err(Error::NotTransversal(format!("cell {cell:?} is not in the hypercube")));
        }
        sum = (sum + latin::delta(h, &h.cell(coords))) % n;
    }
    let expected = if n % 2 == 1 || (k + 1) % 2 == 0 { 0 } else { n / 2 };
    if sum != expected {
        return Err(Error::DeltaSumViolated { found: sum, expected, order: n });
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::latin::{cyclic, interchange_hyperplanes, linear_hypercube};
    use crate::rational::{int, ratio};
    use crate::tensor::uniform;
    use itertools::Itertools;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Independent oracle: Σ over permutation tuples of Π A(i, σ_2(i), ..).
    fn naive(a: &Tensor) -> Rational {
        let (d, n) = (a.dim(), a.order());
        let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
        let mut total = Rational::zero();
        for tuple in (0..d - 1).map(|_| perms.iter()).multi_cartesian_product() {
            let mut prod = Rational::one();
            for i in 0..n {
                let mut idx = vec![i];
                idx.extend(tuple.iter().map(|p| p[i]));
                prod *= a.get(&idx);
            }
            total += prod;
        }
        total
    }

    fn random_tensor(d: usize, n: usize, rng: &mut ChaCha8Rng) -> Tensor {
        Tensor::from_fn(d, n, |_| {
            if rng.gen_bool(0.3) {
                int(0)
            } else {
                ratio(rng.gen_range(-3..7), rng.gen_range(1..5))
            }
        })
        .unwrap()
    }

    #[test]
    fn permanent1_examples() {
        assert_eq!(permanent1(&Tensor::ones(3, 2).unwrap()).unwrap().value, int(4));
        let z = permanent1(&latin::p_of_h(&cyclic(2, 4).unwrap())).unwrap();
        assert_eq!(z.value, int(0));
        assert_eq!(z.diagonal_count, 0);
        assert!(z.witness.is_none());
        assert_eq!(permanent1(&latin::p_of_h(&cyclic(2, 5).unwrap())).unwrap().value, int(15));
        assert_eq!(permanent1(&uniform(3, 4).unwrap()).unwrap().value, ratio(9, 4));
    }

    #[test]
    fn matches_naive_on_random_signed_tensors() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..30 {
            let n = rng.gen_range(1..=3);
            let d = rng.gen_range(2..=4);
            let a = random_tensor(d, n, &mut rng);
            assert_eq!(permanent1(&a).unwrap().value, naive(&a));
        }
    }

    #[test]
    fn classical_two_dimensional_permanent() {
        let a = Tensor::from_fn(2, 3, |i| int((i[0] * 3 + i[1] + 1) as i64)).unwrap();
        // per [[1,2,3],[4,5,6],[7,8,9]] = 450
        assert_eq!(permanent1(&a).unwrap().value, int(450));
    }

    #[test]
    fn overflow_falls_back_to_big_integers() {
        let big = crate::rational::parse("100000000000000000000").unwrap();
        let a = Tensor::new(2, 2, vec![big.clone(), big.clone(), big.clone(), big.clone()]).unwrap();
        let expect = &big * &big * int(2);
        assert_eq!(permanent1(&a).unwrap().value, expect);
        let b = Tensor::new(3, 2, vec![crate::rational::parse("3000000000000000000").unwrap(); 8]).unwrap();
        assert_eq!(permanent1(&b).unwrap().value, naive(&b));
    }

    #[test]
    fn witness_is_first_in_enumeration_order() {
        let r = permanent1(&Tensor::ones(3, 3).unwrap()).unwrap();
        let w = r.witness.unwrap();
        assert_eq!(w.cells, vec![vec![0, 0, 0], vec![1, 1, 1], vec![2, 2, 2]]);
        assert!(w.is_valid_for(3, 3));
        assert_eq!(r.diagonal_count, 36);
    }

    #[test]
    fn permanent1_rejects_vectors() {
        assert!(permanent1(&Tensor::ones(1, 3).unwrap()).is_err());
    }

    #[test]
    fn permanent_s_latin_square_count() {
        // 2-diagonals of J_3^3 are the supports of order-3 Latin squares.
        let r = permanent_s(&Tensor::ones(3, 3).unwrap(), 2).unwrap();
        assert_eq!(r.value, int(12));
        assert_eq!(r.diagonal_count, 12);
        assert!(r.witness.unwrap().is_valid_for(3, 3));
        let r = permanent_s(&Tensor::ones(3, 4).unwrap(), 2).unwrap();
        assert_eq!(r.value, int(576));
    }

    #[test]
    fn permanent_s_agrees_with_permanent1() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let n = rng.gen_range(1..=3);
            let d = rng.gen_range(2..=3);
            let a = random_tensor(d, n, &mut rng);
            assert_eq!(permanent_s(&a, 1).unwrap().value, permanent1(&a).unwrap().value);
        }
    }

    /// Oracle: decompositions of cyclic(2,3) into three disjoint transversals.
    #[test]
    fn permanent_s_counts_transversal_partitions() {
        let h = cyclic(2, 3).unwrap();
        let ts = transversals(&h);
        let mut partitions = 0;
        for combo in ts.iter().combinations(3) {
            let mut cells: Vec<&IndexTuple> = combo.iter().flat_map(|t| t.cells.iter()).collect();
            cells.sort();
            cells.dedup();
            if cells.len() == 9 {
                partitions += 1;
            }
        }
        let p = latin::p_of_h(&h);
        assert_eq!(permanent_s(&p, 2).unwrap().value, int(partitions));
        assert_eq!(partitions, 1);
    }

    #[test]
    fn permanent_s_range_and_cap() {
        let a = Tensor::ones(3, 3).unwrap();
        assert!(matches!(permanent_s(&a, 3), Err(Error::PlaneOrderOutOfRange { .. })));
        assert!(matches!(
            permanent_s_with(&a, 2, &Limits::uniform(4)),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn transversals_match_diagonals_of_the_matrix() {
        for h in [cyclic(2, 5).unwrap(), cyclic(3, 3).unwrap(), LatinHypercube::from_fn(2, 4, |x| x[0] ^ x[1]).unwrap()] {
            assert_eq!(transversals(&h), nonzero_diagonals(&latin::p_of_h(&h)).unwrap());
        }
    }

    #[test]
    fn transversal_counts() {
        assert_eq!(count_transversals(&cyclic(2, 3).unwrap()), 3);
        assert_eq!(count_transversals(&cyclic(2, 4).unwrap()), 0);
        assert_eq!(count_transversals(&cyclic(2, 7).unwrap()), 133);
        assert_eq!(transversals(&cyclic(2, 5).unwrap()).len(), 15);
    }

    #[test]
    fn mixed_transversal_examples() {
        let c5 = cyclic(2, 5).unwrap();
        let w = mixed_transversal_exists(std::slice::from_ref(&c5)).unwrap().unwrap();
        assert!(w.is_valid_for(3, 5));
        let c4 = cyclic(2, 4).unwrap();
        let d = interchange_hyperplanes(&c4, 0, 1, 2).unwrap();
        assert_eq!(mixed_transversal_exists(&[c4.clone(), d]).unwrap(), None);
        let l = linear_hypercube(2, 5, 0, &[2, 1]).unwrap();
        assert_eq!(
            mixed_transversal_exists(&[l.clone(), l.clone()]).unwrap(),
            mixed_transversal_exists(&[l]).unwrap()
        );
        assert!(mixed_transversal_exists(&[]).is_err());
        assert!(mixed_transversal_exists(&[c4, c5]).is_err());
    }

    #[test]
    fn positive_diagonal_predicate() {
        assert!(has_positive_diagonal(&uniform(3, 3).unwrap()).unwrap());
        assert!(!has_positive_diagonal(&latin::p_of_h(&cyclic(2, 6).unwrap())).unwrap());
        let neg = Tensor::new(2, 2, vec![int(1), int(-1), int(0), int(1)]).unwrap();
        assert!(matches!(has_positive_diagonal(&neg), Err(Error::NegativeEntry(_))));
    }

    #[test]
    fn delta_sums_by_parity() {
        for t in transversals(&cyclic(2, 5).unwrap()) {
            assert_eq!(delta_sum_check(&cyclic(2, 5).unwrap(), &t).unwrap(), 0);
        }
        let klein = LatinHypercube::from_fn(2, 4, |x| x[0] ^ x[1]).unwrap();
        let ts = transversals(&klein);
        assert_eq!(ts.len(), 8);
        for t in &ts {
            assert_eq!(delta_sum_check(&klein, t).unwrap(), 2);
        }
        let cube = LatinHypercube::from_fn(3, 4, |x| x[0] ^ x[1] ^ x[2]).unwrap();
        for t in transversals(&cube) {
            assert_eq!(delta_sum_check(&cube, &t).unwrap(), 0);
        }
    }

    #[test]
    fn delta_sum_rejects_non_transversals() {
        let h = cyclic(2, 3).unwrap();
        let bogus = Diagonal { s: 1, cells: vec![vec![0, 0, 1], vec![1, 1, 2], vec![2, 2, 0]] };
        assert!(matches!(delta_sum_check(&h, &bogus), Err(Error::NotTransversal(_))));
        let short = Diagonal { s: 1, cells: vec![vec![0, 0, 0]] };
        assert!(delta_sum_check(&h, &short).is_err());
    }
}
