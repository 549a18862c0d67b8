//! Species (main-class) canonical forms.
//!
//! The group acts on the k+1 "axes" of a hypercube: its k coordinates plus
//! the symbol. Each element permutes the values of every axis and then
//! permutes the axes. The canonical form is the lexicographically smallest
//! row-major symbol array in the orbit, found by branch and bound: for each
//! axis permutation the coordinate relabelings are chosen value by value in
//! row-major order, symbols are labelled in order of first appearance, and a
//! branch is cut as soon as its prefix exceeds the best array found so far.

use super::LatinHypercube;
use crate::error::{Error, Result};
use crate::limits::{Budget, Limits};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpeciesOutcome {
    Equivalent,
    Inequivalent,
    /// The search hit its node cap before deciding.
    Undecided { cap: u64 },
}

/// Applies a group element: `value_perms[a]` relabels axis `a` (the last
/// entry acts on symbols), then axis `b` of the result is axis `axis_perm[b]`
/// of the relabelled hypercube.
pub fn apply_group(h: &LatinHypercube, axis_perm: &[usize], value_perms: &[Vec<usize>]) -> Result<LatinHypercube> {
    let d = h.dim + 1;
    crate::tensor::check_permutation(axis_perm, d)?;
    if value_perms.len() != d {
        return Err(Error::InvalidArgument(format!("expected {d} value permutations")));
    }
    for p in value_perms {
        crate::tensor::check_permutation(p, h.order)?;
    }
    let mut symbols = vec![0; h.len()];
    let mut t = vec![0; d];
    let mut u = vec![0; d];
    for (o, &s) in h.symbols.iter().enumerate() {
        t[..h.dim].copy_from_slice(&h.coords(o));
        t[h.dim] = s;
        for b in 0..d {
            u[b] = value_perms[axis_perm[b]][t[axis_perm[b]]];
        }
        symbols[h.offset(&u[..h.dim])] = u[h.dim];
    }
    Ok(LatinHypercube { dim: h.dim, order: h.order, symbols })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                go(cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

struct Canon<'a> {
    n: usize,
    k: usize,
    total: usize,
    g: &'a [usize],
    pre: Vec<Vec<usize>>,
    used: Vec<u64>,
    label: Vec<usize>,
    next_label: usize,
    cur: Vec<usize>,
    best: Option<Vec<usize>>,
    generation: u64,
    budget: Budget,
}

const UNLABELLED: usize = usize::MAX;

impl Canon<'_> {
    fn place(&mut self, pos: usize, y: &mut Vec<usize>, less: bool) -> Result<()> {
        if pos == self.total {
            let better = match &self.best {
                None => true,
                Some(b) => less || self.cur < *b,
            };
            if better {
                self.best = Some(self.cur.clone());
                self.generation += 1;
            }
            return Ok(());
        }
        self.assign(pos, y, 0, less)
    }

    fn assign(&mut self, pos: usize, y: &mut Vec<usize>, axis: usize, less: bool) -> Result<()> {
        if axis == self.k {
            return self.emit(pos, y, less);
        }
        if y[axis] < self.pre[axis].len() {
            return self.assign(pos, y, axis + 1, less);
        }
        let mut less = less;
        for old in 0..self.n {
            if self.used[axis] & (1 << old) != 0 {
                continue;
            }
            self.budget.tick()?;
            self.pre[axis].push(old);
            self.used[axis] |= 1 << old;
            let gen = self.generation;
            let r = self.assign(pos, y, axis + 1, less);
            self.used[axis] &= !(1 << old);
            self.pre[axis].pop();
            r?;
            if self.generation != gen {
                // The new best came from this subtree, so it shares our prefix.
                less = false;
            }
        }
        Ok(())
    }

    fn emit(&mut self, pos: usize, y: &mut Vec<usize>, less: bool) -> Result<()> {
        let off = (0..self.k).fold(0, |acc, a| acc * self.n + self.pre[a][y[a]]);
        let sym = self.g[off];
        let fresh = self.label[sym] == UNLABELLED;
        let v = if fresh { self.next_label } else { self.label[sym] };
        let mut less = less;
        if !less {
            if let Some(b) = &self.best {
                if v > b[pos] {
                    return Ok(());
                }
                less = v < b[pos];
            }
        }
        if fresh {
            self.label[sym] = v;
            self.next_label += 1;
        }
        self.cur[pos] = v;
        let saved = y.clone();
        crate::tensor::increment(y, self.n);
        let r = self.place(pos + 1, y, less);
        y.copy_from_slice(&saved);
        if fresh {
            self.label[sym] = UNLABELLED;
            self.next_label -= 1;
        }
        r
    }
}

/// The lexicographically least symbol array in the species of `h`.
pub fn canonical_form(h: &LatinHypercube, cap: u64) -> Result<LatinHypercube> {
    let (k, n) = (h.dim, h.order);
    let identity: Vec<Vec<usize>> = vec![(0..n).collect(); k + 1];
    let images = permutations(k + 1)
        .iter()
        .map(|perm| apply_group(h, perm, &identity))
        .collect::<Result<Vec<_>>>()?;
    let mut search = Canon {
        n,
        k,
        total: h.len(),
        g: &[],
        pre: vec![Vec::new(); k],
        used: vec![0; k],
        label: vec![UNLABELLED; n],
        next_label: 0,
        cur: vec![0; h.len()],
        best: None,
        generation: 0,
        budget: Budget::new(cap, "species canonical form"),
    };
    for g in &images {
        search.g = &g.symbols;
        search.place(0, &mut vec![0; k], false)?;
    }
    let symbols = search.best.expect("at least one arrangement exists");
    Ok(LatinHypercube { dim: k, order: n, symbols })
}

pub fn species_equivalent(a: &LatinHypercube, b: &LatinHypercube) -> Result<SpeciesOutcome> {
    species_equivalent_with(a, b, &Limits::default())
}

pub fn species_equivalent_with(a: &LatinHypercube, b: &LatinHypercube, limits: &Limits) -> Result<SpeciesOutcome> {
    if a.dim != b.dim || a.order != b.order {
        return Err(Error::ShapeMismatch(format!(
            "(k={}, n={}) vs (k={}, n={})",
            a.dim, a.order, b.dim, b.order
        )));
    }
    if a == b {
        return Ok(SpeciesOutcome::Equivalent);
    }
    let cap = limits.species_nodes;
    let canon = |h| match canonical_form(h, cap) {
        Err(Error::CapExceeded { .. }) => Ok(None),
        other => other.map(Some),
    };
    Ok(match (canon(a)?, canon(b)?) {
        (Some(x), Some(y)) if x == y => SpeciesOutcome::Equivalent,
        (Some(_), Some(_)) => SpeciesOutcome::Inequivalent,
        _ => SpeciesOutcome::Undecided { cap },
    })
}
