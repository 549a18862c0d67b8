//! Completing partial Latin hypercubes by backtracking.

use std::ops::ControlFlow;

use rand::Rng;
use rand::seq::SliceRandom;

use super::LatinHypercube;
use crate::error::{Error, Result};
use crate::limits::Budget;
use crate::tensor::volume;

/// A k-dimensional array with some cells left open.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialHypercube {
    dim: usize,
    order: usize,
    cells: Vec<Option<usize>>,
}

impl PartialHypercube {
    pub fn empty(dim: usize, order: usize) -> Result<Self> {
        if dim == 0 || order == 0 || order > 64 {
            return Err(Error::InvalidArgument(format!("unsupported shape k={dim}, n={order}")));
        }
        Ok(PartialHypercube { dim, order, cells: vec![None; volume(dim, order)?] })
    }

    /// `h` with the cells selected by `open` cleared.
    pub fn from_hypercube(h: &LatinHypercube, mut open: impl FnMut(&[usize]) -> bool) -> Self {
        let cells = (0..h.len())
            .map(|o| if open(&h.coords(o)) { None } else { Some(h.symbols[o]) })
            .collect();
        PartialHypercube { dim: h.dim, order: h.order, cells }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn open_cells(&self) -> usize {
        self.cells.iter().filter(|c| c.is_none()).count()
    }
}

struct Solver {
    dim: usize,
    order: usize,
    symbols: Vec<usize>,
    /// Open cells in row-major order with their k line ids.
    open: Vec<(usize, Vec<usize>)>,
    used: Vec<u64>,
}

impl Solver {
    /// `None` when the fixed cells already conflict.
    fn new(p: &PartialHypercube) -> Option<Solver> {
        let (k, n) = (p.dim, p.order);
        let per_axis = p.cells.len() / n;
        let line_ids = |o: usize| -> Vec<usize> {
            (0..k)
                .map(|axis| {
                    let stride = n.pow((k - 1 - axis) as u32);
                    let high = o / (stride * n);
                    let low = o % stride;
                    axis * per_axis + high * stride + low
                })
                .collect()
        };
        let mut used = vec![0u64; k * per_axis];
        let mut open = Vec::new();
        for (o, c) in p.cells.iter().enumerate() {
            let lines = line_ids(o);
            match *c {
                Some(s) => {
                    if s >= n {
                        return None;
                    }
                    for &l in &lines {
                        if used[l] & (1 << s) != 0 {
                            return None;
                        }
                        used[l] |= 1 << s;
                    }
                }
                None => open.push((o, lines)),
            }
        }
        let symbols = p.cells.iter().map(|c| c.unwrap_or(0)).collect();
        Some(Solver { dim: k, order: n, symbols, open, used })
    }

    fn candidates(&self, lines: &[usize]) -> u64 {
        let taken = lines.iter().fold(0u64, |acc, &l| acc | self.used[l]);
        let all = if self.order == 64 { u64::MAX } else { (1u64 << self.order) - 1 };
        all & !taken
    }

    fn set(&mut self, i: usize, s: usize) {
        let o = self.open[i].0;
        for j in 0..self.dim {
            let l = self.open[i].1[j];
            self.used[l] |= 1 << s;
        }
        self.symbols[o] = s;
    }

    fn unset(&mut self, i: usize, s: usize) {
        for j in 0..self.dim {
            let l = self.open[i].1[j];
            self.used[l] &= !(1 << s);
        }
    }

    fn hypercube(&self) -> LatinHypercube {
        LatinHypercube { dim: self.dim, order: self.order, symbols: self.symbols.clone() }
    }

    fn enumerate<F>(&mut self, i: usize, budget: &mut Budget, visit: &mut F) -> Result<ControlFlow<()>>
    where
        F: FnMut(&LatinHypercube) -> ControlFlow<()>,
    {
        budget.tick()?;
        if i == self.open.len() {
            return Ok(visit(&self.hypercube()));
        }
        let mut cand = self.candidates(&self.open[i].1);
        while cand != 0 {
            let s = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            self.set(i, s);
            let flow = self.enumerate(i + 1, budget, visit);
            self.unset(i, s);
            if !matches!(flow, Ok(ControlFlow::Continue(()))) {
                return flow;
            }
        }
        Ok(ControlFlow::Continue(()))
    }

    fn sample<R: Rng>(&mut self, i: usize, rng: &mut R, budget: &mut Budget) -> Result<bool> {
        budget.tick()?;
        if i == self.open.len() {
            return Ok(true);
        }
        let cand = self.candidates(&self.open[i].1);
        let mut choices: Vec<usize> = (0..self.order).filter(|&s| cand & (1 << s) != 0).collect();
        choices.shuffle(rng);
        for s in choices {
            self.set(i, s);
            if self.sample(i + 1, rng, budget)? {
                return Ok(true);
            }
            self.unset(i, s);
        }
        Ok(false)
    }
}

/// Visits every Latin completion in lexicographic order of the open cells.
pub fn for_each_completion<F>(p: &PartialHypercube, cap: u64, mut visit: F) -> Result<()>
where
    F: FnMut(&LatinHypercube) -> ControlFlow<()>,
{
    let Some(mut solver) = Solver::new(p) else {
        return Ok(());
    };
    let mut budget = Budget::new(cap, "Latin completion enumeration");
    let _ = solver.enumerate(0, &mut budget, &mut visit)?;
    Ok(())
}

pub fn completions(p: &PartialHypercube, cap: u64) -> Result<Vec<LatinHypercube>> {
    let mut out = Vec::new();
    for_each_completion(p, cap, |h| {
        out.push(h.clone());
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

/// A completion found by randomized backtracking, or `None` if none exists.
pub fn random_completion<R: Rng>(p: &PartialHypercube, rng: &mut R, cap: u64) -> Result<Option<LatinHypercube>> {
    let Some(mut solver) = Solver::new(p) else {
        return Ok(None);
    };
    let mut budget = Budget::new(cap, "randomized Latin completion");
    Ok(solver.sample(0, rng, &mut budget)?.then(|| solver.hypercube()))
}
