//! Algorithm X over dancing links.
//!
//! Items are `0..num_items`; each option is a list of items. The search
//! always branches on the uncovered item with the fewest remaining options,
//! breaking ties by the smallest item index, so the order in which solutions
//! are visited is fully determined by the input.

use std::ops::ControlFlow;

use crate::error::Result;
use crate::limits::Budget;

const ROOT: usize = 0;

pub struct ExactCover {
    left: Vec<usize>,
    right: Vec<usize>,
    up: Vec<usize>,
    down: Vec<usize>,
    /// Item header of each node (headers point to themselves).
    item: Vec<usize>,
    /// Option index of each non-header node.
    option: Vec<usize>,
    size: Vec<usize>,
    num_items: usize,
    num_options: usize,
}

impl ExactCover {
    pub fn new(num_items: usize) -> Self {
        // Node 0 is the root; nodes 1..=num_items are the item headers.
        let h = num_items + 1;
        let mut dl = ExactCover {
            left: (0..h).map(|i| if i == 0 { num_items } else { i - 1 }).collect(),
            right: (0..h).map(|i| if i == num_items { 0 } else { i + 1 }).collect(),
            up: (0..h).collect(),
            down: (0..h).collect(),
            item: (0..h).collect(),
            option: vec![usize::MAX; h],
            size: vec![0; h],
            num_items,
            num_options: 0,
        };
        if num_items == 0 {
            dl.left[0] = 0;
            dl.right[0] = 0;
        }
        dl
    }

    pub fn num_items(&self) -> usize {
        self.num_items
    }

    pub fn num_options(&self) -> usize {
        self.num_options
    }

    /// Adds an option and returns its index. Items must be distinct and in range.
    pub fn add_option(&mut self, items: &[usize]) -> usize {
        let id = self.num_options;
        self.num_options += 1;
        let first = self.left.len();
        for (k, &it) in items.iter().enumerate() {
            assert!(it < self.num_items, "item {it} out of range");
            let header = it + 1;
            let node = self.left.len();
            let l = if k == 0 { node } else { node - 1 };
            self.left.push(l);
            self.right.push(first);
            self.right[l] = node;
            self.left[first] = node;
            let u = self.up[header];
            self.up.push(u);
            self.down.push(header);
            self.down[u] = node;
            self.up[header] = node;
            self.item.push(header);
            self.option.push(id);
            self.size[header] += 1;
        }
        id
    }

    fn cover(&mut self, c: usize) {
        let (l, r) = (self.left[c], self.right[c]);
        self.right[l] = r;
        self.left[r] = l;
        let mut i = self.down[c];
        while i != c {
            let mut j = self.right[i];
            while j != i {
                let (u, d) = (self.up[j], self.down[j]);
                self.down[u] = d;
                self.up[d] = u;
                self.size[self.item[j]] -= 1;
                j = self.right[j];
            }
            i = self.down[i];
        }
    }

    fn uncover(&mut self, c: usize) {
        let mut i = self.up[c];
        while i != c {
            let mut j = self.left[i];
            while j != i {
                let (u, d) = (self.up[j], self.down[j]);
                self.size[self.item[j]] += 1;
                self.down[u] = j;
                self.up[d] = j;
                j = self.left[j];
            }
            i = self.up[i];
        }
        let (l, r) = (self.left[c], self.right[c]);
        self.right[l] = c;
        self.left[r] = c;
    }

    fn choose_item(&self) -> Option<usize> {
        let mut best = None;
        let mut best_size = usize::MAX;
        let mut c = self.right[ROOT];
        while c != ROOT {
            if self.size[c] < best_size {
                best_size = self.size[c];
                best = Some(c);
                if best_size == 0 {
                    break;
                }
            }
            c = self.right[c];
        }
        best
    }

    /// Visits every exact cover. The callback receives the chosen option
    /// indices in selection order and may stop the search early. Returns
    /// `Ok(true)` when the search ran to completion.
    pub fn search<F>(&mut self, cap: u64, what: &'static str, mut visit: F) -> Result<bool>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        let mut budget = Budget::new(cap, what);
        let mut chosen = Vec::new();
        let flow = self.recurse(&mut chosen, &mut budget, &mut visit)?;
        Ok(flow.is_continue())
    }

    fn recurse<F>(
        &mut self,
        chosen: &mut Vec<usize>,
        budget: &mut Budget,
        visit: &mut F,
    ) -> Result<ControlFlow<()>>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        budget.tick()?;
        let Some(c) = self.choose_item() else {
            return Ok(visit(chosen));
        };
        if self.size[c] == 0 {
            return Ok(ControlFlow::Continue(()));
        }
        self.cover(c);
        let mut r = self.down[c];
        let mut result = Ok(ControlFlow::Continue(()));
        while r != c {
            chosen.push(self.option[r]);
            let mut j = self.right[r];
            while j != r {
                self.cover(self.item[j]);
                j = self.right[j];
            }
            result = self.recurse(chosen, budget, visit);
            let mut j = self.left[r];
            while j != r {
                self.uncover(self.item[j]);
                j = self.left[j];
            }
            chosen.pop();
            if !matches!(result, Ok(ControlFlow::Continue(()))) {
                break;
            }
            r = self.down[r];
        }
        self.uncover(c);
        result
    }

    /// All solutions, each sorted ascending.
    pub fn all_solutions(&mut self, cap: u64, what: &'static str) -> Result<Vec<Vec<usize>>> {
        let mut out = Vec::new();
        self.search(cap, what, |s| {
            let mut s = s.to_vec();
            s.sort_unstable();
            out.push(s);
            ControlFlow::Continue(())
        })?;
        Ok(out)
    }

    /// The first solution in search order, sorted ascending.
    pub fn first_solution(&mut self, cap: u64, what: &'static str) -> Result<Option<Vec<usize>>> {
        let mut out = None;
        self.search(cap, what, |s| {
            let mut s = s.to_vec();
            s.sort_unstable();
            out = Some(s);
            ControlFlow::Break(())
        })?;
        Ok(out)
    }
}
