//! Backtracking search for a finite semigroup extending a partial magma.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::PartialMagma;

/// A total operation on `elements`; the first elements are the magma's own.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CayleyTable {
    pub elements: Vec<String>,
    /// Row-major `size x size`.
    pub table: Vec<usize>,
}

impl CayleyTable {
    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn get(&self, a: usize, b: usize) -> usize {
        self.table[a * self.size() + b]
    }

    /// The magma's own table, when it is total.
    pub fn from_total(m: &PartialMagma) -> Option<Self> {
        let n = m.size();
        let mut table = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                table.push(m.get(a, b)?);
            }
        }
        Some(CayleyTable {
            elements: m.elements().to_vec(),
            table,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(CayleyTable),
    /// No extension with at most the allowed extra elements.
    Exhausted {
        nodes: usize,
    },
    /// Node budget ran out before the space was covered.
    BudgetExceeded {
        nodes: usize,
    },
}

/// Labels `~1, ~2, ...` for `count` fresh elements, skipping any label the
/// magma already uses.
pub fn fresh_labels(m: &PartialMagma, count: usize) -> Vec<String> {
    let taken: BTreeSet<&str> = m.elements().iter().map(String::as_str).collect();
    let mut out = Vec::with_capacity(count);
    let mut i = 1;
    while out.len() < count {
        let label = format!("~{i}");
        if !taken.contains(label.as_str()) {
            out.push(label);
        }
        i += 1;
    }
    out
}

struct State {
    size: usize,
    cells: Vec<Option<usize>>,
}

impl State {
    fn get(&self, a: usize, b: usize) -> Option<usize> {
        self.cells[a * self.size + b]
    }

    /// Sets a cell, queueing it for propagation. Fails on a clash.
    fn set(&mut self, a: usize, b: usize, v: usize, queue: &mut Vec<(usize, usize)>) -> bool {
        let idx = a * self.size + b;
        match self.cells[idx] {
            Some(old) => old == v,
            None => {
                self.cells[idx] = Some(v);
                queue.push((a, b));
                true
            }
        }
    }

    /// Enforces `(ab)c = a(bc)` for one triple where possible.
    fn triple(&mut self, a: usize, b: usize, c: usize, queue: &mut Vec<(usize, usize)>) -> bool {
        let (Some(ab), Some(bc)) = (self.get(a, b), self.get(b, c)) else {
            return true;
        };
        match (self.get(ab, c), self.get(a, bc)) {
            (Some(l), Some(r)) => l == r,
            (Some(l), None) => self.set(a, bc, l, queue),
            (None, Some(r)) => self.set(ab, c, r, queue),
            (None, None) => true,
        }
    }

    /// Propagates associativity from every queued cell.
    fn propagate(&mut self, mut queue: Vec<(usize, usize)>) -> bool {
        let n = self.size;
        while let Some((x, y)) = queue.pop() {
            for z in 0..n {
                // xy as the left pair, xy as the right pair
                if !self.triple(x, y, z, &mut queue) || !self.triple(z, x, y, &mut queue) {
                    return false;
                }
            }
            // (x, y) as the outer product (ab)c with ab = x, c = y, or a(bc)
            // with a = x, bc = y
            for p in 0..n {
                for q in 0..n {
                    if self.get(p, q) == Some(x) && !self.triple(p, q, y, &mut queue) {
                        return false;
                    }
                    if self.get(p, q) == Some(y) && !self.triple(x, p, q, &mut queue) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn mentioned(&self, first_fresh: usize) -> BTreeSet<usize> {
        let n = self.size;
        let mut out = BTreeSet::new();
        for a in 0..n {
            for b in 0..n {
                if let Some(v) = self.get(a, b) {
                    out.extend([a, b, v].into_iter().filter(|&e| e >= first_fresh));
                }
            }
        }
        out
    }
}

struct Search {
    base: usize,
    nodes: usize,
    max_nodes: usize,
}

enum Dfs {
    Found(Vec<usize>),
    Dead,
    Budget,
}

impl Search {
    fn dfs(&mut self, state: State) -> Dfs {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Dfs::Budget;
        }
        let Some(idx) = state.cells.iter().position(Option::is_none) else {
            return Dfs::Found(state.cells.iter().map(|c| c.unwrap()).collect());
        };
        let (a, b) = (idx / state.size, idx % state.size);
        let mentioned = state.mentioned(self.base);
        let mut candidates: Vec<usize> = (0..self.base).chain(mentioned.iter().copied()).collect();
        if let Some(f) = (self.base..state.size).find(|f| !mentioned.contains(f)) {
            candidates.push(f);
        }
        for v in candidates {
            let mut next = State {
                size: state.size,
                cells: state.cells.clone(),
            };
            let mut queue = Vec::new();
            next.set(a, b, v, &mut queue);
            if !next.propagate(queue) {
                continue;
            }
            match self.dfs(next) {
                Dfs::Dead => {}
                other => return other,
            }
        }
        Dfs::Dead
    }
}

/// Tries sizes `n, n+1, ..., n+max_extra_elements` in turn, filling cells in
/// row-major order with values ascending; among fresh elements not yet
/// mentioned only the first is tried. `max_nodes` caps the total number of
/// search nodes.
pub fn finite_completion_search(
    m: &PartialMagma,
    max_extra_elements: usize,
    max_nodes: usize,
) -> SearchOutcome {
    let n = m.size();
    let mut search = Search {
        base: n,
        nodes: 0,
        max_nodes,
    };
    for extra in 0..=max_extra_elements {
        let size = n + extra;
        if size == 0 {
            return SearchOutcome::Found(CayleyTable {
                elements: Vec::new(),
                table: Vec::new(),
            });
        }
        let mut state = State {
            size,
            cells: vec![None; size * size],
        };
        let mut queue = Vec::new();
        for (l, r, res) in m.entries() {
            state.set(l, r, res, &mut queue);
        }
        if !state.propagate(queue) {
            continue;
        }
        match search.dfs(state) {
            Dfs::Found(table) => {
                let mut elements = m.elements().to_vec();
                elements.extend(fresh_labels(m, extra));
                return SearchOutcome::Found(CayleyTable { elements, table });
            }
            Dfs::Budget => {
                return SearchOutcome::BudgetExceeded {
                    nodes: search.nodes,
                }
            }
            Dfs::Dead => {}
        }
    }
    SearchOutcome::Exhausted {
        nodes: search.nodes,
    }
}
