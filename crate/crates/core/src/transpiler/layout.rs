//! Initial placement and the layout sidecar format.

use std::collections::{BTreeMap, VecDeque};

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::target::HardwareTarget;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LayoutError {
    #[error("invalid layout JSON: {0}")]
    Json(String),
    #[error("layout keys must be 0..{0} without gaps")]
    Keys(usize),
    #[error("{which} maps two qubits to {value}")]
    NotInjective { which: &'static str, value: usize },
    #[error("final permutation refers to logical qubit {0} outside the layout")]
    OutOfRange(usize),
}

/// `initial`: logical → physical. `final_permutation`: logical → logical,
/// where logical `l` ends on the physical qubit initially holding
/// `final_permutation[l]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layout {
    pub initial: BTreeMap<usize, usize>,
    pub final_permutation: BTreeMap<usize, usize>,
}

impl Layout {
    pub fn trivial(physical: &[usize]) -> Self {
        Layout {
            initial: physical.iter().copied().enumerate().collect(),
            final_permutation: (0..physical.len()).map(|l| (l, l)).collect(),
        }
    }

    pub fn n_logical(&self) -> usize {
        self.initial.len()
    }

    /// Physical qubit holding logical `l` at the end of the circuit.
    pub fn final_physical(&self, l: usize) -> Option<usize> {
        self.final_permutation.get(&l).and_then(|k| self.initial.get(k)).copied()
    }

    pub fn validate(&self) -> Result<(), LayoutError> {
        let n = self.initial.len();
        if !self.initial.keys().copied().eq(0..n) || !self.final_permutation.keys().copied().eq(0..n) {
            return Err(LayoutError::Keys(n));
        }
        let mut seen = std::collections::BTreeSet::new();
        for &p in self.initial.values() {
            if !seen.insert(p) {
                return Err(LayoutError::NotInjective { which: "initial", value: p });
            }
        }
        let mut seen = vec![false; n];
        for &k in self.final_permutation.values() {
            if k >= n {
                return Err(LayoutError::OutOfRange(k));
            }
            if std::mem::replace(&mut seen[k], true) {
                return Err(LayoutError::NotInjective { which: "final_permutation", value: k });
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("layout serialize")
    }

    pub fn from_json(src: &str) -> Result<Self, LayoutError> {
        let layout: Layout = serde_json::from_str(src).map_err(|e| LayoutError::Json(e.to_string()))?;
        layout.validate()?;
        Ok(layout)
    }
}

const PATH_SEARCH_BUDGET: usize = 20_000;

/// Connected region of `n` physical qubits starting at a highest-degree
/// qubit, returned in placement order (logical `i` goes to element `i`).
///
/// Preferred shape is a simple path, so chain-coupled logical qubits land on
/// coupled physical qubits. When no path turns up within a bounded search the
/// region is grown breadth-first instead and placed along a depth-first walk.
/// The seed picks the start qubit and shuffles neighbour order.
pub(crate) fn choose_region(t: &HardwareTarget, n: usize, rng: &mut impl Rng) -> Vec<usize> {
    let top = t.max_degree();
    let starts: Vec<usize> = (0..t.n_physical()).filter(|&q| t.degree(q) == top).collect();
    let start = *starts.choose(rng).expect("target has qubits");
    if let Some(path) = simple_path(t, start, n, rng) {
        return path;
    }
    bfs_region(t, start, n, rng)
}

fn simple_path(t: &HardwareTarget, start: usize, n: usize, rng: &mut impl Rng) -> Option<Vec<usize>> {
    let mut on_path = vec![false; t.n_physical()];
    let mut path = vec![start];
    on_path[start] = true;
    let shuffled = |u: usize, rng: &mut _| {
        let mut v = t.neighbors(u).to_vec();
        v.shuffle(rng);
        v
    };
    // stack of untried neighbour lists, one per path element
    let mut frontier = vec![shuffled(start, rng)];
    let mut budget = PATH_SEARCH_BUDGET;
    while path.len() < n {
        budget = budget.checked_sub(1)?;
        let top = frontier.last_mut()?;
        match top.pop() {
            Some(v) if !on_path[v] => {
                on_path[v] = true;
                path.push(v);
                frontier.push(shuffled(v, rng));
            }
            Some(_) => {}
            None => {
                frontier.pop();
                on_path[path.pop()?] = false;
            }
        }
    }
    Some(path)
}

fn bfs_region(t: &HardwareTarget, start: usize, n: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut in_region = vec![false; t.n_physical()];
    let mut region = Vec::with_capacity(n);
    let mut queue = VecDeque::from([start]);
    in_region[start] = true;
    while let Some(u) = queue.pop_front() {
        region.push(u);
        if region.len() == n {
            break;
        }
        let mut nbrs = t.neighbors(u).to_vec();
        nbrs.shuffle(rng);
        for v in nbrs {
            if !in_region[v] {
                in_region[v] = true;
                queue.push_back(v);
            }
        }
    }
    // queued-but-unvisited qubits are not part of the region
    in_region.iter_mut().for_each(|f| *f = false);
    region.iter().for_each(|&q| in_region[q] = true);

    let far = *region.last().expect("non-empty region");
    let mut order = Vec::with_capacity(n);
    let mut visited = vec![false; t.n_physical()];
    let mut stack = vec![far];
    while let Some(u) = stack.pop() {
        if visited[u] {
            continue;
        }
        visited[u] = true;
        order.push(u);
        for &v in t.neighbors(u).iter().rev() {
            if in_region[v] && !visited[v] {
                stack.push(v);
            }
        }
    }
    order
}
