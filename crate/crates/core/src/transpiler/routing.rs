//! Greedy SWAP insertion inside the placement region.

use rand::Rng;

use crate::circuit::{Circuit, GateKind, Instruction};

use super::target::HardwareTarget;

/// Weight of the lookahead layer relative to the gate being routed.
const LOOKAHEAD_WEIGHT: f64 = 0.5;

pub(crate) struct Routed {
    pub instructions: Vec<Instruction>,
    /// logical → physical after the last instruction
    pub final_l2p: Vec<usize>,
    pub swaps: usize,
}

struct RegionGraph {
    local: Vec<Option<usize>>,
    dist: Vec<Vec<usize>>,
    edges_of: Vec<Vec<usize>>,
    physical: Vec<usize>,
}

impl RegionGraph {
    fn new(t: &HardwareTarget, region: &[usize]) -> Self {
        let mut local = vec![None; t.n_physical()];
        for (i, &p) in region.iter().enumerate() {
            local[p] = Some(i);
        }
        let edges_of: Vec<Vec<usize>> =
            region.iter().map(|&p| t.neighbors(p).iter().filter_map(|&v| local[v]).collect()).collect();
        let m = region.len();
        let dist = (0..m)
            .map(|s| {
                let mut d = vec![usize::MAX; m];
                d[s] = 0;
                let mut queue = std::collections::VecDeque::from([s]);
                while let Some(u) = queue.pop_front() {
                    for &v in &edges_of[u] {
                        if d[v] == usize::MAX {
                            d[v] = d[u] + 1;
                            queue.push_back(v);
                        }
                    }
                }
                d
            })
            .collect();
        RegionGraph { local, dist, edges_of, physical: region.to_vec() }
    }
}

/// The next layer of two-qubit gates after position `from`: gates are taken
/// in program order while their qubits stay disjoint.
fn lookahead_layer(two_qubit: &[(usize, usize, usize)], from: usize) -> Vec<(usize, usize)> {
    let mut used: Vec<usize> = Vec::new();
    let mut layer = Vec::new();
    for &(_, a, b) in two_qubit.iter().skip(from) {
        if used.contains(&a) || used.contains(&b) {
            break;
        }
        used.extend([a, b]);
        layer.push((a, b));
    }
    layer
}

/// Route a flat logical circuit. `l2p` is the initial logical → physical map
/// and every physical qubit it uses must lie in `region`. SWAPs are chosen
/// among region edges touching the blocked gate, only if they shorten it;
/// ties on the lookahead score are broken with `rng`.
pub(crate) fn route(
    c: &Circuit,
    t: &HardwareTarget,
    region: &[usize],
    mut l2p: Vec<usize>,
    rng: &mut impl Rng,
) -> Routed {
    let g = RegionGraph::new(t, region);
    // local region index → logical qubit (usize::MAX when free)
    let mut loc_of: Vec<usize> = l2p.iter().map(|&p| g.local[p].expect("placed in region")).collect();
    let mut logical_at = vec![usize::MAX; region.len()];
    for (l, &i) in loc_of.iter().enumerate() {
        logical_at[i] = l;
    }

    let two_qubit: Vec<(usize, usize, usize)> = c
        .instructions()
        .iter()
        .enumerate()
        .filter(|(_, i)| i.kind.arity() == Some(2))
        .map(|(pos, i)| (pos, i.qubits[0], i.qubits[1]))
        .collect();
    let mut next_2q = 0;

    let mut out = Vec::with_capacity(c.len());
    let mut swaps = 0;
    for (pos, inst) in c.instructions().iter().enumerate() {
        if inst.kind.arity() == Some(2) {
            debug_assert_eq!(two_qubit[next_2q].0, pos);
            next_2q += 1;
            let (a, b) = (inst.qubits[0], inst.qubits[1]);
            let ahead = lookahead_layer(&two_qubit, next_2q);
            while g.dist[loc_of[a]][loc_of[b]] > 1 {
                let current = g.dist[loc_of[a]][loc_of[b]];
                let mut best: Vec<(usize, usize)> = Vec::new();
                let mut best_score = f64::INFINITY;
                for &end in &[loc_of[a], loc_of[b]] {
                    for &nb in &g.edges_of[end] {
                        let moved = |x: usize| {
                            if x == end {
                                nb
                            } else if x == nb {
                                end
                            } else {
                                x
                            }
                        };
                        let after = g.dist[moved(loc_of[a])][moved(loc_of[b])];
                        if after >= current {
                            continue;
                        }
                        let look: usize = ahead.iter().map(|&(x, y)| g.dist[moved(loc_of[x])][moved(loc_of[y])]).sum();
                        let score = after as f64 + LOOKAHEAD_WEIGHT * look as f64;
                        if score < best_score - 1e-12 {
                            best_score = score;
                            best.clear();
                        }
                        if (score - best_score).abs() <= 1e-12 {
                            best.push((end, nb));
                        }
                    }
                }
                let (u, v) = best[rng.random_range(0..best.len())];
                out.push(Instruction::new(GateKind::SWAP, vec![g.physical[u], g.physical[v]]));
                swaps += 1;
                let (lu, lv) = (logical_at[u], logical_at[v]);
                logical_at.swap(u, v);
                if lu != usize::MAX {
                    loc_of[lu] = v;
                }
                if lv != usize::MAX {
                    loc_of[lv] = u;
                }
            }
        }
        out.push(Instruction {
            kind: inst.kind.clone(),
            qubits: inst.qubits.iter().map(|&l| g.physical[loc_of[l]]).collect(),
            clbit: inst.clbit,
        });
    }
    for (l, p) in l2p.iter_mut().enumerate() {
        *p = g.physical[loc_of[l]];
    }
    Routed { instructions: out, final_l2p: l2p, swaps }
}
