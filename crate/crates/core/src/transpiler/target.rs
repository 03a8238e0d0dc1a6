//! Machine model: coupling graph, basis and gate durations.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

const EAGLE127_JSON: &str = include_str!("../../data/eagle127.json");

/// Upper bound on target size accepted from JSON.
pub const MAX_PHYSICAL: usize = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TargetError {
    #[error("unknown target preset `{0}`")]
    UnknownPreset(String),
    #[error("heavy-hex distance must be at least 1")]
    BadDistance,
    #[error("invalid target JSON: {0}")]
    Json(String),
    #[error("target needs between 1 and {MAX_PHYSICAL} qubits, got {0}")]
    BadSize(usize),
    #[error("edge ({0}, {1}) references a qubit outside the target")]
    EdgeOutOfRange(usize, usize),
    #[error("edge ({0}, {0}) is a self-loop")]
    SelfLoop(usize),
    #[error("edge ({0}, {1}) listed twice")]
    DuplicateEdge(usize, usize),
    #[error("coupling graph is not connected")]
    Disconnected,
    #[error("duration for {name} is {value}, expected a finite non-negative number")]
    BadDuration { name: String, value: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetPreset {
    Eagle127,
    HeavyHex { distance: usize },
}

impl FromStr for TargetPreset {
    type Err = TargetError;

    /// `eagle127` or `heavy-hex:<distance>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "eagle127" {
            return Ok(TargetPreset::Eagle127);
        }
        if let Some(d) = s.strip_prefix("heavy-hex:") {
            let distance = d.parse().map_err(|_| TargetError::UnknownPreset(s.to_string()))?;
            return Ok(TargetPreset::HeavyHex { distance });
        }
        Err(TargetError::UnknownPreset(s.to_string()))
    }
}

#[derive(Serialize, Deserialize)]
struct TargetJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    description: Option<String>,
    n: usize,
    edges: Vec<[usize; 2]>,
    basis: Vec<String>,
    #[serde(default)]
    durations_ns: BTreeMap<String, f64>,
}

/// Immutable device description. Construction guarantees a connected,
/// loop-free coupling graph.
#[derive(Debug, Clone, PartialEq)]
pub struct HardwareTarget {
    n_physical: usize,
    edges: Vec<(usize, usize)>,
    basis: BTreeSet<String>,
    durations_ns: BTreeMap<String, f64>,
    adjacency: Vec<Vec<usize>>,
}

pub fn default_basis() -> BTreeSet<String> {
    ["ECR", "ID", "RZ", "SX", "X"].iter().map(|s| s.to_string()).collect()
}

pub fn default_durations() -> BTreeMap<String, f64> {
    [("ECR", 500.0), ("ID", 35.0), ("MEASURE", 800.0), ("RZ", 0.0), ("SX", 35.0), ("X", 35.0)]
        .iter()
        .map(|&(k, v)| (k.to_string(), v))
        .collect()
}

impl HardwareTarget {
    pub fn new(
        n_physical: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
        basis: BTreeSet<String>,
        durations_ns: BTreeMap<String, f64>,
    ) -> Result<Self, TargetError> {
        if n_physical == 0 || n_physical > MAX_PHYSICAL {
            return Err(TargetError::BadSize(n_physical));
        }
        for (name, &value) in &durations_ns {
            if !value.is_finite() || value < 0.0 {
                return Err(TargetError::BadDuration { name: name.clone(), value });
            }
        }
        let mut adjacency = vec![Vec::new(); n_physical];
        let mut seen = BTreeSet::new();
        let mut norm_edges = Vec::new();
        for (a, b) in edges {
            if a >= n_physical || b >= n_physical {
                return Err(TargetError::EdgeOutOfRange(a, b));
            }
            if a == b {
                return Err(TargetError::SelfLoop(a));
            }
            let e = (a.min(b), a.max(b));
            if !seen.insert(e) {
                return Err(TargetError::DuplicateEdge(a, b));
            }
            adjacency[a].push(b);
            adjacency[b].push(a);
            norm_edges.push(e);
        }
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
        }
        let t = HardwareTarget { n_physical, edges: norm_edges, basis, durations_ns, adjacency };
        if t.bfs_distances(0).iter().any(|d| d.is_none()) {
            return Err(TargetError::Disconnected);
        }
        Ok(t)
    }

    pub fn n_physical(&self) -> usize {
        self.n_physical
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn basis(&self) -> &BTreeSet<String> {
        &self.basis
    }

    pub fn durations_ns(&self) -> &BTreeMap<String, f64> {
        &self.durations_ns
    }

    pub fn duration(&self, gate: &str) -> Option<f64> {
        self.durations_ns.get(gate).copied()
    }

    pub fn neighbors(&self, q: usize) -> &[usize] {
        &self.adjacency[q]
    }

    pub fn degree(&self, q: usize) -> usize {
        self.adjacency[q].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.n_physical && self.adjacency[a].binary_search(&b).is_ok()
    }

    pub fn with_durations(mut self, durations_ns: BTreeMap<String, f64>) -> Self {
        self.durations_ns = durations_ns;
        self
    }

    pub(crate) fn bfs_distances(&self, from: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n_physical];
        dist[from] = Some(0);
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap_or(0);
            for &v in &self.adjacency[u] {
                if dist[v].is_none() {
                    dist[v] = Some(d + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn from_json(src: &str) -> Result<Self, TargetError> {
        let raw: TargetJson = serde_json::from_str(src).map_err(|e| TargetError::Json(e.to_string()))?;
        if raw.n == 0 || raw.n > MAX_PHYSICAL {
            return Err(TargetError::BadSize(raw.n));
        }
        HardwareTarget::new(
            raw.n,
            raw.edges.iter().map(|e| (e[0], e[1])),
            raw.basis.into_iter().collect(),
            raw.durations_ns,
        )
    }

    pub fn to_json(&self) -> String {
        let raw = TargetJson {
            description: None,
            n: self.n_physical,
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
            basis: self.basis.iter().cloned().collect(),
            durations_ns: self.durations_ns.clone(),
        };
        serde_json::to_string(&raw).expect("target serialize")
    }
}

/// Load a bundled preset or generate a heavy-hex lattice.
pub fn heavy_hex_target(preset: TargetPreset) -> Result<HardwareTarget, TargetError> {
    match preset {
        TargetPreset::Eagle127 => HardwareTarget::from_json(EAGLE127_JSON),
        TargetPreset::HeavyHex { distance } => heavy_hex_lattice(distance),
    }
}

/// `distance + 1` rows of `4·distance + 3` qubits joined by bridge qubits every
/// fourth column, alternating the column offset between row gaps so that no
/// row qubit is bridged both up and down.
fn heavy_hex_lattice(distance: usize) -> Result<HardwareTarget, TargetError> {
    if distance == 0 {
        return Err(TargetError::BadDistance);
    }
    let rows = distance + 1;
    let len = 4 * distance + 3;
    let row_start = |r: usize| r * (len + distance + 1);
    let mut edges = Vec::new();
    for r in 0..rows {
        let s = row_start(r);
        edges.extend((0..len - 1).map(|i| (s + i, s + i + 1)));
        if r + 1 < rows {
            let bridge0 = s + len;
            let offset = if r % 2 == 0 { 0 } else { 2 };
            for k in 0..=distance {
                let col = offset + 4 * k;
                let bridge = bridge0 + k;
                edges.push((s + col, bridge));
                edges.push((bridge, row_start(r + 1) + col));
            }
        }
    }
    let n = rows * len + distance * (distance + 1);
    HardwareTarget::new(n, edges, default_basis(), default_durations())
}
