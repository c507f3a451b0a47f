use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{invalid, Error, Result};
use crate::Limits;

/// Weighted undirected graph describing an Ising / Max-Cut instance.
///
/// Edges are stored as `(i, j, w)` with `i < j`; the weight is the coupling
/// `J_ij`. Unweighted instances carry `w = 1` on every edge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGraph", into = "RawGraph")]
pub struct Graph {
    n_nodes: usize,
    edges: Vec<(usize, usize, f64)>,
}

#[derive(Serialize, Deserialize)]
struct RawGraph {
    n_nodes: usize,
    edges: Vec<(usize, usize, f64)>,
}

impl TryFrom<RawGraph> for Graph {
    type Error = Error;

    fn try_from(raw: RawGraph) -> Result<Self> {
        Graph::new(raw.n_nodes, raw.edges)
    }
}

impl From<Graph> for RawGraph {
    fn from(g: Graph) -> Self {
        RawGraph {
            n_nodes: g.n_nodes,
            edges: g.edges,
        }
    }
}

impl Graph {
    /// Builds a graph, normalizing each edge to `i < j`.
    ///
    /// Self-loops, duplicate pairs, out-of-range endpoints and non-finite
    /// weights are rejected.
    pub fn new(n_nodes: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        if n_nodes == 0 {
            return Err(invalid("graph must have at least one node"));
        }
        let mut seen = HashSet::new();
        let mut normalized = Vec::with_capacity(edges.len());
        for (a, b, w) in edges {
            if a >= n_nodes || b >= n_nodes {
                return Err(invalid(format!(
                    "edge ({a}, {b}) out of range for {n_nodes} nodes"
                )));
            }
            if a == b {
                return Err(invalid(format!("self-loop on node {a}")));
            }
            if !w.is_finite() {
                return Err(invalid(format!("edge ({a}, {b}) has non-finite weight")));
            }
            let (i, j) = if a < b { (a, b) } else { (b, a) };
            if !seen.insert((i, j)) {
                return Err(invalid(format!("duplicate edge ({i}, {j})")));
            }
            normalized.push((i, j, w));
        }
        Ok(Graph {
            n_nodes,
            edges: normalized,
        })
    }

    /// Unit-weight graph from endpoint pairs.
    pub fn unweighted(n_nodes: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        Graph::new(n_nodes, pairs.iter().map(|&(i, j)| (i, j, 1.0)).collect())
    }

    pub fn complete(n_nodes: usize) -> Result<Self> {
        let mut pairs = Vec::new();
        for i in 0..n_nodes {
            for j in i + 1..n_nodes {
                pairs.push((i, j));
            }
        }
        Graph::unweighted(n_nodes, &pairs)
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    /// Stable identifier: truncated SHA-256 of the sorted edge list.
    pub fn id(&self) -> String {
        let mut edges = self.edges.clone();
        edges.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut text = format!("n{}", self.n_nodes);
        for (i, j, w) in edges {
            text.push_str(&format!(";{i}-{j}-{w}"));
        }
        let digest = Sha256::digest(text.as_bytes());
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }

    /// True iff every node is reachable from node 0.
    pub fn is_connected(&self) -> bool {
        let mut adjacency = vec![Vec::new(); self.n_nodes];
        for &(i, j, _) in &self.edges {
            adjacency[i].push(j);
            adjacency[j].push(i);
        }
        let mut visited = vec![false; self.n_nodes];
        let mut stack = vec![0];
        visited[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adjacency[v] {
                if !visited[w] {
                    visited[w] = true;
                    stack.push(w);
                }
            }
        }
        visited.into_iter().all(|v| v)
    }
}

/// Spin configuration `z_i ∈ {+1, −1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinAssignment(Vec<i8>);

impl SpinAssignment {
    pub fn new(z: Vec<i8>) -> Result<Self> {
        if let Some(bad) = z.iter().find(|&&s| s != 1 && s != -1) {
            return Err(invalid(format!("spin value {bad} is not +1 or -1")));
        }
        Ok(SpinAssignment(z))
    }

    /// Spins of computational basis state `index`: `z_k = 1 − 2·bit_k`.
    pub fn from_basis_index(index: usize, n: usize) -> Self {
        SpinAssignment(
            (0..n)
                .map(|k| if (index >> k) & 1 == 1 { -1 } else { 1 })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn spins(&self) -> &[i8] {
        &self.0
    }

    pub fn flipped(&self) -> Self {
        SpinAssignment(self.0.iter().map(|s| -s).collect())
    }
}

/// Ising cost `C = Σ w·z_i·z_j`; the maximum cut minimizes it.
pub fn maxcut_cost(g: &Graph, z: &SpinAssignment) -> Result<f64> {
    if z.len() != g.n_nodes() {
        return Err(invalid(format!(
            "assignment has {} spins, graph has {} nodes",
            z.len(),
            g.n_nodes()
        )));
    }
    let s = z.spins();
    Ok(g.edges()
        .iter()
        .map(|&(i, j, w)| w * f64::from(s[i] * s[j]))
        .sum())
}

/// Diagonal of the problem Hamiltonian in the computational basis.
///
/// Bit `k` of the basis index is qubit `k`.
pub fn diagonal_energies(g: &Graph, limits: &Limits) -> Result<Vec<f64>> {
    let n = g.n_nodes();
    limits.check_qubits(n)?;
    let dim = 1usize << n;
    let mut energies = vec![0.0; dim];
    for (b, e) in energies.iter_mut().enumerate() {
        *e = g
            .edges()
            .iter()
            .map(|&(i, j, w)| {
                if ((b >> i) ^ (b >> j)) & 1 == 1 {
                    -w
                } else {
                    w
                }
            })
            .sum();
    }
    Ok(energies)
}

/// `G(n, p)` with unit weights; each pair `(i, j)`, `i < j`, is visited in
/// lexicographic order and kept with probability `p`.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid(format!("edge probability {p} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen::<f64>() < p {
                pairs.push((i, j));
            }
        }
    }
    Graph::unweighted(n, &pairs)
}
