//! Undirected simple graphs over a fixed node set, reference random graphs
//! and the topological profiles used for comparison.
//!
//! Nodes are indexed `0..n`; the sequential identifier a generator sees for
//! node `u` is `u + 1`.

mod distance;
mod generators;
pub mod io;
mod motif;
mod pagerank;
mod profile;

use rustc_hash::FxHashSet;

pub use distance::{
    distance_distribution, random_walk_distance, DistanceHistogram, WALK_MAX_STEPS,
};
pub use generators::{barabasi_albert, erdos_renyi};
pub use motif::{
    motif_profile, motif_profile_with, MotifClass, MotifMethod, MotifProfile, EXHAUSTIVE_MAX_NODES,
};
pub use pagerank::{pagerank, DAMPING};
pub use profile::{degree_histogram, NetworkProfile, ProfileParams};

#[derive(Debug, Clone)]
pub struct Network {
    adjacency: Vec<Vec<u32>>,
    edges: Vec<(u32, u32)>,
    edge_set: FxHashSet<u64>,
}

#[inline]
fn key(u: u32, v: u32) -> u64 {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    ((a as u64) << 32) | b as u64
}

impl Network {
    pub fn new(n: usize) -> Self {
        assert!(n <= u32::MAX as usize, "node count exceeds u32 range");
        Network {
            adjacency: vec![Vec::new(); n],
            edges: Vec::new(),
            edge_set: FxHashSet::default(),
        }
    }

    pub fn with_capacity(n: usize, m: usize) -> Self {
        let mut net = Network::new(n);
        net.edges.reserve(m);
        net.edge_set.reserve(m);
        net
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut net = Network::new(n);
        for (u, v) in edges {
            net.add_edge(u, v);
        }
        net
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Number of unordered node pairs, `n(n-1)/2`.
    pub fn pair_count(&self) -> usize {
        let n = self.node_count();
        n * n.saturating_sub(1) / 2
    }

    pub fn is_complete(&self) -> bool {
        self.edge_count() == self.pair_count()
    }

    /// Adds the undirected edge `{u, v}`. Returns false (and changes
    /// nothing) for self-loops and duplicates.
    pub fn add_edge(&mut self, u: usize, v: usize) -> bool {
        let n = self.node_count();
        assert!(u < n && v < n, "edge ({u}, {v}) out of range for {n} nodes");
        if u == v || !self.edge_set.insert(key(u as u32, v as u32)) {
            return false;
        }
        self.adjacency[u].push(v as u32);
        self.adjacency[v].push(u as u32);
        self.edges.push((u as u32, v as u32));
        true
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.edge_set.contains(&key(u as u32, v as u32))
    }

    #[inline]
    pub fn degree(&self, u: usize) -> usize {
        self.adjacency[u].len()
    }

    #[inline]
    pub fn neighbors(&self, u: usize) -> &[u32] {
        &self.adjacency[u]
    }

    /// Edges in insertion order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().map(|&(u, v)| (u as usize, v as usize))
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    /// Adjacency lists sorted ascending.
    pub(crate) fn sorted_adjacency(&self) -> Vec<Vec<u32>> {
        self.adjacency
            .iter()
            .map(|a| {
                let mut a = a.clone();
                a.sort_unstable();
                a
            })
            .collect()
    }
}

impl PartialEq for Network {
    /// Same node count and same edge sequence.
    fn eq(&self, other: &Self) -> bool {
        self.node_count() == other.node_count() && self.edges == other.edges
    }
}
