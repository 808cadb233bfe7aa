use rand::seq::SliceRandom;
use rand::Rng;

use super::Network;
use crate::error::{Error, Result};
use crate::seed;

/// Uniform G(n, m): exactly `m` distinct edges, deterministic per seed.
pub fn erdos_renyi(n: usize, m: usize, seed: u64) -> Result<Network> {
    let pairs = n * n.saturating_sub(1) / 2;
    if m > pairs {
        return Err(Error::invalid(format!(
            "{m} edges requested but {n} nodes admit only {pairs}"
        )));
    }
    let mut rng = seed::rng(seed);
    let mut net = Network::with_capacity(n, m);
    if m * 2 <= pairs {
        while net.edge_count() < m {
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            net.add_edge(u, v);
        }
    } else {
        // Dense: shuffle all pairs and keep a prefix.
        let mut all: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        all.shuffle(&mut rng);
        for &(u, v) in &all[..m] {
            net.add_edge(u, v);
        }
    }
    Ok(net)
}

/// Barabási–Albert growth from a clique of `m_per_node` nodes; every later
/// node attaches to `m_per_node` distinct existing nodes chosen with
/// probability proportional to degree.
///
/// Node indices follow arrival order.
pub fn barabasi_albert(n: usize, m_per_node: usize, seed: u64) -> Result<Network> {
    if m_per_node < 1 || n <= m_per_node {
        return Err(Error::invalid(format!(
            "barabasi_albert requires n > m_per_node >= 1 (n = {n}, m_per_node = {m_per_node})"
        )));
    }
    let m0 = m_per_node;
    let total = m0 * (n - m0) + m0 * (m0 - 1) / 2;
    let mut rng = seed::rng(seed);
    let mut net = Network::with_capacity(n, total);
    // One entry per edge endpoint: sampling from it is degree-proportional.
    let mut endpoints: Vec<usize> = Vec::with_capacity(2 * total);
    for u in 0..m0 {
        for v in u + 1..m0 {
            net.add_edge(u, v);
            endpoints.extend([u, v]);
        }
    }
    let mut chosen: Vec<usize> = Vec::with_capacity(m0);
    for new in m0..n {
        chosen.clear();
        while chosen.len() < m0 {
            let t = if endpoints.is_empty() {
                rng.gen_range(0..new)
            } else {
                endpoints[rng.gen_range(0..endpoints.len())]
            };
            if !chosen.contains(&t) {
                chosen.push(t);
            }
        }
        for &t in &chosen {
            net.add_edge(new, t);
            endpoints.extend([new, t]);
        }
    }
    debug_assert_eq!(net.edge_count(), total);
    Ok(net)
}
