use serde::{Deserialize, Serialize};

use super::{
    distance_distribution, motif_profile, pagerank, DistanceHistogram, MotifProfile, Network,
};
use crate::seed;

/// Sampling parameters shared by every profile that will be compared.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileParams {
    /// BFS sources for the distance distribution.
    pub distance_sources: usize,
    /// Sample cap of the graphlet profile on large graphs.
    pub motif_sample_cap: usize,
}

impl Default for ProfileParams {
    fn default() -> Self {
        ProfileParams {
            distance_sources: 100,
            motif_sample_cap: 50_000,
        }
    }
}

/// The four distributions networks are compared on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkProfile {
    /// `degree_hist[k]` nodes have degree `k`; total mass is `n`.
    pub degree_hist: Vec<u64>,
    /// PageRank values sorted ascending.
    pub pagerank: Vec<f64>,
    pub distance: DistanceHistogram,
    pub motifs: MotifProfile,
}

pub fn degree_histogram(net: &Network) -> Vec<u64> {
    let degrees = net.degrees();
    let max = degrees.iter().copied().max().unwrap_or(0);
    let mut hist = vec![0u64; max + 1];
    for d in degrees {
        hist[d] += 1;
    }
    hist
}

impl NetworkProfile {
    pub fn compute(net: &Network, params: &ProfileParams, seed: u64) -> Self {
        let mut pr = pagerank(net);
        pr.sort_by(f64::total_cmp);
        NetworkProfile {
            degree_hist: degree_histogram(net),
            pagerank: pr,
            distance: distance_distribution(net, params.distance_sources, seed::derive(seed, 1)),
            motifs: motif_profile(net, params.motif_sample_cap, seed::derive(seed, 2)),
        }
    }

    pub fn node_count(&self) -> usize {
        self.pagerank.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::testing::*;

    #[test]
    fn degree_mass_equals_n() {
        let net = star(4);
        let h = degree_histogram(&net);
        assert_eq!(h, vec![0, 4, 0, 0, 1]);
        assert_eq!(h.iter().sum::<u64>(), 5);
        assert_eq!(degree_histogram(&Network::new(3)), vec![3]);
    }

    #[test]
    fn profile_is_deterministic() {
        let net = crate::graph::erdos_renyi(150, 600, 4).unwrap();
        let p = ProfileParams::default();
        let a = NetworkProfile::compute(&net, &p, 9);
        assert_eq!(a, NetworkProfile::compute(&net, &p, 9));
        assert!((a.pagerank.iter().sum::<f64>() - 1.0).abs() < 1e-8);
        assert!(a.pagerank.windows(2).all(|w| w[0] <= w[1]));
        assert!((a.motifs.as_slice().iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }
}
