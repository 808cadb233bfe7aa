use std::collections::VecDeque;

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::Network;
use crate::seed;

/// Longest random walk used to estimate a hop distance.
pub const WALK_MAX_STEPS: u32 = 10;

/// Estimated hop distance from `i` to `j` by one uniform random walk.
///
/// Returns the step at which the walk first reaches `j`, `0` when `i == j`,
/// and `WALK_MAX_STEPS + 1` when `j` is not reached (including when `i` has
/// no neighbors).
pub fn random_walk_distance<R: Rng + ?Sized>(
    net: &Network,
    i: usize,
    j: usize,
    rng: &mut R,
) -> u32 {
    if i == j {
        return 0;
    }
    let mut at = i;
    for step in 1..=WALK_MAX_STEPS {
        let nbrs = net.neighbors(at);
        if nbrs.is_empty() {
            break;
        }
        at = nbrs[rng.gen_range(0..nbrs.len())] as usize;
        if at == j {
            return step;
        }
    }
    WALK_MAX_STEPS + 1
}

/// Hop counts over sampled (source, target) pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceHistogram {
    /// `counts[h]` is the number of pairs at distance `h` (`counts[0]` is 0).
    pub counts: Vec<u64>,
    pub unreachable: u64,
}

impl DistanceHistogram {
    pub fn pairs(&self) -> u64 {
        self.counts.iter().sum::<u64>() + self.unreachable
    }

    /// Fractions for distances `1..=max_hops` followed by the unreachable
    /// fraction; zero-padded (or truncated) to `max_hops`.
    pub fn frequencies(&self, max_hops: usize) -> Vec<f64> {
        let total = self.pairs();
        let mut out = vec![0.0; max_hops + 1];
        if total == 0 {
            return out;
        }
        let t = total as f64;
        for (h, &c) in self.counts.iter().enumerate().skip(1).take(max_hops) {
            out[h - 1] = c as f64 / t;
        }
        out[max_hops] = self.unreachable as f64 / t;
        out
    }

    pub fn max_hops(&self) -> usize {
        self.counts.iter().rposition(|&c| c > 0).unwrap_or(0)
    }
}

fn bfs(net: &Network, source: usize, dist: &mut [u32], queue: &mut VecDeque<usize>) {
    dist.iter_mut().for_each(|d| *d = u32::MAX);
    dist[source] = 0;
    queue.clear();
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        let next = dist[u] + 1;
        for &v in net.neighbors(u) {
            let v = v as usize;
            if dist[v] == u32::MAX {
                dist[v] = next;
                queue.push_back(v);
            }
        }
    }
}

/// BFS from `min(n, sources)` distinct uniformly drawn sources.
///
/// With `sources >= n` every node is a source and the seed is unused.
pub fn distance_distribution(net: &Network, sources: usize, seed: u64) -> DistanceHistogram {
    let n = net.node_count();
    let picked: Vec<usize> = if sources >= n {
        (0..n).collect()
    } else {
        let mut rng = seed::rng(seed);
        let mut s = index::sample(&mut rng, n, sources).into_vec();
        s.sort_unstable();
        s
    };
    let mut hist = DistanceHistogram {
        counts: vec![0],
        unreachable: 0,
    };
    let mut dist = vec![u32::MAX; n];
    let mut queue = VecDeque::with_capacity(n);
    for &s in &picked {
        bfs(net, s, &mut dist, &mut queue);
        for (t, &d) in dist.iter().enumerate() {
            if t == s {
                continue;
            }
            if d == u32::MAX {
                hist.unreachable += 1;
            } else {
                let d = d as usize;
                if hist.counts.len() <= d {
                    hist.counts.resize(d + 1, 0);
                }
                hist.counts[d] += 1;
            }
        }
    }
    hist
}
