//! Frequencies of the eight connected undirected graphlets on 3 and 4 nodes.
//!
//! Exact counts come from closed-form relations between non-induced pattern
//! counts (stars, 3-paths, paws, 4-cycles, diamonds, cliques) and induced
//! graphlet counts. On large graphs the four-node counts that need
//! super-linear work are instead estimated by uniform 3-path sampling.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::Network;
use crate::seed;

/// Graphs up to this size are always counted exactly.
pub const EXHAUSTIVE_MAX_NODES: usize = 60;

/// Exact counting is also used whenever its work estimate `sum(deg^2)` stays
/// below this multiple of the sample cap.
const EXACT_WORK_PER_SAMPLE: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MotifClass {
    OpenTriad,
    Triangle,
    Path,
    Star,
    Cycle,
    Paw,
    Diamond,
    Clique,
}

impl MotifClass {
    pub const ALL: [MotifClass; 8] = [
        MotifClass::OpenTriad,
        MotifClass::Triangle,
        MotifClass::Path,
        MotifClass::Star,
        MotifClass::Cycle,
        MotifClass::Paw,
        MotifClass::Diamond,
        MotifClass::Clique,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MotifClass::OpenTriad => "open_triad",
            MotifClass::Triangle => "triangle",
            MotifClass::Path => "path",
            MotifClass::Star => "star",
            MotifClass::Cycle => "cycle",
            MotifClass::Paw => "paw",
            MotifClass::Diamond => "diamond",
            MotifClass::Clique => "k4",
        }
    }

    pub fn nodes(self) -> usize {
        match self {
            MotifClass::OpenTriad | MotifClass::Triangle => 3,
            _ => 4,
        }
    }

    /// Class of the induced subgraph on the given 3 or 4 nodes, or `None`
    /// when it is disconnected.
    pub fn of_induced(net: &Network, nodes: &[usize]) -> Option<MotifClass> {
        let k = nodes.len();
        let mut deg = [0u8; 4];
        let mut edges = 0;
        for a in 0..k {
            for b in a + 1..k {
                if net.has_edge(nodes[a], nodes[b]) {
                    deg[a] += 1;
                    deg[b] += 1;
                    edges += 1;
                }
            }
        }
        let deg = &deg[..k];
        if deg.contains(&0) {
            return None;
        }
        let max = *deg.iter().max().unwrap();
        match (k, edges) {
            (3, 2) => Some(MotifClass::OpenTriad),
            (3, 3) => Some(MotifClass::Triangle),
            (4, 3) if max == 3 => Some(MotifClass::Star),
            (4, 3) => Some(MotifClass::Path),
            (4, 4) if max == 2 => Some(MotifClass::Cycle),
            (4, 4) => Some(MotifClass::Paw),
            (4, 5) => Some(MotifClass::Diamond),
            (4, 6) => Some(MotifClass::Clique),
            _ => None,
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

/// Normalized graphlet frequencies, indexed in [`MotifClass::ALL`] order.
///
/// All zeros when the graph has no connected 3-node subgraph.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MotifProfile(pub [f64; 8]);

impl MotifProfile {
    pub fn get(&self, class: MotifClass) -> f64 {
        self.0[class.index()]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn from_counts(counts: [f64; 8]) -> Self {
        let total: f64 = counts.iter().sum();
        if total <= 0.0 {
            return MotifProfile([0.0; 8]);
        }
        let mut out = [0.0; 8];
        for (o, c) in out.iter_mut().zip(counts) {
            *o = c / total;
        }
        MotifProfile(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MotifMethod {
    /// Exact when small or cheap, otherwise sampled with at most this many
    /// samples.
    Auto {
        sample_cap: usize,
    },
    Exact,
    Sampled {
        samples: usize,
    },
}

/// Graphlet profile with the automatic exact/sampled switch.
pub fn motif_profile(net: &Network, sample_cap: usize, seed: u64) -> MotifProfile {
    motif_profile_with(net, MotifMethod::Auto { sample_cap }, seed)
}

pub fn motif_profile_with(net: &Network, method: MotifMethod, seed: u64) -> MotifProfile {
    let counts = match method {
        MotifMethod::Exact => exact_counts(net),
        MotifMethod::Sampled { samples } => sampled_counts(net, samples, seed),
        MotifMethod::Auto { sample_cap } => {
            let work: usize = net.degrees().iter().map(|d| d * d).sum();
            if net.node_count() <= EXHAUSTIVE_MAX_NODES
                || work <= EXACT_WORK_PER_SAMPLE.saturating_mul(sample_cap)
            {
                exact_counts(net)
            } else {
                sampled_counts(net, sample_cap, seed)
            }
        }
    };
    MotifProfile::from_counts(counts)
}

fn choose2(x: usize) -> f64 {
    (x * x.saturating_sub(1) / 2) as f64
}

fn choose3(x: usize) -> f64 {
    if x < 3 {
        0.0
    } else {
        (x as f64) * (x as f64 - 1.0) * (x as f64 - 2.0) / 6.0
    }
}

/// Triangles through each edge, in `net.edges()` order, by probing the
/// smaller endpoint's neighbor list.
fn edge_triangles(net: &Network) -> Vec<usize> {
    net.edges()
        .map(|(u, v)| {
            let (small, large) = if net.degree(u) <= net.degree(v) {
                (u, v)
            } else {
                (v, u)
            };
            net.neighbors(small)
                .iter()
                .filter(|&&w| net.has_edge(large, w as usize))
                .count()
        })
        .collect()
}

/// Induced counts of the two three-node classes.
fn three_node_counts(net: &Network, edge_tri: &[usize]) -> (f64, f64) {
    let triangles = edge_tri.iter().sum::<usize>() as f64 / 3.0;
    let wedges: f64 = net.degrees().into_iter().map(choose2).sum();
    (wedges - 3.0 * triangles, triangles)
}

/// Induced four-node counts from non-induced pattern counts.
///
/// Containment of each pattern in each induced graphlet:
///
/// ```text
///            path star cycle paw diamond k4
/// path        1    0    4    2     6    12
/// star        0    1    0    1     2     4
/// cycle                 1    0     1     3
/// paw                        1     4    12
/// diamond                          1     6
/// k4                                     1
/// ```
fn solve_induced(
    n_path: f64,
    n_star: f64,
    n_cycle: f64,
    n_paw: f64,
    n_diamond: f64,
    n_k4: f64,
) -> [f64; 6] {
    let k4 = n_k4;
    let diamond = n_diamond - 6.0 * k4;
    let paw = n_paw - 4.0 * diamond - 12.0 * k4;
    let cycle = n_cycle - diamond - 3.0 * k4;
    let star = n_star - paw - 2.0 * diamond - 4.0 * k4;
    let path = n_path - 4.0 * cycle - 2.0 * paw - 6.0 * diamond - 12.0 * k4;
    [path, star, cycle, paw, diamond, k4]
}

fn exact_counts(net: &Network) -> [f64; 8] {
    let n = net.node_count();
    let adj = net.sorted_adjacency();
    let degrees = net.degrees();
    let edge_tri = edge_triangles(net);
    let (open, triangles) = three_node_counts(net, &edge_tri);

    let mut node_tri = vec![0usize; n];
    let mut n_path = 0.0;
    let mut n_diamond = 0.0;
    let mut n_k4 = 0.0;
    let mut common = Vec::new();
    for ((u, v), &t) in net.edges().zip(&edge_tri) {
        node_tri[u] += t;
        node_tri[v] += t;
        n_path += (degrees[u] as f64 - 1.0) * (degrees[v] as f64 - 1.0);
        n_diamond += choose2(t);
        // Cliques {a < b < c < d} are found once, from edge (a, b).
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        common.clear();
        let (mut x, mut y) = (0, 0);
        let (la, lb) = (&adj[a], &adj[b]);
        while x < la.len() && y < lb.len() {
            match la[x].cmp(&lb[y]) {
                std::cmp::Ordering::Less => x += 1,
                std::cmp::Ordering::Greater => y += 1,
                std::cmp::Ordering::Equal => {
                    if la[x] as usize > b {
                        common.push(la[x]);
                    }
                    x += 1;
                    y += 1;
                }
            }
        }
        for p in 0..common.len() {
            for q in p + 1..common.len() {
                if net.has_edge(common[p] as usize, common[q] as usize) {
                    n_k4 += 1.0;
                }
            }
        }
    }
    n_path -= 3.0 * triangles;
    let n_paw: f64 = (0..n)
        .map(|v| (node_tri[v] / 2) as f64 * (degrees[v] as f64 - 2.0).max(0.0))
        .sum();
    let n_star: f64 = degrees.iter().map(|&d| choose3(d)).sum();

    // Four-cycles: every pair of opposite corners {u, w} closes C(c, 2)
    // cycles, c being their common-neighbor count; each cycle is seen four
    // times over ordered corner pairs.
    let mut paths2 = vec![0u32; n];
    let mut touched = Vec::new();
    let mut n_cycle = 0.0;
    for u in 0..n {
        for &v in &adj[u] {
            for &w in &adj[v as usize] {
                let w = w as usize;
                if w == u {
                    continue;
                }
                if paths2[w] == 0 {
                    touched.push(w);
                }
                paths2[w] += 1;
            }
        }
        for &w in &touched {
            n_cycle += choose2(paths2[w] as usize);
            paths2[w] = 0;
        }
        touched.clear();
    }
    n_cycle /= 4.0;

    let four = solve_induced(n_path, n_star, n_cycle, n_paw, n_diamond, n_k4);
    [
        open, triangles, four[0], four[1], four[2], four[3], four[4], four[5],
    ]
}

/// Four-node classes estimated from `samples` uniform 3-paths; three-node
/// classes and the non-induced star count stay exact.
fn sampled_counts(net: &Network, samples: usize, seed: u64) -> [f64; 8] {
    let edge_tri = edge_triangles(net);
    let (open, triangles) = three_node_counts(net, &edge_tri);
    let degrees = net.degrees();
    let n_star: f64 = degrees.iter().map(|&d| choose3(d)).sum();
    let edges: Vec<(usize, usize)> = net.edges().collect();

    // Each edge (u, v) centres (d_u - 1)(d_v - 1) three-step walks.
    let mut cumulative = Vec::with_capacity(edges.len());
    let mut total = 0.0;
    for &(u, v) in &edges {
        total += (degrees[u] as f64 - 1.0) * (degrees[v] as f64 - 1.0);
        cumulative.push(total);
    }
    let mut hits = [0.0f64; 8];
    if total > 0.0 && samples > 0 {
        let mut rng = seed::rng(seed);
        for _ in 0..samples {
            let r = rng.gen_range(0.0..total);
            let e = cumulative.partition_point(|&c| c <= r).min(edges.len() - 1);
            let (u, v) = edges[e];
            let a = pick_other(net.neighbors(u), v, &mut rng);
            let b = pick_other(net.neighbors(v), u, &mut rng);
            if a == b {
                continue;
            }
            if let Some(class) = MotifClass::of_induced(net, &[a, u, v, b]) {
                hits[class.index()] += 1.0;
            }
        }
    }
    let scale = if samples > 0 {
        total / samples as f64
    } else {
        0.0
    };
    // Three-paths contained in each induced class: path 1, cycle 4, paw 2,
    // diamond 6, k4 12.
    let est = |c: MotifClass, contained: f64| hits[c.index()] * scale / contained;
    let path = est(MotifClass::Path, 1.0);
    let cycle = est(MotifClass::Cycle, 4.0);
    let paw = est(MotifClass::Paw, 2.0);
    let diamond = est(MotifClass::Diamond, 6.0);
    let k4 = est(MotifClass::Clique, 12.0);
    let star = (n_star - paw - 2.0 * diamond - 4.0 * k4).max(0.0);
    [open, triangles, path, star, cycle, paw, diamond, k4]
}

fn pick_other<R: Rng>(nbrs: &[u32], exclude: usize, rng: &mut R) -> usize {
    // `exclude` is a neighbor, so at least one other entry exists whenever
    // the walk has positive weight.
    loop {
        let w = nbrs[rng.gen_range(0..nbrs.len())] as usize;
        if w != exclude {
            return w;
        }
    }
}

#[cfg(test)]
pub(crate) mod brute {
    use super::*;

    /// Induced counts over every 3- and 4-subset.
    pub fn enumerate(net: &Network) -> [f64; 8] {
        let n = net.node_count();
        let mut counts = [0.0; 8];
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    if let Some(cl) = MotifClass::of_induced(net, &[a, b, c]) {
                        counts[cl.index()] += 1.0;
                    }
                    for d in c + 1..n {
                        if let Some(cl) = MotifClass::of_induced(net, &[a, b, c, d]) {
                            counts[cl.index()] += 1.0;
                        }
                    }
                }
            }
        }
        counts
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::erdos_renyi;
    use crate::graph::testing::*;

    fn profile(net: &Network) -> MotifProfile {
        motif_profile(net, 50_000, 0)
    }

    #[test]
    fn triangle_graph() {
        let p = profile(&complete(3));
        assert_eq!(p.get(MotifClass::Triangle), 1.0);
        assert_eq!(p.get(MotifClass::OpenTriad), 0.0);
        assert!(MotifClass::ALL[2..].iter().all(|&c| p.get(c) == 0.0));
    }

    #[test]
    fn three_path() {
        let p = profile(&path(3));
        assert_eq!(p.get(MotifClass::OpenTriad), 1.0);
        assert_eq!(p.as_slice().iter().sum::<f64>(), 1.0);
    }

    #[test]
    fn no_edges_is_zero() {
        assert_eq!(profile(&Network::new(30)).0, [0.0; 8]);
        assert_eq!(
            motif_profile_with(&Network::new(30), MotifMethod::Sampled { samples: 10 }, 1).0,
            [0.0; 8]
        );
    }

    #[test]
    fn single_shapes() {
        let cases = [
            (path(4), MotifClass::Path, 2.0),
            (star(3), MotifClass::Star, 3.0),
            (cycle(4), MotifClass::Cycle, 4.0),
            (complete(4), MotifClass::Clique, 4.0),
        ];
        for (net, class, triads) in cases {
            let c = exact_counts(&net);
            assert_eq!(c[class.index()], 1.0, "{class:?}");
            assert_eq!(c[0] + c[1], triads, "{class:?}");
        }
        let paw = Network::from_edges(4, [(0, 1), (1, 2), (0, 2), (0, 3)]);
        assert_eq!(exact_counts(&paw)[MotifClass::Paw.index()], 1.0);
        let diamond = Network::from_edges(4, [(0, 1), (1, 2), (0, 2), (0, 3), (1, 3)]);
        assert_eq!(exact_counts(&diamond)[MotifClass::Diamond.index()], 1.0);
    }

    #[test]
    fn exact_matches_enumeration() {
        for s in 0..30u64 {
            let n = 8 + (s as usize % 15);
            let m = (n * (n - 1) / 2) * (1 + s as usize % 5) / 8;
            let net = erdos_renyi(n, m, s).unwrap();
            let fast = exact_counts(&net);
            let slow = brute::enumerate(&net);
            for (a, b) in fast.iter().zip(&slow) {
                assert!((a - b).abs() < 1e-9, "seed {s}: {fast:?} vs {slow:?}");
            }
        }
    }

    #[test]
    fn sampled_stays_close_on_star_forest() {
        // A star has no three-path, so the sampler contributes nothing and
        // the star count comes out exact.
        let p = motif_profile_with(&star(5), MotifMethod::Sampled { samples: 100 }, 3);
        assert_eq!(p, MotifProfile::from_counts(exact_counts(&star(5))));
    }

    #[test]
    fn auto_switches_on_size() {
        let dense = erdos_renyi(200, 8000, 1).unwrap();
        let exact = motif_profile_with(&dense, MotifMethod::Exact, 0);
        let auto = motif_profile(&dense, 1000, 5);
        assert_ne!(exact, auto);
        let l1: f64 = exact
            .0
            .iter()
            .zip(&auto.0)
            .map(|(a, b)| (a - b).abs())
            .sum();
        assert!(l1 < 0.05, "{l1}");
    }
}
