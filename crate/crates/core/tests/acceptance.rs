//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Pass criterion numbers as arguments to run a subset, e.g.
//! `cargo test --test acceptance -- 4 5`.

#![allow(clippy::needless_range_loop)]

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use rand::Rng;

use netgen::atlas::{
    build_atlas, combined_dissimilarity, normalize_columns, raw_stress, smacof_embed, AtlasParams,
    SmacofParams,
};
use netgen::cli::load_entries;
use netgen::dissimilarity::emd_1d;
use netgen::evolution::{bounded_tree, evolve_best_of_runs, EvolutionConfig};
use netgen::expr::{behavioral_signature, coefficient_of_variation, standard_probes};
use netgen::graph::{
    barabasi_albert, erdos_renyi, motif_profile, motif_profile_with, pagerank, MotifMethod,
};
use netgen::synthesis::{
    normalize_scores, score_candidates, select_index, synthesize, Candidate, CandidatePool,
    SynthesisSpec,
};
use netgen::{parse_generator, seed, Expr, Network};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

type Criterion = (u32, &'static str, fn() -> Outcome);

const CRITERIA: [Criterion; 11] = [
    (1, "ER recovery", er_recovery),
    (2, "PA recovery", pa_recovery),
    (3, "affinity-target improvement", affinity_improvement),
    (4, "selection law", selection_law),
    (5, "EMD oracle", emd_oracle),
    (6, "motif oracle", motif_oracle),
    (7, "PageRank oracle", pagerank_oracle),
    (8, "combined dissimilarity pipeline", combined_pipeline),
    (9, "SMACOF", smacof),
    (10, "classifier fixture", classifier_fixture),
    (11, "CLI determinism", cli_determinism),
];

fn main() {
    let args: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    if std::env::args().any(|a| a == "--list") {
        for (n, name, _) in CRITERIA {
            println!("criterion {n}: {name}: test");
        }
        return;
    }
    let selected: Vec<u32> = args.iter().filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (n, name, run) in CRITERIA {
        if !selected.is_empty() && !selected.contains(&n) {
            continue;
        }
        let start = Instant::now();
        let o = run();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {n:>2} [{verdict}] {name}: {} ({:.1} s)",
            o.detail,
            start.elapsed().as_secs_f64()
        );
        failed += usize::from(!o.pass);
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}

// ---------------------------------------------------------------------------
// Recovery experiments

const EXPERIMENTS: u64 = 5;

fn search_config(seed: u64) -> EvolutionConfig {
    EvolutionConfig {
        seed,
        runs: 5,
        max_generations: 2000,
        ..EvolutionConfig::default()
    }
}

fn er_recovery() -> Outcome {
    let probes = standard_probes();
    let mut hits = 0;
    let mut notes = Vec::new();
    for e in 1..=EXPERIMENTS {
        let target = erdos_renyi(200, 800, e).unwrap();
        let best = evolve_best_of_runs(&target, &search_config(e)).unwrap();
        let cv = coefficient_of_variation(&behavioral_signature(&best.best, &probes));
        hits += usize::from(cv < 0.01);
        notes.push(format!("{} cv={cv:.3}", best.best));
    }
    outcome(
        hits >= 4,
        format!("{hits}/{EXPERIMENTS} constant [{}]", notes.join("; ")),
    )
}

fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx).powi(2);
        syy += (b - my).powi(2);
    }
    if sxx == 0.0 || syy == 0.0 {
        0.0
    } else {
        sxy / (sxx * syy).sqrt()
    }
}

fn pa_recovery() -> Outcome {
    let probes = standard_probes();
    let ki: Vec<f64> = probes.iter().map(|c| c.k_i as f64).collect();
    let kj: Vec<f64> = probes.iter().map(|c| c.k_j as f64).collect();
    let mut hits = 0;
    let mut notes = Vec::new();
    for e in 1..=EXPERIMENTS {
        let target = barabasi_albert(200, 4, e).unwrap();
        let best = evolve_best_of_runs(&target, &search_config(e)).unwrap();
        let sig = behavioral_signature(&best.best, &probes);
        let r = pearson(&sig, &ki).max(pearson(&sig, &kj));
        let kd = best.records[best.best_run].report.ratios.k_d;
        hits += usize::from(r > 0.9 && kd < 0.5);
        notes.push(format!("{} r={r:.2} k_d={kd:.2}", best.best));
    }
    outcome(
        hits >= 4,
        format!("{hits}/{EXPERIMENTS} recovered [{}]", notes.join("; ")),
    )
}

fn affinity_improvement() -> Outcome {
    let generator = parse_generator("aff(5, exp(k), 1)").unwrap();
    let target = synthesize(&generator, &SynthesisSpec::new(300, 1500, 1)).unwrap();
    let best = evolve_best_of_runs(&target, &search_config(1)).unwrap();
    let f = best.records[best.best_run].fitness;
    outcome(
        f < 1.0,
        format!("best-of-5 fitness {f:.3} with {}", best.best),
    )
}

// ---------------------------------------------------------------------------
// Selection law

const DRAWS: usize = 100_000;

fn within_three_sigma(weights: &[f64], s: u64) -> Result<(), String> {
    let total: f64 = weights.iter().sum();
    let mut counts = vec![0usize; weights.len()];
    let mut rng = seed::rng(s);
    for _ in 0..DRAWS {
        counts[select_index(weights, &mut rng).unwrap()] += 1;
    }
    for (k, (&c, &w)) in counts.iter().zip(weights).enumerate() {
        let p = w / total;
        let mean = DRAWS as f64 * p;
        let sigma = (DRAWS as f64 * p * (1.0 - p)).sqrt();
        if (c as f64 - mean).abs() > 3.0 * sigma {
            return Err(format!(
                "pool {s} candidate {k}: {c} draws, expected {mean:.1} ± {:.1}",
                3.0 * sigma
            ));
        }
    }
    Ok(())
}

fn selection_law() -> Outcome {
    // Worked rules: negatives become 0; an all-zero pool becomes uniform.
    let rules = [
        (vec![-1.0, 2.0, 3.0], vec![0.0, 2.0, 3.0]),
        (vec![0.0, 0.0, 0.0], vec![1.0, 1.0, 1.0]),
        (vec![-2.0, 0.0, -0.5], vec![1.0, 1.0, 1.0]),
        (vec![0.0, 5.0], vec![0.0, 5.0]),
    ];
    for (raw, want) in &rules {
        if &normalize_scores(raw) != want {
            return outcome(
                false,
                format!("normalize {raw:?} gave {:?}", normalize_scores(raw)),
            );
        }
    }
    let pools: Vec<Vec<f64>> = vec![
        (1..=10).map(|k| k as f64).collect(),
        vec![0.5; 10],
        normalize_scores(&[-3.0, 1.0, 0.0, 7.5, 2.0, -1.0, 0.25, 4.0, 1e-3, 9.0]),
        normalize_scores(&[0.0; 10]),
        vec![1e6, 1.0, 1.0, 1.0, 1e5, 1.0, 1.0, 1.0, 1.0, 5e5],
    ];
    for (s, pool) in pools.iter().enumerate() {
        if let Err(e) = within_three_sigma(pool, s as u64) {
            return outcome(false, e);
        }
    }
    // The full scoring path: degree-based scores with a negative offset on a
    // fixed network and a fixed 10-candidate pool.
    let mut net = Network::new(12);
    for (u, v) in [(0, 1), (0, 2), (0, 3), (1, 2), (4, 5), (6, 0), (7, 0)] {
        net.add_edge(u, v);
    }
    let pairs: [(u32, u32); 10] = [
        (0, 4),
        (0, 5),
        (1, 3),
        (2, 3),
        (4, 8),
        (8, 9),
        (1, 10),
        (6, 7),
        (2, 11),
        (3, 5),
    ];
    let mut pool = CandidatePool {
        candidates: pairs
            .iter()
            .map(|&(i, j)| Candidate { i, j, score: 0.0 })
            .collect(),
    };
    let expr = parse_generator("sub(k_i, 1)").unwrap();
    score_candidates(&mut pool, &expr, &net, &mut seed::rng(0));
    let oracle: Vec<f64> = pairs
        .iter()
        .map(|&(i, _)| (net.degree(i as usize) as f64 - 1.0).max(0.0))
        .collect();
    if pool.scores() != oracle {
        return outcome(
            false,
            format!("pool scores {:?} != {oracle:?}", pool.scores()),
        );
    }
    if let Err(e) = within_three_sigma(&pool.scores(), 99) {
        return outcome(false, e);
    }
    outcome(
        true,
        format!(
            "{} pools × {DRAWS} draws within 3σ; clamp and all-zero rules hold",
            pools.len() + 1
        ),
    )
}

// ---------------------------------------------------------------------------
// EMD oracle: min-cost flow by successive shortest paths on the complete
// bipartite transport graph with costs |i - j|.

fn transport_cost(p: &[f64], q: &[f64]) -> f64 {
    let n = p.len().max(q.len());
    let norm = |v: &[f64]| {
        let t: f64 = v.iter().sum();
        let mut out: Vec<f64> = v.iter().map(|x| x / t).collect();
        out.resize(n, 0.0);
        out
    };
    let (mut supply, mut demand) = (norm(p), norm(q));
    // flow[i][j] from supply bin i to demand bin j.
    let mut flow = vec![vec![0.0f64; n]; n];
    let eps = 1e-15;
    loop {
        // Nodes: 0..n supplies, n..2n demands. Bellman-Ford from all
        // remaining supplies over forward arcs (any i -> j) and backward
        // arcs (j -> i where flow > 0).
        let mut dist = vec![f64::INFINITY; 2 * n];
        let mut prev = vec![usize::MAX; 2 * n];
        for i in 0..n {
            if supply[i] > eps {
                dist[i] = 0.0;
            }
        }
        if dist.iter().all(|d| d.is_infinite()) {
            break;
        }
        for _ in 0..2 * n {
            let mut changed = false;
            for i in 0..n {
                for j in 0..n {
                    let c = (i as f64 - j as f64).abs();
                    if dist[i] + c < dist[n + j] - 1e-12 {
                        dist[n + j] = dist[i] + c;
                        prev[n + j] = i;
                        changed = true;
                    }
                    if flow[i][j] > eps && dist[n + j] - c < dist[i] - 1e-12 {
                        dist[i] = dist[n + j] - c;
                        prev[i] = n + j;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let Some(sink) = (0..n)
            .filter(|&j| demand[j] > eps)
            .min_by(|&a, &b| dist[n + a].total_cmp(&dist[n + b]))
        else {
            break;
        };
        // Walk back to a source, finding the bottleneck.
        let mut path = vec![n + sink];
        let mut v = n + sink;
        while prev[v] != usize::MAX {
            v = prev[v];
            path.push(v);
        }
        path.reverse();
        let source = path[0];
        let mut amount = supply[source].min(demand[sink]);
        for w in path.windows(2) {
            if w[0] >= n {
                amount = amount.min(flow[w[1]][w[0] - n]);
            }
        }
        for w in path.windows(2) {
            if w[0] < n {
                flow[w[0]][w[1] - n] += amount;
            } else {
                flow[w[1]][w[0] - n] -= amount;
            }
        }
        supply[source] -= amount;
        demand[sink] -= amount;
    }
    let mut cost = 0.0;
    for i in 0..n {
        for j in 0..n {
            cost += flow[i][j] * (i as f64 - j as f64).abs();
        }
    }
    cost
}

fn random_histogram<R: Rng>(rng: &mut R) -> Vec<f64> {
    let len = rng.gen_range(1..=10);
    loop {
        let h: Vec<f64> = (0..len)
            .map(|_| {
                if rng.gen_bool(0.3) {
                    0.0
                } else {
                    rng.gen::<f64>() * 10.0
                }
            })
            .collect();
        if h.iter().sum::<f64>() > 0.0 {
            return h;
        }
    }
}

fn emd_oracle() -> Outcome {
    let mut rng = seed::rng(5);
    let mut worst: f64 = 0.0;
    for k in 0..1000 {
        let (p, q) = (random_histogram(&mut rng), random_histogram(&mut rng));
        let got = emd_1d(&p, &q).unwrap();
        let want = transport_cost(&p, &q);
        let err = (got - want).abs();
        worst = worst.max(err);
        if err > 1e-9 {
            return outcome(
                false,
                format!("pair {k}: emd {got} vs transport {want} for {p:?} / {q:?}"),
            );
        }
    }
    outcome(true, format!("1000 pairs, max |error| {worst:.2e}"))
}

// ---------------------------------------------------------------------------
// Motif oracle: brute-force enumeration of all 3- and 4-node subsets.

fn induced_class(net: &Network, nodes: &[usize]) -> Option<usize> {
    let mut deg = vec![0; nodes.len()];
    let mut edges = 0;
    for a in 0..nodes.len() {
        for b in a + 1..nodes.len() {
            if net.has_edge(nodes[a], nodes[b]) {
                deg[a] += 1;
                deg[b] += 1;
                edges += 1;
            }
        }
    }
    if deg.contains(&0) {
        return None;
    }
    let max = *deg.iter().max().unwrap();
    // Order: open triad, triangle, path, star, cycle, paw, diamond, K4.
    match (nodes.len(), edges) {
        (3, 2) => Some(0),
        (3, 3) => Some(1),
        // Three edges without isolated vertices on four nodes are connected
        // unless they form a triangle plus a vertex, excluded by deg > 0.
        (4, 3) => Some(if max == 3 { 3 } else { 2 }),
        (4, 4) => Some(if max == 2 { 4 } else { 5 }),
        (4, 5) => Some(6),
        (4, 6) => Some(7),
        // Two disjoint edges.
        (4, 2) => None,
        _ => unreachable!(),
    }
}

fn brute_force_profile(net: &Network) -> [f64; 8] {
    let n = net.node_count();
    let mut counts = [0.0; 8];
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if let Some(k) = induced_class(net, &[a, b, c]) {
                    counts[k] += 1.0;
                }
                for d in c + 1..n {
                    if let Some(k) = induced_class(net, &[a, b, c, d]) {
                        counts[k] += 1.0;
                    }
                }
            }
        }
    }
    let total: f64 = counts.iter().sum();
    if total > 0.0 {
        counts.iter_mut().for_each(|x| *x /= total);
    }
    counts
}

fn random_graph(s: u64, max_nodes: usize) -> Network {
    let mut rng = seed::rng(s);
    let n = rng.gen_range(4..=max_nodes);
    let pairs = n * (n - 1) / 2;
    let m = rng.gen_range(0..=pairs.min(4 * n));
    erdos_renyi(n, m, s).unwrap()
}

fn l1(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

fn motif_oracle() -> Outcome {
    let (mut worst_exact, mut worst_sampled): (f64, f64) = (0.0, 0.0);
    for g in 0..100 {
        let net = random_graph(g, 30);
        let want = brute_force_profile(&net);
        let exact = motif_profile_with(&net, MotifMethod::Exact, g);
        let auto = motif_profile(&net, 50_000, g);
        let sampled = motif_profile_with(&net, MotifMethod::Sampled { samples: 50_000 }, g);
        let e = l1(exact.as_slice(), &want).max(l1(auto.as_slice(), &want));
        worst_exact = worst_exact.max(e);
        if e > 1e-12 {
            return outcome(
                false,
                format!("graph {g}: exhaustive profile off by L1 {e:.3e}"),
            );
        }
        if want.iter().any(|&x| x > 0.0) {
            let s = l1(sampled.as_slice(), &want);
            worst_sampled = worst_sampled.max(s);
            if s > 0.02 {
                return outcome(
                    false,
                    format!("graph {g}: sampled profile off by L1 {s:.4}"),
                );
            }
        }
    }
    outcome(
        true,
        format!(
            "100 graphs; exhaustive max L1 {worst_exact:.1e}, sampled max L1 {worst_sampled:.4}"
        ),
    )
}

// ---------------------------------------------------------------------------
// PageRank oracle: dense power iteration, dangling mass spread uniformly.

fn dense_pagerank(net: &Network) -> Vec<f64> {
    let n = net.node_count();
    let d = 0.85;
    let mut m = vec![vec![0.0; n]; n];
    for u in 0..n {
        let k = net.degree(u);
        for v in 0..n {
            m[v][u] = if k == 0 {
                1.0 / n as f64
            } else if net.has_edge(u, v) {
                1.0 / k as f64
            } else {
                0.0
            };
        }
    }
    let mut x = vec![1.0 / n as f64; n];
    for _ in 0..10_000 {
        let next: Vec<f64> = (0..n)
            .map(|v| (1.0 - d) / n as f64 + d * (0..n).map(|u| m[v][u] * x[u]).sum::<f64>())
            .collect();
        let change = l1(&x, &next);
        x = next;
        if change < 1e-15 {
            break;
        }
    }
    x
}

fn pagerank_oracle() -> Outcome {
    let mut worst: f64 = 0.0;
    for g in 0..50 {
        let net = random_graph(1000 + g, 80);
        let got = pagerank(&net);
        let want = dense_pagerank(&net);
        let sum: f64 = got.iter().sum();
        if (sum - 1.0).abs() > 1e-8 {
            return outcome(false, format!("graph {g}: sum {sum}"));
        }
        let err = got
            .iter()
            .zip(&want)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        worst = worst.max(err);
        if err > 1e-6 {
            return outcome(false, format!("graph {g}: max per-node error {err:.3e}"));
        }
    }
    outcome(true, format!("50 graphs, max per-node error {worst:.1e}"))
}

// ---------------------------------------------------------------------------
// Combined matrix

fn combined_pipeline() -> Outcome {
    let column = normalize_columns(&vec![vec![2.0], vec![4.0], vec![6.0]]);
    if column != vec![vec![0.0], vec![0.5], vec![1.0]] {
        return outcome(false, format!("[2,4,6] normalized to {column:?}"));
    }
    let mut gens: Vec<(String, Expr)> = [
        "0.5",
        "k",
        "i",
        "exp(i)",
        "aff(5, exp(k), 1)",
        "pow(k_i, k_j)",
    ]
    .iter()
    .map(|e| (e.to_string(), parse_generator(e).unwrap()))
    .collect();
    let cfg = EvolutionConfig::default();
    let mut rng = seed::rng(8);
    for k in 0..4 {
        gens.push((format!("random{k}"), bounded_tree(&cfg, &mut rng)));
    }
    let params = AtlasParams {
        nodes: 150,
        edges: 600,
        ..AtlasParams::default()
    };
    let atlas = build_atlas(&gens, &params).unwrap();
    let s = &atlas.combined;
    let n = s.len();
    for i in 0..n {
        if s[i][i] != 0.0 {
            return outcome(false, format!("diagonal {i} is {}", s[i][i]));
        }
        for j in 0..n {
            if s[i][j] != s[j][i] || !(0.0..=8.0).contains(&s[i][j]) {
                return outcome(
                    false,
                    format!("entry ({i},{j}) = {} / {}", s[i][j], s[j][i]),
                );
            }
        }
    }
    if combined_dissimilarity(&atlas.matrices) != *s {
        return outcome(false, "recomputation differs");
    }
    let max = s.iter().flatten().copied().fold(0.0, f64::max);
    outcome(
        true,
        format!("{n} generators: symmetric, zero diagonal, max entry {max:.3}"),
    )
}

// ---------------------------------------------------------------------------
// SMACOF

fn procrustes_rmse(truth: &[[f64; 2]], got: &[Vec<f64>]) -> f64 {
    let n = truth.len() as f64;
    let centre = |pts: Vec<[f64; 2]>| {
        let (cx, cy) = (
            pts.iter().map(|p| p[0]).sum::<f64>() / n,
            pts.iter().map(|p| p[1]).sum::<f64>() / n,
        );
        pts.into_iter()
            .map(|p| [p[0] - cx, p[1] - cy])
            .collect::<Vec<_>>()
    };
    let a = centre(truth.to_vec());
    let b = centre(got.iter().map(|p| [p[0], p[1]]).collect());
    let mut best = f64::INFINITY;
    for flip in [1.0, -1.0] {
        let b: Vec<[f64; 2]> = b.iter().map(|p| [p[0], flip * p[1]]).collect();
        // Optimal rotation angle maximizing Σ a·R(b).
        let (mut c, mut s) = (0.0, 0.0);
        for (p, q) in a.iter().zip(&b) {
            c += p[0] * q[0] + p[1] * q[1];
            s += p[1] * q[0] - p[0] * q[1];
        }
        let t = s.atan2(c);
        let (ct, st) = (t.cos(), t.sin());
        let sq: f64 = a
            .iter()
            .zip(&b)
            .map(|(p, q)| {
                let r = [ct * q[0] - st * q[1], st * q[0] + ct * q[1]];
                (r[0] - p[0]).powi(2) + (r[1] - p[1]).powi(2)
            })
            .sum();
        best = best.min(sq);
    }
    (best / n).sqrt()
}

fn smacof() -> Outcome {
    let params = SmacofParams::default();
    for s in 0..10u64 {
        let mut rng = seed::rng(s);
        let n = rng.gen_range(5..25);
        let mut delta = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let v = rng.gen::<f64>() * 8.0;
                delta[i][j] = v;
                delta[j][i] = v;
            }
        }
        let e = smacof_embed(&delta, &params, s).unwrap();
        if let Some(w) = e
            .stress_history
            .windows(2)
            .find(|w| w[1] > w[0] * (1.0 + 1e-12))
        {
            return outcome(
                false,
                format!("matrix {s}: stress rose {} -> {}", w[0], w[1]),
            );
        }
        if (raw_stress(&delta, &e.coords) - e.stress).abs() > 1e-9 * e.stress.max(1.0) {
            return outcome(false, format!("matrix {s}: reported stress disagrees"));
        }
    }
    let mut rng = seed::rng(20);
    let pts: Vec<[f64; 2]> = (0..20)
        .map(|_| [rng.gen::<f64>() * 10.0, rng.gen::<f64>() * 10.0])
        .collect();
    let delta: Vec<Vec<f64>> = pts
        .iter()
        .map(|p| {
            pts.iter()
                .map(|q| ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt())
                .collect()
        })
        .collect();
    let e = smacof_embed(&delta, &params, 1).unwrap();
    let rmse = procrustes_rmse(&pts, &e.coords);
    outcome(
        rmse < 1e-3,
        format!("stress monotone on 10 matrices; planar RMSE {rmse:.2e}"),
    )
}

// ---------------------------------------------------------------------------
// Classifier fixture

const LEGEND: [&str; 13] = [
    "14", "58", "18", "26", "193", "126", "90", "104", "148", "25", "156", "128", "8",
];

fn classifier_fixture() -> Outcome {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/family_exemplars.tsv");
    let entries = load_entries(&[path]).unwrap();
    let mut agree = 0;
    let mut misses = Vec::new();
    let mut legend_ok = 0;
    for e in &entries {
        let got = netgen::atlas::classify_family(&e.expr).family;
        let want = e.expected.expect("fixture rows carry a family");
        if got == want {
            agree += 1;
            legend_ok += usize::from(LEGEND.contains(&e.id.as_str()));
        } else {
            misses.push(format!("⟨{}⟩ {want}→{got}", e.id));
        }
    }
    let ratio = agree as f64 / entries.len() as f64;
    outcome(
        ratio >= 0.9 && legend_ok == LEGEND.len(),
        format!(
            "{agree}/{} agree ({:.1}%), legend {legend_ok}/{}; misses {}",
            entries.len(),
            100.0 * ratio,
            LEGEND.len(),
            misses.join(", ")
        ),
    )
}

// ---------------------------------------------------------------------------
// CLI determinism

fn run_cli(dir: &Path, args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_netgen"))
        .args(args)
        .current_dir(dir)
        .env_remove("NETGEN_SEED")
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    Ok(out.stdout)
}

fn tree_bytes(root: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    if root.is_file() {
        out.push((String::new(), std::fs::read(root).unwrap()));
        return out;
    }
    let mut names: Vec<_> = std::fs::read_dir(root)
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    names.sort();
    for p in names {
        out.push((
            p.file_name().unwrap().to_string_lossy().into_owned(),
            std::fs::read(&p).unwrap(),
        ));
    }
    out
}

fn cli_determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("pa.gen"), "k\n").unwrap();
    std::fs::write(d.join("er.gen"), "0.5\n").unwrap();
    std::fs::write(d.join("sc.gen"), "aff(5, exp(k), 1)\n").unwrap();
    if let Err(e) = run_cli(
        d,
        &[
            "synth",
            "pa.gen",
            "--nodes",
            "80",
            "--edges",
            "240",
            "--seed",
            "2",
            "--out",
            "target.txt",
        ],
    ) {
        return outcome(false, e);
    }
    // Each command with `{o}` in place of its output path, or none for stdout.
    let commands: [&[&str]; 7] = [
        &[
            "synth", "sc.gen", "--nodes", "80", "--edges", "240", "--seed", "3", "--out", "{o}",
        ],
        &["stats", "target.txt", "--seed", "1"],
        &["fitness", "target.txt", "er.gen", "--seed", "5"],
        &[
            "evolve",
            "target.txt",
            "--runs",
            "3",
            "--generations",
            "10",
            "--seed",
            "42",
            "--out",
            "{o}",
        ],
        &[
            "atlas", "pa.gen", "er.gen", "sc.gen", "--nodes", "80", "--edges", "240", "--out",
            "{o}",
        ],
        &["embed", "atlas0", "--svg", "--out", "{o}"],
        &["classify", "pa.gen", "er.gen", "sc.gen"],
    ];
    let mut checked = 0;
    for cmd in commands {
        let mut results = Vec::new();
        for rep in 0..2 {
            let target = format!("{}{rep}", cmd[0]);
            let target = if cmd[0] == "embed" {
                format!("{target}.csv")
            } else {
                target
            };
            let args: Vec<&str> = cmd
                .iter()
                .map(|a| if *a == "{o}" { target.as_str() } else { a })
                .collect();
            let stdout = match run_cli(d, &args) {
                Ok(s) => s,
                Err(e) => return outcome(false, e),
            };
            let mut files = if cmd.contains(&"{o}") {
                tree_bytes(&d.join(&target))
            } else {
                Vec::new()
            };
            if cmd[0] == "embed" {
                files.extend(tree_bytes(&d.join(format!("embed{rep}.svg"))));
            }
            results.push((stdout, files));
        }
        if results[0] != results[1] {
            return outcome(
                false,
                format!("`{}` output differs between identical invocations", cmd[0]),
            );
        }
        checked += 1;
    }
    outcome(
        true,
        format!("{checked} commands byte-identical across repeated invocations"),
    )
}
