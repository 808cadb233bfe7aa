//! Network synthesis from a generator.
//!
//! Each step draws a pool of candidate non-edges, scores them with the
//! generator against the current partial network, clamps negative scores to
//! zero and adds one candidate with probability proportional to its score.

use rand::seq::index;
use rand::Rng;
use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{evaluate, EvalContext, Expr, Var};
use crate::graph::{random_walk_distance, Network};
use crate::seed;

pub const DEFAULT_SAMPLE_SIZE: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SynthesisSpec {
    pub nodes: usize,
    pub edges: usize,
    pub sample_size: usize,
    pub seed: u64,
}

impl SynthesisSpec {
    pub fn new(nodes: usize, edges: usize, seed: u64) -> Self {
        SynthesisSpec {
            nodes,
            edges,
            sample_size: DEFAULT_SAMPLE_SIZE,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let pairs = self.nodes * self.nodes.saturating_sub(1) / 2;
        if self.edges > pairs {
            return Err(Error::invalid(format!(
                "{} edges requested but {} nodes admit only {pairs}",
                self.edges, self.nodes
            )));
        }
        if self.sample_size == 0 {
            return Err(Error::invalid("sample_size must be at least 1"));
        }
        Ok(())
    }
}

/// One candidate edge with its (clamped) score. `i` is the origin side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Candidate {
    pub i: u32,
    pub j: u32,
    pub score: f64,
}

#[derive(Debug, Clone, Default)]
pub struct CandidatePool {
    pub candidates: Vec<Candidate>,
}

impl CandidatePool {
    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }

    pub fn scores(&self) -> Vec<f64> {
        self.candidates.iter().map(|c| c.score).collect()
    }
}

/// Below this many remaining non-edges per requested candidate, pools are
/// drawn from an explicit enumeration instead of by rejection.
const ENUMERATE_RATIO: usize = 4;

/// Draws `min(sample_size, remaining non-edges)` distinct non-edges with a
/// uniformly random orientation.
pub fn sample_candidates<R: Rng>(
    net: &Network,
    sample_size: usize,
    rng: &mut R,
) -> Result<CandidatePool> {
    let mut pool = CandidatePool::default();
    sample_into(net, sample_size, rng, &mut pool, &mut FxHashSet::default())?;
    Ok(pool)
}

fn sample_into<R: Rng>(
    net: &Network,
    sample_size: usize,
    rng: &mut R,
    pool: &mut CandidatePool,
    seen: &mut FxHashSet<u64>,
) -> Result<()> {
    let n = net.node_count();
    let remaining = net.pair_count() - net.edge_count();
    pool.candidates.clear();
    if remaining == 0 {
        return Err(Error::NoCandidates);
    }
    let want = sample_size.min(remaining);
    seen.clear();
    if remaining <= want.saturating_mul(ENUMERATE_RATIO) {
        let free: Vec<(u32, u32)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|&(u, v)| !net.has_edge(u, v))
            .map(|(u, v)| (u as u32, v as u32))
            .collect();
        for idx in index::sample(rng, free.len(), want) {
            let (u, v) = free[idx];
            let (i, j) = if rng.gen::<bool>() { (u, v) } else { (v, u) };
            pool.candidates.push(Candidate { i, j, score: 0.0 });
        }
        return Ok(());
    }
    while pool.candidates.len() < want {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        if i == j || net.has_edge(i, j) {
            continue;
        }
        let (i, j) = (i as u32, j as u32);
        let key = (u64::from(i.min(j)) << 32) | u64::from(i.max(j));
        if seen.insert(key) {
            pool.candidates.push(Candidate { i, j, score: 0.0 });
        }
    }
    Ok(())
}

/// Scores every candidate against the current network state.
///
/// Negative scores become 0; if all scores are then 0 they all become 1.
/// Random-walk distances are only drawn when the generator reads `d`.
pub fn score_candidates<R: Rng>(pool: &mut CandidatePool, expr: &Expr, net: &Network, rng: &mut R) {
    let uses_distance = expr.uses_var(Var::Dist);
    score_with(pool, expr, net, rng, uses_distance);
}

fn score_with<R: Rng>(
    pool: &mut CandidatePool,
    expr: &Expr,
    net: &Network,
    rng: &mut R,
    uses_distance: bool,
) {
    let mut all_zero = true;
    for c in pool.candidates.iter_mut() {
        let (i, j) = (c.i as usize, c.j as usize);
        let d = if uses_distance {
            random_walk_distance(net, i, j, rng) as f64
        } else {
            0.0
        };
        let ctx = EvalContext {
            k_i: net.degree(i) as u32,
            k_j: net.degree(j) as u32,
            d,
            i: c.i + 1,
            j: c.j + 1,
        };
        c.score = evaluate(expr, &ctx).max(0.0);
        all_zero &= c.score == 0.0;
    }
    if all_zero {
        clamp_all_zero(pool);
    }
}

/// Applies the clamp and all-zero rules to raw scores.
pub fn normalize_scores(raw: &[f64]) -> Vec<f64> {
    let clamped: Vec<f64> = raw.iter().map(|s| s.max(0.0)).collect();
    if clamped.iter().all(|&s| s == 0.0) {
        vec![1.0; clamped.len()]
    } else {
        clamped
    }
}

fn clamp_all_zero(pool: &mut CandidatePool) {
    pool.candidates.iter_mut().for_each(|c| c.score = 1.0);
}

/// Index of a candidate drawn with probability `score / total`.
pub fn select_index<R: Rng>(scores: &[f64], rng: &mut R) -> Result<usize> {
    if scores.is_empty() {
        return Err(Error::NoCandidates);
    }
    // Scaling by the maximum keeps the running sum finite for huge scores.
    let max = scores.iter().copied().fold(0.0f64, f64::max);
    if max <= 0.0 {
        return Err(Error::invalid("candidate scores must have positive total"));
    }
    let total: f64 = scores.iter().map(|s| s / max).sum();
    let target = rng.gen::<f64>() * total;
    let mut acc = 0.0;
    let mut last_positive = 0;
    for (idx, s) in scores.iter().enumerate() {
        if *s <= 0.0 {
            continue;
        }
        acc += s / max;
        last_positive = idx;
        if target < acc {
            return Ok(idx);
        }
    }
    Ok(last_positive)
}

/// Draws one candidate from a scored pool.
pub fn select_edge<R: Rng>(pool: &CandidatePool, rng: &mut R) -> Result<(usize, usize)> {
    let scores: Vec<f64> = pool.candidates.iter().map(|c| c.score).collect();
    let c = pool.candidates[select_index(&scores, rng)?];
    Ok((c.i as usize, c.j as usize))
}

/// Grows a network of `spec.nodes` nodes until it has exactly `spec.edges`
/// edges, one stochastic selection per step.
pub fn synthesize(expr: &Expr, spec: &SynthesisSpec) -> Result<Network> {
    spec.validate()?;
    let mut rng = seed::rng(spec.seed);
    let mut net = Network::with_capacity(spec.nodes, spec.edges);
    let mut pool = CandidatePool {
        candidates: Vec::with_capacity(spec.sample_size),
    };
    let mut scores = Vec::with_capacity(spec.sample_size);
    let mut seen = FxHashSet::default();
    let uses_distance = expr.uses_var(Var::Dist);
    while net.edge_count() < spec.edges {
        sample_into(&net, spec.sample_size, &mut rng, &mut pool, &mut seen)?;
        score_with(&mut pool, expr, &net, &mut rng, uses_distance);
        scores.clear();
        scores.extend(pool.candidates.iter().map(|c| c.score));
        let pick = pool.candidates[select_index(&scores, &mut rng)?];
        net.add_edge(pick.i as usize, pick.j as usize);
    }
    Ok(net)
}
