//! Distribution distances, ER-normalized ratios and the max-ratio fitness.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{erdos_renyi, NetworkProfile, ProfileParams};
use crate::seed;

/// Floor on the denominator of each ratio-dissimilarity bin.
pub const RATIO_EPSILON: f64 = 1e-9;
/// Floor on ER-baseline components used as fitness denominators.
pub const BASELINE_EPSILON: f64 = 1e-12;
/// Replicas in the ER baseline.
pub const BASELINE_REPS: usize = 30;
/// Quantile levels used when PageRank vectors differ in length.
pub const PAGERANK_QUANTILES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DissimilarityVector {
    pub k_d: f64,
    #[serde(rename = "PR_d")]
    pub pr_d: f64,
    pub d_d: f64,
    pub tau_d: f64,
}

impl DissimilarityVector {
    pub fn to_array(self) -> [f64; 4] {
        [self.k_d, self.pr_d, self.d_d, self.tau_d]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        DissimilarityVector {
            k_d: a[0],
            pr_d: a[1],
            d_d: a[2],
            tau_d: a[3],
        }
    }

    pub const NAMES: [&'static str; 4] = ["k_d", "PR_d", "d_d", "tau_d"];
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitnessReport {
    pub distances: DissimilarityVector,
    pub baseline: DissimilarityVector,
    pub ratios: DissimilarityVector,
    pub fitness: f64,
}

/// Wasserstein-1 distance between two histograms on the integer axis
/// `0, 1, 2, ...` with unit bin width. Each side is normalized to unit mass;
/// the shorter one is zero-padded.
pub fn emd_1d(p: &[f64], q: &[f64]) -> Result<f64> {
    let mass_p: f64 = p.iter().sum();
    let mass_q: f64 = q.iter().sum();
    if p.is_empty() || q.is_empty() || mass_p <= 0.0 || mass_q <= 0.0 {
        return Err(Error::EmptyDistribution);
    }
    if p.iter().chain(q).any(|&x| x < 0.0 || !x.is_finite()) {
        return Err(Error::invalid(
            "histogram masses must be finite and nonnegative",
        ));
    }
    let bins = p.len().max(q.len());
    let (mut cp, mut cq, mut total) = (0.0, 0.0, 0.0);
    for b in 0..bins - 1 {
        cp += p.get(b).copied().unwrap_or(0.0) / mass_p;
        cq += q.get(b).copied().unwrap_or(0.0) / mass_q;
        total += (cp - cq).abs();
    }
    Ok(total)
}

/// [`emd_1d`] over integer-count histograms.
pub fn emd_counts(p: &[u64], q: &[u64]) -> Result<f64> {
    let to_f = |h: &[u64]| h.iter().map(|&c| c as f64).collect::<Vec<_>>();
    emd_1d(&to_f(p), &to_f(q))
}

/// Wasserstein-1 distance between two empirical distributions given as
/// ascending value vectors.
///
/// Equal lengths give the exact value, the mean absolute difference of the
/// order statistics. Otherwise both quantile functions are compared at
/// [`PAGERANK_QUANTILES`] midpoint levels.
pub fn emd_sorted(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyDistribution);
    }
    if a.len() == b.len() {
        let sum: f64 = a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum();
        return Ok(sum / a.len() as f64);
    }
    let quantile = |v: &[f64], t: f64| {
        let idx = ((t * v.len() as f64).ceil() as usize).clamp(1, v.len()) - 1;
        v[idx]
    };
    let levels = PAGERANK_QUANTILES;
    let sum: f64 = (0..levels)
        .map(|k| {
            let t = (k as f64 + 0.5) / levels as f64;
            (quantile(a, t) - quantile(b, t)).abs()
        })
        .sum();
    Ok(sum / levels as f64)
}

/// Mean of `|p_b - q_b| / max(p_b, q_b, 1e-9)` over the bins where either
/// side has mass; lies in `[0, 1]` and is 0 when both vectors are all zero.
pub fn ratio_dissimilarity(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch(p.len(), q.len()));
    }
    if p.is_empty() {
        return Err(Error::EmptyDistribution);
    }
    let (mut sum, mut support) = (0.0, 0usize);
    for (&a, &b) in p.iter().zip(q) {
        if a > 0.0 || b > 0.0 {
            sum += (a - b).abs() / a.max(b).max(RATIO_EPSILON);
            support += 1;
        }
    }
    Ok(if support == 0 {
        0.0
    } else {
        sum / support as f64
    })
}

/// The four per-metric distances between two profiles.
///
/// Distance histograms are aligned to the larger hop range of the two, with
/// the unreachable fraction as a final bin.
pub fn profile_distance(a: &NetworkProfile, b: &NetworkProfile) -> DissimilarityVector {
    let k_d = emd_counts(&a.degree_hist, &b.degree_hist).unwrap_or(0.0);
    let pr_d = emd_sorted(&a.pagerank, &b.pagerank).unwrap_or(0.0);
    let hops = a.distance.max_hops().max(b.distance.max_hops()).max(1);
    let d_d = ratio_dissimilarity(&a.distance.frequencies(hops), &b.distance.frequencies(hops))
        .unwrap_or(0.0);
    let tau_d = ratio_dissimilarity(a.motifs.as_slice(), b.motifs.as_slice()).unwrap_or(0.0);
    DissimilarityVector {
        k_d,
        pr_d,
        d_d,
        tau_d,
    }
}

/// Component-wise mean of `profile_distance(target, ER_r)` over `reps`
/// seeded G(n, m) replicas.
pub fn er_baseline(
    target: &NetworkProfile,
    n: usize,
    m: usize,
    reps: usize,
    params: &ProfileParams,
    seed: u64,
) -> Result<DissimilarityVector> {
    if reps == 0 {
        return Err(Error::invalid("baseline needs at least one replica"));
    }
    let parts: Vec<[f64; 4]> = (0..reps)
        .into_par_iter()
        .map(|r| {
            let rep_seed = seed::derive(seed, r as u64);
            let net = erdos_renyi(n, m, rep_seed)?;
            let profile =
                NetworkProfile::compute(&net, params, seed::derive(rep_seed, seed::tag::PROFILE));
            Ok(profile_distance(target, &profile).to_array())
        })
        .collect::<Result<_>>()?;
    let mut mean = [0.0; 4];
    for p in &parts {
        for (acc, x) in mean.iter_mut().zip(p) {
            *acc += x;
        }
    }
    mean.iter_mut().for_each(|x| *x /= reps as f64);
    Ok(DissimilarityVector::from_array(mean))
}

/// Ratios against the baseline and their maximum from precomputed distances.
pub fn fitness_from_distances(
    distances: DissimilarityVector,
    baseline: DissimilarityVector,
) -> FitnessReport {
    let d = distances.to_array();
    let b = baseline.to_array();
    let mut ratios = [0.0; 4];
    for k in 0..4 {
        ratios[k] = d[k] / b[k].max(BASELINE_EPSILON);
    }
    let fitness = ratios.iter().copied().fold(0.0, f64::max);
    FitnessReport {
        distances,
        baseline,
        ratios: DissimilarityVector::from_array(ratios),
        fitness,
    }
}

pub fn fitness(
    target: &NetworkProfile,
    baseline: &DissimilarityVector,
    synth: &NetworkProfile,
) -> FitnessReport {
    fitness_from_distances(profile_distance(target, synth), *baseline)
}
