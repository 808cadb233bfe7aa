//! Maps a collection of generators: one canonical network each, pairwise
//! metric matrices, a combined symmetric dissimilarity, a 2-D embedding and
//! family labels.
//!
//! The combined matrix is built as `δ = Σ_m D′_m` over the four
//! column-normalized metric matrices, then symmetrized as `σ′ = δ + δᵀ`.
//! `σ` and `δ` denote the same matrix here.

mod classify;
mod export;
mod mds;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use classify::{classify_family, classify_with, ClassifierThresholds, Family, FamilyLabel};
pub use export::{embedding_csv, embedding_svg, matrix_csv};
pub use mds::{raw_stress, smacof_embed, EmbeddingResult, SmacofParams};

use crate::dissimilarity::profile_distance;
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::graph::{Network, NetworkProfile, ProfileParams};
use crate::seed::{self, tag};
use crate::synthesis::{synthesize, SynthesisSpec, DEFAULT_SAMPLE_SIZE};

pub const CANONICAL_NODES: usize = 1000;
pub const CANONICAL_EDGES: usize = 10_000;

/// A square matrix stored row-major as nested vectors.
pub type Matrix = Vec<Vec<f64>>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AtlasParams {
    pub nodes: usize,
    pub edges: usize,
    pub sample_size: usize,
    pub profile: ProfileParams,
    pub seed: u64,
}

impl Default for AtlasParams {
    fn default() -> Self {
        AtlasParams {
            nodes: CANONICAL_NODES,
            edges: CANONICAL_EDGES,
            sample_size: DEFAULT_SAMPLE_SIZE,
            profile: ProfileParams::default(),
            seed: 0,
        }
    }
}

/// The fixed network of one generator at canonical size.
pub fn canonical_network(expr: &Expr, seed: u64) -> Result<Network> {
    canonical_network_with(
        expr,
        &AtlasParams {
            seed,
            ..AtlasParams::default()
        },
    )
}

pub fn canonical_network_with(expr: &Expr, params: &AtlasParams) -> Result<Network> {
    synthesize(
        expr,
        &SynthesisSpec {
            nodes: params.nodes,
            edges: params.edges,
            sample_size: params.sample_size,
            seed: params.seed,
        },
    )
}

/// One matrix per comparison metric, indexed by generator position.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricMatrices {
    pub degree: Matrix,
    pub pagerank: Matrix,
    pub distance: Matrix,
    pub motif: Matrix,
}

impl MetricMatrices {
    pub const NAMES: [&'static str; 4] = ["degree", "pagerank", "distance", "motif"];

    pub fn len(&self) -> usize {
        self.degree.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degree.is_empty()
    }

    pub fn as_array(&self) -> [&Matrix; 4] {
        [&self.degree, &self.pagerank, &self.distance, &self.motif]
    }
}

/// Pairwise profile distances between already computed profiles.
pub fn pairwise_from_profiles(profiles: &[NetworkProfile]) -> MetricMatrices {
    let n = profiles.len();
    let cells: Vec<(usize, usize, [f64; 4])> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(i, j)| {
            (
                i,
                j,
                profile_distance(&profiles[i], &profiles[j]).to_array(),
            )
        })
        .collect();
    let mut out = [
        vec![vec![0.0; n]; n],
        vec![vec![0.0; n]; n],
        vec![vec![0.0; n]; n],
        vec![vec![0.0; n]; n],
    ];
    for (i, j, v) in cells {
        for (m, x) in v.into_iter().enumerate() {
            out[m][i][j] = x;
            out[m][j][i] = x;
        }
    }
    let [degree, pagerank, distance, motif] = out;
    MetricMatrices {
        degree,
        pagerank,
        distance,
        motif,
    }
}

/// Profiles every network with a per-index seed, then compares all pairs.
pub fn pairwise_matrices(
    networks: &[Network],
    params: &ProfileParams,
    seed: u64,
) -> Result<MetricMatrices> {
    if networks.len() < 2 {
        return Err(Error::invalid("at least two networks are needed"));
    }
    let profiles: Vec<NetworkProfile> = networks
        .par_iter()
        .enumerate()
        .map(|(k, net)| NetworkProfile::compute(net, params, seed::derive(seed, k as u64)))
        .collect();
    Ok(pairwise_from_profiles(&profiles))
}

/// Min-max normalizes each column into `[0, 1]`; constant columns become 0.
pub fn normalize_columns(d: &Matrix) -> Matrix {
    let rows = d.len();
    let cols = d.first().map_or(0, Vec::len);
    let mut out = vec![vec![0.0; cols]; rows];
    for j in 0..cols {
        let (lo, hi) = (0..rows).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), i| {
            (lo.min(d[i][j]), hi.max(d[i][j]))
        });
        let span = hi - lo;
        if span > 0.0 {
            for i in 0..rows {
                out[i][j] = (d[i][j] - lo) / span;
            }
        }
    }
    out
}

/// Sum of the four normalized matrices, symmetrized by adding the
/// transpose; entries lie in `[0, 8]`.
pub fn combined_dissimilarity(m: &MetricMatrices) -> Matrix {
    let n = m.len();
    let mut delta = vec![vec![0.0; n]; n];
    for metric in m.as_array() {
        let norm = normalize_columns(metric);
        for i in 0..n {
            for j in 0..n {
                delta[i][j] += norm[i][j];
            }
        }
    }
    let mut sigma = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            sigma[i][j] = if i == j {
                0.0
            } else {
                delta[i][j] + delta[j][i]
            };
        }
    }
    sigma
}

/// Everything the atlas pipeline derives from a generator list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Atlas {
    pub ids: Vec<String>,
    pub matrices: MetricMatrices,
    pub combined: Matrix,
}

/// Canonical synthesis of every generator (seeded by position), followed by
/// the pairwise matrices and their combination.
pub fn build_atlas(generators: &[(String, Expr)], params: &AtlasParams) -> Result<Atlas> {
    if generators.len() < 2 {
        return Err(Error::invalid("an atlas needs at least two generators"));
    }
    let base = seed::derive(params.seed, tag::CANONICAL);
    let profiles: Vec<NetworkProfile> = generators
        .par_iter()
        .enumerate()
        .map(|(k, (_, expr))| {
            let s = seed::derive(base, k as u64);
            let net = canonical_network_with(expr, &AtlasParams { seed: s, ..*params })?;
            Ok(NetworkProfile::compute(
                &net,
                &params.profile,
                seed::derive(s, tag::PROFILE),
            ))
        })
        .collect::<Result<_>>()?;
    let matrices = pairwise_from_profiles(&profiles);
    let combined = combined_dissimilarity(&matrices);
    Ok(Atlas {
        ids: generators.iter().map(|(id, _)| id.clone()).collect(),
        matrices,
        combined,
    })
}
