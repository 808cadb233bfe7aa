use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::Matrix;
use crate::error::{Error, Result};
use crate::seed::{self, tag};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SmacofParams {
    pub dims: usize,
    pub restarts: usize,
    pub max_iterations: usize,
    /// Stop once the relative stress decrease falls below this.
    pub tolerance: f64,
}

impl Default for SmacofParams {
    fn default() -> Self {
        SmacofParams {
            dims: 2,
            restarts: 4,
            max_iterations: 300,
            tolerance: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingResult {
    pub coords: Vec<Vec<f64>>,
    pub stress: f64,
    pub iterations: usize,
    /// Stress of the initial configuration followed by one value per
    /// iteration.
    pub stress_history: Vec<f64>,
    pub restart: usize,
}

const SYMMETRY_TOLERANCE: f64 = 1e-9;

fn distances(x: &[Vec<f64>]) -> Matrix {
    let n = x.len();
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = x[i]
                .iter()
                .zip(&x[j])
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            d[i][j] = v;
            d[j][i] = v;
        }
    }
    d
}

/// Raw stress `Σ_{i<j} (δ_ij − d_ij)²`.
pub fn raw_stress(delta: &Matrix, x: &[Vec<f64>]) -> f64 {
    let d = distances(x);
    let n = x.len();
    let mut s = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            s += (delta[i][j] - d[i][j]).powi(2);
        }
    }
    s
}

/// One Guttman transform `X ← n⁻¹ B(X) X` (unit weights).
fn guttman(delta: &Matrix, x: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = x.len();
    let dims = x[0].len();
    let d = distances(x);
    let mut out = vec![vec![0.0; dims]; n];
    for i in 0..n {
        let mut diag = 0.0;
        for j in 0..n {
            if i == j || d[i][j] <= 0.0 {
                continue;
            }
            let b = delta[i][j] / d[i][j];
            diag += b;
            for k in 0..dims {
                out[i][k] -= b * x[j][k];
            }
        }
        for k in 0..dims {
            out[i][k] += diag * x[i][k];
            out[i][k] /= n as f64;
        }
    }
    out
}

fn run_once(delta: &Matrix, params: &SmacofParams, seed: u64, restart: usize) -> EmbeddingResult {
    let n = delta.len();
    let mut rng = seed::rng(seed);
    let scale = delta
        .iter()
        .flatten()
        .copied()
        .fold(0.0, f64::max)
        .max(1e-12);
    let mut x: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            (0..params.dims)
                .map(|_| (rng.gen::<f64>() - 0.5) * scale)
                .collect()
        })
        .collect();
    let mut stress = raw_stress(delta, &x);
    let mut history = vec![stress];
    let mut iterations = 0;
    while iterations < params.max_iterations && stress > 0.0 {
        let next = guttman(delta, &x);
        let next_stress = raw_stress(delta, &next);
        iterations += 1;
        let improvement = (stress - next_stress) / stress;
        x = next;
        stress = next_stress;
        history.push(stress);
        if improvement < params.tolerance {
            break;
        }
    }
    EmbeddingResult {
        coords: x,
        stress,
        iterations,
        stress_history: history,
        restart,
    }
}

fn check_symmetric(delta: &Matrix) -> Result<()> {
    let n = delta.len();
    for (i, row) in delta.iter().enumerate() {
        if row.len() != n {
            return Err(Error::LengthMismatch(n, row.len()));
        }
        if row[i].abs() > SYMMETRY_TOLERANCE {
            return Err(Error::NotSymmetric(i, i));
        }
        for (j, &a) in row.iter().enumerate().take(i) {
            let b = delta[j][i];
            if !a.is_finite() || (a - b).abs() > SYMMETRY_TOLERANCE * a.abs().max(b.abs()).max(1.0)
            {
                return Err(Error::NotSymmetric(i, j));
            }
        }
    }
    Ok(())
}

/// SMACOF metric MDS. Each restart starts from its own seeded random
/// configuration; the lowest final stress wins (earliest restart on ties).
pub fn smacof_embed(delta: &Matrix, params: &SmacofParams, seed: u64) -> Result<EmbeddingResult> {
    check_symmetric(delta)?;
    if params.dims == 0 || params.restarts == 0 {
        return Err(Error::invalid("dims and restarts must be positive"));
    }
    let n = delta.len();
    if n < 2 {
        return Ok(EmbeddingResult {
            coords: vec![vec![0.0; params.dims]; n],
            stress: 0.0,
            iterations: 0,
            stress_history: vec![0.0],
            restart: 0,
        });
    }
    let base = seed::derive(seed, tag::SMACOF);
    let runs: Vec<EmbeddingResult> = (0..params.restarts)
        .into_par_iter()
        .map(|r| run_once(delta, params, seed::derive(base, r as u64), r))
        .collect();
    Ok(runs
        .into_iter()
        .min_by(|a, b| {
            a.stress
                .total_cmp(&b.stress)
                .then(a.restart.cmp(&b.restart))
        })
        .expect("at least one restart"))
}
