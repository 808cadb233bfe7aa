use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{BinaryOp, CondOp, Expr, UnaryOp, Var};

/// Tolerance of the `eq` conditional and of the zero test in `zer`.
pub const EQ_TOLERANCE: f64 = 1e-6;

/// Variable bindings for scoring one candidate edge `(i, j)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalContext {
    pub k_i: u32,
    pub k_j: u32,
    pub d: f64,
    pub i: u32,
    pub j: u32,
}

impl EvalContext {
    pub fn get(&self, v: Var) -> f64 {
        match v {
            Var::Ki => self.k_i as f64,
            Var::Kj => self.k_j as f64,
            Var::Dist => self.d,
            Var::I => self.i as f64,
            Var::J => self.j as f64,
        }
    }
}

#[inline]
fn finite(x: f64) -> f64 {
    if x.is_finite() {
        x
    } else {
        0.0
    }
}

/// Evaluates `expr` under protected semantics; the result is always finite.
///
/// Division by zero, logarithms of non-positive values and any non-finite
/// intermediate all yield 0.
pub fn evaluate(expr: &Expr, ctx: &EvalContext) -> f64 {
    match expr {
        Expr::Const(v) => finite(*v),
        Expr::Var(v) => ctx.get(*v),
        Expr::Unary(op, c) => {
            let x = evaluate(c, ctx);
            match op {
                UnaryOp::Exp => finite(x.exp()),
                UnaryOp::Log => {
                    if x <= 0.0 {
                        0.0
                    } else {
                        finite(x.ln())
                    }
                }
                UnaryOp::Abs => x.abs(),
            }
        }
        Expr::Binary(op, a, b) => {
            let x = evaluate(a, ctx);
            let y = evaluate(b, ctx);
            match op {
                BinaryOp::Add => finite(x + y),
                BinaryOp::Sub => finite(x - y),
                BinaryOp::Mul => finite(x * y),
                BinaryOp::Div => {
                    if y == 0.0 {
                        0.0
                    } else {
                        finite(x / y)
                    }
                }
                BinaryOp::Pow => finite(x.powf(y)),
                BinaryOp::Min => x.min(y),
                BinaryOp::Max => x.max(y),
            }
        }
        Expr::Cond {
            op,
            lhs,
            rhs,
            then,
            otherwise,
        } => {
            let x = evaluate(lhs, ctx);
            let y = evaluate(rhs, ctx);
            let taken = match op {
                CondOp::Gt => x > y,
                CondOp::Lt => x < y,
                CondOp::Eq => (x - y).abs() < EQ_TOLERANCE,
            };
            evaluate(if taken { then } else { otherwise }, ctx)
        }
        Expr::ZeroCond {
            test,
            then,
            otherwise,
        } => {
            let taken = evaluate(test, ctx).abs() < EQ_TOLERANCE;
            evaluate(if taken { then } else { otherwise }, ctx)
        }
        Expr::Affinity {
            groups,
            then,
            otherwise,
        } => {
            let g = group_count(evaluate(groups, ctx));
            let same = (ctx.i as u64) % g == (ctx.j as u64) % g;
            evaluate(if same { then } else { otherwise }, ctx)
        }
    }
}

/// `max(1, floor(|value|))`, saturating at `u64::MAX`.
pub(crate) fn group_count(value: f64) -> u64 {
    (value.abs().floor() as u64).max(1)
}

const PROBE_SEED: u64 = 0x005E_ED0F_9E0E;
const PROBE_COUNT: usize = 256;

/// The fixed probe set used for behavioral signatures.
///
/// Degrees are drawn from `0..=30`, distances from `1..=11` and identifiers
/// from `1..=1000` (never equal), all from a fixed seed.
pub fn standard_probes() -> Vec<EvalContext> {
    let mut rng = ChaCha8Rng::seed_from_u64(PROBE_SEED);
    (0..PROBE_COUNT)
        .map(|_| {
            let i = rng.gen_range(1..=1000u32);
            let mut j = rng.gen_range(1..=999u32);
            if j >= i {
                j += 1;
            }
            EvalContext {
                k_i: rng.gen_range(0..=30),
                k_j: rng.gen_range(0..=30),
                d: rng.gen_range(1..=11u32) as f64,
                i,
                j,
            }
        })
        .collect()
}

/// Element-wise evaluation of `expr` over `probes`.
pub fn behavioral_signature(expr: &Expr, probes: &[EvalContext]) -> Vec<f64> {
    probes.iter().map(|c| evaluate(expr, c)).collect()
}

/// Population coefficient of variation `std / |mean|`.
///
/// A constant vector (including all zeros) has CV 0; a zero-mean vector with
/// spread has infinite CV.
pub fn coefficient_of_variation(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let std = var.sqrt();
    if std <= f64::EPSILON * mean.abs().max(1.0) {
        0.0
    } else if mean == 0.0 {
        f64::INFINITY
    } else {
        std / mean.abs()
    }
}
