//! (1+1) evolutionary search for generators that reproduce a target network.
//!
//! The incumbent is mutated once per generation. Each child is scored by one
//! synthesis at the target's size; it replaces the incumbent when its fitness
//! is lower, or equal within a relative tolerance at a strictly shorter
//! program length. The incumbent is re-scored on a fresh synthesis every
//! [`REEVALUATE_EVERY`] generations so that a lucky draw is not kept forever.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dissimilarity::{
    er_baseline, fitness, fitness_from_distances, DissimilarityVector, FitnessReport, BASELINE_REPS,
};
use crate::error::{Error, Result};
use crate::expr::{program_length, BinaryOp, CondOp, Expr, UnaryOp, Var};
use crate::graph::{Network, NetworkProfile, ProfileParams};
use crate::seed::{self, tag};
use crate::synthesis::{synthesize, SynthesisSpec, DEFAULT_SAMPLE_SIZE};

pub const REEVALUATE_EVERY: usize = 100;

/// Weights of the three constant distributions `U(0,1)`, `U(0,10)` and
/// `10^U(0,4)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstantMixture {
    pub unit: f64,
    pub ten: f64,
    pub log: f64,
}

impl Default for ConstantMixture {
    fn default() -> Self {
        ConstantMixture {
            unit: 0.5,
            ten: 0.3,
            log: 0.2,
        }
    }
}

impl ConstantMixture {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let total = self.unit + self.ten + self.log;
        let u = rng.gen::<f64>() * total;
        if u < self.unit {
            rng.gen::<f64>()
        } else if u < self.unit + self.ten {
            rng.gen::<f64>() * 10.0
        } else {
            10f64.powf(rng.gen::<f64>() * 4.0)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MutationWeights {
    pub point: f64,
    pub subtree: f64,
    pub hoist: f64,
}

impl Default for MutationWeights {
    fn default() -> Self {
        MutationWeights {
            point: 0.4,
            subtree: 0.4,
            hoist: 0.2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthRange {
    pub min: usize,
    pub max: usize,
}

impl DepthRange {
    pub const fn new(min: usize, max: usize) -> Self {
        DepthRange { min, max }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EvolutionConfig {
    pub max_generations: usize,
    pub stagnation_window: usize,
    pub tie_tolerance: f64,
    pub mutation: MutationWeights,
    pub init_depth: DepthRange,
    pub subtree_depth: DepthRange,
    pub constants: ConstantMixture,
    /// Children longer than this are re-drawn.
    pub max_program_length: usize,
    /// Fresh syntheses averaged into the final report of a run.
    pub final_evaluations: usize,
    pub sample_size: usize,
    pub baseline_reps: usize,
    pub profile: ProfileParams,
    pub seed: u64,
    pub runs: usize,
}

impl Default for EvolutionConfig {
    fn default() -> Self {
        EvolutionConfig {
            max_generations: 5000,
            stagnation_window: 1000,
            tie_tolerance: 1e-3,
            mutation: MutationWeights::default(),
            init_depth: DepthRange::new(2, 5),
            subtree_depth: DepthRange::new(1, 3),
            constants: ConstantMixture::default(),
            max_program_length: 64,
            final_evaluations: 5,
            sample_size: DEFAULT_SAMPLE_SIZE,
            baseline_reps: BASELINE_REPS,
            profile: ProfileParams::default(),
            seed: 0,
            runs: 5,
        }
    }
}

impl EvolutionConfig {
    pub fn validate(&self) -> Result<()> {
        let w = self.mutation;
        if [w.point, w.subtree, w.hoist].iter().any(|&x| x < 0.0)
            || ((w.point + w.subtree + w.hoist) - 1.0).abs() > 1e-9
        {
            return Err(Error::invalid(
                "mutation weights must be nonnegative and sum to 1",
            ));
        }
        for (name, d) in [
            ("init_depth", self.init_depth),
            ("subtree_depth", self.subtree_depth),
        ] {
            if d.min < 1 || d.max < d.min {
                return Err(Error::invalid(format!(
                    "{name} must satisfy 1 <= min <= max"
                )));
            }
        }
        if self.runs == 0 {
            return Err(Error::invalid("runs must be at least 1"));
        }
        if self.sample_size == 0
            || self.baseline_reps == 0
            || self.max_program_length == 0
            || self.final_evaluations == 0
        {
            return Err(Error::invalid(
                "sample_size, baseline_reps, max_program_length and final_evaluations must be positive",
            ));
        }
        if self.tie_tolerance.is_nan() || self.tie_tolerance < 0.0 {
            return Err(Error::invalid("tie_tolerance must be nonnegative"));
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Tree construction and variation

/// Function symbols, each drawn with equal probability for internal nodes.
#[derive(Debug, Clone, Copy)]
enum Symbol {
    Unary(UnaryOp),
    Binary(BinaryOp),
    Cond(CondOp),
    ZeroCond,
    Affinity,
}

const SYMBOLS: [Symbol; 15] = [
    Symbol::Unary(UnaryOp::Exp),
    Symbol::Unary(UnaryOp::Log),
    Symbol::Unary(UnaryOp::Abs),
    Symbol::Binary(BinaryOp::Add),
    Symbol::Binary(BinaryOp::Sub),
    Symbol::Binary(BinaryOp::Mul),
    Symbol::Binary(BinaryOp::Div),
    Symbol::Binary(BinaryOp::Pow),
    Symbol::Binary(BinaryOp::Min),
    Symbol::Binary(BinaryOp::Max),
    Symbol::Cond(CondOp::Gt),
    Symbol::Cond(CondOp::Lt),
    Symbol::Cond(CondOp::Eq),
    Symbol::ZeroCond,
    Symbol::Affinity,
];

fn random_leaf<R: Rng + ?Sized>(mix: &ConstantMixture, rng: &mut R) -> Expr {
    if rng.gen::<bool>() {
        Expr::Var(Var::ALL[rng.gen_range(0..Var::ALL.len())])
    } else {
        Expr::Const(mix.sample(rng))
    }
}

/// Share of leaves among grow-method choices below the root.
const GROW_LEAF_PROBABILITY: f64 = 0.3;

fn build<R: Rng + ?Sized>(
    depth: usize,
    full: bool,
    root: bool,
    mix: &ConstantMixture,
    rng: &mut R,
) -> Expr {
    if depth <= 1 || (!full && !root && rng.gen::<f64>() < GROW_LEAF_PROBABILITY) {
        return random_leaf(mix, rng);
    }
    let symbol = SYMBOLS[rng.gen_range(0..SYMBOLS.len())];
    let mut sub = || build(depth - 1, full, false, mix, rng);
    match symbol {
        Symbol::Unary(op) => Expr::unary(op, sub()),
        Symbol::Binary(op) => {
            let a = sub();
            Expr::binary(op, a, sub())
        }
        Symbol::Cond(op) => {
            let (a, b, c) = (sub(), sub(), sub());
            Expr::cond(op, a, b, c, sub())
        }
        Symbol::ZeroCond => {
            let (a, b) = (sub(), sub());
            Expr::zero_cond(a, b, sub())
        }
        Symbol::Affinity => {
            let (a, b) = (sub(), sub());
            Expr::affinity(a, b, sub())
        }
    }
}

/// Ramped half-and-half: a depth drawn uniformly from the range, then the
/// full or the grow method with equal probability.
pub fn random_tree<R: Rng + ?Sized>(depth: DepthRange, mix: &ConstantMixture, rng: &mut R) -> Expr {
    let d = rng.gen_range(depth.min..=depth.max.max(depth.min));
    let full = rng.gen::<bool>();
    build(d, full, d >= depth.min.max(2), mix, rng)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MutationKind {
    Point,
    Subtree,
    Hoist,
}

fn other<T: Copy + PartialEq, R: Rng + ?Sized>(all: &[T], current: T, rng: &mut R) -> T {
    let idx = rng.gen_range(0..all.len() - 1);
    let pick = all[idx];
    if pick == current {
        all[all.len() - 1]
    } else {
        pick
    }
}

fn point_mutate<R: Rng + ?Sized>(node: &mut Expr, mix: &ConstantMixture, rng: &mut R) {
    match node {
        Expr::Const(c) => {
            *c = if rng.gen::<bool>() {
                mix.sample(rng)
            } else {
                *c * (rng.gen::<f64>() - 0.5).exp()
            };
        }
        Expr::Var(v) => *v = other(&Var::ALL, *v, rng),
        Expr::Unary(op, _) => *op = other(&UnaryOp::ALL, *op, rng),
        Expr::Binary(op, _, _) => *op = other(&BinaryOp::ALL, *op, rng),
        Expr::Cond { op, .. } => *op = other(&CondOp::ALL, *op, rng),
        Expr::ZeroCond { .. } | Expr::Affinity { .. } => {
            let (a, b, c) = match std::mem::replace(node, Expr::Const(0.0)) {
                Expr::ZeroCond {
                    test,
                    then,
                    otherwise,
                } => {
                    *node = Expr::Affinity {
                        groups: test,
                        then,
                        otherwise,
                    };
                    return;
                }
                Expr::Affinity {
                    groups,
                    then,
                    otherwise,
                } => (groups, then, otherwise),
                _ => unreachable!(),
            };
            *node = Expr::ZeroCond {
                test: a,
                then: b,
                otherwise: c,
            };
        }
    }
}

/// Applies one mutation of the given kind.
pub fn mutate_with<R: Rng + ?Sized>(
    expr: &Expr,
    kind: MutationKind,
    cfg: &EvolutionConfig,
    rng: &mut R,
) -> Expr {
    let len = program_length(expr);
    match kind {
        MutationKind::Point => {
            let mut out = expr.clone();
            let idx = rng.gen_range(0..len);
            point_mutate(
                out.node_mut(idx).expect("index within length"),
                &cfg.constants,
                rng,
            );
            out
        }
        MutationKind::Subtree => {
            let mut out = expr.clone();
            let idx = rng.gen_range(0..len);
            *out.node_mut(idx).expect("index within length") =
                random_tree(cfg.subtree_depth, &cfg.constants, rng);
            out
        }
        MutationKind::Hoist => {
            if len == 1 {
                return expr.clone();
            }
            let idx = rng.gen_range(1..len);
            expr.nodes()[idx].clone()
        }
    }
}

pub fn choose_mutation<R: Rng + ?Sized>(w: &MutationWeights, rng: &mut R) -> MutationKind {
    let u = rng.gen::<f64>() * (w.point + w.subtree + w.hoist);
    if u < w.point {
        MutationKind::Point
    } else if u < w.point + w.subtree {
        MutationKind::Subtree
    } else {
        MutationKind::Hoist
    }
}

/// One mutation with kind drawn from the configured weights.
pub fn mutate<R: Rng + ?Sized>(expr: &Expr, cfg: &EvolutionConfig, rng: &mut R) -> Expr {
    let kind = choose_mutation(&cfg.mutation, rng);
    mutate_with(expr, kind, cfg, rng)
}

/// Draws a mutation that respects the program-length cap; gives up after a
/// bounded number of attempts and hoists instead, which never grows a tree.
pub fn bounded_mutation<R: Rng + ?Sized>(expr: &Expr, cfg: &EvolutionConfig, rng: &mut R) -> Expr {
    for _ in 0..64 {
        let child = mutate(expr, cfg, rng);
        if program_length(&child) <= cfg.max_program_length {
            return child;
        }
    }
    mutate_with(expr, MutationKind::Hoist, cfg, rng)
}

/// A random initial tree within the program-length cap.
pub fn bounded_tree<R: Rng + ?Sized>(cfg: &EvolutionConfig, rng: &mut R) -> Expr {
    loop {
        let t = random_tree(cfg.init_depth, &cfg.constants, rng);
        if program_length(&t) <= cfg.max_program_length {
            return t;
        }
    }
}

// ---------------------------------------------------------------------------
// Fitness evaluation

/// A target network prepared for repeated fitness evaluation: its profile
/// and ER baseline are computed once.
#[derive(Debug, Clone)]
pub struct Target {
    pub nodes: usize,
    pub edges: usize,
    pub profile: NetworkProfile,
    pub baseline: DissimilarityVector,
    pub params: ProfileParams,
    pub sample_size: usize,
}

impl Target {
    pub fn new(net: &Network, cfg: &EvolutionConfig) -> Result<Self> {
        if net.edge_count() == 0 {
            return Err(Error::invalid("target network has no edges"));
        }
        let profile = NetworkProfile::compute(
            net,
            &cfg.profile,
            seed::derive(cfg.seed, tag::TARGET_PROFILE),
        );
        let baseline = er_baseline(
            &profile,
            net.node_count(),
            net.edge_count(),
            cfg.baseline_reps,
            &cfg.profile,
            seed::derive(cfg.seed, tag::BASELINE),
        )?;
        Ok(Target {
            nodes: net.node_count(),
            edges: net.edge_count(),
            profile,
            baseline,
            params: cfg.profile,
            sample_size: cfg.sample_size,
        })
    }

    /// Scores `expr` on one synthesis drawn from `seed`.
    pub fn evaluate(&self, expr: &Expr, seed: u64) -> Result<FitnessReport> {
        let spec = SynthesisSpec {
            nodes: self.nodes,
            edges: self.edges,
            sample_size: self.sample_size,
            seed: seed::derive(seed, 1),
        };
        let net = synthesize(expr, &spec)?;
        let synth = NetworkProfile::compute(&net, &self.params, seed::derive(seed, 2));
        Ok(fitness(&self.profile, &self.baseline, &synth))
    }

    /// Mean distances over `reps` syntheses, turned into one report.
    pub fn evaluate_mean(&self, expr: &Expr, reps: usize, seed: u64) -> Result<FitnessReport> {
        let mut mean = [0.0; 4];
        for r in 0..reps {
            let d = self
                .evaluate(expr, seed::derive(seed, r as u64))?
                .distances
                .to_array();
            for (acc, x) in mean.iter_mut().zip(d) {
                *acc += x / reps as f64;
            }
        }
        Ok(fitness_from_distances(
            DissimilarityVector::from_array(mean),
            self.baseline,
        ))
    }
}

// ---------------------------------------------------------------------------
// Runs

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TraceKind {
    Init,
    Accept,
    Reevaluate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub generation: usize,
    pub fitness: f64,
    pub program_length: usize,
    pub kind: TraceKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    /// `fitness` and `report` come from the final averaged evaluation; the
    /// trace holds the single-synthesis values seen during the run.
    pub run_index: usize,
    pub run_seed: u64,
    pub generations: usize,
    pub best_expression: String,
    pub program_length: usize,
    pub fitness: f64,
    pub trace: Vec<TraceEntry>,
    pub report: FitnessReport,
}

pub fn run_seed(master: u64, run_index: usize) -> u64 {
    seed::derive(seed::derive(master, tag::RUN), run_index as u64)
}

fn accepts(child: f64, child_len: usize, inc: f64, inc_len: usize, tolerance: f64) -> bool {
    child < inc
        || (child_len < inc_len
            && (child - inc).abs() <= tolerance * inc.abs().max(f64::MIN_POSITIVE))
}

/// One (1+1) run against a prepared target.
pub fn evolve_target(
    target: &Target,
    cfg: &EvolutionConfig,
    run_index: usize,
    run_seed: u64,
) -> Result<RunRecord> {
    let mut rng = seed::rng(seed::derive(run_seed, tag::MUTATE));
    let eval_seed = |g: usize, t: u64| seed::derive(seed::derive(run_seed, t), g as u64);

    let mut init_rng = seed::rng(seed::derive(run_seed, tag::INIT));
    let mut incumbent = bounded_tree(cfg, &mut init_rng);
    let mut inc_len = program_length(&incumbent);
    let mut report = target.evaluate(&incumbent, eval_seed(0, tag::EVALUATE))?;
    let mut trace = vec![TraceEntry {
        generation: 0,
        fitness: report.fitness,
        program_length: inc_len,
        kind: TraceKind::Init,
    }];
    let mut last_accept = 0;
    let mut generation = 0;
    while generation < cfg.max_generations && generation - last_accept < cfg.stagnation_window {
        generation += 1;
        let child = bounded_mutation(&incumbent, cfg, &mut rng);
        let child_len = program_length(&child);
        let child_report = target.evaluate(&child, eval_seed(generation, tag::EVALUATE))?;
        if accepts(
            child_report.fitness,
            child_len,
            report.fitness,
            inc_len,
            cfg.tie_tolerance,
        ) {
            incumbent = child;
            inc_len = child_len;
            report = child_report;
            last_accept = generation;
            trace.push(TraceEntry {
                generation,
                fitness: report.fitness,
                program_length: inc_len,
                kind: TraceKind::Accept,
            });
        }
        if generation % REEVALUATE_EVERY == 0 {
            report = target.evaluate(&incumbent, eval_seed(generation, tag::REEVALUATE))?;
            trace.push(TraceEntry {
                generation,
                fitness: report.fitness,
                program_length: inc_len,
                kind: TraceKind::Reevaluate,
            });
        }
    }
    let report = target.evaluate_mean(
        &incumbent,
        cfg.final_evaluations,
        seed::derive(run_seed, tag::FINAL),
    )?;
    Ok(RunRecord {
        run_index,
        run_seed,
        generations: generation,
        best_expression: incumbent.to_string(),
        program_length: inc_len,
        fitness: report.fitness,
        trace,
        report,
    })
}

/// One run on `target`; profile and baseline are prepared from `cfg.seed`.
pub fn evolve_run(target: &Network, cfg: &EvolutionConfig, run_seed: u64) -> Result<RunRecord> {
    cfg.validate()?;
    evolve_target(&Target::new(target, cfg)?, cfg, 0, run_seed)
}

/// Index of the best record: lowest fitness, then shortest program, then
/// lowest run index.
pub fn select_best(records: &[RunRecord]) -> Option<usize> {
    (0..records.len()).min_by(|&a, &b| {
        let (ra, rb) = (&records[a], &records[b]);
        ra.fitness
            .total_cmp(&rb.fitness)
            .then(ra.program_length.cmp(&rb.program_length))
            .then(ra.run_index.cmp(&rb.run_index))
    })
}

#[derive(Debug, Clone)]
pub struct BestOfRuns {
    pub best: Expr,
    pub best_run: usize,
    pub records: Vec<RunRecord>,
    pub target: Target,
}

/// `cfg.runs` independent runs (concurrently), keeping the best generator.
pub fn evolve_best_of_runs(target: &Network, cfg: &EvolutionConfig) -> Result<BestOfRuns> {
    cfg.validate()?;
    let prepared = Target::new(target, cfg)?;
    let records: Vec<RunRecord> = (0..cfg.runs)
        .into_par_iter()
        .map(|r| evolve_target(&prepared, cfg, r, run_seed(cfg.seed, r)))
        .collect::<Result<_>>()?;
    let best_run = select_best(&records).expect("at least one run");
    let best = records[best_run].best_expression.parse()?;
    Ok(BestOfRuns {
        best,
        best_run,
        records,
        target: prepared,
    })
}
