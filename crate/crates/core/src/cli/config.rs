//! Effective settings of one invocation.
//!
//! Layers, lowest first: built-in defaults, the master-seed environment
//! variable, a `key=value` config file, command-line flags.

use std::path::Path;

use serde::Serialize;

use super::CliError;
use crate::atlas::{AtlasParams, SmacofParams, CANONICAL_EDGES, CANONICAL_NODES};
use crate::evolution::EvolutionConfig;
use crate::synthesis::SynthesisSpec;

pub const SEED_ENV: &str = "NETGEN_SEED";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Settings {
    pub evolution: EvolutionConfig,
    pub nodes: usize,
    pub edges: usize,
    pub smacof: SmacofParams,
    pub drop_ego: Option<u64>,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            evolution: EvolutionConfig::default(),
            nodes: CANONICAL_NODES,
            edges: CANONICAL_EDGES,
            smacof: SmacofParams::default(),
            drop_ego: None,
        }
    }
}

/// Flag values; `None` leaves the lower layers in place.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub runs: Option<usize>,
    pub nodes: Option<usize>,
    pub edges: Option<usize>,
    pub sample_size: Option<usize>,
    pub generations: Option<usize>,
    pub drop_ego: Option<u64>,
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value
        .parse()
        .map_err(|_| CliError::usage(format!("config key `{key}`: cannot parse `{value}`")))
}

impl Settings {
    pub fn seed(&self) -> u64 {
        self.evolution.seed
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let e = &mut self.evolution;
        match key {
            "seed" => e.seed = parse_value(key, value)?,
            "runs" => e.runs = parse_value(key, value)?,
            "nodes" => self.nodes = parse_value(key, value)?,
            "edges" => self.edges = parse_value(key, value)?,
            "sample_size" => e.sample_size = parse_value(key, value)?,
            "generations" => e.max_generations = parse_value(key, value)?,
            "stagnation_window" => e.stagnation_window = parse_value(key, value)?,
            "tie_tolerance" => e.tie_tolerance = parse_value(key, value)?,
            "baseline_reps" => e.baseline_reps = parse_value(key, value)?,
            "final_evaluations" => e.final_evaluations = parse_value(key, value)?,
            "max_program_length" => e.max_program_length = parse_value(key, value)?,
            "distance_sources" => e.profile.distance_sources = parse_value(key, value)?,
            "motif_sample_cap" => e.profile.motif_sample_cap = parse_value(key, value)?,
            "smacof_restarts" => self.smacof.restarts = parse_value(key, value)?,
            "smacof_iterations" => self.smacof.max_iterations = parse_value(key, value)?,
            "smacof_tolerance" => self.smacof.tolerance = parse_value(key, value)?,
            "drop_ego" => self.drop_ego = Some(parse_value(key, value)?),
            _ => return Err(CliError::usage(format!("unknown config key `{key}`"))),
        }
        Ok(())
    }

    pub fn apply_config_text(&mut self, text: &str) -> Result<(), CliError> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::usage(format!("config line {}: expected key=value", lineno + 1))
            })?;
            self.set(key.trim(), value.trim())?;
        }
        Ok(())
    }

    pub fn apply_overrides(&mut self, o: &Overrides) {
        let e = &mut self.evolution;
        if let Some(v) = o.seed {
            e.seed = v;
        }
        if let Some(v) = o.runs {
            e.runs = v;
        }
        if let Some(v) = o.sample_size {
            e.sample_size = v;
        }
        if let Some(v) = o.generations {
            e.max_generations = v;
        }
        if let Some(v) = o.nodes {
            self.nodes = v;
        }
        if let Some(v) = o.edges {
            self.edges = v;
        }
        if o.drop_ego.is_some() {
            self.drop_ego = o.drop_ego;
        }
    }

    /// Resolves all layers; `env_seed` is the raw environment value.
    pub fn resolve(
        env_seed: Option<&str>,
        config: Option<&Path>,
        o: &Overrides,
    ) -> Result<Self, CliError> {
        let mut s = Settings::default();
        if let Some(v) = env_seed {
            s.evolution.seed = v.trim().parse().map_err(|_| {
                CliError::usage(format!("{SEED_ENV}: cannot parse `{v}` as a seed"))
            })?;
        }
        if let Some(path) = config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
            s.apply_config_text(&text)?;
        }
        s.apply_overrides(o);
        Ok(s)
    }

    pub fn synthesis(&self, seed: u64) -> SynthesisSpec {
        SynthesisSpec {
            nodes: self.nodes,
            edges: self.edges,
            sample_size: self.evolution.sample_size,
            seed,
        }
    }

    pub fn atlas(&self) -> AtlasParams {
        AtlasParams {
            nodes: self.nodes,
            edges: self.edges,
            sample_size: self.evolution.sample_size,
            profile: self.evolution.profile,
            seed: self.seed(),
        }
    }
}
