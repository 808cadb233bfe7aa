use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;

use super::config::Settings;
use super::inputs::{load_entries, read_generator, read_matrix_csv, read_table};
use super::{Cli, CliError, Command};
use crate::atlas::{
    build_atlas, classify_with, embedding_csv, embedding_svg, matrix_csv, smacof_embed,
    ClassifierThresholds, Family,
};
use crate::evolution::{evolve_best_of_runs, Target};
use crate::graph::io::{read_edge_list, write_edge_list};
use crate::graph::{MotifClass, Network, NetworkProfile};
use crate::seed::{self, tag};
use crate::synthesis::synthesize;

type Files = Vec<(PathBuf, String)>;

pub(super) fn dispatch(cli: &Cli, s: &Settings, stdout: &mut dyn Write) -> Result<(), CliError> {
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Evolve { target } => write_all(evolve(target, s, require_dir(out)?)?),
        Command::Synth { generator } => emit(out, &synth(generator, s)?, stdout),
        Command::Fitness { target, generator } => {
            emit(out, &fitness(target, generator, s)?, stdout)
        }
        Command::Atlas { inputs } => write_all(atlas(inputs, s, require_dir(out)?)?),
        Command::Embed { input } => {
            if cli.svg && out.is_none() {
                return Err(CliError::usage("--svg needs --out"));
            }
            let (csv, svg) = embed(input, s)?;
            match out {
                Some(path) => {
                    let mut files = vec![(path.to_path_buf(), csv)];
                    if cli.svg {
                        files.push((path.with_extension("svg"), svg));
                    }
                    write_all(files)
                }
                None => emit(None, &csv, stdout),
            }
        }
        Command::Classify { inputs } => emit(out, &classify(inputs)?, stdout),
        Command::Stats { input } => emit(out, &stats(input, s)?, stdout),
    }
}

fn require_dir(out: Option<&Path>) -> Result<&Path, CliError> {
    out.ok_or_else(|| CliError::usage("this command needs --out <directory>"))
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::usage(format!("{}: {e}", path.display()))
}

fn write_all(files: Files) -> Result<(), CliError> {
    for (path, content) in files {
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            std::fs::create_dir_all(parent).map_err(|e| io_error(parent, e))?;
        }
        std::fs::write(&path, content).map_err(|e| io_error(&path, e))?;
    }
    Ok(())
}

fn emit(out: Option<&Path>, content: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        Some(path) => write_all(vec![(path.to_path_buf(), content.to_string())]),
        None => stdout
            .write_all(content.as_bytes())
            .map_err(|e| CliError::usage(format!("stdout: {e}"))),
    }
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn config_line<T: Serialize>(value: &T) -> String {
    format!(
        "# config: {}\n",
        serde_json::to_string(value).expect("serializable")
    )
}

fn read_target(path: &Path, s: &Settings) -> Result<Network, CliError> {
    Ok(read_edge_list(path, s.drop_ego)?.0)
}

fn evolve(target: &Path, s: &Settings, out: &Path) -> Result<Files, CliError> {
    let (net, labels) = read_edge_list(target, s.drop_ego)?;
    let result = evolve_best_of_runs(&net, &s.evolution)?;
    let mut files = Files::new();
    for r in &result.records {
        files.push((
            out.join(format!("run_{}.json", r.run_index)),
            pretty(&json!({ "config": s, "target": target, "record": r })),
        ));
    }
    let best = &result.records[result.best_run];
    let runs: Vec<_> = result
        .records
        .iter()
        .map(|r| {
            json!({
                "run_index": r.run_index,
                "run_seed": r.run_seed,
                "generations": r.generations,
                "fitness": r.fitness,
                "program_length": r.program_length,
                "expression": r.best_expression,
            })
        })
        .collect();
    let summary = json!({
        "config": s,
        "target": target,
        "nodes": net.node_count(),
        "edges": net.edge_count(),
        "baseline": result.target.baseline,
        "best_run": result.best_run,
        "best_expression": best.best_expression,
        "best_fitness": best.fitness,
        "best_report": best.report,
        "runs": runs,
    });
    files.push((out.join("summary.json"), pretty(&summary)));
    files.push((
        out.join("best_generator.txt"),
        format!(
            "# run: {}\n# fitness: {}\n# seed: {}\n{}\n",
            result.best_run,
            best.fitness,
            s.seed(),
            result.best
        ),
    ));
    files.push((out.join("labels.tsv"), labels.to_tsv()));
    Ok(files)
}

fn synth(generator: &Path, s: &Settings) -> Result<String, CliError> {
    let expr = read_generator(generator)?;
    let spec = s.synthesis(s.seed());
    let net = synthesize(&expr, &spec)?;
    let header = vec![
        format!("generator: {expr}"),
        format!(
            "config: {}",
            serde_json::to_string(&spec).expect("serializable")
        ),
    ];
    Ok(write_edge_list(&net, &header))
}

fn fitness(target: &Path, generator: &Path, s: &Settings) -> Result<String, CliError> {
    let net = read_target(target, s)?;
    let expr = read_generator(generator)?;
    s.evolution.validate()?;
    let prepared = Target::new(&net, &s.evolution)?;
    let reps = s.evolution.final_evaluations.max(1);
    let report = prepared.evaluate_mean(&expr, reps, seed::derive(s.seed(), tag::FINAL))?;
    Ok(pretty(&json!({
        "config": s,
        "target": target,
        "generator": expr.to_string(),
        "syntheses": reps,
        "report": report,
    })))
}

const GENERATORS_FILE: &str = "generators.tsv";
const COMBINED_FILE: &str = "combined.csv";

fn atlas(inputs: &[PathBuf], s: &Settings, out: &Path) -> Result<Files, CliError> {
    let entries = load_entries(inputs)?;
    let params = s.atlas();
    let gens: Vec<(String, _)> = entries
        .iter()
        .map(|e| (e.id.clone(), e.expr.clone()))
        .collect();
    let atlas = build_atlas(&gens, &params)?;
    let header = config_line(&params);
    let mut files = Files::new();
    for (name, m) in crate::atlas::MetricMatrices::NAMES
        .iter()
        .zip(atlas.matrices.as_array())
    {
        files.push((
            out.join(format!("{name}.csv")),
            header.clone() + &matrix_csv(&atlas.ids, m),
        ));
    }
    files.push((
        out.join(COMBINED_FILE),
        header.clone() + &matrix_csv(&atlas.ids, &atlas.combined),
    ));
    let mut table = header + "id\tfamily\texpression\n";
    for e in &entries {
        let family = crate::atlas::classify_family(&e.expr).family;
        let _ = writeln!(table, "{}\t{}\t{}", e.id, family.ascii(), e.expr);
    }
    files.push((out.join(GENERATORS_FILE), table));
    Ok(files)
}

fn embed(input: &Path, s: &Settings) -> Result<(String, String), CliError> {
    let matrix_path = if input.is_dir() {
        input.join(COMBINED_FILE)
    } else {
        input.to_path_buf()
    };
    let (ids, delta) = read_matrix_csv(&matrix_path)?;
    let table = matrix_path.with_file_name(GENERATORS_FILE);
    let known: BTreeMap<String, Family> = if table.is_file() {
        read_table(&table)?
            .into_iter()
            .filter_map(|e| e.expected.map(|f| (e.id, f)))
            .collect()
    } else {
        BTreeMap::new()
    };
    let families: Vec<Family> = ids
        .iter()
        .map(|id| known.get(id).copied().unwrap_or(Family::Unclassified))
        .collect();
    let result = smacof_embed(&delta, &s.smacof, s.seed())?;
    let header = config_line(&json!({
        "smacof": s.smacof,
        "seed": s.seed(),
        "stress": result.stress,
        "restart": result.restart,
        "iterations": result.iterations,
    }));
    let csv = header + &embedding_csv(&ids, &result.coords, &families);
    let svg = embedding_svg(&ids, &result.coords, &families);
    Ok((csv, svg))
}

fn classify(inputs: &[PathBuf]) -> Result<String, CliError> {
    let entries = load_entries(inputs)?;
    let thresholds = ClassifierThresholds::default();
    let mut out = config_line(&thresholds);
    out.push_str("id\tfamily\texpected\tpattern\texpression\n");
    let (mut checked, mut agreed) = (0usize, 0usize);
    for e in &entries {
        let label = classify_with(&e.expr, &thresholds);
        let expected = match e.expected {
            Some(f) => {
                checked += 1;
                agreed += usize::from(f == label.family);
                f.ascii()
            }
            None => "-",
        };
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}",
            e.id,
            label.family.ascii(),
            expected,
            label.pattern,
            e.expr
        );
    }
    if checked > 0 {
        let _ = writeln!(out, "# agreement: {agreed}/{checked}");
    }
    Ok(out)
}

fn stats(input: &Path, s: &Settings) -> Result<String, CliError> {
    let net = read_target(input, s)?;
    let params = s.evolution.profile;
    let profile = NetworkProfile::compute(&net, &params, seed::derive(s.seed(), tag::PROFILE));
    let n = net.node_count();
    let degrees = net.degrees();
    let mut out =
        config_line(&json!({ "profile": params, "seed": s.seed(), "drop_ego": s.drop_ego }));
    let _ = writeln!(out, "nodes: {n}");
    let _ = writeln!(out, "edges: {}", net.edge_count());
    let mean = if n == 0 {
        0.0
    } else {
        2.0 * net.edge_count() as f64 / n as f64
    };
    let _ = writeln!(out, "mean_degree: {mean:?}");
    let _ = writeln!(
        out,
        "max_degree: {}",
        degrees.iter().max().copied().unwrap_or(0)
    );
    let _ = writeln!(
        out,
        "isolated: {}",
        degrees.iter().filter(|&&d| d == 0).count()
    );
    let density = if net.pair_count() == 0 {
        0.0
    } else {
        net.edge_count() as f64 / net.pair_count() as f64
    };
    let _ = writeln!(out, "density: {density:?}");
    let _ = writeln!(out, "max_hops: {}", profile.distance.max_hops());
    let pairs = profile.distance.pairs();
    let unreachable = if pairs == 0 {
        0.0
    } else {
        profile.distance.unreachable as f64 / pairs as f64
    };
    let _ = writeln!(out, "unreachable: {unreachable:?}");
    for class in MotifClass::ALL {
        let _ = writeln!(out, "{}: {:?}", class.name(), profile.motifs.get(class));
    }
    Ok(out)
}
