//! Reading generator files, generator tables and matrix CSVs.

use std::path::{Path, PathBuf};

use super::CliError;
use crate::atlas::{Family, Matrix};
use crate::expr::{parse_generator, Expr};

/// A generator file holds one expression; `#` lines are comments.
pub fn parse_generator_text(text: &str) -> Option<String> {
    let body: Vec<&str> = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .collect();
    (!body.is_empty()).then(|| body.join(" "))
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

pub fn read_generator(path: &Path) -> Result<Expr, CliError> {
    let text = read(path)?;
    let body = parse_generator_text(&text)
        .ok_or_else(|| CliError::usage(format!("{}: no expression found", path.display())))?;
    parse_generator(&body).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub id: String,
    pub expected: Option<Family>,
    pub expr: Expr,
}

/// Tab-separated `id, family, expression` (or `id, expression`) rows; a
/// header row starting with `id` and `#` lines are skipped.
pub fn read_table(path: &Path) -> Result<Vec<Entry>, CliError> {
    let text = read(path)?;
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim_end();
        if line.is_empty() || line.starts_with('#') || line.starts_with("id\t") {
            continue;
        }
        let bad = |m: String| CliError::usage(format!("{}:{}: {m}", path.display(), lineno + 1));
        let cols: Vec<&str> = line.split('\t').collect();
        let (id, expected, expr) = match cols.as_slice() {
            [id, expr] => (*id, None, *expr),
            [id, fam, expr] => (*id, Some(fam.parse::<Family>().map_err(bad)?), *expr),
            _ => {
                return Err(bad(format!(
                    "expected 2 or 3 tab-separated columns, found {}",
                    cols.len()
                )))
            }
        };
        let expr = parse_generator(expr).map_err(|e| bad(e.to_string()))?;
        out.push(Entry {
            id: id.trim().to_string(),
            expected,
            expr,
        });
    }
    Ok(out)
}

fn is_table(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "tsv")
}

fn entry_from_file(path: &Path) -> Result<Entry, CliError> {
    Ok(Entry {
        id: path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default(),
        expected: None,
        expr: read_generator(path)?,
    })
}

/// Loads generators from tables, generator files and directories of
/// either (entries sorted by file name).
pub fn load_entries(paths: &[PathBuf]) -> Result<Vec<Entry>, CliError> {
    let mut out = Vec::new();
    for path in paths {
        if path.is_dir() {
            let mut files: Vec<PathBuf> = std::fs::read_dir(path)
                .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.is_file())
                .collect();
            files.sort();
            for f in files {
                if is_table(&f) {
                    out.extend(read_table(&f)?);
                } else {
                    out.push(entry_from_file(&f)?);
                }
            }
        } else if is_table(path) {
            out.extend(read_table(path)?);
        } else {
            out.push(entry_from_file(path)?);
        }
    }
    Ok(out)
}

/// Parses a matrix CSV written by the atlas command.
pub fn read_matrix_csv(path: &Path) -> Result<(Vec<String>, Matrix), CliError> {
    let text = read(path)?;
    let mut lines = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty());
    let bad = |m: &str| CliError::usage(format!("{}: {m}", path.display()));
    let header = lines.next().ok_or_else(|| bad("empty matrix file"))?;
    let ids: Vec<String> = header.split(',').skip(1).map(str::to_string).collect();
    let mut rows = Vec::new();
    for line in lines {
        let row: Vec<f64> = line
            .split(',')
            .skip(1)
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| bad(&format!("bad number `{v}`")))
            })
            .collect::<Result<_, _>>()?;
        if row.len() != ids.len() {
            return Err(bad("row length differs from header"));
        }
        rows.push(row);
    }
    if rows.len() != ids.len() {
        return Err(bad("matrix is not square"));
    }
    Ok((ids, rows))
}
