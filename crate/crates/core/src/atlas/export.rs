use std::fmt::Write;

use super::classify::Family;
use super::Matrix;

/// Square matrix as CSV with ids as the header row and first column.
/// Values use Rust's shortest round-trip formatting.
pub fn matrix_csv(ids: &[String], m: &Matrix) -> String {
    let mut out = String::from("id");
    for id in ids {
        let _ = write!(out, ",{id}");
    }
    out.push('\n');
    for (id, row) in ids.iter().zip(m) {
        out.push_str(id);
        for v in row {
            let _ = write!(out, ",{v}");
        }
        out.push('\n');
    }
    out
}

/// `id,x,y,family` rows for a 2-D embedding.
pub fn embedding_csv(ids: &[String], coords: &[Vec<f64>], families: &[Family]) -> String {
    let mut out = String::from("id,x,y,family\n");
    for ((id, p), f) in ids.iter().zip(coords).zip(families) {
        let _ = writeln!(
            out,
            "{id},{},{},{}",
            p[0],
            p.get(1).copied().unwrap_or(0.0),
            f.ascii()
        );
    }
    out
}

fn color(f: Family) -> &'static str {
    match f {
        Family::Er => "#7f7f7f",
        Family::Id => "#1f77b4",
        Family::IdPrime => "#aec7e8",
        Family::Pa => "#d62728",
        Family::PaPrime => "#ff9896",
        Family::ScAlpha => "#2ca02c",
        Family::ScBeta => "#98df8a",
        Family::ScGamma => "#9467bd",
        Family::ScDelta => "#c5b0d5",
        Family::ScEpsilon => "#8c564b",
        Family::ScZeta => "#e377c2",
        Family::ScEta => "#bcbd22",
        Family::ScTheta => "#17becf",
        Family::Unclassified => "#000000",
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Scatter plot of the embedding, one color per family, with a legend of
/// the families present.
pub fn embedding_svg(ids: &[String], coords: &[Vec<f64>], families: &[Family]) -> String {
    const SIZE: f64 = 600.0;
    const MARGIN: f64 = 30.0;
    const LEGEND: f64 = 160.0;
    let xs = coords.iter().map(|p| p[0]);
    let ys = coords.iter().map(|p| p.get(1).copied().unwrap_or(0.0));
    let range = |it: &mut dyn Iterator<Item = f64>| {
        it.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        })
    };
    let (x0, x1) = range(&mut xs.clone());
    let (y0, y1) = range(&mut ys.clone());
    let span = (x1 - x0).max(y1 - y0).max(1e-12);
    let scale = (SIZE - 2.0 * MARGIN) / span;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{SIZE}" viewBox="0 0 {w} {SIZE}">"#,
        w = SIZE + LEGEND
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for ((id, (x, y)), f) in ids.iter().zip(xs.zip(ys)).zip(families) {
        let cx = MARGIN + (x - x0) * scale;
        let cy = SIZE - MARGIN - (y - y0) * scale;
        let _ = writeln!(
            out,
            r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="4" fill="{}"><title>{} {}</title></circle>"#,
            color(*f),
            escape(id),
            f.label()
        );
    }
    let present: Vec<Family> = Family::ALL
        .into_iter()
        .filter(|f| families.contains(f))
        .collect();
    for (row, f) in present.iter().enumerate() {
        let y = MARGIN + 20.0 * row as f64;
        let _ = writeln!(
            out,
            r#"<circle cx="{:.2}" cy="{y:.2}" r="5" fill="{}"/><text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12">{}</text>"#,
            SIZE + 10.0,
            color(*f),
            SIZE + 20.0,
            y + 4.0,
            f.label()
        );
    }
    out.push_str("</svg>\n");
    out
}
