//! Edge-list files.
//!
//! One edge per line as two whitespace-separated nonnegative integer labels;
//! `#` starts a comment. Labels are mapped to node indices by order of first
//! appearance. A `# nodes: N` header declares the node set to be exactly the
//! labels `1..=N` in order, which keeps isolated nodes and identifiers of
//! files written by [`write_edge_list`] intact.

use std::fmt::Write as _;
use std::path::Path;

use rustc_hash::FxHashMap;

use super::Network;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeList {
    pub edges: Vec<(u64, u64)>,
    pub declared_nodes: Option<usize>,
}

/// Node index to original label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelMap(pub Vec<u64>);

impl LabelMap {
    pub fn label(&self, node: usize) -> u64 {
        self.0[node]
    }

    /// `label<TAB>id` lines, ids 1-based.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("# label\tid\n");
        for (idx, label) in self.0.iter().enumerate() {
            let _ = writeln!(out, "{label}\t{}", idx + 1);
        }
        out
    }
}

fn declared_nodes(comment: &str) -> Option<usize> {
    let rest = comment.trim().strip_prefix("nodes")?;
    let rest = rest.trim_start().strip_prefix(':').unwrap_or(rest);
    rest.trim().parse().ok()
}

impl EdgeList {
    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let mut edges = Vec::new();
        let mut declared = None;
        for (lineno, raw) in text.lines().enumerate() {
            let (body, comment) = match raw.find('#') {
                Some(p) => (&raw[..p], Some(&raw[p + 1..])),
                None => (raw, None),
            };
            if let Some(n) = comment.and_then(declared_nodes) {
                declared = Some(n);
            }
            let mut fields = body.split_whitespace();
            let Some(first) = fields.next() else { continue };
            let bad = |message: String| Error::Format {
                path: origin.to_path_buf(),
                line: lineno + 1,
                message,
            };
            let second = fields
                .next()
                .ok_or_else(|| bad("expected two node labels".into()))?;
            if let Some(extra) = fields.next() {
                return Err(bad(format!("unexpected field `{extra}`")));
            }
            let parse = |s: &str| {
                s.parse::<u64>()
                    .map_err(|_| bad(format!("`{s}` is not a nonnegative integer label")))
            };
            edges.push((parse(first)?, parse(second)?));
        }
        Ok(EdgeList {
            edges,
            declared_nodes: declared,
        })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        EdgeList::parse(&text, path)
    }

    /// Builds the network, optionally removing the node labelled `drop` and
    /// all its edges first; its neighbors are kept. Self-loops and repeated edges are ignored.
    pub fn into_network(self, drop: Option<u64>) -> Result<(Network, LabelMap)> {
        let mut ids: FxHashMap<u64, usize> = FxHashMap::default();
        let mut labels = Vec::new();
        if let Some(n) = self.declared_nodes {
            for label in 1..=n as u64 {
                if Some(label) != drop {
                    ids.insert(label, labels.len());
                    labels.push(label);
                }
            }
        }
        let mut pairs = Vec::with_capacity(self.edges.len());
        for (a, b) in self.edges {
            let mut id = |label: u64| {
                *ids.entry(label).or_insert_with(|| {
                    labels.push(label);
                    labels.len() - 1
                })
            };
            match (drop == Some(a), drop == Some(b)) {
                (false, false) => {
                    let (u, v) = (id(a), id(b));
                    pairs.push((u, v));
                }
                // Contacts of the dropped node stay, possibly isolated.
                (true, false) => {
                    id(b);
                }
                (false, true) => {
                    id(a);
                }
                (true, true) => {}
            }
        }
        let net = Network::from_edges(labels.len(), pairs);
        Ok((net, LabelMap(labels)))
    }
}

/// Reads an edge-list file into a network plus its label map.
pub fn read_edge_list(path: &Path, drop: Option<u64>) -> Result<(Network, LabelMap)> {
    EdgeList::read(path)?.into_network(drop)
}

/// Edge-list text with 1-based identifiers and a `# nodes:` header.
/// `header` lines are emitted as comments first.
pub fn write_edge_list(net: &Network, header: &[String]) -> String {
    let mut out = String::with_capacity(net.edge_count() * 10 + 64);
    for line in header {
        let _ = writeln!(out, "# {line}");
    }
    let _ = writeln!(out, "# nodes: {}", net.node_count());
    let _ = writeln!(out, "# edges: {}", net.edge_count());
    for (u, v) in net.edges() {
        let _ = writeln!(out, "{} {}", u + 1, v + 1);
    }
    out
}
