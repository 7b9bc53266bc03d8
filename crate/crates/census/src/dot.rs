//! Graphviz export of multigraphs. A bundle of `m` parallel edges is
//! written as `m` separate edge statements.

use std::collections::BTreeMap;
use std::fmt::Write;

use census_core::covering::Multigraph;

use crate::error::{CensusError, Result};

pub fn to_dot(g: &Multigraph, name: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "graph \"{}\" {{", name.replace('"', "'"));
    for v in 0..g.order() {
        let _ = writeln!(out, "  v{v};");
    }
    for i in 0..g.order() {
        for j in i + 1..g.order() {
            for _ in 0..g.get(i, j) {
                let _ = writeln!(out, "  v{i} -- v{j};");
            }
        }
    }
    out.push_str("}\n");
    out
}

fn vertex(token: &str, ids: &mut BTreeMap<String, usize>) -> Result<usize> {
    let t = token.trim().trim_matches('"');
    if t.is_empty() || t.contains(char::is_whitespace) {
        return Err(CensusError::format(format!("bad vertex name {token:?}")));
    }
    let next = ids.len();
    Ok(*ids.entry(t.to_string()).or_insert(next))
}

/// Reads an undirected graph written by [`to_dot`] (or any DOT file using
/// only node and `--` edge statements). Vertices are numbered in order of
/// first appearance.
pub fn parse_dot(text: &str) -> Result<Multigraph> {
    let body = text
        .split_once('{')
        .and_then(|(_, rest)| rest.rsplit_once('}'))
        .map(|(b, _)| b)
        .ok_or_else(|| CensusError::format("missing graph body"))?;
    let mut ids: BTreeMap<String, usize> = BTreeMap::new();
    let mut edges = Vec::new();
    for stmt in body.split([';', '\n']) {
        let stmt = match stmt.split_once('[') {
            Some((head, _)) => head,
            None => stmt,
        }
        .trim();
        if stmt.is_empty()
            || stmt.starts_with("//")
            || stmt.contains('=')
            || matches!(stmt, "node" | "edge" | "graph")
        {
            continue;
        }
        if stmt.contains("->") {
            return Err(CensusError::format("directed edges are not supported"));
        }
        let parts: Vec<&str> = stmt.split("--").collect();
        let vs = parts
            .iter()
            .map(|p| vertex(p, &mut ids))
            .collect::<Result<Vec<_>>>()?;
        for w in vs.windows(2) {
            if w[0] == w[1] {
                return Err(CensusError::format("loops are not allowed"));
            }
            edges.push((w[0], w[1]));
        }
    }
    let mut g = Multigraph::new(ids.len());
    for (i, j) in edges {
        g.add_edges(i, j, 1);
    }
    Ok(g)
}
