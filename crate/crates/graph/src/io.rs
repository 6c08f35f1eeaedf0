//! Plain-text and DOT formats.
//!
//! The text format is line based:
//!
//! ```text
//! dag 3
//! edge 0 2
//! edge 1 2
//! label 2 apex
//! sink 2
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Output is
//! deterministic: edges are sorted by `(u, v)`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::{Dag, DagBuilder, GraphError, Vertex};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing `dag <n>` header")]
    MissingHeader,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, message: message.into() }
}

fn parse_vertex(tok: Option<&str>, line: usize, n: usize) -> Result<Vertex, ParseError> {
    let tok = tok.ok_or_else(|| syntax(line, "missing vertex id"))?;
    let v: Vertex = tok.parse().map_err(|_| syntax(line, format!("bad vertex id `{tok}`")))?;
    if v >= n {
        return Err(syntax(line, format!("vertex {v} out of range (n = {n})")));
    }
    Ok(v)
}

/// Parses the text graph format into a builder, without checking acyclicity.
pub fn parse_builder(text: &str) -> Result<DagBuilder, ParseError> {
    let mut builder: Option<DagBuilder> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let mut toks = l.split_whitespace();
        let kw = toks.next().unwrap_or_default();
        if kw == "dag" {
            if builder.is_some() {
                return Err(syntax(line, "duplicate header"));
            }
            let n = toks.next().ok_or_else(|| syntax(line, "missing node count"))?;
            let n: usize = n.parse().map_err(|_| syntax(line, format!("bad node count `{n}`")))?;
            builder = Some(DagBuilder::with_vertices(n));
            continue;
        }
        let b = builder.as_mut().ok_or(ParseError::MissingHeader)?;
        let n = b.node_count();
        match kw {
            "edge" => {
                let u = parse_vertex(toks.next(), line, n)?;
                let v = parse_vertex(toks.next(), line, n)?;
                b.add_edge(u, v);
            }
            "label" => {
                let v = parse_vertex(toks.next(), line, n)?;
                let rest: Vec<&str> = toks.collect();
                if rest.is_empty() {
                    return Err(syntax(line, "missing label text"));
                }
                b.set_label(v, rest.join(" "));
                continue;
            }
            "sink" => {
                let v = parse_vertex(toks.next(), line, n)?;
                b.set_sink(v);
            }
            other => return Err(syntax(line, format!("unknown keyword `{other}`"))),
        }
        if let Some(extra) = toks.next() {
            return Err(syntax(line, format!("unexpected token `{extra}`")));
        }
    }
    builder.ok_or(ParseError::MissingHeader)
}

/// Parses the text graph format.
pub fn parse_dag(text: &str) -> Result<Dag, ParseError> {
    Ok(parse_builder(text)?.build()?)
}

/// Serializes `d` in the text graph format.
pub fn write_dag(d: &Dag) -> String {
    let mut out = String::new();
    writeln!(out, "dag {}", d.node_count()).unwrap();
    for (u, v) in d.edges() {
        writeln!(out, "edge {u} {v}").unwrap();
    }
    for v in d.vertices() {
        if let Some(l) = d.label(v) {
            writeln!(out, "label {v} {l}").unwrap();
        }
    }
    if let Some(z) = d.sink() {
        writeln!(out, "sink {z}").unwrap();
    }
    out
}

/// Renders `d` as a DOT digraph. Anchor names are added to node labels.
pub fn to_dot(d: &Dag, anchors: &BTreeMap<String, Vertex>) -> String {
    let mut names: BTreeMap<Vertex, Vec<&str>> = BTreeMap::new();
    for (name, &v) in anchors {
        names.entry(v).or_default().push(name);
    }
    let mut out = String::from("digraph G {\n  rankdir=BT;\n");
    for v in d.vertices() {
        let mut label = d.label(v).map(str::to_owned).unwrap_or_else(|| v.to_string());
        if let Some(ns) = names.get(&v) {
            label = format!("{label}\\n{}", ns.join(","));
        }
        let shape = if Some(v) == d.sink() { ", shape=doublecircle" } else { "" };
        writeln!(out, "  {v} [label=\"{}\"{shape}];", label.replace('"', "\\\"")).unwrap();
    }
    for (u, v) in d.edges() {
        writeln!(out, "  {u} -> {v};").unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let text = "dag 3\nedge 0 2\nedge 1 2\nlabel 2 apex node\nsink 2\n";
        let d = parse_dag(text).unwrap();
        assert_eq!(write_dag(&d), text);
    }

    #[test]
    fn rejects_cycle_and_garbage() {
        assert!(parse_dag("dag 2\nedge 0 1\nedge 1 0\n").is_err());
        assert!(parse_dag("edge 0 1\n").is_err());
        assert!(parse_dag("dag 2\nedge 0 5\n").is_err());
        assert!(parse_dag("dag 2\nfrob 0\n").is_err());
    }

    #[test]
    fn dot_mentions_anchor() {
        let d = parse_dag("dag 2\nedge 0 1\nsink 1\n").unwrap();
        let mut a = BTreeMap::new();
        a.insert("b".to_string(), 1);
        let dot = to_dot(&d, &a);
        assert!(dot.contains("0 -> 1"));
        assert!(dot.contains("1\\nb"));
    }
}
