//! Text formats: DIMACS-like graph files, point lists and solution JSON.
//!
//! Graph and point files are 1-indexed; everything in memory is 0-indexed and
//! the conversion happens only here. Solution documents report in-memory ids.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{EdgePartitionWitness, Graph, VertexPartitionWitness};
use crate::stats::Stats;

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn is_comment(line: &str) -> bool {
    line.is_empty() || line.starts_with('#') || line == "c" || line.starts_with("c ")
}

fn parse_usize(tok: Option<&str>, line: usize, what: &str) -> Result<usize> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| parse_err(line, format!("invalid {what} `{tok}`")))
}

/// Parses `p <n> <m>` followed by exactly `m` lines `e <u> <v>`.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.trim();
        if is_comment(line) {
            continue;
        }
        let mut toks = line.split_whitespace();
        match toks.next() {
            Some("p") => {
                if header.is_some() {
                    return Err(parse_err(line_no, "duplicate `p` line"));
                }
                let mut rest: Vec<&str> = toks.collect();
                // tolerate the DIMACS `p edge n m` spelling
                if rest.first().is_some_and(|t| t.parse::<usize>().is_err()) {
                    rest.remove(0);
                }
                if rest.len() != 2 {
                    return Err(parse_err(line_no, "expected `p <n> <m>`"));
                }
                let n = parse_usize(Some(rest[0]), line_no, "vertex count")?;
                let m = parse_usize(Some(rest[1]), line_no, "edge count")?;
                header = Some((n, m));
            }
            Some("e") => {
                let (n, m) = header.ok_or_else(|| parse_err(line_no, "edge before `p` line"))?;
                let u = parse_usize(toks.next(), line_no, "endpoint")?;
                let v = parse_usize(toks.next(), line_no, "endpoint")?;
                if toks.next().is_some() {
                    return Err(parse_err(line_no, "trailing tokens after edge"));
                }
                for w in [u, v] {
                    if w == 0 || w > n {
                        return Err(parse_err(line_no, format!("endpoint {w} outside 1..={n}")));
                    }
                }
                if u == v {
                    return Err(parse_err(line_no, format!("self-loop at vertex {u}")));
                }
                let key = (u.min(v) - 1, u.max(v) - 1);
                if !seen.insert(key) {
                    return Err(parse_err(line_no, format!("duplicate edge {u} {v}")));
                }
                if edges.len() == m {
                    return Err(parse_err(line_no, format!("more than the declared {m} edges")));
                }
                edges.push(key);
            }
            Some(other) => {
                return Err(parse_err(line_no, format!("unknown line type `{other}`")));
            }
            None => unreachable!("blank lines are skipped"),
        }
    }
    let (n, m) = header.ok_or_else(|| parse_err(last_line.max(1), "missing `p` line"))?;
    if edges.len() != m {
        return Err(parse_err(
            last_line.max(1),
            format!("declared {m} edges but found {}", edges.len()),
        ));
    }
    Graph::new(n, edges)
}

/// Writes a graph in the format read by [`parse_graph`], edges in id order.
pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("p {} {}\n", g.vertex_count(), g.edge_count());
    for &(u, v) in g.edges() {
        out.push_str(&format!("e {} {}\n", u + 1, v + 1));
    }
    out
}

/// One `x y` pair per line; `#` comments and blank lines are ignored.
pub fn parse_points(text: &str) -> Result<Vec<(f64, f64)>> {
    let mut points = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(parse_err(line_no, "expected `x y`"));
        }
        let mut coord = [0.0; 2];
        for (slot, tok) in coord.iter_mut().zip(&toks) {
            let x: f64 = tok
                .parse()
                .map_err(|_| parse_err(line_no, format!("invalid coordinate `{tok}`")))?;
            if !x.is_finite() {
                return Err(parse_err(line_no, format!("non-finite coordinate `{tok}`")));
            }
            *slot = x;
        }
        points.push((coord[0], coord[1]));
    }
    Ok(points)
}

pub fn write_points(points: &[(f64, f64)]) -> String {
    points.iter().map(|(x, y)| format!("{x} {y}\n")).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub enum InstanceKind {
    VertexPartition,
    EdgePartition,
    Disk,
}

#[derive(Clone, Debug)]
pub enum InstancePayload {
    Graph(Graph),
    Points(Vec<(f64, f64)>),
}

/// A parsed instance together with its requested side size.
#[derive(Clone, Debug)]
pub struct InstanceFile {
    pub kind: InstanceKind,
    pub payload: InstancePayload,
    pub n1: usize,
}

impl InstanceFile {
    /// Rejects trivial or inconsistent side sizes (`n1 = 0` or the whole ground set).
    pub fn validate(&self) -> Result<()> {
        let ground = match (&self.kind, &self.payload) {
            (InstanceKind::VertexPartition, InstancePayload::Graph(g)) => g.vertex_count(),
            (InstanceKind::EdgePartition, InstancePayload::Graph(g)) => g.edge_count(),
            (InstanceKind::Disk, InstancePayload::Points(p)) => {
                if let Some(i) = p.iter().position(|(x, y)| !x.is_finite() || !y.is_finite()) {
                    return Err(Error::param(format!("point {} is not finite", i + 1)));
                }
                p.len()
            }
            (kind, _) => {
                return Err(Error::param(format!("payload does not match {kind:?} instance")));
            }
        };
        if self.n1 == 0 || self.n1 >= ground {
            return Err(Error::param(format!(
                "n1 = {} must lie in 1..={} (ground set has {ground} elements)",
                self.n1,
                ground.saturating_sub(1)
            )));
        }
        Ok(())
    }
}

/// Either kind of witness, as carried by a solution document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Vertex(VertexPartitionWitness),
    Edge(EdgePartitionWitness),
}

#[derive(Serialize)]
struct SolutionDoc<'a> {
    answer: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    side_one: Option<&'a [usize]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    edge_side_one: Option<&'a [usize]>,
    engine: &'a str,
    n1: usize,
    stats: &'a Stats,
}

/// Serializes a solution as one line of compact JSON (trailing newline included).
pub fn emit_solution(answer: Option<&Witness>, engine: &str, n1: usize, stats: &Stats) -> String {
    let doc = SolutionDoc {
        answer: if answer.is_some() { "yes" } else { "no" },
        side_one: match answer {
            Some(Witness::Vertex(w)) => Some(w.side_one()),
            _ => None,
        },
        edge_side_one: match answer {
            Some(Witness::Edge(w)) => Some(w.side_one()),
            _ => None,
        },
        engine,
        n1,
        stats,
    };
    let mut out = serde_json::to_string(&doc).expect("solution document always serializes");
    out.push('\n');
    out
}

/// Reads back the witness of a solution document, if it has one.
pub fn parse_solution(text: &str) -> Result<Option<Witness>> {
    let doc: serde_json::Value =
        serde_json::from_str(text).map_err(|e| parse_err(e.line(), e.to_string()))?;
    let ids = |key: &str| -> Result<Option<Vec<usize>>> {
        match doc.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_array()
                .ok_or_else(|| Error::param(format!("`{key}` must be an array")))?
                .iter()
                .map(|x| {
                    x.as_u64()
                        .map(|x| x as usize)
                        .ok_or_else(|| Error::param(format!("`{key}` holds a non-integer")))
                })
                .collect::<Result<Vec<_>>>()
                .map(Some),
        }
    };
    match doc.get("answer").and_then(|a| a.as_str()) {
        Some("no") => Ok(None),
        Some("yes") => {
            if let Some(side) = ids("side_one")? {
                Ok(Some(Witness::Vertex(VertexPartitionWitness::new(side))))
            } else if let Some(side) = ids("edge_side_one")? {
                Ok(Some(Witness::Edge(EdgePartitionWitness::new(side))))
            } else {
                Err(Error::param("`yes` answer without a witness"))
            }
        }
        _ => Err(Error::param("missing or invalid `answer`")),
    }
}
