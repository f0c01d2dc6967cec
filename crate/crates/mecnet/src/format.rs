//! Text formats for graphs, instances, requests and result tables.
//!
//! ```text
//! n=5
//! 0 2
//! 1 3
//! qnet 0: 0,1
//! qnet 1: 2,3,4
//! control: 5,6
//! ```
//!
//! Blank lines and lines starting with `#` are ignored everywhere.

use std::fmt::Write as _;
use std::io::Write;

use mecnet_core::cqr::CqrPath;
use mecnet_core::{ControlledInterQNet, Edge, Graph, InterQNet, QNetPartition, Vertex};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

fn content_lines(s: &str) -> impl Iterator<Item = (usize, &str)> {
    s.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_num(line: usize, tok: &str) -> Result<usize> {
    tok.trim()
        .parse()
        .map_err(|_| Error::parse(line, format!("expected a vertex id, got {tok:?}")))
}

fn parse_pair(line: usize, text: &str) -> Result<(usize, usize)> {
    let mut it = text.split_whitespace();
    match (it.next(), it.next(), it.next()) {
        (Some(a), Some(b), None) => Ok((parse_num(line, a)?, parse_num(line, b)?)),
        _ => Err(Error::parse(line, format!("expected `u v`, got {text:?}"))),
    }
}

fn parse_list(line: usize, text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| parse_num(line, t))
        .collect()
}

fn join(vs: &[Vertex]) -> String {
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("n={}\n", g.vertex_count());
    for e in g.edges() {
        let _ = writeln!(out, "{} {}", e.0, e.1);
    }
    out
}

struct Parsed {
    graph: Graph,
    qnets: Vec<(usize, Vec<Vertex>)>,
    control: Option<Vec<Vertex>>,
}

fn parse_all(s: &str) -> Result<Parsed> {
    let mut lines = content_lines(s);
    let (l0, head) = lines.next().ok_or_else(|| Error::parse(1, "missing `n=<count>` header"))?;
    let n = head
        .strip_prefix("n=")
        .ok_or_else(|| Error::parse(l0, "missing `n=<count>` header"))
        .and_then(|t| parse_num(l0, t))?;
    let mut graph = Graph::new(n);
    let mut qnets = Vec::new();
    let mut control = None;
    for (ln, text) in lines {
        if let Some(rest) = text.strip_prefix("qnet") {
            let (id, members) = rest
                .split_once(':')
                .ok_or_else(|| Error::parse(ln, "expected `qnet <id>: v,v,...`"))?;
            qnets.push((parse_num(ln, id)?, parse_list(ln, members)?));
        } else if let Some(rest) = text.strip_prefix("control:") {
            control = Some(parse_list(ln, rest)?);
        } else {
            let (u, v) = parse_pair(ln, text)?;
            graph
                .add_edge(u, v)
                .map_err(|e| Error::parse(ln, e.to_string()))?;
        }
    }
    Ok(Parsed { graph, qnets, control })
}

pub fn parse_graph(s: &str) -> Result<Graph> {
    Ok(parse_all(s)?.graph)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instance {
    Plain(InterQNet),
    Controlled(ControlledInterQNet),
}

impl Instance {
    /// The inter-QNet without its control layer.
    pub fn inter_qnet(&self) -> Result<InterQNet> {
        match self {
            Instance::Plain(iq) => Ok(iq.clone()),
            Instance::Controlled(cg) => Ok(mecnet_core::qnet::restore_original(cg)?.0),
        }
    }
}

fn write_partition(out: &mut String, p: &QNetPartition) {
    for (i, members) in p.qnets().iter().enumerate() {
        let _ = writeln!(out, "qnet {i}: {}", join(members));
    }
}

pub fn write_inter_qnet(iq: &InterQNet) -> String {
    let mut out = write_graph(iq.graph());
    write_partition(&mut out, iq.partition());
    out
}

pub fn write_controlled(cg: &ControlledInterQNet) -> String {
    let mut out = write_graph(cg.graph());
    write_partition(&mut out, cg.partition());
    let _ = writeln!(out, "control: {}", join(cg.control_nodes()));
    out
}

/// Reads either form. QNet ids must be `0..k`; a disconnected plain
/// instance is accepted and flagged on the value.
pub fn parse_instance(s: &str) -> Result<Instance> {
    let Parsed { graph, mut qnets, control } = parse_all(s)?;
    qnets.sort_by_key(|q| q.0);
    if qnets.iter().enumerate().any(|(i, q)| q.0 != i) {
        return Err(Error::parse(0, "qnet ids must be 0..k without gaps"));
    }
    let members: Vec<Vec<Vertex>> = qnets.into_iter().map(|q| q.1).collect();
    let data: usize = members.iter().map(Vec::len).sum();
    let partition = QNetPartition::new(data, members)?;
    match control {
        None => Ok(Instance::Plain(InterQNet::new_unchecked_connectivity(graph, partition)?)),
        Some(ctl) => Ok(Instance::Controlled(ControlledInterQNet::from_parts(graph, partition, ctl)?)),
    }
}

pub fn write_requests(pairs: &[Edge]) -> String {
    pairs.iter().map(|e| format!("{} {}\n", e.0, e.1)).collect()
}

pub fn parse_requests(s: &str) -> Result<Vec<Edge>> {
    content_lines(s)
        .map(|(ln, t)| parse_pair(ln, t).map(Edge::from))
        .collect()
}

#[derive(Serialize)]
struct CqrRow<'a> {
    request: String,
    hops: usize,
    intermediates: String,
    via_control: &'a str,
}

/// `request,hops,intermediates,via_control`; relays joined by `;`.
pub fn write_cqr_csv<W: Write>(w: W, paths: &[CqrPath]) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    for p in paths {
        let relays: Vec<String> = p.intermediates.iter().map(|v| v.to_string()).collect();
        wr.serialize(CqrRow {
            request: format!("{}-{}", p.request.0, p.request.1),
            hops: p.hops,
            intermediates: relays.join(";"),
            via_control: if p.via_control { "true" } else { "false" },
        })?;
    }
    wr.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThroughputRow {
    pub lambda: f64,
    pub tpm: f64,
    pub trm: f64,
    pub tpb: f64,
    pub trb: f64,
    pub r_bar: f64,
    pub fm: f64,
    pub fb: f64,
}

pub fn write_csv<W: Write, T: Serialize>(w: W, rows: &[T]) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    for r in rows {
        wr.serialize(r)?;
    }
    wr.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}

pub fn read_csv<T: for<'de> Deserialize<'de>>(path: &std::path::Path) -> Result<Vec<T>> {
    let mut rd = csv::Reader::from_path(path)?;
    rd.deserialize().map(|r| r.map_err(Error::from)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use mecnet_core::netgen::{generate_inter_qnet, GenConfig};
    use mecnet_core::qnet::build_controlled;

    #[test]
    fn instance_round_trip() {
        let iq = generate_inter_qnet(&GenConfig::balanced(12, 3, 0.4, 9)).unwrap();
        let text = write_inter_qnet(&iq);
        assert_eq!(parse_instance(&text).unwrap(), Instance::Plain(iq.clone()));
        let cg = build_controlled(&iq);
        let text = write_controlled(&cg);
        assert!(text.contains("control: 12,13,14,15"));
        let back = parse_instance(&text).unwrap();
        assert_eq!(back, Instance::Controlled(cg));
        assert_eq!(back.inter_qnet().unwrap(), iq);
    }

    #[test]
    fn graph_and_requests() {
        let g = parse_graph("# tiny\nn=3\n0 1\n\n1 2\n").unwrap();
        assert_eq!(g.edges(), vec![Edge(0, 1), Edge(1, 2)]);
        assert_eq!(write_graph(&g), "n=3\n0 1\n1 2\n");
        assert_eq!(parse_requests("3 1\n0 2\n").unwrap(), vec![Edge(1, 3), Edge(0, 2)]);
        assert!(matches!(parse_graph("n=2\n0 5\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_graph("0 1\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn cqr_csv_layout() {
        let p = CqrPath {
            request: Edge(0, 4),
            hops: 3,
            intermediates: vec![5, 7],
            via_control: true,
        };
        let mut buf = Vec::new();
        write_cqr_csv(&mut buf, &[p]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "request,hops,intermediates,via_control\n0-4,3,5;7,true\n");
    }
}
