//! Inter-QNets, the controlled variant with a control-node layer, and the
//! measurement sequences that complement or restore them.
//!
//! Data vertices are numbered `0..n`; control nodes of a controlled
//! inter-QNet are appended as `n..n + k'` in order `c_1..c_k'`.

use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{Edge, Graph, MeasurementRecord, Vertex};
use crate::{Error, Result};

/// Assignment of data vertices to QNets, plus the control nodes if any.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QNetPartition {
    membership: Vec<usize>,
    qnets: Vec<Vec<Vertex>>,
    control: Vec<Vertex>,
}

impl QNetPartition {
    /// `qnets[i]` lists the members of QNet `i`; together they must cover
    /// `0..n` exactly once. Members are stored sorted.
    pub fn new(n: usize, qnets: Vec<Vec<Vertex>>) -> Result<Self> {
        let mut membership = vec![usize::MAX; n];
        let mut qnets = qnets;
        for (i, members) in qnets.iter_mut().enumerate() {
            if members.is_empty() {
                return Err(Error::EmptyQNet(i));
            }
            members.sort_unstable();
            for &v in members.iter() {
                if v >= n || membership[v] != usize::MAX {
                    return Err(Error::InvalidVertex(v));
                }
                membership[v] = i;
            }
        }
        if let Some(v) = membership.iter().position(|&m| m == usize::MAX) {
            return Err(Error::Unassigned(v));
        }
        Ok(QNetPartition {
            membership,
            qnets,
            control: Vec::new(),
        })
    }

    /// Partition from a per-vertex QNet index; QNet ids must be `0..k` with
    /// none empty.
    pub fn from_membership(membership: &[usize]) -> Result<Self> {
        let k = membership.iter().max().map_or(0, |m| m + 1);
        let mut qnets = vec![Vec::new(); k];
        for (v, &q) in membership.iter().enumerate() {
            qnets[q].push(v);
        }
        QNetPartition::new(membership.len(), qnets)
    }

    pub fn k(&self) -> usize {
        self.qnets.len()
    }

    /// Number of control nodes a controlled network on this partition uses.
    pub fn k_prime(&self) -> usize {
        self.k() + self.k() % 2
    }

    pub fn data_count(&self) -> usize {
        self.membership.len()
    }

    /// QNet index of a data vertex; `None` for control nodes and unknown ids.
    pub fn qnet_of(&self, v: Vertex) -> Option<usize> {
        self.membership.get(v).copied()
    }

    pub fn qnet(&self, i: usize) -> &[Vertex] {
        &self.qnets[i]
    }

    pub fn qnets(&self) -> &[Vec<Vertex>] {
        &self.qnets
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.qnets.iter().map(Vec::len).collect()
    }

    /// Control nodes `c_1..c_k'`; empty for a plain inter-QNet.
    pub fn control_nodes(&self) -> &[Vertex] {
        &self.control
    }

    pub fn is_cross(&self, u: Vertex, v: Vertex) -> bool {
        matches!((self.qnet_of(u), self.qnet_of(v)), (Some(a), Some(b)) if a != b)
    }

    fn without_control(&self) -> Self {
        QNetPartition {
            control: Vec::new(),
            ..self.clone()
        }
    }
}

/// A graph whose edges all cross QNets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterQNet {
    graph: Graph,
    partition: QNetPartition,
    connected: bool,
}

impl InterQNet {
    /// Validated inter-QNet: at least two QNets, cross edges only, connected.
    pub fn new(graph: Graph, partition: QNetPartition) -> Result<Self> {
        let iq = InterQNet::new_unchecked_connectivity(graph, partition)?;
        if !iq.connected {
            return Err(Error::Disconnected);
        }
        Ok(iq)
    }

    /// As [`InterQNet::new`] but a disconnected graph is accepted and only
    /// flagged. Complements are built this way.
    pub fn new_unchecked_connectivity(graph: Graph, partition: QNetPartition) -> Result<Self> {
        if partition.k() < 2 {
            return Err(Error::TooFewQNets { min: 2, got: partition.k() });
        }
        let n = partition.data_count();
        if graph.vertex_count() != n || graph.live_count() != n {
            return Err(Error::SizeMismatch(graph.live_count(), n));
        }
        for e in graph.edges() {
            if !partition.is_cross(e.0, e.1) {
                return Err(Error::IntraQNetEdge {
                    edge: e,
                    qnet: partition.membership[e.0],
                });
            }
        }
        let connected = graph.is_connected();
        Ok(InterQNet {
            graph,
            partition: partition.without_control(),
            connected,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn partition(&self) -> &QNetPartition {
        &self.partition
    }

    pub fn is_connected(&self) -> bool {
        self.connected
    }

    pub fn data_count(&self) -> usize {
        self.partition.data_count()
    }

    /// Cross-QNet vertex pairs that are not edges, in lexicographic order.
    pub fn non_adjacent_cross_pairs(&self) -> Vec<Edge> {
        let n = self.data_count();
        let mut out = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if self.partition.is_cross(u, v) && !self.graph.has_edge(u, v) {
                    out.push(Edge(u, v));
                }
            }
        }
        out
    }
}

/// An inter-QNet with its control layer attached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ControlledInterQNet {
    graph: Graph,
    partition: QNetPartition,
}

impl ControlledInterQNet {
    /// Reassembles a controlled network, e.g. after parsing. `control` must
    /// be `n..n + k'` and the structure must pass [`ControlledInterQNet::check`].
    pub fn from_parts(graph: Graph, partition: QNetPartition, control: Vec<Vertex>) -> Result<Self> {
        let n = partition.data_count();
        if control.iter().copied().ne(n..n + partition.k_prime()) {
            return Err(Error::Internal("control ids must follow the data ids"));
        }
        let cg = ControlledInterQNet {
            graph,
            partition: QNetPartition {
                control,
                ..partition
            },
        };
        cg.check()?;
        Ok(cg)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn partition(&self) -> &QNetPartition {
        &self.partition
    }

    pub fn data_count(&self) -> usize {
        self.partition.data_count()
    }

    pub fn control_nodes(&self) -> &[Vertex] {
        &self.partition.control
    }

    pub fn is_control(&self, v: Vertex) -> bool {
        v >= self.data_count() && v < self.graph.vertex_count()
    }

    /// Control layer is a clique, `c_a` covers `V_a`, and nothing else
    /// touches a control node; data edges cross QNets.
    pub fn check(&self) -> Result<()> {
        let n = self.data_count();
        let ctl = &self.partition.control;
        if ctl.len() != self.partition.k_prime() || self.graph.vertex_count() != n + ctl.len() {
            return Err(Error::Internal("control layer has the wrong size"));
        }
        for (a, &c) in ctl.iter().enumerate() {
            let mut expected = 0;
            for (b, &d) in ctl.iter().enumerate() {
                if a != b {
                    expected += 1;
                    if !self.graph.has_edge(c, d) {
                        return Err(Error::Internal("control layer is not a clique"));
                    }
                }
            }
            if a < self.partition.k() {
                for &v in self.partition.qnet(a) {
                    if !self.graph.has_edge(c, v) {
                        return Err(Error::Internal("control node misses a member of its QNet"));
                    }
                }
                expected += self.partition.qnet(a).len();
            }
            if self.graph.degree(c) != expected {
                return Err(Error::Internal("control node has a stray edge"));
            }
        }
        for e in self.graph.edges() {
            if e.1 < n && !self.partition.is_cross(e.0, e.1) {
                return Err(Error::IntraQNetEdge {
                    edge: e,
                    qnet: self.partition.membership[e.0],
                });
            }
        }
        Ok(())
    }
}

/// Attaches `k'` control nodes: a clique among them and a star from `c_a`
/// to every vertex of `V_a` for `a <= k`.
pub fn build_controlled(iq: &InterQNet) -> ControlledInterQNet {
    let n = iq.data_count();
    let kp = iq.partition.k_prime();
    let mut graph = Graph::new(n + kp);
    for e in iq.graph.edges() {
        graph.add_edge(e.0, e.1).expect("data edge is valid");
    }
    let control: Vec<Vertex> = (n..n + kp).collect();
    for (a, &c) in control.iter().enumerate() {
        for &d in &control[a + 1..] {
            graph.add_edge(c, d).expect("control ids are fresh");
        }
        if a < iq.partition.k() {
            for &v in iq.partition.qnet(a) {
                graph.add_edge(c, v).expect("member ids are valid");
            }
        }
    }
    let mut partition = iq.partition.clone();
    partition.control = control;
    ControlledInterQNet { graph, partition }
}

/// Every cross-QNet pair absent from `iq` becomes an edge and vice versa.
/// The result may be disconnected.
pub fn complement_inter_qnet(iq: &InterQNet) -> InterQNet {
    let n = iq.data_count();
    let mut graph = Graph::new(n);
    for e in iq.non_adjacent_cross_pairs() {
        graph.add_edge(e.0, e.1).expect("pair is valid");
    }
    let connected = graph.is_connected();
    InterQNet {
        graph,
        partition: iq.partition.clone(),
        connected,
    }
}

/// Choice of special neighbour for each control-node X-measurement.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum K0Policy {
    /// The first vertex of `V_1` for every measurement.
    #[default]
    FirstOfFirstQNet,
    /// A fixed vertex for every measurement.
    Fixed(Vertex),
    /// The lowest-id neighbour of the measured node at measurement time.
    LowestNeighbor,
}

impl K0Policy {
    fn pick(&self, g: &Graph, partition: &QNetPartition, v: Vertex) -> Result<Vertex> {
        match *self {
            K0Policy::FirstOfFirstQNet => Ok(partition.qnet(0)[0]),
            K0Policy::Fixed(k0) => Ok(k0),
            K0Policy::LowestNeighbor => g
                .neighbors(v)
                .next()
                .ok_or(Error::NotAdjacent { v, k0: v }),
        }
    }
}

/// X-measures `c_1..c_k'` in order and returns the graph after each step,
/// starting with the controlled graph itself, along with the records.
pub fn mec_trace(cg: &ControlledInterQNet, policy: K0Policy) -> Result<(Vec<Graph>, Vec<MeasurementRecord>)> {
    let mut g = cg.graph.clone();
    let mut graphs = Vec::with_capacity(cg.control_nodes().len() + 1);
    let mut records = Vec::with_capacity(cg.control_nodes().len());
    graphs.push(g.clone());
    for &c in cg.control_nodes() {
        let k0 = policy.pick(&g, &cg.partition, c)?;
        records.push(g.measure_x_in_place(c, k0)?);
        graphs.push(g.clone());
    }
    Ok((graphs, records))
}

/// Multipartite entanglement complementation: X-measures every control node
/// and returns the data graph, which equals the complement inter-QNet under
/// the default policy.
pub fn mec_complementation(
    cg: &ControlledInterQNet,
    policy: K0Policy,
) -> Result<(InterQNet, Vec<MeasurementRecord>)> {
    let mut g = cg.graph.clone();
    let mut records = Vec::with_capacity(cg.control_nodes().len());
    for &c in cg.control_nodes() {
        let k0 = policy.pick(&g, &cg.partition, c)?;
        records.push(g.measure_x_in_place(c, k0)?);
    }
    let graph = g.truncate(cg.data_count());
    let iq = InterQNet::new_unchecked_connectivity(graph, cg.partition.without_control())?;
    Ok((iq, records))
}

/// Z-measures every control node, giving back the original inter-QNet.
pub fn restore_original(cg: &ControlledInterQNet) -> Result<(InterQNet, Vec<MeasurementRecord>)> {
    let mut g = cg.graph.clone();
    let records = cg
        .control_nodes()
        .iter()
        .map(|&c| g.measure_z_in_place(c))
        .collect::<Result<Vec<_>>>()?;
    let graph = g.truncate(cg.data_count());
    let iq = InterQNet::new_unchecked_connectivity(graph, cg.partition.without_control())?;
    Ok((iq, records))
}

/// Outcome of projecting a network onto a group of requested links.
#[derive(Clone, Debug)]
pub struct EprExtraction {
    /// Surviving graph; only the group's endpoints remain live.
    pub graph: Graph,
    pub records: Vec<MeasurementRecord>,
    /// Surviving edges that are not in the group.
    pub extra_edges: Vec<Edge>,
}

impl EprExtraction {
    /// The survivors form exactly the requested disjoint EPR pairs.
    pub fn is_clean(&self) -> bool {
        self.extra_edges.is_empty()
    }
}

/// Z-measures every data vertex that is not an endpoint of `group`.
/// Group edges must be edges of `iq`.
pub fn extract_epr(iq: &InterQNet, group: &[Edge]) -> Result<EprExtraction> {
    let n = iq.data_count();
    let mut keep = vec![false; n];
    for e in group {
        if !iq.graph.has_edge(e.0, e.1) {
            return Err(Error::NotAnEdge(*e));
        }
        keep[e.0] = true;
        keep[e.1] = true;
    }
    let mut g = iq.graph.clone();
    let mut records = Vec::new();
    for v in (0..n).filter(|&v| !keep[v]) {
        records.push(g.measure_z_in_place(v)?);
    }
    let extra_edges = g.edges().into_iter().filter(|e| !group.contains(e)).collect();
    Ok(EprExtraction {
        graph: g,
        records,
        extra_edges,
    })
}
