//! Undirected simple graphs and the graph-state rewrite rules.
//!
//! Vertex ids are stable: deleting a vertex masks it instead of renumbering,
//! so a vertex keeps its name across a sequence of measurements.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::bitset::BitSet;
use crate::{Error, Result};

pub type Vertex = usize;

/// Unordered vertex pair, stored with the smaller id first.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Edge(pub Vertex, pub Vertex);

impl Edge {
    pub fn new(u: Vertex, v: Vertex) -> Self {
        if u <= v {
            Edge(u, v)
        } else {
            Edge(v, u)
        }
    }

    #[inline]
    pub fn shares_endpoint(&self, other: &Edge) -> bool {
        self.0 == other.0 || self.0 == other.1 || self.1 == other.0 || self.1 == other.1
    }

    #[inline]
    pub fn contains(&self, v: Vertex) -> bool {
        self.0 == v || self.1 == v
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.0, self.1)
    }
}

impl From<(Vertex, Vertex)> for Edge {
    fn from((u, v): (Vertex, Vertex)) -> Self {
        Edge::new(u, v)
    }
}

/// Pauli basis of a single-qubit measurement.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Basis {
    X,
    Z,
}

/// Local-Clifford correction class left behind by a measurement.
///
/// The graph-level rules only track the graph orbit; the outcome-dependent
/// correction is recorded symbolically and never applied to the structure.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Byproduct {
    /// Pauli-Z corrections on the former neighbourhood of the measured vertex.
    ZNeighbourhood,
    /// sqrt(±iY) on the special neighbour together with Z corrections on the
    /// symmetric difference of the two neighbourhoods.
    XSpecialNeighbour,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct MeasurementRecord {
    pub measured_vertex: Vertex,
    pub basis: Basis,
    pub special_neighbor: Option<Vertex>,
    pub byproduct: Byproduct,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<BitSet>,
    live: BitSet,
}

impl Graph {
    /// Edgeless graph on `n` live vertices.
    pub fn new(n: usize) -> Self {
        Graph {
            adj: vec![BitSet::new(n); n],
            live: BitSet::full(n),
        }
    }

    pub fn from_edges<I, E>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: Into<Edge>,
    {
        let mut g = Graph::new(n);
        for e in edges {
            let e = e.into();
            g.add_edge(e.0, e.1)?;
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        Graph::new(n).complement()
    }

    /// Total number of vertex ids, including removed ones.
    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn live_count(&self) -> usize {
        self.live.count()
    }

    #[inline]
    pub fn is_live(&self, v: Vertex) -> bool {
        self.live.contains(v)
    }

    pub fn live_vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.live.iter()
    }

    pub fn live_set(&self) -> &BitSet {
        &self.live
    }

    fn check(&self, v: Vertex) -> Result<()> {
        if self.is_live(v) {
            Ok(())
        } else {
            Err(Error::InvalidVertex(v))
        }
    }

    /// Appends a fresh isolated vertex and returns its id.
    pub fn add_vertex(&mut self) -> Vertex {
        let n = self.adj.len() + 1;
        let mut adj: Vec<BitSet> = Vec::with_capacity(n);
        for row in &self.adj {
            let mut r = BitSet::new(n);
            for u in row.iter() {
                r.insert(u);
            }
            adj.push(r);
        }
        adj.push(BitSet::new(n));
        let mut live = BitSet::new(n);
        for v in self.live.iter() {
            live.insert(v);
        }
        live.insert(n - 1);
        self.adj = adj;
        self.live = live;
        n - 1
    }

    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<()> {
        self.check(u)?;
        self.check(v)?;
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        Ok(())
    }

    pub fn remove_edge(&mut self, u: Vertex, v: Vertex) -> Result<()> {
        self.check(u)?;
        self.check(v)?;
        self.adj[u].remove(v);
        self.adj[v].remove(u);
        Ok(())
    }

    fn toggle_edge(&mut self, u: Vertex, v: Vertex) {
        self.adj[u].toggle(v);
        self.adj[v].toggle(u);
    }

    #[inline]
    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.adj.len() && self.adj[u].contains(v)
    }

    /// Open neighbourhood of `v` (empty for removed or unknown ids).
    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.adj.get(v).into_iter().flat_map(|row| row.iter())
    }

    pub fn neighbor_set(&self, v: Vertex) -> &BitSet {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj.get(v).map_or(0, |r| r.count())
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|r| r.count()).sum::<usize>() / 2
    }

    /// All edges in lexicographic order.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::new();
        for u in self.live.iter() {
            for v in self.adj[u].iter() {
                if u < v {
                    out.push(Edge(u, v));
                }
            }
        }
        out
    }

    /// Complement over the live vertices; removed ids stay removed.
    pub fn complement(&self) -> Graph {
        let mut g = self.clone();
        for u in self.live.iter() {
            let mut row = self.live.clone();
            row.difference_with(&self.adj[u]);
            row.remove(u);
            g.adj[u] = row;
        }
        g
    }

    /// Local complementation: complements the subgraph induced on N(v).
    pub fn local_complement_in_place(&mut self, v: Vertex) -> Result<()> {
        self.check(v)?;
        let nbrs: Vec<Vertex> = self.adj[v].iter().collect();
        for (i, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[i + 1..] {
                self.toggle_edge(a, b);
            }
        }
        Ok(())
    }

    pub fn local_complement(&self, v: Vertex) -> Result<Graph> {
        let mut g = self.clone();
        g.local_complement_in_place(v)?;
        Ok(g)
    }

    pub fn delete_vertex_in_place(&mut self, v: Vertex) -> Result<()> {
        self.check(v)?;
        let nbrs: Vec<Vertex> = self.adj[v].iter().collect();
        for u in nbrs {
            self.adj[u].remove(v);
        }
        self.adj[v].clear();
        self.live.remove(v);
        Ok(())
    }

    pub fn delete_vertex(&self, v: Vertex) -> Result<Graph> {
        let mut g = self.clone();
        g.delete_vertex_in_place(v)?;
        Ok(g)
    }

    /// Pauli-X measurement of `v` with special neighbour `k0`:
    /// `tau_k0(tau_v(tau_k0(g)) - v)`.
    pub fn measure_x_in_place(&mut self, v: Vertex, k0: Vertex) -> Result<MeasurementRecord> {
        self.check(v)?;
        self.check(k0)?;
        if !self.has_edge(v, k0) {
            return Err(Error::NotAdjacent { v, k0 });
        }
        self.local_complement_in_place(k0)?;
        self.local_complement_in_place(v)?;
        self.delete_vertex_in_place(v)?;
        self.local_complement_in_place(k0)?;
        Ok(MeasurementRecord {
            measured_vertex: v,
            basis: Basis::X,
            special_neighbor: Some(k0),
            byproduct: Byproduct::XSpecialNeighbour,
        })
    }

    pub fn measure_x(&self, v: Vertex, k0: Vertex) -> Result<(Graph, MeasurementRecord)> {
        let mut g = self.clone();
        let rec = g.measure_x_in_place(v, k0)?;
        Ok((g, rec))
    }

    /// Pauli-Z measurement: the vertex and its edges are removed.
    pub fn measure_z_in_place(&mut self, v: Vertex) -> Result<MeasurementRecord> {
        self.delete_vertex_in_place(v)?;
        Ok(MeasurementRecord {
            measured_vertex: v,
            basis: Basis::Z,
            special_neighbor: None,
            byproduct: Byproduct::ZNeighbourhood,
        })
    }

    pub fn measure_z(&self, v: Vertex) -> Result<(Graph, MeasurementRecord)> {
        let mut g = self.clone();
        let rec = g.measure_z_in_place(v)?;
        Ok((g, rec))
    }

    /// Copy of the graph restricted to ids `0..n`, dropping everything above.
    pub fn truncate(&self, n: usize) -> Graph {
        let mut g = Graph::new(n);
        for v in 0..n.min(self.vertex_count()) {
            if !self.is_live(v) {
                g.live.remove(v);
                continue;
            }
            for u in self.adj[v].iter().filter(|&u| u < n) {
                g.adj[v].insert(u);
            }
        }
        g
    }

    /// Renumbers live vertices to `0..live_count` in id order.
    /// Returns the compact graph and, for each new id, its old id.
    pub fn compact(&self) -> (Graph, Vec<Vertex>) {
        let ids: Vec<Vertex> = self.live.iter().collect();
        let mut index = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in ids.iter().enumerate() {
            index[v] = i;
        }
        let mut g = Graph::new(ids.len());
        for (i, &v) in ids.iter().enumerate() {
            for u in self.adj[v].iter() {
                g.adj[i].insert(index[u]);
            }
        }
        (g, ids)
    }

    /// Connected components over live vertices, each sorted, ordered by
    /// smallest member.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let mut seen = BitSet::new(self.vertex_count());
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for s in self.live.iter() {
            if seen.contains(s) {
                continue;
            }
            seen.insert(s);
            queue.push_back(s);
            let mut comp = Vec::new();
            while let Some(u) = queue.pop_front() {
                comp.push(u);
                for w in self.adj[u].iter() {
                    if !seen.contains(w) {
                        seen.insert(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Unit-weight BFS distances from `s`; `None` for unreachable vertices.
    pub fn bfs_distances(&self, s: Vertex) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.vertex_count()];
        if !self.is_live(s) {
            return dist;
        }
        dist[s] = Some(0);
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap_or(0);
            for w in self.adj[u].iter() {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, live={}, edges=[", self.vertex_count(), self.live_count())?;
        for (i, e) in self.edges().iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}-{}", e.0, e.1)?;
        }
        f.write_str("])")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edges(g: &Graph) -> Vec<(usize, usize)> {
        g.edges().into_iter().map(|e| (e.0, e.1)).collect()
    }

    #[test]
    fn complement_small_cases() {
        assert_eq!(edges(&Graph::new(3).complement()), vec![(0, 1), (0, 2), (1, 2)]);
        assert!(Graph::complete(3).complement().edges().is_empty());
        let path = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(edges(&path.complement()), vec![(0, 2)]);
    }

    #[test]
    fn complement_skips_removed_vertices() {
        let g = Graph::new(4).delete_vertex(2).unwrap();
        let c = g.complement();
        assert_eq!(edges(&c), vec![(0, 1), (0, 3), (1, 3)]);
        assert!(!c.is_live(2));
    }

    #[test]
    fn local_complement_cases() {
        let star = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let lc = star.local_complement(0).unwrap();
        assert_eq!(
            edges(&lc),
            vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
        );
        assert_eq!(lc.local_complement(0).unwrap(), star);

        let path = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(edges(&path.local_complement(1).unwrap()), vec![(0, 1), (0, 2), (1, 2)]);
        assert_eq!(path.local_complement(7), Err(Error::InvalidVertex(7)));
    }

    #[test]
    fn delete_vertex_cases() {
        let tri = Graph::complete(3);
        assert_eq!(edges(&tri.delete_vertex(0).unwrap()), vec![(1, 2)]);
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        assert_eq!(edges(&g.delete_vertex(2).unwrap()), vec![(0, 1)]);
        let k4 = Graph::complete(4).delete_vertex(3).unwrap();
        assert_eq!(k4.compact().0, Graph::complete(3));
        assert_eq!(k4.delete_vertex(3), Err(Error::InvalidVertex(3)));
    }

    #[test]
    fn measure_x_two_vertices() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        let (h, rec) = g.measure_x(1, 0).unwrap();
        assert!(h.edges().is_empty());
        assert!(h.is_live(0) && !h.is_live(1));
        assert_eq!(rec.basis, Basis::X);
        assert_eq!(rec.special_neighbor, Some(0));
    }

    #[test]
    fn measure_x_star_center() {
        let star = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let (h, _) = star.measure_x(0, 1).unwrap();
        assert_eq!(edges(&h), vec![(1, 2), (1, 3)]);
    }

    #[test]
    fn measure_x_rejects_non_neighbour() {
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        assert_eq!(g.measure_x(0, 2).unwrap_err(), Error::NotAdjacent { v: 0, k0: 2 });
    }

    #[test]
    fn measure_z_cases() {
        let (h, rec) = Graph::complete(3).measure_z(0).unwrap();
        assert_eq!(edges(&h), vec![(1, 2)]);
        assert_eq!(rec.basis, Basis::Z);
        assert_eq!(rec.special_neighbor, None);

        let c4 = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let (h, _) = c4.measure_z(0).unwrap();
        let (h, _) = h.measure_z(2).unwrap();
        assert!(h.edges().is_empty());
        assert_eq!(h.live_count(), 2);
    }

    #[test]
    fn add_vertex_keeps_edges() {
        let mut g = Graph::from_edges(2, [(0, 1)]).unwrap();
        let v = g.add_vertex();
        assert_eq!(v, 2);
        g.add_edge(1, 2).unwrap();
        assert_eq!(edges(&g), vec![(0, 1), (1, 2)]);
        assert_eq!(g.add_edge(2, 2), Err(Error::SelfLoop(2)));
    }

    #[test]
    fn components_and_bfs() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (3, 4)]).unwrap();
        assert_eq!(g.components(), vec![vec![0, 1, 2], vec![3, 4]]);
        assert!(!g.is_connected());
        let d = g.bfs_distances(0);
        assert_eq!(d[2], Some(2));
        assert_eq!(d[3], None);
    }
}
