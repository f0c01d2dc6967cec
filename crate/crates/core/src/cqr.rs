//! Conventional routing baseline: unit-weight shortest paths over the
//! controlled network, with control nodes allowed as relays.

use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{Edge, Vertex};
use crate::qnet::ControlledInterQNet;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CqrPath {
    pub request: Edge,
    pub hops: usize,
    /// Relays in order from the request's first endpoint.
    pub intermediates: Vec<Vertex>,
    pub via_control: bool,
}

impl CqrPath {
    /// A direct link needs no routing and is not a remote request.
    pub fn is_remote(&self) -> bool {
        self.hops > 1
    }
}

/// Shortest path from `req.0` to `req.1`; among shortest paths the
/// lexicographically smallest vertex sequence is taken.
pub fn route_cqr(cg: &ControlledInterQNet, req: Edge) -> Result<CqrPath> {
    let g = cg.graph();
    for v in [req.0, req.1] {
        if v >= cg.data_count() {
            return Err(Error::InvalidVertex(v));
        }
    }
    if req.0 == req.1 {
        return Err(Error::SelfLoop(req.0));
    }
    let dist = g.bfs_distances(req.1);
    let hops = dist[req.0].ok_or(Error::Disconnected)?;
    let mut intermediates = Vec::with_capacity(hops.saturating_sub(1));
    let mut cur = req.0;
    for left in (1..hops).rev() {
        cur = g
            .neighbors(cur)
            .find(|&w| dist[w] == Some(left))
            .ok_or(Error::Internal("shortest-path walk lost its way"))?;
        intermediates.push(cur);
    }
    let via_control = intermediates.iter().any(|&v| cg.is_control(v));
    Ok(CqrPath {
        request: req,
        hops,
        intermediates,
        via_control,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct CqrBatch {
    pub paths: Vec<CqrPath>,
    /// Mean hops; `None` for an empty batch.
    pub h_bar: Option<f64>,
    /// Total relays over all paths.
    pub chi: usize,
    /// Qubits demanded per vertex: two per relay use, one per endpoint use.
    pub load: Vec<usize>,
}

/// Routes each request independently on a fresh copy of the network.
pub fn cqr_batch(cg: &ControlledInterQNet, requests: &[Edge]) -> Result<CqrBatch> {
    let mut load = vec![0; cg.graph().vertex_count()];
    let mut paths = Vec::with_capacity(requests.len());
    for &r in requests {
        let p = route_cqr(cg, r)?;
        load[r.0] += 1;
        load[r.1] += 1;
        for &v in &p.intermediates {
            load[v] += 2;
        }
        paths.push(p);
    }
    let total: usize = paths.iter().map(|p| p.hops).sum();
    let chi = paths.iter().map(|p| p.intermediates.len()).sum();
    let h_bar = (!paths.is_empty()).then(|| total as f64 / paths.len() as f64);
    Ok(CqrBatch { paths, h_bar, chi, load })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::qnet::{build_controlled, InterQNet, QNetPartition};

    fn cg() -> ControlledInterQNet {
        // V1 = {0, 1}, V2 = {2}, V3 = {3, 4}; 0-2-3 and 1-3
        let p = QNetPartition::new(5, alloc::vec![alloc::vec![0, 1], alloc::vec![2], alloc::vec![3, 4]]).unwrap();
        let g = Graph::from_edges(5, [(0, 2), (2, 3), (1, 3), (2, 4)]).unwrap();
        build_controlled(&InterQNet::new(g, p).unwrap())
    }

    #[test]
    fn two_hop_via_mediator() {
        let p = route_cqr(&cg(), Edge(0, 3)).unwrap();
        assert_eq!((p.hops, p.intermediates.as_slice(), p.via_control), (2, &[2][..], false));
    }

    #[test]
    fn three_hop_via_control() {
        // 1 and 4: 1's neighbours are 3 and c_1 = 5; 4's are 2 and c_3 = 7
        let p = route_cqr(&cg(), Edge(1, 4)).unwrap();
        assert_eq!(p.hops, 3);
        assert_eq!(p.intermediates, alloc::vec![3, 2]);
        assert!(!p.via_control);
        let p = route_cqr(&cg(), Edge(0, 1)).unwrap();
        assert_eq!(p.hops, 2);
        assert_eq!(p.intermediates, alloc::vec![5]);
        assert!(p.via_control);
    }

    #[test]
    fn adjacent_is_one_hop() {
        assert!(!route_cqr(&cg(), Edge(0, 2)).unwrap().is_remote());
    }

    #[test]
    fn batch_statistics() {
        let b = cqr_batch(&cg(), &[Edge(0, 3), Edge(1, 4)]).unwrap();
        assert_eq!(b.h_bar, Some(2.5));
        assert_eq!(b.chi, 3);
        assert_eq!(b.load[2], 4);
        assert_eq!(b.load[3], 3);
        let empty = cqr_batch(&cg(), &[]).unwrap();
        assert_eq!((empty.h_bar, empty.chi), (None, 0));
    }
}
