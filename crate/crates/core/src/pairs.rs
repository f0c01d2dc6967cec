//! Request batches and their partition into parallel-pairable groups.
//!
//! Two links are compatible when their endpoints are disjoint and no endpoint
//! of one is adjacent to an endpoint of the other; a set of links is
//! parallel-pairable when every two members are compatible, so all of them can
//! be projected out of the same graph state in one cycle.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::bitset::BitSet;
use crate::graph::{Edge, Graph};
use crate::qnet::{complement_inter_qnet, ControlledInterQNet, InterQNet};
use crate::{Error, Result};

/// Remote requests: cross-QNet pairs that are not adjacent in the original
/// inter-QNet. Order of insertion is kept.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RequestSet {
    pairs: Vec<Edge>,
}

impl RequestSet {
    pub fn new(iq: &InterQNet, pairs: impl IntoIterator<Item = impl Into<Edge>>) -> Result<Self> {
        let n = iq.data_count();
        let mut out: Vec<Edge> = Vec::new();
        let mut seen = BitSet::new(n * n);
        for p in pairs {
            let e: Edge = p.into();
            let e = Edge::new(e.0, e.1);
            if e.1 >= n {
                return Err(Error::InvalidVertex(e.1));
            }
            if e.0 == e.1 {
                return Err(Error::SelfLoop(e.0));
            }
            let (a, b) = (iq.partition().qnet_of(e.0), iq.partition().qnet_of(e.1));
            if a == b {
                return Err(Error::IntraDomainRequest {
                    pair: e,
                    qnet: a.unwrap_or(0),
                });
            }
            if iq.graph().has_edge(e.0, e.1) {
                return Err(Error::AdjacentRequest(e));
            }
            if seen.contains(e.0 * n + e.1) {
                return Err(Error::DuplicateRequest(e));
            }
            seen.insert(e.0 * n + e.1);
            out.push(e);
        }
        Ok(RequestSet { pairs: out })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[Edge] {
        &self.pairs
    }

    pub fn iter(&self) -> impl Iterator<Item = &Edge> {
        self.pairs.iter()
    }
}

#[inline]
fn compatible_edges(g: &Graph, e1: &Edge, e2: &Edge) -> bool {
    !e1.shares_endpoint(e2)
        && !g.has_edge(e1.0, e2.0)
        && !g.has_edge(e1.0, e2.1)
        && !g.has_edge(e1.1, e2.0)
        && !g.has_edge(e1.1, e2.1)
}

/// Disjoint endpoints and no adjacency between the two edges' endpoints.
/// Both arguments must be edges of `g`.
pub fn compatible(g: &Graph, e1: &Edge, e2: &Edge) -> Result<bool> {
    for e in [e1, e2] {
        if !g.has_edge(e.0, e.1) {
            return Err(Error::NotAnEdge(*e));
        }
    }
    Ok(compatible_edges(g, e1, e2))
}

/// Candidate sets `C(E^i)` for a list of target edges, each a bitset over
/// the indices of `edges()` of the graph.
#[derive(Clone, Debug)]
pub struct CandidateList {
    edges: Vec<Edge>,
    targets: Vec<usize>,
    sets: Vec<BitSet>,
}

impl CandidateList {
    /// All edges of the graph in lexicographic order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn index_of(&self, e: &Edge) -> Option<usize> {
        self.edges.binary_search(e).ok()
    }

    /// Target edges, as indices into [`CandidateList::edges`].
    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    /// `C` of the `i`-th target.
    pub fn candidates(&self, i: usize) -> &BitSet {
        &self.sets[i]
    }

    pub fn candidate_edges(&self, i: usize) -> impl Iterator<Item = Edge> + '_ {
        self.sets[i].iter().map(|j| self.edges[j])
    }

    /// Whether the targets at positions `members` are mutually compatible:
    /// the union of their conflict sets `N = E \ C \ {self}` must miss them all.
    fn pairable(&self, members: impl Iterator<Item = usize> + Clone) -> bool {
        let m = self.edges.len();
        let mut chosen = BitSet::new(m);
        for i in members.clone() {
            chosen.insert(self.targets[i]);
        }
        let mut conflicts = BitSet::new(m);
        for i in members {
            let mut n_i = BitSet::full(m);
            n_i.difference_with(&self.sets[i]);
            n_i.remove(self.targets[i]);
            conflicts.union_with(&n_i);
        }
        chosen.is_disjoint(&conflicts)
    }
}

/// For each target `E^i`, every other edge of `g` compatible with it.
/// Cost is `O(|targets| * |E|)` edge predicates.
pub fn parallel_pair_candidates(g: &Graph, targets: &[Edge]) -> Result<CandidateList> {
    let edges = g.edges();
    candidates_over(edges, g, targets)
}

fn candidates_over(edges: Vec<Edge>, g: &Graph, targets: &[Edge]) -> Result<CandidateList> {
    let m = edges.len();
    let mut idx = Vec::with_capacity(targets.len());
    let mut sets = Vec::with_capacity(targets.len());
    for t in targets {
        let i = edges.binary_search(t).map_err(|_| Error::NotAnEdge(*t))?;
        let mut c = BitSet::new(m);
        for (j, e) in edges.iter().enumerate() {
            if j != i && compatible_edges(g, t, e) {
                c.insert(j);
            }
        }
        idx.push(i);
        sets.push(c);
    }
    Ok(CandidateList {
        edges,
        targets: idx,
        sets,
    })
}

/// Whether `edges` are mutually compatible in `g`, decided through the
/// conflict sets of their candidate lists. Repeated edges count once.
pub fn check_parallel_pairable(g: &Graph, edges: &[Edge]) -> Result<bool> {
    let mut set: Vec<Edge> = edges.to_vec();
    set.sort_unstable();
    set.dedup();
    let cl = parallel_pair_candidates(g, &set)?;
    Ok(cl.pairable(0..set.len()))
}

/// How Alg-style greedy grouping picks the seed of a group and each member.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SeedPolicy {
    /// Most compatible partners among what is left; lowest edge on ties.
    #[default]
    GreedyMax,
    /// Lowest edge in lexicographic order.
    LowestId,
}

/// Groups `T_1..T_rho` of requests, each parallel-pairable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParallelPairTable {
    pub groups: Vec<Vec<Edge>>,
}

impl ParallelPairTable {
    pub fn rho(&self) -> usize {
        self.groups.len()
    }

    pub fn request_count(&self) -> usize {
        self.groups.iter().map(Vec::len).sum()
    }

    /// Mean requests served per cycle; `None` when there are no groups.
    pub fn r_bar(&self) -> Option<f64> {
        (self.rho() > 0).then(|| self.request_count() as f64 / self.rho() as f64)
    }

    /// Every request appears in exactly one group.
    pub fn partitions(&self, requests: &[Edge]) -> bool {
        let mut all: Vec<Edge> = self.groups.iter().flatten().copied().collect();
        let mut want = requests.to_vec();
        all.sort_unstable();
        want.sort_unstable();
        let unique = all.windows(2).all(|w| w[0] != w[1]);
        unique && all == want
    }
}

impl fmt::Display for ParallelPairTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, g) in self.groups.iter().enumerate() {
            write!(f, "T{}:", j + 1)?;
            for e in g {
                write!(f, " {e}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Greedy dynamic grouping of the requests of `r` over the complement of
/// the network underlying `cg`.
pub fn dynamic_parallel_pairs(cg: &ControlledInterQNet, r: &RequestSet, policy: SeedPolicy) -> Result<ParallelPairTable> {
    let (original, _) = crate::qnet::restore_original(cg)?;
    let gbar = complement_inter_qnet(&original);
    partition_requests(gbar.graph(), r.pairs(), policy)
}

/// Core of the grouping over an explicit complement graph.
///
/// Returns one group if the batch is already pairable. Otherwise each round
/// restricts the candidate sets to the remaining requests, chooses a seed,
/// and absorbs members while the group's candidate set is non-empty. Each
/// group is re-checked before returning.
pub fn partition_requests(gbar: &Graph, requests: &[Edge], policy: SeedPolicy) -> Result<ParallelPairTable> {
    let edges = gbar.edges();
    for e in requests {
        if edges.binary_search(e).is_err() {
            return Err(Error::NotInComplement(*e));
        }
    }
    if requests.is_empty() {
        return Ok(ParallelPairTable { groups: Vec::new() });
    }
    if check_parallel_pairable(gbar, requests)? {
        return Ok(ParallelPairTable {
            groups: vec![requests.to_vec()],
        });
    }

    let m = edges.len();
    let mut reqs: Vec<Edge> = requests.to_vec();
    reqs.sort_unstable();
    reqs.dedup();
    // C(E^i) depends only on the graph, so one pass serves every round;
    // each round restricts it to the requests still waiting.
    let cl = candidates_over(edges, gbar, &reqs)?;
    let mut pos = vec![usize::MAX; m];
    for (i, &t) in cl.targets().iter().enumerate() {
        pos[t] = i;
    }
    let mut alive = BitSet::full(reqs.len());
    let mut groups = Vec::new();
    while let Some(first) = alive.first() {
        let mut rmask = BitSet::new(m);
        for i in alive.iter() {
            rmask.insert(cl.targets()[i]);
        }
        let restricted = |i: usize| {
            let mut c = cl.candidates(i).clone();
            c.intersect_with(&rmask);
            c
        };
        let cand: Vec<Option<BitSet>> = (0..reqs.len()).map(|i| alive.contains(i).then(|| restricted(i))).collect();
        let c = |i: usize| cand[i].as_ref().expect("alive request");

        let seed = match policy {
            SeedPolicy::LowestId => first,
            SeedPolicy::GreedyMax => argmax(alive.iter(), |i| c(i).count()),
        };
        let mut group = vec![seed];
        let mut ct = c(seed).clone();
        while !ct.is_empty() {
            let l = match policy {
                SeedPolicy::LowestId => pos[ct.first().expect("non-empty")],
                SeedPolicy::GreedyMax => argmax(ct.iter().map(|j| pos[j]), |i| c(i).intersection_count(&ct)),
            };
            group.push(l);
            ct.intersect_with(c(l));
        }
        if !cl.pairable(group.iter().copied()) {
            return Err(Error::Internal("greedy group is not parallel-pairable"));
        }
        for &i in &group {
            alive.remove(i);
        }
        groups.push(group.into_iter().map(|i| reqs[i]).collect());
    }
    Ok(ParallelPairTable { groups })
}

/// First index with the maximum score; indices arrive in increasing edge order.
fn argmax(items: impl Iterator<Item = usize>, score: impl Fn(usize) -> usize) -> usize {
    let mut best = None;
    for i in items {
        let s = score(i);
        if best.is_none_or(|(_, bs)| s > bs) {
            best = Some((i, s));
        }
    }
    best.expect("non-empty choice").0
}

pub const PARTITION_ORACLE_LIMIT: usize = 10;

/// Exact minimum number of parallel-pairable groups, by exhaustive search.
pub fn min_partition_oracle(g: &Graph, requests: &[Edge]) -> Result<usize> {
    let m = requests.len();
    if m > PARTITION_ORACLE_LIMIT {
        return Err(Error::SizeLimit {
            size: m,
            limit: PARTITION_ORACLE_LIMIT,
        });
    }
    let mut ok = vec![vec![true; m]; m];
    for i in 0..m {
        for j in 0..m {
            if i != j {
                ok[i][j] = compatible(g, &requests[i], &requests[j])?;
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut best = m;
    place(0, &ok, &mut groups, &mut best);
    Ok(best)
}

fn place(i: usize, ok: &[Vec<bool>], groups: &mut Vec<Vec<usize>>, best: &mut usize) {
    if groups.len() >= *best {
        return;
    }
    if i == ok.len() {
        *best = groups.len();
        return;
    }
    for g in 0..groups.len() {
        if groups[g].iter().all(|&j| ok[i][j]) {
            groups[g].push(i);
            place(i + 1, ok, groups, best);
            groups[g].pop();
        }
    }
    groups.push(vec![i]);
    place(i + 1, ok, groups, best);
    groups.pop();
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compatibility_examples() {
        let path = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        assert!(!compatible(&path, &Edge(0, 1), &Edge(1, 2)).unwrap());
        assert!(!compatible(&path, &Edge(0, 1), &Edge(2, 3)).unwrap());
        let two = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert!(compatible(&two, &Edge(0, 1), &Edge(2, 3)).unwrap());
        assert_eq!(compatible(&two, &Edge(0, 1), &Edge(1, 2)), Err(Error::NotAnEdge(Edge(1, 2))));
    }

    #[test]
    fn candidates_on_matching() {
        let g = Graph::from_edges(6, [(0, 1), (2, 3), (4, 5)]).unwrap();
        let cl = parallel_pair_candidates(&g, &g.edges()).unwrap();
        for i in 0..3 {
            assert_eq!(cl.candidates(i).count(), 2);
        }
        let single = Graph::from_edges(2, [(0, 1)]).unwrap();
        let cl = parallel_pair_candidates(&single, &[Edge(0, 1)]).unwrap();
        assert!(cl.candidates(0).is_empty());
    }

    #[test]
    fn pairable_checks() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (3, 4)]).unwrap();
        assert!(check_parallel_pairable(&g, &[Edge(0, 1)]).unwrap());
        assert!(!check_parallel_pairable(&g, &[Edge(0, 1), Edge(1, 2)]).unwrap());
        assert!(check_parallel_pairable(&g, &[Edge(0, 1), Edge(3, 4)]).unwrap());
        assert!(check_parallel_pairable(&g, &[]).unwrap());
    }

    #[test]
    fn grouping_small_cases() {
        let g = Graph::from_edges(6, [(0, 1), (2, 3), (4, 5), (1, 2)]).unwrap();
        let t = partition_requests(&g, &[Edge(0, 1), Edge(4, 5)], SeedPolicy::GreedyMax).unwrap();
        assert_eq!(t.rho(), 1);
        let t = partition_requests(&g, &[Edge(0, 1), Edge(1, 2)], SeedPolicy::GreedyMax).unwrap();
        assert_eq!(t.rho(), 2);
        assert!(t.partitions(&[Edge(0, 1), Edge(1, 2)]));
        let all = g.edges();
        for policy in [SeedPolicy::GreedyMax, SeedPolicy::LowestId] {
            let t = partition_requests(&g, &all, policy).unwrap();
            assert!(t.partitions(&all));
            assert!(t.rho() >= min_partition_oracle(&g, &all).unwrap());
        }
        assert_eq!(
            partition_requests(&g, &[Edge(0, 2)], SeedPolicy::GreedyMax),
            Err(Error::NotInComplement(Edge(0, 2)))
        );
    }

    #[test]
    fn table_display() {
        let t = ParallelPairTable {
            groups: vec![vec![Edge(0, 3), Edge(1, 4)], vec![Edge(2, 5)]],
        };
        assert_eq!(alloc::format!("{t}"), "T1: (0,3) (1,4)\nT2: (2,5)\n");
        assert_eq!(t.r_bar(), Some(1.5));
    }

    #[test]
    fn oracle_extremes() {
        let g = Graph::from_edges(6, [(0, 1), (2, 3), (4, 5)]).unwrap();
        assert_eq!(min_partition_oracle(&g, &g.edges()).unwrap(), 1);
        let star = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(min_partition_oracle(&star, &star.edges()).unwrap(), 3);
        assert_eq!(min_partition_oracle(&star, &[]).unwrap(), 0);
    }
}
