//! Graphs built term by term from their closed descriptions, compared with
//! what the measurement sequences produce.

use mecnet_core::graph::Basis;
use mecnet_core::netgen::{generate_inter_qnet, GenConfig};
use mecnet_core::pairs::{parallel_pair_candidates, partition_requests, RequestSet, SeedPolicy};
use mecnet_core::qnet::{build_controlled, complement_inter_qnet, mec_trace};
use mecnet_core::stabilizer::{equal_up_to_local_clifford, Outcome, Tableau};
use mecnet_core::{Edge, Graph, InterQNet, K0Policy, QNetPartition};

/// Expected graph after X-measuring `c_1..c_d` (d even) with the default
/// special neighbour.
fn intermediate_literal(iq: &InterQNet, d: usize) -> Graph {
    let n = iq.data_count();
    let k = iq.partition().k();
    let kp = k + k % 2;
    let c = |j: usize| n + j - 1; // 1-based control index
    let q = |v: usize| iq.partition().qnet_of(v).unwrap() + 1; // 1-based QNet index
    let mut g = Graph::new(n + kp);
    for j in d + 1..=kp {
        for i in j + 1..=kp {
            g.add_edge(c(j), c(i)).unwrap();
        }
        for v in 0..n {
            if q(v) <= d || q(v) == j {
                g.add_edge(c(j), v).unwrap();
            }
        }
    }
    for u in 0..n {
        for v in u + 1..n {
            if q(u) == q(v) {
                continue;
            }
            let low = q(u) <= d && q(v) <= d;
            if low != iq.graph().has_edge(u, v) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    for j in 1..=d {
        g.delete_vertex_in_place(c(j)).unwrap();
    }
    g
}

#[test]
fn even_intermediates_match_the_closed_form() {
    let mut checked = 0;
    for seed in 0..300u64 {
        let k = 2 + (seed % 4) as usize;
        let n = k + (seed % 7) as usize;
        let p = [0.2, 0.5, 0.8][(seed % 3) as usize];
        let iq = generate_inter_qnet(&GenConfig::balanced(n, k, p, seed)).unwrap();
        let cg = build_controlled(&iq);
        let (graphs, _) = mec_trace(&cg, K0Policy::default()).unwrap();
        for d in (0..graphs.len()).step_by(2) {
            assert_eq!(graphs[d], intermediate_literal(&iq, d), "seed {seed}, d = {d}");
            checked += 1;
        }
    }
    assert!(checked > 600);
}

#[test]
fn controlled_3222_structure() {
    let sizes = [3, 2, 2, 2];
    let iq = generate_inter_qnet(&GenConfig { sizes: sizes.to_vec(), p: 0.3, seed: 4 }).unwrap();
    let cg = build_controlled(&iq);
    assert_eq!(cg.data_count(), 9);
    assert_eq!(cg.control_nodes().len(), 4);
    let ctl = cg.control_nodes();
    let clique = ctl.iter().enumerate().flat_map(|(i, &a)| ctl[i + 1..].iter().map(move |&b| (a, b)));
    assert_eq!(clique.filter(|&(a, b)| cg.graph().has_edge(a, b)).count(), 6);
    assert_eq!(cg.graph().edge_count(), iq.graph().edge_count() + 6 + 9);
}

#[test]
fn butterfly_switches_its_links() {
    // S1 = 0, S2 = 1 in one domain; D1 = 2, D2 = 3 in the other
    let p = QNetPartition::new(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
    let iq = InterQNet::new_unchecked_connectivity(Graph::from_edges(4, [(0, 3), (1, 2)]).unwrap(), p).unwrap();
    let comp = complement_inter_qnet(&iq);
    assert_eq!(comp.graph().edges(), vec![Edge(0, 2), Edge(1, 3)]);
    assert_eq!(complement_inter_qnet(&comp), iq);
}

#[test]
fn complete_bipartite_complements_to_nothing() {
    let p = QNetPartition::new(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
    let g = Graph::from_edges(4, [(0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
    let iq = InterQNet::new(g, p).unwrap();
    assert_eq!(complement_inter_qnet(&iq).graph().edge_count(), 0);
    assert!(!complement_inter_qnet(&iq).is_connected());
}

#[test]
fn request_intake_rejects_bad_pairs() {
    let p = QNetPartition::new(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
    let iq = InterQNet::new(Graph::from_edges(4, [(0, 2), (1, 2), (1, 3)]).unwrap(), p).unwrap();
    use mecnet_core::Error;
    assert!(matches!(RequestSet::new(&iq, [(0, 1)]), Err(Error::IntraDomainRequest { .. })));
    assert!(matches!(RequestSet::new(&iq, [(0, 2)]), Err(Error::AdjacentRequest(_))));
    assert!(matches!(RequestSet::new(&iq, [(0, 3), (3, 0)]), Err(Error::DuplicateRequest(_))));
    assert_eq!(RequestSet::new(&iq, [(3, 0)]).unwrap().pairs(), &[Edge(0, 3)]);
}

#[test]
fn candidate_sets_match_pairwise_evaluation() {
    let iq = generate_inter_qnet(&GenConfig::balanced(9, 4, 0.3, 11)).unwrap();
    let gbar = complement_inter_qnet(&iq);
    let g = gbar.graph();
    let edges = g.edges();
    let cl = parallel_pair_candidates(g, &edges).unwrap();
    for (i, a) in edges.iter().enumerate() {
        let expected: Vec<Edge> = edges
            .iter()
            .filter(|b| {
                *b != a
                    && [a.0, a.1].iter().all(|&x| [b.0, b.1].iter().all(|&y| x != y && !g.has_edge(x, y)))
            })
            .copied()
            .collect();
        assert_eq!(cl.candidate_edges(i).collect::<Vec<_>>(), expected);
    }
    let t = partition_requests(g, &edges, SeedPolicy::GreedyMax).unwrap();
    assert!(t.partitions(&edges));
}

fn connected_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    (0u32..1 << pairs.len())
        .map(move |mask| Graph::from_edges(n, pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e)).unwrap())
        .filter(Graph::is_connected)
}

#[test]
fn graph_rules_agree_with_tableau_up_to_five_vertices() {
    for n in 2..=5 {
        for g in connected_graphs(n) {
            let t = Tableau::graph_state(&g).unwrap();
            for v in 0..n {
                let mask: Vec<usize> = (0..n - 1).collect();
                for o in [Outcome::Plus, Outcome::Minus] {
                    let m = t.measure_pauli(v, Basis::Z, Some(o)).unwrap();
                    let after = m.tableau.discard_qubit(v).unwrap();
                    let (pred, _) = g.measure_z(v).unwrap();
                    let expect = Tableau::graph_state(&pred).unwrap();
                    assert!(equal_up_to_local_clifford(&after, &expect, &mask).unwrap());
                    let mx = t.measure_pauli(v, Basis::X, Some(o)).unwrap();
                    let after_x = mx.tableau.discard_qubit(v).unwrap();
                    for k0 in g.neighbors(v) {
                        let (pred, _) = g.measure_x(v, k0).unwrap();
                        let expect = Tableau::graph_state(&pred).unwrap();
                        assert!(equal_up_to_local_clifford(&after_x, &expect, &mask).unwrap(), "{g:?} v={v} k0={k0}");
                    }
                }
            }
        }
    }
}
