//! Oracle suites behind `mecnet verify`.
//!
//! Each suite draws its own cases from a seeded stream and keeps the
//! smallest failing case as a counterexample.

use mecnet_core::graph::Basis;
use mecnet_core::metrics::{cqr_cycles, mec_cycles, TimingParams};
use mecnet_core::netgen::{generate_with, rng_for, sample_requests_with, GenConfig};
use mecnet_core::pairs::{check_parallel_pairable, min_partition_oracle, partition_requests, SeedPolicy};
use mecnet_core::qnet::{build_controlled, complement_inter_qnet, extract_epr, mec_complementation};
use mecnet_core::stabilizer::{equal_up_to_local_clifford, Outcome, Tableau, ORACLE_LIMIT};
use mecnet_core::{ControlledInterQNet, Edge, Graph, InterQNet, K0Policy, Vertex};
use rand::Rng;

use crate::format::write_controlled;
use crate::timeline::{cqr_window, mec_long_run, mec_window};

/// Graph-level X-measurement rule under test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Rule {
    #[default]
    Standard,
    /// Mutant that omits the closing local complementation on `k0`.
    DropFinalLc,
}

impl Rule {
    pub fn measure_x(self, g: &mut Graph, v: Vertex, k0: Vertex) -> mecnet_core::Result<()> {
        match self {
            Rule::Standard => g.measure_x_in_place(v, k0).map(|_| ()),
            Rule::DropFinalLc => {
                g.local_complement_in_place(k0)?;
                g.local_complement_in_place(v)?;
                g.delete_vertex_in_place(v)
            }
        }
    }

    /// Data graph after X-measuring every control node with `k0 = V_1[0]`.
    pub fn mec(self, cg: &ControlledInterQNet) -> mecnet_core::Result<Graph> {
        if self == Rule::Standard {
            return Ok(mec_complementation(cg, K0Policy::default())?.0.graph().clone());
        }
        let mut g = cg.graph().clone();
        let k0 = cg.partition().qnet(0)[0];
        for &c in cg.control_nodes() {
            self.measure_x(&mut g, c, k0)?;
        }
        Ok(g.truncate(cg.data_count()))
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub cases: usize,
    pub seed: u64,
    pub rule: Rule,
    /// Largest state handed to the tableau oracle.
    pub max_qubits: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            cases: 1000,
            seed: 0x5eed,
            rule: Rule::Standard,
            max_qubits: 12,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    pub skipped: Option<String>,
    pub note: Option<String>,
    pub counterexample: Option<String>,
    counterexample_size: usize,
}

impl SuiteReport {
    fn new(name: &'static str) -> Self {
        SuiteReport {
            name,
            counterexample_size: usize::MAX,
            ..Default::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    fn record(&mut self, ok: bool, size: usize, dump: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if size < self.counterexample_size {
                self.counterexample_size = size;
                self.counterexample = Some(dump());
            }
        }
    }
}

/// Small random instance: `k` in 2..=4, QNets of 1..=`max_size` vertices.
pub fn small_instance<R: Rng>(rng: &mut R, max_size: usize, p: f64) -> InterQNet {
    let k = rng.gen_range(2..=4);
    let sizes = (0..k).map(|_| rng.gen_range(1..=max_size)).collect();
    generate_with(&GenConfig { sizes, p, seed: 0 }, rng).expect("valid config")
}

/// Cross pairs absent from `iq`, taken straight from the membership map.
pub fn complement_edges(iq: &InterQNet) -> Vec<Edge> {
    let n = iq.data_count();
    let q = |v: usize| iq.partition().qnet_of(v);
    let mut out = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if q(u) != q(v) && !iq.graph().has_edge(u, v) {
                out.push(Edge(u, v));
            }
        }
    }
    out
}

pub fn lemma1_suite(opts: &VerifyOptions) -> SuiteReport {
    let mut rep = SuiteReport::new("complementation");
    let mut rng = rng_for(opts.seed, 1);
    for i in 0..opts.cases {
        let p = if i % 2 == 0 { 0.2 } else { 0.8 };
        let iq = small_instance(&mut rng, 4, p);
        let cg = build_controlled(&iq);
        let ok = opts.rule.mec(&cg).is_ok_and(|g| g.edges() == complement_edges(&iq));
        rep.record(ok, cg.graph().vertex_count(), || write_controlled(&cg));
    }
    rep
}

/// Measures every control node on the tableau for each outcome string,
/// discards them, and compares with the predicted data graph.
pub fn tableau_matches_mec(cg: &ControlledInterQNet, predicted: &Graph) -> bool {
    let Ok(start) = Tableau::graph_state(cg.graph()) else {
        return false;
    };
    let ctl = cg.control_nodes();
    let Ok(expect) = Tableau::graph_state(predicted) else {
        return false;
    };
    let mask: Vec<usize> = (0..cg.data_count()).collect();
    (0u32..1 << ctl.len()).all(|branch| {
        let mut t = start.clone();
        for (i, &c) in ctl.iter().enumerate() {
            let o = if branch >> i & 1 == 1 { Outcome::Minus } else { Outcome::Plus };
            t = match t.measure_pauli(c, Basis::X, Some(o)) {
                Ok(m) => m.tableau,
                Err(_) => return false,
            };
        }
        for &c in ctl.iter().rev() {
            t = match t.discard_qubit(c) {
                Ok(t) => t,
                Err(_) => return false,
            };
        }
        equal_up_to_local_clifford(&t, &expect, &mask).unwrap_or(false)
    })
}

pub fn tableau_suite(opts: &VerifyOptions) -> SuiteReport {
    let mut rep = SuiteReport::new("tableau");
    if opts.max_qubits > ORACLE_LIMIT {
        rep.skipped = Some(format!(
            "requested {} qubits, tableau oracle is limited to {ORACLE_LIMIT}",
            opts.max_qubits
        ));
        return rep;
    }
    let mut rng = rng_for(opts.seed, 2);
    let budget = (opts.cases / 5).max(1);
    let mut too_big = 0;
    while rep.cases < budget {
        let iq = small_instance(&mut rng, 3, if rep.cases.is_multiple_of(2) { 0.2 } else { 0.8 });
        let cg = build_controlled(&iq);
        if cg.graph().vertex_count() > opts.max_qubits {
            too_big += 1;
            continue;
        }
        let ok = opts.rule.mec(&cg).is_ok_and(|g| tableau_matches_mec(&cg, &g));
        rep.record(ok, cg.graph().vertex_count(), || write_controlled(&cg));
    }
    rep.note = Some(format!("{too_big} drawn instances above {} qubits were redrawn", opts.max_qubits));
    rep
}

fn compatible_brute(g: &Graph, a: &Edge, b: &Edge) -> bool {
    let ends = [a.0, a.1];
    [b.0, b.1].iter().all(|&y| ends.iter().all(|&x| x != y && !g.has_edge(x, y)))
}

pub fn pairable_suite(opts: &VerifyOptions) -> SuiteReport {
    let mut rep = SuiteReport::new("pairable-check");
    let mut rng = rng_for(opts.seed, 3);
    for _ in 0..opts.cases {
        let n = rng.gen_range(2..=14);
        let density = rng.gen_range(0.05..0.6);
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(density) {
                    g.add_edge(u, v).expect("valid pair");
                }
            }
        }
        let edges = g.edges();
        if edges.is_empty() {
            continue;
        }
        let m = rng.gen_range(1..=8.min(edges.len()));
        let pick = rand::seq::index::sample(&mut rng, edges.len(), m);
        let set: Vec<Edge> = pick.iter().map(|i| edges[i]).collect();
        let brute = set
            .iter()
            .enumerate()
            .all(|(i, a)| set[i + 1..].iter().all(|b| compatible_brute(&g, a, b)));
        let ok = check_parallel_pairable(&g, &set).is_ok_and(|r| r == brute);
        rep.record(ok, n, || format!("{}# set {set:?}\n", crate::format::write_graph(&g)));
    }
    rep
}

pub fn grouping_suite(opts: &VerifyOptions) -> SuiteReport {
    let mut rep = SuiteReport::new("grouping");
    let mut rng = rng_for(opts.seed, 4);
    for i in 0..opts.cases / 2 {
        let iq = small_instance(&mut rng, 4, if i % 2 == 0 { 0.2 } else { 0.5 });
        let avail = iq.non_adjacent_cross_pairs().len();
        let m = rng.gen_range(0..=avail.min(8));
        let Ok(r) = sample_requests_with(&iq, m, &mut rng) else {
            rep.record(false, iq.data_count(), || crate::format::write_inter_qnet(&iq));
            continue;
        };
        let gbar = complement_inter_qnet(&iq);
        let ok = partition_requests(gbar.graph(), r.pairs(), SeedPolicy::GreedyMax).is_ok_and(|t| {
            t.partitions(r.pairs())
                && t.groups.iter().all(|grp| {
                    check_parallel_pairable(gbar.graph(), grp).unwrap_or(false)
                        && extract_epr(&gbar, grp).is_ok_and(|x| x.is_clean() && x.graph.edge_count() == grp.len())
                })
                && min_partition_oracle(gbar.graph(), r.pairs()).is_ok_and(|m| m <= t.rho())
        });
        rep.record(ok, iq.data_count(), || {
            format!("{}# requests {:?}\n", crate::format::write_inter_qnet(&iq), r.pairs())
        });
    }
    rep
}

/// Timing draws on a quarter-unit grid so stage boundaries coincide often.
pub fn random_timing<R: Rng>(rng: &mut R) -> TimingParams {
    let mut q = |hi: u32| rng.gen_range(0..=hi * 4) as f64 / 4.0;
    loop {
        let lambda = q(40);
        let t = TimingParams::new(lambda, q(12), q(12), q(12), q(12));
        if let Ok(t) = t {
            return t;
        }
    }
}

pub fn timeline_suite(opts: &VerifyOptions) -> SuiteReport {
    let mut rep = SuiteReport::new("timeline");
    let mut rng = rng_for(opts.seed, 5);
    let mut a2 = Vec::new();
    for _ in 0..opts.cases {
        let t = random_timing(&mut rng);
        let in_a2 = t.lambda >= t.trm && t.lambda < t.tpm + t.trm;
        let mec_ok = in_a2 || mec_window(&t) == mec_cycles(&t);
        if in_a2 {
            a2.push(mec_long_run(&t, 2000) - mec_cycles(&t) as f64);
        }
        let ok = mec_ok && cqr_window(&t) == cqr_cycles(&t);
        rep.record(ok, 0, || format!("{t:?}\n"));
    }
    if !a2.is_empty() {
        let worst = a2.iter().fold(0.0f64, |m, d| m.max(d.abs()));
        let within = a2.iter().filter(|d| d.abs() <= 0.1).count();
        rep.note = Some(format!(
            "middle MEC regime: long-run cycles per window within 10% of one in {within}/{} draws, worst gap {worst:.3}",
            a2.len()
        ));
    }
    rep
}

pub fn run_all(opts: &VerifyOptions) -> Vec<SuiteReport> {
    vec![
        lemma1_suite(opts),
        tableau_suite(opts),
        pairable_suite(opts),
        grouping_suite(opts),
        timeline_suite(opts),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(rule: Rule) -> VerifyOptions {
        VerifyOptions {
            cases: 60,
            rule,
            ..Default::default()
        }
    }

    #[test]
    fn suites_pass_on_the_standard_rule() {
        for rep in run_all(&quick(Rule::Standard)) {
            assert!(rep.passed(), "{} failed: {:?}", rep.name, rep.counterexample);
        }
    }

    #[test]
    fn mutant_rule_is_caught_with_a_small_counterexample() {
        let rep = lemma1_suite(&quick(Rule::DropFinalLc));
        assert!(!rep.passed());
        let dump = rep.counterexample.unwrap();
        let n: usize = dump.lines().next().unwrap()[2..].parse().unwrap();
        assert!(n <= 12, "counterexample has {n} vertices");
    }

    #[test]
    fn oversized_oracle_request_is_skipped() {
        let rep = tableau_suite(&VerifyOptions {
            max_qubits: 40,
            ..quick(Rule::Standard)
        });
        assert!(rep.passed());
        assert!(rep.skipped.is_some());
    }
}
