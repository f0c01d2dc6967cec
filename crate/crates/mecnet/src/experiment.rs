//! Declarative experiment sweeps: instance sources, per-instance pipeline,
//! aggregation and the CSV/JSON outputs.
//!
//! ```toml
//! request_volumes = [50, 100, 150, 200]
//! repetitions = 100
//! seed = 7
//!
//! [source]
//! kind = "synthetic"
//! nodes = 50
//! densities = [0.2, 0.8]
//! qnet_counts = [4, 6, 8, 10]
//!
//! [timing]
//! lambda = [2.0, 4.0, 8.0, 16.0]
//! ```

use std::collections::{BTreeSet, HashMap};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use log::{info, warn};
use mecnet_core::cqr::cqr_batch;
use mecnet_core::metrics::{arqf_cqr, arqf_mec, mean_std, throughput_cqr, throughput_mec, Mode, TimingParams};
use mecnet_core::netgen::{generate_with, rng_for, sample_requests_with, GenConfig};
use mecnet_core::pairs::{check_parallel_pairable, partition_requests, RequestSet, SeedPolicy};
use mecnet_core::qnet::{build_controlled, extract_epr, mec_complementation};
use mecnet_core::{InterQNet, K0Policy};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{read, write};
use crate::format::{parse_instance, write_controlled, write_csv, write_inter_qnet, ThroughputRow};
use crate::openflights::{build_real_instance, parse_openflights, EU_COUNTRIES};
use crate::verify::complement_edges;
use crate::{Error, Result};

/// Bumped whenever a column is added, removed or renamed.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Source {
    Synthetic {
        nodes: usize,
        densities: Vec<f64>,
        qnet_counts: Vec<usize>,
    },
    Openflights {
        airports: PathBuf,
        routes: PathBuf,
        /// Restrict to the 27 EU member states.
        #[serde(default)]
        eu: bool,
        #[serde(default)]
        countries: Option<Vec<String>>,
        /// Edges sampled per repetition; the whole graph when absent.
        #[serde(default)]
        subsample: Option<usize>,
    },
    Files {
        paths: Vec<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolicyName {
    #[default]
    GreedyMax,
    LowestId,
}

impl From<PolicyName> for SeedPolicy {
    fn from(p: PolicyName) -> Self {
        match p {
            PolicyName::GreedyMax => SeedPolicy::GreedyMax,
            PolicyName::LowestId => SeedPolicy::LowestId,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Table {
    Hops,
    Parallelism,
    Arqf,
    Throughput,
}

/// Cartesian grid of timing points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimingGrid {
    pub lambda: Vec<f64>,
    #[serde(default = "TimingGrid::default_tpm")]
    pub tpm: Vec<f64>,
    #[serde(default = "TimingGrid::default_trm")]
    pub trm: Vec<f64>,
    #[serde(default = "TimingGrid::default_tpb")]
    pub tpb: Vec<f64>,
    #[serde(default = "TimingGrid::default_trb")]
    pub trb: Vec<f64>,
}

impl TimingGrid {
    fn default_tpm() -> Vec<f64> {
        vec![3.0]
    }
    fn default_trm() -> Vec<f64> {
        vec![1.0]
    }
    fn default_tpb() -> Vec<f64> {
        vec![4.0]
    }
    fn default_trb() -> Vec<f64> {
        vec![1.0]
    }

    pub fn points(&self) -> Result<Vec<TimingParams>> {
        let mut out = Vec::new();
        for &lambda in &self.lambda {
            for &tpm in &self.tpm {
                for &trm in &self.trm {
                    for &tpb in &self.tpb {
                        for &trb in &self.trb {
                            out.push(TimingParams::new(lambda, tpm, trm, tpb, trb)?);
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

impl Default for TimingGrid {
    fn default() -> Self {
        TimingGrid {
            lambda: (1..=20).map(f64::from).collect(),
            tpm: Self::default_tpm(),
            trm: Self::default_trm(),
            tpb: Self::default_tpb(),
            trb: Self::default_trb(),
        }
    }
}

fn one() -> usize {
    1
}

/// `MECNET_OUT` when set, else `mecnet-out`.
pub fn default_output() -> PathBuf {
    std::env::var_os("MECNET_OUT").map_or_else(|| PathBuf::from("mecnet-out"), PathBuf::from)
}

fn all_tables() -> Vec<Table> {
    vec![Table::Hops, Table::Parallelism, Table::Arqf, Table::Throughput]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub source: Source,
    pub request_volumes: Vec<usize>,
    #[serde(default = "one")]
    pub repetitions: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub seed_policy: PolicyName,
    #[serde(default)]
    pub timing: TimingGrid,
    #[serde(default = "default_output")]
    pub output_dir: PathBuf,
    /// Worker threads; 0 picks one per core.
    #[serde(default)]
    pub jobs: usize,
    #[serde(default = "all_tables")]
    pub experiments: Vec<Table>,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&read(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.into()));
        if self.repetitions == 0 {
            return bad("repetitions must be at least 1");
        }
        if self.experiments.is_empty() {
            return bad("no experiment selected");
        }
        if self.request_volumes.is_empty() {
            return bad("request_volumes is empty");
        }
        if let Source::Synthetic { nodes, densities, qnet_counts } = &self.source {
            if densities.is_empty() || qnet_counts.is_empty() {
                return bad("synthetic source needs densities and qnet_counts");
            }
            for &k in qnet_counts {
                GenConfig::balanced(*nodes, k, 0.5, 0).validate()?;
            }
            for &p in densities {
                GenConfig::balanced(*nodes, 2.min(*nodes), p, 0).validate()?;
            }
        }
        if let Source::Files { paths } = &self.source {
            if paths.is_empty() {
                return bad("files source lists no paths");
            }
        }
        self.timing.points()?;
        Ok(())
    }
}

/// Pipeline results for one instance and one request volume.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceOutcome {
    pub source: String,
    pub p: Option<f64>,
    pub k: usize,
    pub nodes: usize,
    pub edges: usize,
    pub instance: usize,
    pub requested: usize,
    pub requests: usize,
    pub mec_total_hops: usize,
    pub mec_mean_hops: Option<f64>,
    pub cqr_total_hops: usize,
    pub cqr_mean_hops: Option<f64>,
    pub chi: usize,
    pub rho: usize,
    pub r_bar: Option<f64>,
    pub q_cqr: u64,
    pub q_mec_pro: u64,
    pub q_mec_ond: u64,
    pub arqf_identities: bool,
    pub dp_valid: bool,
}

/// Runs MEC, the grouping, EPR extraction and CQR on one request set.
///
/// A complementation that disagrees with the membership-derived complement
/// is a hard error carrying the controlled instance.
pub fn evaluate(iq: &InterQNet, r: &RequestSet, policy: SeedPolicy) -> Result<InstanceOutcome> {
    let cg = build_controlled(iq);
    let (mec, _) = mec_complementation(&cg, K0Policy::default())?;
    if mec.graph().edges() != complement_edges(iq) {
        return Err(Error::Verification(format!(
            "complementation mismatch on instance:\n{}",
            write_controlled(&cg)
        )));
    }
    let gbar = mec.graph();
    let pairs = r.pairs();

    let mut mec_hops = 0;
    for e in pairs {
        let d = gbar.bfs_distances(e.0)[e.1].ok_or(mecnet_core::Error::Disconnected)?;
        mec_hops += d;
    }
    let table = partition_requests(gbar, pairs, policy)?;
    let mut dp_valid = table.partitions(pairs);
    for g in &table.groups {
        dp_valid &= check_parallel_pairable(gbar, g)?;
        let x = extract_epr(&mec, g)?;
        dp_valid &= x.is_clean() && x.graph.edge_count() == g.len() && x.graph.live_count() == 2 * g.len();
    }

    let batch = cqr_batch(&cg, pairs)?;
    let cqr_hops: usize = batch.paths.iter().map(|p| p.hops).sum();
    let n = iq.data_count();
    let kp = iq.partition().k_prime() as u64;
    let sizes = iq.partition().sizes();
    let (rs, rho) = (pairs.len() as u64, table.rho() as u64);
    let q_cqr = arqf_cqr(rs, batch.chi as u64);
    let q_mec_pro = arqf_mec(rho, kp, &sizes, rs, Mode::Proactive);
    let q_mec_ond = arqf_mec(rho, kp, &sizes, rs, Mode::OnDemand);
    // recount each footprint from its parts
    let load: usize = batch.load.iter().sum();
    let pro: u64 = table.groups.iter().map(|_| kp + n as u64).sum();
    let ond: u64 = table.groups.iter().map(|g| 2 * g.len() as u64 + kp).sum();
    let arqf_identities = load as u64 == q_cqr && pro == q_mec_pro && ond == q_mec_ond;

    let mean = |t: usize| (!pairs.is_empty()).then(|| t as f64 / pairs.len() as f64);
    Ok(InstanceOutcome {
        source: String::new(),
        p: None,
        k: iq.partition().k(),
        nodes: n,
        edges: iq.graph().edge_count(),
        instance: 0,
        requested: pairs.len(),
        requests: pairs.len(),
        mec_total_hops: mec_hops,
        mec_mean_hops: mean(mec_hops),
        cqr_total_hops: cqr_hops,
        cqr_mean_hops: mean(cqr_hops),
        chi: batch.chi,
        rho: table.rho(),
        r_bar: table.r_bar(),
        q_cqr,
        q_mec_pro,
        q_mec_ond,
        arqf_identities,
        dp_valid,
    })
}

enum InstanceSpec {
    Generated(GenConfig),
    Fixed(Arc<InterQNet>),
    Sampled { records: Arc<Vec<crate::openflights::FlightRecord>>, filter: Option<BTreeSet<String>>, edges: usize },
}

struct Task {
    index: usize,
    source: &'static str,
    p: Option<f64>,
    spec: InstanceSpec,
}

fn tasks(cfg: &ExperimentConfig) -> Result<Vec<Task>> {
    let mut out = Vec::new();
    let mut push = |source, p, spec| {
        let index = out.len();
        out.push(Task { index, source, p, spec });
    };
    match &cfg.source {
        Source::Synthetic { nodes, densities, qnet_counts } => {
            for &p in densities {
                for &k in qnet_counts {
                    for _ in 0..cfg.repetitions {
                        push("synthetic", Some(p), InstanceSpec::Generated(GenConfig::balanced(*nodes, k, p, cfg.seed)));
                    }
                }
            }
        }
        Source::Openflights { airports, routes, eu, countries, subsample } => {
            let ds = parse_openflights(airports, routes)?;
            let mut filter: Option<BTreeSet<String>> = countries.as_ref().map(|c| c.iter().cloned().collect());
            if *eu {
                let set = EU_COUNTRIES.iter().map(|s| s.to_string());
                filter = Some(match filter {
                    Some(f) => set.filter(|c| f.contains(c)).collect(),
                    None => set.collect(),
                });
            }
            let records = Arc::new(ds.records);
            for _ in 0..cfg.repetitions {
                let spec = match subsample {
                    Some(edges) => InstanceSpec::Sampled {
                        records: records.clone(),
                        filter: filter.clone(),
                        edges: *edges,
                    },
                    None => InstanceSpec::Fixed(Arc::new(build_real_instance(&records, filter.as_ref(), None)?.iq)),
                };
                push("openflights", None, spec);
            }
        }
        Source::Files { paths } => {
            for path in paths {
                let iq = Arc::new(parse_instance(&read(path)?)?.inter_qnet()?);
                for _ in 0..cfg.repetitions {
                    push("file", None, InstanceSpec::Fixed(iq.clone()));
                }
            }
        }
    }
    Ok(out)
}

fn run_task(task: &Task, cfg: &ExperimentConfig) -> Result<Vec<InstanceOutcome>> {
    let mut rng = rng_for(cfg.seed, task.index as u64);
    let iq = match &task.spec {
        InstanceSpec::Generated(g) => Arc::new(generate_with(g, &mut rng)?),
        InstanceSpec::Fixed(iq) => iq.clone(),
        InstanceSpec::Sampled { records, filter, edges } => {
            let seed = rng.gen();
            Arc::new(build_real_instance(records, filter.as_ref(), Some((*edges, seed)))?.iq)
        }
    };
    let available = iq.non_adjacent_cross_pairs().len();
    let mut out = Vec::with_capacity(cfg.request_volumes.len());
    for &volume in &cfg.request_volumes {
        let count = volume.min(available);
        let r = sample_requests_with(&iq, count, &mut rng)?;
        let mut o = evaluate(&iq, &r, cfg.seed_policy.into()).map_err(|e| match e {
            Error::Verification(msg) => Error::Verification(format!("instance {}: {msg}", task.index)),
            e => e,
        })?;
        o.source = task.source.into();
        o.p = task.p;
        o.instance = task.index;
        o.requested = volume;
        out.push(o);
    }
    Ok(out)
}

/// Runs every task on a pool of `cfg.jobs` workers; results keep task order.
pub fn run_instances(cfg: &ExperimentConfig) -> Result<Vec<InstanceOutcome>> {
    cfg.validate()?;
    let tasks = tasks(cfg)?;
    info!("{} instances, {} request volumes each", tasks.len(), cfg.request_volumes.len());
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;
    let results: Vec<Result<Vec<InstanceOutcome>>> = pool.install(|| tasks.par_iter().map(|t| run_task(t, cfg)).collect());
    let mut out = Vec::new();
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HopsRow {
    pub source: String,
    pub p: Option<f64>,
    pub k: usize,
    pub requests: usize,
    pub instances: usize,
    pub mec_mean_hops: f64,
    pub mec_mean_hops_std: f64,
    pub cqr_mean_hops: f64,
    pub cqr_mean_hops_std: f64,
    pub mec_total_hops: f64,
    pub cqr_total_hops: f64,
    pub hop_reduction: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParallelismRow {
    pub source: String,
    pub p: Option<f64>,
    pub k: usize,
    pub requests: usize,
    pub instances: usize,
    pub r_bar: f64,
    pub r_bar_std: f64,
    pub rho: f64,
    pub rho_std: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArqfRow {
    pub source: String,
    pub p: Option<f64>,
    pub k: usize,
    pub requests: usize,
    pub instances: usize,
    pub q_cqr: f64,
    pub q_cqr_std: f64,
    pub q_mec_pro: f64,
    pub q_mec_pro_std: f64,
    pub q_mec_ond: f64,
    pub q_mec_ond_std: f64,
    /// Fraction of instances where on-demand MEC needs no more than CQR.
    pub ond_le_cqr: f64,
}

#[derive(Clone, Debug, Default)]
pub struct Tables {
    pub hops: Vec<HopsRow>,
    pub parallelism: Vec<ParallelismRow>,
    pub arqf: Vec<ArqfRow>,
    pub throughput: Vec<ThroughputRow>,
}

fn ms(xs: impl IntoIterator<Item = f64>) -> (f64, f64) {
    let v: Vec<f64> = xs.into_iter().collect();
    mean_std(&v).unwrap_or((f64::NAN, f64::NAN))
}

/// Groups by (source, p, k, requested volume) in first-seen order.
pub fn aggregate(outcomes: &[InstanceOutcome], timing: &[TimingParams]) -> Tables {
    type Key = (String, Option<u64>, usize, usize);
    let mut keys: Vec<Key> = Vec::new();
    let mut members: Vec<Vec<&InstanceOutcome>> = Vec::new();
    let mut index: HashMap<Key, usize> = HashMap::new();
    for o in outcomes {
        let key = (o.source.clone(), o.p.map(f64::to_bits), o.k, o.requested);
        let i = *index.entry(key.clone()).or_insert_with(|| {
            keys.push(key);
            members.push(Vec::new());
            members.len() - 1
        });
        members[i].push(o);
    }
    let mut t = Tables::default();
    for (key, os) in keys.iter().zip(&members) {
        let (source, p, k, requests) = (key.0.clone(), key.1.map(f64::from_bits), key.2, key.3);
        let instances = os.len();
        let (mec, mec_sd) = ms(os.iter().filter_map(|o| o.mec_mean_hops));
        let (cqr, cqr_sd) = ms(os.iter().filter_map(|o| o.cqr_mean_hops));
        t.hops.push(HopsRow {
            source: source.clone(),
            p,
            k,
            requests,
            instances,
            mec_mean_hops: mec,
            mec_mean_hops_std: mec_sd,
            cqr_mean_hops: cqr,
            cqr_mean_hops_std: cqr_sd,
            mec_total_hops: ms(os.iter().map(|o| o.mec_total_hops as f64)).0,
            cqr_total_hops: ms(os.iter().map(|o| o.cqr_total_hops as f64)).0,
            hop_reduction: 1.0 - mec / cqr,
        });
        let (r_bar, r_bar_std) = ms(os.iter().filter_map(|o| o.r_bar));
        let (rho, rho_std) = ms(os.iter().map(|o| o.rho as f64));
        t.parallelism.push(ParallelismRow {
            source: source.clone(),
            p,
            k,
            requests,
            instances,
            r_bar,
            r_bar_std,
            rho,
            rho_std,
        });
        let (q_cqr, q_cqr_std) = ms(os.iter().map(|o| o.q_cqr as f64));
        let (q_mec_pro, q_mec_pro_std) = ms(os.iter().map(|o| o.q_mec_pro as f64));
        let (q_mec_ond, q_mec_ond_std) = ms(os.iter().map(|o| o.q_mec_ond as f64));
        t.arqf.push(ArqfRow {
            source,
            p,
            k,
            requests,
            instances,
            q_cqr,
            q_cqr_std,
            q_mec_pro,
            q_mec_pro_std,
            q_mec_ond,
            q_mec_ond_std,
            ond_le_cqr: os.iter().filter(|o| o.q_mec_ond <= o.q_cqr).count() as f64 / instances as f64,
        });
        if r_bar.is_finite() {
            for tp in timing {
                t.throughput.push(ThroughputRow {
                    lambda: tp.lambda,
                    tpm: tp.tpm,
                    trm: tp.trm,
                    tpb: tp.tpb,
                    trb: tp.trb,
                    r_bar,
                    fm: throughput_mec(tp, r_bar),
                    fb: throughput_cqr(tp),
                });
            }
        }
    }
    t
}

#[derive(Serialize)]
struct Meta<'a> {
    schema_version: u32,
    tool_version: &'static str,
    tables: Vec<&'static str>,
    instances: usize,
    outcomes: usize,
    verification_failures: usize,
    config: &'a ExperimentConfig,
}

#[derive(Clone, Debug)]
pub struct RunSummary {
    pub outcomes: Vec<InstanceOutcome>,
    pub tables: Tables,
    pub files: Vec<PathBuf>,
}

fn emit<T: Serialize>(dir: &Path, name: &str, rows: &[T], files: &mut Vec<PathBuf>) -> Result<()> {
    let mut buf = Vec::new();
    write_csv(&mut buf, rows)?;
    let path = dir.join(name);
    write(&path, buf)?;
    files.push(path);
    Ok(())
}

/// Full sweep: instances, tables, `meta.json` and the charts.
pub fn run(cfg: &ExperimentConfig) -> Result<RunSummary> {
    let outcomes = run_instances(cfg)?;
    let timing = cfg.timing.points()?;
    let tables = aggregate(&outcomes, &timing);
    let dir = &cfg.output_dir;
    let mut files = Vec::new();
    emit(dir, "instances.csv", &outcomes, &mut files)?;
    let sel: BTreeSet<Table> = cfg.experiments.iter().copied().collect();
    let mut names = vec!["instances.csv"];
    if sel.contains(&Table::Hops) {
        emit(dir, "hops.csv", &tables.hops, &mut files)?;
        names.push("hops.csv");
    }
    if sel.contains(&Table::Parallelism) {
        emit(dir, "parallelism.csv", &tables.parallelism, &mut files)?;
        names.push("parallelism.csv");
    }
    if sel.contains(&Table::Arqf) {
        emit(dir, "arqf.csv", &tables.arqf, &mut files)?;
        names.push("arqf.csv");
    }
    if sel.contains(&Table::Throughput) {
        emit(dir, "throughput.csv", &tables.throughput, &mut files)?;
        names.push("throughput.csv");
    }
    let failures = outcomes.iter().filter(|o| !o.dp_valid || !o.arqf_identities).count();
    if failures > 0 {
        warn!("{failures} outcomes failed the grouping or footprint checks");
    }
    let meta = Meta {
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION"),
        tables: names,
        instances: outcomes.iter().map(|o| o.instance).collect::<BTreeSet<_>>().len(),
        outcomes: outcomes.len(),
        verification_failures: failures,
        config: cfg,
    };
    let path = dir.join("meta.json");
    write(&path, serde_json::to_string_pretty(&meta)? + "\n")?;
    files.push(path);
    files.extend(crate::svg::render_dir(dir)?);
    if failures > 0 {
        return Err(Error::Verification(format!("{failures} outcomes failed the grouping or footprint checks")));
    }
    Ok(RunSummary { outcomes, tables, files })
}

/// Writes `reps` synthetic instances (and optional request files) to `dir`.
pub fn generate_instances(
    cfg: &GenConfig,
    reps: usize,
    requests: Option<usize>,
    controlled: bool,
    dir: &Path,
) -> Result<Vec<PathBuf>> {
    cfg.validate()?;
    let width = reps.saturating_sub(1).to_string().len().max(4);
    let mut files = Vec::new();
    for i in 0..reps {
        let mut rng = rng_for(cfg.seed, i as u64);
        let iq = generate_with(cfg, &mut rng)?;
        let text = if controlled {
            write_controlled(&build_controlled(&iq))
        } else {
            write_inter_qnet(&iq)
        };
        let path = dir.join(format!("instance_{i:0width$}.txt"));
        write(&path, text)?;
        files.push(path);
        if let Some(count) = requests {
            let r = sample_requests_with(&iq, count, &mut rng)?;
            let path = dir.join(format!("requests_{i:0width$}.txt"));
            write(&path, crate::format::write_requests(r.pairs()))?;
            files.push(path);
        }
    }
    let meta = serde_json::json!({
        "schema_version": SCHEMA_VERSION,
        "sizes": cfg.sizes,
        "p": cfg.p,
        "seed": cfg.seed,
        "instances": reps,
        "requests": requests,
        "controlled": controlled,
    });
    let path = dir.join("meta.json");
    write(&path, serde_json::to_string_pretty(&meta)? + "\n")?;
    files.push(path);
    Ok(files)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(dir: &Path) -> ExperimentConfig {
        ExperimentConfig::from_toml(&format!(
            "request_volumes = [4, 500]\nrepetitions = 3\nseed = 5\njobs = 2\noutput_dir = {:?}\n\
             [source]\nkind = \"synthetic\"\nnodes = 12\ndensities = [0.2, 0.8]\nqnet_counts = [3]\n\
             [timing]\nlambda = [1.0, 5.0]\n",
            dir.display().to_string()
        ))
        .unwrap()
    }

    #[test]
    fn config_validation() {
        let base = "request_volumes = [1]\n[source]\nkind = \"synthetic\"\nnodes = 10\ndensities = [0.5]\nqnet_counts = [2]\n";
        assert!(ExperimentConfig::from_toml(base).is_ok());
        assert!(ExperimentConfig::from_toml(&format!("repetitions = 0\n{base}")).is_err());
        assert!(ExperimentConfig::from_toml(&format!("experiments = []\n{base}")).is_err());
        assert!(ExperimentConfig::from_toml(&base.replace("0.5", "1.5")).is_err());
        assert!(ExperimentConfig::from_toml(&base.replace("[2]", "[1]")).is_err());
        assert!(ExperimentConfig::from_toml(&format!("bogus = 1\n{base}")).is_err());
    }

    #[test]
    fn sweep_is_reproducible_and_consistent() {
        let d1 = tempfile::tempdir().unwrap();
        let d2 = tempfile::tempdir().unwrap();
        let a = run(&small(d1.path())).unwrap();
        let mut c2 = small(d2.path());
        c2.jobs = 1;
        let b = run(&c2).unwrap();
        assert_eq!(a.outcomes, b.outcomes);
        for name in ["hops.csv", "parallelism.csv", "arqf.csv", "throughput.csv", "instances.csv"] {
            assert_eq!(
                std::fs::read(d1.path().join(name)).unwrap(),
                std::fs::read(d2.path().join(name)).unwrap(),
                "{name}"
            );
        }
        assert_eq!(a.outcomes.len(), 2 * 3 * 2);
        for o in &a.outcomes {
            assert!(o.dp_valid && o.arqf_identities);
            assert!(o.requests <= o.requested);
            assert_eq!(o.mec_mean_hops, (o.requests > 0).then_some(1.0));
        }
        let head = std::fs::read_to_string(d1.path().join("throughput.csv")).unwrap();
        assert!(head.starts_with("lambda,tpm,trm,tpb,trb,r_bar,fm,fb\n"));
        assert_eq!(a.tables.throughput.len(), a.tables.hops.len() * 2);
    }

    #[test]
    fn generate_writes_numbered_instances() {
        let d = tempfile::tempdir().unwrap();
        let files = generate_instances(&GenConfig::balanced(10, 2, 0.3, 1), 2, Some(3), true, d.path()).unwrap();
        assert_eq!(files.len(), 5);
        let text = std::fs::read_to_string(d.path().join("instance_0001.txt")).unwrap();
        assert!(matches!(parse_instance(&text).unwrap(), crate::format::Instance::Controlled(_)));
        let reqs = crate::format::parse_requests(&std::fs::read_to_string(d.path().join("requests_0000.txt")).unwrap()).unwrap();
        assert_eq!(reqs.len(), 3);
    }
}
