use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mecnet::experiment::{generate_instances, ExperimentConfig};
use mecnet::format::write_inter_qnet;
use mecnet::openflights::{build_real_instance, parse_openflights, IngestMetadata, EU_COUNTRIES};
use mecnet::verify::{run_all, Rule, VerifyOptions};
use mecnet::error::write;
use mecnet::{Error, Result};
use mecnet_core::netgen::GenConfig;

/// Multipartite entanglement complementation versus conventional routing.
#[derive(Parser, Debug)]
#[command(name = "mecnet", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write random inter-QNet instances.
    Generate(GenerateArgs),
    /// Build an instance from OpenFlights airports.dat and routes.dat.
    Ingest(IngestArgs),
    /// Run an experiment sweep described by a TOML file.
    Run(RunArgs),
    /// Run the oracle suites.
    Verify(VerifyArgs),
    /// Regenerate the charts from the CSV tables in a directory.
    Report(ReportArgs),
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[arg(long, default_value_t = 50)]
    nodes: usize,
    /// Number of QNets.
    #[arg(long, short = 'k', default_value_t = 4)]
    qnets: usize,
    /// Cross-QNet edge probability.
    #[arg(long, short = 'p', default_value_t = 0.8)]
    p: f64,
    #[arg(long, default_value_t = 1)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also sample this many requests per instance.
    #[arg(long)]
    requests: Option<usize>,
    /// Write the controlled form with its control layer.
    #[arg(long)]
    controlled: bool,
    #[arg(long, env = "MECNET_OUT", default_value = "mecnet-out")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct IngestArgs {
    #[arg(long)]
    airports: PathBuf,
    #[arg(long)]
    routes: PathBuf,
    /// Keep only routes between EU member states.
    #[arg(long)]
    eu: bool,
    /// Keep only routes between these countries (comma separated).
    #[arg(long, value_delimiter = ',')]
    countries: Option<Vec<String>>,
    /// Sample this many routes uniformly before taking the largest component.
    #[arg(long)]
    subsample: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Instance file; metadata goes next to it with a `.meta.jsonl` suffix.
    #[arg(long, env = "MECNET_OUT", default_value = "mecnet-out")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct RunArgs {
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, default_value_t = 1000)]
    cases: usize,
    #[arg(long, default_value_t = 0x5eed)]
    seed: u64,
    /// Largest state handed to the tableau oracle.
    #[arg(long, default_value_t = 12)]
    max_qubits: usize,
    /// Replace the X-measurement rule with a known-bad variant.
    #[arg(long)]
    inject_fault: bool,
    /// Directory for counterexample dumps.
    #[arg(long, env = "MECNET_OUT", default_value = "mecnet-out")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct ReportArgs {
    #[arg(env = "MECNET_OUT", default_value = "mecnet-out")]
    dir: PathBuf,
}

fn generate(a: GenerateArgs) -> Result<()> {
    let cfg = GenConfig::balanced(a.nodes, a.qnets, a.p, a.seed);
    let files = generate_instances(&cfg, a.reps, a.requests, a.controlled, &a.out)?;
    println!("wrote {} files to {}", files.len(), a.out.display());
    Ok(())
}

fn ingest(a: IngestArgs) -> Result<()> {
    let ds = parse_openflights(&a.airports, &a.routes)?;
    let mut filter: Option<BTreeSet<String>> = a.countries.map(|c| c.into_iter().collect());
    if a.eu {
        let eu = EU_COUNTRIES.iter().map(|s| s.to_string());
        filter = Some(match filter {
            Some(f) => eu.filter(|c| f.contains(c)).collect(),
            None => eu.collect(),
        });
    }
    let subsample = a.subsample.map(|n| (n, a.seed));
    let inst = build_real_instance(&ds.records, filter.as_ref(), subsample)?;
    let r = &ds.report;
    let meta = IngestMetadata {
        kind: "openflights",
        airports_sha256: &r.airports_sha256,
        routes_sha256: &r.routes_sha256,
        filter: filter.map(|f| f.into_iter().collect()),
        subsample,
        nodes: inst.iq.data_count(),
        edges: inst.iq.graph().edge_count(),
        qnets: inst.iq.partition().k(),
        countries: &inst.countries,
        edges_available: inst.edges_available,
        dropped_vertices: inst.dropped_vertices,
        report: r,
    };
    let path = if a.out.extension().is_some() {
        a.out.clone()
    } else {
        a.out.join("openflights.txt")
    };
    write(&path, write_inter_qnet(&inst.iq))?;
    let mut side = path.clone().into_os_string();
    side.push(".meta.jsonl");
    write(std::path::Path::new(&side), serde_json::to_string(&meta)? + "\n")?;
    println!(
        "routes parsed {} (malformed {}, join failures {}, domestic {}), cities {}, city pairs {}",
        r.routes, r.routes_malformed, r.join_failures, r.domestic, r.route_cities, r.route_city_pairs
    );
    println!(
        "instance: {} nodes, {} edges, {} QNets, {} vertices outside the largest component -> {}",
        meta.nodes,
        meta.edges,
        meta.qnets,
        meta.dropped_vertices,
        path.display()
    );
    Ok(())
}

fn run(a: RunArgs) -> Result<()> {
    let mut cfg = ExperimentConfig::load(&a.config)?;
    if let Some(out) = a.out {
        cfg.output_dir = out;
    }
    if let Some(j) = a.jobs {
        cfg.jobs = j;
    }
    if let Some(r) = a.reps {
        cfg.repetitions = r;
    }
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    cfg.validate()?;
    let summary = mecnet::experiment::run(&cfg)?;
    for f in &summary.files {
        println!("{}", f.display());
    }
    Ok(())
}

fn verify(a: VerifyArgs) -> Result<()> {
    let opts = VerifyOptions {
        cases: a.cases,
        seed: a.seed,
        rule: if a.inject_fault { Rule::DropFinalLc } else { Rule::Standard },
        max_qubits: a.max_qubits,
    };
    let mut failed = Vec::new();
    for rep in run_all(&opts) {
        match (&rep.skipped, rep.passed()) {
            (Some(why), _) => println!("SKIP {}: {why}", rep.name),
            (None, true) => println!("PASS {} ({} cases)", rep.name, rep.cases),
            (None, false) => println!("FAIL {} ({}/{} cases failed)", rep.name, rep.failures, rep.cases),
        }
        if let Some(note) = &rep.note {
            println!("     {note}");
        }
        if let Some(dump) = &rep.counterexample {
            let path = a.out.join(format!("counterexample_{}.txt", rep.name));
            write(&path, dump)?;
            println!("     smallest counterexample: {}", path.display());
        }
        if !rep.passed() {
            failed.push(rep.name);
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Error::Verification(format!("suites failed: {}", failed.join(", "))))
    }
}

fn report(a: ReportArgs) -> Result<()> {
    let files = mecnet::svg::render_dir(&a.dir)?;
    if files.is_empty() {
        return Err(Error::Empty(format!("no result tables in {}", a.dir.display())));
    }
    for f in files {
        println!("{}", f.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let res = match cli.cmd {
        Command::Generate(a) => generate(a),
        Command::Ingest(a) => ingest(a),
        Command::Run(a) => run(a),
        Command::Verify(a) => verify(a),
        Command::Report(a) => report(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
