use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn mecnet(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mecnet"))
        .args(args)
        .current_dir(cwd)
        .env_remove("MECNET_OUT")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

#[test]
fn generate_writes_reproducible_instances() {
    let d = tempfile::tempdir().unwrap();
    let args = ["generate", "--nodes", "20", "-k", "3", "-p", "0.4", "--reps", "3", "--seed", "9", "--out"];
    let a = d.path().join("a");
    let b = d.path().join("b");
    assert!(mecnet(&[&args[..], &[a.to_str().unwrap()]].concat(), d.path()).status.success());
    assert!(mecnet(&[&args[..], &[b.to_str().unwrap()]].concat(), d.path()).status.success());
    for f in ["instance_0000.txt", "instance_0002.txt", "meta.json"] {
        assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap(), "{f}");
    }
    let text = std::fs::read_to_string(a.join("instance_0001.txt")).unwrap();
    assert!(text.starts_with("n=20\n") && text.contains("qnet 2: "));
}

#[test]
fn output_dir_defaults_to_env() {
    let d = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_mecnet"))
        .args(["generate", "--nodes", "6", "-k", "2"])
        .current_dir(d.path())
        .env("MECNET_OUT", d.path().join("from-env"))
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(d.path().join("from-env/instance_0000.txt").exists());
}

#[test]
fn usage_errors_exit_with_one() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(mecnet(&["generate", "-p", "2.0"], d.path()).status.code(), Some(1));
    assert_eq!(mecnet(&["frobnicate"], d.path()).status.code(), Some(1));
    assert_eq!(mecnet(&["--help"], d.path()).status.code(), Some(0));
}

#[test]
fn io_errors_exit_with_three() {
    let d = tempfile::tempdir().unwrap();
    let o = mecnet(&["ingest", "--airports", "missing.dat", "--routes", "missing.dat"], d.path());
    assert_eq!(o.status.code(), Some(3));
    let o = mecnet(&["run", "nope.toml"], d.path());
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn ingest_fixture_with_eu_filter() {
    let d = tempfile::tempdir().unwrap();
    let f = fixtures();
    let out = d.path().join("eu.txt");
    let o = mecnet(
        &[
            "ingest",
            "--airports",
            f.join("airports.dat").to_str().unwrap(),
            "--routes",
            f.join("routes.dat").to_str().unwrap(),
            "--eu",
            "--out",
            out.to_str().unwrap(),
        ],
        d.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let inst = mecnet::format::parse_instance(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let iq = inst.inter_qnet().unwrap();
    assert!(iq.is_connected());
    let meta: serde_json::Value =
        serde_json::from_str(std::fs::read_to_string(d.path().join("eu.txt.meta.jsonl")).unwrap().trim()).unwrap();
    assert_eq!(meta["nodes"], iq.data_count());
    assert_eq!(meta["qnets"], iq.partition().k());
    assert_eq!(meta["routes_sha256"].as_str().unwrap().len(), 64);
    assert!(meta["countries"].as_array().unwrap().iter().all(|c| c != "United Kingdom"));
}

#[test]
fn run_then_report_regenerates_identical_charts() {
    let d = tempfile::tempdir().unwrap();
    let cfg = d.path().join("exp.toml");
    std::fs::write(
        &cfg,
        "request_volumes = [5, 10]\nrepetitions = 2\nseed = 3\n\
         [source]\nkind = \"synthetic\"\nnodes = 16\ndensities = [0.3]\nqnet_counts = [2, 4]\n\
         [timing]\nlambda = [2.0, 10.0]\n",
    )
    .unwrap();
    let out = d.path().join("res");
    let o = mecnet(&["run", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--jobs", "2"], d.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["hops.csv", "parallelism.csv", "arqf.csv", "throughput.csv", "meta.json", "hops.svg", "parallelism.svg", "arqf.svg"] {
        assert!(out.join(f).exists(), "{f} missing");
    }
    let svg = std::fs::read(out.join("arqf.svg")).unwrap();
    std::fs::remove_file(out.join("arqf.svg")).unwrap();
    assert!(mecnet(&["report", out.to_str().unwrap()], d.path()).status.success());
    assert_eq!(std::fs::read(out.join("arqf.svg")).unwrap(), svg);
    let meta: serde_json::Value = serde_json::from_slice(&std::fs::read(out.join("meta.json")).unwrap()).unwrap();
    assert_eq!(meta["schema_version"], 1);
    let hops = std::fs::read_to_string(out.join("hops.csv")).unwrap();
    assert!(hops.starts_with("source,p,k,requests,instances,mec_mean_hops,"));
}

#[test]
fn files_source_runs_saved_instances() {
    let d = tempfile::tempdir().unwrap();
    assert!(mecnet(&["generate", "--nodes", "12", "-k", "3", "-p", "0.3", "--controlled", "--out", "inst"], d.path()).status.success());
    std::fs::write(
        d.path().join("exp.toml"),
        "request_volumes = [4]\noutput_dir = \"res\"\nexperiments = [\"hops\"]\n\
         [source]\nkind = \"files\"\npaths = [\"inst/instance_0000.txt\"]\n",
    )
    .unwrap();
    let o = mecnet(&["run", "exp.toml"], d.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(d.path().join("res/hops.csv").exists());
    assert!(!d.path().join("res/arqf.csv").exists());
}

#[test]
fn verify_reports_and_fault_injection_fails() {
    let d = tempfile::tempdir().unwrap();
    let ok = mecnet(&["verify", "--cases", "100", "--out", "."], d.path());
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("PASS complementation"));
    let bad = mecnet(&["verify", "--cases", "100", "--inject-fault", "--out", "."], d.path());
    assert_eq!(bad.status.code(), Some(2));
    assert!(stdout(&bad).contains("FAIL complementation"));
    let dump = std::fs::read_to_string(d.path().join("counterexample_complementation.txt")).unwrap();
    let n: usize = dump.lines().next().unwrap()[2..].parse().unwrap();
    assert!(n <= 12);
    let skip = mecnet(&["verify", "--cases", "20", "--max-qubits", "40", "--out", "."], d.path());
    assert_eq!(skip.status.code(), Some(0));
    assert!(stdout(&skip).contains("SKIP tableau"));
}

#[test]
fn shipped_configs_parse() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs");
    for f in ["synthetic.toml", "openflights.toml"] {
        mecnet::experiment::ExperimentConfig::load(&dir.join(f)).unwrap();
    }
}

#[test]
fn openflights_config_runs_from_workspace_root() {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..");
    let d = tempfile::tempdir().unwrap();
    let cfg = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs/openflights.toml");
    let o = mecnet(&["run", cfg.to_str().unwrap(), "--reps", "2", "--out", d.path().to_str().unwrap()], &root);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(d.path().join("arqf.svg").exists());
    assert!(!d.path().join("throughput.csv").exists());
}
