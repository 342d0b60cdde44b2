use std::fs;
use std::path::Path;
use std::process::Command;

use bbig_core::temporal_graph::{gen_static, store_graph};

fn bbig(dir: &Path, config: &str, args: &[&str]) -> (i32, String) {
    let cfg = dir.join("run.cfg");
    fs::write(&cfg, config).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_bbig"))
        .args(args)
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(dir.join("out"))
        .output()
        .unwrap();
    (out.status.code().unwrap(), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn read(dir: &Path, file: &str) -> String {
    fs::read_to_string(dir.join("out").join(file)).unwrap()
}

#[test]
fn validate_passes_and_writes_a_report() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _) = bbig(dir.path(), "n_grid = [3]\nvalidate_graphs = 50\nvalidate_runs = 50\n", &["validate"]);
    assert_eq!(code, 0);
    let report = read(dir.path(), "validate_report.csv");
    assert!(report.starts_with("property,cases,failures,status,detail\n"));
    assert!(report.lines().skip(1).all(|l| l.contains(",pass,")));
    assert!(report.contains("exhaustive_aeac"));
    assert!(read(dir.path(), "validate_manifest.txt").contains("config_sha256 = "));
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(bbig(dir.path(), "n_grid = [3\nbogus\n", &["validate"]).0, 2);
    assert_eq!(bbig(dir.path(), "colour = blue\n", &["growth"]).0, 2);
    assert_eq!(bbig(dir.path(), "n_grid = [64, 16]\n", &["growth"]).0, 2);
    assert_eq!(bbig(dir.path(), "", &["no-such-command"]).0, 2);
}

#[test]
fn single_size_growth_has_one_row_and_no_trend() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = "n_grid = [2]\ninstants = 8\nseeds = 3\nomega_samples = 100\ngraph = static_complete\n";
    let (code, stdout) = bbig(dir.path(), cfg, &["growth"]);
    assert_eq!(code, 0);
    assert_eq!(read(dir.path(), "growth.csv").lines().count(), 2);
    assert_eq!(read(dir.path(), "growth_runs.csv").lines().count(), 4);
    assert!(!stdout.contains("trend"));
    assert!(!dir.path().join("out/growth_trend.txt").exists());
    assert!(read(dir.path(), "growth.svg").starts_with("<svg"));
}

#[test]
fn centrality_follows_the_gate() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = "n_grid = [4]\ninstants = 8\ngraph = gated_complete(3)\nomega_samples = 200\n";
    assert_eq!(bbig(dir.path(), cfg, &["centrality"]).0, 0);
    assert_eq!(read(dir.path(), "centrality_summary.csv").lines().nth(1).unwrap(), "4,3,3,");
    let table = read(dir.path(), "centrality.csv");
    assert_eq!(table.lines().count(), 1 + 8);
    assert!(table.lines().skip(1).all(|l| l.ends_with(",3")));
}

#[test]
fn edgeless_graph_has_no_centre_but_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let g = gen_static(3, &[], false, 4).unwrap();
    let path = dir.path().join("edgeless.tvg");
    store_graph(&g, &path).unwrap();
    let cfg = format!("n_grid = [3]\ngraph = file({})\nomega_samples = 100\n", path.display());
    assert_eq!(bbig(dir.path(), &cfg, &["centrality"]).0, 0);
    assert!(read(dir.path(), "centrality_summary.csv").lines().nth(1).unwrap().starts_with("3,none,none,"));
}

#[test]
fn generators_write_graphs_and_populations() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = "n_grid = [4, 8]\ninstants = 5\n";
    assert_eq!(bbig(dir.path(), cfg, &["gen-graph"]).0, 0);
    assert_eq!(bbig(dir.path(), cfg, &["sample-pop"]).0, 0);
    let g = bbig_core::temporal_graph::load_graph(dir.path().join("out/graph_8.tvg")).unwrap();
    assert_eq!((g.vertex_count(), g.instant_count()), (8, 5));
    assert_eq!(read(dir.path(), "population_4.csv").lines().count(), 5);
}
