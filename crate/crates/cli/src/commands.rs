//! `validate`, `centrality`, `gen-graph` and `sample-pop`.

use std::fmt::Write as _;
use std::fs;

use bbig_core::metrics::{
    minimal_cycle_map, time_centrality, write_metrics_csv, CentralityParams, CentralityResult, CentralityVariant,
};
use bbig_core::runner::cycle_one_outputs;
use bbig_core::seed::sub_seed;
use bbig_core::temporal_graph::store_graph;
use bbig_core::Natural;

use crate::config::ExperimentConfig;
use crate::graphs::{build_graph, graph_seed};
use crate::growth::{population, population_seed};
use crate::manifest::RunManifest;
use crate::validate::{run_suite, write_report, PropertyOutcome, REPORT_FILE};
use crate::CliError;

/// Runs the property suite and writes its report; the caller turns failed
/// properties into a nonzero exit.
pub fn cmd_validate(cfg: &ExperimentConfig) -> Result<Vec<PropertyOutcome>, CliError> {
    fs::create_dir_all(&cfg.out_dir)?;
    let outcomes = run_suite(cfg);
    write_report(&cfg.out_dir, &outcomes)?;
    let mut manifest = RunManifest::new("validate", cfg);
    manifest.seed("master", cfg.seed);
    manifest.output(REPORT_FILE);
    manifest.write(&cfg.out_dir)?;
    Ok(outcomes)
}

pub fn centrality_params(cfg: &ExperimentConfig, n: usize) -> CentralityParams {
    CentralityParams {
        tau: cfg.tau,
        w: Natural::from(cfg.w),
        budget: cfg.budget,
        binding_samples: cfg.binding_samples,
        omega_samples: cfg.omega_samples,
        epsilon: cfg.epsilon,
        c0: cfg.c0,
        ..CentralityParams::new(sub_seed(cfg.seed, &format!("centrality-{n}"), 0))
    }
}

/// Both variants for one population size, on the first graph of that size.
pub fn centrality_for(cfg: &ExperimentConfig, n: usize) -> Result<[CentralityResult; 2], CliError> {
    let g = build_graph(cfg, n, 0)?;
    let params = centrality_params(cfg, n);
    let run = |v| time_centrality(&g, &params, minimal_cycle_map(cfg.c0), v);
    Ok([run(CentralityVariant::Unlimited)?, run(CentralityVariant::Maximum)?])
}

fn t_cen(r: &CentralityResult) -> String {
    r.t_cen.map_or_else(|| "none".to_string(), |t| t.to_string())
}

/// Writes the per-instant table of the unlimited variant and a per-size
/// summary of both. Sizes without a qualifying instant only warn.
pub fn cmd_centrality(cfg: &ExperimentConfig) -> Result<Vec<[CentralityResult; 2]>, CliError> {
    fs::create_dir_all(&cfg.out_dir)?;
    let mut manifest = RunManifest::new("centrality", cfg);
    let mut table = Vec::new();
    let mut summary = String::from("N,t_cen_unlimited,t_cen_maximum,diagnostic\n");
    let mut results = Vec::new();
    for (k, &n) in cfg.n_grid.iter().enumerate() {
        let seed = centrality_params(cfg, n).seed;
        manifest.seed(format!("centrality-{n}"), seed);
        manifest.seed(format!("graph-{n}-0"), graph_seed(cfg, n, 0));
        let both = centrality_for(cfg, n)?;
        let [unlimited, maximum] = &both;
        write_metrics_csv(&mut table, &format!("centrality-{n}"), seed, unlimited, k == 0)?;
        let diagnostic = unlimited.diagnostic.clone().unwrap_or_default().replace(',', ";");
        let _ = writeln!(summary, "{n},{},{},{diagnostic}", t_cen(unlimited), t_cen(maximum));
        if unlimited.t_cen.is_none() {
            eprintln!("warning: no qualifying instant at N = {n}");
        }
        results.push(both);
    }
    fs::write(cfg.out_dir.join("centrality.csv"), table)?;
    fs::write(cfg.out_dir.join("centrality_summary.csv"), summary)?;
    manifest.output("centrality.csv");
    manifest.output("centrality_summary.csv");
    manifest.write(&cfg.out_dir)?;
    Ok(results)
}

/// Stores the first configured graph of every size as `graph_<N>.tvg`.
pub fn cmd_gen_graph(cfg: &ExperimentConfig) -> Result<(), CliError> {
    fs::create_dir_all(&cfg.out_dir)?;
    let mut manifest = RunManifest::new("gen-graph", cfg);
    for &n in &cfg.n_grid {
        let name = format!("graph_{n}.tvg");
        store_graph(&build_graph(cfg, n, 0)?, cfg.out_dir.join(&name))?;
        manifest.seed(format!("graph-{n}-0"), graph_seed(cfg, n, 0));
        manifest.output(name);
    }
    manifest.write(&cfg.out_dir)?;
    Ok(())
}

/// Writes the first population of every size with each program's cycle-1
/// output, `none` when it exceeds the budget.
pub fn cmd_sample_pop(cfg: &ExperimentConfig) -> Result<(), CliError> {
    fs::create_dir_all(&cfg.out_dir)?;
    let mut manifest = RunManifest::new("sample-pop", cfg);
    let w = Natural::from(cfg.w);
    for &n in &cfg.n_grid {
        let pop = population(cfg, n, 0)?;
        let outputs = cycle_one_outputs(&pop, &w, cfg.budget);
        let mut s = String::from("label,bits,program,cycle_one\n");
        for ((label, p), out) in pop.iter().zip(&outputs) {
            let bits: String = p.bits().iter().map(|&b| if b { '1' } else { '0' }).collect();
            let out = out.as_ref().map_or_else(|| "none".to_string(), Natural::to_string);
            let _ = writeln!(s, "{label},{},{bits},{out}", p.len());
        }
        let name = format!("population_{n}.csv");
        fs::write(cfg.out_dir.join(&name), s)?;
        manifest.seed(format!("population-{n}-0"), population_seed(cfg, n, 0));
        manifest.output(name);
    }
    manifest.write(&cfg.out_dir)?;
    Ok(())
}
