//! Growth experiment: how emergent complexity and its lower-bound leading
//! term evolve with the population size.

use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{self, BufWriter};

use bbig_core::machine::{sample_program, Estimator, Program};
use bbig_core::metrics::{
    amax_estimate, lower_bound_eval, tau_expected, AmaxEstimate, HaltingProfile, LowerBoundParams,
};
use bbig_core::runner::{
    eac_estimates, eeac_estimate, run_isolated, run_networked_with, write_final_csv, write_trace_csv, Binding, EeacEstimate,
    Population, RunOptions,
};
use bbig_core::seed::{rng_from_seed, sub_rng, sub_seed};
use bbig_core::temporal_graph::temporal_diameter;
use bbig_core::{Extended, Fraction, Natural};
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::config::ExperimentConfig;
use crate::graphs::{build_graph, graph_seed};
use crate::manifest::RunManifest;
use crate::stats::{is_nondecreasing, mean, median, spearman};
use crate::svg::{line_chart, Series};
use crate::CliError;

pub const RUNS_HEADER: &str = "N,seed_index,population_seed,graph_seed,diameter,eeac,eeac_std_error,fallbacks,\
amax_value,amax_bits,amax_fallback,tau_E,omega_hat,leading_term,lower_bound";
pub const SUMMARY_HEADER: &str = "N,lg_N,runs,eeac_median,eeac_mean,leading_median,leading_mean,\
amax_value_median,amax_bits_median,tau_E_mean,omega_hat_mean,lower_bound_median";

/// Seed of the `index`-th population at size `n`.
pub fn population_seed(cfg: &ExperimentConfig, n: usize, index: u64) -> u64 {
    sub_seed(cfg.seed, &format!("population-{n}"), index)
}

pub fn population(cfg: &ExperimentConfig, n: usize, index: u64) -> Result<Population, CliError> {
    Ok(Population::sample(n, &mut rng_from_seed(population_seed(cfg, n, index)))?)
}

pub fn estimator(cfg: &ExperimentConfig) -> Result<Estimator, CliError> {
    Ok(Estimator::new(cfg.estimator, cfg.exact_cap, cfg.budget)?)
}

/// Cycles every growth run lasts: `c0` plus one per instant.
pub fn total_cycles(cfg: &ExperimentConfig) -> u64 {
    cfg.c0 + cfg.instants as u64 + 1
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthRun {
    pub n: usize,
    pub index: u64,
    pub population_seed: u64,
    pub graph_seed: u64,
    pub diameter: Extended<u64>,
    pub eeac: EeacEstimate,
    pub amax: AmaxEstimate,
    pub tau_e: Fraction,
    pub omega_hat: Fraction,
    /// `(τ_E − Ω̂)·lg N`.
    pub leading: f64,
    /// Absent below two nodes, where `lg lg` is undefined.
    pub lower_bound: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthSummary {
    pub n: usize,
    pub runs: usize,
    pub eeac_median: f64,
    pub eeac_mean: f64,
    pub leading_median: f64,
    pub leading_mean: f64,
    pub amax_value_median: f64,
    pub amax_bits_median: f64,
    pub tau_e_mean: f64,
    pub omega_hat_mean: f64,
    pub lower_bound_median: Option<f64>,
}

/// Trend of the per-size medians plus a rank correlation with `lg N` pooled
/// over every run.
#[derive(Debug, Clone, PartialEq)]
pub struct TrendCheck {
    pub eeac_nondecreasing: bool,
    pub leading_nondecreasing: bool,
    pub eeac_spearman: Option<f64>,
    pub leading_spearman: Option<f64>,
}

impl TrendCheck {
    pub const MIN_SPEARMAN: f64 = 0.8;

    pub fn passed(&self) -> bool {
        let strong = |r: Option<f64>| r.is_some_and(|r| r >= Self::MIN_SPEARMAN);
        self.eeac_nondecreasing && self.leading_nondecreasing && strong(self.eeac_spearman) && strong(self.leading_spearman)
    }

    pub fn render(&self) -> String {
        let r = |x: Option<f64>| x.map_or_else(|| "undefined".to_string(), |x| format!("{x:.6}"));
        format!(
            "eeac_median_nondecreasing = {}\nleading_median_nondecreasing = {}\neeac_spearman = {}\n\
             leading_spearman = {}\ntrend = {}\n",
            self.eeac_nondecreasing,
            self.leading_nondecreasing,
            r(self.eeac_spearman),
            r(self.leading_spearman),
            if self.passed() { "pass" } else { "fail" }
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthReport {
    pub runs: Vec<GrowthRun>,
    pub summaries: Vec<GrowthSummary>,
    /// Computed only when the grid has at least two sizes.
    pub trend: Option<TrendCheck>,
}

fn to_f64(f: Fraction) -> f64 {
    f.to_f64().unwrap_or(f64::NAN)
}

fn natural_f64(v: &Natural) -> f64 {
    v.to_f64().unwrap_or(f64::INFINITY)
}

/// Halting estimate at the run length for the `index`-th program sample,
/// shared by every population size.
fn omega_for(cfg: &ExperimentConfig, index: u64) -> Result<Fraction, CliError> {
    let mut rng = sub_rng(cfg.seed, "omega", index);
    let programs: Vec<Program> = (0..cfg.omega_samples)
        .map(|_| sample_program(&mut rng))
        .collect::<Result<_, _>>()?;
    let c = total_cycles(cfg);
    let profile = HaltingProfile::build(&programs, &Natural::from(cfg.w), c, cfg.budget)?;
    Ok(profile.omega_hat(c)?.omega_hat)
}

fn one_run(cfg: &ExperimentConfig, est: &Estimator, n: usize, index: u64, omega_hat: Fraction) -> Result<GrowthRun, CliError> {
    let w = Natural::from(cfg.w);
    let pop = population(cfg, n, index)?;
    let g = build_graph(cfg, n, index)?;
    let opts = RunOptions {
        start: 0,
        relay: cfg.relay,
    };
    let mut rng = sub_rng(cfg.seed, &format!("bindings-{n}"), index);
    let eeac = eeac_estimate(&g, &pop, &w, cfg.budget, cfg.binding_samples, &mut rng, est, cfg.c0, opts)?;
    let amax = amax_estimate(&pop, &w, cfg.budget, est);
    let mut rng = sub_rng(cfg.seed, &format!("density-{n}"), index);
    let tau_e = tau_expected(&g, &pop, &w, cfg.budget, cfg.binding_samples, &mut rng, 0, cfg.instants - 1)?;
    let (tau_f, omega_f) = (to_f64(tau_e), to_f64(omega_hat));
    let lg_n = (n as f64).log2();
    let lower_bound = if n >= 2 {
        let p = LowerBoundParams::new(tau_f, omega_f, n as u64, total_cycles(cfg) as f64);
        Some(lower_bound_eval(&p)?.value)
    } else {
        None
    };
    Ok(GrowthRun {
        n,
        index,
        population_seed: population_seed(cfg, n, index),
        graph_seed: graph_seed(cfg, n, index),
        diameter: temporal_diameter(&g, 0)?,
        eeac,
        amax,
        tau_e,
        omega_hat,
        leading: (tau_f - omega_f) * lg_n,
        lower_bound,
    })
}

fn summarise(n: usize, runs: &[&GrowthRun]) -> GrowthSummary {
    let col = |f: &dyn Fn(&GrowthRun) -> f64| runs.iter().map(|r| f(r)).collect::<Vec<f64>>();
    let eeac = col(&|r| r.eeac.mean);
    let leading = col(&|r| r.leading);
    let bounds: Vec<f64> = runs.iter().filter_map(|r| r.lower_bound).collect();
    GrowthSummary {
        n,
        runs: runs.len(),
        eeac_median: median(&eeac),
        eeac_mean: mean(&eeac),
        leading_median: median(&leading),
        leading_mean: mean(&leading),
        amax_value_median: median(&col(&|r| natural_f64(&r.amax.value))),
        amax_bits_median: median(&col(&|r| r.amax.bits as f64)),
        tau_e_mean: mean(&col(&|r| to_f64(r.tau_e))),
        omega_hat_mean: mean(&col(&|r| to_f64(r.omega_hat))),
        lower_bound_median: (!bounds.is_empty()).then(|| median(&bounds)),
    }
}

pub fn trend_check(runs: &[GrowthRun], summaries: &[GrowthSummary]) -> Option<TrendCheck> {
    if summaries.len() < 2 {
        return None;
    }
    let lg: Vec<f64> = runs.iter().map(|r| (r.n as f64).log2()).collect();
    let eeac: Vec<f64> = runs.iter().map(|r| r.eeac.mean).collect();
    let leading: Vec<f64> = runs.iter().map(|r| r.leading).collect();
    Some(TrendCheck {
        eeac_nondecreasing: is_nondecreasing(&summaries.iter().map(|s| s.eeac_median).collect::<Vec<_>>()),
        leading_nondecreasing: is_nondecreasing(&summaries.iter().map(|s| s.leading_median).collect::<Vec<_>>()),
        eeac_spearman: spearman(&lg, &eeac),
        leading_spearman: spearman(&lg, &leading),
    })
}

/// Runs every (N, seed index) pair in parallel; results keep grid order.
pub fn growth_runs(cfg: &ExperimentConfig) -> Result<GrowthReport, CliError> {
    let est = estimator(cfg)?;
    let omegas: Vec<Fraction> = (0..cfg.seeds as u64)
        .into_par_iter()
        .map(|i| omega_for(cfg, i))
        .collect::<Result<_, _>>()?;
    let pairs: Vec<(usize, u64)> = cfg
        .n_grid
        .iter()
        .flat_map(|&n| (0..cfg.seeds as u64).map(move |i| (n, i)))
        .collect();
    let runs: Vec<GrowthRun> = pairs
        .par_iter()
        .map(|&(n, i)| one_run(cfg, &est, n, i, omegas[i as usize]))
        .collect::<Result<_, _>>()?;
    let summaries: Vec<GrowthSummary> = cfg
        .n_grid
        .iter()
        .map(|&n| summarise(n, &runs.iter().filter(|r| r.n == n).collect::<Vec<_>>()))
        .collect();
    let trend = trend_check(&runs, &summaries);
    Ok(GrowthReport {
        runs,
        summaries,
        trend,
    })
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "none".to_string(), |x| format!("{x:.6}"))
}

fn ext(x: Extended<u64>) -> String {
    match x {
        Extended::Finite(v) => v.to_string(),
        Extended::Infinite => "inf".into(),
    }
}

pub fn render_runs(runs: &[GrowthRun]) -> String {
    let mut s = format!("{RUNS_HEADER}\n");
    for r in runs {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{:.6},{:.6},{},{},{},{},{:.6},{:.6},{:.6},{}",
            r.n,
            r.index,
            r.population_seed,
            r.graph_seed,
            ext(r.diameter),
            r.eeac.mean,
            r.eeac.std_error,
            r.eeac.fallbacks,
            r.amax.value,
            r.amax.bits,
            r.amax.fell_back,
            to_f64(r.tau_e),
            to_f64(r.omega_hat),
            r.leading,
            opt(r.lower_bound)
        );
    }
    s
}

pub fn render_summary(summaries: &[GrowthSummary]) -> String {
    let mut s = format!("{SUMMARY_HEADER}\n");
    for m in summaries {
        let _ = writeln!(
            s,
            "{},{:.6},{},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{}",
            m.n,
            (m.n as f64).log2(),
            m.runs,
            m.eeac_median,
            m.eeac_mean,
            m.leading_median,
            m.leading_mean,
            m.amax_value_median,
            m.amax_bits_median,
            m.tau_e_mean,
            m.omega_hat_mean,
            opt(m.lower_bound_median)
        );
    }
    s
}

/// Whitespace-separated columns for gnuplot.
pub fn render_dat(summaries: &[GrowthSummary]) -> String {
    let mut s = String::from("# lg_N eeac_median leading_median amax_bits_median\n");
    for m in summaries {
        let _ = writeln!(
            s,
            "{:.6} {:.6} {:.6} {:.6}",
            (m.n as f64).log2(),
            m.eeac_median,
            m.leading_median,
            m.amax_bits_median
        );
    }
    s
}

pub fn render_svg(summaries: &[GrowthSummary]) -> String {
    let lg = |m: &GrowthSummary| (m.n as f64).log2();
    let series = [
        Series {
            label: "EEAC median",
            colour: "#1f77b4",
            points: summaries.iter().map(|m| (lg(m), m.eeac_median)).collect(),
        },
        Series {
            label: "(tau_E - omega) lg N median",
            colour: "#d62728",
            points: summaries.iter().map(|m| (lg(m), m.leading_median)).collect(),
        },
    ];
    line_chart("Emergent complexity against population size", "lg N", "bits", &series)
}

/// Identity-binding trace and final values of the first population at each
/// size, for inspection.
fn write_traces(cfg: &ExperimentConfig, est: &Estimator, manifest: &mut RunManifest) -> Result<(), CliError> {
    let w = Natural::from(cfg.w);
    let opts = RunOptions {
        start: 0,
        relay: cfg.relay,
    };
    let mut traces = BufWriter::new(File::create(cfg.out_dir.join("traces.csv"))?);
    let mut finals = BufWriter::new(File::create(cfg.out_dir.join("finals.csv"))?);
    for (k, &n) in cfg.n_grid.iter().enumerate() {
        let pop = population(cfg, n, 0)?;
        let g = build_graph(cfg, n, 0)?;
        let binding = Binding::new((1..=n).collect(), cfg.c0, None)?;
        let trace = run_networked_with(&g, &pop, &binding, &w, cfg.budget, opts)?;
        let iso = run_isolated(&pop, &w, trace.total_cycles(), cfg.budget)?;
        let id = format!("growth-{n}-0");
        write_trace_csv(&mut traces, &id, &trace, k == 0)?;
        let eac = eac_estimates(trace.final_outputs(), &iso, est)?;
        write_final_csv(&mut finals, &id, &trace, &iso, &eac, k == 0)?;
    }
    manifest.output("traces.csv");
    manifest.output("finals.csv");
    Ok(())
}

fn write_outputs(cfg: &ExperimentConfig, report: &GrowthReport, manifest: &mut RunManifest) -> io::Result<()> {
    let dir = &cfg.out_dir;
    let files = [
        ("growth_runs.csv", render_runs(&report.runs)),
        ("growth.csv", render_summary(&report.summaries)),
        ("growth.dat", render_dat(&report.summaries)),
        ("growth.svg", render_svg(&report.summaries)),
    ];
    for (name, body) in files {
        fs::write(dir.join(name), body)?;
        manifest.output(name);
    }
    if let Some(t) = &report.trend {
        fs::write(dir.join("growth_trend.txt"), t.render())?;
        manifest.output("growth_trend.txt");
    }
    Ok(())
}

/// Runs the experiment and writes its files into the output directory.
pub fn cmd_growth(cfg: &ExperimentConfig) -> Result<GrowthReport, CliError> {
    fs::create_dir_all(&cfg.out_dir)?;
    let mut manifest = RunManifest::new("growth", cfg);
    for &n in &cfg.n_grid {
        for i in 0..cfg.seeds as u64 {
            manifest.seed(format!("population-{n}-{i}"), population_seed(cfg, n, i));
            manifest.seed(format!("graph-{n}-{i}"), graph_seed(cfg, n, i));
        }
    }
    let result = growth_runs(cfg).and_then(|report| {
        write_outputs(cfg, &report, &mut manifest)?;
        if cfg.traces {
            write_traces(cfg, &estimator(cfg)?, &mut manifest)?;
        }
        Ok(report)
    });
    manifest.write(&cfg.out_dir)?;
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::GraphSpec;

    fn small() -> ExperimentConfig {
        ExperimentConfig {
            n_grid: vec![2, 4],
            instants: 6,
            seeds: 3,
            omega_samples: 50,
            binding_samples: 2,
            graph: GraphSpec::StaticComplete,
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn runs_come_out_in_grid_order() {
        let report = growth_runs(&small()).unwrap();
        let keys: Vec<(usize, u64)> = report.runs.iter().map(|r| (r.n, r.index)).collect();
        assert_eq!(keys, vec![(2, 0), (2, 1), (2, 2), (4, 0), (4, 1), (4, 2)]);
        assert_eq!(report.summaries.len(), 2);
        assert!(report.trend.is_some());
        // complete graphs spread the maximum to everyone in one interval
        assert!(report.runs.iter().all(|r| r.tau_e == Fraction::from_integer(1)));
    }

    #[test]
    fn single_size_has_no_trend() {
        let cfg = ExperimentConfig {
            n_grid: vec![2],
            ..small()
        };
        let report = growth_runs(&cfg).unwrap();
        assert_eq!(report.summaries.len(), 1);
        assert!(report.trend.is_none());
    }

    #[test]
    fn same_seed_same_tables() {
        let a = growth_runs(&small()).unwrap();
        let b = growth_runs(&small()).unwrap();
        assert_eq!(render_runs(&a.runs), render_runs(&b.runs));
        assert_eq!(render_summary(&a.summaries), render_summary(&b.summaries));
    }
}
