//! The property suite behind `validate`: every check compares the simulator
//! against an independent oracle or an exact identity.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use bbig_core::machine::{
    decode, enumerate_programs, kraft_sum, program_counts, run_bounded, sample_program, Estimator, Instruction,
    Program, RngBits,
};
use bbig_core::metrics::{complement_identity_check, gibbs_entropy_check, ComplementCheck, GibbsCheck, HaltingProfile};
use bbig_core::runner::{
    eac_estimates, eeac_estimate, run_isolated, run_networked_with, Binding, Population, RelayPolicy, RunOptions,
    RunTrace,
};
use bbig_core::seed::{rng_from_seed, sub_rng, sub_seed};
use bbig_core::temporal_graph::{
    arrival_matrix, complete_arrows, cover_time, gen_static, path_arrows, ring_arrows, temporal_bfs, TemporalGraph,
};
use bbig_core::{Extended, Fraction, Natural};
use rand::Rng;
use rayon::prelude::*;

use crate::config::ExperimentConfig;
use crate::oracle::{cover_time_by_journeys, journey_arrivals, journey_reach_via, random_tvg};

pub const REPORT_FILE: &str = "validate_report.csv";
pub const REPORT_HEADER: &str = "property,cases,failures,status,detail";

/// Step budget for programs in the contagion corpus.
const CORPUS_BUDGET: u64 = 300;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyOutcome {
    pub property: &'static str,
    pub cases: u64,
    pub failures: u64,
    pub detail: String,
}

impl PropertyOutcome {
    fn new(property: &'static str, cases: u64, failures: u64, detail: impl Into<String>) -> Self {
        PropertyOutcome {
            property,
            cases,
            failures,
            detail: detail.into(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.property,
            self.cases,
            self.failures,
            if self.passed() { "pass" } else { "fail" },
            self.detail.replace(',', ";")
        )
    }
}

fn first_failure(failures: &[String]) -> String {
    failures.first().cloned().unwrap_or_default()
}

fn from_checks(property: &'static str, checks: Vec<Result<(), String>>) -> PropertyOutcome {
    let cases = checks.len() as u64;
    let failures: Vec<String> = checks.into_iter().filter_map(Result::err).collect();
    PropertyOutcome::new(property, cases, failures.len() as u64, first_failure(&failures))
}

/// `temporal_bfs` and the all-sources arrival matrix against exhaustive
/// journey enumeration on random TVGs with N <= 8 and T <= 5.
pub fn bfs_vs_journeys(seed: u64, graphs: usize) -> PropertyOutcome {
    let checks = (0..graphs as u64)
        .into_par_iter()
        .map(|i| {
            let g = random_tvg(&mut sub_rng(seed, "validate-bfs", i), 8, 5);
            for start in 0..g.instant_count() {
                let matrix = arrival_matrix(&g, start).map_err(|e| e.to_string())?;
                for (s, row) in matrix.iter().enumerate() {
                    let want: Vec<Extended<u64>> = journey_arrivals(&g, start, s)
                        .into_iter()
                        .map(|a| a.map_or(Extended::Infinite, Extended::Finite))
                        .collect();
                    let got = temporal_bfs(&g, start, s).map_err(|e| e.to_string())?.arrival;
                    if got != want || *row != want {
                        return Err(format!("graph {i} start {start} source {s}"));
                    }
                }
            }
            Ok(())
        })
        .collect();
    from_checks("temporal_bfs_oracle", checks)
}

/// One (graph, population, binding) triple of the contagion corpus.
pub struct CorpusCase {
    pub graph: TemporalGraph,
    pub population: Population,
    pub binding: Binding,
    pub relay: RelayPolicy,
}

/// Small constants (many ties) or sampled programs, some of which loop.
pub fn corpus_case(seed: u64, index: u64) -> CorpusCase {
    let mut rng = sub_rng(seed, "validate-contagion", index);
    let graph = random_tvg(&mut rng, 8, 5);
    let n = graph.vertex_count();
    let population = if rng.gen_bool(0.5) {
        let programs = (0..n)
            .map(|_| Program::from_body(&vec![Instruction::Inc; rng.gen_range(0..4)]).expect("straight-line body"))
            .collect();
        Population::new(programs).expect("non-empty")
    } else {
        Population::sample(n, &mut rng).expect("sampling succeeds")
    };
    let binding = Binding::random(n, rng.gen_range(0..3), &mut rng);
    let relay = if rng.gen_bool(0.25) {
        RelayPolicy::Silent
    } else {
        RelayPolicy::Relay
    };
    CorpusCase {
        graph,
        population,
        binding,
        relay,
    }
}

fn run_case(case: &CorpusCase) -> Result<RunTrace, String> {
    let opts = RunOptions {
        start: 0,
        relay: case.relay,
    };
    run_networked_with(
        &case.graph,
        &case.population,
        &case.binding,
        &Natural::default(),
        CORPUS_BUDGET,
        opts,
    )
    .map_err(|e| e.to_string())
}

/// Every node ends up carrying the largest cycle-1 value among the vertices
/// that can reach it, and loses it to 0 if its own program ever failed.
fn contagion_check(case: &CorpusCase) -> Result<(), String> {
    let trace = run_case(case)?;
    let g = &case.graph;
    let n = g.vertex_count();
    let cycle_one: Vec<Option<Natural>> = (0..n)
        .map(|v| {
            let label = case.binding.node_at(v);
            run_bounded(case.population.program(label), &Natural::default(), CORPUS_BUDGET)
                .value()
                .cloned()
        })
        .collect();
    let may_send: Vec<bool> = cycle_one
        .iter()
        .map(|o| case.relay == RelayPolicy::Relay || o.is_some())
        .collect();
    let reach: Vec<Vec<bool>> = (0..n).map(|u| journey_reach_via(g, 0, u, &may_send)).collect();
    for v in 0..n {
        let label = case.binding.node_at(v);
        let best = (0..n)
            .filter(|&u| reach[u][v])
            .map(|u| cycle_one[u].clone().unwrap_or_default())
            .max()
            .unwrap_or_default();
        let want_final = if cycle_one[v].is_some() { best.clone() } else { Natural::default() };
        if *trace.carried_final(label) != best || *trace.final_output(label) != want_final {
            return Err(format!(
                "vertex {v}: carried {} final {} expected {best} / {want_final}",
                trace.carried_final(label),
                trace.final_output(label)
            ));
        }
    }
    Ok(())
}

pub fn contagion_oracle(seed: u64, runs: usize) -> PropertyOutcome {
    let checks = (0..runs as u64)
        .into_par_iter()
        .map(|i| contagion_check(&corpus_case(seed, i)).map_err(|e| format!("run {i}: {e}")))
        .collect();
    from_checks("contagion_oracle", checks)
}

/// On every corpus run where the maximum covers all nodes, the shares
/// before and after every split instant add up to exactly 1.
pub fn complement_identity(seed: u64, runs: usize) -> PropertyOutcome {
    let results: Vec<Option<Result<(), String>>> = (0..runs as u64)
        .into_par_iter()
        .map(|i| {
            let trace = match run_case(&corpus_case(seed, i)) {
                Ok(t) => t,
                Err(e) => return Some(Err(format!("run {i}: {e}"))),
            };
            let mut covered = false;
            for t_mid in trace.start()..=trace.last_instant() {
                match complement_identity_check(&trace, trace.start(), t_mid) {
                    Ok(ComplementCheck::Holds { .. }) => covered = true,
                    Ok(ComplementCheck::Inapplicable) => return None,
                    Ok(ComplementCheck::Violated { first, second }) => {
                        return Some(Err(format!("run {i} split {t_mid}: {first} + {second}")))
                    }
                    Err(e) => return Some(Err(format!("run {i}: {e}"))),
                }
            }
            covered.then_some(Ok(()))
        })
        .collect();
    from_checks("complement_identity", results.into_iter().flatten().collect())
}

fn expect_cover(g: &TemporalGraph, want: u64, name: &str) -> Result<(), String> {
    let one = Fraction::from_integer(1);
    let want = Extended::Finite(Fraction::from_integer(want));
    let got = cover_time(g, 0, one).map_err(|e| e.to_string())?;
    let brute = cover_time_by_journeys(g, 0, one);
    if got == want && brute == want {
        Ok(())
    } else {
        Err(format!("{name}: cover time {got:?} brute force {brute:?}"))
    }
}

/// K_N covers in one interval and the directed N-cycle in N-1, confirmed
/// by journey enumeration as well.
pub fn cover_time_closed_cases() -> PropertyOutcome {
    let mut checks = Vec::new();
    for n in 2..=32 {
        checks.push(
            gen_static(n, &complete_arrows(n), false, 2)
                .map_err(|e| e.to_string())
                .and_then(|g| expect_cover(&g, 1, &format!("K_{n}"))),
        );
    }
    for n in 3..=8 {
        checks.push(
            gen_static(n, &ring_arrows(n), false, n)
                .map_err(|e| e.to_string())
                .and_then(|g| expect_cover(&g, n as u64 - 1, &format!("C_{n}"))),
        );
    }
    from_checks("cover_time_closed_cases", checks)
}

/// No enumerated program up to `max_bits` is a proper prefix of another.
pub fn prefix_free(max_bits: u32) -> PropertyOutcome {
    let programs = match enumerate_programs(max_bits) {
        Ok(p) => p,
        Err(e) => return PropertyOutcome::new("prefix_free", 0, 1, e.to_string()),
    };
    let mut bits: Vec<&[bool]> = programs.iter().map(Program::bits).collect();
    bits.sort_unstable();
    // sorted lexicographically, a prefix sits right before its extensions
    let clashes = bits.windows(2).filter(|w| w[1].starts_with(w[0])).count() as u64;
    PropertyOutcome::new(
        "prefix_free",
        programs.len() as u64,
        clashes,
        format!("{} programs up to {max_bits} bits", programs.len()),
    )
}

/// The Kraft sum stays at most 1, never decreases, and grows exactly at the
/// lengths where programs exist.
pub fn kraft(max_len: u32) -> PropertyOutcome {
    let counts = match program_counts(max_len) {
        Ok(c) => c,
        Err(e) => return PropertyOutcome::new("kraft_sum", 0, 1, e.to_string()),
    };
    let mut prev = Fraction::from_integer(0);
    let mut checks = Vec::new();
    for len in 1..=max_len {
        checks.push(match kraft_sum(len) {
            Ok(k) if k > Fraction::from_integer(1) => Err(format!("kraft_sum({len}) = {k} above 1")),
            Ok(k) if k < prev || (k > prev) != (counts[len as usize] > 0) => {
                Err(format!("kraft_sum({len}) = {k} after {prev}"))
            }
            Ok(k) => {
                prev = k;
                Ok(())
            }
            Err(e) => Err(e.to_string()),
        });
    }
    let mut out = from_checks("kraft_sum", checks);
    if out.passed() {
        out.detail = format!("kraft_sum({max_len}) = {prev}");
    }
    out
}

/// Random bit streams from `streams` random 64-bit seeds all decode. The
/// share of bare 64-bit words that already hold a whole program is reported.
pub fn stream_decoding(seed: u64, streams: usize) -> PropertyOutcome {
    let mut failures = 0u64;
    let mut whole_in_64 = 0u64;
    for i in 0..streams as u64 {
        let s = sub_seed(seed, "validate-streams", i);
        if decode(&mut RngBits::new(&mut rng_from_seed(s), bbig_core::machine::SAMPLE_BIT_CAP)).is_err() {
            failures += 1;
        }
        let word = (0..64).map(move |b| (s >> b) & 1 == 1);
        if decode(&mut word.into_iter()).is_ok() {
            whole_in_64 += 1;
        }
    }
    PropertyOutcome::new(
        "stream_decoding",
        streams as u64,
        failures,
        format!("{whole_in_64}/{streams} bare 64-bit words decode"),
    )
}

/// Frequency of the bare HALT program over `samples` draws lies within three
/// binomial standard deviations of 1/8.
pub fn sampling_measure(seed: u64, samples: u64) -> PropertyOutcome {
    let mut rng = sub_rng(seed, "validate-sampling", 0);
    let mut halts = 0u64;
    let mut errors = 0u64;
    for _ in 0..samples {
        match sample_program(&mut rng) {
            Ok(p) if p == Program::halt() => halts += 1,
            Ok(_) => {}
            Err(_) => errors += 1,
        }
    }
    let p = 1.0 / 8.0;
    let sigma = (samples as f64 * p * (1.0 - p)).sqrt();
    let z = (halts as f64 - samples as f64 * p) / sigma;
    let failures = errors + u64::from(z.abs() > 3.0);
    PropertyOutcome::new("sampling_measure", samples, failures, format!("{halts} HALT draws; z = {z:.3}"))
}

/// On fixed sample sets the halting estimate never rises with more cycles.
pub fn omega_monotone(cfg: &ExperimentConfig, sets: u64) -> PropertyOutcome {
    let w = Natural::from(cfg.w);
    let cs = [1u64, 2, 4, 8];
    let checks = (0..sets)
        .into_par_iter()
        .map(|i| {
            let mut rng = sub_rng(cfg.seed, "validate-omega", i);
            let programs: Vec<Program> = (0..cfg.omega_samples)
                .map(|_| sample_program(&mut rng))
                .collect::<Result<_, _>>()
                .map_err(|e| e.to_string())?;
            let profile = HaltingProfile::build(&programs, &w, 8, cfg.budget).map_err(|e| e.to_string())?;
            let omegas: Vec<Fraction> = cs
                .iter()
                .map(|&c| profile.omega_hat(c).map(|h| h.omega_hat))
                .collect::<Result<_, _>>()
                .map_err(|e| e.to_string())?;
            if omegas.windows(2).all(|p| p[1] <= p[0]) {
                Ok(())
            } else {
                Err(format!("set {i}: {omegas:?} at c = {cs:?}"))
            }
        })
        .collect();
    from_checks("omega_monotone", checks)
}

/// Entropy of the empirical distribution over each sampled halting set is
/// at most the log of its support.
pub fn gibbs(cfg: &ExperimentConfig) -> PropertyOutcome {
    let w = Natural::from(cfg.w);
    let sizes = [10usize, 100, 1_000, 10_000];
    let checks: Vec<Option<Result<(), String>>> = sizes
        .par_iter()
        .enumerate()
        .map(|(i, &size)| {
            let mut rng = sub_rng(cfg.seed, "validate-gibbs", i as u64);
            let mut halting = Vec::new();
            for _ in 0..size {
                let p = match sample_program(&mut rng) {
                    Ok(p) => p,
                    Err(e) => return Some(Err(e.to_string())),
                };
                if run_bounded(&p, &w, cfg.budget).halted() {
                    halting.push(p);
                }
            }
            match gibbs_entropy_check(&halting) {
                GibbsCheck::Holds { .. } => Some(Ok(())),
                GibbsCheck::Inapplicable => None,
                v @ GibbsCheck::Violated { .. } => Some(Err(format!("{size} draws: {v:?}"))),
            }
        })
        .collect();
    from_checks("gibbs_entropy", checks.into_iter().flatten().collect())
}

/// Average emergent complexity over every binding, computed node by node
/// from plain runs.
fn aeac_by_definition(
    g: &TemporalGraph,
    pop: &Population,
    w: &Natural,
    budget: u64,
    est: &Estimator,
) -> Result<f64, String> {
    let n = pop.len();
    let bindings = Binding::all(n, 0);
    let mut total = 0.0;
    for b in &bindings {
        let trace = run_networked_with(g, pop, b, w, budget, RunOptions::default()).map_err(|e| e.to_string())?;
        let iso = run_isolated(pop, w, trace.total_cycles(), budget).map_err(|e| e.to_string())?;
        let entries = eac_estimates(trace.final_outputs(), &iso, est).map_err(|e| e.to_string())?;
        total += entries.iter().map(|e| e.eac as f64).sum::<f64>() / n as f64;
    }
    Ok(total / bindings.len() as f64)
}

/// For small populations the exhaustive binding average of the estimator
/// equals the definition evaluated binding by binding.
pub fn exhaustive_aeac(cfg: &ExperimentConfig) -> PropertyOutcome {
    let w = Natural::from(cfg.w);
    let est = Estimator::compress_proxy();
    let mut sizes = vec![3usize];
    sizes.extend(cfg.n_grid.iter().copied().filter(|&n| (2..=5).contains(&n) && n != 3));
    let mut checks = Vec::new();
    for n in sizes {
        let factorial: usize = (1..=n).product();
        let g = match gen_static(n, &path_arrows(n), true, n + 1) {
            Ok(g) => g,
            Err(e) => {
                checks.push(Err(e.to_string()));
                continue;
            }
        };
        for i in 0..5u64 {
            let check = (|| {
                let mut rng = sub_rng(cfg.seed, &format!("validate-aeac-{n}"), i);
                let pop = Population::sample(n, &mut rng).map_err(|e| e.to_string())?;
                let exact = aeac_by_definition(&g, &pop, &w, cfg.budget, &est)?;
                let got = eeac_estimate(&g, &pop, &w, cfg.budget, factorial, &mut rng, &est, 0, RunOptions::default())
                    .map_err(|e| e.to_string())?;
                if got.exhaustive && (got.mean - exact).abs() <= 1e-12 {
                    Ok(())
                } else {
                    Err(format!("N={n} population {i}: estimate {} definition {exact}", got.mean))
                }
            })();
            checks.push(check);
        }
    }
    from_checks("exhaustive_aeac", checks)
}

/// Runs every property in a fixed order.
pub fn run_suite(cfg: &ExperimentConfig) -> Vec<PropertyOutcome> {
    vec![
        bfs_vs_journeys(cfg.seed, cfg.validate_graphs),
        contagion_oracle(cfg.seed, cfg.validate_runs),
        complement_identity(cfg.seed, cfg.validate_runs),
        cover_time_closed_cases(),
        prefix_free(18),
        kraft(24),
        stream_decoding(cfg.seed, 10_000),
        sampling_measure(cfg.seed, 100_000),
        omega_monotone(cfg, 5),
        gibbs(cfg),
        exhaustive_aeac(cfg),
    ]
}

pub fn render_report(outcomes: &[PropertyOutcome]) -> String {
    let mut s = format!("{REPORT_HEADER}\n");
    for o in outcomes {
        let _ = writeln!(s, "{}", o.csv_row());
    }
    s
}

pub fn write_report(dir: &Path, outcomes: &[PropertyOutcome]) -> io::Result<()> {
    fs::write(dir.join(REPORT_FILE), render_report(outcomes))
}
