//! Finite-scale search for the instant at which starting the diffusion pays
//! off soonest.
//!
//! For each start instant `z` with a finite cover time `f`, the expected
//! singleton density `τ_E` is measured over the window `z ..= z + ⌈f⌉` and
//! the halting fraction `Ω̂` at `c(z + ⌈f⌉ + 2)` cycles. The instant
//! qualifies when `C = (τ_E − Ω̂ − ε)/Ω̂ > 0`, the finite stand-in for the
//! lower bound growing without limit.

use std::io::{self, Write};

use num_traits::ToPrimitive;
use rayon::prelude::*;

use super::density::tau_expected_on;
use super::{invalid, lower_bound_eval, HaltingProfile, LowerBoundParams, MetricsError};
use crate::machine::sample_program;
use crate::runner::{cycle_one_outputs, Population};
use crate::seed::sub_rng;
use crate::temporal_graph::{cover_time, TemporalGraph};
use crate::{Extended, Fraction, Natural};

/// How qualifying instants are ranked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scoring {
    /// Intervals needed to cover the network from `z`.
    #[default]
    DiffusionRounds,
    /// Cycles elapsed from the first instant, `z + f + 2`.
    TotalCycles,
}

/// Which definition of the central instant is searched.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CentralityVariant {
    /// Best-scoring instant among those with `C > 0`.
    #[default]
    Unlimited,
    /// Instant with the largest complexity class: any `C > 0` beats every
    /// bounded instant, bounded instants compare by their lower bound.
    Maximum,
}

#[derive(Debug, Clone)]
pub struct CentralityParams {
    pub tau: Fraction,
    pub w: Natural,
    pub budget: u64,
    pub binding_samples: usize,
    pub omega_samples: usize,
    pub epsilon: f64,
    pub c0: u64,
    pub a_w: f64,
    pub c5: f64,
    pub scoring: Scoring,
    pub seed: u64,
}

impl CentralityParams {
    pub fn new(seed: u64) -> Self {
        CentralityParams {
            tau: Fraction::from_integer(1),
            w: Natural::default(),
            budget: 10_000,
            binding_samples: 8,
            omega_samples: 2_000,
            epsilon: 0.01,
            c0: 0,
            a_w: 0.0,
            c5: 0.0,
            scoring: Scoring::default(),
            seed,
        }
    }
}

/// The smallest admissible cycle map, `c(x) = c0 + x`.
pub fn minimal_cycle_map(c0: u64) -> impl Fn(u64) -> u64 + Sync {
    move |x| c0 + x
}

#[derive(Debug, Clone, PartialEq)]
pub struct CentralityRow {
    pub z: usize,
    pub cover_time: Extended<Fraction>,
    /// The remaining fields are `None` when the cover time is infinite.
    pub score: Option<Fraction>,
    pub cycles: Option<u64>,
    pub tau_e: Option<Fraction>,
    pub omega_hat: Option<Fraction>,
    pub coefficient: Option<f64>,
    pub lower_bound: Option<f64>,
}

impl CentralityRow {
    pub fn qualifies(&self) -> bool {
        self.coefficient.is_some_and(|c| c > 0.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CentralityResult {
    pub n: usize,
    pub variant: CentralityVariant,
    pub t_cen: Option<usize>,
    pub rows: Vec<CentralityRow>,
    pub diagnostic: Option<String>,
}

fn frac_f64(f: Fraction) -> f64 {
    f.to_f64().unwrap_or(f64::NAN)
}

fn ceil(f: Fraction) -> u64 {
    f.ceil().to_integer()
}

fn coefficient(tau_e: f64, omega: f64, epsilon: f64) -> f64 {
    let num = tau_e - omega - epsilon;
    if omega > 0.0 {
        num / omega
    } else if num > 0.0 {
        f64::INFINITY
    } else if num < 0.0 {
        f64::NEG_INFINITY
    } else {
        0.0
    }
}

pub fn time_centrality<C>(
    g: &TemporalGraph,
    params: &CentralityParams,
    c_map: C,
    variant: CentralityVariant,
) -> Result<CentralityResult, MetricsError>
where
    C: Fn(u64) -> u64 + Sync,
{
    let n = g.vertex_count();
    if n < 2 || g.instant_count() < 2 {
        return Err(invalid("centrality needs at least two vertices and two instants"));
    }
    if params.budget == 0 || params.binding_samples == 0 || params.omega_samples == 0 {
        return Err(invalid("budget, binding and omega sample counts must be positive"));
    }
    let pop = Population::sample(n, &mut sub_rng(params.seed, "centrality-population", 0))?;
    let outputs = cycle_one_outputs(&pop, &params.w, params.budget);

    let covers = (0..g.instant_count())
        .map(|z| cover_time(g, z, params.tau))
        .collect::<Result<Vec<_>, _>>()?;
    let mut cycle_counts = Vec::with_capacity(covers.len());
    for (z, f) in covers.iter().enumerate() {
        cycle_counts.push(match f {
            Extended::Finite(f) => {
                let x = z as u64 + ceil(*f) + 2;
                let c = c_map(x);
                if c < params.c0 + x {
                    return Err(invalid(format!("cycle map gives {c} < c0 + {x}")));
                }
                Some(c)
            }
            Extended::Infinite => None,
        });
    }
    if cycle_counts.iter().all(Option::is_none) {
        return Ok(CentralityResult {
            n,
            variant,
            t_cen: None,
            rows: covers
                .into_iter()
                .enumerate()
                .map(|(z, cover_time)| CentralityRow {
                    z,
                    cover_time,
                    score: None,
                    cycles: None,
                    tau_e: None,
                    omega_hat: None,
                    coefficient: None,
                    lower_bound: None,
                })
                .collect(),
            diagnostic: Some("cover time is infinite at every instant".into()),
        });
    }

    let c_max = cycle_counts.iter().flatten().copied().max().unwrap_or(1);
    let mut omega_rng = sub_rng(params.seed, "centrality-omega", 0);
    let programs = (0..params.omega_samples)
        .map(|_| sample_program(&mut omega_rng))
        .collect::<Result<Vec<_>, _>>()?;
    let profile = HaltingProfile::build(&programs, &params.w, c_max, params.budget)?;

    let rows = covers
        .into_par_iter()
        .zip(cycle_counts)
        .enumerate()
        .map(|(z, (cover_time, cycles))| {
            let (Extended::Finite(f), Some(c)) = (cover_time, cycles) else {
                return Ok(CentralityRow {
                    z,
                    cover_time,
                    score: None,
                    cycles: None,
                    tau_e: None,
                    omega_hat: None,
                    coefficient: None,
                    lower_bound: None,
                });
            };
            let t_end = z + ceil(f) as usize;
            let mut rng = sub_rng(params.seed, "centrality-bindings", z as u64);
            let tau_e = tau_expected_on(g, &outputs, &params.w, params.binding_samples, &mut rng, z, t_end)?;
            let omega = profile.omega_hat(c)?.omega_hat;
            let x = f + Fraction::from_integer(z as u64 + 2);
            let score = match params.scoring {
                Scoring::DiffusionRounds => f,
                Scoring::TotalCycles => x,
            };
            let mut lb = LowerBoundParams::new(frac_f64(tau_e), frac_f64(omega), n as u64, frac_f64(x));
            lb.a_w = params.a_w;
            lb.c5 = params.c5;
            lb.epsilon = params.epsilon;
            Ok(CentralityRow {
                z,
                cover_time,
                score: Some(score),
                cycles: Some(c),
                tau_e: Some(tau_e),
                omega_hat: Some(omega),
                coefficient: Some(coefficient(frac_f64(tau_e), frac_f64(omega), params.epsilon)),
                lower_bound: Some(lower_bound_eval(&lb)?.value),
            })
        })
        .collect::<Result<Vec<_>, MetricsError>>()?;

    // rows are in instant order, so strict comparisons keep the earliest
    let mut best: Option<&CentralityRow> = None;
    for row in rows.iter().filter(|r| r.qualifies()) {
        if best.is_none_or(|b| row.score < b.score) {
            best = Some(row);
        }
    }
    if best.is_none() && variant == CentralityVariant::Maximum {
        for row in rows.iter().filter(|r| r.lower_bound.is_some()) {
            if best.is_none_or(|b| row.lower_bound > b.lower_bound) {
                best = Some(row);
            }
        }
    }
    let t_cen = best.map(|r| r.z);
    let diagnostic = rows
        .iter()
        .all(|r| !r.qualifies())
        .then(|| "no instant has a positive coefficient".to_string());
    Ok(CentralityResult {
        n,
        variant,
        t_cen,
        rows,
        diagnostic,
    })
}

pub const METRICS_CSV_HEADER: &str =
    "experiment_id,N,seed,t_z,cover_time,tau_E,omega_hat,coefficient_C,lower_bound,t_cen";

fn fmt_opt_frac(f: Option<Fraction>) -> String {
    f.map(|f| format!("{:.6}", frac_f64(f))).unwrap_or_default()
}

fn fmt_opt_f64(x: Option<f64>) -> String {
    match x {
        None => String::new(),
        Some(x) if x == f64::INFINITY => "inf".into(),
        Some(x) if x == f64::NEG_INFINITY => "-inf".into(),
        Some(x) => format!("{x:.6}"),
    }
}

/// One row per start instant; the chosen instant is repeated on every row.
pub fn write_metrics_csv<W: Write>(
    out: &mut W,
    experiment_id: &str,
    seed: u64,
    result: &CentralityResult,
    header: bool,
) -> io::Result<()> {
    if header {
        writeln!(out, "{METRICS_CSV_HEADER}")?;
    }
    let t_cen = result.t_cen.map_or_else(|| "none".to_string(), |t| t.to_string());
    for r in &result.rows {
        let cover = match r.cover_time {
            Extended::Finite(f) => format!("{:.6}", frac_f64(f)),
            Extended::Infinite => "inf".into(),
        };
        writeln!(
            out,
            "{experiment_id},{},{seed},{},{cover},{},{},{},{},{t_cen}",
            result.n,
            r.z,
            fmt_opt_frac(r.tau_e),
            fmt_opt_frac(r.omega_hat),
            fmt_opt_f64(r.coefficient),
            fmt_opt_f64(r.lower_bound),
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::temporal_graph::{complete_arrows, gen_gated_complete, gen_static};

    fn params(seed: u64) -> CentralityParams {
        let mut p = CentralityParams::new(seed);
        p.budget = 1000;
        p.omega_samples = 500;
        p.binding_samples = 4;
        p
    }

    #[test]
    fn gated_graphs_centre_on_the_gate() {
        for gate in 0..4 {
            let g = gen_gated_complete(6, gate, 8).unwrap();
            for variant in [CentralityVariant::Unlimited, CentralityVariant::Maximum] {
                let r = time_centrality(&g, &params(gate as u64), minimal_cycle_map(0), variant).unwrap();
                assert_eq!(r.t_cen, Some(gate), "{variant:?}");
            }
        }
    }

    #[test]
    fn total_cycle_scoring_prefers_the_first_instant() {
        let g = gen_gated_complete(6, 3, 8).unwrap();
        let mut p = params(1);
        p.scoring = Scoring::TotalCycles;
        let r = time_centrality(&g, &p, minimal_cycle_map(0), CentralityVariant::Unlimited).unwrap();
        // waiting for the gate costs exactly the instants skipped
        let scores: Vec<_> = r.rows.iter().take(4).map(|row| row.score.unwrap()).collect();
        assert!(scores.windows(2).all(|w| w[0] == w[1]));
        assert_eq!(r.t_cen, Some(0));
    }

    #[test]
    fn static_complete_ties_to_the_first_instant() {
        let g = gen_static(5, &complete_arrows(5), false, 5).unwrap();
        let r = time_centrality(&g, &params(3), minimal_cycle_map(0), CentralityVariant::Unlimited).unwrap();
        assert_eq!(r.t_cen, Some(0));
        assert_eq!(r.rows.last().unwrap().cover_time, Extended::Infinite);
    }

    #[test]
    fn edgeless_graph_has_no_centre() {
        let g = gen_static(4, &[], false, 4).unwrap();
        let r = time_centrality(&g, &params(0), minimal_cycle_map(0), CentralityVariant::Maximum).unwrap();
        assert_eq!(r.t_cen, None);
        assert!(r.diagnostic.is_some());
        let mut buf = Vec::new();
        write_metrics_csv(&mut buf, "e", 0, &r, true).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 5);
        assert!(text.lines().nth(1).unwrap().ends_with(",inf,,,,,none"));
    }

    #[test]
    fn cycle_map_must_cover_the_window() {
        let g = gen_static(3, &complete_arrows(3), false, 3).unwrap();
        assert!(time_centrality(&g, &params(0), |x| x - 1, CentralityVariant::Unlimited).is_err());
    }

    #[test]
    fn coefficient_edge_cases() {
        assert_eq!(coefficient(1.0, 0.0, 0.01), f64::INFINITY);
        assert_eq!(coefficient(0.0, 0.0, 0.01), f64::NEG_INFINITY);
        assert!((coefficient(1.0, 0.5, 0.0) - 1.0).abs() < 1e-12);
    }
}
