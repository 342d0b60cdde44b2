//! Diffusion and probability measures over traces and program samples.

mod centrality;
mod density;

pub use centrality::{
    minimal_cycle_map, time_centrality, write_metrics_csv, CentralityParams, CentralityResult, CentralityRow,
    CentralityVariant, Scoring, METRICS_CSV_HEADER,
};
pub use density::{
    complement_identity_check, tau_expected, tau_expected_on, tau_max, ComplementCheck, DiffusionDensity,
};

use std::collections::BTreeMap;

use num_bigint::BigUint;
use rand::RngCore;
use rayon::prelude::*;
use thiserror::Error;

use crate::machine::{run_bounded, sample_program, EstimatorBackend, Estimator, MachineError, Program};
use crate::runner::{cycle_one_outputs, Population, RunnerError};
use crate::temporal_graph::GraphError;
use crate::{Fraction, Natural};

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Runner(#[from] RunnerError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Machine(#[from] MachineError),
}

fn invalid(msg: impl Into<String>) -> MetricsError {
    MetricsError::InvalidArgument(msg.into())
}

/// Number of consecutive cycles, up to `c_max`, in which `p` halts when
/// reiterated on its own outputs starting from `w`.
pub fn survival_cycles(p: &Program, w: &Natural, c_max: u64, budget: u64) -> u64 {
    let mut v = w.clone();
    for c in 0..c_max {
        match run_bounded(p, &v, budget).value() {
            Some(next) => v = next.clone(),
            None => return c,
        }
    }
    c_max
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HaltingEstimate {
    pub w: Natural,
    pub c: u64,
    pub budget: u64,
    pub omega_hat: Fraction,
    pub sample_count: usize,
}

/// Survival lengths of a fixed program sample, answering Ω̂ for every cycle
/// bound up to `c_max` without rerunning anything.
#[derive(Debug, Clone)]
pub struct HaltingProfile {
    w: Natural,
    budget: u64,
    c_max: u64,
    survival: Vec<u64>,
}

impl HaltingProfile {
    pub fn build(programs: &[Program], w: &Natural, c_max: u64, budget: u64) -> Result<Self, MetricsError> {
        if programs.is_empty() {
            return Err(invalid("need at least one sampled program"));
        }
        let survival = programs
            .par_iter()
            .map(|p| survival_cycles(p, w, c_max, budget))
            .collect();
        Ok(HaltingProfile {
            w: w.clone(),
            budget,
            c_max,
            survival,
        })
    }

    pub fn c_max(&self) -> u64 {
        self.c_max
    }

    pub fn omega_hat(&self, c: u64) -> Result<HaltingEstimate, MetricsError> {
        if c == 0 || c > self.c_max {
            return Err(invalid(format!("cycle bound {c} outside 1..={}", self.c_max)));
        }
        let halting = self.survival.iter().filter(|&&s| s >= c).count();
        Ok(HaltingEstimate {
            w: self.w.clone(),
            c,
            budget: self.budget,
            omega_hat: Fraction::new(halting as u64, self.survival.len() as u64),
            sample_count: self.survival.len(),
        })
    }
}

/// Ω̂ over a given sample: the fraction that halts in each of the cycles
/// `1..=c`.
pub fn halting_fraction_on(programs: &[Program], w: &Natural, c: u64, budget: u64) -> Result<HaltingEstimate, MetricsError> {
    if c == 0 {
        return Err(invalid("cycle bound must be at least 1"));
    }
    HaltingProfile::build(programs, w, c, budget)?.omega_hat(c)
}

pub fn halting_fraction<R: RngCore>(
    w: &Natural,
    c: u64,
    budget: u64,
    samples: usize,
    rng: &mut R,
) -> Result<HaltingEstimate, MetricsError> {
    let programs = (0..samples)
        .map(|_| sample_program(rng))
        .collect::<Result<Vec<_>, _>>()?;
    halting_fraction_on(&programs, w, c, budget)
}

#[derive(Debug, Clone, PartialEq)]
pub enum GibbsCheck {
    Holds { support: usize, entropy_bits: f64 },
    Violated { support: usize, entropy_bits: f64 },
    Inapplicable,
}

impl GibbsCheck {
    pub fn holds(&self) -> bool {
        matches!(self, GibbsCheck::Holds { .. })
    }
}

/// Entropy of the empirical distribution of the given halting programs
/// against `lg` of its support size.
///
/// With counts `c_i` summing to `n` over `k` distinct programs,
/// `H <= lg k` is equivalent to `n^n <= k^n * prod c_i^c_i`, which is
/// decided exactly on big integers. The float entropy is informational.
pub fn gibbs_entropy_check(halting: &[Program]) -> GibbsCheck {
    let mut counts: BTreeMap<&Program, u32> = BTreeMap::new();
    for p in halting {
        *counts.entry(p).or_default() += 1;
    }
    if counts.is_empty() {
        return GibbsCheck::Inapplicable;
    }
    let n = halting.len() as u32;
    let k = counts.len();
    let mut rhs = BigUint::from(k).pow(n);
    for &c in counts.values().filter(|&&c| c > 1) {
        rhs *= BigUint::from(c).pow(c);
    }
    let lhs = BigUint::from(n).pow(n);
    let entropy_bits = counts
        .values()
        .map(|&c| {
            let q = f64::from(c) / f64::from(n);
            -q * q.log2()
        })
        .sum::<f64>()
        .max(0.0);
    if lhs <= rhs {
        GibbsCheck::Holds { support: k, entropy_bits }
    } else {
        GibbsCheck::Violated { support: k, entropy_bits }
    }
}

/// Inputs of the finite-scale lower bound. The constants default to 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowerBoundParams {
    pub tau_e: f64,
    pub omega: f64,
    pub n: u64,
    pub x: f64,
    pub a_w: f64,
    pub c5: f64,
    pub epsilon: f64,
    pub epsilon2: f64,
}

impl LowerBoundParams {
    pub fn new(tau_e: f64, omega: f64, n: u64, x: f64) -> Self {
        LowerBoundParams {
            tau_e,
            omega,
            n,
            x,
            a_w: 0.0,
            c5: 0.0,
            epsilon: 0.01,
            epsilon2: 0.01,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowerBound {
    pub value: f64,
    /// `τ_E − Ω`, the coefficient of `lg N`.
    pub leading_coefficient: f64,
}

/// `(τ_E − Ω)·lg N − Ω·lg x − 2Ω·lg lg x − A(w) − C5`.
pub fn lower_bound_eval(p: &LowerBoundParams) -> Result<LowerBound, MetricsError> {
    for (name, v) in [("tau_E", p.tau_e), ("omega", p.omega)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(invalid(format!("{name} = {v} outside [0, 1]")));
        }
    }
    if p.n < 2 {
        return Err(invalid("population size must be at least 2"));
    }
    if p.x.is_nan() || p.x < 2.0 {
        return Err(invalid(format!("x = {} below 2", p.x)));
    }
    let lead = p.tau_e - p.omega;
    let lg_x = p.x.log2();
    let value = lead * (p.n as f64).log2() - p.omega * lg_x - 2.0 * p.omega * lg_x.log2() - p.a_w - p.c5;
    Ok(LowerBound {
        value,
        leading_coefficient: lead,
    })
}

/// Largest cycle-1 output of a population and its estimated complexity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmaxEstimate {
    pub value: Natural,
    pub bits: u64,
    pub backend: EstimatorBackend,
    /// The configured backend had no answer and `bits` is the proxy's.
    pub fell_back: bool,
}

impl AmaxEstimate {
    /// Strictly larger complexity than `other`. An ExactTiny miss means the
    /// complexity lies beyond the enumeration cap, above every hit.
    pub fn exceeds(&self, other: &AmaxEstimate) -> bool {
        match (self.fell_back, other.fell_back) {
            (false, false) => self.bits > other.bits,
            (true, false) => self.backend == EstimatorBackend::ExactTiny,
            _ => false,
        }
    }
}

pub fn amax_estimate(pop: &Population, w: &Natural, budget: u64, est: &Estimator) -> AmaxEstimate {
    let value = cycle_one_outputs(pop, w, budget)
        .into_iter()
        .flatten()
        .max()
        .unwrap_or_default();
    let (e, fell_back) = est.estimate_or_fallback(&value);
    AmaxEstimate {
        value,
        bits: e.bits,
        backend: est.backend(),
        fell_back,
    }
}
