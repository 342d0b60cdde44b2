use rand::RngCore;

use super::{invalid, MetricsError};
use crate::runner::{cycle_one_outputs, run_networked_on, sample_bindings, Population, RunOptions, RunTrace};
use crate::temporal_graph::TemporalGraph;
use crate::{Fraction, Natural};

/// Share of the population whose output descends from the best node within
/// the window `t ..= t_end`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiffusionDensity {
    pub t_start: usize,
    pub t: usize,
    pub t_end: usize,
    pub fraction: Fraction,
}

fn descendants(trace: &RunTrace, step: usize, source: usize) -> usize {
    (1..=trace.population_size())
        .filter(|&label| trace.lineage(step, label) == source)
        .count()
}

fn step(trace: &RunTrace, t: usize) -> Result<usize, MetricsError> {
    trace.step_of_instant(t).ok_or_else(|| {
        invalid(format!(
            "instant {t} outside the trace ({}..={})",
            trace.start(),
            trace.last_instant()
        ))
    })
}

/// Nodes that came to carry the cycle-1 maximum during `(t, t_end]`; a
/// window opening at the diffusion start also counts the source itself.
pub fn tau_max(trace: &RunTrace, t: usize, t_end: usize) -> Result<DiffusionDensity, MetricsError> {
    if t > t_end {
        return Err(invalid(format!("window {t}..={t_end} is reversed")));
    }
    let (k, k_end) = (step(trace, t)?, step(trace, t_end)?);
    let source = trace.argmax_label();
    let mut count = descendants(trace, k_end, source);
    if k > 0 {
        count -= descendants(trace, k, source);
    }
    Ok(DiffusionDensity {
        t_start: trace.start(),
        t,
        t_end,
        fraction: Fraction::new(count as u64, trace.population_size() as u64),
    })
}

/// Mean `tau_max` over bindings for a diffusion starting at `t`, computed
/// from precomputed cycle-1 outputs.
pub fn tau_expected_on<R: RngCore>(
    g: &TemporalGraph,
    outputs: &[Option<Natural>],
    w: &Natural,
    m: usize,
    rng: &mut R,
    t: usize,
    t_end: usize,
) -> Result<Fraction, MetricsError> {
    if m == 0 {
        return Err(invalid("need at least one binding"));
    }
    let n = outputs.len();
    let (bindings, _) = sample_bindings(n, m, 0, rng);
    let opts = RunOptions {
        start: t,
        ..RunOptions::default()
    };
    let mut reached = 0u64;
    for b in &bindings {
        let trace = run_networked_on(g, outputs, b, w, opts)?;
        let d = tau_max(&trace, t, t_end)?;
        reached += *d.fraction.numer() * (n as u64 / *d.fraction.denom());
    }
    Ok(Fraction::new(reached, (n * bindings.len()) as u64))
}

#[allow(clippy::too_many_arguments)]
pub fn tau_expected<R: RngCore>(
    g: &TemporalGraph,
    pop: &Population,
    w: &Natural,
    budget: u64,
    m: usize,
    rng: &mut R,
    t: usize,
    t_end: usize,
) -> Result<Fraction, MetricsError> {
    if budget == 0 {
        return Err(invalid("budget must be at least 1"));
    }
    let outputs = cycle_one_outputs(pop, w, budget);
    tau_expected_on(g, &outputs, w, m, rng, t, t_end)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComplementCheck {
    /// `first + second == 1`.
    Holds { first: Fraction, second: Fraction },
    Violated { first: Fraction, second: Fraction },
    /// The maximum never reaches every node within the trace.
    Inapplicable,
}

impl ComplementCheck {
    pub fn holds(&self) -> bool {
        matches!(self, ComplementCheck::Holds { .. })
    }
}

/// Splits the diffusion at `t_mid`: the share reached by `t_mid` plus the
/// share first reached afterwards until full coverage must be exactly 1.
pub fn complement_identity_check(trace: &RunTrace, t: usize, t_mid: usize) -> Result<ComplementCheck, MetricsError> {
    if t != trace.start() {
        return Err(invalid(format!("the trace's diffusion starts at {}, not {t}", trace.start())));
    }
    let n = trace.population_size();
    let source = trace.argmax_label();
    let Some(full) = (0..trace.steps()).find(|&k| descendants(trace, k, source) == n) else {
        return Ok(ComplementCheck::Inapplicable);
    };
    let k_mid = step(trace, t_mid)?;
    let k_full = full.max(k_mid);
    let first = tau_max(trace, t, t_mid)?.fraction;
    // newly reached after t_mid, even when t_mid is the start itself
    let late = descendants(trace, k_full, source) - descendants(trace, k_mid, source);
    let second = Fraction::new(late as u64, n as u64);
    Ok(if first + second == Fraction::from_integer(1) {
        ComplementCheck::Holds { first, second }
    } else {
        ComplementCheck::Violated { first, second }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::{Instruction::Inc, Program};
    use crate::runner::{run_networked, Binding};
    use crate::seed::rng_from_seed;
    use crate::temporal_graph::{complete_arrows, gen_static, path_arrows, ring_arrows};

    fn constants(values: &[usize]) -> Population {
        Population::new(values.iter().map(|&v| Program::from_body(&vec![Inc; v]).unwrap()).collect()).unwrap()
    }

    fn zero() -> Natural {
        Natural::default()
    }

    fn path_trace() -> RunTrace {
        let g = gen_static(3, &path_arrows(3), true, 4).unwrap();
        run_networked(&g, &constants(&[5, 1, 2]), &Binding::identity(3), &zero(), 100).unwrap()
    }

    #[test]
    fn tau_max_examples() {
        let g = gen_static(4, &complete_arrows(4), false, 3).unwrap();
        let tr = run_networked(&g, &constants(&[1, 3, 2, 0]), &Binding::identity(4), &zero(), 100).unwrap();
        assert_eq!(tau_max(&tr, 0, 1).unwrap().fraction, Fraction::from_integer(1));
        assert_eq!(tau_max(&tr, 0, 0).unwrap().fraction, Fraction::new(1, 4));
        let tr = path_trace();
        assert_eq!(tau_max(&tr, 0, 1).unwrap().fraction, Fraction::new(2, 3));
        assert_eq!(tau_max(&tr, 1, 2).unwrap().fraction, Fraction::new(1, 3));
        assert!(tau_max(&tr, 2, 1).is_err());
        assert!(tau_max(&tr, 0, 9).is_err());
    }

    #[test]
    fn complement_examples() {
        let tr = path_trace();
        assert_eq!(
            complement_identity_check(&tr, 0, 1).unwrap(),
            ComplementCheck::Holds {
                first: Fraction::new(2, 3),
                second: Fraction::new(1, 3)
            }
        );
        assert!(complement_identity_check(&tr, 0, 3).unwrap().holds());
        let g = gen_static(3, &[], false, 3).unwrap();
        let tr = run_networked(&g, &constants(&[1, 2, 3]), &Binding::identity(3), &zero(), 100).unwrap();
        assert_eq!(complement_identity_check(&tr, 0, 1).unwrap(), ComplementCheck::Inapplicable);
        assert!(complement_identity_check(&tr, 1, 1).is_err());
    }

    #[test]
    fn expected_density_is_binding_free_on_rings() {
        let g = gen_static(5, &ring_arrows(5), false, 4).unwrap();
        let pop = constants(&[2, 0, 4, 1, 3]);
        let single = tau_expected(&g, &pop, &zero(), 100, 1, &mut rng_from_seed(1), 0, 2).unwrap();
        let many = tau_expected(&g, &pop, &zero(), 100, 13, &mut rng_from_seed(2), 0, 2).unwrap();
        assert_eq!(single, Fraction::new(3, 5));
        assert_eq!(single, many);
    }

    #[test]
    fn expected_density_on_path_is_the_exhaustive_mean() {
        let g = gen_static(3, &path_arrows(3), true, 3).unwrap();
        let pop = constants(&[5, 1, 2]);
        // max at an end: 2/3 after one hop; in the middle: 3/3
        let exact = Fraction::new(4 * 2 + 2 * 3, 18);
        assert_eq!(tau_expected(&g, &pop, &zero(), 100, 6, &mut rng_from_seed(0), 0, 1).unwrap(), exact);
    }
}
