use rand::RngCore;

use super::game::{cycle_one_outputs, run_isolated, run_networked_on, RunOptions};
use super::{Binding, Population, RunnerError};
use crate::machine::{compress_proxy_bits, Estimator};
use crate::temporal_graph::TemporalGraph;
use crate::Natural;

/// Emergent complexity of one node. `fallback` is set when the configured
/// backend could not price one of the two outputs, in which case both sides
/// were priced by the compression proxy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EacEntry {
    pub eac: i64,
    pub fallback: bool,
}

#[derive(Debug, Clone, Copy)]
struct Priced {
    primary: Option<u64>,
    proxy: u64,
}

fn price(est: &Estimator, v: &Natural) -> Priced {
    Priced {
        primary: est.estimate(v).ok().map(|e| e.bits),
        proxy: compress_proxy_bits(v),
    }
}

fn difference(net: Priced, iso: Priced) -> EacEntry {
    match (net.primary, iso.primary) {
        (Some(a), Some(b)) => EacEntry {
            eac: a as i64 - b as i64,
            fallback: false,
        },
        _ => EacEntry {
            eac: net.proxy as i64 - iso.proxy as i64,
            fallback: true,
        },
    }
}

/// Per-node `Â(networked) − Â(isolated)`, indexed by `label - 1`.
pub fn eac_estimates(net: &[Natural], iso: &[Natural], est: &Estimator) -> Result<Vec<EacEntry>, RunnerError> {
    if net.len() != iso.len() {
        return Err(RunnerError::InvalidArgument(format!(
            "{} networked outputs against {} isolated ones",
            net.len(),
            iso.len()
        )));
    }
    Ok(net
        .iter()
        .zip(iso)
        .map(|(a, b)| difference(price(est, a), price(est, b)))
        .collect())
}

/// Bindings to average over: every permutation when `m` covers all `n!`
/// of them, otherwise `m` uniform draws. The flag reports exhaustiveness.
pub fn sample_bindings<R: RngCore>(n: usize, m: usize, c0: u64, rng: &mut R) -> (Vec<Binding>, bool) {
    let factorial = (1..=n).try_fold(1usize, |acc, k| acc.checked_mul(k));
    match factorial {
        Some(f) if n <= 8 && m >= f => (Binding::all(n, c0), true),
        _ => ((0..m).map(|_| Binding::random(n, c0, rng)).collect(), false),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EeacEstimate {
    /// Mean over bindings of the node-averaged EAC.
    pub mean: f64,
    pub std_error: f64,
    pub per_binding: Vec<f64>,
    pub exhaustive: bool,
    /// Node outputs priced by the proxy instead of the configured backend.
    pub fallbacks: usize,
}

/// Expected emergent complexity over bindings. The isolated baseline runs
/// for as many cycles as the networked run.
#[allow(clippy::too_many_arguments)]
pub fn eeac_estimate<R: RngCore>(
    g: &TemporalGraph,
    pop: &Population,
    w: &Natural,
    budget: u64,
    m: usize,
    rng: &mut R,
    est: &Estimator,
    c0: u64,
    opts: RunOptions,
) -> Result<EeacEstimate, RunnerError> {
    if m == 0 || budget == 0 {
        return Err(RunnerError::InvalidArgument("need at least one binding and one step".into()));
    }
    let n = pop.len();
    let (bindings, exhaustive) = sample_bindings(n, m, c0, rng);

    if pop.len() != g.vertex_count() {
        return Err(RunnerError::SizeMismatch {
            binding: pop.len(),
            graph: g.vertex_count(),
        });
    }
    let outputs = cycle_one_outputs(pop, w, budget);
    let cycle_one_priced: Vec<Priced> = outputs
        .iter()
        .map(|o| price(est, &o.clone().unwrap_or_default()))
        .collect();
    let mut iso_priced = None;
    let zero = price(est, &Natural::default());
    let mut per_binding = Vec::with_capacity(bindings.len());
    let mut fallbacks = 0;
    for b in &bindings {
        let trace = run_networked_on(g, &outputs, b, w, opts)?;
        let iso: &Vec<Priced> = match &iso_priced {
            Some(v) => v,
            None => {
                let finals = run_isolated(pop, w, trace.total_cycles(), budget)?;
                iso_priced.insert(finals.iter().map(|v| price(est, v)).collect())
            }
        };
        let mut sum = 0i64;
        for label in 1..=n {
            let net = if trace.oracle_triggered(label) {
                zero
            } else {
                cycle_one_priced[trace.carrier(trace.steps() - 1, label) - 1]
            };
            let e = difference(net, iso[label - 1]);
            sum += e.eac;
            fallbacks += usize::from(e.fallback);
        }
        per_binding.push(sum as f64 / n as f64);
    }

    let k = per_binding.len() as f64;
    let mean = per_binding.iter().sum::<f64>() / k;
    let std_error = if per_binding.len() < 2 {
        0.0
    } else {
        let var = per_binding.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0);
        (var / k).sqrt()
    };
    Ok(EeacEstimate {
        mean,
        std_error,
        per_binding,
        exhaustive,
        fallbacks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::Instruction::{self, *};
    use crate::machine::Program;
    use crate::seed::rng_from_seed;
    use crate::temporal_graph::{complete_arrows, gen_static, path_arrows};

    fn prog(body: &[Instruction]) -> Program {
        Program::from_body(body).unwrap()
    }

    fn nat(n: u64) -> Natural {
        Natural::from(n)
    }

    #[test]
    fn equal_sides_give_zero() {
        let est = Estimator::compress_proxy();
        let v = vec![nat(0), nat(17), nat(3)];
        let out = eac_estimates(&v, &v, &est).unwrap();
        assert!(out.iter().all(|e| e.eac == 0 && !e.fallback));
        assert!(eac_estimates(&v, &v[..2], &est).is_err());
    }

    #[test]
    fn exact_tiny_difference_and_fallback() {
        let est = Estimator::exact_tiny(12, 100).unwrap();
        let out = eac_estimates(&[nat(2), nat(10_000)], &[nat(1), nat(0)], &est).unwrap();
        assert_eq!(out[0], EacEntry { eac: 3, fallback: false });
        assert!(out[1].fallback);
        assert_eq!(
            out[1].eac,
            compress_proxy_bits(&nat(10_000)) as i64 - compress_proxy_bits(&nat(0)) as i64
        );
    }

    #[test]
    fn binding_sampling_switches_to_exhaustive() {
        let mut rng = rng_from_seed(1);
        assert_eq!(sample_bindings(3, 6, 0, &mut rng), (Binding::all(3, 0), true));
        let (b, ex) = sample_bindings(3, 5, 0, &mut rng);
        assert_eq!((b.len(), ex), (5, false));
        let (b, ex) = sample_bindings(12, 7, 0, &mut rng);
        assert_eq!((b.len(), ex), (7, false));
    }

    #[test]
    fn single_node_single_binding() {
        let g = gen_static(1, &[], false, 2).unwrap();
        let pop = Population::new(vec![prog(&[LoadW, Inc])]).unwrap();
        let est = Estimator::compress_proxy();
        let e = eeac_estimate(&g, &pop, &nat(0), 100, 1, &mut rng_from_seed(0), &est, 0, RunOptions::default())
            .unwrap();
        // networked: 1; isolated over 3 cycles: 3
        let direct = eac_estimates(&[nat(1)], &[nat(3)], &est).unwrap()[0].eac;
        assert_eq!(e.mean, direct as f64);
        assert_eq!(e.std_error, 0.0);
    }

    #[test]
    fn complete_graph_has_no_binding_dispersion() {
        let g = gen_static(5, &complete_arrows(5), false, 3).unwrap();
        let pop = Population::sample(5, &mut rng_from_seed(4)).unwrap();
        let est = Estimator::compress_proxy();
        let e = eeac_estimate(&g, &pop, &nat(0), 1000, 10, &mut rng_from_seed(5), &est, 0, RunOptions::default())
            .unwrap();
        assert_eq!(e.std_error, 0.0);
        assert!(e.per_binding.iter().all(|&x| x == e.mean));
    }

    #[test]
    fn path_average_matches_manual_enumeration() {
        let g = gen_static(3, &path_arrows(3), true, 2).unwrap();
        let pop = Population::new(vec![prog(&[Inc, Inc, Inc]), prog(&[Inc]), prog(&[LoadW])]).unwrap();
        let est = Estimator::compress_proxy();
        let e = eeac_estimate(&g, &pop, &nat(0), 100, 6, &mut rng_from_seed(0), &est, 0, RunOptions::default())
            .unwrap();
        assert!(e.exhaustive);
        let mut manual = 0.0;
        for b in Binding::all(3, 0) {
            let tr = crate::runner::run_networked(&g, &pop, &b, &nat(0), 100).unwrap();
            let iso = run_isolated(&pop, &nat(0), tr.total_cycles(), 100).unwrap();
            let eac = eac_estimates(tr.final_outputs(), &iso, &est).unwrap();
            manual += eac.iter().map(|x| x.eac as f64).sum::<f64>() / 3.0;
        }
        assert!((e.mean - manual / 6.0).abs() < 1e-12);
    }
}
