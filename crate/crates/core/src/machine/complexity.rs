//! Complexity estimators standing in for the uncomputable shortest-program
//! length.
//!
//! * `ExactTiny`: shortest program of at most `cap` bits that outputs the
//!   value on input 0 within the step budget, found by exhaustive
//!   enumeration. Always an upper bound on the budget-bounded complexity and
//!   exact whenever the true value is at most `cap`.
//! * `CompressProxy`: bit length of an LZ78 parse of the value's gamma code
//!   (format version [`COMPRESS_PROXY_VERSION`]).

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use super::enumerate::par_fold_programs;
use super::{elias_gamma, run_instructions, MachineError};
use crate::Natural;

pub const COMPRESS_PROXY_VERSION: u32 = 1;

/// Enumeration cap used when none is configured.
pub const DEFAULT_EXACT_CAP: u32 = 21;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EstimatorBackend {
    ExactTiny,
    CompressProxy,
}

impl fmt::Display for EstimatorBackend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EstimatorBackend::ExactTiny => "exact_tiny",
            EstimatorBackend::CompressProxy => "compress_proxy",
        })
    }
}

impl FromStr for EstimatorBackend {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact_tiny" => Ok(EstimatorBackend::ExactTiny),
            "compress_proxy" => Ok(EstimatorBackend::CompressProxy),
            other => Err(format!("unknown estimator `{other}` (exact_tiny | compress_proxy)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComplexityEstimate {
    pub bits: u64,
    pub backend: EstimatorBackend,
}

fn ceil_log2(x: u64) -> u64 {
    if x <= 1 {
        0
    } else {
        u64::from(64 - (x - 1).leading_zeros())
    }
}

/// LZ78 parse of the gamma code of `value`. Phrase `i` costs
/// `ceil(lg i)` bits for its prefix index plus one literal bit; an
/// unfinished last phrase costs only its index.
pub fn compress_proxy_bits(value: &Natural) -> u64 {
    let bits = elias_gamma(value);
    let mut dict: HashMap<(u64, bool), u64> = HashMap::new();
    let mut phrases = 0u64;
    let mut cur = 0u64;
    let mut out = 0u64;
    for b in bits {
        match dict.get(&(cur, b)) {
            Some(&next) => cur = next,
            None => {
                phrases += 1;
                out += ceil_log2(phrases) + 1;
                dict.insert((cur, b), phrases);
                cur = 0;
            }
        }
    }
    if cur != 0 {
        phrases += 1;
        out += ceil_log2(phrases);
    }
    out
}

/// Shortest program length per output value, over every program of at most
/// `cap` bits run on input 0.
#[derive(Debug, Clone)]
pub struct ExactTinyTable {
    cap: u32,
    budget: u64,
    shortest: HashMap<Natural, u32>,
}

impl ExactTinyTable {
    pub fn build(cap: u32, budget: u64) -> Result<Self, MachineError> {
        let zero = Natural::default();
        let shortest = par_fold_programs(
            cap,
            HashMap::new,
            |map: &mut HashMap<Natural, u32>, code, len| {
                if let Some(v) = run_instructions(code, &zero, budget).value() {
                    let len = len as u32;
                    map.entry(v.clone())
                        .and_modify(|l| *l = (*l).min(len))
                        .or_insert(len);
                }
            },
            |mut a, b| {
                for (v, l) in b {
                    a.entry(v).and_modify(|x| *x = (*x).min(l)).or_insert(l);
                }
                a
            },
        )?;
        Ok(ExactTinyTable { cap, budget, shortest })
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn lookup(&self, value: &Natural) -> Option<u32> {
        self.shortest.get(value).copied()
    }

    pub fn len(&self) -> usize {
        self.shortest.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shortest.is_empty()
    }

    /// Least-squares fit `bits ~ slope * lg(v) + intercept` over the
    /// tabulated values `v >= 1`; the language's own growth constant.
    pub fn log_fit(&self) -> Option<(f64, f64)> {
        let pts: Vec<(f64, f64)> = self
            .shortest
            .iter()
            .filter_map(|(v, &l)| {
                let x = v.to_string().parse::<f64>().ok()?;
                (x >= 1.0).then(|| (x.log2(), f64::from(l)))
            })
            .collect();
        if pts.len() < 2 {
            return None;
        }
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        if sxx == 0.0 {
            return None;
        }
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let slope = sxy / sxx;
        Some((slope, my - slope * mx))
    }
}

/// A configured complexity estimator. The ExactTiny backend owns its
/// enumeration table, built once at construction.
#[derive(Debug, Clone)]
pub struct Estimator {
    backend: EstimatorBackend,
    table: Option<Arc<ExactTinyTable>>,
}

impl Estimator {
    pub fn compress_proxy() -> Self {
        Estimator {
            backend: EstimatorBackend::CompressProxy,
            table: None,
        }
    }

    pub fn exact_tiny(cap: u32, budget: u64) -> Result<Self, MachineError> {
        Ok(Estimator {
            backend: EstimatorBackend::ExactTiny,
            table: Some(Arc::new(ExactTinyTable::build(cap, budget)?)),
        })
    }

    pub fn from_table(table: Arc<ExactTinyTable>) -> Self {
        Estimator {
            backend: EstimatorBackend::ExactTiny,
            table: Some(table),
        }
    }

    pub fn new(backend: EstimatorBackend, cap: u32, budget: u64) -> Result<Self, MachineError> {
        match backend {
            EstimatorBackend::ExactTiny => Estimator::exact_tiny(cap, budget),
            EstimatorBackend::CompressProxy => Ok(Estimator::compress_proxy()),
        }
    }

    pub fn backend(&self) -> EstimatorBackend {
        self.backend
    }

    pub fn table(&self) -> Option<&ExactTinyTable> {
        self.table.as_deref()
    }

    pub fn estimate(&self, value: &Natural) -> Result<ComplexityEstimate, MachineError> {
        match &self.table {
            None => Ok(ComplexityEstimate {
                bits: compress_proxy_bits(value),
                backend: EstimatorBackend::CompressProxy,
            }),
            Some(table) => table
                .lookup(value)
                .map(|l| ComplexityEstimate {
                    bits: u64::from(l),
                    backend: EstimatorBackend::ExactTiny,
                })
                .ok_or_else(|| MachineError::EstimateUnavailable {
                    value: value.to_string(),
                    cap: table.cap,
                }),
        }
    }

    /// Estimate, falling back to the compression proxy when the configured
    /// backend has no answer; the flag reports the fallback.
    pub fn estimate_or_fallback(&self, value: &Natural) -> (ComplexityEstimate, bool) {
        match self.estimate(value) {
            Ok(e) => (e, false),
            Err(_) => (
                ComplexityEstimate {
                    bits: compress_proxy_bits(value),
                    backend: EstimatorBackend::CompressProxy,
                },
                true,
            ),
        }
    }
}

/// One-shot estimate. For ExactTiny this enumerates to
/// [`DEFAULT_EXACT_CAP`] bits on every call; build an [`Estimator`] to reuse
/// the table.
pub fn complexity_estimate(
    value: &Natural,
    backend: EstimatorBackend,
    budget: u64,
) -> Result<ComplexityEstimate, MachineError> {
    Estimator::new(backend, DEFAULT_EXACT_CAP, budget)?.estimate(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat(n: u64) -> Natural {
        Natural::from(n)
    }

    #[test]
    fn ceil_log2_values() {
        assert_eq!(
            [1, 2, 3, 4, 5, 8, 9].map(ceil_log2),
            [0, 1, 2, 2, 3, 3, 4]
        );
    }

    #[test]
    fn proxy_known_values() {
        // gamma(1) = "1": one phrase, no index bits
        assert_eq!(compress_proxy_bits(&nat(0)), 1);
        // gamma(3) = "011": phrases 0 | 1 | 1(partial) -> 1 + 2 + 2
        assert_eq!(compress_proxy_bits(&nat(2)), 5);
        assert_eq!(compress_proxy_bits(&nat(123_456)), compress_proxy_bits(&nat(123_456)));
    }

    #[test]
    fn proxy_grows_with_magnitude() {
        let small = compress_proxy_bits(&nat(10));
        let large = compress_proxy_bits(&(Natural::from(3u8).pow(200)));
        assert!(large > small);
    }

    #[test]
    fn exact_tiny_small_values() {
        let est = Estimator::exact_tiny(12, 100).unwrap();
        assert_eq!(est.estimate(&nat(0)).unwrap().bits, 3);
        assert_eq!(est.estimate(&nat(1)).unwrap().bits, 6);
        assert_eq!(est.estimate(&nat(2)).unwrap().bits, 9);
        assert!(matches!(
            est.estimate(&nat(1000)),
            Err(MachineError::EstimateUnavailable { cap: 12, .. })
        ));
        let (e, fell_back) = est.estimate_or_fallback(&nat(1000));
        assert!(fell_back);
        assert_eq!(e.backend, EstimatorBackend::CompressProxy);
    }

    #[test]
    fn one_shot_estimates() {
        let e = complexity_estimate(&nat(0), EstimatorBackend::ExactTiny, 100).unwrap();
        assert_eq!(e.bits, 3);
        let a = complexity_estimate(&nat(77), EstimatorBackend::CompressProxy, 1).unwrap();
        let b = complexity_estimate(&nat(77), EstimatorBackend::CompressProxy, 1).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn backend_names_roundtrip() {
        for b in [EstimatorBackend::ExactTiny, EstimatorBackend::CompressProxy] {
            assert_eq!(b.to_string().parse::<EstimatorBackend>().unwrap(), b);
        }
        assert!("gzip".parse::<EstimatorBackend>().is_err());
    }
}
