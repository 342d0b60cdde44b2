mod common;

use bbig_core::machine::sample_program;
use bbig_core::metrics::{
    complement_identity_check, gibbs_entropy_check, lower_bound_eval, tau_max, ComplementCheck, HaltingProfile,
    LowerBoundParams,
};
use bbig_core::runner::{run_networked, Binding, Population};
use bbig_core::seed::rng_from_seed;
use bbig_core::temporal_graph::{dt, TemporalGraph};
use bbig_core::{Extended, Fraction, Natural};
use common::arb_graph;
use proptest::prelude::*;

fn trace_for(g: &TemporalGraph, seed: u64) -> bbig_core::runner::RunTrace {
    let pop = Population::sample(g.vertex_count(), &mut rng_from_seed(seed)).unwrap();
    run_networked(g, &pop, &Binding::identity(g.vertex_count()), &Natural::default(), 300).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn tau_max_tracks_the_source_reach(g in arb_graph(8, 5), seed in any::<u64>()) {
        let tr = trace_for(&g, seed);
        let source = tr.binding().vertex_of(tr.argmax_label());
        let full = dt(&g, 0, source, Fraction::from_integer(1)).unwrap();
        let mut prev = Fraction::from_integer(0);
        for t_end in 0..g.instant_count() {
            let d = tau_max(&tr, 0, t_end).unwrap().fraction;
            prop_assert!(d >= prev);
            prev = d;
            let complete = matches!(full, Extended::Finite(k) if t_end as u64 >= k);
            prop_assert_eq!(d == Fraction::from_integer(1), complete);
        }
    }

    #[test]
    fn complement_holds_on_covered_runs(g in arb_graph(8, 5), seed in any::<u64>()) {
        let tr = trace_for(&g, seed);
        let source = tr.binding().vertex_of(tr.argmax_label());
        let covered = dt(&g, 0, source, Fraction::from_integer(1)).unwrap().is_finite();
        for t_mid in 0..g.instant_count() {
            let check = complement_identity_check(&tr, 0, t_mid).unwrap();
            if covered {
                prop_assert!(check.holds(), "{:?}", check);
            } else {
                prop_assert_eq!(check, ComplementCheck::Inapplicable);
            }
        }
    }

    #[test]
    fn gibbs_holds_on_sampled_sets(seed in any::<u64>(), size in 1usize..400) {
        let mut rng = rng_from_seed(seed);
        let programs: Vec<_> = (0..size).map(|_| sample_program(&mut rng).unwrap()).collect();
        prop_assert!(gibbs_entropy_check(&programs).holds());
    }
}

#[test]
fn omega_monotone_in_cycles_and_budget() {
    let mut rng = rng_from_seed(5);
    let programs: Vec<_> = (0..3000).map(|_| sample_program(&mut rng).unwrap()).collect();
    let w = Natural::default();
    let budgets = [10, 100, 1000];
    let profiles: Vec<_> = budgets
        .iter()
        .map(|&b| HaltingProfile::build(&programs, &w, 8, b).unwrap())
        .collect();
    for c in 1..=8 {
        for pair in profiles.windows(2) {
            assert!(pair[0].omega_hat(c).unwrap().omega_hat <= pair[1].omega_hat(c).unwrap().omega_hat);
        }
        if c > 1 {
            for p in &profiles {
                assert!(p.omega_hat(c).unwrap().omega_hat <= p.omega_hat(c - 1).unwrap().omega_hat);
            }
        }
    }
}

#[test]
fn lower_bound_is_monotone_on_a_grid() {
    let h = 1e-3;
    for n in [4u64, 16, 1024] {
        for x in [4.0, 7.5, 30.0] {
            for i in 1..10 {
                for j in 1..10 {
                    let (tau, omega) = (f64::from(i) / 10.0, f64::from(j) / 10.0);
                    let at = |t: f64, o: f64| lower_bound_eval(&LowerBoundParams::new(t, o, n, x)).unwrap().value;
                    let base = at(tau, omega);
                    assert!(at(tau + h, omega) > base);
                    assert!(at(tau, omega + h) < base);
                }
            }
        }
    }
}
