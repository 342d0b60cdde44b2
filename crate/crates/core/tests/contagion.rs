mod common;

use bbig_core::machine::{Instruction, Program};
use bbig_core::runner::{
    cycle_one_outputs, run_networked_on, Binding, Population, RelayPolicy, RunOptions, RunTrace,
};
use bbig_core::seed::rng_from_seed;
use bbig_core::temporal_graph::TemporalGraph;
use bbig_core::Natural;
use common::{arb_graph, journey_arrivals, journey_reach_filtered};
use proptest::prelude::*;
use rand::seq::SliceRandom;

/// Either small constants (plenty of ties) or sampled programs, some of
/// which never halt.
fn outputs_for(n: usize, constants: Option<Vec<u8>>, seed: u64) -> Vec<Option<Natural>> {
    let pop = match constants {
        Some(c) => Population::new(
            c.iter()
                .cycle()
                .take(n)
                .map(|&v| Program::from_body(&vec![Instruction::Inc; v as usize]).unwrap())
                .collect(),
        )
        .unwrap(),
        None => Population::sample(n, &mut rng_from_seed(seed)).unwrap(),
    };
    cycle_one_outputs(&pop, &Natural::default(), 300)
}

fn arb_case() -> impl Strategy<Value = (TemporalGraph, Vec<Option<Natural>>, Binding, usize)> {
    arb_graph(8, 5).prop_flat_map(|g| {
        let n = g.vertex_count();
        let consts = prop::option::of(prop::collection::vec(0u8..4, 1..=8));
        (Just(g), consts, any::<u64>(), Just((1..=n).collect::<Vec<_>>()).prop_shuffle(), 0usize..5)
            .prop_map(move |(g, c, seed, labels, start)| {
                let outputs = outputs_for(n, c, seed);
                let start = start % g.instant_count();
                (g, outputs, Binding::new(labels, 0, None).unwrap(), start)
            })
    })
}

fn value(outputs: &[Option<Natural>], label: usize) -> Natural {
    outputs[label - 1].clone().unwrap_or_default()
}

/// (value desc, label asc): the carrier every node should end up with.
fn better(outputs: &[Option<Natural>], a: usize, b: usize) -> bool {
    let (va, vb) = (value(outputs, a), value(outputs, b));
    va > vb || (va == vb && a < b)
}

fn run(g: &TemporalGraph, outputs: &[Option<Natural>], b: &Binding, start: usize, relay: RelayPolicy) -> RunTrace {
    run_networked_on(g, outputs, b, &Natural::default(), RunOptions { start, relay }).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn finals_are_the_best_reachable_value((g, outputs, b, start) in arb_case()) {
        let tr = run(&g, &outputs, &b, start, RelayPolicy::Relay);
        for v in 0..g.vertex_count() {
            let label = b.node_at(v);
            let mut best = label;
            for u in 0..g.vertex_count() {
                let reached = journey_arrivals(&g, start, u)[v].is_some();
                if reached && better(&outputs, b.node_at(u), best) {
                    best = b.node_at(u);
                }
            }
            prop_assert_eq!(tr.carrier(tr.steps() - 1, label), best);
            prop_assert_eq!(tr.carried_final(label), &value(&outputs, best));
            if outputs[label - 1].is_none() {
                prop_assert!(tr.oracle_triggered(label));
                prop_assert_eq!(tr.final_output(label), &Natural::default());
            } else {
                prop_assert_eq!(tr.final_output(label), &value(&outputs, best));
                prop_assert!(tr.final_output(label) >= &value(&outputs, label));
            }
        }
    }

    #[test]
    fn silent_oracles_block_their_journeys((g, outputs, b, start) in arb_case()) {
        let tr = run(&g, &outputs, &b, start, RelayPolicy::Silent);
        let may_send = |v: usize| outputs[b.node_at(v) - 1].is_some();
        for v in 0..g.vertex_count() {
            let label = b.node_at(v);
            let mut best = label;
            for u in 0..g.vertex_count() {
                let reach = journey_reach_filtered(&g, start, u, &may_send);
                if reach[v] && better(&outputs, b.node_at(u), best) {
                    best = b.node_at(u);
                }
            }
            prop_assert_eq!(tr.carrier(tr.steps() - 1, label), best);
        }
    }

    #[test]
    fn holders_of_the_maximum_never_shrink((g, outputs, b, start) in arb_case()) {
        let tr = run(&g, &outputs, &b, start, RelayPolicy::Relay);
        let top = tr.cycle_one_values().iter().max().unwrap().clone();
        let mut prev = 0;
        for k in 0..tr.steps() {
            let holders = (1..=g.vertex_count()).filter(|&l| tr.value(k, l) == &top).count();
            prop_assert!(holders >= prev);
            prev = holders;
            for l in 1..=g.vertex_count() {
                prop_assert_eq!(tr.lineage(k, l), tr.carrier(k, l));
                prop_assert_eq!(tr.partial_output(k, l).value, tr.value(k, l).clone());
            }
        }
        for l in 1..=g.vertex_count() {
            prop_assert_eq!(tr.lineage(0, l), l);
        }
    }

    #[test]
    fn round_order_does_not_matter((g, outputs, b, start) in arb_case(), order_seed in any::<u64>()) {
        let tr = run(&g, &outputs, &b, start, RelayPolicy::Relay);
        // reference: pull from the previous snapshot, vertices in random order
        let n = g.vertex_count();
        let mut order: Vec<usize> = (0..n).collect();
        let mut rng = rng_from_seed(order_seed);
        let mut cur: Vec<usize> = (0..n).map(|v| b.node_at(v)).collect();
        for (k, t) in (start..g.instant_count()).enumerate() {
            for (v, &held) in cur.iter().enumerate() {
                prop_assert_eq!(tr.carrier(k, b.node_at(v)), held);
            }
            if t + 1 == g.instant_count() {
                break;
            }
            order.shuffle(&mut rng);
            let mut next = cur.clone();
            for &v in &order {
                for e in g.edges_at(t).iter().filter(|e| e.v == v) {
                    if better(&outputs, cur[e.u], next[v]) {
                        next[v] = cur[e.u];
                    }
                }
            }
            cur = next;
        }
    }
}
