#![allow(dead_code)]

use bbig_core::temporal_graph::{Edge, TemporalGraph};
use proptest::prelude::*;

/// Random TVG with `n <= max_n` vertices and `t <= max_t` instants.
pub fn arb_graph(max_n: usize, max_t: usize) -> impl Strategy<Value = TemporalGraph> {
    (1..=max_n, 1..=max_t, any::<bool>()).prop_flat_map(|(n, t, undirected)| {
        let edge = (0..n, 0..t.saturating_sub(1).max(1), 0..n);
        let edges = prop::collection::vec(edge, 0..=3 * n * t);
        edges.prop_map(move |raw| {
            let edges = raw
                .into_iter()
                .filter(|&(_, at, _)| at + 1 < t)
                .map(|(u, at, v)| Edge::new(u, at, v));
            TemporalGraph::new(n, t, edges, undirected).unwrap()
        })
    })
}

/// Earliest arrival by exhaustive enumeration of journeys: at every instant a
/// walker either stays or takes one edge departing that instant.
pub fn journey_arrivals(g: &TemporalGraph, start: usize, source: usize) -> Vec<Option<u64>> {
    let mut best = vec![None; g.vertex_count()];
    walk(g, start, start, source, &mut best);
    best
}

fn walk(g: &TemporalGraph, start: usize, t: usize, v: usize, best: &mut [Option<u64>]) {
    let here = (t - start) as u64;
    if best[v].is_none_or(|b| here < b) {
        best[v] = Some(here);
    }
    if t + 1 >= g.instant_count() {
        return;
    }
    walk(g, start, t + 1, v, best);
    let hops: Vec<usize> = g.edges().iter().filter(|e| e.t == t && e.u == v).map(|e| e.v).collect();
    for w in hops {
        walk(g, start, t + 1, w, best);
    }
}

/// Journeys whose every transmitting vertex passes `may_send`.
pub fn journey_reach_filtered(
    g: &TemporalGraph,
    start: usize,
    source: usize,
    may_send: &dyn Fn(usize) -> bool,
) -> Vec<bool> {
    let mut seen = vec![false; g.vertex_count()];
    walk_filtered(g, start, source, may_send, &mut seen);
    seen
}

fn walk_filtered(g: &TemporalGraph, t: usize, v: usize, may_send: &dyn Fn(usize) -> bool, seen: &mut [bool]) {
    seen[v] = true;
    if t + 1 >= g.instant_count() {
        return;
    }
    walk_filtered(g, t + 1, v, may_send, seen);
    if may_send(v) {
        let hops: Vec<usize> = g.edges().iter().filter(|e| e.t == t && e.u == v).map(|e| e.v).collect();
        for w in hops {
            walk_filtered(g, t + 1, w, may_send, seen);
        }
    }
}
