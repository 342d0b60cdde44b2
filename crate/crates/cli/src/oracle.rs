//! Slow reference answers for the property suite, independent of the
//! simulator's own algorithms.

use bbig_core::temporal_graph::{Edge, TemporalGraph};
use bbig_core::{Extended, Fraction};
use rand::Rng;

/// Random TVG with `1..=max_n` vertices, `1..=max_t` instants and a random
/// edge density.
pub fn random_tvg<R: Rng>(rng: &mut R, max_n: usize, max_t: usize) -> TemporalGraph {
    let n = rng.gen_range(1..=max_n);
    let t = rng.gen_range(1..=max_t);
    let p: f64 = rng.gen_range(0.05..0.6);
    let undirected = rng.gen_bool(0.3);
    let mut edges = Vec::new();
    for at in 0..t.saturating_sub(1) {
        for u in 0..n {
            for v in 0..n {
                if rng.gen_bool(p) {
                    edges.push(Edge::new(u, at, v));
                }
            }
        }
    }
    TemporalGraph::new(n, t, edges, undirected).expect("edges drawn in range")
}

/// Earliest arrival from `source`, found by enumerating every journey: at
/// each instant the walker either stays put or takes one edge departing
/// then.
pub fn journey_arrivals(g: &TemporalGraph, start: usize, source: usize) -> Vec<Option<u64>> {
    let mut best = vec![None; g.vertex_count()];
    journeys(g, start, start, source, &mut best);
    best
}

fn journeys(g: &TemporalGraph, start: usize, t: usize, v: usize, best: &mut [Option<u64>]) {
    let here = (t - start) as u64;
    if best[v].is_none_or(|b| here < b) {
        best[v] = Some(here);
    }
    if t + 1 >= g.instant_count() {
        return;
    }
    journeys(g, start, t + 1, v, best);
    for e in g.edges().iter().filter(|e| e.t == t && e.u == v) {
        journeys(g, start, t + 1, e.v, best);
    }
}

/// Vertices some journey from `source` reaches when only vertices marked in
/// `may_send` can transmit.
pub fn journey_reach_via(g: &TemporalGraph, start: usize, source: usize, may_send: &[bool]) -> Vec<bool> {
    let mut seen = vec![false; g.vertex_count()];
    walk_via(g, start, source, may_send, &mut seen);
    seen
}

fn walk_via(g: &TemporalGraph, t: usize, v: usize, may_send: &[bool], seen: &mut [bool]) {
    seen[v] = true;
    if t + 1 >= g.instant_count() {
        return;
    }
    walk_via(g, t + 1, v, may_send, seen);
    if may_send[v] {
        for e in g.edges().iter().filter(|e| e.t == t && e.u == v) {
            walk_via(g, t + 1, e.v, may_send, seen);
        }
    }
}

/// `reach[u][v]`: some journey from `u` at `start` ends at `v`.
pub fn reachability(g: &TemporalGraph, start: usize) -> Vec<Vec<bool>> {
    (0..g.vertex_count())
        .map(|u| journey_arrivals(g, start, u).iter().map(Option::is_some).collect())
        .collect()
}

/// Cover time by the definition: per source, the least number of intervals
/// after which `ceil(tau·N)` vertices have been reached, averaged.
pub fn cover_time_by_journeys(g: &TemporalGraph, start: usize, tau: Fraction) -> Extended<Fraction> {
    let n = g.vertex_count() as u64;
    let need = (tau * Fraction::from_integer(n)).ceil().to_integer();
    let mut sum = 0;
    for s in 0..g.vertex_count() {
        let arr = journey_arrivals(g, start, s);
        let horizon = (g.instant_count() - start) as u64;
        match (0..horizon).find(|&k| arr.iter().filter(|a| a.is_some_and(|x| x <= k)).count() as u64 >= need) {
            Some(k) => sum += k,
            None => return Extended::Infinite,
        }
    }
    Extended::Finite(Fraction::new(sum, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use bbig_core::seed::rng_from_seed;
    use bbig_core::temporal_graph::{gen_static, path_arrows};

    #[test]
    fn path_journeys() {
        let g = gen_static(3, &path_arrows(3), true, 3).unwrap();
        assert_eq!(journey_arrivals(&g, 0, 0), vec![Some(0), Some(1), Some(2)]);
        assert_eq!(journey_arrivals(&g, 1, 0), vec![Some(0), Some(1), None]);
        assert_eq!(cover_time_by_journeys(&g, 0, Fraction::from_integer(1)), Extended::Finite(Fraction::new(5, 3)));
        assert!(reachability(&g, 2).iter().enumerate().all(|(u, row)| row.iter().filter(|&&r| r).count() == 1 && row[u]));
    }

    #[test]
    fn random_graphs_respect_limits() {
        let mut rng = rng_from_seed(3);
        for _ in 0..50 {
            let g = random_tvg(&mut rng, 8, 5);
            assert!(g.vertex_count() <= 8 && g.instant_count() <= 5);
        }
    }
}
