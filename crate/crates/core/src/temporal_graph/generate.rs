use rand::Rng;

use super::{temporal_diameter, Edge, GraphError, TemporalGraph};
use crate::seed::sub_rng;
use crate::Extended;

pub fn complete_arrows(n: usize) -> Vec<(usize, usize)> {
    let mut arrows = Vec::with_capacity(n * n.saturating_sub(1));
    for u in 0..n {
        for v in 0..n {
            if u != v {
                arrows.push((u, v));
            }
        }
    }
    arrows
}

/// Directed ring `0 -> 1 -> ... -> n-1 -> 0`.
pub fn ring_arrows(n: usize) -> Vec<(usize, usize)> {
    if n < 2 {
        return Vec::new();
    }
    (0..n).map(|u| (u, (u + 1) % n)).collect()
}

/// Path `0 - 1 - ... - n-1` as one arrow per link; pair with `undirected`.
pub fn path_arrows(n: usize) -> Vec<(usize, usize)> {
    (1..n).map(|v| (v - 1, v)).collect()
}

/// Replicates one snapshot at every departing instant.
pub fn gen_static(
    n: usize,
    base: &[(usize, usize)],
    undirected: bool,
    instants: usize,
) -> Result<TemporalGraph, GraphError> {
    let departures = instants.saturating_sub(1);
    let edges = (0..departures).flat_map(|t| base.iter().map(move |&(u, v)| Edge::new(u, t, v)));
    TemporalGraph::new(n, instants, edges, undirected)
}

/// No edges before `gate`, complete snapshots from `gate` on.
pub fn gen_gated_complete(n: usize, gate: usize, instants: usize) -> Result<TemporalGraph, GraphError> {
    let arrows = complete_arrows(n);
    let edges = (gate..instants.saturating_sub(1))
        .flat_map(|t| arrows.iter().map(move |&(u, v)| Edge::new(u, t, v)));
    TemporalGraph::new(n, instants, edges, false)
}

/// Each possible arrow (self-loops excluded) is present at each departing
/// instant independently with probability `p`.
pub fn gen_uniform_random<R: Rng>(
    n: usize,
    instants: usize,
    p: f64,
    rng: &mut R,
) -> Result<TemporalGraph, GraphError> {
    let mut edges = Vec::new();
    for t in 0..instants.saturating_sub(1) {
        for u in 0..n {
            for v in 0..n {
                if u != v && rng.gen_bool(p) {
                    edges.push(Edge::new(u, t, v));
                }
            }
        }
    }
    TemporalGraph::new(n, instants, edges, false)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SmallDiameterParams {
    pub vertex_count: usize,
    pub instant_count: usize,
    pub seed: u64,
    /// Random out-chords added per vertex and snapshot (rounded up).
    pub degree: f64,
    /// Accept only graphs with diameter at most `ceil(k * lg N)`.
    pub k: f64,
    pub max_retries: u32,
}

impl SmallDiameterParams {
    pub fn new(vertex_count: usize, instant_count: usize, seed: u64) -> Self {
        SmallDiameterParams {
            vertex_count,
            instant_count,
            seed,
            degree: 2.0,
            k: 3.0,
            max_retries: 16,
        }
    }

    pub fn diameter_bound(&self) -> u64 {
        (self.k * (self.vertex_count as f64).log2()).ceil() as u64
    }
}

/// Directed ring plus `ceil(degree)` uniform out-chords per vertex in every
/// snapshot, regenerated with the next sub-seed until the measured temporal
/// diameter from `t0` is within `ceil(k * lg N)`.
pub fn gen_small_diameter(params: &SmallDiameterParams) -> Result<TemporalGraph, GraphError> {
    let n = params.vertex_count;
    if n < 2 {
        return Err(GraphError::InvalidArgument(
            "small-diameter family needs at least two vertices".into(),
        ));
    }
    let chords = params.degree.max(0.0).ceil() as usize;
    let bound = params.diameter_bound();
    let ring = ring_arrows(n);
    let mut measured = Extended::Infinite;
    let attempts = params.max_retries.max(1);
    for attempt in 0..attempts {
        let mut rng = sub_rng(params.seed, "small-diameter", u64::from(attempt));
        let mut edges = Vec::new();
        for t in 0..params.instant_count.saturating_sub(1) {
            edges.extend(ring.iter().map(|&(u, v)| Edge::new(u, t, v)));
            for u in 0..n {
                for _ in 0..chords {
                    let mut v = rng.gen_range(0..n - 1);
                    if v >= u {
                        v += 1;
                    }
                    edges.push(Edge::new(u, t, v));
                }
            }
        }
        let g = TemporalGraph::new(n, params.instant_count, edges, false)?;
        measured = temporal_diameter(&g, 0)?;
        if matches!(measured, Extended::Finite(d) if d <= bound) {
            return Ok(g);
        }
    }
    Err(GraphError::Generation {
        attempts,
        measured,
        bound,
    })
}
