//! Time-varying graphs as composite edges.
//!
//! A composite edge `(u, t, v)` is a transmission from `u` that departs at
//! instant `t` and lands at `v` at instant `t + 1`. Diffusion advances one hop
//! per time interval, so a graph with `T` instants carries at most `T - 1`
//! hops and the last instant has no departures.

mod generate;
mod io;

pub use generate::{
    complete_arrows, gen_gated_complete, gen_small_diameter, gen_static, gen_uniform_random,
    path_arrows, ring_arrows, SmallDiameterParams,
};
pub use io::{load_graph, parse_graph, store_graph, write_graph};

use num_traits::Zero;
use thiserror::Error;

use crate::{Extended, Fraction};

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for {vertex_count} vertices")]
    VertexOutOfRange { vertex: usize, vertex_count: usize },
    #[error("instant {instant} out of range (valid departures are 0..{limit})")]
    InstantOutOfRange { instant: usize, limit: usize },
    #[error("fraction {0} outside (0, 1]")]
    InvalidTau(Fraction),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("generation failed after {attempts} attempts: measured diameter {measured}, bound {bound}")]
    Generation {
        attempts: u32,
        measured: Extended<u64>,
        bound: u64,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A composite edge. Field order gives the canonical `(t, u, v)` sort.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub t: usize,
    pub u: usize,
    pub v: usize,
}

impl Edge {
    pub fn new(u: usize, t: usize, v: usize) -> Self {
        Edge { t, u, v }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemporalGraph {
    vertex_count: usize,
    instant_count: usize,
    undirected: bool,
    edges: Vec<Edge>,
    // offsets[t]..offsets[t + 1] indexes the edges departing at t
    offsets: Vec<usize>,
}

impl TemporalGraph {
    /// Builds a graph, sorting and deduplicating the edge set. When
    /// `undirected` is set every edge is expanded into two opposing arrows.
    pub fn new(
        vertex_count: usize,
        instant_count: usize,
        edges: impl IntoIterator<Item = Edge>,
        undirected: bool,
    ) -> Result<Self, GraphError> {
        if vertex_count == 0 {
            return Err(GraphError::InvalidArgument("graph needs at least one vertex".into()));
        }
        if instant_count == 0 {
            return Err(GraphError::InvalidArgument("graph needs at least one instant".into()));
        }
        let mut all = Vec::new();
        for e in edges {
            for x in [e.u, e.v] {
                if x >= vertex_count {
                    return Err(GraphError::VertexOutOfRange { vertex: x, vertex_count });
                }
            }
            if e.t + 1 >= instant_count {
                return Err(GraphError::InstantOutOfRange {
                    instant: e.t,
                    limit: instant_count - 1,
                });
            }
            all.push(e);
            if undirected {
                all.push(Edge::new(e.v, e.t, e.u));
            }
        }
        all.sort_unstable();
        all.dedup();
        let mut offsets = vec![0; instant_count + 1];
        for e in &all {
            offsets[e.t + 1] += 1;
        }
        for t in 0..instant_count {
            offsets[t + 1] += offsets[t];
        }
        Ok(TemporalGraph {
            vertex_count,
            instant_count,
            undirected,
            edges: all,
            offsets,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn instant_count(&self) -> usize {
        self.instant_count
    }

    pub fn is_undirected(&self) -> bool {
        self.undirected
    }

    /// All composite edges in `(t, u, v)` order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Edges departing at instant `t`.
    pub fn edges_at(&self, t: usize) -> &[Edge] {
        if t >= self.instant_count {
            return &[];
        }
        &self.edges[self.offsets[t]..self.offsets[t + 1]]
    }

    pub fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v < self.vertex_count {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange {
                vertex: v,
                vertex_count: self.vertex_count,
            })
        }
    }

    pub fn check_instant(&self, t: usize) -> Result<(), GraphError> {
        if t < self.instant_count {
            Ok(())
        } else {
            Err(GraphError::InstantOutOfRange {
                instant: t,
                limit: self.instant_count,
            })
        }
    }
}

/// Earliest arrival, in intervals after the start instant, at every vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachProfile {
    pub source: usize,
    pub start: usize,
    pub arrival: Vec<Extended<u64>>,
}

impl ReachProfile {
    pub fn reached_within(&self, steps: u64) -> usize {
        self.arrival
            .iter()
            .filter(|a| matches!(a, Extended::Finite(s) if *s <= steps))
            .count()
    }
}

/// Earliest-arrival BFS over snapshots: in the interval departing at `t` only
/// vertices already reached at `t` may transmit.
pub fn temporal_bfs(
    g: &TemporalGraph,
    start: usize,
    source: usize,
) -> Result<ReachProfile, GraphError> {
    g.check_instant(start)?;
    g.check_vertex(source)?;
    let mut arrival = vec![Extended::Infinite; g.vertex_count()];
    arrival[source] = Extended::Finite(0);
    for t in start..g.instant_count().saturating_sub(1) {
        let elapsed = (t - start) as u64;
        for e in g.edges_at(t) {
            let from_reached = matches!(arrival[e.u], Extended::Finite(s) if s <= elapsed);
            if from_reached && !arrival[e.v].is_finite() {
                arrival[e.v] = Extended::Finite(elapsed + 1);
            }
        }
    }
    Ok(ReachProfile {
        source,
        start,
        arrival,
    })
}

pub(crate) fn check_tau(tau: Fraction) -> Result<(), GraphError> {
    if tau.is_zero() || tau > Fraction::from_integer(1) {
        Err(GraphError::InvalidTau(tau))
    } else {
        Ok(())
    }
}

/// Smallest vertex count that reaches fraction `tau` of `n` vertices.
pub(crate) fn required_count(n: usize, tau: Fraction) -> usize {
    let num = *tau.numer() as u128 * n as u128;
    let den = *tau.denom() as u128;
    num.div_ceil(den) as usize
}

fn dt_from_arrivals(arrivals: &[Extended<u64>], tau: Fraction) -> Extended<u64> {
    let need = required_count(arrivals.len(), tau);
    let mut finite: Vec<u64> = arrivals.iter().filter_map(|a| a.finite()).collect();
    if finite.len() < need {
        return Extended::Infinite;
    }
    finite.sort_unstable();
    Extended::Finite(finite[need - 1])
}

/// Minimum number of intervals for a diffusion from `source` at `start` to
/// reach fraction `tau` of the vertices.
pub fn dt(
    g: &TemporalGraph,
    start: usize,
    source: usize,
    tau: Fraction,
) -> Result<Extended<u64>, GraphError> {
    check_tau(tau)?;
    let profile = temporal_bfs(g, start, source)?;
    Ok(dt_from_arrivals(&profile.arrival, tau))
}

/// Arrival steps for every (source, vertex) pair, computed for all sources at
/// once with one bitset of reached sources per vertex.
pub fn arrival_matrix(g: &TemporalGraph, start: usize) -> Result<Vec<Vec<Extended<u64>>>, GraphError> {
    g.check_instant(start)?;
    let n = g.vertex_count();
    let words = n.div_ceil(64);
    let mut reached = vec![0u64; n * words];
    let mut arrival = vec![vec![Extended::Infinite; n]; n];
    for v in 0..n {
        reached[v * words + v / 64] |= 1 << (v % 64);
        arrival[v][v] = Extended::Finite(0);
    }
    let mut next = reached.clone();
    for t in start..g.instant_count().saturating_sub(1) {
        let step = (t - start + 1) as u64;
        for e in g.edges_at(t) {
            for w in 0..words {
                let incoming = reached[e.u * words + w];
                let slot = &mut next[e.v * words + w];
                let fresh = incoming & !*slot;
                if fresh != 0 {
                    *slot |= fresh;
                    let mut bits = fresh;
                    while bits != 0 {
                        let b = bits.trailing_zeros() as usize;
                        arrival[w * 64 + b][e.v] = Extended::Finite(step);
                        bits &= bits - 1;
                    }
                }
            }
        }
        reached.copy_from_slice(&next);
    }
    Ok(arrival)
}

/// Cover time, temporal diameter and per-source `dt` at one start instant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffusionSummary {
    pub cover_time: Extended<Fraction>,
    pub diameter: Extended<u64>,
    pub per_source_dt: Vec<Extended<u64>>,
}

pub fn diffusion_summary(
    g: &TemporalGraph,
    start: usize,
    tau: Fraction,
) -> Result<DiffusionSummary, GraphError> {
    check_tau(tau)?;
    let matrix = arrival_matrix(g, start)?;
    let one = Fraction::from_integer(1);
    let per_source_dt: Vec<_> = matrix.iter().map(|row| dt_from_arrivals(row, tau)).collect();
    let diameter = matrix
        .iter()
        .map(|row| dt_from_arrivals(row, one))
        .max()
        .unwrap_or(Extended::Finite(0));
    let cover_time = average(&per_source_dt);
    Ok(DiffusionSummary {
        cover_time,
        diameter,
        per_source_dt,
    })
}

fn average(values: &[Extended<u64>]) -> Extended<Fraction> {
    let mut sum = 0u64;
    for v in values {
        match v {
            Extended::Finite(s) => sum += s,
            Extended::Infinite => return Extended::Infinite,
        }
    }
    Extended::Finite(Fraction::new(sum, values.len() as u64))
}

/// Mean of `dt` over all sources, or `Infinite` if any source misses `tau`.
pub fn cover_time(
    g: &TemporalGraph,
    start: usize,
    tau: Fraction,
) -> Result<Extended<Fraction>, GraphError> {
    check_tau(tau)?;
    let matrix = arrival_matrix(g, start)?;
    let per_source: Vec<_> = matrix.iter().map(|row| dt_from_arrivals(row, tau)).collect();
    Ok(average(&per_source))
}

/// Worst-case full-coverage time over all sources.
pub fn temporal_diameter(g: &TemporalGraph, start: usize) -> Result<Extended<u64>, GraphError> {
    let matrix = arrival_matrix(g, start)?;
    let one = Fraction::from_integer(1);
    Ok(matrix
        .iter()
        .map(|row| dt_from_arrivals(row, one))
        .max()
        .unwrap_or(Extended::Finite(0)))
}
