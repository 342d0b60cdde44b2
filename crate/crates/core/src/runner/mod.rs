//! The synchronous Busy Beaver Imitation Game.
//!
//! Each node is the imitation protocol wrapped around a sampled suffix
//! program. The protocol is simulated by the runner itself: in the first
//! active cycle every node runs its own program on the network input, then
//! on every time interval nodes exchange partial outputs along the composite
//! edges and keep the largest value seen, and the last cycle strips the
//! carried `(w, carrier)` tag to emit the final output.

mod eac;
mod export;
mod game;

pub use eac::{eac_estimates, eeac_estimate, sample_bindings, EacEntry, EeacEstimate};
pub use export::{write_final_csv, write_trace_csv, FINAL_CSV_HEADER, TRACE_CSV_HEADER};
pub use game::{
    cycle_one_outputs, isolated_final, run_isolated, run_networked, run_networked_on, run_networked_with,
    PartialOutput,
    RelayPolicy, RunOptions, RunTrace,
};

use rand::seq::SliceRandom;
use rand::RngCore;
use thiserror::Error;

use crate::machine::{sample_program, MachineError, Program};
use crate::temporal_graph::GraphError;

#[derive(Debug, Error)]
pub enum RunnerError {
    #[error("binding covers {binding} vertices but the graph has {graph}")]
    SizeMismatch { binding: usize, graph: usize },
    #[error("invalid binding: {0}")]
    InvalidBinding(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Machine(#[from] MachineError),
}

/// An ordered population of suffix programs labelled `1..=N`. Repetitions
/// are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Population {
    programs: Vec<Program>,
}

impl Population {
    pub fn new(programs: Vec<Program>) -> Result<Self, RunnerError> {
        if programs.is_empty() {
            return Err(RunnerError::InvalidArgument("population must not be empty".into()));
        }
        Ok(Population { programs })
    }

    /// `n` independent draws from the program-size distribution.
    pub fn sample<R: RngCore>(n: usize, rng: &mut R) -> Result<Self, RunnerError> {
        if n == 0 {
            return Err(RunnerError::InvalidArgument("population size must be at least 1".into()));
        }
        let programs = (0..n).map(|_| sample_program(rng)).collect::<Result<Vec<_>, _>>()?;
        Ok(Population { programs })
    }

    pub fn len(&self) -> usize {
        self.programs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.programs.is_empty()
    }

    /// Program of node `label` (1-based).
    pub fn program(&self, label: usize) -> &Program {
        &self.programs[label - 1]
    }

    pub fn programs(&self) -> &[Program] {
        &self.programs
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Program)> {
        self.programs.iter().enumerate().map(|(i, p)| (i + 1, p))
    }
}

/// Assignment of nodes to vertices plus the cycle plan.
///
/// `vertex_to_node[v]` is the label bound to vertex `v`. `c0` idle cycles
/// precede the computing cycle; `total_cycles` defaults to the minimum
/// `c0 + instants + 1` for the run's instants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Binding {
    vertex_to_node: Vec<usize>,
    node_to_vertex: Vec<usize>,
    c0: u64,
    total_cycles: Option<u64>,
}

impl Binding {
    pub fn new(vertex_to_node: Vec<usize>, c0: u64, total_cycles: Option<u64>) -> Result<Self, RunnerError> {
        let n = vertex_to_node.len();
        if n == 0 {
            return Err(RunnerError::InvalidBinding("empty binding".into()));
        }
        let mut node_to_vertex = vec![usize::MAX; n];
        for (v, &label) in vertex_to_node.iter().enumerate() {
            if label == 0 || label > n {
                return Err(RunnerError::InvalidBinding(format!("label {label} outside 1..={n}")));
            }
            if node_to_vertex[label - 1] != usize::MAX {
                return Err(RunnerError::InvalidBinding(format!("label {label} bound twice")));
            }
            node_to_vertex[label - 1] = v;
        }
        Ok(Binding {
            vertex_to_node,
            node_to_vertex,
            c0,
            total_cycles,
        })
    }

    /// Vertex `v` hosts node `v + 1`.
    pub fn identity(n: usize) -> Self {
        Binding::new((1..=n).collect(), 0, None).expect("identity is a bijection")
    }

    pub fn random<R: RngCore>(n: usize, c0: u64, rng: &mut R) -> Self {
        let mut labels: Vec<usize> = (1..=n).collect();
        labels.shuffle(rng);
        Binding::new(labels, c0, None).expect("shuffle is a bijection")
    }

    /// Every bijection of `n` vertices, in lexicographic order.
    pub fn all(n: usize, c0: u64) -> Vec<Binding> {
        let mut out = Vec::new();
        let mut labels: Vec<usize> = (1..=n).collect();
        loop {
            out.push(Binding::new(labels.clone(), c0, None).expect("permutation"));
            // next lexicographic permutation
            let Some(i) = (1..labels.len()).rev().find(|&i| labels[i - 1] < labels[i]) else {
                break;
            };
            let j = (i..labels.len()).rev().find(|&j| labels[j] > labels[i - 1]).expect("pivot");
            labels.swap(i - 1, j);
            labels[i..].reverse();
        }
        out
    }

    pub fn len(&self) -> usize {
        self.vertex_to_node.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertex_to_node.is_empty()
    }

    pub fn node_at(&self, vertex: usize) -> usize {
        self.vertex_to_node[vertex]
    }

    pub fn vertex_of(&self, label: usize) -> usize {
        self.node_to_vertex[label - 1]
    }

    pub fn c0(&self) -> u64 {
        self.c0
    }

    pub fn with_total_cycles(mut self, n: u64) -> Self {
        self.total_cycles = Some(n);
        self
    }

    /// Total cycles for a run spanning `instants` instants.
    pub fn total_cycles(&self, instants: usize) -> Result<u64, RunnerError> {
        let min = self.c0 + instants as u64 + 1;
        match self.total_cycles {
            None => Ok(min),
            Some(n) if n >= min => Ok(n),
            Some(n) => Err(RunnerError::InvalidBinding(format!(
                "{n} cycles < c0 + instants + 1 = {min}"
            ))),
        }
    }
}
