use rayon::prelude::*;

use super::{Binding, Population, RunnerError};
use crate::machine::{run_bounded, Program};
use crate::temporal_graph::TemporalGraph;
use crate::Natural;

/// Whether an oracle-triggered node forwards the values it receives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RelayPolicy {
    /// Triggered nodes keep relaying; only their own output is zeroed.
    #[default]
    Relay,
    /// Triggered nodes send nothing for the rest of the run.
    Silent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RunOptions {
    /// Instant at which the diffusion starts.
    pub start: usize,
    pub relay: RelayPolicy,
}

/// What a node holds after a cycle: the network input, the label whose
/// cycle-1 value it carries, and that value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialOutput {
    pub w: Natural,
    pub carrier: usize,
    pub value: Natural,
}

/// Full record of one networked run.
///
/// Step `k` is the state at instant `start + k`, reached in cycle
/// `c0 + 1 + k`; step 0 holds the freshly computed cycle-1 values. Values
/// never get recomputed, so the lineage of a node is its carrier.
#[derive(Debug, Clone)]
pub struct RunTrace {
    w: Natural,
    start: usize,
    c0: u64,
    total_cycles: u64,
    binding: Binding,
    cycle_one: Vec<Natural>,
    triggered: Vec<bool>,
    // carriers[k][label - 1]
    carriers: Vec<Vec<u32>>,
    finals: Vec<Natural>,
}

impl RunTrace {
    pub fn w(&self) -> &Natural {
        &self.w
    }

    pub fn population_size(&self) -> usize {
        self.cycle_one.len()
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn c0(&self) -> u64 {
        self.c0
    }

    pub fn total_cycles(&self) -> u64 {
        self.total_cycles
    }

    pub fn binding(&self) -> &Binding {
        &self.binding
    }

    /// Number of recorded states, one per instant from the start.
    pub fn steps(&self) -> usize {
        self.carriers.len()
    }

    pub fn last_instant(&self) -> usize {
        self.start + self.steps() - 1
    }

    pub fn step_of_instant(&self, t: usize) -> Option<usize> {
        (t >= self.start && t <= self.last_instant()).then(|| t - self.start)
    }

    pub fn cycle_of_step(&self, k: usize) -> u64 {
        self.c0 + 1 + k as u64
    }

    pub fn cycle_one(&self, label: usize) -> &Natural {
        &self.cycle_one[label - 1]
    }

    pub fn cycle_one_values(&self) -> &[Natural] {
        &self.cycle_one
    }

    pub fn oracle_triggered(&self, label: usize) -> bool {
        self.triggered[label - 1]
    }

    pub fn carrier(&self, step: usize, label: usize) -> usize {
        self.carriers[step][label - 1] as usize
    }

    pub fn lineage(&self, step: usize, label: usize) -> usize {
        self.carrier(step, label)
    }

    pub fn value(&self, step: usize, label: usize) -> &Natural {
        &self.cycle_one[self.carrier(step, label) - 1]
    }

    pub fn partial_output(&self, step: usize, label: usize) -> PartialOutput {
        PartialOutput {
            w: self.w.clone(),
            carrier: self.carrier(step, label),
            value: self.value(step, label).clone(),
        }
    }

    /// Value carried at the end of the last exchange, before oracle
    /// pinning.
    pub fn carried_final(&self, label: usize) -> &Natural {
        self.value(self.steps() - 1, label)
    }

    pub fn final_output(&self, label: usize) -> &Natural {
        &self.finals[label - 1]
    }

    pub fn final_outputs(&self) -> &[Natural] {
        &self.finals
    }

    /// Node with the largest cycle-1 value, lowest label on ties.
    pub fn argmax_label(&self) -> usize {
        let mut best = 1;
        for label in 2..=self.cycle_one.len() {
            if self.cycle_one[label - 1] > self.cycle_one[best - 1] {
                best = label;
            }
        }
        best
    }
}

/// Cycle-1 output of every node, `None` where the budget ran out.
pub fn cycle_one_outputs(pop: &Population, w: &Natural, budget: u64) -> Vec<Option<Natural>> {
    pop.programs()
        .par_iter()
        .map(|p| run_bounded(p, w, budget).value().cloned())
        .collect()
}

/// Final output of `p` run alone for `c` cycles, each cycle feeding on the
/// previous output; 0 once any cycle exceeds the budget.
pub fn isolated_final(p: &Program, w: &Natural, c: u64, budget: u64) -> Natural {
    let mut v = w.clone();
    for _ in 0..c {
        match run_bounded(p, &v, budget).value() {
            Some(next) => v = next.clone(),
            None => return Natural::default(),
        }
    }
    v
}

/// Isolated final outputs indexed by `label - 1`.
pub fn run_isolated(pop: &Population, w: &Natural, c: u64, budget: u64) -> Result<Vec<Natural>, RunnerError> {
    if c == 0 {
        return Err(RunnerError::InvalidArgument("isolated runs need at least one cycle".into()));
    }
    Ok(pop.programs().par_iter().map(|p| isolated_final(p, w, c, budget)).collect())
}

pub fn run_networked(
    g: &TemporalGraph,
    pop: &Population,
    binding: &Binding,
    w: &Natural,
    budget: u64,
) -> Result<RunTrace, RunnerError> {
    run_networked_with(g, pop, binding, w, budget, RunOptions::default())
}

pub fn run_networked_with(
    g: &TemporalGraph,
    pop: &Population,
    binding: &Binding,
    w: &Natural,
    budget: u64,
    opts: RunOptions,
) -> Result<RunTrace, RunnerError> {
    if pop.len() != g.vertex_count() {
        return Err(RunnerError::SizeMismatch {
            binding: pop.len(),
            graph: g.vertex_count(),
        });
    }
    if budget == 0 {
        return Err(RunnerError::InvalidArgument("budget must be at least 1".into()));
    }
    let outputs = cycle_one_outputs(pop, w, budget);
    run_networked_on(g, &outputs, binding, w, opts)
}

/// Networked run from precomputed cycle-1 outputs (see
/// [`cycle_one_outputs`]), so that many bindings can share one computation.
pub fn run_networked_on(
    g: &TemporalGraph,
    outputs: &[Option<Natural>],
    binding: &Binding,
    w: &Natural,
    opts: RunOptions,
) -> Result<RunTrace, RunnerError> {
    let n = g.vertex_count();
    if binding.len() != n || outputs.len() != n {
        return Err(RunnerError::SizeMismatch {
            binding: binding.len().max(outputs.len()),
            graph: n,
        });
    }
    g.check_instant(opts.start)?;
    let instants = g.instant_count() - opts.start;
    let total_cycles = binding.total_cycles(instants)?;

    let triggered: Vec<bool> = outputs.iter().map(Option::is_none).collect();
    let cycle_one: Vec<Natural> = outputs.iter().map(|o| o.clone().unwrap_or_default()).collect();

    // rank[label - 1]: position in (value desc, label asc); lower wins
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| cycle_one[b].cmp(&cycle_one[a]).then(a.cmp(&b)));
    let mut rank = vec![0u32; n];
    for (r, &i) in order.iter().enumerate() {
        rank[i] = r as u32;
    }

    // per-vertex carrier labels
    let mut cur: Vec<u32> = (0..n).map(|v| binding.node_at(v) as u32).collect();
    let by_label = |state: &[u32]| {
        let mut out = vec![0u32; n];
        for (v, &c) in state.iter().enumerate() {
            out[binding.node_at(v) - 1] = c;
        }
        out
    };
    let mut carriers = Vec::with_capacity(instants);
    carriers.push(by_label(&cur));
    for a in opts.start..g.instant_count() - 1 {
        let mut next = cur.clone();
        for e in g.edges_at(a) {
            let sender = binding.node_at(e.u);
            if opts.relay == RelayPolicy::Silent && triggered[sender - 1] {
                continue;
            }
            let offer = cur[e.u];
            if rank[offer as usize - 1] < rank[next[e.v] as usize - 1] {
                next[e.v] = offer;
            }
        }
        cur = next;
        carriers.push(by_label(&cur));
    }

    let last = carriers.last().expect("at least one state");
    let finals = (0..n)
        .map(|i| {
            if triggered[i] {
                Natural::default()
            } else {
                cycle_one[last[i] as usize - 1].clone()
            }
        })
        .collect();

    Ok(RunTrace {
        w: w.clone(),
        start: opts.start,
        c0: binding.c0(),
        total_cycles,
        binding: binding.clone(),
        cycle_one,
        triggered,
        carriers,
        finals,
    })
}
