use bbig_core::seed::sub_seed;
use bbig_core::temporal_graph::{
    complete_arrows, gen_gated_complete, gen_small_diameter, gen_static, load_graph, ring_arrows, GraphError,
    SmallDiameterParams, TemporalGraph,
};

use crate::config::{ExperimentConfig, GraphSpec};

/// Seed of the `index`-th random graph at size `n`.
pub fn graph_seed(cfg: &ExperimentConfig, n: usize, index: u64) -> u64 {
    sub_seed(cfg.seed, &format!("graph-{n}"), index)
}

/// The configured graph at population size `n`; random families draw the
/// `index`-th graph of that size.
pub fn build_graph(cfg: &ExperimentConfig, n: usize, index: u64) -> Result<TemporalGraph, GraphError> {
    let t = cfg.instants;
    match &cfg.graph {
        GraphSpec::StaticComplete => gen_static(n, &complete_arrows(n), false, t),
        GraphSpec::StaticRing => gen_static(n, &ring_arrows(n), false, t),
        GraphSpec::GatedComplete(gate) => gen_gated_complete(n, *gate, t),
        GraphSpec::SmallDiameter(k) => {
            let mut p = SmallDiameterParams::new(n, t, graph_seed(cfg, n, index));
            p.k = *k;
            p.degree = cfg.degree;
            gen_small_diameter(&p)
        }
        GraphSpec::File(path) => {
            let g = load_graph(path)?;
            if g.vertex_count() != n {
                return Err(GraphError::InvalidArgument(format!(
                    "{} has {} vertices but the population has {n}",
                    path.display(),
                    g.vertex_count()
                )));
            }
            Ok(g)
        }
    }
}
