mod common;

use bbig_core::temporal_graph::{
    arrival_matrix, cover_time, diffusion_summary, dt, parse_graph, temporal_bfs, temporal_diameter, write_graph,
};
use bbig_core::{Extended, Fraction};
use common::{arb_graph, journey_arrivals};
use proptest::prelude::*;

fn as_option(e: &Extended<u64>) -> Option<u64> {
    e.finite()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn bfs_matches_journey_enumeration(g in arb_graph(8, 5)) {
        for start in 0..g.instant_count() {
            let matrix = arrival_matrix(&g, start).unwrap();
            for (s, arrivals) in matrix.iter().enumerate() {
                let bfs: Vec<_> = temporal_bfs(&g, start, s).unwrap().arrival.iter().map(as_option).collect();
                prop_assert_eq!(&bfs, &journey_arrivals(&g, start, s));
                let row: Vec<_> = arrivals.iter().map(as_option).collect();
                prop_assert_eq!(&row, &bfs);
            }
        }
    }

    #[test]
    fn dt_grows_with_tau(g in arb_graph(8, 5), start_pick in 0usize..5) {
        let start = start_pick % g.instant_count();
        let n = g.vertex_count() as u64;
        for s in 0..g.vertex_count() {
            let mut prev = Extended::Finite(0);
            for k in 1..=n {
                let d = dt(&g, start, s, Fraction::new(k, n)).unwrap();
                prop_assert!(d >= prev);
                prev = d;
            }
        }
    }

    #[test]
    fn summary_is_consistent(g in arb_graph(8, 5)) {
        let one = Fraction::from_integer(1);
        let s = diffusion_summary(&g, 0, one).unwrap();
        prop_assert_eq!(s.cover_time, cover_time(&g, 0, one).unwrap());
        prop_assert_eq!(s.diameter, temporal_diameter(&g, 0).unwrap());
        prop_assert_eq!(s.diameter, s.per_source_dt.iter().copied().max().unwrap());
        if let (Extended::Finite(ct), Extended::Finite(d)) = (s.cover_time, s.diameter) {
            prop_assert!(ct <= Fraction::from_integer(d));
        }
        // the last instant has no departures
        let last = g.instant_count() - 1;
        let end = temporal_diameter(&g, last).unwrap();
        prop_assert_eq!(end, if g.vertex_count() == 1 { Extended::Finite(0) } else { Extended::Infinite });
    }

    #[test]
    fn text_format_roundtrips(g in arb_graph(8, 5)) {
        let mut buf = Vec::new();
        write_graph(&g, &mut buf).unwrap();
        let back = parse_graph(std::str::from_utf8(&buf).unwrap()).unwrap();
        prop_assert_eq!(back, g);
    }
}
