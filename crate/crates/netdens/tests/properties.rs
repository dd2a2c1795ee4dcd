//! Randomized invariant checks across the whole library surface.

use proptest::prelude::*;

use netdens::decompose::{decompose, find_reversible_path, kcore_decompose, verify_decomposition};
use netdens::generate::{
    abstract_generate, clique_orientation, generate_ds, generate_gnp, generate_regular,
    hsw_selector, rdd_selector, ring_sizes_from_distribution, GenError, NeighborSelector,
};
use netdens::graph::{parse_edgelist, write_edgelist, Graph, LabelMap, ParseOptions};
use netdens::metrics::{bhattacharyya, expected_edge_fraction, Distribution};

fn arb_graph() -> impl Strategy<Value = Graph> {
    (2usize..40).prop_flat_map(|n| {
        proptest::collection::vec((0..n as u32, 0..n as u32), 0..120)
            .prop_map(move |pairs| Graph::from_pairs(n, pairs))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn construction_normalizes_edges(g in arb_graph()) {
        let mut degree_sum = 0;
        for v in 0..g.node_count() as u32 {
            let neighbors = g.neighbors(v);
            prop_assert!(neighbors.windows(2).all(|w| w[0] < w[1]), "sorted, no duplicates");
            prop_assert!(!neighbors.contains(&v), "no self loops");
            degree_sum += neighbors.len();
        }
        prop_assert_eq!(degree_sum, 2 * g.edge_count());
        prop_assert!(g.edges().windows(2).all(|w| w[0] < w[1]));
        prop_assert!(g.edges().iter().all(|&(u, v)| u < v));
    }

    #[test]
    fn edgelist_round_trips(g in arb_graph()) {
        let labels = LabelMap::numeric(g.node_count());
        let mut text = Vec::new();
        write_edgelist(&g, &labels, &mut text).unwrap();
        let (back, back_labels) = parse_edgelist(&text[..], &ParseOptions::default()).unwrap();
        // Isolated nodes have no line to come back on; compare labeled
        // edges, each pair put in a label order shared by both sides.
        let normalize = |edges: &[(u32, u32)], names: &LabelMap| -> Vec<(String, String)> {
            let mut out: Vec<(String, String)> = edges
                .iter()
                .map(|&(u, v)| {
                    let (a, b) = (names.label(u).to_string(), names.label(v).to_string());
                    if a <= b { (a, b) } else { (b, a) }
                })
                .collect();
            out.sort();
            out
        };
        prop_assert_eq!(
            normalize(g.edges(), &labels),
            normalize(back.edges(), &back_labels)
        );
    }

    #[test]
    fn decomposition_invariants(g in arb_graph()) {
        let d = decompose(&g);
        let report = verify_decomposition(&g, &d);
        prop_assert!(report.pass(), "{report}");
        prop_assert!(find_reversible_path(&g, d.witness()).is_none());
        for v in 0..g.node_count() as u32 {
            prop_assert_eq!(d.rank(v) == 0, g.degree(v) == 0, "ring 0 is exactly the isolated nodes");
            prop_assert!(d.witness().indegree(v) <= d.rank(v), "rank dominates witness indegree");
        }
        let again = decompose(&g);
        prop_assert_eq!(d.ranks(), again.ranks());
    }

    #[test]
    fn core_numbers_bracket_the_top_ring(g in arb_graph()) {
        let d = decompose(&g);
        let cores = kcore_decompose(&g);
        // The top ring induces a subgraph denser than k - 1, so the
        // degeneracy reaches k; conversely a D-core has density at least
        // D/2, which caps the degeneracy at 2k.
        prop_assert!(cores.max_core() as usize >= d.k());
        prop_assert!(cores.max_core() as usize <= 2 * d.k());
        for v in 0..g.node_count() as u32 {
            prop_assert!(cores.core(v) <= g.degree(v) as u32);
        }
    }

    #[test]
    fn bhattacharyya_is_a_symmetric_overlap(
        a in proptest::collection::vec(0.0f64..10.0, 1..8),
        b in proptest::collection::vec(0.0f64..10.0, 1..8),
    ) {
        prop_assume!(a.iter().sum::<f64>() > 0.0 && b.iter().sum::<f64>() > 0.0);
        let p = Distribution::raw(a).normalize();
        let q = Distribution::raw(b).normalize();
        let pq = bhattacharyya(&p, &q);
        let qp = bhattacharyya(&q, &p);
        prop_assert!((pq - qp).abs() < 1e-12);
        prop_assert!((-1e-9..=1.0 + 1e-9).contains(&pq), "{pq}");
        let pp = bhattacharyya(&p, &p);
        prop_assert!((pp - 1.0).abs() < 1e-9);
    }

    #[test]
    fn expected_fractions_partition_each_source_ring(
        sizes in proptest::collection::vec(0usize..30, 2..6),
    ) {
        let k = sizes.len() - 1;
        for i in 1..=k {
            if sizes[i] == 0 {
                continue;
            }
            let fractions: Vec<f64> = (i..=k)
                .filter_map(|j| expected_edge_fraction(&sizes, i, j))
                .collect();
            if fractions.is_empty() {
                continue;
            }
            let total: f64 = fractions.iter().sum();
            prop_assert!((total - 1.0).abs() < 1e-9, "ring {i}: {total}");
        }
    }

    #[test]
    fn realized_ring_sizes_sum_to_n(
        weights in proptest::collection::vec(0.0f64..5.0, 1..6),
        n in 0usize..200,
    ) {
        prop_assume!(weights.iter().sum::<f64>() > 0.0);
        let dist = Distribution::raw(weights).normalize();
        let sizes = ring_sizes_from_distribution(&dist, n);
        prop_assert_eq!(sizes.iter().sum::<usize>(), n);
        prop_assert!(!sizes.is_empty());
        prop_assert!(sizes.len() == 1 || *sizes.last().unwrap() > 0);
    }

    #[test]
    fn built_profiles_round_trip_through_decomposition(
        profile in proptest::collection::vec(0usize..25, 2..5),
        p in 0.0f64..=1.0,
        seed in any::<u64>(),
    ) {
        // Give the densest ring a wide margin so selection has room.
        let k = profile.len();
        let mut sizes = profile;
        sizes.push(2 * k + 10);
        let n: usize = sizes.iter().sum();
        let weights: Vec<f64> = sizes.iter().map(|&s| s as f64).collect();
        let dist = Distribution::raw(weights).normalize();

        for selector in [&rdd_selector() as &dyn NeighborSelector, &hsw_selector(p)] {
            match abstract_generate(&dist, n, selector, seed) {
                Ok((g, built)) => {
                    prop_assert_eq!(built.ring_sizes(), sizes.as_slice());
                    let independent = decompose(&g);
                    prop_assert_eq!(independent.ring_sizes(), built.ring_sizes());
                    prop_assert_eq!(independent.ranks(), built.ranks());
                }
                // Tight profiles can strand a node without eligible
                // targets; that is a lawful outcome, not a wrong one.
                Err(GenError::Infeasible(_)) => {}
                Err(other) => prop_assert!(false, "unexpected error {other}"),
            }
        }
    }

    #[test]
    fn balanced_clique_orientation_theorem(n in 1usize..45) {
        let (g, o) = clique_orientation(n);
        let half = (n / 2) as u32;
        for v in 0..n as u32 {
            let d = o.indegree(v);
            prop_assert!(d == half || d + 1 == half || n == 1, "n = {n}, v = {v}, indegree {d}");
        }
        prop_assert!(find_reversible_path(&g, &o).is_none());
    }

    #[test]
    fn degree_sequences_are_realized_exactly(
        seq in proptest::collection::vec(0usize..6, 2..20),
        seed in any::<u64>(),
    ) {
        match generate_ds(&seq, seed, false) {
            Ok(g) => {
                for (v, &want) in seq.iter().enumerate() {
                    prop_assert_eq!(g.degree(v as u32), want);
                }
            }
            Err(GenError::OddDegreeSum) => {
                prop_assert_eq!(seq.iter().sum::<usize>() % 2, 1);
            }
            Err(GenError::NotGraphical { index }) => {
                // Recheck the reported prefix directly.
                let mut sorted = seq.clone();
                sorted.sort_unstable_by(|a, b| b.cmp(a));
                let lhs: usize = sorted[..index].iter().sum();
                let rhs: usize =
                    index * (index - 1) + sorted[index..].iter().map(|&x| x.min(index)).sum::<usize>();
                prop_assert!(lhs > rhs, "reported index {index} does not violate the condition");
            }
            Err(other) => prop_assert!(false, "unexpected error {other}"),
        }
    }

    #[test]
    fn regular_graphs_are_regular(n in 2usize..20, d in 0usize..6, seed in any::<u64>()) {
        prop_assume!(d < n && n * d % 2 == 0);
        let g = generate_regular(n, d, seed);
        for v in 0..n as u32 {
            prop_assert_eq!(g.degree(v), d);
        }
    }

    #[test]
    fn gnp_respects_probability_extremes(n in 0usize..40, p in 0.0f64..=1.0, seed in any::<u64>()) {
        let g = generate_gnp(n, p, seed);
        let max = if n < 2 { 0 } else { n * (n - 1) / 2 };
        prop_assert!(g.edge_count() <= max);
        if p == 0.0 {
            prop_assert_eq!(g.edge_count(), 0);
        }
        if p == 1.0 {
            prop_assert_eq!(g.edge_count(), max);
        }
    }
}
