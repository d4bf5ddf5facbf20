//! Property tests over random graphs: the structural invariants that hold
//! for every input, checked on arbitrary instances rather than examples.

use proptest::prelude::*;

use gsmin::graph::Graph;
use gsmin::graph6::{parse_graph6, write_graph6};
use gsmin::symplectic::{lc_equivalent, StabilizerTableau};

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut k = 0;
            for i in 0..n {
                for j in (i + 1)..n {
                    if bits[k] {
                        edges.push((i, j));
                    }
                    k += 1;
                }
            }
            Graph::from_edges(n, &edges).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn local_complement_is_an_involution(g in arb_graph(12), v in 0usize..12) {
        let v = v % g.n();
        let lc = g.local_complement(v);
        prop_assert_eq!(lc.local_complement(v), g.clone());
        prop_assert_eq!(lc.degree(v), g.degree(v));
        prop_assert_eq!(lc.n(), g.n());
    }

    #[test]
    fn clustering_flips_under_complementation(g in arb_graph(10), v in 0usize..10) {
        let v = v % g.n();
        prop_assume!(g.degree(v) >= 2);
        let lc = g.local_complement(v);
        let c = g.clustering_coefficient(v);
        let c2 = lc.clustering_coefficient(v);
        prop_assert!((c2 - (1.0 - c)).abs() < 1e-12);
    }

    #[test]
    fn graph6_roundtrip(g in arb_graph(70)) {
        let text = write_graph6(&g);
        prop_assert_eq!(parse_graph6(&text).unwrap(), g);
        // and strings round-trip too
        prop_assert_eq!(write_graph6(&parse_graph6(&text).unwrap()), text);
    }

    #[test]
    fn complemented_graphs_stay_equivalent(g in arb_graph(7), v in 0usize..7) {
        let v = v % g.n();
        let h = g.local_complement(v);
        let w = lc_equivalent(&g, &h).unwrap().expect("one complementation apart");
        prop_assert!(w.satisfies_linear_system(&g, &h));
        let t = gsmin::symplectic::apply_witness(&h, &w);
        prop_assert!(gsmin::symplectic::same_stabilizer_state(&t, &StabilizerTableau::graph(&g)));
    }

    #[test]
    fn json_schema_roundtrip(g in arb_graph(20)) {
        let text = serde_json::to_string(&g).unwrap();
        prop_assert_eq!(serde_json::from_str::<Graph>(&text).unwrap(), g);
    }
}

#[test]
fn graphs_are_shareable_across_threads() {
    fn assert_send_sync<T: Send + Sync>() {}
    assert_send_sync::<Graph>();
    assert_send_sync::<gsmin::gf2::Gf2Matrix>();
    assert_send_sync::<gsmin::graph::WeightMatrix>();
}
