use proptest::prelude::*;

use degdiv::exact::{exact_f, exact_hom, exact_small_ball, SmallBallInstance};
use degdiv::generators::gnp;
use degdiv::pipeline::{find_distinct_degrees, regularize, turan_independent_set, PipelineConfig};
use degdiv::{Graph, Seed, VertexSet};

fn small_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
            let edges = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .zip(bits)
                .filter_map(|(e, keep)| keep.then_some(e));
            Graph::from_edges(n, edges).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn f_and_hom_are_complement_invariant(g in small_graph(10)) {
        let c = g.complement();
        prop_assert_eq!(exact_f(&g).unwrap().f, exact_f(&c).unwrap().f);
        prop_assert_eq!(exact_hom(&g).unwrap().hom, exact_hom(&c).unwrap().hom);
    }

    #[test]
    fn exact_witness_recounts(g in small_graph(10)) {
        let best = exact_f(&g).unwrap();
        let s = VertexSet::from_indices(g.n(), best.witness.iter().copied()).unwrap();
        prop_assert_eq!(g.distinct_degree_count(&s).unwrap(), best.f);
        prop_assert!(best.f >= 1 && best.f <= g.n());
    }

    #[test]
    fn search_never_beats_the_oracle(g in small_graph(10), seed in any::<u64>()) {
        let found = find_distinct_degrees(&g, &PipelineConfig::default(), &mut Seed(seed).rng()).unwrap();
        prop_assert!(found.witness.verify(&g));
        prop_assert!(found.witness.k() <= exact_f(&g).unwrap().f);
    }

    #[test]
    fn turan_set_is_independent(g in small_graph(24)) {
        let set = turan_independent_set(&g);
        for u in &set {
            for v in &set {
                prop_assert!(!g.has_edge(u, v));
            }
        }
        let avg = 2.0 * g.edge_count() as f64 / g.n() as f64;
        prop_assert!(set.len() as f64 >= g.n() as f64 / (avg + 1.0) - 1e-9);
    }

    #[test]
    fn regularized_subgraph_is_large_and_even(n in 40usize..200, p in 0.01f64..0.6, seed in any::<u64>()) {
        let g = gnp(n, p, Seed(seed)).unwrap();
        let h = regularize(&g).unwrap();
        let log_n = (n as f64).log2();
        let st = h.graph.degree_stats();
        prop_assert!(h.vertices.len() as f64 >= n as f64 / (30.0 * log_n));
        prop_assert!(st.max as f64 <= 5.0 * log_n * st.min as f64);
        for (i, &a) in h.vertices.iter().enumerate() {
            for (j, &b) in h.vertices.iter().enumerate() {
                prop_assert_eq!(h.graph.has_edge(i, j), g.has_edge(a, b));
            }
        }
    }

    #[test]
    fn gnp_is_nested_in_p(n in 2usize..60, lo in 0.0f64..1.0, hi in 0.0f64..1.0, seed in any::<u64>()) {
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        let sparse = gnp(n, lo, Seed(seed)).unwrap();
        let dense = gnp(n, hi, Seed(seed)).unwrap();
        prop_assert!(sparse.edges().all(|(u, v)| dense.has_edge(u, v)));
    }

    #[test]
    fn small_ball_grows_with_the_window(
        weights in proptest::collection::vec(prop_oneof![-3i32..=-1, 1i32..=3], 1..12),
        p in 0.1f64..0.9,
        width in 0.0f64..4.0,
    ) {
        let n = weights.len();
        let w: Vec<f64> = weights.iter().map(|&x| x as f64).collect();
        let narrow = exact_small_ball(&SmallBallInstance::new(w.clone(), vec![p; n], width).unwrap()).unwrap();
        let wide = exact_small_ball(&SmallBallInstance::new(w, vec![p; n], width + 1.0).unwrap()).unwrap();
        prop_assert!((0.0..=1.0).contains(&narrow));
        prop_assert!(narrow <= wide + 1e-12);
    }
}
