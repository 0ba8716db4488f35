use proptest::prelude::*;

use congest_diam1::engine::{run, uint_width, BitBudget, RunError};
use congest_diam1::graph::{
    apsp_oracle, boundary_edge_counts, closed_set_check, parse_any, reach_oracle, to_edge_list, Digraph, Distance,
};
use congest_diam1::instances::{gen_random_diam1, generate, validate_instance, InstanceDescriptor};
use congest_diam1::protocols::{
    all_pairs_reachability_with_order, f_sequence_global, f_sequence_local, m_values, Apsp3, DegreeTable, Reach1,
};

fn arbitrary_digraph() -> impl Strategy<Value = Digraph> {
    (1usize..9).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
            let edges = (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).filter(|&(u, v)| u != v && bits[u * n + v]);
            Digraph::new(n, edges).unwrap()
        })
    })
}

fn diam1() -> impl Strategy<Value = Digraph> {
    (1usize..40, 0.0f64..=1.0, any::<u64>()).prop_map(|(n, p, seed)| gen_random_diam1(n, p, seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn boundary_identity_on_any_digraph(g in arbitrary_digraph(), mask in any::<u16>()) {
        let members: Vec<bool> = (0..g.n()).map(|v| mask >> v & 1 == 1).collect();
        let lhs: i64 = (0..g.n()).filter(|&v| members[v]).map(|v| g.in_degree(v) as i64 - g.out_degree(v) as i64).sum();
        let (entering, leaving) = boundary_edge_counts(&g, &members);
        prop_assert_eq!(lhs, entering as i64 - leaving as i64);
    }

    #[test]
    fn closed_sets_are_characterized_by_degrees(g in diam1(), mask in any::<u64>(), from in any::<usize>()) {
        let random: Vec<usize> = (0..g.n()).filter(|&v| mask >> (v % 64) & 1 == 1).collect();
        let reach = reach_oracle(&g).reachable_from(from % g.n());
        for set in [random, reach] {
            let c = closed_set_check(&g, &set).unwrap();
            prop_assert_eq!(c.lhs == c.rhs, c.no_outgoing);
        }
    }

    #[test]
    fn reach1_matches_oracle(g in diam1()) {
        let n = g.n();
        let report = run(&g, |_| Reach1::new(), 2, BitBudget::for_n(n)).unwrap();
        prop_assert_eq!(report.rounds_used, 1);
        prop_assert_eq!(report.max_message_bits, 2 * uint_width(n));
        let oracle = reach_oracle(&g);
        prop_assert!(report.outputs.iter().all(|out| out.matches(&oracle)));
    }

    #[test]
    fn any_tie_break_order_gives_the_same_relation(g in diam1(), keys in proptest::collection::vec(any::<u32>(), 40)) {
        let table = DegreeTable::from_graph(&g);
        let mut order: Vec<usize> = (0..g.n()).collect();
        order.sort_by_key(|&v| (table.out_degree(v), keys[v]));
        let prefixes = all_pairs_reachability_with_order(&table, order).unwrap();
        prop_assert!(prefixes.matches(&reach_oracle(&g)));
    }

    #[test]
    fn in_degree_only_on_tournaments(n in 1usize..40, seed in any::<u64>()) {
        let g = gen_random_diam1(n, 0.0, seed);
        let report = run(&g, |_| Reach1::in_degree_only(), 2, BitBudget::bits(uint_width(n))).unwrap();
        prop_assert!(report.outputs[0].matches(&reach_oracle(&g)));
    }

    #[test]
    fn apsp3_sandwich_and_thresholds(g in diam1()) {
        let n = g.n();
        let report = run(&g, |_| Apsp3::new(), 3, BitBudget::bits(uint_width(n))).unwrap();
        prop_assert_eq!(report.rounds_used, 2);
        let exact = apsp_oracle(&g);
        let est = &report.outputs[n - 1];
        for x in 0..n {
            for y in 0..n {
                let (d, e) = (exact.get(x, y), est.get(x, y).value());
                match (d, e) {
                    (Distance::Finite(d), Distance::Finite(e)) => prop_assert!(d <= e && e <= 3 * d, "({x},{y}) d={d} e={e}"),
                    (Distance::Infinite, Distance::Infinite) => {}
                    _ => prop_assert!(false, "({x},{y}) reachability disagrees: d={d} e={e}"),
                }
            }
        }
        let d_out: Vec<usize> = (0..n).map(|v| g.out_degree(v)).collect();
        let m = m_values(&g);
        for x in 0..n {
            let global = f_sequence_global(&g, x);
            prop_assert!(global.check().is_ok());
            prop_assert_eq!(&f_sequence_local(&d_out, &m, x), &global);
            prop_assert_eq!(&est.sequences()[x], &global);
        }
    }

    #[test]
    fn engine_is_deterministic(g in diam1()) {
        let a = run(&g, |_| Apsp3::new(), 3, BitBudget::for_n(g.n())).unwrap();
        let b = run(&g, |_| Apsp3::new(), 3, BitBudget::for_n(g.n())).unwrap();
        prop_assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn graph_formats_round_trip(g in arbitrary_digraph()) {
        let json = serde_json::to_string(&g).unwrap();
        prop_assert_eq!(&parse_any(&json).unwrap(), &g);
        prop_assert_eq!(&parse_any(&to_edge_list(&g)).unwrap(), &g);
    }

    #[test]
    fn family_descriptors_round_trip_and_validate(
        k in 1usize..6,
        q in 1usize..6,
        bits in proptest::collection::vec(any::<bool>(), 6),
        levels in proptest::collection::vec(1usize..6, 6),
    ) {
        let sigma = bits[..k].to_vec();
        let j_sigma: Vec<usize> = levels[..k].iter().map(|&l| 1 + (l - 1) % k).collect();
        for desc in [
            InstanceDescriptor::F { k, q, sigma: sigma.clone() },
            InstanceDescriptor::FPrime { k, q, sigma },
            InstanceDescriptor::J { k, sigma: j_sigma },
        ] {
            let reparsed: InstanceDescriptor = desc.to_string().parse().unwrap();
            prop_assert_eq!(&reparsed, &desc);
            let report = validate_instance(&generate(&desc).unwrap(), &desc);
            prop_assert!(report.all_passed(), "{}: {:?}", desc, report.failures().collect::<Vec<_>>());
        }
    }
}

#[test]
fn protocols_refuse_graphs_without_complete_underlying_graph() {
    let g = Digraph::new(3, [(0, 1), (1, 2)]).unwrap();
    let err = run(&g, |_| Reach1::new(), 2, BitBudget::for_n(3)).unwrap_err();
    assert!(matches!(err, RunError::Algorithm { .. }), "{err}");
    let err = run(&g, |_| Apsp3::new(), 3, BitBudget::for_n(3)).unwrap_err();
    assert!(matches!(err, RunError::Algorithm { .. }), "{err}");
}
