use std::time::Duration;

use proptest::prelude::*;
use projquad::construct::build_sphere;
use projquad::graphs::*;

fn brute_chi(n: usize, edges: &[(usize, usize)]) -> usize {
    if edges.is_empty() {
        return usize::from(n > 0);
    }
    for q in 1..=n {
        let mut c = vec![0usize; n];
        loop {
            if edges.iter().all(|&(u, v)| c[u] != c[v]) {
                return q;
            }
            let mut i = 0;
            while i < n && c[i] + 1 == q {
                c[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
            c[i] += 1;
        }
    }
    n
}

fn random_graph() -> impl Strategy<Value = SimpleGraph<usize>> {
    (1usize..=8).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0..n), 0..20).prop_map(move |pairs| {
            let edges: Vec<(usize, usize)> = pairs.into_iter().filter(|(u, v)| u != v).collect();
            SimpleGraph::from_edges((0..n).collect(), edges).unwrap()
        })
    })
}

fn cycle(n: usize) -> SimpleGraph<usize> {
    SimpleGraph::from_edges((0..n).collect(), (0..n).map(|i| (i, (i + 1) % n))).unwrap()
}

proptest! {
    #[test]
    fn strategies_match_brute_force(g in random_graph()) {
        let want = brute_chi(g.num_vertices(), &g.edges());
        for name in colouring_strategy_names() {
            let s = colouring_strategy(name).unwrap();
            match chromatic_number(&g, s.as_ref(), Budget::unlimited()) {
                Chromatic::Exact { chi, colouring } => {
                    prop_assert_eq!(chi, want, "{}", name);
                    prop_assert!(g.is_proper_colouring(&colouring));
                    prop_assert!(colouring.iter().all(|&c| c < chi));
                }
                other => prop_assert!(false, "{} gave {}", name, other),
            }
        }
    }

    #[test]
    fn greedy_bounds_bracket_chi(g in random_graph()) {
        let want = brute_chi(g.num_vertices(), &g.edges());
        let greedy = dsatur_greedy(g.adjacency());
        prop_assert!(g.is_proper_colouring(&greedy));
        let used = greedy.iter().max().map_or(0, |m| m + 1);
        prop_assert!(used >= want);
        let clique = greedy_clique(g.adjacency());
        for (i, &u) in clique.iter().enumerate() {
            for &v in &clique[i + 1..] {
                prop_assert!(g.has_edge(u, v));
            }
        }
        prop_assert!(clique.len() <= want);
    }

    #[test]
    fn decisions_are_sound(g in random_graph(), q in 1usize..5) {
        let want = brute_chi(g.num_vertices(), &g.edges());
        for name in colouring_strategy_names() {
            let s = colouring_strategy(name).unwrap();
            match s.decide(g.adjacency(), q, &mut Budget::unlimited().start()) {
                Decision::Colourable(c) => {
                    prop_assert!(q >= want);
                    prop_assert!(g.is_proper_colouring(&c));
                }
                Decision::NotColourable => prop_assert!(q < want),
                Decision::Unknown => prop_assert!(false, "unlimited budget ran out"),
            }
        }
    }
}

#[test]
fn odd_cycles_are_edge_critical() {
    for n in [5, 7, 9] {
        let g = cycle(n);
        let r = check_edge_critical(&g, 3, &Dsatur, Budget::unlimited()).unwrap();
        assert!(r.is_critical());
        assert!(is_vertex_critical(&g, 3, &StaticOrder, Budget::unlimited()).unwrap());
    }
}

#[test]
fn extra_chord_breaks_criticality() {
    let mut g = cycle(5);
    g.add_edge(0, 2).unwrap();
    let r = check_edge_critical(&g, 3, &Dsatur, Budget::unlimited()).unwrap();
    assert!(!r.is_critical());
    assert!(r.first_violation().is_some());
}

#[test]
fn kneser_calibration() {
    // Petersen graph.
    let kg = kneser_graph(5, 2).unwrap();
    assert_eq!((kg.num_vertices(), kg.num_edges()), (10, 15));
    assert_eq!(chromatic_number(&kg, &Dsatur, Budget::unlimited()).value(), Some(3));
    let sg = schrijver_graph(5, 2).unwrap();
    assert_eq!(sg.num_vertices(), 5);
    assert!(is_spanning_subgraph(&sg, &kg.induced(&sg.labels().iter().map(|l| kg.index_of(l).unwrap()).collect::<Vec<_>>())));
    for (n, k) in [(6, 2), (7, 2), (7, 3), (8, 3)] {
        let sg = schrijver_graph(n, k).unwrap();
        let want = (n - 2 * k + 2) as usize;
        assert_eq!(chromatic_number(&sg, &Dsatur, Budget::unlimited()).value(), Some(want), "SG({n},{k})");
    }
}

#[test]
fn quotient_graph_is_spanning_in_schrijver() {
    for (n, k) in [(5, 1), (6, 2), (7, 2), (8, 3)] {
        let q = build_sphere(n, k).unwrap();
        let qg = quotient_graph(&q).unwrap();
        let sg = schrijver_graph(n, k).unwrap();
        assert_eq!(qg.graph.num_vertices(), sg.num_vertices());
        assert!(is_spanning_subgraph(&qg.graph, &sg));
        let want = (n - 2 * k + 2) as usize;
        assert_eq!(chromatic_number(&qg.graph, &StaticOrder, Budget::unlimited()).value(), Some(want));
    }
}

#[test]
fn zero_timeout_is_inconclusive() {
    let sg = schrijver_graph(9, 3).unwrap();
    let r = chromatic_number(&sg, &Dsatur, Budget::with_timeout(Duration::ZERO));
    assert!(matches!(r, Chromatic::Inconclusive { .. }), "{r}");
    let r = check_edge_critical(&cycle(5), 3, &Dsatur, Budget::with_timeout(Duration::ZERO)).unwrap();
    assert!(!r.is_conclusive());
}
