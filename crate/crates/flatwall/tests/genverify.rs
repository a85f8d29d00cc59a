use flatwall::classify::{classify, flat_from_type4, verify_flat_certificate};
use flatwall::genverify::*;
use flatwall::graph::{validate_minor_model, Graph};
use proptest::prelude::*;

fn graph_from(n: usize, pairs: &[(usize, usize)]) -> Graph {
    let e: Vec<(usize, usize)> = pairs.iter().map(|&(a, b)| (a % n, b % n)).filter(|(a, b)| a != b).collect();
    Graph::from_edges(n, &e).unwrap()
}

/// Multigraph series-parallel reduction: a graph has no `K_4` minor iff
/// repeatedly deleting degree <= 1 vertices, suppressing degree 2 vertices
/// and merging parallel edges empties it.
fn k4_free(g: &Graph) -> bool {
    use std::collections::BTreeMap;
    let n = g.n();
    let mut adj: Vec<BTreeMap<usize, usize>> = vec![BTreeMap::new(); n];
    for (u, v) in g.edges() {
        adj[u].insert(v, 1);
        adj[v].insert(u, 1);
    }
    let mut alive = vec![true; n];
    loop {
        let pick = (0..n).find(|&v| alive[v] && adj[v].len() <= 2);
        let Some(v) = pick else { break };
        let nb: Vec<usize> = adj[v].keys().copied().collect();
        for &u in &nb {
            adj[u].remove(&v);
        }
        adj[v].clear();
        alive[v] = false;
        if let [a, b] = nb[..] {
            adj[a].insert(b, 1);
            adj[b].insert(a, 1);
        }
    }
    !alive.iter().any(|&a| a)
}

fn has_cycle(g: &Graph) -> bool {
    g.m() + g.components().len() > g.n()
}

#[test]
fn lower_bound_cell_is_k5_free() {
    let lb = gen_lowerbound(6, 1).unwrap();
    assert_eq!((lb.side, lb.cells.len()), (5, 1));
    assert_eq!(lb.graph.max_degree(), 5);
    assert_eq!(brute_force_minor(&lb.graph, 5, 200_000), MinorSearch::Absent);
    match brute_force_minor(&lb.graph, 4, 200_000) {
        MinorSearch::Found(m) => assert!(validate_minor_model(&lb.graph, &m).unwrap().is_pass()),
        other => panic!("{other:?}"),
    }
}

#[test]
fn lower_bound_degree_is_five_everywhere_it_should_be() {
    for (wp, tp) in [(3, 2), (3, 3), (4, 3), (5, 4), (7, 2)] {
        let lb = gen_lowerbound(wp, tp).unwrap();
        assert_eq!(lb.graph.max_degree(), 5);
        assert_eq!(lb.cells.len(), tp * tp);
        for &(r, c) in &lb.cells {
            let s = lb.side;
            for (a, b) in [(r, c), (r + 1, c), (r, c + 1), (r + 1, c + 1)] {
                let interior = a > 0 && b > 0 && a + 1 < s && b + 1 < s;
                if interior {
                    assert_eq!(lb.graph.degree(a * s + b), 5);
                }
            }
        }
    }
}

#[test]
fn planted_matrix_round_trips() {
    let mut count = [0usize; 4];
    for seed in 0..24u64 {
        let n = 3 + (seed as usize % 8);
        let (z, tau) = [(10, 4), (12, 4), (8, 3), (14, 5)][seed as usize % 4];
        let plan = random_plan(seed, n, z, tau);
        let (g, c) = gen_planted_chain(&plan).unwrap();
        assert_eq!(c.len(), plan.walls());
        for (q, &ty) in plan.types.iter().enumerate() {
            let got = classify(&g, &c, q + 1, tau).unwrap();
            assert_eq!(got.number(), ty, "seed {seed} wall {}", q + 1);
            count[ty as usize - 1] += 1;
            if ty == 4 {
                let cert = flat_from_type4(&g, &c, q + 1, tau, &[]).unwrap();
                assert!(verify_flat_certificate(&g, &cert).is_pass());
            }
        }
    }
    assert!(count.iter().all(|&k| k > 0), "{count:?}");
}

#[test]
fn random_plans_are_reproducible() {
    assert_eq!(random_plan(7, 9, 10, 4), random_plan(7, 9, 10, 4));
    assert!(random_plan(3, 1, 10, 4).types.iter().all(|&t| t != 2));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn oracle_matches_small_characterisations(
        n in 1usize..9,
        pairs in proptest::collection::vec((0usize..9, 0usize..9), 0..18),
    ) {
        let g = graph_from(n, &pairs);
        for t in 1..=4 {
            let r = brute_force_minor(&g, t, 100_000);
            let expect = match t {
                1 => n >= 1,
                2 => g.m() >= 1,
                3 => has_cycle(&g),
                _ => !k4_free(&g),
            };
            match r {
                MinorSearch::Found(m) => {
                    prop_assert!(expect, "t = {t}");
                    prop_assert!(validate_minor_model(&g, &m).unwrap().is_pass());
                }
                MinorSearch::Absent => prop_assert!(!expect, "t = {t}"),
                MinorSearch::BudgetExceeded { .. } => prop_assert!(false, "budget on {n} vertices"),
            }
        }
    }
}
