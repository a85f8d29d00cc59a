use flatwall::chain::{chain_from_strip, Chain};
use flatwall::classify::*;
use flatwall::forge::pair_count;
use flatwall::graph::{validate_minor_model, Graph};
use flatwall::wall::{identity_wall, subdivided_wall, Wall};
use proptest::prelude::*;

fn strip(z: usize, m: usize) -> (Graph, Wall, Chain) {
    let (g, w) = identity_wall(z, m * z).unwrap();
    let c = chain_from_strip(&g, &w, m, z, 0).unwrap();
    (g, w, c)
}

/// Vertex of basic wall `k` at template row `i`, grid column `j` (1-based).
fn at(c: &Chain, k: usize, i: usize, j: usize) -> usize {
    c.walls[k].at(i, j).unwrap()
}

fn bridge_paths(g: &Graph, c: &Chain, idx: impl Iterator<Item = usize>, tau: usize) -> Vec<(usize, Vec<usize>)> {
    idx.map(|i| match classify(g, c, i, tau).unwrap() {
        WallType::Type1(b) => (i, b[0].path(g, |_| true).unwrap()),
        other => panic!("wall {i} is type {}", other.number()),
    })
    .collect()
}

#[test]
fn planted_type3_walls_give_a_grasped_clique() {
    let (t, z, tau) = (3, 10, 4);
    let tt = pair_count(t);
    let (mut g, w, c) = strip(z, 2 * tt + 2);
    for k in 1..=2 * tt {
        g.add_edge(at(&c, k, 5, 5), at(&c, k, 6, 12));
    }
    let mut crosses = Vec::new();
    for k in 1..=2 * tt {
        match classify(&g, &c, k, tau).unwrap() {
            WallType::Type3(x) => crosses.push((k, x)),
            other => panic!("wall {k} is type {}", other.number()),
        }
    }
    let m = kt_from_type3(&g, &c, &crosses, tau, t, Some(&w)).unwrap();
    assert_eq!(m.pattern.n(), t);
    assert!(validate_minor_model(&g, &m).unwrap().is_pass());
    assert_eq!(m.edge_witness.len(), pair_count(t));

    assert!(matches!(kt_from_type3(&g, &c, &crosses[1..], tau, t, None), Err(ClassifyError::TooFew { .. })));
    assert!(matches!(kt_from_type3(&g, &c, &crosses, t, t, None), Err(ClassifyError::Param(_))));
}

/// Chain of 12T+9 walls with a chord from the core of each of walls
/// 2..12T+8 to the next wall; the first `top` selected walls aim at its top
/// row, the rest at its middle.
fn type1_fixture(t: usize, top: usize) -> (Graph, Wall, Chain, Vec<(usize, Vec<usize>)>) {
    let tt = pair_count(t);
    let z = 4 * t + 1;
    let tau = 2 * t;
    let (mut g, w, c) = strip(z, 12 * tt + 9);
    let mid = 2 * t + 1;
    let walls: Vec<usize> = (2..12 * tt + 8).collect();
    for (q, &k) in walls.iter().enumerate() {
        let row = if q % 3 == 0 && q / 3 < top { 1 } else { mid };
        g.add_edge(at(&c, k, mid, z), at(&c, k + 1, row, z));
    }
    let paths = bridge_paths(&g, &c, walls.into_iter(), tau);
    (g, w, c, paths)
}

#[test]
fn type1_bridges_to_the_top_rows_take_the_h2_route() {
    let t = 3;
    let (g, w, c, paths) = type1_fixture(t, 2 * pair_count(t) + 2);
    let k = kt_from_type1(&g, &c, &paths, 2 * t, t, Some(&w)).unwrap();
    assert_eq!(k.route, Type1Route::H2);
    assert!(validate_minor_model(&g, &k.model).unwrap().is_pass());
    assert_eq!(k.model.pattern.n(), t);
}

#[test]
fn type1_bridges_inside_take_the_cross_route() {
    let t = 3;
    let (g, w, c, paths) = type1_fixture(t, 0);
    let k = kt_from_type1(&g, &c, &paths, 2 * t, t, Some(&w)).unwrap();
    assert_eq!(k.route, Type1Route::Crosses);
    assert!(validate_minor_model(&g, &k.model).unwrap().is_pass());
    let gaps: Vec<usize> = k.walls.windows(2).map(|p| p[1] - p[0]).collect();
    assert!(gaps.iter().all(|&d| d >= 3));
}

#[test]
fn h2_threshold_is_exact() {
    let t = 2;
    let tt = pair_count(t);
    let (g, _, c, paths) = type1_fixture(t, 2 * tt + 1);
    assert_eq!(kt_from_type1(&g, &c, &paths, 2 * t, t, None).unwrap().route, Type1Route::Crosses);
    let (g, _, c, paths) = type1_fixture(t, 2 * tt + 2);
    assert_eq!(kt_from_type1(&g, &c, &paths, 2 * t, t, None).unwrap().route, Type1Route::H2);
    assert!(matches!(kt_from_type1(&g, &c, &paths[..12 * tt], 2 * t, t, None), Err(ClassifyError::TooFew { .. })));
}

#[test]
fn pendant_tree_on_the_core_boundary_keeps_type4() {
    let (mut g, c) = {
        let (g, w) = subdivided_wall(10, 40, 1).unwrap();
        let c = chain_from_strip(&g, &w, 4, 10, 0).unwrap();
        (g, c)
    };
    let core = core_wall(&c, 1, 3).unwrap();
    let root = core.boundary[5];
    let a = g.add_vertex();
    let b = g.add_vertex();
    let d = g.add_vertex();
    g.add_edge(root, a);
    g.add_edge(a, b);
    g.add_edge(a, d);
    assert_eq!(classify(&g, &c, 1, 3).unwrap().number(), 4);
    let cert = flat_from_type4(&g, &c, 1, 3, &[]).unwrap();
    assert!(verify_flat_certificate(&g, &cert).is_pass());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Random extra edges between wall vertices: every interior wall gets
    /// exactly one type, and type-4 walls always certify.
    #[test]
    fn classification_is_exhaustive_and_type4_certifies(
        extra in proptest::collection::vec((0usize..5, 1usize..=10, 1usize..=20, 0usize..5, 1usize..=10, 1usize..=20), 0..4)
    ) {
        let (mut g, _, c) = strip(10, 5);
        for (k1, i1, j1, k2, i2, j2) in extra {
            if let (Some(u), Some(v)) = (c.walls[k1].at(i1, j1), c.walls[k2].at(i2, j2)) {
                if u != v {
                    g.add_edge(u, v);
                }
            }
        }
        for i in 1..4 {
            let ty = classify(&g, &c, i, 3).unwrap();
            let b = bridges_of(&g, &c, i, 3).unwrap();
            match &ty {
                WallType::Type1(_) => prop_assert!(b.iter().any(|x| x.neighborhood)),
                WallType::Type2(_) => prop_assert!(!b.is_empty() && b.iter().all(|x| !x.neighborhood)),
                WallType::Type3(_) | WallType::Type4 { .. } => prop_assert!(b.is_empty()),
            }
            if ty.number() == 4 {
                let cert = flat_from_type4(&g, &c, i, 3, &[]).unwrap();
                let rep = verify_flat_certificate(&g, &cert);
                prop_assert!(rep.is_pass(), "{:?}", rep.failures);
            }
        }
    }
}
