use std::collections::BTreeSet;

use flatwall::forge::*;
use flatwall::graph::validate_minor_model;
use proptest::prelude::*;

fn run(fam: Family, t: usize) {
    let inst = build_family_instance(fam, t, Sizing::default()).unwrap();
    let (g, w, m) = wall_host(&inst).unwrap();
    assert!(validate_minor_model(&g, &m).unwrap().is_pass());
    let f = match fam {
        Family::HStar => clique_from_hstar,
        Family::H1 => clique_from_h1,
        Family::H2 => clique_from_h2,
        Family::H3 => clique_from_h3,
    };
    let k = f(&g, &inst, &m, Some(&w)).unwrap();
    assert_eq!(k.pattern.n(), t);
    assert_eq!(k.pattern.m(), pair_count(t));
    assert!(validate_minor_model(&g, &k).unwrap().is_pass(), "{fam:?} t={t}");
}

#[test]
fn every_family_gives_a_grasped_clique_in_a_wall_host() {
    for fam in [Family::HStar, Family::H1, Family::H2, Family::H3] {
        for t in 3..=5 {
            run(fam, t);
        }
    }
}

#[test]
fn family_mismatch_and_bad_model_are_rejected() {
    let inst = build_family_instance(Family::H1, 3, Sizing::default()).unwrap();
    let (g, _, mut m) = wall_host(&inst).unwrap();
    assert!(matches!(clique_from_h2(&g, &inst, &m, None), Err(ForgeError::FamilyMismatch { .. })));
    m.branch_sets[0].clear();
    assert!(matches!(clique_from_h1(&g, &inst, &m, None), Err(ForgeError::Model(_))));
}

#[test]
fn hstar_paths_cross_every_column_of_the_first_block() {
    let t = 4;
    let inst = build_family_instance(Family::HStar, t, Sizing::default()).unwrap();
    let ex = extract_clique(&inst).unwrap();
    for p in &ex.paths {
        let cols: BTreeSet<usize> = p.iter().map(|&v| inst.cell(v).1).filter(|&c| c <= t).collect();
        assert_eq!(cols.len(), t);
    }
}

#[test]
fn h2_with_all_y_on_top_uses_the_top_snake_only() {
    let t = 3;
    let inst = build_family_instance(Family::H2, t, Sizing::default()).unwrap();
    let ex = extract_clique(&inst).unwrap();
    for (_, _, c) in &ex.connectors {
        let inner = &c[1..c.len() - 1];
        assert!(inner.iter().all(|&v| inst.cell(v).0 <= t));
    }
}

#[test]
fn h3_label_paths_meet_every_column_of_the_special_block() {
    let t = 4;
    let inst = build_family_instance(Family::H3, t, Sizing::default()).unwrap();
    let ex = extract_clique(&inst).unwrap();
    let on_paths: Vec<BTreeSet<usize>> = ex.paths.iter().map(|p| p.iter().copied().collect()).collect();
    for p in &ex.paths {
        let cols: BTreeSet<usize> = p.iter().map(|&v| inst.cell(v).1).filter(|&c| c <= t).collect();
        assert_eq!(cols.len(), t);
    }
    // Paths pairwise disjoint; each pair joined by exactly one connector.
    for a in 0..t {
        for b in a + 1..t {
            assert!(on_paths[a].is_disjoint(&on_paths[b]));
            assert_eq!(ex.connectors.iter().filter(|c| (c.0.min(c.1), c.0.max(c.1)) == (a, b)).count(), 1);
        }
    }
}

/// Random H3 member: x-endpoints on random rows of the middle band with
/// random extra spacing, y-endpoints on random sides at random distances.
fn random_h3(t: usize, seed: &[u8]) -> FamilyInstance {
    let tt = pair_count(t);
    let k = 10 * tt + 6;
    let h = 4 * t + 1 + (seed[0] as usize % 3);
    let mut xs = Vec::new();
    let mut col = 3 * t + 3;
    for q in 0..k {
        let b = seed[(q + 1) % seed.len()] as usize;
        xs.push((2 * t + 1 + b % (h - 4 * t), col));
        col += 2 * t + 3 + b % 3;
    }
    let r = col + t + 3;
    let mut edges = Vec::new();
    let mut used: BTreeSet<(usize, usize)> = xs.iter().copied().collect();
    for (q, &x) in xs.iter().enumerate() {
        let b = seed[(q * 7 + 3) % seed.len()] as usize;
        let left = b.is_multiple_of(2) && x.1 > 2 * t + 3;
        let dist = t + 2 + (b / 2) % (t + 1);
        let yc = if left { x.1 - dist } else { x.1 + dist };
        let mut y = (1 + (b / 8) % h, yc);
        while used.contains(&y) {
            y.0 = y.0 % h + 1;
        }
        used.insert(y);
        edges.push(FamilyEdge { x, y });
    }
    FamilyInstance { family: Family::H3, t, h, r, edges }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn random_h3_members_give_cliques(t in 2usize..=4, seed in proptest::collection::vec(any::<u8>(), 16..64)) {
        let inst = random_h3(t, &seed);
        prop_assume!(validate_family(&inst).is_pass());
        let ex = extract_clique(&inst).unwrap();
        let hg = inst.graph().unwrap();
        prop_assert!(validate_minor_model(&hg, &ex.model).unwrap().is_pass());
    }

    #[test]
    fn selection_is_exclusive_and_large(
        raw in proptest::collection::vec((0usize..30, 0usize..30), 1..25)
    ) {
        // One arc per tail block, no self arcs.
        let mut seen = BTreeSet::new();
        let edges: Vec<(usize, usize)> = raw.into_iter().filter(|&(x, y)| x != y && seen.insert(x)).collect();
        prop_assume!(!edges.is_empty());
        let sel = select_unconflicted_edges(&edges).unwrap();
        prop_assert!(4 * sel.len() >= edges.len());
        let tails: BTreeSet<usize> = sel.iter().map(|&i| edges[i].0).collect();
        let heads: BTreeSet<usize> = sel.iter().map(|&i| edges[i].1).collect();
        prop_assert!(tails.is_disjoint(&heads));
    }
}
