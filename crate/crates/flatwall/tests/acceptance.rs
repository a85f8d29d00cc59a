//! Acceptance checks, one test per criterion. The harness prints one
//! `test criterion_NN_... ok|FAILED` line for each.

use std::collections::BTreeSet;

use flatwall::chain::{cut_wall_to_chain, Chain};
use flatwall::classify::{classify, flat_from_type4, verify_flat_certificate, without};
use flatwall::forge::*;
use flatwall::genverify::*;
use flatwall::graph::validate_minor_model;
use flatwall::pipeline::*;
use flatwall::tdp::{
    c_cross_or_flat, exhaustive_c_cross, exhaustive_two_disjoint_paths, is_c_cross, two_disjoint_paths, CrossOrFlat,
};
use flatwall::wall::{build_elementary_wall, identity_wall, subdivided_wall};
use flatwall::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn line(n: usize, what: &str) {
    println!("criterion {n:2} {what}: pass");
}

#[test]
fn criterion_01_swap_sequences() {
    for t in 2..=8 {
        let s = swap_sequence(t).unwrap();
        let tt = t * (t - 1) / 2;
        assert_eq!(s.perms.len(), tt + 1, "t = {t}");
        let mut explored = BTreeSet::new();
        for w in s.perms.windows(2) {
            let diff: Vec<usize> = (0..t).filter(|&i| w[0][i] != w[1][i]).collect();
            assert_eq!(diff.len(), 2);
            assert_eq!(diff[1], diff[0] + 1);
            let (a, b) = (w[0][diff[0]], w[0][diff[1]]);
            assert_eq!((w[1][diff[0]], w[1][diff[1]]), (b, a));
            explored.insert((a.min(b), a.max(b)));
        }
        assert_eq!(explored.len(), tt, "t = {t}");
    }
    line(1, "swap sequences");
}

#[test]
fn criterion_02_wall_construction() {
    let w = build_elementary_wall(3, 3).unwrap();
    assert_eq!((w.graph().n(), w.graph().m()), (16, 19));
    for h in 2..=10 {
        for r in 2..=10 {
            let w = build_elementary_wall(h, r).unwrap();
            let g = w.graph();
            let c = w.boundary_cycle();
            let set: BTreeSet<usize> = c.iter().copied().collect();
            assert_eq!(set.len(), c.len(), "{h}x{r} boundary repeats a vertex");
            assert!(c.len() >= 3);
            for i in 0..c.len() {
                assert!(g.has_edge(c[i], c[(i + 1) % c.len()]), "{h}x{r} boundary not closed");
            }
            let mut pegs = w.pegs();
            pegs.sort_unstable();
            let deg2: Vec<usize> = set.iter().copied().filter(|&v| g.degree(v) == 2).collect();
            assert_eq!(pegs, deg2, "{h}x{r}");
        }
    }
    line(2, "wall construction");
}

#[test]
fn criterion_03_chain_arithmetic() {
    for n in 3..=5 {
        for z in [4, 6] {
            let (g, w) = identity_wall(n * z, n * z).unwrap();
            let c: Chain = cut_wall_to_chain(&g, &w, n, z).unwrap();
            assert_eq!(c.len(), n * (n - 2));
            for b in &c.walls {
                b.check(&g).unwrap();
                assert_eq!(b.h(), z);
            }
            let m = c.mesh().unwrap();
            assert_eq!(m.rows.len(), z);
            assert!(m.cols.len() >= z * n * (n - 2), "N = {n}, z = {z}");
        }
    }
    line(3, "chain arithmetic");
}

#[test]
fn criterion_04_clique_forges() {
    for fam in [Family::HStar, Family::H1, Family::H2, Family::H3] {
        for t in 3..=5 {
            let inst = build_family_instance(fam, t, Sizing::default()).unwrap();
            assert!(validate_family(&inst).is_pass());
            let (g, w, m) = wall_host(&inst).unwrap();
            let f = match fam {
                Family::HStar => clique_from_hstar,
                Family::H1 => clique_from_h1,
                Family::H2 => clique_from_h2,
                Family::H3 => clique_from_h3,
            };
            let k = f(&g, &inst, &m, Some(&w)).unwrap();
            assert_eq!(k.pattern.n(), t);
            assert!(validate_minor_model(&g, &k).unwrap().is_pass(), "{fam:?} t = {t}");
            let pairs: BTreeSet<(usize, usize)> = k.edge_witness.iter().map(|e| (e[0].min(e[1]), e[0].max(e[1]))).collect();
            assert_eq!(pairs.len(), pair_count(t));
        }
    }
    line(4, "clique forges");
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v);
            }
        }
    }
    g
}

#[test]
fn criterion_05_two_paths_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..500 {
        let n = rng.gen_range(4..=12);
        let pr = rng.gen_range(0.15..0.6);
        let g = random_graph(&mut rng, n, pr);
        let mut t: Vec<usize> = (0..n).collect();
        for i in 0..4 {
            let j = rng.gen_range(i..n);
            t.swap(i, j);
        }
        let got = two_disjoint_paths(&g, t[0], t[1], t[2], t[3]).unwrap();
        let want = exhaustive_two_disjoint_paths(&g, t[0], t[1], t[2], t[3]).unwrap();
        assert_eq!(got.is_some(), want.is_some());
        if let Some((p1, p2)) = got {
            assert!(flatwall::tdp::check_two_paths(&g, &p1, &p2, [t[0], t[1], t[2], t[3]]));
        }
    }
    let (mut crosses, mut flats) = (0, 0);
    for _ in 0..150 {
        let k = rng.gen_range(4..=7);
        let n = rng.gen_range(k..=12);
        let pr = rng.gen_range(0.1..0.35);
        let mut g = random_graph(&mut rng, n, pr);
        let c: Vec<usize> = (0..k).collect();
        for i in 0..k {
            g.add_edge(c[i], c[(i + 1) % k]);
        }
        let oracle = exhaustive_c_cross(&g, &c).unwrap();
        match c_cross_or_flat(&g, &c).unwrap() {
            CrossOrFlat::Cross { p1, p2 } => {
                assert!(is_c_cross(&g, &c, &p1, &p2));
                assert!(oracle.is_some());
                crosses += 1;
            }
            CrossOrFlat::Flat(fd) => {
                fd.verify(&g, &c).unwrap();
                assert!(oracle.is_none());
                flats += 1;
            }
        }
    }
    assert!(crosses > 0 && flats > 0, "{crosses} crosses, {flats} flat");
    line(5, "two-paths oracle");
}

#[test]
fn criterion_06_classifier_matrix() {
    let mut seen = [0usize; 4];
    let mut plans = 0;
    for seed in 0..24u64 {
        let n = 1 + (seed as usize % 10);
        let (z, tau) = [(8, 3), (10, 4), (12, 5), (16, 6), (20, 8)][seed as usize % 5];
        let plan = random_plan(seed, n, z, tau);
        assert!(plan.walls() <= 12 && plan.z <= 20);
        let (g, c) = gen_planted_chain(&plan).unwrap();
        for (q, &ty) in plan.types.iter().enumerate() {
            let i = q + 1;
            assert_eq!(classify(&g, &c, i, tau).unwrap().number(), ty, "seed {seed}, wall {i}");
            seen[ty as usize - 1] += 1;
            if ty == 4 {
                let cert = flat_from_type4(&g, &c, i, tau, &[]).unwrap();
                assert!(verify_flat_certificate(&g, &cert).is_pass());
            }
        }
        plans += 1;
    }
    assert!(plans >= 20);
    assert!(seen.iter().all(|&k| k > 0), "{seen:?}");
    line(6, "classifier matrix");
}

fn expect_flat(g: &Graph, out: &Outcome, max_apex: usize) -> Vec<usize> {
    let Outcome::Flat { apex, cert } = out else { panic!("expected flat, got {out:?}") };
    assert!(apex.len() <= max_apex);
    assert!(cert.wall.h() >= 4 && cert.wall.r() >= 4);
    assert!(verify_flat_certificate(g, cert).is_pass());
    apex.clone()
}

#[test]
fn criterion_07_weak_end_to_end() {
    let p = Params::weak(3, 4, 3).unwrap().override_n(5).override_z(16);
    let (g, w) = identity_wall(p.r, p.r).unwrap();
    assert!(expect_flat(&g, &flat_wall_weak(&g, &w, &p).unwrap(), 0).is_empty());

    let p = Params::weak(3, 4, 3).unwrap().override_n(8).override_z(16);
    let (mut g, w) = subdivided_wall(p.r, p.r, 1).unwrap();
    let c = build_chain(&g, &w, &p).unwrap();
    // Chord across the core between rungs of rows 7-8 and 9-10.
    let rung = |k: usize, i: usize, j: usize| {
        let m = c.walls[k].mesh();
        m.cols[j - 1][m.col_span(j - 1, i - 1).1 + 1]
    };
    for k in 1..=6 {
        g.add_edge(rung(k, 7, 3), rung(k, 9, 5));
    }
    match flat_wall_weak(&g, &w, &p).unwrap() {
        Outcome::CliqueMinor { model, grasped, .. } => {
            assert_eq!(model.pattern.n(), 3);
            assert!(validate_minor_model(&g, &model).unwrap().is_pass());
            assert!(grasped);
        }
        other => panic!("expected a triangle, got {other:?}"),
    }
    line(7, "weak end to end");
}

#[test]
fn criterion_08_strong_end_to_end() {
    let p = Params::strong(3, 4).unwrap().override_n(5).override_z(16);
    let (g, w) = identity_wall(p.r, p.r).unwrap();
    assert!(expect_flat(&g, &flat_wall_strong(&g, &w, &p).unwrap(), 0).is_empty());

    let t = 6;
    let p = Params::strong(t, 4).unwrap().override_n(63).override_z(8).override_tau(2);
    let (mut g, w) = identity_wall(p.r, p.r).unwrap();
    let a = g.add_vertex();
    for v in 0..a {
        g.add_edge(a, v);
    }
    let out = flat_wall_strong(&g, &w, &p).unwrap();
    let apex = expect_flat(&g, &out, t - 5);
    let Outcome::Flat { cert, .. } = &out else { unreachable!() };
    // No apex edge is needed by the wall, the separation or the drawing.
    let rep = verify_flat_certificate(&without(&g, &apex), cert);
    assert!(rep.is_pass(), "{:?}", rep.failures);

    // Toy hosts: whatever the pipeline returns must agree with the oracle.
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut compared = 0;
    for _ in 0..40 {
        let (mut g, w) = identity_wall(2, rng.gen_range(2..=3)).unwrap();
        while g.n() < 14 && rng.gen_bool(0.7) {
            g.add_vertex();
        }
        for _ in 0..rng.gen_range(0..12) {
            let (u, v) = (rng.gen_range(0..g.n()), rng.gen_range(0..g.n()));
            if u != v {
                g.add_edge(u, v);
            }
        }
        assert!(g.n() <= 14);
        for tt in 2..=4 {
            let Ok(p) = Params::strong(tt, 1).map(|p| p.override_n(3).override_z(2).override_tau(1)) else { continue };
            if let Ok(Outcome::CliqueMinor { model, .. }) = flat_wall_strong(&g, &w, &p) {
                assert!(validate_minor_model(&g, &model).unwrap().is_pass());
                assert!(matches!(brute_force_minor(&g, tt, 1_000_000), MinorSearch::Found(_)));
                compared += 1;
            }
        }
    }
    println!("toy hosts: {compared} clique answers compared with the oracle");
    line(8, "strong end to end");
}

#[test]
fn criterion_09_lower_bound_generator() {
    for (wp, tp) in [(4, 1), (3, 2), (4, 3), (6, 1), (10, 4)] {
        assert_eq!(gen_lowerbound(wp, tp).unwrap().graph.max_degree(), 5, "wp = {wp}, tp = {tp}");
    }
    let lb = gen_lowerbound(6, 1).unwrap();
    assert_eq!((lb.side, lb.cells.len()), (5, 1));
    assert_eq!(brute_force_minor(&lb.graph, 5, 1_000_000), MinorSearch::Absent);
    line(9, "lower-bound generator");
}

#[test]
fn criterion_10_parameter_formulas() {
    assert_eq!(Params::strong(3, 4).unwrap().r, 704);
    assert_eq!(Params::weak(2, 4, 3).unwrap().r, (4 + 8) * 37);
    line(10, "parameter formulas");
}
