use flatwall::planar::embed;
use flatwall::tdp::{c_cross_or_flat, exhaustive_two_disjoint_paths, is_c_cross, two_disjoint_paths, CrossOrFlat};
use flatwall::wall::identity_wall;
use flatwall::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn grid_terminals_match_reference_200_seeds() {
    let g = Graph::grid(5, 5);
    for seed in 0..200u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut t = [0usize; 4];
        loop {
            t.iter_mut().for_each(|x| *x = rng.gen_range(0..25));
            let mut s = t.to_vec();
            s.sort_unstable();
            s.dedup();
            if s.len() == 4 {
                break;
            }
        }
        let got = two_disjoint_paths(&g, t[0], t[1], t[2], t[3]).unwrap();
        let want = exhaustive_two_disjoint_paths(&g, t[0], t[1], t[2], t[3]).unwrap();
        assert_eq!(got.is_some(), want.is_some(), "seed {seed}");
    }
}

#[test]
fn wall_with_row_separated_chord_has_boundary_cross() {
    let (mut g, w) = identity_wall(7, 7).unwrap();
    let (u, v) = (w.at(2, 4).unwrap(), w.at(6, 9).unwrap());
    g.add_edge(u, v);
    let c = w.boundary_cycle();
    match c_cross_or_flat(&g, &c).unwrap() {
        CrossOrFlat::Cross { p1, p2 } => assert!(is_c_cross(&g, &c, &p1, &p2)),
        CrossOrFlat::Flat(_) => panic!("chord should give a cross"),
    }
}

#[test]
fn bare_wall_is_flat_around_its_boundary() {
    let (g, w) = identity_wall(7, 7).unwrap();
    let c = w.boundary_cycle();
    match c_cross_or_flat(&g, &c).unwrap() {
        CrossOrFlat::Flat(fd) => fd.verify(&g, &c).unwrap(),
        CrossOrFlat::Cross { .. } => panic!("plane wall has no cross"),
    }
}

#[test]
fn planar_grid_with_outer_border_is_flat() {
    let g = Graph::grid(6, 6);
    let mut c: Vec<usize> = (0..6).collect();
    c.extend((1..6).map(|i| i * 6 + 5));
    c.extend((0..5).rev().map(|j| 30 + j));
    c.extend((1..5).rev().map(|i| i * 6));
    assert!(embed(&g, Some(&c)).is_some());
    match c_cross_or_flat(&g, &c).unwrap() {
        CrossOrFlat::Flat(fd) => {
            fd.verify(&g, &c).unwrap();
            assert!(fd.pieces.is_empty());
        }
        CrossOrFlat::Cross { .. } => panic!("grid is flat"),
    }
}
