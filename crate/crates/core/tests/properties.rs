mod common;

use std::cmp::Ordering;
use std::collections::HashSet;

use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use simplex_cover::covering::covers_discrete;
use simplex_cover::lattice::enumerate_sublattices;
use simplex_cover::search::brute_force_f;
use simplex_cover::tile::{build_tile, prec_compare, tile_from_signed_difference};
use simplex_cover::{IntegerLattice, OrthantPoint};

use common::*;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn normal_form_is_canonical(seed in any::<u64>(), n in 1usize..=4) {
        let mut r = rng(seed);
        let gens = random_generators(&mut r, n, 60);
        let l = IntegerLattice::from_i64_rows(&gens).unwrap();
        let scrambled = mat_mul(&random_unimodular(&mut r, n), &gens);
        prop_assert_eq!(&IntegerLattice::from_i64_rows(&scrambled).unwrap(), &l);
        // normalising a normal form changes nothing
        prop_assert_eq!(&IntegerLattice::from_i64_rows(&rows(&l)).unwrap(), &l);
        let b = rows(&l);
        for i in 0..n {
            prop_assert!(b[i][i] > 0);
            for j in i + 1..n {
                prop_assert_eq!(b[i][j], 0);
            }
            for row in &b[i + 1..] {
                prop_assert!((0..b[i][i]).contains(&row[i]));
            }
        }
    }

    #[test]
    fn determinant_matches_bareiss(seed in any::<u64>(), n in 1usize..=4) {
        let gens = random_generators(&mut rng(seed), n, 60);
        let l = IntegerLattice::from_i64_rows(&gens).unwrap();
        prop_assert_eq!(l.det(), &abs_det(&gens));
    }

    #[test]
    fn reduction_is_a_retraction(seed in any::<u64>(), n in 1usize..=4,
                                 x in proptest::collection::vec(-1000i64..1000, 4)) {
        let l = random_lattice(&mut rng(seed), n, 60);
        let x = big(&x[..n]);
        let r = l.reduce_mod(&x).unwrap();
        prop_assert_eq!(&l.reduce_mod(&r).unwrap(), &r);
        let diff: Vec<BigInt> = x.iter().zip(&r).map(|(a, b)| a - b).collect();
        prop_assert!(l.contains(&diff).unwrap());
        for (ri, hi) in r.iter().zip(l.diagonal()) {
            prop_assert!(*ri >= BigInt::from(0) && *ri < hi);
        }
        let oracle = residue(&rows(&l), &x.iter().map(|c| i64::try_from(c).unwrap()).collect::<Vec<_>>());
        prop_assert_eq!(r, big(&oracle));
    }

    #[test]
    fn residues_number_det(seed in any::<u64>(), n in 1usize..=3) {
        let l = random_lattice(&mut rng(seed), n, 30);
        let det = i64::try_from(l.det()).unwrap();
        // a box of side det contains every coset
        let mut seen = HashSet::new();
        let mut x = vec![0i64; n];
        loop {
            seen.insert(l.reduce_mod(&big(&x)).unwrap());
            let mut i = 0;
            while i < n && x[i] == det - 1 {
                x[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
            x[i] += 1;
        }
        prop_assert_eq!(seen.len() as i64, det);
    }

    #[test]
    fn graded_order_is_translation_invariant(
        x in proptest::collection::vec(0u32..50, 3),
        y in proptest::collection::vec(0u32..50, 3),
        z in proptest::collection::vec(0u32..50, 3),
    ) {
        let add = |a: &[u32], b: &[u32]| OrthantPoint::new(a.iter().zip(b).map(|(p, q)| p + q).collect());
        let (px, py) = (OrthantPoint::new(x.clone()), OrthantPoint::new(y.clone()));
        let before = prec_compare(&px, &py).unwrap();
        let after = prec_compare(&add(&x, &z), &add(&y, &z)).unwrap();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn covering_is_monotone_in_radius(seed in any::<u64>(), n in 2usize..=3, d in 0u64..8) {
        let l = random_lattice(&mut rng(seed), n, 40);
        let now = covers_discrete(n, d, &l).unwrap().covered;
        let next = covers_discrete(n, d + 1, &l).unwrap().covered;
        prop_assert!(!now || next);
        prop_assert_eq!(now, simplex_covers(&l, d));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn graded_order_additivity_many(
        x in proptest::collection::vec(0u32..20, 4),
        y in proptest::collection::vec(0u32..20, 4),
        z in proptest::collection::vec(0u32..20, 4),
    ) {
        let add = |a: &[u32]| OrthantPoint::new(a.iter().zip(&z).map(|(p, q)| p + q).collect());
        let (px, py) = (OrthantPoint::new(x.clone()), OrthantPoint::new(y.clone()));
        if px.cmp(&py) == Ordering::Less {
            prop_assert_eq!(add(&x).cmp(&add(&y)), Ordering::Less);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn tile_structure(seed in any::<u64>(), pick in 0usize..3) {
        let (n, cap) = [(2, 60), (3, 60), (4, 30)][pick];
        let l = random_lattice(&mut rng(seed), n, cap);
        let tile = build_tile(&l).unwrap();
        let pts: Vec<Vec<u32>> = tile.points().iter().map(|p| p.coords().to_vec()).collect();
        prop_assert_eq!(&pts, &brute_tile(&l));
        prop_assert!(tile.is_downward_closed());
        prop_assert!(simplex_cover::tile::is_tiling(tile.points(), &l));
        prop_assert!(tile.find_notch().is_ok());
        prop_assert_eq!(tile.m_diameter(), bfs_diameter(&l));
        let signed = tile_from_signed_difference(&l, tile.m_diameter()).unwrap();
        prop_assert_eq!(signed.as_slice(), tile.points());
    }
}

#[test]
fn sublattice_counts() {
    for m in 1..=60 {
        let two = enumerate_sublattices(2, m);
        assert_eq!(two.len() as u64, sigma(m), "n = 2, m = {m}");
        assert!(two.iter().all(|l| l.det() == &BigInt::from(m)));
    }
    for m in 1..=24 {
        assert_eq!(enumerate_sublattices(3, m).len() as u64, sublattice_count_3(m), "n = 3, m = {m}");
    }
    let distinct: HashSet<IntegerLattice> = enumerate_sublattices(3, 12).into_iter().collect();
    assert_eq!(distinct.len() as u64, sublattice_count_3(12));
}

#[test]
fn f_is_monotone_and_witnessed() {
    let mut prev = BigInt::from(0);
    for d in 0..=6 {
        let r = brute_force_f(2, d, None).unwrap();
        assert!(r.f_value >= prev);
        assert_eq!(r.witness.det(), &r.f_value);
        assert!(bfs_diameter(&r.witness) <= d);
        prev = r.f_value;
    }
    let mut prev = BigInt::from(0);
    for d in 0..=3 {
        let r = brute_force_f(3, d, None).unwrap();
        assert!(r.f_value >= prev);
        assert!(bfs_diameter(&r.witness) <= d);
        prev = r.f_value;
    }
}
