mod common;

use census_core::canon::{self, brute_force_ground_aut, structural_ground_aut};
use census_core::covering::SetCollection;
use census_core::enumerate::{enumerate_unlabeled, DegreeMode};
use census_core::math::factorial;
use census_core::random;
use num_bigint::BigUint;
use proptest::prelude::*;

use common::{brute_canonical, coll, cycle, exhaustive_isomorphic, orbit_by_relabeling, rng};

fn small_cells() -> Vec<(u32, DegreeMode)> {
    let mut cells = Vec::new();
    for p in 2..=8 {
        cells.push((p, DegreeMode::Exact(2)));
        cells.push((p, DegreeMode::AtMost(2)));
    }
    for p in 2..=5 {
        cells.push((p, DegreeMode::Exact(3)));
        cells.push((p, DegreeMode::AtMost(3)));
    }
    cells.push((4, DegreeMode::Exact(4)));
    cells
}

#[test]
fn codes_agree_with_brute_force_minimum() {
    // equal codes exactly when the brute-force canonical matrices agree
    let mut r = rng(11);
    let graphs: Vec<_> = (0..300)
        .map(|_| random::random_multigraph(&mut r, 5, 3))
        .collect();
    for a in &graphs {
        for b in graphs.iter().take(60) {
            if a.order() != b.order() {
                continue;
            }
            let same = canon::canonical_code(a).unwrap() == canon::canonical_code(b).unwrap();
            assert_eq!(same, brute_canonical(a) == brute_canonical(b));
        }
    }
}

#[test]
fn relabel_invariance_on_random_coverings() {
    let mut r = rng(5);
    for _ in 0..500 {
        let c = random::random_double_covering(&mut r, 7, 3);
        let d = random::permute_ground(&mut r, &c);
        let e = random::scatter_labels(&mut r, &c);
        let code = canon::collection_code(&c).unwrap();
        assert_eq!(code, canon::collection_code(&d).unwrap());
        assert_eq!(code, canon::collection_code(&e).unwrap());
    }
}

#[test]
fn isomorphism_matches_exhaustive_bijection_search() {
    let mut r = rng(17);
    let mut pool: Vec<SetCollection> = Vec::new();
    for _ in 0..80 {
        let c = random::random_double_covering(&mut r, 5, 2);
        if c.ground().len() <= 6 {
            pool.push(random::permute_ground(&mut r, &c));
        }
    }
    let mut positives = 0;
    for a in &pool {
        for b in &pool {
            let want = exhaustive_isomorphic(a, b);
            positives += want as usize;
            assert_eq!(canon::are_isomorphic(a, b).unwrap(), want, "{a} vs {b}");
        }
    }
    assert!(positives > pool.len());
}

#[test]
fn cycle_against_two_double_edges() {
    let c4 = cycle(4, 1);
    let dd = coll(&[&[1, 2], &[1, 2], &[3, 4], &[3, 4]]);
    assert!(!exhaustive_isomorphic(&c4, &dd));
    assert!(!canon::are_isomorphic(&c4, &dd).unwrap());
}

#[test]
fn structural_aut_matches_brute_force() {
    for (p, mode) in small_cells() {
        for rep in enumerate_unlabeled(p, mode).unwrap() {
            let c = SetCollection::from_multigraph(&rep.graph).unwrap();
            if c.ground().len() > 8 {
                continue;
            }
            assert_eq!(
                structural_ground_aut(&rep.graph).unwrap(),
                brute_force_ground_aut(&c).unwrap(),
                "{c}"
            );
        }
    }
}

#[test]
fn orbit_sizes_match_direct_relabeling() {
    for (p, mode) in small_cells() {
        let n = (p * mode.l() / 2) as usize;
        if n > 6 {
            continue;
        }
        for rep in enumerate_unlabeled(p, mode).unwrap() {
            let c = SetCollection::from_multigraph(&rep.graph).unwrap();
            let want = orbit_by_relabeling(&c, n);
            assert_eq!(canon::eclass_size_on(&c, n).unwrap(), BigUint::from(want), "{c}");
        }
    }
}

#[test]
fn orbit_stabilizer_identity() {
    for (p, mode) in small_cells() {
        let n = (p * mode.l() / 2) as usize;
        if n > 8 {
            continue;
        }
        for rep in enumerate_unlabeled(p, mode).unwrap() {
            let c = SetCollection::from_multigraph(&rep.graph).unwrap();
            let e = c.ground().len();
            let size = canon::eclass_size_on(&c, n).unwrap();
            let aut = brute_force_ground_aut(&c).unwrap();
            assert_eq!(
                size * aut * factorial((n - e) as u64),
                factorial(n as u64),
                "{c}"
            );
        }
    }
}

#[test]
fn small_orbit_examples() {
    let dd = coll(&[&[1, 2], &[1, 2]]);
    assert_eq!(canon::eclass_size(&dd).unwrap(), BigUint::from(1u32));
    assert_eq!(canon::eclass_size(&cycle(3, 1)).unwrap(), BigUint::from(1u32));
    assert_eq!(orbit_by_relabeling(&cycle(3, 1), 3), 1);
    for p in 3..=6 {
        let aut = canon::ground_rearrangement_count(&cycle(p, 1)).unwrap();
        assert_eq!(aut.ground_aut, BigUint::from(2 * p));
    }
}

#[test]
fn standard_cubic_quartets_respect_rearrangement_bound() {
    let bound = BigUint::from(324u32);
    let floor_num = factorial(6);
    for rep in enumerate_unlabeled(4, DegreeMode::Exact(3)).unwrap() {
        let c = SetCollection::from_multigraph(&rep.graph).unwrap();
        if !canon::is_standard(&c).unwrap() {
            continue;
        }
        let aut = canon::ground_rearrangement_count(&c).unwrap().ground_aut;
        assert!(aut <= bound);
        assert!(canon::eclass_size(&c).unwrap() * &bound >= floor_num);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn code_round_trip_preserves_class(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = random::random_double_covering(&mut r, 8, 4);
        let g = c.to_multigraph().unwrap();
        let back = SetCollection::from_multigraph(&g).unwrap();
        prop_assert_eq!(canon::collection_code(&c).unwrap(), canon::collection_code(&back).unwrap());
        let code = canon::canonical_code(&g).unwrap();
        let rep = code.to_multigraph().unwrap();
        prop_assert_eq!(canon::canonical_code(&rep).unwrap(), code);
    }

    #[test]
    fn vertex_automorphisms_divide_factorial(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random::random_multigraph(&mut r, 7, 3);
        let aut = canon::vertex_automorphisms(&g).unwrap();
        prop_assert!(aut >= BigUint::from(1u32));
        prop_assert_eq!(factorial(g.order() as u64) % aut, BigUint::from(0u32));
    }
}
