use localarc::arcs::{
    derive_phi, lrc_params, reduce_uniformity, is_induced_matching, verify_local_arc, verify_local_arc_oracle,
    FamilyFile, LocalArcFamily, Reduced, SetFamily,
};
use localarc::construct::{
    affine_conic_partition, affine_seed_search, case1_lift, case2_lift, case3_lift, lift_prime, oval_partition,
    Case3Params, GenericSeed,
};
use localarc::gf::Field;
use localarc::plane::{Plane, Point};
use localarc::sdf::SdfBasis;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Small members of every construction, each with its closed-form count.
fn suite() -> Vec<(&'static str, LocalArcFamily, u128)> {
    let mut out = Vec::new();
    for (q, k) in [(7u64, 2usize), (8, 5), (9, 3), (16, 4), (25, 6)] {
        let f = oval_partition(q, k).unwrap();
        let n = f.sets().len() as u128;
        out.push(("oval", f, n));
    }
    let l = lift_prime(&GenericSeed::example_i(), &SdfBasis::small(), 1031).unwrap();
    out.push(("lift-prime", l.family.materialize(), l.closed_form));
    let l = case1_lift(&affine_conic_partition(11, 2).unwrap()).unwrap();
    out.push(("case1", l.family.materialize(), l.closed_form));
    let l = case1_lift(&affine_conic_partition(7, 3).unwrap()).unwrap();
    out.push(("case1 k=3", l.family.materialize(), l.closed_form));
    let seed = case1_lift(&affine_conic_partition(3, 2).unwrap()).unwrap().family.materialize();
    let l = case2_lift(&seed, 2).unwrap();
    out.push(("case2", l.family.materialize(), l.closed_form));
    let l = case3_lift(&affine_conic_partition(7, 2).unwrap(), 3, &Case3Params { f_max: 1, a: vec![1, 3] }).unwrap();
    out.push(("case3", l.family.materialize(), l.closed_form));
    let l = case3_lift(&affine_conic_partition(5, 4).unwrap(), 4, &Case3Params { f_max: 1, a: vec![1] }).unwrap();
    out.push(("case4", l.family.materialize(), l.closed_form));
    out
}

#[test]
fn suite_verifies_and_counts_match() {
    for (name, f, closed) in suite() {
        assert!(verify_local_arc(&f).is_accept(), "{name}");
        assert_eq!(f.sets().len() as u128, closed, "{name}");
    }
}

#[test]
fn suite_round_trips_through_json() {
    for (name, f, _) in suite() {
        let back = LocalArcFamily::from_json(&f.to_json()).unwrap();
        assert_eq!(back, f, "{name}");
        assert_eq!(verify_local_arc(&back).is_accept(), verify_local_arc(&f).is_accept());
        let file = FamilyFile::from_json(&f.to_json()).unwrap();
        assert_eq!(file.q, f.plane().field().order());
    }
}

#[test]
fn suite_reduces_and_has_phi() {
    for (name, f, _) in suite() {
        match reduce_uniformity(&f).unwrap() {
            Reduced::Family(g) => {
                assert!(verify_local_arc(&g).is_accept(), "{name}");
                assert_eq!(g.uniform_k() + 1, f.uniform_k());
            }
            Reduced::Matching(m) => assert!(is_induced_matching(f.plane(), &m), "{name}"),
        }
        assert!(derive_phi(&f).unwrap().ok(), "{name}");
    }
}

#[test]
fn lrc_from_four_uniform() {
    let f = oval_partition(16, 4).unwrap();
    let p = lrc_params(&f).unwrap();
    assert_eq!(p.to_string(), "n=16 k=9 d=6 r=3");
    assert_eq!(p.alphabet, 16);
}

#[test]
fn seed_search_beats_conic() {
    let found = affine_seed_search(5, 2, 5).unwrap().unwrap();
    assert_eq!(found.sets().len(), 5);
    assert!(verify_local_arc(&found).is_accept());
    assert_eq!(affine_conic_partition(5, 2).unwrap().sets().len(), 2);
}

fn random_family(q: u64, k: usize, sets: usize, seed: u64) -> LocalArcFamily {
    let plane = Plane::homogeneous(Field::of_order(q).unwrap());
    let pts = plane.points();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut used: Vec<Point> = Vec::new();
    let mut out = Vec::new();
    for _ in 0..sets {
        let mut s = Vec::new();
        while s.len() < k {
            let p = pts[rng.gen_range(0..pts.len())];
            if !s.contains(&p) && !used.contains(&p) {
                s.push(p);
            }
        }
        used.extend(&s);
        out.push(s);
    }
    LocalArcFamily::new(plane, out).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn verifier_agrees_with_oracle(qi in 0usize..3, k in 2usize..4, sets in 1usize..4, seed in any::<u64>()) {
        let q = [5u64, 7, 9][qi];
        let f = random_family(q, k, sets, seed);
        let fast = verify_local_arc(&f).is_accept();
        let slow = verify_local_arc_oracle(&f).unwrap().is_accept();
        prop_assert_eq!(fast, slow);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn oval_subfamilies_stay_local_arcs(qi in 0usize..6, k in 2usize..6, mask in any::<u32>()) {
        let q = [5u64, 7, 8, 9, 11, 13][qi];
        let f = oval_partition(q, k).unwrap();
        let keep: Vec<usize> = (0..f.sets().len()).filter(|i| mask >> (i % 32) & 1 == 1).collect();
        let sub = f.subfamily(&keep);
        prop_assert!(verify_local_arc(&sub).is_accept());
        if sub.sets().len() >= 1 {
            prop_assert!(reduce_uniformity(&sub).is_ok());
        }
    }
}
