use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use posetprod::limits::{cochain_complex, limits_of, unnormalized_cochain_complex};
use posetprod::linalg::FieldSpec;
use posetprod::poset::{classify, is_isomorphic, random_poset, reduce, reduce_by, PointedPoset, RandomPosetConfig};
use posetprod::space::{build_space_diagram, homology, standard_pair, uniform_pairs};
use posetprod::stanley::presentation_check;
use posetprod::suite::random_polyhedral;
use posetprod::tensor::{build_t, polyhedral_tensor, vertex_names, MorphismCollection};
use posetprod::transform::{check_embedding, simplicial_transform};

const Q: FieldSpec = FieldSpec::Rationals;

fn poset(seed: u64, objects: usize) -> PointedPoset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_poset(&mut rng, &RandomPosetConfig { objects, ..RandomPosetConfig::default() })
}

fn lower_saturated(seed: u64) -> (PointedPoset, ChaCha8Rng) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let objects = rand::Rng::gen_range(&mut rng, 2..=7);
        let p = random_poset(&mut rng, &RandomPosetConfig { objects, ..RandomPosetConfig::default() });
        if classify(&p).lower_saturated {
            return (p, rng);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn order_relation_is_a_partial_order(seed in any::<u64>(), n in 1usize..9) {
        let p = poset(seed, n);
        for x in 0..p.len() {
            prop_assert!(p.leq(p.base(), x));
            for y in 0..p.len() {
                if p.leq(x, y) && p.leq(y, x) {
                    prop_assert_eq!(x, y);
                }
                for z in 0..p.len() {
                    if p.leq(x, y) && p.leq(y, z) {
                        prop_assert!(p.leq(x, z));
                    }
                }
            }
        }
        let pos: Vec<usize> = {
            let mut v = vec![0; p.len()];
            for (i, &x) in p.topological_order().iter().enumerate() {
                v[x] = i;
            }
            v
        };
        for &(x, y) in p.covers() {
            prop_assert!(pos[x] < pos[y]);
            prop_assert!(p.interval_interior(x, y).is_empty());
        }
        prop_assert_eq!(PointedPoset::from_json(&p.to_json()).unwrap(), p);
    }

    #[test]
    fn reduction_is_idempotent_and_keeps_vertices(seed in any::<u64>(), n in 1usize..9) {
        let p = poset(seed, n);
        let r = reduce(&p);
        prop_assert!(classify(&r.poset).reduced);
        prop_assert!(reduce(&r.poset).steps.is_empty());
        let mut a = vertex_names(&p);
        let mut b = vertex_names(&r.poset);
        a.sort();
        b.sort();
        prop_assert_eq!(a, b);
        let last = reduce_by(&p, |c| c.len() - 1);
        prop_assert!(is_isomorphic(&last.poset, &r.poset));
    }

    #[test]
    fn polyhedral_criteria_agree(seed in any::<u64>(), n in 1usize..9) {
        let r = classify(&poset(seed, n));
        prop_assert_eq!(r.polyhedral, r.polyhedral_pairs);
        if r.simplicial {
            prop_assert!(r.polyhedral);
        }
    }

    #[test]
    fn normalized_and_weak_chains_agree(seed in any::<u64>()) {
        let (p, mut rng) = lower_saturated(seed);
        let a = MorphismCollection::random_surjective(&mut rng, &vertex_names(&p), 2).unwrap();
        let t = build_t(&p, &a, None).unwrap();
        let strict = limits_of(&cochain_complex(&t, 2), Q).unwrap();
        let weak = limits_of(&unnormalized_cochain_complex(&t, 2), Q).unwrap();
        prop_assert_eq!(strict.dims, weak.dims);
    }

    #[test]
    fn lower_saturated_diagrams_are_acyclic(seed in any::<u64>()) {
        let (p, mut rng) = lower_saturated(seed);
        let a = MorphismCollection::random_surjective(&mut rng, &vertex_names(&p), 3).unwrap();
        let t = polyhedral_tensor(&p, &a, 2, Q).unwrap();
        prop_assert!(t.higher[1..].iter().flatten().all(|&d| d == 0), "{:?}", t.higher);
    }

    #[test]
    fn tensor_ignores_vertex_order(seed in any::<u64>()) {
        let (p, mut rng) = lower_saturated(seed);
        let a = MorphismCollection::random_surjective(&mut rng, &vertex_names(&p), 2).unwrap();
        let mut order = vertex_names(&p);
        order.shuffle(&mut rng);
        let base = limits_of(&cochain_complex(&build_t(&p, &a, None).unwrap(), 1), Q).unwrap();
        let shuffled = limits_of(&cochain_complex(&build_t(&p, &a, Some(&order)).unwrap(), 1), Q).unwrap();
        prop_assert_eq!(base.dims, shuffled.dims);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn transform_of_polyhedral_is_simplicial(seed in any::<u64>()) {
        for p in random_polyhedral(seed, 4) {
            let t = simplicial_transform(&p).unwrap();
            prop_assert!(classify(&t.transform).simplicial);
            let e = check_embedding(&p).unwrap();
            if e.precondition {
                prop_assert!(e.is_ok());
            }
        }
    }

    #[test]
    fn presentation_matches_limit(seed in any::<u64>()) {
        for p in random_polyhedral(seed, 4) {
            let c = presentation_check(&p, 3, 1, Q).unwrap();
            prop_assert!(c.agree, "{} {:?}", p.to_json(), c);
        }
    }

    #[test]
    fn colimit_and_hocolim_agree(seed in any::<u64>()) {
        let p = random_polyhedral(seed, 2).pop().unwrap();
        let r = classify(&p);
        prop_assume!(r.reduced && p.vertices().len() <= 3);
        let pairs = uniform_pairs(&p, &standard_pair("circle-point", 3).unwrap());
        let d = build_space_diagram(&p, &pairs, None).unwrap();
        let check = d.support_check();
        prop_assert!(check.within_vertex_sets && check.maps_preserve_support && check.colimit_injective);
        let f2 = FieldSpec::Prime(2);
        prop_assert_eq!(homology(&d.colimit(), f2, 2).unwrap(), homology(&d.hocolim(), f2, 2).unwrap());
    }
}
