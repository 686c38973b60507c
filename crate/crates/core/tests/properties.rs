use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use trop_core::cycle::{stable_intersection_number, tropical_hypersurface};
use trop_core::kp::{class_of_polytope, simplicial_chamber, top_pairing, volume_polynomial};
use trop_core::polytope::{minkowski_sum, mixed_volume, Polytope};

fn q(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

fn lattice_polygon() -> impl Strategy<Value = Polytope> {
    prop::collection::vec((0i64..4, 0i64..4), 3..6)
        .prop_map(|pts| {
            Polytope::convex_hull(&pts.into_iter().map(|(x, y)| vec![q(x), q(y)]).collect::<Vec<_>>()).unwrap()
        })
        .prop_filter("full-dimensional", Polytope::is_full_dimensional)
}

fn degree(a: &Polytope, b: &Polytope) -> BigRational {
    let (ha, hb) = (tropical_hypersurface(a).unwrap(), tropical_hypersurface(b).unwrap());
    stable_intersection_number(&ha, &hb, 1).unwrap().value
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn tropical_degree_is_twice_mixed_volume(a in lattice_polygon(), b in lattice_polygon()) {
        prop_assert_eq!(degree(&a, &b), mixed_volume(&[a, b]).unwrap() * q(2));
    }

    #[test]
    fn degree_is_additive_under_minkowski_sum(
        a in lattice_polygon(), b in lattice_polygon(), c in lattice_polygon()
    ) {
        let ab = minkowski_sum(&a, &b).unwrap();
        prop_assert_eq!(degree(&ab, &c), degree(&a, &c) + degree(&b, &c));
    }

    #[test]
    fn self_pairing_is_normalized_volume(p in lattice_polygon()) {
        let (fan, h0) = simplicial_chamber(&p).unwrap();
        let v = volume_polynomial(&fan, &h0).unwrap();
        let h = class_of_polytope(&fan, &p).unwrap();
        prop_assert_eq!(top_pairing(&v, &[h.clone(), h]).unwrap(), p.volume() * q(2));
    }
}
