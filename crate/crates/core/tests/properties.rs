//! Property-based invariants over randomly drawn towers, direction sets and
//! group elements.

use std::sync::Arc;

use proptest::prelude::*;

use peisert_core::fields::{make_tower, Element, FieldTower};
use peisert_core::graph::build_graph;
use peisert_core::plane::{directions_of, DirectionSet, Mat2, TowerBasis};

fn towers() -> impl Strategy<Value = Arc<FieldTower>> {
    prop_oneof![
        Just((2u32, 2u32)),
        Just((2, 3)),
        Just((3, 1)),
        Just((3, 2)),
        Just((5, 1)),
        Just((7, 1)),
    ]
    .prop_map(|(p, n)| Arc::new(make_tower(p, n, None).unwrap()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms_hold(t in towers(), seed in any::<u64>()) {
        let q2 = t.q2() as u64;
        let a = Element((seed % q2) as u32);
        let b = Element((seed.wrapping_mul(2654435761) % q2) as u32);
        let c = Element((seed.wrapping_mul(0x9e3779b97f4a7c15) % q2) as u32);
        prop_assert_eq!(t.add(a, b), t.add(b, a));
        prop_assert_eq!(t.mul(a, b), t.mul(b, a));
        prop_assert_eq!(t.add(a, t.add(b, c)), t.add(t.add(a, b), c));
        prop_assert_eq!(t.mul(a, t.mul(b, c)), t.mul(t.mul(a, b), c));
        prop_assert_eq!(t.mul(a, t.add(b, c)), t.add(t.mul(a, b), t.mul(a, c)));
        prop_assert_eq!(t.pow(a, q2), a);
        if !a.is_zero() {
            prop_assert_eq!(t.mul(a, t.inv(a)), Element::ONE);
        }
    }

    #[test]
    fn connection_set_round_trips_to_directions(t in towers(), mask_seed in any::<u64>()) {
        let basis = TowerBasis::new(t.clone()).unwrap();
        let q = basis.q();
        let full = (1u64 << basis.num_directions()) - 1;
        let mut mask = mask_seed & full;
        if mask == 0 {
            mask = 1;
        }
        // graphs require m <= q: drop one direction if necessary
        if mask == full {
            mask &= !1;
        }
        let ds = DirectionSet::from_mask(basis.clone(), mask).unwrap();
        let g = build_graph(ds).unwrap();
        // directions of the connection set reproduce the direction set
        let mut seen = 0u64;
        for s in g.connection_elements() {
            seen |= 1 << basis.dir_index(basis.direction_of(s).unwrap());
        }
        prop_assert_eq!(seen, mask);
        // the connection set is symmetric and misses 0
        for s in g.connection_elements() {
            prop_assert!(g.connection_contains(t.neg(s)));
            prop_assert!(!s.is_zero());
        }
        prop_assert_eq!(g.degree(), mask.count_ones() * (q - 1));
    }

    #[test]
    fn directions_invariant_under_affine_maps(t in towers(), mask_seed in any::<u64>(), co in any::<u32>()) {
        let basis = TowerBasis::new(t.clone()).unwrap();
        let q2 = t.q2();
        // a random point set of moderate size
        let pts: Vec<_> = (0..8u32)
            .map(|i| {
                let v = (mask_seed.wrapping_mul(i as u64 + 1) % q2 as u64) as u32;
                basis.pi(Element(v))
            })
            .collect();
        // a random invertible matrix and translation
        let fq = basis.fq_elements().to_vec();
        let pick = |k: u32| fq[(co.wrapping_mul(k + 1) as usize) % fq.len()];
        let mut m = Mat2 { a: pick(1), b: pick(2), c: pick(3), d: pick(5) };
        let det = |m: &Mat2| t.sub(t.mul(m.a, m.d), t.mul(m.b, m.c));
        if det(&m).is_zero() {
            m.a = t.add(m.a, Element::ONE);
        }
        prop_assume!(!det(&m).is_zero());
        let shift = basis.pi(Element(co % q2));
        let moved: Vec<_> = pts
            .iter()
            .map(|p| {
                let a = t.add(t.add(t.mul(m.a, p.a), t.mul(m.b, p.b)), shift.a);
                let b = t.add(t.add(t.mul(m.c, p.a), t.mul(m.d, p.b)), shift.b);
                peisert_core::plane::AffinePoint { a, b }
            })
            .collect();
        let d1 = directions_of(&basis, &pts);
        let d2 = directions_of(&basis, &moved);
        prop_assert_eq!(d1.len(), d2.len());
        if !d1.is_empty() {
            let mask = |ds: &[peisert_core::plane::ProjectivePoint]| {
                ds.iter().fold(0u64, |acc, &d| acc | 1 << basis.dir_index(d))
            };
            let c1 = basis.canonical_dir_mask(mask(&d1));
            let c2 = basis.canonical_dir_mask(mask(&d2));
            prop_assert_eq!(c1, c2);
        }
    }

    #[test]
    fn canonical_form_is_orbit_invariant(mask_seed in any::<u64>(), which in any::<usize>()) {
        let basis = TowerBasis::new(Arc::new(make_tower(3, 2, None).unwrap())).unwrap();
        let full = (1u64 << basis.num_directions()) - 1;
        let mut mask = mask_seed & full;
        if mask == 0 {
            mask = 3;
        }
        let perms = basis.pgammal_perms();
        let perm = &perms[which % perms.len()];
        let mut img = 0u64;
        for i in 0..basis.num_directions() {
            if mask >> i & 1 == 1 {
                img |= 1 << perm[i as usize];
            }
        }
        prop_assert_eq!(basis.canonical_dir_mask(mask), basis.canonical_dir_mask(img));
        // idempotence
        let canon = basis.canonical_dir_mask(mask);
        prop_assert_eq!(basis.canonical_dir_mask(canon), canon);
    }

    #[test]
    fn adjacency_translation_invariance(t in towers(), mask_seed in any::<u64>(), trio in any::<(u32, u32, u32)>()) {
        let basis = TowerBasis::new(t.clone()).unwrap();
        let full = (1u64 << basis.num_directions()) - 1;
        let mut mask = mask_seed & full & !(1 << basis.q());
        if mask == 0 {
            mask = 1;
        }
        let g = build_graph(DirectionSet::from_mask(basis, mask).unwrap()).unwrap();
        let q2 = t.q2();
        let (a, b, c) = (
            Element(trio.0 % q2),
            Element(trio.1 % q2),
            Element(trio.2 % q2),
        );
        prop_assert_eq!(g.adjacent(a, b), g.adjacent(t.add(a, c), t.add(b, c)));
    }
}
