//! Randomized structural invariants over small posets.

use proptest::prelude::*;

use ordhom_core::downset::{constrained_pair_count, h_by_summation, DownSetLattice};
use ordhom_core::oracle::{brute_hom_count, random_poset_from_seed};
use ordhom_core::{ElementSet, Poset};

fn small_poset() -> impl Strategy<Value = Poset> {
    (0usize..=7, any::<u64>()).prop_map(|(n, seed)| random_poset_from_seed(n, seed))
}

proptest! {
    #[test]
    fn constructed_posets_validate(p in small_poset(), q in small_poset()) {
        prop_assert!(p.validate().is_ok());
        prop_assert!(p.dual().validate().is_ok());
        if p.n() * q.n() <= 64 {
            prop_assert!(Poset::product(&p, &q).unwrap().validate().is_ok());
        }
        prop_assert!(Poset::direct_sum(&p, &q).unwrap().validate().is_ok());
        prop_assert!(Poset::ordinal_sum(&p, &q).unwrap().validate().is_ok());
    }

    #[test]
    fn dual_is_an_involution(p in small_poset()) {
        prop_assert!(p.dual().dual().same_order(&p));
    }

    #[test]
    fn product_carrier_size(p in small_poset(), q in small_poset()) {
        prop_assume!(p.n() * q.n() <= 64);
        let prod = Poset::product(&p, &q).unwrap();
        prop_assert_eq!(prod.n(), p.n() * q.n());
    }

    #[test]
    fn closures_produce_down_and_up_sets(p in small_poset(), bits in any::<u8>()) {
        let b: ElementSet = (0..p.n()).filter(|i| bits >> i & 1 == 1).collect();
        let down = p.down_closure(b);
        prop_assert!(p.is_downset(down));
        prop_assert!(p.is_upset(p.carrier().difference(down)));
        prop_assert!(b.is_subset_of(down));
    }

    #[test]
    fn enumeration_is_exactly_the_down_sets(p in small_poset()) {
        let lattice = DownSetLattice::enumerate(&p).unwrap();
        // oracle: filter all subsets by the down-set predicate
        let expected: Vec<ElementSet> = (0u128..1 << p.n())
            .map(ElementSet::from_bits)
            .filter(|&s| p.is_downset(s))
            .collect();
        prop_assert_eq!(lattice.len(), expected.len());
        for s in expected {
            prop_assert!(lattice.contains(s));
        }
    }

    #[test]
    fn summation_matches_brute_force(p in small_poset()) {
        let by_lattice = h_by_summation(&p).unwrap();
        let by_search = brute_hom_count(&p, &Poset::chain(3)).unwrap().total;
        prop_assert_eq!(by_lattice, by_search);
    }

    #[test]
    fn summation_is_self_dual(p in small_poset()) {
        prop_assert_eq!(h_by_summation(&p).unwrap(), h_by_summation(&p.dual()).unwrap());
    }

    #[test]
    fn unconstrained_pairs_count_h(p in small_poset()) {
        let e = ElementSet::EMPTY;
        prop_assert_eq!(
            constrained_pair_count(&p, e, e, e, e).unwrap(),
            h_by_summation(&p).unwrap()
        );
    }
}
