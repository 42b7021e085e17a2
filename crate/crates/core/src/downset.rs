//! Enumeration of the down-set lattice D(P), the summation formula for
//! h(P) = #H(P, C3), and constrained counting of pairs of nested
//! down-sets (the correspondence with homomorphisms into the 3-chain).

use std::collections::BTreeMap;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::poset::{ElementSet, Poset};

/// Default cap on the number of down-sets enumerated.
pub const DEFAULT_DOWNSET_BOUND: usize = 1 << 24;

/// Down-sets of the induced sub-poset on `s`, as masks over the parent
/// poset's ids, sorted by (cardinality, bitmask value).
///
/// Elements are processed along a linear extension; a set extended by an
/// element stays valid exactly when the element's strict predecessors
/// inside `s` are already present, so every down-set appears once.
pub fn downsets_within(p: &Poset, s: ElementSet, bound: usize) -> Result<Vec<ElementSet>> {
    assert!(s.is_subset_of(p.carrier()));
    let order: Vec<usize> = p.linear_extension().into_iter().filter(|&e| s.contains(e)).collect();
    let mut sets = vec![ElementSet::EMPTY];
    for &e in &order {
        let pred = p.down_row(e).without(e).intersection(s);
        let prior = sets.len();
        for i in 0..prior {
            if pred.is_subset_of(sets[i]) {
                sets.push(sets[i].with(e));
                if sets.len() > bound {
                    return Err(Error::BoundExceeded {
                        what: "enumerating down-sets",
                        limit: bound as u128,
                    });
                }
            }
        }
    }
    sets.sort_by_key(|d| (d.len(), d.bits()));
    Ok(sets)
}

/// The fully enumerated down-set lattice of a poset, in a deterministic
/// order: index 0 is the empty set, the last entry is the full carrier.
#[derive(Clone, Debug)]
pub struct DownSetLattice {
    base: Poset,
    sets: Vec<ElementSet>,
}

impl DownSetLattice {
    pub fn enumerate(p: &Poset) -> Result<DownSetLattice> {
        DownSetLattice::enumerate_with_bound(p, DEFAULT_DOWNSET_BOUND)
    }

    pub fn enumerate_with_bound(p: &Poset, bound: usize) -> Result<DownSetLattice> {
        let sets = downsets_within(p, p.carrier(), bound)?;
        Ok(DownSetLattice { base: p.clone(), sets })
    }

    pub fn base(&self) -> &Poset {
        &self.base
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn sets(&self) -> &[ElementSet] {
        &self.sets
    }

    pub fn contains(&self, d: ElementSet) -> bool {
        self.sets.binary_search_by_key(&(d.len(), d.bits()), |s| (s.len(), s.bits())).is_ok()
    }

    /// Number of lattice members contained in `d`.
    pub fn count_within(&self, d: ElementSet) -> Result<BigUint> {
        if !self.base.is_downset(d) {
            return Err(Error::NotDownSet { set: d });
        }
        Ok(BigUint::from(self.count_within_unchecked(d)))
    }

    fn count_within_unchecked(&self, d: ElementSet) -> u64 {
        let card = d.len();
        let mut count = 0u64;
        for &e in &self.sets {
            if e.len() > card {
                break;
            }
            if e.is_subset_of(d) {
                count += 1;
            }
        }
        count
    }

    /// h(P) by the summation formula: the number of pairs E <= D in the
    /// lattice, counted with a cardinality early exit.
    pub fn h(&self) -> BigUint {
        let mut total = 0u64;
        for (i, &d) in self.sets.iter().enumerate() {
            let card = d.len();
            for &e in &self.sets[..=i] {
                if e.len() > card {
                    break;
                }
                if e.is_subset_of(d) {
                    total += 1;
                }
            }
        }
        BigUint::from(total)
    }

    /// The lattice itself as a poset under inclusion. Element ids follow
    /// the enumeration order; labels are the member sets.
    pub fn as_poset(&self) -> Result<Poset> {
        let n = self.sets.len();
        if n > crate::poset::MAX_ELEMENTS {
            return Err(Error::CarrierTooLarge { size: n, limit: crate::poset::MAX_ELEMENTS });
        }
        let mut pairs = Vec::new();
        for (i, &d) in self.sets.iter().enumerate() {
            for (j, &e) in self.sets.iter().enumerate() {
                if d.is_subset_of(e) {
                    pairs.push((i, j));
                }
            }
        }
        let labels = self.sets.iter().map(|s| s.to_string()).collect();
        Ok(Poset::try_new(n, pairs)?.with_labels(labels))
    }
}

/// h(P) = #H(P, C3) via the down-set summation formula.
pub fn h_by_summation(p: &Poset) -> Result<BigUint> {
    Ok(DownSetLattice::enumerate(p)?.h())
}

/// Splits D(R) by intersection with an up-set `y`: group `T` holds the
/// down-sets `D` with `D` ∩ `y` = `T`. The keys are exactly the
/// down-sets of the induced poset on `y`; groups are disjoint and
/// jointly exhaust the lattice.
pub fn partition_by_upper(
    r: &Poset,
    y: ElementSet,
) -> Result<Vec<(ElementSet, Vec<ElementSet>)>> {
    if !r.is_upset(y) {
        return Err(Error::NotUpSet { set: y });
    }
    let lattice = DownSetLattice::enumerate(r)?;
    let mut groups: BTreeMap<(usize, u128), Vec<ElementSet>> = BTreeMap::new();
    for &d in lattice.sets() {
        let t = d.intersection(y);
        groups.entry((t.len(), t.bits())).or_default().push(d);
    }
    Ok(groups
        .into_iter()
        .map(|((_, bits), members)| (ElementSet::from_bits(bits), members))
        .collect())
}

/// Counts pairs D1 <= D2 of down-sets of `p` subject to membership
/// constraints on each component. A homomorphism into the 3-chain
/// corresponds to such a pair via D1 = preimage of {1} and D2 =
/// preimage of {1,2}, so pinning values translates to these constraints.
pub fn constrained_pair_count(
    p: &Poset,
    in_d1: ElementSet,
    out_d1: ElementSet,
    in_d2: ElementSet,
    out_d2: ElementSet,
) -> Result<BigUint> {
    for set in [in_d1, out_d1, in_d2, out_d2] {
        if !set.is_subset_of(p.carrier()) {
            return Err(Error::OutOfCarrier { set });
        }
    }
    let lattice = DownSetLattice::enumerate(p)?;
    let lower: Vec<ElementSet> = lattice
        .sets()
        .iter()
        .copied()
        .filter(|d| in_d1.is_subset_of(*d) && d.intersection(out_d1).is_empty())
        .collect();
    let upper: Vec<ElementSet> = lattice
        .sets()
        .iter()
        .copied()
        .filter(|d| in_d2.is_subset_of(*d) && d.intersection(out_d2).is_empty())
        .collect();
    let mut total = 0u64;
    for &d2 in &upper {
        let card = d2.len();
        for &d1 in &lower {
            if d1.len() > card {
                break;
            }
            if d1.is_subset_of(d2) {
                total += 1;
            }
        }
    }
    Ok(BigUint::from(total))
}

/// Counts single down-sets of `p` containing `include` and avoiding
/// `exclude`.
pub fn constrained_downset_count(
    p: &Poset,
    include: ElementSet,
    exclude: ElementSet,
) -> Result<BigUint> {
    for set in [include, exclude] {
        if !set.is_subset_of(p.carrier()) {
            return Err(Error::OutOfCarrier { set });
        }
    }
    let lattice = DownSetLattice::enumerate(p)?;
    let count = lattice
        .sets()
        .iter()
        .filter(|d| include.is_subset_of(**d) && d.intersection(exclude).is_empty())
        .count();
    Ok(BigUint::from(count))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn lattice_sizes() {
        // C3: {}, {1}, {1,2}, {1,2,3}
        assert_eq!(DownSetLattice::enumerate(&Poset::chain(3)).unwrap().len(), 4);
        // diamond: {}, {b}, {b,l}, {b,r}, {b,l,r}, all
        assert_eq!(DownSetLattice::enumerate(&Poset::diamond()).unwrap().len(), 6);
        // order ideals of the 3x3 grid: C(6,3)
        let grid = Poset::product(&Poset::chain(3), &Poset::chain(3)).unwrap();
        assert_eq!(DownSetLattice::enumerate(&grid).unwrap().len(), 20);
        // empty poset has exactly the empty ideal
        assert_eq!(DownSetLattice::enumerate(&Poset::chain(0)).unwrap().len(), 1);
    }

    #[test]
    fn lattice_order_and_endpoints() {
        let l = DownSetLattice::enumerate(&Poset::diamond()).unwrap();
        assert_eq!(l.sets()[0], ElementSet::EMPTY);
        assert_eq!(*l.sets().last().unwrap(), l.base().carrier());
        for w in l.sets().windows(2) {
            assert!((w[0].len(), w[0].bits()) < (w[1].len(), w[1].bits()));
        }
        for &d in l.sets() {
            assert!(l.base().is_downset(d));
        }
    }

    #[test]
    fn enumeration_bound() {
        let err = DownSetLattice::enumerate_with_bound(&Poset::antichain(6), 10).unwrap_err();
        assert!(matches!(err, Error::BoundExceeded { .. }));
    }

    #[test]
    fn lattice_as_poset_shapes() {
        let l = DownSetLattice::enumerate(&Poset::antichain(2)).unwrap();
        assert!(l.as_poset().unwrap().same_order(&Poset::diamond()));

        let l = DownSetLattice::enumerate(&Poset::chain(4)).unwrap();
        assert!(l.as_poset().unwrap().same_order(&Poset::chain(5)));

        let l = DownSetLattice::enumerate(&Poset::chain(0)).unwrap();
        assert!(l.as_poset().unwrap().same_order(&Poset::chain(1)));
    }

    #[test]
    fn summation_values() {
        assert_eq!(h_by_summation(&Poset::chain(3)).unwrap(), big(10));
        let grid = Poset::product(&Poset::chain(3), &Poset::chain(3)).unwrap();
        assert_eq!(h_by_summation(&grid).unwrap(), big(175));
        // lambda: ideal sizes below {}, {l}, {r}, {l,r}, {l,r,t} are 1,2,2,4,5
        assert_eq!(h_by_summation(&Poset::lambda()).unwrap(), big(14));
        assert_eq!(h_by_summation(&Poset::chain(0)).unwrap(), big(1));
    }

    #[test]
    fn summation_is_self_dual() {
        for p in [Poset::lambda(), Poset::diamond(), Poset::chain(4)] {
            assert_eq!(h_by_summation(&p).unwrap(), h_by_summation(&p.dual()).unwrap());
        }
    }

    #[test]
    fn count_within_cases() {
        let d = Poset::diamond();
        let l = DownSetLattice::enumerate(&d).unwrap();
        assert_eq!(l.count_within(ElementSet::EMPTY).unwrap(), big(1));
        assert_eq!(l.count_within(d.carrier()).unwrap(), big(6));
        // below {bot, l}: {}, {bot}, {bot,l}
        assert_eq!(l.count_within(ElementSet::from_iter([0, 1])).unwrap(), big(3));
        assert!(matches!(
            l.count_within(ElementSet::singleton(1)),
            Err(Error::NotDownSet { .. })
        ));
    }

    #[test]
    fn count_within_is_monotone() {
        let grid = Poset::product(&Poset::chain(3), &Poset::chain(2)).unwrap();
        let l = DownSetLattice::enumerate(&grid).unwrap();
        for &d in l.sets() {
            for &e in l.sets() {
                if d.is_subset_of(e) {
                    assert!(l.count_within(d).unwrap() <= l.count_within(e).unwrap());
                }
            }
        }
    }

    #[test]
    fn partition_groups() {
        let d = Poset::diamond();
        let groups = partition_by_upper(&d, ElementSet::singleton(3)).unwrap();
        assert_eq!(groups.len(), 2);
        assert_eq!(groups[0].0, ElementSet::EMPTY);
        assert_eq!(groups[0].1.len(), 5);
        assert_eq!(groups[1].1.len(), 1);

        // trivial split: everything lands in the empty group
        let all = partition_by_upper(&d, ElementSet::EMPTY).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].1.len(), 6);

        assert!(matches!(
            partition_by_upper(&d, ElementSet::singleton(0)),
            Err(Error::NotUpSet { .. })
        ));
    }

    #[test]
    fn partition_exhausts_lattice() {
        let p = Poset::product(&Poset::chain(2), &Poset::lambda()).unwrap();
        let total = DownSetLattice::enumerate(&p).unwrap().len();
        let y = p.up_closure(ElementSet::singleton(4));
        let groups = partition_by_upper(&p, y).unwrap();
        let mut seen = std::collections::HashSet::new();
        let mut count = 0;
        for (t, members) in &groups {
            for &m in members {
                assert_eq!(m.intersection(y), *t);
                assert!(seen.insert(m.bits()));
                count += 1;
            }
        }
        assert_eq!(count, total);
    }

    #[test]
    fn partition_of_staircase_by_top_diagonal() {
        // splitting D(H(C2,C4)) along the top diagonal gives groups of
        // sizes 8, 4, 2, 1, 1 (halving, by the strip isomorphisms)
        let h4 = crate::poset::hom_poset(&Poset::chain(2), &Poset::chain(4)).unwrap();
        let diagonal: ElementSet =
            h4.elements().filter(|&i| h4.label(i).ends_with(",4)")).collect();
        assert_eq!(diagonal.len(), 4);
        let groups = partition_by_upper(&h4, diagonal).unwrap();
        let sizes: Vec<usize> = groups.iter().map(|(_, m)| m.len()).collect();
        assert_eq!(sizes, vec![8, 4, 2, 1, 1]);
        assert_eq!(sizes.iter().sum::<usize>(), 16);
    }

    #[test]
    fn unconstrained_pair_count_is_h() {
        for p in [Poset::lambda(), Poset::diamond()] {
            let e = ElementSet::EMPTY;
            assert_eq!(
                constrained_pair_count(&p, e, e, e, e).unwrap(),
                h_by_summation(&p).unwrap()
            );
        }
    }

    #[test]
    fn pair_count_rejects_foreign_elements() {
        let p = Poset::chain(2);
        let bad = ElementSet::singleton(7);
        let e = ElementSet::EMPTY;
        assert!(matches!(
            constrained_pair_count(&p, bad, e, e, e),
            Err(Error::OutOfCarrier { .. })
        ));
    }

    #[test]
    fn downsets_within_subposet() {
        let d = Poset::diamond();
        // induced chain bot < l < top inside the diamond
        let sub = downsets_within(&d, ElementSet::from_iter([0, 1, 3]), 1 << 10).unwrap();
        assert_eq!(sub.len(), 4);
        for &s in &sub {
            assert!(d.is_downset_within(s, ElementSet::from_iter([0, 1, 3])));
        }
    }
}
