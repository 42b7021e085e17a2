//! Generalized vertical sums: decompositions of a poset into a lower
//! part P and an upper part Q with all cross relations running upward,
//! together with the linking data (B-, B+, sigma) that drives the
//! recursive computation of the coefficients a_T.
//!
//! Everything here is validation-grade: coefficients are computed
//! directly from their definition over the full down-set lattice, and
//! the recursion is evaluated against pluggable coefficient providers so
//! the identity between the two routes can be tested on arbitrary small
//! instances. The production recursions live in [`crate::families`].

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use num_bigint::BigUint;

use crate::downset::{downsets_within, DownSetLattice, DEFAULT_DOWNSET_BOUND};
use crate::error::{Error, Result};
use crate::poset::{ElementSet, Poset};

/// Coefficient table of a sub-poset split by an upper set: for each
/// down-set `T` of the induced poset on `upper`, the sum over the
/// down-sets `D` of the induced poset on `carrier` with
/// `D` ∩ `upper` = `T` of the number of down-sets contained in `D`.
pub(crate) fn a_table_of_subset(
    r: &Poset,
    carrier: ElementSet,
    upper: ElementSet,
    bound: usize,
) -> Result<BTreeMap<ElementSet, BigUint>> {
    debug_assert!(upper.is_subset_of(carrier));
    let sets = downsets_within(r, carrier, bound)?;
    let mut table: BTreeMap<ElementSet, BigUint> = BTreeMap::new();
    for (i, &d) in sets.iter().enumerate() {
        let card = d.len();
        let mut count = 0u64;
        for &e in &sets[..=i] {
            if e.len() > card {
                break;
            }
            if e.is_subset_of(d) {
                count += 1;
            }
        }
        *table.entry(d.intersection(upper)).or_default() += count;
    }
    Ok(table)
}

/// h of the induced sub-poset on `s`, by summation over its down-sets.
pub(crate) fn h_of_subset(r: &Poset, s: ElementSet, bound: usize) -> Result<BigUint> {
    let sets = downsets_within(r, s, bound)?;
    let mut total = 0u64;
    for (i, &d) in sets.iter().enumerate() {
        let card = d.len();
        for &e in &sets[..=i] {
            if e.len() > card {
                break;
            }
            if e.is_subset_of(d) {
                total += 1;
            }
        }
    }
    Ok(BigUint::from(total))
}

/// A violated decomposition invariant, with witnesses.
#[derive(Debug, Clone, thiserror::Error)]
pub enum GvsViolation {
    #[error("parts are not a partition of the carrier")]
    NotAPartition,
    #[error("cross relation {lower} <= {upper} runs from the upper into the lower part")]
    DownwardCross { upper: usize, lower: usize },
    #[error("{0} is not an up-set of the lower part")]
    LinkNotUpset(ElementSet),
    #[error("{0} is not a down-set of the upper part")]
    LinkNotDownset(ElementSet),
    #[error("sigma is not defined exactly on the down-sets of the upper link (offending set {0})")]
    SigmaDomain(ElementSet),
    #[error("sigma({t}) contains {witness}, which is not below {t} in the lower part")]
    SigmaTooLarge { t: ElementSet, witness: usize },
    #[error("element {witness} lies below {t} but not below sigma({t})")]
    SigmaTooSmall { t: ElementSet, witness: usize },
    #[error("sigma of the empty set is {0}, expected the empty set")]
    SigmaEmpty(ElementSet),
}

/// Outcome of a structural check: either the property holds or a
/// counterexample description is produced.
#[derive(Debug, Clone)]
pub enum CheckOutcome {
    Holds,
    Fails(String),
}

impl CheckOutcome {
    pub fn holds(&self) -> bool {
        matches!(self, CheckOutcome::Holds)
    }
}

/// A poset split into a lower part on `x` and an upper part on `y`
/// (no relation runs from `y` down into `x`), linked by an up-set
/// `b_minus` of the lower part, a down-set `b_plus` of the upper part,
/// and a map `sigma` taking each down-set `T` of the upper link to a
/// subset of `b_minus` squeezed between the two closure bounds:
/// sigma(T) ⊆ x ∩ ↓T ⊆ ↓sigma(T).
///
/// All element sets are masks over the ids of the ambient poset.
#[derive(Clone)]
pub struct GvsDecomposition {
    r: Poset,
    x: ElementSet,
    y: ElementSet,
    b_minus: ElementSet,
    b_plus: ElementSet,
    sigma: BTreeMap<ElementSet, ElementSet>,
}

impl GvsDecomposition {
    /// Assembles a decomposition from raw parts without validating; use
    /// [`GvsDecomposition::validate`] to check the invariants.
    pub fn from_parts_unchecked(
        r: Poset,
        y: ElementSet,
        b_minus: ElementSet,
        b_plus: ElementSet,
        sigma: BTreeMap<ElementSet, ElementSet>,
    ) -> GvsDecomposition {
        let x = r.carrier().difference(y);
        GvsDecomposition { r, x, y, b_minus, b_plus, sigma }
    }

    /// The schematic decomposition for an up-set `upper` of `r` and a
    /// nonempty down-set `b_plus` of the induced upper part: `b_minus`
    /// is the up-set of the lower part generated by the elements covered
    /// by `b_plus` members, and sigma(T) = b_minus ∩ ↓T. `b_minus` may
    /// come out empty, in which case every group of the induced
    /// partition is a copy of the lower part's lattice.
    pub fn schematic(r: &Poset, upper: ElementSet, b_plus: ElementSet) -> Result<GvsDecomposition> {
        if !r.is_upset(upper) {
            return Err(Error::NotUpSet { set: upper });
        }
        if upper.is_empty() || upper == r.carrier() {
            return Err(Error::Precondition(format!(
                "upper part {upper} must be a nonempty proper up-set"
            )));
        }
        let x = r.carrier().difference(upper);
        if !b_plus.is_subset_of(upper) || !r.is_downset_within(b_plus, upper) {
            return Err(Error::NotDownSet { set: b_plus });
        }
        if b_plus.is_empty() {
            return Err(Error::Precondition("the upper link must be nonempty".into()));
        }

        let mut generators = ElementSet::EMPTY;
        for (lo, hi) in r.covers() {
            if x.contains(lo) && b_plus.contains(hi) {
                generators = generators.with(lo);
            }
        }
        let b_minus = r.up_closure(generators).intersection(x);

        let mut sigma = BTreeMap::new();
        for t in downsets_within(r, b_plus, DEFAULT_DOWNSET_BOUND)? {
            sigma.insert(t, b_minus.intersection(r.down_closure(t)));
        }
        let g = GvsDecomposition { r: r.clone(), x, y: upper, b_minus, b_plus, sigma };
        debug_assert!(g.validate().is_ok());
        Ok(g)
    }

    pub fn ambient(&self) -> &Poset {
        &self.r
    }

    pub fn lower_set(&self) -> ElementSet {
        self.x
    }

    pub fn upper_set(&self) -> ElementSet {
        self.y
    }

    pub fn lower_link(&self) -> ElementSet {
        self.b_minus
    }

    pub fn upper_link(&self) -> ElementSet {
        self.b_plus
    }

    pub fn sigma(&self, t: ElementSet) -> Option<ElementSet> {
        self.sigma.get(&t).copied()
    }

    /// The lower part as its own poset, with the id map back to the
    /// ambient poset.
    pub fn lower_poset(&self) -> (Poset, Vec<usize>) {
        self.r.induced(self.x)
    }

    /// The upper part as its own poset, with the id map back to the
    /// ambient poset.
    pub fn upper_poset(&self) -> (Poset, Vec<usize>) {
        self.r.induced(self.y)
    }

    /// Checks every decomposition invariant, iterating the down-sets of
    /// the upper link for the sigma conditions.
    pub fn validate(&self) -> std::result::Result<(), GvsViolation> {
        if !self.x.intersection(self.y).is_empty()
            || self.x.union(self.y) != self.r.carrier()
        {
            return Err(GvsViolation::NotAPartition);
        }
        for upper in self.y.iter() {
            let below = self.r.up_row(upper).intersection(self.x);
            if let Some(lower) = below.iter().next() {
                return Err(GvsViolation::DownwardCross { upper, lower });
            }
        }
        if !self.b_minus.is_subset_of(self.x) || !self.r.is_upset_within(self.b_minus, self.x) {
            return Err(GvsViolation::LinkNotUpset(self.b_minus));
        }
        if !self.b_plus.is_subset_of(self.y) || !self.r.is_downset_within(self.b_plus, self.y) {
            return Err(GvsViolation::LinkNotDownset(self.b_plus));
        }

        let domain = downsets_within(&self.r, self.b_plus, DEFAULT_DOWNSET_BOUND)
            .expect("upper link lattice enumerable");
        if domain.len() != self.sigma.len() {
            let missing = domain.iter().find(|t| !self.sigma.contains_key(t));
            let offending =
                missing.copied().or_else(|| self.sigma.keys().next().copied()).unwrap_or_default();
            return Err(GvsViolation::SigmaDomain(offending));
        }
        for &t in &domain {
            let Some(&s) = self.sigma.get(&t) else {
                return Err(GvsViolation::SigmaDomain(t));
            };
            let below_t = self.x.intersection(self.r.down_closure(t));
            if !s.is_subset_of(self.b_minus) || !s.is_subset_of(below_t) {
                let witness = s.difference(below_t.intersection(self.b_minus)).iter().next();
                return Err(GvsViolation::SigmaTooLarge { t, witness: witness.unwrap_or(0) });
            }
            let reach = self.r.down_closure(s).intersection(self.x);
            if !below_t.is_subset_of(reach) {
                let witness = below_t.difference(reach).iter().next().unwrap();
                return Err(GvsViolation::SigmaTooSmall { t, witness });
            }
        }
        if let Some(&s) = self.sigma.get(&ElementSet::EMPTY) {
            if !s.is_empty() {
                return Err(GvsViolation::SigmaEmpty(s));
            }
        }
        Ok(())
    }

    /// Down-sets of the upper part (masks in ambient ids).
    pub fn upper_downsets(&self) -> Result<Vec<ElementSet>> {
        downsets_within(&self.r, self.y, DEFAULT_DOWNSET_BOUND)
    }

    /// Down-sets of the upper link (masks in ambient ids).
    pub fn upper_link_downsets(&self) -> Result<Vec<ElementSet>> {
        downsets_within(&self.r, self.b_plus, DEFAULT_DOWNSET_BOUND)
    }

    /// Down-sets of the lower link (masks in ambient ids).
    pub fn lower_link_downsets(&self) -> Result<Vec<ElementSet>> {
        downsets_within(&self.r, self.b_minus, DEFAULT_DOWNSET_BOUND)
    }

    fn require_upper_downset(&self, t: ElementSet) -> Result<()> {
        if t.is_subset_of(self.y) && self.r.is_downset_within(t, self.y) {
            Ok(())
        } else {
            Err(Error::NotDownSet { set: t })
        }
    }

    fn require_link_downset(&self, t: ElementSet) -> Result<()> {
        if t.is_subset_of(self.b_plus) && self.r.is_downset_within(t, self.b_plus) {
            Ok(())
        } else {
            Err(Error::NotDownSet { set: t })
        }
    }

    /// All coefficients a_T for T a down-set of the upper part, computed
    /// directly from the full lattice of the ambient poset.
    pub fn a_table_direct(&self) -> Result<BTreeMap<ElementSet, BigUint>> {
        a_table_of_subset(&self.r, self.r.carrier(), self.y, DEFAULT_DOWNSET_BOUND)
    }

    /// A single coefficient a_T from its definition.
    pub fn a_direct(&self, t: ElementSet) -> Result<BigUint> {
        self.require_upper_downset(t)?;
        Ok(self.a_table_direct()?.remove(&t).unwrap_or_default())
    }

    /// Checks that stripping `T` is an inclusion-preserving bijection
    /// from the group of down-sets meeting the upper part in `T` onto
    /// the down-sets of the lower part that contain sigma(T).
    pub fn check_strip_iso(&self, t: ElementSet) -> Result<CheckOutcome> {
        self.require_link_downset(t)?;
        let sigma_t = self.sigma.get(&t).copied().ok_or(Error::NotDownSet { set: t })?;

        let lattice = DownSetLattice::enumerate(&self.r)?;
        let group: Vec<ElementSet> =
            lattice.sets().iter().copied().filter(|d| d.intersection(self.y) == t).collect();
        let mut image: Vec<ElementSet> = group.iter().map(|d| d.difference(t)).collect();
        image.sort_by_key(|d| (d.len(), d.bits()));

        let target: Vec<ElementSet> = downsets_within(&self.r, self.x, DEFAULT_DOWNSET_BOUND)?
            .into_iter()
            .filter(|d| sigma_t.is_subset_of(*d))
            .collect();

        if image != target {
            return Ok(CheckOutcome::Fails(format!(
                "strip image for T={t} has {} sets, expected {}",
                image.len(),
                target.len()
            )));
        }
        for (i, &a) in group.iter().enumerate() {
            for (j, &b) in group.iter().enumerate() {
                let before = a.is_subset_of(b);
                let after = group[i].difference(t).is_subset_of(group[j].difference(t));
                if before != after {
                    return Ok(CheckOutcome::Fails(format!(
                        "stripping T={t} does not preserve inclusion between {a} and {b}"
                    )));
                }
            }
        }
        Ok(CheckOutcome::Holds)
    }

    /// Checks that removing the down-closure of `n` is an
    /// inclusion-preserving bijection from the down-sets containing `n`
    /// onto the down-sets of the ambient poset minus that closure.
    pub fn check_remove_iso(&self, n: ElementSet) -> Result<CheckOutcome> {
        self.require_upper_downset(n)?;
        let closure = self.r.down_closure(n);
        let rest = self.r.carrier().difference(closure);

        let lattice = DownSetLattice::enumerate(&self.r)?;
        let domain: Vec<ElementSet> =
            lattice.sets().iter().copied().filter(|d| n.is_subset_of(*d)).collect();
        let mut image: Vec<ElementSet> = domain.iter().map(|d| d.difference(closure)).collect();
        image.sort_by_key(|d| (d.len(), d.bits()));
        image.dedup();

        let target = downsets_within(&self.r, rest, DEFAULT_DOWNSET_BOUND)?;
        if image.len() != domain.len() || image != target {
            return Ok(CheckOutcome::Fails(format!(
                "removal image for N={n} has {} sets, domain {}, expected {}",
                image.len(),
                domain.len(),
                target.len()
            )));
        }
        for &a in &domain {
            for &b in &domain {
                let before = a.is_subset_of(b);
                let after = a.difference(closure).is_subset_of(b.difference(closure));
                if before != after {
                    return Ok(CheckOutcome::Fails(format!(
                        "removing ↓{n} does not preserve inclusion between {a} and {b}"
                    )));
                }
            }
        }
        Ok(CheckOutcome::Holds)
    }

    /// Evaluates the coefficient recursion for a down-set `t` of the
    /// upper link: the sum of lower-part coefficients over the down-sets
    /// of the lower link containing sigma(t), plus an
    /// inclusion-exclusion over the nonempty sets of minimal points of
    /// the upper part inside `t`, with the reduced coefficients supplied
    /// by the provider. For the empty set this collapses to h of the
    /// lower part.
    pub fn a_recursive(&self, t: ElementSet, provider: &dyn CoeffProvider) -> Result<BigUint> {
        self.require_link_downset(t)?;
        let sigma_t = self.sigma.get(&t).copied().ok_or(Error::NotDownSet { set: t })?;

        let mut acc = BigUint::default();
        for u in self.lower_link_downsets()? {
            if sigma_t.is_subset_of(u) {
                acc += provider.a_lower(u)?;
            }
        }

        let minima = self.r.minimal_points_within(self.y);
        let mt = minima.intersection(t);
        assert!(mt.len() <= 20, "inclusion-exclusion over {} minimal points", mt.len());
        let mut minus = BigUint::default();
        for n in mt.subsets() {
            if n.is_empty() {
                continue;
            }
            let value = provider.a_reduced(n, t.difference(n))?;
            if n.len() % 2 == 1 {
                acc += value;
            } else {
                minus += value;
            }
        }
        Ok(acc - minus)
    }

    /// Evaluates h of the ambient poset through the decomposition,
    /// assuming the upper part has a unique minimum and sigma is an
    /// inclusion isomorphism from the upper-link lattice onto the
    /// lower-link lattice: h of the poset above the minimum's closure,
    /// plus the direct coefficients of upper-part down-sets outside the
    /// link, plus the lower coefficients weighted by how many link
    /// down-sets they dominate.
    pub fn h_from_decomposition(&self) -> Result<BigUint> {
        let minima = self.r.minimal_points_within(self.y);
        if minima.len() != 1 {
            return Err(Error::Precondition(format!(
                "upper part must have a unique minimum, found {minima}"
            )));
        }
        let bottom = minima;

        let link_downsets = self.upper_link_downsets()?;
        let lower_downsets = self.lower_link_downsets()?;
        let images: Vec<ElementSet> = {
            let mut v: Vec<ElementSet> = self.sigma.values().copied().collect();
            v.sort_by_key(|d| (d.len(), d.bits()));
            v
        };
        if images != lower_downsets {
            return Err(Error::Precondition(
                "sigma must map the upper-link lattice onto the lower-link lattice".into(),
            ));
        }
        for &t1 in &link_downsets {
            for &t2 in &link_downsets {
                if t1.is_subset_of(t2) != self.sigma[&t1].is_subset_of(self.sigma[&t2]) {
                    return Err(Error::Precondition(
                        "sigma must preserve inclusion in both directions".into(),
                    ));
                }
            }
        }

        let p_plus = self.x.union(self.b_plus);
        let reduced = p_plus.difference(self.r.down_closure(bottom));
        let mut total = h_of_subset(&self.r, reduced, DEFAULT_DOWNSET_BOUND)?;

        let a_full = self.a_table_direct()?;
        for t in self.upper_downsets()? {
            if !t.is_subset_of(self.b_plus) {
                total += a_full.get(&t).cloned().unwrap_or_default();
            }
        }

        let lower_table =
            a_table_of_subset(&self.r, self.x, self.b_minus, DEFAULT_DOWNSET_BOUND)?;
        for &t in &lower_downsets {
            let below = lower_downsets.iter().filter(|u| u.is_subset_of(t)).count() as u64;
            total += lower_table.get(&t).cloned().unwrap_or_default() * below;
        }
        Ok(total)
    }
}

/// Supplies the coefficient values consumed by the recursion: `a_lower`
/// for down-sets of the lower link, and `a_reduced` for the poset with
/// the closure of a set of upper-part minimal points removed.
pub trait CoeffProvider {
    fn a_lower(&self, u: ElementSet) -> Result<BigUint>;
    fn a_reduced(&self, removed: ElementSet, t_rest: ElementSet) -> Result<BigUint>;
}

/// Provider that computes every requested coefficient directly from the
/// relevant sub-lattice, memoizing per (carrier, upper) pair.
type CachedTable = Rc<BTreeMap<ElementSet, BigUint>>;

pub struct DirectCoeffProvider<'a> {
    gvs: &'a GvsDecomposition,
    cache: RefCell<HashMap<(u128, u128), CachedTable>>,
}

impl<'a> DirectCoeffProvider<'a> {
    pub fn new(gvs: &'a GvsDecomposition) -> Self {
        DirectCoeffProvider { gvs, cache: RefCell::new(HashMap::new()) }
    }

    fn table(&self, carrier: ElementSet, upper: ElementSet) -> Result<CachedTable> {
        let key = (carrier.bits(), upper.bits());
        if let Some(t) = self.cache.borrow().get(&key) {
            return Ok(Rc::clone(t));
        }
        let table = Rc::new(a_table_of_subset(
            self.gvs.ambient(),
            carrier,
            upper,
            DEFAULT_DOWNSET_BOUND,
        )?);
        self.cache.borrow_mut().insert(key, Rc::clone(&table));
        Ok(table)
    }
}

impl CoeffProvider for DirectCoeffProvider<'_> {
    fn a_lower(&self, u: ElementSet) -> Result<BigUint> {
        let table = self.table(self.gvs.lower_set(), self.gvs.lower_link())?;
        Ok(table.get(&u).cloned().unwrap_or_default())
    }

    fn a_reduced(&self, removed: ElementSet, t_rest: ElementSet) -> Result<BigUint> {
        let r = self.gvs.ambient();
        let p_plus = self.gvs.lower_set().union(self.gvs.upper_link());
        let closure = r.down_closure(removed).intersection(p_plus);
        let carrier = p_plus.difference(closure);
        let upper = self.gvs.upper_link().difference(closure);
        let table = self.table(carrier, upper)?;
        Ok(table.get(&t_rest).cloned().unwrap_or_default())
    }
}

/// The standard decomposition of a product W x C_k (k >= 2): the lower
/// part is W x C_{k-1}, the upper part is the top layer, both links are
/// full layers, and sigma shifts a layer down.
pub fn product_chain_decomposition(w: &Poset, k: usize) -> Result<GvsDecomposition> {
    if k < 2 {
        return Err(Error::Precondition("chain factor must have at least 2 levels".into()));
    }
    let r = Poset::product(w, &Poset::chain(k))?;
    // layer ids: (w_i, level) -> w_i * k + level
    let top: ElementSet = (0..w.n()).map(|i| i * k + (k - 1)).collect();
    let below: ElementSet = (0..w.n()).map(|i| i * k + (k - 2)).collect();
    let mut sigma = BTreeMap::new();
    for t in downsets_within(&r, top, DEFAULT_DOWNSET_BOUND)? {
        sigma.insert(t, t.iter().map(|e| e - 1).collect());
    }
    let g = GvsDecomposition::from_parts_unchecked(r, top, below, top, sigma);
    debug_assert!(g.validate().is_ok());
    Ok(g)
}

/// Number of surjective homomorphisms onto the 3-chain:
/// h(P) - 3 #D(P) + 3, by inclusion-exclusion over the omitted values.
/// The empty poset admits no surjective map at all.
pub fn surjective_count(p: &Poset) -> Result<BigUint> {
    if p.is_empty_poset() {
        return Ok(BigUint::default());
    }
    let lattice = DownSetLattice::enumerate(p)?;
    let h = lattice.h();
    let d = BigUint::from(lattice.len());
    Ok(h + 3u32 - d * 3u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::downset::h_by_summation;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    fn diamond_top() -> GvsDecomposition {
        GvsDecomposition::schematic(
            &Poset::diamond(),
            ElementSet::singleton(3),
            ElementSet::singleton(3),
        )
        .unwrap()
    }

    #[test]
    fn schematic_on_diamond() {
        let g = diamond_top();
        assert_eq!(g.lower_link(), ElementSet::from_iter([1, 2]));
        assert_eq!(g.sigma(ElementSet::singleton(3)).unwrap(), ElementSet::from_iter([1, 2]));
        assert_eq!(g.sigma(ElementSet::EMPTY).unwrap(), ElementSet::EMPTY);
        assert!(g.validate().is_ok());
    }

    #[test]
    fn schematic_on_chain() {
        let g = GvsDecomposition::schematic(
            &Poset::chain(4),
            ElementSet::from_iter([2, 3]),
            ElementSet::singleton(2),
        )
        .unwrap();
        assert_eq!(g.lower_link(), ElementSet::singleton(1));
        assert!(g.validate().is_ok());
    }

    #[test]
    fn schematic_without_cross_covers() {
        // lambda next to an isolated point, upper part = the point
        let r = Poset::direct_sum(&Poset::lambda(), &Poset::chain(1)).unwrap();
        let g = GvsDecomposition::schematic(&r, ElementSet::singleton(3), ElementSet::singleton(3))
            .unwrap();
        assert!(g.lower_link().is_empty());
        assert!(g.sigma(ElementSet::singleton(3)).unwrap().is_empty());
        assert!(g.validate().is_ok());
    }

    #[test]
    fn schematic_rejects_bad_parts() {
        let d = Poset::diamond();
        // {1} is not an up-set of the diamond
        assert!(GvsDecomposition::schematic(&d, ElementSet::singleton(1), ElementSet::singleton(1))
            .is_err());
        // empty and full upper parts are rejected
        assert!(GvsDecomposition::schematic(&d, ElementSet::EMPTY, ElementSet::EMPTY).is_err());
        assert!(GvsDecomposition::schematic(&d, d.carrier(), ElementSet::singleton(0)).is_err());
    }

    #[test]
    fn validate_flags_downward_cross_relations() {
        // declaring the bottom of a 2-chain as the upper part puts the
        // relation 0 <= 1 across the parts in the wrong direction
        let mut sigma = BTreeMap::new();
        sigma.insert(ElementSet::EMPTY, ElementSet::EMPTY);
        let broken = GvsDecomposition::from_parts_unchecked(
            Poset::chain(2),
            ElementSet::singleton(0),
            ElementSet::EMPTY,
            ElementSet::EMPTY,
            sigma,
        );
        assert!(matches!(
            broken.validate(),
            Err(GvsViolation::DownwardCross { upper: 0, lower: 1 })
        ));
    }

    #[test]
    fn validate_flags_broken_sigma() {
        // lambda next to an isolated point: nothing lies below the point,
        // so any nonempty sigma value breaks the first inclusion
        let r = Poset::direct_sum(&Poset::lambda(), &Poset::chain(1)).unwrap();
        let mut sigma = BTreeMap::new();
        sigma.insert(ElementSet::EMPTY, ElementSet::EMPTY);
        sigma.insert(ElementSet::singleton(3), ElementSet::singleton(2));
        let broken = GvsDecomposition::from_parts_unchecked(
            r,
            ElementSet::singleton(3),
            ElementSet::singleton(2),
            ElementSet::singleton(3),
            sigma,
        );
        assert!(matches!(broken.validate(), Err(GvsViolation::SigmaTooLarge { .. })));

        // on the diamond, sigma({top}) = {} breaks the second inclusion
        let g = diamond_top();
        let mut sigma = BTreeMap::new();
        sigma.insert(ElementSet::EMPTY, ElementSet::EMPTY);
        sigma.insert(ElementSet::singleton(3), ElementSet::EMPTY);
        let broken = GvsDecomposition::from_parts_unchecked(
            g.ambient().clone(),
            g.upper_set(),
            g.lower_link(),
            g.upper_link(),
            sigma,
        );
        assert!(matches!(broken.validate(), Err(GvsViolation::SigmaTooSmall { .. })));
    }

    #[test]
    fn direct_coefficients_on_diamond() {
        let g = diamond_top();
        // lower part is the V below the top; its h is 14 like the lambda's
        assert_eq!(g.a_direct(ElementSet::EMPTY).unwrap(), big(14));
        // T = upper part with everything below it: the whole lattice
        assert_eq!(g.a_direct(ElementSet::singleton(3)).unwrap(), big(6));
        // the coefficients over all T partition h
        let table = g.a_table_direct().unwrap();
        let sum: BigUint = table.values().sum();
        assert_eq!(sum, h_by_summation(g.ambient()).unwrap());
    }

    #[test]
    fn strip_iso_on_small_products() {
        let g = product_chain_decomposition(&Poset::chain(2), 2).unwrap();
        for t in g.upper_link_downsets().unwrap() {
            assert!(g.check_strip_iso(t).unwrap().holds());
        }
    }

    #[test]
    fn remove_iso_on_staircase() {
        // removing the bottom diagonal of H(C2,C5) leaves H(C2,C4)
        let h5 = crate::poset::hom_poset(&Poset::chain(2), &Poset::chain(5)).unwrap();
        let top: ElementSet = (0..h5.n())
            .filter(|&i| h5.up_row(i) == ElementSet::singleton(i) || h5.label(i).ends_with(",5)"))
            .collect();
        let g = GvsDecomposition::schematic(&h5, top, h5.minimal_points_within(top)).unwrap();
        let bottom = h5
            .elements()
            .filter(|&i| h5.label(i).starts_with("(1,"))
            .collect::<Vec<_>>();
        let n = ElementSet::singleton(*bottom.last().unwrap());
        // N = {(1,5)} is a down-set of the upper part
        let out = g.check_remove_iso(n).unwrap();
        assert!(out.holds());
        let (reduced, _) = h5.remove_down_closure(n);
        let h4 = crate::poset::hom_poset(&Poset::chain(2), &Poset::chain(4)).unwrap();
        assert_eq!(
            crate::downset::DownSetLattice::enumerate(&reduced).unwrap().len(),
            crate::downset::DownSetLattice::enumerate(&h4).unwrap().len()
        );
    }

    #[test]
    fn recursion_matches_direct_on_diamond_product() {
        let r = Poset::product(&Poset::diamond(), &Poset::chain(2)).unwrap();
        let top: ElementSet = (0..4).map(|i| i * 2 + 1).collect();
        let g = GvsDecomposition::schematic(&r, top, top).unwrap();
        let provider = DirectCoeffProvider::new(&g);
        let table = g.a_table_direct().unwrap();
        for t in g.upper_link_downsets().unwrap() {
            assert_eq!(
                g.a_recursive(t, &provider).unwrap(),
                table.get(&t).cloned().unwrap_or_default(),
                "coefficient mismatch at T={t}"
            );
        }
    }

    #[test]
    fn recursion_reproduces_diamond_lattice_weights() {
        // the 2x2 grid split at its top layer: the six lattice weights
        // 1,2,3,3,5,6 group into the coefficients 6, 8, 6
        let g = product_chain_decomposition(&Poset::chain(2), 2).unwrap();
        let table = g.a_table_direct().unwrap();
        let mut values: Vec<BigUint> = table.values().cloned().collect();
        values.sort();
        assert_eq!(values, vec![big(6), big(6), big(8)]);
        let total: BigUint = table.values().sum();
        assert_eq!(total, big(20));
        let provider = DirectCoeffProvider::new(&g);
        for t in g.upper_link_downsets().unwrap() {
            assert_eq!(g.a_recursive(t, &provider).unwrap(), table[&t]);
        }
    }

    #[test]
    fn h_from_decomposition_on_staircases() {
        // split H(C2,C_k) at its top diagonal with the corner left out
        // of the link; the corner's coefficient enters separately
        for k in 2..=5usize {
            let h = crate::poset::hom_poset(&Poset::chain(2), &Poset::chain(k)).unwrap();
            let diagonal: ElementSet =
                h.elements().filter(|&i| h.label(i).ends_with(&format!(",{k})"))).collect();
            let corner = h.maximal_points();
            let g = GvsDecomposition::schematic(&h, diagonal, diagonal.difference(corner))
                .unwrap();
            assert_eq!(
                g.h_from_decomposition().unwrap(),
                crate::families::binomial(2 * k as u64 + 1, k as u64),
                "k={k}"
            );
        }
    }

    #[test]
    fn h_from_decomposition_tiny() {
        // C2 = C1 x C2 with the layer decomposition
        let g = product_chain_decomposition(&Poset::chain(1), 2).unwrap();
        assert_eq!(g.h_from_decomposition().unwrap(), big(6));

        // the diamond as C2 x C2
        let g = product_chain_decomposition(&Poset::chain(2), 2).unwrap();
        assert_eq!(g.h_from_decomposition().unwrap(), big(20));
        assert_eq!(g.h_from_decomposition().unwrap(), h_by_summation(g.ambient()).unwrap());
    }

    #[test]
    fn surjective_counts() {
        let grid = Poset::product(&Poset::chain(3), &Poset::chain(3)).unwrap();
        assert_eq!(surjective_count(&grid).unwrap(), big(118));
        // two points cannot cover three values: 9 - 12 + 3
        assert_eq!(surjective_count(&Poset::antichain(2)).unwrap(), big(0));
    }
}
