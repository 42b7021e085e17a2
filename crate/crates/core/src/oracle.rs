//! Independent ground truths: brute-force homomorphism enumeration,
//! order-polynomial evaluation via linear-extension descents, counting
//! through the product with C2, and the generators behind the property
//! corpus.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::Zero;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::downset::DownSetLattice;
use crate::error::{Error, Result};
use crate::families::binomial;
use crate::poset::{ElementSet, Poset};

/// Default cap on backtracking nodes visited while enumerating maps.
pub const DEFAULT_SEARCH_BUDGET: u64 = 50_000_000;

/// Default cap on the number of linear extensions enumerated.
pub const DEFAULT_EXTENSION_BUDGET: u64 = 2_000_000;

/// Above this carrier size, constrained counts go through the down-set
/// pair correspondence instead of backtracking.
const BACKTRACK_MAX_ELEMENTS: usize = 16;

/// Tally of the homomorphisms P -> Q, split by image subset of Q.
#[derive(Clone, Debug)]
pub struct HomCount {
    pub total: BigUint,
    pub surjective: BigUint,
    pub by_image: BTreeMap<ElementSet, BigUint>,
}

/// Enumerates all monotone maps P -> Q by backtracking along a linear
/// extension of P, with each element's candidates cut down by the
/// already-assigned predecessors.
pub fn brute_hom_count(p: &Poset, q: &Poset) -> Result<HomCount> {
    brute_hom_count_with_budget(p, q, DEFAULT_SEARCH_BUDGET)
}

pub fn brute_hom_count_with_budget(p: &Poset, q: &Poset, budget: u64) -> Result<HomCount> {
    struct Search<'a> {
        p: &'a Poset,
        q: &'a Poset,
        order: Vec<usize>,
        values: Vec<usize>,
        nodes: u64,
        budget: u64,
        tally: BTreeMap<ElementSet, u64>,
    }

    impl Search<'_> {
        fn run(&mut self, pos: usize, image: ElementSet) -> Result<()> {
            if pos == self.order.len() {
                *self.tally.entry(image).or_default() += 1;
                return Ok(());
            }
            let x = self.order[pos];
            let mut cand = self.q.carrier();
            for u in self.p.down_row(x).without(x).iter() {
                cand = cand.intersection(self.q.up_row(self.values[u]));
                if cand.is_empty() {
                    return Ok(());
                }
            }
            for v in cand.iter() {
                self.nodes += 1;
                if self.nodes > self.budget {
                    return Err(Error::BoundExceeded {
                        what: "backtracking over homomorphisms",
                        limit: self.budget as u128,
                    });
                }
                self.values[x] = v;
                self.run(pos + 1, image.with(v))?;
            }
            Ok(())
        }
    }

    let mut search = Search {
        p,
        q,
        order: p.linear_extension(),
        values: vec![usize::MAX; p.n()],
        nodes: 0,
        budget,
        tally: BTreeMap::new(),
    };
    search.run(0, ElementSet::EMPTY)?;

    let by_image: BTreeMap<ElementSet, BigUint> =
        search.tally.into_iter().map(|(k, v)| (k, BigUint::from(v))).collect();
    let total = by_image.values().sum();
    let surjective = by_image.get(&q.carrier()).cloned().unwrap_or_default();
    Ok(HomCount { total, surjective, by_image })
}

/// Value of the order polynomial at `x`: linear extensions are
/// enumerated against a natural labeling (a deterministic linear
/// extension of the poset itself), their descents tallied, and the
/// descent counts combined with binomials.
pub fn order_polynomial_value(p: &Poset, x: u64) -> Result<BigUint> {
    order_polynomial_value_with_budget(p, x, DEFAULT_EXTENSION_BUDGET)
}

pub fn order_polynomial_value_with_budget(p: &Poset, x: u64, budget: u64) -> Result<BigUint> {
    if x == 0 {
        return Err(Error::Precondition("evaluation point must be positive".into()));
    }
    // natural labeling: rank within a fixed linear extension
    let mut rank = vec![0usize; p.n()];
    for (pos, e) in p.linear_extension().into_iter().enumerate() {
        rank[e] = pos;
    }

    struct Search<'a> {
        p: &'a Poset,
        rank: &'a [usize],
        by_descents: Vec<u64>,
        seen: u64,
        budget: u64,
    }

    impl Search<'_> {
        fn run(&mut self, placed: ElementSet, last_rank: usize, descents: usize) -> Result<()> {
            if placed.len() == self.p.n() {
                self.seen += 1;
                if self.seen > self.budget {
                    return Err(Error::BoundExceeded {
                        what: "enumerating linear extensions",
                        limit: self.budget as u128,
                    });
                }
                self.by_descents[descents] += 1;
                return Ok(());
            }
            for e in self.p.elements() {
                if placed.contains(e) || !self.p.down_row(e).without(e).is_subset_of(placed) {
                    continue;
                }
                let d = if !placed.is_empty() && self.rank[e] < last_rank { 1 } else { 0 };
                self.run(placed.with(e), self.rank[e], descents + d)?;
            }
            Ok(())
        }
    }

    let mut search = Search {
        p,
        rank: &rank,
        by_descents: vec![0; p.n().max(1)],
        seen: 0,
        budget,
    };
    search.run(ElementSet::EMPTY, 0, 0)?;

    let n = p.n() as u64;
    let mut total = BigUint::zero();
    for (d, &w) in search.by_descents.iter().enumerate() {
        if w == 0 {
            continue;
        }
        total += binomial(n + x - 1 - d as u64, n) * w;
    }
    Ok(total)
}

/// h(P) as the number of down-sets of P x C2.
pub fn h_by_c2_product(p: &Poset) -> Result<BigUint> {
    let doubled = Poset::product(p, &Poset::chain(2))?;
    Ok(BigUint::from(DownSetLattice::enumerate(&doubled)?.len()))
}

/// Number of monotone maps P -> C3 taking the pinned values (levels in
/// 1..=3). Small carriers are backtracked directly; larger ones go
/// through pairs of nested down-sets, where level 1 means "in the inner
/// set", level 3 means "outside the outer set", and level 2 is the gap.
pub fn constrained_hom_count(p: &Poset, fixed: &BTreeMap<usize, u8>) -> Result<BigUint> {
    for (&e, &level) in fixed {
        if e >= p.n() {
            return Err(Error::OutOfCarrier { set: ElementSet::singleton(e.min(127)) });
        }
        if !(1..=3).contains(&level) {
            return Err(Error::Precondition(format!("level {level} is not in 1..=3")));
        }
    }
    if p.n() <= BACKTRACK_MAX_ELEMENTS {
        let c3 = Poset::chain(3);
        let count = brute_constrained(p, &c3, fixed)?;
        return Ok(count);
    }
    let mut in_d1 = ElementSet::EMPTY;
    let mut out_d1 = ElementSet::EMPTY;
    let mut in_d2 = ElementSet::EMPTY;
    let mut out_d2 = ElementSet::EMPTY;
    for (&e, &level) in fixed {
        match level {
            1 => {
                in_d1 = in_d1.with(e);
                in_d2 = in_d2.with(e);
            }
            2 => {
                out_d1 = out_d1.with(e);
                in_d2 = in_d2.with(e);
            }
            _ => {
                out_d1 = out_d1.with(e);
                out_d2 = out_d2.with(e);
            }
        }
    }
    crate::downset::constrained_pair_count(p, in_d1, out_d1, in_d2, out_d2)
}

fn brute_constrained(p: &Poset, q: &Poset, fixed: &BTreeMap<usize, u8>) -> Result<BigUint> {
    struct Search<'a> {
        p: &'a Poset,
        q: &'a Poset,
        order: Vec<usize>,
        fixed: &'a BTreeMap<usize, u8>,
        values: Vec<usize>,
        nodes: u64,
        count: u64,
    }

    impl Search<'_> {
        fn run(&mut self, pos: usize) -> Result<()> {
            if pos == self.order.len() {
                self.count += 1;
                return Ok(());
            }
            let x = self.order[pos];
            let mut cand = match self.fixed.get(&x) {
                Some(&level) => ElementSet::singleton(level as usize - 1),
                None => self.q.carrier(),
            };
            for u in self.p.down_row(x).without(x).iter() {
                cand = cand.intersection(self.q.up_row(self.values[u]));
                if cand.is_empty() {
                    return Ok(());
                }
            }
            for v in cand.iter() {
                self.nodes += 1;
                if self.nodes > DEFAULT_SEARCH_BUDGET {
                    return Err(Error::BoundExceeded {
                        what: "backtracking over constrained homomorphisms",
                        limit: DEFAULT_SEARCH_BUDGET as u128,
                    });
                }
                self.values[x] = v;
                self.run(pos + 1)?;
            }
            Ok(())
        }
    }

    let mut search = Search {
        p,
        q,
        order: p.linear_extension(),
        fixed,
        values: vec![usize::MAX; p.n()],
        nodes: 0,
        count: 0,
    };
    search.run(0)?;
    Ok(BigUint::from(search.count))
}

/// Seeded random poset: one bit per pair (i, j) with i < j, then the
/// transitive closure. Ids are always a linear extension.
pub fn random_poset(n: usize, rng: &mut ChaCha8Rng) -> Poset {
    assert!(n <= 64);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(0.5) {
                edges.push((i, j));
            }
        }
    }
    Poset::from_covers(n, edges, None).expect("forward edges cannot cycle")
}

pub fn random_poset_from_seed(n: usize, seed: u64) -> Poset {
    random_poset(n, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// All posets on up to `n <= 5` elements, one representative per
/// isomorphism class: every relation with edges running upward in id
/// order is generated and canonicalized over all permutations.
pub fn all_posets_up_to_iso(n: usize) -> Vec<Poset> {
    assert!(n <= 5, "exhaustive generation is limited to 5 elements");
    if n == 0 {
        return vec![Poset::chain(0)];
    }
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let perms = permutations(n);
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u32..1 << pairs.len() {
        let edges = pairs
            .iter()
            .enumerate()
            .filter(|(b, _)| mask >> b & 1 == 1)
            .map(|(_, &e)| e);
        let p = Poset::from_covers(n, edges, None).expect("forward edges cannot cycle");
        let canon = canonical_bits(&p, &perms);
        if seen.insert(canon) {
            out.push(p);
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    heap_permute(&mut items, n, &mut out);
    out
}

fn heap_permute(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(items.clone());
        return;
    }
    for i in 0..k {
        heap_permute(items, k - 1, out);
        if k.is_multiple_of(2) {
            items.swap(i, k - 1);
        } else {
            items.swap(0, k - 1);
        }
    }
}

fn relation_bits(p: &Poset, perm: &[usize]) -> u64 {
    let n = p.n();
    let mut bits = 0u64;
    for a in 0..n {
        for b in 0..n {
            if p.leq(perm[a], perm[b]) {
                bits |= 1 << (a * n + b);
            }
        }
    }
    bits
}

fn canonical_bits(p: &Poset, perms: &[Vec<usize>]) -> u64 {
    perms.iter().map(|perm| relation_bits(p, perm)).min().unwrap()
}

/// Isomorphism test by permutation search; intended for small posets.
pub fn are_isomorphic(p: &Poset, q: &Poset) -> bool {
    if p.n() != q.n() {
        return false;
    }
    assert!(p.n() <= 8, "isomorphism search is limited to 8 elements");
    let perms = permutations(p.n());
    let target = relation_bits(q, &perms[0]);
    perms.iter().any(|perm| relation_bits(p, perm) == target)
}
