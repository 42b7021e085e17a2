//! Finite posets over dense element ids, with the constructors and
//! structural queries everything downstream consumes.
//!
//! Elements are the ids `0..n`. The order relation is kept as one bitset
//! row per element in each direction, so comparability tests and
//! closure operations are single mask operations.

use std::fmt;

use serde::Deserialize;

use crate::error::{Error, PosetViolation, Result};

/// Largest carrier supported by the bitset representation.
pub const MAX_ELEMENTS: usize = 128;

/// Default cap on `|Q|^|P|` when enumerating the hom-poset H(P,Q).
pub const DEFAULT_HOM_CANDIDATE_BOUND: u128 = 1_000_000;

/// A subset of the carrier of some poset, as a bitmask over element ids.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ElementSet(u128);

impl ElementSet {
    pub const EMPTY: ElementSet = ElementSet(0);

    pub fn singleton(i: usize) -> ElementSet {
        debug_assert!(i < MAX_ELEMENTS);
        ElementSet(1u128 << i)
    }

    /// The full carrier {0, .., n-1}.
    pub fn full(n: usize) -> ElementSet {
        debug_assert!(n <= MAX_ELEMENTS);
        if n == MAX_ELEMENTS {
            ElementSet(u128::MAX)
        } else {
            ElementSet((1u128 << n) - 1)
        }
    }

    pub fn from_bits(bits: u128) -> ElementSet {
        ElementSet(bits)
    }

    pub fn bits(self) -> u128 {
        self.0
    }

    pub fn contains(self, i: usize) -> bool {
        i < MAX_ELEMENTS && self.0 >> i & 1 == 1
    }

    pub fn with(self, i: usize) -> ElementSet {
        ElementSet(self.0 | 1u128 << i)
    }

    pub fn without(self, i: usize) -> ElementSet {
        ElementSet(self.0 & !(1u128 << i))
    }

    pub fn union(self, other: ElementSet) -> ElementSet {
        ElementSet(self.0 | other.0)
    }

    pub fn intersection(self, other: ElementSet) -> ElementSet {
        ElementSet(self.0 & other.0)
    }

    pub fn difference(self, other: ElementSet) -> ElementSet {
        ElementSet(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: ElementSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i)
            }
        })
    }

    /// All subsets of this set, in a fixed (descending bitmask) order.
    pub fn subsets(self) -> impl Iterator<Item = ElementSet> {
        let mask = self.0;
        let mut cur = mask;
        let mut done = false;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let out = ElementSet(cur);
            if cur == 0 {
                done = true;
            } else {
                cur = (cur - 1) & mask;
            }
            Some(out)
        })
    }

    /// Characteristic 0/1 string over ids `0..n`.
    pub fn characteristic_string(self, n: usize) -> String {
        (0..n).map(|i| if self.contains(i) { '1' } else { '0' }).collect()
    }
}

impl FromIterator<usize> for ElementSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        let mut s = ElementSet::EMPTY;
        for i in iter {
            s = s.with(i);
        }
        s
    }
}

impl std::ops::BitOr for ElementSet {
    type Output = ElementSet;
    fn bitor(self, rhs: ElementSet) -> ElementSet {
        self.union(rhs)
    }
}

impl std::ops::BitAnd for ElementSet {
    type Output = ElementSet;
    fn bitand(self, rhs: ElementSet) -> ElementSet {
        self.intersection(rhs)
    }
}

impl std::ops::Sub for ElementSet {
    type Output = ElementSet;
    fn sub(self, rhs: ElementSet) -> ElementSet {
        self.difference(rhs)
    }
}

impl fmt::Display for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A finite poset: carrier `0..n` with a reflexive, antisymmetric,
/// transitive relation, stored as one bitset row per element in each
/// direction.
#[derive(Clone, PartialEq, Eq)]
pub struct Poset {
    n: usize,
    /// `up[i]` = { j : i <= j }
    up: Vec<ElementSet>,
    /// `down[i]` = { j : j <= i }
    down: Vec<ElementSet>,
    labels: Option<Vec<String>>,
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poset(n={}, covers={:?})", self.n, self.covers())
    }
}

fn check_size(n: usize) -> Result<()> {
    if n > MAX_ELEMENTS {
        Err(Error::CarrierTooLarge { size: n, limit: MAX_ELEMENTS })
    } else {
        Ok(())
    }
}

impl Poset {
    /// Builds a poset from an explicit list of related pairs `(x, y)`
    /// meaning `x <= y`. The relation is taken exactly as given (plus
    /// nothing) and validated against the three axioms.
    pub fn try_new(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Poset> {
        check_size(n)?;
        let mut up = vec![ElementSet::EMPTY; n];
        for (x, y) in pairs {
            if x >= n || y >= n {
                return Err(Error::Load(format!("pair ({x}, {y}) out of range for {n} elements")));
            }
            up[x] = up[x].with(y);
        }
        validate_relation(&up)?;
        Ok(Poset::from_up_rows(n, up, None))
    }

    fn from_up_rows(n: usize, up: Vec<ElementSet>, labels: Option<Vec<String>>) -> Poset {
        let mut down = vec![ElementSet::EMPTY; n];
        for (x, row) in up.iter().enumerate() {
            for y in row.iter() {
                down[y] = down[y].with(x);
            }
        }
        Poset { n, up, down, labels }
    }

    /// Builds from cover pairs `(lower, upper)`: the reflexive-transitive
    /// closure is computed and acyclicity is checked.
    pub fn from_covers(
        n: usize,
        covers: impl IntoIterator<Item = (usize, usize)>,
        labels: Option<Vec<String>>,
    ) -> Result<Poset> {
        check_size(n)?;
        let mut succ = vec![ElementSet::EMPTY; n];
        for (x, y) in covers {
            if x >= n || y >= n {
                return Err(Error::Load(format!("cover ({x}, {y}) out of range for {n} elements")));
            }
            succ[x] = succ[x].with(y);
        }
        // reflexive-transitive closure, iterated to a fixpoint
        let mut up: Vec<ElementSet> = (0..n).map(|i| succ[i].with(i)).collect();
        let mut changed = true;
        while changed {
            changed = false;
            for i in 0..n {
                let mut row = up[i];
                for j in up[i].iter() {
                    row = row.union(up[j]);
                }
                if row != up[i] {
                    up[i] = row;
                    changed = true;
                }
            }
        }
        for x in 0..n {
            for y in up[x].iter() {
                if y != x && up[y].contains(x) {
                    return Err(Error::Load(format!("cover relation has a cycle through {x} and {y}")));
                }
            }
        }
        Ok(Poset::from_up_rows(n, up, labels))
    }

    /// Parses the JSON poset format: `{"name": .., "elements": [..],
    /// "covers": [[i, j], ..]}` where `[i, j]` means element `i` is
    /// covered by element `j`.
    pub fn from_json_str(text: &str) -> Result<Poset> {
        #[derive(Deserialize)]
        struct File {
            #[serde(default)]
            #[allow(dead_code)]
            name: Option<String>,
            elements: Vec<String>,
            covers: Vec<(usize, usize)>,
        }
        let file: File =
            serde_json::from_str(text).map_err(|e| Error::Load(format!("bad poset JSON: {e}")))?;
        Poset::from_covers(file.elements.len(), file.covers, Some(file.elements))
    }

    /// The chain on k elements: 0 < 1 < .. < k-1.
    pub fn chain(k: usize) -> Poset {
        assert!(k <= MAX_ELEMENTS);
        let up = (0..k)
            .map(|i| ElementSet::full(k).difference(ElementSet::full(i)))
            .collect();
        let labels = (1..=k).map(|i| i.to_string()).collect();
        Poset::from_up_rows(k, up, Some(labels))
    }

    /// The antichain on k elements: the relation is the diagonal.
    pub fn antichain(k: usize) -> Poset {
        assert!(k <= MAX_ELEMENTS);
        let up = (0..k).map(ElementSet::singleton).collect();
        let labels = (1..=k).map(|i| i.to_string()).collect();
        Poset::from_up_rows(k, up, Some(labels))
    }

    /// The three-element poset with two minimal points below one top.
    pub fn lambda() -> Poset {
        let p = Poset::ordinal_sum(&Poset::antichain(2), &Poset::chain(1)).unwrap();
        p.with_labels(vec!["l".into(), "r".into(), "t".into()])
    }

    /// The four-element diamond, i.e. the product of two 2-chains.
    pub fn diamond() -> Poset {
        let p = Poset::product(&Poset::chain(2), &Poset::chain(2)).unwrap();
        p.with_labels(vec!["bot".into(), "l".into(), "r".into(), "top".into()])
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Poset {
        assert_eq!(labels.len(), self.n);
        self.labels = Some(labels);
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_empty_poset(&self) -> bool {
        self.n == 0
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    pub fn carrier(&self) -> ElementSet {
        ElementSet::full(self.n)
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(y)
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq(x, y)
    }

    /// { j : i <= j }
    pub fn up_row(&self, i: usize) -> ElementSet {
        self.up[i]
    }

    /// { j : j <= i }
    pub fn down_row(&self, i: usize) -> ElementSet {
        self.down[i]
    }

    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(ls) => ls[i].clone(),
            None => i.to_string(),
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Product poset; element `(p, q)` gets id `p * |Q| + q` (row-major,
    /// left index major). This layout is part of the public contract.
    pub fn product(p: &Poset, q: &Poset) -> Result<Poset> {
        let n = p.n * q.n;
        check_size(n)?;
        let id = |a: usize, b: usize| a * q.n + b;
        let mut up = vec![ElementSet::EMPTY; n];
        for a in p.elements() {
            for b in q.elements() {
                let mut row = ElementSet::EMPTY;
                for a2 in p.up[a].iter() {
                    for b2 in q.up[b].iter() {
                        row = row.with(id(a2, b2));
                    }
                }
                up[id(a, b)] = row;
            }
        }
        let labels = match (&p.labels, &q.labels) {
            (Some(pl), Some(ql)) => {
                let mut out = Vec::with_capacity(n);
                for a in p.elements() {
                    for b in q.elements() {
                        out.push(combine_labels(&pl[a], &ql[b]));
                    }
                }
                Some(out)
            }
            _ => None,
        };
        Ok(Poset::from_up_rows(n, up, labels))
    }

    /// Disjoint union with no relations across the parts. P keeps its
    /// ids, Q is shifted by |P|.
    pub fn direct_sum(p: &Poset, q: &Poset) -> Result<Poset> {
        Poset::sum_impl(p, q, false)
    }

    /// Disjoint union with every P-element below every Q-element.
    pub fn ordinal_sum(p: &Poset, q: &Poset) -> Result<Poset> {
        Poset::sum_impl(p, q, true)
    }

    fn sum_impl(p: &Poset, q: &Poset, ordinal: bool) -> Result<Poset> {
        let n = p.n + q.n;
        check_size(n)?;
        let shift = |s: ElementSet| ElementSet::from_bits(s.bits() << p.n);
        let upper = shift(ElementSet::full(q.n));
        let mut up = Vec::with_capacity(n);
        for a in p.elements() {
            let mut row = p.up[a];
            if ordinal {
                row = row.union(upper);
            }
            up.push(row);
        }
        for b in q.elements() {
            up.push(shift(q.up[b]));
        }
        let labels = match (&p.labels, &q.labels) {
            (Some(pl), Some(ql)) => Some(pl.iter().chain(ql.iter()).cloned().collect()),
            _ => None,
        };
        Ok(Poset::from_up_rows(n, up, labels))
    }

    /// Same carrier, order reversed.
    pub fn dual(&self) -> Poset {
        Poset {
            n: self.n,
            up: self.down.clone(),
            down: self.up.clone(),
            labels: self.labels.clone(),
        }
    }

    /// Restriction of the order to `s`. Returns the induced poset and the
    /// map from new ids to original ids (ascending).
    pub fn induced(&self, s: ElementSet) -> (Poset, Vec<usize>) {
        assert!(s.is_subset_of(self.carrier()));
        let to_parent: Vec<usize> = s.iter().collect();
        let mut from_parent = vec![usize::MAX; self.n];
        for (new, &old) in to_parent.iter().enumerate() {
            from_parent[old] = new;
        }
        let up = to_parent
            .iter()
            .map(|&old| self.up[old].intersection(s).iter().map(|j| from_parent[j]).collect())
            .collect();
        let labels = self
            .labels
            .as_ref()
            .map(|ls| to_parent.iter().map(|&old| ls[old].clone()).collect());
        (Poset::from_up_rows(to_parent.len(), up, labels), to_parent)
    }

    /// Removes the down-closure of `b` and restricts to the rest.
    pub fn remove_down_closure(&self, b: ElementSet) -> (Poset, Vec<usize>) {
        let keep = self.carrier().difference(self.down_closure(b));
        self.induced(keep)
    }

    /// All elements below some member of `b`.
    pub fn down_closure(&self, b: ElementSet) -> ElementSet {
        assert!(b.is_subset_of(self.carrier()));
        b.iter().fold(ElementSet::EMPTY, |acc, i| acc.union(self.down[i]))
    }

    /// All elements above some member of `b`.
    pub fn up_closure(&self, b: ElementSet) -> ElementSet {
        assert!(b.is_subset_of(self.carrier()));
        b.iter().fold(ElementSet::EMPTY, |acc, i| acc.union(self.up[i]))
    }

    pub fn minimal_points(&self) -> ElementSet {
        self.elements().filter(|&i| self.down[i] == ElementSet::singleton(i)).collect()
    }

    pub fn maximal_points(&self) -> ElementSet {
        self.elements().filter(|&i| self.up[i] == ElementSet::singleton(i)).collect()
    }

    /// Minimal points of the induced sub-poset on `s`.
    pub fn minimal_points_within(&self, s: ElementSet) -> ElementSet {
        s.iter().filter(|&i| self.down[i].intersection(s) == ElementSet::singleton(i)).collect()
    }

    pub fn is_downset(&self, d: ElementSet) -> bool {
        d.is_subset_of(self.carrier()) && d.iter().all(|i| self.down[i].is_subset_of(d))
    }

    pub fn is_upset(&self, u: ElementSet) -> bool {
        u.is_subset_of(self.carrier()) && u.iter().all(|i| self.up[i].is_subset_of(u))
    }

    /// Is `d` downward closed inside the induced sub-poset on `s`?
    pub fn is_downset_within(&self, d: ElementSet, s: ElementSet) -> bool {
        d.is_subset_of(s) && d.iter().all(|i| self.down[i].intersection(s).is_subset_of(d))
    }

    pub fn is_upset_within(&self, u: ElementSet, s: ElementSet) -> bool {
        u.is_subset_of(s) && u.iter().all(|i| self.up[i].intersection(s).is_subset_of(u))
    }

    /// Cover pairs `(y, x)` with y covered by x, by transitive reduction.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for y in self.elements() {
            for x in self.up[y].iter() {
                if x == y {
                    continue;
                }
                let between = self.up[y].intersection(self.down[x]).without(x).without(y);
                if between.is_empty() {
                    out.push((y, x));
                }
            }
        }
        out
    }

    /// A linear extension as an ordering of the ids; smallest id first
    /// among the available minimal elements, so the result is
    /// deterministic (and the identity whenever ids already form a
    /// linear extension).
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut placed = ElementSet::EMPTY;
        let mut order = Vec::with_capacity(self.n);
        while order.len() < self.n {
            let next = self
                .elements()
                .find(|&i| !placed.contains(i) && self.down[i].without(i).is_subset_of(placed))
                .expect("valid poset always has a minimal unplaced element");
            placed = placed.with(next);
            order.push(next);
        }
        order
    }

    /// Checks the three axioms, reporting the first violation found.
    pub fn validate(&self) -> std::result::Result<(), PosetViolation> {
        validate_relation(&self.up)
    }

    /// True when both posets have the same carrier size and relation
    /// (labels ignored).
    pub fn same_order(&self, other: &Poset) -> bool {
        self.n == other.n && self.up == other.up
    }
}

fn combine_labels(left: &str, right: &str) -> String {
    // flatten nested product labels so C3*C3*C3 shows (1,2,3), not ((1,2),3)
    if let Some(inner) = left.strip_prefix('(').and_then(|s| s.strip_suffix(')')) {
        format!("({inner},{right})")
    } else {
        format!("({left},{right})")
    }
}

fn validate_relation(up: &[ElementSet]) -> std::result::Result<(), PosetViolation> {
    for (x, row) in up.iter().enumerate() {
        if !row.contains(x) {
            return Err(PosetViolation::NotReflexive(x));
        }
    }
    for (x, row) in up.iter().enumerate() {
        for y in row.iter() {
            if y != x && up[y].contains(x) {
                return Err(PosetViolation::NotAntisymmetric(x, y));
            }
        }
    }
    for (x, row) in up.iter().enumerate() {
        for y in row.iter() {
            if !up[y].is_subset_of(*row) {
                let z = up[y].difference(*row).iter().next().unwrap();
                return Err(PosetViolation::NotTransitive(x, y, z));
            }
        }
    }
    Ok(())
}

/// The poset of all order homomorphisms P -> Q under the pointwise
/// order. Maps are found by backtracking along a linear extension of P;
/// the result's element ids follow the lexicographic order of the value
/// vectors (indexed by P's ids).
pub fn hom_poset(p: &Poset, q: &Poset) -> Result<Poset> {
    hom_poset_with_bound(p, q, DEFAULT_HOM_CANDIDATE_BOUND)
}

pub fn hom_poset_with_bound(p: &Poset, q: &Poset, bound: u128) -> Result<Poset> {
    let candidates = (q.n as u128).checked_pow(p.n as u32);
    match candidates {
        Some(c) if c <= bound => {}
        _ => return Err(Error::BoundExceeded { what: "enumerating homomorphisms", limit: bound }),
    }

    let order = p.linear_extension();
    let mut maps: Vec<Vec<usize>> = Vec::new();
    let mut values = vec![usize::MAX; p.n];
    search_homs(p, q, &order, 0, &mut values, &mut maps);
    maps.sort();

    check_size(maps.len())?;
    let n = maps.len();
    let mut up = vec![ElementSet::EMPTY; n];
    for i in 0..n {
        for j in 0..n {
            if maps[i].iter().zip(&maps[j]).all(|(&a, &b)| q.leq(a, b)) {
                up[i] = up[i].with(j);
            }
        }
    }
    let labels = maps
        .iter()
        .map(|m| {
            let parts: Vec<String> = m.iter().map(|&v| q.label(v)).collect();
            format!("({})", parts.join(","))
        })
        .collect();
    Ok(Poset::from_up_rows(n, up, Some(labels)))
}

fn search_homs(
    p: &Poset,
    q: &Poset,
    order: &[usize],
    pos: usize,
    values: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if pos == order.len() {
        out.push(values.clone());
        return;
    }
    let x = order[pos];
    let mut cand = q.carrier();
    for u in p.down_row(x).without(x).iter() {
        cand = cand.intersection(q.up_row(values[u]));
        if cand.is_empty() {
            return;
        }
    }
    for v in cand.iter() {
        values[x] = v;
        search_homs(p, q, order, pos + 1, values, out);
    }
    values[x] = usize::MAX;
}
