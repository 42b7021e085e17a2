//! Production solvers: the memoized engine for products W x C_k, closed
//! forms for chain/lambda/diamond products, the staircase recursion for
//! H(C2, C_k), and the polynomial / path-count / ballot machinery that
//! yields its closed form.

use std::collections::HashMap;
use std::rc::Rc;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::downset::{downsets_within, DEFAULT_DOWNSET_BOUND};
use crate::error::{Error, Result};
use crate::poset::{ElementSet, Poset};

/// Exact binomial coefficient via the Pascal recurrence.
pub fn binomial(n: u64, r: u64) -> BigUint {
    if r > n {
        return BigUint::zero();
    }
    let r = r.min(n - r) as usize;
    let mut row: Vec<BigUint> = vec![BigUint::zero(); r + 1];
    row[0] = BigUint::one();
    for _ in 0..n {
        for j in (1..=r).rev() {
            let prev = row[j - 1].clone();
            row[j] += prev;
        }
    }
    row[r].clone()
}

/// Coefficient table of one engine node: the sub-poset `carrier` (an
/// up-set of the original W) at chain level `level`, with one
/// coefficient per down-set `T` of the sub-poset.
#[derive(Clone, Debug)]
pub struct CoefficientTable {
    pub carrier: ElementSet,
    pub level: usize,
    /// (T, a_T) sorted by (cardinality, bitmask value).
    pub coeffs: Vec<(ElementSet, BigUint)>,
}

impl CoefficientTable {
    pub fn h(&self) -> BigUint {
        self.coeffs.iter().map(|(_, a)| a).sum()
    }

    pub fn get(&self, t: ElementSet) -> Option<&BigUint> {
        self.coeffs.iter().find(|(s, _)| *s == t).map(|(_, a)| a)
    }
}

type CoeffRows = Rc<Vec<(ElementSet, BigUint)>>;

/// Memoized coefficient engine for the products W x C_k.
///
/// Level k = 1 is the lattice of W itself. One level up, a coefficient
/// splits into the lower-level coefficients of the supersets of T plus
/// an inclusion-exclusion over the minimal points of the sub-poset
/// inside T, which only ever deletes minimal points; every sub-poset
/// reached is therefore an induced up-set of the original W, and the
/// memo key is (up-set bitmask, level).
pub struct ChainProductEngine {
    w: Poset,
    tables: HashMap<(u128, usize), CoeffRows>,
    downsets: HashMap<u128, Rc<Vec<ElementSet>>>,
}

impl ChainProductEngine {
    pub fn new(w: &Poset) -> ChainProductEngine {
        ChainProductEngine { w: w.clone(), tables: HashMap::new(), downsets: HashMap::new() }
    }

    pub fn base(&self) -> &Poset {
        &self.w
    }

    fn sub_downsets(&mut self, carrier: ElementSet) -> Result<Rc<Vec<ElementSet>>> {
        if let Some(d) = self.downsets.get(&carrier.bits()) {
            return Ok(Rc::clone(d));
        }
        let sets = Rc::new(downsets_within(&self.w, carrier, DEFAULT_DOWNSET_BOUND)?);
        self.downsets.insert(carrier.bits(), Rc::clone(&sets));
        Ok(sets)
    }

    fn table(&mut self, carrier: ElementSet, level: usize) -> Result<CoeffRows> {
        assert!(level >= 1);
        if let Some(t) = self.tables.get(&(carrier.bits(), level)) {
            return Ok(Rc::clone(t));
        }
        let sets = self.sub_downsets(carrier)?;
        let table: Vec<(ElementSet, BigUint)> = if level == 1 {
            sets.iter()
                .enumerate()
                .map(|(i, &t)| {
                    let contained =
                        sets[..=i].iter().filter(|e| e.is_subset_of(t)).count() as u64;
                    (t, BigUint::from(contained))
                })
                .collect()
        } else {
            let prev = self.table(carrier, level - 1)?;
            let total_prev: BigUint = prev.iter().map(|(_, a)| a).sum();
            let minima = self.w.minimal_points_within(carrier);
            let mut out = Vec::with_capacity(sets.len());
            for &t in sets.iter() {
                if t.is_empty() {
                    out.push((t, total_prev.clone()));
                    continue;
                }
                let mut acc: BigUint =
                    prev.iter().filter(|(u, _)| t.is_subset_of(*u)).map(|(_, a)| a).sum();
                let mut minus = BigUint::zero();
                let mt = minima.intersection(t);
                assert!(mt.len() <= 20, "inclusion-exclusion over {} minimal points", mt.len());
                for n in mt.subsets() {
                    if n.is_empty() {
                        continue;
                    }
                    let reduced = self.table(carrier.difference(n), level)?;
                    let rest = t.difference(n);
                    let val = reduced
                        .iter()
                        .find(|(u, _)| *u == rest)
                        .map(|(_, a)| a.clone())
                        .unwrap_or_default();
                    if n.len() % 2 == 1 {
                        acc += val;
                    } else {
                        minus += val;
                    }
                }
                out.push((t, acc - minus));
            }
            out
        };
        let table = Rc::new(table);
        self.tables.insert((carrier.bits(), level), Rc::clone(&table));
        Ok(table)
    }

    /// Coefficient table of an induced up-set of W at the given level.
    pub fn coefficient_table_of(&mut self, carrier: ElementSet, k: usize) -> Result<CoefficientTable> {
        if !self.w.is_upset(carrier) {
            return Err(Error::NotUpSet { set: carrier });
        }
        if k == 0 {
            return Ok(CoefficientTable {
                carrier,
                level: 0,
                coeffs: vec![(ElementSet::EMPTY, BigUint::one())],
            });
        }
        let table = self.table(carrier, k)?;
        Ok(CoefficientTable { carrier, level: k, coeffs: table.as_ref().clone() })
    }

    /// Coefficient table of W x C_k itself.
    pub fn coefficient_table(&mut self, k: usize) -> Result<CoefficientTable> {
        self.coefficient_table_of(self.w.carrier(), k)
    }

    /// h(W x C_k): the sum of all coefficients; 1 for k = 0.
    pub fn h(&mut self, k: usize) -> Result<BigUint> {
        Ok(self.coefficient_table(k)?.h())
    }

    /// #D of an induced up-set times C_k: the coefficient of the full
    /// sub-carrier (everything then lies below the top layer).
    pub fn downset_count_of(&mut self, carrier: ElementSet, k: usize) -> Result<BigUint> {
        let table = self.coefficient_table_of(carrier, k)?;
        Ok(table.get(carrier).cloned().unwrap_or_else(BigUint::one))
    }
}

/// h(W x C_k) through the memoized engine.
pub fn h_product_chain(w: &Poset, k: usize) -> Result<BigUint> {
    ChainProductEngine::new(w).h(k)
}

/// Full coefficient table of W x C_k.
pub fn product_chain_table(w: &Poset, k: usize) -> Result<CoefficientTable> {
    ChainProductEngine::new(w).coefficient_table(k)
}

/// Coefficient vector (a_0, .., a_n) for the grid C_n x C_k, where a_j
/// belongs to the j-element down-set of the chain factor C_n.
pub fn cnck_a_vector(n: usize, k: usize) -> Vec<BigUint> {
    assert!(k >= 1);
    // level 1: a_j = j + 1
    let mut rows: Vec<Vec<BigUint>> =
        (0..=n).map(|nn| (0..=nn).map(|j| BigUint::from(j as u64 + 1)).collect()).collect();
    for _level in 2..=k {
        let mut next: Vec<Vec<BigUint>> = Vec::with_capacity(n + 1);
        for nn in 0..=n {
            let prev = &rows[nn];
            let h_prev: BigUint = prev.iter().sum();
            let mut row = Vec::with_capacity(nn + 1);
            row.push(h_prev);
            for j in 1..=nn {
                let mut v = next[nn - 1][j - 1].clone();
                for a in &prev[j..=nn] {
                    v += a;
                }
                row.push(v);
            }
            next.push(row);
        }
        rows = next;
    }
    rows.pop().unwrap()
}

pub fn a_cnck(n: usize, k: usize, j: usize) -> BigUint {
    assert!(j <= n && k >= 1);
    cnck_a_vector(n, k).swap_remove(j)
}

/// h(C_n x C_k): triangular numbers at level 1, then one chain element
/// peeled off per step.
pub fn h_cnck(n: usize, k: usize) -> BigUint {
    assert!(k >= 1);
    if n == 0 {
        return BigUint::one();
    }
    if k == 1 {
        return BigUint::from(((n as u64) + 1) * ((n as u64) + 2) / 2);
    }
    let mut total = h_cnck(n - 1, k);
    for (i, a) in cnck_a_vector(n, k - 1).iter().enumerate() {
        total += a * BigUint::from(i as u64 + 1);
    }
    total
}

fn exact_div(value: BigUint, divisor: u64) -> BigUint {
    debug_assert!((value.clone() % divisor).is_zero());
    value / divisor
}

/// Contribution of floor `f` to the lambda-product coefficients:
/// the closed form of the triple sum
/// sum_{i,j in [k-f]} sum_{phi=0..f} (i+phi)(j+phi).
pub fn lambda_floor(f: u64, k: u64) -> BigUint {
    assert!(f <= k);
    let kf = BigUint::from(k - f);
    let inner = BigUint::from(f * (f + 2) + 3 * (k + 1) * (k + 1));
    exact_div(kf.clone() * kf * (f + 1) * inner, 12)
}

/// Coefficients of the lambda poset (two minimal points l, r below one
/// top) times C_k, keyed by the top-layer down-set they belong to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaCoeffs {
    pub k: usize,
    /// T = {}
    pub a_empty: BigUint,
    /// T = {l} (equals the {r} coefficient by symmetry)
    pub a_side: BigUint,
    /// T = {l, r}
    pub a_pair: BigUint,
    /// T = the full layer; equals #D of the product
    pub a_full: BigUint,
    pub h: BigUint,
}

pub fn lambda_coeffs(k: usize) -> LambdaCoeffs {
    assert!(k >= 1);
    let ku = k as u64;
    let a_full = exact_div(BigUint::from((ku + 1) * (ku + 2) * (2 * ku + 3)), 6);
    let a_pair = exact_div(BigUint::from(ku) * (ku + 1) * (ku + 2) * (3 * ku + 5), 12);
    let a_empty: BigUint = (0..=ku).map(|f| lambda_floor(f, ku)).sum();
    let h: BigUint = (0..=ku + 1).map(|f| lambda_floor(f, ku + 1)).sum();
    let a_side = exact_div(h.clone() - a_full.clone() - a_pair.clone() - a_empty.clone(), 2);
    LambdaCoeffs { k, a_empty, a_side, a_pair, a_full, h }
}

/// Coefficients of the diamond times C_k, keyed by the top-layer
/// down-set (bot, then bot with one or both middles, then everything).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiamondCoeffs {
    pub k: usize,
    pub a_empty: BigUint,
    pub a_bot: BigUint,
    /// T = {bot, l} (equals the {bot, r} coefficient by symmetry)
    pub a_bot_side: BigUint,
    pub a_bot_pair: BigUint,
    /// T = the full layer; equals #D of the product
    pub a_full: BigUint,
    pub h: BigUint,
}

/// Step recursion on top of the diamond lattice weights (1,2,3,3,5,6)
/// at level 1. Deleting the bottom of the diamond leaves the lambda
/// poset, so each step consumes the lambda coefficients: the reduced
/// empty-set coefficient is the lambda h one level down, and the other
/// reduced coefficients are the matching lambda ones at full level.
pub fn diamond_coeffs(k: usize) -> DiamondCoeffs {
    assert!(k >= 1);
    let mut cur = DiamondCoeffs {
        k: 1,
        a_empty: BigUint::from(1u32),
        a_bot: BigUint::from(2u32),
        a_bot_side: BigUint::from(3u32),
        a_bot_pair: BigUint::from(5u32),
        a_full: BigUint::from(6u32),
        h: BigUint::from(20u32),
    };
    for level in 2..=k {
        let lam = lambda_coeffs(level);
        let lam_below = lambda_coeffs(level - 1);
        let a_empty = cur.h.clone();
        let a_bot = cur.h.clone() - cur.a_empty.clone() + lam_below.h;
        let a_bot_side =
            cur.a_bot_side.clone() + cur.a_bot_pair.clone() + cur.a_full.clone() + lam.a_side;
        let a_bot_pair = cur.a_bot_pair.clone() + cur.a_full.clone() + lam.a_pair;
        let a_full = cur.a_full.clone() + lam.a_full;
        let h = a_empty.clone()
            + a_bot.clone()
            + a_bot_side.clone() * 2u32
            + a_bot_pair.clone()
            + a_full.clone();
        cur = DiamondCoeffs { k: level, a_empty, a_bot, a_bot_side, a_bot_pair, a_full, h };
    }
    cur
}

/// Coefficient vector (a_0(k), .., a_k(k)) for the staircase poset
/// H(C2, C_k), split along its top diagonal minus the corner.
pub fn hc2ck_coeffs(k: usize) -> Vec<BigUint> {
    assert!(k >= 1);
    let mut row = vec![BigUint::one(), BigUint::from(2u32)];
    for level in 2..=k {
        let mut next = vec![BigUint::zero(); level + 1];
        for j in 1..level {
            next[j] = row[j - 1..].iter().sum();
        }
        next[0] = next[1].clone();
        next[level] = BigUint::from(2u32).pow(level as u32);
        row = next;
    }
    row
}

/// h(H(C2, C_k)) by the coefficient recursion.
pub fn h_hc2ck(k: usize) -> BigUint {
    hc2ck_coeffs(k).iter().sum()
}

/// Polynomial with nonnegative integer coefficients, constant term
/// first; the column polynomials of the path grid. Evaluation at x = 2
/// of the (k+1)-level bottom polynomial counts h(H(C2, C_k)).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridPolynomial {
    pub k: usize,
    pub j: usize,
    coeffs: Vec<BigUint>,
}

impl GridPolynomial {
    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
    }

    pub fn eval(&self, x: u64) -> BigUint {
        let mut acc = BigUint::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }
}

fn poly_sum(polys: &[Vec<BigUint>]) -> Vec<BigUint> {
    let len = polys.iter().map(Vec::len).max().unwrap_or(0);
    let mut out = vec![BigUint::zero(); len];
    for p in polys {
        for (i, c) in p.iter().enumerate() {
            out[i] += c;
        }
    }
    out
}

pub fn grid_polynomial(k: usize, j: usize) -> GridPolynomial {
    assert!(k >= 1 && j <= k);
    let mut row: Vec<Vec<BigUint>> =
        vec![vec![BigUint::one()], vec![BigUint::zero(), BigUint::one()]];
    for level in 2..=k {
        let mut next: Vec<Vec<BigUint>> = vec![Vec::new(); level + 1];
        for jj in 1..level {
            next[jj] = poly_sum(&row[jj - 1..]);
        }
        next[0] = next[1].clone();
        let mut top = vec![BigUint::zero(); level + 1];
        top[level] = BigUint::one();
        next[level] = top;
        row = next;
    }
    GridPolynomial { k, j, coeffs: row.swap_remove(j) }
}

/// Number of paths from (i, i) to (k, j) in the directed half-grid with
/// columns k and rows j <= k: within a column only downward steps are
/// available (and none out of the diagonal vertex), each diagonal vertex
/// has a single edge into the next column at the same row, and
/// up-right diagonal steps connect (c, r) to (c+1, r+1) for r < c. No
/// edge enters a diagonal vertex, so paths to (k, k) are trivial.
pub fn grid_path_count(k: usize, j: usize, i: usize) -> BigUint {
    assert!(j <= k && i <= k);
    if i == k {
        return if j == k { BigUint::one() } else { BigUint::zero() };
    }
    // column i: everything zero except the start on the diagonal
    let mut col = vec![BigUint::zero(); i + 1];
    col[i] = BigUint::one();
    for c in i..k {
        let mut arrive = vec![BigUint::zero(); c + 2];
        arrive[1..=c].clone_from_slice(&col[..c]);
        // launch edge off the diagonal vertex of column c
        let launch = col[c].clone();
        arrive[c] += launch;
        // downward flow inside column c+1 (the diagonal row stays dry)
        for r in (0..=c.saturating_sub(1)).rev() {
            let upper = arrive[r + 1].clone();
            arrive[r] += upper;
        }
        col = arrive;
    }
    col[j].clone()
}

/// Ballot-style coefficient C(k+i, k) - C(k+i, k+1).
pub fn ballot_coeff(k: u64, i: u64) -> BigUint {
    binomial(k + i, k) - binomial(k + i, k + 1)
}

/// h(H(C2, C_k)) by the closed form sum_i ballot(k, i) 2^(k-i).
pub fn h_hc2ck_closed(k: u64) -> BigUint {
    (0..=k).map(|i| ballot_coeff(k, i) << (k - i)).sum()
}
