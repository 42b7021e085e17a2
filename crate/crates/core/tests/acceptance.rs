//! Acceptance suite: every headline count is recomputed along each of
//! its independent routes and checked for exact integer equality. Each
//! test prints one pass line; run with `--nocapture` to see them.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigUint;

use ordhom_core::downset::{
    constrained_downset_count, constrained_pair_count, h_by_summation, DownSetLattice,
};
use ordhom_core::families::{
    self, binomial, diamond_coeffs, grid_polynomial, h_cnck, h_hc2ck, h_hc2ck_closed,
    h_product_chain, lambda_coeffs,
};
use ordhom_core::gvs::surjective_count;
use ordhom_core::oracle::{brute_hom_count, order_polynomial_value};
use ordhom_core::poset::hom_poset;
use ordhom_core::verify::{run_verify, VerifyConfig};
use ordhom_core::{ElementSet, Poset};

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

fn grid33() -> Poset {
    Poset::product(&Poset::chain(3), &Poset::chain(3)).unwrap()
}

fn cube333() -> Poset {
    Poset::product(&grid33(), &Poset::chain(3)).unwrap()
}

fn pass(tag: &str, detail: &str, start: Instant) {
    println!("criterion {tag}: PASS — {detail} ({:.2?})", start.elapsed());
}

#[test]
fn criterion_01_grid_four_routes() {
    let start = Instant::now();
    let grid = grid33();
    assert_eq!(h_by_summation(&grid).unwrap(), big(175));
    assert_eq!(h_product_chain(&grid, 1).unwrap(), big(175));
    assert_eq!(brute_hom_count(&grid, &Poset::chain(3)).unwrap().total, big(175));
    // 42 linear extensions of the 3x3 grid
    assert_eq!(order_polynomial_value(&grid, 3).unwrap(), big(175));
    pass("01", "h(C3xC3) = 175 by summation, engine, brute force, order polynomial", start);
}

#[test]
fn criterion_02_cube_engine_and_summation() {
    let start = Instant::now();
    assert_eq!(h_product_chain(&grid33(), 3).unwrap(), big(211_250));
    let engine_done = Instant::now();
    let cube = cube333();
    let lattice = DownSetLattice::enumerate(&cube).unwrap();
    assert_eq!(lattice.len(), 980);
    assert_eq!(lattice.h(), big(211_250));
    println!(
        "criterion 02: PASS — h(C3^3) = 211250 by engine ({:.2?}) and summation over 980 \
         down-sets ({:.2?})",
        engine_done.duration_since(start),
        engine_done.elapsed()
    );
}

#[test]
fn criterion_03_surjective_counts() {
    let start = Instant::now();
    assert_eq!(surjective_count(&grid33()).unwrap(), big(118));
    assert_eq!(surjective_count(&cube333()).unwrap(), big(208_313));
    pass("03", "surjective counts 118 (C3^2) and 208313 (C3^3)", start);
}

#[test]
fn criterion_04_constrained_replay() {
    let start = Instant::now();
    let cube = cube333();
    // row-major ids of the diagonal corners (1,1,1), (2,2,2), (3,3,3)
    let bottom = ElementSet::singleton(0);
    let mid = ElementSet::singleton(13);
    let top = ElementSet::singleton(26);
    let none = ElementSet::EMPTY;

    let low_pinned =
        constrained_pair_count(&cube, bottom.union(mid), none, bottom.union(mid), top).unwrap();
    assert_eq!(low_pinned, big(46_540));

    let middle_skipped = constrained_downset_count(&cube, mid, top).unwrap();
    assert_eq!(middle_skipped, big(489));

    assert_eq!(low_pinned - middle_skipped, big(46_051));

    let diagonal = constrained_pair_count(&cube, bottom, mid, mid, top).unwrap();
    assert_eq!(diagonal, big(116_211));
    // the same count through the oracle front end
    let fixed = BTreeMap::from([(0usize, 1u8), (13, 2), (26, 3)]);
    assert_eq!(ordhom_core::oracle::constrained_hom_count(&cube, &fixed).unwrap(), big(116_211));

    pass("04", "diagonal-pinned counts 46540 / 489 / 46051 / 116211", start);
}

#[test]
fn criterion_05_staircase_closed_forms() {
    let start = Instant::now();
    for k in 1..=12usize {
        let expected = binomial(2 * k as u64 + 1, k as u64);
        assert_eq!(h_hc2ck(k), expected, "recursion at k={k}");
        assert_eq!(h_hc2ck_closed(k as u64), expected, "closed form at k={k}");
        assert_eq!(grid_polynomial(k + 1, 0).eval(2), expected, "polynomial at k={k}");
        if k <= 6 {
            let staircase = hom_poset(&Poset::chain(2), &Poset::chain(k)).unwrap();
            assert_eq!(h_by_summation(&staircase).unwrap(), expected, "summation at k={k}");
        }
    }
    pass("05", "h(H(C2,C_k)) = C(2k+1,k) for k = 1..12 along three routes (+ summation to 6)", start);
}

#[test]
fn criterion_06_staircase_downset_counts() {
    let start = Instant::now();
    for k in 1..=10usize {
        let staircase = hom_poset(&Poset::chain(2), &Poset::chain(k)).unwrap();
        assert_eq!(DownSetLattice::enumerate(&staircase).unwrap().len(), 1 << k, "k={k}");
    }
    pass("06", "#D(H(C2,C_k)) = 2^k for k = 1..10", start);
}

#[test]
fn criterion_07_family_cross_checks() {
    let start = Instant::now();
    for k in 1..=5usize {
        for n in 0..=4usize {
            assert_eq!(
                h_cnck(n, k),
                h_product_chain(&Poset::chain(n), k).unwrap(),
                "grid n={n}, k={k}"
            );
        }
        let lam = lambda_coeffs(k);
        let dia = diamond_coeffs(k);
        assert_eq!(lam.h, h_product_chain(&Poset::lambda(), k).unwrap(), "lambda k={k}");
        assert_eq!(dia.h, h_product_chain(&Poset::diamond(), k).unwrap(), "diamond k={k}");

        let lam_product = Poset::product(&Poset::lambda(), &Poset::chain(k)).unwrap();
        let dia_product = Poset::product(&Poset::diamond(), &Poset::chain(k)).unwrap();
        if k <= 3 {
            assert_eq!(lam.h, h_by_summation(&lam_product).unwrap());
            assert_eq!(dia.h, h_by_summation(&dia_product).unwrap());
            for n in 0..=4usize {
                let grid = Poset::product(&Poset::chain(n), &Poset::chain(k)).unwrap();
                assert_eq!(h_cnck(n, k), h_by_summation(&grid).unwrap());
            }
        }
        // the full-layer coefficient counts the product's down-sets
        let lam_d = DownSetLattice::enumerate(&lam_product).unwrap().len();
        let dia_d = DownSetLattice::enumerate(&dia_product).unwrap().len();
        assert_eq!(lam.a_full, big(lam_d as u64));
        assert_eq!(dia.a_full, big(dia_d as u64));
    }
    pass("07", "grid/lambda/diamond formulas match engine (k <= 5) and summation (k <= 3)", start);
}

#[test]
fn criterion_08_binary_cube_chain() {
    let start = Instant::now();
    let square = Poset::product(&Poset::chain(2), &Poset::chain(2)).unwrap();
    let cube = Poset::product(&square, &Poset::chain(2)).unwrap();
    let tesseract = Poset::product(&cube, &Poset::chain(2)).unwrap();
    assert_eq!(h_by_summation(&square).unwrap(), big(20));
    assert_eq!(DownSetLattice::enumerate(&cube).unwrap().len(), 20);
    assert_eq!(h_by_summation(&cube).unwrap(), big(168));
    assert_eq!(DownSetLattice::enumerate(&tesseract).unwrap().len(), 168);
    pass("08", "h(C2^2) = 20 = #D(C2^3) and h(C2^3) = 168 = #D(C2^4)", start);
}

#[test]
fn criterion_09_property_suite() {
    let start = Instant::now();
    let report = run_verify(&VerifyConfig::default());
    for line in report.lines() {
        println!("    {line}");
    }
    assert!(report.all_passed(), "property corpus found a disagreement");
    pass("09", "property corpus (63 classes on 5 elements + 200 random posets) is green", start);
}

#[test]
fn criterion_10_floor_term_closed_form() {
    let start = Instant::now();
    // independent oracle: the defining triple sum
    let floor_sum = |f: u64, k: u64| -> BigUint {
        let mut total = 0u128;
        for i in 1..=k - f {
            for j in 1..=k - f {
                for phi in 0..=f {
                    total += ((i + phi) * (j + phi)) as u128;
                }
            }
        }
        BigUint::from(total)
    };
    for k in 0..=30 {
        for f in 0..=k {
            assert_eq!(families::lambda_floor(f, k), floor_sum(f, k), "f={f}, k={k}");
        }
    }
    // a near-miss variant of the closed form (constants shifted by one)
    // must NOT reproduce the sum; it breaks first at f=1, k=2
    let shifted = |f: u64, k: u64| -> BigUint {
        let kf = BigUint::from(k + 1 - f);
        (BigUint::from(f * (f + 2) + 3 * (k + 2) * (k + 2)) * (f + 1) * kf.clone() * kf) / 12u32
    };
    assert_eq!(floor_sum(1, 2), big(5));
    assert_ne!(shifted(1, 2), floor_sum(1, 2), "the shifted variant must disagree");
    pass("10", "floor terms: closed form == triple sum for f <= k <= 30; shifted variant rejected", start);
}
