//! Command bodies. Each returns the full stdout text so the outputs
//! stay byte-stable and testable; the binary only maps errors to exit
//! codes.

use std::collections::BTreeMap;
use std::fmt;

use ordhom_core::downset::DownSetLattice;
use ordhom_core::families::h_product_chain;
use ordhom_core::gvs::surjective_count;
use ordhom_core::oracle::{brute_hom_count, constrained_hom_count, order_polynomial_value};
use ordhom_core::verify::{run_verify, VerifyConfig};
use ordhom_core::{h_by_summation, Poset};

use crate::expr::{parse_expr, PosetExpr};
use crate::tables::{self, Format, Table};

#[derive(Debug)]
pub enum CliError {
    /// Bad input: parse errors, inapplicable methods, range errors.
    Usage(String),
    /// A configured enumeration or search bound was exceeded.
    Bound(String),
    /// The verification corpus found a disagreement; the report text is
    /// still printed.
    VerifyFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Bound(_) => 2,
            CliError::VerifyFailed(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Bound(m) => write!(f, "{m}"),
            CliError::VerifyFailed(_) => write!(f, "verification failed"),
        }
    }
}

impl From<ordhom_core::Error> for CliError {
    fn from(e: ordhom_core::Error) -> CliError {
        match e {
            ordhom_core::Error::BoundExceeded { .. } | ordhom_core::Error::CarrierTooLarge { .. } => {
                CliError::Bound(e.to_string())
            }
            other => CliError::Usage(other.to_string()),
        }
    }
}

pub type CmdResult = Result<String, CliError>;

fn parse(text: &str) -> Result<PosetExpr, CliError> {
    parse_expr(text).map_err(|e| CliError::Usage(e.to_string()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Auto,
    Summation,
    Engine,
    Brute,
    OrderPoly,
    ProdC2,
}

/// A product expression whose last factor is a chain runs on the
/// level-by-level engine: everything before the chain is the base W.
fn engine_shape(expr: &PosetExpr) -> Option<(PosetExpr, usize)> {
    let factors = expr.product_factors()?;
    let (last, init) = factors.split_last()?;
    let &PosetExpr::Chain(k) = last else { return None };
    let w = if init.len() == 1 {
        init[0].clone()
    } else {
        PosetExpr::Product(init.to_vec())
    };
    Some((w, k))
}

pub fn cmd_h(text: &str, method: Method) -> CmdResult {
    let expr = parse(text)?;
    let (value, used) = match method {
        Method::Engine => match engine_shape(&expr) {
            Some((w, k)) => (h_product_chain(&w.eval()?, k)?, "engine"),
            None => {
                return Err(CliError::Usage(
                    "method 'engine' needs a product expression ending in a chain factor; \
                     applicable methods: summation, brute, orderpoly, prodc2"
                        .into(),
                ))
            }
        },
        Method::Summation => (h_by_summation(&expr.eval()?)?, "summation"),
        Method::Brute => {
            (brute_hom_count(&expr.eval()?, &Poset::chain(3))?.total, "brute")
        }
        Method::OrderPoly => (order_polynomial_value(&expr.eval()?, 3)?, "orderpoly"),
        Method::ProdC2 => (ordhom_core::oracle::h_by_c2_product(&expr.eval()?)?, "prodc2"),
        Method::Auto => match engine_shape(&expr) {
            Some((w, k)) => (h_product_chain(&w.eval()?, k)?, "engine"),
            None => {
                let p = expr.eval()?;
                match h_by_summation(&p) {
                    Ok(v) => (v, "summation"),
                    Err(ordhom_core::Error::BoundExceeded { .. }) => {
                        (brute_hom_count(&p, &Poset::chain(3))?.total, "brute")
                    }
                    Err(e) => return Err(e.into()),
                }
            }
        },
    };
    Ok(format!("{value}\nmethod: {used}\n"))
}

pub fn cmd_surjective(text: &str) -> CmdResult {
    let p = parse(text)?.eval()?;
    Ok(format!("{}\n", surjective_count(&p)?))
}

pub fn cmd_constrained(text: &str, fixes: &[(usize, u8)], show_elements: bool) -> CmdResult {
    let p = parse(text)?.eval()?;
    let mut fixed = BTreeMap::new();
    for &(id, level) in fixes {
        if id >= p.n() {
            return Err(CliError::Usage(format!(
                "element id {id} out of range; the poset has {} elements",
                p.n()
            )));
        }
        if let Some(old) = fixed.insert(id, level) {
            if old != level {
                return Err(CliError::Usage(format!(
                    "element {id} pinned to both {old} and {level}"
                )));
            }
        }
    }
    let count = constrained_hom_count(&p, &fixed)?;
    let mut out = String::new();
    if show_elements {
        for i in p.elements() {
            out.push_str(&format!("{i}\t{}\n", p.label(i)));
        }
    }
    out.push_str(&format!("{count}\n"));
    Ok(out)
}

pub fn cmd_downsets(text: &str, list: bool) -> CmdResult {
    let p = parse(text)?.eval()?;
    let lattice = DownSetLattice::enumerate(&p)?;
    if list {
        let mut out = String::new();
        for &d in lattice.sets() {
            out.push_str(&d.characteristic_string(p.n()));
            out.push('\n');
        }
        Ok(out)
    } else {
        Ok(format!("{}\n", lattice.len()))
    }
}

pub fn cmd_omega(text: &str, x: u64) -> CmdResult {
    let p = parse(text)?.eval()?;
    Ok(format!("{}\n", order_polynomial_value(&p, x)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Cnck,
    Lambda,
    Diamond,
    Hc2ck,
    Polycoeffs,
    C3c3grid,
}

impl Family {
    pub fn default_k_max(self) -> usize {
        match self {
            Family::Cnck | Family::C3c3grid => 5,
            _ => 10,
        }
    }
}

pub fn cmd_table(
    family: Family,
    n_max: Option<usize>,
    k_max: Option<usize>,
    format: Format,
) -> CmdResult {
    let k_max = k_max.unwrap_or(family.default_k_max());
    if k_max == 0 || k_max > tables::MAX_TABLE_K {
        return Err(CliError::Usage(format!(
            "--k-max must be between 1 and {}",
            tables::MAX_TABLE_K
        )));
    }
    let n_max = n_max.unwrap_or(4);
    if n_max == 0 || n_max > tables::MAX_TABLE_N {
        return Err(CliError::Usage(format!(
            "--n-max must be between 1 and {}",
            tables::MAX_TABLE_N
        )));
    }
    let table: Table = match family {
        Family::Cnck => tables::cnck_table(n_max, k_max),
        Family::Lambda => tables::lambda_table(k_max),
        Family::Diamond => tables::diamond_table(k_max),
        Family::Hc2ck => tables::hc2ck_table(k_max),
        Family::Polycoeffs => tables::polycoeffs_table(k_max),
        Family::C3c3grid => tables::c3c3grid_table(k_max),
    };
    Ok(table.render(format))
}

pub fn cmd_verify(max_size: usize, samples: usize, seed: u64) -> CmdResult {
    if !(6..=10).contains(&max_size) {
        return Err(CliError::Usage("--max-size must be between 6 and 10".into()));
    }
    let report = run_verify(&VerifyConfig { max_size, samples, seed });
    let mut out = report.lines().join("\n");
    out.push('\n');
    if report.all_passed() {
        out.push_str("all checks passed\n");
        Ok(out)
    } else {
        out.push_str("verification FAILED\n");
        Err(CliError::VerifyFailed(out))
    }
}
