use clap::{Parser, Subcommand, ValueEnum};

use ordhom_cli::commands::{self, CliError, Family, Method};
use ordhom_cli::tables::Format;

/// Counting order homomorphisms from finite posets into the 3-chain.
///
/// Poset expressions: `C<n>` chain, `A<n>` antichain, `L` the
/// two-under-one poset, `D` the diamond, `p*q` product, `p^q` ordinal
/// sum (p below q), `p+q` direct sum, `H(p,q)` the poset of monotone
/// maps, `dual(p)`, `file:<path>` (JSON poset file), parentheses.
/// Precedence: `*` over `^` over `+`.
///
/// Exit codes: 0 success, 1 usage or parse error, 2 enumeration bound
/// exceeded, 3 verification failure.
#[derive(Parser)]
#[command(name = "ordhom", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Count homomorphisms into the 3-chain
    H {
        expr: String,
        /// auto = engine for products ending in a chain, else summation,
        /// else brute force
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
    },
    /// Count surjective homomorphisms onto the 3-chain
    Surjective { expr: String },
    /// Count homomorphisms into the 3-chain with pinned values
    Constrained {
        expr: String,
        /// Pin an element (by id) to a level, e.g. --fix 0=1; repeatable
        #[arg(long = "fix", value_name = "ID=LEVEL")]
        fixes: Vec<String>,
        /// Print the id -> element-name table before the count
        #[arg(long)]
        show_elements: bool,
    },
    /// Count or list the down-sets of a poset
    Downsets {
        expr: String,
        /// Print the number of down-sets (the default)
        #[arg(long, conflicts_with = "list")]
        count: bool,
        /// Print one 0/1 characteristic line per down-set, in
        /// enumeration order
        #[arg(long)]
        list: bool,
    },
    /// Evaluate the order polynomial at an integer
    Omega { expr: String, x: u64 },
    /// Emit a coefficient table for one of the built-in families
    Table {
        family: FamilyArg,
        /// Largest chain length n (cnck only)
        #[arg(long)]
        n_max: Option<usize>,
        /// Largest level k (default depends on the family)
        #[arg(long)]
        k_max: Option<usize>,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
    },
    /// Replay the cross-route property corpus; nonzero exit on any
    /// disagreement
    Verify {
        /// Largest random poset size (6..=10)
        #[arg(long, default_value_t = 8)]
        max_size: usize,
        /// Number of random posets sampled
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 20210)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Auto,
    Summation,
    Engine,
    Brute,
    Orderpoly,
    Prodc2,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Auto => Method::Auto,
            MethodArg::Summation => Method::Summation,
            MethodArg::Engine => Method::Engine,
            MethodArg::Brute => Method::Brute,
            MethodArg::Orderpoly => Method::OrderPoly,
            MethodArg::Prodc2 => Method::ProdC2,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Cnck,
    Lambda,
    Diamond,
    Hc2ck,
    Polycoeffs,
    C3c3grid,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::Cnck => Family::Cnck,
            FamilyArg::Lambda => Family::Lambda,
            FamilyArg::Diamond => Family::Diamond,
            FamilyArg::Hc2ck => Family::Hc2ck,
            FamilyArg::Polycoeffs => Family::Polycoeffs,
            FamilyArg::C3c3grid => Family::C3c3grid,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
    Text,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
            FormatArg::Text => Format::Text,
        }
    }
}

fn parse_fix(text: &str) -> Result<(usize, u8), CliError> {
    let bad = || CliError::Usage(format!("--fix expects ID=LEVEL with LEVEL in 1..=3, got '{text}'"));
    let (id, level) = text.split_once('=').ok_or_else(bad)?;
    let id: usize = id.trim().parse().map_err(|_| bad())?;
    let level: u8 = level.trim().parse().map_err(|_| bad())?;
    if !(1..=3).contains(&level) {
        return Err(bad());
    }
    Ok((id, level))
}

fn dispatch(cli: Cli) -> Result<String, CliError> {
    match cli.cmd {
        Cmd::H { expr, method } => commands::cmd_h(&expr, method.into()),
        Cmd::Surjective { expr } => commands::cmd_surjective(&expr),
        Cmd::Constrained { expr, fixes, show_elements } => {
            let fixes: Vec<(usize, u8)> =
                fixes.iter().map(|f| parse_fix(f)).collect::<Result<_, _>>()?;
            commands::cmd_constrained(&expr, &fixes, show_elements)
        }
        Cmd::Downsets { expr, count: _, list } => commands::cmd_downsets(&expr, list),
        Cmd::Omega { expr, x } => commands::cmd_omega(&expr, x),
        Cmd::Table { family, n_max, k_max, format } => {
            commands::cmd_table(family.into(), n_max, k_max, format.into())
        }
        Cmd::Verify { max_size, samples, seed } => commands::cmd_verify(max_size, samples, seed),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match dispatch(cli) {
        Ok(out) => print!("{out}"),
        Err(CliError::VerifyFailed(out)) => {
            print!("{out}");
            std::process::exit(3);
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
