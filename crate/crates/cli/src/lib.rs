//! Library half of the command-line front end: the expression grammar,
//! the table renderers, and the command bodies, kept separate from the
//! binary so their outputs can be tested byte for byte.

pub mod commands;
pub mod expr;
pub mod tables;

pub use commands::{CliError, Family, Method};
pub use expr::{parse_expr, PosetExpr};
pub use tables::Format;
