//! Counting order homomorphisms from finite posets into the 3-chain.
//!
//! The crate provides a poset toolkit ([`poset`]), down-set lattice
//! enumeration with the summation formula ([`downset`]), generalized
//! vertical-sum decompositions with the coefficient recursion ([`gvs`]),
//! production solvers for product-with-chain and staircase families
//! ([`families`]), and independent brute-force oracles ([`oracle`]).

pub mod downset;
pub mod error;
pub mod families;
pub mod gvs;
pub mod oracle;
pub mod poset;
pub mod verify;

pub use downset::{h_by_summation, DownSetLattice};
pub use error::{Error, Result};
pub use poset::{hom_poset, ElementSet, Poset};
