//! Shared fixtures for the benchmark targets.

use ordhom_core::Poset;

/// The 3x3 grid C3 x C3.
pub fn grid33() -> Poset {
    Poset::product(&Poset::chain(3), &Poset::chain(3)).unwrap()
}

/// The 27-element cube C3 x C3 x C3.
pub fn cube333() -> Poset {
    Poset::product(&grid33(), &Poset::chain(3)).unwrap()
}
