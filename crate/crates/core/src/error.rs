use crate::poset::ElementSet;

/// Violation of one of the three partial-order axioms, with a witness.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PosetViolation {
    #[error("relation is not reflexive: missing ({0}, {0})")]
    NotReflexive(usize),
    #[error("relation is not antisymmetric: both ({0}, {1}) and ({1}, {0}) present")]
    NotAntisymmetric(usize, usize),
    #[error("relation is not transitive: ({0}, {1}) and ({1}, {2}) present, ({0}, {2}) missing")]
    NotTransitive(usize, usize, usize),
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("carrier too large: {size} elements (limit {limit})")]
    CarrierTooLarge { size: usize, limit: usize },

    #[error("enumeration bound exceeded while {what} (limit {limit})")]
    BoundExceeded { what: &'static str, limit: u128 },

    #[error("invalid poset: {0}")]
    InvalidPoset(#[from] PosetViolation),

    #[error("{set} is not a down-set")]
    NotDownSet { set: ElementSet },

    #[error("{set} is not an up-set")]
    NotUpSet { set: ElementSet },

    #[error("{set} is not contained in the carrier")]
    OutOfCarrier { set: ElementSet },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("load error: {0}")]
    Load(String),
}

pub type Result<T> = std::result::Result<T, Error>;
