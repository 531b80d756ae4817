use thiserror::Error;

/// Errors raised by the library. Every variant carries enough context to be
/// reported on the command line without further lookup.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cannot parse lattice expression `{expr}`: {reason}")]
    Parse { expr: String, reason: String },

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("Gram matrix is degenerate")]
    Degenerate,

    #[error("lattice is not 2-elementary (invariant factors {factors:?}); delta is undefined")]
    NotTwoElementary { factors: Vec<String> },

    #[error("discriminant group has 2^{exponent} classes, above the enumeration cap of 2^{cap}")]
    EnumerationCap { exponent: usize, cap: usize },

    #[error("division by zero")]
    DivisionByZero,

    #[error("conductor mismatch: {left} vs {right}")]
    ConductorMismatch { left: u32, right: u32 },

    #[error("invalid conductor {0}")]
    InvalidConductor(u32),

    #[error("invalid local type ({i},{j}) for order {n}: {reason}")]
    InvalidLocalType {
        i: i64,
        j: i64,
        n: u32,
        reason: String,
    },

    #[error("unsupported order {0}")]
    UnsupportedOrder(u32),

    #[error("invalid Picard number {rank} for order {order}: {reason}")]
    InvalidRank {
        order: u32,
        rank: u32,
        reason: String,
    },

    #[error("Lefschetz system for order {order} and Picard number {rank} is inconsistent")]
    InconsistentSystem { order: u32, rank: u32 },

    #[error("lattice of rank {0} cannot be a Neron-Severi lattice here (rank must be at most 20)")]
    RankTooLarge(usize),

    #[error("lattice is outside the classified families: {0}")]
    OutsideClassification(String),

    #[error("elementarity mismatch: {0}")]
    ElementarityMismatch(String),

    #[error("discriminant of the Weierstrass model vanishes identically")]
    VanishingDiscriminant,

    #[error(
        "unclassifiable valuation triple (v(c4), v(c6), v(disc)) = ({c4}, {c6}, {disc}) at {place}"
    )]
    Unclassifiable {
        place: String,
        c4: String,
        c6: String,
        disc: String,
    },

    #[error("fiber configuration is not a valid K3 configuration: {0}")]
    InvalidConfiguration(String),

    #[error("claimed lattice has rank {rank} but the fibers already need {needed}; Mordell-Weil rank would be {mw}")]
    NegativeMordellWeil { rank: usize, needed: i64, mw: i64 },

    #[error("claimed lattice requires a fiber with root lattice {0} which is not present")]
    MissingSummand(String),

    #[error(
        "equation is not invariant: monomial {monomial} scales by {found}, expected {expected}"
    )]
    NotInvariant {
        monomial: String,
        found: String,
        expected: String,
    },

    #[error("search guard exceeded: {0}")]
    GuardExceeded(String),

    #[error("matrix is not an isometry of the lattice")]
    NotAnIsometry,

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
