use core::fmt;

/// Every failure the library can report.
///
/// Apart from [`Error::CostExceeded`] these are input errors: the caller
/// handed over something malformed or outside the supported range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// The Cayley table is not an `n x n` array.
    MalformedTable { row: usize, len: usize, n: usize },
    /// A table failed closure or associativity.
    NotASemigroup(crate::semigroup::Violation),
    /// Element index outside `0..n`.
    ElementOutOfRange { idx: u32, n: usize },
    /// Folding the empty word; semigroups carry no identity.
    EmptyWord,
    /// Semigroup would exceed the configured element cap.
    TooLarge { n: usize, limit: usize },
    UnknownFamily,
    ParameterOutOfRange { param: usize, min: usize, max: usize },
    /// Finite sets are nonempty.
    EmptySet,
    /// Set members must lie in `1..=64`.
    MemberOutOfRange { value: u64 },
    /// A block sequence breaks `max H_n < min H_{n+1}` at this index.
    BlockOrder { index: usize },
    NoBlocks,
    TooManyBlocks { r: usize, limit: usize },
    UniverseTooLarge { n: usize, limit: usize },
    /// Witness word length does not equal the index tuple length plus one.
    LengthMismatch { word: usize, indices: usize },
    /// Index tuples must be strictly increasing positive integers.
    IndicesNotIncreasing,
    /// A witness with no indices (`m = 0`).
    EmptyWitness,
    /// Functions of a family disagree on their table length.
    DomainMismatch { expected: usize, found: usize },
    /// A compression block reads a position past the function's table.
    BeyondDomain { position: u32, r_max: usize },
    /// A witness index exceeds the number of blocks in the plan.
    IndexBeyondPlan { index: u32, blocks: usize },
    EmptyFamily,
    /// A sequence table with no positions.
    EmptyTable,
    FamilyTooLarge { size: usize, k: usize },
    /// The ambient semigroup was not built by `direct_product`.
    NotAProduct,
    /// Target set is empty where a nonempty one is required.
    EmptyTarget,
    BadCoordinate(u8),
    /// Estimated search size exceeds the budget.
    CostExceeded { estimate: u128, limit: u128 },
    /// A constructed witness failed its own verification.
    Internal(&'static str),
}

impl Error {
    pub fn is_cost_guard(&self) -> bool {
        matches!(self, Error::CostExceeded { .. })
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::MalformedTable { row, len, n } => {
                write!(f, "malformed table: row {row} has {len} entries, expected {n}")
            }
            Error::NotASemigroup(v) => write!(f, "not a semigroup: {v}"),
            Error::ElementOutOfRange { idx, n } => {
                write!(f, "element {idx} out of range for semigroup of order {n}")
            }
            Error::EmptyWord => f.write_str("cannot fold the empty word"),
            Error::TooLarge { n, limit } => {
                write!(f, "semigroup of order {n} exceeds the limit {limit}")
            }
            Error::UnknownFamily => f.write_str("unknown semigroup family"),
            Error::ParameterOutOfRange { param, min, max } => {
                write!(f, "parameter {param} outside supported range {min}..={max}")
            }
            Error::EmptySet => f.write_str("finite sets must be nonempty"),
            Error::MemberOutOfRange { value } => {
                write!(f, "set member {value} outside 1..=64")
            }
            Error::BlockOrder { index } => {
                write!(f, "block {index} does not start after the previous block ends")
            }
            Error::NoBlocks => f.write_str("block sequence has no blocks"),
            Error::TooManyBlocks { r, limit } => {
                write!(f, "{r} blocks exceed the limit {limit}")
            }
            Error::UniverseTooLarge { n, limit } => {
                write!(f, "universe bound {n} exceeds the limit {limit}")
            }
            Error::LengthMismatch { word, indices } => write!(
                f,
                "word has {word} letters but {indices} indices need {}",
                indices + 1
            ),
            Error::IndicesNotIncreasing => {
                f.write_str("indices must be strictly increasing positive integers")
            }
            Error::EmptyWitness => f.write_str("witness needs at least one index"),
            Error::DomainMismatch { expected, found } => {
                write!(f, "function table length {found}, family uses {expected}")
            }
            Error::BeyondDomain { position, r_max } => {
                write!(f, "position {position} lies beyond the table (length {r_max})")
            }
            Error::IndexBeyondPlan { index, blocks } => {
                write!(f, "witness index {index} exceeds the {blocks} planned blocks")
            }
            Error::EmptyFamily => f.write_str("function family is empty"),
            Error::EmptyTable => f.write_str("function table needs at least one position"),
            Error::FamilyTooLarge { size, k } => {
                write!(f, "family has {size} functions, more than k = {k}")
            }
            Error::NotAProduct => f.write_str("ambient semigroup is not a direct product"),
            Error::EmptyTarget => f.write_str("target set is empty"),
            Error::BadCoordinate(c) => write!(f, "coordinate must be 1 or 2, got {c}"),
            Error::CostExceeded { estimate, limit } => {
                write!(f, "search cost estimate {estimate} exceeds budget {limit}")
            }
            Error::Internal(msg) => write!(f, "internal check failed: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
