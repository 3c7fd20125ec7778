use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(String, String),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("not a proper nonzero ideal")]
    NotProperNonzero,
    #[error("infinite quotient unsupported")]
    InfiniteQuotient,
    #[error("unit ideal: the quotient is the zero ring")]
    UnitIdeal,
    #[error("operation `{0}` requires an infinite ring")]
    FiniteRing(&'static str),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("cannot parse {what} from {input:?}: {reason}")]
    Parse {
        what: &'static str,
        input: String,
        reason: String,
    },
    #[error("not in Upsilon")]
    NotInUpsilon,
    #[error("empty set")]
    EmptySet,
    #[error("not an extremal delta set")]
    NotExtremal,
    #[error("group of order {order} exceeds the cap {cap}")]
    CapExceeded { order: u128, cap: u64 },
    #[error("code is not in G~ for d = {0}")]
    NotInGTilde(usize),
    #[error("code is not canonical")]
    NotCanonical,
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unbound variable `{name}` at byte {pos}")]
    UnboundVariable { name: String, pos: usize },
    #[error("unassigned symbol `{0}`")]
    Unassigned(String),
    #[error("arity mismatch: expected {expected} free variable(s), found {found}")]
    Arity { expected: usize, found: usize },
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
