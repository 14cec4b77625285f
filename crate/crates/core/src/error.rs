use num_bigint::BigInt;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid invariant factor {0}: cyclic factors must have order at least 2")]
    InvalidInvariant(i64),

    #[error("unknown group `{name}`; available: {available}")]
    CatalogMiss { name: String, available: String },

    #[error("cannot parse group spec: {0}")]
    Parse(String),

    #[error("operands live over different groups")]
    GroupMismatch,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("not a lattice: cokernel has torsion {0:?}")]
    NotALattice(Vec<BigInt>),

    #[error("presentation deficiency: {0}")]
    PresentationDeficiency(String),

    #[error("group order {order} exceeds the configured bound {bound}")]
    OrderBound { order: usize, bound: usize },

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("search exhausted: {0}")]
    SearchExhausted(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
