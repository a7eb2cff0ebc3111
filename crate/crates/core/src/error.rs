use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("prime {0} exceeds the supported maximum 2^31 - 1")]
    PrimeTooLarge(u64),

    #[error("invalid prime window {lo}..{hi}")]
    InvalidWindow { lo: u64, hi: u64 },

    #[error("binomial C({a}, {b}) mod {p}: top argument must satisfy 0 <= a < p")]
    BinomialOutOfRange { a: i64, b: i64, p: u32 },

    #[error("Bernoulli index {m} is not supported modulo {p} (need m <= p - 2)")]
    BernoulliOutOfRange { m: u64, p: u32 },

    #[error("weight {k} is too large for prime {p} (need {bound})")]
    WeightTooLarge { k: u32, p: u32, bound: &'static str },

    #[error("invalid parameters k={k}, n={n}, i={i}: need {rule}")]
    InvalidParameters {
        k: u32,
        n: u32,
        i: u32,
        rule: &'static str,
    },

    #[error("naive oracle limited to depth <= 6 and p <= 101 (got depth {depth}, p = {p})")]
    OracleCostGuard { depth: usize, p: u32 },

    #[error("invalid index {text:?}: {reason}")]
    ParseIndex { text: String, reason: String },

    #[error("worker count must be at least 1")]
    NoWorkers,

    #[error("at p = {p}: {source}")]
    AtPrime {
        p: u32,
        #[source]
        source: Box<Error>,
    },

    #[error("cache file {path}: {source}")]
    Cache {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn at_prime(self, p: u32) -> Self {
        match self {
            e @ Error::AtPrime { .. } => e,
            e => Error::AtPrime {
                p,
                source: Box::new(e),
            },
        }
    }
}
