use thiserror::Error;

use crate::weights::RSLabel;

/// Everything that can go wrong inside the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("(u,v) = ({u},{v}) is not nondegenerate-admissible: need u,v >= 3 and gcd(u,v) = 1")]
    NotAdmissible { u: i64, v: i64 },
    #[error("label {0} is not in the highest-weight set for this level")]
    NotInSigma(RSLabel),
    #[error("label {0} is not in the relaxed (all s_i >= 0) set for this level")]
    NotInfinite(RSLabel),
    #[error("label {0} is not leftmost in its spectral-flow orbit")]
    NotLeftmost(RSLabel),
    #[error("label {0} is not of type 3")]
    NotType3(RSLabel),
    #[error("non-dominant finite weight [{0},{1}]")]
    NotDominant(i64, i64),
    #[error("weight [{0},{1},{2}] is not integrable at level {3}")]
    NotIntegrable(i64, i64, i64, i64),
    #[error("conjugation needs an untwisted label, got flow {0}")]
    Twisted(String),
    #[error("the conjugate of the twisted module on {0} has an infinite-dimensional top space")]
    InfiniteTopSpace(RSLabel),
    #[error("kernel denominator vanishes: {0} is a gap (nonsimple) standard label")]
    GapDivergence(String),
    #[error("singular charge: some c_i is an integer")]
    SingularCharge,
    #[error("oracle residual {residual:e} exceeds tolerance")]
    OracleFailure { residual: f64 },
    #[error("resolution sum did not stabilise within depth {0}")]
    NotStabilised(i64),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
