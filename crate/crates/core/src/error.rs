use thiserror::Error;

use crate::symbolic::SymbolicError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
    #[error("rank must be at least 2, got m = {0}")]
    RankTooSmall(usize),
    #[error("{what} index {index} out of range {min}..={max}")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        min: usize,
        max: usize,
    },
    #[error("matrix dimensions do not match: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("matrix is not {expected} unitriangular")]
    NotUnitriangular { expected: &'static str },
    #[error("pivot in column {column} vanishes identically")]
    NotInCell { column: usize },
    #[error("parameter `{0}` is zero")]
    ZeroParameter(String),
    #[error("point is not in the domain: {0} vanishes")]
    NotInDomain(String),
    #[error("point is not in the chart: {0} vanishes")]
    NotInOmega(String),
    #[error("operator is singular")]
    NotInvertible,
    #[error("hbar must be nonzero")]
    ZeroHbar,
    #[error("no critical point found after {starts} starts")]
    NonConvergence { starts: usize },
    #[error("root finder did not converge after {sweeps} sweeps")]
    RootsDidNotConverge { sweeps: usize },
    #[error("{what} supports m <= {max}, got m = {m}")]
    ResourceLimit {
        what: &'static str,
        m: usize,
        max: usize,
    },
    #[error("spectra have different sizes: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("malformed JSON: {0}")]
    Json(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_rank(m: usize) -> Result<()> {
    if m < 2 {
        return Err(Error::RankTooSmall(m));
    }
    Ok(())
}

pub(crate) fn check_index(what: &'static str, index: usize, min: usize, max: usize) -> Result<()> {
    if index < min || index > max {
        return Err(Error::IndexOutOfRange {
            what,
            index,
            min,
            max,
        });
    }
    Ok(())
}
