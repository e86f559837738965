use std::fmt;

use num_bigint::BigInt;

use crate::chains::Chain;

/// Witness that a right-hand side is not in the integer column span of a
/// matrix, read off its Smith normal form `U·A·V = D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obstruction {
    /// Row of `D` at which solvability fails.
    pub row: usize,
    /// Diagonal entry `d_row` (zero when `row` is past the rank).
    pub divisor: BigInt,
    /// Entry `(U·b)_row` that `divisor` fails to divide.
    pub residue: BigInt,
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if num_traits::Zero::is_zero(&self.divisor) {
            write!(f, "row {} of U*b is {} but D has a zero row there", self.row, self.residue)
        } else {
            write!(f, "d_{} = {} does not divide (U*b)_{} = {}", self.row, self.divisor, self.row, self.residue)
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Malformed input: bad indices, missing simplices, ragged data.
    #[error("structural error: {0}")]
    Structural(String),
    /// Well-formed input outside an operation's domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// `Ax = b` has no integer solution; for boundary systems this means
    /// the chain is not a boundary.
    #[error("no integer solution (not a boundary): {0}")]
    NoIntegerSolution(Obstruction),
    /// An explicit enumeration or search budget was exceeded.
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    /// Search budget exhausted before optimality could be certified; carries
    /// the best feasible point found.
    #[error("capacity exceeded, best incumbent (mass {mass}) is not certified optimal: {message}")]
    NonOptimal { message: String, incumbent: Chain, mass: f64 },
    /// Error raised inside a named pipeline stage.
    #[error("stage {stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

/// Coarse classification used for exit codes and report fields.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Structural,
    Domain,
    Capacity,
}

impl Error {
    pub fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn capacity(msg: impl Into<String>) -> Self {
        Error::Capacity(msg.into())
    }

    pub fn in_stage(self, stage: &'static str) -> Self {
        Error::Stage { stage, source: Box::new(self) }
    }

    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Structural(_) => ErrorKind::Structural,
            Error::Domain(_) | Error::NoIntegerSolution(_) => ErrorKind::Domain,
            Error::Capacity(_) | Error::NonOptimal { .. } => ErrorKind::Capacity,
            Error::Stage { source, .. } => source.kind(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
