use thiserror::Error;

use crate::fourball::CenterLocation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("non-finite coordinate or length")]
    NonFinite,

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("sides {sides:?} violate the triangle inequality")]
    NoTriangle { sides: [f64; 3] },

    #[error("edge lengths are not realizable: {0}")]
    NotRealizable(String),

    #[error("not a 4-ball tetrahedron (opposite-edge sum residual {residual:.3e})")]
    NotFourBall { residual: f64 },

    #[error("not a path tetrahedron for the given vertex ordering")]
    NotPath,

    #[error("midsphere center is not interior to the tetrahedron ({0:?})")]
    CenterNotInterior(CenterLocation),

    #[error("apex degenerates: l4 = {l4} does not exceed the Soddy radius l0 = {l0}")]
    ApexDegenerate { l0: f64, l4: f64 },

    /// `solver` is set when an iterative solve gave up rather than a
    /// geometric obstruction being detected.
    #[error("not constructible: {reason}")]
    NotConstructible { reason: String, solver: bool },

    #[error("circles are not mutually externally tangent (residual {residual:.3e})")]
    BadConfiguration { residual: f64 },

    #[error("parameter out of domain: {0}")]
    OutOfDomain(String),
}

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    /// A geometric precondition failed.
    Precondition,
    /// An iterative solver did not converge.
    NonConvergence,
}

impl Error {
    pub fn category(&self) -> ErrorCategory {
        match self {
            Error::NoSolution(_) | Error::NotConstructible { solver: true, .. } => {
                ErrorCategory::NonConvergence
            }
            _ => ErrorCategory::Precondition,
        }
    }
}
