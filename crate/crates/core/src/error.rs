use num_complex::Complex64;
use thiserror::Error;

use crate::params::QuasiParity;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{param} = {value} is neither real nor on the allowed critical line")]
    InvalidBranch { param: &'static str, value: Complex64 },

    #[error("gamma = {0} must be positive and different from 1")]
    InvalidGamma(f64),

    #[error("epsilon = {0} must be finite and non-negative")]
    InvalidEpsilon(f64),

    #[error("epsilon = 0 puts the lambda(lambda-1) singularity on the real axis")]
    SingularOnAxis,

    #[error("coordinate map did not converge at x = {x} (last residual {residual:e})")]
    NoConvergence { x: f64, residual: f64 },

    #[error("grid is not symmetric about x = 0")]
    AsymmetricGrid,

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("sinh u vanishes at x = {x} while the singular coupling is nonzero")]
    SingularPoint { x: f64 },

    #[error("tracked logarithm jumped between adjacent samples near x = {x}; refine the grid")]
    BranchJump { x: f64 },

    #[error("state n = {n} is outside the bound-state window")]
    OutOfWindow { n: u32 },

    #[error("state (n = {n}, q = {q}) is not normalizable")]
    NotNormalizable { n: u32, q: QuasiParity },

    #[error("tail estimate {tail:e} exceeds tolerance for pseudo-norm {value}")]
    TailTooLarge { tail: f64, value: Complex64 },

    #[error("complex energies of (n = {n}) fail the conjugate pairing check (defect {defect:e})")]
    InconsistentPairing { n: u32, defect: f64 },

    #[error("Jacobi degree {0} exceeds the supported maximum of 64")]
    JacobiDegree(u32),

    #[error("shooting iterate left the search box around seed {seed} (reached {energy})")]
    BasinEscape { seed: Complex64, energy: Complex64 },

    #[error("shooting did not converge from seed {seed} after {iterations} iterations (residual {residual:e})")]
    ShootNoConvergence {
        seed: Complex64,
        iterations: usize,
        residual: f64,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Stable identifier used in machine-parsable diagnostics.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidBranch { .. } => "InvalidBranch",
            Error::InvalidGamma(_) => "InvalidGamma",
            Error::InvalidEpsilon(_) => "InvalidEpsilon",
            Error::SingularOnAxis => "SingularOnAxis",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::AsymmetricGrid => "AsymmetricGrid",
            Error::InvalidGrid(_) => "InvalidGrid",
            Error::SingularPoint { .. } => "SingularPoint",
            Error::BranchJump { .. } => "BranchJump",
            Error::OutOfWindow { .. } => "OutOfWindow",
            Error::NotNormalizable { .. } => "NotNormalizable",
            Error::TailTooLarge { .. } => "TailTooLarge",
            Error::InconsistentPairing { .. } => "InconsistentPairing",
            Error::JacobiDegree(_) => "JacobiDegree",
            Error::BasinEscape { .. } => "BasinEscape",
            Error::ShootNoConvergence { .. } => "ShootNoConvergence",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }

    /// True for failures of a numerical solver, as opposed to bad input.
    pub fn is_solver_failure(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. }
                | Error::BranchJump { .. }
                | Error::TailTooLarge { .. }
                | Error::InconsistentPairing { .. }
                | Error::BasinEscape { .. }
                | Error::ShootNoConvergence { .. }
                | Error::SingularPoint { .. }
        )
    }
}
