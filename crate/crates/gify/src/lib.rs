//! Induced matrix operator spaces over finite groups.
//!
//! Given a finite group `G`, a central subgroup `H`, and a matrix space
//! `X ⊂ M_d(F)` carrying a unitary `H`-action, this crate constructs the
//! induced space `X_G` of `H`-equivariant functions `G → X`, realizes it as
//! a structured subspace `G(X) ⊂ M_m(X)` of block matrices (`m = |G/H|`),
//! and verifies its algebraic and isometric identities numerically.
//!
//! The construction generalizes the complexification of a real space
//! (`G = Z_4`, `H = Z_2` acting by sign) and the quaternification
//! (`G = Q_8`, `H = Z_2`); see the crate examples for worked demos of each
//! capability, and the `gify` binary for a command-line front end.

pub mod catalog;
pub mod group;
pub mod induced;
pub mod jsonio;
pub mod linalg;
pub mod matrix_form;
pub mod norm;
pub mod report;
pub mod space;
pub mod verify;

/// Absolute entrywise tolerance used for matrix identities.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Relative singular-value threshold for rank and null-space decisions.
pub const NULLSPACE_RTOL: f64 = 1e-9;
/// Tolerance for identities expected to cancel exactly in floating point.
pub const STRICT_TOL: f64 = 1e-12;
/// Default base seed for sampled checks.
pub const DEFAULT_SEED: u64 = 42;
/// Default number of seeded samples per check.
pub const DEFAULT_SAMPLES: usize = 100;
/// Default deepest matrix level exercised by sampled norm checks.
pub const DEFAULT_MAX_LEVEL: usize = 3;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("subgroup is not central: element {elem} does not commute with {with}")]
    NotCentral { elem: usize, with: usize },
    #[error("group order {order} exceeds automorphism search cap {cap} (set GIFY_MAX_GROUP_ORDER to raise it)")]
    CapExceeded { order: usize, cap: usize },
    #[error("invalid automorphism set: {0}")]
    InvalidGamma(String),
    #[error("invalid modular space: {0}")]
    InvalidSpace(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is not a member of the space (residual {residual:.3e})")]
    NotMember { residual: f64 },
    #[error("map is not an intertwiner (action element {h}, basis index {basis}, residual {residual:.3e})")]
    NotIntertwiner {
        h: usize,
        basis: usize,
        residual: f64,
    },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("non-finite value: {0}")]
    NonFinite(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the CLI: 2 parse, 3 precondition, 4 data.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) => 2,
            Error::NotSubgroup(_)
            | Error::NotCentral { .. }
            | Error::CapExceeded { .. }
            | Error::InvalidGamma(_)
            | Error::Precondition(_) => 3,
            _ => 4,
        }
    }
}
