use thiserror::Error;

/// Everything that can go wrong in this crate.
///
/// Input problems (bad syntax, a subgroup of the wrong order, ...) are kept
/// apart from [`Error::Invariant`], which signals a bug: a mathematical fact
/// the library relies on turned out to be false for some input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("not a polarizing-degree subgroup: order {order} but d = {d}")]
    NotPolarizingDegree { order: u64, d: u64 },

    #[error("no pushforward polarization: subgroup is not isotropic for the commutator pairing")]
    NotIsotropic,

    #[error("subgroup is not contained in K(L)")]
    OutsideKernel,

    #[error("no decomposition of K(L) compatible with the subgroup was found")]
    NoCompatibleBasis,

    #[error("inconsistent ramification: genus {genus} with {fixed_points} fixed points has no integral quotient")]
    InconsistentRamification { genus: u64, fixed_points: u64 },

    #[error("group of order {order} exceeds the search bound {bound}")]
    BoundExceeded { order: usize, bound: usize },

    #[error("no smooth hyperelliptic curves are counted for d = {0} (only 1 <= d <= 4 is nonzero)")]
    NoHyperellipticCurves(u64),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }

    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Invariant(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
