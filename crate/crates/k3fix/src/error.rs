use std::fmt;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Inversion of zero in a cyclotomic field.
    DivisionByZero,
    /// A coordinate vector of the wrong length for its conductor.
    BadCoordinates { conductor: u32, expected: usize, got: usize },
    /// An operation that needs a non-trivial automorphism got order < 2.
    InvalidOrder(u32),
    /// Lattice data violating a structural invariant (shape, symmetry, parity).
    InvalidLattice(String),
    /// A lattice name that the named constructor does not recognize.
    UnknownLattice(String),
    /// A local eigenvalue pair violating i + j = 1 (mod order).
    InvalidPointType { order: u32, i: u32, j: u32 },
    /// Lefschetz point term requested for a point lying on a fixed curve.
    SingularTerm { order: u32, i: u32, j: u32 },
    /// Rank deduction admits no solution.
    InfeasibleRanks(String),
    /// Power of the automorphism is the identity.
    IdentityPower { order: u32, exponent: u32 },
    /// Exact elimination failed for the requested variable split.
    Elimination(String),
    /// Scenario data is malformed or internally inconsistent.
    InvalidScenario(String),
    /// The integer search cannot be given finite ranges.
    UnboundedSearch(String),
    /// Weierstrass model violating its shape invariants.
    InvalidModel(String),
    /// Monomial weights are not uniform; each entry is (label, weight mod n).
    NonInvariant(Vec<(String, u32)>),
    /// An internal invariant failed; indicates a bug, not bad input.
    Internal(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DivisionByZero => write!(f, "inversion of zero"),
            Error::BadCoordinates { conductor, expected, got } => write!(
                f,
                "conductor {conductor} needs {expected} coordinates, got {got}"
            ),
            Error::InvalidOrder(n) => write!(f, "order {n} is not a valid automorphism order here"),
            Error::InvalidLattice(msg) => write!(f, "invalid lattice: {msg}"),
            Error::UnknownLattice(name) => write!(f, "unknown lattice name `{name}`"),
            Error::InvalidPointType { order, i, j } => write!(
                f,
                "({i},{j}) is not a fixed-point type for order {order}: i + j must be 1 mod {order}"
            ),
            Error::SingularTerm { order, i, j } => write!(
                f,
                "point type ({i},{j}) of order {order} lies on a fixed curve; its Lefschetz term is singular"
            ),
            Error::InfeasibleRanks(msg) => write!(f, "rank deduction infeasible: {msg}"),
            Error::IdentityPower { order, exponent } => write!(
                f,
                "power {exponent} of an order-{order} automorphism is the identity"
            ),
            Error::Elimination(msg) => write!(f, "elimination failed: {msg}"),
            Error::InvalidScenario(msg) => write!(f, "invalid scenario: {msg}"),
            Error::UnboundedSearch(msg) => write!(f, "search not finitely bounded: {msg}"),
            Error::InvalidModel(msg) => write!(f, "invalid Weierstrass model: {msg}"),
            Error::NonInvariant(weights) => {
                write!(f, "equation is not quasi-invariant; monomial weights:")?;
                for (label, w) in weights {
                    write!(f, " {label}:{w}")?;
                }
                Ok(())
            }
            Error::Internal(msg) => write!(f, "internal inconsistency: {msg}"),
        }
    }
}

impl std::error::Error for Error {}
