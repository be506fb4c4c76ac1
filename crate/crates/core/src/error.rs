use thiserror::Error;

use crate::linalg::RatMatrix;

/// Everything that can go wrong in the exact engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("no t <= {cap} with M^t = I (mod {modulus})")]
    OrderNotFound { modulus: String, cap: String },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix must be square and non-empty")]
    NotSquare,

    #[error("defining polynomial must be monic with degree >= 1")]
    NotMonic,
    #[error("defining polynomial is not squarefree")]
    NotSquarefree,
    #[error("defining polynomial has no real root")]
    NoRealRoot,
    #[error("root hint [{lo}, {hi}] does not isolate exactly one real root")]
    BadRootHint { lo: String, hi: String },
    #[error("polynomial is reducible over Q: {0}")]
    ReduciblePolynomial(String),
    #[error("polynomial could not be certified irreducible")]
    NotCertified,
    #[error("elements belong to different number fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,

    #[error("generators do not span the field")]
    NotFullRank,
    #[error("lattice is not contained in the super-lattice")]
    NotASublattice,
    #[error("lattice is not an order: {0}")]
    NotAnOrder(&'static str),
    #[error("operation requires field degree {expected}, got {found}")]
    UnsupportedDegree { expected: usize, found: usize },
    #[error("element is not in the group generated by -1 and the given unit")]
    NotInGroup,
    #[error("candidate is not a unit of the order")]
    NotAUnit,
    #[error("candidate generator is torsion (+1 or -1)")]
    TorsionGenerator,

    #[error("flow frequencies do not form a basis of the field")]
    NotABasis,
    #[error("quasiperiodic flows need dimension >= 2, got {0}")]
    DegreeTooSmall(usize),
    #[error("not a symmetry: {0}")]
    NotASymmetry(&'static str),
    #[error("multiplier is not realizable by an integer matrix")]
    NotRealizable(RatMatrix),
    #[error("enumeration guard exceeded (need n <= 3 and bound <= 30)")]
    BoundTooLarge,

    #[error("map is not surjective (det = 0)")]
    NotSurjective,
    #[error("symmetry does not lift through the map (conjugated matrix is not integral)")]
    NotLiftable(RatMatrix),
    #[error("maps do not semiconjugate the given flows")]
    NotASemiconjugacy,
    #[error("not a subgroup")]
    NotASubgroup,
    #[error("operation needs rank-one unit groups, got rank {0}")]
    UnsupportedRank(usize),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
