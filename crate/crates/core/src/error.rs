use thiserror::Error;

use crate::linalg::Matrix;

/// Errors raised by the toolkit.
///
/// Group elements are referred to by their index in the owning
/// [`GaloisGroup`](crate::field::GaloisGroup); poset points by their index.
#[derive(Debug, Clone, Error)]
pub enum Error {
    // -- fields -----------------------------------------------------------
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus must be monic of degree at least 1")]
    BadModulus,
    #[error("modulus is reducible: factor {factor}")]
    Reducible { factor: String },
    #[error("irreducibility of the modulus could not be verified; pass an explicit assertion")]
    UnverifiableIrreducibility,
    #[error("extension towers deeper than 2 are not supported")]
    TowerTooDeep,
    #[error("hint {0} is not a root of the modulus")]
    HintNotRoot(String),
    #[error("automorphism hints do not generate a closed set")]
    NotClosed,
    #[error("element is moved by group element {g}")]
    NotFixed { g: usize },
    #[error("fixed element has a non-constant representative")]
    NotConstant,
    #[error("automorphism group is not Galois (|G| = {order}, degree = {degree})")]
    NotGalois { order: usize, degree: usize },
    #[error("field mismatch")]
    FieldMismatch,
    #[error("not an extension field")]
    NotExtension,
    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: String },

    // -- linear algebra ---------------------------------------------------
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("linear system has no solution")]
    NoSolution,
    #[error("matrix is singular")]
    SingularMatrix,

    // -- semilinear -------------------------------------------------------
    #[error("cocycle condition fails for ({g}, {h})")]
    NotCocycle { g: usize, h: usize },
    #[error("cocycle matrix for group element {0} is singular")]
    Singular(usize),
    #[error("cocycle matrix missing for group element {0}")]
    MissingCocycle(usize),
    #[error("descent failed: invariant dimension {found}, expected {expected}")]
    DescentFailed { found: usize, expected: usize },
    #[error("morphism is not equivariant for group element {g}")]
    NotEquivariant { g: usize },

    // -- posets and sheaves -----------------------------------------------
    #[error("not a partial order: {0}")]
    NotPartialOrder(String),
    #[error("({0}, {1}) is not a covering pair")]
    NotCovering(usize, usize),
    #[error("map is not monotone: {0} <= {1} but images are incomparable")]
    NotMonotone(usize, usize),
    #[error("point set is not an up-set")]
    NotUpSet,
    #[error("point set is not locally closed")]
    NotLocallyClosed,
    #[error("restriction composites from {0} to {1} depend on the chosen path")]
    PathDependence(usize, usize),
    #[error("invalid shape: {0}")]
    Shape(String),
    #[error("morphism does not commute with restriction along ({0}, {1})")]
    NotSheafMorphismSquare(usize, usize),

    // -- sheaf descent ----------------------------------------------------
    #[error("cocycle condition fails at point {x} for ({g}, {h})")]
    NotCocycleAt { x: usize, g: usize, h: usize },
    #[error("cocycle matrix singular at point {x} for group element {g}")]
    SingularAt { x: usize, g: usize },
    #[error("structure is not a sheaf morphism along ({x}, {y}) for group element {g}")]
    NotSheafMorphism { x: usize, y: usize, g: usize },
    #[error("descent failed at point {x}: invariant dimension {found}, expected {expected}")]
    DescentFailedAt { x: usize, found: usize, expected: usize },
    #[error("descended restriction ({x}, {y}) has entries that are not fixed")]
    NotFixedRestriction { x: usize, y: usize },
    #[error("morphism is not equivariant at point {x} for group element {g}")]
    NotEquivariantAt { x: usize, g: usize },

    // -- complexes --------------------------------------------------------
    #[error("d∘d != 0 at degree {degree}, point {x}")]
    NotComplex { degree: i64, x: usize },
    #[error("structure is not strict at degree {degree}, point {x}, group element {g}")]
    NotStrict { degree: i64, x: usize, g: usize },
    #[error("not a chain map at degree {degree}, point {x}")]
    NotChainMap { degree: i64, x: usize },
    #[error("complex is not concentrated in two consecutive degrees")]
    NotTwoTerm,

    // -- gluing -----------------------------------------------------------
    #[error("v∘u != id - t")]
    RelationViolated { difference: Matrix },
    #[error("monodromy is singular")]
    SingularMonodromy,
    #[error("invalid gluing morphism: {0}")]
    NotGluingMorphism(String),
    #[error("structure on V does not commute with the monodromy for group element {g}")]
    NotMonodromyEquivariant { g: usize },
    #[error("map {map} is not equivariant for group element {g}")]
    NotEquivariantMap { map: &'static str, g: usize },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Whether the error reports a mathematical failure of the input, as
    /// opposed to malformed input.
    pub fn is_mathematical(&self) -> bool {
        !matches!(
            self,
            Error::Parse { .. }
                | Error::Shape(_)
                | Error::DimensionMismatch { .. }
                | Error::MissingCocycle(_)
                | Error::FieldMismatch
                | Error::NotExtension
                | Error::TowerTooDeep
                | Error::NotPrime(_)
                | Error::BadModulus
                | Error::UnverifiableIrreducibility
        )
    }
}
