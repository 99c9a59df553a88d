use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invalid prime {0}: need an odd prime below 2^32")]
    InvalidPrime(u64),
    #[error("arithmetic error: {0}")]
    Arithmetic(String),
    #[error("form is not square-free")]
    NotSquareFree,
    #[error("point does not lie on the hyperplane sum(x) = 0")]
    NotOnHyperplane,
    #[error("point lies on the elliptic locus")]
    EllipticLocus,
    #[error("point lies on singular line {0}")]
    OnSingularLine(usize),
    #[error("invalid subspace: {0}")]
    InvalidSubspace(String),
    #[error("form is not a cone over the given vertex: offending monomial {0}")]
    NotACone(String),
    #[error("no rational point found on conic within height bound {0}")]
    NoRationalPointFound(u64),
    #[error("conic has no rational point available: {0}")]
    NoRationalPointOnConic(String),
    #[error("structural assertion failed: {0}")]
    StructuralAssertionFailed(String),
    #[error("degenerate branch divisor: {0}")]
    DegenerateBranch(String),
    #[error("node is worse than ordinary (tangent cone vanishes)")]
    WorseSingularity,
    #[error("curve is not normalized (need f6 = 0 and f5 = 1)")]
    NotNormalized,
    #[error("gradient vanishes at the point")]
    SingularPoint,
    #[error("degenerate pair: a = b")]
    DegeneratePair,
    #[error("pair is not a gluing pair: P(a,b) = {ab}, P(b,a) = {ba}")]
    InvalidPair { ab: String, ba: String },
    #[error("twist class not represented by the ansatz")]
    TwistNotRepresented,
    #[error("invalid branch quadratic: {0}")]
    InvalidBranch(String),
    #[error("branch collision: f(beta) = 0")]
    BranchCollision,
    #[error("degenerate parameters: {0}")]
    DegenerateParameters(String),
    #[error("degree-10 form is not palindromic")]
    NotPalindromic,
    #[error("degenerate quotient: {0}")]
    DegenerateQuotient(String),
    #[error("sampling failed after {planes} planes")]
    SamplingFailed { planes: usize },
    #[error("point is a base point of the quadric system")]
    IndeterminacyPoint,
    #[error("line lies inside the cubic")]
    DegenerateLine,
    #[error("points are not in general position: {0}")]
    NotGeneralPosition(String),
    #[error("dual line meets the cubic non-reduced")]
    NonReducedDual,
}
