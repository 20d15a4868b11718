use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("degree {degree} outside window [{lo}, {hi}]")]
    OutOfWindow { degree: i64, lo: i64, hi: i64 },

    #[error("convention mismatch: {0}")]
    ConventionMismatch(String),

    #[error("d^2 != 0 {0}")]
    DifferentialSquare(String),

    #[error("not a chain map in degree {0}")]
    NotChainMap(i64),

    #[error("arity {arity} exceeds the operad table bound {bound}")]
    ArityOverflow { arity: usize, bound: usize },

    #[error("unbounded arity in degree {degree}: generators of degree {min_gen_degree} admit monomials of every arity; supply an arity cap")]
    UnboundedArity { degree: i64, min_gen_degree: i64 },

    #[error("unsupported operad `{0}`")]
    UnsupportedOperad(String),

    #[error("operad mismatch: {0}")]
    OperadMismatch(String),

    #[error("invalid operad table: {0}")]
    InvalidOperad(String),

    #[error("invalid generator: {0}")]
    InvalidGenerator(String),

    #[error("differential of generator `{0}` is not a cocycle")]
    NotCocycle(String),

    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),

    #[error("morphism incompatible with differentials on generator `{0}`")]
    NotMorphism(String),

    #[error("missing structure map: {0}")]
    MissingStructure(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("t-degree bound {0} exceeded")]
    PathDegreeOverflow(usize),

    #[error("schema error: {0}")]
    Schema(String),
}
