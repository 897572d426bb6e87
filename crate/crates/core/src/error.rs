use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("triangle inequality violated: d({i},{j}) > d({i},{k}) + d({k},{j})")]
    TriangleViolation { i: usize, j: usize, k: usize },
    #[error("points {0} and {1} coincide")]
    DuplicatePoint(usize, usize),
    #[error("bad dimension: {0}")]
    BadDimension(String),
    #[error("invalid metric: {0}")]
    InvalidMetric(String),
    #[error("field has {got} values but the space has {expected} points")]
    MisalignedField { expected: usize, got: usize },
    #[error("field does not vanish at the basepoint (value {0})")]
    NonzeroAtBasepoint(f64),
    #[error("index set does not contain the basepoint")]
    BasepointMissing,
    #[error("index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("candidate is not an extension: {0}")]
    NotAnExtension(String),
    #[error("no represented direction matches {0:?}")]
    DirectionNotRepresented(Vec<f64>),
    #[error("pair directions coincide")]
    DegeneratePair,
    #[error("ray systems differ")]
    RaySystemMismatch,
    #[error("invalid ray system: {0}")]
    InvalidRays(String),
    #[error("sub-cone is empty")]
    EmptySubcone,
    #[error("operation needs an embedded space")]
    MatrixSpaceUnsupported,
    #[error("generators are linearly dependent")]
    DependentGenerators,
    #[error("support point {0} is not a unit vector")]
    NonUnitSupport(usize),
    #[error("scaling pair ({0},{1}) is not realized by the point list")]
    NotScalingClosed(usize, usize),
    #[error("cutting planes did not converge after {rounds} rounds (violation {violation:e})")]
    NoConvergence { rounds: usize, violation: f64 },
    #[error("divergences sum to {0:e}, not zero")]
    Unbalanced(f64),
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Solver-side failures, as opposed to rejected input.
    pub fn is_solver_failure(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. }
                | Error::Infeasible
                | Error::Unbounded
                | Error::NumericalFailure(_)
        )
    }
}
