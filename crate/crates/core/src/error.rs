use thiserror::Error;

/// Error type shared by every layer of the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (defect {defect:.3e})")]
    NotHermitian { defect: f64 },
    #[error("Jacobi sweeps exceeded cap ({sweeps}) with off-diagonal mass {off_mass:.3e}")]
    NoConvergence { sweeps: usize, off_mass: f64 },
    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },
    #[error("matrix shape mismatch: {left:?} vs {right:?}")]
    ShapeMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("invalid tolerance policy: {0}")]
    BadTolerance(String),
    #[error("element is not self-adjoint (defect {defect:.3e})")]
    NotSelfAdjoint { defect: f64 },
    #[error("element is not positive (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },
    #[error("element is zero")]
    ZeroElement,
    #[error("elements belong to different models")]
    ModelMismatch,
    #[error("element shape error: {0}")]
    ShapeError(String),
    #[error("not an order projection (residual {residual:.3e})")]
    NotProjection { residual: f64 },
    #[error("not a partial symmetry")]
    NotPartialSymmetry,
    #[error("not a partial unitary")]
    NotPartialUnitary,
    #[error("elements are not mutually orthogonal")]
    NotOrthogonal,
    #[error("certification failed: {0}")]
    CertificationFailed(String),
    #[error("scalar matrix is not unitary (defect {defect:.3e})")]
    NotUnitary { defect: f64 },
    #[error("not an isometry (defect {defect:.3e})")]
    NotIsometry { defect: f64 },
    #[error("requested rank {rank} out of range for dimension {dim}")]
    RankOutOfRange { rank: usize, dim: usize },
    #[error("projections are not equivalent: block ranks {p_ranks:?} vs {q_ranks:?}")]
    NotEquivalent {
        p_ranks: Vec<usize>,
        q_ranks: Vec<usize>,
    },
    #[error("projection is not sub-equivalent: block ranks {p_ranks:?} vs {q_ranks:?}")]
    NotSubEquivalent {
        p_ranks: Vec<usize>,
        q_ranks: Vec<usize>,
    },
    #[error("projections are not unitarily equivalent")]
    NotUnitarilyEquivalent,
    #[error("projection is not dominated (defect {defect:.3e})")]
    NotDominated { defect: f64 },
    #[error("support projections differ")]
    SupportMismatch,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("projection is not infinite")]
    NotInfinite,
    #[error("projection is zero")]
    ZeroProjection,
    #[error("ambient dimensions differ")]
    AmbientMismatch,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
