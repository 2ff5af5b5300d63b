//! Error type shared across the crate.

use thiserror::Error;

/// Everything that can go wrong while validating inputs or running a
/// classification. Variants distinguish invalid *inputs* (caller error)
/// from *numerical* failures so the CLI can map them to exit codes.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A scalar or matrix input violates a documented precondition.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The equation of state has non-positive pressure derivative at the
    /// requested density, so the acoustic speed is not real.
    #[error("equation of state is non-hyperbolic at rho = {rho}: dp/drho = {dpdrho}")]
    NonHyperbolic { rho: f64, dpdrho: f64 },

    /// A tabulated equation of state was queried outside its density range.
    #[error("density {rho} outside tabulated range [{lo}, {hi}]")]
    OutOfRange { rho: f64, lo: f64, hi: f64 },

    /// The jump relations admit no real normal velocity for these states.
    #[error("jump relations have no real root: v1^2 would be {v1_sq}")]
    NoRealRoot { v1_sq: f64 },

    /// Density jump (or another essential jump quantity) vanishes.
    #[error("degenerate shock data: {0}")]
    Degenerate(String),

    /// The front fails the extreme-shock inequalities.
    #[error("Lax conditions violated: {0}")]
    LaxViolated(String),

    /// Deformation gradient is singular and the gas-dynamics limit flag is off.
    #[error(
        "deformation gradient is singular (det F = {det}); pass the degenerate flag to allow it"
    )]
    DegenerateDeformation { det: f64 },

    /// Tangential velocity differs across the front, so no Galilean frame
    /// removes it.
    #[error("tangential velocity jump {jump} exceeds tolerance; cannot normalize frame")]
    FrameError { jump: f64 },

    /// The deformation gradient does not have the sparsity pattern the
    /// closed-form classifier requires.
    #[error("deformation pattern mismatch: {0}")]
    PatternMismatch(String),

    /// A 3x3 block that must be inverted is numerically singular.
    #[error("singular block in boundary-system assembly: |det| = {det}")]
    SingularBlock { det: f64 },

    /// Lyapunov solve requested for a matrix with spectrum off the open
    /// left half-plane.
    #[error("matrix spectrum is not stable: max Re(lambda) = {max_re}")]
    SpectrumNotStable { max_re: f64 },

    /// A linear solve or refinement loop failed to reach the required residual.
    #[error("ill-conditioned solve: {0}")]
    IllConditioned(String),

    /// A matrix that must be symmetric is not, beyond tolerance.
    #[error("asymmetric input: |H - H^T| = {defect}")]
    AsymmetricInput { defect: f64 },

    /// Root selection could not distinguish the decaying mode.
    #[error("mode selection ambiguous: both roots have |Re| <= {tol}")]
    SelectionAmbiguous { tol: f64 },

    /// A matrix expected to have a one-dimensional kernel is rank-deficient.
    #[error("rank-deficient symbol: sigma_min/sigma_max = {ratio}")]
    RankDeficient { ratio: f64 },

    /// The spectral scan's minimum fell inside the indeterminate band.
    #[error("spectral scan inconclusive: min |det| = {min_abs_det} at (eta, xi, omega) = ({eta}, {xi}, {omega})")]
    ScanInconclusive {
        min_abs_det: f64,
        eta: f64,
        xi: f64,
        omega: f64,
    },

    /// The a-priori stability certificate requires a convex pressure law.
    #[error("convex equation of state required: {0}")]
    ConvexityRequired(String),

    /// The a-priori stability certificate requires a compressive jump.
    #[error("compressive jump required: rho_plus = {rho_plus} <= rho_minus = {rho_minus}")]
    NotCompressive { rho_plus: f64, rho_minus: f64 },

    /// Internal consistency check failed; indicates a numerical breakdown.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    /// True when the error reflects bad *input* rather than a numerical
    /// breakdown mid-computation.
    pub fn is_invalid_input(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter(_)
                | Error::NonHyperbolic { .. }
                | Error::OutOfRange { .. }
                | Error::Degenerate(_)
                | Error::DegenerateDeformation { .. }
                | Error::FrameError { .. }
                | Error::PatternMismatch(_)
                | Error::AsymmetricInput { .. }
                | Error::NotCompressive { .. }
                | Error::ConvexityRequired(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
