//! Crate-wide error type.
//!
//! Every fallible operation in the crate reports through [`Error`]. Variants
//! carry the numerical evidence for the failure (condition numbers,
//! distances, rejection counts) so callers and reports can show *why* an
//! input was rejected rather than just that it was.

use crate::slice::Side;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// All failure modes of the algebra, calculus, and harness layers.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Inversion of the zero paravector was requested.
    #[error("zero paravector has no inverse")]
    ZeroParavector,

    /// A multivector's regular representation is numerically singular.
    #[error("multivector is numerically singular (rcond = {rcond:.3e})")]
    SingularMultivector {
        /// Exact reciprocal 1-norm condition number of the regular matrix.
        rcond: f64,
    },

    /// A constructor was handed arguments that violate its documented
    /// preconditions.
    #[error("invalid construction: {reason}")]
    InvalidConstruction {
        /// Human-readable description of the violated precondition.
        reason: String,
    },

    /// The requested change of basis is numerically singular.
    #[error("basis matrix is numerically singular (rcond = {rcond:.3e})")]
    SingularBasis {
        /// Reciprocal condition number of the basis matrix.
        rcond: f64,
    },

    /// Two operators (or an operator and a vector of data) have incompatible
    /// matrix ranks.
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch {
        /// Rank required by the operation.
        expected: usize,
        /// Rank actually supplied.
        got: usize,
    },

    /// An operator with Clifford-valued entries is numerically singular.
    #[error("operator is numerically singular (rcond = {rcond:.3e})")]
    SingularOperator {
        /// Reciprocal condition number of the real lift of the operator.
        rcond: f64,
    },

    /// A slice Cauchy kernel was evaluated at a point lying on (or too close
    /// to) the sphere generated by the kernel parameter.
    #[error("evaluation point lies on the parameter sphere (distance {distance:.3e})")]
    OnSpectrumSphere {
        /// Half-plane distance between the two sphere representatives.
        distance: f64,
    },

    /// A resolvent was requested at a point on (or too close to) the
    /// S-spectrum of the operator.
    #[error("point is on the S-spectrum (distance {distance:.3e} from the nearest spectral sphere)")]
    OnSpectrum {
        /// Half-plane distance to the nearest spectral sphere.
        distance: f64,
    },

    /// Two sampled points generate (numerically) the same sphere, which makes
    /// the two-variable identity kernels singular.
    #[error("sampled points generate the same sphere (separation {separation:.3e})")]
    SphereCollision {
        /// Half-plane distance between the two generated spheres.
        separation: f64,
    },

    /// The commuting factor handed to the generalized resolvent identity does
    /// not actually commute with the operator.
    #[error("factor does not commute with the operator (residual {residual:.3e})")]
    NonCommutingB {
        /// Relative Frobenius norm of the worst commutator.
        residual: f64,
    },

    /// The admissible-sample rejection loop gave up.
    #[error("sampler exhausted after {rejections} consecutive rejections")]
    SamplerExhausted {
        /// Number of consecutive rejected draws.
        rejections: u32,
    },

    /// A quadrature contour passes too close to a spectral sphere.
    #[error("contour passes within {distance:.3e} of a spectral sphere (required margin {required:.3e})")]
    ContourTouchesSpectrum {
        /// Smallest distance from the contour to any spectral sphere.
        distance: f64,
        /// Margin demanded of an admissible contour.
        required: f64,
    },

    /// Two slice functions (or a function and a calculus) disagree about
    /// sidedness.
    #[error("side mismatch: expected {expected:?}, got {got:?}")]
    SideMismatch {
        /// Side required by the operation.
        expected: Side,
        /// Side actually supplied.
        got: Side,
    },

    /// An operation that requires an intrinsic slice function (real
    /// coefficients) was handed a non-intrinsic one.
    #[error("slice function is not intrinsic (non-real coefficients present)")]
    NotIntrinsic,

    /// The pair of projector contours does not split the spectrum: some
    /// spectral sphere is enclosed by one contour but not the other.
    #[error("contours do not split the spectrum: {reason}")]
    SpectrumNotSplit {
        /// Which sphere breaks the split, and how.
        reason: String,
    },

    /// A finite-difference probe box is too small for the requested stencil
    /// composition at the requested step.
    #[error("sample box too small: stencil arms need {needed:.3e} but only {available:.3e} is available")]
    GridTooSmall {
        /// Half-width consumed by the stencil arms.
        needed: f64,
        /// Half-width actually available.
        available: f64,
    },

    /// An axial decomposition was requested too close to the real axis,
    /// where the slice direction is ill-defined.
    #[error("point too close to the real axis for an axial split (radius {radius:.3e})")]
    AxisTooClose {
        /// Distance from the real axis at the evaluation point.
        radius: f64,
    },

    /// A harness configuration file or CLI override is invalid.
    #[error("invalid configuration: {reason}")]
    ConfigInvalid {
        /// Human-readable description of the problem.
        reason: String,
    },
}

impl Error {
    /// Convenience constructor for [`Error::InvalidConstruction`].
    pub fn invalid(reason: impl Into<String>) -> Self {
        Error::InvalidConstruction {
            reason: reason.into(),
        }
    }

    /// Convenience constructor for [`Error::ConfigInvalid`].
    pub fn config(reason: impl Into<String>) -> Self {
        Error::ConfigInvalid {
            reason: reason.into(),
        }
    }
}
