//! Centralized numerical tolerances with written justification.
//!
//! Every threshold used anywhere in the crate lives here; no module carries
//! ad-hoc magic numbers. Each constant documents where its value comes from
//! (machine epsilon, conditioning of the formulas involved, or quadrature
//! error models), so a reviewer can audit the failure conditions in one
//! place.
//!
//! Rough map:
//!
//! | group                        | constants                                   |
//! |------------------------------|---------------------------------------------|
//! | linear-algebra singularity   | [`SINGULARITY_RCOND`]                       |
//! | identity battery             | [`IDENTITY_RESIDUAL_REL`], sampler margins  |
//! | quadrature calculus          | reproduction/product/projector tolerances   |
//! | finite differences           | order bounds, roundoff envelopes            |
//! | structural self-checks       | commutation, weight sums, form agreement    |

// ═══════════════════════════════════════════════════════════════════════
// Linear-algebra singularity thresholds
// ═══════════════════════════════════════════════════════════════════════

/// Reciprocal 1-norm condition number below which a regular-representation
/// matrix (32x32) or an operator lift (32d x 32d) is declared singular.
///
/// With f64 arithmetic an LU solve loses roughly `eps / rcond` relative
/// accuracy; at `rcond = 1e-12` fewer than four significant digits survive,
/// which is far too little for residual checks pinned at `1e-9`. Inversions
/// are therefore refused below this point rather than silently degraded.
pub const SINGULARITY_RCOND: f64 = 1e-12;

// ═══════════════════════════════════════════════════════════════════════
// Identity battery
// ═══════════════════════════════════════════════════════════════════════

/// Scaled residual bound for every algebraic resolvent identity.
///
/// Residuals are measured as `|lhs - rhs|_F / max(1, |lhs|_F, |rhs|_F)`.
/// Both sides are assembled from inverses whose relative error is about
/// `eps / rcond`; the admissibility margins below keep `rcond` above
/// `~1e-4`, so the achievable residual is `~1e-12`. A bound of `1e-9`
/// leaves three orders of headroom while still catching any sign, constant,
/// ordering, or conjugation mistake, all of which produce O(1) residuals.
pub const IDENTITY_RESIDUAL_REL: f64 = 1e-9;

/// Admissible sample points must keep this fraction of the reference scale
/// between themselves and every spectral sphere.
///
/// The reference scale is `max(spectral radius, 1)`; the floor of 1 keeps
/// the margin meaningful for operators with tiny or zero spectral radius.
pub const SPECTRUM_MARGIN_FACTOR: f64 = 0.1;

/// Minimal half-plane distance between the spheres generated by the two
/// sampled points of a two-variable identity.
///
/// The two-variable identities divide by the slice quadratic `Q_s(p)`,
/// which degenerates as the spheres of `s` and `p` merge; this floor keeps
/// its inverse well conditioned.
pub const SPHERE_SEPARATION_MIN: f64 = 0.05;

/// Consecutive rejected draws after which the admissible sampler reports
/// failure instead of looping forever.
pub const SAMPLER_MAX_REJECTIONS: u32 = 1000;

/// Numerical bound certifying that a constructed factor commutes with the
/// operator: relative Frobenius norm of the commutator.
///
/// Commutation holds by construction (central coefficients times powers of
/// the operator), so the commutator is pure floating-point noise; `1e-12`
/// sits three orders above the noise floor of the worst admissible case
/// while rejecting any genuinely non-commuting factor.
pub const COMMUTATION_REL: f64 = 1e-12;

// ═══════════════════════════════════════════════════════════════════════
// Quadrature calculus
// ═══════════════════════════════════════════════════════════════════════

/// Relative error bound for reproducing monomials through the slice
/// functional calculus at the pinned node count.
///
/// Trapezoidal quadrature of a periodic analytic integrand converges
/// geometrically: the error scales like `(rho / R)^N`, where `rho` is the
/// largest spectral sphere radius seen from the contour center and `R` the
/// contour radius. At `N = 256` nodes and the ratios used by the suites the
/// quadrature term sits below machine noise, so `1e-8` is limited only by
/// the conditioning of the resolvents, with comfortable headroom.
pub const POLY_REPRODUCTION_REL: f64 = 1e-8;

/// Factor by which the reproduction error must drop when the node count of
/// a geometric quadrature doubles (until it hits the roundoff floor).
pub const CONVERGENCE_DROP_MIN: f64 = 1e3;

/// Scaled residual bound for the product rules of the biharmonic and
/// harmonic calculi.
///
/// Each side stacks two quadratures and an operator product, so the noise
/// floor is about an order above the identity battery; `1e-7` keeps a
/// three-order margin over that floor.
pub const PRODUCT_RULE_REL: f64 = 1e-7;

/// Scaled residual bound for Riesz projector checks: idempotency
/// `|P^2 - P| / max(1, |P|)` and agreement of the two contour forms.
pub const PROJECTOR_REL: f64 = 1e-7;

/// Quadrature nodes must keep this fraction of the contour radius between
/// themselves and every spectral sphere.
pub const CONTOUR_MARGIN_FACTOR: f64 = 0.1;

/// Residual bound for slice independence: functional-calculus values must
/// agree across slice directions and contour radii to this relative
/// precision.
///
/// Exact slice independence is a theorem; numerically the two evaluations
/// differ only by quadrature and inversion noise, both below `1e-12` at the
/// pinned node counts, so `1e-9` is generous yet still three orders tighter
/// than any genuine slice dependence would produce.
pub const SLICE_INDEPENDENCE_REL: f64 = 1e-9;

/// Absolute bound on the normalized sum of quadrature weights,
/// `|sum w_k| / (2 pi R)`.
///
/// The weights of an `N`-node circle sum to zero exactly; floating-point
/// summation leaves at most `N * eps` of cancellation noise, which is below
/// `1e-13` for every node count the suites use.
pub const WEIGHT_SUM_REL: f64 = 1e-13;

/// Hard ceiling on adaptive node doubling. A quadrature that has not
/// converged by this many nodes is flagged instead of refined further.
pub const CONTOUR_NODE_LIMIT: usize = 4096;

/// Successive-refinement stopping tolerance for adaptive quadrature:
/// doubling stops once two consecutive evaluations agree to this relative
/// precision.
pub const CONTOUR_REFINE_REL: f64 = 1e-10;

// ═══════════════════════════════════════════════════════════════════════
// Slice kernels and membership
// ═══════════════════════════════════════════════════════════════════════

/// Relative half-plane distance below which an evaluation point is treated
/// as lying *on* the sphere of the kernel parameter (or on the S-spectrum).
///
/// The kernels blow up like the inverse of this distance; at `1e-9` of the
/// parameter scale the condition number of the kernel evaluation reaches
/// `~1e9`, the point at which the `1e-9`-scaled residual checks above would
/// become vacuous. Evaluation is refused instead.
pub const SPHERE_MEMBERSHIP_REL: f64 = 1e-9;

/// Agreement bound between the two algebraic forms of each slice Cauchy
/// kernel.
///
/// The forms are algebraically identical; evaluated well away from the
/// parameter sphere they differ by a handful of floating-point operations,
/// so `1e-10` (relative to the kernel magnitude) is attainable with two
/// orders of margin.
pub const KERNEL_FORM_AGREEMENT_REL: f64 = 1e-10;

// ═══════════════════════════════════════════════════════════════════════
// Finite differences
// ═══════════════════════════════════════════════════════════════════════

/// Minimal acceptable empirical convergence order for second-order central
/// stencils applied to non-polynomial kernels.
///
/// The theoretical order is 2; pre-asymptotic curvature and roundoff leave
/// measured orders slightly short of it, and anything at or above `1.8`
/// is inconsistent with a genuinely lower-order (or broken) stencil, which
/// would measure at most ~1.
pub const STENCIL_ORDER_MIN: f64 = 1.8;

/// Factor by which a deliberately wrong kernel constant must inflate the
/// finite-difference residual for the check to count as sensitive.
///
/// Replacing the correct constant changes the residual from `O(h^2)`
/// truncation noise to an `O(1)` fraction of the kernel magnitude; at the
/// pinned steps that is at least three orders of magnitude.
pub const NEGATIVE_CONTROL_MIN_RATIO: f64 = 1e3;

/// Richardson-extrapolation consistency bound: for a clean second-order
/// residual curve, `|4 r(h) - r(2h)| / 3` must fall below this fraction of
/// the coarsest residual.
pub const EXTRAPOLATION_REL: f64 = 0.02;

/// Safety factor applied to the roundoff envelope of composed stencils.
///
/// Covers accumulation effects the first-order model below ignores
/// (probe-dependent cancellation patterns, norm inflation across 32
/// components) while staying far below any genuine truncation signal.
pub const ROUNDOFF_SAFETY_FACTOR: f64 = 1e4;

/// Roundoff envelope for a composed central stencil that is *exact* on the
/// sampled function.
///
/// A composition whose combined coefficients have 1-norm `C / h^k` (with
/// `C` of order a few thousand for the three-stencil chains used here)
/// evaluates an exactly-annihilated function to
/// `~ C * eps * scale / h^k` of pure cancellation noise. The envelope
/// multiplies that first-order model by [`ROUNDOFF_SAFETY_FACTOR`]:
/// residuals below the envelope certify stencil-level exactness; genuine
/// identity violations sit many orders above it.
#[must_use]
pub fn stencil_roundoff_envelope(scale: f64, h: f64, inverse_power: u32) -> f64 {
    ROUNDOFF_SAFETY_FACTOR * f64::EPSILON * scale / h.powi(inverse_power as i32)
}

/// Fraction of the sample-box half-width that probes must keep between
/// themselves and the box boundary *after* accounting for stencil arms.
///
/// Guards against probes landing exactly on the shrunken boundary, where a
/// later stencil composition would step outside the sampled region.
pub const PROBE_INTERIOR_FRACTION: f64 = 1e-6;

/// Minimal distance from the real axis at which an axial decomposition is
/// attempted.
///
/// The axial split divides by the vector-part radius; below this floor the
/// slice direction `x_vec / |x_vec|` amplifies input noise past the point
/// where the decomposition residuals are meaningful.
pub const AXIS_MIN_RADIUS: f64 = 1e-6;

// ═══════════════════════════════════════════════════════════════════════
// Structural self-checks (used by unit tests and cross-validation)
// ═══════════════════════════════════════════════════════════════════════

/// Agreement bound between the dedicated paravector inversion formula and
/// the dense regular-representation route.
pub const INVERSE_CROSSCHECK_REL: f64 = 1e-12;

/// Round-trip bound for multivector inversion: `|a * inv(a) - 1|` relative
/// to the conditioning of `a`.
pub const INVERSE_ROUNDTRIP_REL: f64 = 1e-10;

/// Residual bound for associativity / distributivity spot checks on random
/// multivectors of unit scale.
pub const ALGEBRA_PROPERTY_ABS: f64 = 1e-13;

// Relationships the suites silently rely on, pinned at compile time so an
// edit to one constant cannot invalidate another's rationale.
//
// eps / rcond must stay well below the identity tolerance:
const _: () = assert!(f64::EPSILON / SINGULARITY_RCOND < IDENTITY_RESIDUAL_REL * 1e6);
// Cross-checks of algebraically identical expressions are the tightest,
// then the identity battery, then stacked quadratures:
const _: () = assert!(INVERSE_CROSSCHECK_REL <= KERNEL_FORM_AGREEMENT_REL);
const _: () = assert!(KERNEL_FORM_AGREEMENT_REL <= IDENTITY_RESIDUAL_REL);
const _: () = assert!(IDENTITY_RESIDUAL_REL <= POLY_REPRODUCTION_REL);
const _: () = assert!(POLY_REPRODUCTION_REL <= PRODUCT_RULE_REL);
const _: () = assert!(PRODUCT_RULE_REL == PROJECTOR_REL);
