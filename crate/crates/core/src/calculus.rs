//! Functional calculi built on slice-contour quadrature, their product
//! rules, and the spectral projectors of the fine structure.
//!
//! Each calculus replaces the slice Cauchy kernel in
//!
//! ```text
//! f(T) = (1 / 2 pi) ∮ K(s, T) ds_J f(s)
//! ```
//!
//! by one of the fine-structure kernels: the slice resolvent itself, the
//! Dirac-kind kernel `-4 Q^{-1}`, the Laplace-kind kernel
//! `-8 S_L^{-1} Q^{-1}`, or the combined kernel `16 Q^{-2}`. The contour is
//! a circle in one slice plane; the integrand is sampled at its nodes and
//! summed with the paravector weights of [`crate::contour::Contour`].
//!
//! The product rules state how the Dirac-kind and combined-kind parts of a
//! product `f g` decompose when `f` is intrinsic. Their factor integrals
//! use nested contours — `f`-factors on the outer circle, `g`-factors on
//! the inner one — matching the order in which the two spectral parameters
//! are separated in the underlying resolvent identities.
//!
//! Projectors integrate the *right* kernels against low powers of the
//! variable on the inner contour, or the powers against the *left* kernels
//! on the outer contour; both normalizations are calibrated so that a
//! contour enclosing part of the spectrum yields an idempotent.

use crate::contour::Contour;
use crate::error::{Error, Result};
use crate::operators::{CliffordOperator, ParavectorOperator};
use crate::resolvents::{resolvent, ResolventKind};
use crate::slice::{Side, StemPolynomial};
use crate::tolerances;
use std::f64::consts::PI;

// ═══════════════════════════════════════════════════════════════════════
//  The four calculi
// ═══════════════════════════════════════════════════════════════════════

/// Which fine-structure calculus to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CalculusKind {
    /// Ordinary slice calculus (`S_L^{-1}` / `S_R^{-1}` kernels).
    Slice,
    /// Dirac-kind part (`-4 Q^{-1}` kernels).
    Dirac,
    /// Laplace-kind part (`-8 S^{-1} Q^{-1}` kernels).
    Laplace,
    /// Combined Dirac-Laplace part (`16 Q^{-2}` kernels).
    DiracLaplace,
}

impl CalculusKind {
    /// Stable machine name.
    #[must_use]
    pub fn name(&self) -> &'static str {
        match self {
            CalculusKind::Slice => "slice",
            CalculusKind::Dirac => "dirac",
            CalculusKind::Laplace => "laplace",
            CalculusKind::DiracLaplace => "dirac-laplace",
        }
    }

    fn kernel(self, side: Side) -> ResolventKind {
        match (self, side) {
            (CalculusKind::Slice, Side::Left) => ResolventKind::SLeft,
            (CalculusKind::Slice, Side::Right) => ResolventKind::SRight,
            (CalculusKind::Dirac, Side::Left) => ResolventKind::DiracLeft,
            (CalculusKind::Dirac, Side::Right) => ResolventKind::DiracRight,
            (CalculusKind::Laplace, Side::Left) => ResolventKind::LaplaceLeft,
            (CalculusKind::Laplace, Side::Right) => ResolventKind::LaplaceRight,
            (CalculusKind::DiracLaplace, Side::Left) => ResolventKind::DiracLaplaceLeft,
            (CalculusKind::DiracLaplace, Side::Right) => ResolventKind::DiracLaplaceRight,
        }
    }
}

impl std::fmt::Display for CalculusKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

fn require_full_enclosure(t: &ParavectorOperator, contour: &Contour) -> Result<()> {
    let points = t.spectrum_points();
    contour.require_margin(&points, tolerances::CONTOUR_MARGIN_FACTOR)?;
    if let Some(outside) = points.iter().find(|&&p| !contour.encloses_point(p)) {
        return Err(Error::SpectrumNotSplit {
            reason: format!(
                "the contour must enclose the whole spectrum, but the sphere at \
                 ({:.3}, {:.3}) lies outside",
                outside.0, outside.1
            ),
        });
    }
    Ok(())
}

/// Apply a calculus to a stem polynomial: quadrature of the kernel against
/// `f` over a contour enclosing the whole S-spectrum.
///
/// Left polynomials integrate `K(s) w f(s)`, right polynomials
/// `f(s) w K(s)`, both normalized by `1 / 2 pi`.
///
/// # Errors
///
/// [`Error::ContourTouchesSpectrum`] when the contour margin is too small,
/// [`Error::SpectrumNotSplit`] when a spectral sphere escapes the contour,
/// plus resolvent errors at the quadrature nodes.
pub fn apply(
    kind: CalculusKind,
    f: &StemPolynomial,
    t: &ParavectorOperator,
    contour: &Contour,
) -> Result<CliffordOperator> {
    require_full_enclosure(t, contour)?;
    let n = t.n().max(f.n());
    let mut acc = CliffordOperator::zero(n, t.d());
    for node in contour.nodes() {
        let kern = resolvent(kind.kernel(f.side()), node.s, t)?;
        let w = node.weight.as_multivector(n);
        let fv = f.eval(node.s);
        acc = match f.side() {
            Side::Left => &acc + &kern.scale_right(&(w * fv)),
            Side::Right => &acc + &kern.scale_left(&(fv * w)),
        };
    }
    Ok(acc.scale(1.0 / (2.0 * PI)))
}

/// Exact polynomial of an operator, `sum_k T^k a_k` (left coefficients) or
/// `sum_k a_k T^k` (right coefficients); the quadrature oracle.
#[must_use]
pub fn polynomial_of_operator(f: &StemPolynomial, t: &ParavectorOperator) -> CliffordOperator {
    let n = t.n().max(f.n());
    let d = t.d();
    let tc = t.to_clifford();
    let mut acc = CliffordOperator::zero(n, d);
    let mut power = CliffordOperator::identity(n, d);
    for k in 0..=f.degree() {
        let c = f.coeff(k);
        acc = match f.side() {
            Side::Left => &acc + &power.scale_right(&c),
            Side::Right => &acc + &power.scale_left(&c),
        };
        if k < f.degree() {
            power = &power * &tc;
        }
    }
    acc
}

// ═══════════════════════════════════════════════════════════════════════
//  Product rules
// ═══════════════════════════════════════════════════════════════════════

/// The two equivalent decompositions of `(f g)` under the Dirac-kind part.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BiharmonicRule {
    /// `(fg)_D(T) = f_D(T) g(T) + f(conj T) g_D(T)`.
    ConjugateOnIntrinsic,
    /// `(fg)_D(T) = f_D(T) g(conj T) + f(T) g_D(T)`.
    ConjugateOnGeneral,
}

impl BiharmonicRule {
    /// Stable machine name.
    #[must_use]
    pub fn name(&self) -> &'static str {
        match self {
            BiharmonicRule::ConjugateOnIntrinsic => "biharmonic-conjugate-on-intrinsic",
            BiharmonicRule::ConjugateOnGeneral => "biharmonic-conjugate-on-general",
        }
    }
}

/// The two equivalent decompositions of `(f g)` under the combined
/// Dirac-Laplace part.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HarmonicRule {
    /// Conjugations land on the slice factors:
    /// `(fg)_{LD}(T) = f(conj T) g_{LD}(T) + f_{LD}(T) g(conj T)
    ///  + (1/2) f_D(T) g_L(T) + (1/2) f_L(T) g_D(T)`.
    ConjugateOnSlice,
    /// Conjugations land on the Laplace factors:
    /// `(fg)_{LD}(T) = f(T) g_{LD}(T) + f_{LD}(T) g(T)
    ///  + (1/2) f_D(T) g_L(conj T) + (1/2) f_L(conj T) g_D(T)`.
    ConjugateOnLaplace,
}

impl HarmonicRule {
    /// Stable machine name.
    #[must_use]
    pub fn name(&self) -> &'static str {
        match self {
            HarmonicRule::ConjugateOnSlice => "harmonic-conjugate-on-slice",
            HarmonicRule::ConjugateOnLaplace => "harmonic-conjugate-on-laplace",
        }
    }
}

/// Outcome of a product-rule check: both sides and their scale-free gap.
#[derive(Clone, Debug)]
pub struct ProductRuleCheck {
    /// The product side, `(f g)` under the calculus, on the inner contour.
    pub lhs: CliffordOperator,
    /// The decomposed side, factor integrals on nested contours.
    pub rhs: CliffordOperator,
    /// `|lhs - rhs| / max(|lhs|, |rhs|, 1)`.
    pub residual: f64,
}

fn rule_preconditions(f: &StemPolynomial, g: &StemPolynomial) -> Result<()> {
    if !f.is_intrinsic() {
        return Err(Error::NotIntrinsic);
    }
    if f.side() != Side::Left {
        return Err(Error::SideMismatch {
            expected: Side::Left,
            got: f.side(),
        });
    }
    if g.side() != Side::Left {
        return Err(Error::SideMismatch {
            expected: Side::Left,
            got: g.side(),
        });
    }
    Ok(())
}

fn check_from_sides(lhs: CliffordOperator, rhs: CliffordOperator) -> ProductRuleCheck {
    let residual = (&lhs - &rhs).frobenius_norm()
        / lhs
            .frobenius_norm()
            .max(rhs.frobenius_norm())
            .max(1.0);
    ProductRuleCheck { lhs, rhs, residual }
}

/// Check a Dirac-kind product rule. `f` must be intrinsic; `f`-factor
/// integrals run on `outer`, `g`-factor integrals on `inner`, and the
/// product integral on `inner`.
///
/// # Errors
///
/// [`Error::NotIntrinsic`] / [`Error::SideMismatch`] for unsuitable
/// factors, plus the contour errors of [`apply`].
pub fn product_rule_biharmonic(
    rule: BiharmonicRule,
    f: &StemPolynomial,
    g: &StemPolynomial,
    t: &ParavectorOperator,
    inner: &Contour,
    outer: &Contour,
) -> Result<ProductRuleCheck> {
    rule_preconditions(f, g)?;
    let product = f.mul(g)?;
    let lhs = apply(CalculusKind::Dirac, &product, t, inner)?;
    let tbar = t.conj();
    let rhs = match rule {
        BiharmonicRule::ConjugateOnIntrinsic => {
            let fd = apply(CalculusKind::Dirac, f, t, outer)?;
            let gv = apply(CalculusKind::Slice, g, t, inner)?;
            let fbar = apply(CalculusKind::Slice, f, &tbar, outer)?;
            let gd = apply(CalculusKind::Dirac, g, t, inner)?;
            &(&fd * &gv) + &(&fbar * &gd)
        }
        BiharmonicRule::ConjugateOnGeneral => {
            let fd = apply(CalculusKind::Dirac, f, t, outer)?;
            let gbar = apply(CalculusKind::Slice, g, &tbar, inner)?;
            let fv = apply(CalculusKind::Slice, f, t, outer)?;
            let gd = apply(CalculusKind::Dirac, g, t, inner)?;
            &(&fd * &gbar) + &(&fv * &gd)
        }
    };
    Ok(check_from_sides(lhs, rhs))
}

/// Check a combined-kind product rule. Contour roles as in
/// [`product_rule_biharmonic`].
///
/// # Errors
///
/// As for [`product_rule_biharmonic`].
pub fn product_rule_harmonic(
    rule: HarmonicRule,
    f: &StemPolynomial,
    g: &StemPolynomial,
    t: &ParavectorOperator,
    inner: &Contour,
    outer: &Contour,
) -> Result<ProductRuleCheck> {
    rule_preconditions(f, g)?;
    let product = f.mul(g)?;
    let lhs = apply(CalculusKind::DiracLaplace, &product, t, inner)?;
    let tbar = t.conj();
    let rhs = match rule {
        HarmonicRule::ConjugateOnSlice => {
            let fbar = apply(CalculusKind::Slice, f, &tbar, outer)?;
            let gld = apply(CalculusKind::DiracLaplace, g, t, inner)?;
            let fld = apply(CalculusKind::DiracLaplace, f, t, outer)?;
            let gbar = apply(CalculusKind::Slice, g, &tbar, inner)?;
            let fd = apply(CalculusKind::Dirac, f, t, outer)?;
            let gl = apply(CalculusKind::Laplace, g, t, inner)?;
            let fl = apply(CalculusKind::Laplace, f, t, outer)?;
            let gd = apply(CalculusKind::Dirac, g, t, inner)?;
            &(&(&(&fbar * &gld) + &(&fld * &gbar)) + &(&fd * &gl).scale(0.5))
                + &(&fl * &gd).scale(0.5)
        }
        HarmonicRule::ConjugateOnLaplace => {
            let fv = apply(CalculusKind::Slice, f, t, outer)?;
            let gld = apply(CalculusKind::DiracLaplace, g, t, inner)?;
            let fld = apply(CalculusKind::DiracLaplace, f, t, outer)?;
            let gv = apply(CalculusKind::Slice, g, t, inner)?;
            let fd = apply(CalculusKind::Dirac, f, t, outer)?;
            let gl_bar = apply(CalculusKind::Laplace, g, &tbar, inner)?;
            let fl_bar = apply(CalculusKind::Laplace, f, &tbar, outer)?;
            let gd = apply(CalculusKind::Dirac, g, t, inner)?;
            &(&(&(&fv * &gld) + &(&fld * &gv)) + &(&fd * &gl_bar).scale(0.5))
                + &(&fl_bar * &gd).scale(0.5)
        }
    };
    Ok(check_from_sides(lhs, rhs))
}

// ═══════════════════════════════════════════════════════════════════════
//  Spectral projectors
// ═══════════════════════════════════════════════════════════════════════

/// Which fine-structure kernel generates the projector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProjectorKind {
    /// Dirac-kind kernels against the first power of the variable.
    Dirac,
    /// Combined-kind kernels against the third power of the variable.
    DiracLaplace,
}

impl ProjectorKind {
    /// Stable machine name.
    #[must_use]
    pub fn name(&self) -> &'static str {
        match self {
            ProjectorKind::Dirac => "dirac",
            ProjectorKind::DiracLaplace => "dirac-laplace",
        }
    }

    /// Normalization constant and the power of the variable under the
    /// integral, calibrated so that the integral over a contour enclosing
    /// part of the spectrum is idempotent.
    fn weighting(self) -> (f64, u32) {
        match self {
            ProjectorKind::Dirac => (-1.0 / (8.0 * PI), 1),
            ProjectorKind::DiracLaplace => (1.0 / (32.0 * PI), 3),
        }
    }
}

/// The same projector computed two ways: right kernels against powers on
/// the inner contour, powers against left kernels on the outer contour.
#[derive(Clone, Debug)]
pub struct ProjectorPair {
    /// Inner-contour form.
    pub inner: CliffordOperator,
    /// Outer-contour form.
    pub outer: CliffordOperator,
}

impl ProjectorPair {
    /// `|P^2 - P| / max(|P|, 1)` for the inner form.
    #[must_use]
    pub fn idempotency_defect(&self) -> f64 {
        let sq = &self.inner * &self.inner;
        (&sq - &self.inner).frobenius_norm() / self.inner.frobenius_norm().max(1.0)
    }

    /// `|P_inner - P_outer| / max(|P_inner|, 1)`.
    #[must_use]
    pub fn form_gap(&self) -> f64 {
        (&self.inner - &self.outer).frobenius_norm() / self.inner.frobenius_norm().max(1.0)
    }
}

fn enclosed_set(t: &ParavectorOperator, contour: &Contour) -> Result<Vec<bool>> {
    contour.require_margin(&t.spectrum_points(), tolerances::CONTOUR_MARGIN_FACTOR)?;
    Ok(t.spectrum_points()
        .iter()
        .map(|&p| contour.encloses_point(p))
        .collect())
}

/// Spectral projector onto the part of the spectrum enclosed by the
/// contours, via both the inner and the outer quadrature form.
///
/// `inner` and `outer` must keep a margin from every spectral sphere and
/// must enclose the same subset of spheres (an empty subset is fine: the
/// result is then numerically zero).
///
/// # Errors
///
/// [`Error::ContourTouchesSpectrum`] on margin failure,
/// [`Error::SpectrumNotSplit`] when the two contours disagree about which
/// spheres they enclose, plus resolvent errors at nodes.
pub fn riesz_projector(
    kind: ProjectorKind,
    t: &ParavectorOperator,
    inner: &Contour,
    outer: &Contour,
) -> Result<ProjectorPair> {
    let inner_set = enclosed_set(t, inner)?;
    let outer_set = enclosed_set(t, outer)?;
    if inner_set != outer_set {
        return Err(Error::SpectrumNotSplit {
            reason: "the two contours enclose different parts of the spectrum".into(),
        });
    }

    let (constant, power) = kind.weighting();
    let n = t.n();
    let d = t.d();
    let right_kernel = match kind {
        ProjectorKind::Dirac => ResolventKind::DiracRight,
        ProjectorKind::DiracLaplace => ResolventKind::DiracLaplaceRight,
    };
    let left_kernel = match kind {
        ProjectorKind::Dirac => ResolventKind::DiracLeft,
        ProjectorKind::DiracLaplace => ResolventKind::DiracLaplaceLeft,
    };

    let mut inner_acc = CliffordOperator::zero(n, d);
    for node in inner.nodes() {
        let kern = resolvent(right_kernel, node.s, t)?;
        let weight = node.weight.as_multivector(n) * node.s.pow(power).as_multivector(n);
        inner_acc = &inner_acc + &kern.scale_right(&weight);
    }

    let mut outer_acc = CliffordOperator::zero(n, d);
    for node in outer.nodes() {
        let kern = resolvent(left_kernel, node.s, t)?;
        let weight = node.s.pow(power).as_multivector(n) * node.weight.as_multivector(n);
        outer_acc = &outer_acc + &kern.scale_left(&weight);
    }

    Ok(ProjectorPair {
        inner: inner_acc.scale(constant),
        outer: outer_acc.scale(constant),
    })
}
