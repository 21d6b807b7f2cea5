//! Resolvent operators on the S-spectrum and the identity battery that
//! machine-checks the resolvent equations satisfied by them.
//!
//! For a paravector operator `T` with commuting components and a paravector
//! point `s` off the S-spectrum, the commutative pseudo-resolvent is the
//! inverse of
//!
//! ```text
//! Q_{c,s}(T) = s^2 I - s (T + conj(T)) + T conj(T),
//! ```
//!
//! a matrix whose off-diagonal entries are real multiples of the paravector
//! `s`. Every other resolvent is assembled from `Q_{c,s}(T)^{-1}`:
//!
//! * `S_L^{-1}(s,T) = (s I - conj(T)) Q^{-1}`, the left slice resolvent,
//!   and its right twin `S_R^{-1} = Q^{-1} (s I - conj(T))`;
//! * the Dirac-kind resolvents `-4 Q^{-1}` (one factor of the Dirac
//!   operator applied to the slice kernel);
//! * the Laplace-kind resolvents `-8 S_L^{-1} Q^{-1}` / `-8 Q^{-1} S_R^{-1}`;
//! * the degree-two kinds `64 S_L^{-1} Q^{-2}` / `64 Q^{-2} S_R^{-1}` and
//!   `16 Q^{-2}` arising from the second-order parts of the kernel's fine
//!   structure.
//!
//! The [`IdentityId`] catalog lists every resolvent equation, product
//! formula, and entangled-product identity the library asserts; its
//! members share the right-slice bracket
//!
//! ```text
//! bracket(X) = (X p - conj(s) X) (p^2 - 2 Re(s) p + |s|^2)^{-1},
//! ```
//!
//! the operator-valued analogue of dividing by `p - s` one slice at a time.
//! [`check_identity`] evaluates both sides at concrete sample points and
//! reports a scale-free residual; [`identity_residual_sweep`] drives it over
//! seeded admissible samples.

use crate::algebra::{sphere_distance, Multivector, Paravector, UnitImaginary};
use crate::error::{Error, Result};
use crate::operators::{CliffordOperator, ParavectorOperator};
use crate::slice::slice_quadratic;
use crate::tolerances;
use rand::Rng;

// ═══════════════════════════════════════════════════════════════════════
//  Resolvent kinds
// ═══════════════════════════════════════════════════════════════════════

/// The resolvent operators of the harmonic and biharmonic calculi.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ResolventKind {
    /// `Q_{c,s}(T)^{-1}`.
    Pseudo,
    /// `Q_{c,s}(T)^{-2}`.
    PseudoSquared,
    /// `S_L^{-1}(s,T) = (s I - conj(T)) Q^{-1}`.
    SLeft,
    /// `S_R^{-1}(s,T) = Q^{-1} (s I - conj(T))`.
    SRight,
    /// `-4 Q^{-1}` (left orientation).
    DiracLeft,
    /// `-4 Q^{-1}` (right orientation; same operator).
    DiracRight,
    /// `-8 S_L^{-1}(s,T) Q^{-1}`.
    LaplaceLeft,
    /// `-8 Q^{-1} S_R^{-1}(s,T)`.
    LaplaceRight,
    /// `64 S_L^{-1}(s,T) Q^{-2}`.
    FueterLeft,
    /// `64 Q^{-2} S_R^{-1}(s,T)`.
    FueterRight,
    /// `16 Q^{-2}` (left orientation).
    DiracLaplaceLeft,
    /// `16 Q^{-2}` (right orientation; same operator).
    DiracLaplaceRight,
}

/// `Q_{c,s}(T) = s^2 I - 2 s T_0 + T conj(T)` as a Clifford matrix.
#[must_use]
pub fn q_c(s: Paravector, t: &ParavectorOperator) -> CliffordOperator {
    let n = t.n();
    let d = t.d();
    let s_sq = s.square().as_multivector(n);
    let s_mv = s.as_multivector(n);
    let two_t0 = t.twice_scalar_comp();
    let modulus = t.modulus_comp();
    let mut out = CliffordOperator::zero(n, d);
    for i in 0..d {
        for j in 0..d {
            let mut e = s_mv * (-two_t0[(i, j)]) + Multivector::scalar(n, modulus[(i, j)]);
            if i == j {
                e += s_sq;
            }
            out.set_entry(i, j, e);
        }
    }
    out
}

fn spectrum_guard(s: Paravector, t: &ParavectorOperator) -> Result<()> {
    let pt = s.sphere_point();
    let threshold =
        tolerances::SPHERE_MEMBERSHIP_REL * (1.0 + s.modulus() + t.spectral_radius());
    let dist = t
        .spectrum_points()
        .iter()
        .map(|&q| sphere_distance(pt, q))
        .fold(f64::INFINITY, f64::min);
    if dist < threshold {
        return Err(Error::OnSpectrum { distance: dist });
    }
    Ok(())
}

/// Inverse of `Q_{c,s}(T)`, refusing points on (or numerically touching)
/// the S-spectrum.
///
/// # Errors
///
/// [`Error::OnSpectrum`] when `s` lies on a spectral sphere, and the
/// inversion errors of [`CliffordOperator::inverse`].
pub fn q_c_inverse(s: Paravector, t: &ParavectorOperator) -> Result<CliffordOperator> {
    spectrum_guard(s, t)?;
    q_c(s, t).inverse()
}

/// The resolvent of the requested kind at `s`.
///
/// For the conjugate-argument variants (`S_R^{-1}(s, conj(T))` and
/// friends) pass `&t.conj()`; the pseudo-resolvent is insensitive to the
/// conjugation, so the two share all inner inverses.
///
/// # Errors
///
/// Propagates [`q_c_inverse`] failures.
pub fn resolvent(
    kind: ResolventKind,
    s: Paravector,
    t: &ParavectorOperator,
) -> Result<CliffordOperator> {
    let q = q_c_inverse(s, t)?;
    let n = t.n();
    let d = t.d();
    let s_id = CliffordOperator::scalar_identity(n, d, &s.as_multivector(n));
    let tbar = t.conj().to_clifford();
    let s_minus_tbar = &s_id - &tbar;
    Ok(match kind {
        ResolventKind::Pseudo => q,
        ResolventKind::PseudoSquared => &q * &q,
        ResolventKind::SLeft => &s_minus_tbar * &q,
        ResolventKind::SRight => &q * &s_minus_tbar,
        ResolventKind::DiracLeft | ResolventKind::DiracRight => q.scale(-4.0),
        ResolventKind::LaplaceLeft => (&(&s_minus_tbar * &q) * &q).scale(-8.0),
        ResolventKind::LaplaceRight => (&q * &(&q * &s_minus_tbar)).scale(-8.0),
        ResolventKind::FueterLeft => (&(&s_minus_tbar * &q) * &(&q * &q)).scale(64.0),
        ResolventKind::FueterRight => (&(&q * &q) * &(&q * &s_minus_tbar)).scale(64.0),
        ResolventKind::DiracLaplaceLeft | ResolventKind::DiracLaplaceRight => {
            (&q * &q).scale(16.0)
        }
    })
}

// ═══════════════════════════════════════════════════════════════════════
//  Identity catalog
// ═══════════════════════════════════════════════════════════════════════

/// How many free paravector points an identity consumes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Arity {
    /// One point `s`.
    SingleVariable,
    /// Two points `s`, `p`.
    TwoVariable,
    /// Two points plus a central operator factor `B`.
    TwoVariableWithFactor,
}

/// Every resolvent identity the battery asserts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IdentityId {
    /// `S_L^{-1}(s) s - T S_L^{-1}(s) = I`.
    LeftSResolvent,
    /// `s S_R^{-1}(s) - S_R^{-1}(s) T = I`.
    RightSResolvent,
    /// `S_R^{-1}(s) B S_L^{-1}(p) = bracket(S_R^{-1}(s) B - B S_L^{-1}(p))`
    /// for central `B` commuting with `T`.
    GeneralizedSResolvent,
    /// `S_{Lap,L}^{-1}(s) s - T S_{Lap,L}^{-1}(s) = -8 Q^{-1}(s)`.
    DeltaResolventLeft,
    /// `s S_{Lap,R}^{-1}(s) - S_{Lap,R}^{-1}(s) T = -8 Q^{-1}(s)`.
    DeltaResolventRight,
    /// The central slice quadratic commutes through `Q^{-1}(p)`.
    PseudoCommutesDeg1,
    /// The central slice quadratic commutes through `Q^{-2}(p)`.
    PseudoCommutesDeg2,
    /// Entangled product `S_R^{-1}(s) Q^{-1}(p)` in bracket form.
    EntangledRightPseudo,
    /// Entangled product `Q^{-1}(s) S_L^{-1}(p)` in bracket form.
    EntangledPseudoLeft,
    /// Entangled product `Q^{-1}(s) T Q^{-1}(p)` in bracket form.
    EntangledPseudoMiddleT,
    /// Entangled product `Q^{-1}(s) conj(T) Q^{-1}(p)` in bracket form.
    EntangledPseudoMiddleTbar,
    /// Difference formula for mixed first-degree pseudo-resolvent products.
    MixedPseudoDifference,
    /// Product formula tying Dirac-kind and slice resolvents.
    BiharmonicResolvent,
    /// `F_L(s) s - T F_L(s) = 64 Q^{-2}(s)`.
    FResolventLeft,
    /// `s F_R(s) - F_R(s) T = 64 Q^{-2}(s)`.
    FResolventRight,
    /// Entangled products of squared pseudo-resolvents in bracket form.
    SquaredPseudoEntangled,
    /// Difference formula for squared pseudo-resolvent products.
    SquaredPseudoDifference,
    /// Product formula of the harmonic fine structure, mixed arguments.
    HarmonicResolventMixed,
    /// Product formula of the harmonic fine structure, plain arguments.
    HarmonicResolventPlain,
}

impl IdentityId {
    /// All identities, in catalog order.
    pub const ALL: [IdentityId; 19] = [
        IdentityId::LeftSResolvent,
        IdentityId::RightSResolvent,
        IdentityId::GeneralizedSResolvent,
        IdentityId::DeltaResolventLeft,
        IdentityId::DeltaResolventRight,
        IdentityId::PseudoCommutesDeg1,
        IdentityId::PseudoCommutesDeg2,
        IdentityId::EntangledRightPseudo,
        IdentityId::EntangledPseudoLeft,
        IdentityId::EntangledPseudoMiddleT,
        IdentityId::EntangledPseudoMiddleTbar,
        IdentityId::MixedPseudoDifference,
        IdentityId::BiharmonicResolvent,
        IdentityId::FResolventLeft,
        IdentityId::FResolventRight,
        IdentityId::SquaredPseudoEntangled,
        IdentityId::SquaredPseudoDifference,
        IdentityId::HarmonicResolventMixed,
        IdentityId::HarmonicResolventPlain,
    ];

    /// Stable machine name.
    #[must_use]
    pub fn name(&self) -> &'static str {
        match self {
            IdentityId::LeftSResolvent => "left-s-resolvent",
            IdentityId::RightSResolvent => "right-s-resolvent",
            IdentityId::GeneralizedSResolvent => "generalized-s-resolvent",
            IdentityId::DeltaResolventLeft => "delta-resolvent-left",
            IdentityId::DeltaResolventRight => "delta-resolvent-right",
            IdentityId::PseudoCommutesDeg1 => "pseudo-commutes-deg1",
            IdentityId::PseudoCommutesDeg2 => "pseudo-commutes-deg2",
            IdentityId::EntangledRightPseudo => "entangled-right-pseudo",
            IdentityId::EntangledPseudoLeft => "entangled-pseudo-left",
            IdentityId::EntangledPseudoMiddleT => "entangled-pseudo-middle-t",
            IdentityId::EntangledPseudoMiddleTbar => "entangled-pseudo-middle-tbar",
            IdentityId::MixedPseudoDifference => "mixed-pseudo-difference",
            IdentityId::BiharmonicResolvent => "biharmonic-resolvent",
            IdentityId::FResolventLeft => "f-resolvent-left",
            IdentityId::FResolventRight => "f-resolvent-right",
            IdentityId::SquaredPseudoEntangled => "squared-pseudo-entangled",
            IdentityId::SquaredPseudoDifference => "squared-pseudo-difference",
            IdentityId::HarmonicResolventMixed => "harmonic-resolvent-mixed",
            IdentityId::HarmonicResolventPlain => "harmonic-resolvent-plain",
        }
    }

    /// Number and kind of free inputs.
    #[must_use]
    pub fn arity(&self) -> Arity {
        match self {
            IdentityId::LeftSResolvent
            | IdentityId::RightSResolvent
            | IdentityId::DeltaResolventLeft
            | IdentityId::DeltaResolventRight
            | IdentityId::FResolventLeft
            | IdentityId::FResolventRight => Arity::SingleVariable,
            IdentityId::GeneralizedSResolvent => Arity::TwoVariableWithFactor,
            _ => Arity::TwoVariable,
        }
    }

    /// Whether a central operator factor `B` must be supplied.
    #[must_use]
    pub fn requires_factor(&self) -> bool {
        self.arity() == Arity::TwoVariableWithFactor
    }
}

impl std::fmt::Display for IdentityId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Catalog entry: identity, human-readable anchor, and arity.
#[derive(Clone, Copy, Debug)]
pub struct IdentityDescriptor {
    /// Which identity.
    pub id: IdentityId,
    /// Descriptive name of the equation being asserted.
    pub anchor: &'static str,
    /// Input shape.
    pub arity: Arity,
}

/// The full identity catalog, in a stable order.
#[must_use]
pub fn catalog() -> &'static [IdentityDescriptor] {
    const CATALOG: [IdentityDescriptor; 19] = [
        IdentityDescriptor {
            id: IdentityId::LeftSResolvent,
            anchor: "left S-resolvent equation",
            arity: Arity::SingleVariable,
        },
        IdentityDescriptor {
            id: IdentityId::RightSResolvent,
            anchor: "right S-resolvent equation",
            arity: Arity::SingleVariable,
        },
        IdentityDescriptor {
            id: IdentityId::GeneralizedSResolvent,
            anchor: "generalized S-resolvent equation with central factor",
            arity: Arity::TwoVariableWithFactor,
        },
        IdentityDescriptor {
            id: IdentityId::DeltaResolventLeft,
            anchor: "Laplace-kind resolvent equation, left",
            arity: Arity::SingleVariable,
        },
        IdentityDescriptor {
            id: IdentityId::DeltaResolventRight,
            anchor: "Laplace-kind resolvent equation, right",
            arity: Arity::SingleVariable,
        },
        IdentityDescriptor {
            id: IdentityId::PseudoCommutesDeg1,
            anchor: "slice quadratic commutes with the pseudo-resolvent",
            arity: Arity::TwoVariable,
        },
        IdentityDescriptor {
            id: IdentityId::PseudoCommutesDeg2,
            anchor: "slice quadratic commutes with the squared pseudo-resolvent",
            arity: Arity::TwoVariable,
        },
        IdentityDescriptor {
            id: IdentityId::EntangledRightPseudo,
            anchor: "bracket form of S_R^{-1}(s) Q^{-1}(p)",
            arity: Arity::TwoVariable,
        },
        IdentityDescriptor {
            id: IdentityId::EntangledPseudoLeft,
            anchor: "bracket form of Q^{-1}(s) S_L^{-1}(p)",
            arity: Arity::TwoVariable,
        },
        IdentityDescriptor {
            id: IdentityId::EntangledPseudoMiddleT,
            anchor: "bracket form of Q^{-1}(s) T Q^{-1}(p)",
            arity: Arity::TwoVariable,
        },
        IdentityDescriptor {
            id: IdentityId::EntangledPseudoMiddleTbar,
            anchor: "bracket form of Q^{-1}(s) conj(T) Q^{-1}(p)",
            arity: Arity::TwoVariable,
        },
        IdentityDescriptor {
            id: IdentityId::MixedPseudoDifference,
            anchor: "difference formula for mixed pseudo-resolvent products",
            arity: Arity::TwoVariable,
        },
        IdentityDescriptor {
            id: IdentityId::BiharmonicResolvent,
            anchor: "Dirac-kind resolvent product formula",
            arity: Arity::TwoVariable,
        },
        IdentityDescriptor {
            id: IdentityId::FResolventLeft,
            anchor: "degree-two resolvent equation, left",
            arity: Arity::SingleVariable,
        },
        IdentityDescriptor {
            id: IdentityId::FResolventRight,
            anchor: "degree-two resolvent equation, right",
            arity: Arity::SingleVariable,
        },
        IdentityDescriptor {
            id: IdentityId::SquaredPseudoEntangled,
            anchor: "bracket form of squared pseudo-resolvent products",
            arity: Arity::TwoVariable,
        },
        IdentityDescriptor {
            id: IdentityId::SquaredPseudoDifference,
            anchor: "difference formula for squared pseudo-resolvent products",
            arity: Arity::TwoVariable,
        },
        IdentityDescriptor {
            id: IdentityId::HarmonicResolventMixed,
            anchor: "harmonic fine-structure product formula, mixed arguments",
            arity: Arity::TwoVariable,
        },
        IdentityDescriptor {
            id: IdentityId::HarmonicResolventPlain,
            anchor: "harmonic fine-structure product formula, plain arguments",
            arity: Arity::TwoVariable,
        },
    ];
    &CATALOG
}

// ═══════════════════════════════════════════════════════════════════════
//  Identity evaluation
// ═══════════════════════════════════════════════════════════════════════

/// Residual of one identity at one sample.
#[derive(Clone, Copy, Debug)]
pub struct IdentityResidual {
    /// Which identity was evaluated.
    pub id: IdentityId,
    /// First sample point.
    pub s: Paravector,
    /// Second sample point, when the identity uses one.
    pub p: Option<Paravector>,
    /// Scale-free residual `|LHS - RHS| / max(|LHS|, |RHS|, 1)`.
    pub residual: f64,
}

/// Which of the two sample points a cached quantity refers to.
#[derive(Clone, Copy)]
enum At {
    S,
    P,
}

/// Per-sample cache: the two pseudo-resolvent inverses plus the fixed
/// operator pieces every identity is assembled from.
struct Ctx<'a> {
    t: &'a ParavectorOperator,
    s: Paravector,
    p: Paravector,
    qs: CliffordOperator,
    qp: CliffordOperator,
    tc: CliffordOperator,
    tbar: CliffordOperator,
    tvec: CliffordOperator,
    ident: CliffordOperator,
}

impl<'a> Ctx<'a> {
    fn new(t: &'a ParavectorOperator, s: Paravector, p: Paravector) -> Result<Self> {
        Ok(Ctx {
            t,
            s,
            p,
            qs: q_c_inverse(s, t)?,
            qp: q_c_inverse(p, t)?,
            tc: t.to_clifford(),
            tbar: t.conj().to_clifford(),
            tvec: t.vector_op(),
            ident: CliffordOperator::identity(t.n(), t.d()),
        })
    }

    fn x(&self, at: At) -> Paravector {
        match at {
            At::S => self.s,
            At::P => self.p,
        }
    }

    fn x_mv(&self, at: At) -> Multivector {
        self.x(at).as_multivector(self.t.n())
    }

    fn q(&self, at: At) -> &CliffordOperator {
        match at {
            At::S => &self.qs,
            At::P => &self.qp,
        }
    }

    fn q2(&self, at: At) -> CliffordOperator {
        self.q(at) * self.q(at)
    }

    fn x_id(&self, at: At) -> CliffordOperator {
        CliffordOperator::scalar_identity(self.t.n(), self.t.d(), &self.x_mv(at))
    }

    /// `S_L^{-1}(x, T) = (x I - conj(T)) Q^{-1}(x)`.
    fn sl(&self, at: At) -> CliffordOperator {
        &(&self.x_id(at) - &self.tbar) * self.q(at)
    }

    /// `S_R^{-1}(x, T) = Q^{-1}(x) (x I - conj(T))`.
    fn sr(&self, at: At) -> CliffordOperator {
        self.q(at) * &(&self.x_id(at) - &self.tbar)
    }

    /// `S_L^{-1}(x, conj(T)) = (x I - T) Q^{-1}(x)`.
    fn sl_bar(&self, at: At) -> CliffordOperator {
        &(&self.x_id(at) - &self.tc) * self.q(at)
    }

    /// `S_R^{-1}(x, conj(T)) = Q^{-1}(x) (x I - T)`.
    fn sr_bar(&self, at: At) -> CliffordOperator {
        self.q(at) * &(&self.x_id(at) - &self.tc)
    }

    /// `bracket(X) = (X p - conj(s) X) (p^2 - 2 Re(s) p + |s|^2)^{-1}`.
    fn bracket(&self, x: &CliffordOperator) -> Result<CliffordOperator> {
        let n = self.t.n();
        let qsp = slice_quadratic(self.p, self.s);
        let qsp_inv = qsp.inverse().map_err(|_| Error::SphereCollision {
            separation: sphere_distance(self.s.sphere_point(), self.p.sphere_point()),
        })?;
        let p_mv = self.p.as_multivector(n);
        let sbar_mv = self.s.conj().as_multivector(n);
        let inner = &x.scale_right(&p_mv) - &x.scale_left(&sbar_mv);
        Ok(inner.scale_right(&qsp_inv.as_multivector(n)))
    }
}

fn scaled_residual(lhs: &CliffordOperator, rhs: &CliffordOperator) -> f64 {
    let diff = (lhs - rhs).frobenius_norm();
    diff / lhs.frobenius_norm().max(rhs.frobenius_norm()).max(1.0)
}

/// Evaluate both sides of an identity at explicit sample points and return
/// the scale-free residual.
///
/// Single-variable identities ignore `p`. The central factor `b` is only
/// consulted by [`IdentityId::GeneralizedSResolvent`] and is required there.
///
/// # Errors
///
/// Inversion and spectrum-guard errors from the resolvents;
/// [`Error::InvalidConstruction`] when a required factor is missing;
/// [`Error::SphereCollision`] when `p` lies on the sphere of `s` (the
/// bracket divisor vanishes).
pub fn check_identity(
    id: IdentityId,
    t: &ParavectorOperator,
    s: Paravector,
    p: Paravector,
    b: Option<&CliffordOperator>,
) -> Result<f64> {
    let ctx = Ctx::new(t, s, p)?;
    let (lhs, rhs) = evaluate_sides(id, &ctx, b)?;
    Ok(scaled_residual(&lhs, &rhs))
}

fn evaluate_sides(
    id: IdentityId,
    ctx: &Ctx<'_>,
    b: Option<&CliffordOperator>,
) -> Result<(CliffordOperator, CliffordOperator)> {
    use At::{P, S};
    let n = ctx.t.n();
    Ok(match id {
        IdentityId::LeftSResolvent => {
            let sl = ctx.sl(S);
            let lhs = &sl.scale_right(&ctx.x_mv(S)) - &(&ctx.tc * &sl);
            (lhs, ctx.ident.clone())
        }
        IdentityId::RightSResolvent => {
            let sr = ctx.sr(S);
            let lhs = &sr.scale_left(&ctx.x_mv(S)) - &(&sr * &ctx.tc);
            (lhs, ctx.ident.clone())
        }
        IdentityId::GeneralizedSResolvent => {
            let b = b.ok_or_else(|| {
                Error::invalid("the generalized resolvent equation needs a central factor")
            })?;
            let sr = ctx.sr(S);
            let sl = ctx.sl(P);
            let lhs = &(&sr * b) * &sl;
            let rhs = ctx.bracket(&(&(&sr * b) - &(b * &sl)))?;
            (lhs, rhs)
        }
        IdentityId::DeltaResolventLeft => {
            let lap = (&ctx.sl(S) * ctx.q(S)).scale(-8.0);
            let lhs = &lap.scale_right(&ctx.x_mv(S)) - &(&ctx.tc * &lap);
            (lhs, ctx.q(S).scale(-8.0))
        }
        IdentityId::DeltaResolventRight => {
            let lap = (ctx.q(S) * &ctx.sr(S)).scale(-8.0);
            let lhs = &lap.scale_left(&ctx.x_mv(S)) - &(&lap * &ctx.tc);
            (lhs, ctx.q(S).scale(-8.0))
        }
        IdentityId::PseudoCommutesDeg1 | IdentityId::PseudoCommutesDeg2 => {
            let qsp = slice_quadratic(ctx.p, ctx.s)
                .inverse()
                .map_err(|_| Error::SphereCollision {
                    separation: sphere_distance(ctx.s.sphere_point(), ctx.p.sphere_point()),
                })?
                .as_multivector(n);
            let target = match id {
                IdentityId::PseudoCommutesDeg1 => ctx.q(P).clone(),
                _ => ctx.q2(P),
            };
            (target.scale_left(&qsp), target.scale_right(&qsp))
        }
        IdentityId::EntangledRightPseudo => {
            let sr = ctx.sr(S);
            let lhs = &sr * ctx.q(P);
            let inner = &(&lhs.scale_right(&ctx.x_mv(P)) - &(&(&sr * &ctx.tc) * ctx.q(P)))
                - ctx.q(P);
            (lhs.clone(), ctx.bracket(&inner)?)
        }
        IdentityId::EntangledPseudoLeft => {
            let sl = ctx.sl(P);
            let lhs = ctx.q(S) * &sl;
            let inner = &(ctx.q(S) - &lhs.scale_left(&ctx.x_mv(S)))
                + &(&(ctx.q(S) * &ctx.tc) * &sl);
            (lhs.clone(), ctx.bracket(&inner)?)
        }
        IdentityId::EntangledPseudoMiddleT => {
            let lhs = &(ctx.q(S) * &ctx.tc) * ctx.q(P);
            let inner = &(&(ctx.q(S) * &ctx.tc) * &ctx.sl(P))
                - &(&(&ctx.sr(S) * &ctx.tc) * ctx.q(P));
            (lhs, ctx.bracket(&inner)?)
        }
        IdentityId::EntangledPseudoMiddleTbar => {
            let lhs = &(ctx.q(S) * &ctx.tbar) * ctx.q(P);
            let inner = &(&ctx.sr(S) * ctx.q(P)).scale_right(&ctx.x_mv(P))
                - &(ctx.q(S) * &ctx.sl(P)).scale_left(&ctx.x_mv(S));
            (lhs, ctx.bracket(&inner)?.scale(-1.0))
        }
        IdentityId::MixedPseudoDifference => {
            let lhs = &(&(&ctx.sr(S) * ctx.q(P)) + &(ctx.q(S) * &ctx.sl(P)))
                - &(&(ctx.q(S) * &ctx.tvec) * ctx.q(P)).scale(2.0);
            let rhs = ctx.bracket(&(ctx.q(S) - ctx.q(P)))?;
            (lhs, rhs)
        }
        IdentityId::BiharmonicResolvent => {
            let lhs = &(&ctx.q(S).scale(-4.0) * &ctx.sl(P))
                + &(&ctx.sr_bar(S) * &ctx.q(P).scale(-4.0));
            let rhs = ctx.bracket(&(ctx.q(S) - ctx.q(P)).scale(-4.0))?;
            (lhs, rhs)
        }
        IdentityId::FResolventLeft => {
            let f = (&ctx.sl(S) * &ctx.q2(S)).scale(64.0);
            let lhs = &f.scale_right(&ctx.x_mv(S)) - &(&ctx.tc * &f);
            (lhs, ctx.q2(S).scale(64.0))
        }
        IdentityId::FResolventRight => {
            let f = (&ctx.q2(S) * &ctx.sr(S)).scale(64.0);
            let lhs = &f.scale_left(&ctx.x_mv(S)) - &(&f * &ctx.tc);
            (lhs, ctx.q2(S).scale(64.0))
        }
        IdentityId::SquaredPseudoEntangled => {
            let sr = ctx.sr(S);
            let sl = ctx.sl(P);
            let lhs = &(&sr * &ctx.q2(P)) + &(&ctx.q2(S) * &sl);
            let inner1 = &ctx.q2(S) - &ctx.q2(P);
            let inner2 = &(&(&(&(&ctx.q2(S) * &ctx.tc) * &sl)
                - &(&ctx.q2(S) * &sl).scale_left(&ctx.x_mv(S)))
                + &(&sr * &ctx.q2(P)).scale_right(&ctx.x_mv(P)))
                - &(&(&sr * &ctx.tc) * &ctx.q2(P));
            let rhs = &ctx.bracket(&inner1)? + &ctx.bracket(&inner2)?;
            (lhs, rhs)
        }
        IdentityId::SquaredPseudoDifference => {
            let sr = ctx.sr(S);
            let sl = ctx.sl(P);
            let qsrslqp = &(ctx.q(S) * &sr) * &(&sl * ctx.q(P));
            let lhs = &(&(&(&(&(&(&sr * &ctx.q2(P)) + &(&ctx.q2(S) * &sl))
                - &(&(&(ctx.q(S) * &sr) * &ctx.tc) * &(&sl * ctx.q(P))).scale(2.0))
                + &qsrslqp.scale_right(&ctx.x_mv(P)))
                + &qsrslqp.scale_left(&ctx.x_mv(S)))
                - &(&(&ctx.q2(S) * &ctx.tvec) * ctx.q(P)).scale(2.0))
                - &(&(ctx.q(S) * &ctx.tvec) * &ctx.q2(P)).scale(2.0);
            let rhs = ctx.bracket(&(&ctx.q2(S) - &ctx.q2(P)))?;
            (lhs, rhs)
        }
        IdentityId::HarmonicResolventMixed => {
            let lhs = &(&(&(&ctx.sr_bar(S) * &ctx.q2(P).scale(16.0))
                + &(&ctx.q2(S).scale(16.0) * &ctx.sl_bar(P)))
                + &(&(ctx.q(S) * &ctx.sl(P)) * ctx.q(P)).scale(16.0))
                + &(&(ctx.q(S) * &ctx.sr(S)) * ctx.q(P)).scale(16.0);
            let rhs = ctx.bracket(&(&ctx.q2(S) - &ctx.q2(P)).scale(16.0))?;
            (lhs, rhs)
        }
        IdentityId::HarmonicResolventPlain => {
            let lhs = &(&(&(&ctx.sr(S) * &ctx.q2(P).scale(16.0))
                + &(&ctx.q2(S).scale(16.0) * &ctx.sl(P)))
                + &(&(ctx.q(S) * &ctx.sl_bar(P)) * ctx.q(P)).scale(16.0))
                + &(&(ctx.q(S) * &ctx.sr_bar(S)) * ctx.q(P)).scale(16.0);
            let rhs = ctx.bracket(&(&ctx.q2(S) - &ctx.q2(P)).scale(16.0))?;
            (lhs, rhs)
        }
    })
}

// ═══════════════════════════════════════════════════════════════════════
//  Admissible sampling
// ═══════════════════════════════════════════════════════════════════════

/// Draw one paravector point keeping a safe distance from the S-spectrum.
///
/// The real part and the vector modulus are uniform over a box 1.5 times
/// the spectral radius (floored at one); candidates whose sphere comes
/// within [`tolerances::SPECTRUM_MARGIN_FACTOR`] of a spectral sphere are
/// rejected and redrawn.
///
/// # Errors
///
/// [`Error::SamplerExhausted`] after
/// [`tolerances::SAMPLER_MAX_REJECTIONS`] consecutive rejections.
pub fn sample_point(t: &ParavectorOperator, rng: &mut impl Rng) -> Result<Paravector> {
    let scale = t.spectral_radius().max(1.0);
    let extent = 1.5 * scale;
    let margin = tolerances::SPECTRUM_MARGIN_FACTOR * scale;
    let spectrum = t.spectrum_points();
    for _ in 0..tolerances::SAMPLER_MAX_REJECTIONS {
        let re = rng.random_range(-extent..extent);
        let r = rng.random_range(0.0..extent);
        let dir = UnitImaginary::random(t.n(), rng);
        let cand = dir.scaled(r) + Paravector::real(re);
        let pt = cand.sphere_point();
        let dist = spectrum
            .iter()
            .map(|&q| sphere_distance(pt, q))
            .fold(f64::INFINITY, f64::min);
        if dist >= margin {
            return Ok(cand);
        }
    }
    Err(Error::SamplerExhausted {
        rejections: tolerances::SAMPLER_MAX_REJECTIONS,
    })
}

/// Draw an admissible pair `(s, p)` whose spheres are also separated from
/// each other (the bracket divisor `p^2 - 2 Re(s) p + |s|^2` stays away
/// from zero).
///
/// # Errors
///
/// [`Error::SamplerExhausted`] as for [`sample_point`].
pub fn sample_point_pair(
    t: &ParavectorOperator,
    rng: &mut impl Rng,
) -> Result<(Paravector, Paravector)> {
    let scale = t.spectral_radius().max(1.0);
    let separation = tolerances::SPHERE_SEPARATION_MIN * scale;
    for _ in 0..tolerances::SAMPLER_MAX_REJECTIONS {
        let s = sample_point(t, rng)?;
        let p = sample_point(t, rng)?;
        if sphere_distance(s.sphere_point(), p.sphere_point()) >= separation {
            return Ok((s, p));
        }
    }
    Err(Error::SamplerExhausted {
        rejections: tolerances::SAMPLER_MAX_REJECTIONS,
    })
}

/// A random central element of the algebra: a scalar, plus a pseudoscalar
/// share when the generator count is odd (the pseudoscalar is central
/// exactly then).
fn central_element(n: u8, rng: &mut impl Rng) -> Multivector {
    let mut c = Multivector::scalar(n, rng.random_range(-1.0..1.0));
    if n % 2 == 1 {
        c += Multivector::pseudoscalar(n) * rng.random_range(-1.0..1.0);
    }
    c
}

/// Random operator factor `B = c_0 + c_1 T + c_2 T^2` with central
/// coefficients, guaranteed to commute with `T` and `conj(T)`.
///
/// # Errors
///
/// [`Error::NonCommutingB`] if the commutation re-check fails (it cannot
/// for this construction; the guard protects future extensions).
pub fn sample_central_factor(
    t: &ParavectorOperator,
    rng: &mut impl Rng,
) -> Result<CliffordOperator> {
    let n = t.n();
    let d = t.d();
    let tc = t.to_clifford();
    let mut b = CliffordOperator::zero(n, d);
    let mut power = CliffordOperator::identity(n, d);
    for k in 0..3 {
        let c = central_element(n, rng);
        b = &b + &power.scale_left(&c);
        if k < 2 {
            power = &power * &tc;
        }
    }
    let comm = (&(&b * &tc) - &(&tc * &b)).frobenius_norm();
    let rel = comm / (b.frobenius_norm() * tc.frobenius_norm() + 1.0);
    if rel > tolerances::COMMUTATION_REL {
        return Err(Error::NonCommutingB { residual: rel });
    }
    Ok(b)
}

/// Run one identity over seeded admissible samples.
///
/// # Errors
///
/// Propagates sampling and evaluation errors.
pub fn identity_residual_sweep(
    id: IdentityId,
    t: &ParavectorOperator,
    samples: usize,
    rng: &mut impl Rng,
) -> Result<Vec<IdentityResidual>> {
    let mut out = Vec::with_capacity(samples);
    for _ in 0..samples {
        let (s, p) = sample_point_pair(t, rng)?;
        let factor = if id.requires_factor() {
            Some(sample_central_factor(t, rng)?)
        } else {
            None
        };
        let residual = check_identity(id, t, s, p, factor.as_ref())?;
        out.push(IdentityResidual {
            id,
            s,
            p: match id.arity() {
                Arity::SingleVariable => None,
                _ => Some(p),
            },
            residual,
        });
    }
    Ok(out)
}
