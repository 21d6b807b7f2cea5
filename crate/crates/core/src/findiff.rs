//! Finite-difference verification of the pointwise kernel identities and
//! the fine structure of slice-regular functions on `R^{n+1}`.
//!
//! The generalized Cauchy-Riemann (Dirac) operator on paravector space is
//!
//! ```text
//! D = d/dx_0 + e_1 d/dx_1 + ... + e_n d/dx_n,
//! ```
//!
//! applied from the left to left kernels and from the right to right
//! kernels; the Laplacian sums the `n + 1` plain second derivatives. Both
//! are discretized by second-order central stencils with step `h`, so every
//! checked identity must converge at order two as `h` halves — and the
//! chains that are exact at stencil level must sit inside a pure-roundoff
//! envelope growing like `eps / h^k`.
//!
//! Verified facts:
//!
//! * `D` of the slice Cauchy kernel equals `-4 (x^2 - 2 Re(s) x + |s|^2)^{-1}`
//!   (five generators), and `D Lap` of the kernel equals `16` times the
//!   square of that inverse;
//! * for a slice polynomial, the third Fueter-Sce chain vanishes:
//!   `D Lap^2 f = 0` in every nesting order;
//! * slice values of intrinsic polynomials are axially symmetric,
//!   `f(x_0 + J r) = A(x_0, r) + J B(x_0, r)` with `A`, `B` independent
//!   of `J` — and a non-slice function fails this loudly;
//! * the factorization `D conj(D) = Lap` holds at stencil level up to
//!   second-order error.

use crate::algebra::{sphere_distance, Multivector, Paravector, UnitImaginary};
use crate::error::{Error, Result};
use crate::slice::{cauchy_kernel, slice_quadratic, KernelForm, Side, StemPolynomial};
use crate::tolerances;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use std::sync::Arc;

/// A sampled field: any function of a point of `R^6` (unused coordinates
/// stay zero) with multivector values.
pub type PointFn = Arc<dyn Fn(&[f64; 6]) -> Multivector + Send + Sync>;

// ═══════════════════════════════════════════════════════════════════════
//  Sample geometry
// ═══════════════════════════════════════════════════════════════════════

/// Axis-aligned box of probe points.
#[derive(Clone, Copy, Debug)]
pub struct SampleBox {
    /// Box center, coordinates `x_0 .. x_5`.
    pub center: [f64; 6],
    /// Half of the edge length, shared by all active coordinates.
    pub half_width: f64,
}

impl SampleBox {
    /// New box.
    ///
    /// # Errors
    ///
    /// [`Error::InvalidConstruction`] for a non-positive or non-finite
    /// half-width.
    pub fn new(center: [f64; 6], half_width: f64) -> Result<Self> {
        if !half_width.is_finite() || half_width <= 0.0 {
            return Err(Error::invalid("sample box needs a positive half-width"));
        }
        Ok(SampleBox { center, half_width })
    }

    /// Deterministic uniform probe points in the box, active in the first
    /// `n + 1` coordinates.
    #[must_use]
    pub fn probes(&self, n: u8, count: usize, seed: u64) -> Vec<[f64; 6]> {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| {
                let mut p = self.center;
                for (mu, coord) in p.iter_mut().enumerate().take(n as usize + 1) {
                    *coord =
                        self.center[mu] + self.half_width * rng.random_range(-1.0..1.0);
                }
                p
            })
            .collect()
    }
}

/// Point of `R^6` as a paravector.
#[must_use]
pub fn point_paravector(p: &[f64; 6]) -> Paravector {
    Paravector::new(p[0], [p[1], p[2], p[3], p[4], p[5]])
}

/// The field induced by a stem polynomial.
#[must_use]
pub fn stem_function(f: &StemPolynomial) -> PointFn {
    let f = f.clone();
    Arc::new(move |p| f.eval(point_paravector(p)))
}

/// The slice Cauchy kernel at fixed `s` as a field in `x`.
///
/// The closure panics when evaluated on the singular sphere of `s`; all
/// checks in this module guard their probes beforehand.
#[must_use]
pub fn cauchy_kernel_function(side: Side, s: Paravector, n: u8) -> PointFn {
    Arc::new(move |p| {
        cauchy_kernel(side, KernelForm::FormII, s, point_paravector(p), n)
            .expect("kernel probe guarded away from the singular sphere")
    })
}

// ═══════════════════════════════════════════════════════════════════════
//  Stencil operators
// ═══════════════════════════════════════════════════════════════════════

fn shifted(p: &[f64; 6], mu: usize, delta: f64) -> [f64; 6] {
    let mut q = *p;
    q[mu] += delta;
    q
}

/// Central first derivative in coordinate `mu`.
#[must_use]
pub fn partial(f: &PointFn, mu: usize, h: f64) -> PointFn {
    let f = Arc::clone(f);
    Arc::new(move |p| (f(&shifted(p, mu, h)) - f(&shifted(p, mu, -h))) * (0.5 / h))
}

/// Dirac operator applied from the left: `sum_mu e_mu (d f / d x_mu)`.
#[must_use]
pub fn dirac_left(n: u8, f: &PointFn, h: f64) -> PointFn {
    let f = Arc::clone(f);
    Arc::new(move |p| {
        let mut acc = (f(&shifted(p, 0, h)) - f(&shifted(p, 0, -h))) * (0.5 / h);
        for i in 1..=n as usize {
            let diff = (f(&shifted(p, i, h)) - f(&shifted(p, i, -h))) * (0.5 / h);
            acc += Multivector::basis_vector(n, i) * diff;
        }
        acc
    })
}

/// Dirac operator applied from the right: `sum_mu (d f / d x_mu) e_mu`.
#[must_use]
pub fn dirac_right(n: u8, f: &PointFn, h: f64) -> PointFn {
    let f = Arc::clone(f);
    Arc::new(move |p| {
        let mut acc = (f(&shifted(p, 0, h)) - f(&shifted(p, 0, -h))) * (0.5 / h);
        for i in 1..=n as usize {
            let diff = (f(&shifted(p, i, h)) - f(&shifted(p, i, -h))) * (0.5 / h);
            acc += diff * Multivector::basis_vector(n, i);
        }
        acc
    })
}

/// Conjugated Dirac operator from the left:
/// `d/dx_0 - sum_i e_i d/dx_i`.
#[must_use]
pub fn dirac_conj_left(n: u8, f: &PointFn, h: f64) -> PointFn {
    let f = Arc::clone(f);
    Arc::new(move |p| {
        let mut acc = (f(&shifted(p, 0, h)) - f(&shifted(p, 0, -h))) * (0.5 / h);
        for i in 1..=n as usize {
            let diff = (f(&shifted(p, i, h)) - f(&shifted(p, i, -h))) * (0.5 / h);
            acc -= Multivector::basis_vector(n, i) * diff;
        }
        acc
    })
}

/// Laplacian over the `n + 1` paravector coordinates.
#[must_use]
pub fn laplacian(n: u8, f: &PointFn, h: f64) -> PointFn {
    let f = Arc::clone(f);
    Arc::new(move |p| {
        let center = f(p) * (-2.0 * (n as f64 + 1.0));
        let mut acc = center;
        for mu in 0..=n as usize {
            acc += f(&shifted(p, mu, h)) + f(&shifted(p, mu, -h));
        }
        acc * (1.0 / (h * h))
    })
}

// ═══════════════════════════════════════════════════════════════════════
//  Convergence bookkeeping
// ═══════════════════════════════════════════════════════════════════════

/// Estimated convergence orders between consecutive step sizes.
#[must_use]
pub fn convergence_orders(h_values: &[f64], residuals: &[f64]) -> Vec<f64> {
    h_values
        .windows(2)
        .zip(residuals.windows(2))
        .map(|(h, r)| {
            let num = (r[0].max(f64::MIN_POSITIVE) / r[1].max(f64::MIN_POSITIVE)).ln();
            let den = (h[0] / h[1]).ln();
            num / den
        })
        .collect()
}

/// Shared probe configuration for the pointwise checks.
#[derive(Clone, Debug)]
pub struct KernelProbeConfig {
    /// Where to probe.
    pub sbox: SampleBox,
    /// Descending stencil steps.
    pub h_values: Vec<f64>,
    /// Number of probe points.
    pub probe_count: usize,
    /// Seed for the probe generator.
    pub probe_seed: u64,
}

impl KernelProbeConfig {
    fn validate(&self) -> Result<()> {
        if self.h_values.is_empty() || self.probe_count == 0 {
            return Err(Error::invalid(
                "kernel probing needs at least one step size and one probe",
            ));
        }
        let positive = self
            .h_values
            .iter()
            .all(|&h| h.is_finite() && h > 0.0);
        let descending = self.h_values.windows(2).all(|w| w[1] < w[0]);
        if !positive || !descending {
            return Err(Error::invalid(
                "step sizes must be positive and strictly descending",
            ));
        }
        Ok(())
    }
}

/// Which derivative of the kernel is compared against its closed form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KernelDerivative {
    /// `D` of the kernel against `-4 (x^2 - 2 Re(s) x + |s|^2)^{-1}`.
    Dirac,
    /// `D Lap` of the kernel against `16` times the squared inverse.
    DiracLaplace,
}

impl KernelDerivative {
    /// Stable machine name.
    #[must_use]
    pub fn name(&self) -> &'static str {
        match self {
            KernelDerivative::Dirac => "dirac",
            KernelDerivative::DiracLaplace => "dirac-laplace",
        }
    }

    /// Expected constant in front of the inverse power.
    #[must_use]
    pub fn expected_constant(&self) -> f64 {
        match self {
            KernelDerivative::Dirac => -4.0,
            KernelDerivative::DiracLaplace => 16.0,
        }
    }

    fn inverse_power(&self) -> u32 {
        match self {
            KernelDerivative::Dirac => 1,
            KernelDerivative::DiracLaplace => 2,
        }
    }
}

/// Result of one pointwise kernel-identity sweep.
#[derive(Clone, Debug)]
pub struct KernelIdentityCheck {
    /// The step sizes used (descending).
    pub h_values: Vec<f64>,
    /// Max over probes of the relative residual, one per step size.
    pub max_residuals: Vec<f64>,
    /// Convergence orders between consecutive steps.
    pub orders: Vec<f64>,
    /// Max over probes of the Richardson combination
    /// `|4 e(h_fine) - e(h_coarse)| / 3` of the finest pair, relative;
    /// near zero exactly when the residual is pure second-order stencil
    /// error around the claimed closed form.
    pub extrapolated: f64,
}

/// Compare a stencil derivative of the slice Cauchy kernel with its closed
/// form across step sizes.
///
/// `constant_override` replaces the expected constant (negative controls:
/// a wrong constant must push the residual up by orders of magnitude).
///
/// # Errors
///
/// [`Error::GridTooSmall`] when a probe (plus stencil reach) comes too
/// close to the singular sphere of `s`; configuration errors for empty or
/// non-descending step lists.
pub fn check_kernel_identity(
    side: Side,
    deriv: KernelDerivative,
    s: Paravector,
    n: u8,
    cfg: &KernelProbeConfig,
    constant_override: Option<f64>,
) -> Result<KernelIdentityCheck> {
    cfg.validate()?;
    let probes = cfg.sbox.probes(n, cfg.probe_count, cfg.probe_seed);
    let h_max = cfg.h_values[0];
    let required = 10.0 * h_max;
    for p in &probes {
        let dist = sphere_distance(point_paravector(p).sphere_point(), s.sphere_point());
        if dist < required {
            return Err(Error::GridTooSmall {
                needed: required,
                available: dist,
            });
        }
    }

    let constant = constant_override.unwrap_or_else(|| deriv.expected_constant());
    let kernel = cauchy_kernel_function(side, s, n);
    let exact: Vec<Multivector> = probes
        .iter()
        .map(|p| {
            let q = slice_quadratic(s, point_paravector(p));
            let qi = q.inverse().expect("probe guarded away from the sphere");
            let power = match deriv.inverse_power() {
                1 => qi,
                _ => qi.square(),
            };
            power.as_multivector(n) * constant
        })
        .collect();

    // Per-probe error multivectors for each h, so the Richardson
    // combination can cancel the leading h^2 term exactly.
    let mut errors: Vec<Vec<Multivector>> = Vec::with_capacity(cfg.h_values.len());
    for &h in &cfg.h_values {
        let derived: PointFn = match (deriv, side) {
            (KernelDerivative::Dirac, Side::Left) => dirac_left(n, &kernel, h),
            (KernelDerivative::Dirac, Side::Right) => dirac_right(n, &kernel, h),
            (KernelDerivative::DiracLaplace, Side::Left) => {
                dirac_left(n, &laplacian(n, &kernel, h), h)
            }
            (KernelDerivative::DiracLaplace, Side::Right) => {
                dirac_right(n, &laplacian(n, &kernel, h), h)
            }
        };
        errors.push(
            probes
                .iter()
                .zip(exact.iter())
                .map(|(p, ex)| derived(p) - *ex)
                .collect(),
        );
    }

    let scale: Vec<f64> = exact.iter().map(|ex| ex.norm() + 1.0).collect();
    let max_residuals: Vec<f64> = errors
        .iter()
        .map(|errs| {
            errs.iter()
                .zip(scale.iter())
                .map(|(e, s)| e.norm() / s)
                .fold(0.0, f64::max)
        })
        .collect();
    let orders = convergence_orders(&cfg.h_values, &max_residuals);
    let extrapolated = if errors.len() >= 2 {
        let fine = &errors[errors.len() - 1];
        let coarse = &errors[errors.len() - 2];
        fine.iter()
            .zip(coarse.iter())
            .zip(scale.iter())
            .map(|((f, c), s)| (*f * 4.0 - *c).norm() / (3.0 * s))
            .fold(0.0, f64::max)
    } else {
        f64::NAN
    };

    Ok(KernelIdentityCheck {
        h_values: cfg.h_values.clone(),
        max_residuals,
        orders,
        extrapolated,
    })
}

// ═══════════════════════════════════════════════════════════════════════
//  Fine-structure chains
// ═══════════════════════════════════════════════════════════════════════

/// Nesting order of the third-chain operator `D Lap^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ChainOrder {
    /// `D (Lap (Lap f))`.
    DiracAfterBilaplacian,
    /// `Lap (D (Lap f))`.
    LaplaceAroundDirac,
    /// `Lap (Lap (D f))`.
    BilaplacianAfterDirac,
}

impl ChainOrder {
    /// Stable machine name.
    #[must_use]
    pub fn name(&self) -> &'static str {
        match self {
            ChainOrder::DiracAfterBilaplacian => "dirac-after-bilaplacian",
            ChainOrder::LaplaceAroundDirac => "laplace-around-dirac",
            ChainOrder::BilaplacianAfterDirac => "bilaplacian-after-dirac",
        }
    }

    /// All nesting orders.
    pub const ALL: [ChainOrder; 3] = [
        ChainOrder::DiracAfterBilaplacian,
        ChainOrder::LaplaceAroundDirac,
        ChainOrder::BilaplacianAfterDirac,
    ];
}

/// Result of a chain-annihilation sweep.
#[derive(Clone, Debug)]
pub struct ChainCheck {
    /// The step sizes used (descending).
    pub h_values: Vec<f64>,
    /// Max over probes of the chain value norm, one per step size.
    pub max_values: Vec<f64>,
    /// Convergence orders between consecutive steps.
    pub orders: Vec<f64>,
    /// Max over probes of the function norm (roundoff-envelope scale).
    pub function_scale: f64,
}

/// Evaluate one nesting of `D Lap^2` on a slice polynomial over the probe
/// box; the result must either converge to zero at second order or sit
/// inside the roundoff envelope when the stencil is exact.
///
/// # Errors
///
/// Configuration errors for empty or non-descending step lists.
pub fn check_fine_structure_chain(
    f: &StemPolynomial,
    chain: ChainOrder,
    cfg: &KernelProbeConfig,
) -> Result<ChainCheck> {
    cfg.validate()?;
    let n = f.n();
    let probes = cfg.sbox.probes(n, cfg.probe_count, cfg.probe_seed);
    let base = stem_function(f);
    let function_scale = probes
        .iter()
        .map(|p| base(p).norm())
        .fold(0.0, f64::max);

    let mut max_values = Vec::with_capacity(cfg.h_values.len());
    for &h in &cfg.h_values {
        let composed: PointFn = match chain {
            ChainOrder::DiracAfterBilaplacian => {
                dirac_left(n, &laplacian(n, &laplacian(n, &base, h), h), h)
            }
            ChainOrder::LaplaceAroundDirac => {
                laplacian(n, &dirac_left(n, &laplacian(n, &base, h), h), h)
            }
            ChainOrder::BilaplacianAfterDirac => {
                laplacian(n, &laplacian(n, &dirac_left(n, &base, h), h), h)
            }
        };
        let max = probes
            .iter()
            .map(|p| composed(p).norm())
            .fold(0.0, f64::max);
        max_values.push(max);
    }
    let orders = convergence_orders(&cfg.h_values, &max_values);

    Ok(ChainCheck {
        h_values: cfg.h_values.clone(),
        max_values,
        orders,
        function_scale,
    })
}

// ═══════════════════════════════════════════════════════════════════════
//  Structural spot checks
// ═══════════════════════════════════════════════════════════════════════

/// Max disagreement of the axial parts `A`, `B` of `f(x_0 + J r)` across
/// the given slice directions (relative). Slice functions agree to
/// roundoff; a generic field does not.
///
/// # Errors
///
/// [`Error::AxisTooClose`] for radii below [`tolerances::AXIS_MIN_RADIUS`];
/// [`Error::InvalidConstruction`] when fewer than two directions are given.
pub fn check_axial_symmetry(
    n: u8,
    f: &PointFn,
    x0: f64,
    r: f64,
    directions: &[UnitImaginary],
) -> Result<f64> {
    if r < tolerances::AXIS_MIN_RADIUS {
        return Err(Error::AxisTooClose { radius: r });
    }
    if directions.len() < 2 {
        return Err(Error::invalid(
            "axial comparison needs at least two slice directions",
        ));
    }
    let eval_at = |j: &UnitImaginary, radius: f64| -> Multivector {
        let pv = j.point(x0, radius);
        let mut p = [0.0; 6];
        p[0] = pv.x0;
        p[1..6].copy_from_slice(&pv.xv);
        f(&p)
    };
    let parts: Vec<(Multivector, Multivector)> = directions
        .iter()
        .map(|j| {
            let plus = eval_at(j, r);
            let minus = eval_at(j, -r);
            let a = (plus + minus) * 0.5;
            let b = -(j.as_multivector().promoted(n) * ((plus - minus) * 0.5));
            (a, b)
        })
        .collect();
    let scale = parts
        .iter()
        .map(|(a, b)| a.norm().max(b.norm()))
        .fold(0.0, f64::max)
        + 1.0;
    let mut gap: f64 = 0.0;
    for i in 0..parts.len() {
        for k in (i + 1)..parts.len() {
            gap = gap
                .max((parts[i].0 - parts[k].0).norm() / scale)
                .max((parts[i].1 - parts[k].1).norm() / scale);
        }
    }
    Ok(gap)
}

/// Max over probes of the relative gap between the stencil composition
/// `D (conj(D) f)` and the stencil Laplacian of `f` — the factorization
/// of the Laplacian through the Dirac operator.
///
/// # Errors
///
/// Configuration errors as for [`check_fine_structure_chain`].
pub fn check_dirac_factorization(
    f: &StemPolynomial,
    cfg: &KernelProbeConfig,
) -> Result<Vec<f64>> {
    cfg.validate()?;
    let n = f.n();
    let probes = cfg.sbox.probes(n, cfg.probe_count, cfg.probe_seed);
    let base = stem_function(f);
    let mut gaps = Vec::with_capacity(cfg.h_values.len());
    for &h in &cfg.h_values {
        let through_dirac = dirac_left(n, &dirac_conj_left(n, &base, h), h);
        let plain = laplacian(n, &base, h);
        let gap = probes
            .iter()
            .map(|p| {
                let lhs = through_dirac(p);
                let rhs = plain(p);
                (lhs - rhs).norm() / (rhs.norm() + 1.0)
            })
            .fold(0.0, f64::max);
        gaps.push(gap);
    }
    Ok(gaps)
}
