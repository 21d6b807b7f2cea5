//! Verification harness: runs the identity battery, the calculus checks
//! and the pointwise kernel checks under one seeded configuration and
//! emits machine-readable reports.
//!
//! Output determinism is a design requirement: two runs with the same
//! configuration produce byte-identical JSON. Everything random is derived
//! from the configured seed through per-task labels (so enabling
//! parallelism cannot reorder or perturb results), floats are rendered in
//! a fixed scientific format, and wall-clock timings are opt-in precisely
//! because they would break reproducibility.

use crate::algebra::{Multivector, Paravector, UnitImaginary};
use crate::calculus::{
    apply, polynomial_of_operator, product_rule_biharmonic, product_rule_harmonic,
    riesz_projector, BiharmonicRule, CalculusKind, HarmonicRule, ProjectorKind,
};
use crate::contour::Contour;
use crate::error::{Error, Result};
use crate::findiff::{
    check_axial_symmetry, check_dirac_factorization, check_fine_structure_chain,
    check_kernel_identity, stem_function, ChainOrder, KernelDerivative, KernelProbeConfig,
    PointFn, SampleBox,
};
use crate::operators::{random_basis, random_commuting_operator, CliffordOperator, ParavectorOperator};
use crate::resolvents::{
    catalog, identity_residual_sweep, q_c_inverse, resolvent, sample_point_pair,
    IdentityDescriptor, ResolventKind,
};
use crate::slice::{cauchy_kernel, KernelForm, Side, StemPolynomial};
use crate::tolerances;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::sync::Arc;
use std::time::Instant;

// ═══════════════════════════════════════════════════════════════════════
//  Configuration
// ═══════════════════════════════════════════════════════════════════════

fn default_n() -> u8 {
    5
}
fn default_d_values() -> Vec<usize> {
    vec![1, 2, 4]
}
fn default_seed() -> u64 {
    42
}
fn default_samples() -> usize {
    50
}
fn default_contour_nodes() -> usize {
    256
}
fn default_product_rule_cases() -> usize {
    20
}
fn default_identity_tolerance() -> f64 {
    tolerances::IDENTITY_RESIDUAL_REL
}
fn default_reproduction_tolerance() -> f64 {
    tolerances::POLY_REPRODUCTION_REL
}
fn default_product_rule_tolerance() -> f64 {
    tolerances::PRODUCT_RULE_REL
}
fn default_projector_tolerance() -> f64 {
    tolerances::PROJECTOR_REL
}
fn default_independence_tolerance() -> f64 {
    tolerances::SLICE_INDEPENDENCE_REL
}

/// Harness configuration; every field has a sensible default, so an empty
/// JSON object is a valid configuration file.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HarnessConfig {
    /// Generator count of the ambient algebra (the pointwise kernel suite
    /// requires five).
    #[serde(default = "default_n")]
    pub n: u8,
    /// Operator ranks exercised by the identity battery.
    #[serde(default = "default_d_values")]
    pub d_values: Vec<usize>,
    /// Master seed; all randomness derives from it.
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Sample points per identity and rank.
    #[serde(default = "default_samples")]
    pub samples_per_identity: usize,
    /// Quadrature nodes for the calculus contours.
    #[serde(default = "default_contour_nodes")]
    pub contour_nodes: usize,
    /// Seeded `(f, g, T)` cases per product rule.
    #[serde(default = "default_product_rule_cases")]
    pub product_rule_cases: usize,
    /// Optional explicit eigenvalue rows `[x_0, x_1, ..., x_5]` replacing
    /// the random operators of the identity battery.
    #[serde(default)]
    pub eigenvalues: Option<Vec<[f64; 6]>>,
    /// Bound for identity residuals.
    #[serde(default = "default_identity_tolerance")]
    pub identity_tolerance: f64,
    /// Bound for polynomial reproduction through the slice calculus.
    #[serde(default = "default_reproduction_tolerance")]
    pub reproduction_tolerance: f64,
    /// Bound for product-rule residuals.
    #[serde(default = "default_product_rule_tolerance")]
    pub product_rule_tolerance: f64,
    /// Bound for projector idempotency and form agreement.
    #[serde(default = "default_projector_tolerance")]
    pub projector_tolerance: f64,
    /// Bound for slice/contour independence.
    #[serde(default = "default_independence_tolerance")]
    pub independence_tolerance: f64,
    /// Also run the negative controls (deliberately wrong constants and
    /// non-slice functions that must fail loudly).
    #[serde(default)]
    pub negative_controls: bool,
    /// Evaluate identity tasks on a thread pool (does not change results).
    #[serde(default)]
    pub parallel: bool,
    /// Attach wall-clock timings to records (breaks byte reproducibility).
    #[serde(default)]
    pub timings: bool,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        HarnessConfig {
            n: default_n(),
            d_values: default_d_values(),
            seed: default_seed(),
            samples_per_identity: default_samples(),
            contour_nodes: default_contour_nodes(),
            product_rule_cases: default_product_rule_cases(),
            eigenvalues: None,
            identity_tolerance: default_identity_tolerance(),
            reproduction_tolerance: default_reproduction_tolerance(),
            product_rule_tolerance: default_product_rule_tolerance(),
            projector_tolerance: default_projector_tolerance(),
            independence_tolerance: default_independence_tolerance(),
            negative_controls: false,
            parallel: false,
            timings: false,
        }
    }
}

impl HarnessConfig {
    /// Validate ranges and shapes.
    ///
    /// # Errors
    ///
    /// [`Error::ConfigInvalid`] describing the first offending field.
    pub fn validate(&self) -> Result<()> {
        if !(1..=5).contains(&self.n) {
            return Err(Error::config("n must be between 1 and 5"));
        }
        if self.d_values.is_empty() {
            return Err(Error::config("d_values must not be empty"));
        }
        if self.d_values.iter().any(|&d| d == 0 || d > 16) {
            return Err(Error::config("every rank must be between 1 and 16"));
        }
        if self.samples_per_identity == 0 {
            return Err(Error::config("samples_per_identity must be positive"));
        }
        if self.contour_nodes < 8 || self.contour_nodes % 2 != 0 {
            return Err(Error::config("contour_nodes must be even and at least 8"));
        }
        if self.product_rule_cases == 0 {
            return Err(Error::config("product_rule_cases must be positive"));
        }
        for (name, v) in [
            ("identity_tolerance", self.identity_tolerance),
            ("reproduction_tolerance", self.reproduction_tolerance),
            ("product_rule_tolerance", self.product_rule_tolerance),
            ("projector_tolerance", self.projector_tolerance),
            ("independence_tolerance", self.independence_tolerance),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::config(format!("{name} must be positive and finite")));
            }
        }
        if let Some(rows) = &self.eigenvalues {
            if rows.is_empty() || rows.len() > 16 {
                return Err(Error::config(
                    "explicit eigenvalue tables need between 1 and 16 rows",
                ));
            }
        }
        Ok(())
    }
}

// ═══════════════════════════════════════════════════════════════════════
//  Records and reports
// ═══════════════════════════════════════════════════════════════════════

/// One checked quantity.
#[derive(Clone, Debug, Serialize)]
pub struct Record {
    /// Suite the record belongs to.
    pub suite: String,
    /// Stable machine name, slash-separated.
    pub name: String,
    /// Human-readable description of the asserted fact.
    pub anchor: String,
    /// FNV-1a digest of name, value, bound and outcome (hex).
    pub digest: String,
    /// Measured value.
    pub value: f64,
    /// Bound the value is compared against.
    pub bound: f64,
    /// Comparison direction: `"<="` or `">="`.
    pub relation: String,
    /// Whether the comparison held.
    pub pass: bool,
    /// Whether this is a negative control (expected to sit on the failing
    /// side of the honest bound).
    pub control: bool,
    /// Wall-clock milliseconds, when timings are enabled.
    pub wall_ms: Option<f64>,
}

/// Pass/fail totals.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Summary {
    /// Number of records.
    pub total: usize,
    /// Records that passed.
    pub passed: usize,
    /// Records that failed.
    pub failed: usize,
    /// Negative-control records (included in the totals).
    pub controls: usize,
}

/// A full harness run.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    /// Effective configuration.
    pub config: HarnessConfig,
    /// All records, in a stable order.
    pub records: Vec<Record>,
    /// Aggregated outcome.
    pub summary: Summary,
}

impl Report {
    /// Whether every record passed.
    #[must_use]
    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }
}

/// 64-bit FNV-1a.
#[must_use]
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

fn task_seed(seed: u64, label: &str) -> u64 {
    fnv1a64(label.as_bytes()) ^ seed.wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

// One parameter per record field; bundling them would only obscure call
// sites that read in field order.
#[allow(clippy::too_many_arguments)]
fn make_record(
    suite: &str,
    name: String,
    anchor: String,
    value: f64,
    bound: f64,
    relation: &str,
    control: bool,
    wall_ms: Option<f64>,
) -> Record {
    let pass = match relation {
        "<=" => value.is_finite() && value <= bound,
        ">=" => value >= bound,
        _ => false,
    };
    let mut digest_input = Vec::with_capacity(name.len() + 17);
    digest_input.extend_from_slice(name.as_bytes());
    digest_input.extend_from_slice(&value.to_bits().to_le_bytes());
    digest_input.extend_from_slice(&bound.to_bits().to_le_bytes());
    digest_input.push(u8::from(pass));
    let digest = format!("{:016x}", fnv1a64(&digest_input));
    Record {
        suite: suite.to_string(),
        name,
        anchor,
        digest,
        value,
        bound,
        relation: relation.to_string(),
        pass,
        control,
        wall_ms,
    }
}

fn timed<T>(
    enabled: bool,
    f: impl FnOnce() -> Result<T>,
) -> Result<(T, Option<f64>)> {
    let start = enabled.then(Instant::now);
    let value = f()?;
    Ok((value, start.map(|t| t.elapsed().as_secs_f64() * 1e3)))
}

// ═══════════════════════════════════════════════════════════════════════
//  Suites
// ═══════════════════════════════════════════════════════════════════════

/// The three suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SuiteId {
    /// Resolvent identity battery.
    Identities,
    /// Contour calculi: reproduction, product rules, projectors.
    Calculus,
    /// Pointwise kernel derivatives, chains and axiality.
    Kernels,
}

impl SuiteId {
    /// Stable machine name.
    #[must_use]
    pub fn name(&self) -> &'static str {
        match self {
            SuiteId::Identities => "identities",
            SuiteId::Calculus => "calculus",
            SuiteId::Kernels => "kernels",
        }
    }

    /// All suites, in report order.
    pub const ALL: [SuiteId; 3] = [SuiteId::Identities, SuiteId::Calculus, SuiteId::Kernels];
}

impl std::fmt::Display for SuiteId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

fn operator_from_rows(n: u8, rows: &[[f64; 6]]) -> Result<ParavectorOperator> {
    let evs: Vec<Paravector> = rows
        .iter()
        .map(|r| Paravector::new(r[0], [r[1], r[2], r[3], r[4], r[5]]))
        .collect();
    ParavectorOperator::commuting(n, &evs, None)
}

struct IdentityTask {
    n: u8,
    d: usize,
    desc: IdentityDescriptor,
    samples: usize,
    label: String,
}

fn identity_task_record(cfg: &HarnessConfig, task: &IdentityTask) -> Result<Record> {
    let (max_residual, wall) = timed(cfg.timings, || {
        let t = match (&cfg.eigenvalues, task.n == cfg.n) {
            (Some(rows), true) => operator_from_rows(task.n, rows)?,
            _ => {
                let mut op_rng = ChaCha12Rng::seed_from_u64(task_seed(
                    cfg.seed,
                    &format!("operator/n{}/d{}", task.n, task.d),
                ));
                random_commuting_operator(task.n, task.d, &mut op_rng, task.d == 1)
            }
        };
        let mut rng = ChaCha12Rng::seed_from_u64(task_seed(cfg.seed, &task.label));
        let residuals = identity_residual_sweep(task.desc.id, &t, task.samples, &mut rng)?;
        Ok(residuals
            .iter()
            .map(|r| r.residual)
            .fold(0.0_f64, f64::max))
    })?;
    Ok(make_record(
        SuiteId::Identities.name(),
        task.label.clone(),
        task.desc.anchor.to_string(),
        max_residual,
        cfg.identity_tolerance,
        "<=",
        false,
        wall,
    ))
}

/// Run the identity battery.
///
/// # Errors
///
/// Configuration, sampling and inversion errors.
pub fn run_identities(cfg: &HarnessConfig) -> Result<Vec<Record>> {
    cfg.validate()?;
    let mut tasks: Vec<IdentityTask> = Vec::new();
    let d_values: Vec<usize> = match &cfg.eigenvalues {
        Some(rows) => vec![rows.len()],
        None => cfg.d_values.clone(),
    };
    for &d in &d_values {
        for desc in catalog() {
            tasks.push(IdentityTask {
                n: cfg.n,
                d,
                desc: *desc,
                samples: cfg.samples_per_identity,
                label: format!("identity/{}/d{}", desc.id, d),
            });
        }
    }
    // Quaternionic degeneration: the same equations in the three-generator
    // algebra.
    if cfg.n > 3 {
        for desc in catalog() {
            tasks.push(IdentityTask {
                n: 3,
                d: 2,
                desc: *desc,
                samples: cfg.samples_per_identity.min(10),
                label: format!("identity/{}/n3-d2", desc.id),
            });
        }
    }

    let mut records: Vec<Record> = if cfg.parallel {
        tasks
            .par_iter()
            .map(|task| identity_task_record(cfg, task))
            .collect::<Result<Vec<_>>>()?
    } else {
        tasks
            .iter()
            .map(|task| identity_task_record(cfg, task))
            .collect::<Result<Vec<_>>>()?
    };

    if cfg.negative_controls {
        records.push(identity_negative_control(cfg)?);
    }
    Ok(records)
}

/// Negative control: the Laplace-kind resolvent equation with a wrong
/// right-hand constant (-7 instead of -8) must produce a large residual.
fn identity_negative_control(cfg: &HarnessConfig) -> Result<Record> {
    let (residual, wall) = timed(cfg.timings, || {
        let mut rng = ChaCha12Rng::seed_from_u64(task_seed(cfg.seed, "identity-control"));
        let t = random_commuting_operator(cfg.n, 2, &mut rng, false);
        let (s, _) = sample_point_pair(&t, &mut rng)?;
        let lap = resolvent(ResolventKind::LaplaceLeft, s, &t)?;
        let tc = t.to_clifford();
        let lhs = &lap.scale_right(&s.as_multivector(cfg.n)) - &(&tc * &lap);
        let rhs = q_c_inverse(s, &t)?.scale(-7.0);
        let diff = (&lhs - &rhs).frobenius_norm();
        Ok(diff / lhs.frobenius_norm().max(rhs.frobenius_norm()).max(1.0))
    })?;
    Ok(make_record(
        SuiteId::Identities.name(),
        "identity-control/wrong-laplace-constant".to_string(),
        "Laplace-kind resolvent equation with -7 instead of -8 must fail".to_string(),
        residual,
        1e-2,
        ">=",
        true,
        wall,
    ))
}

/// Eigenvalues pinned for the reproduction and convergence records: two
/// spheres of modulus one and two.
fn reproduction_operator(n: u8) -> Result<ParavectorOperator> {
    let evs = [
        Paravector::new(0.6, [0.8, 0.0, 0.0, 0.0, 0.0]),
        Paravector::new(-1.2, [0.0, 1.6, 0.0, 0.0, 0.0]),
    ];
    ParavectorOperator::commuting(n, &evs, None)
}

fn relative_gap(a: &CliffordOperator, b: &CliffordOperator) -> f64 {
    (a - b).frobenius_norm() / a.frobenius_norm().max(b.frobenius_norm()).max(1.0)
}

/// Run the calculus suite.
///
/// # Errors
///
/// Configuration, contour and inversion errors.
pub fn run_calculus(cfg: &HarnessConfig) -> Result<Vec<Record>> {
    cfg.validate()?;
    let n = cfg.n;
    let suite = SuiteId::Calculus.name();
    let mut records = Vec::new();

    // ── Polynomial reproduction and convergence ──
    let t = reproduction_operator(n)?;
    let j = UnitImaginary::axis(n, 1);
    let contour = Contour::new(0.0, 2.3, j, cfg.contour_nodes)?;
    let half_contour = Contour::new(0.0, 2.3, j, (cfg.contour_nodes / 2).max(8))?;
    let mut coarse_err = f64::NAN;
    let mut fine_err = f64::NAN;
    for m in 0..=4usize {
        let f = StemPolynomial::monomial(Side::Left, n, m);
        let ((value, coarse), wall) = timed(cfg.timings, || {
            let exact = polynomial_of_operator(&f, &t);
            let scale = exact.frobenius_norm().max(1.0);
            let fine = apply(CalculusKind::Slice, &f, &t, &contour)?;
            let coarse = apply(CalculusKind::Slice, &f, &t, &half_contour)?;
            Ok((
                (&fine - &exact).frobenius_norm() / scale,
                (&coarse - &exact).frobenius_norm() / scale,
            ))
        })?;
        if m == 4 {
            coarse_err = coarse;
            fine_err = value;
        }
        records.push(make_record(
            suite,
            format!("calculus/reproduction/z{m}"),
            format!("slice calculus reproduces the monomial of degree {m}"),
            value,
            cfg.reproduction_tolerance,
            "<=",
            false,
            wall,
        ));
    }
    records.push(make_record(
        suite,
        "calculus/convergence-drop/z4".to_string(),
        "doubling the node count collapses the quadrature error".to_string(),
        coarse_err / fine_err.max(1e-15),
        tolerances::CONVERGENCE_DROP_MIN,
        ">=",
        false,
        None,
    ));

    // ── Degree-lowering kernels annihilate constants ──
    let one = StemPolynomial::monomial(Side::Left, n, 0);
    for kind in [
        CalculusKind::Dirac,
        CalculusKind::Laplace,
        CalculusKind::DiracLaplace,
    ] {
        let (value, wall) = timed(cfg.timings, || {
            Ok(apply(kind, &one, &t, &contour)?.frobenius_norm())
        })?;
        records.push(make_record(
            suite,
            format!("calculus/annihilates-constants/{kind}"),
            format!("the {kind} part of a constant vanishes"),
            value,
            cfg.reproduction_tolerance,
            "<=",
            false,
            wall,
        ));
    }

    // ── Slice and contour independence ──
    let poly = StemPolynomial::from_real(Side::Left, n, &[0.5, -1.0, 0.25, 2.0]);
    let ((independence, weight_sum), wall) = timed(cfg.timings, || {
        let mut rng =
            ChaCha12Rng::seed_from_u64(task_seed(cfg.seed, "calculus/independence"));
        let mut reference: Option<CliffordOperator> = None;
        let mut max_gap: f64 = 0.0;
        let mut max_weight: f64 = 0.0;
        for k in 0..5 {
            let dir = UnitImaginary::random(n, &mut rng);
            let radius = if k % 2 == 0 { 2.3 } else { 2.99 };
            let c = Contour::new(0.0, radius, dir, cfg.contour_nodes)?;
            max_weight = max_weight.max(c.weight_sum_normalized());
            let value = apply(CalculusKind::Slice, &poly, &t, &c)?;
            match &reference {
                None => reference = Some(value),
                Some(r) => max_gap = max_gap.max(relative_gap(r, &value)),
            }
        }
        Ok((max_gap, max_weight))
    })?;
    records.push(make_record(
        suite,
        "calculus/contour-independence".to_string(),
        "the operator value is independent of the slice direction and radius".to_string(),
        independence,
        cfg.independence_tolerance,
        "<=",
        false,
        wall,
    ));
    records.push(make_record(
        suite,
        "calculus/weight-sum".to_string(),
        "quadrature weights of a closed contour sum to zero".to_string(),
        weight_sum,
        tolerances::WEIGHT_SUM_REL,
        "<=",
        false,
        None,
    ));

    // ── Product rules ──
    records.extend(product_rule_records(cfg)?);

    // ── Projectors ──
    records.extend(projector_records(cfg)?);

    Ok(records)
}

fn random_intrinsic(n: u8, rng: &mut impl Rng) -> Result<StemPolynomial> {
    let degree = rng.random_range(1..=4usize);
    let coeffs: Vec<f64> = (0..=degree).map(|_| rng.random_range(-1.0..1.0)).collect();
    Ok(StemPolynomial::from_real(Side::Left, n, &coeffs))
}

fn random_left_polynomial(n: u8, rng: &mut impl Rng) -> Result<StemPolynomial> {
    let degree = rng.random_range(1..=4usize);
    let coeffs: Vec<Multivector> = (0..=degree)
        .map(|_| {
            let mut c = [0.0; crate::algebra::BLADE_COUNT];
            let blades = 1usize << n;
            for v in c.iter_mut().take(blades) {
                *v = rng.random_range(-1.0..1.0);
            }
            Multivector::from_coeffs(n, c)
        })
        .collect::<Result<_>>()?;
    StemPolynomial::new(Side::Left, n, coeffs)
}

fn product_rule_records(cfg: &HarnessConfig) -> Result<Vec<Record>> {
    let n = cfg.n;
    let suite = SuiteId::Calculus.name();
    let nodes = 96usize.max(cfg.contour_nodes / 2);
    let mut worst = [0.0_f64; 4];
    let (_, wall) = timed(cfg.timings, || {
        let mut rng =
            ChaCha12Rng::seed_from_u64(task_seed(cfg.seed, "calculus/product-rules"));
        for _ in 0..cfg.product_rule_cases {
            let t = random_commuting_operator(n, 2, &mut rng, false);
            let f = random_intrinsic(n, &mut rng)?;
            let g = random_left_polynomial(n, &mut rng)?;
            let scale = t.spectral_radius().max(1.0);
            let j = UnitImaginary::axis(n, 1);
            let inner = Contour::new(0.0, 1.5 * scale, j, nodes)?;
            let outer = Contour::new(0.0, 2.0 * scale, j, nodes)?;
            let checks = [
                product_rule_biharmonic(
                    BiharmonicRule::ConjugateOnIntrinsic,
                    &f,
                    &g,
                    &t,
                    &inner,
                    &outer,
                )?,
                product_rule_biharmonic(
                    BiharmonicRule::ConjugateOnGeneral,
                    &f,
                    &g,
                    &t,
                    &inner,
                    &outer,
                )?,
                product_rule_harmonic(
                    HarmonicRule::ConjugateOnSlice,
                    &f,
                    &g,
                    &t,
                    &inner,
                    &outer,
                )?,
                product_rule_harmonic(
                    HarmonicRule::ConjugateOnLaplace,
                    &f,
                    &g,
                    &t,
                    &inner,
                    &outer,
                )?,
            ];
            for (w, c) in worst.iter_mut().zip(checks.iter()) {
                *w = w.max(c.residual);
            }
        }
        Ok(())
    })?;
    let names = [
        BiharmonicRule::ConjugateOnIntrinsic.name(),
        BiharmonicRule::ConjugateOnGeneral.name(),
        HarmonicRule::ConjugateOnSlice.name(),
        HarmonicRule::ConjugateOnLaplace.name(),
    ];
    let anchors = [
        "Dirac-kind product rule, conjugate operator under the intrinsic factor",
        "Dirac-kind product rule, conjugate operator under the general factor",
        "combined-kind product rule, conjugate operator under the slice factors",
        "combined-kind product rule, conjugate operator under the Laplace factors",
    ];
    Ok(names
        .iter()
        .zip(anchors.iter())
        .zip(worst.iter())
        .map(|((name, anchor), &value)| {
            make_record(
                suite,
                format!("calculus/product-rule/{name}"),
                (*anchor).to_string(),
                value,
                cfg.product_rule_tolerance,
                "<=",
                false,
                wall,
            )
        })
        .collect())
}

fn projector_records(cfg: &HarnessConfig) -> Result<Vec<Record>> {
    let n = cfg.n;
    let suite = SuiteId::Calculus.name();
    let mut records = Vec::new();
    let mut rng = ChaCha12Rng::seed_from_u64(task_seed(cfg.seed, "calculus/projectors"));
    let evs = [
        Paravector::new(0.0, [1.0, 0.0, 0.0, 0.0, 0.0]),
        Paravector::new(0.0, [0.0, 0.0, 3.0, 0.0, 0.0]),
    ];
    let basis = random_basis(2, &mut rng);
    let t = ParavectorOperator::commuting(n, &evs, Some(&basis))?;
    let j = UnitImaginary::axis(n, 1);
    let inner = Contour::new(0.0, 1.8, j, cfg.contour_nodes)?;
    let outer = Contour::new(0.0, 2.4, j, cfg.contour_nodes)?;
    for kind in [ProjectorKind::Dirac, ProjectorKind::DiracLaplace] {
        let (pair, wall) = timed(cfg.timings, || riesz_projector(kind, &t, &inner, &outer))?;
        records.push(make_record(
            suite,
            format!("calculus/projector-idempotent/{}", kind.name()),
            format!("the {}-kind spectral integral is idempotent", kind.name()),
            pair.idempotency_defect(),
            cfg.projector_tolerance,
            "<=",
            false,
            wall,
        ));
        records.push(make_record(
            suite,
            format!("calculus/projector-forms/{}", kind.name()),
            format!(
                "inner and outer quadrature forms of the {}-kind projector agree",
                kind.name()
            ),
            pair.form_gap(),
            cfg.projector_tolerance,
            "<=",
            false,
            None,
        ));
    }
    // Empty enclosure: contours around nothing integrate to zero.
    let far_inner = Contour::new(6.0, 0.5, j, cfg.contour_nodes)?;
    let far_outer = Contour::new(6.0, 0.8, j, cfg.contour_nodes)?;
    let (pair, wall) = timed(cfg.timings, || {
        riesz_projector(ProjectorKind::Dirac, &t, &far_inner, &far_outer)
    })?;
    records.push(make_record(
        suite,
        "calculus/projector-empty".to_string(),
        "a contour enclosing no spectrum integrates to the zero projector".to_string(),
        pair.inner
            .frobenius_norm()
            .max(pair.outer.frobenius_norm()),
        cfg.projector_tolerance,
        "<=",
        false,
        wall,
    ));
    Ok(records)
}

/// Run the pointwise kernel suite (requires the five-generator algebra).
///
/// # Errors
///
/// [`Error::ConfigInvalid`] when `n != 5`, plus probing errors.
pub fn run_kernels(cfg: &HarnessConfig) -> Result<Vec<Record>> {
    cfg.validate()?;
    if cfg.n != 5 {
        return Err(Error::config(
            "the pointwise kernel suite is specific to the five-generator algebra",
        ));
    }
    let n = cfg.n;
    let suite = SuiteId::Kernels.name();
    let mut records = Vec::new();
    let s = Paravector::new(0.3, [0.0, 0.4, 0.0, 0.0, 0.0]);
    let kernel_cfg = KernelProbeConfig {
        sbox: SampleBox::new([2.0, 1.0, 0.0, 0.0, 0.0, 0.0], 0.5)?,
        h_values: vec![0.02, 0.01, 0.005],
        probe_count: 8,
        probe_seed: task_seed(cfg.seed, "kernels/probes"),
    };

    // ── Kernel derivative identities ──
    let mut dirac_left_residual = f64::NAN;
    for side in [Side::Left, Side::Right] {
        for deriv in [KernelDerivative::Dirac, KernelDerivative::DiracLaplace] {
            let (check, wall) = timed(cfg.timings, || {
                check_kernel_identity(side, deriv, s, n, &kernel_cfg, None)
            })?;
            if side == Side::Left && deriv == KernelDerivative::Dirac {
                dirac_left_residual = *check
                    .max_residuals
                    .last()
                    .expect("at least one step size");
            }
            let min_order = check.orders.iter().copied().fold(f64::INFINITY, f64::min);
            records.push(make_record(
                suite,
                format!("kernels/identity-order/{side}-{}", deriv.name()),
                format!(
                    "the {side} kernel derivative ({}) converges to its closed form at \
                     second order",
                    deriv.name()
                ),
                min_order,
                tolerances::STENCIL_ORDER_MIN,
                ">=",
                false,
                wall,
            ));
            let rel_extrapolated = if check.max_residuals[0] > 0.0 {
                check.extrapolated / check.max_residuals[0]
            } else {
                0.0
            };
            records.push(make_record(
                suite,
                format!("kernels/identity-extrapolation/{side}-{}", deriv.name()),
                "the Richardson combination of the two finest steps cancels the residual"
                    .to_string(),
                rel_extrapolated,
                tolerances::EXTRAPOLATION_REL,
                "<=",
                false,
                None,
            ));
        }
    }
    if cfg.negative_controls {
        let (bad, wall) = timed(cfg.timings, || {
            check_kernel_identity(
                Side::Left,
                KernelDerivative::Dirac,
                s,
                n,
                &kernel_cfg,
                Some(-3.0),
            )
        })?;
        let ratio = bad
            .max_residuals
            .last()
            .expect("at least one step size")
            / dirac_left_residual;
        records.push(make_record(
            suite,
            "kernels-control/wrong-dirac-constant".to_string(),
            "replacing -4 by -3 in the kernel identity must fail by orders of magnitude"
                .to_string(),
            ratio,
            tolerances::NEGATIVE_CONTROL_MIN_RATIO,
            ">=",
            true,
            wall,
        ));
    }

    // ── Kernel form agreement ──
    let (form_gap, wall) = timed(cfg.timings, || {
        let mut rng = ChaCha12Rng::seed_from_u64(task_seed(cfg.seed, "kernels/forms"));
        let mut max_gap: f64 = 0.0;
        for _ in 0..50 {
            let sp = Paravector::new(
                rng.random_range(-2.0..2.0),
                std::array::from_fn(|_| rng.random_range(-1.0..1.0)),
            );
            let xp = Paravector::new(
                rng.random_range(-2.0..2.0),
                std::array::from_fn(|_| rng.random_range(-1.0..1.0)),
            );
            if crate::algebra::sphere_distance(sp.sphere_point(), xp.sphere_point()) < 0.3 {
                continue;
            }
            for side in [Side::Left, Side::Right] {
                let a = cauchy_kernel(side, KernelForm::FormI, sp, xp, n)?;
                let b = cauchy_kernel(side, KernelForm::FormII, sp, xp, n)?;
                max_gap = max_gap.max((a - b).norm() / (a.norm().max(b.norm()).max(1.0)));
            }
        }
        Ok(max_gap)
    })?;
    records.push(make_record(
        suite,
        "kernels/form-agreement".to_string(),
        "the two closed forms of each slice Cauchy kernel agree".to_string(),
        form_gap,
        tolerances::KERNEL_FORM_AGREEMENT_REL,
        "<=",
        false,
        wall,
    ));

    // ── Fine-structure chains ──
    let chain_cfg = KernelProbeConfig {
        sbox: SampleBox::new([2.0, 1.0, 0.0, 0.0, 0.0, 0.0], 3.0)?,
        h_values: vec![0.4, 0.2, 0.1],
        probe_count: 6,
        probe_seed: task_seed(cfg.seed, "kernels/chain-probes"),
    };
    // Degrees up to six are annihilated exactly by the composed stencils
    // (vanishing moments plus low-degree truncation terms); degree seven is
    // the first monomial with a measurable second-order error.
    let z4 = StemPolynomial::monomial(Side::Left, n, 4);
    let z7 = StemPolynomial::monomial(Side::Left, n, 7);
    for chain in ChainOrder::ALL {
        let (check, wall) = timed(cfg.timings, || {
            check_fine_structure_chain(&z4, chain, &chain_cfg)
        })?;
        let envelope_ratio = check
            .h_values
            .iter()
            .zip(check.max_values.iter())
            .map(|(&h, &v)| {
                v / tolerances::stencil_roundoff_envelope(check.function_scale, h, 5)
            })
            .fold(0.0_f64, f64::max);
        records.push(make_record(
            suite,
            format!("kernels/chain-envelope/{}", chain.name()),
            "the chain annihilates degree four exactly (values inside the roundoff \
             envelope)"
                .to_string(),
            envelope_ratio,
            1.0,
            "<=",
            false,
            wall,
        ));
        let (check7, wall7) = timed(cfg.timings, || {
            check_fine_structure_chain(&z7, chain, &chain_cfg)
        })?;
        let min_order = check7.orders.iter().copied().fold(f64::INFINITY, f64::min);
        records.push(make_record(
            suite,
            format!("kernels/chain-order/{}", chain.name()),
            "the chain converges to zero at second order on degree seven".to_string(),
            min_order,
            tolerances::STENCIL_ORDER_MIN,
            ">=",
            false,
            wall7,
        ));
    }

    // ── Axial symmetry ──
    let (axial_gap, wall) = timed(cfg.timings, || {
        let mut rng = ChaCha12Rng::seed_from_u64(task_seed(cfg.seed, "kernels/axial"));
        let dirs: Vec<UnitImaginary> =
            (0..4).map(|_| UnitImaginary::random(n, &mut rng)).collect();
        let f = StemPolynomial::from_real(Side::Left, n, &[0.5, -1.0, 0.25, 2.0]);
        check_axial_symmetry(n, &stem_function(&f), 0.7, 1.3, &dirs)
    })?;
    records.push(make_record(
        suite,
        "kernels/axial-symmetry".to_string(),
        "slice values are axially symmetric across slice directions".to_string(),
        axial_gap,
        tolerances::KERNEL_FORM_AGREEMENT_REL,
        "<=",
        false,
        wall,
    ));
    if cfg.negative_controls {
        let (bad_gap, wall) = timed(cfg.timings, || {
            let mut rng =
                ChaCha12Rng::seed_from_u64(task_seed(cfg.seed, "kernels/axial-control"));
            let dirs: Vec<UnitImaginary> =
                (0..4).map(|_| UnitImaginary::random(n, &mut rng)).collect();
            let projection: PointFn =
                Arc::new(|p: &[f64; 6]| Multivector::scalar(5, p[1]));
            check_axial_symmetry(n, &projection, 0.7, 1.3, &dirs)
        })?;
        records.push(make_record(
            suite,
            "kernels-control/projection-axiality".to_string(),
            "a raw coordinate projection must fail the axial symmetry check".to_string(),
            bad_gap,
            1e-2,
            ">=",
            true,
            wall,
        ));
    }

    // ── Dirac factorization of the Laplacian ──
    let (fact_gap, wall) = timed(cfg.timings, || {
        let cfg_small = KernelProbeConfig {
            sbox: SampleBox::new([2.0, 1.0, 0.0, 0.0, 0.0, 0.0], 0.3)?,
            h_values: vec![0.1, 0.05],
            probe_count: 6,
            probe_seed: task_seed(cfg.seed, "kernels/factorization"),
        };
        let f = StemPolynomial::monomial(Side::Left, 5, 3);
        let gaps = check_dirac_factorization(&f, &cfg_small)?;
        Ok(gaps.into_iter().fold(0.0_f64, f64::max))
    })?;
    records.push(make_record(
        suite,
        "kernels/dirac-factorization".to_string(),
        "the Dirac operator and its conjugate compose to the Laplacian".to_string(),
        fact_gap,
        cfg.identity_tolerance,
        "<=",
        false,
        wall,
    ));

    Ok(records)
}

/// Run the requested suites and assemble the report.
///
/// # Errors
///
/// Propagates the first suite failure.
pub fn run(cfg: &HarnessConfig, suites: &[SuiteId]) -> Result<Report> {
    cfg.validate()?;
    let mut records = Vec::new();
    for suite in suites {
        let batch = match suite {
            SuiteId::Identities => run_identities(cfg)?,
            SuiteId::Calculus => run_calculus(cfg)?,
            SuiteId::Kernels => run_kernels(cfg)?,
        };
        records.extend(batch);
    }
    let summary = Summary {
        total: records.len(),
        passed: records.iter().filter(|r| r.pass).count(),
        failed: records.iter().filter(|r| !r.pass).count(),
        controls: records.iter().filter(|r| r.control).count(),
    };
    Ok(Report {
        config: cfg.clone(),
        records,
        summary,
    })
}

// ═══════════════════════════════════════════════════════════════════════
//  Canonical rendering
// ═══════════════════════════════════════════════════════════════════════

/// Fixed scientific float format: deterministic across runs and platforms.
fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "\"nan\"".to_string()
    } else if v > 0.0 {
        "\"inf\"".to_string()
    } else {
        "\"-inf\"".to_string()
    }
}

fn json_str(s: &str) -> String {
    serde_json::to_string(s).expect("string serialization cannot fail")
}

fn render_config(cfg: &HarnessConfig) -> String {
    let d_values = cfg
        .d_values
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",");
    let eigenvalues = match &cfg.eigenvalues {
        None => "null".to_string(),
        Some(rows) => {
            let rows: Vec<String> = rows
                .iter()
                .map(|r| {
                    let cells: Vec<String> = r.iter().map(|&v| fmt_f64(v)).collect();
                    format!("[{}]", cells.join(","))
                })
                .collect();
            format!("[{}]", rows.join(","))
        }
    };
    format!(
        "{{\"n\":{},\"d_values\":[{}],\"seed\":{},\"samples_per_identity\":{},\
         \"contour_nodes\":{},\"product_rule_cases\":{},\"eigenvalues\":{},\
         \"identity_tolerance\":{},\"reproduction_tolerance\":{},\
         \"product_rule_tolerance\":{},\"projector_tolerance\":{},\
         \"independence_tolerance\":{},\"negative_controls\":{},\"parallel\":{},\
         \"timings\":{}}}",
        cfg.n,
        d_values,
        cfg.seed,
        cfg.samples_per_identity,
        cfg.contour_nodes,
        cfg.product_rule_cases,
        eigenvalues,
        fmt_f64(cfg.identity_tolerance),
        fmt_f64(cfg.reproduction_tolerance),
        fmt_f64(cfg.product_rule_tolerance),
        fmt_f64(cfg.projector_tolerance),
        fmt_f64(cfg.independence_tolerance),
        cfg.negative_controls,
        cfg.parallel,
        cfg.timings,
    )
}

fn render_record(r: &Record) -> String {
    let mut out = format!(
        "{{\"suite\":{},\"name\":{},\"anchor\":{},\"digest\":{},\"value\":{},\
         \"bound\":{},\"relation\":{},\"pass\":{},\"control\":{}",
        json_str(&r.suite),
        json_str(&r.name),
        json_str(&r.anchor),
        json_str(&r.digest),
        fmt_f64(r.value),
        fmt_f64(r.bound),
        json_str(&r.relation),
        r.pass,
        r.control,
    );
    if let Some(ms) = r.wall_ms {
        out.push_str(&format!(",\"wall_ms\":{}", fmt_f64(ms)));
    }
    out.push('}');
    out
}

/// Canonical JSON: fixed key order, fixed float format, one record per
/// line. Byte-identical across repeated runs with the same configuration
/// (timings disabled).
#[must_use]
pub fn render_json(report: &Report) -> String {
    let mut out = String::new();
    out.push_str("{\n  \"config\": ");
    out.push_str(&render_config(&report.config));
    out.push_str(",\n  \"records\": [\n");
    for (i, r) in report.records.iter().enumerate() {
        out.push_str("    ");
        out.push_str(&render_record(r));
        if i + 1 < report.records.len() {
            out.push(',');
        }
        out.push('\n');
    }
    out.push_str("  ],\n  \"summary\": ");
    out.push_str(&format!(
        "{{\"total\":{},\"passed\":{},\"failed\":{},\"controls\":{}}}",
        report.summary.total,
        report.summary.passed,
        report.summary.failed,
        report.summary.controls
    ));
    out.push_str("\n}\n");
    out
}

fn csv_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\"\""))
}

/// CSV rendering with one row per record.
#[must_use]
pub fn render_csv(report: &Report) -> String {
    let mut out =
        String::from("suite,name,anchor,digest,value,bound,relation,pass,control,wall_ms\n");
    for r in &report.records {
        let wall = r.wall_ms.map(fmt_f64).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            csv_quote(&r.suite),
            csv_quote(&r.name),
            csv_quote(&r.anchor),
            r.digest,
            fmt_f64(r.value),
            fmt_f64(r.bound),
            csv_quote(&r.relation),
            r.pass,
            r.control,
            wall,
        ));
    }
    out
}

/// Human-readable rendering.
#[must_use]
pub fn render_text(report: &Report) -> String {
    let mut out = String::new();
    for r in &report.records {
        let mark = if r.pass { "PASS" } else { "FAIL" };
        let control = if r.control { " [control]" } else { "" };
        out.push_str(&format!(
            "[{mark}]{control} {}  value {:.3e} {} bound {:.3e}  ({})\n",
            r.name, r.value, r.relation, r.bound, r.anchor
        ));
    }
    out.push_str(&format!(
        "{} checks: {} passed, {} failed ({} controls)\n",
        report.summary.total,
        report.summary.passed,
        report.summary.failed,
        report.summary.controls
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fnv_test_vectors() {
        assert_eq!(fnv1a64(b""), 0xcbf2_9ce4_8422_2325);
        assert_eq!(fnv1a64(b"a"), 0xaf63_dc4c_8601_ec8c);
        assert_eq!(fnv1a64(b"foobar"), 0x85944171f73967e8);
    }

    #[test]
    fn float_format_is_fixed_width_scientific() {
        assert_eq!(fmt_f64(1.0), "1.0000000000000000e0");
        assert_eq!(fmt_f64(-0.5), "-5.0000000000000000e-1");
        assert_eq!(fmt_f64(f64::NAN), "\"nan\"");
    }

    #[test]
    fn config_validation_rejects_bad_shapes() {
        let cfg = HarnessConfig {
            d_values: vec![],
            ..HarnessConfig::default()
        };
        assert!(matches!(cfg.validate(), Err(Error::ConfigInvalid { .. })));
        let cfg = HarnessConfig {
            contour_nodes: 17,
            ..HarnessConfig::default()
        };
        assert!(matches!(cfg.validate(), Err(Error::ConfigInvalid { .. })));
        let cfg = HarnessConfig {
            n: 6,
            ..HarnessConfig::default()
        };
        assert!(matches!(cfg.validate(), Err(Error::ConfigInvalid { .. })));
        assert!(HarnessConfig::default().validate().is_ok());
    }

    #[test]
    fn empty_json_is_a_valid_config() {
        let cfg: HarnessConfig = serde_json::from_str("{}").unwrap();
        assert_eq!(cfg.n, 5);
        assert_eq!(cfg.d_values, vec![1, 2, 4]);
        assert_eq!(cfg.seed, 42);
        assert!(!cfg.negative_controls);
    }

    #[test]
    fn identity_suite_is_deterministic_and_green() {
        let cfg = HarnessConfig {
            d_values: vec![1, 2],
            samples_per_identity: 3,
            ..HarnessConfig::default()
        };
        let report_a = run(&cfg, &[SuiteId::Identities]).unwrap();
        let report_b = run(&cfg, &[SuiteId::Identities]).unwrap();
        assert!(report_a.all_passed(), "{}", render_text(&report_a));
        assert_eq!(render_json(&report_a), render_json(&report_b));
        // 19 identities at two ranks plus 19 quaternionic records.
        assert_eq!(report_a.summary.total, 19 * 3);
    }

    #[test]
    fn parallel_execution_produces_identical_bytes() {
        let base = HarnessConfig {
            d_values: vec![2],
            samples_per_identity: 2,
            ..HarnessConfig::default()
        };
        let mut par = base.clone();
        par.parallel = true;
        let serial = run(&base, &[SuiteId::Identities]).unwrap();
        let parallel = run(&par, &[SuiteId::Identities]).unwrap();
        // The configs differ (the flag is echoed), the records must not.
        for (a, b) in serial.records.iter().zip(parallel.records.iter()) {
            assert_eq!(render_record(a), render_record(b));
        }
    }

    #[test]
    fn negative_controls_are_marked_and_pass_backwards() {
        let cfg = HarnessConfig {
            d_values: vec![2],
            samples_per_identity: 2,
            negative_controls: true,
            ..HarnessConfig::default()
        };
        let report = run(&cfg, &[SuiteId::Identities]).unwrap();
        let control = report
            .records
            .iter()
            .find(|r| r.control)
            .expect("control record present");
        assert_eq!(control.relation, ">=");
        assert!(control.pass, "the control must fail loudly: {control:?}");
    }

    #[test]
    fn calculus_suite_smoke() {
        // Default node count (the trapezoidal truncation needs it); a single
        // product-rule case keeps the runtime modest.
        let cfg = HarnessConfig {
            product_rule_cases: 1,
            ..HarnessConfig::default()
        };
        let report = run(&cfg, &[SuiteId::Calculus]).unwrap();
        assert!(report.all_passed(), "{}", render_text(&report));
    }

    #[test]
    fn csv_quotes_embedded_commas() {
        let rec = make_record(
            "calculus",
            "x/y".to_string(),
            "an anchor, with a comma".to_string(),
            1.0,
            2.0,
            "<=",
            false,
            None,
        );
        let report = Report {
            config: HarnessConfig::default(),
            records: vec![rec],
            summary: Summary {
                total: 1,
                passed: 1,
                failed: 0,
                controls: 0,
            },
        };
        let csv = render_csv(&report);
        assert!(csv.contains("\"an anchor, with a comma\""));
    }
}
