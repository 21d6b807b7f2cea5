//! Acceptance gate: eight numbered criteria, one test each.
//!
//! Every test prints a single `acceptance N (...): PASS (...)` line on
//! success (visible with `cargo test --test acceptance -- --nocapture`)
//! and asserts its pinned tolerance, so a regression in any criterion
//! fails this target in isolation.

use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use slicecalc::calculus::{
    apply, polynomial_of_operator, product_rule_biharmonic, product_rule_harmonic,
    riesz_projector, BiharmonicRule, CalculusKind, HarmonicRule, ProjectorKind,
};
use slicecalc::findiff::{
    check_fine_structure_chain, check_kernel_identity, ChainOrder, KernelDerivative,
    KernelProbeConfig, SampleBox,
};
use slicecalc::harness::fnv1a64;
use slicecalc::operators::{random_basis, random_commuting_operator};
use slicecalc::resolvents::{catalog, identity_residual_sweep};
use slicecalc::tolerances;
use slicecalc::{
    CliffordOperator, Contour, Multivector, Paravector, ParavectorOperator, Side,
    StemPolynomial, UnitImaginary, BLADE_COUNT,
};

const SEED: u64 = 42;
const N: u8 = 5;

/// Label-keyed deterministic generator, mixed the same way as the harness.
fn seeded(label: &str) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(
        fnv1a64(label.as_bytes()) ^ SEED.wrapping_mul(0x9e37_79b9_7f4a_7c15),
    )
}

fn relative_gap(a: &CliffordOperator, b: &CliffordOperator) -> f64 {
    (a - b).frobenius_norm() / a.frobenius_norm().max(b.frobenius_norm()).max(1.0)
}

/// Diagonalizable operator with spectral spheres of radius 1 and 2.
fn two_sphere_operator() -> ParavectorOperator {
    let evs = [
        Paravector::new(0.6, [0.8, 0.0, 0.0, 0.0, 0.0]),
        Paravector::new(-1.2, [0.0, 1.6, 0.0, 0.0, 0.0]),
    ];
    ParavectorOperator::commuting(N, &evs, None).expect("admissible eigenvalues")
}

// ── 1. The full identity battery at scale ──────────────────────────────

#[test]
fn criterion_1_resolvent_identity_battery() {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut count = 0usize;
    for &d in &[1usize, 2, 4] {
        let mut op_rng = seeded(&format!("operator/n{N}/d{d}"));
        let t = random_commuting_operator(N, d, &mut op_rng, d == 1);
        for entry in catalog() {
            let mut rng = seeded(&format!("identity/{}/d{d}", entry.id.name()));
            let residuals = identity_residual_sweep(entry.id, &t, 50, &mut rng)
                .expect("sweep must sample admissible points");
            for r in &residuals {
                worst = worst.max(r.residual);
            }
            count += residuals.len();
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert_eq!(count, catalog().len() * 3 * 50);
    assert!(
        worst < tolerances::IDENTITY_RESIDUAL_REL,
        "worst scaled identity residual {worst:.3e} breaches 1e-9"
    );
    assert!(elapsed < 60.0, "identity battery took {elapsed:.1}s (budget 60s)");
    println!(
        "acceptance 1 (identity battery: {} identities x ranks 1/2/4 x 50 samples < 1e-9): \
         PASS (max residual {worst:.3e}, {elapsed:.1}s)",
        catalog().len()
    );
}

// ── 2. Polynomial reproduction and quadrature convergence ──────────────

#[test]
fn criterion_2_monomial_reproduction_and_convergence() {
    let t = two_sphere_operator();
    let j = UnitImaginary::axis(N, 1);
    let fine = Contour::new(0.0, 2.3, j, 256).expect("valid contour");
    let coarse = Contour::new(0.0, 2.3, j, 128).expect("valid contour");
    let mut worst: f64 = 0.0;
    let mut drop = f64::INFINITY;
    for m in 0..=4usize {
        let f = StemPolynomial::monomial(Side::Left, N, m);
        let exact = polynomial_of_operator(&f, &t);
        let scale = exact.frobenius_norm().max(1.0);
        let fine_err = (&apply(CalculusKind::Slice, &f, &t, &fine).unwrap() - &exact)
            .frobenius_norm()
            / scale;
        worst = worst.max(fine_err);
        assert!(
            fine_err < tolerances::POLY_REPRODUCTION_REL,
            "degree-{m} reproduction error {fine_err:.3e} breaches 1e-8 at 256 nodes"
        );
        if m == 4 {
            let coarse_err = (&apply(CalculusKind::Slice, &f, &t, &coarse).unwrap()
                - &exact)
                .frobenius_norm()
                / scale;
            drop = coarse_err / fine_err.max(1e-15);
        }
    }
    assert!(
        drop >= tolerances::CONVERGENCE_DROP_MIN,
        "doubling nodes dropped the degree-4 error only {drop:.1}x (need 1e3)"
    );
    println!(
        "acceptance 2 (monomials z^0..z^4 reproduce the operator powers < 1e-8 at 256 \
         nodes): PASS (max error {worst:.3e}, 128->256 error drop {drop:.1e}x)"
    );
}

// ── 3. Product rules on seeded random triples ──────────────────────────

fn random_intrinsic(rng: &mut impl Rng) -> StemPolynomial {
    let degree = rng.random_range(1..=4usize);
    let coeffs: Vec<f64> = (0..=degree).map(|_| rng.random_range(-1.0..1.0)).collect();
    StemPolynomial::from_real(Side::Left, N, &coeffs)
}

fn random_left_polynomial(rng: &mut impl Rng) -> StemPolynomial {
    let degree = rng.random_range(1..=4usize);
    let coeffs: Vec<Multivector> = (0..=degree)
        .map(|_| {
            let mut c = [0.0; BLADE_COUNT];
            for v in c.iter_mut().take(1 << N) {
                *v = rng.random_range(-1.0..1.0);
            }
            Multivector::from_coeffs(N, c).expect("in-range coefficients")
        })
        .collect();
    StemPolynomial::new(Side::Left, N, coeffs).expect("consistent coefficients")
}

#[test]
fn criterion_3_product_rules() {
    let mut rng = seeded("calculus/product-rules");
    let mut worst = [0.0_f64; 4];
    for _ in 0..20 {
        let t = random_commuting_operator(N, 2, &mut rng, false);
        let f = random_intrinsic(&mut rng);
        let g = random_left_polynomial(&mut rng);
        let scale = t.spectral_radius().max(1.0);
        let j = UnitImaginary::axis(N, 1);
        let inner = Contour::new(0.0, 1.5 * scale, j, 128).unwrap();
        let outer = Contour::new(0.0, 2.0 * scale, j, 128).unwrap();
        let checks = [
            product_rule_biharmonic(
                BiharmonicRule::ConjugateOnIntrinsic,
                &f,
                &g,
                &t,
                &inner,
                &outer,
            )
            .unwrap(),
            product_rule_biharmonic(
                BiharmonicRule::ConjugateOnGeneral,
                &f,
                &g,
                &t,
                &inner,
                &outer,
            )
            .unwrap(),
            product_rule_harmonic(HarmonicRule::ConjugateOnSlice, &f, &g, &t, &inner, &outer)
                .unwrap(),
            product_rule_harmonic(
                HarmonicRule::ConjugateOnLaplace,
                &f,
                &g,
                &t,
                &inner,
                &outer,
            )
            .unwrap(),
        ];
        for (w, c) in worst.iter_mut().zip(checks.iter()) {
            *w = w.max(c.residual);
        }
    }
    let max = worst.iter().copied().fold(0.0_f64, f64::max);
    assert!(
        max < tolerances::PRODUCT_RULE_REL,
        "worst product-rule residual {max:.3e} breaches 1e-7 (per rule: {worst:?})"
    );
    println!(
        "acceptance 3 (two Dirac-kind and two combined-kind product rules < 1e-7 on 20 \
         seeded triples): PASS (worst residuals {:.3e} / {:.3e} / {:.3e} / {:.3e})",
        worst[0], worst[1], worst[2], worst[3]
    );
}

// ── 4. Spectral projectors on a split spectrum ─────────────────────────

#[test]
fn criterion_4_spectral_projectors() {
    let mut rng = seeded("calculus/projectors");
    let evs = [
        Paravector::new(0.0, [1.0, 0.0, 0.0, 0.0, 0.0]),
        Paravector::new(0.0, [0.0, 0.0, 3.0, 0.0, 0.0]),
    ];
    let basis = random_basis(2, &mut rng);
    let t = ParavectorOperator::commuting(N, &evs, Some(&basis)).unwrap();
    let j = UnitImaginary::axis(N, 1);
    let inner = Contour::new(0.0, 1.8, j, 256).unwrap();
    let outer = Contour::new(0.0, 2.4, j, 256).unwrap();
    let mut worst_defect: f64 = 0.0;
    let mut worst_gap: f64 = 0.0;
    for kind in [ProjectorKind::Dirac, ProjectorKind::DiracLaplace] {
        let pair = riesz_projector(kind, &t, &inner, &outer).unwrap();
        let defect = pair.idempotency_defect();
        let gap = pair.form_gap();
        assert!(
            defect < tolerances::PROJECTOR_REL,
            "{}-kind projector idempotency defect {defect:.3e} breaches 1e-7",
            kind.name()
        );
        assert!(
            gap < tolerances::PROJECTOR_REL,
            "{}-kind projector quadrature forms disagree by {gap:.3e} (bound 1e-7)",
            kind.name()
        );
        worst_defect = worst_defect.max(defect);
        worst_gap = worst_gap.max(gap);
    }
    println!(
        "acceptance 4 (both projector kinds on a gap-2 split spectrum: |P^2-P| and the \
         two quadrature forms < 1e-7): PASS (worst defect {worst_defect:.3e}, worst form \
         gap {worst_gap:.3e})"
    );
}

// ── 5. Pointwise kernel identities under stencil derivatives ───────────

#[test]
fn criterion_5_pointwise_kernel_identities() {
    let s = Paravector::new(0.3, [0.0, 0.4, 0.0, 0.0, 0.0]);
    let cfg = KernelProbeConfig {
        sbox: SampleBox::new([2.0, 1.0, 0.0, 0.0, 0.0, 0.0], 0.5).unwrap(),
        h_values: vec![0.02, 0.01, 0.005],
        probe_count: 100,
        probe_seed: fnv1a64(b"kernels/probes") ^ SEED.wrapping_mul(0x9e37_79b9_7f4a_7c15),
    };
    let mut min_order = f64::INFINITY;
    let mut worst_extrapolation: f64 = 0.0;
    let mut dirac_left_residual = f64::NAN;
    for side in [Side::Left, Side::Right] {
        for deriv in [KernelDerivative::Dirac, KernelDerivative::DiracLaplace] {
            let check = check_kernel_identity(side, deriv, s, N, &cfg, None).unwrap();
            if side == Side::Left && deriv == KernelDerivative::Dirac {
                dirac_left_residual = *check.max_residuals.last().unwrap();
            }
            let order = check.orders.iter().copied().fold(f64::INFINITY, f64::min);
            assert!(
                order >= tolerances::STENCIL_ORDER_MIN,
                "{side} {} convergence order {order:.2} below 1.8 \
                 (residuals {:?})",
                deriv.name(),
                check.max_residuals
            );
            let rel = check.extrapolated / check.max_residuals[0].max(f64::MIN_POSITIVE);
            assert!(
                rel <= tolerances::EXTRAPOLATION_REL,
                "{side} {} extrapolated residual is {rel:.3e} of the coarse residual \
                 (not consistent with zero)",
                deriv.name()
            );
            min_order = min_order.min(order);
            worst_extrapolation = worst_extrapolation.max(rel);
        }
    }
    let bad = check_kernel_identity(
        Side::Left,
        KernelDerivative::Dirac,
        s,
        N,
        &cfg,
        Some(-3.0),
    )
    .unwrap();
    let ratio = bad.max_residuals.last().unwrap() / dirac_left_residual;
    assert!(
        ratio >= tolerances::NEGATIVE_CONTROL_MIN_RATIO,
        "wrong-constant control only {ratio:.1}x worse (need 1e3)"
    );
    println!(
        "acceptance 5 (both kernel derivative identities, both sides, 100 probes, h = \
         0.02/0.01/0.005: order >= 1.8, extrapolation -> 0, -3 control fails): PASS \
         (min order {min_order:.2}, worst extrapolation {worst_extrapolation:.3e}, \
         control ratio {ratio:.1e}x)"
    );
}

// ── 6. Fine-structure chains annihilate low-degree polynomials ─────────

#[test]
fn criterion_6_fine_structure_chains() {
    let cfg = KernelProbeConfig {
        sbox: SampleBox::new([2.0, 1.0, 0.0, 0.0, 0.0, 0.0], 3.0).unwrap(),
        h_values: vec![0.4, 0.2, 0.1],
        probe_count: 6,
        probe_seed: fnv1a64(b"kernels/chain-probes")
            ^ SEED.wrapping_mul(0x9e37_79b9_7f4a_7c15),
    };
    let mut worst_envelope: f64 = 0.0;
    let mut min_order = f64::INFINITY;
    for chain in ChainOrder::ALL {
        // Degrees up to six are annihilated exactly by the composed
        // stencils (vanishing moments plus low-degree truncation terms),
        // so their values must sit inside the roundoff envelope at every
        // step size; degree seven is the first monomial with a measurable
        // second-order error.
        for degree in [0usize, 1, 4] {
            let f = StemPolynomial::monomial(Side::Left, N, degree);
            let check = check_fine_structure_chain(&f, chain, &cfg).unwrap();
            for (&h, &v) in check.h_values.iter().zip(check.max_values.iter()) {
                let envelope =
                    tolerances::stencil_roundoff_envelope(check.function_scale, h, 5);
                assert!(
                    v <= envelope,
                    "{} on degree {degree} at h = {h}: value {v:.3e} above the roundoff \
                     envelope {envelope:.3e}",
                    chain.name()
                );
                worst_envelope = worst_envelope.max(v / envelope);
            }
        }
        let z7 = StemPolynomial::monomial(Side::Left, N, 7);
        let check = check_fine_structure_chain(&z7, chain, &cfg).unwrap();
        let order = check.orders.iter().copied().fold(f64::INFINITY, f64::min);
        assert!(
            order >= tolerances::STENCIL_ORDER_MIN,
            "{} on degree 7: convergence order {order:.2} below 1.8",
            chain.name()
        );
        min_order = min_order.min(order);
    }
    println!(
        "acceptance 6 (all three chain nestings: degrees 0/1/4 annihilated to roundoff, \
         degree 7 decays at order >= 1.8): PASS (worst envelope fraction \
         {worst_envelope:.2e}, min order {min_order:.2})"
    );
}

// ── 7. Independence from the slice direction and contour radius ────────

#[test]
fn criterion_7_slice_independence() {
    let t = two_sphere_operator();
    let poly = StemPolynomial::from_real(Side::Left, N, &[0.5, -1.0, 0.25, 2.0]);
    let baseline = apply(
        CalculusKind::Slice,
        &poly,
        &t,
        &Contour::new(0.0, 2.3, UnitImaginary::axis(N, 1), 256).unwrap(),
    )
    .unwrap();
    let mut rng = seeded("calculus/independence");
    let mut max_gap: f64 = 0.0;
    for _ in 0..5 {
        let dir = UnitImaginary::random(N, &mut rng);
        for radius in [2.3, 2.99] {
            let c = Contour::new(0.0, radius, dir, 256).unwrap();
            let value = apply(CalculusKind::Slice, &poly, &t, &c).unwrap();
            max_gap = max_gap.max(relative_gap(&baseline, &value));
        }
    }
    assert!(
        max_gap < tolerances::SLICE_INDEPENDENCE_REL,
        "operator value varies by {max_gap:.3e} across slices/radii (bound 1e-9)"
    );
    println!(
        "acceptance 7 (operator value invariant across 5 random slice directions at radii \
         2.3 and 2.99 < 1e-9): PASS (max gap {max_gap:.3e})"
    );
}

// ── 8. Byte-identical seeded reports from the binary ───────────────────

#[test]
fn criterion_8_deterministic_reports() {
    let exe = env!("CARGO_BIN_EXE_verify-cli");
    let run = || {
        let out = Command::new(exe)
            .args(["all", "--seed", "42"])
            .output()
            .expect("binary must run");
        assert!(
            out.status.success(),
            "verify-cli failed: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        out.stdout
    };
    let first = run();
    let second = run();
    assert!(!first.is_empty(), "report must not be empty");
    assert_eq!(first, second, "two seeded runs diverged");
    println!(
        "acceptance 8 (two runs of `verify-cli all --seed 42` emit byte-identical JSON): \
         PASS ({} bytes)",
        first.len()
    );
}
