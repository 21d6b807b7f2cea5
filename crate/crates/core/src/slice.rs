//! Slice functions: stem polynomials, axial decompositions, and the slice
//! Cauchy kernels.
//!
//! A *slice plane* `C_J = { u + J v }` is a copy of the complex plane inside
//! the paravector space, labelled by a unit imaginary direction `J`.
//! Polynomials with coefficients on one side,
//!
//! ```text
//! left:  f(x) = sum_k x^k a_k        right: f(x) = sum_k a_k x^k
//! ```
//!
//! restrict holomorphically to every slice plane and are the dense test
//! family used by all verification suites. A slice function decomposes
//! axially as `f(x0 + w r) = A(x0, r) + w B(x0, r)` (left; mirrored on the
//! right) with `A`, `B` independent of the slice direction `w`, even/odd in
//! `r`; the function is *intrinsic* when its coefficients (equivalently `A`
//! and `B`) are real, in which case it commutes with every slice plane.
//!
//! The slice Cauchy kernels come in two algebraically identical forms each:
//!
//! ```text
//! S_L^{-1}(s, x) = -(x^2 - 2 re(s) x + |s|^2)^{-1} (x - conj(s))      (I)
//!               =  (s - conj(x)) (s^2 - 2 re(x) s + |x|^2)^{-1}       (II)
//! S_R^{-1}(s, x) = -(x - conj(s)) (x^2 - 2 re(s) x + |s|^2)^{-1}      (I)
//!               =  (s^2 - 2 re(x) s + |x|^2)^{-1} (s - conj(x))       (II)
//! ```
//!
//! both singular exactly on the sphere `[s]` (form I) / `[x]` (form II) --
//! which coincide at a kernel singularity. Evaluation is refused near the
//! sphere; see [`crate::tolerances::SPHERE_MEMBERSHIP_REL`].

use crate::algebra::{sphere_distance, Multivector, Paravector, UnitImaginary};
use crate::contour::Contour;
use crate::error::{Error, Result};
use crate::tolerances;
use std::fmt;

/// Sidedness of coefficients (and of the associated functional calculi).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    /// Coefficients on the right of the powers: `sum_k x^k a_k`.
    Left,
    /// Coefficients on the left of the powers: `sum_k a_k x^k`.
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Left => write!(f, "left"),
            Side::Right => write!(f, "right"),
        }
    }
}

/// The two algebraic forms of each slice Cauchy kernel.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum KernelForm {
    /// Inverts the quadratic in the evaluation point `x`.
    FormI,
    /// Inverts the quadratic in the parameter `s`.
    FormII,
}

/// Polynomial with one-sided Clifford coefficients: the stem of a slice
/// function.
#[derive(Clone, Debug)]
pub struct StemPolynomial {
    side: Side,
    n: u8,
    coeffs: Vec<Multivector>,
    intrinsic: bool,
}

impl StemPolynomial {
    /// Polynomial from explicit coefficients `a_0, ..., a_K`.
    ///
    /// The intrinsic flag is computed structurally: the polynomial is
    /// intrinsic iff every coefficient is a real scalar.
    ///
    /// # Errors
    ///
    /// [`Error::InvalidConstruction`] when there are no coefficients or a
    /// coefficient lives in a larger algebra than `n`.
    pub fn new(side: Side, n: u8, coeffs: Vec<Multivector>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::invalid("a stem polynomial needs a coefficient"));
        }
        if let Some(bad) = coeffs.iter().find(|c| c.n() > n) {
            return Err(Error::invalid(format!(
                "coefficient algebra R_{} exceeds the declared R_{n}",
                bad.n()
            )));
        }
        let coeffs: Vec<Multivector> = coeffs.iter().map(|c| c.promoted(n)).collect();
        let intrinsic = coeffs
            .iter()
            .all(|c| (*c - Multivector::scalar(n, c.scalar_part())).norm() == 0.0);
        Ok(StemPolynomial {
            side,
            n,
            coeffs,
            intrinsic,
        })
    }

    /// Polynomial with real coefficients (always intrinsic).
    #[must_use]
    pub fn from_real(side: Side, n: u8, coeffs: &[f64]) -> Self {
        let coeffs = coeffs
            .iter()
            .map(|&v| Multivector::scalar(n, v))
            .collect();
        StemPolynomial::new(side, n, coeffs).expect("real coefficients are always valid")
    }

    /// The monomial `z^degree`.
    #[must_use]
    pub fn monomial(side: Side, n: u8, degree: usize) -> Self {
        let mut coeffs = vec![0.0; degree + 1];
        coeffs[degree] = 1.0;
        StemPolynomial::from_real(side, n, &coeffs)
    }

    /// The constant polynomial `1`.
    #[must_use]
    pub fn one(side: Side, n: u8) -> Self {
        StemPolynomial::monomial(side, n, 0)
    }

    /// Coefficient side.
    #[must_use]
    pub fn side(&self) -> Side {
        self.side
    }

    /// Ambient algebra.
    #[must_use]
    pub fn n(&self) -> u8 {
        self.n
    }

    /// Degree (index of the last stored coefficient).
    #[must_use]
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `z^k` (zero beyond the stored degree).
    #[must_use]
    pub fn coeff(&self, k: usize) -> Multivector {
        self.coeffs
            .get(k)
            .copied()
            .unwrap_or_else(|| Multivector::zero(self.n))
    }

    /// All stored coefficients.
    #[must_use]
    pub fn coeffs(&self) -> &[Multivector] {
        &self.coeffs
    }

    /// Whether every coefficient is a real scalar.
    #[must_use]
    pub fn is_intrinsic(&self) -> bool {
        self.intrinsic
    }

    /// Pointwise evaluation. Powers of the argument are computed through
    /// full Clifford products.
    #[must_use]
    pub fn eval(&self, x: Paravector) -> Multivector {
        let xm = x.as_multivector(self.n);
        let mut acc = Multivector::zero(self.n);
        let mut power = Multivector::one(self.n);
        for coeff in &self.coeffs {
            match self.side {
                Side::Left => acc += power * *coeff,
                Side::Right => acc += *coeff * power,
            }
            power = power * xm;
        }
        acc
    }

    /// Pointwise product `self * rhs`.
    ///
    /// The product of two one-sided slice functions is one-sided again only
    /// when the coefficients can be commuted past the powers: on the left
    /// side the *left* factor must be intrinsic, on the right side the
    /// *right* factor must be.
    ///
    /// # Errors
    ///
    /// [`Error::SideMismatch`] for mixed sides, [`Error::NotIntrinsic`] when
    /// the commuting factor is not intrinsic.
    pub fn mul(&self, rhs: &StemPolynomial) -> Result<StemPolynomial> {
        if self.side != rhs.side {
            return Err(Error::SideMismatch {
                expected: self.side,
                got: rhs.side,
            });
        }
        match self.side {
            Side::Left if !self.intrinsic => return Err(Error::NotIntrinsic),
            Side::Right if !rhs.intrinsic => return Err(Error::NotIntrinsic),
            _ => {}
        }
        let n = self.n.max(rhs.n);
        let mut coeffs = vec![Multivector::zero(n); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += *a * *b;
            }
        }
        StemPolynomial::new(self.side, n, coeffs)
    }

    /// Axial decomposition at `x = x0 + J r`:
    ///
    /// ```text
    /// A = (f(x0 + J r) + f(x0 - J r)) / 2
    /// B = -J (f(x0 + J r) - f(x0 - J r)) / 2     (left side)
    /// B = -(f(x0 + J r) - f(x0 - J r)) J / 2     (right side)
    /// ```
    ///
    /// so that `f = A + w B` (left) or `f = A + B w` (right) on the whole
    /// sphere `x0 + [w] r`. For slice functions `A` and `B` do not depend on
    /// the probing direction `J`.
    ///
    /// # Errors
    ///
    /// [`Error::AxisTooClose`] when `r` is below
    /// [`tolerances::AXIS_MIN_RADIUS`].
    pub fn axial_parts(&self, x0: f64, r: f64, j: &UnitImaginary) -> Result<(Multivector, Multivector)> {
        if r < tolerances::AXIS_MIN_RADIUS {
            return Err(Error::AxisTooClose { radius: r });
        }
        let plus = self.eval(j.point(x0, r));
        let minus = self.eval(j.point(x0, -r));
        let jm = j.as_multivector().promoted(self.n.max(j.n()));
        let a = (plus + minus) * 0.5;
        let diff = (plus - minus) * 0.5;
        let b = match self.side {
            Side::Left => -(jm * diff),
            Side::Right => -(diff * jm),
        };
        Ok((a, b))
    }
}

/// `Q_b(a) = a^2 - 2 re(b) a + |b|^2`: the slice quadratic of `b`,
/// evaluated at `a`. A paravector in the plane of `a`, vanishing exactly
/// when `a` lies on the sphere `[b]`.
#[must_use]
pub fn slice_quadratic(a: Paravector, b: Paravector) -> Paravector {
    let mut q = a.square() - a * (2.0 * b.x0);
    q.x0 += b.modulus_sq();
    q
}

fn guard_off_sphere(s: Paravector, x: Paravector) -> Result<()> {
    let distance = sphere_distance(x.sphere_point(), s.sphere_point());
    let threshold = tolerances::SPHERE_MEMBERSHIP_REL * (1.0 + s.modulus());
    if distance < threshold {
        return Err(Error::OnSpectrumSphere { distance });
    }
    Ok(())
}

/// Slice Cauchy kernel for the requested side, in either algebraic form.
///
/// All inversions route through [`Multivector::inverse`]; the arguments
/// must fit in `R_n`.
///
/// # Errors
///
/// [`Error::OnSpectrumSphere`] when `x` lies on (or numerically too close
/// to) the sphere `[s]`.
pub fn cauchy_kernel(
    side: Side,
    form: KernelForm,
    s: Paravector,
    x: Paravector,
    n: u8,
) -> Result<Multivector> {
    guard_off_sphere(s, x)?;
    match form {
        KernelForm::FormI => {
            let q = slice_quadratic(x, s).as_multivector(n).inverse()?;
            let lin = x.as_multivector(n) - s.conj().as_multivector(n);
            Ok(match side {
                Side::Left => -(q * lin),
                Side::Right => -(lin * q),
            })
        }
        KernelForm::FormII => {
            let q = slice_quadratic(s, x).as_multivector(n).inverse()?;
            let lin = s.as_multivector(n) - x.conj().as_multivector(n);
            Ok(match side {
                Side::Left => lin * q,
                Side::Right => q * lin,
            })
        }
    }
}

/// Scalar Cauchy reproduction: recover `f(x)` from contour values of `f`.
///
/// ```text
/// left:  f(x) = (1/2pi) sum_k S_L^{-1}(s_k, x) w_k f(s_k)
/// right: f(x) = (1/2pi) sum_k f(s_k) w_k S_R^{-1}(s_k, x)
/// ```
///
/// with the trapezoidal nodes and slice-measure weights of `contour`,
/// which must enclose the sphere `[x]` with the standard margin.
///
/// # Errors
///
/// [`Error::ContourTouchesSpectrum`] when the contour passes too close to
/// `[x]`, [`Error::SpectrumNotSplit`] when it does not enclose `[x]`.
pub fn cauchy_reproduce(
    f: &StemPolynomial,
    x: Paravector,
    contour: &Contour,
) -> Result<Multivector> {
    let n = f.n();
    let point = x.sphere_point();
    contour.require_margin(&[point], tolerances::CONTOUR_MARGIN_FACTOR)?;
    if !contour.encloses_point(point) {
        return Err(Error::SpectrumNotSplit {
            reason: format!(
                "sphere (center {:.3}, radius {:.3}) lies outside the contour",
                point.0, point.1
            ),
        });
    }
    let mut acc = Multivector::zero(n);
    for node in contour.nodes() {
        let w = node.weight.as_multivector(n);
        let fval = f.eval(node.s);
        match f.side() {
            Side::Left => {
                let k = cauchy_kernel(Side::Left, KernelForm::FormII, node.s, x, n)?;
                acc += k * w * fval;
            }
            Side::Right => {
                let k = cauchy_kernel(Side::Right, KernelForm::FormII, node.s, x, n)?;
                acc += fval * w * k;
            }
        }
    }
    Ok(acc * (0.5 / std::f64::consts::PI))
}
