//! Dense real Clifford algebra `R_n` for `n <= 5`.
//!
//! Generators `e_1, ..., e_n` anticommute and square to `-1`. Elements are
//! stored densely as 32 coefficients over the basis blades of the largest
//! algebra (`n = 5`) in *graded-lexicographic* order: blades are sorted by
//! grade, and within a grade by their index tuple. Elements of smaller
//! algebras occupy the same storage with structural zeros on every blade
//! that uses a generator above `n`; binary operations on mixed `n` promote
//! to the larger algebra.
//!
//! Blade products are resolved through a compile-time 32x32 table of
//! (sign, result-index) pairs, computed from transposition counts plus one
//! sign flip per repeated generator.
//!
//! The layer also provides [`Paravector`] (`x = x_0 + x_1 e_1 + ... +
//! x_n e_n`, the natural home of spectral parameters), [`UnitImaginary`]
//! (unit grade-1 directions `J` with `J^2 = -1`, labelling slice planes),
//! the left-regular matrix representation, and inversion with an exact
//! reciprocal-condition-number guard.

use crate::error::{Error, Result};
use crate::linalg;
use crate::tolerances;
use nalgebra::DMatrix;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

/// Number of generators of the largest supported algebra.
pub const MAX_GENERATORS: usize = 5;

/// Number of basis blades of the largest supported algebra (`2^5`).
pub const BLADE_COUNT: usize = 32;

/// Storage index -> generator bitmask, in graded-lexicographic order.
///
/// Bit `i - 1` of the mask is set iff generator `e_i` occurs in the blade.
/// Grade 0 first, then the five grade-1 blades `e_1 ... e_5`, then the ten
/// grade-2 blades `e_{12} < e_{13} < ... < e_{45}`, and so on up to the
/// pseudoscalar `e_{12345}`.
pub const BLADE_MASKS: [u32; BLADE_COUNT] = [
    0b00000, // 1
    0b00001, 0b00010, 0b00100, 0b01000, 0b10000, // e1..e5
    0b00011, 0b00101, 0b01001, 0b10001, 0b00110, 0b01010, 0b10010, 0b01100, 0b10100,
    0b11000, // e12..e45
    0b00111, 0b01011, 0b10011, 0b01101, 0b10101, 0b11001, 0b01110, 0b10110, 0b11010,
    0b11100, // e123..e345
    0b01111, 0b10111, 0b11011, 0b11101, 0b11110, // e1234..e2345
    0b11111, // e12345
];

/// Generator bitmask -> storage index (inverse of [`BLADE_MASKS`]).
pub const MASK_TO_INDEX: [u8; BLADE_COUNT] = {
    let mut table = [0u8; BLADE_COUNT];
    let mut i = 0;
    while i < BLADE_COUNT {
        table[BLADE_MASKS[i] as usize] = i as u8;
        i += 1;
    }
    table
};

/// Sign and result mask of a product of two basis blades.
///
/// Moving every generator of `b` into place past the generators of `a`
/// costs one transposition per inversion pair; each generator common to
/// both blades then contracts with `e_i^2 = -1`.
const fn blade_product(a: u32, b: u32) -> (i8, u32) {
    let mut swaps: u32 = 0;
    let mut rest = a >> 1;
    while rest != 0 {
        swaps += (rest & b).count_ones();
        rest >>= 1;
    }
    let flips = swaps + (a & b).count_ones();
    let sign = if flips % 2 == 0 { 1 } else { -1 };
    (sign, a ^ b)
}

/// Compile-time multiplication table over storage indices:
/// `MUL_TABLE[i][j] = (sign, index of blade_i * blade_j)`.
pub(crate) const MUL_TABLE: [[(i8, u8); BLADE_COUNT]; BLADE_COUNT] = {
    let mut table = [[(0i8, 0u8); BLADE_COUNT]; BLADE_COUNT];
    let mut i = 0;
    while i < BLADE_COUNT {
        let mut j = 0;
        while j < BLADE_COUNT {
            let (sign, mask) = blade_product(BLADE_MASKS[i], BLADE_MASKS[j]);
            table[i][j] = (sign, MASK_TO_INDEX[mask as usize]);
            j += 1;
        }
        i += 1;
    }
    table
};

/// Grade (number of generators) of each storage slot.
pub const BLADE_GRADES: [u32; BLADE_COUNT] = {
    let mut table = [0u32; BLADE_COUNT];
    let mut i = 0;
    while i < BLADE_COUNT {
        table[i] = BLADE_MASKS[i].count_ones();
        i += 1;
    }
    table
};

fn check_generator_count(n: u8) {
    assert!(
        (1..=MAX_GENERATORS as u8).contains(&n),
        "generator count must be between 1 and 5, got {n}"
    );
}

/// Dense element of `R_n` (`1 <= n <= 5`).
///
/// Coefficients live on the fixed 32-blade basis of `R_5`; blades using a
/// generator above `n` are structural zeros. The invariant is enforced by
/// every constructor and preserved by all arithmetic (products of valid
/// elements only touch valid blades).
#[derive(Clone, Copy, PartialEq)]
pub struct Multivector {
    n: u8,
    c: [f64; BLADE_COUNT],
}

impl Multivector {
    /// Zero element of `R_n`.
    #[must_use]
    pub fn zero(n: u8) -> Self {
        check_generator_count(n);
        Multivector {
            n,
            c: [0.0; BLADE_COUNT],
        }
    }

    /// Real scalar `v` in `R_n`.
    #[must_use]
    pub fn scalar(n: u8, v: f64) -> Self {
        let mut m = Multivector::zero(n);
        m.c[0] = v;
        m
    }

    /// Multiplicative unit of `R_n`.
    #[must_use]
    pub fn one(n: u8) -> Self {
        Multivector::scalar(n, 1.0)
    }

    /// Basis vector `e_i` (1-based, `i <= n`).
    #[must_use]
    pub fn basis_vector(n: u8, i: usize) -> Self {
        check_generator_count(n);
        assert!(
            i >= 1 && i <= n as usize,
            "basis vector index {i} out of range for n = {n}"
        );
        let mut m = Multivector::zero(n);
        m.c[i] = 1.0;
        m
    }

    /// Basis blade from a generator bitmask (bit `i - 1` <-> `e_i`).
    #[must_use]
    pub fn basis_blade(n: u8, mask: u32) -> Self {
        check_generator_count(n);
        assert!(mask < BLADE_COUNT as u32, "blade mask out of range");
        assert!(
            mask >> n == 0,
            "blade mask {mask:#b} uses a generator above n = {n}"
        );
        let mut m = Multivector::zero(n);
        m.c[MASK_TO_INDEX[mask as usize] as usize] = 1.0;
        m
    }

    /// Pseudoscalar `e_{1...n}` of `R_n`.
    #[must_use]
    pub fn pseudoscalar(n: u8) -> Self {
        check_generator_count(n);
        Multivector::basis_blade(n, (1u32 << n) - 1)
    }

    /// Element from a full coefficient array in graded-lexicographic order.
    ///
    /// # Errors
    ///
    /// [`Error::InvalidConstruction`] if a coefficient sits on a blade that
    /// uses a generator above `n`.
    pub fn from_coeffs(n: u8, coeffs: [f64; BLADE_COUNT]) -> Result<Self> {
        check_generator_count(n);
        for (idx, &v) in coeffs.iter().enumerate() {
            if v != 0.0 && BLADE_MASKS[idx] >> n != 0 {
                return Err(Error::invalid(format!(
                    "coefficient {v} on blade with mask {:#b} uses a generator above n = {n}",
                    BLADE_MASKS[idx]
                )));
            }
        }
        Ok(Multivector { n, c: coeffs })
    }

    /// Generator count of the ambient algebra.
    #[must_use]
    pub fn n(&self) -> u8 {
        self.n
    }

    /// Coefficient at a storage index (graded-lexicographic order).
    #[must_use]
    pub fn coeff(&self, idx: usize) -> f64 {
        self.c[idx]
    }

    /// All 32 coefficients in storage order.
    #[must_use]
    pub fn coeffs(&self) -> &[f64; BLADE_COUNT] {
        &self.c
    }

    /// Scalar (grade-0) part.
    #[must_use]
    pub fn scalar_part(&self) -> f64 {
        self.c[0]
    }

    /// Grade-1 coefficients `(e_1, ..., e_5)`.
    #[must_use]
    pub fn vector_part(&self) -> [f64; MAX_GENERATORS] {
        [self.c[1], self.c[2], self.c[3], self.c[4], self.c[5]]
    }

    /// Projection onto a single grade.
    #[must_use]
    pub fn grade_part(&self, grade: u32) -> Self {
        let mut out = Multivector::zero(self.n);
        for (idx, &v) in self.c.iter().enumerate() {
            if BLADE_GRADES[idx] == grade {
                out.c[idx] = v;
            }
        }
        out
    }

    /// Euclidean norm of the coefficient vector.
    #[must_use]
    pub fn norm(&self) -> f64 {
        self.c.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Sum of absolute coefficients.
    #[must_use]
    pub fn norm_l1(&self) -> f64 {
        self.c.iter().map(|v| v.abs()).sum()
    }

    /// True when every coefficient of grade 2 and higher is exactly zero.
    #[must_use]
    pub fn is_paravector(&self) -> bool {
        (6..BLADE_COUNT).all(|idx| self.c[idx] == 0.0)
    }

    /// Reinterpret as a paravector if all higher-grade parts vanish exactly.
    #[must_use]
    pub fn as_paravector(&self) -> Option<Paravector> {
        if self.is_paravector() {
            Some(Paravector::new(self.c[0], self.vector_part()))
        } else {
            None
        }
    }

    /// Same element viewed inside a (weakly) larger algebra.
    #[must_use]
    pub fn promoted(&self, n: u8) -> Self {
        check_generator_count(n);
        assert!(n >= self.n, "cannot demote a multivector");
        Multivector { n, c: self.c }
    }

    /// Left-regular matrix representation `rho(a)`: the 32x32 real matrix of
    /// left multiplication by `self` on the blade basis, `rho(a) e_j = a e_j`.
    ///
    /// The representation is a faithful algebra homomorphism:
    /// `rho(ab) = rho(a) rho(b)`.
    #[must_use]
    pub fn regular_rep(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(BLADE_COUNT, BLADE_COUNT);
        for (i, &ai) in self.c.iter().enumerate() {
            if ai == 0.0 {
                continue;
            }
            for (j, &(sign, k)) in MUL_TABLE[i].iter().enumerate() {
                m[(k as usize, j)] += f64::from(sign) * ai;
            }
        }
        m
    }

    /// Multiplicative inverse.
    ///
    /// Grade-(0,1) elements (paravectors) take an exact closed-form route:
    /// `x^{-1} = conj(x) / |x|^2`, with the reciprocal 1-norm condition
    /// number of the regular matrix available in closed form as
    /// `|x|^2 / l1(x)^2` (every column of `rho(x)` has 1-norm `l1(x)`, and
    /// `rho(x)^{-1} = rho(conj(x)) / |x|^2`). Everything else goes through
    /// an LU factorisation of the regular representation, reading the
    /// inverse off the column of the scalar blade.
    ///
    /// # Errors
    ///
    /// [`Error::SingularMultivector`] when the reciprocal condition number
    /// falls below [`tolerances::SINGULARITY_RCOND`].
    pub fn inverse(&self) -> Result<Multivector> {
        if self.is_paravector() {
            let p = Paravector::new(self.c[0], self.vector_part());
            let modulus_sq = p.modulus_sq();
            let l1 = self.norm_l1();
            let rcond = if l1 == 0.0 {
                0.0
            } else {
                modulus_sq / (l1 * l1)
            };
            if rcond < tolerances::SINGULARITY_RCOND {
                return Err(Error::SingularMultivector { rcond });
            }
            let conj = p.conj();
            let mut out = Multivector::zero(self.n);
            out.c[0] = conj.x0 / modulus_sq;
            for i in 0..MAX_GENERATORS {
                out.c[i + 1] = conj.xv[i] / modulus_sq;
            }
            return Ok(out);
        }

        let rep = self.regular_rep();
        let inv = linalg::invert_with_rcond(&rep);
        match inv {
            Some(res) if res.rcond >= tolerances::SINGULARITY_RCOND => {
                let mut out = Multivector::zero(self.n);
                for idx in 0..BLADE_COUNT {
                    out.c[idx] = res.inverse[(idx, 0)];
                }
                // The inverse of a valid element of R_n stays in R_n; any
                // numerically nonzero coefficient outside it would signal a
                // regular-representation bug, so zero structurally.
                for (co, &mask) in out.c.iter_mut().zip(BLADE_MASKS.iter()) {
                    if mask >> self.n != 0 {
                        *co = 0.0;
                    }
                }
                Ok(out)
            }
            Some(res) => Err(Error::SingularMultivector { rcond: res.rcond }),
            None => Err(Error::SingularMultivector { rcond: 0.0 }),
        }
    }

    fn promote_pair(a: &Multivector, b: &Multivector) -> u8 {
        a.n.max(b.n)
    }
}

impl fmt::Debug for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Multivector(n={}) [", self.n)?;
        let mut first = true;
        for (idx, &v) in self.c.iter().enumerate() {
            if v == 0.0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if BLADE_MASKS[idx] == 0 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}*e")?;
                for g in 1..=MAX_GENERATORS {
                    if BLADE_MASKS[idx] >> (g - 1) & 1 == 1 {
                        write!(f, "{g}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, "]")
    }
}

impl Add for Multivector {
    type Output = Multivector;
    fn add(self, rhs: Multivector) -> Multivector {
        let n = Multivector::promote_pair(&self, &rhs);
        let mut c = self.c;
        for (lhs, rhs) in c.iter_mut().zip(rhs.c.iter()) {
            *lhs += rhs;
        }
        Multivector { n, c }
    }
}

impl AddAssign for Multivector {
    fn add_assign(&mut self, rhs: Multivector) {
        *self = *self + rhs;
    }
}

impl Sub for Multivector {
    type Output = Multivector;
    fn sub(self, rhs: Multivector) -> Multivector {
        let n = Multivector::promote_pair(&self, &rhs);
        let mut c = self.c;
        for (lhs, rhs) in c.iter_mut().zip(rhs.c.iter()) {
            *lhs -= rhs;
        }
        Multivector { n, c }
    }
}

impl SubAssign for Multivector {
    fn sub_assign(&mut self, rhs: Multivector) {
        *self = *self - rhs;
    }
}

impl Neg for Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        let mut c = self.c;
        for v in &mut c {
            *v = -*v;
        }
        Multivector { n: self.n, c }
    }
}

impl Mul for Multivector {
    type Output = Multivector;
    fn mul(self, rhs: Multivector) -> Multivector {
        let n = Multivector::promote_pair(&self, &rhs);
        let mut c = [0.0; BLADE_COUNT];
        for (i, &ai) in self.c.iter().enumerate() {
            if ai == 0.0 {
                continue;
            }
            let row = &MUL_TABLE[i];
            for (j, &bj) in rhs.c.iter().enumerate() {
                if bj == 0.0 {
                    continue;
                }
                let (sign, k) = row[j];
                c[k as usize] += f64::from(sign) * ai * bj;
            }
        }
        Multivector { n, c }
    }
}

impl Mul<f64> for Multivector {
    type Output = Multivector;
    fn mul(self, rhs: f64) -> Multivector {
        let mut c = self.c;
        for v in &mut c {
            *v *= rhs;
        }
        Multivector { n: self.n, c }
    }
}

impl Mul<Multivector> for f64 {
    type Output = Multivector;
    fn mul(self, rhs: Multivector) -> Multivector {
        rhs * self
    }
}

/// Paravector `x = x_0 + x_1 e_1 + ... + x_5 e_5`.
///
/// Spectral parameters, quadrature nodes and slice-plane points are all
/// paravectors. The type is algebra-size agnostic: when converted into an
/// `R_n` multivector, components above `n` must vanish.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct Paravector {
    /// Real (scalar) component.
    pub x0: f64,
    /// Vector components along `e_1, ..., e_5`.
    pub xv: [f64; MAX_GENERATORS],
}

impl Paravector {
    /// Paravector from its scalar and vector components.
    #[must_use]
    pub fn new(x0: f64, xv: [f64; MAX_GENERATORS]) -> Self {
        Paravector { x0, xv }
    }

    /// Purely real paravector.
    #[must_use]
    pub fn real(x0: f64) -> Self {
        Paravector::new(x0, [0.0; MAX_GENERATORS])
    }

    /// Zero paravector.
    #[must_use]
    pub fn zero() -> Self {
        Paravector::real(0.0)
    }

    /// Conjugate `conj(x) = x_0 - x_vec` (vector part negated).
    #[must_use]
    pub fn conj(&self) -> Self {
        let mut xv = self.xv;
        for v in &mut xv {
            *v = -*v;
        }
        Paravector { x0: self.x0, xv }
    }

    /// Squared modulus `|x|^2 = x conj(x) = x_0^2 + |x_vec|^2`.
    #[must_use]
    pub fn modulus_sq(&self) -> f64 {
        self.x0 * self.x0 + self.xv.iter().map(|v| v * v).sum::<f64>()
    }

    /// Modulus `|x|`.
    #[must_use]
    pub fn modulus(&self) -> f64 {
        self.modulus_sq().sqrt()
    }

    /// Euclidean norm of the vector part.
    #[must_use]
    pub fn vec_norm(&self) -> f64 {
        self.xv.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Half-plane representative `(x_0, |x_vec|)` of the sphere `[x]`.
    ///
    /// Two paravectors generate the same sphere iff their representatives
    /// coincide.
    #[must_use]
    pub fn sphere_point(&self) -> (f64, f64) {
        (self.x0, self.vec_norm())
    }

    /// Exact inverse `conj(x) / |x|^2`.
    ///
    /// # Errors
    ///
    /// [`Error::ZeroParavector`] for the zero paravector (the only
    /// non-invertible one: `x conj(x) = |x|^2 > 0` otherwise).
    pub fn inverse(&self) -> Result<Paravector> {
        let m = self.modulus_sq();
        if m == 0.0 {
            return Err(Error::ZeroParavector);
        }
        let c = self.conj();
        let mut xv = c.xv;
        for v in &mut xv {
            *v /= m;
        }
        Ok(Paravector {
            x0: c.x0 / m,
            xv,
        })
    }

    /// Exact square, again a paravector:
    /// `x^2 = (x_0^2 - |x_vec|^2) + 2 x_0 x_vec`.
    #[must_use]
    pub fn square(&self) -> Paravector {
        let vv: f64 = self.xv.iter().map(|v| v * v).sum();
        let mut xv = self.xv;
        for v in &mut xv {
            *v *= 2.0 * self.x0;
        }
        Paravector {
            x0: self.x0 * self.x0 - vv,
            xv,
        }
    }

    /// `k`-th power. Powers of a paravector stay in the commutative plane
    /// spanned by `1` and its vector direction, so this is closed-form
    /// complex exponentiation in that plane.
    #[must_use]
    pub fn pow(&self, k: u32) -> Paravector {
        let mut acc = Paravector::real(1.0);
        for _ in 0..k {
            acc = acc.mul_pv(self);
        }
        acc
    }

    /// Product with another paravector *assumed to lie in the same slice
    /// plane* (parallel or zero vector parts); used internally for powers.
    fn mul_pv(&self, rhs: &Paravector) -> Paravector {
        // (a0 + a_vec)(b0 + b_vec) with a_vec || b_vec:
        // scalar: a0 b0 - a_vec . b_vec ; vector: a0 b_vec + b0 a_vec.
        let dot: f64 = self
            .xv
            .iter()
            .zip(rhs.xv.iter())
            .map(|(a, b)| a * b)
            .sum();
        let xv: [f64; MAX_GENERATORS] =
            std::array::from_fn(|i| self.x0 * rhs.xv[i] + rhs.x0 * self.xv[i]);
        Paravector {
            x0: self.x0 * rhs.x0 - dot,
            xv,
        }
    }

    /// Largest generator index carrying a nonzero component (0 if purely
    /// real).
    #[must_use]
    pub fn max_generator(&self) -> usize {
        (0..MAX_GENERATORS)
            .rev()
            .find(|&i| self.xv[i] != 0.0)
            .map_or(0, |i| i + 1)
    }

    /// View inside `R_n`.
    ///
    /// # Panics
    ///
    /// If a vector component above `n` is nonzero.
    #[must_use]
    pub fn as_multivector(&self, n: u8) -> Multivector {
        check_generator_count(n);
        assert!(
            self.max_generator() <= n as usize,
            "paravector uses generator e_{} above n = {n}",
            self.max_generator()
        );
        let mut m = Multivector::zero(n);
        m.c[0] = self.x0;
        for i in 0..MAX_GENERATORS {
            m.c[i + 1] = self.xv[i];
        }
        m
    }
}

impl Add for Paravector {
    type Output = Paravector;
    fn add(self, rhs: Paravector) -> Paravector {
        let mut xv = self.xv;
        for (l, r) in xv.iter_mut().zip(rhs.xv.iter()) {
            *l += r;
        }
        Paravector {
            x0: self.x0 + rhs.x0,
            xv,
        }
    }
}

impl Sub for Paravector {
    type Output = Paravector;
    fn sub(self, rhs: Paravector) -> Paravector {
        let mut xv = self.xv;
        for (l, r) in xv.iter_mut().zip(rhs.xv.iter()) {
            *l -= r;
        }
        Paravector {
            x0: self.x0 - rhs.x0,
            xv,
        }
    }
}

impl Neg for Paravector {
    type Output = Paravector;
    fn neg(self) -> Paravector {
        let mut xv = self.xv;
        for v in &mut xv {
            *v = -*v;
        }
        Paravector { x0: -self.x0, xv }
    }
}

impl Mul<f64> for Paravector {
    type Output = Paravector;
    fn mul(self, rhs: f64) -> Paravector {
        let mut xv = self.xv;
        for v in &mut xv {
            *v *= rhs;
        }
        Paravector {
            x0: self.x0 * rhs,
            xv,
        }
    }
}

/// Distance between two spheres in half-plane coordinates: the Euclidean
/// distance between their `(center, radius)` representatives.
#[must_use]
pub fn sphere_distance(a: (f64, f64), b: (f64, f64)) -> f64 {
    let dx = a.0 - b.0;
    let dy = a.1 - b.1;
    (dx * dx + dy * dy).sqrt()
}

/// Unit grade-1 direction `J` with `J^2 = -1`, labelling a slice plane
/// `C_J = { u + J v : u, v real }`.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct UnitImaginary {
    n: u8,
    dir: [f64; MAX_GENERATORS],
}

impl UnitImaginary {
    /// Normalized direction inside `R_n`.
    ///
    /// # Errors
    ///
    /// [`Error::InvalidConstruction`] for the zero direction or one using a
    /// generator above `n`.
    pub fn new(n: u8, dir: [f64; MAX_GENERATORS]) -> Result<Self> {
        check_generator_count(n);
        for (i, &v) in dir.iter().enumerate() {
            if v != 0.0 && i >= n as usize {
                return Err(Error::invalid(format!(
                    "direction uses generator e_{} above n = {n}",
                    i + 1
                )));
            }
        }
        let norm = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::invalid("slice direction must be nonzero"));
        }
        let mut unit = dir;
        for v in &mut unit {
            *v /= norm;
        }
        Ok(UnitImaginary { n, dir: unit })
    }

    /// The `i`-th coordinate axis (1-based).
    #[must_use]
    pub fn axis(n: u8, i: usize) -> Self {
        let mut dir = [0.0; MAX_GENERATORS];
        dir[i - 1] = 1.0;
        UnitImaginary::new(n, dir).expect("axis direction is valid")
    }

    /// Uniformly random direction on the unit sphere of `R^n`.
    #[must_use]
    pub fn random(n: u8, rng: &mut impl rand::Rng) -> Self {
        check_generator_count(n);
        loop {
            let mut dir = [0.0; MAX_GENERATORS];
            for item in dir.iter_mut().take(n as usize) {
                // Box-Muller-free Gaussian via sum of uniforms is biased;
                // use the crate-standard normal sampling instead.
                *item = sample_standard_normal(rng);
            }
            if dir.iter().map(|v| v * v).sum::<f64>() > 1e-12 {
                return UnitImaginary::new(n, dir).expect("nonzero direction");
            }
        }
    }

    /// Generator count of the ambient algebra.
    #[must_use]
    pub fn n(&self) -> u8 {
        self.n
    }

    /// Unit direction components.
    #[must_use]
    pub fn dir(&self) -> &[f64; MAX_GENERATORS] {
        &self.dir
    }

    /// Paravector `r * J` (no real part).
    #[must_use]
    pub fn scaled(&self, r: f64) -> Paravector {
        let mut xv = self.dir;
        for v in &mut xv {
            *v *= r;
        }
        Paravector { x0: 0.0, xv }
    }

    /// Slice-plane point `u + J v`.
    #[must_use]
    pub fn point(&self, u: f64, v: f64) -> Paravector {
        let mut p = self.scaled(v);
        p.x0 = u;
        p
    }

    /// View as a grade-1 multivector of `R_n`.
    #[must_use]
    pub fn as_multivector(&self) -> Multivector {
        self.scaled(1.0).as_multivector(self.n)
    }
}

/// Standard normal sample via Marsaglia's polar method.
///
/// Kept local so the whole crate draws Gaussians identically regardless of
/// distribution-crate versions.
pub(crate) fn sample_standard_normal(rng: &mut impl rand::Rng) -> f64 {
    loop {
        let u: f64 = rng.random_range(-1.0..1.0);
        let v: f64 = rng.random_range(-1.0..1.0);
        let s = u * u + v * v;
        if s > 0.0 && s < 1.0 {
            return u * (-2.0 * s.ln() / s).sqrt();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn random_multivector(n: u8, rng: &mut impl rand::Rng) -> Multivector {
        let mut c = [0.0; BLADE_COUNT];
        for idx in 0..BLADE_COUNT {
            if BLADE_MASKS[idx] >> n == 0 {
                c[idx] = rng.random_range(-1.0..1.0);
            }
        }
        Multivector::from_coeffs(n, c).unwrap()
    }

    #[test]
    fn blade_masks_are_graded_lexicographic() {
        for w in BLADE_MASKS.windows(2) {
            let (a, b) = (w[0], w[1]);
            let (ga, gb) = (a.count_ones(), b.count_ones());
            assert!(ga < gb || (ga == gb && tuple_of(a) < tuple_of(b)));
        }
        fn tuple_of(mask: u32) -> Vec<u32> {
            (0..5).filter(|i| mask >> i & 1 == 1).collect()
        }
    }

    #[test]
    fn mask_index_tables_are_inverse() {
        for idx in 0..BLADE_COUNT {
            assert_eq!(MASK_TO_INDEX[BLADE_MASKS[idx] as usize] as usize, idx);
        }
    }

    #[test]
    fn generators_square_to_minus_one_and_anticommute() {
        for n in 1..=5u8 {
            for i in 1..=n as usize {
                let ei = Multivector::basis_vector(n, i);
                assert_eq!(ei * ei, Multivector::scalar(n, -1.0));
                for j in 1..=n as usize {
                    if i != j {
                        let ej = Multivector::basis_vector(n, j);
                        let anti = ei * ej + ej * ei;
                        assert_eq!(anti, Multivector::zero(n));
                    }
                }
            }
        }
    }

    #[test]
    fn unit_law_holds() {
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        for n in 1..=5u8 {
            let a = random_multivector(n, &mut rng);
            let one = Multivector::one(n);
            assert_eq!(one * a, a);
            assert_eq!(a * one, a);
        }
    }

    #[test]
    fn pseudoscalar_is_central_for_odd_n() {
        let mut rng = ChaCha12Rng::seed_from_u64(2);
        for n in [1u8, 3, 5] {
            let ps = Multivector::pseudoscalar(n);
            for _ in 0..20 {
                let a = random_multivector(n, &mut rng);
                let comm = ps * a - a * ps;
                assert!(comm.norm() < 1e-14, "pseudoscalar not central for n={n}");
            }
        }
    }

    #[test]
    fn product_respects_structural_zeros() {
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        for n in 1..=4u8 {
            let a = random_multivector(n, &mut rng);
            let b = random_multivector(n, &mut rng);
            let p = a * b;
            for (idx, &mask) in BLADE_MASKS.iter().enumerate() {
                if mask >> n != 0 {
                    assert_eq!(p.coeff(idx), 0.0);
                }
            }
        }
    }

    #[test]
    fn mixed_n_operations_promote() {
        let a = Multivector::basis_vector(2, 1);
        let b = Multivector::basis_vector(4, 4);
        assert_eq!((a + b).n(), 4);
        assert_eq!((a * b).n(), 4);
    }

    #[test]
    fn associativity_on_random_triples() {
        let mut rng = ChaCha12Rng::seed_from_u64(4);
        for _ in 0..1000 {
            let n = rng.random_range(1..=5u8);
            let a = random_multivector(n, &mut rng);
            let b = random_multivector(n, &mut rng);
            let c = random_multivector(n, &mut rng);
            let lhs = (a * b) * c;
            let rhs = a * (b * c);
            let scale = a.norm() * b.norm() * c.norm() + 1.0;
            assert!(
                (lhs - rhs).norm() / scale < tolerances::ALGEBRA_PROPERTY_ABS,
                "associativity residual too large"
            );
        }
    }

    #[test]
    fn distributivity_on_random_triples() {
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        for _ in 0..200 {
            let n = rng.random_range(1..=5u8);
            let a = random_multivector(n, &mut rng);
            let b = random_multivector(n, &mut rng);
            let c = random_multivector(n, &mut rng);
            let lhs = a * (b + c);
            let rhs = a * b + a * c;
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn regular_rep_is_homomorphism() {
        let mut rng = ChaCha12Rng::seed_from_u64(6);
        for _ in 0..20 {
            let a = random_multivector(5, &mut rng);
            let b = random_multivector(5, &mut rng);
            let lhs = (a * b).regular_rep();
            let rhs = a.regular_rep() * b.regular_rep();
            let diff = (&lhs - &rhs).norm();
            assert!(diff < 1e-12 * (1.0 + lhs.norm()));
        }
    }

    #[test]
    fn regular_rep_is_faithful_on_blades() {
        // rho(blade) columns permute the basis with signs; distinct blades
        // give distinct matrices.
        for i in 0..BLADE_COUNT {
            let a = Multivector::from_coeffs(5, {
                let mut c = [0.0; BLADE_COUNT];
                c[i] = 1.0;
                c
            })
            .unwrap();
            let rep = a.regular_rep();
            // First column is the blade itself.
            for r in 0..BLADE_COUNT {
                let expected = if r == i { 1.0 } else { 0.0 };
                assert_eq!(rep[(r, 0)], expected);
            }
        }
    }

    #[test]
    fn paravector_times_conjugate_is_modulus_squared() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for _ in 0..50 {
            let x = Paravector::new(
                rng.random_range(-2.0..2.0),
                std::array::from_fn(|_| rng.random_range(-2.0..2.0)),
            );
            let m = x.as_multivector(5) * x.conj().as_multivector(5);
            assert_abs_diff_eq!(m.scalar_part(), x.modulus_sq(), epsilon = 1e-12);
            assert!((m - Multivector::scalar(5, x.modulus_sq())).norm() < 1e-12);
        }
    }

    #[test]
    fn paravector_square_matches_full_product() {
        let mut rng = ChaCha12Rng::seed_from_u64(8);
        for _ in 0..50 {
            let x = Paravector::new(
                rng.random_range(-2.0..2.0),
                std::array::from_fn(|_| rng.random_range(-2.0..2.0)),
            );
            let full = x.as_multivector(5) * x.as_multivector(5);
            let fast = x.square().as_multivector(5);
            assert!((full - fast).norm() < 1e-13);
            assert!(full.is_paravector());
        }
    }

    #[test]
    fn paravector_powers_match_clifford_products() {
        let mut rng = ChaCha12Rng::seed_from_u64(9);
        for _ in 0..20 {
            let x = Paravector::new(
                rng.random_range(-1.5..1.5),
                std::array::from_fn(|_| rng.random_range(-1.5..1.5)),
            );
            let mut acc = Multivector::one(5);
            for k in 0..=5u32 {
                let fast = x.pow(k).as_multivector(5);
                assert!((acc - fast).norm() < 1e-10 * (1.0 + acc.norm()));
                acc = acc * x.as_multivector(5);
            }
        }
    }

    #[test]
    fn known_inverse_of_one_plus_bivector() {
        // (1 + e12)(1 - e12) = 1 - e12 e12 = 2, so the inverse halves it.
        let e12 = Multivector::basis_blade(5, 0b00011);
        let a = Multivector::one(5) + e12;
        let inv = a.inverse().unwrap();
        let expected = (Multivector::one(5) - e12) * 0.5;
        assert!((inv - expected).norm() < 1e-14);
        assert!((a * inv - Multivector::one(5)).norm() < 1e-14);
    }

    #[test]
    fn paravector_inverse_round_trip() {
        let mut rng = ChaCha12Rng::seed_from_u64(10);
        for _ in 0..50 {
            let x = Paravector::new(
                rng.random_range(-2.0..2.0),
                std::array::from_fn(|_| rng.random_range(-2.0..2.0)),
            );
            if x.modulus() < 0.1 {
                continue;
            }
            let inv = x.inverse().unwrap();
            let prod = x.as_multivector(5) * inv.as_multivector(5);
            assert!((prod - Multivector::one(5)).norm() < 1e-14);
        }
    }

    #[test]
    fn general_inverse_round_trip() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        let mut checked = 0;
        for _ in 0..100 {
            let n = rng.random_range(1..=5u8);
            let a = random_multivector(n, &mut rng) + Multivector::scalar(n, 2.0);
            match a.inverse() {
                Ok(inv) => {
                    checked += 1;
                    assert_eq!(inv.n(), a.n());
                    let left = a * inv - Multivector::one(n);
                    let right = inv * a - Multivector::one(n);
                    assert!(left.norm() < tolerances::INVERSE_ROUNDTRIP_REL);
                    assert!(right.norm() < tolerances::INVERSE_ROUNDTRIP_REL);
                }
                Err(Error::SingularMultivector { .. }) => {}
                Err(e) => panic!("unexpected error {e:?}"),
            }
        }
        assert!(checked > 80, "almost all shifted elements should invert");
    }

    #[test]
    fn paravector_fast_path_matches_dense_route() {
        let mut rng = ChaCha12Rng::seed_from_u64(12);
        for _ in 0..50 {
            let x = Paravector::new(
                rng.random_range(-2.0..2.0),
                std::array::from_fn(|_| rng.random_range(-2.0..2.0)),
            );
            if x.modulus() < 0.3 {
                continue;
            }
            let as_mv = x.as_multivector(5);
            let fast = as_mv.inverse().unwrap();
            // Force the dense route by going through the regular rep.
            let res = linalg::invert_with_rcond(&as_mv.regular_rep()).unwrap();
            let mut dense = Multivector::zero(5);
            for idx in 0..BLADE_COUNT {
                dense += Multivector::from_coeffs(5, {
                    let mut c = [0.0; BLADE_COUNT];
                    c[idx] = res.inverse[(idx, 0)];
                    c
                })
                .unwrap();
            }
            assert!(
                (fast - dense).norm()
                    < tolerances::INVERSE_CROSSCHECK_REL * (1.0 + dense.norm())
            );
        }
    }

    #[test]
    fn singular_elements_are_rejected() {
        // e123 squares to +1 (three transpositions plus three contractions),
        // so (1 + e123)(1 - e123) = 0: a genuine zero divisor.
        let u = Multivector::basis_blade(5, 0b00111);
        assert_eq!(u * u, Multivector::one(5));
        let a = Multivector::one(5) + u;
        match a.inverse() {
            Err(Error::SingularMultivector { rcond }) => assert!(rcond < 1e-12),
            other => panic!("expected singularity, got {other:?}"),
        }
        assert!(matches!(
            Paravector::zero().inverse(),
            Err(Error::ZeroParavector)
        ));
    }

    #[test]
    fn unit_imaginary_squares_to_minus_one() {
        let mut rng = ChaCha12Rng::seed_from_u64(13);
        for n in 1..=5u8 {
            let j = UnitImaginary::random(n, &mut rng);
            let jm = j.as_multivector();
            assert!((jm * jm + Multivector::one(n)).norm() < 1e-14);
        }
    }

    #[test]
    fn unit_imaginary_rejects_bad_directions() {
        assert!(UnitImaginary::new(5, [0.0; 5]).is_err());
        assert!(UnitImaginary::new(2, [0.0, 0.0, 1.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn from_coeffs_rejects_structural_violations() {
        let mut c = [0.0; BLADE_COUNT];
        c[5] = 1.0; // e5
        assert!(Multivector::from_coeffs(3, c).is_err());
        assert!(Multivector::from_coeffs(5, c).is_ok());
    }

    #[test]
    fn sphere_distance_is_euclidean_in_half_plane() {
        let a = Paravector::new(1.0, [0.0, 3.0, 4.0, 0.0, 0.0]); // (1, 5)
        let b = Paravector::new(4.0, [0.0, 0.0, 1.0, 0.0, 0.0]); // (4, 1)
        let d = sphere_distance(a.sphere_point(), b.sphere_point());
        assert_abs_diff_eq!(d, 5.0, epsilon = 1e-12);
    }
}
