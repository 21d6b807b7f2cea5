//! Operators: paravector operators with commuting components, and matrices
//! with Clifford-valued entries.
//!
//! A paravector operator on `R^d` is `T = T_0 + e_1 T_1 + ... + e_n T_n`
//! with real `d x d` components that commute pairwise. Commutation is
//! guaranteed structurally: operators are built from a shared eigenbasis
//! `V` and per-component eigenvalue tables, `T_mu = V diag(lambda_mu) V^{-1}`,
//! and still asserted numerically at construction. The scalar component is
//! zero unless some vector component vanishes identically (the admissible
//! degenerate case).
//!
//! The S-spectrum of such an operator is the union of the spheres generated
//! by its paravector eigenvalues; all spectral geometry happens on the
//! half-plane representatives `(re, |vec|)`.
//!
//! [`CliffordOperator`] is the ambient arena: a `d x d` matrix of
//! multivector entries, acting on column vectors of multivectors by entrywise
//! left multiplication. Resolvents, kernels, projectors and all identity
//! checks are values of this type. Inversion lifts the matrix to a
//! `32d x 32d` real matrix of regular-representation blocks, inverts it
//! (exact reciprocal-condition reporting), and reads the multivector entries
//! back off the scalar-blade columns; entrywise-diagonal matrices take the
//! obvious fast path, which the test suite cross-validates against the lift.

use crate::algebra::{sphere_distance, Multivector, Paravector, BLADE_COUNT, BLADE_MASKS, MAX_GENERATORS};
use crate::error::{Error, Result};
use crate::linalg;
use crate::tolerances;
use nalgebra::DMatrix;
use std::ops::{Add, Mul, Neg, Sub};

/// Largest supported matrix rank for operators.
pub const MAX_RANK: usize = 16;

/// One sphere of the S-spectrum, in half-plane coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralSphere {
    /// Real part shared by the whole sphere.
    pub center: f64,
    /// Vector-part radius (zero for a real eigenvalue).
    pub radius: f64,
    /// Number of eigenvalue rows generating this sphere.
    pub multiplicity: usize,
}

impl SpectralSphere {
    /// Half-plane representative `(center, radius)`.
    #[must_use]
    pub fn point(&self) -> (f64, f64) {
        (self.center, self.radius)
    }
}

/// `T = T_0 + e_1 T_1 + ... + e_n T_n` with commuting real components.
#[derive(Clone, Debug)]
pub struct ParavectorOperator {
    n: u8,
    d: usize,
    /// Components `T_0, T_1, ..., T_5` (unused ones above `n` are zero).
    comps: Vec<DMatrix<f64>>,
    eigenvalues: Vec<Paravector>,
    basis: DMatrix<f64>,
    basis_inv: DMatrix<f64>,
}

impl ParavectorOperator {
    /// Operator with the given paravector eigenvalues in a shared basis.
    ///
    /// `basis = None` yields the diagonal operator. Row `k` of the table is
    /// the joint eigenvalue of all components on the `k`-th basis column.
    ///
    /// # Errors
    ///
    /// * [`Error::InvalidConstruction`] for an empty table, a rank above
    ///   [`MAX_RANK`], an eigenvalue using a generator above `n`, or a
    ///   nonzero scalar part while every vector slot is occupied;
    /// * [`Error::RankMismatch`] when the basis shape does not match the
    ///   table;
    /// * [`Error::SingularBasis`] when the basis is numerically singular.
    pub fn commuting(
        n: u8,
        eigenvalues: &[Paravector],
        basis: Option<&DMatrix<f64>>,
    ) -> Result<Self> {
        let d = eigenvalues.len();
        if d == 0 {
            return Err(Error::invalid("operator needs at least one eigenvalue"));
        }
        if d > MAX_RANK {
            return Err(Error::invalid(format!(
                "rank {d} exceeds the supported cap of {MAX_RANK}"
            )));
        }
        for ev in eigenvalues {
            if ev.max_generator() > n as usize {
                return Err(Error::invalid(format!(
                    "eigenvalue uses generator e_{} above n = {n}",
                    ev.max_generator()
                )));
            }
        }
        // A nonzero scalar component is admissible only when some vector
        // component vanishes identically (its role can then be absorbed).
        let has_scalar = eigenvalues.iter().any(|ev| ev.x0 != 0.0);
        if has_scalar {
            let some_component_vanishes = (0..n as usize)
                .any(|i| eigenvalues.iter().all(|ev| ev.xv[i] == 0.0));
            if !some_component_vanishes {
                return Err(Error::invalid(
                    "nonzero scalar component requires some vector component to vanish identically",
                ));
            }
        }

        let (basis, basis_inv) = match basis {
            None => (DMatrix::identity(d, d), DMatrix::identity(d, d)),
            Some(v) => {
                if v.nrows() != d || v.ncols() != d {
                    return Err(Error::RankMismatch {
                        expected: d,
                        got: v.nrows().max(v.ncols()),
                    });
                }
                match linalg::invert_with_rcond(v) {
                    Some(res) if res.rcond >= tolerances::SINGULARITY_RCOND => {
                        (v.clone(), res.inverse)
                    }
                    Some(res) => return Err(Error::SingularBasis { rcond: res.rcond }),
                    None => return Err(Error::SingularBasis { rcond: 0.0 }),
                }
            }
        };

        let mut comps = Vec::with_capacity(MAX_GENERATORS + 1);
        for mu in 0..=MAX_GENERATORS {
            let diag = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                d,
                eigenvalues.iter().map(|ev| match mu {
                    0 => ev.x0,
                    _ => ev.xv[mu - 1],
                }),
            ));
            comps.push(&basis * diag * &basis_inv);
        }

        let op = ParavectorOperator {
            n,
            d,
            comps,
            eigenvalues: eigenvalues.to_vec(),
            basis,
            basis_inv,
        };
        op.assert_commuting()?;
        Ok(op)
    }

    /// Numerical re-check of pairwise component commutation (structural by
    /// construction, asserted anyway).
    fn assert_commuting(&self) -> Result<()> {
        for i in 0..=self.n as usize {
            for j in (i + 1)..=self.n as usize {
                let a = &self.comps[i];
                let b = &self.comps[j];
                let comm = (a * b - b * a).norm();
                let scale = a.norm() * b.norm() + 1.0;
                if comm / scale > tolerances::COMMUTATION_REL {
                    return Err(Error::invalid(format!(
                        "components {i} and {j} do not commute (relative residual {:.3e})",
                        comm / scale
                    )));
                }
            }
        }
        Ok(())
    }

    /// Generator count of the ambient algebra.
    #[must_use]
    pub fn n(&self) -> u8 {
        self.n
    }

    /// Matrix rank `d`.
    #[must_use]
    pub fn d(&self) -> usize {
        self.d
    }

    /// Real component `T_mu` (`mu = 0` is the scalar part).
    #[must_use]
    pub fn comp(&self, mu: usize) -> &DMatrix<f64> {
        &self.comps[mu]
    }

    /// Joint paravector eigenvalues (one per basis column).
    #[must_use]
    pub fn eigenvalues(&self) -> &[Paravector] {
        &self.eigenvalues
    }

    /// Shared eigenbasis.
    #[must_use]
    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    /// Inverse of the shared eigenbasis.
    #[must_use]
    pub fn basis_inv(&self) -> &DMatrix<f64> {
        &self.basis_inv
    }

    /// Conjugated operator `conj(T) = T_0 - e_1 T_1 - ... - e_n T_n`.
    #[must_use]
    pub fn conj(&self) -> ParavectorOperator {
        let mut comps = self.comps.clone();
        for c in comps.iter_mut().skip(1) {
            *c = -c.clone();
        }
        ParavectorOperator {
            n: self.n,
            d: self.d,
            comps,
            eigenvalues: self.eigenvalues.iter().map(Paravector::conj).collect(),
            basis: self.basis.clone(),
            basis_inv: self.basis_inv.clone(),
        }
    }

    /// Largest eigenvalue modulus.
    #[must_use]
    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues
            .iter()
            .map(Paravector::modulus)
            .fold(0.0, f64::max)
    }

    /// The S-spectrum: the spheres generated by the eigenvalues, merged up
    /// to the membership tolerance, sorted by center then radius.
    #[must_use]
    pub fn s_spectrum(&self) -> Vec<SpectralSphere> {
        let tol = tolerances::SPHERE_MEMBERSHIP_REL * (1.0 + self.spectral_radius());
        let mut spheres: Vec<SpectralSphere> = Vec::new();
        for ev in &self.eigenvalues {
            let p = ev.sphere_point();
            match spheres
                .iter_mut()
                .find(|s| sphere_distance(s.point(), p) <= tol)
            {
                Some(s) => s.multiplicity += 1,
                None => spheres.push(SpectralSphere {
                    center: p.0,
                    radius: p.1,
                    multiplicity: 1,
                }),
            }
        }
        spheres.sort_by(|a, b| {
            (a.center, a.radius)
                .partial_cmp(&(b.center, b.radius))
                .expect("sphere coordinates are finite")
        });
        spheres
    }

    /// Half-plane representatives of the spectral spheres.
    #[must_use]
    pub fn spectrum_points(&self) -> Vec<(f64, f64)> {
        self.s_spectrum().iter().map(SpectralSphere::point).collect()
    }

    /// `T + conj(T) = 2 T_0` (real).
    #[must_use]
    pub fn twice_scalar_comp(&self) -> DMatrix<f64> {
        &self.comps[0] * 2.0
    }

    /// `T conj(T) = T_0^2 + T_1^2 + ... + T_n^2` (real).
    #[must_use]
    pub fn modulus_comp(&self) -> DMatrix<f64> {
        let mut acc = DMatrix::zeros(self.d, self.d);
        for mu in 0..=self.n as usize {
            acc += &self.comps[mu] * &self.comps[mu];
        }
        acc
    }

    /// The operator as a matrix of paravector entries.
    #[must_use]
    pub fn to_clifford(&self) -> CliffordOperator {
        let mut out = CliffordOperator::zero(self.n, self.d);
        for i in 0..self.d {
            for j in 0..self.d {
                let mut coeffs = [0.0; BLADE_COUNT];
                // Grade <= 1 blades occupy the first n + 1 slots.
                for (co, comp) in coeffs
                    .iter_mut()
                    .zip(&self.comps)
                    .take(self.n as usize + 1)
                {
                    *co = comp[(i, j)];
                }
                out.set_entry(
                    i,
                    j,
                    Multivector::from_coeffs(self.n, coeffs).expect("component layout is valid"),
                );
            }
        }
        out
    }

    /// The vector part `e_1 T_1 + ... + e_n T_n` as a Clifford matrix.
    #[must_use]
    pub fn vector_op(&self) -> CliffordOperator {
        let mut out = CliffordOperator::zero(self.n, self.d);
        for i in 0..self.d {
            for j in 0..self.d {
                let mut coeffs = [0.0; BLADE_COUNT];
                for (co, comp) in coeffs
                    .iter_mut()
                    .zip(&self.comps)
                    .take(self.n as usize + 1)
                    .skip(1)
                {
                    *co = comp[(i, j)];
                }
                out.set_entry(
                    i,
                    j,
                    Multivector::from_coeffs(self.n, coeffs).expect("component layout is valid"),
                );
            }
        }
        out
    }

    /// Whether every component matrix is diagonal (identity basis).
    #[must_use]
    pub fn is_diagonal(&self) -> bool {
        self.comps.iter().all(|c| {
            (0..self.d).all(|i| (0..self.d).all(|j| i == j || c[(i, j)] == 0.0))
        })
    }
}

/// Well-conditioned pseudo-random basis: an orthogonal factor times a mild
/// unit upper-triangular perturbation (condition number of order one, but
/// genuinely non-orthogonal).
#[must_use]
pub fn random_basis(d: usize, rng: &mut impl rand::Rng) -> DMatrix<f64> {
    let gauss = DMatrix::from_fn(d, d, |_, _| crate::algebra::sample_standard_normal(rng));
    let q = gauss.qr().q();
    let skew = DMatrix::from_fn(d, d, |i, j| {
        if j > i {
            0.25 * rng.random_range(-1.0..1.0)
        } else {
            0.0
        }
    });
    q * (DMatrix::identity(d, d) + skew)
}

/// Seeded random commuting operator with eigenvalue moduli in `[0.5, 2.0]`
/// and zero scalar parts.
#[must_use]
pub fn random_commuting_operator(
    n: u8,
    d: usize,
    rng: &mut impl rand::Rng,
    diagonal: bool,
) -> ParavectorOperator {
    let eigenvalues: Vec<Paravector> = (0..d)
        .map(|_| {
            let mut ev = Paravector::new(
                rng.random_range(-1.0..1.0),
                std::array::from_fn(|i| {
                    if i < n as usize {
                        rng.random_range(-1.0..1.0)
                    } else {
                        0.0
                    }
                }),
            );
            ev.x0 = 0.0;
            let m = ev.modulus();
            if m < 1e-3 {
                ev.xv[0] = 1.0;
            }
            let target = rng.random_range(0.5..2.0);
            ev * (target / ev.modulus())
        })
        .collect();
    let basis = if diagonal || d == 1 {
        None
    } else {
        Some(random_basis(d, rng))
    };
    ParavectorOperator::commuting(n, &eigenvalues, basis.as_ref())
        .expect("random construction satisfies the preconditions")
}

/// `d x d` matrix with multivector entries (row-major storage).
#[derive(Clone, Debug, PartialEq)]
pub struct CliffordOperator {
    n: u8,
    d: usize,
    entries: Vec<Multivector>,
}

impl CliffordOperator {
    /// Zero matrix.
    #[must_use]
    pub fn zero(n: u8, d: usize) -> Self {
        CliffordOperator {
            n,
            d,
            entries: vec![Multivector::zero(n); d * d],
        }
    }

    /// Identity matrix.
    #[must_use]
    pub fn identity(n: u8, d: usize) -> Self {
        let mut out = CliffordOperator::zero(n, d);
        for i in 0..d {
            out.set_entry(i, i, Multivector::one(n));
        }
        out
    }

    /// Scalar multiple of the identity.
    #[must_use]
    pub fn scalar_identity(n: u8, d: usize, value: &Multivector) -> Self {
        let mut out = CliffordOperator::zero(n, d);
        for i in 0..d {
            out.set_entry(i, i, value.promoted(n.max(value.n())));
        }
        out
    }

    /// Generator count of the ambient algebra.
    #[must_use]
    pub fn n(&self) -> u8 {
        self.n
    }

    /// Matrix rank `d`.
    #[must_use]
    pub fn d(&self) -> usize {
        self.d
    }

    /// Entry at `(i, j)`.
    #[must_use]
    pub fn entry(&self, i: usize, j: usize) -> &Multivector {
        &self.entries[i * self.d + j]
    }

    /// Overwrite the entry at `(i, j)`.
    pub fn set_entry(&mut self, i: usize, j: usize, value: Multivector) {
        let n = self.n.max(value.n());
        self.n = n;
        self.entries[i * self.d + j] = value.promoted(n);
    }

    /// Frobenius norm over all blade coefficients of all entries.
    #[must_use]
    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| {
                let n = e.norm();
                n * n
            })
            .sum::<f64>()
            .sqrt()
    }

    /// Left scaling `M a` by a multivector: every entry becomes `a * entry`.
    #[must_use]
    pub fn scale_left(&self, a: &Multivector) -> Self {
        let mut out = self.clone();
        out.n = self.n.max(a.n());
        for e in &mut out.entries {
            *e = *a * *e;
        }
        out
    }

    /// Right scaling: every entry becomes `entry * a`.
    #[must_use]
    pub fn scale_right(&self, a: &Multivector) -> Self {
        let mut out = self.clone();
        out.n = self.n.max(a.n());
        for e in &mut out.entries {
            *e = *e * *a;
        }
        out
    }

    /// Real scaling.
    #[must_use]
    pub fn scale(&self, a: f64) -> Self {
        let mut out = self.clone();
        for e in &mut out.entries {
            *e = *e * a;
        }
        out
    }

    /// Checked sum.
    ///
    /// # Errors
    ///
    /// [`Error::RankMismatch`] when the ranks differ.
    pub fn checked_add(&self, rhs: &CliffordOperator) -> Result<CliffordOperator> {
        self.check_rank(rhs)?;
        let mut out = self.clone();
        out.n = self.n.max(rhs.n);
        for (l, r) in out.entries.iter_mut().zip(rhs.entries.iter()) {
            *l += *r;
        }
        Ok(out)
    }

    /// Checked difference.
    ///
    /// # Errors
    ///
    /// [`Error::RankMismatch`] when the ranks differ.
    pub fn checked_sub(&self, rhs: &CliffordOperator) -> Result<CliffordOperator> {
        self.check_rank(rhs)?;
        let mut out = self.clone();
        out.n = self.n.max(rhs.n);
        for (l, r) in out.entries.iter_mut().zip(rhs.entries.iter()) {
            *l -= *r;
        }
        Ok(out)
    }

    /// Checked matrix product.
    ///
    /// # Errors
    ///
    /// [`Error::RankMismatch`] when the ranks differ.
    pub fn checked_mul(&self, rhs: &CliffordOperator) -> Result<CliffordOperator> {
        self.check_rank(rhs)?;
        let n = self.n.max(rhs.n);
        let d = self.d;
        let mut out = CliffordOperator::zero(n, d);
        for i in 0..d {
            for j in 0..d {
                let mut acc = Multivector::zero(n);
                for k in 0..d {
                    acc += *self.entry(i, k) * *rhs.entry(k, j);
                }
                out.entries[i * d + j] = acc;
            }
        }
        Ok(out)
    }

    fn check_rank(&self, rhs: &CliffordOperator) -> Result<()> {
        if self.d != rhs.d {
            return Err(Error::RankMismatch {
                expected: self.d,
                got: rhs.d,
            });
        }
        Ok(())
    }

    /// Whether every off-diagonal entry is exactly zero.
    #[must_use]
    pub fn is_entrywise_diagonal(&self) -> bool {
        (0..self.d).all(|i| {
            (0..self.d).all(|j| i == j || self.entry(i, j).norm() == 0.0)
        })
    }

    /// Matrix inverse.
    ///
    /// Entrywise-diagonal matrices invert entry by entry; everything else
    /// goes through the `32d x 32d` regular-representation lift, whose
    /// inverse is read back off the scalar-blade columns.
    ///
    /// # Errors
    ///
    /// [`Error::SingularOperator`] when the lift's reciprocal condition
    /// number falls below [`tolerances::SINGULARITY_RCOND`] (for the
    /// diagonal path: when some diagonal entry is singular).
    pub fn inverse(&self) -> Result<CliffordOperator> {
        if self.is_entrywise_diagonal() {
            let mut out = CliffordOperator::zero(self.n, self.d);
            for i in 0..self.d {
                let inv = self.entry(i, i).inverse().map_err(|e| match e {
                    Error::SingularMultivector { rcond } => Error::SingularOperator { rcond },
                    other => other,
                })?;
                out.set_entry(i, i, inv);
            }
            return Ok(out);
        }
        self.inverse_via_lift()
    }

    /// Dense route: invert the full regular-representation lift.
    pub(crate) fn inverse_via_lift(&self) -> Result<CliffordOperator> {
        let d = self.d;
        let size = d * BLADE_COUNT;
        let mut lift = DMatrix::zeros(size, size);
        for i in 0..d {
            for j in 0..d {
                let rep = self.entry(i, j).regular_rep();
                lift.view_mut((i * BLADE_COUNT, j * BLADE_COUNT), (BLADE_COUNT, BLADE_COUNT))
                    .copy_from(&rep);
            }
        }
        match linalg::invert_with_rcond(&lift) {
            Some(res) if res.rcond >= tolerances::SINGULARITY_RCOND => {
                let mut out = CliffordOperator::zero(self.n, d);
                for i in 0..d {
                    for j in 0..d {
                        let mut coeffs = [0.0; BLADE_COUNT];
                        for (idx, c) in coeffs.iter_mut().enumerate() {
                            *c = res.inverse[(i * BLADE_COUNT + idx, j * BLADE_COUNT)];
                        }
                        // The inverse stays inside R_n (the lift is block
                        // diagonal across the R_n blades and their
                        // complement); zero the structural slots.
                        for (idx, c) in coeffs.iter_mut().enumerate() {
                            if BLADE_MASKS[idx] >> self.n != 0 {
                                *c = 0.0;
                            }
                        }
                        out.entries[i * d + j] =
                            Multivector::from_coeffs(self.n, coeffs).expect("structural zeros enforced");
                    }
                }
                Ok(out)
            }
            Some(res) => Err(Error::SingularOperator { rcond: res.rcond }),
            None => Err(Error::SingularOperator { rcond: 0.0 }),
        }
    }
}

impl Add for &CliffordOperator {
    type Output = CliffordOperator;
    /// # Panics
    ///
    /// On rank mismatch; use [`CliffordOperator::checked_add`] to handle it.
    fn add(self, rhs: &CliffordOperator) -> CliffordOperator {
        self.checked_add(rhs).expect("rank mismatch in operator sum")
    }
}

impl Sub for &CliffordOperator {
    type Output = CliffordOperator;
    /// # Panics
    ///
    /// On rank mismatch; use [`CliffordOperator::checked_sub`] to handle it.
    fn sub(self, rhs: &CliffordOperator) -> CliffordOperator {
        self.checked_sub(rhs)
            .expect("rank mismatch in operator difference")
    }
}

impl Mul for &CliffordOperator {
    type Output = CliffordOperator;
    /// # Panics
    ///
    /// On rank mismatch; use [`CliffordOperator::checked_mul`] to handle it.
    fn mul(self, rhs: &CliffordOperator) -> CliffordOperator {
        self.checked_mul(rhs)
            .expect("rank mismatch in operator product")
    }
}

impl Neg for &CliffordOperator {
    type Output = CliffordOperator;
    fn neg(self) -> CliffordOperator {
        self.scale(-1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn two_sphere_diagonal() -> ParavectorOperator {
        // Eigenvalues on two distinct spheres: (0.6, 0.8) and (-1.2, 1.6).
        let evs = [
            Paravector::new(0.0, [0.6, 0.8, 0.0, 0.0, 0.0]),
            Paravector::new(0.0, [0.0, -1.2, 1.6, 0.0, 0.0]),
        ];
        // Zero scalar part keeps the construction admissible.
        ParavectorOperator::commuting(5, &evs, None).unwrap()
    }

    #[test]
    fn diagonal_component_layout_matches_eigenvalues() {
        let t = two_sphere_diagonal();
        assert_eq!(t.comp(1)[(0, 0)], 0.6);
        assert_eq!(t.comp(2)[(0, 0)], 0.8);
        assert_eq!(t.comp(2)[(1, 1)], -1.2);
        assert_eq!(t.comp(3)[(1, 1)], 1.6);
        assert!(t.is_diagonal());
        let entry = t.to_clifford();
        assert_eq!(entry.entry(0, 0).coeff(1), 0.6);
        assert_eq!(entry.entry(0, 1).norm(), 0.0);
    }

    #[test]
    fn scalar_component_rule_is_enforced() {
        // Scalar part with every vector slot occupied: rejected.
        let bad = [
            Paravector::new(0.5, [1.0, 0.0, 0.0, 0.0, 0.0]),
            Paravector::new(0.0, [0.0, 1.0, 0.0, 0.0, 0.0]),
        ];
        assert!(matches!(
            ParavectorOperator::commuting(2, &bad, None),
            Err(Error::InvalidConstruction { .. })
        ));
        // Scalar part while component 2 vanishes identically: accepted.
        let good = [
            Paravector::new(0.5, [1.0, 0.0, 0.0, 0.0, 0.0]),
            Paravector::new(-0.3, [0.7, 0.0, 0.0, 0.0, 0.0]),
        ];
        assert!(ParavectorOperator::commuting(2, &good, None).is_ok());
    }

    #[test]
    fn eigenvalues_above_n_are_rejected() {
        let evs = [Paravector::new(0.0, [0.0, 0.0, 0.0, 1.0, 0.0])];
        assert!(ParavectorOperator::commuting(3, &evs, None).is_err());
        assert!(ParavectorOperator::commuting(4, &evs, None).is_ok());
    }

    #[test]
    fn components_commute_for_random_bases() {
        let mut rng = ChaCha12Rng::seed_from_u64(41);
        for d in [2usize, 4, 8] {
            let t = random_commuting_operator(5, d, &mut rng, false);
            for i in 0..=5usize {
                for j in 0..=5usize {
                    let comm = (t.comp(i) * t.comp(j) - t.comp(j) * t.comp(i)).norm();
                    assert!(comm < 1e-10, "components {i},{j} fail to commute: {comm}");
                }
            }
            assert!(!t.is_diagonal());
        }
    }

    #[test]
    fn algebraic_component_identities() {
        let mut rng = ChaCha12Rng::seed_from_u64(42);
        let t = random_commuting_operator(5, 3, &mut rng, false);
        // T + conj(T) = 2 T_0 and T conj(T) = sum T_mu^2, entrywise real.
        let tc = t.to_clifford();
        let tbar = t.conj().to_clifford();
        let sum = &tc + &tbar;
        let prod = &tc * &tbar;
        for i in 0..t.d() {
            for j in 0..t.d() {
                let s = *sum.entry(i, j);
                assert!((s - Multivector::scalar(5, t.twice_scalar_comp()[(i, j)])).norm() < 1e-12);
                let p = *prod.entry(i, j);
                assert!(
                    (p - Multivector::scalar(5, t.modulus_comp()[(i, j)])).norm() < 1e-10,
                    "T conj(T) should be the real modulus component"
                );
            }
        }
    }

    #[test]
    fn spectrum_merges_spheres_with_multiplicity() {
        // Two rows on the same sphere (conjugate vector parts), one apart.
        let evs = [
            Paravector::new(0.0, [0.6, 0.8, 0.0, 0.0, 0.0]),
            Paravector::new(0.0, [-0.6, 0.8, 0.0, 0.0, 0.0]),
            Paravector::new(0.0, [0.0, 0.0, 2.0, 0.0, 0.0]),
        ];
        let t = ParavectorOperator::commuting(5, &evs, None).unwrap();
        let spec = t.s_spectrum();
        assert_eq!(spec.len(), 2);
        assert_eq!(spec[0].multiplicity, 2);
        assert!((spec[0].radius - 1.0).abs() < 1e-12);
        assert_eq!(spec[1].multiplicity, 1);
        assert!((t.spectral_radius() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn conj_flips_vector_components() {
        let t = two_sphere_diagonal();
        let c = t.conj();
        assert_eq!(c.comp(1)[(0, 0)], -0.6);
        assert_eq!(c.comp(0), t.comp(0));
        // Same spectrum.
        assert_eq!(c.s_spectrum(), t.s_spectrum());
    }

    #[test]
    fn clifford_ops_respect_ranks() {
        let a = CliffordOperator::identity(5, 2);
        let b = CliffordOperator::identity(5, 3);
        assert!(matches!(
            a.checked_add(&b),
            Err(Error::RankMismatch { expected: 2, got: 3 })
        ));
        assert!(a.checked_mul(&a).is_ok());
    }

    #[test]
    fn scaling_multiplies_on_the_requested_side() {
        let mut m = CliffordOperator::zero(5, 1);
        m.set_entry(0, 0, Multivector::basis_vector(5, 2));
        let a = Multivector::basis_vector(5, 1);
        let left = m.scale_left(&a);
        let right = m.scale_right(&a);
        let e1 = Multivector::basis_vector(5, 1);
        let e2 = Multivector::basis_vector(5, 2);
        assert_eq!(*left.entry(0, 0), e1 * e2);
        assert_eq!(*right.entry(0, 0), e2 * e1);
        assert!((*left.entry(0, 0) + *right.entry(0, 0)).norm() < 1e-15);
    }

    #[test]
    fn diagonal_inverse_matches_eigenvalue_inverses() {
        let t = two_sphere_diagonal();
        let inv = t.to_clifford().inverse().unwrap();
        for (k, ev) in t.eigenvalues().iter().enumerate() {
            let expected = ev.inverse().unwrap().as_multivector(5);
            assert!((*inv.entry(k, k) - expected).norm() < 1e-14);
        }
    }

    #[test]
    fn diagonal_and_lift_inverses_agree() {
        let t = two_sphere_diagonal();
        let m = t.to_clifford();
        let fast = m.inverse().unwrap();
        let dense = m.inverse_via_lift().unwrap();
        let mut diff: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                diff = diff.max((*fast.entry(i, j) - *dense.entry(i, j)).norm());
            }
        }
        assert!(diff < 1e-12);
    }

    #[test]
    fn general_inverse_round_trips() {
        let mut rng = ChaCha12Rng::seed_from_u64(43);
        for d in [1usize, 2, 4] {
            let t = random_commuting_operator(5, d, &mut rng, false);
            // Shift by the identity to stay invertible.
            let m = &t.to_clifford() + &CliffordOperator::identity(5, d).scale(3.0);
            let inv = m.inverse().unwrap();
            let left = &(&m * &inv) - &CliffordOperator::identity(5, d);
            let right = &(&inv * &m) - &CliffordOperator::identity(5, d);
            assert!(left.frobenius_norm() < 1e-10);
            assert!(right.frobenius_norm() < 1e-10);
        }
    }

    #[test]
    fn singular_operator_is_reported() {
        let m = CliffordOperator::zero(5, 2);
        assert!(matches!(
            m.inverse(),
            Err(Error::SingularOperator { .. })
        ));
        // Rank-deficient non-diagonal matrix.
        let mut m = CliffordOperator::zero(5, 2);
        let one = Multivector::one(5);
        m.set_entry(0, 0, one);
        m.set_entry(0, 1, one);
        m.set_entry(1, 0, one);
        m.set_entry(1, 1, one);
        assert!(matches!(
            m.inverse(),
            Err(Error::SingularOperator { .. })
        ));
    }

    #[test]
    fn similarity_transport_of_inverses() {
        // (V A V^{-1})^{-1} = V A^{-1} V^{-1} for a real similarity.
        let mut rng = ChaCha12Rng::seed_from_u64(44);
        let evs: Vec<Paravector> = (0..3)
            .map(|_| {
                let mut ev = Paravector::new(
                    0.0,
                    std::array::from_fn(|_| rng.random_range(-1.0..1.0)),
                );
                ev = ev * (1.0 / ev.modulus());
                ev
            })
            .collect();
        let diag = ParavectorOperator::commuting(5, &evs, None).unwrap();
        let v = random_basis(3, &mut rng);
        let sim = ParavectorOperator::commuting(5, &evs, Some(&v)).unwrap();
        let inv_diag = diag.to_clifford().inverse().unwrap();
        let inv_sim = sim.to_clifford().inverse().unwrap();
        // Transport the diagonal inverse through V and compare.
        let mut transported = CliffordOperator::zero(5, 3);
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = Multivector::zero(5);
                for k in 0..3 {
                    for l in 0..3 {
                        acc += *inv_diag.entry(k, l) * (v[(i, k)] * sim.basis_inv()[(l, j)]);
                    }
                }
                transported.set_entry(i, j, acc);
            }
        }
        let diff = (&transported - &inv_sim).frobenius_norm();
        assert!(diff < 1e-10 * (1.0 + inv_sim.frobenius_norm()));
    }
}
