//! Quadrature contours: circles in a slice plane.
//!
//! A contour is a counterclockwise circle of radius `R` around a *real*
//! center inside the slice plane `C_J`. With the slice measure
//! `ds_J = ds (-J)` the trapezoidal rule on
//!
//! ```text
//! s_k = center + R (cos t_k + J sin t_k),    t_k = 2 pi k / N
//! ```
//!
//! carries analytic weights `w_k = (s_k - center) * (2 pi / N)`: the `-J`
//! of the measure cancels against the `J` of `ds`. Trapezoidal quadrature
//! of a periodic analytic integrand converges geometrically, with error
//! `O((rho / R)^N)` where `rho` measures how close the nearest singularity
//! sphere comes to the contour.
//!
//! Admissibility against a set of spheres is decided *analytically*: in
//! half-plane coordinates `(u, v) = (re, |vec|)` a sphere is a point `P`
//! and the contour is the circle around `(center, 0)`; the distance from
//! the contour to the sphere is `| |P - C| - R |`, so margins do not depend
//! on the node count.

use crate::algebra::{Paravector, UnitImaginary};
use crate::error::{Error, Result};
use std::f64::consts::PI;

/// One quadrature node: a point on the circle and its slice-measure weight.
#[derive(Clone, Copy, Debug)]
pub struct ContourNode {
    /// The node `s_k` on the circle.
    pub s: Paravector,
    /// The weight `(s_k - center) * 2 pi / N` (a paravector in the plane).
    pub weight: Paravector,
}

/// Counterclockwise circle in a slice plane with trapezoidal nodes.
#[derive(Clone, Debug)]
pub struct Contour {
    center: f64,
    radius: f64,
    j: UnitImaginary,
    node_count: usize,
}

impl Contour {
    /// Circle of the given radius around a real center in the plane `C_J`.
    ///
    /// # Errors
    ///
    /// [`Error::InvalidConstruction`] for non-positive radius or a node
    /// count that is odd or below 8 (even counts place nodes symmetrically,
    /// which the convergence model assumes).
    pub fn new(center: f64, radius: f64, j: UnitImaginary, node_count: usize) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::invalid(format!("contour radius must be positive, got {radius}")));
        }
        if node_count < 8 || node_count % 2 != 0 {
            return Err(Error::invalid(format!(
                "node count must be even and at least 8, got {node_count}"
            )));
        }
        Ok(Contour {
            center,
            radius,
            j,
            node_count,
        })
    }

    /// Same circle with a different node count.
    ///
    /// # Errors
    ///
    /// As for [`Contour::new`].
    pub fn with_nodes(&self, node_count: usize) -> Result<Self> {
        Contour::new(self.center, self.radius, self.j, node_count)
    }

    /// Real center.
    #[must_use]
    pub fn center(&self) -> f64 {
        self.center
    }

    /// Radius.
    #[must_use]
    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Slice direction.
    #[must_use]
    pub fn j(&self) -> &UnitImaginary {
        &self.j
    }

    /// Number of quadrature nodes.
    #[must_use]
    pub fn node_count(&self) -> usize {
        self.node_count
    }

    /// Trapezoidal nodes with slice-measure weights.
    #[must_use]
    pub fn nodes(&self) -> Vec<ContourNode> {
        let n = self.node_count;
        let step = 2.0 * PI / n as f64;
        (0..n)
            .map(|k| {
                let t = step * k as f64;
                let ring = self.j.point(self.radius * t.cos(), self.radius * t.sin());
                let mut s = ring;
                s.x0 += self.center;
                ContourNode {
                    s,
                    weight: ring * step,
                }
            })
            .collect()
    }

    /// Whether a half-plane sphere representative lies strictly inside the
    /// circle.
    #[must_use]
    pub fn encloses_point(&self, point: (f64, f64)) -> bool {
        let du = point.0 - self.center;
        (du * du + point.1 * point.1).sqrt() < self.radius
    }

    /// Exact distance from the contour to a half-plane sphere
    /// representative.
    #[must_use]
    pub fn distance_to_point(&self, point: (f64, f64)) -> f64 {
        let du = point.0 - self.center;
        let dist_center = (du * du + point.1 * point.1).sqrt();
        (dist_center - self.radius).abs()
    }

    /// Smallest distance from the contour to any of the given spheres
    /// (infinite when the list is empty).
    #[must_use]
    pub fn margin(&self, points: &[(f64, f64)]) -> f64 {
        points
            .iter()
            .map(|&p| self.distance_to_point(p))
            .fold(f64::INFINITY, f64::min)
    }

    /// Demand that every sphere keeps `factor * radius` of clearance.
    ///
    /// # Errors
    ///
    /// [`Error::ContourTouchesSpectrum`] listing the violated margin.
    pub fn require_margin(&self, points: &[(f64, f64)], factor: f64) -> Result<()> {
        let required = factor * self.radius;
        let distance = self.margin(points);
        if distance < required {
            return Err(Error::ContourTouchesSpectrum { distance, required });
        }
        Ok(())
    }

    /// Normalized magnitude of the weight sum, `|sum_k w_k| / (2 pi R)`.
    ///
    /// The exact sum vanishes; what remains measures accumulated rounding.
    #[must_use]
    pub fn weight_sum_normalized(&self) -> f64 {
        let mut acc = Paravector::zero();
        for node in self.nodes() {
            acc = acc + node.weight;
        }
        acc.modulus() / (2.0 * PI * self.radius)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Multivector;
    use crate::tolerances;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn constructor_validates_inputs() {
        let j = UnitImaginary::axis(5, 1);
        assert!(Contour::new(0.0, 1.0, j, 64).is_ok());
        assert!(Contour::new(0.0, -1.0, j, 64).is_err());
        assert!(Contour::new(0.0, 1.0, j, 6).is_err());
        assert!(Contour::new(0.0, 1.0, j, 65).is_err());
    }

    #[test]
    fn nodes_lie_on_the_circle_with_vanishing_weight_sum() {
        let mut rng = ChaCha12Rng::seed_from_u64(31);
        let j = UnitImaginary::random(5, &mut rng);
        let c = Contour::new(0.7, 2.5, j, 256).unwrap();
        for node in c.nodes() {
            let mut rel = node.s;
            rel.x0 -= 0.7;
            assert!((rel.modulus() - 2.5).abs() < 1e-12);
        }
        assert!(c.weight_sum_normalized() < tolerances::WEIGHT_SUM_REL);
    }

    #[test]
    fn margin_is_exact_in_half_plane_coordinates() {
        let j = UnitImaginary::axis(5, 2);
        let c = Contour::new(0.0, 2.0, j, 64).unwrap();
        // Sphere representative at distance 5 from the center: margin 3.
        assert!((c.distance_to_point((3.0, 4.0)) - 3.0).abs() < 1e-12);
        // Inside: |1 - 2| = 1.
        assert!((c.distance_to_point((1.0, 0.0)) - 1.0).abs() < 1e-12);
        assert!(c.encloses_point((1.0, 0.0)));
        assert!(!c.encloses_point((3.0, 4.0)));
        assert!(c.require_margin(&[(1.0, 0.0)], 0.1).is_ok());
        assert!(c
            .require_margin(&[(1.95, 0.0)], 0.1)
            .is_err());
    }

    #[test]
    fn cauchy_integral_of_reciprocal_converges_geometrically() {
        // (1/2pi) sum w_k s_k^{-1} approximates the winding count of the
        // origin; the trapezoidal error decays like (rho/R)^N.
        let j = UnitImaginary::axis(5, 1);
        let mut errors = Vec::new();
        for nodes in [8usize, 16, 32] {
            let c = Contour::new(1.0, 2.0, j, nodes).unwrap();
            let mut acc = Multivector::zero(5);
            for node in c.nodes() {
                acc += node.weight.as_multivector(5)
                    * node.s.inverse().unwrap().as_multivector(5);
            }
            let val = acc * (0.5 / std::f64::consts::PI);
            errors.push((val - Multivector::one(5)).norm());
        }
        // rho/R = 0.5: each doubling squares the error (until roundoff).
        assert!(errors[1] < errors[0] * errors[0] * 4.0 + 1e-14);
        assert!(errors[2] < 1e-9);
        assert!(errors[0] < 0.01);
    }

    #[test]
    fn weights_match_node_offsets() {
        let j = UnitImaginary::axis(5, 3);
        let c = Contour::new(-0.5, 1.5, j, 32).unwrap();
        let step = 2.0 * std::f64::consts::PI / 32.0;
        for node in c.nodes() {
            let mut rel = node.s;
            rel.x0 += 0.5;
            let expected = rel * step;
            assert!((node.weight - expected).modulus() < 1e-14);
        }
    }
}
