//! Uniform radial grids for radially symmetric functions on ℝ^N.
//!
//! A grid holds n nodes 0 = r_0 < r_1 < … < r_{n−1} = r_max with spacing
//! h = r_max/(n−1) and quadrature weights w_i that fold the volume factor
//! ω_N r^{N−1} into the node values, so that
//!
//!   ∫_{ℝ^N} f(|x|) dx ≈ Σ_i w_i f(r_i)
//!
//! for radial f supported inside the ball of radius r_max. Interior nodes
//! carry the trapezoid weight ω_N r_i^{N−1} h; the origin carries the volume
//! of its half cell [0, h/2] (the weight any rule proportional to r^{N−1}
//! would assign it is zero, which would make the origin invisible to the
//! inner product), and the outer node carries the half trapezoid weight.
//! For smooth decaying integrands the weighted trapezoid sum converges
//! faster than any fixed power of h because the odd derivatives of
//! f(r) r^{N−1} vanish at the origin and at infinity.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::math::{unit_sphere_area, FloatExt};

#[derive(Debug, Clone, PartialEq)]
pub enum GridError {
    /// Dimension below 5: the problem's hypotheses require N ≥ 5.
    DimensionTooSmall { n_dim: u32 },
    /// Fewer than 16 nodes: the difference operators are ill-defined.
    TooFewNodes { n: usize },
    /// Non-positive outer radius.
    BadRadius,
    /// Sample vector length does not match the node count.
    LengthMismatch { expected: usize, got: usize },
    /// Lᵖ exponent below 1.
    BadExponent { s: f64 },
}

impl fmt::Display for GridError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GridError::DimensionTooSmall { n_dim } => {
                write!(f, "dimension N = {n_dim} violates the hypothesis N >= 5")
            }
            GridError::TooFewNodes { n } => {
                write!(f, "node count {n} too small (need n >= 16)")
            }
            GridError::BadRadius => write!(f, "outer radius must be positive"),
            GridError::LengthMismatch { expected, got } => {
                write!(f, "sample length {got} does not match grid size {expected}")
            }
            GridError::BadExponent { s } => write!(f, "L^p exponent s = {s} must be >= 1"),
        }
    }
}

/// Discretization of radially symmetric ℝ^N.
#[derive(Debug)]
pub struct RadialGrid {
    n_dim: u32,
    r_max: f64,
    h: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    sphere_area: f64,
}

impl RadialGrid {
    /// Build a uniform grid with n nodes on [0, r_max] for dimension N ≥ 5.
    pub fn build(n_dim: u32, r_max: f64, n: usize) -> Result<Arc<Self>, GridError> {
        if n_dim < 5 {
            return Err(GridError::DimensionTooSmall { n_dim });
        }
        if n < 16 {
            return Err(GridError::TooFewNodes { n });
        }
        if !(r_max > 0.0) {
            return Err(GridError::BadRadius);
        }
        let h = r_max / (n - 1) as f64;
        let omega = unit_sphere_area(n_dim);
        let nd = n_dim as f64;

        let nodes: Vec<f64> = (0..n).map(|i| i as f64 * h).collect();
        let mut weights = Vec::with_capacity(n);
        // the trapezoid weight at r = 0 vanishes with the volume factor;
        // the origin keeps its half-cell volume so the similarity
        // transform W^{1/2} stays invertible
        weights.push(omega * (h / 2.0).powf(nd) / nd);
        for i in 1..n - 1 {
            weights.push(omega * nodes[i].powf(nd - 1.0) * h);
        }
        weights.push(omega * r_max.powf(nd - 1.0) * h / 2.0);

        Ok(Arc::new(Self {
            n_dim,
            r_max,
            h,
            nodes,
            weights,
            sphere_area: omega,
        }))
    }

    pub fn n_dim(&self) -> u32 {
        self.n_dim
    }
    pub fn len(&self) -> usize {
        self.nodes.len()
    }
    pub fn is_empty(&self) -> bool {
        false
    }
    pub fn r_max(&self) -> f64 {
        self.r_max
    }
    pub fn spacing(&self) -> f64 {
        self.h
    }
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
    pub fn sphere_area(&self) -> f64 {
        self.sphere_area
    }

    /// Two grids are compatible when they discretize the same domain.
    pub fn same_layout(&self, other: &RadialGrid) -> bool {
        self.n_dim == other.n_dim
            && self.nodes.len() == other.nodes.len()
            && self.r_max == other.r_max
    }

    /// Σ w_i f_i for real node samples.
    pub fn integrate(&self, samples: &[f64]) -> Result<f64, GridError> {
        self.check_len(samples.len())?;
        Ok(self
            .weights
            .iter()
            .zip(samples)
            .map(|(w, f)| w * f)
            .sum())
    }

    /// Σ w_i f_i for complex node samples.
    pub fn integrate_complex(&self, samples: &[Complex64]) -> Result<Complex64, GridError> {
        self.check_len(samples.len())?;
        let mut acc = Complex64::new(0.0, 0.0);
        for (w, f) in self.weights.iter().zip(samples) {
            acc += f * w;
        }
        Ok(acc)
    }

    /// ∫ |u|^s as a plain scalar (no 1/s root).
    pub fn integral_abs_pow(&self, u: &[Complex64], s: f64) -> Result<f64, GridError> {
        self.check_len(u.len())?;
        if s == 2.0 {
            return Ok(self
                .weights
                .iter()
                .zip(u)
                .map(|(w, z)| w * z.norm_sqr())
                .sum());
        }
        Ok(self
            .weights
            .iter()
            .zip(u)
            .map(|(w, z)| w * z.norm_sqr().powf(s / 2.0))
            .sum())
    }

    /// ‖u‖_s = (∫|u|^s)^{1/s}, s ≥ 1.
    pub fn lp_norm(&self, u: &[Complex64], s: f64) -> Result<f64, GridError> {
        if !(s >= 1.0) {
            return Err(GridError::BadExponent { s });
        }
        Ok(self.integral_abs_pow(u, s)?.powf(1.0 / s))
    }

    /// Weighted real inner product Re ⟨u, v⟩ = Σ w_i Re(conj(u_i) v_i).
    pub fn inner(&self, u: &[Complex64], v: &[Complex64]) -> f64 {
        debug_assert_eq!(u.len(), self.len());
        debug_assert_eq!(v.len(), self.len());
        self.weights
            .iter()
            .zip(u.iter().zip(v))
            .map(|(w, (a, b))| w * (a.conj() * b).re)
            .sum()
    }

    fn check_len(&self, got: usize) -> Result<(), GridError> {
        if got != self.nodes.len() {
            Err(GridError::LengthMismatch {
                expected: self.nodes.len(),
                got,
            })
        } else {
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::PI;

    #[test]
    fn rejects_low_dimension_and_small_grids() {
        assert!(matches!(
            RadialGrid::build(4, 20.0, 1024),
            Err(GridError::DimensionTooSmall { n_dim: 4 })
        ));
        assert!(matches!(
            RadialGrid::build(5, 20.0, 8),
            Err(GridError::TooFewNodes { n: 8 })
        ));
        assert!(RadialGrid::build(5, -1.0, 64).is_err());
    }

    #[test]
    fn sphere_area_matches_closed_form() {
        let g = RadialGrid::build(5, 20.0, 1024).unwrap();
        assert!((g.sphere_area() - 8.0 * PI * PI / 3.0).abs() < 1e-10);
    }

    #[test]
    fn weight_sum_approximates_ball_volume() {
        // Σ w_i → ω_N r_max^N / N within quadrature order.
        let exact = unit_sphere_area(5) / 5.0; // r_max = 1
        for (n, tol) in [(64usize, 1e-3), (2048, 1e-6)] {
            let g = RadialGrid::build(5, 1.0, n).unwrap();
            let sum: f64 = g.weights().iter().sum();
            assert!(
                ((sum - exact) / exact).abs() < tol,
                "n = {n}: sum = {sum}, exact = {exact}"
            );
        }
        // π^{5/2}/Γ(7/2) ≈ 5.2638
        assert!((exact - 5.2638).abs() < 1e-4);
    }

    #[test]
    fn integrate_zero_and_gaussian() {
        let g = RadialGrid::build(5, 14.0, 2048).unwrap();
        let zero: Vec<f64> = vec![0.0; g.len()];
        assert_eq!(g.integrate(&zero).unwrap(), 0.0);

        // ∫ e^{−r²} over ℝ^5 = π^{5/2}
        let f: Vec<f64> = g.nodes().iter().map(|&r| (-r * r).exp()).collect();
        let got = g.integrate(&f).unwrap();
        let exact = PI.powf(2.5);
        assert!(
            ((got - exact) / exact).abs() < 1e-8,
            "got {got}, exact {exact}"
        );
    }

    #[test]
    fn integrate_rejects_length_mismatch() {
        let g = RadialGrid::build(5, 1.0, 64).unwrap();
        assert!(matches!(
            g.integrate(&[1.0, 2.0]),
            Err(GridError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn lp_norm_gaussian_and_homogeneity() {
        let g = RadialGrid::build(5, 14.0, 2048).unwrap();
        let u: Vec<Complex64> = g
            .nodes()
            .iter()
            .map(|&r| Complex64::new((-r * r).exp(), 0.0))
            .collect();
        // ‖u‖₂² = ∫ e^{−2r²} = (π/2)^{5/2}
        let m = g.integral_abs_pow(&u, 2.0).unwrap();
        let exact = (PI / 2.0).powf(2.5);
        assert!(((m - exact) / exact).abs() < 1e-8);
        assert!((exact - 3.0925).abs() < 1e-4);

        let scaled: Vec<Complex64> = u.iter().map(|z| z * 3.0).collect();
        let n1 = g.lp_norm(&u, 3.5).unwrap();
        let n3 = g.lp_norm(&scaled, 3.5).unwrap();
        assert!((n3 - 3.0 * n1).abs() < 1e-12 * n3);

        assert!(g.lp_norm(&u, 0.5).is_err());
        let zero: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); g.len()];
        assert_eq!(g.lp_norm(&zero, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn quadrature_order_on_monomials() {
        // integrate reproduces r^k · volume within second order on refinement.
        let exact = |k: f64| unit_sphere_area(5) / (5.0 + k); // ∫_0^1 r^k dV
        for k in [1.0_f64, 3.0, 6.0] {
            let mut errs = Vec::new();
            for n in [64usize, 128, 256] {
                let g = RadialGrid::build(5, 1.0, n).unwrap();
                let f: Vec<f64> = g.nodes().iter().map(|&r| r.powf(k)).collect();
                errs.push((g.integrate(&f).unwrap() - exact(k)).abs());
            }
            let order = (errs[0] / errs[1]).ln() / 2.0_f64.ln();
            assert!(order > 1.8, "k = {k}: observed order {order}");
        }
    }
}
