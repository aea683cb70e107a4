//! Complex-valued radial profiles sampled on a [`RadialGrid`].

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::grid::{GridError, RadialGrid};
use crate::math::FloatExt;

#[derive(Debug, Clone, PartialEq)]
pub enum FieldError {
    Grid(GridError),
    /// A sample is NaN or infinite.
    NonFinite { index: usize },
    /// The outer boundary value exceeds the decay tolerance for a field
    /// claimed to represent an H²-class profile.
    BoundaryDecay { value: f64, tol: f64 },
    /// Zero field where a nontrivial one is required.
    ZeroField,
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldError::Grid(e) => write!(f, "{e}"),
            FieldError::NonFinite { index } => write!(f, "non-finite sample at node {index}"),
            FieldError::BoundaryDecay { value, tol } => write!(
                f,
                "boundary sample magnitude {value:e} exceeds decay tolerance {tol:e}"
            ),
            FieldError::ZeroField => write!(f, "field is identically zero"),
        }
    }
}

impl From<GridError> for FieldError {
    fn from(e: GridError) -> Self {
        FieldError::Grid(e)
    }
}

/// A complex radial profile; the carrier of u and ψ(t).
#[derive(Debug, Clone)]
pub struct RadialField {
    grid: Arc<RadialGrid>,
    values: Vec<Complex64>,
}

impl RadialField {
    pub fn zeros(grid: &Arc<RadialGrid>) -> Self {
        Self {
            grid: grid.clone(),
            values: alloc::vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn from_values(grid: &Arc<RadialGrid>, values: Vec<Complex64>) -> Result<Self, FieldError> {
        if values.len() != grid.len() {
            return Err(FieldError::Grid(GridError::LengthMismatch {
                expected: grid.len(),
                got: values.len(),
            }));
        }
        let field = Self {
            grid: grid.clone(),
            values,
        };
        field.check_finite()?;
        Ok(field)
    }

    pub fn from_fn_real(grid: &Arc<RadialGrid>, f: impl Fn(f64) -> f64) -> Self {
        let values = grid
            .nodes()
            .iter()
            .map(|&r| Complex64::new(f(r), 0.0))
            .collect();
        Self {
            grid: grid.clone(),
            values,
        }
    }

    pub fn from_fn(grid: &Arc<RadialGrid>, f: impl Fn(f64) -> Complex64) -> Self {
        let values = grid.nodes().iter().map(|&r| f(r)).collect();
        Self {
            grid: grid.clone(),
            values,
        }
    }

    /// Gaussian e^{−r²/(2σ²)} scaled to the prescribed squared L²-mass.
    pub fn gaussian_with_mass(grid: &Arc<RadialGrid>, sigma: f64, mass: f64) -> Self {
        let mut g = Self::from_fn_real(grid, |r| (-r * r / (2.0 * sigma * sigma)).exp());
        g.project_mass(mass);
        g
    }

    /// Deterministic random smooth decaying profile: a few terms
    /// c_j r^{2m_j} e^{−a_j r²}, even in r and H²-class on any desk-scale
    /// grid. Used by property tests and Monte-Carlo audits.
    pub fn random_smooth(grid: &Arc<RadialGrid>, rng: &mut crate::math::SplitMix64) -> Self {
        let k = 2 + (rng.next_u64() % 3) as usize;
        let mut terms = Vec::with_capacity(k);
        for _ in 0..k {
            let c = rng.uniform_in(-1.0, 1.0);
            let m = (rng.next_u64() % 3) as i32;
            let a = rng.uniform_in(0.3, 2.5);
            terms.push((c, m, a));
        }
        let mut f = Self::from_fn_real(grid, |r| {
            terms
                .iter()
                .map(|&(c, m, a)| c * (r * r).powi(m) * (-a * r * r).exp())
                .sum()
        });
        if f.mass() < 1e-12 {
            f = Self::from_fn_real(grid, |r| (-r * r).exp());
        }
        f
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }
    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }
    pub fn len(&self) -> usize {
        self.values.len()
    }
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// ‖u‖₂² with the grid's volume weights.
    pub fn mass(&self) -> f64 {
        self.grid.integral_abs_pow(&self.values, 2.0).unwrap()
    }

    /// Rescale amplitude so that ‖u‖₂² = c exactly (up to arithmetic).
    pub fn project_mass(&mut self, c: f64) {
        let m = self.mass();
        if m > 0.0 {
            let s = (c / m).sqrt();
            for v in &mut self.values {
                *v *= s;
            }
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values
            .iter()
            .map(|z| z.norm_sqr())
            .fold(0.0_f64, f64::max)
            .sqrt()
    }

    fn check_finite(&self) -> Result<(), FieldError> {
        for (i, z) in self.values.iter().enumerate() {
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(FieldError::NonFinite { index: i });
            }
        }
        Ok(())
    }

    /// Verify the Dirichlet-decay contract for an H²-class profile:
    /// the boundary sample must be below `tol` relative to the peak.
    pub fn check_h2_class(&self, tol: f64) -> Result<(), FieldError> {
        self.check_finite()?;
        let peak = self.max_abs();
        if peak == 0.0 {
            return Err(FieldError::ZeroField);
        }
        let edge = self.values[self.len() - 1].norm();
        if edge > tol * peak {
            return Err(FieldError::BoundaryDecay {
                value: edge,
                tol: tol * peak,
            });
        }
        Ok(())
    }

    /// self ← self + s·other
    pub fn axpy(&mut self, s: Complex64, other: &RadialField) {
        debug_assert!(self.grid.same_layout(&other.grid));
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            *a += s * b;
        }
    }

    pub fn scaled(&self, s: f64) -> RadialField {
        let mut out = self.clone();
        for v in &mut out.values {
            *v *= s;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mass_projection_is_exact() {
        let grid = RadialGrid::build(5, 20.0, 256).unwrap();
        let mut u = RadialField::from_fn_real(&grid, |r| (-r * r).exp());
        u.project_mass(2.5);
        assert!((u.mass() - 2.5).abs() < 1e-13 * 2.5);
    }

    #[test]
    fn h2_class_check() {
        let grid = RadialGrid::build(5, 20.0, 256).unwrap();
        let decaying = RadialField::from_fn_real(&grid, |r| (-r * r).exp());
        assert!(decaying.check_h2_class(1e-8).is_ok());
        let flat = RadialField::from_fn_real(&grid, |_| 1.0);
        assert!(matches!(
            flat.check_h2_class(1e-8),
            Err(FieldError::BoundaryDecay { .. })
        ));
        let zero = RadialField::zeros(&grid);
        assert!(matches!(zero.check_h2_class(1e-8), Err(FieldError::ZeroField)));
    }
}
