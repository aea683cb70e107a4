//! Cubic resampling and the fiber dilation u_t(x) = t^{N/4} u(√t x).
//!
//! The dilation preserves ‖u‖₂ exactly in the continuum; on the grid it is
//! realized by 4-point Lagrange interpolation applied to the real and
//! imaginary parts separately, with the even extension u(−r) = u(r) across
//! the origin and zero beyond r_max.

use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::field::RadialField;
use crate::grid::RadialGrid;
use crate::math::FloatExt;

#[derive(Debug, Clone, PartialEq)]
pub enum InterpError {
    /// Dilation parameter must be strictly positive.
    BadDilation { t: f64 },
}

impl fmt::Display for InterpError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InterpError::BadDilation { t } => write!(f, "dilation t = {t} must be > 0"),
        }
    }
}

/// Evaluate the cubic interpolant of radial samples at radius x ≥ 0.
pub fn sample(grid: &RadialGrid, u: &[Complex64], x: f64) -> Complex64 {
    let n = u.len();
    let h = grid.spacing();
    let zero = Complex64::new(0.0, 0.0);
    if x > grid.r_max() {
        return zero;
    }
    let s = x / h;
    let j = s as isize; // floor for s >= 0
    let theta = s - j as f64;
    // value with even reflection at the origin and ghost zeros outside
    let val = |k: isize| -> Complex64 {
        let k = if k < 0 { -k } else { k };
        if k as usize >= n {
            zero
        } else {
            u[k as usize]
        }
    };
    let (t0, t1) = (theta, theta - 1.0);
    let w_m1 = -theta * t1 * (theta - 2.0) / 6.0;
    let w_0 = (theta + 1.0) * t1 * (theta - 2.0) / 2.0;
    let w_1 = -theta * (theta + 1.0) * (theta - 2.0) / 2.0;
    let w_2 = theta * (theta + 1.0) * t1 / 6.0;
    let _ = t0;
    val(j - 1) * w_m1 + val(j) * w_0 + val(j + 1) * w_1 + val(j + 2) * w_2
}

/// u_t(r) = t^{N/4} u(√t r), sampled back onto the grid of u.
pub fn fiber_resample(u: &RadialField, t: f64) -> Result<RadialField, InterpError> {
    if !(t > 0.0) {
        return Err(InterpError::BadDilation { t });
    }
    let grid = u.grid().clone();
    if t == 1.0 {
        return Ok(u.clone());
    }
    let amp = t.powf(grid.n_dim() as f64 / 4.0);
    let root_t = t.sqrt();
    let values: Vec<Complex64> = grid
        .nodes()
        .iter()
        .map(|&r| sample(&grid, u.values(), root_t * r) * amp)
        .collect();
    Ok(RadialField::from_values(&grid, values).expect("resample produced non-finite values"))
}
