//! Discrete radial Laplacian and bilaplacian.
//!
//! The Laplacian is assembled in symmetric flux form
//!
//!   w_i (Lu)_i = a_{i+1/2}(u_{i+1}−u_i) − a_{i−1/2}(u_i−u_{i−1})
//!              + b_{i+1}(u_{i+2}−u_i)   − b_{i−1}(u_i−u_{i−2}),
//!
//! a five-point stencil whose weighted matrix W·L is symmetric by
//! construction for any face coefficients a and two-hop coefficients b.
//! Discrete self-adjointness ⟨Lu, v⟩ = ⟨u, Lv⟩ under the grid inner product
//! therefore holds to rounding, ⟨L²u, u⟩ = ‖Lu‖² exactly, and the spectral
//! propagator built on L in `evolution` is exactly unitary.
//!
//! The coefficients are determined by marching from the origin so that the
//! stencil reproduces Δr² = 2N and Δr⁴ = (4N+8)r² exactly at every node the
//! march reaches; together with the smoothness of the resulting coefficient
//! profiles this gives a second-order scheme whose truncation error on
//! smooth fields is substantially smaller than the classical three-point
//! stencil's. At r = 0 the even extension u(−r) = u(r) is built in (the
//! origin row reduces to the limit Δu(0) = N u″(0)); past r_max the scheme
//! sees Dirichlet ghost zeros.
//!
//! Boundary rows n−2 and n−1 reuse the marched coefficient profile instead
//! of the exactness conditions (which would reference ghost values); fields
//! in the H² class decay there, so those rows never carry signal.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::field::RadialField;
use crate::grid::RadialGrid;
use crate::math::FloatExt;

/// Radial Laplacian bound to one grid; construction is O(n), application O(n).
#[derive(Debug)]
pub struct RadialLaplacian {
    grid: Arc<RadialGrid>,
    /// a_{i+1/2} for i = 0..n−1; the last face couples node n−1 to the ghost.
    face: Vec<f64>,
    /// b_c for c = 0..n+1; b_c couples nodes c−1 and c+1. b_0 is the pair
    /// mirrored across the origin, identically cancelled by evenness.
    pair: Vec<f64>,
}

impl RadialLaplacian {
    pub fn new(grid: &Arc<RadialGrid>) -> Self {
        let n = grid.len();
        let nd = grid.n_dim() as f64;
        let h = grid.spacing();
        let omega = grid.sphere_area();
        let r = grid.nodes();
        let w = grid.weights();

        let two_n = 2.0 * nd;
        let lap_r4 = 4.0 * nd + 8.0; // Δr⁴ = (4N+8) r²

        let mut face = vec![0.0; n];
        let mut pair = vec![0.0; n + 2];

        // Origin row: a_{1/2}·r_1² + b_1·r_2² = 2N w_0 and the r⁴ analogue
        // with zero right-hand side (Δr⁴ vanishes at the origin).
        let (r1, r2) = (r[1], r[2]);
        let det0 = r1 * r1 * r2.powi(4) - r1.powi(4) * r2 * r2;
        face[0] = two_n * w[0] * r2.powi(4) / det0;
        pair[1] = -two_n * w[0] * r1.powi(4) / det0;

        // March: row i fixes (a_{i+1/2}, b_{i+1}).
        for i in 1..n.saturating_sub(2) {
            let d2m = r[i] * r[i] - r[i - 1] * r[i - 1];
            let d4m = r[i].powi(4) - r[i - 1].powi(4);
            let (dd2m, dd4m) = if i >= 2 {
                (
                    r[i] * r[i] - r[i - 2] * r[i - 2],
                    r[i].powi(4) - r[i - 2].powi(4),
                )
            } else {
                (0.0, 0.0) // mirrored pair (u_1 − u_{−1}) cancels
            };
            let d2p = r[i + 1] * r[i + 1] - r[i] * r[i];
            let d4p = r[i + 1].powi(4) - r[i].powi(4);
            let dd2p = r[i + 2] * r[i + 2] - r[i] * r[i];
            let dd4p = r[i + 2].powi(4) - r[i].powi(4);

            let rhs2 = two_n * w[i] + face[i - 1] * d2m + pair[i - 1] * dd2m;
            let rhs4 = lap_r4 * r[i] * r[i] * w[i] + face[i - 1] * d4m + pair[i - 1] * dd4m;

            let det = d2p * dd4p - d4p * dd2p;
            face[i] = (rhs2 * dd4p - rhs4 * dd2p) / det;
            pair[i + 1] = (d2p * rhs4 - d4p * rhs2) / det;
        }

        // Freeze the last faces/pairs on the marched profile: the marched
        // coefficients settle onto smooth multiples of ω r^{N−1}/h.
        let prof = |rho: f64| omega * rho.powf(nd - 1.0) / h;
        let alpha = face[n - 3] / prof(r[n - 3] + 0.5 * h);
        let beta = pair[n - 2] / prof(r[n - 2]);
        face[n - 2] = alpha * prof(r[n - 2] + 0.5 * h);
        face[n - 1] = alpha * prof(r[n - 1] + 0.5 * h);
        pair[n - 1] = beta * prof(r[n - 1]);
        pair[n] = beta * prof(r[n - 1] + h);

        Self {
            grid: grid.clone(),
            face,
            pair,
        }
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }

    /// Apply to raw complex samples (ghost zeros beyond r_max).
    pub fn apply_slice(&self, u: &[Complex64], out: &mut [Complex64]) {
        let n = u.len();
        debug_assert_eq!(n, self.grid.len());
        let w = self.grid.weights();
        let zero = Complex64::new(0.0, 0.0);
        let at = |j: isize| -> Complex64 {
            if j < 0 || j as usize >= n {
                zero
            } else {
                u[j as usize]
            }
        };
        for i in 0..n {
            let ii = i as isize;
            let mut acc = self.face[i] * (at(ii + 1) - u[i]);
            if i >= 1 {
                acc -= self.face[i - 1] * (u[i] - u[i - 1]);
            }
            acc += self.pair[i + 1] * (at(ii + 2) - u[i]);
            if i >= 2 {
                acc -= self.pair[i - 1] * (u[i] - u[i - 2]);
            }
            // i == 1: the mirrored pair difference u_1 − u_{−1} vanishes.
            out[i] = acc / w[i];
        }
    }

    pub fn apply(&self, u: &RadialField) -> RadialField {
        debug_assert!(self.grid.same_layout(u.grid()));
        let mut out = RadialField::zeros(&self.grid);
        let mut buf = vec![Complex64::new(0.0, 0.0); u.len()];
        self.apply_slice(u.values(), &mut buf);
        out.values_mut().copy_from_slice(&buf);
        out
    }

    /// Δ²u = L(Lu).
    pub fn apply_twice(&self, u: &RadialField) -> RadialField {
        self.apply(&self.apply(u))
    }

    /// ‖Δu‖₂² under the grid inner product.
    pub fn kinetic(&self, u: &RadialField) -> f64 {
        let lu = self.apply(u);
        self.grid.integral_abs_pow(lu.values(), 2.0).unwrap()
    }

    /// ∂_r u by centered differences; even extension at the origin (the
    /// derivative of a radial profile vanishes there) and one-sided at the
    /// outer boundary.
    pub fn radial_derivative(grid: &RadialGrid, u: &[Complex64], out: &mut [Complex64]) {
        let n = u.len();
        let h2 = 2.0 * grid.spacing();
        out[0] = Complex64::new(0.0, 0.0);
        for i in 1..n - 1 {
            out[i] = (u[i + 1] - u[i - 1]) / h2;
        }
        out[n - 1] = (u[n - 1] - u[n - 2]) / (0.5 * h2);
    }

    /// Bands of the similarity-transformed symmetric matrix
    /// S = W^{1/2} L W^{−1/2}: (diagonal, first off-diagonal, second
    /// off-diagonal). S is pentadiagonal and exactly symmetric.
    pub fn symmetric_bands(&self) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        let n = self.grid.len();
        let w = self.grid.weights();
        let mut diag = vec![0.0; n];
        let mut off1 = vec![0.0; n.saturating_sub(1)];
        let mut off2 = vec![0.0; n.saturating_sub(2)];
        for i in 0..n {
            let mut d = -self.face[i] - self.pair[i + 1];
            if i >= 1 {
                d -= self.face[i - 1];
            }
            if i >= 2 {
                d -= self.pair[i - 1];
            }
            diag[i] = d / w[i];
        }
        for i in 0..n - 1 {
            off1[i] = self.face[i] / (w[i] * w[i + 1]).sqrt();
        }
        for i in 0..n - 2 {
            off2[i] = self.pair[i + 1] / (w[i] * w[i + 2]).sqrt();
        }
        (diag, off1, off2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::SplitMix64;

    fn lap(n: usize, r_max: f64) -> (Arc<RadialGrid>, RadialLaplacian) {
        let grid = RadialGrid::build(5, r_max, n).unwrap();
        let op = RadialLaplacian::new(&grid);
        (grid, op)
    }

    #[test]
    fn constant_maps_to_zero() {
        let (grid, op) = lap(256, 10.0);
        let u = RadialField::from_fn_real(&grid, |_| 3.0);
        let lu = op.apply(&u);
        // interior rows annihilate constants by construction; ghost rows do not
        for i in 0..grid.len() - 2 {
            assert!(lu.values()[i].norm() < 1e-9, "node {i}: {}", lu.values()[i]);
        }
    }

    #[test]
    fn r_squared_maps_to_2n_everywhere() {
        let (grid, op) = lap(512, 10.0);
        let u = RadialField::from_fn_real(&grid, |r| r * r);
        let lu = op.apply(&u);
        for i in 0..grid.len() - 2 {
            assert!(
                (lu.values()[i].re - 10.0).abs() < 1e-8,
                "node {i}: {}",
                lu.values()[i].re
            );
        }
    }

    #[test]
    fn r_fourth_bilaplacian_is_constant() {
        let (grid, op) = lap(512, 10.0);
        let u = RadialField::from_fn_real(&grid, |r| r.powi(4));
        let lu = op.apply(&u);
        // Δ r⁴ = (4N+8) r² = 28 r²
        for i in 0..grid.len() - 2 {
            let r = grid.nodes()[i];
            assert!(
                (lu.values()[i].re - 28.0 * r * r).abs() < 1e-7 * (1.0 + 28.0 * r * r),
                "node {i}"
            );
        }
        let llu = op.apply(&lu);
        // Δ²r⁴ = 2N(4N+8) = 280
        for i in 0..grid.len() - 4 {
            assert!(
                (llu.values()[i].re - 280.0).abs() < 1e-6 * 280.0,
                "node {i}: {}",
                llu.values()[i].re
            );
        }
    }

    #[test]
    fn gaussian_laplacian_refinement_order() {
        // Δ e^{−r²} = (4r² − 2N) e^{−r²}; the error must drop at least
        // quadratically under refinement (observed: quartically, since the
        // marched coefficients cancel the leading truncation term).
        let mut errs = Vec::new();
        for n in [512usize, 1024, 2048] {
            let (grid, op) = lap(n, 20.0);
            let u = RadialField::from_fn_real(&grid, |r| (-r * r).exp());
            let lu = op.apply(&u);
            let exact =
                RadialField::from_fn_real(&grid, |r| (4.0 * r * r - 10.0) * (-r * r).exp());
            let diff: Vec<Complex64> = lu
                .values()
                .iter()
                .zip(exact.values())
                .map(|(a, b)| a - b)
                .collect();
            let err = grid.integral_abs_pow(&diff, 2.0).unwrap().sqrt();
            let norm = grid.integral_abs_pow(exact.values(), 2.0).unwrap().sqrt();
            errs.push(err / norm);
        }
        let ratio = errs[0] / errs[1];
        assert!(ratio > 3.5, "refinement ratio {ratio}, errs {errs:?}");
        assert!(errs[1] < 1e-4, "error at n = 1024: {:e}", errs[1]);
    }

    #[test]
    fn discrete_self_adjointness_machine_exact() {
        let (grid, op) = lap(300, 18.0);
        let mut rng = SplitMix64::new(42);
        for _ in 0..3 {
            let s1 = rng.uniform_in(0.5, 2.0);
            let s2 = rng.uniform_in(0.5, 2.0);
            let u = RadialField::from_fn_real(&grid, |r| (-s1 * r * r).exp());
            let v = RadialField::from_fn_real(&grid, |r| r * (-s2 * r * r).exp());
            let lu = op.apply(&u);
            let lv = op.apply(&v);
            let a = grid.inner(lu.values(), v.values());
            let b = grid.inner(u.values(), lv.values());
            let scale = a.abs().max(b.abs()).max(1e-300);
            assert!(
                ((a - b) / scale).abs() < 1e-12,
                "asymmetry {:e}",
                (a - b) / scale
            );
        }
    }

    #[test]
    fn bilaplacian_positivity_identity() {
        let (grid, op) = lap(300, 18.0);
        let u = RadialField::from_fn_real(&grid, |r| (1.0 + r) * (-0.7 * r * r).exp());
        let llu = op.apply_twice(&u);
        let lhs = grid.inner(llu.values(), u.values());
        let rhs = op.kinetic(&u);
        assert!(rhs >= 0.0);
        assert!(((lhs - rhs) / rhs).abs() < 1e-12);
    }
}
