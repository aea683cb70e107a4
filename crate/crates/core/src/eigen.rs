//! Dense symmetric eigendecomposition: Householder tridiagonalization
//! followed by implicit-shift QL, the classic EISPACK tred2/tql2 pair.
//!
//! Used once per (grid, operator) pair to diagonalize the similarity-
//! transformed radial Laplacian; the evolution module then exponentiates
//! the squared spectrum to obtain an exactly unitary bilaplacian flow.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::FloatExt;

/// Eigenpairs of a real symmetric matrix, eigenvalues ascending.
/// `vectors` is column-major: component i of eigenvector k sits at
/// `vectors[k * n + i]`; the columns are orthonormal.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub n: usize,
    pub values: Vec<f64>,
    pub vectors: Vec<f64>,
}

/// Decompose a symmetric pentadiagonal matrix given by its bands.
pub fn eigen_banded(diag: &[f64], off1: &[f64], off2: &[f64]) -> SymmetricEigen {
    let n = diag.len();
    let mut a = vec![0.0; n * n];
    for i in 0..n {
        a[i * n + i] = diag[i];
    }
    for i in 0..n - 1 {
        a[i * n + i + 1] = off1[i];
        a[(i + 1) * n + i] = off1[i];
    }
    for i in 0..n - 2 {
        a[i * n + i + 2] = off2[i];
        a[(i + 2) * n + i] = off2[i];
    }
    eigen_dense(a, n)
}

/// Decompose a symmetric matrix given densely (row-major); consumes the
/// buffer, which is overwritten by the accumulated orthogonal transform.
pub fn eigen_dense(mut a: Vec<f64>, n: usize) -> SymmetricEigen {
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tred2(&mut a, n, &mut d, &mut e);
    tql2(&mut d, &mut e, &mut a, n);

    // sort ascending, reordering columns
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).unwrap());
    let mut values = Vec::with_capacity(n);
    let mut vectors = vec![0.0; n * n];
    for (k, &src) in order.iter().enumerate() {
        values.push(d[src]);
        for i in 0..n {
            vectors[k * n + i] = a[i * n + src];
        }
    }
    SymmetricEigen { n, values, vectors }
}

impl SymmetricEigen {
    /// y = Qᵀ x (coefficients of x in the eigenbasis).
    pub fn to_basis(&self, x: &[f64], out: &mut [f64]) {
        let n = self.n;
        for k in 0..n {
            let col = &self.vectors[k * n..(k + 1) * n];
            out[k] = col.iter().zip(x).map(|(q, v)| q * v).sum();
        }
    }

    /// x = Q y.
    pub fn from_basis(&self, y: &[f64], out: &mut [f64]) {
        let n = self.n;
        out.fill(0.0);
        for k in 0..n {
            let c = y[k];
            if c != 0.0 {
                let col = &self.vectors[k * n..(k + 1) * n];
                for i in 0..n {
                    out[i] += c * col[i];
                }
            }
        }
    }
}

/// Householder reduction of a (row-major, symmetric) to tridiagonal form,
/// accumulating the transform in place.
fn tred2(a: &mut [f64], n: usize, d: &mut [f64], e: &mut [f64]) {
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let mut scale = 0.0;
            for k in 0..=l {
                scale += a[i * n + k].abs();
            }
            if scale == 0.0 {
                e[i] = a[i * n + l];
            } else {
                for k in 0..=l {
                    a[i * n + k] /= scale;
                    h += a[i * n + k] * a[i * n + k];
                }
                let f = a[i * n + l];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[i * n + l] = f - g;
                let mut f_acc = 0.0;
                for j in 0..=l {
                    a[j * n + i] = a[i * n + j] / h;
                    let mut g = 0.0;
                    for k in 0..=j {
                        g += a[j * n + k] * a[i * n + k];
                    }
                    for k in j + 1..=l {
                        g += a[k * n + j] * a[i * n + k];
                    }
                    e[j] = g / h;
                    f_acc += e[j] * a[i * n + j];
                }
                let hh = f_acc / (h + h);
                for j in 0..=l {
                    let f = a[i * n + j];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        a[j * n + k] -= f * e[k] + g * a[i * n + k];
                    }
                }
            }
        } else {
            e[i] = a[i * n + l];
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for i in 0..n {
        if d[i] != 0.0 {
            for j in 0..i {
                let mut g = 0.0;
                for k in 0..i {
                    g += a[i * n + k] * a[k * n + j];
                }
                for k in 0..i {
                    a[k * n + j] -= g * a[k * n + i];
                }
            }
        }
        d[i] = a[i * n + i];
        a[i * n + i] = 1.0;
        for j in 0..i {
            a[j * n + i] = 0.0;
            a[i * n + j] = 0.0;
        }
    }
}

/// Implicit-shift QL on the tridiagonal (d, e), rotations applied to the
/// columns of z.
fn tql2(d: &mut [f64], e: &mut [f64], z: &mut [f64], n: usize) {
    if n == 1 {
        return;
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    for l in 0..n {
        let mut iter = 0usize;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter <= 64, "QL iteration failed to converge");

            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            let sign_r = if g >= 0.0 { r } else { -r };
            g = d[m] - d[l] + e[l] / (g + sign_r);
            let (mut s, mut c) = (1.0, 1.0);
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..n {
                    f = z[k * n + i + 1];
                    z[k * n + i + 1] = s * z[k * n + i] + c * f;
                    z[k * n + i] = c * z[k * n + i] - s * f;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{SplitMix64, PI};

    #[test]
    fn dirichlet_laplacian_closed_form() {
        // tridiag(1, -2, 1): eigenvalues -4 sin²(kπ / (2(n+1))), k = 1..n
        let n = 64;
        let diag = vec![-2.0; n];
        let off1 = vec![1.0; n - 1];
        let off2 = vec![0.0; n - 2];
        let eig = eigen_banded(&diag, &off1, &off2);
        for (k, &lam) in eig.values.iter().enumerate() {
            let j = (n - k) as f64; // ascending order reverses the index
            let expect = -4.0 * (j * PI / (2.0 * (n as f64 + 1.0))).sin().powi(2);
            assert!((lam - expect).abs() < 1e-12, "k={k}: {lam} vs {expect}");
        }
    }

    #[test]
    fn random_symmetric_residual_and_orthogonality() {
        let n = 40;
        let mut rng = SplitMix64::new(11);
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let v = rng.normal();
                a[i * n + j] = v;
                a[j * n + i] = v;
            }
        }
        let eig = eigen_dense(a.clone(), n);
        // residual ‖A q − λ q‖ per pair
        for k in 0..n {
            let q = &eig.vectors[k * n..(k + 1) * n];
            let mut worst: f64 = 0.0;
            for i in 0..n {
                let mut aq = 0.0;
                for j in 0..n {
                    aq += a[i * n + j] * q[j];
                }
                worst = worst.max((aq - eig.values[k] * q[i]).abs());
            }
            assert!(worst < 1e-10, "k={k}: residual {worst}");
        }
        // orthonormality
        for k1 in 0..n {
            for k2 in k1..n {
                let dot: f64 = eig.vectors[k1 * n..(k1 + 1) * n]
                    .iter()
                    .zip(&eig.vectors[k2 * n..(k2 + 1) * n])
                    .map(|(a, b)| a * b)
                    .sum();
                let expect = if k1 == k2 { 1.0 } else { 0.0 };
                assert!((dot - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn basis_roundtrip() {
        let n = 24;
        let mut rng = SplitMix64::new(5);
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let v = rng.normal();
                a[i * n + j] = v;
                a[j * n + i] = v;
            }
        }
        let eig = eigen_dense(a, n);
        let x: Vec<f64> = (0..n).map(|_| rng.normal()).collect();
        let mut y = vec![0.0; n];
        let mut back = vec![0.0; n];
        eig.to_basis(&x, &mut y);
        eig.from_basis(&y, &mut back);
        for i in 0..n {
            assert!((x[i] - back[i]).abs() < 1e-12);
        }
    }
}
