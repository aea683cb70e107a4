//! Cholesky factorization and solves for symmetric positive-definite
//! banded matrices. Backs the H²-preconditioner (I + Δ²)⁻¹ used by the
//! ground-state descent: the similarity-transformed bilaplacian has
//! bandwidth 4, so factor and solve are both O(n·bw²) and O(n·bw).

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::math::FloatExt;

/// Lower-banded Cholesky factor L of A = L Lᵀ.
/// `band[j]` holds the j-th subdiagonal: `band[j][i] = L[i, i−j]`.
#[derive(Debug, Clone)]
pub struct BandedCholesky {
    n: usize,
    bw: usize,
    band: Vec<Vec<f64>>,
}

impl BandedCholesky {
    /// Factor a SPD banded matrix given by its lower bands
    /// (`a[j][i] = A[i, i−j]`, j = 0..=bw). Returns None if the matrix is
    /// not positive definite.
    pub fn factor(a: &[Vec<f64>]) -> Option<Self> {
        let bw = a.len() - 1;
        let n = a[0].len();
        let mut band: Vec<Vec<f64>> = (0..=bw).map(|_| vec![0.0; n]).collect();
        for i in 0..n {
            let mut s = a[0][i];
            for j in 1..=bw.min(i) {
                s -= band[j][i] * band[j][i];
            }
            if s <= 0.0 || !s.is_finite() {
                return None;
            }
            let lii = s.sqrt();
            band[0][i] = lii;
            // entries below the diagonal: L[k, i] for k = i+1..=i+bw
            for k in i + 1..(i + bw + 1).min(n) {
                let j = k - i;
                let mut s = a[j][k];
                for m in k.saturating_sub(bw)..i {
                    let jk = k - m;
                    let ji = i - m;
                    if jk <= bw && ji <= bw {
                        s -= band[jk][k] * band[ji][i];
                    }
                }
                band[j][k] = s / lii;
            }
        }
        Some(Self { n, bw, band })
    }

    /// Solve A x = b in place.
    pub fn solve(&self, b: &mut [f64]) {
        let (n, bw) = (self.n, self.bw);
        for i in 0..n {
            let mut s = b[i];
            for j in 1..=bw.min(i) {
                s -= self.band[j][i] * b[i - j];
            }
            b[i] = s / self.band[0][i];
        }
        for i in (0..n).rev() {
            let mut s = b[i];
            for j in 1..=bw.min(n - 1 - i) {
                s -= self.band[j][i + j] * b[i + j];
            }
            b[i] = s / self.band[0][i];
        }
    }
}

/// LU factorization with partial pivoting for a complex banded matrix
/// with `kl` sub- and `ku` superdiagonals. Row windows are widened to
/// ku + kl superdiagonals to absorb pivoting fill-in; storage is flat and
/// reusable across factorizations (the implicit evolution stepper
/// refactors every inner iteration). Row i holds columns
/// i−kl ..= i+kl+ku at `data[i·width + (j − i + kl)]`.
#[derive(Debug, Clone)]
pub struct ComplexBandedLu {
    n: usize,
    kl: usize,
    kw: usize,
    width: usize,
    data: Vec<Complex64>,
    ops: Vec<LuOp>,
}

#[derive(Debug, Clone, Copy)]
enum LuOp {
    Swap(usize, usize),
    Eliminate {
        row: usize,
        col: usize,
        factor: Complex64,
    },
}

impl ComplexBandedLu {
    pub fn new(n: usize, kl: usize, ku: usize) -> Self {
        let kw = ku + kl;
        let width = kl + kw + 1;
        Self {
            n,
            kl,
            kw,
            width,
            data: vec![Complex64::new(0.0, 0.0); n * width],
            ops: Vec::with_capacity(2 * n * kl),
        }
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        i * self.width + (j + self.kl - i)
    }

    /// Fill from a band accessor and factor in place; false when singular.
    pub fn factor(&mut self, ku: usize, entry: impl Fn(usize, usize) -> Complex64) -> bool {
        let (n, kl, kw) = (self.n, self.kl, self.kw);
        self.data.fill(Complex64::new(0.0, 0.0));
        self.ops.clear();
        for i in 0..n {
            for j in i.saturating_sub(kl)..=(i + ku).min(n - 1) {
                let at = self.idx(i, j);
                self.data[at] = entry(i, j);
            }
        }
        for k in 0..n {
            let hi = (k + kl).min(n - 1);
            let mut piv = k;
            let mut best = self.data[self.idx(k, k)].norm_sqr();
            for r in k + 1..=hi {
                let v = self.data[self.idx(r, k)].norm_sqr();
                if v > best {
                    best = v;
                    piv = r;
                }
            }
            if !(best > 0.0) {
                return false;
            }
            let hi_j = (k + kw).min(n - 1);
            if piv != k {
                for j in k..=hi_j {
                    let a = self.idx(k, j);
                    let b = self.idx(piv, j);
                    self.data.swap(a, b);
                }
                self.ops.push(LuOp::Swap(k, piv));
            }
            let pivot = self.data[self.idx(k, k)];
            for r in k + 1..=hi {
                let v = self.data[self.idx(r, k)];
                if v.norm_sqr() == 0.0 {
                    continue;
                }
                let factor = v / pivot;
                for j in k..=hi_j {
                    let src = self.data[self.idx(k, j)];
                    let at = self.idx(r, j);
                    self.data[at] -= src * factor;
                }
                self.ops.push(LuOp::Eliminate {
                    row: r,
                    col: k,
                    factor,
                });
            }
        }
        true
    }

    /// Solve A x = b in place.
    pub fn solve(&self, b: &mut [Complex64]) {
        for op in &self.ops {
            match *op {
                LuOp::Swap(i, j) => b.swap(i, j),
                LuOp::Eliminate { row, col, factor } => {
                    let d = b[col] * factor;
                    b[row] -= d;
                }
            }
        }
        for i in (0..self.n).rev() {
            let hi = (i + self.kw).min(self.n - 1);
            let mut s = b[i];
            for j in i + 1..=hi {
                s -= self.data[self.idx(i, j)] * b[j];
            }
            b[i] = s / self.data[self.idx(i, i)];
        }
    }
}

/// Bands of I + S² for a symmetric pentadiagonal S given by
/// (diag, off1, off2); the result has bandwidth 4 in lower storage.
pub fn identity_plus_square_bands(diag: &[f64], off1: &[f64], off2: &[f64]) -> Vec<Vec<f64>> {
    let n = diag.len();
    let s = |i: usize, j: usize| -> f64 {
        let (a, b) = if i >= j { (j, i) } else { (i, j) };
        match b - a {
            0 => diag[a],
            1 => off1[a],
            2 => off2[a],
            _ => 0.0,
        }
    };
    let mut out: Vec<Vec<f64>> = (0..=4usize).map(|_| vec![0.0; n]).collect();
    for i in 0..n {
        for j in i.saturating_sub(4)..=i {
            let mut v = 0.0;
            let lo = i.max(j).saturating_sub(2);
            let hi = (i.min(j) + 2).min(n - 1);
            for k in lo..=hi {
                v += s(i, k) * s(k, j);
            }
            if i == j {
                v += 1.0;
            }
            out[i - j][i] = v;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::SplitMix64;

    #[test]
    fn complex_banded_lu_solves() {
        let n = 60usize;
        let (kl, ku) = (4usize, 4usize);
        let mut rng = SplitMix64::new(91);
        let mut entries = alloc::collections::BTreeMap::new();
        for i in 0..n {
            for j in i.saturating_sub(kl)..=(i + ku).min(n - 1) {
                let v = Complex64::new(rng.normal(), rng.normal());
                let v = if i == j { v + Complex64::new(6.0, 6.0) } else { v };
                entries.insert((i, j), v);
            }
        }
        let get = |i: usize, j: usize| -> Complex64 {
            *entries
                .get(&(i, j))
                .unwrap_or(&Complex64::new(0.0, 0.0))
        };
        let mut lu = ComplexBandedLu::new(n, kl, ku);
        assert!(lu.factor(ku, get));
        let x_true: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.normal(), rng.normal()))
            .collect();
        let mut b = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            for j in i.saturating_sub(kl)..=(i + ku).min(n - 1) {
                b[i] += get(i, j) * x_true[j];
            }
        }
        lu.solve(&mut b);
        for i in 0..n {
            assert!((b[i] - x_true[i]).norm() < 1e-10, "i = {i}");
        }
    }

    #[test]
    fn banded_solve_inverts_identity_plus_square() {
        let n = 50;
        let mut rng = SplitMix64::new(3);
        let diag: Vec<f64> = (0..n).map(|_| rng.uniform_in(-2.0, 2.0)).collect();
        let off1: Vec<f64> = (0..n - 1).map(|_| rng.uniform_in(-1.0, 1.0)).collect();
        let off2: Vec<f64> = (0..n - 2).map(|_| rng.uniform_in(-1.0, 1.0)).collect();
        let a = identity_plus_square_bands(&diag, &off1, &off2);
        let chol = BandedCholesky::factor(&a).expect("I + S² is SPD");

        let s_apply = |v: &[f64]| -> Vec<f64> {
            let mut out = vec![0.0; n];
            for i in 0..n {
                let mut acc = diag[i] * v[i];
                if i >= 1 {
                    acc += off1[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    acc += off1[i] * v[i + 1];
                }
                if i >= 2 {
                    acc += off2[i - 2] * v[i - 2];
                }
                if i + 2 < n {
                    acc += off2[i] * v[i + 2];
                }
                out[i] = acc;
            }
            out
        };
        let x_true: Vec<f64> = (0..n).map(|_| rng.normal()).collect();
        let ssx = s_apply(&s_apply(&x_true));
        let mut b: Vec<f64> = (0..n).map(|i| x_true[i] + ssx[i]).collect();
        chol.solve(&mut b);
        for i in 0..n {
            assert!((b[i] - x_true[i]).abs() < 1e-10, "i = {i}");
        }
    }
}
