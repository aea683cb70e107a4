//! Small numeric helpers: `no_std` float extensions, the unit-sphere area,
//! smoothstep tapers, least-squares line fits and a tiny deterministic RNG.

/// Float operations routed through `libm` so the crate builds without `std`.
pub trait FloatExt {
    fn sqrt(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn powf(self, e: Self) -> Self;
    fn powi(self, e: i32) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn atan2(self, other: Self) -> Self;
    fn abs(self) -> Self;
    fn hypot(self, other: Self) -> Self;
}

impl FloatExt for f64 {
    #[inline]
    fn sqrt(self) -> f64 {
        libm::sqrt(self)
    }
    #[inline]
    fn exp(self) -> f64 {
        libm::exp(self)
    }
    #[inline]
    fn ln(self) -> f64 {
        libm::log(self)
    }
    #[inline]
    fn powf(self, e: f64) -> f64 {
        libm::pow(self, e)
    }
    #[inline]
    fn powi(self, e: i32) -> f64 {
        libm::pow(self, e as f64)
    }
    #[inline]
    fn sin(self) -> f64 {
        libm::sin(self)
    }
    #[inline]
    fn cos(self) -> f64 {
        libm::cos(self)
    }
    #[inline]
    fn atan2(self, other: f64) -> f64 {
        libm::atan2(self, other)
    }
    #[inline]
    fn abs(self) -> f64 {
        libm::fabs(self)
    }
    #[inline]
    fn hypot(self, other: f64) -> f64 {
        libm::hypot(self, other)
    }
}

pub const PI: f64 = core::f64::consts::PI;

/// Gamma function (libm's tgamma).
#[inline]
pub fn gamma_fn(x: f64) -> f64 {
    libm::tgamma(x)
}

/// Area of the unit sphere in ℝ^N: ω_N = 2 π^{N/2} / Γ(N/2).
pub fn unit_sphere_area(n_dim: u32) -> f64 {
    2.0 * PI.powf(n_dim as f64 / 2.0) / gamma_fn(n_dim as f64 / 2.0)
}

/// Quintic smoothstep rising 0 → 1 on [0, 1] with two vanishing derivatives
/// at both ends (C² joins when used as a taper).
pub fn smoothstep5(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        x * x * x * (10.0 - 15.0 * x + 6.0 * x * x)
    }
}

/// Degree-11 smoothstep rising 0 → 1 on [0, 1] with five vanishing
/// derivatives at both ends (C⁵ joins; keeps sixth derivatives bounded).
pub fn smoothstep11(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        let x6 = x * x * x * x * x * x;
        x6 * (462.0
            + x * (-1980.0 + x * (3465.0 + x * (-3080.0 + x * (1386.0 - x * 252.0)))))
    }
}

/// Least-squares slope and intercept of y against x.
pub fn line_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    assert_eq!(x.len(), y.len());
    let n = x.len() as f64;
    let sx: f64 = x.iter().sum();
    let sy: f64 = y.iter().sum();
    let sxx: f64 = x.iter().map(|v| v * v).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let intercept = (sy - slope * sx) / n;
    (slope, intercept)
}

/// SplitMix64: tiny deterministic generator for seeded test fields and
/// Monte-Carlo audits. Not cryptographic.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / 9_007_199_254_740_992.0)
    }

    /// Uniform in [lo, hi).
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Standard normal via Box–Muller.
    pub fn normal(&mut self) -> f64 {
        let u1 = self.uniform().max(1e-300);
        let u2 = self.uniform();
        (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_area_n5_closed_form() {
        // ω_5 = 2π^{5/2}/Γ(5/2) = 8π²/3
        let expect = 8.0 * PI * PI / 3.0;
        assert!((unit_sphere_area(5) - expect).abs() < 1e-12 * expect);
        assert!((unit_sphere_area(5) - 26.3189).abs() < 1e-4);
    }

    #[test]
    fn smoothstep_joins() {
        assert_eq!(smoothstep5(0.0), 0.0);
        assert_eq!(smoothstep5(1.0), 1.0);
        assert!((smoothstep5(0.5) - 0.5).abs() < 1e-15);
        assert!((smoothstep11(0.5) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn line_fit_recovers_slope() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let y: alloc::vec::Vec<f64> = x.iter().map(|v| 2.5 * v - 1.0).collect();
        let (s, b) = line_fit(&x, &y);
        assert!((s - 2.5).abs() < 1e-12);
        assert!((b + 1.0).abs() < 1e-12);
    }

    #[test]
    fn splitmix_deterministic() {
        let mut a = SplitMix64::new(7);
        let mut b = SplitMix64::new(7);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }
}
