//! Problem data for the combined-nonlinearity biharmonic NLS
//!
//!   i ∂_t ψ − Δ²ψ + μ|ψ|^{q−2}ψ + |ψ|^{p−2}ψ = 0  on ℝ^N,
//!
//! with prescribed mass ‖u‖₂² = c. The admissible exponent window is
//! 2 + 8/N ≤ q < p ≤ 4* where 4* = 2N/(N−4), and the scaling exponent
//! γ_r = N(r−2)/(4r) governs how each nonlinearity responds to the
//! mass-preserving dilation.

use core::fmt;

/// Tolerance for recognizing the critical endpoints in floating point.
const EXPONENT_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum ParamsError {
    DimensionTooSmall { n_dim: u32 },
    BadMass { c: f64 },
    NegativeCoupling { mu: f64 },
    /// q below the mass-critical endpoint 2 + 8/N.
    LowerExponentOutOfRange { q: f64, min: f64 },
    /// Exponent ordering q < p violated.
    ExponentOrder { q: f64, p: f64 },
    /// p above the Sobolev-critical endpoint 4*.
    UpperExponentOutOfRange { p: f64, four_star: f64 },
    /// γ_r is only defined for r > 2.
    GammaUndefined { r: f64 },
}

impl fmt::Display for ParamsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamsError::DimensionTooSmall { n_dim } => {
                write!(f, "dimension N = {n_dim} violates the hypothesis N >= 5")
            }
            ParamsError::BadMass { c } => write!(f, "prescribed mass c = {c} must be positive"),
            ParamsError::NegativeCoupling { mu } => {
                write!(f, "coupling mu = {mu} must be nonnegative")
            }
            ParamsError::LowerExponentOutOfRange { q, min } => {
                write!(f, "exponent q = {q} below the mass-critical endpoint {min}")
            }
            ParamsError::ExponentOrder { q, p } => {
                write!(f, "exponents must satisfy q < p (got q = {q}, p = {p})")
            }
            ParamsError::UpperExponentOutOfRange { p, four_star } => {
                write!(f, "exponent p = {p} above the Sobolev endpoint 4* = {four_star}")
            }
            ParamsError::GammaUndefined { r } => {
                write!(f, "gamma_r undefined for r = {r} <= 2")
            }
        }
    }
}

/// γ_r = N(r−2)/(4r) for r > 2.
pub fn gamma_exponent(n_dim: u32, r: f64) -> Result<f64, ParamsError> {
    if r <= 2.0 {
        return Err(ParamsError::GammaUndefined { r });
    }
    Ok(n_dim as f64 * (r - 2.0) / (4.0 * r))
}

/// (N, μ, q, p, c) plus the derived critical data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemParams {
    pub n_dim: u32,
    pub mu: f64,
    pub q: f64,
    pub p: f64,
    pub c: f64,
}

impl ProblemParams {
    /// Validate against the standing hypotheses. μ = 0 is admitted as a
    /// test degenerate; the existence theorems themselves require μ > 0.
    pub fn new(n_dim: u32, mu: f64, q: f64, p: f64, c: f64) -> Result<Self, ParamsError> {
        if n_dim < 5 {
            return Err(ParamsError::DimensionTooSmall { n_dim });
        }
        if !(c > 0.0) {
            return Err(ParamsError::BadMass { c });
        }
        if !(mu >= 0.0) {
            return Err(ParamsError::NegativeCoupling { mu });
        }
        let q_min = 2.0 + 8.0 / n_dim as f64;
        if q < q_min - EXPONENT_EPS {
            return Err(ParamsError::LowerExponentOutOfRange { q, min: q_min });
        }
        if !(q < p) {
            return Err(ParamsError::ExponentOrder { q, p });
        }
        let four_star = 2.0 * n_dim as f64 / (n_dim as f64 - 4.0);
        if p > four_star * (1.0 + EXPONENT_EPS) {
            return Err(ParamsError::UpperExponentOutOfRange { p, four_star });
        }
        Ok(Self { n_dim, mu, q, p, c })
    }

    /// Sobolev-critical exponent 4* = 2N/(N−4).
    pub fn four_star(&self) -> f64 {
        2.0 * self.n_dim as f64 / (self.n_dim as f64 - 4.0)
    }

    /// Mass-critical endpoint 2 + 8/N.
    pub fn mass_critical_q(&self) -> f64 {
        2.0 + 8.0 / self.n_dim as f64
    }

    pub fn gamma_q(&self) -> f64 {
        gamma_exponent(self.n_dim, self.q).expect("validated q > 2")
    }

    pub fn gamma_p(&self) -> f64 {
        gamma_exponent(self.n_dim, self.p).expect("validated p > 2")
    }

    /// q sits at the mass-critical endpoint (q γ_q = 2).
    pub fn is_mass_critical(&self) -> bool {
        (self.q - self.mass_critical_q()).abs() <= EXPONENT_EPS * self.mass_critical_q()
    }

    /// p sits at the Sobolev endpoint (γ_p = 1).
    pub fn is_sobolev_critical(&self) -> bool {
        (self.p - self.four_star()).abs() <= EXPONENT_EPS * self.four_star()
    }
}
