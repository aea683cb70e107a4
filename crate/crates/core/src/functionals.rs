//! Variational quantities on the mass sphere S(c) = {‖u‖₂² = c}.
//!
//! Energy and Pohozaev functionals
//!
//!   E(u) = ½‖Δu‖₂² − (μ/q)‖u‖_q^q − (1/p)‖u‖_p^p,
//!   Q(u) = ‖Δu‖₂² − μ γ_q ‖u‖_q^q − γ_p ‖u‖_p^p,
//!
//! and their closed forms along the fiber u_t = t^{N/4} u(√t ·):
//!
//!   E(u_t) = ½t²A − (μ/q) t^{qγ_q} B − (1/p) t^{pγ_p} D,
//!   Q(u_t) = t²A − μγ_q t^{qγ_q} B − γ_p t^{pγ_p} D = t² h(t),
//!
//! where A = ‖Δu‖₂², B = ‖u‖_q^q, D = ‖u‖_p^p. Since h is strictly
//! decreasing, Q(u_t) has a unique zero t_u, the unique maximizer of
//! t ↦ E(u_t), with d/dt E(u_t) = Q(u_t)/t and concavity beyond t_u.
//!
//! The reduced functional Ψ(u) = E(u_{t_u}) carries the constrained
//! minimization: its Gâteaux derivative is
//!
//!   dΨ(u)[φ] = t_u² ∫ Δu·Δφ − μ t_u^{qγ_q} ∫ |u|^{q−2}u φ
//!              − t_u^{pγ_p} ∫ |u|^{p−2}u φ,
//!
//! so the L²-gradient needs no resampling of the field.

use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::field::RadialField;
use crate::math::FloatExt;
use crate::ops::RadialLaplacian;
use crate::params::ProblemParams;

pub use crate::params::gamma_exponent;

/// Scalar observables of one field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FunctionalReport {
    /// ‖u‖₂²
    pub mass: f64,
    /// A = ‖Δu‖₂²
    pub kinetic: f64,
    /// B = ‖u‖_q^q
    pub lq: f64,
    /// D = ‖u‖_p^p
    pub lp: f64,
    /// E = A/2 − μB/q − D/p
    pub energy: f64,
    /// Q = A − μγ_q B − γ_p D
    pub pohozaev: f64,
    /// Lagrange multiplier, when computed via [`lagrange_omega`].
    pub omega: Option<f64>,
}

/// Evaluate all scalar observables of u.
pub fn report(params: &ProblemParams, op: &RadialLaplacian, u: &RadialField) -> FunctionalReport {
    let grid = u.grid();
    let mass = grid.integral_abs_pow(u.values(), 2.0).unwrap();
    let kinetic = op.kinetic(u);
    let lq = grid.integral_abs_pow(u.values(), params.q).unwrap();
    let lp = grid.integral_abs_pow(u.values(), params.p).unwrap();
    let energy = 0.5 * kinetic - params.mu * lq / params.q - lp / params.p;
    let pohozaev = kinetic - params.mu * params.gamma_q() * lq - params.gamma_p() * lp;
    FunctionalReport {
        mass,
        kinetic,
        lq,
        lp,
        energy,
        pohozaev,
        omega: None,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FiberError {
    BadDilation { t: f64 },
    /// h(t) has no zero: the mass-critical coupling exceeds the threshold
    /// (the Pohozaev set misses the whole fiber).
    NoRoot,
    /// Field too degenerate to carry a fiber (A = 0 or B = D = 0).
    Degenerate,
}

impl fmt::Display for FiberError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiberError::BadDilation { t } => write!(f, "dilation t = {t} must be > 0"),
            FiberError::NoRoot => write!(f, "fiber Pohozaev function has no zero"),
            FiberError::Degenerate => write!(f, "degenerate field: empty fiber problem"),
        }
    }
}

impl From<crate::interp::InterpError> for FiberError {
    fn from(e: crate::interp::InterpError) -> Self {
        match e {
            crate::interp::InterpError::BadDilation { t } => FiberError::BadDilation { t },
        }
    }
}

/// E(u_t) from the stored norms, no resampling.
pub fn fiber_energy(a: f64, b: f64, d: f64, params: &ProblemParams, t: f64) -> Result<f64, FiberError> {
    if !(t > 0.0) {
        return Err(FiberError::BadDilation { t });
    }
    let aq = params.q * params.gamma_q();
    let ap = params.p * params.gamma_p();
    Ok(0.5 * t * t * a - params.mu / params.q * t.powf(aq) * b - t.powf(ap) * d / params.p)
}

/// Q(u_t) from the stored norms.
pub fn fiber_pohozaev(
    a: f64,
    b: f64,
    d: f64,
    params: &ProblemParams,
    t: f64,
) -> Result<f64, FiberError> {
    if !(t > 0.0) {
        return Err(FiberError::BadDilation { t });
    }
    let aq = params.q * params.gamma_q();
    let ap = params.p * params.gamma_p();
    Ok(t * t * a
        - params.mu * params.gamma_q() * t.powf(aq) * b
        - params.gamma_p() * t.powf(ap) * d)
}

/// Fiber profile of one field: samples of E and Q along t, the unique
/// Pohozaev root t_u and the energy curvature there.
#[derive(Debug, Clone)]
pub struct FiberScan {
    pub ts: Vec<f64>,
    pub energies: Vec<f64>,
    pub pohozaevs: Vec<f64>,
    pub t_star: f64,
    /// d²/dt² E(u_t) at t_u; negative at a fiber maximum.
    pub curvature: f64,
}

/// h(t) = A − μγ_q t^{qγ_q−2} B − γ_p t^{pγ_p−2} D, so Q(u_t) = t²h(t).
fn h_value(a: f64, b: f64, d: f64, params: &ProblemParams, t: f64) -> f64 {
    let eq = params.q * params.gamma_q() - 2.0;
    let ep = params.p * params.gamma_p() - 2.0;
    a - params.mu * params.gamma_q() * t.powf(eq) * b - params.gamma_p() * t.powf(ep) * d
}

fn h_derivative(b: f64, d: f64, params: &ProblemParams, t: f64) -> f64 {
    let eq = params.q * params.gamma_q() - 2.0;
    let ep = params.p * params.gamma_p() - 2.0;
    let mut s = -params.gamma_p() * ep * t.powf(ep - 1.0) * d;
    if eq > 0.0 {
        s -= params.mu * params.gamma_q() * eq * t.powf(eq - 1.0) * b;
    }
    s
}

/// Locate the unique dilation t_u with Q(u_{t_u}) = 0.
///
/// Preconditions: A > 0; at the mass-critical endpoint additionally
/// μ γ_q B < A, otherwise the root does not exist and `NoRoot` is
/// returned. The residual satisfies |Q(u_{t_u})| ≤ 1e−10·A.
pub fn find_t_u(a: f64, b: f64, d: f64, params: &ProblemParams) -> Result<FiberScan, FiberError> {
    if !(a > 0.0) || !b.is_finite() || !d.is_finite() {
        return Err(FiberError::Degenerate);
    }
    if b <= 0.0 && d <= 0.0 {
        return Err(FiberError::Degenerate);
    }
    let ep = params.p * params.gamma_p() - 2.0;
    let gp = params.gamma_p();
    let gq = params.gamma_q();

    // closed forms when only the p-power varies
    let eq = params.q * gq - 2.0;
    let single_power = params.mu == 0.0 || b == 0.0 || eq == 0.0;
    let mut t = if single_power {
        let a_eff = if eq == 0.0 { a - params.mu * gq * b } else { a };
        if a_eff <= 0.0 {
            return Err(FiberError::NoRoot);
        }
        if d <= 0.0 {
            // h(t) ≡ a_eff > 0 never crosses zero
            return Err(FiberError::NoRoot);
        }
        (a_eff / (gp * d)).powf(1.0 / ep)
    } else {
        // geometric bracket expansion from t = 1; h is strictly decreasing
        let mut lo = 1.0_f64;
        let mut hi = 1.0_f64;
        if h_value(a, b, d, params, 1.0) > 0.0 {
            let mut k = 0;
            while h_value(a, b, d, params, hi) > 0.0 {
                hi *= 2.0;
                k += 1;
                if k > 400 {
                    return Err(FiberError::NoRoot);
                }
            }
            lo = hi / 2.0;
        } else {
            let mut k = 0;
            while h_value(a, b, d, params, lo) <= 0.0 {
                lo /= 2.0;
                k += 1;
                if k > 400 {
                    return Err(FiberError::NoRoot);
                }
            }
            hi = lo * 2.0;
        }
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if h_value(a, b, d, params, mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };

    // Newton polish on h
    for _ in 0..4 {
        let hv = h_value(a, b, d, params, t);
        let dv = h_derivative(b, d, params, t);
        if dv != 0.0 {
            let step = hv / dv;
            if (step / t).abs() < 0.5 {
                t -= step;
            }
        }
    }
    if !(t > 0.0) || !t.is_finite() {
        return Err(FiberError::NoRoot);
    }

    // curvature d²E/dt² at t_u must be negative (fiber maximum)
    let aq = params.q * gq;
    let ap = params.p * gp;
    let curvature = a
        - params.mu * gq * (aq - 1.0) * t.powf(aq - 2.0) * b
        - gp * (ap - 1.0) * t.powf(ap - 2.0) * d;

    let mut ts = Vec::with_capacity(33);
    let mut energies = Vec::with_capacity(33);
    let mut pohozaevs = Vec::with_capacity(33);
    let lo = t / 10.0;
    let ratio = (100.0_f64).powf(1.0 / 32.0);
    let mut tj = lo;
    for _ in 0..33 {
        ts.push(tj);
        energies.push(fiber_energy(a, b, d, params, tj).unwrap());
        pohozaevs.push(fiber_pohozaev(a, b, d, params, tj).unwrap());
        tj *= ratio;
    }

    Ok(FiberScan {
        ts,
        energies,
        pohozaevs,
        t_star: t,
        curvature,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum OmegaError {
    ZeroMass,
}

impl fmt::Display for OmegaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lagrange multiplier undefined for zero mass")
    }
}

/// ω from the Nehari/Pohozaev combination
/// ω‖u‖₂² = μ(1−γ_q)‖u‖_q^q + (1−γ_p)‖u‖_p^p.
pub fn lagrange_omega(rep: &FunctionalReport, params: &ProblemParams) -> Result<f64, OmegaError> {
    if !(rep.mass > 0.0) {
        return Err(OmegaError::ZeroMass);
    }
    Ok((params.mu * (1.0 - params.gamma_q()) * rep.lq + (1.0 - params.gamma_p()) * rep.lp)
        / rep.mass)
}

/// Weighted-L² norm of Δ²u + ωu − μ|u|^{q−2}u − |u|^{p−2}u, normalized by
/// ‖u‖_{H²} = (‖Δu‖₂² + ‖u‖₂²)^{1/2}. Zero field reports zero.
pub fn pde_residual(
    params: &ProblemParams,
    op: &RadialLaplacian,
    u: &RadialField,
    omega: f64,
) -> f64 {
    let grid = u.grid();
    let llu = op.apply_twice(u);
    let mut res: Vec<Complex64> = Vec::with_capacity(u.len());
    for (i, &z) in u.values().iter().enumerate() {
        let az = z.norm();
        let nl = params.mu * az.powf(params.q - 2.0) + az.powf(params.p - 2.0);
        res.push(llu.values()[i] + z * (omega - nl));
    }
    let rnorm = grid.integral_abs_pow(&res, 2.0).unwrap().sqrt();
    let h2 = (op.kinetic(u) + u.mass()).sqrt();
    if h2 == 0.0 {
        0.0
    } else {
        rnorm / h2
    }
}

/// Reduced functional Ψ(u) = E(u_{t_u}) together with its fiber scan.
pub fn reduced_energy(
    params: &ProblemParams,
    op: &RadialLaplacian,
    u: &RadialField,
) -> Result<(f64, FiberScan), FiberError> {
    let rep = report(params, op, u);
    let scan = find_t_u(rep.kinetic, rep.lq, rep.lp, params)?;
    let e = fiber_energy(rep.kinetic, rep.lq, rep.lp, params, scan.t_star)?;
    Ok((e, scan))
}

/// L²-gradient of Ψ at u, projected tangentially to the mass sphere.
/// Returns the gradient field and the fiber scan of u.
pub fn reduced_gradient(
    params: &ProblemParams,
    op: &RadialLaplacian,
    u: &RadialField,
) -> Result<(RadialField, FiberScan), FiberError> {
    let rep = report(params, op, u);
    let scan = find_t_u(rep.kinetic, rep.lq, rep.lp, params)?;
    let t = scan.t_star;
    let aq = params.q * params.gamma_q();
    let ap = params.p * params.gamma_p();
    let (c2, cq, cp) = (t * t, params.mu * t.powf(aq), t.powf(ap));

    let llu = op.apply_twice(u);
    let grid = u.grid().clone();
    let mut g = RadialField::zeros(&grid);
    for i in 0..u.len() {
        let z = u.values()[i];
        let az = z.norm();
        let nl = cq * az.powf(params.q - 2.0) + cp * az.powf(params.p - 2.0);
        g.values_mut()[i] = llu.values()[i] * c2 - z * nl;
    }
    // remove the component along u (tangent to S(c))
    let gu = grid.inner(g.values(), u.values());
    let uu = grid.inner(u.values(), u.values());
    let coef = Complex64::new(gu / uu, 0.0);
    for i in 0..u.len() {
        let ui = u.values()[i];
        g.values_mut()[i] -= coef * ui;
    }
    Ok((g, scan))
}
