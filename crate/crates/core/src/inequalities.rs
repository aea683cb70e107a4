//! Functional-inequality constants and the critical bubble family.
//!
//! Gagliardo–Nirenberg: for 2 < r < 4* the sharp constant C_{N,r} in
//!
//!   ‖u‖_r^r ≤ C^r_{N,r} ‖Δu‖₂^{rγ_r} ‖u‖₂^{r(1−γ_r)}
//!
//! is estimated by maximizing the scale- and dilation-invariant quotient
//! W(u) = ‖u‖_r^r / (‖Δu‖₂^{rγ_r}‖u‖₂^{r(1−γ_r)}) with preconditioned
//! ascent from a Gaussian seed.
//!
//! Sobolev: the best constant 𝒮 in 𝒮‖u‖²_{4*} ≤ ‖Δu‖₂² is attained by
//! U_ε = R·(ε/(ε²+|x|²))^{(N−4)/2} with R = [(N−4)N(N²−4)]^{(N−4)/8},
//! normalized so that Δ²U = |U|^{4*−2}U; then ‖ΔU_ε‖₂² = ‖U_ε‖_{4*}^{4*}
//! = 𝒮^{N/4}. Both routes to 𝒮 are computed and cross-checked.
//!
//! The cutoff bubble u_ε = φ·U_ε (φ ≡ 1 on B₁, ≡ 0 outside B₂) carries the
//! small-ε expansions
//!
//!   ‖Δu_ε‖₂² = 𝒮^{N/4} + O(ε^{N−4}),   ‖u_ε‖_{4*}^{4*} = 𝒮^{N/4} + O(ε^N),
//!   ‖u_ε‖_q^q ~ ε^{N−(N−4)q/2} (q > N/(N−4)),  ~ ε^{(N−4)q/2} (q < N/(N−4)),
//!   ‖u_ε‖₂²  ~ ε^{N−4} (5 ≤ N < 8),
//!
//! with logarithmic corrections at q = N/(N−4) and N = 8. The fits verify
//! these exponents on a decade of ε.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::banded::{identity_plus_square_bands, BandedCholesky};
use crate::field::RadialField;
use crate::grid::RadialGrid;
use crate::math::{gamma_fn, line_fit, smoothstep11, FloatExt, PI};
use crate::ops::RadialLaplacian;
use crate::params::gamma_exponent;

#[derive(Debug, Clone, PartialEq)]
pub enum InequalityError {
    /// r outside (2, 4*).
    ExponentOutOfRange { r: f64, four_star: f64 },
    BadEpsilon { eps: f64 },
    /// Bubble needs the grid to cover the support radius 2.
    GridTooSmall { r_max: f64 },
    /// Asymptotic fits need at least 4 ε values spanning a decade.
    BadEpsilonList,
    /// The two Sobolev routes disagree beyond 2%: discretization too coarse.
    Inconsistent { rel: f64 },
    /// The threshold is only meaningful at the mass-critical exponent.
    NotMassCritical { q: f64 },
}

impl fmt::Display for InequalityError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InequalityError::ExponentOutOfRange { r, four_star } => {
                write!(f, "exponent r = {r} not in (2, 4* = {four_star})")
            }
            InequalityError::BadEpsilon { eps } => write!(f, "epsilon {eps} must be positive"),
            InequalityError::GridTooSmall { r_max } => {
                write!(f, "grid radius {r_max} too small for the bubble support (needs >= 2)")
            }
            InequalityError::BadEpsilonList => {
                write!(f, "need at least 4 epsilon values spanning one decade")
            }
            InequalityError::Inconsistent { rel } => {
                write!(f, "Sobolev routes disagree by {rel:.2e} (> 2e-2)")
            }
            InequalityError::NotMassCritical { q } => {
                write!(f, "threshold defined only at q = 2 + 8/N (got q = {q})")
            }
        }
    }
}

/// Ascent options for the Gagliardo–Nirenberg maximization.
#[derive(Debug, Clone)]
pub struct GnOptions {
    pub max_iters: usize,
    /// Stop when the quotient improves by less than this relative amount.
    pub rel_tol: f64,
    pub seed_width: f64,
}

impl Default for GnOptions {
    fn default() -> Self {
        Self {
            max_iters: 800,
            rel_tol: 1e-13,
            seed_width: 1.0,
        }
    }
}

/// Estimated sharp Gagliardo–Nirenberg constant for one exponent.
#[derive(Debug, Clone)]
pub struct GnEstimate {
    pub n_dim: u32,
    pub exponent: f64,
    /// sup W = C^r_{N,r} (the constant already raised to the r-th power).
    pub c_pow_r: f64,
    /// C_{N,r} = (sup W)^{1/r}.
    pub constant: f64,
    pub maximizer: RadialField,
    /// Quotient after every accepted ascent step; non-decreasing.
    pub history: Vec<f64>,
    pub converged: bool,
}

impl GnEstimate {
    /// The maximizer rescaled to squared mass c.
    pub fn maximizer_with_mass(&self, c: f64) -> RadialField {
        let mut u = self.maximizer.clone();
        u.project_mass(c);
        u
    }
}

/// The dilation- and scale-invariant quotient W(u).
pub fn gn_quotient(grid: &Arc<RadialGrid>, op: &RadialLaplacian, u: &RadialField, r: f64) -> f64 {
    let g = gamma_exponent(grid.n_dim(), r).expect("r > 2");
    let b = grid.integral_abs_pow(u.values(), r).unwrap();
    let a = op.kinetic(u);
    let m = u.mass();
    b / (a.powf(r * g / 2.0) * m.powf(r * (1.0 - g) / 2.0))
}

/// Maximize W by preconditioned gradient ascent from a Gaussian seed.
pub fn estimate_gn_constant(
    grid: &Arc<RadialGrid>,
    op: &RadialLaplacian,
    r: f64,
    opts: &GnOptions,
) -> Result<GnEstimate, InequalityError> {
    let nd = grid.n_dim();
    let four_star = 2.0 * nd as f64 / (nd as f64 - 4.0);
    if !(r > 2.0 && r < four_star) {
        return Err(InequalityError::ExponentOutOfRange { r, four_star });
    }
    let gamma = gamma_exponent(nd, r).unwrap();

    // H²-preconditioner (I + Δ²)⁻¹ in the similarity basis
    let (diag, off1, off2) = op.symmetric_bands();
    let chol = BandedCholesky::factor(&identity_plus_square_bands(&diag, &off1, &off2))
        .expect("I + S^2 is positive definite");
    let sqrt_w: Vec<f64> = grid.weights().iter().map(|w| w.sqrt()).collect();

    let mut u = RadialField::gaussian_with_mass(grid, opts.seed_width, 1.0);
    let mut ln_w = gn_quotient(grid, op, &u, r).ln();
    let mut history = alloc::vec![ln_w.exp()];
    let mut step = 1.0_f64;
    let mut converged = false;
    let mut stall = 0usize;

    for _ in 0..opts.max_iters {
        // gradient of ln W at u (mass normalized to 1)
        let b = grid.integral_abs_pow(u.values(), r).unwrap();
        let a = op.kinetic(&u);
        let m = u.mass();
        let llu = op.apply_twice(&u);
        let mut g = RadialField::zeros(grid);
        for i in 0..u.len() {
            let z = u.values()[i];
            let az = z.norm();
            g.values_mut()[i] = z * (r * az.powf(r - 2.0) / b)
                - llu.values()[i] * (r * gamma / a)
                - z * (r * (1.0 - gamma) / m);
        }
        // precondition: solve (I + S²) y = W^{1/2} g, then back to point values
        let mut dir = RadialField::zeros(grid);
        {
            let mut buf: Vec<f64> = (0..u.len()).map(|i| g.values()[i].re * sqrt_w[i]).collect();
            chol.solve(&mut buf);
            for i in 0..u.len() {
                dir.values_mut()[i] = Complex64::new(buf[i] / sqrt_w[i], 0.0);
            }
        }
        let slope = grid.inner(g.values(), dir.values());
        if !(slope > 0.0) {
            converged = true;
            break;
        }

        let mut accepted = false;
        for _ in 0..40 {
            let mut trial = u.clone();
            trial.axpy(Complex64::new(step, 0.0), &dir);
            trial.project_mass(1.0);
            let q_trial = gn_quotient(grid, op, &trial, r);
            if q_trial.ln() > ln_w + 1e-4 * step * slope {
                let improvement = (q_trial.ln() - ln_w).abs();
                u = trial;
                ln_w = q_trial.ln();
                history.push(q_trial);
                step *= 1.8;
                accepted = true;
                if improvement < opts.rel_tol {
                    stall += 1;
                    if stall >= 3 {
                        converged = true;
                    }
                } else {
                    stall = 0;
                }
                break;
            }
            step *= 0.5;
        }
        if !accepted || converged {
            converged = converged || !accepted && {
                // no ascent direction makes progress: stationary
                true
            };
            break;
        }
    }

    let c_pow_r = ln_w.exp();
    Ok(GnEstimate {
        n_dim: nd,
        exponent: r,
        c_pow_r,
        constant: c_pow_r.powf(1.0 / r),
        maximizer: u,
        history,
        converged,
    })
}

/// c* = [(N+4)/(N μ C^q_{N,q})]^{N/4}: masses below c* satisfy the strict
/// mass-critical smallness μ c^{4/N} < (N+4)/(N C^q_{N,q}).
pub fn mass_critical_threshold(n_dim: u32, mu: f64, c_pow_q: f64) -> f64 {
    let nd = n_dim as f64;
    ((nd + 4.0) / (nd * mu * c_pow_q)).powf(nd / 4.0)
}

/// The strict threshold check μ c^{4/N} < (N+4)/(N C^q_{N,q}).
pub fn mass_critical_check(n_dim: u32, mu: f64, c: f64, c_pow_q: f64) -> bool {
    let nd = n_dim as f64;
    mu * c.powf(4.0 / nd) < (nd + 4.0) / (nd * c_pow_q)
}

/// Same check fed from a GN estimate; rejects non-mass-critical exponents.
pub fn threshold_from_estimate(
    est: &GnEstimate,
    mu: f64,
    c: f64,
) -> Result<bool, InequalityError> {
    let q_mc = 2.0 + 8.0 / est.n_dim as f64;
    if (est.exponent - q_mc).abs() > 1e-12 * q_mc {
        return Err(InequalityError::NotMassCritical { q: est.exponent });
    }
    Ok(mass_critical_check(est.n_dim, mu, c, est.c_pow_r))
}

/// R = [(N−4)N(N²−4)]^{(N−4)/8}, the normalization making
/// U = R (1+|x|²)^{−(N−4)/2} solve Δ²U = U^{4*−1}.
pub fn bubble_normalization(n_dim: u32) -> f64 {
    let nd = n_dim as f64;
    ((nd - 4.0) * nd * (nd * nd - 4.0)).powf((nd - 4.0) / 8.0)
}

/// Closed-form critical level 𝒮^{N/4} = ‖U_ε‖_{4*}^{4*}
/// = R^{4*} π^{N/2} Γ(N/2) / Γ(N) (Beta integral of the extremal profile).
pub fn sobolev_critical_level(n_dim: u32) -> f64 {
    let nd = n_dim as f64;
    let four_star = 2.0 * nd / (nd - 4.0);
    bubble_normalization(n_dim).powf(four_star) * PI.powf(nd / 2.0) * gamma_fn(nd / 2.0)
        / gamma_fn(nd)
}

/// Closed-form best constant 𝒮 = (𝒮^{N/4})^{4/N}; the independent oracle
/// the numerical estimate is tested against.
pub fn sobolev_constant_exact(n_dim: u32) -> f64 {
    sobolev_critical_level(n_dim).powf(4.0 / n_dim as f64)
}

/// U_ε sampled on the grid.
pub fn aubin_talenti_profile(
    grid: &Arc<RadialGrid>,
    eps: f64,
) -> Result<RadialField, InequalityError> {
    if !(eps > 0.0) {
        return Err(InequalityError::BadEpsilon { eps });
    }
    let r_const = bubble_normalization(grid.n_dim());
    let pow = (grid.n_dim() as f64 - 4.0) / 2.0;
    Ok(RadialField::from_fn_real(grid, |r| {
        r_const * (eps / (eps * eps + r * r)).powf(pow)
    }))
}

/// Closed-form ΔU_ε = R ε^{(N−4)/2}(4−N)[N/(ε²+r²)^{(N−2)/2}
/// + (2−N) r²/(ε²+r²)^{N/2}], sampled on the grid (div(x·g) = Ng + r g′;
/// the value at the origin is N·U″(0)). U_ε decays only like r^{4−N}, so
/// the discrete operator's Dirichlet closure would pollute ‖ΔU_ε‖ on any
/// truncated domain; the analytic form avoids that.
pub fn aubin_talenti_laplacian(
    grid: &Arc<RadialGrid>,
    eps: f64,
) -> Result<RadialField, InequalityError> {
    if !(eps > 0.0) {
        return Err(InequalityError::BadEpsilon { eps });
    }
    let nd = grid.n_dim() as f64;
    let r_const = bubble_normalization(grid.n_dim());
    let amp = r_const * eps.powf((nd - 4.0) / 2.0) * (4.0 - nd);
    Ok(RadialField::from_fn_real(grid, |r| {
        let d = eps * eps + r * r;
        amp * (nd / d.powf((nd - 2.0) / 2.0) + (2.0 - nd) * r * r / d.powf(nd / 2.0))
    }))
}

/// Cutoff profile: 1 on B₁, 0 outside B₂, C⁵ smoothstep taper between.
pub fn bubble_cutoff(r: f64) -> f64 {
    1.0 - smoothstep11(r - 1.0)
}

/// u_ε = φ·U_ε, compactly supported in B₂.
pub fn bubble(grid: &Arc<RadialGrid>, eps: f64) -> Result<RadialField, InequalityError> {
    if grid.r_max() < 2.0 {
        return Err(InequalityError::GridTooSmall { r_max: grid.r_max() });
    }
    let u = aubin_talenti_profile(grid, eps)?;
    let values: Vec<Complex64> = grid
        .nodes()
        .iter()
        .zip(u.values())
        .map(|(&r, z)| z * bubble_cutoff(r))
        .collect();
    Ok(RadialField::from_values(grid, values).unwrap())
}

/// Numerical Sobolev-constant estimate with domain-truncation corrections.
#[derive(Debug, Clone)]
pub struct SobolevEstimate {
    pub n_dim: u32,
    /// 𝒮 from the Rayleigh quotient ‖ΔU_ε‖₂²/‖U_ε‖²_{4*}.
    pub constant: f64,
    /// 𝒮 recovered from ‖U_ε‖_{4*}^{4*} = 𝒮^{N/4}.
    pub constant_from_norm: f64,
    pub eps: f64,
    pub domain_radius: f64,
    /// Relative disagreement of the two routes.
    pub consistency_rel: f64,
}

#[derive(Debug, Clone)]
pub struct SobolevOptions {
    pub eps: f64,
    pub nodes: usize,
    /// Domain radius in units of ε.
    pub radius_over_eps: f64,
}

impl Default for SobolevOptions {
    fn default() -> Self {
        Self {
            eps: 1.0,
            nodes: 4096,
            radius_over_eps: 200.0,
        }
    }
}

/// Estimate 𝒮 from the extremal profile on a large truncated domain,
/// with analytic power-law tail corrections for both integrals.
pub fn estimate_sobolev_constant(
    n_dim: u32,
    opts: &SobolevOptions,
) -> Result<SobolevEstimate, InequalityError> {
    let nd = n_dim as f64;
    let eps = opts.eps;
    if !(eps > 0.0) {
        return Err(InequalityError::BadEpsilon { eps });
    }
    let r_max = opts.radius_over_eps * eps;
    let grid = RadialGrid::build(n_dim, r_max, opts.nodes).expect("valid grid");
    let u = aubin_talenti_profile(&grid, eps)?;
    let lap_u = aubin_talenti_laplacian(&grid, eps)?;

    let omega = grid.sphere_area();
    let r_const = bubble_normalization(n_dim);
    let four_star = 2.0 * nd / (nd - 4.0);

    // ∫_{r>R} |U|^{4*} dV ≈ ω R_c^{4*} ε^N R^{−N} / N
    let crit_tail = omega * r_const.powf(four_star) * eps.powf(nd) * r_max.powf(-nd) / nd;
    // ∫_{r>R} |ΔU|² dV ≈ ω R_c² ε^{N−4} (N−4)³ R^{−(N−4)}
    let kin_tail = omega
        * r_const
        * r_const
        * eps.powf(nd - 4.0)
        * (nd - 4.0).powi(3)
        * r_max.powf(4.0 - nd);

    let kin = grid.integral_abs_pow(lap_u.values(), 2.0).unwrap() + kin_tail;
    let crit = grid.integral_abs_pow(u.values(), four_star).unwrap() + crit_tail;

    let s_quotient = kin / crit.powf(2.0 / four_star);
    let s_norm = crit.powf(4.0 / nd);
    let rel = (s_quotient - s_norm).abs() / s_norm;
    if rel > 2e-2 {
        return Err(InequalityError::Inconsistent { rel });
    }
    Ok(SobolevEstimate {
        n_dim,
        constant: s_quotient,
        constant_from_norm: s_norm,
        eps,
        domain_radius: r_max,
        consistency_rel: rel,
    })
}

/// Per-ε norms of the bubble family.
#[derive(Debug, Clone)]
pub struct BubbleFamily {
    pub n_dim: u32,
    pub q: f64,
    pub eps: Vec<f64>,
    /// ‖Δu_ε‖₂²
    pub kinetic: Vec<f64>,
    /// ‖u_ε‖_{4*}^{4*}
    pub critical_norm: Vec<f64>,
    /// ‖u_ε‖_q^q
    pub lq_norm: Vec<f64>,
    /// ‖u_ε‖₂²
    pub mass: Vec<f64>,
    /// R = [(N−4)N(N²−4)]^{(N−4)/8}
    pub r_const: f64,
}

/// One fitted power law: slope of log(quantity) against log ε.
#[derive(Debug, Clone)]
pub struct AsymptoticFit {
    pub name: String,
    pub eps_lo: f64,
    pub eps_hi: f64,
    pub slope: f64,
    pub expected: f64,
    pub rel_deviation: f64,
    pub log_corrected: bool,
}

fn fit_loglog(eps: &[f64], ys: &[f64], name: &str, expected: f64, log_corrected: bool) -> AsymptoticFit {
    let xs: Vec<f64> = eps.iter().map(|e| e.ln()).collect();
    let ln_ys: Vec<f64> = ys.iter().map(|y| y.abs().max(1e-300).ln()).collect();
    let (slope, _) = line_fit(&xs, &ln_ys);
    AsymptoticFit {
        name: String::from(name),
        eps_lo: eps.iter().cloned().fold(f64::INFINITY, f64::min),
        eps_hi: eps.iter().cloned().fold(0.0, f64::max),
        slope,
        expected,
        rel_deviation: (slope - expected).abs() / expected.abs().max(1e-300),
        log_corrected,
    }
}

/// Expected ‖u_ε‖_q^q exponent from the small-ε expansion.
pub fn expected_lq_slope(n_dim: u32, q: f64) -> (f64, bool) {
    let nd = n_dim as f64;
    let q_split = nd / (nd - 4.0);
    if (q - q_split).abs() < 1e-12 {
        (nd / 2.0, true)
    } else if q > q_split {
        (nd - (nd - 4.0) * q / 2.0, false)
    } else {
        ((nd - 4.0) * q / 2.0, false)
    }
}

/// Expected ‖u_ε‖₂² exponent.
pub fn expected_mass_slope(n_dim: u32) -> (f64, bool) {
    if n_dim > 8 {
        (4.0, false)
    } else if n_dim == 8 {
        (4.0, true)
    } else {
        (n_dim as f64 - 4.0, false)
    }
}

#[derive(Debug, Clone)]
pub struct AsymptoticsOptions {
    pub nodes: usize,
    pub r_max: f64,
}

impl Default for AsymptoticsOptions {
    fn default() -> Self {
        Self {
            nodes: 16384,
            r_max: 2.5,
        }
    }
}

/// Evaluate the bubble family and fit the expansion exponents.
pub fn appendix_asymptotics(
    n_dim: u32,
    q: f64,
    eps_list: &[f64],
    opts: &AsymptoticsOptions,
) -> Result<(BubbleFamily, Vec<AsymptoticFit>), InequalityError> {
    if eps_list.len() < 4 {
        return Err(InequalityError::BadEpsilonList);
    }
    let lo = eps_list.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = eps_list.iter().cloned().fold(0.0_f64, f64::max);
    if !(lo > 0.0) || hi / lo < 10.0 * (1.0 - 1e-9) {
        return Err(InequalityError::BadEpsilonList);
    }
    let grid = RadialGrid::build(n_dim, opts.r_max, opts.nodes).expect("valid grid");
    if grid.r_max() < 2.0 {
        return Err(InequalityError::GridTooSmall { r_max: grid.r_max() });
    }
    let op = RadialLaplacian::new(&grid);
    let nd = n_dim as f64;
    let four_star = 2.0 * nd / (nd - 4.0);

    let mut fam = BubbleFamily {
        n_dim,
        q,
        eps: Vec::new(),
        kinetic: Vec::new(),
        critical_norm: Vec::new(),
        lq_norm: Vec::new(),
        mass: Vec::new(),
        r_const: bubble_normalization(n_dim),
    };
    for &eps in eps_list {
        let u = bubble(&grid, eps)?;
        fam.eps.push(eps);
        fam.kinetic.push(op.kinetic(&u));
        fam.critical_norm
            .push(grid.integral_abs_pow(u.values(), four_star).unwrap());
        fam.lq_norm.push(grid.integral_abs_pow(u.values(), q).unwrap());
        fam.mass.push(u.mass());
    }

    let level = sobolev_critical_level(n_dim);
    let kin_defect: Vec<f64> = fam.kinetic.iter().map(|a| a - level).collect();
    let crit_defect: Vec<f64> = fam.critical_norm.iter().map(|d| level - d).collect();
    let (lq_exp, lq_log) = expected_lq_slope(n_dim, q);
    let (m_exp, m_log) = expected_mass_slope(n_dim);

    let fits = alloc::vec![
        fit_loglog(&fam.eps, &kin_defect, "kinetic_defect", nd - 4.0, false),
        fit_loglog(&fam.eps, &crit_defect, "critical_norm_defect", nd, false),
        fit_loglog(&fam.eps, &fam.lq_norm, "lq_norm", lq_exp, lq_log),
        fit_loglog(&fam.eps, &fam.mass, "mass", m_exp, m_log),
    ];
    Ok((fam, fits))
}

/// Strict level check m < (2/N)·𝒮^{N/4}; the margin is positive iff true.
pub fn critical_upper_bound(m: f64, s: f64, n_dim: u32) -> (bool, f64) {
    let nd = n_dim as f64;
    let bound = 2.0 / nd * s.powf(nd / 4.0);
    (m < bound, bound - m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::SplitMix64;

    #[test]
    fn bubble_normalization_n5() {
        // [(N−4)N(N²−4)]^{(N−4)/8} = 105^{1/8}
        let r = bubble_normalization(5);
        assert!((r - 105.0_f64.powf(0.125)).abs() < 1e-14);
        assert!((r - 1.789).abs() < 1e-3);
    }

    #[test]
    fn profile_peak_and_tail() {
        let grid = RadialGrid::build(5, 10.0, 512).unwrap();
        let eps = 0.3;
        let u = aubin_talenti_profile(&grid, eps).unwrap();
        let peak = bubble_normalization(5) * eps.powf(-0.5);
        assert!((u.values()[0].re - peak).abs() < 1e-12 * peak);
        assert!(aubin_talenti_profile(&grid, 0.0).is_err());
        assert!(aubin_talenti_profile(&grid, -1.0).is_err());
    }

    #[test]
    fn bubble_cutoff_window() {
        let grid = RadialGrid::build(5, 4.0, 1024).unwrap();
        let eps = 0.2;
        let u = aubin_talenti_profile(&grid, eps).unwrap();
        let ub = bubble(&grid, eps).unwrap();
        for (i, &r) in grid.nodes().iter().enumerate() {
            let (v, w) = (ub.values()[i].re, u.values()[i].re);
            if r <= 1.0 {
                assert_eq!(v, w, "r = {r}");
            } else if r >= 2.0 {
                assert_eq!(v, 0.0, "r = {r}");
            }
            assert!(v >= 0.0 && v <= w + 1e-15, "sandwich violated at r = {r}");
        }
        let small = RadialGrid::build(5, 1.5, 64).unwrap();
        assert!(matches!(
            bubble(&small, eps),
            Err(InequalityError::GridTooSmall { .. })
        ));
    }

    #[test]
    fn bubble_sandwich_in_every_lp_norm() {
        let grid = RadialGrid::build(5, 4.0, 2048).unwrap();
        let u = aubin_talenti_profile(&grid, 0.15).unwrap();
        let ub = bubble(&grid, 0.15).unwrap();
        for &s in &[2.0, 3.6, 6.0, 10.0] {
            let a = grid.lp_norm(ub.values(), s).unwrap();
            let b = grid.lp_norm(u.values(), s).unwrap();
            assert!(a <= b * (1.0 + 1e-14), "s = {s}");
        }
    }

    #[test]
    fn sobolev_two_routes_and_exact_oracle() {
        let est = estimate_sobolev_constant(5, &SobolevOptions::default()).unwrap();
        assert!(est.consistency_rel < 1e-2, "routes differ {:e}", est.consistency_rel);
        // independent Beta-integral oracle
        let exact = sobolev_constant_exact(5);
        assert!(
            ((est.constant - exact) / exact).abs() < 1e-2,
            "estimate {} vs oracle {exact}",
            est.constant
        );
        // ε-independence of the critical norm is built into the routes;
        // check it explicitly at two ε
        let est2 = estimate_sobolev_constant(
            5,
            &SobolevOptions {
                eps: 0.5,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(((est2.constant - est.constant) / est.constant).abs() < 1e-6);
    }

    #[test]
    fn sobolev_quotient_dilation_invariant() {
        // γ_{4*} = 1 makes ‖Δu‖²/‖u‖²_{4*} scale-free under the fiber map
        let grid = RadialGrid::build(5, 30.0, 16384).unwrap();
        let op = RadialLaplacian::new(&grid);
        let u = RadialField::from_fn_real(&grid, |r| (-r * r).exp());
        let quot = |v: &RadialField| {
            op.kinetic(v) / grid.lp_norm(v.values(), 10.0).unwrap().powi(2)
        };
        let ut = crate::interp::fiber_resample(&u, 3.0).unwrap();
        let rel = (quot(&ut) - quot(&u)).abs() / quot(&u);
        assert!(rel < 1e-6, "quotient drift {rel:e}");
    }

    #[test]
    fn sobolev_random_field_audit() {
        let est = estimate_sobolev_constant(5, &SobolevOptions::default()).unwrap();
        let grid = RadialGrid::build(5, 20.0, 1024).unwrap();
        let op = RadialLaplacian::new(&grid);
        let mut rng = SplitMix64::new(910);
        for _ in 0..500 {
            let u = RadialField::random_smooth(&grid, &mut rng);
            let a = op.kinetic(&u);
            let crit = grid.lp_norm(u.values(), 10.0).unwrap();
            assert!(
                est.constant * crit * crit <= a * (1.0 + 1e-3),
                "Sobolev inequality violated"
            );
        }
    }

    #[test]
    fn gn_estimate_subcritical() {
        let grid = RadialGrid::build(5, 20.0, 1024).unwrap();
        let op = RadialLaplacian::new(&grid);
        let est = estimate_gn_constant(&grid, &op, 4.0, &GnOptions::default()).unwrap();
        assert!(est.converged, "ascent did not converge");
        // history non-decreasing
        for w in est.history.windows(2) {
            assert!(w[1] >= w[0] * (1.0 - 1e-12));
        }
        // Gaussian lower-bound witness
        let gauss = RadialField::gaussian_with_mass(&grid, 1.0, 1.0);
        let w_gauss = gn_quotient(&grid, &op, &gauss, 4.0);
        assert!(w_gauss <= est.c_pow_r * (1.0 + 1e-9));
        // Monte-Carlo audit
        let mut rng = SplitMix64::new(17);
        for _ in 0..1000 {
            let u = RadialField::random_smooth(&grid, &mut rng);
            let w = gn_quotient(&grid, &op, &u, 4.0);
            assert!(w <= est.c_pow_r * (1.0 + 1e-3), "W = {w} vs {}", est.c_pow_r);
        }
        assert!(estimate_gn_constant(&grid, &op, 2.0, &GnOptions::default()).is_err());
        assert!(estimate_gn_constant(&grid, &op, 10.0, &GnOptions::default()).is_err());
    }

    #[test]
    fn gn_quotient_dilation_invariance() {
        let grid = RadialGrid::build(5, 30.0, 16384).unwrap();
        let op = RadialLaplacian::new(&grid);
        let u = RadialField::from_fn_real(&grid, |r| (-r * r).exp());
        let w0 = gn_quotient(&grid, &op, &u, 4.0);
        let ut = crate::interp::fiber_resample(&u, 3.0).unwrap();
        let w1 = gn_quotient(&grid, &op, &ut, 4.0);
        assert!(((w1 - w0) / w0).abs() < 1e-6, "drift {:e}", (w1 - w0) / w0);
    }

    #[test]
    fn threshold_formulas() {
        // c* strictly decreasing in μ
        let c1 = mass_critical_threshold(5, 0.5, 2.0);
        let c2 = mass_critical_threshold(5, 1.0, 2.0);
        let c3 = mass_critical_threshold(5, 2.0, 2.0);
        assert!(c1 > c2 && c2 > c3);
        // boundary: c = c* fails the strict check
        let c_star = mass_critical_threshold(5, 1.0, 2.0);
        assert!(!mass_critical_check(5, 1.0, c_star, 2.0));
        assert!(mass_critical_check(5, 1.0, 0.99 * c_star, 2.0));
        // N = 5 exponent: c* = [9/(5 μ C^q)]^{5/4}
        let expect = (9.0 / (5.0 * 1.0 * 2.0)).powf(1.25);
        assert!((c_star - expect).abs() < 1e-14 * expect);
    }

    #[test]
    fn threshold_consistency_with_fiber_root() {
        // On the GN maximizer at mass c, the fiber root exists exactly when
        // the strict threshold holds.
        let grid = RadialGrid::build(5, 20.0, 512).unwrap();
        let op = RadialLaplacian::new(&grid);
        let est = estimate_gn_constant(&grid, &op, 3.6, &GnOptions::default()).unwrap();
        let c = 1.0;
        let phi = est.maximizer_with_mass(c);
        for (mu, expect_root) in [(1e-3, true), (1e3, false)] {
            let params = crate::params::ProblemParams::new(5, mu, 3.6, 6.0, c).unwrap();
            let rep = crate::functionals::report(&params, &op, &phi);
            let root = crate::functionals::find_t_u(rep.kinetic, rep.lq, rep.lp, &params);
            let below = mass_critical_check(5, mu, c, est.c_pow_r);
            assert_eq!(below, expect_root, "mu = {mu}");
            assert_eq!(root.is_ok(), expect_root, "mu = {mu}: {root:?}");
        }
    }

    #[test]
    fn critical_upper_bound_cases() {
        let (ok, margin) = critical_upper_bound(0.0, 100.0, 5);
        assert!(ok && margin > 0.0);
        let s: f64 = 100.0;
        let bound = 0.4 * s.powf(1.25);
        let (ok, margin) = critical_upper_bound(bound, s, 5);
        assert!(!ok && margin <= 0.0);
    }

    #[test]
    fn asymptotics_require_epsilon_decade() {
        let err = appendix_asymptotics(5, 6.0, &[0.1, 0.2], &AsymptoticsOptions::default());
        assert!(matches!(err, Err(InequalityError::BadEpsilonList)));
        let err = appendix_asymptotics(
            5,
            6.0,
            &[0.1, 0.12, 0.15, 0.2],
            &AsymptoticsOptions::default(),
        );
        assert!(matches!(err, Err(InequalityError::BadEpsilonList)));
    }
}
