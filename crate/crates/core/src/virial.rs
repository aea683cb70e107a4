//! Localized virial machinery and the standing-wave instability experiment.
//!
//! The cutoff φ is radial with φ(r) = r²/2 for r ≤ 1 and constant past its
//! taper; the rescaled profile is φ_R(r) = R²φ(r/R). The construction
//! drives φ″ from 1 down to −1 through a C⁵ join of width a, holds −1
//! until φ′ almost vanishes, and releases back to 0, so
//!
//!   1 − φ_R″ ≥ 0,  1 − φ_R′/r ≥ 0,  N − Δφ_R ≥ 0,  |φ_R″| ≤ 1
//!
//! hold identically (the first is 2T ≥ 0, the second integrates φ″ ≤ 1,
//! the third is their combination N − Δφ = (1−φ″) + (N−1)(1−φ′/r)). The
//! sup bounds sup|φ_R| ≤ R² and sup|φ_R′| ≤ R hold up to the C⁵-join
//! margin O(a): any profile with continuous φ″ must overshoot, because
//! φ″(R) = 1 forces φ′ > r just past R. The joins keep all six
//! derivatives bounded, which the error terms of the virial rate identity
//! require; orders j ≤ 2 are verified node by node.
//!
//! The localized virial of ψ is M_{φ_R}[ψ] = 2 Im ∫ ψ̄ φ_R′ ∂_r ψ dx, and
//! along the flow dM/dt = 8Q(ψ) + O(R^{−4} + R^{−2}‖Δψ‖₂ + …), which the
//! rate check verifies numerically at two cutoff scales. The instability
//! experiment follows the dilated standing wave ψ₀ = u_s (s > 1): it
//! checks membership E(ψ₀) < m, Q(ψ₀) < 0, evolves, asserts Q(ψ(t)) stays
//! below −a < 0, watches M decrease, and classifies the halt via the
//! blowup alternative, optionally repeating on a doubled grid.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::evolution::{
    blowup_alternative_flag, Evolution, EvolutionConfig, EvolutionTrace, EvolveError, HaltReason,
};
use crate::field::RadialField;
use crate::functionals::report;
use crate::grid::RadialGrid;
use crate::ground_state::{solve, GroundStateResult, SolveError, SolverOptions};
use crate::inequalities::GnEstimate;
use crate::interp::fiber_resample;
use crate::math::FloatExt;
use crate::ops::RadialLaplacian;
use crate::params::ProblemParams;

/// C⁵ taper width of the cutoff joins, in units of the cutoff scale.
const JOIN_WIDTH: f64 = 0.01;

#[derive(Debug, Clone, PartialEq)]
pub enum VirialError {
    /// The cutoff needs 10R ≤ r_max.
    DomainTooSmall { scale: f64, r_max: f64 },
    /// A verified inequality failed at some node (taper defect).
    ConstructionViolation { what: &'static str, worst: f64 },
    /// Rate check needs at least 3 recorded virial samples.
    TooFewSamples,
    /// Trace carries no virial column.
    NoVirial,
}

impl fmt::Display for VirialError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VirialError::DomainTooSmall { scale, r_max } => {
                write!(f, "cutoff scale {scale} needs 10R <= r_max (r_max = {r_max})")
            }
            VirialError::ConstructionViolation { what, worst } => {
                write!(f, "cutoff construction violated {what} by {worst:e}")
            }
            VirialError::TooFewSamples => write!(f, "need at least 3 virial samples"),
            VirialError::NoVirial => write!(f, "trace has no localized-virial column"),
        }
    }
}

/// Node-checked bounds of one constructed cutoff.
#[derive(Debug, Clone, Copy)]
pub struct CutoffVerification {
    /// max over nodes of φ_R″ − 1 (must be ≤ 0 up to rounding).
    pub d2_excess: f64,
    /// max over nodes of φ_R′/r − 1.
    pub slope_excess: f64,
    /// max over nodes of Δφ_R − N.
    pub laplacian_excess: f64,
    /// sup |φ_R| / R² (1 + O(join width)).
    pub sup_phi_ratio: f64,
    /// sup |φ_R′| / R.
    pub sup_dphi_ratio: f64,
    /// sup |φ_R″|.
    pub sup_d2phi: f64,
}

/// φ_R with its first two derivatives and radial Laplacian, sampled on the
/// evolution grid, plus the verification report.
#[derive(Debug, Clone)]
pub struct CutoffProfile {
    grid: Arc<RadialGrid>,
    pub scale: f64,
    pub phi: Vec<f64>,
    pub dphi: Vec<f64>,
    pub d2phi: Vec<f64>,
    pub lap_phi: Vec<f64>,
    pub verification: CutoffVerification,
}

// base profile in the scale-free variable s = r/R
fn taper(x: f64) -> f64 {
    crate::math::smoothstep11(x)
}

// ∫₀ˣ taper and ∫₀ˣ∫₀ʸ taper from the polynomial coefficients
fn taper_int1_raw(x: f64) -> f64 {
    const C: [f64; 6] = [462.0, -1980.0, 3465.0, -3080.0, 1386.0, -252.0];
    let x = x.clamp(0.0, 1.0);
    let mut acc = 0.0;
    for (j, c) in C.iter().enumerate() {
        let k = (6 + j) as i32;
        acc += c / (k as f64 + 1.0) * x.powi(k + 1);
    }
    acc
}

fn taper_int2(x: f64) -> f64 {
    const C: [f64; 6] = [462.0, -1980.0, 3465.0, -3080.0, 1386.0, -252.0];
    let x = x.clamp(0.0, 1.0);
    let mut acc = 0.0;
    for (j, c) in C.iter().enumerate() {
        let k = (6 + j) as i32;
        acc += c / ((k as f64 + 1.0) * (k as f64 + 2.0)) * x.powi(k + 2);
    }
    acc
}

/// (φ, φ′, φ″) of the base profile at s ≥ 0.
pub fn base_profile(s: f64) -> (f64, f64, f64) {
    let a = JOIN_WIDTH;
    let s_b = 2.0 + 0.5 * a; // start of the release join; φ′(s_b) = a/2
    if s <= 1.0 {
        return (0.5 * s * s, s, 1.0);
    }
    // φ(1) = 1/2 and the A-join integrals
    let phi_a_end = 0.5 + a + 0.5 * a * a - 2.0 * a * a * taper_int2(1.0);
    if s <= 1.0 + a {
        let x = (s - 1.0) / a;
        let d2 = 1.0 - 2.0 * taper(x);
        let d1 = 1.0 + (s - 1.0) - 2.0 * a * taper_int1_raw(x);
        let ph = 0.5 + (s - 1.0) + 0.5 * (s - 1.0) * (s - 1.0) - 2.0 * a * a * taper_int2(x);
        return (ph, d1, d2);
    }
    if s <= s_b {
        let y = s - 1.0 - a;
        return (phi_a_end + y - 0.5 * y * y, 1.0 - y, -1.0);
    }
    let yb = s_b - 1.0 - a;
    let phi_b_end = phi_a_end + yb - 0.5 * yb * yb;
    if s <= s_b + a {
        let x = (s - s_b) / a;
        let y = s - s_b;
        let d2 = -1.0 + taper(x);
        let d1 = 0.5 * a - y + a * taper_int1_raw(x);
        let ph = phi_b_end + 0.5 * a * y - 0.5 * y * y + a * a * taper_int2(x);
        return (ph, d1, d2);
    }
    let phi_end = phi_b_end + 0.5 * a * a - 0.5 * a * a + a * a * taper_int2(1.0);
    (phi_end, 0.0, 0.0)
}

/// Construct and verify φ_R on the grid.
pub fn build_cutoff(grid: &Arc<RadialGrid>, scale: f64) -> Result<CutoffProfile, VirialError> {
    if 10.0 * scale > grid.r_max() {
        return Err(VirialError::DomainTooSmall {
            scale,
            r_max: grid.r_max(),
        });
    }
    let nd = grid.n_dim() as f64;
    let n = grid.len();
    let mut phi = Vec::with_capacity(n);
    let mut dphi = Vec::with_capacity(n);
    let mut d2phi = Vec::with_capacity(n);
    let mut lap = Vec::with_capacity(n);
    for &r in grid.nodes() {
        let s = r / scale;
        let (p, d1, d2) = base_profile(s);
        phi.push(scale * scale * p);
        dphi.push(scale * d1);
        d2phi.push(d2);
        // Δφ_R = φ″ + (N−1)φ′/r; at the origin φ′/r → φ″(0) = 1
        let slope_over_r = if r == 0.0 { 1.0 } else { scale * d1 / r };
        lap.push(d2 + (nd - 1.0) * slope_over_r);
    }

    let mut d2_excess = f64::NEG_INFINITY;
    let mut slope_excess = f64::NEG_INFINITY;
    let mut lap_excess = f64::NEG_INFINITY;
    let mut sup_phi = 0.0_f64;
    let mut sup_dphi = 0.0_f64;
    let mut sup_d2 = 0.0_f64;
    for i in 0..n {
        let r = grid.nodes()[i];
        d2_excess = d2_excess.max(d2phi[i] - 1.0);
        let ratio = if r == 0.0 { d2phi[i] } else { dphi[i] / r };
        slope_excess = slope_excess.max(ratio - 1.0);
        lap_excess = lap_excess.max(lap[i] - nd);
        sup_phi = sup_phi.max(phi[i].abs());
        sup_dphi = sup_dphi.max(dphi[i].abs());
        sup_d2 = sup_d2.max(d2phi[i].abs());
    }
    let verification = CutoffVerification {
        d2_excess,
        slope_excess,
        laplacian_excess: lap_excess,
        sup_phi_ratio: sup_phi / (scale * scale),
        sup_dphi_ratio: sup_dphi / scale,
        sup_d2phi: sup_d2,
    };
    const TOL: f64 = 1e-10;
    if d2_excess > TOL {
        return Err(VirialError::ConstructionViolation {
            what: "phi'' <= 1",
            worst: d2_excess,
        });
    }
    if slope_excess > TOL {
        return Err(VirialError::ConstructionViolation {
            what: "phi'/r <= 1",
            worst: slope_excess,
        });
    }
    if lap_excess > TOL {
        return Err(VirialError::ConstructionViolation {
            what: "lap(phi) <= N",
            worst: lap_excess,
        });
    }
    Ok(CutoffProfile {
        grid: grid.clone(),
        scale,
        phi,
        dphi,
        d2phi,
        lap_phi: lap,
        verification,
    })
}

impl CutoffProfile {
    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }
}

/// M_{φ_R}[ψ] = 2 Im ∫ ψ̄ φ_R′ ∂_r ψ dx.
pub fn localized_virial(cutoff: &CutoffProfile, psi: &RadialField) -> f64 {
    let grid = &cutoff.grid;
    debug_assert!(grid.same_layout(psi.grid()));
    let n = psi.len();
    let mut dpsi = vec![Complex64::new(0.0, 0.0); n];
    RadialLaplacian::radial_derivative(grid, psi.values(), &mut dpsi);
    let mut acc = 0.0;
    for i in 0..n {
        let cross = (psi.values()[i].conj() * dpsi[i]).im;
        acc += grid.weights()[i] * cutoff.dphi[i] * cross;
    }
    2.0 * acc
}

/// One row of the virial-rate comparison: centered-difference dM/dt
/// against 8Q at a recorded time.
#[derive(Debug, Clone, Copy)]
pub struct VirialRateRow {
    pub t: f64,
    pub dm_dt: f64,
    pub eight_q: f64,
    pub residual: f64,
}

/// Compare the numerical dM/dt with 8Q(ψ(t)) along a recorded trace.
pub fn virial_rate_check(trace: &EvolutionTrace) -> Result<Vec<VirialRateRow>, VirialError> {
    let m = trace.virial.as_ref().ok_or(VirialError::NoVirial)?;
    if m.len() < 3 {
        return Err(VirialError::TooFewSamples);
    }
    let mut rows = Vec::with_capacity(m.len() - 2);
    for k in 1..m.len() - 1 {
        let dt = trace.times[k + 1] - trace.times[k - 1];
        if !(dt > 0.0) {
            continue;
        }
        let dm = (m[k + 1] - m[k - 1]) / dt;
        let q8 = 8.0 * trace.pohozaev[k];
        rows.push(VirialRateRow {
            t: trace.times[k],
            dm_dt: dm,
            eight_q: q8,
            residual: dm - q8,
        });
    }
    Ok(rows)
}

/// Fraction of recorded intervals along which M decreased.
pub fn virial_decreasing_fraction(trace: &EvolutionTrace) -> Option<f64> {
    let m = trace.virial.as_ref()?;
    if m.len() < 2 {
        return None;
    }
    let total = m.len() - 1;
    let dec = m.windows(2).filter(|w| w[1] < w[0]).count();
    Some(dec as f64 / total as f64)
}

#[derive(Debug)]
pub enum InstabilityError {
    /// ψ₀ = u_s failed the set membership E < m, Q < 0 (s too close to 1
    /// for the grid tolerance).
    MembershipFailed { energy_gap: f64, q0: f64 },
    /// The supplied ground state has converged = false.
    GroundStateNotConverged,
    BadDilation { s: f64 },
    Virial(VirialError),
    Evolve(EvolveError),
    Solve(SolveError),
}

impl fmt::Display for InstabilityError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InstabilityError::MembershipFailed { energy_gap, q0 } => write!(
                f,
                "membership failed: E(psi0) - m = {energy_gap:e}, Q(psi0) = {q0:e}"
            ),
            InstabilityError::GroundStateNotConverged => {
                write!(f, "instability experiment needs a converged ground state")
            }
            InstabilityError::BadDilation { s } => write!(f, "dilation s = {s} must be > 1"),
            InstabilityError::Virial(e) => write!(f, "{e}"),
            InstabilityError::Evolve(e) => write!(f, "{e}"),
            InstabilityError::Solve(e) => write!(f, "{e}"),
        }
    }
}

impl From<VirialError> for InstabilityError {
    fn from(e: VirialError) -> Self {
        InstabilityError::Virial(e)
    }
}
impl From<EvolveError> for InstabilityError {
    fn from(e: EvolveError) -> Self {
        InstabilityError::Evolve(e)
    }
}

#[derive(Debug, Clone)]
pub struct InstabilityOptions {
    /// Fiber dilation of the initial datum; s > 1.
    pub s: f64,
    /// Cutoff scale R (10R must fit in the domain).
    pub cutoff_scale: f64,
    pub config: EvolutionConfig,
}

/// Outcome of one instability run.
#[derive(Debug, Clone)]
pub struct InstabilityReport {
    pub s: f64,
    /// Ground-state level m.
    pub level: f64,
    /// E(ψ₀) − m < 0 (the proof's −a at time zero).
    pub energy_gap: f64,
    /// Q(ψ₀) < 0.
    pub q_initial: f64,
    /// Empirical gap a = −sup over recorded t of Q(ψ(t)).
    pub empirical_gap: f64,
    pub q_negative_throughout: bool,
    /// Fraction of recorded intervals with M decreasing.
    pub m_decreasing_fraction: f64,
    pub halt: HaltReason,
    /// First recorded time with kinetic above Θ·initial, if flagged.
    pub flag_time: Option<f64>,
    /// ‖ψ₀ − u‖_{H²}: the perturbation size realized by s.
    pub h2_distance: f64,
    pub trace: EvolutionTrace,
}

/// Run the dilated standing-wave experiment on one grid.
pub fn instability_experiment(
    params: &ProblemParams,
    ground: &GroundStateResult,
    engine: &Evolution,
    opts: &InstabilityOptions,
) -> Result<InstabilityReport, InstabilityError> {
    if !ground.converged {
        return Err(InstabilityError::GroundStateNotConverged);
    }
    if !(opts.s > 1.0) {
        return Err(InstabilityError::BadDilation { s: opts.s });
    }
    let cutoff = build_cutoff(engine.grid(), opts.cutoff_scale)?;
    let u = &ground.field;
    let psi0 = fiber_resample(u, opts.s)
        .map_err(|_| InstabilityError::BadDilation { s: opts.s })?;

    let op = engine.operator();
    let rep0 = report(params, op, &psi0);
    let energy_gap = rep0.energy - ground.energy;
    if !(energy_gap < 0.0 && rep0.pohozaev < 0.0) {
        return Err(InstabilityError::MembershipFailed {
            energy_gap,
            q0: rep0.pohozaev,
        });
    }

    // ‖ψ₀ − u‖_{H²}
    let grid = engine.grid();
    let mut diff = psi0.clone();
    diff.axpy(Complex64::new(-1.0, 0.0), u);
    let h2_distance = (op.kinetic(&diff) + diff.mass()).sqrt();

    let trace = engine.evolve(params, &psi0, &opts.config, Some(&cutoff))?;
    let halt = blowup_alternative_flag(&trace, &opts.config);
    let flag_time = trace
        .kinetic
        .iter()
        .zip(&trace.times)
        .find(|(&k, _)| k > opts.config.theta * trace.kinetic[0])
        .map(|(_, &t)| t);
    let sup_q = trace.pohozaev.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let m_frac = virial_decreasing_fraction(&trace).unwrap_or(0.0);
    let _ = grid;
    Ok(InstabilityReport {
        s: opts.s,
        level: ground.energy,
        energy_gap,
        q_initial: rep0.pohozaev,
        empirical_gap: -sup_q,
        q_negative_throughout: sup_q < 0.0,
        m_decreasing_fraction: m_frac,
        halt,
        flag_time,
        h2_distance,
        trace,
    })
}

/// The full experiment with a grid-doubling consistency check: solve and
/// run at n nodes, then at 2n−1 nodes (halved spacing), and compare flags.
pub struct DoubledInstability {
    pub base: InstabilityReport,
    pub doubled_halt: HaltReason,
    pub consistent: bool,
}

pub fn instability_with_grid_doubling(
    params: &ProblemParams,
    grid: &Arc<RadialGrid>,
    gn: Option<&GnEstimate>,
    solver_opts: &SolverOptions,
    opts: &InstabilityOptions,
) -> Result<DoubledInstability, InstabilityError> {
    let ground = solve(params, grid, gn, solver_opts).map_err(InstabilityError::Solve)?;
    let engine = Evolution::new(grid);
    let base = instability_experiment(params, &ground, &engine, opts)?;

    let fine = RadialGrid::build(grid.n_dim(), grid.r_max(), 2 * grid.len() - 1)
        .expect("doubled grid is valid");
    let ground2 = solve(params, &fine, gn, solver_opts).map_err(InstabilityError::Solve)?;
    let engine2 = Evolution::new(&fine);
    let report2 = instability_experiment(params, &ground2, &engine2, opts)?;
    let consistent = report2.halt == base.halt;
    Ok(DoubledInstability {
        base,
        doubled_halt: report2.halt,
        consistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functionals::fiber_pohozaev;
    use crate::math::SplitMix64;

    #[test]
    fn cutoff_inequalities_hold_at_every_node() {
        let grid = RadialGrid::build(5, 20.0, 1024).unwrap();
        for scale in [1.0, 2.0] {
            let cut = build_cutoff(&grid, scale).unwrap();
            let v = &cut.verification;
            assert!(v.d2_excess <= 1e-10, "d2 excess {:e}", v.d2_excess);
            assert!(v.slope_excess <= 1e-10);
            assert!(v.laplacian_excess <= 1e-10);
            // sup bounds up to the C⁵-join margin
            assert!(v.sup_phi_ratio <= 1.0 + 2.0 * JOIN_WIDTH, "{}", v.sup_phi_ratio);
            assert!(v.sup_dphi_ratio <= 1.0 + JOIN_WIDTH, "{}", v.sup_dphi_ratio);
            assert!(v.sup_d2phi <= 1.0 + 1e-12);
            // φ_R′(r) = r exactly for r ≤ R, zero from 10R on
            for (i, &r) in grid.nodes().iter().enumerate() {
                if r <= scale {
                    assert!((cut.dphi[i] - r).abs() <= 1e-14 * scale);
                }
                if r >= 10.0 * scale {
                    assert_eq!(cut.dphi[i], 0.0);
                    assert_eq!(cut.d2phi[i], 0.0);
                }
            }
            // φ_R = r²/2 on [0, R]
            let idx = grid.nodes().iter().position(|&r| r > 0.5 * scale).unwrap();
            let r = grid.nodes()[idx];
            assert!((cut.phi[idx] - 0.5 * r * r).abs() < 1e-13 * scale * scale);
            // Δφ_R(0) = N
            assert!((cut.lap_phi[0] - 5.0).abs() < 1e-12);
        }
        // domain check
        assert!(matches!(
            build_cutoff(&grid, 3.0),
            Err(VirialError::DomainTooSmall { .. })
        ));
    }

    #[test]
    fn virial_vanishes_for_real_and_globally_phased_fields() {
        let grid = RadialGrid::build(5, 20.0, 512).unwrap();
        let cut = build_cutoff(&grid, 2.0).unwrap();
        let u = RadialField::from_fn_real(&grid, |r| (1.0 + r) * (-r * r).exp());
        assert_eq!(localized_virial(&cut, &u), 0.0);
        let phase = Complex64::from_polar(1.0, 0.9);
        let v = RadialField::from_values(
            &grid,
            u.values().iter().map(|z| z * phase).collect(),
        )
        .unwrap();
        let m = localized_virial(&cut, &v);
        assert!(m.abs() < 1e-14, "global phase gave M = {m:e}");
    }

    #[test]
    fn virial_magnitude_interpolation_bound() {
        // |M| ≲ R ‖ψ‖₂^{3/2} ‖Δψ‖₂^{1/2} via |M| ≤ 2R‖ψ‖‖∂_rψ‖ and
        // ‖∂_rψ‖² ≤ ‖ψ‖‖Δψ‖
        let grid = RadialGrid::build(5, 20.0, 512).unwrap();
        let op = RadialLaplacian::new(&grid);
        let cut = build_cutoff(&grid, 2.0).unwrap();
        let mut rng = SplitMix64::new(40);
        for _ in 0..20 {
            let re = RadialField::random_smooth(&grid, &mut rng);
            let im = RadialField::random_smooth(&grid, &mut rng);
            let psi = RadialField::from_values(
                &grid,
                re.values()
                    .iter()
                    .zip(im.values())
                    .map(|(a, b)| Complex64::new(a.re, b.re))
                    .collect(),
            )
            .unwrap();
            let m = localized_virial(&cut, &psi).abs();
            let mass = psi.mass();
            let kin = op.kinetic(&psi);
            let bound = 2.4 * cut.scale * mass.powf(0.75) * kin.powf(0.25);
            assert!(m <= bound, "M = {m:e}, bound = {bound:e}");
        }
    }

    #[test]
    fn dilation_sign_dichotomy_on_ground_state() {
        let params = ProblemParams::new(5, 1.0, 4.0, 6.0, 30.0).unwrap();
        let grid = RadialGrid::build(5, 14.0, 2048).unwrap();
        let gs = solve(&params, &grid, None, &SolverOptions::default()).unwrap();
        let op = RadialLaplacian::new(&grid);
        let rep = report(&params, &op, &gs.field);
        // closed-form fiber Pohozaev: negative past s = 1, positive below
        for s in [1.05, 1.2, 2.0] {
            let q = fiber_pohozaev(rep.kinetic, rep.lq, rep.lp, &params, s).unwrap();
            assert!(q < 0.0, "s = {s}: Q = {q:e}");
        }
        for s in [0.5, 0.8, 0.95] {
            let q = fiber_pohozaev(rep.kinetic, rep.lq, rep.lp, &params, s).unwrap();
            assert!(q > 0.0, "s = {s}: Q = {q:e}");
        }
        // resampled-field route agrees in sign
        let us = fiber_resample(&gs.field, 1.05).unwrap();
        let rep_s = report(&params, &op, &us);
        assert!(rep_s.pohozaev < 0.0);
        assert!(rep_s.energy < gs.energy);
    }

    #[test]
    fn membership_and_h2_closeness() {
        let params = ProblemParams::new(5, 1.0, 4.0, 6.0, 30.0).unwrap();
        let grid = RadialGrid::build(5, 14.0, 2048).unwrap();
        let gs = solve(&params, &grid, None, &SolverOptions::default()).unwrap();
        let op = RadialLaplacian::new(&grid);
        // ‖u_s − u‖_{H²} decreases monotonically as s → 1⁺
        let mut dists = Vec::new();
        for s in [1.2, 1.1, 1.05] {
            let us = fiber_resample(&gs.field, s).unwrap();
            let mut diff = us.clone();
            diff.axpy(Complex64::new(-1.0, 0.0), &gs.field);
            dists.push((op.kinetic(&diff) + diff.mass()).sqrt());
        }
        assert!(dists[0] > dists[1] && dists[1] > dists[2], "{dists:?}");
    }
}
