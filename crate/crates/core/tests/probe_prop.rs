// Temporary: linear propagator fidelity checks.

use bnls_core::evolution::{nonlinear_phase, Evolution};
use bnls_core::grid::RadialGrid;
use bnls_core::ground_state::{solve, SolverOptions};
use bnls_core::ops::RadialLaplacian;
use bnls_core::params::ProblemParams;
use num_complex::Complex64;

#[test]
fn propagator_fidelity() {
    let params = ProblemParams::new(5, 1.0, 4.0, 6.0, 30.0).unwrap();
    let grid = RadialGrid::build(5, 12.0, 1280).unwrap();
    let gs = solve(&params, &grid, None, &SolverOptions::default()).unwrap();
    let engine = Evolution::new(&grid);
    let op = engine.operator();

    // kinetic must be exactly conserved by the linear substep
    let mut psi = gs.field.clone();
    let a0 = op.kinetic(&psi);
    engine.propagator().propagate(psi.values_mut(), 1e-4);
    let a1 = op.kinetic(&psi);
    println!("linear substep: A {a0:.10e} -> {a1:.10e} (rel {:.2e})", (a1 - a0).abs() / a0);

    // one Strang step vs the exact phase rotation e^{iω dt} u
    let dt = 1e-4;
    let mut s = gs.field.clone();
    nonlinear_phase(&params, s.values_mut(), 0.5 * dt);
    engine.propagator().propagate(s.values_mut(), dt);
    nonlinear_phase(&params, s.values_mut(), 0.5 * dt);
    let rot = Complex64::from_polar(1.0, gs.omega * dt);
    let mut worst = (0usize, 0.0f64);
    for i in 0..s.len() {
        let expect = gs.field.values()[i] * rot;
        let d = (s.values()[i] - expect).norm();
        if d > worst.1 {
            worst = (i, d);
        }
    }
    println!(
        "one strang step: worst dev {:.3e} at node {} (r={:.3}), peak {:.3e}",
        worst.1,
        worst.0,
        grid.nodes()[worst.0],
        gs.field.max_abs()
    );

    // eigen sanity at n=1024: residual of a few eigenpairs of S
    let (diag, off1, off2) = op.symmetric_bands();
    let eig = bnls_core::eigen::eigen_banded(&diag, &off1, &off2);
    let n = grid.len();
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
    let mut worst_res = 0.0f64;
    let mut worst_k = 0;
    for k in (0..n).step_by(37) {
        let q = &eig.vectors[k * n..(k + 1) * n];
        let sq = s_apply(q);
        let mut r = 0.0f64;
        for i in 0..n {
            r = r.max((sq[i] - eig.values[k] * q[i]).abs());
        }
        let rel = r / eig.values[k].abs().max(1.0);
        if rel > worst_res {
            worst_res = rel;
            worst_k = k;
        }
    }
    println!("eigen residual worst {worst_res:.3e} at k={worst_k}");
    println!("lambda range: {:.3e} .. {:.3e}", eig.values[0], eig.values[n - 1]);
}
