//! Radial numerical laboratory for the biharmonic nonlinear Schrödinger
//! equation
//!
//!   i ∂_t ψ − Δ²ψ + μ|ψ|^{q−2}ψ + |ψ|^{p−2}ψ = 0,   x ∈ ℝ^N,  N ≥ 5,
//!
//! restricted to the radial class. The crate provides:
//!
//! - [`grid`] / [`field`]: uniform radial grids with volume quadrature and
//!   complex radial profiles,
//! - [`ops`]: a discretely self-adjoint radial Laplacian/bilaplacian,
//! - [`interp`]: the mass-preserving fiber dilation u_t(x) = t^{N/4} u(√t x),
//! - [`functionals`]: energy, Pohozaev functional, fiber scans, the unique
//!   dilation t_u, Lagrange multiplier and reduced-functional gradient,
//! - [`inequalities`]: Gagliardo–Nirenberg and Sobolev constant estimation,
//!   bubble profiles and their small-ε asymptotics,
//! - [`ground_state`]: constrained minimization of the energy on the
//!   Pohozaev set of the mass sphere, mass sweeps and the mass-critical
//!   non-existence probe,
//! - [`evolution`]: Strang-split time integration with an exactly unitary
//!   spectral linear propagator and blowup-alternative halting,
//! - [`virial`]: localized virial machinery and the standing-wave
//!   instability experiment.
//!
//! The crate is `no_std` (with `alloc`); all floating-point special
//! functions go through `libm`. IO, file formats and the experiment runner
//! live in the companion CLI crate.

#![cfg_attr(not(test), no_std)]
// under `cargo test` the std float methods shadow the libm-backed trait,
// so its imports look unused there
#![cfg_attr(test, allow(unused_imports))]
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod banded;
pub mod eigen;
pub mod evolution;
pub mod field;
pub mod functionals;
pub mod grid;
pub mod ground_state;
pub mod inequalities;
pub mod interp;
pub mod math;
pub mod ops;
pub mod params;
pub mod virial;

pub use field::RadialField;
pub use grid::RadialGrid;
