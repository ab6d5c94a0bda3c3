//! Weighted Bessel potential and difference norms on periodic FFT grids.
//!
//! Functions on R^d (d = 1, 2) are modelled on a torus `[−L/2, L/2)^d` sampled at `n`
//! points per axis. The Fourier convention is `f̂(ξ) = ∫ f(x) e^{−ix·ξ} dx`, so the
//! translation `f ↦ f(· + h)` has symbol `e^{ih·ξ}`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod difference;
pub mod error;
mod fft;
pub mod functions;
pub mod grid;
pub mod halfspace;
pub mod kernels;
pub mod littlewood_paley;
pub mod quad;
pub mod rademacher;
pub mod report;
pub mod symbols;
pub mod weights;

pub use error::{Error, Result};
pub use functions::{sample, FunctionDesc};
pub use grid::{forward, inverse, lp_norm, make_grid, GridSpec, SampledFunction, SpectralFunction, TargetSpace};
pub use rademacher::{rademacher_norm, square_function_norm, sup_partial, NormMode, RademacherEstimate, SignDraw, SupPartial};
pub use symbols::{apply_symbol, Symbol};
pub use weights::{ap_characteristic_estimate, cube_mass, embedding_condition, inclusion_condition, Cube, DyadicCube, MRange, Verdict, Weight};
pub use difference::{
    averaging, difference, difference_seminorm, full_difference_norm, kdelta_symbol, kernel_mean, level_plan, square_difference_norm,
    strichartz_norm, translate, Levels, MeanMode, SeminormRequest, TLevels,
};
pub use halfspace::{
    boundary_mass, boundary_profile, continuous_profile_constant, halfspace_kernel_mean, halfspace_restrict, halfspace_seminorm, halfspace_sign_part,
    multiplier_sweep, BoundaryProfile, HalfspaceExperiment, MultiplierSweep,
};
pub use kernels::{Kernel, SampledProfile};
pub use littlewood_paley::{bessel_norm, bessel_potential, lp_block, make_phi, randomized_lp_norm, triebel_norm, PhiSequence};
pub use report::{EstimatorKind, NormReport};
