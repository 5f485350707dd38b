//! V-complexity, compression-based complexity, the two-lane lattice gas
//! and the diffusing step profile.

// `!(a < b)` is used on purpose so that NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod compression;
pub mod curve;
pub mod diffusion;
pub mod error;
pub mod function;
pub mod lattice;
pub mod quadrature;
pub mod vcomplexity;

pub use compression::{
    discretize, estimate_eta_gamma, lz77_decode, lz77_encode, rle_complexity, rle_encode,
    uniform_step_error, window_ratio_experiment, DiscretizedTrace, GridSpec, Lz77Params,
    Lz77Tokens, RlePairs, Token,
};
pub use curve::{log_spaced, ComplexityCurve, Normalization};
pub use diffusion::{rle_curve, v_curve, DiffusionProfile, DiffusionSolution};
pub use error::{Error, Result};
pub use function::{FunctionKind, FunctionSpec, RealFunction};
pub use lattice::{
    apparent_complexity, coarse_grain, init_state, run_experiment, AutomatonState, CoarseProfile,
    LatticeRun, SimConfig,
};
pub use quadrature::{integrate, integrate_with_breaks, QuadratureConfig};
pub use vcomplexity::{
    asymptotic_grid, greedy_equidistribution, greedy_for_total_error, l1_distance,
    optimal_constant, v_complexity, ApproxReport, StepFunction,
};
