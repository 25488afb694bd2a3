//! Real-time parabolic evolution in tensor formats: the Cayley-transform
//! Laguerre series for `e^{-Ht} ψ₀`, an alternating least squares TT
//! linear solver, master-equation assembly on finite state boxes, and
//! global space-time (all-at-once) Crank–Nicolson / implicit-Euler solves.

mod cayley;
mod cme;
mod laguerre;
mod linsolve;
mod spacetime;

pub use cayley::{cayley_apply, cayley_series, concat_time_tensor, LaguerreSeries};
pub use cme::{
    cme_assemble, shift_matrix, BoundaryPolicy, Channel, Propensity, ReactionNetwork,
};
pub use laguerre::laguerre_eval;
pub use linsolve::{
    tt_linsolve, tt_linsolve_relaxed, tt_linsolve_with_guess, tt_residual, SolveOptions,
    SolveReport,
};
pub use spacetime::{
    build_space_time_system, cme_solve_global, quantize_state, slice_time_step, time_shift_qtt,
    timestep_scaling_probe, CmeOptions, CmeTrajectory, Scheme, SpaceTimeSystem, TimestepProbeRow,
    WindowSummary,
};
