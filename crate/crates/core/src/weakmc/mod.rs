//! Monte Carlo weak-error estimation.
//!
//! Trajectory `k` at step-size level `l` draws from the ChaCha8 stream
//! `(l << 40) | k` of the root seed (see [`stream_id`]), so every path is
//! reproducible on its own and results do not depend on the thread count.
//! Per-chunk statistics are merged in chunk order.

mod estimate;
mod fit;
mod rng;
mod sim;

pub use estimate::{
    estimate_weak_error, ErrorRow, FitRecord, McPlan, ReferenceMode, ReferenceValue,
    WeakErrorReport, FINE_GRID_DIVISOR, FINE_GRID_SAMPLE_FACTOR, SUMMARY_HEADER,
};
pub use fit::{fit_above_noise_floor, fit_order, FitOutcome, OrderFit, NOISE_FLOOR_FACTOR};
pub use rng::{
    draw_noise, standard_normal, stream_id, trajectory_rng, uniform_open, NoiseKind,
    REFERENCE_LEVEL,
};
pub use sim::{euler_step, simulate_path, simulate_terminal, terminal_moments, Method, PathPoint, SampleMoments};
