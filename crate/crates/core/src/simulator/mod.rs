//! Monte Carlo engine: samples the Poisson random measure on a truncated
//! window and evaluates `X*(t)` on a grid.

mod config;
mod farm;
mod gaussian;
mod path;
mod plan;
mod points;
mod rng;
mod truncation;

pub use config::{PastWindow, SimConfig, SmallJumpMode, TimeGrid};
pub use farm::{map_indexed, simulate_paths, Execution};
pub use gaussian::{sample_gaussian_path, GaussianSampler, MAX_GAUSSIAN_GRID};
pub use path::{decompose, Decomposition, PathSample};
pub use plan::{evaluate_integrated, sample_points, SimPlan};
pub use points::{PointSampler, PointSet, PointTriple};
pub use rng::RngStream;
pub use truncation::{past_mass, resolve_window, truncation_error, ErrorCertificate, PastBound};
