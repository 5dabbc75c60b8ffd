//! Analytics and Monte Carlo simulation for integrated supOU processes.

// `!(x > 0.0)` is used on purpose so NaN lands in the error branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytics;
pub mod error;
pub mod experiments;
pub mod extreal;
pub mod measures;
pub mod numerics;
pub mod quad;
pub mod simulator;

pub use error::{Error, Result};
pub use extreal::ExtReal;

/// Version of the toolkit, as recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
