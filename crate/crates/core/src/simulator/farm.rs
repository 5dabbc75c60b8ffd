use super::path::PathSample;
use super::plan::SimPlan;
use crate::error::Result;

/// How independent paths are scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// rayon's global pool; identical to `Sequential` without the
    /// `parallel` feature.
    #[default]
    Parallel,
}

/// Maps `f` over `0..n`, results ordered by index.
pub fn map_indexed<T, F>(n: u64, exec: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..n).into_par_iter().map(f).collect()
        }
        _ => (0..n).map(f).collect(),
    }
}

/// Simulates paths `0..n_paths` of the plan, sorted by path index.
pub fn simulate_paths(plan: &SimPlan, exec: Execution) -> Result<Vec<PathSample>> {
    let n = plan.config().n_paths as u64;
    map_indexed(n, exec, |i| plan.simulate_path(i)).into_iter().collect()
}
