use mudomain_core::domain::BoundaryCurve;
use mudomain_core::montecarlo::{check_start, sample_exit, ExitSample, SimulationConfig};
use rayon::prelude::*;

/// Run every path on a rayon pool and return the samples in path order.
///
/// Each path owns its generator stream, so the result is identical for any
/// worker count. `workers = None` uses the global pool.
pub fn simulate_parallel(
    curve: &BoundaryCurve,
    cfg: &SimulationConfig,
    workers: Option<usize>,
) -> anyhow::Result<Vec<ExitSample>> {
    cfg.validate()?;
    check_start(curve)?;
    let job = || -> Result<Vec<ExitSample>, mudomain_core::Error> {
        (0..cfg.n_paths as u64).into_par_iter().map(|i| sample_exit(curve, cfg, i)).collect()
    };
    let samples = match workers {
        Some(w) => rayon::ThreadPoolBuilder::new().num_threads(w).build()?.install(job)?,
        None => job()?,
    };
    Ok(samples)
}
