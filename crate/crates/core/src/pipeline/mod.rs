//! Pipeline orchestration: configuration, the stage runner, sweeps, the
//! smoother benchmark, and synthetic fixture generation.

pub mod bench;
pub mod config;
pub mod fixtures;
pub mod run;
pub mod sweep;

use crate::error::{Error, Result};

pub use bench::{benchmark_smoothers, render_bench_csv, BenchRow};
pub use config::{load_config, parse_config, PipelineConfig, SmoothingMethod, StageToggles};
pub use run::{enhance_image, run_pipeline, EnhanceOutcome, RunReport};
pub use sweep::{
    default_sigma_d_list, default_sigma_r_list, render_banks_csv, render_bilateral_csv,
    render_rules_csv, sweep_bilateral_params, sweep_filter_banks, sweep_shrinkage_rules,
    BankSweepRow, BilateralSweepRow, RuleSweepRow,
};

/// Runs `f` on a dedicated pool of `threads` workers, or on the global pool
/// when `threads` is 0. All parallelism in the crate is structured per row
/// or per channel with no reduction-order dependence, so results are
/// identical for every thread count.
pub fn with_thread_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    if threads == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidParams {
            reason: format!("could not build a {threads}-thread pool: {e}"),
        })?;
    Ok(pool.install(f))
}
