//! Wall-clock comparison of the two smoothing variants. This is a reporting
//! tool: it measures and flags instability but asserts nothing.

use std::path::PathBuf;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::io::load_image;
use crate::pipeline::config::{PipelineConfig, SmoothingMethod};
use crate::pipeline::run::enhance_image;
use crate::pipeline::with_thread_pool;

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub image: String,
    pub variant: SmoothingMethod,
    pub reps: usize,
    pub median_total_s: f64,
    pub median_smoothing_s: f64,
    pub min_total_s: f64,
    pub max_total_s: f64,
    /// False when repeated identical runs spread by a max/min ratio >= 1.5.
    pub stable: bool,
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(|a, b| a.total_cmp(b));
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Runs the full pipeline `reps` times per input for each smoothing variant,
/// sequentially (one image at a time, to keep timings contention-free), and
/// reports medians of total and smoothing-stage wall-clock seconds.
pub fn benchmark_smoothers(
    cfg: &PipelineConfig,
    inputs: &[PathBuf],
    reps: usize,
) -> Result<Vec<BenchRow>> {
    if reps < 3 {
        return Err(Error::InvalidParams {
            reason: format!("benchmark needs at least 3 repetitions, got {reps}"),
        });
    }
    if inputs.is_empty() {
        return Err(Error::InvalidParams {
            reason: "benchmark needs at least one input image".into(),
        });
    }
    with_thread_pool(cfg.threads, || {
        let mut rows = Vec::new();
        for input in inputs {
            let image = input
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "image".to_string());
            let img = load_image(input)?;
            for variant in [SmoothingMethod::Bilateral, SmoothingMethod::Anisotropic] {
                let mut vcfg = cfg.clone();
                vcfg.smoothing_method = variant;
                vcfg.stages.smoothing = true;
                vcfg.threads = 0; // already inside the requested pool

                let mut totals = Vec::with_capacity(reps);
                let mut smooths = Vec::with_capacity(reps);
                for _ in 0..reps {
                    let start = Instant::now();
                    let outcome = enhance_image(&vcfg, &img, false)?;
                    totals.push(start.elapsed().as_secs_f64());
                    smooths.push(
                        outcome
                            .stage_seconds
                            .iter()
                            .find(|(name, _)| name == "smoothing")
                            .map(|(_, s)| *s)
                            .unwrap_or(0.0),
                    );
                }
                let min_total_s = totals.iter().cloned().fold(f64::INFINITY, f64::min);
                let max_total_s = totals.iter().cloned().fold(0.0, f64::max);
                rows.push(BenchRow {
                    image: image.clone(),
                    variant,
                    reps,
                    median_total_s: median(&mut totals),
                    median_smoothing_s: median(&mut smooths),
                    min_total_s,
                    max_total_s,
                    stable: min_total_s > 0.0 && max_total_s / min_total_s < 1.5,
                });
            }
        }
        Ok(rows)
    })?
}

pub fn render_bench_csv(rows: &[BenchRow]) -> String {
    let mut out =
        String::from("image,variant,reps,median_total_s,median_smoothing_s,min_total_s,max_total_s,stable\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{:.6},{:.6},{:.6},{:.6},{}\n",
            r.image,
            r.variant,
            r.reps,
            r.median_total_s,
            r.median_smoothing_s,
            r.min_total_s,
            r.max_total_s,
            r.stable
        ));
    }
    out
}
