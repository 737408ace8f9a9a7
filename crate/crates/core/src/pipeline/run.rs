//! End-to-end pipeline execution: the fixed stage chain in memory, plus the
//! file-level runner that emits images, histograms, edge maps, and a report.

use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::color::{lab_to_srgb, srgb_to_lab};
use crate::error::{Error, Result};
use crate::image::ColorImage;
use crate::io::{load_image, save_image, save_plane_pgm};
use crate::metrics::{edge_map, gradient_histogram_pair, luminance_gradient, mse, psnr_from_mse};
use crate::pipeline::config::{PipelineConfig, SmoothingMethod};
use crate::spatial::{anisotropic_diffusion, bilateral_filter};
use crate::spectral::homomorphic_filter_policy;
use crate::tone::tone_adjust;
use crate::wavelet::{denoise, FilterBank};

/// Result of the in-memory stage chain.
#[derive(Debug)]
pub struct EnhanceOutcome {
    pub output: ColorImage,
    /// (stage name, wall-clock seconds) for every enabled stage, in run order.
    pub stage_seconds: Vec<(String, f64)>,
    /// Post-stage snapshots, captured only when requested.
    pub intermediates: Vec<(String, ColorImage)>,
}

/// Runs the enabled stages in the fixed order homomorphic -> wavelet ->
/// smoothing -> tone. Stage errors carry the stage name.
pub fn enhance_image(
    cfg: &PipelineConfig,
    input: &ColorImage,
    keep_intermediates: bool,
) -> Result<EnhanceOutcome> {
    let mut img = input.clone();
    let mut stage_seconds = Vec::new();
    let mut intermediates = Vec::new();

    let mut run_stage = |name: &str,
                         img: &mut ColorImage,
                         f: &dyn Fn(&ColorImage) -> Result<ColorImage>|
     -> Result<()> {
        let start = Instant::now();
        *img = f(img).map_err(|e| e.in_stage(name))?;
        stage_seconds.push((name.to_string(), start.elapsed().as_secs_f64()));
        if keep_intermediates {
            intermediates.push((name.to_string(), img.clone()));
        }
        Ok(())
    };

    if cfg.stages.homomorphic {
        run_stage("homomorphic", &mut img, &|i| {
            homomorphic_filter_policy(i, &cfg.homomorphic, cfg.channels)
        })?;
    }
    if cfg.stages.wavelet {
        let bank = FilterBank::new(cfg.bank);
        run_stage("wavelet", &mut img, &|i| {
            denoise(i, &bank, cfg.rule, cfg.levels)
        })?;
    }
    if cfg.stages.smoothing {
        run_stage("smoothing", &mut img, &|i| {
            let lab = srgb_to_lab(i)?;
            let smoothed = match cfg.smoothing_method {
                SmoothingMethod::Bilateral => bilateral_filter(&lab, &cfg.bilateral)?,
                SmoothingMethod::Anisotropic => anisotropic_diffusion(&lab, &cfg.diffusion)?,
            };
            lab_to_srgb(&smoothed)
        })?;
    }
    if cfg.stages.tone {
        run_stage("tone", &mut img, &|i| tone_adjust(i, cfg.tone_order))?;
    }

    Ok(EnhanceOutcome {
        output: img,
        stage_seconds,
        intermediates,
    })
}

/// Everything one `enhance` invocation produced.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub input: PathBuf,
    pub output_image: PathBuf,
    pub histogram_input_csv: PathBuf,
    pub histogram_output_csv: PathBuf,
    pub edges_input_pgm: PathBuf,
    pub edges_output_pgm: PathBuf,
    pub report_txt: PathBuf,
    pub intermediates: Vec<PathBuf>,
    pub stage_seconds: Vec<(String, f64)>,
    pub total_seconds: f64,
    pub mse_vs_input: f64,
    pub psnr_vs_input_db: f64,
    pub mean_gradient_input: f64,
    pub mean_gradient_output: f64,
    pub version: String,
    pub threads: usize,
}

impl RunReport {
    /// Flat `key=value` report body.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let mut kv = |k: &str, v: String| {
            out.push_str(k);
            out.push('=');
            out.push_str(&v);
            out.push('\n');
        };
        kv("input", self.input.display().to_string());
        kv("output", self.output_image.display().to_string());
        kv("version", self.version.clone());
        kv("threads", self.threads.to_string());
        for (name, secs) in &self.stage_seconds {
            kv(&format!("stage.{name}_s"), format!("{secs:.6}"));
        }
        kv("total_s", format!("{:.6}", self.total_seconds));
        kv("mse_vs_input", format!("{:.6}", self.mse_vs_input));
        kv("psnr_vs_input_db", format!("{:.6}", self.psnr_vs_input_db));
        kv(
            "mean_gradient_input",
            format!("{:.6}", self.mean_gradient_input),
        );
        kv(
            "mean_gradient_output",
            format!("{:.6}", self.mean_gradient_output),
        );
        kv(
            "histogram_input",
            self.histogram_input_csv.display().to_string(),
        );
        kv(
            "histogram_output",
            self.histogram_output_csv.display().to_string(),
        );
        kv("edges_input", self.edges_input_pgm.display().to_string());
        kv("edges_output", self.edges_output_pgm.display().to_string());
        for p in &self.intermediates {
            kv("intermediate", p.display().to_string());
        }
        out
    }
}

/// Runs the pipeline on one file, writing all artifacts into `outdir`.
/// On failure every partially written output is removed.
pub fn run_pipeline(
    cfg: &PipelineConfig,
    input: &Path,
    outdir: &Path,
    dump_stages: bool,
) -> Result<RunReport> {
    let mut written: Vec<PathBuf> = Vec::new();
    match run_pipeline_inner(cfg, input, outdir, dump_stages, &mut written) {
        Ok(report) => Ok(report),
        Err(e) => {
            for path in written {
                let _ = std::fs::remove_file(path);
            }
            Err(e)
        }
    }
}

fn run_pipeline_inner(
    cfg: &PipelineConfig,
    input: &Path,
    outdir: &Path,
    dump_stages: bool,
    written: &mut Vec<PathBuf>,
) -> Result<RunReport> {
    let img = load_image(input)?;
    std::fs::create_dir_all(outdir).map_err(|e| Error::Io {
        path: outdir.to_path_buf(),
        source: e,
    })?;

    let stem = input
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "image".to_string());
    let ext = match input.extension().and_then(|e| e.to_str()) {
        Some(e) if e.eq_ignore_ascii_case("png") && cfg!(feature = "png") => "png",
        _ => "ppm",
    };

    let start = Instant::now();
    let outcome = crate::pipeline::with_thread_pool(cfg.threads, || {
        enhance_image(cfg, &img, dump_stages)
    })??;
    let total_seconds = start.elapsed().as_secs_f64();

    let (grad_in, grad_out, hist_in, hist_out, edges_in, edges_out, mse_v) =
        crate::pipeline::with_thread_pool(cfg.threads, || -> Result<_> {
            let grad_in = luminance_gradient(&img)?;
            let grad_out = luminance_gradient(&outcome.output)?;
            let (hist_in, hist_out) =
                gradient_histogram_pair(&grad_in, &grad_out, cfg.histogram_bins);
            let edges_in = edge_map(&img, cfg.edge_low, cfg.edge_high)?;
            let edges_out = edge_map(&outcome.output, cfg.edge_low, cfg.edge_high)?;
            let mse_v = mse(&outcome.output, &img)?;
            Ok((grad_in, grad_out, hist_in, hist_out, edges_in, edges_out, mse_v))
        })??;

    let path_of = |suffix: &str| outdir.join(format!("{stem}_{suffix}"));

    let output_image = path_of(&format!("enhanced.{ext}"));
    save_image(&outcome.output, &output_image)?;
    written.push(output_image.clone());

    let histogram_input_csv = write_text(path_of("grad_input.csv"), &hist_in.to_csv(), written)?;
    let histogram_output_csv =
        write_text(path_of("grad_output.csv"), &hist_out.to_csv(), written)?;

    let edges_input_pgm = path_of("edges_input.pgm");
    save_plane_pgm(&edges_in, &edges_input_pgm)?;
    written.push(edges_input_pgm.clone());
    let edges_output_pgm = path_of("edges_output.pgm");
    save_plane_pgm(&edges_out, &edges_output_pgm)?;
    written.push(edges_output_pgm.clone());

    let mut intermediates = Vec::new();
    for (i, (name, image)) in outcome.intermediates.iter().enumerate() {
        let path = path_of(&format!("{:02}_{name}.{ext}", i + 1));
        save_image(image, &path)?;
        written.push(path.clone());
        intermediates.push(path);
    }

    let mut report = RunReport {
        input: input.to_path_buf(),
        output_image,
        histogram_input_csv,
        histogram_output_csv,
        edges_input_pgm,
        edges_output_pgm,
        report_txt: path_of("report.txt"),
        intermediates,
        stage_seconds: outcome.stage_seconds,
        total_seconds,
        mse_vs_input: mse_v,
        psnr_vs_input_db: psnr_from_mse(mse_v),
        mean_gradient_input: grad_in.mean(),
        mean_gradient_output: grad_out.mean(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        threads: if cfg.threads > 0 {
            cfg.threads
        } else {
            rayon::current_num_threads()
        },
    };
    report.report_txt = write_text(report.report_txt.clone(), &report.render(), written)?;
    Ok(report)
}

fn write_text(path: PathBuf, body: &str, written: &mut Vec<PathBuf>) -> Result<PathBuf> {
    std::fs::write(&path, body).map_err(|e| Error::Io {
        path: path.clone(),
        source: e,
    })?;
    written.push(path.clone());
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::image::ColorSpace;
    use crate::pipeline::config::StageToggles;
    use crate::pipeline::fixtures;

    fn disabled() -> StageToggles {
        StageToggles {
            homomorphic: false,
            wavelet: false,
            smoothing: false,
            tone: false,
        }
    }

    #[test]
    fn identity_pipeline_returns_input() {
        let cfg = PipelineConfig {
            stages: disabled(),
            ..PipelineConfig::default()
        };
        let img = fixtures::clean_scene(3, 0, 32, 32);
        let out = enhance_image(&cfg, &img, false).unwrap();
        assert_eq!(out.output, img);
        assert!(out.stage_seconds.is_empty());
    }

    #[test]
    fn constant_input_maps_to_mid_gray() {
        let cfg = PipelineConfig::default();
        let img = ColorImage::constant(32, 32, 100.0, ColorSpace::Srgb8);
        let out = enhance_image(&cfg, &img, false).unwrap();
        for c in 0..3 {
            for &v in out.output.plane(c).samples() {
                assert!((v - 127.5).abs() < 1e-6, "channel {c}: {v}");
            }
        }
        assert_eq!(out.stage_seconds.len(), 4);
    }

    #[test]
    fn stage_errors_carry_the_stage_name() {
        let cfg = PipelineConfig {
            levels: 5, // 2^5 = 32 > 8
            ..PipelineConfig::default()
        };
        let img = ColorImage::constant(8, 8, 100.0, ColorSpace::Srgb8);
        let err = enhance_image(&cfg, &img, false).unwrap_err();
        assert!(err.to_string().contains("wavelet"), "{err}");
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn output_is_identical_across_thread_pools() {
        let cfg = PipelineConfig::default();
        let img = fixtures::degrade(&fixtures::clean_scene(5, 1, 48, 40), 5, 1, 8.0);
        let single = crate::pipeline::with_thread_pool(1, || enhance_image(&cfg, &img, false))
            .unwrap()
            .unwrap();
        let four = crate::pipeline::with_thread_pool(4, || enhance_image(&cfg, &img, false))
            .unwrap()
            .unwrap();
        assert_eq!(single.output, four.output);
    }

    #[test]
    fn intermediates_follow_enabled_stages() {
        let cfg = PipelineConfig {
            stages: StageToggles {
                homomorphic: false,
                wavelet: false,
                smoothing: true,
                tone: true,
            },
            ..PipelineConfig::default()
        };
        let img = fixtures::clean_scene(3, 2, 24, 24);
        let out = enhance_image(&cfg, &img, true).unwrap();
        let names: Vec<&str> = out.intermediates.iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(names, ["smoothing", "tone"]);
    }

    #[test]
    fn run_pipeline_writes_all_artifacts() {
        let dir = tempfile::tempdir().unwrap();
        let input = dir.path().join("scene.ppm");
        let img = fixtures::degrade(&fixtures::clean_scene(11, 0, 40, 40), 11, 0, 5.0);
        save_image(&img, &input).unwrap();

        let cfg = PipelineConfig {
            levels: 2,
            ..PipelineConfig::default()
        };
        let outdir = dir.path().join("out");
        let report = run_pipeline(&cfg, &input, &outdir, true).unwrap();
        for path in [
            &report.output_image,
            &report.histogram_input_csv,
            &report.histogram_output_csv,
            &report.edges_input_pgm,
            &report.edges_output_pgm,
            &report.report_txt,
        ] {
            assert!(path.exists(), "{path:?} missing");
        }
        assert_eq!(report.intermediates.len(), 4);
        for p in &report.intermediates {
            assert!(p.exists());
        }
        let body = std::fs::read_to_string(&report.report_txt).unwrap();
        assert!(body.contains("psnr_vs_input_db="));
        assert!(body.contains("stage.wavelet_s="));
        assert!(body.contains(&format!("threads={}", report.threads)));
    }

    #[test]
    fn failed_runs_leave_no_partial_outputs() {
        let dir = tempfile::tempdir().unwrap();
        let input = dir.path().join("tiny.ppm");
        save_image(&fixtures::clean_scene(1, 0, 6, 6), &input).unwrap();
        let cfg = PipelineConfig {
            levels: 4, // 16 > 6: wavelet stage fails
            ..PipelineConfig::default()
        };
        let outdir = dir.path().join("out");
        assert!(run_pipeline(&cfg, &input, &outdir, false).is_err());
        if outdir.exists() {
            assert_eq!(std::fs::read_dir(&outdir).unwrap().count(), 0);
        }
    }

    #[test]
    fn missing_input_is_reported() {
        let cfg = PipelineConfig::default();
        let err = run_pipeline(&cfg, Path::new("/nonexistent/x.ppm"), Path::new("."), false)
            .unwrap_err();
        assert_eq!(err.exit_code(), 1);
    }
}
