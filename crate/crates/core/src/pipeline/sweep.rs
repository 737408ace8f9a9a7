//! Parameter sweeps: filter-bank and shrinkage-rule comparisons (run as
//! homomorphic + denoise, scored against the pre-denoise image) and the
//! bilateral sigma_d/sigma_r grid with smoothness / edge-retention proxies.

use std::path::{Path, PathBuf};

use crate::color::srgb_to_lab;
use crate::error::{Error, Result};
use crate::image::{ColorImage, ImagePlane};
use crate::io::load_image;
use crate::metrics::{mse, psnr_from_mse};
use crate::pipeline::config::PipelineConfig;
use crate::pipeline::with_thread_pool;
use crate::spatial::{bilateral_filter, BilateralParams};
use crate::spectral::homomorphic_filter_policy;
use crate::wavelet::{denoise, BankName, FilterBank, ShrinkKind, ShrinkageRule};

/// Rule order used by the shrinkage sweep.
pub const RULE_SWEEP_ORDER: [ShrinkKind; 4] = [
    ShrinkKind::ModifiedBayes,
    ShrinkKind::Bayes,
    ShrinkKind::Normal,
    ShrinkKind::Visu,
];

#[derive(Debug, Clone, PartialEq)]
pub struct BankSweepRow {
    pub image: String,
    pub bank: BankName,
    pub mse: f64,
    pub psnr_db: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RuleSweepRow {
    pub image: String,
    pub rule: ShrinkKind,
    pub psnr_db: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BilateralSweepRow {
    pub image: String,
    pub sigma_d: f64,
    pub sigma_r: f64,
    pub smoothness: f64,
    pub edge_retention: f64,
}

fn stem_of(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "image".to_string())
}

/// The sweep protocol always applies the homomorphic stage first, mirroring
/// the two-stage experimental design the comparisons come from.
fn prepare(cfg: &PipelineConfig, path: &Path) -> Result<(String, ColorImage)> {
    let img = load_image(path)?;
    let pre = homomorphic_filter_policy(&img, &cfg.homomorphic, cfg.channels)?;
    Ok((stem_of(path), pre))
}

/// Denoises each prepared input with every filter bank, scoring MSE/PSNR of
/// the denoised image against its pre-denoise input.
pub fn sweep_filter_banks(cfg: &PipelineConfig, inputs: &[PathBuf]) -> Result<Vec<BankSweepRow>> {
    if inputs.is_empty() {
        return Err(Error::InvalidParams {
            reason: "bank sweep needs at least one input image".into(),
        });
    }
    with_thread_pool(cfg.threads, || {
        let mut rows = Vec::new();
        for input in inputs {
            let (image, pre) = prepare(cfg, input)?;
            for bank in BankName::ALL {
                let den = denoise(&pre, &FilterBank::new(bank), cfg.rule, cfg.levels)?;
                let m = mse(&den, &pre)?;
                rows.push(BankSweepRow {
                    image: image.clone(),
                    bank,
                    mse: m,
                    psnr_db: psnr_from_mse(m),
                });
            }
        }
        Ok(rows)
    })?
}

pub fn render_banks_csv(rows: &[BankSweepRow]) -> String {
    let mut out = String::from("image,bank,mse,psnr_db\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{:.6},{:.4}\n",
            r.image, r.bank, r.mse, r.psnr_db
        ));
    }
    out
}

/// Denoises each prepared input with every shrinkage rule (bank fixed by the
/// config), scoring PSNR against the pre-denoise input.
pub fn sweep_shrinkage_rules(
    cfg: &PipelineConfig,
    inputs: &[PathBuf],
) -> Result<Vec<RuleSweepRow>> {
    if inputs.is_empty() {
        return Err(Error::InvalidParams {
            reason: "rule sweep needs at least one input image".into(),
        });
    }
    with_thread_pool(cfg.threads, || {
        let bank = FilterBank::new(cfg.bank);
        let mut rows = Vec::new();
        for input in inputs {
            let (image, pre) = prepare(cfg, input)?;
            for kind in RULE_SWEEP_ORDER {
                let rule = ShrinkageRule {
                    kind,
                    mode: cfg.rule.mode,
                };
                let den = denoise(&pre, &bank, rule, cfg.levels)?;
                rows.push(RuleSweepRow {
                    image: image.clone(),
                    rule: kind,
                    psnr_db: psnr_from_mse(mse(&den, &pre)?),
                });
            }
        }
        Ok(rows)
    })?
}

pub fn render_rules_csv(rows: &[RuleSweepRow]) -> String {
    let mut out = String::from("image,rule,psnr_db\n");
    for r in rows {
        out.push_str(&format!("{},{},{:.4}\n", r.image, r.rule, r.psnr_db));
    }
    out
}

pub fn default_sigma_d_list() -> Vec<f64> {
    (1..=10).map(f64::from).collect()
}

pub fn default_sigma_r_list() -> Vec<f64> {
    (1..=20).map(|i| f64::from(10 * i)).collect()
}

/// Residual standard deviation over the step fixture's flat patch
/// (lower-left quadrant area, away from the step edge).
fn flat_region_std(l: &ImagePlane) -> f64 {
    let (w, h) = (l.width(), l.height());
    let x0 = (0.05 * w as f64) as usize;
    let x1 = ((0.30 * w as f64) as usize).max(x0 + 1);
    let y0 = (0.70 * h as f64) as usize;
    let y1 = ((0.95 * h as f64) as usize).max(y0 + 1);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    let mut n = 0.0;
    for y in y0..y1 {
        for x in x0..x1 {
            let v = l.get(x, y);
            sum += v;
            sum_sq += v * v;
            n += 1.0;
        }
    }
    let mean = sum / n;
    (sum_sq / n - mean * mean).max(0.0).sqrt()
}

/// Mean of a 3-pixel-wide column band.
fn band_mean(l: &ImagePlane, x0: usize) -> f64 {
    let mut sum = 0.0;
    let mut n = 0.0;
    for y in 0..l.height() {
        for x in x0..(x0 + 3).min(l.width()) {
            sum += l.get(x, y);
            n += 1.0;
        }
    }
    sum / n
}

/// |mean difference| between the bands 1-3 px right and left of the fixture
/// step at x = W/2.
fn step_band_difference(l: &ImagePlane) -> f64 {
    let mid = l.width() / 2;
    let left = band_mean(l, mid.saturating_sub(3));
    let right = band_mean(l, mid);
    (right - left).abs()
}

/// Grid sweep over bilateral parameters. Smoothness is the residual standard
/// deviation on the step fixture's flat patch (lower is smoother); edge
/// retention is the after/before ratio of the step's band difference (1.0
/// means the edge survived untouched). Both proxies are measured on the
/// Lab L plane and are meaningful on the step fixture's geometry.
pub fn sweep_bilateral_params(
    cfg: &PipelineConfig,
    inputs: &[PathBuf],
    sigma_d_list: &[f64],
    sigma_r_list: &[f64],
) -> Result<Vec<BilateralSweepRow>> {
    if inputs.is_empty() || sigma_d_list.is_empty() || sigma_r_list.is_empty() {
        return Err(Error::InvalidParams {
            reason: "bilateral sweep needs inputs and nonempty sigma lists".into(),
        });
    }
    with_thread_pool(cfg.threads, || {
        let mut rows = Vec::new();
        for input in inputs {
            let image = stem_of(input);
            let lab = srgb_to_lab(&load_image(input)?)?;
            let before_diff = step_band_difference(lab.plane(0));
            for &sigma_d in sigma_d_list {
                for &sigma_r in sigma_r_list {
                    let params = BilateralParams::new(sigma_d, sigma_r)?;
                    let out = bilateral_filter(&lab, &params)?;
                    let l = out.plane(0);
                    let retention = if before_diff > 1e-9 {
                        step_band_difference(l) / before_diff
                    } else {
                        1.0
                    };
                    rows.push(BilateralSweepRow {
                        image: image.clone(),
                        sigma_d,
                        sigma_r,
                        smoothness: flat_region_std(l),
                        edge_retention: retention,
                    });
                }
            }
        }
        Ok(rows)
    })?
}

pub fn render_bilateral_csv(rows: &[BilateralSweepRow]) -> String {
    let mut out = String::from("image,sigma_d,sigma_r,smoothness,edge_retention\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{:.6},{:.6}\n",
            r.image, r.sigma_d, r.sigma_r, r.smoothness, r.edge_retention
        ));
    }
    out
}
