//! Noise estimation and shrinkage thresholds: modified BayesShrink plus the
//! BayesShrink, VisuShrink and NormalShrink baselines.

use crate::image::ImagePlane;
use crate::wavelet::transform::WaveletPyramid;

/// Threshold selection rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ShrinkKind {
    ModifiedBayes,
    Bayes,
    Visu,
    Normal,
}

impl ShrinkKind {
    pub const ALL: [ShrinkKind; 4] = [
        ShrinkKind::ModifiedBayes,
        ShrinkKind::Bayes,
        ShrinkKind::Visu,
        ShrinkKind::Normal,
    ];

    pub fn parse(s: &str) -> Option<ShrinkKind> {
        match s.to_ascii_lowercase().as_str() {
            "modified_bayes" | "modified-bayes" | "mbs" => Some(ShrinkKind::ModifiedBayes),
            "bayes" => Some(ShrinkKind::Bayes),
            "visu" => Some(ShrinkKind::Visu),
            "normal" => Some(ShrinkKind::Normal),
            _ => None,
        }
    }
}

impl std::fmt::Display for ShrinkKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ShrinkKind::ModifiedBayes => "modified_bayes",
            ShrinkKind::Bayes => "bayes",
            ShrinkKind::Visu => "visu",
            ShrinkKind::Normal => "normal",
        })
    }
}

/// Soft shrinks toward zero by T; hard keeps surviving coefficients as-is.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdMode {
    Soft,
    Hard,
}

impl ThresholdMode {
    pub fn parse(s: &str) -> Option<ThresholdMode> {
        match s.to_ascii_lowercase().as_str() {
            "soft" => Some(ThresholdMode::Soft),
            "hard" => Some(ThresholdMode::Hard),
            _ => None,
        }
    }
}

impl std::fmt::Display for ThresholdMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ThresholdMode::Soft => "soft",
            ThresholdMode::Hard => "hard",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShrinkageRule {
    pub kind: ShrinkKind,
    pub mode: ThresholdMode,
}

impl ShrinkageRule {
    /// Soft thresholding is the default pairing for every rule.
    pub fn new(kind: ShrinkKind) -> ShrinkageRule {
        ShrinkageRule {
            kind,
            mode: ThresholdMode::Soft,
        }
    }
}

/// Per-subband statistics feeding the threshold rules.
#[derive(Debug, Clone, Copy)]
pub struct NoiseStats {
    /// Noise deviation estimate from the finest diagonal subband.
    pub sigma_v: f64,
    /// Raw second moment of the subband coefficients.
    pub sigma_y_sq: f64,
    /// Clean-signal deviation estimate sqrt(max(sigma_y_sq - sigma_v^2, 0)).
    pub sigma_x: f64,
    /// Coefficient count of the subband.
    pub m: f64,
    /// Decomposition level of the subband (1 = finest).
    pub level: usize,
    /// Largest absolute coefficient, the fallback threshold.
    pub max_abs: f64,
    /// Pixel count of the full image (for the universal threshold).
    pub total_pixels: f64,
    /// Total decomposition depth J (for NormalShrink).
    pub total_levels: usize,
}

impl NoiseStats {
    pub fn new(
        sigma_v: f64,
        sigma_y_sq: f64,
        m: f64,
        level: usize,
        max_abs: f64,
        total_pixels: f64,
        total_levels: usize,
    ) -> NoiseStats {
        NoiseStats {
            sigma_v,
            sigma_y_sq,
            sigma_x: (sigma_y_sq - sigma_v * sigma_v).max(0.0).sqrt(),
            m,
            level,
            max_abs,
            total_pixels,
            total_levels,
        }
    }

    /// Gathers the statistics of one subband.
    pub fn from_subband(
        subband: &ImagePlane,
        sigma_v: f64,
        level: usize,
        total_pixels: f64,
        total_levels: usize,
    ) -> NoiseStats {
        let sigma_y_sq = subband_variance(subband);
        let max_abs = subband
            .samples()
            .iter()
            .fold(0.0f64, |acc, &v| acc.max(v.abs()));
        NoiseStats::new(
            sigma_v,
            sigma_y_sq,
            subband.len() as f64,
            level,
            max_abs,
            total_pixels,
            total_levels,
        )
    }
}

/// Robust noise estimate: median(|HH1|) / 0.6745.
pub fn estimate_noise_sigma(pyr: &WaveletPyramid) -> f64 {
    let mut mags: Vec<f64> = pyr.details[0]
        .hh
        .samples()
        .iter()
        .map(|v| v.abs())
        .collect();
    mags.sort_by(|a, b| a.total_cmp(b));
    let n = mags.len();
    // midpoint convention for even counts
    let median = if n % 2 == 1 {
        mags[n / 2]
    } else {
        0.5 * (mags[n / 2 - 1] + mags[n / 2])
    };
    median / 0.6745
}

/// Raw second moment (no mean-centering) of the coefficients.
pub fn subband_variance(subband: &ImagePlane) -> f64 {
    subband.samples().iter().map(|v| v * v).sum::<f64>() / subband.len() as f64
}

/// Threshold for one subband under the given rule. Natural log throughout.
pub fn compute_threshold(rule: ShrinkageRule, stats: &NoiseStats) -> f64 {
    let noise_var = stats.sigma_v * stats.sigma_v;
    match rule.kind {
        ShrinkKind::ModifiedBayes => {
            if noise_var < stats.sigma_y_sq {
                let beta = (stats.m.ln() / (2.0 * stats.level as f64)).sqrt();
                beta * noise_var / stats.sigma_x
            } else {
                // noise dominates: zero the whole subband
                stats.max_abs
            }
        }
        ShrinkKind::Bayes => {
            if noise_var < stats.sigma_y_sq {
                noise_var / stats.sigma_x
            } else {
                stats.max_abs
            }
        }
        ShrinkKind::Visu => stats.sigma_v * (2.0 * stats.total_pixels.ln()).sqrt(),
        ShrinkKind::Normal => {
            if stats.sigma_y_sq > 0.0 {
                let beta = (stats.m.ln() / stats.total_levels as f64).sqrt();
                beta * noise_var / stats.sigma_y_sq.sqrt()
            } else {
                0.0
            }
        }
    }
}

/// Applies soft or hard thresholding to every coefficient.
pub fn apply_threshold(subband: &ImagePlane, t: f64, mode: ThresholdMode) -> ImagePlane {
    debug_assert!(t >= 0.0);
    match mode {
        ThresholdMode::Soft => subband.map(|w| {
            if w > t {
                w - t
            } else if w < -t {
                w + t
            } else {
                0.0
            }
        }),
        ThresholdMode::Hard => subband.map(|w| if w.abs() > t { w } else { 0.0 }),
    }
}
