//! Global tone operations: per-channel contrast stretching and equalization
//! of the channel means against the global mean.

use crate::error::Result;
use crate::image::{ColorImage, ColorSpace, ImagePlane, NOMINAL_PEAK};

/// Which tone operation runs first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ToneOrder {
    EqualizeThenStretch,
    StretchThenEqualize,
}

impl ToneOrder {
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "equalize_then_stretch" | "equalize-then-stretch" => Some(Self::EqualizeThenStretch),
            "stretch_then_equalize" | "stretch-then-equalize" => Some(Self::StretchThenEqualize),
            _ => None,
        }
    }
}

impl std::fmt::Display for ToneOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::EqualizeThenStretch => "equalize_then_stretch",
            Self::StretchThenEqualize => "stretch_then_equalize",
        })
    }
}

/// Maps each channel affinely so its minimum lands on 0 and its maximum on
/// 255. A channel with no measurable spread maps to mid-gray; the relative
/// 1e-8 cutoff keeps the float residue earlier stages leave on flat images
/// (FFT round trips are only constant to ~1e-13) from being amplified into
/// full-range noise.
pub fn contrast_stretch(img: &ColorImage) -> Result<ColorImage> {
    img.expect_space(ColorSpace::Srgb8)?;
    Ok(img.map_planes(ColorSpace::Srgb8, |p| {
        let (lo, hi) = p.min_max();
        if hi - lo <= 1e-8 * hi.abs().max(1.0) {
            return p.map(|_| 0.5 * NOMINAL_PEAK);
        }
        let scale = NOMINAL_PEAK / (hi - lo);
        p.map(|v| (v - lo) * scale)
    }))
}

/// Outcome of [`equalize_color_means`], reporting how much clipping the
/// rescale introduced per channel.
#[derive(Debug, Clone, PartialEq)]
pub struct EqualizeOutcome {
    pub image: ColorImage,
    /// Scale factor applied to each channel.
    pub gains: [f64; 3],
    /// Fraction of samples per channel that hit the [0, 255] clamp.
    pub clamped_fraction: [f64; 3],
}

/// Scales each channel by `global_mean / channel_mean` so all three channel
/// means coincide, then clamps to [0, 255]. A zero-mean channel is left
/// untouched (gain 1).
pub fn equalize_color_means(img: &ColorImage) -> Result<EqualizeOutcome> {
    img.expect_space(ColorSpace::Srgb8)?;
    let means = [
        img.plane(0).mean(),
        img.plane(1).mean(),
        img.plane(2).mean(),
    ];
    let global = (means[0] + means[1] + means[2]) / 3.0;
    let mut gains = [1.0f64; 3];
    for c in 0..3 {
        if means[c] > 0.0 {
            gains[c] = global / means[c];
        }
    }
    let mut clamped = [0usize; 3];
    let planes = img.planes();
    let out = [0, 1, 2].map(|c| {
        let samples = planes[c]
            .samples()
            .iter()
            .map(|&v| {
                let scaled = v * gains[c];
                if !(0.0..=NOMINAL_PEAK).contains(&scaled) {
                    clamped[c] += 1;
                }
                scaled.clamp(0.0, NOMINAL_PEAK)
            })
            .collect();
        ImagePlane::from_samples(img.width(), img.height(), samples)
    });
    let n = (img.width() * img.height()) as f64;
    Ok(EqualizeOutcome {
        image: ColorImage::new(out, ColorSpace::Srgb8),
        gains,
        clamped_fraction: clamped.map(|k| k as f64 / n),
    })
}

/// Runs both tone operations in the requested order.
pub fn tone_adjust(img: &ColorImage, order: ToneOrder) -> Result<ColorImage> {
    match order {
        ToneOrder::EqualizeThenStretch => contrast_stretch(&equalize_color_means(img)?.image),
        ToneOrder::StretchThenEqualize => Ok(equalize_color_means(&contrast_stretch(img)?)?.image),
    }
}
