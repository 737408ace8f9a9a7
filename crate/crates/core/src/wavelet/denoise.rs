//! Denoising driver: transform, threshold every detail subband, invert.

use crate::error::Result;
use crate::image::{ColorImage, ColorSpace, ImagePlane, NOMINAL_PEAK};
use crate::wavelet::bank::FilterBank;
use crate::wavelet::shrink::{
    apply_threshold, compute_threshold, estimate_noise_sigma, NoiseStats, ShrinkageRule,
};
use crate::wavelet::transform::{dwt2_forward, dwt2_inverse};

/// Denoises one plane; the noise deviation is estimated once from HH1 and
/// reused for every subband. The LL residual is never touched.
pub fn denoise_plane(
    plane: &ImagePlane,
    bank: &FilterBank,
    rule: ShrinkageRule,
    levels: usize,
) -> Result<ImagePlane> {
    let mut pyr = dwt2_forward(plane, bank, levels)?;
    let sigma_v = estimate_noise_sigma(&pyr);
    let total_pixels = (plane.width() * plane.height()) as f64;
    let total_levels = pyr.levels();
    for idx in 0..pyr.details.len() {
        let level = idx + 1;
        let bands = &mut pyr.details[idx];
        for band in [&mut bands.lh, &mut bands.hl, &mut bands.hh] {
            let stats = NoiseStats::from_subband(band, sigma_v, level, total_pixels, total_levels);
            let t = compute_threshold(rule, &stats);
            *band = apply_threshold(band, t, rule.mode);
        }
    }
    dwt2_inverse(&pyr, bank)
}

/// Per-channel wavelet denoising of an sRGB image, clamped back to [0, 255].
pub fn denoise(
    img: &ColorImage,
    bank: &FilterBank,
    rule: ShrinkageRule,
    levels: usize,
) -> Result<ColorImage> {
    img.expect_space(ColorSpace::Srgb8)?;
    let planes = img.planes();
    let out = [
        denoise_plane(&planes[0], bank, rule, levels)?,
        denoise_plane(&planes[1], bank, rule, levels)?,
        denoise_plane(&planes[2], bank, rule, levels)?,
    ];
    Ok(ColorImage::new(out, ColorSpace::Srgb8).clamped(0.0, NOMINAL_PEAK))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wavelet::bank::BankName;
    use crate::wavelet::shrink::ShrinkKind;

    #[test]
    fn constant_image_is_a_fixpoint() {
        let img = ColorImage::constant(32, 32, 77.0, ColorSpace::Srgb8);
        for name in BankName::ALL {
            let bank = FilterBank::new(name);
            let out = denoise(&img, &bank, ShrinkageRule::new(ShrinkKind::ModifiedBayes), 3)
                .unwrap();
            for c in 0..3 {
                for &v in out.plane(c).samples() {
                    assert!((v - 77.0).abs() < 1e-9, "{name}: {v}");
                }
            }
        }
    }

    #[test]
    fn denoising_rejects_lab_input() {
        let img = ColorImage::constant(16, 16, 50.0, ColorSpace::CieLab);
        let bank = FilterBank::new(BankName::Haar);
        assert!(denoise(&img, &bank, ShrinkageRule::new(ShrinkKind::Bayes), 2).is_err());
    }

    #[test]
    fn output_is_deterministic() {
        let img = ColorImage::from_plane(
            ImagePlane::from_fn(64, 64, |x, y| {
                128.0 + 60.0 * ((x as f64 / 9.0).sin() * (y as f64 / 7.0).cos())
            }),
            ColorSpace::Srgb8,
        );
        let bank = FilterBank::new(BankName::Coif4);
        let rule = ShrinkageRule::new(ShrinkKind::ModifiedBayes);
        let a = denoise(&img, &bank, rule, 4).unwrap();
        let b = denoise(&img, &bank, rule, 4).unwrap();
        assert_eq!(a, b);
    }
}
