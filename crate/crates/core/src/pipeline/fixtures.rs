//! Deterministic synthetic fixtures: smooth geometric scenes degraded by a
//! non-uniform illumination field, a color cast, and Gaussian noise. They
//! stand in for real underwater captures in tests and sweeps.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::Result;
use crate::image::{ColorImage, ColorSpace, ImagePlane, NOMINAL_PEAK};
use crate::io::save_image;
use crate::spatial::gaussian_blur;

/// Noise standard deviations (0-255 scale) of the four shipped degraded
/// fixtures.
pub const DEGRADED_NOISE_SIGMAS: [f64; 4] = [5.0, 8.0, 10.0, 12.0];

/// Gaussian sampler on a counter-seeded ChaCha8 stream. The raw u64 output
/// is mapped to [0,1) doubles and fed through the Box-Muller transform, so
/// the byte stream is stable across library versions.
pub struct GaussianSampler {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl GaussianSampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            spare: None,
        }
    }

    /// Uniform draw from [0, 1) with 53-bit resolution.
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform draw from [lo, hi).
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Standard normal draw via Box-Muller.
    pub fn gaussian(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = 1.0 - self.uniform(); // (0, 1]: keeps the log finite
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (2.0 * PI * u2).sin_cos();
        self.spare = Some(r * s);
        r * c
    }
}

/// Distinct seed per (fixture index, purpose) pair so scene layout and noise
/// come from independent streams.
fn stream_seed(seed: u64, index: u64, purpose: u64) -> u64 {
    seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ purpose.wrapping_mul(0xC2B2_AE3D_27D4_EB4F)
}

const PURPOSE_SCENE: u64 = 1;
const PURPOSE_DEGRADE: u64 = 2;
const PURPOSE_STEP: u64 = 3;

/// A smooth, mildly colored scene: a low-frequency wave background, a handful
/// of soft-edged disks, and a pair of faint fine ripples (sand-like texture,
/// one per axis), mapped into the [100, 160] value band. The compressed range
/// leaves headroom for contrast stretching to act on.
pub fn clean_scene(seed: u64, index: usize, w: usize, h: usize) -> ColorImage {
    let mut rng = GaussianSampler::new(stream_seed(seed, index as u64, PURPOSE_SCENE));
    let fx = rng.uniform_in(4.5, 6.5);
    let fy = rng.uniform_in(4.5, 6.5);
    let phase_x = rng.uniform_in(0.0, 2.0 * PI);
    let phase_y = rng.uniform_in(0.0, 2.0 * PI);
    let ripple_omega_x = rng.uniform_in(0.18 * PI, 0.21 * PI);
    let ripple_phase_x = rng.uniform_in(0.0, 2.0 * PI);
    let ripple_omega_y = rng.uniform_in(0.18 * PI, 0.21 * PI);
    let ripple_phase_y = rng.uniform_in(0.0, 2.0 * PI);
    // Later scenes carry coarser, stronger ripple texture.
    let ripple_amp = 6.0 + 2.3 * index as f64;

    struct Disk {
        cx: f64,
        cy: f64,
        r2: f64,
        delta: f64,
    }
    let disk_count = 3 + index % 3;
    let disks: Vec<Disk> = (0..disk_count)
        .map(|_| Disk {
            delta: rng.uniform_in(-34.0, 41.0),
            r2: {
                let radius = rng.uniform_in(0.12, 0.25) * w.min(h) as f64;
                radius * radius
            },
            cx: rng.uniform_in(0.15, 0.85) * w as f64,
            cy: rng.uniform_in(0.15, 0.85) * h as f64,
        })
        .collect();

    let mut plane = ImagePlane::from_fn(w, h, |x, y| {
        let u = x as f64 / w as f64;
        let v = y as f64 / h as f64;
        let mut val = 130.0
            + 26.0 * (2.0 * PI * fx * u + phase_x).sin() * (2.0 * PI * fy * v + phase_y).cos();
        for d in &disks {
            let dx = x as f64 - d.cx;
            let dy = y as f64 - d.cy;
            if dx * dx + dy * dy <= d.r2 {
                val += d.delta;
            }
        }
        val
    });
    plane = gaussian_blur(&plane, 2.8, 8);
    // The ripples go in after the blur so they keep their fine scale.
    for (i, v) in plane.samples_mut().iter_mut().enumerate() {
        let (x, y) = (i % w, i / w);
        *v += ripple_amp * (ripple_omega_x * x as f64 + ripple_phase_x).sin()
            + ripple_amp * (ripple_omega_y * y as f64 + ripple_phase_y).sin();
    }

    // Affine remap into the band; the scene stays achromatic so the only
    // color in a degraded frame is the cast itself.
    let (lo, hi) = plane.min_max();
    let scale = 60.0 / (hi - lo);
    let plane = plane.map(|v| 100.0 + (v - lo) * scale);
    ColorImage::new([plane.clone(), plane.clone(), plane], ColorSpace::Srgb8)
}

/// Applies the underwater degradation model to a clean scene: a Gaussian
/// illumination bump (bright center, dim corners), additive sensor noise,
/// and a blue-green color cast over the lot.
pub fn degrade(clean: &ColorImage, seed: u64, index: usize, noise_sigma: f64) -> ColorImage {
    let (w, h) = (clean.width(), clean.height());
    let mut rng = GaussianSampler::new(stream_seed(seed, index as u64, PURPOSE_DEGRADE));
    let cx = (0.5 + rng.uniform_in(-0.08, 0.08)) * w as f64;
    let cy = (0.5 + rng.uniform_in(-0.08, 0.08)) * h as f64;
    let sigma_i = 0.35 * w.min(h) as f64;
    let floor = 0.80;
    let cast = [0.62, 0.88, 1.06];

    let mut noise = vec![0.0f64; w * h];
    for v in &mut noise {
        *v = noise_sigma * rng.gaussian();
    }
    let planes = [0, 1, 2].map(|c| {
        let src = clean.plane(c);
        ImagePlane::from_fn(w, h, |x, y| {
            let dx = x as f64 - cx;
            let dy = y as f64 - cy;
            let ill = floor
                + (1.0 - floor) * (-(dx * dx + dy * dy) / (2.0 * sigma_i * sigma_i)).exp();
            (src.get(x, y) * ill + noise[y * w + x]) * cast[c]
        })
    });
    ColorImage::new(planes, ColorSpace::Srgb8).clamped(0.0, NOMINAL_PEAK)
}

/// A gray vertical step (60 -> 160 at x = W/2) softened by a small blur,
/// plus noise: the geometry the bilateral sweep proxies are defined on.
pub fn step_scene(seed: u64, w: usize, h: usize, noise_sigma: f64) -> ColorImage {
    let mut rng = GaussianSampler::new(stream_seed(seed, 0, PURPOSE_STEP));
    let base = ImagePlane::from_fn(w, h, |x, _| if x < w / 2 { 60.0 } else { 160.0 });
    let blurred = gaussian_blur(&base, 1.0, 3);
    let mut planes = [blurred.clone(), blurred.clone(), blurred];
    for plane in &mut planes {
        for v in plane.samples_mut() {
            *v += noise_sigma * rng.gaussian();
        }
    }
    ColorImage::new(planes, ColorSpace::Srgb8).clamped(0.0, NOMINAL_PEAK)
}

/// Writes the full fixture set into `dir` (created if missing) and returns
/// the paths: four clean/degraded pairs, the step target, and a 512x512
/// benchmark image.
pub fn write_fixtures(dir: &Path, seed: u64) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| crate::error::Error::Io {
        path: dir.to_path_buf(),
        source: e,
    })?;
    let mut paths = Vec::new();
    let mut emit = |name: String, img: &ColorImage| -> Result<()> {
        let path = dir.join(name);
        save_image(img, &path)?;
        paths.push(path);
        Ok(())
    };

    for k in 0..4 {
        let clean = clean_scene(seed, k, 256, 256);
        let degraded = degrade(&clean, seed, k, DEGRADED_NOISE_SIGMAS[k]);
        emit(format!("clean_{:02}.ppm", k + 1), &clean)?;
        emit(format!("degraded_{:02}.ppm", k + 1), &degraded)?;
    }
    emit("step.ppm".into(), &step_scene(seed, 256, 256, 8.0))?;
    let bench_clean = clean_scene(seed, 4, 512, 512);
    emit(
        "bench_512.ppm".into(),
        &degrade(&bench_clean, seed, 4, 8.0),
    )?;
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampler_moments_are_sane() {
        let mut rng = GaussianSampler::new(42);
        let n = 100_000;
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for _ in 0..n {
            let z = rng.gaussian();
            sum += z;
            sum_sq += z * z;
        }
        let mean = sum / n as f64;
        let var = sum_sq / n as f64 - mean * mean;
        assert!(mean.abs() < 0.02, "mean {mean}");
        assert!((var - 1.0).abs() < 0.02, "var {var}");
    }

    #[test]
    fn sampler_is_deterministic() {
        let mut a = GaussianSampler::new(9);
        let mut b = GaussianSampler::new(9);
        for _ in 0..100 {
            assert_eq!(a.gaussian(), b.gaussian());
        }
        let mut c = GaussianSampler::new(10);
        assert_ne!(a.gaussian(), c.gaussian());
    }

    #[test]
    fn scenes_are_deterministic_and_distinct() {
        let a = clean_scene(7, 0, 64, 64);
        let b = clean_scene(7, 0, 64, 64);
        assert_eq!(a, b);
        let c = clean_scene(7, 1, 64, 64);
        assert_ne!(a, c);
    }

    #[test]
    fn clean_scene_occupies_compressed_band() {
        let img = clean_scene(7, 2, 128, 128);
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for c in 0..3 {
            let (a, b) = img.plane(c).min_max();
            lo = lo.min(a);
            hi = hi.max(b);
        }
        assert!((lo - 100.0).abs() < 1e-9, "lo {lo}");
        assert!((hi - 160.0).abs() < 1e-9, "hi {hi}");
    }

    #[test]
    fn degraded_darkens_corners_and_casts_blue() {
        let clean = clean_scene(7, 0, 128, 128);
        let degraded = degrade(&clean, 7, 0, 0.0); // no noise: isolate the model
        // Center stays brighter than corners relative to the clean scene.
        let ratio = |img: &ColorImage, x: usize, y: usize| {
            img.plane(1).get(x, y) / clean.plane(1).get(x, y).max(1e-9)
        };
        assert!(ratio(&degraded, 64, 64) > ratio(&degraded, 2, 2) + 0.12);
        // Red is attenuated far more than blue.
        let mean = |c: usize| degraded.plane(c).mean() / clean.plane(c).mean();
        assert!(mean(0) < 0.65 * mean(2));
    }

    #[test]
    fn step_scene_has_flat_sides() {
        let img = step_scene(7, 64, 32, 0.0);
        let l = img.plane(0);
        assert!((l.get(4, 10) - 60.0).abs() < 0.5);
        assert!((l.get(60, 10) - 160.0).abs() < 0.5);
        assert!(l.get(33, 10) > l.get(30, 10));
    }
}
