//! Quality metrics and evaluation artifacts: MSE/PSNR, Sobel gradient
//! magnitudes, gradient histograms, and Canny edge maps.

use rayon::prelude::*;

use crate::color::luminance;
use crate::error::{Error, Result};
use crate::image::{ColorImage, ImagePlane, NOMINAL_PEAK};
use crate::spatial::gaussian_blur;

/// Mean squared error over all pixels and channels, on the 0-255 scale.
pub fn mse(a: &ColorImage, b: &ColorImage) -> Result<f64> {
    a.expect_same_shape(b)?;
    if a.space() != b.space() {
        return Err(Error::WrongColorSpace {
            expected: a.space().to_string(),
            found: b.space().to_string(),
        });
    }
    let mut acc = 0.0f64;
    for c in 0..3 {
        for (x, y) in a.plane(c).samples().iter().zip(b.plane(c).samples()) {
            let d = x - y;
            acc += d * d;
        }
    }
    Ok(acc / (3.0 * a.pixel_count() as f64))
}

/// Peak signal-to-noise ratio in dB against a fixed peak of 255. Identical
/// images yield positive infinity.
pub fn psnr(a: &ColorImage, b: &ColorImage) -> Result<f64> {
    Ok(psnr_from_mse(mse(a, b)?))
}

/// PSNR of a known MSE value, sharing the fixed 255 peak.
pub fn psnr_from_mse(mse: f64) -> f64 {
    if mse == 0.0 {
        f64::INFINITY
    } else {
        10.0 * ((NOMINAL_PEAK * NOMINAL_PEAK) / mse).log10()
    }
}

/// Per-pixel Sobel gradient magnitude with edge-replicated borders. The 3x3
/// kernels are unnormalized (weights 1, 2, 1).
pub fn gradient_magnitude(plane: &ImagePlane) -> ImagePlane {
    let (w, h) = (plane.width(), plane.height());
    let mut out = vec![0.0f64; w * h];
    out.par_chunks_mut(w).enumerate().for_each(|(y, row)| {
        let y = y as isize;
        for x in 0..w as isize {
            let s = |dx: isize, dy: isize| plane.get_clamped(x + dx, y + dy);
            let gx = (s(1, -1) + 2.0 * s(1, 0) + s(1, 1))
                - (s(-1, -1) + 2.0 * s(-1, 0) + s(-1, 1));
            let gy = (s(-1, 1) + 2.0 * s(0, 1) + s(1, 1))
                - (s(-1, -1) + 2.0 * s(0, -1) + s(1, -1));
            row[x as usize] = (gx * gx + gy * gy).sqrt();
        }
    });
    ImagePlane::from_samples(w, h, out)
}

/// Gradient magnitude of a color image, measured on Rec. 601 luminance.
pub fn luminance_gradient(img: &ColorImage) -> Result<ImagePlane> {
    Ok(gradient_magnitude(&luminance(img)?))
}

/// Uniform-bin histogram over an explicit value range.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    bin_edges: Vec<f64>,
    counts: Vec<u64>,
    total: u64,
}

impl Histogram {
    /// Histograms `plane` into `bins` uniform bins over `[0, range_max]`.
    /// Values above `range_max` land in the last bin. A nonpositive
    /// `range_max` degenerates to the unit range with everything in bin 0.
    pub fn of_plane(plane: &ImagePlane, bins: usize, range_max: f64) -> Histogram {
        assert!(bins >= 2, "histogram needs at least 2 bins");
        let hi = if range_max > 0.0 { range_max } else { 1.0 };
        let width = hi / bins as f64;
        let bin_edges = (0..=bins).map(|i| i as f64 * width).collect();
        let mut counts = vec![0u64; bins];
        for &v in plane.samples() {
            let idx = ((v / width) as usize).min(bins - 1);
            counts[idx] += 1;
        }
        Histogram {
            bin_edges,
            counts,
            total: plane.len() as u64,
        }
    }

    pub fn bin_edges(&self) -> &[f64] {
        &self.bin_edges
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// CSV rendering: header `bin_low,bin_high,count`, one row per bin,
    /// LF line endings.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("bin_low,bin_high,count\n");
        for (i, &count) in self.counts.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{}\n",
                self.bin_edges[i],
                self.bin_edges[i + 1],
                count
            ));
        }
        out
    }
}

/// Histogram of a gradient plane over `[0, max magnitude]`.
pub fn gradient_histogram(plane: &ImagePlane, bins: usize) -> Histogram {
    let (_, hi) = plane.min_max();
    Histogram::of_plane(plane, bins, hi)
}

/// Histograms two gradient planes over a shared range, `[0, max across the
/// pair]`, so the two curves are directly comparable.
pub fn gradient_histogram_pair(
    a: &ImagePlane,
    b: &ImagePlane,
    bins: usize,
) -> (Histogram, Histogram) {
    let hi = a.min_max().1.max(b.min_max().1);
    (
        Histogram::of_plane(a, bins, hi),
        Histogram::of_plane(b, bins, hi),
    )
}

const CANNY_SIGMA: f64 = 1.4;
const CANNY_RADIUS: usize = 5;

/// Canny edge detector: Gaussian smoothing, Sobel gradients, non-maximum
/// suppression, and 8-connected hysteresis. Returns a binary plane with 255
/// marking edges; image borders are suppressed.
pub fn edge_map(img: &ColorImage, low: f64, high: f64) -> Result<ImagePlane> {
    if !(low >= 0.0 && low <= high) || !high.is_finite() {
        return Err(Error::InvalidThresholds { low, high });
    }
    let luma = luminance(img)?;
    let smoothed = gaussian_blur(&luma, CANNY_SIGMA, CANNY_RADIUS);
    let (w, h) = (smoothed.width(), smoothed.height());

    let mut mag = vec![0.0f64; w * h];
    let mut sector = vec![0u8; w * h];
    for y in 0..h as isize {
        for x in 0..w as isize {
            let s = |dx: isize, dy: isize| smoothed.get_clamped(x + dx, y + dy);
            let gx = (s(1, -1) + 2.0 * s(1, 0) + s(1, 1))
                - (s(-1, -1) + 2.0 * s(-1, 0) + s(-1, 1));
            let gy = (s(-1, 1) + 2.0 * s(0, 1) + s(1, 1))
                - (s(-1, -1) + 2.0 * s(0, -1) + s(1, -1));
            let i = y as usize * w + x as usize;
            mag[i] = (gx * gx + gy * gy).sqrt();
            let mut theta = gy.atan2(gx);
            if theta < 0.0 {
                theta += std::f64::consts::PI;
            }
            let octant = (theta * 8.0 / std::f64::consts::PI).floor() as usize;
            sector[i] = match octant {
                0 | 7 | 8 => 0, // horizontal gradient: compare east/west
                1 | 2 => 1,     // diagonal
                3 | 4 => 2,     // vertical gradient: compare north/south
                _ => 3,         // anti-diagonal
            };
        }
    }

    // Non-maximum suppression. A pixel survives when it is >= its neighbor
    // in the positive gradient direction and strictly > the one behind it,
    // so plateaus of equal magnitude thin down to a single line.
    let offsets = [(1isize, 0isize), (1, 1), (0, 1), (-1, 1)];
    let mut thin = vec![0.0f64; w * h];
    for y in 1..h.saturating_sub(1) {
        for x in 1..w.saturating_sub(1) {
            let i = y * w + x;
            let (dx, dy) = offsets[sector[i] as usize];
            let fwd = mag[(y as isize + dy) as usize * w + (x as isize + dx) as usize];
            let bwd = mag[(y as isize - dy) as usize * w + (x as isize - dx) as usize];
            if mag[i] >= fwd && mag[i] > bwd {
                thin[i] = mag[i];
            }
        }
    }

    // Hysteresis: seed from strong pixels, grow through weak ones.
    let mut state = vec![0u8; w * h]; // 0 none, 1 weak, 2 edge
    let mut queue = std::collections::VecDeque::new();
    for (i, &m) in thin.iter().enumerate() {
        if m >= high {
            state[i] = 2;
            queue.push_back(i);
        } else if m >= low && m > 0.0 {
            state[i] = 1;
        }
    }
    while let Some(i) = queue.pop_front() {
        let (x, y) = ((i % w) as isize, (i / w) as isize);
        for dy in -1isize..=1 {
            for dx in -1isize..=1 {
                let (nx, ny) = (x + dx, y + dy);
                if nx < 0 || ny < 0 || nx >= w as isize || ny >= h as isize {
                    continue;
                }
                let j = ny as usize * w + nx as usize;
                if state[j] == 1 {
                    state[j] = 2;
                    queue.push_back(j);
                }
            }
        }
    }

    let samples = state
        .into_iter()
        .map(|s| if s == 2 { NOMINAL_PEAK } else { 0.0 })
        .collect();
    Ok(ImagePlane::from_samples(w, h, samples))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::image::ColorSpace;

    fn gray(plane: ImagePlane) -> ColorImage {
        ColorImage::new([plane.clone(), plane.clone(), plane], ColorSpace::Srgb8)
    }

    fn pseudo_random_image(w: usize, h: usize, salt: u64) -> ColorImage {
        let plane = |c: u64| {
            ImagePlane::from_fn(w, h, move |x, y| {
                let mut v = (x as u64)
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add((y as u64).wrapping_mul(1442695040888963407))
                    .wrapping_add(salt.wrapping_mul(c + 1));
                v ^= v >> 33;
                v = v.wrapping_mul(0xff51afd7ed558ccd);
                v ^= v >> 33;
                (v % 256) as f64
            })
        };
        ColorImage::new([plane(0), plane(1), plane(2)], ColorSpace::Srgb8)
    }

    #[test]
    fn mse_of_identical_images_is_zero() {
        let img = pseudo_random_image(8, 8, 1);
        assert_eq!(mse(&img, &img).unwrap(), 0.0);
        assert_eq!(psnr(&img, &img).unwrap(), f64::INFINITY);
    }

    #[test]
    fn mse_single_channel_difference() {
        let a = ColorImage::constant(1, 1, 10.0, ColorSpace::Srgb8);
        let mut planes = a.planes().clone();
        planes[1] = ImagePlane::from_fn(1, 1, |_, _| 13.0);
        let b = ColorImage::new(planes, ColorSpace::Srgb8);
        assert!((mse(&a, &b).unwrap() - 3.0).abs() < 1e-15);
    }

    #[test]
    fn mse_matches_naive_double_loop() {
        let a = pseudo_random_image(8, 8, 7);
        let b = pseudo_random_image(8, 8, 99);
        let mut acc = 0.0;
        for c in 0..3 {
            for y in 0..8 {
                for x in 0..8 {
                    let d = a.plane(c).get(x, y) - b.plane(c).get(x, y);
                    acc += d * d;
                }
            }
        }
        let want = acc / (3.0 * 64.0);
        assert!((mse(&a, &b).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn mse_rejects_shape_and_space_mismatch() {
        let a = ColorImage::constant(4, 4, 1.0, ColorSpace::Srgb8);
        let b = ColorImage::constant(4, 5, 1.0, ColorSpace::Srgb8);
        assert!(mse(&a, &b).is_err());
        let c = ColorImage::constant(4, 4, 1.0, ColorSpace::CieLab);
        assert!(mse(&a, &c).is_err());
    }

    #[test]
    fn psnr_matches_published_conversion() {
        // Spot values from an 8-bit PSNR table: MSE 0.0242 <-> 64.2905 dB,
        // MSE 0.0043 <-> 71.7861 dB.
        assert!((psnr_from_mse(0.0242) - 64.2905).abs() < 0.05);
        assert!((psnr_from_mse(0.0043) - 71.7861).abs() < 0.05);
        assert!((psnr_from_mse(255.0 * 255.0) - 0.0).abs() < 1e-12);
    }

    #[test]
    fn psnr_is_symmetric() {
        let a = pseudo_random_image(6, 5, 3);
        let b = pseudo_random_image(6, 5, 4);
        assert_eq!(psnr(&a, &b).unwrap(), psnr(&b, &a).unwrap());
    }

    #[test]
    fn gradient_of_constant_plane_is_zero() {
        let plane = ImagePlane::from_fn(7, 7, |_, _| 55.0);
        for &v in gradient_magnitude(&plane).samples() {
            assert_eq!(v, 0.0);
        }
    }

    #[test]
    fn gradient_of_vertical_step_is_1020_on_both_sides() {
        let plane = ImagePlane::from_fn(10, 6, |x, _| if x < 5 { 0.0 } else { 255.0 });
        let grad = gradient_magnitude(&plane);
        for y in 0..6 {
            assert_eq!(grad.get(4, y), 1020.0);
            assert_eq!(grad.get(5, y), 1020.0);
            assert_eq!(grad.get(3, y), 0.0);
            assert_eq!(grad.get(6, y), 0.0);
        }
    }

    #[test]
    fn gradient_commutes_with_transpose() {
        let plane = ImagePlane::from_fn(9, 12, |x, y| ((3 * x + 5 * y) % 17) as f64);
        let a = gradient_magnitude(&plane.transposed());
        let b = gradient_magnitude(&plane).transposed();
        for (x, y) in a.samples().iter().zip(b.samples()) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn histogram_conserves_counts() {
        let plane = ImagePlane::from_fn(13, 11, |x, y| ((x * y * 37) % 101) as f64);
        let hist = gradient_histogram(&gradient_magnitude(&plane), 16);
        assert_eq!(hist.counts().iter().sum::<u64>(), 13 * 11);
        assert_eq!(hist.total(), 13 * 11);
        assert_eq!(hist.counts().len(), 16);
        assert_eq!(hist.bin_edges().len(), 17);
    }

    #[test]
    fn zero_plane_lands_in_first_bin() {
        let plane = ImagePlane::new(5, 5);
        let hist = gradient_histogram(&plane, 10);
        assert_eq!(hist.counts()[0], 25);
        assert_eq!(hist.counts()[1..].iter().sum::<u64>(), 0);
    }

    #[test]
    fn histogram_pair_shares_range() {
        let a = ImagePlane::from_fn(4, 4, |x, _| x as f64); // max 3
        let b = ImagePlane::from_fn(4, 4, |x, _| 2.0 * x as f64); // max 6
        let (ha, hb) = gradient_histogram_pair(&a, &b, 6);
        assert_eq!(ha.bin_edges(), hb.bin_edges());
        assert_eq!(*ha.bin_edges().last().unwrap(), 6.0);
        // a's values only reach half the range.
        assert_eq!(ha.counts()[4..].iter().sum::<u64>(), 0);
        assert!(hb.counts()[5] > 0);
    }

    #[test]
    fn histogram_csv_format() {
        let plane = ImagePlane::from_fn(2, 2, |x, y| (x + 2 * y) as f64); // 0,1,2,3
        let hist = Histogram::of_plane(&plane, 3, 3.0);
        let csv = hist.to_csv();
        assert_eq!(csv, "bin_low,bin_high,count\n0,1,1\n1,2,1\n2,3,2\n");
    }

    #[test]
    fn edge_map_of_constant_image_is_empty() {
        let img = ColorImage::constant(32, 32, 120.0, ColorSpace::Srgb8);
        let edges = edge_map(&img, 20.0, 60.0).unwrap();
        assert!(edges.samples().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn edge_map_thins_step_to_single_column() {
        let plane = ImagePlane::from_fn(40, 24, |x, _| if x < 20 { 40.0 } else { 200.0 });
        let edges = edge_map(&gray(plane), 30.0, 100.0).unwrap();
        for y in 8..16 {
            let marked: Vec<usize> = (0..40)
                .filter(|&x| edges.get(x, y) == NOMINAL_PEAK)
                .collect();
            assert_eq!(marked.len(), 1, "row {y}: {marked:?}");
            let x = marked[0];
            assert!((19..=20).contains(&x), "row {y} edge at {x}");
        }
    }

    #[test]
    fn edge_map_suppresses_borders() {
        let plane = ImagePlane::from_fn(24, 24, |x, y| ((x * 31 + y * 17) % 256) as f64);
        let edges = edge_map(&gray(plane), 5.0, 10.0).unwrap();
        for i in 0..24 {
            assert_eq!(edges.get(i, 0), 0.0);
            assert_eq!(edges.get(i, 23), 0.0);
            assert_eq!(edges.get(0, i), 0.0);
            assert_eq!(edges.get(23, i), 0.0);
        }
    }

    #[test]
    fn edge_map_hysteresis_extends_strong_edges() {
        // A step whose contrast fades with y: the strong section should pull
        // in the weak tail it connects to.
        let plane = ImagePlane::from_fn(24, 40, |x, y| {
            let contrast = 180.0 - 3.0 * y as f64;
            if x < 12 {
                20.0
            } else {
                20.0 + contrast.max(12.0)
            }
        });
        let img = gray(plane);
        let grad_peak = |edges: &ImagePlane| -> usize {
            edges.samples().iter().filter(|&&v| v > 0.0).count()
        };
        let with_hysteresis = edge_map(&img, 30.0, 300.0).unwrap();
        let strict_only = edge_map(&img, 299.0, 300.0).unwrap();
        assert!(grad_peak(&with_hysteresis) > grad_peak(&strict_only));
    }

    #[test]
    fn edge_map_rejects_inverted_thresholds() {
        let img = ColorImage::constant(8, 8, 0.0, ColorSpace::Srgb8);
        assert!(edge_map(&img, 50.0, 20.0).is_err());
        assert!(edge_map(&img, -1.0, 20.0).is_err());
    }
}
