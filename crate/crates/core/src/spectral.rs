//! 2D Fourier transform and the homomorphic high-emphasis filter.
//!
//! The forward transform is unnormalized (DC bin = sum of samples); the
//! inverse scales by 1/(W*H). Arbitrary sizes are supported directly via
//! mixed-radix/Bluestein plans, so no padding is ever introduced.

use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::color::luminance;
use crate::error::{Error, Result};
use crate::image::{ColorImage, ColorSpace, ImagePlane, NOMINAL_PEAK};

/// Where the DC bin sits in the grid layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DcPosition {
    /// DC at (0, 0); frequencies wrap (the native FFT layout).
    Corner,
    /// DC at (W/2, H/2) after an fft-shift.
    Centered,
}

/// Complex frequency grid produced by [`forward_dft2`].
#[derive(Debug, Clone)]
pub struct SpectralGrid {
    width: usize,
    height: usize,
    values: Vec<Complex64>,
    dc_position: DcPosition,
}

impl SpectralGrid {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dc_position(&self) -> DcPosition {
        self.dc_position
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    #[inline]
    pub fn get(&self, kx: usize, ky: usize) -> Complex64 {
        self.values[ky * self.width + kx]
    }

    /// Returns a copy with the DC bin moved to the grid center (fft-shift),
    /// mainly useful for spectrum dumps.
    pub fn centered(&self) -> SpectralGrid {
        assert_eq!(self.dc_position, DcPosition::Corner, "already centered");
        let (w, h) = (self.width, self.height);
        let mut values = vec![Complex64::default(); w * h];
        for ky in 0..h {
            for kx in 0..w {
                let sx = (kx + w / 2) % w;
                let sy = (ky + h / 2) % h;
                values[sy * w + sx] = self.get(kx, ky);
            }
        }
        SpectralGrid {
            width: w,
            height: h,
            values,
            dc_position: DcPosition::Centered,
        }
    }
}

fn transpose(values: &[Complex64], w: usize, h: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::default(); w * h];
    for y in 0..h {
        for x in 0..w {
            out[x * h + y] = values[y * w + x];
        }
    }
    out
}

fn fft2(values: &mut Vec<Complex64>, w: usize, h: usize, inverse: bool) {
    let mut planner = FftPlanner::new();
    let plan_w = if inverse {
        planner.plan_fft_inverse(w)
    } else {
        planner.plan_fft_forward(w)
    };
    values
        .par_chunks_mut(w)
        .for_each(|row| plan_w.process(row));

    let mut cols = transpose(values, w, h);
    let plan_h = if inverse {
        planner.plan_fft_inverse(h)
    } else {
        planner.plan_fft_forward(h)
    };
    cols.par_chunks_mut(h).for_each(|col| plan_h.process(col));
    *values = transpose(&cols, h, w);
}

/// Unnormalized forward 2D DFT; DC ends up at the corner.
pub fn forward_dft2(plane: &ImagePlane) -> SpectralGrid {
    let (w, h) = (plane.width(), plane.height());
    let mut values: Vec<Complex64> = plane
        .samples()
        .iter()
        .map(|&v| Complex64::new(v, 0.0))
        .collect();
    fft2(&mut values, w, h, false);
    SpectralGrid {
        width: w,
        height: h,
        values,
        dc_position: DcPosition::Corner,
    }
}

/// 1/(W*H)-normalized inverse; fails if the imaginary residue exceeds
/// 1e-6 of the peak magnitude (a sign the applied filter was not
/// conjugate-symmetric).
pub fn inverse_dft2(grid: &SpectralGrid) -> Result<ImagePlane> {
    assert_eq!(
        grid.dc_position,
        DcPosition::Corner,
        "inverse expects the corner-DC layout"
    );
    let (w, h) = (grid.width, grid.height);
    let mut values = grid.values.clone();
    fft2(&mut values, w, h, true);
    let scale = 1.0 / (w * h) as f64;
    let mut max_mag: f64 = 0.0;
    let mut max_im: f64 = 0.0;
    for v in values.iter_mut() {
        *v *= scale;
        max_mag = max_mag.max(v.norm());
        max_im = max_im.max(v.im.abs());
    }
    let limit = 1e-6 * max_mag;
    if max_mag > 0.0 && max_im > limit {
        return Err(Error::ResidualImaginaryTooLarge {
            residual: max_im,
            limit,
        });
    }
    Ok(ImagePlane::from_samples(
        w,
        h,
        values.iter().map(|v| v.re).collect(),
    ))
}

/// Channel policy for the homomorphic stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelPolicy {
    /// Filter R, G and B independently in the log domain.
    Rgb,
    /// Filter the luminance plane and rescale the channels by its gain.
    Luminance,
}

impl ChannelPolicy {
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rgb" => Some(Self::Rgb),
            "luminance" | "luma" => Some(Self::Luminance),
            _ => None,
        }
    }
}

impl std::fmt::Display for ChannelPolicy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Rgb => "rgb",
            Self::Luminance => "luminance",
        })
    }
}

/// Parameters of the high-emphasis gain and the log transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomomorphicParams {
    r_h: f64,
    r_l: f64,
    cutoff: f64,
    epsilon_log: f64,
}

impl HomomorphicParams {
    /// `cutoff` is the gain's width as a fraction of the Nyquist radius
    /// (0.5 * min(W, H) bins); the default 0.1 targets the slowly varying
    /// illumination field.
    pub fn new(r_h: f64, r_l: f64, cutoff: f64, epsilon_log: f64) -> Result<HomomorphicParams> {
        if !(r_h > r_l && r_l > 0.0) {
            return Err(Error::InvalidParams {
                reason: format!("gains must satisfy r_h > r_l > 0, got r_h={r_h}, r_l={r_l}"),
            });
        }
        if !(cutoff > 0.0) {
            return Err(Error::InvalidParams {
                reason: format!("cutoff must be positive, got {cutoff}"),
            });
        }
        if !(epsilon_log > 0.0) {
            return Err(Error::InvalidParams {
                reason: format!("epsilon_log must be positive, got {epsilon_log}"),
            });
        }
        Ok(HomomorphicParams {
            r_h,
            r_l,
            cutoff,
            epsilon_log,
        })
    }

    pub fn r_h(&self) -> f64 {
        self.r_h
    }

    pub fn r_l(&self) -> f64 {
        self.r_l
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    pub fn epsilon_log(&self) -> f64 {
        self.epsilon_log
    }

    /// Fixes the cutoff in frequency-bin units for a concrete image size.
    pub fn resolve(&self, width: usize, height: usize) -> ResolvedGain {
        let nyquist_radius = 0.5 * width.min(height) as f64;
        ResolvedGain {
            r_h: self.r_h,
            r_l: self.r_l,
            delta_w: self.cutoff * nyquist_radius,
        }
    }
}

impl Default for HomomorphicParams {
    fn default() -> Self {
        HomomorphicParams {
            r_h: 2.5,
            r_l: 0.5,
            cutoff: 0.1,
            epsilon_log: 1.0,
        }
    }
}

/// Gain shape with the cutoff already resolved to bin units.
#[derive(Debug, Clone, Copy)]
pub struct ResolvedGain {
    pub r_h: f64,
    pub r_l: f64,
    pub delta_w: f64,
}

/// High-emphasis gain at centered frequency (w_x, w_y):
/// (r_H - r_L) * (1 - exp(-(w_x^2 + w_y^2) / (2 delta_w^2))) + r_L.
pub fn high_emphasis_gain(w_x: f64, w_y: f64, g: &ResolvedGain) -> f64 {
    let r2 = w_x * w_x + w_y * w_y;
    (g.r_h - g.r_l) * (1.0 - (-r2 / (2.0 * g.delta_w * g.delta_w)).exp()) + g.r_l
}

// Wrapped distance of bin k from DC in an N-bin axis.
#[inline]
fn bin_distance(k: usize, n: usize) -> f64 {
    k.min(n - k) as f64
}

fn apply_gain(grid: &mut SpectralGrid, g: &ResolvedGain) {
    let (w, h) = (grid.width, grid.height);
    for ky in 0..h {
        let wy = bin_distance(ky, h);
        for kx in 0..w {
            let wx = bin_distance(kx, w);
            grid.values[ky * w + kx] *= high_emphasis_gain(wx, wy, g);
        }
    }
}

fn filter_plane(plane: &ImagePlane, eps: f64, g: &ResolvedGain) -> Result<ImagePlane> {
    let logged = plane.map(|v| (v + eps).ln());
    let mut grid = forward_dft2(&logged);
    apply_gain(&mut grid, g);
    let s = inverse_dft2(&grid)?;
    Ok(s.map(|v| v.exp() - eps))
}

/// Homomorphic illumination correction with independent RGB channels.
pub fn homomorphic_filter(img: &ColorImage, p: &HomomorphicParams) -> Result<ColorImage> {
    homomorphic_filter_policy(img, p, ChannelPolicy::Rgb)
}

/// Homomorphic filter with an explicit channel policy.
pub fn homomorphic_filter_policy(
    img: &ColorImage,
    p: &HomomorphicParams,
    policy: ChannelPolicy,
) -> Result<ColorImage> {
    img.expect_space(ColorSpace::Srgb8)?;
    let g = p.resolve(img.width(), img.height());
    let out = match policy {
        ChannelPolicy::Rgb => {
            let planes = img.planes();
            let filtered = [
                filter_plane(&planes[0], p.epsilon_log, &g)?,
                filter_plane(&planes[1], p.epsilon_log, &g)?,
                filter_plane(&planes[2], p.epsilon_log, &g)?,
            ];
            ColorImage::new(filtered, ColorSpace::Srgb8)
        }
        ChannelPolicy::Luminance => {
            let y = luminance(img)?;
            let yf = filter_plane(&y, p.epsilon_log, &g)?;
            let (w, h) = (img.width(), img.height());
            let ratio = ImagePlane::from_fn(w, h, |x, yy| {
                yf.get(x, yy) / y.get(x, yy).max(1e-12)
            });
            img.map_planes(ColorSpace::Srgb8, |pl| {
                ImagePlane::from_fn(w, h, |x, yy| pl.get(x, yy) * ratio.get(x, yy))
            })
        }
    };
    Ok(out.clamped(0.0, NOMINAL_PEAK))
}
