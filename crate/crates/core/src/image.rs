use crate::error::{Error, Result};

/// Peak sample value of the 8-bit scaled representation.
pub const NOMINAL_PEAK: f64 = 255.0;

/// Single-channel 2D grid of real-valued samples, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ImagePlane {
    width: usize,
    height: usize,
    samples: Vec<f64>,
}

impl ImagePlane {
    /// Zero-filled plane. Panics if either dimension is 0.
    pub fn new(width: usize, height: usize) -> ImagePlane {
        assert!(width >= 1 && height >= 1, "plane dimensions must be >= 1");
        ImagePlane {
            width,
            height,
            samples: vec![0.0; width * height],
        }
    }

    /// Wraps existing samples. Panics if the length is not width*height.
    pub fn from_samples(width: usize, height: usize, samples: Vec<f64>) -> ImagePlane {
        assert!(width >= 1 && height >= 1, "plane dimensions must be >= 1");
        assert_eq!(
            samples.len(),
            width * height,
            "sample count must equal width*height"
        );
        ImagePlane {
            width,
            height,
            samples,
        }
    }

    /// Builds a plane by evaluating f at every (x, y).
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> ImagePlane {
        let mut samples = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                samples.push(f(x, y));
            }
        }
        ImagePlane::from_samples(width, height, samples)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        false // width and height are always >= 1
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.samples[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: f64) {
        self.samples[y * self.width + x] = v;
    }

    /// Sample with indices clamped to the plane (edge replication).
    #[inline]
    pub fn get_clamped(&self, x: isize, y: isize) -> f64 {
        let xc = x.clamp(0, self.width as isize - 1) as usize;
        let yc = y.clamp(0, self.height as isize - 1) as usize;
        self.get(xc, yc)
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [f64] {
        &mut self.samples
    }

    pub fn row(&self, y: usize) -> &[f64] {
        &self.samples[y * self.width..(y + 1) * self.width]
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> ImagePlane {
        ImagePlane {
            width: self.width,
            height: self.height,
            samples: self.samples.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn transposed(&self) -> ImagePlane {
        let mut out = ImagePlane::new(self.height, self.width);
        for y in 0..self.height {
            for x in 0..self.width {
                out.set(y, x, self.get(x, y));
            }
        }
        out
    }

    pub fn min_max(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &v in &self.samples {
            if v < lo {
                lo = v;
            }
            if v > hi {
                hi = v;
            }
        }
        (lo, hi)
    }

    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.samples.len() as f64
    }
}

/// Color space tag carried by every ColorImage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColorSpace {
    /// 8-bit sRGB stored as real values on the 0-255 scale.
    Srgb8,
    LinearRgb,
    CieLab,
    LogDomain,
}

impl std::fmt::Display for ColorSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            ColorSpace::Srgb8 => "sRGB (0-255)",
            ColorSpace::LinearRgb => "linear RGB",
            ColorSpace::CieLab => "CIELab",
            ColorSpace::LogDomain => "log domain",
        };
        f.write_str(name)
    }
}

/// Three equally sized planes plus the color space they live in.
#[derive(Debug, Clone, PartialEq)]
pub struct ColorImage {
    planes: [ImagePlane; 3],
    space: ColorSpace,
}

impl ColorImage {
    /// Panics if the planes disagree on dimensions.
    pub fn new(planes: [ImagePlane; 3], space: ColorSpace) -> ColorImage {
        let (w, h) = (planes[0].width(), planes[0].height());
        assert!(
            planes.iter().all(|p| p.width() == w && p.height() == h),
            "all three planes must share dimensions"
        );
        ColorImage { planes, space }
    }

    /// Replicates one plane across all three channels.
    pub fn from_plane(plane: ImagePlane, space: ColorSpace) -> ColorImage {
        ColorImage::new([plane.clone(), plane.clone(), plane], space)
    }

    pub fn constant(width: usize, height: usize, value: f64, space: ColorSpace) -> ColorImage {
        let p = ImagePlane::from_fn(width, height, |_, _| value);
        ColorImage::from_plane(p, space)
    }

    pub fn width(&self) -> usize {
        self.planes[0].width()
    }

    pub fn height(&self) -> usize {
        self.planes[0].height()
    }

    pub fn pixel_count(&self) -> usize {
        self.width() * self.height()
    }

    pub fn space(&self) -> ColorSpace {
        self.space
    }

    pub fn nominal_peak(&self) -> f64 {
        NOMINAL_PEAK
    }

    pub fn planes(&self) -> &[ImagePlane; 3] {
        &self.planes
    }

    pub fn planes_mut(&mut self) -> &mut [ImagePlane; 3] {
        &mut self.planes
    }

    pub fn plane(&self, c: usize) -> &ImagePlane {
        &self.planes[c]
    }

    /// Rebuilds the image with each plane mapped independently.
    pub fn map_planes(&self, space: ColorSpace, f: impl Fn(&ImagePlane) -> ImagePlane) -> ColorImage {
        ColorImage::new(
            [f(&self.planes[0]), f(&self.planes[1]), f(&self.planes[2])],
            space,
        )
    }

    /// Per-pixel map over the three channels jointly.
    pub fn map_pixels(&self, space: ColorSpace, f: impl Fn([f64; 3]) -> [f64; 3]) -> ColorImage {
        let (w, h) = (self.width(), self.height());
        let mut out = [
            ImagePlane::new(w, h),
            ImagePlane::new(w, h),
            ImagePlane::new(w, h),
        ];
        for y in 0..h {
            for x in 0..w {
                let px = f([
                    self.planes[0].get(x, y),
                    self.planes[1].get(x, y),
                    self.planes[2].get(x, y),
                ]);
                for c in 0..3 {
                    out[c].set(x, y, px[c]);
                }
            }
        }
        ColorImage::new(out, space)
    }

    pub fn expect_space(&self, expected: ColorSpace) -> Result<()> {
        if self.space == expected {
            Ok(())
        } else {
            Err(Error::WrongColorSpace {
                expected: expected.to_string(),
                found: self.space.to_string(),
            })
        }
    }

    pub fn expect_same_shape(&self, other: &ColorImage) -> Result<()> {
        if self.width() != other.width() || self.height() != other.height() {
            return Err(Error::DimensionMismatch {
                a_width: self.width(),
                a_height: self.height(),
                b_width: other.width(),
                b_height: other.height(),
            });
        }
        Ok(())
    }

    /// Clamps every sample into [lo, hi].
    pub fn clamped(&self, lo: f64, hi: f64) -> ColorImage {
        self.map_planes(self.space, |p| p.map(|v| v.clamp(lo, hi)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plane_roundtrips_samples() {
        let p = ImagePlane::from_fn(3, 2, |x, y| (y * 3 + x) as f64);
        assert_eq!(p.get(0, 0), 0.0);
        assert_eq!(p.get(2, 1), 5.0);
        assert_eq!(p.row(1), &[3.0, 4.0, 5.0]);
    }

    #[test]
    #[should_panic]
    fn plane_rejects_bad_length() {
        ImagePlane::from_samples(2, 2, vec![0.0; 3]);
    }

    #[test]
    fn clamped_sampling_replicates_edges() {
        let p = ImagePlane::from_fn(2, 2, |x, y| (y * 2 + x) as f64);
        assert_eq!(p.get_clamped(-5, 0), 0.0);
        assert_eq!(p.get_clamped(7, 7), 3.0);
    }

    #[test]
    fn transpose_is_involutive() {
        let p = ImagePlane::from_fn(4, 3, |x, y| (x * 7 + y) as f64);
        assert_eq!(p.transposed().transposed(), p);
    }

    #[test]
    fn color_image_checks_space() {
        let img = ColorImage::constant(2, 2, 1.0, ColorSpace::Srgb8);
        assert!(img.expect_space(ColorSpace::Srgb8).is_ok());
        assert!(matches!(
            img.expect_space(ColorSpace::CieLab),
            Err(Error::WrongColorSpace { .. })
        ));
    }

    #[test]
    #[should_panic]
    fn color_image_rejects_mismatched_planes() {
        ColorImage::new(
            [
                ImagePlane::new(2, 2),
                ImagePlane::new(2, 2),
                ImagePlane::new(3, 2),
            ],
            ColorSpace::Srgb8,
        );
    }
}
