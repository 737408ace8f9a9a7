//! Edge-preserving spatial smoothers operating in CIELAB: a direct bilateral
//! filter and Perona-Malik anisotropic diffusion.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::image::{ColorImage, ColorSpace, ImagePlane};

/// Parameters for the bilateral filter. Distances for the range kernel are
/// Euclidean in Lab, so `sigma_r` is expressed in Lab units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BilateralParams {
    sigma_d: f64,
    sigma_r: f64,
    radius: usize,
}

impl BilateralParams {
    pub fn new(sigma_d: f64, sigma_r: f64) -> Result<Self> {
        if !(sigma_d > 0.0) || !sigma_d.is_finite() {
            return Err(Error::InvalidParams {
                reason: format!("bilateral sigma_d must be positive and finite, got {sigma_d}"),
            });
        }
        if !(sigma_r > 0.0) || !sigma_r.is_finite() {
            return Err(Error::InvalidParams {
                reason: format!("bilateral sigma_r must be positive and finite, got {sigma_r}"),
            });
        }
        Ok(Self {
            sigma_d,
            sigma_r,
            radius: (3.0 * sigma_d).ceil() as usize,
        })
    }

    /// Overrides the window radius chosen from `sigma_d`.
    pub fn with_radius(mut self, radius: usize) -> Result<Self> {
        if radius == 0 {
            return Err(Error::InvalidParams {
                reason: "bilateral radius must be at least 1".into(),
            });
        }
        self.radius = radius;
        Ok(self)
    }

    pub fn sigma_d(&self) -> f64 {
        self.sigma_d
    }

    pub fn sigma_r(&self) -> f64 {
        self.sigma_r
    }

    pub fn radius(&self) -> usize {
        self.radius
    }
}

impl Default for BilateralParams {
    fn default() -> Self {
        Self::new(1.0, 10.0).unwrap()
    }
}

/// Direct-form bilateral filter over a (2r+1)^2 window. The closeness kernel
/// is Gaussian in pixel distance; the similarity kernel is Gaussian in the
/// joint Lab color distance, and one weight is shared by all three channels.
/// Borders are handled by edge replication.
pub fn bilateral_filter(img: &ColorImage, params: &BilateralParams) -> Result<ColorImage> {
    img.expect_space(ColorSpace::CieLab)?;
    let (w, h) = (img.width(), img.height());
    let r = params.radius as isize;
    let inv_two_sd2 = 1.0 / (2.0 * params.sigma_d * params.sigma_d);
    let inv_two_sr2 = 1.0 / (2.0 * params.sigma_r * params.sigma_r);

    // Closeness weights depend only on the offset; precompute the window.
    let side = 2 * params.radius + 1;
    let mut closeness = vec![0.0f64; side * side];
    for dy in -r..=r {
        for dx in -r..=r {
            let d2 = (dx * dx + dy * dy) as f64;
            closeness[(dy + r) as usize * side + (dx + r) as usize] =
                (-d2 * inv_two_sd2).exp();
        }
    }

    let planes = img.planes();
    let src: [&ImagePlane; 3] = [&planes[0], &planes[1], &planes[2]];
    let mut out = [
        vec![0.0f64; w * h],
        vec![0.0f64; w * h],
        vec![0.0f64; w * h],
    ];
    let (o0, rest) = out.split_at_mut(1);
    let (o1, o2) = rest.split_at_mut(1);

    o0[0]
        .par_chunks_mut(w)
        .zip(o1[0].par_chunks_mut(w))
        .zip(o2[0].par_chunks_mut(w))
        .enumerate()
        .for_each(|(y, ((row0, row1), row2))| {
            let y = y as isize;
            for x in 0..w as isize {
                let center = [
                    src[0].get(x as usize, y as usize),
                    src[1].get(x as usize, y as usize),
                    src[2].get(x as usize, y as usize),
                ];
                // Accumulate deviations from the center value so a constant
                // neighborhood reproduces the center exactly.
                let mut num = [0.0f64; 3];
                let mut den = 0.0f64;
                for dy in -r..=r {
                    for dx in -r..=r {
                        let p = [
                            src[0].get_clamped(x + dx, y + dy),
                            src[1].get_clamped(x + dx, y + dy),
                            src[2].get_clamped(x + dx, y + dy),
                        ];
                        let dl = p[0] - center[0];
                        let da = p[1] - center[1];
                        let db = p[2] - center[2];
                        let color_d2 = dl * dl + da * da + db * db;
                        let wgt = closeness[(dy + r) as usize * side + (dx + r) as usize]
                            * (-color_d2 * inv_two_sr2).exp();
                        num[0] += wgt * dl;
                        num[1] += wgt * da;
                        num[2] += wgt * db;
                        den += wgt;
                    }
                }
                // den >= 1: the center contributes weight exactly 1.
                row0[x as usize] = center[0] + num[0] / den;
                row1[x as usize] = center[1] + num[1] / den;
                row2[x as usize] = center[2] + num[2] / den;
            }
        });

    let [p0, p1, p2] = out;
    Ok(ColorImage::new(
        [
            ImagePlane::from_samples(w, h, p0),
            ImagePlane::from_samples(w, h, p1),
            ImagePlane::from_samples(w, h, p2),
        ],
        ColorSpace::CieLab,
    ))
}

/// Conductance function for anisotropic diffusion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Conductance {
    /// g(x) = exp(-(x / kappa)^2); favors high-contrast edges.
    Exponential,
    /// g(x) = 1 / (1 + (x / kappa)^2); favors wide regions.
    Rational,
}

impl Conductance {
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "exp" | "exponential" => Some(Self::Exponential),
            "rational" => Some(Self::Rational),
            _ => None,
        }
    }

    fn eval(self, grad: f64, kappa: f64) -> f64 {
        let t = grad / kappa;
        match self {
            Self::Exponential => (-(t * t)).exp(),
            Self::Rational => 1.0 / (1.0 + t * t),
        }
    }
}

impl std::fmt::Display for Conductance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Exponential => "exp",
            Self::Rational => "rational",
        })
    }
}

/// Parameters for Perona-Malik diffusion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffusionParams {
    iterations: usize,
    lambda: f64,
    kappa: f64,
    conductance: Conductance,
}

impl DiffusionParams {
    pub fn new(
        iterations: usize,
        lambda: f64,
        kappa: f64,
        conductance: Conductance,
    ) -> Result<Self> {
        if iterations == 0 {
            return Err(Error::InvalidParams {
                reason: "diffusion iterations must be at least 1".into(),
            });
        }
        if !(lambda > 0.0 && lambda <= 0.25) {
            return Err(Error::InvalidParams {
                reason: format!("diffusion lambda must lie in (0, 0.25], got {lambda}"),
            });
        }
        if !(kappa > 0.0) || !kappa.is_finite() {
            return Err(Error::InvalidParams {
                reason: format!("diffusion kappa must be positive and finite, got {kappa}"),
            });
        }
        Ok(Self {
            iterations,
            lambda,
            kappa,
            conductance,
        })
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn conductance(&self) -> Conductance {
        self.conductance
    }
}

impl Default for DiffusionParams {
    fn default() -> Self {
        Self::new(15, 0.15, 10.0, Conductance::Exponential).unwrap()
    }
}

fn diffuse_plane(plane: &ImagePlane, params: &DiffusionParams) -> ImagePlane {
    let (w, h) = (plane.width(), plane.height());
    let mut cur = plane.samples().to_vec();
    let mut next = vec![0.0f64; w * h];
    for _ in 0..params.iterations {
        next.par_chunks_mut(w).enumerate().for_each(|(y, row)| {
            for x in 0..w {
                let c = cur[y * w + x];
                // Replicated borders: outward differences vanish, so the
                // scheme conserves the image mean.
                let north = if y > 0 { cur[(y - 1) * w + x] } else { c } - c;
                let south = if y + 1 < h { cur[(y + 1) * w + x] } else { c } - c;
                let west = if x > 0 { cur[y * w + x - 1] } else { c } - c;
                let east = if x + 1 < w { cur[y * w + x + 1] } else { c } - c;
                let flux = params.conductance.eval(north.abs(), params.kappa) * north
                    + params.conductance.eval(south.abs(), params.kappa) * south
                    + params.conductance.eval(west.abs(), params.kappa) * west
                    + params.conductance.eval(east.abs(), params.kappa) * east;
                row[x] = c + params.lambda * flux;
            }
        });
        std::mem::swap(&mut cur, &mut next);
    }
    ImagePlane::from_samples(w, h, cur)
}

/// Perona-Malik anisotropic diffusion applied per Lab channel.
pub fn anisotropic_diffusion(img: &ColorImage, params: &DiffusionParams) -> Result<ColorImage> {
    img.expect_space(ColorSpace::CieLab)?;
    Ok(img.map_planes(ColorSpace::CieLab, |p| diffuse_plane(p, params)))
}

/// Separable Gaussian blur with a truncated, renormalized kernel and
/// edge-replicated borders.
pub fn gaussian_blur(plane: &ImagePlane, sigma: f64, radius: usize) -> ImagePlane {
    assert!(sigma > 0.0 && radius > 0, "blur needs sigma > 0 and radius > 0");
    let mut kernel = vec![0.0f64; 2 * radius + 1];
    let mut sum = 0.0;
    for (i, k) in kernel.iter_mut().enumerate() {
        let d = i as f64 - radius as f64;
        *k = (-d * d / (2.0 * sigma * sigma)).exp();
        sum += *k;
    }
    for k in &mut kernel {
        *k /= sum;
    }

    let pass = |p: &ImagePlane| {
        let (w, h) = (p.width(), p.height());
        let r = radius as isize;
        let mut out = vec![0.0f64; w * h];
        out.par_chunks_mut(w).enumerate().for_each(|(y, row)| {
            for x in 0..w as isize {
                let mut acc = 0.0;
                for (i, &k) in kernel.iter().enumerate() {
                    acc += k * p.get_clamped(x + i as isize - r, y as isize);
                }
                row[x as usize] = acc;
            }
        });
        ImagePlane::from_samples(w, h, out)
    };
    // Horizontal pass, then the same pass on the transpose for vertical.
    pass(&pass(plane).transposed()).transposed()
}
