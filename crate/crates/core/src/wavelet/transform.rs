//! Separable 2D dyadic wavelet transform with periodic boundary extension.
//!
//! Odd-sized inputs are extended by one replicated sample before each
//! analysis split; the pre-extension dimensions are recorded per level so the
//! inverse can crop back exactly.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::image::ImagePlane;
use crate::wavelet::bank::FilterBank;

/// The three detail subbands of one decomposition level.
/// `lh` is lowpass along x / highpass along y (horizontal structure),
/// `hl` the transpose orientation, `hh` the diagonal.
#[derive(Debug, Clone)]
pub struct DetailBands {
    pub lh: ImagePlane,
    pub hl: ImagePlane,
    pub hh: ImagePlane,
}

/// LL residual plus detail subbands for levels 1..=J (index 0 = finest).
#[derive(Debug, Clone)]
pub struct WaveletPyramid {
    pub residual: ImagePlane,
    pub details: Vec<DetailBands>,
    level_dims: Vec<(usize, usize)>,
}

impl WaveletPyramid {
    pub fn levels(&self) -> usize {
        self.details.len()
    }

    /// Dimensions of the plane that entered the given level (1-based).
    pub fn level_input_dims(&self, level: usize) -> (usize, usize) {
        self.level_dims[level - 1]
    }

    /// Total coefficient count across residual and details.
    pub fn coefficient_count(&self) -> usize {
        self.residual.len()
            + self
                .details
                .iter()
                .map(|d| d.lh.len() + d.hl.len() + d.hh.len())
                .sum::<usize>()
    }
}

fn analyze_1d(x: &[f64], lo: &mut [f64], hi: &mut [f64], h: &[f64], g: &[f64]) {
    let n = x.len();
    for k in 0..n / 2 {
        let mut a = 0.0;
        let mut d = 0.0;
        for i in 0..h.len() {
            let v = x[(2 * k + i) % n];
            a += h[i] * v;
            d += g[i] * v;
        }
        lo[k] = a;
        hi[k] = d;
    }
}

fn synthesize_1d(lo: &[f64], hi: &[f64], out: &mut [f64], h: &[f64], g: &[f64]) {
    let n = out.len();
    out.fill(0.0);
    for k in 0..lo.len() {
        for i in 0..h.len() {
            let idx = (2 * k + i) % n;
            out[idx] += h[i] * lo[k] + g[i] * hi[k];
        }
    }
}

// Replicate the last column/row when a dimension is odd.
fn extend_even(p: &ImagePlane) -> ImagePlane {
    let (w, h) = (p.width(), p.height());
    let (we, he) = (w + w % 2, h + h % 2);
    if (we, he) == (w, h) {
        return p.clone();
    }
    ImagePlane::from_fn(we, he, |x, y| p.get(x.min(w - 1), y.min(h - 1)))
}

fn crop(p: &ImagePlane, w: usize, h: usize) -> ImagePlane {
    ImagePlane::from_fn(w, h, |x, y| p.get(x, y))
}

fn analyze_rows(p: &ImagePlane, bank: &FilterBank) -> (ImagePlane, ImagePlane) {
    let (w, h) = (p.width(), p.height());
    let half = w / 2;
    let mut lo = ImagePlane::new(half, h);
    let mut hi = ImagePlane::new(half, h);
    lo.samples_mut()
        .par_chunks_mut(half)
        .zip(hi.samples_mut().par_chunks_mut(half))
        .zip(p.samples().par_chunks(w))
        .for_each(|((l, d), x)| {
            analyze_1d(x, l, d, bank.lowpass_analysis(), bank.highpass_analysis())
        });
    (lo, hi)
}

fn analyze_cols(p: &ImagePlane, bank: &FilterBank) -> (ImagePlane, ImagePlane) {
    let (lo_t, hi_t) = analyze_rows(&p.transposed(), bank);
    (lo_t.transposed(), hi_t.transposed())
}

fn synthesize_rows(lo: &ImagePlane, hi: &ImagePlane, out_w: usize, bank: &FilterBank) -> ImagePlane {
    let h = lo.height();
    let half = lo.width();
    let mut out = ImagePlane::new(out_w, h);
    out.samples_mut()
        .par_chunks_mut(out_w)
        .zip(lo.samples().par_chunks(half))
        .zip(hi.samples().par_chunks(half))
        .for_each(|((o, l), d)| {
            synthesize_1d(l, d, o, bank.lowpass_analysis(), bank.highpass_analysis())
        });
    out
}

fn synthesize_cols(lo: &ImagePlane, hi: &ImagePlane, out_h: usize, bank: &FilterBank) -> ImagePlane {
    synthesize_rows(&lo.transposed(), &hi.transposed(), out_h, bank).transposed()
}

/// Forward transform over `levels` dyadic scales.
pub fn dwt2_forward(plane: &ImagePlane, bank: &FilterBank, levels: usize) -> Result<WaveletPyramid> {
    let min_dim = plane.width().min(plane.height());
    if levels == 0 {
        return Err(Error::InvalidParams {
            reason: "levels must be >= 1".into(),
        });
    }
    if levels >= usize::BITS as usize || (1usize << levels) > min_dim {
        return Err(Error::TooManyLevels { levels, min_dim });
    }

    let mut current = plane.clone();
    let mut details = Vec::with_capacity(levels);
    let mut level_dims = Vec::with_capacity(levels);
    for _ in 0..levels {
        level_dims.push((current.width(), current.height()));
        let ext = extend_even(&current);
        let (l, h) = analyze_rows(&ext, bank);
        let (ll, lh) = analyze_cols(&l, bank);
        let (hl, hh) = analyze_cols(&h, bank);
        details.push(DetailBands { lh, hl, hh });
        current = ll;
    }
    Ok(WaveletPyramid {
        residual: current,
        details,
        level_dims,
    })
}

/// Inverse transform; exact to ~1e-12 for pyramids produced by
/// [`dwt2_forward`] with the same bank.
pub fn dwt2_inverse(pyr: &WaveletPyramid, bank: &FilterBank) -> Result<ImagePlane> {
    let mut current = pyr.residual.clone();
    for level in (0..pyr.details.len()).rev() {
        let (w, h) = pyr.level_dims[level];
        let (we, he) = (w + w % 2, h + h % 2);
        let (sw, sh) = (we / 2, he / 2);
        let bands = &pyr.details[level];
        for (name, b) in [
            ("ll", &current),
            ("lh", &bands.lh),
            ("hl", &bands.hl),
            ("hh", &bands.hh),
        ] {
            if b.width() != sw || b.height() != sh {
                return Err(Error::BankMismatch {
                    reason: format!(
                        "level {} subband {name} is {}x{}, expected {sw}x{sh}",
                        level + 1,
                        b.width(),
                        b.height()
                    ),
                });
            }
        }
        let l = synthesize_cols(&current, &bands.lh, he, bank);
        let h_plane = synthesize_cols(&bands.hl, &bands.hh, he, bank);
        let ext = synthesize_rows(&l, &h_plane, we, bank);
        current = if (we, he) == (w, h) {
            ext
        } else {
            crop(&ext, w, h)
        };
    }
    Ok(current)
}
