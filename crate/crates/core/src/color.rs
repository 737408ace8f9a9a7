//! sRGB <-> CIELab conversions (D65 white, 2 degree observer) and luminance.

use crate::error::Result;
use crate::image::{ColorImage, ColorSpace, ImagePlane, NOMINAL_PEAK};

const SRGB_TO_XYZ: [[f64; 3]; 3] = [
    [0.4124564, 0.3575761, 0.1804375],
    [0.2126729, 0.7151522, 0.0721750],
    [0.0193339, 0.1191920, 0.9503041],
];

const XYZ_TO_SRGB: [[f64; 3]; 3] = [
    [3.2404542, -1.5371385, -0.4985314],
    [-0.9692660, 1.8760108, 0.0415560],
    [0.0556434, -0.2040259, 1.0572252],
];

const WHITE_POINT: [f64; 3] = [0.95047, 1.0, 1.08883];

fn srgb_decode(c: f64) -> f64 {
    if c <= 0.04045 {
        c / 12.92
    } else {
        ((c + 0.055) / 1.055).powf(2.4)
    }
}

fn srgb_encode(c: f64) -> f64 {
    if c <= 0.0031308 {
        c * 12.92
    } else {
        1.055 * c.powf(1.0 / 2.4) - 0.055
    }
}

// Lab companding function and its inverse, with the linear segment below (6/29)^3.
fn lab_f(t: f64) -> f64 {
    const DELTA: f64 = 6.0 / 29.0;
    if t > DELTA * DELTA * DELTA {
        t.cbrt()
    } else {
        t / (3.0 * DELTA * DELTA) + 4.0 / 29.0
    }
}

fn lab_f_inv(ft: f64) -> f64 {
    const DELTA: f64 = 6.0 / 29.0;
    if ft > DELTA {
        ft * ft * ft
    } else {
        3.0 * DELTA * DELTA * (ft - 4.0 / 29.0)
    }
}

fn mat_mul(m: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    [
        m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
        m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
        m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
    ]
}

pub fn srgb_pixel_to_lab(rgb: [f64; 3]) -> [f64; 3] {
    let lin = [
        srgb_decode(rgb[0] / NOMINAL_PEAK),
        srgb_decode(rgb[1] / NOMINAL_PEAK),
        srgb_decode(rgb[2] / NOMINAL_PEAK),
    ];
    let xyz = mat_mul(&SRGB_TO_XYZ, lin);
    let fx = lab_f(xyz[0] / WHITE_POINT[0]);
    let fy = lab_f(xyz[1] / WHITE_POINT[1]);
    let fz = lab_f(xyz[2] / WHITE_POINT[2]);
    [116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)]
}

pub fn lab_pixel_to_srgb(lab: [f64; 3]) -> [f64; 3] {
    let fy = (lab[0] + 16.0) / 116.0;
    let fx = fy + lab[1] / 500.0;
    let fz = fy - lab[2] / 200.0;
    let xyz = [
        WHITE_POINT[0] * lab_f_inv(fx),
        WHITE_POINT[1] * lab_f_inv(fy),
        WHITE_POINT[2] * lab_f_inv(fz),
    ];
    let lin = mat_mul(&XYZ_TO_SRGB, xyz);
    [
        (srgb_encode(lin[0].max(0.0)) * NOMINAL_PEAK).clamp(0.0, NOMINAL_PEAK),
        (srgb_encode(lin[1].max(0.0)) * NOMINAL_PEAK).clamp(0.0, NOMINAL_PEAK),
        (srgb_encode(lin[2].max(0.0)) * NOMINAL_PEAK).clamp(0.0, NOMINAL_PEAK),
    ]
}

/// sRGB (0-255) to CIELab via linear RGB and XYZ.
pub fn srgb_to_lab(img: &ColorImage) -> Result<ColorImage> {
    img.expect_space(ColorSpace::Srgb8)?;
    Ok(img.map_pixels(ColorSpace::CieLab, srgb_pixel_to_lab))
}

/// CIELab back to sRGB (0-255); out-of-gamut values are clamped.
pub fn lab_to_srgb(img: &ColorImage) -> Result<ColorImage> {
    img.expect_space(ColorSpace::CieLab)?;
    Ok(img.map_pixels(ColorSpace::Srgb8, lab_pixel_to_srgb))
}

/// Rec. 601 luminance of an sRGB image, on the 0-255 scale.
pub fn luminance(img: &ColorImage) -> Result<ImagePlane> {
    img.expect_space(ColorSpace::Srgb8)?;
    let (r, g, b) = (img.plane(0), img.plane(1), img.plane(2));
    Ok(ImagePlane::from_fn(img.width(), img.height(), |x, y| {
        0.299 * r.get(x, y) + 0.587 * g.get(x, y) + 0.114 * b.get(x, y)
    }))
}
