//! Binary PPM (P6) and PGM (P5) codec, maxval 255, bit-exact round trips.

use std::path::Path;

use crate::error::{Error, Result};
use crate::image::{ColorImage, ColorSpace, ImagePlane};

fn malformed(path: &Path, reason: impl Into<String>) -> Error {
    Error::MalformedHeader {
        path: path.to_path_buf(),
        reason: reason.into(),
    }
}

struct TokenReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> TokenReader<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        TokenReader { bytes, pos: 0 }
    }

    // Skips whitespace and '#' comments between header tokens.
    fn skip_separators(&mut self) {
        while self.pos < self.bytes.len() {
            let b = self.bytes[self.pos];
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else if b == b'#' {
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else {
                break;
            }
        }
    }

    fn token(&mut self) -> Option<&'a [u8]> {
        self.skip_separators();
        let start = self.pos;
        while self.pos < self.bytes.len() && !self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if self.pos > start {
            Some(&self.bytes[start..self.pos])
        } else {
            None
        }
    }

    fn number(&mut self) -> Option<usize> {
        let tok = self.token()?;
        std::str::from_utf8(tok).ok()?.parse().ok()
    }

    // Position of the raster: exactly one whitespace byte after the maxval token.
    fn raster(&mut self) -> &'a [u8] {
        let start = (self.pos + 1).min(self.bytes.len());
        &self.bytes[start..]
    }
}

pub fn decode(bytes: &[u8], path: &Path) -> Result<ColorImage> {
    let mut rd = TokenReader::new(bytes);
    let magic = rd
        .token()
        .ok_or_else(|| malformed(path, "missing magic number"))?;
    let channels = match magic {
        b"P6" => 3,
        b"P5" => 1,
        other => {
            return Err(Error::UnsupportedFormat {
                path: path.to_path_buf(),
                reason: format!(
                    "magic {:?} is not P5 or P6",
                    String::from_utf8_lossy(other)
                ),
            })
        }
    };
    let width = rd.number().ok_or_else(|| malformed(path, "bad width"))?;
    let height = rd.number().ok_or_else(|| malformed(path, "bad height"))?;
    if width == 0 || height == 0 {
        return Err(malformed(path, "zero dimension"));
    }
    let maxval = rd.number().ok_or_else(|| malformed(path, "bad maxval"))?;
    if maxval != 255 {
        return Err(Error::UnsupportedFormat {
            path: path.to_path_buf(),
            reason: format!("maxval {maxval} (only 255 is supported)"),
        });
    }
    let raster = rd.raster();
    let need = width * height * channels;
    if raster.len() < need {
        return Err(malformed(
            path,
            format!("raster has {} bytes, needs {need}", raster.len()),
        ));
    }

    if channels == 1 {
        let plane = ImagePlane::from_samples(
            width,
            height,
            raster[..need].iter().map(|&b| b as f64).collect(),
        );
        Ok(ColorImage::from_plane(plane, ColorSpace::Srgb8))
    } else {
        let mut planes = [
            ImagePlane::new(width, height),
            ImagePlane::new(width, height),
            ImagePlane::new(width, height),
        ];
        for (i, px) in raster[..need].chunks_exact(3).enumerate() {
            let (x, y) = (i % width, i / width);
            for c in 0..3 {
                planes[c].set(x, y, px[c] as f64);
            }
        }
        Ok(ColorImage::new(planes, ColorSpace::Srgb8))
    }
}

/// Clamp to [0, 255] then round half-up to a byte.
pub fn quantize(v: f64) -> u8 {
    (v.clamp(0.0, 255.0) + 0.5).floor().min(255.0) as u8
}

pub fn encode_p6(img: &ColorImage) -> Vec<u8> {
    let (w, h) = (img.width(), img.height());
    let mut out = format!("P6\n{w} {h}\n255\n").into_bytes();
    out.reserve(w * h * 3);
    for y in 0..h {
        for x in 0..w {
            for c in 0..3 {
                out.push(quantize(img.plane(c).get(x, y)));
            }
        }
    }
    out
}

pub fn encode_p5(plane: &ImagePlane) -> Vec<u8> {
    let (w, h) = (plane.width(), plane.height());
    let mut out = format!("P5\n{w} {h}\n255\n").into_bytes();
    out.extend(plane.samples().iter().map(|&v| quantize(v)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::PathBuf;

    fn p() -> PathBuf {
        PathBuf::from("test.ppm")
    }

    #[test]
    fn decodes_red_p6() {
        let mut bytes = b"P6\n2 2\n255\n".to_vec();
        bytes.extend_from_slice(&[255, 0, 0, 255, 0, 0, 255, 0, 0, 255, 0, 0]);
        let img = decode(&bytes, &p()).unwrap();
        assert_eq!(img.plane(0).samples(), &[255.0; 4]);
        assert_eq!(img.plane(1).samples(), &[0.0; 4]);
        assert_eq!(img.plane(2).samples(), &[0.0; 4]);
    }

    #[test]
    fn grayscale_replicates_to_three_planes() {
        let bytes = b"P5\n1 1\n255\n\x80".to_vec();
        let img = decode(&bytes, &p()).unwrap();
        for c in 0..3 {
            assert_eq!(img.plane(c).get(0, 0), 128.0);
        }
    }

    #[test]
    fn truncated_body_is_malformed() {
        let mut bytes = b"P6\n2 2\n255\n".to_vec();
        bytes.extend_from_slice(&[255, 0, 0]);
        assert!(matches!(
            decode(&bytes, &p()),
            Err(Error::MalformedHeader { .. })
        ));
    }

    #[test]
    fn comments_in_header_are_skipped() {
        let mut bytes = b"P6 # a comment\n# another\n1 1\n255\n".to_vec();
        bytes.extend_from_slice(&[1, 2, 3]);
        let img = decode(&bytes, &p()).unwrap();
        assert_eq!(img.plane(2).get(0, 0), 3.0);
    }

    #[test]
    fn nonstandard_maxval_is_unsupported() {
        let bytes = b"P5\n1 1\n65535\n\x00\x00".to_vec();
        assert!(matches!(
            decode(&bytes, &p()),
            Err(Error::UnsupportedFormat { .. })
        ));
    }

    #[test]
    fn quantize_rounds_half_up() {
        assert_eq!(quantize(127.5), 128);
        assert_eq!(quantize(127.49), 127);
        assert_eq!(quantize(-3.0), 0);
        assert_eq!(quantize(300.0), 255);
        assert_eq!(quantize(254.5), 255);
        assert_eq!(quantize(255.0), 255);
    }

    #[test]
    fn encode_decode_roundtrip_is_exact() {
        let img = ColorImage::new(
            [
                ImagePlane::from_fn(3, 2, |x, y| (x * 40 + y) as f64),
                ImagePlane::from_fn(3, 2, |x, y| (x + y * 90) as f64),
                ImagePlane::from_fn(3, 2, |x, _| (x * 100) as f64),
            ],
            ColorSpace::Srgb8,
        );
        let back = decode(&encode_p6(&img), &p()).unwrap();
        assert_eq!(back, img);
    }
}
