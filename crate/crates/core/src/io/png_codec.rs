//! Optional PNG support: 8-bit RGB or grayscale, no alpha, no 16-bit.

use std::path::Path;

use crate::error::{Error, Result};
use crate::image::{ColorImage, ColorSpace, ImagePlane};
use crate::io::ppm::quantize;

fn unsupported(path: &Path, reason: impl Into<String>) -> Error {
    Error::UnsupportedFormat {
        path: path.to_path_buf(),
        reason: reason.into(),
    }
}

pub fn decode(bytes: &[u8], path: &Path) -> Result<ColorImage> {
    let decoder = png::Decoder::new(bytes);
    let mut reader = decoder.read_info().map_err(|e| Error::MalformedHeader {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })?;
    let mut buf = vec![0u8; reader.output_buffer_size()];
    let info = reader.next_frame(&mut buf).map_err(|e| Error::MalformedHeader {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })?;
    if info.bit_depth != png::BitDepth::Eight {
        return Err(unsupported(path, format!("bit depth {:?}", info.bit_depth)));
    }
    let (width, height) = (info.width as usize, info.height as usize);
    let data = &buf[..info.buffer_size()];
    match info.color_type {
        png::ColorType::Grayscale => {
            let plane = ImagePlane::from_samples(
                width,
                height,
                data.iter().map(|&b| b as f64).collect(),
            );
            Ok(ColorImage::from_plane(plane, ColorSpace::Srgb8))
        }
        png::ColorType::Rgb => {
            let mut planes = [
                ImagePlane::new(width, height),
                ImagePlane::new(width, height),
                ImagePlane::new(width, height),
            ];
            for (i, px) in data.chunks_exact(3).enumerate() {
                let (x, y) = (i % width, i / width);
                for c in 0..3 {
                    planes[c].set(x, y, px[c] as f64);
                }
            }
            Ok(ColorImage::new(planes, ColorSpace::Srgb8))
        }
        other => Err(unsupported(path, format!("color type {other:?}"))),
    }
}

pub fn encode(img: &ColorImage, path: &Path) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    {
        let mut encoder = png::Encoder::new(&mut out, img.width() as u32, img.height() as u32);
        encoder.set_color(png::ColorType::Rgb);
        encoder.set_depth(png::BitDepth::Eight);
        let mut writer = encoder.write_header().map_err(|e| Error::Io {
            path: path.to_path_buf(),
            source: std::io::Error::other(e.to_string()),
        })?;
        let mut data = Vec::with_capacity(img.pixel_count() * 3);
        for y in 0..img.height() {
            for x in 0..img.width() {
                for c in 0..3 {
                    data.push(quantize(img.plane(c).get(x, y)));
                }
            }
        }
        writer.write_image_data(&data).map_err(|e| Error::Io {
            path: path.to_path_buf(),
            source: std::io::Error::other(e.to_string()),
        })?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::PathBuf;

    #[test]
    fn png_roundtrip_preserves_samples() {
        let img = ColorImage::new(
            [
                ImagePlane::from_fn(5, 4, |x, y| (x * 13 + y * 7) as f64),
                ImagePlane::from_fn(5, 4, |x, y| (x + y) as f64),
                ImagePlane::from_fn(5, 4, |x, _| (x * 50) as f64),
            ],
            ColorSpace::Srgb8,
        );
        let path = PathBuf::from("t.png");
        let bytes = encode(&img, &path).unwrap();
        let back = decode(&bytes, &path).unwrap();
        assert_eq!(back, img);
    }
}
