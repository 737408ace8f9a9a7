//! Image file I/O. PPM (P5/P6) is always available and bit-exact; PNG sits
//! behind the `png` feature.

pub mod ppm;

#[cfg(feature = "png")]
pub mod png_codec;

use std::path::Path;

use crate::error::{Error, Result};
use crate::image::{ColorImage, ColorSpace, ImagePlane};

fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| {
        if e.kind() == std::io::ErrorKind::NotFound {
            Error::FileNotFound {
                path: path.to_path_buf(),
            }
        } else {
            Error::Io {
                path: path.to_path_buf(),
                source: e,
            }
        }
    })
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

/// Loads a PPM/PGM or PNG file into an sRGB image; the format is detected
/// from the file's magic bytes, not its extension.
pub fn load_image(path: impl AsRef<Path>) -> Result<ColorImage> {
    let path = path.as_ref();
    let bytes = read_bytes(path)?;
    match bytes.first() {
        Some(b'P') => ppm::decode(&bytes, path),
        #[cfg(feature = "png")]
        Some(0x89) if bytes.starts_with(b"\x89PNG") => png_codec::decode(&bytes, path),
        _ => Err(Error::UnsupportedFormat {
            path: path.to_path_buf(),
            reason: "unrecognized magic bytes".into(),
        }),
    }
}

/// Saves an sRGB image; the container is chosen by extension (.ppm or .png).
/// Samples are clamped to [0, 255] and rounded half-up.
pub fn save_image(img: &ColorImage, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    img.expect_space(ColorSpace::Srgb8)?;
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(|e| e.to_ascii_lowercase());
    match ext.as_deref() {
        Some("ppm") => write_bytes(path, &ppm::encode_p6(img)),
        #[cfg(feature = "png")]
        Some("png") => write_bytes(path, &png_codec::encode(img, path)?),
        other => Err(Error::UnsupportedFormat {
            path: path.to_path_buf(),
            reason: format!("cannot write extension {other:?}"),
        }),
    }
}

/// Saves a single plane as a binary PGM (P5), clamped and rounded like save_image.
pub fn save_plane_pgm(plane: &ImagePlane, path: impl AsRef<Path>) -> Result<()> {
    write_bytes(path.as_ref(), &ppm::encode_p5(plane))
}
