//! aquaclean-core: a four-stage enhancement pipeline for degraded underwater
//! images — homomorphic illumination correction, wavelet shrinkage denoising,
//! edge-preserving smoothing in CIELAB, and global tone adjustment — plus the
//! evaluation machinery (PSNR, gradient histograms, edge maps, sweeps) used
//! to compare parameter choices.

pub mod color;
pub mod error;
pub mod image;
pub mod io;
pub mod metrics;
pub mod pipeline;
pub mod spatial;
pub mod spectral;
pub mod tone;
pub mod wavelet;

pub use error::{Error, Result};
pub use image::{ColorImage, ColorSpace, ImagePlane, NOMINAL_PEAK};
pub use pipeline::{PipelineConfig, RunReport};
