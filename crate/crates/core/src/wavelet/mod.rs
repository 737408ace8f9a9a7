//! Orthogonal wavelet machinery: filter banks, the 2D transform, shrinkage
//! rules, and the denoising driver that ties them together.

pub mod bank;
pub mod denoise;
pub mod shrink;
pub mod transform;

pub use bank::{BankName, FilterBank};
pub use denoise::{denoise, denoise_plane};
pub use shrink::{
    apply_threshold, compute_threshold, estimate_noise_sigma, subband_variance, NoiseStats,
    ShrinkKind, ShrinkageRule, ThresholdMode,
};
pub use transform::{dwt2_forward, dwt2_inverse, DetailBands, WaveletPyramid};
