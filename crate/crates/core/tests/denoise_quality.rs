//! End-to-end denoising quality on a known-clean scene: the denoiser must
//! actually denoise, and the shrinkage rules must rank the way the defaults
//! assume when scored against the clean reference.

use aquaclean_core::metrics::psnr;
use aquaclean_core::pipeline::fixtures::{clean_scene, GaussianSampler};
use aquaclean_core::wavelet::{denoise, BankName, FilterBank, ShrinkKind, ShrinkageRule};
use aquaclean_core::ColorImage;

fn noisy_copy(img: &ColorImage, sigma: f64, seed: u64) -> ColorImage {
    let mut rng = GaussianSampler::new(seed);
    let mut out = img.clone();
    for plane in out.planes_mut() {
        for v in plane.samples_mut() {
            *v += sigma * rng.gaussian();
        }
    }
    out.clamped(0.0, 255.0)
}

#[test]
fn denoising_gains_at_least_two_db() {
    let clean = clean_scene(11, 0, 256, 256);
    let noisy = noisy_copy(&clean, 15.0, 0xBEEF);
    let bank = FilterBank::new(BankName::Coif4);
    let rule = ShrinkageRule::new(ShrinkKind::ModifiedBayes);
    let denoised = denoise(&noisy, &bank, rule, 4).unwrap();

    let before = psnr(&noisy, &clean).unwrap();
    let after = psnr(&denoised, &clean).unwrap();
    assert!(
        after > before + 2.0,
        "expected >= 2 dB improvement, got {before:.2} -> {after:.2}"
    );
}

#[test]
fn rules_rank_as_documented_against_clean() {
    let clean = clean_scene(11, 2, 256, 256);
    let noisy = noisy_copy(&clean, 15.0, 0xF00D);
    let bank = FilterBank::new(BankName::Coif4);

    let score = |kind: ShrinkKind| {
        let out = denoise(&noisy, &bank, ShrinkageRule::new(kind), 4).unwrap();
        psnr(&out, &clean).unwrap()
    };
    let mbs = score(ShrinkKind::ModifiedBayes);
    let bayes = score(ShrinkKind::Bayes);
    let visu = score(ShrinkKind::Visu);

    assert!(mbs >= bayes - 0.1, "mbs {mbs:.4} vs bayes {bayes:.4}");
    for (name, v) in [("mbs", mbs), ("bayes", bayes)] {
        assert!(visu < v, "visu {visu:.4} should be below {name} {v:.4}");
    }
}
