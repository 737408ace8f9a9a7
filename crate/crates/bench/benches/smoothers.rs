use criterion::{criterion_group, criterion_main, Criterion};

use aquaclean_bench::bench_image;
use aquaclean_core::color::srgb_to_lab;
use aquaclean_core::spatial::{
    anisotropic_diffusion, bilateral_filter, BilateralParams, DiffusionParams,
};

fn smoothers(c: &mut Criterion) {
    let lab = srgb_to_lab(&bench_image(256)).unwrap();
    let bilateral = BilateralParams::default();
    let diffusion = DiffusionParams::default();

    let mut group = c.benchmark_group("smoothers_256");
    group.sample_size(10);
    group.bench_function("bilateral", |b| {
        b.iter(|| bilateral_filter(&lab, &bilateral).unwrap())
    });
    group.bench_function("anisotropic", |b| {
        b.iter(|| anisotropic_diffusion(&lab, &diffusion).unwrap())
    });
    group.finish();
}

criterion_group!(benches, smoothers);
criterion_main!(benches);
