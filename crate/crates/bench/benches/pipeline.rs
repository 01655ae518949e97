use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use trfocus_core::experiment::trial_rng;
use trfocus_core::signal::{convolve_samples, sound_channel};
use trfocus_core::{build_ensemble, focus_field, gen_chirp, tr_filters, Preset, RxGrid, C64};

fn bench_convolve(c: &mut Criterion) {
    let mut group = c.benchmark_group("convolve");
    for n in [64usize, 577, 2113] {
        let a: Vec<C64> = (0..n)
            .map(|i| C64::new((i as f64).sin(), (i as f64 * 0.3).cos()))
            .collect();
        group.bench_with_input(BenchmarkId::from_parameter(n), &a, |b, a| {
            b.iter(|| convolve_samples(black_box(a), black_box(a)))
        });
    }
    group.finish();
}

fn bench_ensemble(c: &mut Criterion) {
    let mut group = c.benchmark_group("build_ensemble");
    group.sample_size(10);
    for preset in Preset::ALL {
        let params = preset.params();
        let g = preset.grid();
        let grid = RxGrid::uniform(g.start_m, g.stop_m, g.step_m).unwrap();
        group.bench_function(preset.name(), |b| {
            b.iter(|| build_ensemble(&params, &grid, 1, &mut trial_rng(1, 0)).unwrap())
        });
    }
    group.finish();
}

fn bench_sounding(c: &mut Criterion) {
    let params = Preset::Sub6ghz.params();
    let grid = RxGrid::uniform(0.0, 0.0, 1.0).unwrap();
    let ens = build_ensemble(&params, &grid, 1, &mut trial_rng(2, 0)).unwrap();
    let probe = gen_chirp(params.bandwidth_hz, 1e-6, params.sample_rate_hz()).unwrap();
    c.bench_function("sound_channel/sub6ghz", |b| {
        let mut rng = trial_rng(3, 0);
        b.iter(|| sound_channel(ens.cir(0, 0), &probe, Some(30.0), &mut rng).unwrap())
    });
}

fn bench_focus(c: &mut Criterion) {
    let params = Preset::Sub6ghz.params();
    let g = Preset::Sub6ghz.grid();
    let grid = RxGrid::uniform(g.start_m, g.stop_m, g.step_m).unwrap();
    let ens = build_ensemble(&params, &grid, 8, &mut trial_rng(4, 0)).unwrap();
    let bank = tr_filters(&ens.cirs_at(10), 1.0).unwrap();
    c.bench_function("focus_field/sub6ghz_nt8", |b| {
        let mut rng = trial_rng(5, 0);
        b.iter(|| focus_field(&bank, &ens, None, &mut rng).unwrap())
    });
}

criterion_group!(
    benches,
    bench_convolve,
    bench_ensemble,
    bench_sounding,
    bench_focus
);
criterion_main!(benches);
