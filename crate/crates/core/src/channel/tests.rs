use super::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn small_params() -> CavityParams {
    CavityParams {
        carrier_hz: 2.5e9,
        bandwidth_hz: 50e6,
        n_paths: 1000,
        decay_time_s: 0.4e-6,
        aperture_half_angle_rad: PI,
        max_delay_s: 0.8e-6,
        oversample: 2,
    }
}

fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

fn normalized_corr(a: &Cir, b: &Cir) -> C64 {
    inner(a.taps(), b.taps()) / (a.energy() * b.energy()).sqrt()
}

#[test]
fn draw_paths_is_deterministic() {
    let p = CavityParams {
        n_paths: 1000,
        ..small_params()
    };
    let a = draw_paths(&p, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
    let b = draw_paths(&p, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.len(), 1000);
    for path in &a.paths {
        let n: f64 = path.direction.iter().map(|d| d * d).sum();
        assert!((n.sqrt() - 1.0).abs() < 1e-12);
        assert!((0.0..=p.max_delay_s).contains(&path.delay_s));
    }
}

#[test]
fn zero_paths_rejected() {
    let p = CavityParams {
        n_paths: 0,
        ..small_params()
    };
    assert!(matches!(
        draw_paths(&p, &mut ChaCha8Rng::seed_from_u64(1)),
        Err(Error::InvalidParameter(_))
    ));
}

#[test]
fn full_sphere_directions_are_isotropic() {
    let p = CavityParams {
        n_paths: 10_000,
        ..small_params()
    };
    let set = draw_paths(&p, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
    let mut mean = [0.0; 3];
    for path in &set.paths {
        for (m, d) in mean.iter_mut().zip(path.direction) {
            *m += d / set.len() as f64;
        }
    }
    let norm = mean.iter().map(|m| m * m).sum::<f64>().sqrt();
    assert!(norm < 0.1, "mean direction norm {norm}");
}

#[test]
fn cap_directions_stay_inside_cone() {
    let half = 35f64.to_radians();
    let p = CavityParams {
        aperture_half_angle_rad: half,
        ..small_params()
    };
    let set = draw_paths(&p, &mut ChaCha8Rng::seed_from_u64(4)).unwrap();
    assert!(set
        .paths
        .iter()
        .all(|q| q.direction[2] >= half.cos() - 1e-12));
}

#[test]
fn expected_cir_energy_is_unity() {
    let p = CavityParams {
        n_paths: 500,
        ..small_params()
    };
    let grid = RxGrid::uniform(0.0, 0.0, 1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let draws = 500;
    let mean: f64 = (0..draws)
        .map(|_| {
            let set = draw_paths(&p, &mut rng).unwrap();
            synthesize_cir(&set, &grid, 0.0, &p).unwrap().energy()
        })
        .sum::<f64>()
        / draws as f64;
    assert!((0.9..=1.1).contains(&mean), "mean energy {mean}");
}

#[test]
fn on_grid_path_is_kronecker_delta() {
    // neighbours fall on sinc zeros only when sampling at exactly B
    let p = CavityParams {
        oversample: 1,
        ..small_params()
    };
    let fs = p.sample_rate_hz();
    let tap = 17;
    let tau = tap as f64 / fs;
    let amp = C64::new(0.3, -0.4);
    let set = PathSet {
        paths: vec![Path {
            delay_s: tau,
            direction: [0.0, 0.0, 1.0],
            amplitude: amp,
        }],
    };
    let grid = RxGrid::uniform(0.0, 0.1, 0.01).unwrap();
    let h = synthesize_cir(&set, &grid, 0.0, &p).unwrap();
    let expect = amp * C64::from_polar(1.0, -2.0 * PI * p.carrier_hz * tau);
    for (n, t) in h.taps().iter().enumerate() {
        let want = if n == tap { expect } else { C64::new(0.0, 0.0) };
        assert!((t - want).norm() < 1e-9, "tap {n}: {t}");
    }
}

#[test]
fn oversampled_on_grid_path_zeros_every_os_taps() {
    let p = CavityParams {
        oversample: 4,
        ..small_params()
    };
    let tap = 40;
    let tau = tap as f64 / p.sample_rate_hz();
    let set = PathSet {
        paths: vec![Path {
            delay_s: tau,
            direction: [0.0, 0.0, 1.0],
            amplitude: C64::new(1.0, 0.0),
        }],
    };
    let grid = RxGrid::uniform(0.0, 0.0, 1.0).unwrap();
    let h = synthesize_cir(&set, &grid, 0.0, &p).unwrap();
    assert!((h.taps()[tap].norm() - 1.0).abs() < 1e-12);
    for m in 1..=SINC_HALF_WIDTH {
        assert!(h.taps()[tap + 4 * m].norm() < 1e-9);
        if 4 * m <= tap {
            assert!(h.taps()[tap - 4 * m].norm() < 1e-9);
        }
    }
    // kernel energy ≈ oversample (minus the truncated tails)
    assert!((h.energy() - 4.0).abs() < 0.1);
}

#[test]
fn synthesis_is_pure() {
    let p = small_params();
    let set = draw_paths(&p, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
    let grid = RxGrid::uniform(0.0, 0.1, 0.01).unwrap();
    let a = synthesize_cir(&set, &grid, 0.0, &p).unwrap();
    let b = synthesize_cir(&set, &grid, 0.0, &p).unwrap();
    assert_eq!(a, b);
    assert!(synthesize_cir(&set, &grid, 0.2, &p).is_err());
}

#[test]
fn ten_wavelength_positions_decorrelate() {
    let p = CavityParams {
        n_paths: 2000,
        ..small_params()
    };
    let lambda = p.wavelength_m();
    let grid = RxGrid::new(vec![0.0, 10.0 * lambda], [1.0, 0.0, 0.0]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let trials = 20;
    let mean: f64 = (0..trials)
        .map(|_| {
            let e = build_ensemble(&p, &grid, 1, &mut rng).unwrap();
            normalized_corr(e.cir(0, 0), e.cir(0, 1)).norm()
        })
        .sum::<f64>()
        / trials as f64;
    assert!(mean < 0.2, "mean |corr| {mean}");
}

#[test]
fn ensemble_shapes_and_determinism() {
    let p = CavityParams {
        n_paths: 200,
        ..small_params()
    };
    let grid = RxGrid::uniform(0.0, 0.30, 0.01).unwrap();
    assert_eq!(grid.len(), 31);
    let a = build_ensemble(&p, &grid, 8, &mut ChaCha8Rng::seed_from_u64(42)).unwrap();
    assert_eq!((a.n_tx(), a.n_rx()), (8, 31));
    assert!(a.n_taps() as f64 / a.sample_rate_hz() >= p.max_delay_s);
    let b = build_ensemble(&p, &grid, 8, &mut ChaCha8Rng::seed_from_u64(42)).unwrap();
    assert_eq!(a, b);

    let one = RxGrid::uniform(0.1, 0.1, 0.01).unwrap();
    let m = build_ensemble(&p, &one, 1, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
    assert_eq!((m.n_tx(), m.n_rx()), (1, 1));
}

#[test]
fn grid_validation() {
    assert!(RxGrid::new(vec![0.0, 0.0], [1.0, 0.0, 0.0]).is_err());
    assert!(RxGrid::new(vec![0.0, 1.0], [1.0, 1.0, 0.0]).is_err());
    assert!(RxGrid::uniform(0.0, 1.0, 0.0).is_err());
    let g = RxGrid::uniform(-0.003, 0.003, 0.0003).unwrap();
    assert_eq!(g.len(), 21);
    assert_eq!(g.index_of(0.0).unwrap(), 10);
    assert!(matches!(g.index_of(0.00015), Err(Error::InvalidTarget(_))));
    assert_eq!(g.positions_m()[10], 0.0);
    let g = RxGrid::uniform(0.0, 0.3, 0.005).unwrap();
    assert_eq!(g.positions_m()[41], 0.205);
    assert_eq!(g.len(), 61);
}

#[test]
fn theory_special_values() {
    let fc = 2.5e9;
    let lambda = SPEED_OF_LIGHT / fc;
    assert_eq!(spatial_correlation_theory(0.0, fc, PI), 1.0);
    assert_eq!(spatial_correlation_theory(0.0, fc, 0.5), 1.0);
    assert!(spatial_correlation_theory(lambda / 2.0, fc, PI).abs() < 1e-12);
    // symmetric in Δx
    assert_eq!(
        spatial_correlation_theory(0.01, fc, 0.6),
        spatial_correlation_theory(-0.01, fc, 0.6)
    );
}

/// Bisection for the half-power point of `|ρ(Δx)|²` on `[0, hi]`.
fn half_power_lag(f: impl Fn(f64) -> f64, hi: f64) -> f64 {
    let (mut a, mut b) = (0.0, hi);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if f(m).powi(2) > 0.5 {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

#[test]
fn full_sphere_half_power_width() {
    let fc = 2.5e9;
    let lambda = SPEED_OF_LIGHT / fc;
    let lag = half_power_lag(|d| spatial_correlation_theory(d, fc, PI), lambda / 2.0);
    let u = 2.0 * PI * lag / lambda;
    assert!((u - 1.3916).abs() < 1e-3, "u = {u}");
    assert!((2.0 * lag / lambda - 0.443).abs() < 1e-3);
}

#[test]
fn cap_average_matches_closed_forms() {
    let fc = 36e9;
    let lambda = SPEED_OF_LIGHT / fc;
    for i in 0..40 {
        let dx = i as f64 * 0.05 * lambda;
        let sphere = cap_average_correlation(dx, fc, PI);
        let want = spatial_correlation_theory(dx, fc, PI);
        assert!((sphere - want).abs() < 1e-6, "dx {dx}: {sphere} vs {want}");
        // narrow cone: disk approximation converges to the exact cap average
        let narrow = 5f64.to_radians();
        let a = cap_average_correlation(dx, fc, narrow);
        let b = spatial_correlation_theory(dx, fc, narrow);
        assert!((a - b).abs() < 5e-3, "dx {dx}: {a} vs {b}");
    }
    // wide cone dispatches to the cap integral
    let wide = 2.0;
    assert_eq!(
        spatial_correlation_theory(0.3 * lambda, fc, wide),
        cap_average_correlation(0.3 * lambda, fc, wide)
    );
}

#[test]
fn empirical_correlation_tracks_theory() {
    let p = CavityParams {
        n_paths: 2000,
        ..small_params()
    };
    let lambda = p.wavelength_m();
    let lags: Vec<f64> = (0..=8).map(|i| i as f64 * 0.25 * lambda).collect();
    let grid = RxGrid::new(lags.clone(), [1.0, 0.0, 0.0]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let trials = 200;
    let mut acc = vec![C64::new(0.0, 0.0); lags.len()];
    for _ in 0..trials {
        let e = build_ensemble(&p, &grid, 1, &mut rng).unwrap();
        for (j, a) in acc.iter_mut().enumerate() {
            *a += normalized_corr(e.cir(0, j), e.cir(0, 0)) / trials as f64;
        }
    }
    for (dx, a) in lags.iter().zip(&acc) {
        let want = spatial_correlation_theory(*dx, p.carrier_hz, PI);
        assert!((a - want).norm() < 0.1, "Δx {dx}: {a} vs {want}");
    }
}

#[test]
fn delay_profile_decay_constant() {
    let p = CavityParams {
        n_paths: 1000,
        ..small_params()
    };
    let grid = RxGrid::uniform(0.0, 0.0, 1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let trials = 100;
    let mut power = vec![0.0; p.n_taps()];
    for _ in 0..trials {
        let set = draw_paths(&p, &mut rng).unwrap();
        let h = synthesize_cir(&set, &grid, 0.0, &p).unwrap();
        for (acc, t) in power.iter_mut().zip(h.taps()) {
            *acc += t.norm_sqr();
        }
    }
    let fs = p.sample_rate_hz();
    let (lo, hi) = (
        (0.1 * p.max_delay_s * fs) as usize,
        (0.9 * p.max_delay_s * fs) as usize,
    );
    let pts: Vec<(f64, f64)> = (lo..hi).map(|n| (n as f64 / fs, power[n].ln())).collect();
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / pts.len() as f64;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / pts.len() as f64;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let tau = -sxx / sxy;
    let rel = (tau - p.decay_time_s).abs() / p.decay_time_s;
    assert!(rel < 0.25, "fitted decay {tau} vs {}", p.decay_time_s);
}

#[test]
fn antennas_are_uncorrelated() {
    let p = CavityParams {
        n_paths: 1000,
        bandwidth_hz: 100e6,
        ..small_params()
    };
    let grid = RxGrid::uniform(0.0, 0.0, 1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let trials = 200;
    let mean: f64 = (0..trials)
        .map(|_| {
            let e = build_ensemble(&p, &grid, 2, &mut rng).unwrap();
            normalized_corr(e.cir(0, 0), e.cir(1, 0)).norm()
        })
        .sum::<f64>()
        / trials as f64;
    assert!(mean < 0.15, "mean |cross corr| {mean}");
}

#[test]
fn export_round_trips() {
    let p = CavityParams {
        n_paths: 50,
        ..small_params()
    };
    let grid = RxGrid::uniform(0.0, 0.02, 0.01).unwrap();
    let e = build_ensemble(&p, &grid, 2, &mut ChaCha8Rng::seed_from_u64(77)).unwrap();
    for enc in [EnsembleEncoding::Text, EnsembleEncoding::Binary] {
        let mut buf = Vec::new();
        write_ensemble(&e, Some(77), enc, &mut buf).unwrap();
        let (back, header) = read_ensemble(buf.as_slice()).unwrap();
        assert_eq!(header.seed, Some(77));
        assert_eq!(header.encoding, enc);
        for (ra, rb) in e.cirs().iter().zip(back.cirs()) {
            for (a, b) in ra.iter().zip(rb) {
                for (x, y) in a.taps().iter().zip(b.taps()) {
                    assert_eq!(x.re.to_bits(), y.re.to_bits());
                    assert_eq!(x.im.to_bits(), y.im.to_bits());
                }
            }
        }
        assert_eq!(back.params(), e.params());
        assert_eq!(back.grid(), e.grid());
    }
}

#[test]
fn export_rejects_truncated_files() {
    let p = CavityParams {
        n_paths: 10,
        ..small_params()
    };
    let grid = RxGrid::uniform(0.0, 0.01, 0.01).unwrap();
    let e = build_ensemble(&p, &grid, 1, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
    let mut buf = Vec::new();
    write_ensemble(&e, None, EnsembleEncoding::Text, &mut buf).unwrap();
    let cut = &buf[..buf.len() - 40];
    assert!(matches!(read_ensemble(cut), Err(Error::Format(_))));
    assert!(matches!(
        read_ensemble(&b"not json\n"[..]),
        Err(Error::Format(_))
    ));
}

#[test]
fn half_power_width_closed_forms() {
    let fc = 2.5e9;
    let lambda = SPEED_OF_LIGHT / fc;
    let w = correlation_half_power_width(fc, PI);
    assert!(
        (w / lambda - 2.0 * 1.391_557 / (2.0 * PI)).abs() < 1e-5,
        "{}",
        w / lambda
    );
    // disk: 2J1(v)/v squared halves at v = 1.6163
    let th = 35f64.to_radians();
    let w = correlation_half_power_width(fc, th);
    let want = 2.0 * 1.616_34 / (2.0 * PI * th.sin());
    assert!(
        (w / lambda - want).abs() / want < 1e-4,
        "{} vs {want}",
        w / lambda
    );
}
