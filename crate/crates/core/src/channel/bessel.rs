//! Bessel functions of the first kind, orders 0 and 1, via the rational
//! approximations of Abramowitz & Stegun 9.4.1–9.4.6 (absolute error < 1e-7).

use std::f64::consts::FRAC_PI_4;

pub fn j0(x: f64) -> f64 {
    let ax = x.abs();
    if ax <= 3.0 {
        let y = (ax / 3.0).powi(2);
        1.0 + y
            * (-2.249_999_7
                + y * (1.265_620_8
                    + y * (-0.316_386_6
                        + y * (0.044_447_9 + y * (-0.003_944_4 + y * 0.000_210_0)))))
    } else {
        let z = 3.0 / ax;
        let f0 = 0.797_884_56
            + z * (-0.000_000_77
                + z * (-0.005_527_40
                    + z * (-0.000_095_12
                        + z * (0.001_372_37 + z * (-0.000_728_05 + z * 0.000_144_76)))));
        let theta0 = ax - FRAC_PI_4
            + z * (-0.041_663_97
                + z * (-0.000_039_54
                    + z * (0.002_625_73
                        + z * (-0.000_541_25 + z * (-0.000_293_33 + z * 0.000_135_58)))));
        f0 * theta0.cos() / ax.sqrt()
    }
}

pub fn j1(x: f64) -> f64 {
    let ax = x.abs();
    let v = if ax <= 3.0 {
        let y = (ax / 3.0).powi(2);
        ax * (0.5
            + y * (-0.562_499_85
                + y * (0.210_935_73
                    + y * (-0.039_542_89
                        + y * (0.004_433_19 + y * (-0.000_317_61 + y * 0.000_011_09))))))
    } else {
        let z = 3.0 / ax;
        let f1 = 0.797_884_56
            + z * (0.000_001_56
                + z * (0.016_596_67
                    + z * (0.000_171_05
                        + z * (-0.002_495_11 + z * (0.001_136_53 - z * 0.000_200_33)))));
        let theta1 = ax - 3.0 * FRAC_PI_4
            + z * (0.124_996_12
                + z * (0.000_056_50
                    + z * (-0.006_378_79
                        + z * (0.000_743_48 + z * (0.000_798_24 - z * 0.000_291_66)))));
        f1 * theta1.cos() / ax.sqrt()
    };
    if x < 0.0 {
        -v
    } else {
        v
    }
}
