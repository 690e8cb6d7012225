//! Reference distributions used to calibrate the statistics: the standard
//! normal for the quadratic and power-enhanced statistics, and the Gumbel
//! type law `P(M <= y) = exp(-exp(-y/2) / sqrt(8 pi))` for the maximum.
//! All logarithms are natural.

use std::f64::consts::{PI, SQRT_2};

use crate::error::{Error, Result};

fn check_level(q: f64) -> Result<()> {
    if q > 0.0 && q < 1.0 {
        Ok(())
    } else {
        Err(Error::DomainError {
            quantity: "q",
            value: q,
            domain: "(0, 1)",
        })
    }
}

/// `P(Z > x)` for `Z ~ N(0, 1)`.
pub fn normal_sf(x: f64) -> f64 {
    0.5 * libm::erfc(x / SQRT_2)
}

fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// Lower-tail quantile, Acklam's rational approximation (relative error
/// about 1.2e-9).
fn acklam_lower(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const P_LOW: f64 = 0.02425;

    let tail = |q: f64| {
        let t = (-2.0 * q.ln()).sqrt();
        (((((C[0] * t + C[1]) * t + C[2]) * t + C[3]) * t + C[4]) * t + C[5])
            / ((((D[0] * t + D[1]) * t + D[2]) * t + D[3]) * t + 1.0)
    };
    if p < P_LOW {
        tail(p)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        -tail(1.0 - p)
    }
}

/// Upper `q` quantile `z_q` of `N(0, 1)`: `P(Z > z_q) = q`.
///
/// Acklam's approximation followed by one Halley step on the survival
/// function.
pub fn normal_quantile(q: f64) -> Result<f64> {
    check_level(q)?;
    let z = -acklam_lower(q);
    // Halley refinement of sf(z) = q.
    let e = normal_sf(z) - q;
    let u = e / normal_pdf(z);
    Ok(z + u / (1.0 - 0.5 * z * u))
}

const GUMBEL_SCALE: f64 = 5.013_256_549_262_001; // sqrt(8 pi)

/// `P(M > y)` for the limit law of the centred maximum.
pub fn gumbel_sf(y: f64) -> f64 {
    -(-(-y / 2.0).exp() / GUMBEL_SCALE).exp_m1()
}

/// Upper `q` quantile: `-2 ln(sqrt(8 pi) * (-ln(1 - q)))`.
pub fn gumbel_quantile(q: f64) -> Result<f64> {
    check_level(q)?;
    Ok(-2.0 * (GUMBEL_SCALE * -(-q).ln_1p()).ln())
}

/// Centring constant of the maximum statistic,
/// `c_p = 4 ln(sqrt(2) p) - ln ln(sqrt(2) p)`.
pub fn cp(p: usize) -> Result<f64> {
    crate::error::ensure_min("p", p, 2)?;
    let s = SQRT_2 * p as f64;
    Ok(4.0 * s.ln() - s.ln().ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gumbel_scale_constant() {
        assert!((GUMBEL_SCALE - (8.0 * PI).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn normal_quantile_values() {
        assert_eq!(normal_quantile(0.5).unwrap(), 0.0);
        // scipy.stats.norm.isf(0.05)
        assert!((normal_quantile(0.05).unwrap() - 1.644_853_626_951_472_7).abs() < 1e-12);
        assert!((normal_quantile(0.975).unwrap() + 1.959_963_984_540_054).abs() < 1e-12);
        assert!(normal_quantile(0.0).is_err());
        assert!(normal_quantile(1.0).is_err());
        assert!(normal_quantile(f64::NAN).is_err());
    }

    #[test]
    fn normal_sf_values() {
        assert_eq!(normal_sf(0.0), 0.5);
        // scipy.stats.norm.sf
        assert!((normal_sf(1.0) - 0.158_655_253_931_457_05).abs() < 1e-15);
        assert!((normal_sf(8.0) / 6.220_960_574_271_785e-16 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn round_trips() {
        for q in [1e-8, 0.001, 0.01, 0.05, 0.1, 0.5, 0.9, 0.999] {
            assert!(
                (normal_sf(normal_quantile(q).unwrap()) - q).abs() < 1e-12,
                "q={q}"
            );
        }
        for q in [0.01, 0.05, 0.1, 0.5] {
            assert!(
                (gumbel_sf(gumbel_quantile(q).unwrap()) - q).abs() < 1e-14,
                "q={q}"
            );
        }
    }

    #[test]
    fn gumbel_values_and_limits() {
        // -2 ln(sqrt(8 pi) * -ln 0.95), evaluated independently in mpmath
        assert!((gumbel_quantile(0.05).unwrap() - 2.716_219_070_555_09).abs() < 1e-12);
        assert!(gumbel_sf(-60.0) > 1.0 - 1e-12);
        assert!(gumbel_sf(80.0) < 1e-17);
        let ys: Vec<f64> = (-4..60).map(|v| v as f64).collect();
        assert!(ys.windows(2).all(|w| gumbel_sf(w[0]) > gumbel_sf(w[1])));
    }

    #[test]
    fn cp_values() {
        assert!((cp(100).unwrap() - 18.207_235_312_493_044).abs() < 1e-12);
        assert!((cp(2).unwrap() - 4.119_930_895_833_172).abs() < 1e-12);
        assert!(cp(1).is_err());
        let vals: Vec<f64> = (2..500).map(|p| cp(p).unwrap()).collect();
        assert!(vals.windows(2).all(|w| w[1] > w[0]));
    }
}
