//! Special functions: complex log-Gamma (Lanczos) and the Gauss
//! hypergeometric series.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 671.0 / 128.0;
const LANCZOS_C0: f64 = 0.999_999_999_999_997_1;
const LANCZOS_COF: [f64; 14] = [
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_2,
    14.136_097_974_741_747_1,
    -0.491_913_816_097_620_199,
    0.339_946_499_848_118_887e-4,
    0.465_236_289_270_485_756e-4,
    -0.983_744_753_048_795_646e-4,
    0.158_088_703_224_912_494e-3,
    -0.210_264_441_724_104_883e-3,
    0.217_439_618_115_212_643e-3,
    -0.164_318_106_536_763_890e-3,
    0.844_182_239_838_527_433e-4,
    -0.261_908_384_015_814_087e-4,
    0.368_991_826_595_316_234e-5,
];
const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

/// Distance below which an argument is treated as a Gamma pole.
pub const POLE_EPS: f64 = 1e-13;

fn ln_gamma_right(z: Complex64) -> Complex64 {
    // valid for Re z >= 0.5
    let mut y = z;
    let tmp = z + LANCZOS_G;
    let tmp = (z + 0.5) * tmp.ln() - tmp;
    let mut ser = Complex64::new(LANCZOS_C0, 0.0);
    for c in LANCZOS_COF {
        y += 1.0;
        ser += c / y;
    }
    tmp + (SQRT_2PI * ser / z).ln()
}

/// Principal-ish branch of ln Γ(z) for complex z (imaginary part defined
/// modulo 2π). Poles at the non-positive integers are reported as errors.
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    if z.re <= 0.5 {
        let n = z.re.round();
        if n <= 0.0 && (z - n).norm() < POLE_EPS {
            return Err(Error::Singular { arg: z });
        }
        // reflection: Γ(z)Γ(1−z) = π / sin(πz)
        let s = ln_sin_pi(z);
        Ok(Complex64::new(PI.ln(), 0.0) - s - ln_gamma_right(1.0 - z))
    } else {
        Ok(ln_gamma_right(z))
    }
}

/// ln sin(πz), stable for large |Im z|.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    let y = z.im;
    if y.abs() < 30.0 {
        (z * PI).sin().ln()
    } else {
        // sin(πz) = (e^{iπz} − e^{−iπz}) / 2i; one exponential dominates.
        let i = Complex64::i();
        let w = i * PI * z;
        if y > 0.0 {
            // e^{-iπz} dominates
            -w + (1.0 - (2.0 * w).exp()).ln() - (-2.0 * i).ln()
        } else {
            w + (1.0 - (-2.0 * w).exp()).ln() - (2.0 * i).ln()
        }
    }
}

/// Γ(z) for complex z.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    Ok(ln_gamma(z)?.exp())
}

/// ln Γ(x) for real x > 0.
pub fn ln_gamma_real(x: f64) -> f64 {
    assert!(x > 0.0, "ln_gamma_real requires x > 0");
    ln_gamma_right(Complex64::new(x, 0.0)).re
}

/// Euler Beta function for positive reals.
pub fn beta_real(a: f64, b: f64) -> f64 {
    (ln_gamma_real(a) + ln_gamma_real(b) - ln_gamma_real(a + b)).exp()
}

/// Surface area of the unit sphere S^k in R^{k+1}; S^{-1} is taken as 1.
pub fn sphere_area(k: i32) -> f64 {
    if k < 0 {
        return 1.0;
    }
    let h = (k as f64 + 1.0) / 2.0;
    2.0 * PI.powf(h) / ln_gamma_real(h).exp()
}

/// Gauss hypergeometric series ₂F₁(a, b; c; z) for |z| < 1.
pub fn hyp2f1(a: Complex64, b: Complex64, c: Complex64, z: Complex64) -> Result<Complex64> {
    const MAX_TERMS: usize = 200_000;
    if z.norm() >= 1.0 {
        return Err(Error::Domain(format!("hyp2f1 series needs |z| < 1, got {z}")));
    }
    let n0 = c.re.round();
    if n0 <= 0.0 && (c - n0).norm() < POLE_EPS {
        return Err(Error::Singular { arg: c });
    }
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut small = 0;
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * z;
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            small += 1;
            // two consecutive negligible terms guard against accidental zeros
            if small >= 2 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
        if term.norm() == 0.0 {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence { terms: MAX_TERMS })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn gamma_integers_and_half() {
        for n in 1..15 {
            let fact: f64 = (1..n).map(|k| k as f64).product();
            let g = gamma(c(n as f64, 0.0)).unwrap();
            assert!((g.re / fact - 1.0).abs() < 1e-13, "n={n}");
        }
        let g = gamma(c(0.5, 0.0)).unwrap();
        assert!((g.re - PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn gamma_reference_values() {
        // reference values computed with mpmath at 30 digits
        let cases = [
            (c(0.5, 1.0), c(0.300_694_617_260_655_82, -0.424_967_879_433_123_81)),
            (c(-1.3, 0.4), c(1.088_661_863_120_153_9, 1.112_780_331_676_831_9)),
            (c(2.25, -3.5), c(-0.097_631_812_744_716_885, 0.007_888_140_670_469_216_6)),
            (c(0.0, 2.0), c(0.009_902_440_080_927_491, -0.075_952_001_335_018_069)),
        ];
        for (z, want) in cases {
            let g = gamma(z).unwrap();
            assert!((g - want).norm() / want.norm() < 1e-12, "z={z} got {g} want {want}");
        }
    }

    #[test]
    fn ln_gamma_far_from_real_axis() {
        let cases = [
            (c(0.3, 45.0), c(-70.528_225_213_451_294_6, 125.986_134_265_634_306_8)),
            (c(-0.7, -38.0), c(-63.136_590_067_289_677_7, -98.325_469_699_823_085_8)),
        ];
        for (z, want) in cases {
            let d = ln_gamma(z).unwrap() - want;
            let wrapped = (d.im / (2.0 * PI)).round() * 2.0 * PI;
            assert!(d.re.abs() < 1e-11 && (d.im - wrapped).abs() < 1e-10, "z={z} d={d}");
        }
    }

    #[test]
    fn reflection_and_recurrence() {
        for &(x, y) in &[(0.3, 0.7), (-2.4, 1.1), (1.7, -5.0), (0.1, 40.0), (3.0, -60.0)] {
            let z = c(x, y);
            // Γ(z+1) = zΓ(z) in log form
            let lhs = ln_gamma(z + 1.0).unwrap();
            let rhs = ln_gamma(z).unwrap() + z.ln();
            let d = lhs - rhs;
            let wrapped = (d.im / (2.0 * PI)).round() * 2.0 * PI;
            assert!(d.re.abs() < 1e-11 && (d.im - wrapped).abs() < 1e-10, "z={z} d={d}");
        }
    }

    #[test]
    fn pole_is_an_error() {
        assert!(matches!(gamma(c(-3.0, 0.0)), Err(Error::Singular { .. })));
        assert!(matches!(gamma(c(0.0, 0.0)), Err(Error::Singular { .. })));
    }

    #[test]
    fn conjugation_symmetry() {
        for &(x, y) in &[(0.7, 2.0), (-1.5, 0.3), (4.0, 9.0)] {
            let z = c(x, y);
            let a = gamma(z.conj()).unwrap();
            let b = gamma(z).unwrap().conj();
            assert!((a - b).norm() <= 1e-12 * b.norm());
        }
    }

    #[test]
    fn hyp2f1_elementary() {
        // 2F1(1,1;2;z) = -ln(1-z)/z
        let z = c(0.3, -0.2);
        let v = hyp2f1(c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), z).unwrap();
        let want = -(1.0 - z).ln() / z;
        assert!((v - want).norm() < 1e-14);
        // 2F1(a,b;b;z) = (1-z)^{-a}
        let a = c(0.4, 1.3);
        let v = hyp2f1(a, c(2.5, 0.0), c(2.5, 0.0), z).unwrap();
        let want = (-a * (1.0 - z).ln()).exp();
        assert!((v - want).norm() < 1e-14);
        assert!(hyp2f1(a, a, c(-2.0, 0.0), z).is_err());
        assert!(hyp2f1(a, a, a, c(1.0, 0.0)).is_err());
    }

    #[test]
    fn sphere_areas() {
        assert!((sphere_area(0) - 2.0).abs() < 1e-14);
        assert!((sphere_area(1) - 2.0 * PI).abs() < 1e-13);
        assert!((sphere_area(2) - 4.0 * PI).abs() < 1e-13);
        assert_eq!(sphere_area(-1), 1.0);
    }
}
