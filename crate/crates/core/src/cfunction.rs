//! Harish-Chandra c-function, Plancherel density and the Ψ multiplier.

use num_complex::Complex64;
use std::f64::consts::LN_2;

use crate::error::{Error, Result};
use crate::rootsystem::SpaceModel;
use crate::special::{ln_gamma, ln_gamma_real, POLE_EPS};

fn is_pole(z: Complex64) -> bool {
    let n = z.re.round();
    n <= 0.0 && (z - n).norm() < POLE_EPS
}

/// ln c(λ) for the rank-one factor. `Ok(None)` marks a zero of c.
pub fn ln_c(space: &SpaceModel, lambda: Complex64) -> Result<Option<Complex64>> {
    let (m1, m2) = (space.m1(), space.m2());
    let rho = space.rho();
    let d1 = (lambda + 0.5 * m1 + 1.0) * 0.5;
    let d2 = (lambda + rho) * 0.5;
    if is_pole(lambda) {
        return Err(Error::Singular { arg: lambda });
    }
    if is_pole(d1) || is_pole(d2) {
        return Ok(None);
    }
    let ln_c0 = rho * LN_2 + ln_gamma_real(0.5 * (m1 + m2 + 1.0));
    Ok(Some(ln_c0 - lambda * LN_2 + ln_gamma(lambda)? - ln_gamma(d1)? - ln_gamma(d2)?))
}

/// c(λ₁) for the rank-one factor, normalized by c(ρ) = 1.
pub fn c_rank_one(space: &SpaceModel, lambda: Complex64) -> Result<Complex64> {
    Ok(ln_c(space, lambda)?.map_or(Complex64::new(0.0, 0.0), |l| l.exp()))
}

/// Gindikin-Karpelevich product over the indivisible positive roots; a
/// single factor in rank one.
pub fn c_gk(space: &SpaceModel, lambda: Complex64) -> Result<Complex64> {
    let mut c = Complex64::new(1.0, 0.0);
    for (root, _) in &space.roots.positive_roots {
        let indivisible = !space
            .roots
            .positive_roots
            .iter()
            .any(|(b, _)| (root[0] - 2.0 * b[0]).abs() < 1e-14);
        if indivisible {
            c *= c_rank_one(space, lambda * (root[0] / space.roots.positive_roots[0].0[0]))?;
        }
    }
    Ok(c)
}

/// |c(iν)|⁻², with the value 0 at ν = 0.
pub fn plancherel_density(space: &SpaceModel, nu: f64) -> f64 {
    let lambda = Complex64::new(0.0, nu);
    match ln_c(space, lambda) {
        Ok(Some(l)) => (-2.0 * l.re).exp(),
        Ok(None) => f64::INFINITY,
        Err(_) => 0.0,
    }
}

/// Ψ multiplier 1/c(−iν) for complex ν.
pub fn psi_multiplier(space: &SpaceModel, nu: Complex64) -> Result<Complex64> {
    let lambda = -Complex64::i() * nu;
    match ln_c(space, lambda)? {
        Some(l) => Ok((-l).exp()),
        None => Err(Error::Singular { arg: lambda }),
    }
}

/// c(−iν) for real ν; vanishes at ν = 0 for every rank-one model.
pub fn c_minus(space: &SpaceModel, nu: f64) -> Complex64 {
    match ln_c(space, Complex64::new(0.0, -nu)) {
        Ok(Some(l)) => l.exp(),
        _ => Complex64::new(0.0, 0.0),
    }
}

/// c(λ) for Re λ > 0 from the N̄ integral
/// ∫∫ ((1+|X|²)² + |Y|²)^{−(λ+ρ)/2} dX dY over 𝔤_{−α} × 𝔤_{−2α}, normalized at λ = ρ,
/// in polar coordinates with r = sinh a and |Y| = cosh²a sinh b.
pub fn c_nbar_quadrature(space: &SpaceModel, lambda: Complex64) -> Result<Complex64> {
    if lambda.re <= 0.0 {
        return Err(Error::InvalidArgument(format!("N̄ integral needs Re λ > 0, got {lambda}")));
    }
    let integral = |l: Complex64| -> Result<Complex64> {
        let (m1, m2) = (space.m1(), space.m2());
        let p = (l + space.rho()) * 0.5;
        let ea = -4.0 * p + 2.0 * m2 + 1.0;
        let fa = |a: f64| -> Complex64 {
            let lc = a.cosh().ln();
            (ea * lc).exp() * a.sinh().powf(m1 - 1.0)
        };
        let (ia, _) = crate::quadrature::adaptive(fa, 0.0, 60.0, 0.0, 1e-14)?;
        if m2 == 0.0 {
            return Ok(ia);
        }
        let eb = 1.0 - 2.0 * p;
        let fb = |b: f64| -> Complex64 { (eb * b.cosh().ln()).exp() * b.sinh().powf(m2 - 1.0) };
        let (ib, _) = crate::quadrature::adaptive(fb, 0.0, 60.0, 0.0, 1e-14)?;
        Ok(ia * ib)
    };
    Ok(integral(lambda)? / integral(Complex64::new(space.rho(), 0.0))?)
}
