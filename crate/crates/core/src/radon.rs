//! Horocycle Radon transform, Abel transform, the ρ-twist and the
//! normalized transform Λ with its inverse.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::cfunction::{c_minus, psi_multiplier};
use crate::error::{Error, Result};
use crate::quadrature::{adaptive, Panels};
use crate::rootsystem::SpaceModel;
use crate::special::{beta_real, hyp2f1, sphere_area};
use crate::transform::{RadialFunction, SpectralFunction, SpectralWeight, SphericalKernel, TAIL_TOL};

type C = Complex64;

fn cx(re: f64) -> C {
    C::new(re, 0.0)
}

const ABEL_TOL: f64 = 1e-13;

/// Tolerated W-relation residual in [`lambda_inverse`].
pub const WEYL_TOL: f64 = 1e-6;

/// Ψ multiplier 1/c(−iν), set to 0 at the pole of c at ν = 0.
pub fn psi(space: &SpaceModel, nu: f64) -> C {
    match psi_multiplier(space, cx(nu)) {
        Ok(v) => v,
        Err(_) => cx(0.0),
    }
}

/// Normalization of dn making 𝓕_A ∘ ℛ_ρ agree with the spherical
/// transform; obtained from f = (cosh t)^{−2q}, where both sides are Beta
/// integrals.
pub fn abel_kappa(space: &SpaceModel) -> f64 {
    let (m1, m2, rho) = (space.m1(), space.m2(), space.rho());
    let q = rho + 1.0;
    let mu = 2.0 * q - rho;
    let mut lhs = 1.0;
    if m2 > 0.0 {
        lhs *= sphere_area(m2 as i32 - 1) * beta_real(0.5 * m2, q - 0.5 * m2) / 2.0;
    }
    lhs *= sphere_area(m1 as i32 - 1) / 2.0 * beta_real(0.5 * m1, 2.0 * q - m2 - 0.5 * m1) * 2f64.powf(0.5 * m1);
    lhs *= 2f64.powf(mu - 1.0) * beta_real(0.5 * (mu - rho), 0.5 * (mu + rho));
    let rhs = 2f64.powf(m1 + 2.0 * m2) * beta_real(0.5 * (m1 + m2 + 1.0), q - rho) / 2.0;
    rhs / lhs
}

/// Abel transform F_f(s) = e^{ρs} ∫_N f(a_s n·o) dn of a radial function
/// given as a closure vanishing beyond `t_cut`.
pub fn abel_fn<F: Fn(f64) -> C>(space: &SpaceModel, f: F, s: f64, t_cut: f64) -> Result<C> {
    let s = s.abs();
    if s >= t_cut {
        return Ok(cx(0.0));
    }
    let (m1, m2) = (space.m1(), space.m2());
    let a = s.cosh();
    let u_max = (t_cut.cosh() - a).sqrt();
    let kappa = abel_kappa(space);
    let (v, _) = if m2 == 0.0 {
        let w = kappa * sphere_area(m1 as i32 - 1) * 2f64.powf(0.5 * m1);
        adaptive(|u| f((a + u * u).acosh()) * (w * u.powf(m1 - 1.0)), 0.0, u_max, 1e-300, ABEL_TOL)?
    } else {
        let w = kappa
            * sphere_area(m1 as i32 - 1)
            * sphere_area(m2 as i32 - 1)
            * 2f64.powf(0.5 * (m1 - 2.0))
            * beta_real(0.5 * m1, 0.5 * m2);
        let (pa, pb, pc) = (cx(1.0 - 0.5 * m2), cx(0.5 * m1), cx(0.5 * (m1 + m2)));
        let g = |u: f64| -> C {
            let c = a + u * u;
            let h = hyp2f1(pa, pb, pc, cx(-u * u / (c + a))).unwrap_or(cx(f64::NAN));
            f(c.acosh()) * h * (2.0 * w * u.powf(m1 + m2 - 1.0) * c * (c + a).powf(0.5 * m2 - 1.0))
        };
        adaptive(g, 0.0, u_max, 1e-300, ABEL_TOL)?
    };
    if !v.is_finite() {
        return Err(Error::Quadrature(format!("Abel integral at s = {s} is not finite")));
    }
    Ok(v)
}

/// Abel transform of a sampled radial function on the points `s`.
pub fn abel(space: &SpaceModel, f: &RadialFunction, s: &[f64]) -> Result<Vec<C>> {
    let t_cut = *f.grid.breaks.last().unwrap();
    let tail = f.values.last().unwrap().norm() / f.max_abs().max(f64::MIN_POSITIVE);
    if tail > 1e-10 {
        return Err(Error::Truncation { what: "radial tail for the Abel transform".into(), estimate: tail });
    }
    s.iter().map(|&x| abel_fn(space, |t| f.eval(t), x, t_cut)).collect()
}

/// A function on the disk in geodesic polar coordinates (t, θ), or a
/// radial profile.
pub enum SpaceFunction<'a> {
    Radial(&'a dyn Fn(f64) -> C),
    Disk(&'a dyn Fn(f64, f64) -> C),
}

fn disk_horocycle_point(beta: f64, s: f64, x: f64) -> (f64, f64) {
    // a_s n_x · i = e^s (x + i) in the upper half-plane, then Cayley and rotation
    let z = C::new(s.exp() * x, s.exp());
    let w = (z - C::i()) / (z + C::i());
    let r = w.norm().min(1.0 - 1e-16);
    (2.0 * r.atanh(), w.arg() + beta)
}

/// Horocycle integral ℛf(b, a_s) = ∫_N f(k_b a_s n·o) dn. On the disk the
/// integral runs over the N-orbit in the 2×2 model; on other spaces only
/// radial f is accepted and the Abel reduction is used.
pub fn radon(space: &SpaceModel, f: &SpaceFunction, beta: f64, s: f64, t_cut: f64) -> Result<C> {
    let disk = space.m_alpha == 1 && space.m_2alpha == 0;
    if !disk {
        return match f {
            SpaceFunction::Radial(g) => Ok(abel_fn(space, g, s, t_cut)? * (-space.rho() * s).exp()),
            SpaceFunction::Disk(_) => Err(Error::Domain("non-radial Radon transform is implemented on H² only".into())),
        };
    }
    if s.abs() >= t_cut {
        return Ok(cx(0.0));
    }
    // cosh t = cosh s + x² e^s / 2 along the horocycle
    let x_max = (2.0 * (-s).exp() * (t_cut.cosh() - s.cosh())).sqrt();
    let kappa = abel_kappa(space);
    let g = |x: f64| -> C {
        let (t, th) = disk_horocycle_point(beta, s, x);
        match f {
            SpaceFunction::Radial(h) => h(t),
            SpaceFunction::Disk(h) => h(t, th),
        }
    };
    let (v, _) = adaptive(g, -x_max, x_max, 1e-300, ABEL_TOL)?;
    Ok(v * kappa)
}

/// ℛ_ρ f = e^{ρs} ℛf.
pub fn radon_rho(space: &SpaceModel, f: &SpaceFunction, beta: f64, s: f64, t_cut: f64) -> Result<C> {
    Ok(radon(space, f, beta, s, t_cut)? * (space.rho() * s).exp())
}

/// Uniform grid −s_max, …, s_max of step h.
pub fn uniform_s(s_max: f64, h: f64) -> Vec<f64> {
    let n = (s_max / h).round() as i64;
    (-n..=n).map(|j| j as f64 * h).collect()
}

/// Samples on B × A: circle modes n and a uniform grid in s = log a.
#[derive(Debug, Clone, PartialEq)]
pub struct HorocycleFunction {
    pub modes: Vec<i32>,
    pub s: Vec<f64>,
    /// values[k][j] for mode modes[k] at s[j].
    pub values: Vec<Vec<C>>,
}

impl HorocycleFunction {
    pub fn radial(s: Vec<f64>, values: Vec<C>) -> Self {
        HorocycleFunction { modes: vec![0], s, values: vec![values] }
    }

    pub fn step(&self) -> f64 {
        self.s[1] - self.s[0]
    }

    pub fn mode(&self, n: i32) -> Option<&[C]> {
        self.modes.iter().position(|&m| m == n).map(|k| self.values[k].as_slice())
    }

    /// Value at boundary angle β.
    pub fn at(&self, beta: f64, j: usize) -> C {
        self.modes
            .iter()
            .zip(&self.values)
            .map(|(&n, v)| v[j] * C::from_polar(1.0, n as f64 * beta))
            .sum()
    }

    /// |W|⁻¹ ∫_B ∫_A |u|² db da, with db a probability measure.
    pub fn norm_sq(&self) -> f64 {
        let h = self.step();
        0.5 * h * self.values.iter().flatten().map(|v| v.norm_sqr()).sum::<f64>()
    }

    /// 𝓕_A of mode n at ν: ∫ u_n(s) e^{−iνs} ds.
    pub fn fourier_a(&self, n: i32, nu: f64) -> Option<C> {
        self.mode(n).map(|v| fourier_a(&self.s, v, nu))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, c: C) -> Self {
        HorocycleFunction {
            modes: self.modes.clone(),
            s: self.s.clone(),
            values: self.values.iter().map(|v| v.iter().map(|x| x * c).collect()).collect(),
        }
    }
}

/// Trapezoid approximation of ∫ u(s) e^{−iνs} ds on a uniform grid.
pub fn fourier_a(s: &[f64], u: &[C], nu: f64) -> C {
    let h = s[1] - s[0];
    let n = s.len();
    let mut acc = cx(0.0);
    for (j, (&x, v)) in s.iter().zip(u).enumerate() {
        let w = if j == 0 || j == n - 1 { 0.5 } else { 1.0 };
        acc += v * C::from_polar(w, -nu * x);
    }
    acc * h
}

/// ℛ_ρ f of a disk function on a (β, s) grid, decomposed into the circle
/// modes |n| ≤ n_max.
pub fn radon_rho_disk(
    space: &SpaceModel,
    f: &dyn Fn(f64, f64) -> C,
    n_max: i32,
    n_beta: usize,
    s: &[f64],
    t_cut: f64,
) -> Result<HorocycleFunction> {
    let betas: Vec<f64> = (0..n_beta).map(|k| 2.0 * PI * k as f64 / n_beta as f64).collect();
    let sf = SpaceFunction::Disk(f);
    let mut table = vec![vec![cx(0.0); s.len()]; n_beta];
    for (k, &b) in betas.iter().enumerate() {
        for (j, &x) in s.iter().enumerate() {
            table[k][j] = radon_rho(space, &sf, b, x, t_cut)?;
        }
    }
    let modes: Vec<i32> = (-n_max..=n_max).collect();
    let values = modes
        .iter()
        .map(|&n| {
            (0..s.len())
                .map(|j| {
                    betas
                        .iter()
                        .enumerate()
                        .map(|(k, &b)| table[k][j] * C::from_polar(1.0, -(n as f64) * b))
                        .sum::<C>()
                        / n_beta as f64
                })
                .collect()
        })
        .collect();
    Ok(HorocycleFunction { modes, s: s.to_vec(), values })
}

/// Grids used by [`lambda_op`].
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaGrid {
    /// Half-width of the output s-grid.
    pub s_max: f64,
    /// Step of the output s-grid.
    pub h: f64,
    /// Step of the grid on which the Abel transform is sampled.
    pub abel_h: f64,
    pub nu: Panels,
}

impl Default for LambdaGrid {
    fn default() -> Self {
        LambdaGrid { s_max: 60.0, h: 0.1, abel_h: 0.02, nu: Panels::uniform(0.0, 30.0, 300, 12) }
    }
}

/// 𝓕_A(ℛ_ρ f) on the ν panel grid, from the Abel transform sampled on a
/// uniform grid.
pub fn abel_spectrum<F: Fn(f64) -> C>(space: &SpaceModel, f: F, t_cut: f64, grid: &LambdaGrid) -> Result<SpectralFunction> {
    let s = uniform_s(t_cut, grid.abel_h);
    let vals: Vec<C> = s.iter().map(|&x| abel_fn(space, &f, x, t_cut)).collect::<Result<_>>()?;
    let values: Vec<C> = grid.nu.nodes.iter().map(|&nu| fourier_a(&s, &vals, nu)).collect();
    Ok(SpectralFunction { grid: grid.nu.clone(), values, weight: SpectralWeight::Plancherel })
}

/// Λ from spectral data F(ν) = f̂(ν), ν ≥ 0, evaluated at complex s:
/// (1/2π) ∫_ℝ e^{iνs} Ψ(ν) F(|ν|) dν.
pub fn lambda_eval(space: &SpaceModel, big_f: &SpectralFunction, s: C) -> C {
    lambda_eval_many(space, big_f, &[s])[0]
}

pub fn lambda_eval_many(space: &SpaceModel, big_f: &SpectralFunction, s: &[C]) -> Vec<C> {
    let coef: Vec<(f64, C, C)> = big_f
        .grid
        .nodes
        .iter()
        .zip(&big_f.grid.weights)
        .zip(&big_f.values)
        .map(|((&nu, &w), f)| {
            let p = psi(space, nu);
            (nu, p * f * w, p.conj() * f * w)
        })
        .collect();
    s.iter()
        .map(|&z| {
            let mut acc = cx(0.0);
            for &(nu, a, b) in &coef {
                let e = (C::i() * nu * z).exp();
                acc += a * e + b / e;
            }
            acc / (2.0 * PI)
        })
        .collect()
}

fn check_decay(space: &SpaceModel, big_f: &SpectralFunction) -> Result<()> {
    let n = big_f.values.len();
    let peak = big_f
        .grid
        .nodes
        .iter()
        .zip(&big_f.values)
        .map(|(&nu, f)| f.norm() * psi(space, nu).norm())
        .fold(0.0, f64::max);
    let last = big_f.values[n - 1].norm() * psi(space, big_f.grid.nodes[n - 1]).norm();
    if peak > 0.0 && last > TAIL_TOL.sqrt() * 1e-2 * peak {
        return Err(Error::Truncation { what: "spectral decay for Λ".into(), estimate: last / peak });
    }
    Ok(())
}

/// Λf on the uniform output grid from spectral data.
pub fn lambda_from_spectrum(space: &SpaceModel, big_f: &SpectralFunction, grid: &LambdaGrid) -> Result<HorocycleFunction> {
    check_decay(space, big_f)?;
    let s = uniform_s(grid.s_max, grid.h);
    let pts: Vec<C> = s.iter().map(|&x| cx(x)).collect();
    let values = lambda_eval_many(space, big_f, &pts);
    Ok(HorocycleFunction::radial(s, values))
}

/// Λ = (id × Ψ) ∘ ℛ_ρ for a radial function vanishing beyond `t_cut`:
/// Abel transform, 𝓕_A, the multiplier 1/c(−iν), then 𝓕_A⁻¹.
pub fn lambda_op<F: Fn(f64) -> C>(space: &SpaceModel, f: F, t_cut: f64, grid: &LambdaGrid) -> Result<HorocycleFunction> {
    let spec = abel_spectrum(space, f, t_cut, grid)?;
    lambda_from_spectrum(space, &spec, grid)
}

/// 𝓕_A(u)(±ν) on the ν grid, the W-relation residual
/// max |c(−iν)û(ν) − c(iν)û(−ν)| / max |c(−iν)û(ν)|, and the recovered f̂.
pub fn lambda_spectrum(space: &SpaceModel, u: &HorocycleFunction, nu: &Panels) -> Result<(SpectralFunction, f64)> {
    let u0 = u.mode(0).ok_or_else(|| Error::InvalidArgument("radial mode missing".into()))?;
    let mut num = 0.0f64;
    let mut den = 0.0f64;
    let mut values = Vec::with_capacity(nu.len());
    for &v in &nu.nodes {
        let cm = c_minus(space, v);
        let plus = cm * fourier_a(&u.s, u0, v);
        let minus = cm.conj() * fourier_a(&u.s, u0, -v);
        num = num.max((plus - minus).norm());
        den = den.max(plus.norm());
        values.push(plus);
    }
    let residual = if den > 0.0 { num / den } else { 0.0 };
    Ok((SpectralFunction { grid: nu.clone(), values, weight: SpectralWeight::Plancherel }, residual))
}

/// Λ⁻¹ for radial data: 𝓕_A, multiplication by c(−iν), then the inverse
/// spherical transform on the kernel's grids.
pub fn lambda_inverse(space: &SpaceModel, u: &HorocycleFunction, kern: &SphericalKernel) -> Result<RadialFunction> {
    let (spec, residual) = lambda_spectrum(space, u, &kern.nu)?;
    if residual > WEYL_TOL {
        return Err(Error::WeylRelation { residual });
    }
    kern.inverse(space, &spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsystem::{build_space, SpaceKind};
    use crate::transform::{gaussian_bump, GridSpec};

    #[test]
    fn kappa_values() {
        let cases = [
            (SpaceKind::Hyperbolic(2), 1.0 / PI),
            (SpaceKind::ComplexA1, 1.0 / PI),
            (SpaceKind::Hyperbolic(4), 4.0 / (PI * PI)),
            (SpaceKind::Jacobi(2, 1), 8.0 / (PI * PI)),
            (SpaceKind::Jacobi(3, 2), 128.0 / (PI * PI * PI)),
        ];
        for (kind, want) in cases {
            let s = build_space(kind).unwrap();
            assert!((abel_kappa(&s) - want).abs() < 1e-12 * want, "{kind}");
        }
    }

    #[test]
    fn abel_is_even_and_matches_spherical_transform() {
        for kind in [SpaceKind::Hyperbolic(2), SpaceKind::ComplexA1, SpaceKind::Jacobi(3, 2)] {
            let s = build_space(kind).unwrap();
            let g = gaussian_bump(1.0, 0.3);
            let f = |t: f64| cx(g(t));
            for x in [0.0, 0.4, 1.3, 2.5] {
                let a = abel_fn(&s, f, x, 6.0).unwrap();
                let b = abel_fn(&s, f, -x, 6.0).unwrap();
                assert_eq!(a, b);
            }
            let grid = LambdaGrid { nu: Panels::uniform(0.0, 10.0, 10, 8), ..Default::default() };
            let spec = abel_spectrum(&s, f, 6.0, &grid).unwrap();
            let spec_grid = GridSpec { t_max: 6.0, ..Default::default() };
            let kern = SphericalKernel::new(&s, &spec_grid.radial(), &grid.nu).unwrap();
            let fh = kern.forward(&s, &RadialFunction::sample(&kern.t, f)).unwrap();
            let scale = fh.values[0].norm();
            for (a, b) in spec.values.iter().zip(&fh.values) {
                assert!((a - b).norm() < 1e-9 * scale, "{kind}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn radon_group_model_agrees_with_abel() {
        let s = build_space(SpaceKind::Hyperbolic(2)).unwrap();
        let g = gaussian_bump(1.0, 0.3);
        let f = |t: f64| cx(g(t));
        let rf = SpaceFunction::Radial(&f);
        for x in [-2.0, -0.5, 0.0, 0.7, 1.9] {
            let a = radon_rho(&s, &rf, 0.3, x, 6.0).unwrap();
            let b = abel_fn(&s, f, x, 6.0).unwrap();
            assert!((a - b).norm() < 1e-10 * b.norm().max(1e-3), "s={x}");
            let c = radon_rho(&s, &rf, 2.0, x, 6.0).unwrap();
            assert!((a - c).norm() < 1e-12 * b.norm().max(1e-3));
        }
        assert_eq!(radon(&s, &SpaceFunction::Radial(&|_| cx(0.0)), 0.0, 0.3, 6.0).unwrap(), cx(0.0));
    }

    #[test]
    fn radon_rotation_equivariance() {
        let s = build_space(SpaceKind::Hyperbolic(2)).unwrap();
        let g = gaussian_bump(1.0, 0.3);
        let f = move |t: f64, th: f64| cx(g(t)) * (1.0 + 0.5 * th.cos() + 0.2 * (2.0 * th).sin());
        let k = 0.9;
        let fk = move |t: f64, th: f64| f(t, th + k);
        for x in [-0.8, 0.2, 1.1] {
            let a = radon(&s, &SpaceFunction::Disk(&f), 0.4 + k, x, 6.0).unwrap();
            let b = radon(&s, &SpaceFunction::Disk(&fk), 0.4, x, 6.0).unwrap();
            assert!((a - b).norm() < 1e-11 * a.norm());
        }
        assert!(radon(&build_space(SpaceKind::ComplexA1).unwrap(), &SpaceFunction::Disk(&f), 0.0, 0.0, 6.0).is_err());
    }

    #[test]
    fn lambda_round_trip_and_weyl_relation() {
        let s = build_space(SpaceKind::Hyperbolic(2)).unwrap();
        let g = gaussian_bump(1.0, 0.3);
        let grid = LambdaGrid::default();
        let u = lambda_op(&s, |t| cx(g(t)), 6.0, &grid).unwrap();
        let kern = SphericalKernel::new(&s, &GridSpec { t_max: 6.0, ..Default::default() }.radial(), &grid.nu).unwrap();
        let (_, res) = lambda_spectrum(&s, &u, &kern.nu).unwrap();
        assert!(res < 1e-8, "{res}");
        let back = lambda_inverse(&s, &u, &kern).unwrap();
        let want = RadialFunction::sample_real(&kern.t, g);
        assert!(back.rel_linf_error(&want) < 1e-6);
        let zero = u.scale(cx(0.0));
        assert_eq!(lambda_inverse(&s, &zero, &kern).unwrap().max_abs(), 0.0);
        // breaking the W-relation is reported
        let mut bad = u.clone();
        let n = bad.s.len();
        for j in n / 2..n {
            bad.values[0][j] *= 1.5;
        }
        assert!(matches!(lambda_inverse(&s, &bad, &kern), Err(Error::WeylRelation { .. })));
    }
}
