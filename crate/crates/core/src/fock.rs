//! Fock-side image of the heat transform and the horocycle Hardy space 𝓗_Ξ.
//!
//! Functions on 𝔞_ℂ are carried as spectral data and evaluated at
//! complex arguments by their entire Fourier integral
//! (1/2π) ∫_ℝ e^{iνz} g(ν) dν.

use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quadrature::Panels;
use crate::radon::{lambda_inverse, psi, uniform_s, HorocycleFunction};
use crate::rootsystem::SpaceModel;
use crate::transform::{RadialFunction, SpectralFunction, SphericalKernel};

type C = Complex64;

fn cx(re: f64) -> C {
    C::new(re, 0.0)
}

/// Relative size below which spectral content is treated as absent.
pub const CONTENT_TOL: f64 = 1e-13;

/// Quadrature weights folded into coefficients of e^{iνz} (ν ≥ 0) and
/// e^{−iνz} (ν > 0).
#[derive(Debug, Clone, PartialEq)]
pub struct HoloSpectrum {
    pub nu: Vec<f64>,
    plus: Vec<C>,
    minus: Vec<C>,
}

impl HoloSpectrum {
    /// g(ν) = Ψ(ν) F(|ν|) e^{−tν²} with Ψ(−ν) = conj Ψ(ν); `with_psi = false`
    /// drops the multiplier.
    pub fn from_spectral(space: &SpaceModel, f: &SpectralFunction, t: f64, with_psi: bool) -> Self {
        let mut plus = Vec::with_capacity(f.values.len());
        let mut minus = Vec::with_capacity(f.values.len());
        for ((&nu, &w), &v) in f.grid.nodes.iter().zip(&f.grid.weights).zip(&f.values) {
            let p = if with_psi { psi(space, nu) } else { cx(1.0) };
            let a = v * (w * (-t * nu * nu).exp());
            plus.push(p * a);
            minus.push(p.conj() * a);
        }
        HoloSpectrum { nu: f.grid.nodes.clone(), plus, minus }
    }

    pub fn scale(&self, c: C) -> Self {
        HoloSpectrum {
            nu: self.nu.clone(),
            plus: self.plus.iter().map(|v| v * c).collect(),
            minus: self.minus.iter().map(|v| v * c).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        HoloSpectrum {
            nu: self.nu.clone(),
            plus: self.plus.iter().zip(&other.plus).map(|(a, b)| a - b).collect(),
            minus: self.minus.iter().zip(&other.minus).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn eval(&self, z: C) -> C {
        let mut acc = cx(0.0);
        for ((&nu, a), b) in self.nu.iter().zip(&self.plus).zip(&self.minus) {
            let e = (C::i() * nu * z).exp();
            acc += a * e + b / e;
        }
        acc / (2.0 * PI)
    }

    /// Values on the rows X + iY for X in `xs`, one row per entry of `ys`.
    pub fn eval_rows(&self, xs: &[f64], ys: &[f64]) -> Vec<Vec<C>> {
        let table: Vec<Vec<C>> = self
            .nu
            .par_iter()
            .map(|&nu| xs.iter().map(|&x| C::from_polar(1.0, nu * x)).collect())
            .collect();
        ys.par_iter()
            .map(|&y| {
                let mut row = vec![cx(0.0); xs.len()];
                for (i, &nu) in self.nu.iter().enumerate() {
                    let a = self.plus[i] * (-nu * y).exp();
                    let b = self.minus[i] * (nu * y).exp();
                    if a.norm_sqr() + b.norm_sqr() == 0.0 {
                        continue;
                    }
                    for (r, e) in row.iter_mut().zip(&table[i]) {
                        *r += a * e + b * e.conj();
                    }
                }
                row.iter().map(|v| v / (2.0 * PI)).collect()
            })
            .collect()
    }

    /// Largest ν at which |g(±ν)| e^{mν²} exceeds CONTENT_TOL of its peak.
    fn content_edge(&self, m: f64) -> f64 {
        let mag: Vec<f64> = self
            .nu
            .iter()
            .enumerate()
            .map(|(i, &nu)| (self.plus[i].norm() + self.minus[i].norm()) * (m * nu * nu).exp())
            .collect();
        let peak = mag.iter().cloned().fold(0.0, f64::max);
        self.nu
            .iter()
            .zip(&mag)
            .filter(|(_, &v)| v > CONTENT_TOL * peak)
            .map(|(&nu, _)| nu)
            .fold(0.0, f64::max)
    }
}

/// e^{tρ²} Λ(H_t f) as a holomorphic function on 𝔞_ℂ (K-invariant f).
#[derive(Debug, Clone, PartialEq)]
pub struct FockFunction {
    pub t: f64,
    pub spectrum: HoloSpectrum,
}

impl FockFunction {
    pub fn eval(&self, z: C) -> C {
        self.spectrum.eval(z)
    }

    pub fn scale(&self, c: C) -> Self {
        FockFunction { t: self.t, spectrum: self.spectrum.scale(c) }
    }
}

/// Λ_t f from spectral data of f.
pub fn lambda_t_spectral(space: &SpaceModel, f_hat: &SpectralFunction, t: f64) -> Result<FockFunction> {
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!("heat time must be positive, got {t}")));
    }
    Ok(FockFunction { t, spectrum: HoloSpectrum::from_spectral(space, f_hat, t, true) })
}

/// Λ_t f for a radial function f.
pub fn lambda_t(space: &SpaceModel, kern: &SphericalKernel, f: &RadialFunction, t: f64) -> Result<FockFunction> {
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!("heat time must be positive, got {t}")));
    }
    lambda_t_spectral(space, &kern.forward(space, f)?, t)
}

/// (Λf ∗ h_t^A)(z) with the Euclidean Gaussian continued to complex z,
/// by the trapezoid rule on the samples of Λf.
pub fn gaussian_convolution(u: &HorocycleFunction, t: f64, z: C) -> Result<C> {
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!("heat time must be positive, got {t}")));
    }
    let u0 = u.mode(0).ok_or_else(|| Error::InvalidArgument("radial mode missing".into()))?;
    let h = u.step();
    let norm = (4.0 * PI * t).sqrt();
    let mut acc = cx(0.0);
    for (&s, &v) in u.s.iter().zip(u0) {
        let d = z - s;
        acc += v * (-d * d / (4.0 * t)).exp();
    }
    Ok(acc * (h / norm))
}

/// Grid for the 2-D Gaussian-weighted quadratures on 𝔞_ℂ.
#[derive(Debug, Clone, PartialEq)]
pub struct FockGrid {
    /// X-window of the norm integral.
    pub x_max: f64,
    /// X-window on which the inversion produces Λf.
    pub inversion_s_max: f64,
    pub hx: f64,
    pub hy: f64,
    /// Extra Y range in units of √t beyond the spectral content.
    pub y_margin: f64,
}

impl Default for FockGrid {
    fn default() -> Self {
        FockGrid { x_max: 40.0, inversion_s_max: 60.0, hx: 0.1, hy: 0.1, y_margin: 9.0 }
    }
}

fn y_grid(reach: f64, hy: f64) -> Vec<f64> {
    let n = (reach / hy).ceil() as i64;
    (-n..=n).map(|k| k as f64 * hy).collect()
}

/// ‖Φ‖²_t = |W|⁻¹ (2πt)^{−1/2} ∫∫ |Φ(X+iY)|² e^{−Y²/2t} dX dY.
pub fn fock_norm(space: &SpaceModel, phi: &FockFunction, grid: &FockGrid) -> Result<f64> {
    let t = phi.t;
    let reach = 2.0 * t * phi.spectrum.content_edge(t) + grid.y_margin * t.sqrt();
    let ys = y_grid(reach, grid.hy);
    let xs = uniform_s(grid.x_max, grid.hx);
    let rows = phi.spectrum.eval_rows(&xs, &ys);
    let mut total = 0.0;
    let mut edge = 0.0f64;
    let mut peak = 0.0f64;
    for (row, &y) in rows.iter().zip(&ys) {
        let g = (-y * y / (2.0 * t)).exp();
        let s: f64 = row.iter().map(|v| v.norm_sqr()).sum::<f64>() * grid.hx;
        total += s * g;
        peak = peak.max(row.iter().map(|v| v.norm_sqr() * g).fold(0.0, f64::max));
        edge = edge.max((row[0].norm_sqr() + row[row.len() - 1].norm_sqr()) * g);
    }
    if !total.is_finite() {
        return Err(Error::Quadrature("Fock norm diverged".into()));
    }
    let ends = [&rows[0], &rows[rows.len() - 1]];
    let y_edge = ends.iter().map(|r| r.iter().map(|v| v.norm_sqr()).fold(0.0, f64::max)).fold(0.0, f64::max)
        * (-reach * reach / (2.0 * t)).exp();
    if peak > 0.0 && (edge > 1e-12 * peak || y_edge > 1e-12 * peak) {
        return Err(Error::Truncation { what: "Fock-norm window".into(), estimate: edge.max(y_edge) / peak });
    }
    let w = space.weyl_order() as f64;
    Ok(total * grid.hy / ((2.0 * PI * t).sqrt() * w))
}

/// Λf(X) = (4πt)^{−1/2} ∫ Φ(X+iY) e^{−Y²/4t} dY on a uniform X grid.
pub fn fock_boundary_values(phi: &FockFunction, grid: &FockGrid, s_max: f64, h: f64) -> Result<HorocycleFunction> {
    let t = phi.t;
    let reach = 2.0 * t * phi.spectrum.content_edge(t) + grid.y_margin * (2.0 * t).sqrt();
    let ys = y_grid(reach, grid.hy);
    let xs = uniform_s(s_max, h);
    let rows = phi.spectrum.eval_rows(&xs, &ys);
    let mut values = vec![cx(0.0); xs.len()];
    let mut peak = 0.0f64;
    let mut edge = 0.0f64;
    for (k, (row, &y)) in rows.iter().zip(&ys).enumerate() {
        let g = (-y * y / (4.0 * t)).exp();
        for (v, r) in values.iter_mut().zip(row) {
            *v += r * g;
        }
        let m = row.iter().map(|v| v.norm()).fold(0.0, f64::max) * g;
        peak = peak.max(m);
        if k == 0 || k + 1 == ys.len() {
            edge = edge.max(m);
        }
    }
    if peak > 0.0 && edge > 1e-12 * peak {
        return Err(Error::Truncation { what: "Y-window of the inversion integral".into(), estimate: edge / peak });
    }
    let c = grid.hy / (4.0 * PI * t).sqrt();
    Ok(HorocycleFunction::radial(xs, values.into_iter().map(|v| v * c).collect()))
}

/// Recovers f from Φ = Λ_t f: the Gaussian Y-average gives Λf on 𝔞, then Λ⁻¹.
pub fn segal_bargmann_invert(space: &SpaceModel, phi: &FockFunction, kern: &SphericalKernel, grid: &FockGrid) -> Result<RadialFunction> {
    let u = fock_boundary_values(phi, grid, grid.inversion_s_max, grid.hx)?;
    lambda_inverse(space, &u, kern)
}

/// Functions on B × A(Ω) in the K-type expansion, sampled on slices y.
#[derive(Debug, Clone, PartialEq)]
pub struct HorocycleDomainFunction {
    pub s: Vec<f64>,
    pub ys: Vec<f64>,
    pub modes: Vec<(i32, HoloSpectrum)>,
    /// values[m][k][j] = mode m at s_j + i y_k.
    pub values: Vec<Vec<Vec<C>>>,
}

impl HorocycleDomainFunction {
    pub fn from_modes(modes: Vec<(i32, HoloSpectrum)>, s: Vec<f64>, ys: Vec<f64>) -> Self {
        let values = modes.iter().map(|(_, sp)| sp.eval_rows(&s, &ys)).collect();
        HorocycleDomainFunction { s, ys, modes, values }
    }

    pub fn eval(&self, mode: i32, z: C) -> Option<C> {
        self.modes.iter().find(|(n, _)| *n == mode).map(|(_, sp)| sp.eval(z))
    }

    /// |W|⁻¹ ∫ Σ_n |u_n(s + iy_k)|² ds on each slice.
    pub fn slice_norms(&self, space: &SpaceModel) -> Vec<f64> {
        let h = self.s[1] - self.s[0];
        let w = space.weyl_order() as f64;
        (0..self.ys.len())
            .map(|k| self.values.iter().map(|m| m[k].iter().map(|v| v.norm_sqr()).sum::<f64>()).sum::<f64>() * h / w)
            .collect()
    }

    /// max |∂_y u − i ∂_s u| / max |∂_s u| by central differences at the
    /// given points.
    pub fn cr_residual(&self, points: &[C], h: f64) -> f64 {
        let mut num = 0.0f64;
        let mut den = 0.0f64;
        for (_, sp) in &self.modes {
            for &z in points {
                let ds = (sp.eval(z + h) - sp.eval(z - h)) / (2.0 * h);
                let dy = (sp.eval(z + C::new(0.0, h)) - sp.eval(z - C::new(0.0, h))) / (2.0 * h);
                num = num.max((dy - C::i() * ds).norm());
                den = den.max(ds.norm());
            }
        }
        if den > 0.0 {
            num / den
        } else {
            0.0
        }
    }
}

/// y-grid ±h(1 − 2^{−k}), k = 0..=levels, approaching ∂Ω geometrically.
pub fn omega_y_grid(space: &SpaceModel, levels: usize) -> Vec<f64> {
    let half = space.omega_halfwidth();
    let mut ys: Vec<f64> = (0..=levels).map(|k| half * (1.0 - 0.5f64.powi(k as i32))).collect();
    let neg: Vec<f64> = ys.iter().skip(1).map(|y| -y).collect();
    ys.extend(neg);
    ys
}

/// Λ̃F for spectral data per K-type: slice y has 𝓕_A-data Ψ(ν)F̂(ν)e^{−νy}.
pub fn lambda_tilde(
    space: &SpaceModel,
    modes: &[(i32, SpectralFunction)],
    s_max: f64,
    h: f64,
    levels: usize,
) -> HorocycleDomainFunction {
    let specs = modes.iter().map(|(n, f)| (*n, HoloSpectrum::from_spectral(space, f, 0.0, true))).collect();
    HorocycleDomainFunction::from_modes(specs, uniform_s(s_max, h), omega_y_grid(space, levels))
}

/// Holomorphic extension of Λ(H_t f) to A(Ω) from spectral data of f.
pub fn lambda_heat_extension(
    space: &SpaceModel,
    f_hat: &SpectralFunction,
    t: f64,
    s_max: f64,
    h: f64,
    levels: usize,
) -> HorocycleDomainFunction {
    let damp = (-t * space.rho() * space.rho()).exp();
    let sp = HoloSpectrum::from_spectral(space, f_hat, t, true).scale(cx(damp));
    HorocycleDomainFunction::from_modes(vec![(0, sp)], uniform_s(s_max, h), omega_y_grid(space, levels))
}

#[derive(Debug, Clone, PartialEq)]
pub struct HxiNorm {
    /// Largest sampled slice norm, a lower bound for the supremum.
    pub sampled_sup: f64,
    /// Boundary limit by repeated Richardson extrapolation on y_k → ∂Ω.
    pub extrapolated: f64,
    pub slices: Vec<(f64, f64)>,
    /// Slice norms even in y and nondecreasing in |y| on the sample.
    pub monotone: bool,
}

/// ‖u‖²_{𝓗_Ξ} = sup_{Y∈Ω} |W|⁻¹ ∫∫ |u(b, a exp iY)|² db da on the y-grid of
/// `u`, with the boundary limit extrapolated from the geometric levels.
pub fn hxi_norm(space: &SpaceModel, u: &HorocycleDomainFunction) -> Result<HxiNorm> {
    let norms = space_slices(space, u)?;
    let mut pos: Vec<(f64, f64)> = norms.iter().cloned().filter(|(y, _)| *y >= 0.0).collect();
    pos.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut monotone = pos.windows(2).all(|w| w[1].1 >= w[0].1 * (1.0 - 1e-12));
    for &(y, v) in &norms {
        if y < 0.0 {
            if let Some(&(_, p)) = pos.iter().find(|(py, _)| (py + y).abs() < 1e-15) {
                monotone &= (v - p).abs() <= 1e-8 * p.max(v);
            }
        }
    }
    let sampled_sup = norms.iter().map(|p| p.1).fold(0.0, f64::max);
    // levels with y = half(1 − 2^{−k}) have errors in powers of 2^{−k}
    let mut table: Vec<f64> = pos.iter().map(|p| p.1).collect();
    let mut factor = 2.0;
    while table.len() > 3 {
        let next: Vec<f64> = table.windows(2).map(|w| (factor * w[1] - w[0]) / (factor - 1.0)).collect();
        let spread = (next[next.len() - 1] - next[next.len() - 2]).abs();
        let prev_spread = (table[table.len() - 1] - table[table.len() - 2]).abs();
        if spread >= prev_spread {
            break;
        }
        table = next;
        factor *= 2.0;
    }
    let extrapolated = *table.last().unwrap_or(&sampled_sup);
    Ok(HxiNorm { sampled_sup, extrapolated, slices: norms, monotone })
}

fn space_slices(space: &SpaceModel, u: &HorocycleDomainFunction) -> Result<Vec<(f64, f64)>> {
    let norms = u.slice_norms(space);
    // decay check at both ends of every slice
    for (m, mode) in u.values.iter().enumerate() {
        for (k, row) in mode.iter().enumerate() {
            let peak = row.iter().map(|v| v.norm()).fold(0.0, f64::max);
            let edge = row[0].norm().max(row[row.len() - 1].norm());
            if !peak.is_finite() {
                return Err(Error::Quadrature(format!("slice y = {} of mode {m} diverged", u.ys[k])));
            }
            if peak > 0.0 && edge > 1e-6 * peak {
                return Err(Error::Truncation { what: format!("slice y = {} of mode {m}", u.ys[k]), estimate: edge / peak });
            }
        }
    }
    Ok(u.ys.iter().cloned().zip(norms).collect())
}

/// ‖Λ̃(F) − Λ(H_t F|_X)‖_{𝓗_Ξ} for each t, both computed on the same grids.
pub fn heat_limit_errors(space: &SpaceModel, f_hat: &SpectralFunction, ts: &[f64], s_max: f64, h: f64, levels: usize) -> Result<Vec<f64>> {
    let limit = HoloSpectrum::from_spectral(space, f_hat, 0.0, true);
    let rho2 = space.rho() * space.rho();
    ts.iter()
        .map(|&t| {
            let approx = HoloSpectrum::from_spectral(space, f_hat, t, true).scale(cx((-t * rho2).exp()));
            let diff = HorocycleDomainFunction::from_modes(vec![(0, limit.sub(&approx))], uniform_s(s_max, h), omega_y_grid(space, levels));
            Ok(hxi_norm(space, &diff)?.extrapolated.sqrt())
        })
        .collect()
}

/// Spectral data on a fixed ν grid, used to build test spectra.
pub fn spectral_on(grid: &Panels, f: impl Fn(f64) -> f64) -> SpectralFunction {
    SpectralFunction::sample(grid, |nu| cx(f(nu)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crown::hx_norm;
    use crate::radon::{lambda_op, LambdaGrid};
    use crate::rootsystem::{build_space, SpaceKind};
    use crate::transform::{gaussian_bump, heat_transform, GridSpec};

    fn setup() -> (SpaceModel, SphericalKernel) {
        let s = build_space(SpaceKind::Hyperbolic(2)).unwrap();
        let spec = GridSpec { t_max: 8.0, nu_max: 24.0, nu_panel: 0.25, ..Default::default() };
        let k = SphericalKernel::from_spec(&s, &spec).unwrap();
        (s, k)
    }

    #[test]
    fn restriction_and_convolution_route() {
        let (s, kern) = setup();
        let f = RadialFunction::sample_real(&kern.t, gaussian_bump(1.0, 0.5));
        let t = 0.25;
        let phi = lambda_t(&s, &kern, &f, t).unwrap();
        let ht = heat_transform(&s, &kern, &f, t).unwrap();
        let grid = LambdaGrid::default();
        let direct = lambda_op(&s, |x| ht.eval(x), kern.t.nodes.last().copied().unwrap() + 0.1, &grid).unwrap();
        let e = (t * s.rho() * s.rho()).exp();
        let peak = direct.max_abs();
        for j in (0..direct.s.len()).step_by(37) {
            let a = phi.eval(cx(direct.s[j]));
            assert!((a - direct.values[0][j] * e).norm() < 1e-8 * peak * e);
        }
        let lf = lambda_op(&s, |x| f.eval(x), 8.0, &grid).unwrap();
        for z in [C::new(0.3, 0.2), C::new(-1.5, -0.4), C::new(2.0, 0.5)] {
            let a = phi.eval(z);
            let b = gaussian_convolution(&lf, t, z).unwrap();
            assert!((a - b).norm() < 1e-7 * peak * e, "{a} {b}");
        }
        assert!(lambda_t(&s, &kern, &f, 0.0).is_err());
    }

    #[test]
    fn heat_equation_on_a() {
        let (s, kern) = setup();
        let f = RadialFunction::sample_real(&kern.t, gaussian_bump(0.8, 0.5));
        let fh = kern.forward(&s, &f).unwrap();
        let (t, dt, dx) = (0.3, 1e-3, 1e-2);
        for x in [-1.0, 0.2, 1.7] {
            let p = |t: f64, x: f64| lambda_t_spectral(&s, &fh, t).unwrap().eval(cx(x));
            let lhs = (p(t + dt, x) - p(t - dt, x)) / (2.0 * dt);
            let rhs = (p(t, x + dx) - 2.0 * p(t, x) + p(t, x - dx)) / (dx * dx);
            assert!((lhs - rhs).norm() < 1e-4 * lhs.norm().max(1e-2));
        }
    }

    #[test]
    fn fock_norm_unitarity_and_inversion() {
        let (s, kern) = setup();
        let f = RadialFunction::sample_real(&kern.t, gaussian_bump(1.2, 0.5));
        let phi = lambda_t(&s, &kern, &f, 0.25).unwrap();
        let grid = FockGrid::default();
        let n = fock_norm(&s, &phi, &grid).unwrap();
        let want = f.norm_sq(&s);
        assert!((n - want).abs() < 1e-4 * want, "{n} {want}");
        let n2 = fock_norm(&s, &phi.scale(C::new(0.0, 2.0)), &grid).unwrap();
        assert!((n2 - 4.0 * n).abs() < 1e-12 * n2);
        let back = segal_bargmann_invert(&s, &phi, &kern, &grid).unwrap();
        assert!(back.rel_linf_error(&f) < 1e-4);
    }

    #[test]
    fn hxi_norm_matches_hx_norm() {
        let (s, kern) = setup();
        let fh = spectral_on(&kern.nu, |nu| (-0.3 * (nu * nu + 0.25)).exp());
        let u = lambda_tilde(&s, &[(0, fh.clone())], 40.0, 0.1, 12);
        let r = hxi_norm(&s, &u).unwrap();
        let want = hx_norm(&s, &fh).unwrap();
        assert!(r.monotone);
        assert!(r.sampled_sup <= want * (1.0 + 1e-10));
        assert!((r.extrapolated - want).abs() < 1e-4 * want, "{} {want}", r.extrapolated);
        let slice0 = r.slices.iter().find(|p| p.0 == 0.0).unwrap().1;
        assert!((slice0 - fh.norm_sq(&s)).abs() < 1e-6 * slice0);
        assert!(u.cr_residual(&[C::new(0.5, 0.3), C::new(-2.0, 1.2)], 1e-4) < 1e-6);
        let errs = heat_limit_errors(&s, &fh, &[0.1, 0.01, 0.001], 40.0, 0.1, 12).unwrap();
        assert!(errs[0] > errs[1] && errs[1] > errs[2]);
    }
}
