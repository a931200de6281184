//! Spherical and Helgason Fourier transforms, Plancherel inversion, the
//! heat kernel and heat transform, and the numerical intertwining scalar.

use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

use crate::cfunction::{c_minus, plancherel_density};
use crate::error::{Error, Result};
use crate::quadrature::{adaptive, Panels};
use crate::rootsystem::SpaceModel;
use crate::spherical::{harish_chandra_phi, poisson_transform, Phi};

type C = Complex64;

fn cx(re: f64) -> C {
    C::new(re, 0.0)
}

/// Relative size of the truncated tail tolerated by the transforms.
pub const TAIL_TOL: f64 = 1e-12;

/// Radial and spectral grid layout.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub t_max: f64,
    pub t_panel: f64,
    pub nu_max: f64,
    pub nu_panel: f64,
    pub order: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { t_max: 12.0, t_panel: 0.25, nu_max: 30.0, nu_panel: 0.5, order: 12 }
    }
}

impl GridSpec {
    pub fn radial(&self) -> Panels {
        Panels::uniform(0.0, self.t_max, (self.t_max / self.t_panel).round() as usize, self.order)
    }

    pub fn spectral(&self) -> Panels {
        Panels::uniform(0.0, self.nu_max, (self.nu_max / self.nu_panel).round() as usize, self.order)
    }

    /// Both panel widths halved.
    pub fn refined(&self) -> Self {
        GridSpec { t_panel: 0.5 * self.t_panel, nu_panel: 0.5 * self.nu_panel, ..self.clone() }
    }
}

/// exp(−(t − t0)²/2σ²) + exp(−(t + t0)²/2σ²), smooth and even in t.
pub fn gaussian_bump(t0: f64, sigma: f64) -> impl Fn(f64) -> f64 + Copy {
    let g = move |x: f64| (-x * x / (2.0 * sigma * sigma)).exp();
    move |t: f64| g(t - t0) + g(t + t0)
}

/// A K-invariant function sampled at the nodes of a radial panel grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialFunction {
    pub grid: Panels,
    pub values: Vec<C>,
}

impl RadialFunction {
    pub fn sample<F: Fn(f64) -> C>(grid: &Panels, f: F) -> Self {
        RadialFunction { grid: grid.clone(), values: grid.nodes.iter().map(|&t| f(t)).collect() }
    }

    pub fn sample_real<F: Fn(f64) -> f64>(grid: &Panels, f: F) -> Self {
        Self::sample(grid, |t| cx(f(t)))
    }

    pub fn zero(grid: &Panels) -> Self {
        Self::sample(grid, |_| cx(0.0))
    }

    /// Interpolated value; zero beyond the grid.
    pub fn eval(&self, t: f64) -> C {
        let t = t.abs();
        if t > *self.grid.breaks.last().unwrap() {
            return cx(0.0);
        }
        self.grid.interpolate(&self.values, t)
    }

    /// ‖f‖² = ∫ |f|² δ dt.
    pub fn norm_sq(&self, space: &SpaceModel) -> f64 {
        self.grid
            .nodes
            .iter()
            .zip(&self.grid.weights)
            .zip(&self.values)
            .map(|((&t, &w), v)| w * v.norm_sqr() * space.density(t))
            .sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Whether the last panel is identically zero.
    pub fn has_trailing_zeros(&self) -> bool {
        let n = self.grid.order;
        self.values[self.values.len() - n..].iter().all(|v| *v == cx(0.0))
    }

    pub fn linear_combination(a: C, f: &Self, b: C, g: &Self) -> Self {
        assert_eq!(f.grid, g.grid);
        RadialFunction {
            grid: f.grid.clone(),
            values: f.values.iter().zip(&g.values).map(|(x, y)| a * x + b * y).collect(),
        }
    }

    /// max |f − g| / max |g|.
    pub fn rel_linf_error(&self, reference: &Self) -> f64 {
        let num = self.values.iter().zip(&reference.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        num / reference.max_abs()
    }

    fn tail_ratio(&self, space: &SpaceModel) -> f64 {
        let total: f64 = self
            .grid
            .nodes
            .iter()
            .zip(&self.grid.weights)
            .zip(&self.values)
            .map(|((&t, &w), v)| w * v.norm() * space.density(t))
            .sum();
        let n = self.values.len();
        let last = self.grid.nodes[n - 1];
        let width = self.grid.breaks[self.grid.breaks.len() - 1] - self.grid.breaks[self.grid.breaks.len() - 2];
        if total == 0.0 {
            return 0.0;
        }
        self.values[n - 1].norm() * space.density(last) * width / total
    }
}

/// Measure in force on a spectral function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectralWeight {
    /// |c(iν)|⁻² dν.
    Plancherel,
    /// e^{2t(ν²+ρ²)} |c(iν)|⁻² dν.
    Heat(f64),
    /// ω(iν) |c(iν)|⁻² dν.
    Omega,
}

/// Values on a spectral grid ν ∈ [0, ν_max].
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralFunction {
    pub grid: Panels,
    pub values: Vec<C>,
    pub weight: SpectralWeight,
}

impl SpectralFunction {
    pub fn sample<F: Fn(f64) -> C>(grid: &Panels, f: F) -> Self {
        SpectralFunction {
            grid: grid.clone(),
            values: grid.nodes.iter().map(|&v| f(v)).collect(),
            weight: SpectralWeight::Plancherel,
        }
    }

    pub fn zero(grid: &Panels) -> Self {
        Self::sample(grid, |_| cx(0.0))
    }

    pub fn with_weight(mut self, weight: SpectralWeight) -> Self {
        self.weight = weight;
        self
    }

    /// Pointwise product with a multiplier m(ν).
    pub fn multiply<F: Fn(f64) -> C>(&self, m: F) -> Self {
        SpectralFunction {
            grid: self.grid.clone(),
            values: self.grid.nodes.iter().zip(&self.values).map(|(&v, f)| f * m(v)).collect(),
            weight: self.weight,
        }
    }

    /// k ∫ |F|² (weight) dν over the chamber ν ≥ 0.
    pub fn norm_sq(&self, space: &SpaceModel) -> f64 {
        let rho2 = space.rho() * space.rho();
        let s: f64 = self
            .grid
            .nodes
            .iter()
            .zip(&self.grid.weights)
            .zip(&self.values)
            .map(|((&nu, &w), f)| {
                let extra = match self.weight {
                    SpectralWeight::Plancherel => 1.0,
                    SpectralWeight::Heat(t) => (2.0 * t * (nu * nu + rho2)).exp(),
                    SpectralWeight::Omega => space.omega(nu),
                };
                w * f.norm_sqr() * plancherel_density(space, nu) * extra
            })
            .sum();
        space.k_space * s
    }

    fn tail_ratio(&self, space: &SpaceModel) -> f64 {
        let mut peak = 0.0f64;
        for (&nu, f) in self.grid.nodes.iter().zip(&self.values) {
            peak = peak.max(f.norm() * plancherel_density(space, nu));
        }
        let n = self.values.len();
        if peak == 0.0 {
            return 0.0;
        }
        self.values[n - 1].norm() * plancherel_density(space, self.grid.nodes[n - 1]) / peak
    }
}

/// Table of φ_{iν}(t) on a (ν, t) grid, reused by forward and inverse
/// spherical transforms.
#[derive(Debug, Clone)]
pub struct SphericalKernel {
    pub t: Panels,
    pub nu: Panels,
    /// phi[i][j] = φ_{iν_i}(t_j).
    phi: Vec<Vec<C>>,
    density: Vec<f64>,
    mu: Vec<f64>,
    k: f64,
}

impl SphericalKernel {
    pub fn new(space: &SpaceModel, t: &Panels, nu: &Panels) -> Result<Self> {
        let phi: Result<Vec<Vec<C>>> = nu
            .nodes
            .par_iter()
            .map(|&v| Phi::new(space, C::new(0.0, v)).eval_sorted(&t.nodes))
            .collect();
        let phi = phi?;
        // φ_{iν} is real for real ν
        let phi = phi
            .into_iter()
            .map(|row| row.into_iter().map(|v| cx(v.re)).collect())
            .collect();
        Ok(SphericalKernel {
            t: t.clone(),
            nu: nu.clone(),
            phi,
            density: t.nodes.iter().map(|&x| space.density(x)).collect(),
            mu: nu.nodes.iter().map(|&v| plancherel_density(space, v)).collect(),
            k: space.k_space,
        })
    }

    pub fn from_spec(space: &SpaceModel, spec: &GridSpec) -> Result<Self> {
        Self::new(space, &spec.radial(), &spec.spectral())
    }

    /// f̂(ν) = ∫ f(t) φ_{−iν}(t) δ(t) dt.
    pub fn forward(&self, space: &SpaceModel, f: &RadialFunction) -> Result<SpectralFunction> {
        if f.grid != self.t {
            return Err(Error::InvalidArgument("radial grid does not match the kernel".into()));
        }
        let tail = f.tail_ratio(space);
        if tail > TAIL_TOL {
            return Err(Error::Truncation { what: "radial tail of f".into(), estimate: tail });
        }
        let fw: Vec<C> = (0..self.t.len()).map(|j| f.values[j] * self.t.weights[j] * self.density[j]).collect();
        let values = self.phi.iter().map(|row| row.iter().zip(&fw).map(|(p, g)| p * g).sum()).collect();
        Ok(SpectralFunction { grid: self.nu.clone(), values, weight: SpectralWeight::Plancherel })
    }

    /// f(t) = k ∫₀^∞ F(ν) φ_{iν}(t) |c(iν)|⁻² dν on the radial grid.
    pub fn inverse(&self, space: &SpaceModel, big_f: &SpectralFunction) -> Result<RadialFunction> {
        if big_f.grid != self.nu {
            return Err(Error::InvalidArgument("spectral grid does not match the kernel".into()));
        }
        let tail = big_f.tail_ratio(space);
        if tail > TAIL_TOL {
            return Err(Error::Truncation { what: "spectral decay of F".into(), estimate: tail });
        }
        let mut values = vec![cx(0.0); self.t.len()];
        for (i, row) in self.phi.iter().enumerate() {
            let g = big_f.values[i] * self.nu.weights[i] * self.mu[i] * self.k;
            for (v, p) in values.iter_mut().zip(row) {
                *v += g * p;
            }
        }
        Ok(RadialFunction { grid: self.t.clone(), values })
    }

    /// φ_{iν_i}(t_j) table entry.
    pub fn phi(&self, i: usize, j: usize) -> C {
        self.phi[i][j]
    }
}

/// Inverse spherical transform evaluated at arbitrary radii.
pub fn spherical_inverse_at(space: &SpaceModel, big_f: &SpectralFunction, ts: &[f64]) -> Result<Vec<C>> {
    let mut order: Vec<usize> = (0..ts.len()).collect();
    order.sort_by(|&a, &b| ts[a].abs().total_cmp(&ts[b].abs()));
    let sorted: Vec<f64> = order.iter().map(|&i| ts[i].abs()).collect();
    let rows: Result<Vec<Vec<C>>> = big_f
        .grid
        .nodes
        .par_iter()
        .map(|&v| Phi::new(space, C::new(0.0, v)).eval_sorted(&sorted))
        .collect();
    let rows = rows?;
    let mut acc = vec![cx(0.0); ts.len()];
    for (i, row) in rows.iter().enumerate() {
        let nu = big_f.grid.nodes[i];
        let g = big_f.values[i] * big_f.grid.weights[i] * plancherel_density(space, nu) * space.k_space;
        for (a, p) in acc.iter_mut().zip(row) {
            *a += g * p.re;
        }
    }
    let mut out = vec![cx(0.0); ts.len()];
    for (k, &i) in order.iter().enumerate() {
        out[i] = acc[k];
    }
    Ok(out)
}

pub fn spherical_transform(space: &SpaceModel, f: &RadialFunction, nu: &Panels) -> Result<SpectralFunction> {
    SphericalKernel::new(space, &f.grid, nu)?.forward(space, f)
}

pub fn spherical_inverse(space: &SpaceModel, big_f: &SpectralFunction, t: &Panels) -> Result<RadialFunction> {
    SphericalKernel::new(space, t, &big_f.grid)?.inverse(space, big_f)
}

/// Result of [`calibrate_constants`].
#[derive(Debug, Clone, PartialEq)]
pub struct Calibration {
    pub k_space: f64,
    /// L∞ relative round-trip error on the reference bump.
    pub residual: f64,
}

const CALIBRATION_THRESHOLD: f64 = 1e-9;

/// Fix the inversion constant from the Plancherel identity of a reference
/// bump and store it in the model.
pub fn calibrate_constants(space: &mut SpaceModel) -> Result<Calibration> {
    let spec = GridSpec { t_max: 6.0, t_panel: 0.25, nu_max: 40.0, nu_panel: 0.5, order: 14 };
    let mut probe = space.clone();
    probe.k_space = 1.0;
    let kern = SphericalKernel::from_spec(&probe, &spec)?;
    let f = RadialFunction::sample_real(&kern.t, gaussian_bump(1.2, 0.35));
    let fh = kern.forward(&probe, &f)?;
    let k = f.norm_sq(&probe) / fh.norm_sq(&probe);
    probe.k_space = k;
    let kern = SphericalKernel { k, ..kern };
    let back = kern.inverse(&probe, &fh)?;
    let residual = back.rel_linf_error(&f);
    if residual > CALIBRATION_THRESHOLD || !(k > 0.0) {
        return Err(Error::Calibration(residual));
    }
    space.k_space = k;
    space.calibrated = true;
    Ok(Calibration { k_space: k, residual })
}

/// e^{−t(ν²+ρ²)}.
pub fn heat_multiplier(space: &SpaceModel, t: f64, nu: f64) -> f64 {
    (-t * (nu * nu + space.rho() * space.rho())).exp()
}

/// Absolute floor of the heat-kernel quadrature; smaller values are zero
/// for every consumer.
pub const HEAT_ABS_TOL: f64 = 1e-160;

/// Heat kernel h_t at the complex radial coordinate z. Far from the
/// origin the ν-contour is shifted by Re z / 2t through the saddle of the
/// Harish-Chandra form to avoid cancellation.
pub fn heat_kernel_at(space: &SpaceModel, t: f64, z: C) -> Result<C> {
    if t <= 0.0 {
        return Err(Error::InvalidArgument(format!("heat time must be positive, got {t}")));
    }
    let z = if z.re < 0.0 { -z } else { z };
    let rho2 = space.rho() * space.rho();
    let vmax = (80.0 / t).sqrt() + 2.0;
    let k = space.k_space;
    if z.re < 0.5 || z.cosh().norm_sqr() < 2.0 {
        let (v, _) = adaptive(
            |nu| {
                let phi = Phi::new(space, C::new(0.0, nu)).eval(z).unwrap_or(C::new(f64::NAN, 0.0));
                phi * (-t * (nu * nu + rho2)).exp() * plancherel_density(space, nu)
            },
            0.0,
            vmax,
            HEAT_ABS_TOL,
            1e-13,
        )?;
        if !v.is_finite() {
            return Err(Error::Quadrature("heat kernel integrand failed".into()));
        }
        return Ok(v * k);
    }
    let y = z.re / (2.0 * t);
    let (v, _) = adaptive(
        |nu| {
            let w = C::new(nu, y);
            let lambda = C::i() * w;
            let big = harish_chandra_phi(space, lambda, z).unwrap_or(C::new(f64::NAN, 0.0));
            let psi = crate::cfunction::psi_multiplier(space, w).unwrap_or(C::new(0.0, 0.0));
            (-t * (w * w + rho2)).exp() * big * psi
        },
        -vmax,
        vmax,
        HEAT_ABS_TOL,
        1e-13,
    )?;
    if !v.is_finite() {
        return Err(Error::Quadrature("heat kernel integrand failed".into()));
    }
    Ok(v * k)
}

/// h_t(r) for real r.
pub fn heat_kernel(space: &SpaceModel, t: f64, r: f64) -> Result<f64> {
    Ok(heat_kernel_at(space, t, cx(r))?.re)
}

pub fn heat_kernel_function(space: &SpaceModel, t: f64, grid: &Panels) -> Result<RadialFunction> {
    let values: Result<Vec<C>> = grid.nodes.par_iter().map(|&r| heat_kernel(space, t, r).map(cx)).collect();
    Ok(RadialFunction { grid: grid.clone(), values: values? })
}

/// Spectral side of H_t: multiplication by e^{−t(ν²+ρ²)}.
pub fn heat_transform_spectral(space: &SpaceModel, big_f: &SpectralFunction, t: f64) -> Result<SpectralFunction> {
    if t <= 0.0 {
        return Err(Error::InvalidArgument(format!("heat time must be positive, got {t}")));
    }
    Ok(big_f.multiply(|nu| cx(heat_multiplier(space, t, nu))))
}

/// H_t f = f ∗ h_t through the spectral multiplier.
pub fn heat_transform(space: &SpaceModel, kern: &SphericalKernel, f: &RadialFunction, t: f64) -> Result<RadialFunction> {
    let fh = kern.forward(space, f)?;
    kern.inverse(space, &heat_transform_spectral(space, &fh, t)?)
}

/// ‖F‖²_t = k ∫ |F|² e^{2t(ν²+ρ²)} |c|⁻² dν.
pub fn image_norm_t(space: &SpaceModel, big_f: &SpectralFunction, t: f64) -> f64 {
    big_f.clone().with_weight(SpectralWeight::Heat(t)).norm_sq(space)
}

/// A function on the disk sampled on (t_j, θ_k = 2πk/M).
#[derive(Debug, Clone, PartialEq)]
pub struct DiskFunction {
    pub t: Panels,
    pub n_theta: usize,
    /// values[j][k] = f(t_j, θ_k).
    pub values: Vec<Vec<C>>,
}

impl DiskFunction {
    pub fn sample<F: Fn(f64, f64) -> C>(t: &Panels, n_theta: usize, f: F) -> Self {
        let values = t
            .nodes
            .iter()
            .map(|&r| (0..n_theta).map(|k| f(r, 2.0 * PI * k as f64 / n_theta as f64)).collect())
            .collect();
        DiskFunction { t: t.clone(), n_theta, values }
    }

    /// Mode f_n(t_j) = (1/M) Σ_k f(t_j, θ_k) e^{−inθ_k}.
    pub fn mode(&self, n: i32) -> Vec<C> {
        let m = self.n_theta as f64;
        self.values
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .map(|(k, v)| v * C::from_polar(1.0, -(n as f64) * 2.0 * PI * k as f64 / m))
                    .sum::<C>()
                    / m
            })
            .collect()
    }

    pub fn from_modes(t: &Panels, n_theta: usize, n_max: i32, modes: &[Vec<C>]) -> Self {
        assert_eq!(modes.len(), (2 * n_max + 1) as usize);
        let values = (0..t.len())
            .map(|j| {
                (0..n_theta)
                    .map(|k| {
                        let th = 2.0 * PI * k as f64 / n_theta as f64;
                        (-n_max..=n_max)
                            .map(|n| modes[(n + n_max) as usize][j] * C::from_polar(1.0, n as f64 * th))
                            .sum()
                    })
                    .collect()
            })
            .collect();
        DiskFunction { t: t.clone(), n_theta, values }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn rel_linf_error(&self, reference: &Self) -> f64 {
        let num = self
            .values
            .iter()
            .flatten()
            .zip(reference.values.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        num / reference.max_abs()
    }

    /// ‖f‖² = ∫∫ |f|² δ dt dθ/2π.
    pub fn norm_sq(&self, space: &SpaceModel) -> f64 {
        let m = self.n_theta as f64;
        self.t
            .nodes
            .iter()
            .zip(&self.t.weights)
            .zip(&self.values)
            .map(|((&r, &w), row)| w * space.density(r) * row.iter().map(|v| v.norm_sqr()).sum::<f64>() / m)
            .sum()
    }
}

fn disk_only(space: &SpaceModel) -> Result<()> {
    if space.m_alpha != 1 || space.m_2alpha != 0 {
        return Err(Error::Domain("Helgason transform with circle modes is implemented on H²".into()));
    }
    Ok(())
}

/// Circle-mode kernels κ_n(ν, t) = (1/2π)∫ cos(nφ) (cosh t − sinh t cos φ)^{−(ρ−iν)} dφ
/// on a (ν, t) grid, for 0 ≤ n ≤ n_max.
#[derive(Debug, Clone)]
pub struct HelgasonKernel {
    pub t: Panels,
    pub nu: Panels,
    pub n_max: i32,
    /// kappa[n][i][j] = κ_n(ν_i, t_j).
    kappa: Vec<Vec<Vec<C>>>,
    density: Vec<f64>,
    mu: Vec<f64>,
    k: f64,
}

impl HelgasonKernel {
    pub fn new(space: &SpaceModel, t: &Panels, nu: &Panels, n_max: i32) -> Result<Self> {
        disk_only(space)?;
        let rho = space.rho();
        let nu_max = nu.nodes.iter().cloned().fold(0.0, f64::max);
        // per radius: trapezoid points so the integrand is resolved at ν_max
        let cols: Result<Vec<Vec<Vec<C>>>> = t
            .nodes
            .par_iter()
            .map(|&r| {
                let (ch, sh) = (r.cosh(), r.sinh());
                let strip = ((ch / sh).acosh()).min(5.0);
                let want = (45.0 + n_max as f64 + 2.0 * nu_max * r) / strip;
                let m = (want.max(32.0) as usize).next_power_of_two();
                // the integrand is even in φ; use points on [0, π]
                let angles: Vec<f64> = (0..=m / 2).map(|k| 2.0 * PI * k as f64 / m as f64).collect();
                let wts: Vec<f64> = (0..=m / 2)
                    .map(|k| if k == 0 || k == m / 2 { 1.0 } else { 2.0 } / m as f64)
                    .collect();
                let logs: Vec<f64> = angles.iter().map(|&a| (ch - sh * a.cos()).ln()).collect();
                let amp: Vec<f64> = logs.iter().zip(&wts).map(|(l, w)| w * (-rho * l).exp()).collect();
                let cosn: Vec<Vec<f64>> =
                    (0..=n_max).map(|n| angles.iter().map(|&a| (n as f64 * a).cos()).collect()).collect();
                let mut out = vec![vec![cx(0.0); nu.len()]; (n_max + 1) as usize];
                for (i, &v) in nu.nodes.iter().enumerate() {
                    let g: Vec<C> = logs.iter().zip(&amp).map(|(l, a)| C::from_polar(*a, v * l)).collect();
                    for n in 0..=n_max as usize {
                        out[n][i] = g.iter().zip(&cosn[n]).map(|(x, c)| x * c).sum();
                    }
                }
                Ok(out)
            })
            .collect();
        let cols = cols?;
        let mut kappa = vec![vec![vec![cx(0.0); t.len()]; nu.len()]; (n_max + 1) as usize];
        for (j, col) in cols.into_iter().enumerate() {
            for n in 0..=n_max as usize {
                for i in 0..nu.len() {
                    kappa[n][i][j] = col[n][i];
                }
            }
        }
        Ok(HelgasonKernel {
            t: t.clone(),
            nu: nu.clone(),
            n_max,
            kappa,
            density: t.nodes.iter().map(|&x| space.density(x)).collect(),
            mu: nu.nodes.iter().map(|&v| plancherel_density(space, v)).collect(),
            k: space.k_space,
        })
    }

    /// κ_n(ν_i, t_j); κ_n(−ν, t) is its conjugate.
    pub fn kappa(&self, n: i32, i: usize, j: usize) -> C {
        self.kappa[n.unsigned_abs() as usize][i][j]
    }

    /// Mode-wise transform f̂_n(ν), n = −n_max..=n_max.
    pub fn forward(&self, f: &DiskFunction) -> Result<Vec<SpectralFunction>> {
        if f.t != self.t {
            return Err(Error::InvalidArgument("radial grid does not match the kernel".into()));
        }
        let mut out = Vec::with_capacity((2 * self.n_max + 1) as usize);
        for n in -self.n_max..=self.n_max {
            let fw: Vec<C> = f
                .mode(n)
                .iter()
                .enumerate()
                .map(|(j, v)| v * self.t.weights[j] * self.density[j])
                .collect();
            let tab = &self.kappa[n.unsigned_abs() as usize];
            let values = tab.iter().map(|row| row.iter().zip(&fw).map(|(k, g)| k * g).sum()).collect();
            out.push(SpectralFunction { grid: self.nu.clone(), values, weight: SpectralWeight::Plancherel });
        }
        Ok(out)
    }

    /// f_n(t) = k ∫ f̂_n(ν) κ_n(−ν, t) |c|⁻² dν, reassembled on n_theta angles.
    pub fn inverse(&self, modes: &[SpectralFunction], n_theta: usize) -> Result<DiskFunction> {
        if modes.len() != (2 * self.n_max + 1) as usize {
            return Err(Error::InvalidArgument("wrong number of circle modes".into()));
        }
        let mut radial = Vec::with_capacity(modes.len());
        for (idx, n) in (-self.n_max..=self.n_max).enumerate() {
            let tab = &self.kappa[n.unsigned_abs() as usize];
            let mut vals = vec![cx(0.0); self.t.len()];
            for (i, row) in tab.iter().enumerate() {
                let g = modes[idx].values[i] * self.nu.weights[i] * self.mu[i] * self.k;
                for (v, kap) in vals.iter_mut().zip(row) {
                    *v += g * kap.conj();
                }
            }
            radial.push(vals);
        }
        Ok(DiskFunction::from_modes(&self.t, n_theta, self.n_max, &radial))
    }

    /// Both sides of ∫_B e_{−λ,b} F(−λ,b) db = ∫_B e_{λ,b} F(λ,b) db at the
    /// grid point (ν_i, t_j) and angle θ, for F = f̂ given mode-wise at
    /// ±ν through `plus` and `minus`.
    pub fn weyl_invariance_sides(&self, plus: &[C], minus: &[C], i: usize, j: usize, theta: f64) -> (C, C) {
        let mut lhs = cx(0.0);
        let mut rhs = cx(0.0);
        for (idx, n) in (-self.n_max..=self.n_max).enumerate() {
            let e = C::from_polar(1.0, n as f64 * theta);
            let kap = self.kappa(n, i, j);
            rhs += e * plus[idx] * kap.conj();
            lhs += e * minus[idx] * kap;
        }
        (lhs, rhs)
    }

    /// f̂_n(−ν_i) for every mode, by quadrature against κ_n(−ν, t).
    pub fn forward_at_minus(&self, f: &DiskFunction, i: usize) -> Vec<C> {
        (-self.n_max..=self.n_max)
            .map(|n| {
                f.mode(n)
                    .iter()
                    .enumerate()
                    .map(|(j, v)| v * self.t.weights[j] * self.density[j] * self.kappa(n, i, j).conj())
                    .sum()
            })
            .collect()
    }
}

pub fn helgason_transform(space: &SpaceModel, f: &DiskFunction, nu: &Panels, n_max: i32) -> Result<Vec<SpectralFunction>> {
    HelgasonKernel::new(space, &f.t, nu, n_max)?.forward(f)
}

pub fn helgason_inverse(
    space: &SpaceModel,
    modes: &[SpectralFunction],
    t: &Panels,
    n_theta: usize,
) -> Result<DiskFunction> {
    let n_max = (modes.len() as i32 - 1) / 2;
    HelgasonKernel::new(space, t, &modes[0].grid, n_max)?.inverse(modes, n_theta)
}

/// Scalar by which the standard intertwining operator acts on the circle
/// mode e^{inθ}: 𝓟_λ(e_n)(x*) / 𝓟_{−λ}(e_n)(x*). Returns the scalar and the
/// discrepancy between two evaluation points.
pub fn intertwining_scalar(space: &SpaceModel, lambda: C, n: i32) -> Result<(C, f64)> {
    disk_only(space)?;
    let mode = |th: f64| C::from_polar(1.0, n as f64 * th);
    let points = [crate::spherical::disk_point(0.9, 0.3), crate::spherical::disk_point(1.7, 2.1)];
    let mut ratios = Vec::new();
    for x in points {
        let num = poisson_transform(space, lambda, mode, x, 1e-15)?;
        let den = poisson_transform(space, -lambda, mode, x, 1e-15)?;
        if den.norm() < 1e-10 {
            return Err(Error::Singular { arg: lambda });
        }
        ratios.push(num / den);
    }
    Ok((ratios[0], (ratios[0] - ratios[1]).norm()))
}

/// c(−iν) on a spectral grid, convenient for the Λ and Fock machinery.
pub fn c_minus_table(space: &SpaceModel, nu: &Panels) -> Vec<C> {
    nu.nodes.iter().map(|&v| c_minus(space, v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsystem::{build_space, SpaceKind};
    use proptest::prelude::*;

    fn small() -> GridSpec {
        GridSpec { t_max: 5.0, t_panel: 0.25, nu_max: 30.0, nu_panel: 0.5, order: 12 }
    }

    #[test]
    fn calibration_is_idempotent_and_near_inverse_two_pi() {
        for kind in [SpaceKind::Hyperbolic(2), SpaceKind::ComplexA1] {
            let mut s = build_space(kind).unwrap();
            let a = calibrate_constants(&mut s).unwrap();
            let b = calibrate_constants(&mut s).unwrap();
            assert!((a.k_space - b.k_space).abs() < 1e-14);
            assert!(a.k_space > 0.0);
            assert!((a.k_space * 2.0 * PI - 1.0).abs() < 1e-10, "{kind} k={}", a.k_space);
            assert!(s.calibrated);
        }
    }

    #[test]
    fn round_trip_and_plancherel_h2() {
        let s = build_space(SpaceKind::Hyperbolic(2)).unwrap();
        let kern = SphericalKernel::from_spec(&s, &small()).unwrap();
        let f = RadialFunction::sample_real(&kern.t, gaussian_bump(1.0, 0.3));
        let fh = kern.forward(&s, &f).unwrap();
        let back = kern.inverse(&s, &fh).unwrap();
        assert!(back.rel_linf_error(&f) < 1e-9);
        let n1 = f.norm_sq(&s);
        let n2 = fh.norm_sq(&s);
        assert!((n1 - n2).abs() < 1e-9 * n1);
        assert_eq!(kern.forward(&s, &RadialFunction::zero(&kern.t)).unwrap().norm_sq(&s), 0.0);
    }

    #[test]
    fn heat_kernel_transform_is_multiplier() {
        let s = build_space(SpaceKind::ComplexA1).unwrap();
        let spec = GridSpec { t_max: 14.0, ..small() };
        let kern = SphericalKernel::from_spec(&s, &spec).unwrap();
        let h = heat_kernel_function(&s, 0.5, &kern.t).unwrap();
        let hh = kern.forward(&s, &h).unwrap();
        for (i, &nu) in kern.nu.nodes.iter().enumerate().step_by(37) {
            let want = heat_multiplier(&s, 0.5, nu);
            assert!((hh.values[i] - want).norm() < 1e-9, "nu={nu}");
        }
    }

    #[test]
    fn h3_heat_kernel_closed_form() {
        let s = build_space(SpaceKind::ComplexA1).unwrap();
        for t in [0.1, 1.0] {
            for r in [0.2, 0.5, 2.0, 5.0] {
                let got = heat_kernel(&s, t, r).unwrap();
                // Riemannian closed form times π: dx = dV/π with the density used here
                let want = PI * (-t).exp() * (4.0 * PI * t).powf(-1.5) * (r / r.sinh()) * (-r * r / (4.0 * t)).exp();
                assert!((got - want).abs() < 1e-9 * want, "t={t} r={r} {got} {want}");
            }
        }
    }

    #[test]
    fn helgason_radial_reduction_and_rotation() {
        let s = build_space(SpaceKind::Hyperbolic(2)).unwrap();
        let spec = GridSpec { t_max: 3.5, t_panel: 0.25, nu_max: 20.0, nu_panel: 0.5, order: 10 };
        let (t, nu) = (spec.radial(), spec.spectral());
        let hk = HelgasonKernel::new(&s, &t, &nu, 3).unwrap();
        let g = gaussian_bump(1.0, 0.3);
        let radial = DiskFunction::sample(&t, 16, |r, _| cx(g(r)));
        let modes = hk.forward(&radial).unwrap();
        let sk = SphericalKernel::new(&s, &t, &nu).unwrap();
        let sph = sk.forward(&s, &RadialFunction::sample_real(&t, g)).unwrap();
        for (i, v) in modes[3].values.iter().enumerate() {
            assert!((v - sph.values[i]).norm() < 1e-10 * sph.values[0].norm());
            for n in [0usize, 1, 2, 4, 5, 6] {
                assert!(modes[n].values[i].norm() < 1e-12 * sph.values[0].norm());
            }
        }
        let beta = 0.7;
        let f = |r: f64, th: f64| cx(g(r)) * (C::from_polar(1.0, th) + 0.3 * C::from_polar(1.0, -2.0 * th));
        let a = hk.forward(&DiskFunction::sample(&t, 16, f)).unwrap();
        let b = hk.forward(&DiskFunction::sample(&t, 16, |r, th| f(r, th - beta))).unwrap();
        for (idx, n) in (-3..=3).enumerate() {
            for i in 0..nu.len() {
                let want = a[idx].values[i] * C::from_polar(1.0, -(n as f64) * beta);
                assert!((b[idx].values[i] - want).norm() < 1e-10 * sph.values[0].norm());
            }
        }
    }

    #[test]
    fn intertwining_scalars_are_unimodular() {
        let s = build_space(SpaceKind::Hyperbolic(2)).unwrap();
        for nu in [0.5, 2.0] {
            let (t0, d0) = intertwining_scalar(&s, C::new(0.0, nu), 0).unwrap();
            assert!((t0 - 1.0).norm() < 1e-10 && d0 < 1e-10);
            for n in 1..=3 {
                let (tn, d) = intertwining_scalar(&s, C::new(0.0, nu), n).unwrap();
                assert!((tn.norm() - 1.0).abs() < 1e-8 && d < 1e-8, "n={n} {tn} {d}");
            }
        }
    }

    #[test]
    fn heat_kernel_is_positive_and_decreasing() {
        for kind in [SpaceKind::Hyperbolic(2), SpaceKind::Jacobi(3, 2)] {
            let s = build_space(kind).unwrap();
            let mut prev = f64::INFINITY;
            for r in [0.0, 0.3, 1.0, 2.5, 5.0] {
                let h = heat_kernel(&s, 0.4, r).unwrap();
                assert!(h > 0.0 && h < prev, "{kind} r={r} {h}");
                prev = h;
            }
        }
    }

    #[test]
    fn heat_transform_recovers_f_as_t_shrinks() {
        let s = build_space(SpaceKind::Hyperbolic(2)).unwrap();
        let kern = SphericalKernel::from_spec(&s, &small()).unwrap();
        let f = RadialFunction::sample_real(&kern.t, gaussian_bump(1.0, 0.4));
        let errs: Vec<f64> = [0.1, 0.01, 0.001]
            .iter()
            .map(|&t| heat_transform(&s, &kern, &f, t).unwrap().rel_linf_error(&f))
            .collect();
        assert!(errs.windows(2).all(|w| w[1] < 0.2 * w[0]), "{errs:?}");
        assert!(errs[2] < 1e-2);
    }

    #[test]
    fn image_norm_matches_input_norm() {
        let s = build_space(SpaceKind::ComplexA1).unwrap();
        let kern = SphericalKernel::from_spec(&s, &small()).unwrap();
        let f = RadialFunction::sample_real(&kern.t, gaussian_bump(0.8, 0.35));
        let fh = kern.forward(&s, &f).unwrap();
        let want = f.norm_sq(&s);
        for t in [0.05, 0.3] {
            let got = image_norm_t(&s, &heat_transform_spectral(&s, &fh, t).unwrap(), t);
            assert!((got - want).abs() < 1e-9 * want, "t={t}");
        }
        assert!(heat_transform_spectral(&s, &fh, 0.0).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn forward_is_linear(a in -2.0..2.0f64, b in -2.0..2.0f64, c0 in 0.3..2.0f64) {
            let s = build_space(SpaceKind::Hyperbolic(2)).unwrap();
            let kern = SphericalKernel::from_spec(&s, &small()).unwrap();
            let f = RadialFunction::sample_real(&kern.t, gaussian_bump(c0, 0.3));
            let g = RadialFunction::sample_real(&kern.t, gaussian_bump(1.0, 0.5));
            let lhs = kern.forward(&s, &RadialFunction::linear_combination(cx(a), &f, cx(b), &g)).unwrap();
            let (fh, gh) = (kern.forward(&s, &f).unwrap(), kern.forward(&s, &g).unwrap());
            for i in 0..lhs.values.len() {
                let want = fh.values[i] * a + gh.values[i] * b;
                prop_assert!((lhs.values[i] - want).norm() < 1e-12 * (1.0 + want.norm()));
            }
        }

        #[test]
        fn heat_semigroup_on_spectral_side(t1 in 0.01..1.0f64, t2 in 0.01..1.0f64) {
            let s = build_space(SpaceKind::Jacobi(3, 2)).unwrap();
            let nu = small().spectral();
            let f = SpectralFunction::sample(&nu, |x| cx((-0.1 * x * x).exp()));
            let a = heat_transform_spectral(&s, &heat_transform_spectral(&s, &f, t1).unwrap(), t2).unwrap();
            let b = heat_transform_spectral(&s, &f, t1 + t2).unwrap();
            for (x, y) in a.values.iter().zip(&b.values) {
                prop_assert!((x - y).norm() <= 1e-12 * y.norm() + 1e-290);
            }
        }
    }
}
