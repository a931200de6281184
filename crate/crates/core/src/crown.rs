//! Crown geometry and the Hilbert space 𝓗_X: complexified Iwasawa
//! decomposition with branch tracking, the convexity check, the ω-weighted
//! norm, holomorphic extension and the reproducing kernels K and K_t.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{FRAC_PI_4, PI};

use crate::cfunction::plancherel_density;
use crate::error::{Error, Result};
use crate::quadrature::{adaptive, gauss_legendre, periodic_mean, Panels};
use crate::rootsystem::{in_conv_weyl_orbit_with_slack, SpaceKind, SpaceModel};
use crate::spherical::{e_kernel_crown, Phi};
use crate::transform::{heat_multiplier, SpectralFunction, SphericalKernel, RadialFunction};

type C = Complex64;
pub type M2 = [[C; 2]; 2];

fn cx(re: f64) -> C {
    C::new(re, 0.0)
}

/// Slack used by [`convexity_check`].
pub const CONVEXITY_SLACK: f64 = 1e-9;

pub fn mat_mul(a: &M2, b: &M2) -> M2 {
    let mut r = [[cx(0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    r
}

pub fn transpose(a: &M2) -> M2 {
    [[a[0][0], a[1][0]], [a[0][1], a[1][1]]]
}

pub fn conj(a: &M2) -> M2 {
    [[a[0][0].conj(), a[0][1].conj()], [a[1][0].conj(), a[1][1].conj()]]
}

/// Inverse of a unimodular matrix.
pub fn inv_unimodular(a: &M2) -> M2 {
    [[a[1][1], -a[0][1]], [-a[1][0], a[0][0]]]
}

pub fn det(a: &M2) -> C {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

fn mat_dist(a: &M2, b: &M2) -> f64 {
    let mut m = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            m = m.max((a[i][j] - b[i][j]).norm());
        }
    }
    m
}

/// exp(zH) with H = diag(½, −½).
pub fn exp_h(z: C) -> M2 {
    [[(0.5 * z).exp(), cx(0.0)], [cx(0.0), (-0.5 * z).exp()]]
}

/// The two 2×2 models of the complexified Iwasawa decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupModel {
    /// SL(2,ℝ) ⊂ SL(2,ℂ), K_ℂ = SO(2,ℂ).
    Sl2R,
    /// SL(2,ℂ) embedded as g ↦ (g, ḡ) in SL(2,ℂ)×SL(2,ℂ).
    Sl2C,
}

pub fn group_model(space: &SpaceModel) -> Result<GroupModel> {
    match space.kind {
        SpaceKind::Hyperbolic(2) => Ok(GroupModel::Sl2R),
        SpaceKind::ComplexA1 => Ok(GroupModel::Sl2C),
        _ => Err(Error::Domain(format!("no 2×2 group model for {}", space.kind))),
    }
}

/// x = k a n and y = (kᵀ)⁻¹ a n' in the complexification; for the SL(2,ℝ)
/// model y = x.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexIwasawaResult {
    /// log of the A_ℂ-part in the H coordinate, continued along the path.
    pub a_exponent: C,
    pub k_part: M2,
    pub n_part: M2,
    pub n_part_conj: M2,
}

impl ComplexIwasawaResult {
    pub fn a_part(&self) -> M2 {
        exp_h(self.a_exponent)
    }

    /// max entry error of k·a·n − x and (kᵀ)⁻¹·a·n' − y.
    pub fn reconstruction_error(&self, x: &M2, y: &M2) -> f64 {
        let a = self.a_part();
        let lhs = mat_mul(&mat_mul(&self.k_part, &a), &self.n_part);
        let kt = inv_unimodular(&transpose(&self.k_part));
        let rhs = mat_mul(&mat_mul(&kt, &a), &self.n_part_conj);
        mat_dist(&lhs, x).max(mat_dist(&rhs, y))
    }
}

fn factor(x: &M2, y: &M2, log_m11: C) -> ComplexIwasawaResult {
    // xᵀy = nᵀ a² n'
    let m = mat_mul(&transpose(x), y);
    let m11 = m[0][0];
    let n = [[cx(1.0), m[1][0] / m11], [cx(0.0), cx(1.0)]];
    let np = [[cx(1.0), m[0][1] / m11], [cx(0.0), cx(1.0)]];
    let a_inv = exp_h(-log_m11);
    let k = mat_mul(&mat_mul(x, &inv_unimodular(&n)), &a_inv);
    ComplexIwasawaResult { a_exponent: log_m11, k_part: k, n_part: n, n_part_conj: np }
}

fn m11(x: &M2, y: &M2) -> C {
    x[0][0] * y[0][0] + x[1][0] * y[1][0]
}

/// Decompose the end point of a path τ ↦ (x(τ), y(τ)), τ ∈ [0, 1], whose
/// start lies in the real group, continuing log a along the path.
pub fn iwasawa_path<F: Fn(f64) -> (M2, M2)>(path: F) -> Result<ComplexIwasawaResult> {
    let (x0, y0) = path(0.0);
    let v0 = m11(&x0, &y0);
    if v0.re <= 0.0 || v0.im.abs() > 1e-12 * v0.re {
        return Err(Error::Path { at: 0.0 });
    }
    let scale = v0.norm();
    let mut log = cx(v0.re.ln());
    let mut tau = 0.0f64;
    let mut step = 1.0f64 / 16.0;
    while tau < 1.0 {
        let next = (tau + step).min(1.0);
        let (x, y) = path(next);
        let v = m11(&x, &y);
        if v.norm() < 1e-14 * scale {
            return Err(Error::Path { at: next });
        }
        let mut d = v.arg() - log.im;
        d -= (d / (2.0 * PI)).round() * 2.0 * PI;
        if d.abs() >= FRAC_PI_4 {
            step *= 0.5;
            if step < 1e-12 {
                return Err(Error::Path { at: next });
            }
            continue;
        }
        log = C::new(v.norm().ln(), log.im + d);
        tau = next;
        step = (2.0 * step).min(1.0 / 16.0);
    }
    let (x, y) = path(1.0);
    Ok(factor(&x, &y, log))
}

/// Complexified Iwasawa decomposition of exp(iY)g, Y = y·H, along
/// τ ↦ exp(iτY)g. For the SL(2,ℂ) model the second factor is exp(iY)ḡ.
pub fn iwasawa_complex(model: GroupModel, g: &M2, y: f64) -> Result<ComplexIwasawaResult> {
    if (det(g) - 1.0).norm() > 1e-10 {
        return Err(Error::InvalidArgument("matrix is not unimodular".into()));
    }
    let gbar = match model {
        GroupModel::Sl2R => {
            if g.iter().flatten().any(|v| v.im.abs() > 1e-14 * (1.0 + v.norm())) {
                return Err(Error::InvalidArgument("SL(2,R) element has complex entries".into()));
            }
            *g
        }
        GroupModel::Sl2C => conj(g),
    };
    iwasawa_path(|tau| {
        let e = exp_h(C::new(0.0, tau * y));
        (mat_mul(&e, g), mat_mul(&e, &gbar))
    })
}

/// Im of the A_ℂ-exponent of exp(iY)g and whether it lies in conv(W·Y).
pub fn convexity_check(space: &SpaceModel, g: &M2, y: f64) -> Result<(f64, bool)> {
    let model = group_model(space)?;
    if y.abs() >= space.omega_halfwidth() {
        return Err(Error::Domain(format!("Y = {y} is outside Ω")));
    }
    let z = iwasawa_complex(model, g, y)?.a_exponent.im;
    let ok = in_conv_weyl_orbit_with_slack(&space.roots, &space.weyl, &[z], &[y], CONVEXITY_SLACK);
    Ok((z, ok))
}

fn rotation(theta: f64) -> M2 {
    let (s, c) = theta.sin_cos();
    [[cx(c), cx(-s)], [cx(s), cx(c)]]
}

/// Random group element k·a·n; `near_a` draws k close to the identity.
pub fn random_group_element(model: GroupModel, rng: &mut ChaCha8Rng, near_a: bool) -> M2 {
    let r: f64 = rng.gen_range(-4.0..4.0);
    let a = exp_h(cx(r));
    match model {
        GroupModel::Sl2R => {
            let theta = if near_a { rng.gen_range(-1e-3..1e-3) } else { rng.gen_range(0.0..2.0 * PI) };
            let n = [[cx(1.0), cx(rng.gen_range(-4.0..4.0))], [cx(0.0), cx(1.0)]];
            mat_mul(&mat_mul(&rotation(theta), &a), &n)
        }
        GroupModel::Sl2C => {
            let mut q = [0.0f64; 4];
            for v in q.iter_mut() {
                *v = rng.gen_range(-1.0..1.0);
            }
            if near_a {
                q[0] = 1.0;
                for v in q.iter_mut().skip(1) {
                    *v *= 1e-3;
                }
            }
            let norm = q.iter().map(|v| v * v).sum::<f64>().sqrt();
            let (p, qv) = (C::new(q[0], q[1]) / norm, C::new(q[2], q[3]) / norm);
            let k = [[p, -qv.conj()], [qv, p.conj()]];
            let n = [[cx(1.0), C::new(rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0))], [cx(0.0), cx(1.0)]];
            mat_mul(&mat_mul(&k, &a), &n)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvexityReport {
    pub samples: usize,
    pub violations: usize,
    /// max(0, |Z| − |Y|) over the sample.
    pub max_violation: f64,
    /// sup |Z|/|Y|.
    pub sup_ratio: f64,
    /// max reconstruction error of the factors.
    pub max_reconstruction: f64,
}

/// Convexity check on `n` random (g, Y); with `enriched` a quarter of the
/// sample has k near the identity, where |Z| approaches |Y|.
pub fn convexity_sample(space: &SpaceModel, n: usize, seed: u64, enriched: bool) -> Result<ConvexityReport> {
    let model = group_model(space)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let half = space.omega_halfwidth();
    let mut rep = ConvexityReport { samples: n, violations: 0, max_violation: 0.0, sup_ratio: 0.0, max_reconstruction: 0.0 };
    for i in 0..n {
        let g = random_group_element(model, &mut rng, enriched && i % 4 == 0);
        let y = rng.gen_range(-half..half) * 0.999;
        let res = iwasawa_complex(model, &g, y)?;
        let e = exp_h(C::new(0.0, y));
        let gbar = if model == GroupModel::Sl2C { conj(&g) } else { g };
        rep.max_reconstruction = rep
            .max_reconstruction
            .max(res.reconstruction_error(&mat_mul(&e, &g), &mat_mul(&e, &gbar)));
        let z = res.a_exponent.im;
        if !in_conv_weyl_orbit_with_slack(&space.roots, &space.weyl, &[z], &[y], CONVEXITY_SLACK) {
            rep.violations += 1;
        }
        rep.max_violation = rep.max_violation.max(z.abs() - y.abs()).max(0.0);
        if y.abs() > 1e-6 {
            rep.sup_ratio = rep.sup_ratio.max(z.abs() / y.abs());
        }
    }
    Ok(rep)
}

/// Radial coordinate of σ(w)⁻¹z for z, w on the slice A(Ω)·o.
pub fn sigma_relative(space: &SpaceModel, z: C, w: C) -> Result<C> {
    let r = C::new(z.re - w.re, z.im + w.im);
    if r.im.abs() >= space.omega_halfwidth() {
        return Err(Error::Domain(format!("relative coordinate {r} is outside the crown slice")));
    }
    Ok(r)
}

/// The same coordinate from the matrix model: σ is entrywise conjugation
/// and the A_ℂ-part is read off by the complexified decomposition.
pub fn sigma_relative_matrix(z: C, w: C) -> Result<C> {
    let m = mat_mul(&inv_unimodular(&conj(&exp_h(w))), &exp_h(z));
    let real = mat_mul(&inv_unimodular(&exp_h(cx(w.re))), &exp_h(cx(z.re)));
    // path in the imaginary directions from the real part
    let res = iwasawa_path(|tau| {
        let p = mat_mul(&exp_h(C::new(0.0, tau * (z.im + w.im))), &real);
        (p, p)
    })?;
    let direct = factor(&m, &m, res.a_exponent);
    Ok(direct.a_exponent)
}

fn check_weighted_tail(space: &SpaceModel, f: &SpectralFunction) -> Result<()> {
    let n = f.values.len();
    let w = |i: usize| {
        let nu = f.grid.nodes[i];
        f.values[i].norm_sqr() * space.omega(nu) * plancherel_density(space, nu)
    };
    let peak = (0..n).map(w).fold(0.0, f64::max);
    if peak > 0.0 && w(n - 1) > 1e-12 * peak {
        return Err(Error::Truncation { what: "ω-weighted spectral tail".into(), estimate: w(n - 1) / peak });
    }
    Ok(())
}

/// ‖F‖²_{𝓗_X} = k ∫₀^∞ |F̂(ν)|² ω(iν) |c(iν)|⁻² dν.
pub fn hx_norm(space: &SpaceModel, f_hat: &SpectralFunction) -> Result<f64> {
    check_weighted_tail(space, f_hat)?;
    Ok(f_hat.clone().with_weight(crate::transform::SpectralWeight::Omega).norm_sq(space))
}

/// C(z)² = k ∫ |φ_{iν}(z)|² / ω(iν) |c(iν)|⁻² dν on the panel grid, so
/// that |F(z)| ≤ C(z) ‖F‖_{𝓗_X}.
pub fn point_bound_constant(space: &SpaceModel, grid: &Panels, z: C) -> Result<f64> {
    let mut s = 0.0;
    for (&nu, &w) in grid.nodes.iter().zip(&grid.weights) {
        let p = Phi::new(space, C::new(0.0, nu)).eval(z)?;
        s += w * p.norm_sqr() / space.omega(nu) * plancherel_density(space, nu);
    }
    Ok((space.k_space * s).sqrt())
}

/// F(z) = k ∫ F̂(ν) φ_{iν}(z) |c(iν)|⁻² dν at a point of the crown slice,
/// checked against the Cauchy-Schwarz point bound.
pub fn hx_extension(space: &SpaceModel, f_hat: &SpectralFunction, z: C) -> Result<C> {
    if z.im.abs() >= space.omega_halfwidth() {
        return Err(Error::Domain(format!("{z} is outside the crown slice")));
    }
    let mut acc = cx(0.0);
    for ((&nu, &w), f) in f_hat.grid.nodes.iter().zip(&f_hat.grid.weights).zip(&f_hat.values) {
        let p = Phi::new(space, C::new(0.0, nu)).eval(z)?;
        acc += f * p * (w * plancherel_density(space, nu));
    }
    let value = acc * space.k_space;
    let bound = point_bound_constant(space, &f_hat.grid, z)? * hx_norm(space, f_hat)?.sqrt();
    if value.norm() > bound * (1.0 + 1e-10) {
        return Err(Error::PointBound { value: value.norm(), bound });
    }
    Ok(value)
}

/// K(z, w) = k ∫ φ_{iν}(σ(w)⁻¹z) / ω(iν) |c(iν)|⁻² dν.
pub fn reproducing_kernel_k(space: &SpaceModel, z: C, w: C) -> Result<C> {
    let zeta = sigma_relative(space, z, w)?;
    let decay = 2.0 * space.omega_halfwidth() - zeta.im.abs();
    let upper = 40.0 / decay + 5.0;
    let (v, _) = adaptive(
        |nu| match Phi::new(space, C::new(0.0, nu)).eval(zeta) {
            Ok(p) => p / space.omega(nu) * plancherel_density(space, nu),
            Err(_) => C::new(f64::NAN, 0.0),
        },
        0.0,
        upper,
        1e-300,
        1e-12,
    )?;
    if !v.is_finite() {
        return Err(Error::Quadrature("kernel integrand failed".into()));
    }
    Ok(v * space.k_space)
}

/// K_t(z, w) = h_{2t}(σ(w)⁻¹z).
pub fn reproducing_kernel_kt(space: &SpaceModel, z: C, w: C, t: f64) -> Result<C> {
    let zeta = sigma_relative(space, z, w)?;
    crate::transform::heat_kernel_at(space, 2.0 * t, zeta)
}

/// k ∫ e^{−2t(ν²+ρ²)} ∫_B e_{iν,b}(z) e_{−iν,b}(σ(w)) db |c(iν)|⁻² dν, the
/// plane-wave form of K_t on the slice.
pub fn kt_plane_wave(space: &SpaceModel, z: C, w: C, t: f64) -> Result<C> {
    if space.m_2alpha != 0 {
        return Err(Error::Domain("plane-wave kernel form is implemented for m_2α = 0".into()));
    }
    let half = space.omega_halfwidth();
    if z.im.abs() >= half || w.im.abs() >= half {
        return Err(Error::Domain("point outside the crown slice".into()));
    }
    let wb = w.conj();
    let m1 = space.m1();
    let boundary = |lambda: C| -> Result<C> {
        let g = |th: f64| e_kernel_crown(space, lambda, z, th.cos()) * e_kernel_crown(space, -lambda, wb, th.cos());
        if m1 == 1.0 {
            periodic_mean(g, 1e-14)
        } else {
            let norm = crate::special::beta_real(0.5, 0.5 * m1);
            let (v, _) = adaptive(|th| g(th) * th.sin().powf(m1 - 1.0), 0.0, PI, 1e-300, 1e-13)?;
            Ok(v / norm)
        }
    };
    let upper = (80.0 / (2.0 * t)).sqrt() + 2.0;
    let (v, _) = adaptive(
        |nu| {
            let b = boundary(C::new(0.0, nu)).unwrap_or(C::new(f64::NAN, 0.0));
            b * heat_multiplier(space, 2.0 * t, nu) * plancherel_density(space, nu)
        },
        0.0,
        upper,
        1e-300,
        1e-12,
    )?;
    if !v.is_finite() {
        return Err(Error::Quadrature("plane-wave kernel integrand failed".into()));
    }
    Ok(v * space.k_space)
}

/// Fixed-node evaluator of the heat kernel h_t at complex arguments, used
/// when many evaluations at one time are needed.
#[derive(Debug, Clone)]
pub struct HeatKernelNodes {
    t: f64,
    k: f64,
    nodes: Vec<(f64, Phi)>,
    weights: Vec<f64>,
}

impl HeatKernelNodes {
    pub fn new(space: &SpaceModel, t: f64) -> Self {
        // e^{-tν² + ν·halfwidth} below 1e-17 past the cutoff
        let half = space.omega_halfwidth();
        let upper = (half + (half * half + 160.0 * t).sqrt()) / (2.0 * t) + 1.0;
        let grid = Panels::uniform(0.0, upper, (upper / 0.5).ceil() as usize, 12);
        let nodes = grid.nodes.iter().map(|&nu| (nu, Phi::new(space, C::new(0.0, nu)))).collect();
        let weights = grid
            .nodes
            .iter()
            .zip(&grid.weights)
            .map(|(&nu, &w)| w * heat_multiplier(space, t, nu) * plancherel_density(space, nu))
            .collect();
        HeatKernelNodes { t, k: space.k_space, nodes, weights }
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn eval(&self, z: C) -> Result<C> {
        let mut acc = cx(0.0);
        for ((_, p), &w) in self.nodes.iter().zip(&self.weights) {
            acc += p.eval(z)? * w;
        }
        Ok(acc * self.k)
    }
}

/// Relative level below which K-averaged heat profiles are set to zero.
pub const PROFILE_FLUSH: f64 = 1e-13;

struct KAverage {
    nodes: Vec<(f64, f64)>,
    total: f64,
    half: f64,
}

impl KAverage {
    fn new(space: &SpaceModel, n_theta: usize) -> Result<Self> {
        if space.m_2alpha != 0 {
            return Err(Error::Domain("K-averaging is implemented for m_2α = 0".into()));
        }
        let m1 = space.m1();
        let (gx, gw) = gauss_legendre(n_theta);
        let nodes: Vec<(f64, f64)> = gx
            .iter()
            .zip(&gw)
            .map(|(&x, &wt)| {
                let th = 0.5 * PI * (x + 1.0);
                (th.cos(), wt * th.sin().powf(m1 - 1.0))
            })
            .collect();
        let total = nodes.iter().map(|p| p.1).sum();
        Ok(KAverage { nodes, total, half: space.omega_halfwidth() })
    }

    fn at(&self, heat: &HeatKernelNodes, w: C, t: f64) -> Result<C> {
        let mut acc = cx(0.0);
        for &(c, wt) in &self.nodes {
            let ch = t.cosh() * w.cosh() - t.sinh() * w.sinh() * c;
            let mut zeta = ch.acosh();
            if zeta.re < 0.0 {
                zeta = -zeta;
            }
            if zeta.im.abs() >= self.half {
                return Err(Error::Domain(format!("relative coordinate {zeta} leaves the crown slice")));
            }
            acc += heat.eval(zeta)? * wt;
        }
        Ok(acc / self.total)
    }
}

/// Average over K of x ↦ h(ζ(x, w)) at x = a_t·o, where cosh ζ =
/// cosh t cosh w − sinh t sinh w cos θ continues the distance to a_w·o.
/// Returns the profile on `t_grid`; past its decay below the flush level
/// the profile is set to zero, since the fixed-node evaluation has
/// absolute accuracy of order 1e-16 of the peak.
pub fn k_average_heat(space: &SpaceModel, heat: &HeatKernelNodes, w: C, t_grid: &Panels, n_theta: usize) -> Result<RadialFunction> {
    let avg = KAverage::new(space, n_theta)?;
    let mut values = vec![cx(0.0); t_grid.len()];
    let mut peak = 0.0f64;
    for (j, &t) in t_grid.nodes.iter().enumerate() {
        let v = avg.at(heat, w, t)?;
        peak = peak.max(v.norm());
        if t > w.re.abs() + 1.0 && v.norm() < PROFILE_FLUSH * peak {
            break;
        }
        values[j] = v;
    }
    Ok(RadialFunction { grid: t_grid.clone(), values })
}

/// Spectral coefficient of the K-projection of x ↦ K_t(x, w), computed by
/// K-averaging the heat kernel at the complex relative coordinate and
/// transforming numerically.
pub fn kt_projection(space: &SpaceModel, kern: &SphericalKernel, w: C, t: f64, n_theta: usize) -> Result<SpectralFunction> {
    let heat = HeatKernelNodes::new(space, 2.0 * t);
    let profile = k_average_heat(space, &heat, w.conj(), &kern.t, n_theta)?;
    kern.forward(space, &profile)
}

/// (F, G)_t = k ∫ F̂ conj(Ĝ) e^{2t(ν²+ρ²)} |c|⁻² dν.
pub fn inner_t(space: &SpaceModel, f: &SpectralFunction, g: &SpectralFunction, t: f64) -> C {
    let mut acc = cx(0.0);
    for i in 0..f.values.len() {
        let nu = f.grid.nodes[i];
        acc += f.values[i] * g.values[i].conj() * (f.grid.weights[i] * plancherel_density(space, nu) / heat_multiplier(space, 2.0 * t, nu));
    }
    acc * space.k_space
}

/// (F, K(·,w))_{𝓗_X} for K-invariant F, with the K-projected kernel
/// coefficient φ_{iν}(w̄)/ω(iν).
pub fn hx_inner_with_kernel(space: &SpaceModel, f_hat: &SpectralFunction, w: C) -> Result<C> {
    let mut acc = cx(0.0);
    for ((&nu, &wt), f) in f_hat.grid.nodes.iter().zip(&f_hat.grid.weights).zip(&f_hat.values) {
        let kh = Phi::new(space, C::new(0.0, nu)).eval(w.conj())? / space.omega(nu);
        acc += f * kh.conj() * (wt * space.omega(nu) * plancherel_density(space, nu));
    }
    Ok(acc * space.k_space)
}

/// (H_t f)(w) at a crown point by convolution with the heat kernel:
/// ∫ f(t) δ(t) [K-average of h_t(ζ(a_t·o, w))] dt over the nodes where f
/// is not negligible.
pub fn heat_convolution_at(space: &SpaceModel, f: &RadialFunction, t: f64, w: C, n_theta: usize) -> Result<C> {
    let heat = HeatKernelNodes::new(space, t);
    let avg = KAverage::new(space, n_theta)?;
    let level = 1e-17 * f.max_abs();
    let mut acc = cx(0.0);
    for j in 0..f.grid.len() {
        if f.values[j].norm() <= level {
            continue;
        }
        let x = f.grid.nodes[j];
        acc += f.values[j] * avg.at(&heat, w, x)? * (f.grid.weights[j] * space.density(x));
    }
    Ok(acc)
}

/// Smallest eigenvalue of the Hermitian Gram matrix [K(z_i, z_j)] on real
/// points given in geodesic polar coordinates of the disk.
pub fn gram_min_eigenvalue(points: &[(f64, f64)], kernel: &dyn Fn(f64) -> Result<f64>) -> Result<f64> {
    let n = points.len();
    let mut m = nalgebra::DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let (t1, a1) = points[i];
            let (t2, a2) = points[j];
            let ch = t1.cosh() * t2.cosh() - t1.sinh() * t2.sinh() * (a1 - a2).cos();
            let d = ch.max(1.0).acosh();
            let v = kernel(d)?;
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    Ok(m.symmetric_eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsystem::build_space;
    use crate::transform::{gaussian_bump, GridSpec};
    use proptest::prelude::{prop_assert, proptest, ProptestConfig};

    #[test]
    fn real_and_diagonal_cases() {
        let g = mat_mul(&mat_mul(&rotation(0.7), &exp_h(cx(1.3))), &[[cx(1.0), cx(-0.4)], [cx(0.0), cx(1.0)]]);
        let r = iwasawa_complex(GroupModel::Sl2R, &g, 0.0).unwrap();
        assert!(r.a_exponent.im.abs() < 1e-15);
        assert!((r.a_exponent.re - 1.3).abs() < 1e-12);
        // classical decomposition through the first column
        let col = (g[0][0].norm_sqr() + g[1][0].norm_sqr()).sqrt();
        assert!((r.a_exponent.re - 2.0 * col.ln()).abs() < 1e-12);
        let id = [[cx(1.0), cx(0.0)], [cx(0.0), cx(1.0)]];
        for model in [GroupModel::Sl2R, GroupModel::Sl2C] {
            let r = iwasawa_complex(model, &id, 1.2).unwrap();
            assert!((r.a_exponent - C::new(0.0, 1.2)).norm() < 1e-14);
        }
    }

    #[test]
    fn reconstruction_on_random_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for model in [GroupModel::Sl2R, GroupModel::Sl2C] {
            for _ in 0..1000 {
                let g = random_group_element(model, &mut rng, false);
                let y: f64 = rng.gen_range(-1.5..1.5);
                let r = iwasawa_complex(model, &g, y).unwrap();
                let e = exp_h(C::new(0.0, y));
                let gb = if model == GroupModel::Sl2C { conj(&g) } else { g };
                let scale = g.iter().flatten().map(|v| v.norm()).fold(1.0, f64::max);
                assert!(r.reconstruction_error(&mat_mul(&e, &g), &mat_mul(&e, &gb)) < 1e-10 * scale * scale);
            }
        }
    }

    #[test]
    fn convexity_small_sample() {
        for kind in [SpaceKind::Hyperbolic(2), SpaceKind::ComplexA1] {
            let s = build_space(kind).unwrap();
            let rep = convexity_sample(&s, 2000, 3, true).unwrap();
            assert_eq!(rep.violations, 0);
            assert!(rep.sup_ratio > 0.99 && rep.sup_ratio <= 1.0 + 1e-9);
        }
        let s = build_space(SpaceKind::Jacobi(3, 2)).unwrap();
        assert!(convexity_sample(&s, 1, 0, false).is_err());
    }

    #[test]
    fn sigma_relative_agrees_with_matrix_model() {
        let s = build_space(SpaceKind::Hyperbolic(2)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let z = C::new(rng.gen_range(-2.0..2.0), rng.gen_range(-0.7..0.7));
            let w = C::new(rng.gen_range(-2.0..2.0), rng.gen_range(-0.7..0.7));
            let a = sigma_relative(&s, z, w).unwrap();
            let b = sigma_relative_matrix(z, w).unwrap();
            assert!((a - b).norm() < 1e-10);
        }
        assert_eq!(sigma_relative(&s, cx(0.4), cx(0.4)).unwrap(), cx(0.0));
        assert!(sigma_relative(&s, C::new(0.0, 1.0), C::new(0.0, 1.0)).is_err());
    }

    #[test]
    fn kernel_symmetry_and_gram() {
        let s = build_space(SpaceKind::Hyperbolic(2)).unwrap();
        let a = reproducing_kernel_k(&s, cx(0.3), cx(1.1)).unwrap();
        let b = reproducing_kernel_k(&s, cx(1.1), cx(0.3)).unwrap();
        assert!((a - b.conj()).norm() < 1e-10 * a.norm());
        let pts = [(0.0, 0.0), (0.5, 0.3), (1.0, 2.0), (0.8, 4.0), (1.5, 1.0), (0.3, 5.5)];
        let lmin = gram_min_eigenvalue(&pts, &|d| Ok(reproducing_kernel_k(&s, cx(d), cx(0.0))?.re)).unwrap();
        assert!(lmin >= -1e-10);
    }

    #[test]
    fn kt_two_representations() {
        let s = build_space(SpaceKind::Hyperbolic(2)).unwrap();
        for (z, w) in [(C::new(0.4, 0.3), C::new(-0.2, 0.5)), (C::new(1.2, -0.4), C::new(0.3, 0.1))] {
            let a = reproducing_kernel_kt(&s, z, w, 0.5).unwrap();
            let b = kt_plane_wave(&s, z, w, 0.5).unwrap();
            assert!((a - b).norm() < 1e-8 * a.norm(), "{a} {b}");
        }
    }

    #[test]
    fn extension_restricts_and_is_holomorphic() {
        let s = build_space(SpaceKind::Hyperbolic(2)).unwrap();
        let spec = GridSpec { t_max: 6.0, nu_max: 20.0, ..Default::default() };
        let kern = SphericalKernel::from_spec(&s, &spec).unwrap();
        let f = RadialFunction::sample_real(&kern.t, gaussian_bump(1.0, 0.4));
        let fh = kern.forward(&s, &f).unwrap();
        let fh = crate::transform::heat_transform_spectral(&s, &fh, 0.2).unwrap();
        let back = kern.inverse(&s, &fh).unwrap();
        for j in [30, 100, 150] {
            let v = hx_extension(&s, &fh, cx(kern.t.nodes[j])).unwrap();
            assert!((v - back.values[j]).norm() < 1e-10);
        }
        let z = C::new(0.8, 0.6);
        let h = 1e-4;
        let dx = (hx_extension(&s, &fh, z + h).unwrap() - hx_extension(&s, &fh, z - h).unwrap()) / (2.0 * h);
        let dy = (hx_extension(&s, &fh, z + C::new(0.0, h)).unwrap() - hx_extension(&s, &fh, z - C::new(0.0, h)).unwrap()) / (2.0 * h);
        assert!((dx + C::i() * dy).norm() < 1e-6 * dx.norm(), "{dx} {dy}");
        assert!(hx_extension(&s, &fh, C::new(0.0, 1.6)).is_err());
        let plain = fh.norm_sq(&s);
        assert!(hx_norm(&s, &fh).unwrap() >= plain);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn sigma_relative_routes_agree(t1 in -2.0..2.0f64, s1 in -0.7..0.7f64, t2 in -2.0..2.0f64, s2 in -0.7..0.7f64) {
            let space = build_space(SpaceKind::Hyperbolic(2)).unwrap();
            let (z, w) = (C::new(t1, s1), C::new(t2, s2));
            let a = sigma_relative(&space, z, w).unwrap();
            let b = sigma_relative_matrix(z, w).unwrap();
            prop_assert!((a - b).norm() < 1e-10, "{} {}", a, b);
        }

        #[test]
        fn iwasawa_reconstructs(seed in 0u64..1000, y in -1.5..1.5f64) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = random_group_element(GroupModel::Sl2C, &mut rng, true);
            let r = iwasawa_complex(GroupModel::Sl2C, &g, y).unwrap();
            let e = exp_h(C::new(0.0, y));
            let scale = g.iter().flatten().map(|v| v.norm()).fold(1.0, f64::max);
            prop_assert!(r.reconstruction_error(&mat_mul(&e, &g), &mat_mul(&e, &conj(&g))) < 1e-10 * scale * scale);
        }
    }
}
