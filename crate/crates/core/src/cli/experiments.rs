use num_complex::Complex64;
use std::f64::consts::PI;

use super::{Check, ExperimentConfig, Outcome};
use crate::cfunction::{c_gk, c_nbar_quadrature, c_rank_one};
use crate::crown::{
    convexity_sample as sample_convexity, gram_min_eigenvalue, heat_convolution_at, hx_extension, hx_inner_with_kernel,
    hx_norm, inner_t, kt_plane_wave, kt_projection, point_bound_constant, reproducing_kernel_k, reproducing_kernel_kt,
};
use crate::error::{Error, Result};
use crate::fock::{
    fock_norm, gaussian_convolution, heat_limit_errors, hxi_norm, lambda_t, lambda_tilde, segal_bargmann_invert,
    spectral_on, FockGrid,
};
use crate::quadrature::Panels;
use crate::radon::{abel, abel_fn, abel_spectrum, lambda_inverse, lambda_op, lambda_spectrum, HorocycleFunction, LambdaGrid};
use crate::rootsystem::{build_space, SpaceKind, SpaceModel};
use crate::spherical::{phi_envelope, phi_integral, phi_rank_one, radial_laplacian};
use crate::transform::{
    gaussian_bump, heat_kernel, heat_kernel_function, heat_multiplier, heat_transform, heat_transform_spectral,
    image_norm_t, spherical_inverse_at, DiskFunction, GridSpec, HelgasonKernel, RadialFunction, SphericalKernel,
};

type C = Complex64;

fn cx(re: f64) -> C {
    C::new(re, 0.0)
}

fn tol(cfg: &ExperimentConfig, default: f64) -> f64 {
    cfg.tolerance.unwrap_or(default)
}

fn space(cfg: &ExperimentConfig, default: SpaceKind) -> Result<SpaceModel> {
    build_space(cfg.space_or(default))
}

/// (center, width) of the test bumps; all have Gaussian spectral decay.
const BUMPS: [(f64, f64); 3] = [(1.0, 0.5), (1.8, 0.6), (0.6, 0.45)];

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

fn rel(a: C, b: C) -> f64 {
    (a - b).norm() / b.norm()
}

pub fn cfun_validate(cfg: &ExperimentConfig) -> Result<Outcome> {
    let s = space(cfg, SpaceKind::Hyperbolic(2))?;
    let mut o = Outcome::new(s.name(), &["re_lambda", "im_lambda", "c_re", "c_im", "oracle_re", "oracle_im", "rel_err"]);
    let mut worst = 0.0f64;
    let mut gk = 0.0f64;
    for nu in [0.5, 1.0, 2.0, 3.0, 5.0] {
        let l = C::new(0.7, nu);
        let c = c_rank_one(&s, l)?;
        let q = c_nbar_quadrature(&s, l)?;
        let e = rel(c, q);
        worst = worst.max(e);
        gk = gk.max(rel(c_gk(&s, l)?, c));
        o.row(vec![l.re, l.im, c.re, c.im, q.re, q.im, e]);
    }
    o.check(Check::at_most("c_vs_nbar_rel_err", worst, tol(cfg, 1e-8)));
    o.check(Check::at_most("c_rho_minus_one", (c_rank_one(&s, cx(s.rho()))? - 1.0).norm(), 1e-12));
    o.check(Check::at_most("gk_product_rel_err", gk, 1e-14));
    Ok(o)
}

pub fn spherical_validate(cfg: &ExperimentConfig) -> Result<Outcome> {
    let s = space(cfg, SpaceKind::Hyperbolic(2))?;
    let mut o = Outcome::new(s.name(), &["nu", "t", "phi", "phi_integral", "envelope_rel_err", "laplacian_residual"]);
    let (mut cross, mut weyl, mut lap, mut origin) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let rho2 = s.rho() * s.rho();
    for nu in linspace(0.25, 5.0, 10) {
        let l = C::new(0.0, nu);
        origin = origin.max((phi_rank_one(&s, l, 0.0)? - 1.0).norm());
        for t in linspace(0.1, 3.0, 10) {
            let env = phi_envelope(&s, t)?;
            let a = phi_rank_one(&s, l, t)?;
            let b = phi_integral(&s, l, cx(t), 1e-13)?;
            let e = (a - b).norm() / env;
            cross = cross.max(e);
            weyl = weyl.max((a - phi_rank_one(&s, -l, t)?).norm() / env);
            let lp = radial_laplacian(&s, |x| phi_rank_one(&s, l, x).unwrap_or(cx(f64::NAN)), t, 1e-3);
            let r = (lp + (nu * nu + rho2) * a).norm() / ((nu * nu + rho2) * env);
            lap = lap.max(r);
            o.row(vec![nu, t, a.re, b.re, e, r]);
        }
    }
    o.check(Check::at_most("phi_vs_integral_rel_err", cross, tol(cfg, 1e-8)));
    o.check(Check::at_most("weyl_symmetry", weyl, 1e-10));
    o.check(Check::at_most("phi_at_origin", origin, 1e-12));
    o.check(Check::at_most("eigen_residual", lap, 1e-5));
    Ok(o)
}

pub fn plancherel_roundtrip(cfg: &ExperimentConfig) -> Result<Outcome> {
    let s = space(cfg, SpaceKind::Hyperbolic(2))?;
    let kern = SphericalKernel::from_spec(&s, &cfg.grid(GridSpec::default()))?;
    let mut o = Outcome::new(s.name(), &["center", "width", "roundtrip_rel_err", "norm_x", "norm_spectral", "norm_rel_err"]);
    let (mut rt, mut nm) = (0.0f64, 0.0f64);
    for (c, w) in BUMPS {
        let f = RadialFunction::sample_real(&kern.t, gaussian_bump(c, w));
        let fh = kern.forward(&s, &f)?;
        let e = kern.inverse(&s, &fh)?.rel_linf_error(&f);
        let (a, b) = (f.norm_sq(&s), fh.norm_sq(&s));
        rt = rt.max(e);
        nm = nm.max((a - b).abs() / a);
        o.row(vec![c, w, e, a, b, (a - b).abs() / a]);
    }
    o.check(Check::at_most("roundtrip_rel_linf", rt, tol(cfg, 1e-6)));
    o.check(Check::at_most("plancherel_rel_err", nm, tol(cfg, 1e-6)));
    Ok(o)
}

fn h3_closed_form(t: f64, r: f64) -> f64 {
    let shape = if r == 0.0 { 1.0 } else { r / r.sinh() };
    PI * (-t).exp() * (4.0 * PI * t).powf(-1.5) * shape * (-r * r / (4.0 * t)).exp()
}

pub fn heat_kernel_table(cfg: &ExperimentConfig) -> Result<Outcome> {
    let s = space(cfg, SpaceKind::ComplexA1)?;
    let grid = cfg.grid(GridSpec { t_max: 14.0, ..GridSpec::default() }).radial();
    let mut o = Outcome::new(s.name(), &["t", "r", "h"]);
    let (mut mass, mut closed, mut neg) = (0.0f64, 0.0f64, 0.0f64);
    let mut monotone = true;
    for t in cfg.times_or(&[0.1, 0.5, 1.0]) {
        let mut prev = f64::INFINITY;
        for r in linspace(0.0, 8.0, 17) {
            let h = heat_kernel(&s, t, r)?;
            o.row(vec![t, r, h]);
            monotone &= h <= prev * (1.0 + 1e-12);
            prev = h;
            neg = neg.max(-h);
            if s.kind == SpaceKind::ComplexA1 && h > 1e-200 {
                closed = closed.max((h - h3_closed_form(t, r)).abs() / h3_closed_form(t, r).max(1e-300));
            }
        }
        let hf = heat_kernel_function(&s, t, &grid)?;
        let m: f64 = hf.grid.nodes.iter().zip(&hf.grid.weights).zip(&hf.values).map(|((&x, &w), v)| w * s.density(x) * v.re).sum();
        mass = mass.max((m - 1.0).abs());
    }
    o.check(Check::at_most("mass_minus_one", mass, tol(cfg, 1e-8)));
    o.check(Check::at_most("negativity", neg, 0.0));
    o.check(Check::at_least("monotone_in_r", if monotone { 1.0 } else { 0.0 }, 1.0));
    if s.kind == SpaceKind::ComplexA1 {
        o.check(Check::at_most("closed_form_rel_err", closed, tol(cfg, 1e-8)));
    }
    Ok(o)
}

pub fn heat_semigroup(cfg: &ExperimentConfig) -> Result<Outcome> {
    let s = space(cfg, SpaceKind::Hyperbolic(2))?;
    let kern = SphericalKernel::from_spec(&s, &cfg.grid(GridSpec::default()))?;
    let ts = cfg.times_or(&[0.2, 0.5]);
    let (t1, t2) = (ts[0], *ts.get(1).unwrap_or(&ts[0]));
    let mut o = Outcome::new(s.name(), &["t", "recovery_error"]);
    let f = RadialFunction::sample_real(&kern.t, gaussian_bump(BUMPS[0].0, BUMPS[0].1));
    let fh = kern.forward(&s, &f)?;
    let two = heat_transform(&s, &kern, &heat_transform(&s, &kern, &f, t1)?, t2)?;
    let one = heat_transform(&s, &kern, &f, t1 + t2)?;
    o.check(Check::at_most("semigroup_rel_linf", two.rel_linf_error(&one), tol(cfg, 1e-8)));
    let mut multiplier = 0.0f64;
    for &nu in &kern.nu.nodes {
        let m = heat_multiplier(&s, t1, nu) * heat_multiplier(&s, t2, nu) - heat_multiplier(&s, t1 + t2, nu);
        multiplier = multiplier.max(m.abs());
    }
    o.check(Check::at_most("multiplier_semigroup", multiplier, 1e-15));
    // ∂_t u = L u for u = H_t f at interior points
    let (t, dt, h) = (t1, 1e-3, 1e-2);
    let at = |tt: f64, x: f64| -> C {
        let g = heat_transform_spectral(&s, &fh, tt).and_then(|g| spherical_inverse_at(&s, &g, &[x]));
        g.map(|v| v[0]).unwrap_or(cx(f64::NAN))
    };
    let mut res = 0.0f64;
    let scale = one.max_abs();
    for x in [0.5, 1.0, 1.5, 2.5] {
        let dudt = (at(t + dt, x) - at(t - dt, x)) / (2.0 * dt);
        let lu = radial_laplacian(&s, |y| at(t, y), x, h);
        res = res.max((dudt - lu).norm() / scale);
    }
    o.check(Check::at_most("heat_equation_residual", res, 1e-4));
    let mut prev = f64::INFINITY;
    let mut monotone = true;
    for tt in [0.1, 0.01, 0.001] {
        let e = heat_transform(&s, &kern, &f, tt)?.rel_linf_error(&f);
        monotone &= e < prev;
        prev = e;
        o.row(vec![tt, e]);
    }
    o.check(Check::at_least("recovery_monotone", if monotone { 1.0 } else { 0.0 }, 1.0));
    Ok(o)
}

pub fn convexity_sample(cfg: &ExperimentConfig) -> Result<Outcome> {
    let mut o = Outcome::new("hyperbolic(2),complex_a1".into(), &["model", "samples", "violations", "max_violation", "sup_ratio", "max_reconstruction"]);
    let mut viol = 0usize;
    let mut ratio = f64::INFINITY;
    let mut recon = 0.0f64;
    for (i, kind) in [SpaceKind::Hyperbolic(2), SpaceKind::ComplexA1].into_iter().enumerate() {
        let s = build_space(kind)?;
        let r = sample_convexity(&s, cfg.samples, cfg.seed.wrapping_add(i as u64), true)?;
        viol += r.violations;
        ratio = ratio.min(r.sup_ratio);
        recon = recon.max(r.max_reconstruction);
        o.row(vec![i as f64, r.samples as f64, r.violations as f64, r.max_violation, r.sup_ratio, r.max_reconstruction]);
    }
    o.check(Check::at_most("violations", viol as f64, 0.0));
    o.check(Check::at_least("sharpness_ratio", ratio, 0.99));
    o.check(Check::at_most("reconstruction_error", recon, tol(cfg, 1e-9)));
    Ok(o)
}

pub fn abel_gaussian(cfg: &ExperimentConfig) -> Result<Outcome> {
    let s = space(cfg, SpaceKind::Hyperbolic(2))?;
    let grid = cfg.grid(GridSpec { t_max: 14.0, ..GridSpec::default() }).radial();
    let rho2 = s.rho() * s.rho();
    let mut o = Outcome::new(s.name(), &["t", "s", "radon_rho", "gaussian"]);
    let (mut worst, mut literal) = (0.0f64, 0.0f64);
    let lgrid = LambdaGrid::default();
    for t in cfg.times_or(&[0.25, 0.5, 1.0]) {
        let h = heat_kernel_function(&s, t, &grid)?;
        let gauss = |x: f64| (-t * rho2).exp() * (4.0 * PI * t).powf(-0.5) * (-x * x / (4.0 * t)).exp();
        let ss = linspace(-4.0, 4.0, 17);
        let vals = abel(&s, &h, &ss)?;
        let peak = gauss(0.0);
        for (&x, v) in ss.iter().zip(&vals) {
            worst = worst.max((v - gauss(x)).norm() / peak);
            o.row(vec![t, x, v.re, gauss(x)]);
        }
        let lam = lambda_op(&s, |x| h.eval(x), grid.breaks[grid.breaks.len() - 1], &lgrid)?;
        let dev = lam.s.iter().zip(&lam.values[0]).map(|(&x, v)| (v - gauss(x)).norm()).fold(0.0, f64::max) / peak;
        literal = literal.max(dev);
    }
    o.check(Check::at_most("radon_rho_gaussian_rel_err", worst, tol(cfg, 1e-6)));
    o.info("lambda_literal_deviation", literal);
    Ok(o)
}

/// Radial Laplacian of [`gaussian_bump`] in closed form.
fn bump_laplacian(space: &SpaceModel, c: f64, w: f64, t: f64) -> f64 {
    let t = t.abs().max(1e-8);
    let w2 = w * w;
    let parts = [(t - c), (t + c)];
    let (mut d1, mut d2) = (0.0, 0.0);
    for d in parts {
        let e = (-d * d / (2.0 * w2)).exp();
        d1 += -d / w2 * e;
        d2 += (d * d / (w2 * w2) - 1.0 / w2) * e;
    }
    d2 + space.drift(t) * d1
}

fn second_derivative<F: Fn(f64) -> C>(u: F, x: f64, h: f64) -> C {
    (-u(x + 2.0 * h) + 16.0 * u(x + h) - 30.0 * u(x) + 16.0 * u(x - h) - u(x - 2.0 * h)) / (12.0 * h * h)
}

pub fn lambda_unitarity(cfg: &ExperimentConfig) -> Result<Outcome> {
    let s = space(cfg, SpaceKind::Hyperbolic(2))?;
    let spec = cfg.grid(GridSpec { t_max: 8.0, nu_max: 24.0, ..GridSpec::default() });
    let kern = SphericalKernel::from_spec(&s, &spec)?;
    let lgrid = LambdaGrid::default();
    let t_cut = spec.t_max;
    let rho2 = s.rho() * s.rho();
    let mut o = Outcome::new(s.name(), &["center", "width", "norm_x", "norm_lambda", "rel_err", "weyl_residual", "inverse_rel_err"]);
    let (mut unit, mut weyl, mut inv, mut lap, mut fourier) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let small_nu = Panels::uniform(0.0, 10.0, 5, 4);
    let fourier_kern = SphericalKernel::new(&s, &kern.t, &small_nu)?;
    for (c, w) in BUMPS {
        let g = gaussian_bump(c, w);
        let f = RadialFunction::sample_real(&kern.t, g);
        let u = lambda_op(&s, |x| cx(g(x)), t_cut, &lgrid)?;
        let (a, b) = (f.norm_sq(&s), u.norm_sq());
        unit = unit.max((a - b).abs() / a);
        let (_, wr) = lambda_spectrum(&s, &u, &kern.nu)?;
        weyl = weyl.max(wr);
        let e = lambda_inverse(&s, &u, &kern)?.rel_linf_error(&f);
        inv = inv.max(e);
        o.row(vec![c, w, a, b, (a - b).abs() / a, wr, e]);
        // ℛ_ρ(Lf) = (d²/ds² − ρ²) ℛ_ρ f
        let lf = |x: f64| cx(bump_laplacian(&s, c, w, x));
        let rf = |x: f64| abel_fn(&s, |y| cx(g(y)), x, t_cut).unwrap_or(cx(f64::NAN));
        let peak = rf(0.0).norm();
        for x in [0.3, 1.0, 1.7, 2.6] {
            let lhs = abel_fn(&s, lf, x, t_cut)?;
            let rhs = second_derivative(rf, x, 1e-2) - rho2 * rf(x);
            lap = lap.max((lhs - rhs).norm() / (peak * (1.0 + rho2)));
        }
        // 𝓕_A ℛ_ρ f = f̂
        let fa = abel_spectrum(&s, |x| cx(g(x)), t_cut, &LambdaGrid { nu: small_nu.clone(), ..lgrid.clone() })?;
        let fh = fourier_kern.forward(&s, &f)?;
        let scale = fh.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        for (p, q) in fa.values.iter().zip(&fh.values) {
            fourier = fourier.max((p - q).norm() / scale);
        }
    }
    o.check(Check::at_most("lambda_norm_rel_err", unit, tol(cfg, 1e-5)));
    o.check(Check::at_most("weyl_relation_residual", weyl, 1e-8));
    o.check(Check::at_most("lambda_inverse_rel_linf", inv, tol(cfg, 1e-5)));
    o.check(Check::at_most("laplace_intertwining_residual", lap, 1e-4));
    o.check(Check::at_most("fourier_slice_rel_err", fourier, 1e-6));
    Ok(o)
}

pub fn fock_unitarity(cfg: &ExperimentConfig) -> Result<Outcome> {
    let s = space(cfg, SpaceKind::Hyperbolic(2))?;
    let spec = cfg.grid(GridSpec { t_max: 8.0, nu_max: 24.0, nu_panel: 0.25, ..GridSpec::default() });
    let kern = SphericalKernel::from_spec(&s, &spec)?;
    let t = cfg.times_or(&[0.25])[0];
    let grid = FockGrid::default();
    let mut o = Outcome::new(s.name(), &["center", "width", "norm_x", "fock_norm", "rel_err", "inverse_rel_err", "image_norm_rel_err"]);
    let (mut fock, mut inv, mut image) = (0.0f64, 0.0f64, 0.0f64);
    for (c, w) in BUMPS {
        let f = RadialFunction::sample_real(&kern.t, gaussian_bump(c, w));
        let a = f.norm_sq(&s);
        let phi = lambda_t(&s, &kern, &f, t)?;
        let n = fock_norm(&s, &phi, &grid)?;
        let e = segal_bargmann_invert(&s, &phi, &kern, &grid)?.rel_linf_error(&f);
        let im = image_norm_t(&s, &heat_transform_spectral(&s, &kern.forward(&s, &f)?, t)?, t);
        fock = fock.max((n - a).abs() / a);
        inv = inv.max(e);
        image = image.max((im - a).abs() / a);
        o.row(vec![c, w, a, n, (n - a).abs() / a, e, (im - a).abs() / a]);
    }
    o.check(Check::at_most("fock_norm_rel_err", fock, tol(cfg, 1e-4)));
    o.check(Check::at_most("inversion_rel_linf", inv, tol(cfg, 1e-4)));
    o.check(Check::at_most("image_norm_rel_err", image, 1e-6));
    Ok(o)
}

pub fn hx_kernel(cfg: &ExperimentConfig) -> Result<Outcome> {
    let s = space(cfg, SpaceKind::Hyperbolic(2))?;
    let mut o = Outcome::new(s.name(), &["re_w", "im_w", "value", "kt_inner", "k_inner", "kt_rel_err", "k_rel_err"]);
    // extension restricted to the real axis
    let ext_spec = GridSpec { t_max: 8.0, nu_max: 20.0, ..GridSpec::default() };
    let ek = SphericalKernel::from_spec(&s, &ext_spec)?;
    let f = RadialFunction::sample_real(&ek.t, gaussian_bump(1.0, 0.4));
    let fh = heat_transform_spectral(&s, &ek.forward(&s, &f)?, 0.2)?;
    let back = ek.inverse(&s, &fh)?;
    let scale = back.max_abs();
    let mut restr = 0.0f64;
    for j in (0..ek.t.len()).step_by(11) {
        restr = restr.max((hx_extension(&s, &fh, cx(ek.t.nodes[j]))? - back.values[j]).norm() / scale);
    }
    o.check(Check::at_most("extension_restriction", restr, tol(cfg, 1e-6)));
    let mut bound_violations = 0.0;
    for x in [0.0, 0.5, 1.0, 2.0] {
        for y in [-1.2, -0.8, -0.4, 0.0, 0.4, 0.8, 1.2] {
            match hx_extension(&s, &fh, C::new(x, y)) {
                Ok(_) => {}
                Err(Error::PointBound { .. }) => bound_violations += 1.0,
                Err(e) => return Err(e),
            }
        }
    }
    o.info("point_bound_c_at_1_0.8i", point_bound_constant(&s, &fh.grid, C::new(1.0, 0.8))?);
    o.check(Check::at_most("point_bound_violations", bound_violations, 0.0));
    // reproducing properties against heat convolution at crown points
    let t = 0.5;
    let kspec = GridSpec { t_max: 14.0, nu_max: 6.0, nu_panel: 0.25, ..GridSpec::default() };
    let kk = SphericalKernel::from_spec(&s, &kspec)?;
    let g = RadialFunction::sample_real(&kk.t, gaussian_bump(0.8, 0.4));
    let gh = kk.forward(&s, &g)?;
    let big = heat_transform_spectral(&s, &gh, t)?;
    let (mut kt_err, mut k_err) = (0.0f64, 0.0f64);
    for w in [C::new(0.3, 0.2), C::new(0.8, -0.4), C::new(1.2, 0.6), C::new(0.5, 1.0), C::new(2.0, -0.3)] {
        let value = heat_convolution_at(&s, &g, t, w, 32)?;
        let kt_hat = kt_projection(&s, &kk, w, t, 32)?;
        let lhs_t = inner_t(&s, &big, &kt_hat, t);
        let lhs_k = hx_inner_with_kernel(&s, &big, w)?;
        let (a, b) = (rel(lhs_t, value), rel(lhs_k, value));
        kt_err = kt_err.max(a);
        k_err = k_err.max(b);
        o.row(vec![w.re, w.im, value.re, lhs_t.re, lhs_k.re, a, b]);
    }
    o.check(Check::at_most("kt_reproducing_rel_err", kt_err, tol(cfg, 1e-4)));
    o.check(Check::at_most("k_reproducing_rel_err", k_err, tol(cfg, 1e-4)));
    let mut routes = 0.0f64;
    if s.m_2alpha == 0 {
        for (z, w) in [(C::new(0.4, 0.3), C::new(-0.2, 0.5)), (C::new(1.2, -0.4), C::new(0.3, 0.1))] {
            routes = routes.max(rel(kt_plane_wave(&s, z, w, t)?, reproducing_kernel_kt(&s, z, w, t)?));
        }
    }
    o.check(Check::at_most("kt_two_routes_rel_err", routes, 1e-8));
    let pts = [(0.0, 0.0), (0.5, 0.3), (1.0, 2.0), (0.8, 4.0), (1.5, 1.0), (0.3, 5.5), (2.0, 3.3), (1.1, 0.9)];
    let lmin = gram_min_eigenvalue(&pts, &|d| Ok(reproducing_kernel_k(&s, cx(d), cx(0.0))?.re))?;
    o.check(Check::at_least("gram_min_eigenvalue", lmin, -1e-10));
    let _ = hx_norm(&s, &fh)?;
    Ok(o)
}

pub fn hxi_unitarity(cfg: &ExperimentConfig) -> Result<Outcome> {
    let s = space(cfg, SpaceKind::Hyperbolic(2))?;
    let spec = cfg.grid(GridSpec { t_max: 8.0, nu_max: 24.0, nu_panel: 0.25, ..GridSpec::default() });
    let kern = SphericalKernel::from_spec(&s, &spec)?;
    let rho2 = s.rho() * s.rho();
    let levels = 12;
    let bump = RadialFunction::sample_real(&kern.t, gaussian_bump(1.0, 0.5));
    let bump_hat = kern.forward(&s, &bump)?;
    let spectra = vec![
        spectral_on(&kern.nu, |nu| (-0.3 * (nu * nu + rho2)).exp()),
        heat_transform_spectral(&s, &bump_hat, 0.2)?,
        spectral_on(&kern.nu, |nu| nu * nu * (-0.5 * nu * nu).exp()),
    ];
    let mut o = Outcome::new(s.name(), &["spectrum", "y", "slice_norm", "hx_norm"]);
    let (mut norm_err, mut weyl, mut cr, mut slice0) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut dominated = true;
    let mut monotone = true;
    for (idx, fh) in spectra.iter().enumerate() {
        let u = lambda_tilde(&s, &[(0, fh.clone())], 60.0, 0.1, levels);
        let r = hxi_norm(&s, &u)?;
        let want = hx_norm(&s, fh)?;
        norm_err = norm_err.max((r.extrapolated - want).abs() / want);
        dominated &= r.sampled_sup <= want * (1.0 + 1e-10);
        monotone &= r.monotone;
        for &(y, v) in &r.slices {
            o.row(vec![idx as f64, y, v, want]);
        }
        let k0 = u.ys.iter().position(|&y| y == 0.0).unwrap_or(0);
        let row0 = HorocycleFunction::radial(u.s.clone(), u.values[0][k0].clone());
        let (_, wr) = lambda_spectrum(&s, &row0, &kern.nu)?;
        weyl = weyl.max(wr);
        let plain = fh.norm_sq(&s);
        slice0 = slice0.max((r.slices[k0].1 - plain).abs() / plain);
        cr = cr.max(u.cr_residual(&[C::new(0.5, 0.3), C::new(-2.0, 1.2), C::new(1.0, -0.9)], 1e-4));
    }
    o.check(Check::at_most("hxi_vs_hx_rel_err", norm_err, tol(cfg, 1e-4)));
    o.check(Check::at_most("weyl_relation_residual", weyl, 1e-8));
    o.check(Check::at_most("slice0_plancherel_rel_err", slice0, 1e-6));
    o.check(Check::at_most("cr_residual", cr, 1e-6));
    o.check(Check::at_least("sampled_sup_dominated", if dominated { 1.0 } else { 0.0 }, 1.0));
    o.check(Check::at_least("slices_even_and_monotone", if monotone { 1.0 } else { 0.0 }, 1.0));
    // Λ̃ of heat data against the Gaussian convolution of Λf
    let t = 0.5;
    let lf = lambda_op(&s, |x| bump.eval(x), spec.t_max, &LambdaGrid::default())?;
    let heat = lambda_tilde(&s, &[(0, heat_transform_spectral(&s, &bump_hat, t)?)], 60.0, 0.1, levels);
    let mut consistency = 0.0f64;
    let peak = lf.max_abs();
    for z in [C::new(0.3, 0.4), C::new(-1.0, 1.2), C::new(2.0, -0.7)] {
        let a = heat.eval(0, z).unwrap_or(cx(f64::NAN));
        let b = gaussian_convolution(&lf, t, z)? * (-t * rho2).exp();
        consistency = consistency.max((a - b).norm() / peak);
    }
    o.check(Check::at_most("heat_extension_consistency", consistency, 1e-5));
    let errs = heat_limit_errors(&s, &spectra[0], &[0.1, 0.01, 0.001], 60.0, 0.1, levels)?;
    for (t, e) in [0.1, 0.01, 0.001].iter().zip(&errs) {
        o.info(&format!("limit_error_t_{t}"), *e);
    }
    let decreasing = errs.windows(2).all(|w| w[1] < w[0]);
    o.check(Check::at_least("limit_errors_monotone", if decreasing { 1.0 } else { 0.0 }, 1.0));
    Ok(o)
}

pub fn helgason_roundtrip(cfg: &ExperimentConfig) -> Result<Outcome> {
    let s = space(cfg, SpaceKind::Hyperbolic(2))?;
    let spec = cfg.grid(GridSpec { t_max: 5.0, t_panel: 0.25, nu_max: 24.0, nu_panel: 0.5, order: 12 });
    let (t, nu) = (spec.radial(), spec.spectral());
    let n_max = 3;
    let n_theta = 16;
    let hk = HelgasonKernel::new(&s, &t, &nu, n_max)?;
    let g = gaussian_bump(1.0, 0.5);
    let f = |r: f64, th: f64| {
        let sh = r.sinh();
        cx(g(r)) * (1.0 + 0.5 * sh * th.cos() + 0.3 * sh * sh * (2.0 * th).sin())
    };
    let df = DiskFunction::sample(&t, n_theta, f);
    let modes = hk.forward(&df)?;
    let back = hk.inverse(&modes, n_theta)?;
    let rt = back.rel_linf_error(&df);
    let mut o = Outcome::new(s.name(), &["nu_index", "t_index", "theta", "lhs_re", "rhs_re", "rel_err"]);
    let mut inv = 0.0f64;
    let scale = modes.iter().flat_map(|m| m.values.iter()).map(|v| v.norm()).fold(0.0, f64::max);
    for i in [3usize, 20, 47] {
        let plus: Vec<C> = modes.iter().map(|m| m.values[i]).collect();
        let minus = hk.forward_at_minus(&df, i);
        for j in [5usize, 60, 150] {
            for theta in [0.3, 2.0, 4.4] {
                let (l, r) = hk.weyl_invariance_sides(&plus, &minus, i, j, theta);
                let e = (l - r).norm() / scale;
                inv = inv.max(e);
                o.row(vec![i as f64, j as f64, theta, l.re, r.re, e]);
            }
        }
    }
    o.check(Check::at_most("helgason_roundtrip_rel_linf", rt, tol(cfg, 1e-4)));
    o.check(Check::at_most("weyl_invariance_rel_err", inv, 1e-6));
    Ok(o)
}
