//! Quadrature rules: Gauss-Legendre panels, adaptive Gauss-Kronrod,
//! double-exponential rules and the periodic trapezoid.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton
/// iteration on the three-term recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = (n + 1) / 2;
    for i in 0..m {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let mut p0 = 1.0;
            let mut p1 = 0.0;
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) as f64 * z * p1 - j as f64 * p2) / (j + 1) as f64;
            }
            dp = n as f64 * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// A composite Gauss-Legendre rule: nodes and weights over a union of panels.
#[derive(Debug, Clone, PartialEq)]
pub struct Panels {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// Panel breakpoints, strictly increasing.
    pub breaks: Vec<f64>,
    /// Nodes per panel.
    pub order: usize,
}

impl Panels {
    /// Panels between consecutive breakpoints with `order` nodes each.
    pub fn from_breaks(breaks: &[f64], order: usize) -> Self {
        assert!(breaks.len() >= 2);
        let (gx, gw) = gauss_legendre(order);
        let mut nodes = Vec::with_capacity((breaks.len() - 1) * order);
        let mut weights = Vec::with_capacity(nodes.capacity());
        for p in breaks.windows(2) {
            let (a, b) = (p[0], p[1]);
            assert!(b > a, "panel breakpoints must increase");
            let h = 0.5 * (b - a);
            let c = 0.5 * (a + b);
            for (x, w) in gx.iter().zip(&gw) {
                nodes.push(c + h * x);
                weights.push(h * w);
            }
        }
        Panels { nodes, weights, breaks: breaks.to_vec(), order }
    }

    /// `panels` equal panels on [a, b].
    pub fn uniform(a: f64, b: f64, panels: usize, order: usize) -> Self {
        let breaks: Vec<f64> =
            (0..=panels).map(|i| a + (b - a) * i as f64 / panels as f64).collect();
        Self::from_breaks(&breaks, order)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// Same panels with every panel split in two.
    pub fn refined(&self) -> Self {
        let mut br = Vec::with_capacity(2 * self.breaks.len());
        for p in self.breaks.windows(2) {
            br.push(p[0]);
            br.push(0.5 * (p[0] + p[1]));
        }
        br.push(*self.breaks.last().unwrap());
        Self::from_breaks(&br, self.order)
    }

    /// Interpolate samples given at `self.nodes` to the point x by
    /// barycentric Lagrange interpolation on the containing panel.
    pub fn interpolate(&self, values: &[Complex64], x: f64) -> Complex64 {
        let nb = self.breaks.len() - 1;
        let p = match self.breaks.partition_point(|&b| b <= x) {
            0 => 0,
            k if k > nb => nb - 1,
            k => k - 1,
        };
        let lo = p * self.order;
        let xs = &self.nodes[lo..lo + self.order];
        let ys = &values[lo..lo + self.order];
        barycentric(xs, ys, x)
    }
}

fn barycentric(xs: &[f64], ys: &[Complex64], x: f64) -> Complex64 {
    let n = xs.len();
    let mut num = Complex64::new(0.0, 0.0);
    let mut den = 0.0;
    for j in 0..n {
        let d = x - xs[j];
        if d == 0.0 {
            return ys[j];
        }
        let mut wj = 1.0;
        for k in 0..n {
            if k != j {
                wj /= xs[j] - xs[k];
            }
        }
        let c = wj / d;
        num += ys[j] * c;
        den += c;
    }
    num / den
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_3,
    0.949_107_912_342_758_524_526_189_684_047_9,
    0.864_864_423_359_769_072_789_712_788_640_9,
    0.741_531_185_599_394_439_863_864_773_280_8,
    0.586_087_235_467_691_130_294_144_845_693_0,
    0.405_845_151_377_397_166_906_606_412_076_96,
    0.207_784_955_007_898_467_600_689_403_773_2,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_97,
    0.063_092_092_629_978_553_290_700_663_189_2,
    0.104_790_010_322_250_183_839_876_322_541_5,
    0.140_653_259_715_525_918_745_189_590_510_2,
    0.169_004_726_639_267_902_826_583_426_598_6,
    0.190_350_578_064_785_409_913_256_402_421_0,
    0.204_432_940_075_298_892_414_161_999_234_6,
    0.209_482_141_084_727_828_012_999_174_891_7,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_1,
    0.279_705_391_489_276_667_901_467_771_423_8,
    0.381_830_050_505_118_944_950_369_775_488_98,
    0.417_959_183_673_469_387_755_102_040_816_3,
];

fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut rk = fc * WGK[7];
    let mut rg = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        rk += s * WGK[j];
        if j % 2 == 1 {
            rg += s * WG[j / 2];
        }
    }
    ((rk * h), ((rk - rg) * h).norm())
}

/// Globally adaptive Gauss-Kronrod (7/15) integration of a complex
/// integrand. Returns the value and the error estimate.
pub fn adaptive<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<(Complex64, f64)> {
    const MAX_INTERVALS: usize = 4000;
    let (v, e) = gk15(&f, a, b);
    let mut segs = vec![(a, b, v, e)];
    loop {
        let total: Complex64 = segs.iter().map(|s| s.2).sum();
        let err: f64 = segs.iter().map(|s| s.3).sum();
        if err <= abs_tol.max(rel_tol * total.norm()) {
            return Ok((total, err));
        }
        if segs.len() >= MAX_INTERVALS {
            return Err(Error::Quadrature(format!(
                "adaptive rule on [{a}, {b}] stalled with error {err:e}"
            )));
        }
        let (i, _) = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .unwrap();
        let (lo, hi, _, _) = segs.swap_remove(i);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&f, lo, mid);
        let (v2, e2) = gk15(&f, mid, hi);
        segs.push((lo, mid, v1, e1));
        segs.push((mid, hi, v2, e2));
    }
}

/// Real-valued convenience wrapper around [`adaptive`].
pub fn adaptive_real<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    adaptive(|x| Complex64::new(f(x), 0.0), a, b, tol * 1e-3, tol).map(|(v, _)| v.re)
}

/// Trapezoid rule for a 2π-periodic integrand, doubling the point count
/// until successive values agree to `tol`. Returns the mean value
/// (1/2π)∫ f dθ.
pub fn periodic_mean<F: Fn(f64) -> Complex64>(f: F, tol: f64) -> Result<Complex64> {
    let mut n = 16usize;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut abs_sum = 0.0;
    for k in 0..n {
        let v = f(2.0 * PI * k as f64 / n as f64);
        sum += v;
        abs_sum += v.norm();
    }
    let mut prev = sum / n as f64;
    while n < (1 << 20) {
        for k in 0..n {
            let v = f(2.0 * PI * (k as f64 + 0.5) / n as f64);
            sum += v;
            abs_sum += v.norm();
        }
        n *= 2;
        let cur = sum / n as f64;
        // the scale is the mean modulus, so cancelling integrands still stop
        let scale = cur.norm().max(abs_sum / n as f64);
        if (cur - prev).norm() <= tol * scale || scale == 0.0 {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::Quadrature("periodic trapezoid did not converge".into()))
}

/// Tanh-sinh rule on [a, b]; robust against integrable endpoint singularities.
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    let h0 = 0.5 * (b - a);
    let eval = |t: f64| -> f64 {
        let u = 0.5 * PI * t.sinh();
        let x = u.tanh();
        let w = 0.5 * PI * t.cosh() / (u.cosh() * u.cosh());
        // distance to the nearer endpoint, computed without cancellation
        let d = h0 / (u.abs().exp() * u.abs().cosh());
        let pt = if x < 0.0 { a + d } else { b - d };
        if d <= 0.0 || w == 0.0 {
            0.0
        } else {
            h0 * w * f(pt)
        }
    };
    let tmax = 6.5;
    let mut h = 0.5;
    let mut sum = eval(0.0);
    let mut k = 1;
    while k as f64 * h <= tmax {
        sum += eval(k as f64 * h) + eval(-(k as f64) * h);
        k += 1;
    }
    let mut prev = sum * h;
    for _ in 0..10 {
        h *= 0.5;
        let mut k = 1;
        while k as f64 * h <= tmax {
            sum += eval(k as f64 * h) + eval(-(k as f64) * h);
            k += 2;
        }
        let cur = sum * h;
        if (cur - prev).abs() <= tol * cur.abs().max(1e-300) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::Quadrature("tanh-sinh did not converge".into()))
}

/// Exponential-sinh rule on [a, ∞) for integrands with exponential or
/// algebraic decay.
pub fn exp_sinh<F: Fn(f64) -> f64>(f: F, a: f64, tol: f64) -> Result<f64> {
    let eval = |t: f64| -> f64 {
        let u = 0.5 * PI * t.sinh();
        let x = u.exp();
        let w = x * 0.5 * PI * t.cosh();
        if !x.is_finite() || x == 0.0 {
            return 0.0;
        }
        let v = f(a + x);
        if v == 0.0 {
            0.0
        } else {
            w * v
        }
    };
    let (tlo, thi) = (-5.0, 5.0);
    let mut h = 0.5;
    let mut sum = 0.0;
    let mut k: i64 = (tlo / h) as i64;
    while k as f64 * h <= thi {
        sum += eval(k as f64 * h);
        k += 1;
    }
    let mut prev = sum * h;
    for _ in 0..10 {
        h *= 0.5;
        let mut k: i64 = (tlo / h) as i64 + 1;
        if k % 2 == 0 {
            k += 1;
        }
        while k as f64 * h <= thi {
            sum += eval(k as f64 * h);
            k += 2;
        }
        let cur = sum * h;
        if (cur - prev).abs() <= tol * cur.abs().max(1e-300) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::Quadrature("exp-sinh did not converge".into()))
}
