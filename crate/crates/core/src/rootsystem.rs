//! Restricted root systems, Weyl groups, the crown base Ω and the ω weight,
//! plus the concrete rank-one space models built on them.

use num_complex::Complex64;
use std::f64::consts::FRAC_PI_2;
use std::fmt;

use crate::error::{Error, Result};

/// A vector (or covector, via the inner product) on 𝔞 in orthonormal coordinates.
pub type Vector = Vec<f64>;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Reduced rank-two root-system shapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankTwo {
    A1xA1,
    A2,
    B2,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootSystem {
    pub rank: usize,
    /// Positive roots with multiplicities.
    pub positive_roots: Vec<(Vector, u32)>,
    /// Gram matrix of the inner product in the working coordinates.
    pub inner_product: Vec<Vector>,
    pub rho: Vector,
    simple: Vec<Vector>,
}

impl RootSystem {
    /// Rank one with Δ⁺ = {α} or {α, 2α}, α(H₁) = 1.
    pub fn rank_one(m_alpha: u32, m_2alpha: u32) -> Result<Self> {
        if m_alpha == 0 {
            return Err(Error::InvalidSpace("m_alpha must be positive".into()));
        }
        let mut roots = vec![(vec![1.0], m_alpha)];
        if m_2alpha > 0 {
            roots.push((vec![2.0], m_2alpha));
        }
        Ok(Self::assemble(1, roots, vec![vec![1.0]]))
    }

    /// Reduced rank-two systems with a single multiplicity per root length.
    pub fn rank_two(shape: RankTwo, m_long: u32, m_short: u32) -> Result<Self> {
        if m_long == 0 || m_short == 0 {
            return Err(Error::InvalidSpace("multiplicities must be positive".into()));
        }
        let s3 = 3f64.sqrt();
        let (roots, simple) = match shape {
            RankTwo::A1xA1 => (
                vec![(vec![1.0, 0.0], m_long), (vec![0.0, 1.0], m_short)],
                vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            ),
            RankTwo::A2 => (
                vec![
                    (vec![1.0, 0.0], m_long),
                    (vec![-0.5, 0.5 * s3], m_long),
                    (vec![0.5, 0.5 * s3], m_long),
                ],
                vec![vec![1.0, 0.0], vec![-0.5, 0.5 * s3]],
            ),
            RankTwo::B2 => (
                vec![
                    (vec![1.0, -1.0], m_long),
                    (vec![0.0, 1.0], m_short),
                    (vec![1.0, 0.0], m_short),
                    (vec![1.0, 1.0], m_long),
                ],
                vec![vec![1.0, -1.0], vec![0.0, 1.0]],
            ),
        };
        let mut rs = Self::assemble(2, roots, vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        rs.simple = simple;
        Ok(rs)
    }

    fn assemble(rank: usize, positive_roots: Vec<(Vector, u32)>, gram: Vec<Vector>) -> Self {
        let mut rho = vec![0.0; rank];
        for (a, m) in &positive_roots {
            for i in 0..rank {
                rho[i] += 0.5 * *m as f64 * a[i];
            }
        }
        let simple = vec![positive_roots[0].0.clone()];
        RootSystem { rank, positive_roots, inner_product: gram, rho, simple }
    }

    /// Simple roots of the positive system.
    pub fn simple_roots(&self) -> &[Vector] {
        &self.simple
    }

    /// α(Y) for a root α given as a covector.
    pub fn eval(&self, root: &[f64], y: &[f64]) -> f64 {
        dot(root, y)
    }

    /// All roots ±α.
    pub fn roots(&self) -> Vec<Vector> {
        let mut out = Vec::new();
        for (a, _) in &self.positive_roots {
            out.push(a.clone());
            out.push(a.iter().map(|x| -x).collect());
        }
        out
    }

    /// True when the Gram matrix is symmetric positive definite.
    pub fn inner_product_is_valid(&self) -> bool {
        let g = &self.inner_product;
        let n = self.rank;
        for i in 0..n {
            for j in 0..n {
                if (g[i][j] - g[j][i]).abs() > 1e-14 {
                    return false;
                }
            }
        }
        match n {
            1 => g[0][0] > 0.0,
            2 => g[0][0] > 0.0 && g[0][0] * g[1][1] - g[0][1] * g[1][0] > 0.0,
            _ => false,
        }
    }

    /// Vertices of the closed polytope Ω.
    fn omega_vertices(&self) -> Vec<Vector> {
        let roots = &self.positive_roots;
        let mut verts = Vec::new();
        if self.rank == 1 {
            let amax = roots.iter().map(|(a, _)| a[0].abs()).fold(0.0, f64::max);
            let y = FRAC_PI_2 / amax;
            return vec![vec![y], vec![-y]];
        }
        for i in 0..roots.len() {
            for j in (i + 1)..roots.len() {
                let (a, b) = (&roots[i].0, &roots[j].0);
                let det = a[0] * b[1] - a[1] * b[0];
                if det.abs() < 1e-14 {
                    continue;
                }
                for sa in [-1.0, 1.0] {
                    for sb in [-1.0, 1.0] {
                        let (ra, rb) = (sa * FRAC_PI_2, sb * FRAC_PI_2);
                        let y = vec![(ra * b[1] - rb * a[1]) / det, (a[0] * rb - b[0] * ra) / det];
                        if roots.iter().all(|(g, _)| dot(g, &y).abs() <= FRAC_PI_2 + 1e-12) {
                            verts.push(y);
                        }
                    }
                }
            }
        }
        verts
    }
}

/// A finite group of orthogonal maps on 𝔞, stored as matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct WeylGroup {
    pub elements: Vec<Vec<Vector>>,
}

impl WeylGroup {
    /// Closure of the simple reflections.
    pub fn generate(rs: &RootSystem) -> Self {
        let n = rs.rank;
        let id: Vec<Vector> =
            (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
        let gens: Vec<Vec<Vector>> = rs.simple_roots().iter().map(|a| reflection(a)).collect();
        let mut elems = vec![id];
        let mut frontier = 0;
        while frontier < elems.len() {
            let g = elems[frontier].clone();
            for s in &gens {
                let h = matmul(s, &g);
                if !elems.iter().any(|e| mat_close(e, &h)) {
                    elems.push(h);
                }
            }
            frontier += 1;
        }
        WeylGroup { elements: elems }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn apply(&self, w: usize, y: &[f64]) -> Vector {
        self.elements[w].iter().map(|row| dot(row, y)).collect()
    }

    /// Orbit W·Y (with repetitions when Y is singular).
    pub fn orbit(&self, y: &[f64]) -> Vec<Vector> {
        (0..self.order()).map(|w| self.apply(w, y)).collect()
    }
}

fn reflection(a: &[f64]) -> Vec<Vector> {
    let n = a.len();
    let aa = dot(a, a);
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { 1.0 } else { 0.0 } - 2.0 * a[i] * a[j] / aa)
                .collect()
        })
        .collect()
}

fn matmul(a: &[Vector], b: &[Vector]) -> Vec<Vector> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

fn mat_close(a: &[Vector], b: &[Vector]) -> bool {
    a.iter().zip(b).all(|(r, s)| r.iter().zip(s).all(|(x, y)| (x - y).abs() < 1e-12))
}

/// λ ∈ 𝔞*_ℂ; the unitary principal series sits at λ = iν.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralParam {
    pub lambda: Vec<Complex64>,
}

impl SpectralParam {
    pub fn imaginary(nu: &[f64]) -> Self {
        SpectralParam { lambda: nu.iter().map(|&v| Complex64::new(0.0, v)).collect() }
    }

    /// ν = Im λ.
    pub fn nu(&self) -> Vector {
        self.lambda.iter().map(|l| l.im).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.lambda.iter().all(|l| l.re.is_finite() && l.im.is_finite())
    }

    /// ν in the closed dominant chamber.
    pub fn is_dominant(&self, rs: &RootSystem) -> bool {
        let nu = self.nu();
        rs.simple_roots().iter().all(|a| dot(a, &nu) >= 0.0)
    }
}

/// True iff |α(Y)| < π/2 for every root.
pub fn in_omega(rs: &RootSystem, y: &[f64]) -> bool {
    rs.positive_roots.iter().all(|(a, _)| dot(a, y).abs() < FRAC_PI_2)
}

/// Representative of W·Y in the closed dominant chamber.
pub fn dominant(rs: &RootSystem, wg: &WeylGroup, y: &[f64]) -> Vector {
    let simple = rs.simple_roots();
    wg.orbit(y)
        .into_iter()
        .find(|v| simple.iter().all(|a| dot(a, v) >= -1e-13))
        .expect("every orbit meets the dominant chamber")
}

/// Z ∈ conv(W·Y), decided through the dominance order. `slack` loosens
/// the comparison for floating-point inputs.
pub fn in_conv_weyl_orbit_with_slack(
    rs: &RootSystem,
    wg: &WeylGroup,
    z: &[f64],
    y: &[f64],
    slack: f64,
) -> bool {
    let zp = dominant(rs, wg, z);
    let yp = dominant(rs, wg, y);
    let d: Vector = yp.iter().zip(&zp).map(|(a, b)| a - b).collect();
    let simple = rs.simple_roots();
    match rs.rank {
        1 => d[0] / simple[0][0] >= -slack,
        2 => {
            let (a, b) = (&simple[0], &simple[1]);
            let det = a[0] * b[1] - a[1] * b[0];
            let ca = (d[0] * b[1] - d[1] * b[0]) / det;
            let cb = (a[0] * d[1] - a[1] * d[0]) / det;
            ca >= -slack && cb >= -slack
        }
        _ => unreachable!("rank above two is not supported"),
    }
}

pub fn in_conv_weyl_orbit(rs: &RootSystem, wg: &WeylGroup, z: &[f64], y: &[f64]) -> bool {
    in_conv_weyl_orbit_with_slack(rs, wg, z, y, 1e-12)
}

/// ω(ν, Y) = |W|⁻¹ Σ_w e^{2ν(wY)}.
pub fn omega_weight(wg: &WeylGroup, nu: &[f64], y: &[f64]) -> f64 {
    let s: f64 = wg.orbit(y).iter().map(|wy| (2.0 * dot(nu, wy)).exp()).sum();
    s / wg.order() as f64
}

/// sup of ω(ν, ·) over the closure of Ω, evaluated at the vertices.
pub fn omega_sup(rs: &RootSystem, wg: &WeylGroup, nu: &[f64]) -> f64 {
    rs.omega_vertices().iter().map(|v| omega_weight(wg, nu, v)).fold(1.0, f64::max)
}

/// Which concrete space is being modelled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpaceKind {
    /// Real hyperbolic space Hⁿ.
    Hyperbolic(u32),
    /// Rank-one Jacobi model with multiplicities (m_α, m_2α).
    Jacobi(u32, u32),
    /// H³ = SL(2,ℂ)/SU(2).
    ComplexA1,
}

impl fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceKind::Hyperbolic(n) => write!(f, "hyperbolic({n})"),
            SpaceKind::Jacobi(a, b) => write!(f, "jacobi({a},{b})"),
            SpaceKind::ComplexA1 => write!(f, "complex_a1"),
        }
    }
}

impl std::str::FromStr for SpaceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Config(format!("cannot parse space `{s}`"));
        if s == "complex_a1" || s == "H3C" {
            return Ok(SpaceKind::ComplexA1);
        }
        let args = |p: &str| -> Result<Vec<u32>> {
            let inner = s.strip_prefix(p).and_then(|r| r.strip_prefix('(')).and_then(|r| r.strip_suffix(')'));
            inner
                .ok_or_else(bad)?
                .split(',')
                .map(|v| v.trim().parse::<u32>().map_err(|_| bad()))
                .collect()
        };
        if s.starts_with("hyperbolic") {
            let a = args("hyperbolic")?;
            if a.len() == 1 {
                return Ok(SpaceKind::Hyperbolic(a[0]));
            }
        } else if s.starts_with("jacobi") {
            let a = args("jacobi")?;
            if a.len() == 2 {
                return Ok(SpaceKind::Jacobi(a[0], a[1]));
            }
        }
        Err(bad())
    }
}

/// A rank-one symmetric space with its measure constants.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceModel {
    pub kind: SpaceKind,
    pub m_alpha: u32,
    pub m_2alpha: u32,
    pub roots: RootSystem,
    pub weyl: WeylGroup,
    /// Constant in front of the radial density.
    pub density_const: f64,
    /// Constant in the spherical inversion formula.
    pub k_space: f64,
    /// Whether `k_space` came from [`crate::transform::calibrate_constants`].
    pub calibrated: bool,
}

/// Instantiate a space model. The inversion constant starts at 1/2π and is
/// replaced by the numerically calibrated value once calibration runs.
pub fn build_space(kind: SpaceKind) -> Result<SpaceModel> {
    let (m1, m2) = match kind {
        SpaceKind::Hyperbolic(n) => {
            if n < 2 {
                return Err(Error::InvalidSpace(format!("hyperbolic({n}) needs n >= 2")));
            }
            (n - 1, 0)
        }
        SpaceKind::Jacobi(a, b) => (a, b),
        SpaceKind::ComplexA1 => (2, 0),
    };
    let roots = RootSystem::rank_one(m1, m2)?;
    let weyl = WeylGroup::generate(&roots);
    Ok(SpaceModel {
        kind,
        m_alpha: m1,
        m_2alpha: m2,
        roots,
        weyl,
        density_const: 1.0,
        k_space: 1.0 / (2.0 * std::f64::consts::PI),
        calibrated: false,
    })
}

impl SpaceModel {
    pub fn m1(&self) -> f64 {
        self.m_alpha as f64
    }

    pub fn m2(&self) -> f64 {
        self.m_2alpha as f64
    }

    /// ρ(H₁).
    pub fn rho(&self) -> f64 {
        self.roots.rho[0]
    }

    pub fn weyl_order(&self) -> usize {
        self.weyl.order()
    }

    /// Radial density δ(t) = c (2 sinh t)^{m_α} (2 sinh 2t)^{m_2α}.
    pub fn density(&self, t: f64) -> f64 {
        let t = t.abs();
        self.density_const
            * (2.0 * t.sinh()).powi(self.m_alpha as i32)
            * (2.0 * (2.0 * t).sinh()).powi(self.m_2alpha as i32)
    }

    /// Dimension of the space.
    pub fn dim(&self) -> u32 {
        1 + self.m_alpha + self.m_2alpha
    }

    /// Half-width of Ω in the H₁ coordinate.
    pub fn omega_halfwidth(&self) -> f64 {
        if self.m_2alpha > 0 {
            FRAC_PI_2 / 2.0
        } else {
            FRAC_PI_2
        }
    }

    /// Closed-form ω(iν) = sup over Ω.
    pub fn omega(&self, nu: f64) -> f64 {
        (2.0 * nu * self.omega_halfwidth()).cosh()
    }

    /// Radial Laplacian coefficient m_α coth t + 2 m_2α coth 2t.
    pub fn drift(&self, t: f64) -> f64 {
        self.m1() / t.tanh() + 2.0 * self.m2() / (2.0 * t).tanh()
    }

    pub fn name(&self) -> String {
        self.kind.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rho_values() {
        assert_eq!(build_space(SpaceKind::Hyperbolic(3)).unwrap().rho(), 1.0);
        assert_eq!(build_space(SpaceKind::Hyperbolic(2)).unwrap().rho(), 0.5);
        assert_eq!(build_space(SpaceKind::Jacobi(3, 2)).unwrap().rho(), 3.5);
        assert_eq!(build_space(SpaceKind::ComplexA1).unwrap().rho(), 1.0);
        assert!(build_space(SpaceKind::Hyperbolic(1)).is_err());
        assert!(build_space(SpaceKind::Jacobi(0, 1)).is_err());
    }

    #[test]
    fn omega_membership() {
        let a = RootSystem::rank_one(1, 0).unwrap();
        assert!(in_omega(&a, &[1.5]));
        assert!(!in_omega(&a, &[1.6]));
        let bc = RootSystem::rank_one(2, 1).unwrap();
        assert!(!in_omega(&bc, &[0.8]));
        assert!(in_omega(&bc, &[0.7]));
    }

    #[test]
    fn conv_orbit_rank_one() {
        let rs = RootSystem::rank_one(1, 0).unwrap();
        let wg = WeylGroup::generate(&rs);
        assert_eq!(wg.order(), 2);
        assert!(in_conv_weyl_orbit(&rs, &wg, &[0.3], &[0.5]));
        assert!(in_conv_weyl_orbit(&rs, &wg, &[0.5], &[0.5]));
        assert!(!in_conv_weyl_orbit(&rs, &wg, &[-0.6], &[0.5]));
    }

    #[test]
    fn omega_weight_values() {
        let rs = RootSystem::rank_one(1, 0).unwrap();
        let wg = WeylGroup::generate(&rs);
        assert_eq!(omega_weight(&wg, &[2.3], &[0.0]), 1.0);
        let want = (1f64.exp() + (-1f64).exp()) / 2.0;
        assert!((omega_weight(&wg, &[1.0], &[0.5]) - want).abs() < 1e-15);
        assert!((omega_sup(&rs, &wg, &[1.0]) - std::f64::consts::PI.cosh()).abs() < 1e-12);
        assert_eq!(omega_sup(&rs, &wg, &[0.0]), 1.0);
        let bc = RootSystem::rank_one(2, 1).unwrap();
        let wb = WeylGroup::generate(&bc);
        let want = (std::f64::consts::PI / 2.0).cosh();
        assert!((omega_sup(&bc, &wb, &[1.0]) - want).abs() < 1e-12);
    }

    #[test]
    fn weyl_groups_permute_roots() {
        for (shape, order) in [(RankTwo::A1xA1, 4), (RankTwo::A2, 6), (RankTwo::B2, 8)] {
            let rs = RootSystem::rank_two(shape, 1, 2).unwrap();
            let wg = WeylGroup::generate(&rs);
            assert_eq!(wg.order(), order, "{shape:?}");
            let roots = rs.roots();
            for w in 0..wg.order() {
                for a in &roots {
                    let wa = wg.apply(w, a);
                    assert!(roots.iter().any(|b| b.iter().zip(&wa).all(|(x, y)| (x - y).abs() < 1e-12)));
                }
            }
            // closure under composition
            for i in 0..wg.order() {
                for j in 0..wg.order() {
                    let p = matmul(&wg.elements[i], &wg.elements[j]);
                    assert!(wg.elements.iter().any(|e| mat_close(e, &p)));
                }
            }
            assert!(rs.inner_product_is_valid());
            let rho = SpectralParam::imaginary(&rs.rho);
            assert!(rho.is_dominant(&rs));
            assert!(rs.simple_roots().iter().all(|a| dot(a, &rs.rho) > 0.0));
        }
    }

    #[test]
    fn space_kind_parsing() {
        assert_eq!("hyperbolic(2)".parse::<SpaceKind>().unwrap(), SpaceKind::Hyperbolic(2));
        assert_eq!("jacobi(3, 2)".parse::<SpaceKind>().unwrap(), SpaceKind::Jacobi(3, 2));
        assert_eq!("complex_a1".parse::<SpaceKind>().unwrap(), SpaceKind::ComplexA1);
        assert!("hyperbolic".parse::<SpaceKind>().is_err());
        assert!("jacobi(1)".parse::<SpaceKind>().is_err());
    }

    /// Brute-force membership: Z is a convex combination of the orbit
    /// points. In the plane, Z lies in the convex hull iff it is in one of
    /// the triangles spanned by orbit points (Carathéodory).
    fn brute_conv(orbit: &[Vector], z: &[f64]) -> bool {
        let n = orbit.len();
        let eps = 1e-12;
        for i in 0..n {
            for j in i..n {
                for k in j..n {
                    let (a, b, c) = (&orbit[i], &orbit[j], &orbit[k]);
                    let (u, v) = ([b[0] - a[0], b[1] - a[1]], [c[0] - a[0], c[1] - a[1]]);
                    let d = [z[0] - a[0], z[1] - a[1]];
                    let det = u[0] * v[1] - u[1] * v[0];
                    if det.abs() < 1e-14 {
                        // degenerate: test the segments
                        for (p, q) in [(a, b), (a, c), (b, c)] {
                            let e = [q[0] - p[0], q[1] - p[1]];
                            let w = [z[0] - p[0], z[1] - p[1]];
                            let ee = e[0] * e[0] + e[1] * e[1];
                            let s = if ee > 0.0 { (w[0] * e[0] + w[1] * e[1]) / ee } else { 0.0 };
                            let s = s.clamp(0.0, 1.0);
                            let r = [w[0] - s * e[0], w[1] - s * e[1]];
                            if (r[0] * r[0] + r[1] * r[1]).sqrt() < eps {
                                return true;
                            }
                        }
                        continue;
                    }
                    let l1 = (d[0] * v[1] - d[1] * v[0]) / det;
                    let l2 = (u[0] * d[1] - u[1] * d[0]) / det;
                    if l1 >= -eps && l2 >= -eps && l1 + l2 <= 1.0 + eps {
                        return true;
                    }
                }
            }
        }
        false
    }

    #[test]
    fn dominance_matches_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for shape in [RankTwo::A1xA1, RankTwo::A2, RankTwo::B2] {
            let rs = RootSystem::rank_two(shape, 1, 1).unwrap();
            let wg = WeylGroup::generate(&rs);
            let mut agree = 0;
            for _ in 0..1000 {
                let y = vec![rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
                let z = vec![rng.gen_range(-1.2..1.2), rng.gen_range(-1.2..1.2)];
                let fast = in_conv_weyl_orbit(&rs, &wg, &z, &y);
                let slow = brute_conv(&wg.orbit(&y), &z);
                assert_eq!(fast, slow, "{shape:?} y={y:?} z={z:?}");
                agree += 1;
            }
            assert_eq!(agree, 1000);
        }
    }

    proptest! {
        #[test]
        fn omega_weight_is_w_invariant(nu in -3.0..3.0f64, y in -1.5..1.5f64) {
            let rs = RootSystem::rank_one(1, 0).unwrap();
            let wg = WeylGroup::generate(&rs);
            prop_assert_eq!(omega_weight(&wg, &[nu], &[y]), omega_weight(&wg, &[nu], &[-y]));
            prop_assert!(omega_sup(&rs, &wg, &[nu]) >= omega_weight(&wg, &[nu], &[y]) * (1.0 - 1e-15));
        }

        #[test]
        fn omega_weight_is_convex(nu in -3.0..3.0f64, a in -1.5..1.5f64, b in -1.5..1.5f64,
                                   c in -1.0..1.0f64, d in -1.0..1.0f64) {
            let rs = RootSystem::rank_two(RankTwo::B2, 1, 1).unwrap();
            let wg = WeylGroup::generate(&rs);
            let n = [nu, 0.5 * nu];
            let mid = omega_weight(&wg, &n, &[(a + c) / 2.0, (b + d) / 2.0]);
            let avg = 0.5 * (omega_weight(&wg, &n, &[a, b]) + omega_weight(&wg, &n, &[c, d]));
            prop_assert!(mid <= avg * (1.0 + 1e-14));
        }

        #[test]
        fn omega_is_w_stable(y0 in -1.0..1.0f64, y1 in -1.0..1.0f64) {
            let rs = RootSystem::rank_two(RankTwo::A2, 1, 1).unwrap();
            let wg = WeylGroup::generate(&rs);
            let y = [y0, y1];
            let inside = in_omega(&rs, &y);
            for wy in wg.orbit(&y) {
                prop_assert_eq!(in_omega(&rs, &wy), inside);
            }
        }
    }
}
