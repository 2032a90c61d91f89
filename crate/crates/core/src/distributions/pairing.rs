//! Pairings ⟨f, φ⟩ = ∫ f·φ of slow-growth functions against good functions.
//!
//! R¹ pairings run adaptive Gauss–Kronrod over the effective support of φ,
//! split at the breakpoints of f. R³ pairings use a radial adaptive rule on
//! [0, R] composed with a fixed angular product grid: Gauss–Legendre in cos θ
//! and the periodic trapezoid rule in the azimuth.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::good::{AngularBandwidth, GoodFunction, GoodFunction1d, GoodFunction3d};
use super::slow::{SlowDomain, SlowGrowthFunction};
use crate::quadrature::{gauss_legendre, integrate_adaptive_complex, QuadOptions};
use crate::{BornError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PairingMeaning {
    /// ⟨f, φ⟩.
    Direct,
    /// ⟨f⁽ᵏ⁾, φ⟩ = (−1)ᵏ⟨f, φ⁽ᵏ⁾⟩.
    Derivative,
    /// ⟨f̂, φ⟩ = ⟨f, φ̂⟩.
    Fourier,
    /// ⟨Δf, φ⟩ with only the radial part of Δφ kept.
    Laplacian,
    /// One side of ⟨(Δf)^, φ⟩ = ⟨−q² f̂, φ⟩.
    FourierLaplacian,
}

/// A pairing value. Complex pairings carry the imaginary part separately.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairingReport {
    pub value: f64,
    pub imag: f64,
    pub est_err: f64,
    /// Quadrature estimate of ∫|f·φ|, the scale for relative comparisons.
    pub abs_integral: f64,
    pub nodes: usize,
    pub meaning: PairingMeaning,
}

impl PairingReport {
    pub fn complex(&self) -> Complex64 {
        Complex64::new(self.value, self.imag)
    }

    fn from_parts(v: Complex64, est_err: f64, abs_integral: f64, nodes: usize, meaning: PairingMeaning) -> Self {
        PairingReport {
            value: v.re,
            imag: v.im,
            est_err,
            abs_integral,
            nodes,
            meaning,
        }
    }

    fn scaled(self, c: f64, meaning: PairingMeaning) -> Self {
        PairingReport {
            value: c * self.value,
            imag: c * self.imag,
            est_err: c.abs() * self.est_err,
            abs_integral: c.abs() * self.abs_integral,
            meaning,
            ..self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairingOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Gauss–Legendre nodes in cos θ.
    pub polar_nodes: usize,
    /// Trapezoid nodes in the azimuth.
    pub azimuth_nodes: usize,
    /// Also evaluate the angular parts of the Laplacian and require them to vanish.
    pub strict: bool,
    pub angular_tol: f64,
}

impl Default for PairingOptions {
    fn default() -> Self {
        PairingOptions {
            rel_tol: 1e-12,
            abs_tol: 1e-14,
            polar_nodes: 48,
            azimuth_nodes: 96,
            strict: false,
            angular_tol: 1e-9,
        }
    }
}

impl PairingOptions {
    fn quad(&self) -> QuadOptions {
        QuadOptions::new(self.rel_tol).with_abs_tol(self.abs_tol)
    }
}

/// Something a slow-growth function can be paired with.
pub trait Pairable {
    fn pair_with(&self, f: &SlowGrowthFunction, opts: &PairingOptions) -> Result<PairingReport>;
}

impl Pairable for GoodFunction1d {
    fn pair_with(&self, f: &SlowGrowthFunction, opts: &PairingOptions) -> Result<PairingReport> {
        if f.domain() != SlowDomain::Line {
            return Err(BornError::domain(format!(
                "'{}' lives on R³ but the test function is one-dimensional",
                f.name()
            )));
        }
        integrate_line(|x| f.eval(x) * self.eval1(x), self, f.breakpoints(), opts)
    }
}

impl Pairable for GoodFunction3d {
    fn pair_with(&self, f: &SlowGrowthFunction, opts: &PairingOptions) -> Result<PairingReport> {
        let ladder = AngularLadder::new(opts, self.angular_bandwidth())?;
        radial_pairing(f, self.support_radius(), &ladder, opts, |x, _, _| self.eval(x))
    }
}

/// ⟨f, φ⟩ = ∫ f·φ.
pub fn pair<G: Pairable>(f: &SlowGrowthFunction, phi: &G, opts: &PairingOptions) -> Result<PairingReport> {
    phi.pair_with(f, opts)
}

/// ∫ a·φ dx for two good functions on the line.
pub fn pair_good(a: &GoodFunction1d, phi: &GoodFunction1d, opts: &PairingOptions) -> Result<PairingReport> {
    let sum = a.add(phi);
    integrate_line(|x| a.eval1(x) * phi.eval1(x), &sum, &[], opts)
}

/// ⟨f⁽ᵏ⁾, φ⟩ = (−1)ᵏ⟨f, φ⁽ᵏ⁾⟩, meaningful even where f is not differentiable.
pub fn pair_derivative(
    f: &SlowGrowthFunction,
    phi: &GoodFunction1d,
    order: u32,
    opts: &PairingOptions,
) -> Result<PairingReport> {
    if order == 0 {
        return Err(BornError::domain("derivative order must be at least 1"));
    }
    let sign = if order % 2 == 0 { 1.0 } else { -1.0 };
    Ok(pair(f, &phi.nth_derivative(order), opts)?.scaled(sign, PairingMeaning::Derivative))
}

/// ⟨f̂, φ⟩, defined as ⟨f, φ̂⟩ with φ̂(q) = ∫ φ(x) e^{−iqx} dx.
pub fn pair_fourier<const D: usize>(
    f: &SlowGrowthFunction,
    phi: &GoodFunction<D>,
    opts: &PairingOptions,
) -> Result<PairingReport>
where
    GoodFunction<D>: Pairable,
{
    let report = pair(f, &phi.fourier(), opts)?;
    Ok(PairingReport {
        meaning: PairingMeaning::Fourier,
        ..report
    })
}

/// ⟨Δf, φ⟩ = ⟨f, Δφ⟩ for radial f, keeping only the radial part
/// (1/r²)∂ᵣ(r²∂ᵣφ) of Δφ. The angular parts integrate to zero over the
/// sphere; in strict mode they are evaluated and required to stay below
/// `opts.angular_tol`.
pub fn pair_laplacian_radial(
    f: &SlowGrowthFunction,
    phi: &GoodFunction3d,
    opts: &PairingOptions,
) -> Result<PairingReport> {
    if opts.strict {
        let (b, c) = angular_terms(f, phi, opts)?;
        for (label, t) in [("B", b), ("C", c)] {
            if t.complex().norm() > opts.angular_tol {
                return Err(BornError::StrictCheck(format!(
                    "angular Laplacian term {label} pairs to {} (tolerance {})",
                    t.complex().norm(),
                    opts.angular_tol
                )));
            }
        }
    }
    let bundle = phi.derivative_bundle();
    let ladder = AngularLadder::new(opts, bundle.angular_bandwidth())?;
    let report = radial_pairing(f, bundle.support_radius(), &ladder, opts, |x, dir, r| {
        let d = bundle.eval(x);
        let er = dir.e_r;
        quad_form(&d.hess, &er, &er) + dot(&d.grad, &er) * (2.0 / r)
    })?;
    Ok(PairingReport {
        meaning: PairingMeaning::Laplacian,
        ..report
    })
}

/// Pairings of f with the polar (B) and azimuthal (C) parts of Δφ.
pub fn angular_terms(
    f: &SlowGrowthFunction,
    phi: &GoodFunction3d,
    opts: &PairingOptions,
) -> Result<(PairingReport, PairingReport)> {
    let bundle = phi.derivative_bundle();
    let ladder = AngularLadder::new(opts, bundle.angular_bandwidth())?;
    // B = e_θᵀHe_θ − (e_r·∇φ)/r + cot θ (e_θ·∇φ)/r
    let b = radial_pairing(f, bundle.support_radius(), &ladder, opts, |x, dir, r| {
        let d = bundle.eval(x);
        quad_form(&d.hess, &dir.e_theta, &dir.e_theta) - dot(&d.grad, &dir.e_r) / r
            + dot(&d.grad, &dir.e_theta) * (dir.cot_theta / r)
    })?;
    // C = e_φᵀHe_φ − (e_r·∇φ)/r − cot θ (e_θ·∇φ)/r
    let c = radial_pairing(f, bundle.support_radius(), &ladder, opts, |x, dir, r| {
        let d = bundle.eval(x);
        quad_form(&d.hess, &dir.e_phi, &dir.e_phi)
            - dot(&d.grad, &dir.e_r) / r
            - dot(&d.grad, &dir.e_theta) * (dir.cot_theta / r)
    })?;
    Ok((
        PairingReport {
            meaning: PairingMeaning::Laplacian,
            ..b
        },
        PairingReport {
            meaning: PairingMeaning::Laplacian,
            ..c
        },
    ))
}

/// Both sides of ⟨(Δf)^, φ⟩ = ⟨−q² f̂, φ⟩, moved onto the test function:
/// lhs = ⟨f, Δ(φ̂)⟩ and rhs = ⟨f, (−|x|²φ)^⟩.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FourierLaplacianReport {
    pub lhs: PairingReport,
    pub rhs: PairingReport,
    pub gap: f64,
}

pub fn verify_fourier_laplacian<const D: usize>(
    f: &SlowGrowthFunction,
    phi: &GoodFunction<D>,
    opts: &PairingOptions,
) -> Result<FourierLaplacianReport>
where
    GoodFunction<D>: Pairable,
{
    let lhs = pair(f, &phi.fourier().laplacian(), opts)?;
    let rhs = pair(f, &phi.times_minus_r2().fourier(), opts)?;
    let tag = |r: PairingReport| PairingReport {
        meaning: PairingMeaning::FourierLaplacian,
        ..r
    };
    Ok(FourierLaplacianReport {
        lhs: tag(lhs),
        rhs: tag(rhs),
        gap: (lhs.complex() - rhs.complex()).norm(),
    })
}

fn integrate_line<F: Fn(f64) -> Complex64>(
    integrand: F,
    support: &GoodFunction1d,
    breakpoints: &[f64],
    opts: &PairingOptions,
) -> Result<PairingReport> {
    let (lo, hi) = support.extent(0);
    let mut cuts = vec![lo, hi];
    cuts.extend(breakpoints.iter().copied().filter(|&b| b > lo && b < hi));
    cuts.extend(support.centers(0).into_iter().filter(|&c| c > lo && c < hi));
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let quad = opts.quad();
    let mut total = Complex64::new(0.0, 0.0);
    let (mut err, mut abs, mut nodes) = (0.0, 0.0, 0);
    for w in cuts.windows(2) {
        let (v, e, a, n) = integrate_adaptive_complex(&integrand, w[0], w[1], &quad)?;
        total += v;
        err += e;
        abs += a;
        nodes += n;
    }
    Ok(PairingReport::from_parts(total, err, abs, nodes, PairingMeaning::Direct))
}

/// Local frame at one angular node.
pub(crate) struct Direction {
    pub e_r: [f64; 3],
    pub e_theta: [f64; 3],
    pub e_phi: [f64; 3],
    pub cot_theta: f64,
    pub weight: f64,
}

pub(crate) struct AngularGrid {
    dirs: Vec<Direction>,
}

impl AngularGrid {
    pub(crate) fn new(opts: &PairingOptions) -> Result<Self> {
        check_grid(opts)?;
        Ok(Self::with_nodes(opts.polar_nodes, opts.azimuth_nodes))
    }

    fn with_nodes(polar: usize, azimuth: usize) -> Self {
        let rule = gauss_legendre(polar);
        let h = 2.0 * PI / azimuth as f64;
        let mut dirs = Vec::with_capacity(polar * azimuth);
        for (&u, &wu) in rule.nodes.iter().zip(&rule.weights) {
            let sin_t = (1.0 - u * u).sqrt();
            for k in 0..azimuth {
                let (sp, cp) = (k as f64 * h).sin_cos();
                dirs.push(Direction {
                    e_r: [sin_t * cp, sin_t * sp, u],
                    e_theta: [u * cp, u * sp, -sin_t],
                    e_phi: [-sp, cp, 0.0],
                    cot_theta: u / sin_t,
                    weight: wu * h,
                });
            }
        }
        AngularGrid { dirs }
    }

    /// Sphere average weights sum to 4π.
    pub(crate) fn integrate<F: Fn(&Direction) -> Complex64>(&self, f: F) -> Complex64 {
        self.dirs.iter().map(|d| f(d) * d.weight).sum()
    }
}

fn check_grid(opts: &PairingOptions) -> Result<()> {
    if opts.polar_nodes < 2 || opts.azimuth_nodes < 2 {
        return Err(BornError::domain(format!(
            "angular grid needs at least 2x2 nodes, got {}x{}",
            opts.polar_nodes, opts.azimuth_nodes
        )));
    }
    Ok(())
}

/// Angular grids of increasing size, the largest being the configured one.
/// Near the origin a test function barely varies over the sphere, so the
/// radial integrand picks the smallest grid that resolves it at each r.
pub(crate) struct AngularLadder {
    grids: Vec<(usize, AngularGrid)>,
    bandwidth: AngularBandwidth,
}

impl AngularLadder {
    pub(crate) fn new(opts: &PairingOptions, bandwidth: AngularBandwidth) -> Result<Self> {
        check_grid(opts)?;
        let mut grids: Vec<(usize, AngularGrid)> = [8usize, 12, 16, 24, 32, 48, 64, 96]
            .into_iter()
            .filter(|&n| n < opts.polar_nodes)
            .map(|n| {
                let az = (n * opts.azimuth_nodes).div_ceil(opts.polar_nodes).max(2);
                (n, AngularGrid::with_nodes(n, az))
            })
            .collect();
        grids.push((opts.polar_nodes, AngularGrid::new(opts)?));
        Ok(AngularLadder { grids, bandwidth })
    }

    /// Gauss–Legendre with n nodes is exact to degree 2n − 1 in cos θ. The
    /// Chebyshev coefficients of exp(κu) are I_j(κ), which drop below
    /// 1e-16·I₀(κ) before j = 1.6κ + 24 for every κ; the trapezoid in the
    /// azimuth with 2n nodes sees the same coefficients.
    fn at(&self, r: f64) -> &AngularGrid {
        let need = 0.8 * self.bandwidth.rate(r) + 0.5 * self.bandwidth.degree as f64 + 12.0;
        let (_, grid) = self
            .grids
            .iter()
            .find(|(n, _)| *n as f64 >= need)
            .unwrap_or_else(|| self.grids.last().expect("ladder holds the configured grid"));
        grid
    }
}

/// ∫₀^R r² f(r) ∮ g(rΩ) dΩ dr for radial f.
fn radial_pairing<G>(
    f: &SlowGrowthFunction,
    radius: f64,
    ladder: &AngularLadder,
    opts: &PairingOptions,
    g: G,
) -> Result<PairingReport>
where
    G: Fn(&[f64; 3], &Direction, f64) -> Complex64,
{
    if f.domain() != SlowDomain::RadialR3 {
        return Err(BornError::domain(format!(
            "'{}' is a function on the line but the test function lives on R³",
            f.name()
        )));
    }
    let integrand = |r: f64| {
        let grid = ladder.at(r);
        let shell = grid.integrate(|d| {
            let x = [r * d.e_r[0], r * d.e_r[1], r * d.e_r[2]];
            g(&x, d, r)
        });
        shell * (r * r * f.eval(r))
    };
    let evaluations = std::cell::Cell::new(0usize);
    let counted = |r: f64| {
        evaluations.set(evaluations.get() + ladder.at(r).dirs.len());
        integrand(r)
    };
    let (v, e, a, _) = integrate_adaptive_complex(counted, 0.0, radius, &opts.quad())?;
    Ok(PairingReport::from_parts(
        v,
        e,
        a,
        evaluations.get(),
        PairingMeaning::Direct,
    ))
}

fn dot(v: &[Complex64; 3], u: &[f64; 3]) -> Complex64 {
    v[0] * u[0] + v[1] * u[1] + v[2] * u[2]
}

fn quad_form(h: &[[Complex64; 3]; 3], a: &[f64; 3], b: &[f64; 3]) -> Complex64 {
    let mut s = Complex64::new(0.0, 0.0);
    for i in 0..3 {
        for j in 0..3 {
            s += h[i][j] * (a[i] * b[j]);
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g01() -> GoodFunction1d {
        GoodFunction1d::gaussian(0.0, 1.0).unwrap()
    }

    fn opts() -> PairingOptions {
        PairingOptions::default()
    }

    #[test]
    fn pair_examples_on_the_line() {
        let one = pair(&SlowGrowthFunction::one(), &g01(), &opts()).unwrap();
        assert!((one.value - (2.0 * PI).sqrt()).abs() < 1e-12);
        assert_eq!(one.imag, 0.0);
        let half = pair(&SlowGrowthFunction::heaviside(), &g01(), &opts()).unwrap();
        assert!((half.value - (PI / 2.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn pair_example_in_r3() {
        let phi = GoodFunction3d::radial_gaussian(1.0).unwrap();
        let r = pair(&SlowGrowthFunction::inverse_r(), &phi, &opts()).unwrap();
        assert!((r.value - 4.0 * PI).abs() < 1e-10, "{}", r.value);
    }

    /// erf by its all-positive series, fine for moderate x.
    fn erf_oracle(x: f64) -> f64 {
        let mut term = x;
        let mut sum = x;
        for n in 1..200 {
            term *= 2.0 * x * x / (2 * n + 1) as f64;
            sum += term;
        }
        2.0 / PI.sqrt() * (-x * x).exp() * sum
    }

    #[test]
    fn off_center_gaussian_against_closed_form() {
        // E[1/|X|] for X ~ N(c, w²I) is erf(|c|/(√2 w))/|c|
        let (c, w) = ([1.5, -1.0, 2.0], 0.6);
        let g = |k: usize| GoodFunction1d::gaussian(c[k], w).unwrap();
        let phi = GoodFunction3d::product(&g(0), &g(1), &g(2));
        let norm = (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]) as f64;
        let norm = norm.sqrt();
        let exact = (2.0 * PI).powf(1.5) * w * w * w * erf_oracle(norm / (2f64.sqrt() * w)) / norm;
        let r = pair(&SlowGrowthFunction::inverse_r(), &phi, &opts()).unwrap();
        assert!((r.value - exact).abs() < 1e-12 * exact, "{} vs {exact}", r.value);
    }

    #[test]
    fn derivative_examples() {
        let h = SlowGrowthFunction::heaviside();
        let d = pair_derivative(&h, &g01(), 1, &opts()).unwrap();
        assert!((d.value - 1.0).abs() < 1e-12);
        let x = pair_derivative(&SlowGrowthFunction::x(), &g01(), 1, &opts()).unwrap();
        assert!((x.value - (2.0 * PI).sqrt()).abs() < 1e-12);
        let shifted = GoodFunction1d::gaussian(2.0, 1.0).unwrap();
        let d = pair_derivative(&h, &shifted, 1, &opts()).unwrap();
        assert!((d.value - (-2.0f64).exp()).abs() < 1e-12);
        assert!(pair_derivative(&h, &g01(), 0, &opts()).is_err());
    }

    #[test]
    fn second_derivative_of_abs_is_twice_delta() {
        let phi = GoodFunction1d::hermite_gaussian(2, 0.4, 0.8).unwrap();
        let d = pair_derivative(&SlowGrowthFunction::abs(), &phi, 2, &opts()).unwrap();
        let want = 2.0 * phi.value_at_origin().re;
        assert!((d.value - want).abs() < 1e-11);
    }

    #[test]
    fn fourier_examples() {
        let one = pair_fourier(&SlowGrowthFunction::one(), &g01(), &opts()).unwrap();
        assert!((one.value - 2.0 * PI).abs() < 1e-11);
        assert!(one.imag.abs() < 1e-13);
        // Parseval on ordinary functions
        let f = SlowGrowthFunction::from_good(&g01()).unwrap();
        let phi = GoodFunction1d::hermite_gaussian(2, 0.5, 1.2).unwrap();
        let lhs = pair_good(&g01().fourier(), &phi, &opts()).unwrap().complex();
        let rhs = pair_fourier(&f, &phi, &opts()).unwrap().complex();
        assert!((lhs - rhs).norm() < 1e-10 * lhs.norm(), "{lhs} {rhs}");
    }

    #[test]
    fn laplacian_of_inverse_r_examples() {
        for w in [1.0, 2.0] {
            let phi = GoodFunction3d::radial_gaussian(w).unwrap();
            let r = pair_laplacian_radial(&SlowGrowthFunction::inverse_r(), &phi, &opts()).unwrap();
            assert!((r.value + 4.0 * PI).abs() < 1e-9, "w={w}: {}", r.value);
        }
        let phi = GoodFunction3d::radial_gaussian(1.0).unwrap();
        let r = pair_laplacian_radial(&SlowGrowthFunction::one_r3(), &phi, &opts()).unwrap();
        assert!(r.value.abs() < 1e-10, "{}", r.value);
    }

    #[test]
    fn angular_terms_vanish_off_center() {
        let fx = GoodFunction1d::hermite_gaussian(1, 0.5, 0.9).unwrap();
        let fy = GoodFunction1d::gaussian(-0.3, 1.2).unwrap();
        let fz = GoodFunction1d::hermite_gaussian(2, 0.7, 1.0).unwrap();
        let phi = GoodFunction3d::product(&fx, &fy, &fz);
        let (b, c) = angular_terms(&SlowGrowthFunction::inverse_r(), &phi, &opts()).unwrap();
        assert!(b.complex().norm() < 1e-9, "{b:?}");
        assert!(c.complex().norm() < 1e-9, "{c:?}");
        let strict = PairingOptions {
            strict: true,
            ..opts()
        };
        let r = pair_laplacian_radial(&SlowGrowthFunction::inverse_r(), &phi, &strict).unwrap();
        let want = -4.0 * PI * phi.value_at_origin().re;
        assert!((r.value - want).abs() < 1e-7 * want.abs().max(r.abs_integral));
    }

    #[test]
    fn fourier_laplacian_examples() {
        let f = SlowGrowthFunction::from_good(&g01()).unwrap();
        let rep = verify_fourier_laplacian(&f, &g01(), &opts()).unwrap();
        assert!(rep.gap < 1e-10, "{rep:?}");
        let rep = verify_fourier_laplacian(&SlowGrowthFunction::one(), &g01(), &opts()).unwrap();
        assert!(rep.gap < 1e-10, "{rep:?}");
        let phi = GoodFunction3d::radial_gaussian(1.0).unwrap();
        let rep = verify_fourier_laplacian(&SlowGrowthFunction::inverse_r(), &phi, &opts()).unwrap();
        assert!(rep.gap < 1e-8, "{rep:?}");
        // ⟨1/r, Δφ̂⟩ = −4π φ̂(0) = −4π ∫φ = −4π (2π)^{3/2}
        let want = -4.0 * PI * (2.0 * PI).powf(1.5);
        assert!((rep.lhs.value / want - 1.0).abs() < 1e-8, "{}", rep.lhs.value);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let phi = GoodFunction3d::radial_gaussian(1.0).unwrap();
        assert!(pair(&SlowGrowthFunction::one(), &phi, &opts()).is_err());
        assert!(pair(&SlowGrowthFunction::inverse_r(), &g01(), &opts()).is_err());
    }

    #[test]
    fn pairing_is_linear_in_the_test_function() {
        let a = GoodFunction1d::hermite_gaussian(1, 0.3, 0.8).unwrap();
        let b = GoodFunction1d::gaussian(-1.0, 1.5).unwrap();
        let (alpha, beta) = (2.5, -0.75);
        let combo = a
            .scale(Complex64::new(alpha, 0.0))
            .add(&b.scale(Complex64::new(beta, 0.0)));
        for f in [SlowGrowthFunction::heaviside(), SlowGrowthFunction::abs(), SlowGrowthFunction::cos(2.0)] {
            let pa = pair(&f, &a, &opts()).unwrap();
            let pb = pair(&f, &b, &opts()).unwrap();
            let pc = pair(&f, &combo, &opts()).unwrap();
            let gap = (pc.value - alpha * pa.value - beta * pb.value).abs();
            let budget = pc.est_err + alpha.abs() * pa.est_err + beta.abs() * pb.est_err;
            assert!(gap <= budget.max(1e-14), "{}: {gap:e} > {budget:e}", f.name());
        }
    }

    #[test]
    fn angular_grid_integrates_the_sphere() {
        let grid = AngularGrid::new(&opts()).unwrap();
        let area = grid.integrate(|_| Complex64::new(1.0, 0.0)).re;
        assert!((area - 4.0 * PI).abs() < 1e-12);
        let z2 = grid.integrate(|d| Complex64::new(d.e_r[2] * d.e_r[2], 0.0)).re;
        assert!((z2 - 4.0 * PI / 3.0).abs() < 1e-12);
    }
}
