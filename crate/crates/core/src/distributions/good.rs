//! Good (rapidly decreasing) test functions with closed-form calculus.
//!
//! A term is `exp(i Σ βₖxₖ) · P(s) · exp(−|s|²/2)` with `sₖ = (xₖ − cₖ)/wₖ`
//! and `P` a complex polynomial in `s`. Sums of such terms are closed under
//! ∂/∂xₖ, multiplication by xₖ and the Fourier transform
//! `φ̂(k) = ∫ φ(x) e^{−ik·x} dx`, so every operation the theory moves onto
//! the test function is carried out exactly.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::{BornError, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Tail cut-off in units of the width: |s|ⁿ e^{−s²/2} is negligible beyond.
const TAIL_WIDTHS: f64 = 13.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Axis {
    pub center: f64,
    pub width: f64,
    /// Frequency β of the plane-wave factor e^{iβx}.
    pub phase: f64,
}

impl Axis {
    fn new(center: f64, width: f64) -> Result<Self> {
        if !center.is_finite() || !(width > 0.0) || !width.is_finite() {
            return Err(BornError::domain(format!(
                "good function needs a finite center and positive width, got center = {center}, \
                 width = {width}"
            )));
        }
        Ok(Axis {
            center,
            width,
            phase: 0.0,
        })
    }
}

type Monomial<const D: usize> = [u32; D];

#[derive(Debug, Clone, PartialEq)]
struct Poly<const D: usize>(BTreeMap<Monomial<D>, Complex64>);

impl<const D: usize> Poly<D> {
    fn constant(c: Complex64) -> Self {
        let mut map = BTreeMap::new();
        map.insert([0; D], c);
        Poly(map)
    }

    fn add_term(&mut self, m: Monomial<D>, c: Complex64) {
        if c == Complex64::new(0.0, 0.0) {
            return;
        }
        *self.0.entry(m).or_insert(Complex64::new(0.0, 0.0)) += c;
    }

    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&m, &c) in &other.0 {
            out.add_term(m, c);
        }
        out
    }

    fn scale(&self, c: Complex64) -> Self {
        Poly(self.0.iter().map(|(&m, &v)| (m, v * c)).collect())
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = Poly(BTreeMap::new());
        for (ma, &ca) in &self.0 {
            for (mb, &cb) in &other.0 {
                let mut m = [0; D];
                for k in 0..D {
                    m[k] = ma[k] + mb[k];
                }
                out.add_term(m, ca * cb);
            }
        }
        out
    }

    fn times_variable(&self, axis: usize) -> Self {
        Poly(
            self.0
                .iter()
                .map(|(&m, &c)| {
                    let mut m = m;
                    m[axis] += 1;
                    (m, c)
                })
                .collect(),
        )
    }

    fn partial(&self, axis: usize) -> Self {
        let mut out = Poly(BTreeMap::new());
        for (&m, &c) in &self.0 {
            if m[axis] > 0 {
                let mut d = m;
                d[axis] -= 1;
                out.add_term(d, c * m[axis] as f64);
            }
        }
        out
    }

    fn degree(&self, axis: usize) -> u32 {
        self.0.keys().map(|m| m[axis]).max().unwrap_or(0)
    }

    fn total_degree(&self) -> u32 {
        self.0.keys().map(|m| m.iter().sum()).max().unwrap_or(0)
    }

    fn eval(&self, s: &[f64; D]) -> Complex64 {
        let mut deg = [0usize; D];
        for m in self.0.keys() {
            for k in 0..D {
                deg[k] = deg[k].max(m[k] as usize);
            }
        }
        self.eval_powers(s, Powers::new(s, deg).as_ref())
    }

    /// Uses the power table when there is one, `powi` otherwise.
    fn eval_powers(&self, s: &[f64; D], pows: Option<&Powers<D>>) -> Complex64 {
        let mut total = Complex64::new(0.0, 0.0);
        for (m, &c) in &self.0 {
            let mut p = 1.0;
            for k in 0..D {
                p *= match pows {
                    Some(t) => t.0[k][m[k] as usize],
                    None => s[k].powi(m[k] as i32),
                };
            }
            total += c * p;
        }
        total
    }

    fn degrees(&self) -> [usize; D] {
        let mut deg = [0usize; D];
        for k in 0..D {
            deg[k] = self.degree(k) as usize;
        }
        deg
    }
}

/// Highest power kept in a [`Powers`] table.
const MAX_POWER: usize = 31;

/// sₖʲ for j up to the degree needed on each axis (none past `MAX_POWER`).
struct Powers<const D: usize>([[f64; MAX_POWER + 1]; D]);

impl<const D: usize> Powers<D> {
    fn new(s: &[f64; D], deg: [usize; D]) -> Option<Self> {
        if deg.iter().any(|&d| d > MAX_POWER) {
            return None;
        }
        let mut table = [[0.0; MAX_POWER + 1]; D];
        for k in 0..D {
            table[k][0] = 1.0;
            for j in 1..=deg[k] {
                table[k][j] = table[k][j - 1] * s[k];
            }
        }
        Some(Powers(table))
    }
}

/// Coefficients of the probabilists' Hermite polynomial Heₙ, lowest first.
pub(crate) fn hermite_coefficients(n: u32) -> Vec<f64> {
    let mut prev = vec![1.0];
    if n == 0 {
        return prev;
    }
    let mut cur = vec![0.0, 1.0];
    for k in 1..n {
        // He_{k+1} = x·He_k − k·He_{k−1}
        let mut next = vec![0.0; cur.len() + 1];
        for (j, &c) in cur.iter().enumerate() {
            next[j + 1] += c;
        }
        for (j, &c) in prev.iter().enumerate() {
            next[j] -= k as f64 * c;
        }
        prev = cur;
        cur = next;
    }
    cur
}

#[derive(Debug, Clone, PartialEq)]
struct Term<const D: usize> {
    axes: [Axis; D],
    poly: Poly<D>,
}

impl<const D: usize> Term<D> {
    fn envelope(&self, x: &[f64; D]) -> (Complex64, [f64; D]) {
        let mut s = [0.0; D];
        let mut exponent = 0.0;
        let mut phase = 0.0;
        for k in 0..D {
            let a = &self.axes[k];
            s[k] = (x[k] - a.center) / a.width;
            exponent -= 0.5 * s[k] * s[k];
            phase += a.phase * x[k];
        }
        let env = if phase == 0.0 {
            Complex64::new(exponent.exp(), 0.0)
        } else {
            Complex64::from_polar(exponent.exp(), phase)
        };
        (env, s)
    }

    fn derivative(&self, axis: usize) -> Self {
        // d/dx [e^{iβx} P(s) e^{−s²/2}] = e^{iβx} e^{−s²/2} [iβP + (∂ₛP − sP)/w]
        let a = self.axes[axis];
        let d = self
            .poly
            .partial(axis)
            .add(&self.poly.times_variable(axis).scale(Complex64::new(-1.0, 0.0)))
            .scale(Complex64::new(1.0 / a.width, 0.0));
        let poly = if a.phase == 0.0 {
            d
        } else {
            d.add(&self.poly.scale(I * a.phase))
        };
        Term {
            axes: self.axes,
            poly,
        }
    }

    fn times_coordinate(&self, axis: usize) -> Self {
        // x = c + w·s
        let a = self.axes[axis];
        let poly = self
            .poly
            .scale(Complex64::new(a.center, 0.0))
            .add(&self.poly.times_variable(axis).scale(Complex64::new(a.width, 0.0)));
        Term {
            axes: self.axes,
            poly,
        }
    }

    fn fourier(&self) -> Self {
        // ∫ sⁿ e^{−s²/2} e^{−iκs} ds = √(2π) (−i)ⁿ Heₙ(κ) e^{−κ²/2}, κ = w(k − β)
        let mut factor = Complex64::new(1.0, 0.0);
        let mut axes = self.axes;
        for k in 0..D {
            let a = self.axes[k];
            factor *= Complex64::from_polar(a.width * (2.0 * PI).sqrt(), a.center * a.phase);
            axes[k] = Axis {
                center: a.phase,
                width: 1.0 / a.width,
                phase: -a.center,
            };
        }
        let mut poly = Poly(BTreeMap::new());
        for (m, &c) in &self.poly.0 {
            let mut image = Poly::constant(c * factor);
            for k in 0..D {
                let n = m[k];
                let he = hermite_coefficients(n);
                let unit = (-I).powu(n);
                let mut single = Poly(BTreeMap::new());
                for (j, &h) in he.iter().enumerate() {
                    let mut mono = [0; D];
                    mono[k] = j as u32;
                    single.add_term(mono, unit * h);
                }
                image = image.mul(&single);
            }
            poly = poly.add(&image);
        }
        Term { axes, poly }
    }

    fn is_real(&self) -> bool {
        self.axes.iter().all(|a| a.phase == 0.0) && self.poly.0.values().all(|c| c.im == 0.0)
    }

    fn extent(&self, axis: usize) -> (f64, f64) {
        let a = self.axes[axis];
        let reach = (TAIL_WIDTHS + 0.5 * self.poly.total_degree() as f64) * a.width;
        (a.center - reach, a.center + reach)
    }
}

/// Family parameters of one factor, kept for reporting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AxisParams {
    pub family: Family,
    pub order: u32,
    pub center: f64,
    pub width: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Gaussian,
    HermiteGaussian,
}

/// A finite sum of polynomial-times-Gaussian terms in D dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct GoodFunction<const D: usize> {
    terms: Vec<Term<D>>,
    params: Vec<AxisParams>,
}

pub type GoodFunction1d = GoodFunction<1>;
pub type GoodFunction3d = GoodFunction<3>;

impl GoodFunction<1> {
    /// exp(−(x − center)²/(2·width²)).
    pub fn gaussian(center: f64, width: f64) -> Result<Self> {
        Self::hermite_gaussian(0, center, width).map(|mut g| {
            g.params[0].family = Family::Gaussian;
            g
        })
    }

    /// Heₙ(s)·exp(−s²/2) with s = (x − center)/width.
    pub fn hermite_gaussian(order: u32, center: f64, width: f64) -> Result<Self> {
        if order > 12 {
            return Err(BornError::domain(format!(
                "hermite_gaussian order must be at most 12, got {order}"
            )));
        }
        let axis = Axis::new(center, width)?;
        let mut poly = Poly(BTreeMap::new());
        for (j, &c) in hermite_coefficients(order).iter().enumerate() {
            poly.add_term([j as u32], Complex64::new(c, 0.0));
        }
        Ok(GoodFunction {
            terms: vec![Term { axes: [axis], poly }],
            params: vec![AxisParams {
                family: Family::HermiteGaussian,
                order,
                center,
                width,
            }],
        })
    }

    pub fn eval1(&self, x: f64) -> Complex64 {
        self.eval(&[x])
    }
}

impl GoodFunction<3> {
    /// φ(x, y, z) = fx(x)·fy(y)·fz(z).
    pub fn product(fx: &GoodFunction1d, fy: &GoodFunction1d, fz: &GoodFunction1d) -> Self {
        let mut terms = Vec::new();
        for tx in &fx.terms {
            for ty in &fy.terms {
                for tz in &fz.terms {
                    let lift = |t: &Term<1>, axis: usize| {
                        Poly(
                            t.poly
                                .0
                                .iter()
                                .map(|(m, &c)| {
                                    let mut mono = [0; 3];
                                    mono[axis] = m[0];
                                    (mono, c)
                                })
                                .collect(),
                        )
                    };
                    let poly = lift(tx, 0).mul(&lift(ty, 1)).mul(&lift(tz, 2));
                    terms.push(Term {
                        axes: [tx.axes[0], ty.axes[0], tz.axes[0]],
                        poly,
                    });
                }
            }
        }
        let params = [fx, fy, fz]
            .iter()
            .flat_map(|f| f.params.iter().copied())
            .collect();
        GoodFunction { terms, params }
    }

    /// exp(−r²/(2·width²)).
    pub fn radial_gaussian(width: f64) -> Result<Self> {
        let g = GoodFunction1d::gaussian(0.0, width)?;
        Ok(Self::product(&g, &g, &g))
    }

    /// Largest radius outside which every term is negligible.
    pub fn support_radius(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let c: f64 = t.axes.iter().map(|a| a.center * a.center).sum::<f64>().sqrt();
                let w = t.axes.iter().fold(0.0f64, |m, a| m.max(a.width));
                c + (TAIL_WIDTHS + 0.5 * t.poly.total_degree() as f64) * w
            })
            .fold(0.0, f64::max)
    }

    /// How fast φ can vary over the sphere of radius r, as an effective
    /// exponent rate: on that sphere every term looks like a degree-d
    /// polynomial times exp(κ(r)·g(Ω)) with |g| ≤ 1, where
    /// κ(r) = r·linear + r²·quadratic.
    pub(crate) fn angular_bandwidth(&self) -> AngularBandwidth {
        let mut bw = AngularBandwidth::default();
        for t in &self.terms {
            let drift: f64 = t.axes.iter().map(|a| (a.center / (a.width * a.width)).powi(2)).sum::<f64>().sqrt();
            let wave: f64 = t.axes.iter().map(|a| a.phase * a.phase).sum::<f64>().sqrt();
            let curv = t.axes.iter().map(|a| 1.0 / (a.width * a.width));
            let spread = curv.clone().fold(0.0, f64::max) - curv.fold(f64::INFINITY, f64::min);
            bw.linear = bw.linear.max(drift + wave);
            bw.quadratic = bw.quadratic.max(0.5 * spread);
            bw.degree = bw.degree.max(t.poly.total_degree());
        }
        bw
    }

    /// Gradient (3 functions) and Hessian (xx, yy, zz, xy, xz, yz), each
    /// term-aligned with `self` so they can share envelope evaluations.
    pub(crate) fn derivative_bundle(&self) -> DerivativeBundle {
        let grad: Vec<Self> = (0..3).map(|k| self.derivative(k)).collect();
        let hess = vec![
            grad[0].derivative(0),
            grad[1].derivative(1),
            grad[2].derivative(2),
            grad[0].derivative(1),
            grad[0].derivative(2),
            grad[1].derivative(2),
        ];
        let degrees = (0..self.terms.len())
            .map(|i| {
                grad.iter().chain(&hess).fold([0; 3], |acc, g| {
                    let d = g.terms[i].poly.degrees();
                    std::array::from_fn(|k| acc[k].max(d[k]))
                })
            })
            .collect();
        DerivativeBundle {
            base: self.clone(),
            grad,
            hess,
            degrees,
        }
    }
}

impl<const D: usize> GoodFunction<D> {
    pub fn eval(&self, x: &[f64; D]) -> Complex64 {
        self.terms
            .iter()
            .map(|t| {
                let (env, s) = t.envelope(x);
                env * t.poly.eval(&s)
            })
            .sum()
    }

    pub fn value_at_origin(&self) -> Complex64 {
        self.eval(&[0.0; D])
    }

    pub fn params(&self) -> &[AxisParams] {
        &self.params
    }

    pub fn is_real(&self) -> bool {
        self.terms.iter().all(Term::is_real)
    }

    /// ∂φ/∂x_axis.
    pub fn derivative(&self, axis: usize) -> Self {
        assert!(axis < D, "axis {axis} out of range for dimension {D}");
        GoodFunction {
            terms: self.terms.iter().map(|t| t.derivative(axis)).collect(),
            params: Vec::new(),
        }
    }

    /// k-th derivative along the first axis (the 1-D case).
    pub fn nth_derivative(&self, k: u32) -> Self {
        let mut out = self.clone();
        for _ in 0..k {
            out = out.derivative(0);
        }
        if k > 0 {
            out.params.clear();
        }
        out
    }

    /// x_axis · φ.
    pub fn times_coordinate(&self, axis: usize) -> Self {
        assert!(axis < D, "axis {axis} out of range for dimension {D}");
        GoodFunction {
            terms: self.terms.iter().map(|t| t.times_coordinate(axis)).collect(),
            params: Vec::new(),
        }
    }

    /// −|x|²·φ.
    pub fn times_minus_r2(&self) -> Self {
        let mut out = GoodFunction {
            terms: Vec::new(),
            params: Vec::new(),
        };
        for k in 0..D {
            out = out.add(&self.times_coordinate(k).times_coordinate(k));
        }
        out.scale(Complex64::new(-1.0, 0.0))
    }

    /// Δφ = Σ ∂²φ/∂xₖ².
    pub fn laplacian(&self) -> Self {
        let mut out = GoodFunction {
            terms: Vec::new(),
            params: Vec::new(),
        };
        for k in 0..D {
            out = out.add(&self.derivative(k).derivative(k));
        }
        out
    }

    /// φ̂(k) = ∫ φ(x) e^{−ik·x} dx.
    pub fn fourier(&self) -> Self {
        GoodFunction {
            terms: self.terms.iter().map(Term::fourier).collect(),
            params: Vec::new(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        GoodFunction {
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    axes: t.axes,
                    poly: t.poly.scale(c),
                })
                .collect(),
            params: Vec::new(),
        }
    }

    /// Pointwise sum; terms with identical envelopes are merged.
    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for t in &other.terms {
            match terms.iter_mut().find(|u| u.axes == t.axes) {
                Some(u) => u.poly = u.poly.add(&t.poly),
                None => terms.push(t.clone()),
            }
        }
        GoodFunction {
            terms,
            params: Vec::new(),
        }
    }

    /// Interval along `axis` outside which the function is negligible.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn extent(&self, axis: usize) -> (f64, f64) {
        self.terms
            .iter()
            .map(|t| t.extent(axis))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (a, b)| {
                (lo.min(a), hi.max(b))
            })
    }

    /// Centers of all terms along `axis`.
    pub fn centers(&self, axis: usize) -> Vec<f64> {
        self.terms.iter().map(|t| t.axes[axis].center).collect()
    }

    pub fn max_degree(&self, axis: usize) -> u32 {
        self.terms.iter().map(|t| t.poly.degree(axis)).max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub(crate) struct AngularBandwidth {
    pub linear: f64,
    pub quadratic: f64,
    pub degree: u32,
}

impl AngularBandwidth {
    pub(crate) fn rate(&self, r: f64) -> f64 {
        r * self.linear + r * r * self.quadratic
    }
}

/// φ with its gradient and Hessian, evaluated together so each term's
/// Gaussian envelope is computed once per point.
pub(crate) struct DerivativeBundle {
    base: GoodFunction3d,
    grad: Vec<GoodFunction3d>,
    hess: Vec<GoodFunction3d>,
    /// Per-term, per-axis degree covering every polynomial above.
    degrees: Vec<[usize; 3]>,
}

pub(crate) struct Derivatives {
    pub grad: [Complex64; 3],
    /// Symmetric Hessian, row-major.
    pub hess: [[Complex64; 3]; 3],
}

impl DerivativeBundle {
    pub(crate) fn support_radius(&self) -> f64 {
        self.base.support_radius()
    }

    pub(crate) fn angular_bandwidth(&self) -> AngularBandwidth {
        let mut bw = self.base.angular_bandwidth();
        bw.degree += 2;
        bw
    }

    pub(crate) fn eval(&self, x: &[f64; 3]) -> Derivatives {
        let zero = Complex64::new(0.0, 0.0);
        let mut grad = [zero; 3];
        let mut h = [zero; 6];
        for (i, t) in self.base.terms.iter().enumerate() {
            let (env, s) = t.envelope(x);
            let pows = Powers::new(&s, self.degrees[i]);
            for k in 0..3 {
                grad[k] += env * self.grad[k].terms[i].poly.eval_powers(&s, pows.as_ref());
            }
            for k in 0..6 {
                h[k] += env * self.hess[k].terms[i].poly.eval_powers(&s, pows.as_ref());
            }
        }
        Derivatives {
            grad,
            hess: [[h[0], h[3], h[4]], [h[3], h[1], h[5]], [h[4], h[5], h[2]]],
        }
    }
}
