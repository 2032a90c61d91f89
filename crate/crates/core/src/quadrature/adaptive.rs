use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use super::{EndpointSingularity, QuadOptions, QuadResult};
use crate::error::{BornError, Result};

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Values the adaptive rule can integrate: reals, and complex numbers for
/// pairings against complex test functions.
pub(crate) trait QuadValue:
    Copy + std::ops::Add<Output = Self> + std::ops::Sub<Output = Self> + std::ops::Mul<f64, Output = Self>
{
    const ZERO: Self;
    fn magnitude(self) -> f64;
}

impl QuadValue for f64 {
    const ZERO: Self = 0.0;
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    const ZERO: Self = Complex64::new(0.0, 0.0);
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment<V> {
    a: f64,
    b: f64,
    value: V,
    err: f64,
    abs: f64,
}

impl<V> PartialEq for Segment<V> {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl<V> Eq for Segment<V> {}
impl<V> PartialOrd for Segment<V> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<V> Ord for Segment<V> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn gk15<V: QuadValue, F: Fn(f64) -> V>(f: &F, a: f64, b: f64) -> Result<Segment<V>> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut fv1 = [V::ZERO; 7];
    let mut fv2 = [V::ZERO; 7];
    let mut resk = fc * WGK[7];
    let mut resg = fc * WG[3];
    let mut resabs = resk.magnitude();
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        resk = resk + (f1 + f2) * WGK[j];
        resabs += WGK[j] * (f1.magnitude() + f2.magnitude());
        if j % 2 == 1 {
            resg = resg + (f1 + f2) * WG[j / 2];
        }
    }
    if !resk.magnitude().is_finite() {
        return Err(BornError::no_convergence(
            "adaptive quadrature",
            format!("integrand is not finite on [{a}, {b}]"),
        ));
    }
    let mean = resk * 0.5;
    let mut resasc = WGK[7] * (fc - mean).magnitude();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - mean).magnitude() + (fv2[j] - mean).magnitude());
    }
    let h = half.abs();
    let value = resk * half;
    let resabs = resabs * h;
    let resasc = resasc * h;
    let mut err = ((resk - resg) * half).magnitude();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    Ok(Segment {
        a,
        b,
        value,
        err,
        abs: resabs,
    })
}

/// Adaptive GK15 returning the raw value together with (err, abs, nodes).
pub(crate) fn adaptive_generic<V: QuadValue, F: Fn(f64) -> V>(
    f: &F,
    a: f64,
    b: f64,
    opts: &QuadOptions,
) -> Result<(V, f64, f64, usize)> {
    let mut heap = BinaryHeap::new();
    let first = gk15(f, a, b)?;
    let mut nodes = 15;
    heap.push(first);
    // segments too narrow to split
    let mut frozen: Vec<Segment<V>> = Vec::new();
    let mut frozen_err = 0.0;
    let mut subdivisions = 1;
    let (mut value, mut err, mut abs) = (first.value, first.err, first.abs);
    loop {
        let target = opts
            .abs_tol
            .max(opts.rel_tol * value.magnitude())
            // each segment reports at least 50ε·∫|f|; anything near that sum is noise
            .max(64.0 * f64::EPSILON * abs);
        if err <= target {
            break;
        }
        if frozen_err > target || heap.is_empty() {
            return Err(BornError::no_convergence(
                "adaptive quadrature",
                format!("roundoff limit reached on [{a}, {b}]: error {err:e} > target {target:e}"),
            ));
        }
        if subdivisions >= opts.max_subdivisions {
            return Err(BornError::no_convergence(
                "adaptive quadrature",
                format!(
                    "subdivision limit {} reached on [{a}, {b}]: error {err:e} > target {target:e}",
                    opts.max_subdivisions
                ),
            ));
        }
        let worst = heap.pop().expect("heap checked non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        let width = worst.b - worst.a;
        if width <= 64.0 * f64::EPSILON * mid.abs() || mid <= worst.a || mid >= worst.b {
            frozen_err += worst.err;
            frozen.push(worst);
            continue;
        }
        let left = gk15(f, worst.a, mid)?;
        let right = gk15(f, mid, worst.b)?;
        nodes += 30;
        subdivisions += 1;
        value = value + left.value + right.value - worst.value;
        abs += left.abs + right.abs - worst.abs;
        err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
        // resum now and then so the running totals do not drift
        if subdivisions % 64 == 0 {
            (value, err, abs) = sum_segments(heap.iter().chain(frozen.iter()));
        }
    }
    let (value, est_err, abs_integral) = sum_segments(heap.iter().chain(frozen.iter()));
    Ok((value, est_err, abs_integral, nodes))
}

fn sum_segments<'a, V: QuadValue + 'a>(
    segments: impl Iterator<Item = &'a Segment<V>>,
) -> (V, f64, f64) {
    segments.fold((V::ZERO, 0.0, 0.0), |acc, s| {
        (acc.0 + s.value, acc.1 + s.err, acc.2 + s.abs)
    })
}

fn adaptive_core<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, opts: &QuadOptions) -> Result<QuadResult> {
    let (value, est_err, abs_integral, nodes) = adaptive_generic(f, a, b, opts)?;
    Ok(QuadResult {
        value,
        est_err,
        nodes,
        truncation_radius: None,
        abs_integral,
    })
}

/// Complex-valued ∫ₐᵇ f(x) dx on a finite interval (no endpoint transform).
///
/// Returns the value with its absolute error estimate, ∫|f| and the node count.
pub fn integrate_adaptive_complex<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    opts: &QuadOptions,
) -> Result<(Complex64, f64, f64, usize)> {
    opts.validate()?;
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(BornError::domain(format!(
            "finite interval with a < b required, got [{a}, {b}]"
        )));
    }
    adaptive_generic(&f, a, b, opts)
}

/// ∫ₐᵇ f(x) dx to `max(rel_tol·|I|, abs_tol)`.
///
/// Endpoint singularities declared in `opts.singularity` are smoothed by a
/// quadratic change of variable before the adaptive pass.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    opts: &QuadOptions,
) -> Result<QuadResult> {
    opts.validate()?;
    if !a.is_finite() || !b.is_finite() {
        return Err(BornError::domain(format!(
            "finite interval required, got [{a}, {b}]"
        )));
    }
    if a == b {
        return Ok(QuadResult {
            nodes: 0,
            ..QuadResult::exact_zero()
        });
    }
    if a > b {
        return Err(BornError::domain(format!(
            "integration bounds must satisfy a < b, got [{a}, {b}]"
        )));
    }
    let len = b - a;
    match opts.singularity {
        EndpointSingularity::None => adaptive_core(&f, a, b, opts),
        EndpointSingularity::Left => {
            let g = |u: f64| 2.0 * len * u * f(a + len * u * u);
            adaptive_core(&g, 0.0, 1.0, opts)
        }
        EndpointSingularity::Right => {
            let g = |u: f64| 2.0 * len * u * f(b - len * u * u);
            adaptive_core(&g, 0.0, 1.0, opts)
        }
        EndpointSingularity::Both => {
            let half = 0.5 * len;
            let g_left = |u: f64| 2.0 * half * u * f(a + half * u * u);
            let g_right = |u: f64| 2.0 * half * u * f(b - half * u * u);
            let left = adaptive_core(&g_left, 0.0, 1.0, opts)?;
            let right = adaptive_core(&g_right, 0.0, 1.0, opts)?;
            Ok(QuadResult {
                value: left.value + right.value,
                est_err: left.est_err + right.est_err,
                nodes: left.nodes + right.nodes,
                truncation_radius: None,
                abs_integral: left.abs_integral + right.abs_integral,
            })
        }
    }
}

/// ∫ₐ^∞ f(x) dx through the map x = a + t/(1 − t), t ∈ [0, 1).
pub fn integrate_semi_infinite<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    opts: &QuadOptions,
) -> Result<QuadResult> {
    if !a.is_finite() {
        return Err(BornError::domain(format!("finite lower bound required, got {a}")));
    }
    let singular = matches!(
        opts.singularity,
        EndpointSingularity::Left | EndpointSingularity::Both
    );
    let mapped = |t: f64| {
        let s = 1.0 - t;
        if s <= 0.0 {
            return 0.0;
        }
        let x = a + t / s;
        if x.is_infinite() {
            0.0
        } else {
            f(x) / (s * s)
        }
    };
    let inner = opts.with_singularity(if singular {
        EndpointSingularity::Left
    } else {
        EndpointSingularity::None
    });
    integrate_adaptive(mapped, 0.0, 1.0, &inner)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::gauss_legendre;
    use std::f64::consts::PI;

    #[test]
    fn kronrod_rule_degree() {
        // K15 is exact through degree 22, G7 through degree 13.
        for k in 0..=22 {
            let f = |x: f64| x.powi(k);
            let seg = gk15(&f, 0.0, 1.0).unwrap();
            let want = 1.0 / (k as f64 + 1.0);
            assert!((seg.value - want).abs() < 2e-16, "k={k}");
        }
        let g7 = gauss_legendre(7);
        for (j, &x) in g7.nodes.iter().skip(4).enumerate() {
            assert!((x - XGK[5 - 2 * j]).abs() < 1e-15);
        }
        assert!((WGK.iter().sum::<f64>() * 2.0 - WGK[7] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn polynomial_exactness() {
        let r = integrate_adaptive(|x| x * x, 0.0, 1.0, &QuadOptions::new(1e-10)).unwrap();
        assert!((r.value - 1.0 / 3.0).abs() < 1e-15);
        assert!(r.est_err >= 0.0 && r.nodes >= 1);
    }

    #[test]
    fn gamma_two_on_half_line() {
        let r = integrate_semi_infinite(|x| x * (-x).exp(), 0.0, &QuadOptions::new(1e-12)).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12, "{}", r.value);
    }

    #[test]
    fn endpoint_singularities() {
        let opts = QuadOptions::new(1e-12).with_singularity(EndpointSingularity::Left);
        let r = integrate_adaptive(|x| 1.0 / x.sqrt(), 0.0, 1.0, &opts).unwrap();
        assert!((r.value - 2.0).abs() < 1e-12);
        let r = integrate_adaptive(|x| x.ln(), 0.0, 1.0, &opts).unwrap();
        assert!((r.value + 1.0).abs() < 1e-12);
        let opts = QuadOptions::new(1e-12).with_singularity(EndpointSingularity::Both);
        let r = integrate_adaptive(|x| 1.0 / (x * (1.0 - x)).sqrt(), 0.0, 1.0, &opts).unwrap();
        assert!((r.value - PI).abs() < 1e-11, "{}", r.value);
    }

    #[test]
    fn zero_integral_converges_on_roundoff_floor() {
        let r = integrate_adaptive(|x| x.sin(), -3.0, 3.0, &QuadOptions::new(1e-12)).unwrap();
        assert!(r.value.abs() < 1e-14);
    }

    #[test]
    fn reports_non_convergence() {
        let opts = QuadOptions::new(1e-14).with_max_subdivisions(3);
        let err = integrate_adaptive(|x| (50.0 * x).sin().abs(), 0.0, 10.0, &opts).unwrap_err();
        assert!(matches!(err, BornError::NonConvergence { .. }));
    }

    #[test]
    fn rejects_bad_bounds() {
        let o = QuadOptions::new(1e-8);
        assert!(integrate_adaptive(|x| x, 1.0, 0.0, &o).is_err());
        assert!(integrate_adaptive(|x| x, 0.0, f64::INFINITY, &o).is_err());
        assert!(integrate_adaptive(|x| x, 0.0, 1.0, &QuadOptions::new(0.0)).is_err());
        assert!(integrate_adaptive(|_| f64::NAN, 0.0, 1.0, &o).is_err());
    }
}
