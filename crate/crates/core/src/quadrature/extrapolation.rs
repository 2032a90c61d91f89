use serde::Serialize;

use crate::error::{BornError, Result};

/// Functional form assumed for v(λ) near λ = 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtrapolationModel {
    /// Rational function of λ², numerator degree ≥ denominator degree.
    #[default]
    EvenRational,
    /// Polynomial in λ² (Neville).
    EvenPolynomial,
    /// Polynomial in λ, for samples with odd powers.
    AllPowersPolynomial,
}

impl ExtrapolationModel {
    pub const ALL: [ExtrapolationModel; 3] = [
        ExtrapolationModel::EvenRational,
        ExtrapolationModel::EvenPolynomial,
        ExtrapolationModel::AllPowersPolynomial,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExtrapolationModel::EvenRational => "even_rational",
            ExtrapolationModel::EvenPolynomial => "even_polynomial",
            ExtrapolationModel::AllPowersPolynomial => "all_powers_polynomial",
        }
    }

    fn abscissa(self, lambda: f64) -> f64 {
        match self {
            ExtrapolationModel::EvenRational | ExtrapolationModel::EvenPolynomial => lambda * lambda,
            ExtrapolationModel::AllPowersPolynomial => lambda,
        }
    }

    fn evaluate_at_zero(self, xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
        match self {
            ExtrapolationModel::EvenRational => rational_at_zero(xs, ys),
            ExtrapolationModel::EvenPolynomial | ExtrapolationModel::AllPowersPolynomial => {
                neville_at_zero(xs, ys)
            }
        }
    }
}

impl std::str::FromStr for ExtrapolationModel {
    type Err = BornError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "even_rational" | "rational" => Ok(ExtrapolationModel::EvenRational),
            "even_polynomial" | "even" | "polynomial" => Ok(ExtrapolationModel::EvenPolynomial),
            "all_powers_polynomial" | "odd" | "all_powers" => {
                Ok(ExtrapolationModel::AllPowersPolynomial)
            }
            other => Err(BornError::domain(format!(
                "unknown extrapolation model '{other}', expected even_rational|even_polynomial|all_powers_polynomial"
            ))),
        }
    }
}

/// Geometric screening ladder λₖ = start·ratioᵏ, k = 0..steps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LambdaLadder {
    pub start: f64,
    pub ratio: f64,
    pub steps: usize,
}

impl Default for LambdaLadder {
    fn default() -> Self {
        LambdaLadder {
            start: 0.4,
            ratio: 0.5,
            steps: 5,
        }
    }
}

impl LambdaLadder {
    pub fn new(start: f64, ratio: f64, steps: usize) -> Result<Self> {
        let ladder = LambdaLadder { start, ratio, steps };
        ladder.validate()?;
        Ok(ladder)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.start > 0.0) || !self.start.is_finite() {
            return Err(BornError::IllConditioned(format!(
                "lambda ladder must start at a positive value, got {}",
                self.start
            )));
        }
        if !(self.ratio > 0.0 && self.ratio <= 0.5) {
            return Err(BornError::IllConditioned(format!(
                "lambda ladder ratio must lie in (0, 1/2], got {}",
                self.ratio
            )));
        }
        if self.steps < 3 {
            return Err(BornError::IllConditioned(format!(
                "lambda ladder needs at least 3 rungs, got {}",
                self.steps
            )));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.steps)
            .map(|k| self.start * self.ratio.powi(k as i32))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtrapolationReport {
    /// (λ, value) pairs, λ strictly decreasing.
    pub samples: Vec<(f64, f64)>,
    pub extrapolated: f64,
    /// Total degree of the fitted model (number of samples − 1).
    pub order_used: usize,
    /// Difference of the last two tableau levels plus propagated sample error.
    pub est_err: f64,
    pub model: ExtrapolationModel,
}

fn validate_samples(samples: &[(f64, f64)]) -> Result<()> {
    if samples.len() < 3 {
        return Err(BornError::IllConditioned(format!(
            "extrapolation needs at least 3 samples, got {}",
            samples.len()
        )));
    }
    for &(lambda, v) in samples {
        if !(lambda > 0.0) || !lambda.is_finite() || !v.is_finite() {
            return Err(BornError::IllConditioned(format!(
                "sample (lambda = {lambda}, value = {v}) is not usable"
            )));
        }
    }
    for w in samples.windows(2) {
        let (l0, l1) = (w[0].0, w[1].0);
        if l1 >= l0 {
            return Err(BornError::IllConditioned(format!(
                "lambda ladder is degenerate: {l1} does not decrease from {l0}"
            )));
        }
        if l1 / l0 > 0.5 * (1.0 + 1e-12) {
            return Err(BornError::IllConditioned(format!(
                "lambda ladder ratio {} exceeds 1/2",
                l1 / l0
            )));
        }
    }
    Ok(())
}

/// Extrapolate v(λ) → v(0) from samples on a geometric ladder.
pub fn extrapolate_to_zero(
    samples: &[(f64, f64)],
    model: ExtrapolationModel,
) -> Result<ExtrapolationReport> {
    extrapolate_to_zero_with_errors(samples, &vec![0.0; samples.len()], model)
}

/// As [`extrapolate_to_zero`], additionally propagating per-sample absolute
/// errors into `est_err` through the sensitivity of the extrapolant.
pub fn extrapolate_to_zero_with_errors(
    samples: &[(f64, f64)],
    sample_errors: &[f64],
    model: ExtrapolationModel,
) -> Result<ExtrapolationReport> {
    validate_samples(samples)?;
    if sample_errors.len() != samples.len() {
        return Err(BornError::domain("one error per sample required"));
    }
    let xs: Vec<f64> = samples.iter().map(|&(l, _)| model.abscissa(l)).collect();
    let ys: Vec<f64> = samples.iter().map(|&(_, v)| v).collect();
    let (value, correction) = model.evaluate_at_zero(&xs, &ys)?;

    let mut propagated = 0.0;
    for (i, &e) in sample_errors.iter().enumerate() {
        if e > 0.0 {
            let mut bumped = ys.clone();
            bumped[i] += e;
            let (v, _) = model.evaluate_at_zero(&xs, &bumped)?;
            propagated += (v - value).abs();
        }
    }
    Ok(ExtrapolationReport {
        samples: samples.to_vec(),
        extrapolated: value,
        order_used: samples.len() - 1,
        est_err: correction.abs() + propagated,
        model,
    })
}

fn nearest_to_zero(xs: &[f64]) -> usize {
    xs.iter()
        .enumerate()
        .min_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .map(|(i, _)| i)
        .unwrap_or(0)
}

/// Neville's tableau evaluated at x = 0; returns (value, last correction).
fn neville_at_zero(xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    let n = xs.len();
    let mut c = ys.to_vec();
    let mut d = ys.to_vec();
    let mut ns = nearest_to_zero(xs) as isize;
    let mut y = ys[ns as usize];
    ns -= 1;
    let mut dy = 0.0;
    for m in 1..n {
        for i in 0..n - m {
            let ho = xs[i];
            let hp = xs[i + m];
            let w = c[i + 1] - d[i];
            let den = ho - hp;
            if den == 0.0 {
                return Err(BornError::IllConditioned("repeated abscissa".into()));
            }
            let den = w / den;
            d[i] = hp * den;
            c[i] = ho * den;
        }
        dy = if 2 * (ns + 1) < (n - m) as isize {
            c[(ns + 1) as usize]
        } else {
            let v = d[ns as usize];
            ns -= 1;
            v
        };
        y += dy;
    }
    Ok((y, dy))
}

/// Rational interpolant P/Q with deg P = ⌈(n−1)/2⌉, deg Q = ⌊(n−1)/2⌋ and
/// Q(0) = 1, evaluated at x = 0. The correction is the change against the
/// interpolant through the n − 1 samples nearest zero.
fn rational_at_zero(xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    if ys.iter().all(|&v| v == ys[0]) {
        return Ok((ys[0], 0.0));
    }
    let full = rational_fit_at_zero(xs, ys)?;
    let nearest = nearest_to_zero(xs);
    // drop the sample farthest from zero
    let far = xs
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let (xr, yr): (Vec<f64>, Vec<f64>) = xs
        .iter()
        .zip(ys)
        .enumerate()
        .filter(|&(i, _)| i != far || i == nearest)
        .map(|(_, (&x, &y))| (x, y))
        .unzip();
    let reduced = if xr.len() == 1 {
        yr[0]
    } else {
        rational_fit_at_zero(&xr, &yr)?
    };
    Ok((full, full - reduced))
}

fn rational_fit_at_zero(xs: &[f64], ys: &[f64]) -> Result<f64> {
    let n = xs.len();
    let num_deg = n / 2;
    let den_deg = (n - 1) / 2;
    debug_assert_eq!(num_deg + den_deg + 1, n);
    let scale = xs.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return Err(BornError::IllConditioned("all abscissae are zero".into()));
    }
    // unknowns: p_0..p_num_deg, q_1..q_den_deg in the scaled variable x/scale
    let mut matrix = vec![vec![0.0; n + 1]; n];
    for (row, (&x, &y)) in matrix.iter_mut().zip(xs.iter().zip(ys)) {
        let t = x / scale;
        let mut pow = 1.0;
        for cell in row.iter_mut().take(num_deg + 1) {
            *cell = pow;
            pow *= t;
        }
        let mut pow = t;
        for j in 0..den_deg {
            row[num_deg + 1 + j] = -y * pow;
            pow *= t;
        }
        row[n] = y;
    }
    match solve_dense(matrix) {
        Ok(solution) => Ok(solution[0]),
        // data already fit by a lower-degree rational: use fewer samples
        Err(_) if n > 2 => {
            let far = xs
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
                .map(|(i, _)| i)
                .unwrap_or(0);
            let (xr, yr): (Vec<f64>, Vec<f64>) = xs
                .iter()
                .zip(ys)
                .enumerate()
                .filter(|&(i, _)| i != far)
                .map(|(_, (&x, &y))| (x, y))
                .unzip();
            rational_fit_at_zero(&xr, &yr)
        }
        Err(e) => Err(e),
    }
}

/// Gaussian elimination with partial pivoting on an augmented n×(n+1) matrix.
fn solve_dense(mut m: Vec<Vec<f64>>) -> Result<Vec<f64>> {
    let n = m.len();
    let norm = m
        .iter()
        .flat_map(|r| r[..n].iter())
        .fold(0.0f64, |a, v| a.max(v.abs()));
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
            .unwrap_or(col);
        if m[pivot][col].abs() <= 1e-14 * norm {
            return Err(BornError::IllConditioned(
                "rational extrapolant is degenerate for these samples".into(),
            ));
        }
        m.swap(col, pivot);
        for row in col + 1..n {
            let factor = m[row][col] / m[col][col];
            if factor != 0.0 {
                for k in col..=n {
                    m[row][k] -= factor * m[col][k];
                }
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| m[row][k] * x[k]).sum();
        x[row] = (m[row][n] - s) / m[row][row];
    }
    Ok(x)
}
