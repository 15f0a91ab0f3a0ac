//! Probability that independent Brownian motions started in the chamber have
//! not collided by time `t`.

use serde::Serialize;
use statrs::function::erf::erf;

use super::{check_time, ln_km_density, vandermonde_h, Constants, DiffusionError, WeylPoint};
use crate::quad::{chamber_integral, domain_around, QuadOptions};
use crate::rng::path_rng;
use rand_distr::{Distribution, StandardNormal};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SurvivalMethod {
    /// Nested adaptive quadrature of the Karlin–McGregor density, `N ≤ 3`.
    Quadrature,
    /// Importance sampling with independent Gaussian endpoints.
    MonteCarlo { samples: usize, seed: u64 },
    /// `h_N(x/√t) / c̄_N`, accurate when `t` dominates the spacings.
    Asymptotic,
    /// Closed-form Pfaffian of pairwise `erf` terms.
    Pfaffian,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SurvivalEstimate {
    pub value: f64,
    /// Quadrature error estimate or Monte Carlo standard error; zero for
    /// closed forms.
    pub error: f64,
}

/// Half-width of the integration box around each starting coordinate, in
/// units of `√t`.
const BOX_SIGMAS: f64 = 10.0;

pub fn survival(t: f64, x: &WeylPoint, method: SurvivalMethod) -> Result<SurvivalEstimate, DiffusionError> {
    check_time(t)?;
    let n = x.len();
    if n <= 1 {
        return Ok(SurvivalEstimate { value: 1.0, error: 0.0 });
    }
    let xs = x.coords();
    match method {
        SurvivalMethod::Pfaffian => Ok(SurvivalEstimate { value: survival_pfaffian(t, xs), error: 0.0 }),
        SurvivalMethod::Asymptotic => {
            let scaled: Vec<f64> = xs.iter().map(|v| v / t.sqrt()).collect();
            Ok(SurvivalEstimate { value: vandermonde_h(&scaled) / Constants::new(n).c_bar(), error: 0.0 })
        }
        SurvivalMethod::Quadrature => {
            if n > crate::quad::MAX_CHAMBER_DIM {
                return Err(DiffusionError::Unsupported { method: "quadrature", n });
            }
            let sd = t.sqrt();
            let opts = QuadOptions { abs_tol: 1e-10, rel_tol: 1e-10, max_intervals: 4000, initial_width: sd };
            let f = |y: &[f64]| ln_km_density(t, xs, y).exp();
            let e = chamber_integral(&f, n, &domain_around(xs, BOX_SIGMAS * sd), &opts)
                .map_err(|e| DiffusionError::Quadrature(e.to_string()))?;
            Ok(SurvivalEstimate { value: e.value, error: e.error })
        }
        SurvivalMethod::MonteCarlo { samples, seed } => {
            if samples < 2 {
                return Err(DiffusionError::Quadrature("Monte Carlo needs at least two samples".into()));
            }
            Ok(monte_carlo(t, xs, samples, seed))
        }
    }
}

/// Draws `Y_i ~ N(x_i, t)` independently and averages
/// `1{Y ordered} · f_N(t, Y | x) / ∏ φ_t(Y_i − x_i)`.
fn monte_carlo(t: f64, x: &[f64], samples: usize, seed: u64) -> SurvivalEstimate {
    let n = x.len();
    let sd = t.sqrt();
    let mut rng = path_rng(seed, 0);
    let (mut sum, mut sumsq) = (0.0, 0.0);
    let mut y = vec![0.0; n];
    let mut m = nalgebra::DMatrix::<f64>::zeros(n, n);
    for _ in 0..samples {
        for (yi, xi) in y.iter_mut().zip(x) {
            let z: f64 = StandardNormal.sample(&mut rng);
            *yi = xi + sd * z;
        }
        if y.windows(2).any(|w| w[0] >= w[1]) {
            continue;
        }
        // row i divided by its diagonal Gaussian factor
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = (((y[i] - x[i]).powi(2) - (y[i] - x[j]).powi(2)) / (2.0 * t)).exp();
            }
        }
        let w = m.determinant();
        sum += w;
        sumsq += w * w;
    }
    let k = samples as f64;
    let mean = sum / k;
    let var = (sumsq / k - mean * mean).max(0.0) * k / (k - 1.0);
    SurvivalEstimate { value: mean, error: (var / k).sqrt() }
}

/// `Pf[erf((x_j − x_i)/(2√t))]_{i<j}`, bordered by a row of ones when `N`
/// is odd. Accepts raw (possibly unordered) vectors.
pub fn survival_pfaffian(t: f64, x: &[f64]) -> f64 {
    let n = x.len();
    if n <= 1 {
        return 1.0;
    }
    let m = n + n % 2;
    let scale = 1.0 / (2.0 * t.sqrt());
    let mut a = vec![vec![0.0; m]; m];
    for i in 0..m {
        for j in i + 1..m {
            let v = if j < n { erf((x[j] - x[i]) * scale) } else { 1.0 };
            a[i][j] = v;
            a[j][i] = -v;
        }
    }
    pfaffian(a)
}

/// Pfaffian of a skew-symmetric matrix by pivoted elimination.
pub fn pfaffian(mut a: Vec<Vec<f64>>) -> f64 {
    let n = a.len();
    if n % 2 == 1 {
        return 0.0;
    }
    let mut pf = 1.0;
    for k in (0..n).step_by(2) {
        let kp = (k + 1..n).max_by(|&i, &j| a[k][i].abs().total_cmp(&a[k][j].abs())).unwrap();
        if kp != k + 1 {
            a.swap(k + 1, kp);
            for row in a.iter_mut() {
                row.swap(k + 1, kp);
            }
            pf = -pf;
        }
        let piv = a[k][k + 1];
        if piv == 0.0 {
            return 0.0;
        }
        pf *= piv;
        if k + 2 < n {
            let tau: Vec<f64> = (k + 2..n).map(|j| a[k][j] / piv).collect();
            let col: Vec<f64> = (k + 2..n).map(|i| a[i][k + 1]).collect();
            for (ii, i) in (k + 2..n).enumerate() {
                for (jj, j) in (k + 2..n).enumerate() {
                    a[i][j] += tau[ii] * col[jj] - col[ii] * tau[jj];
                }
            }
        }
    }
    pf
}
