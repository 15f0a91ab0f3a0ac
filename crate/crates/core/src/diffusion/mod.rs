//! Noncolliding Brownian motions in the Weyl chamber `x_1 < ⋯ < x_N`.
//!
//! Densities are evaluated in log space internally and exponentiated on the
//! way out; `t^{-N²/2}` and `h_N²` leave the double range quickly.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;
use thiserror::Error;

mod sde;
mod survival;
mod transition;

pub use sde::{simulate_dyson, simulate_inhomogeneous, simulate_paths, SamplePath, SdeOptions, MAX_HALVINGS};
pub use survival::{survival, survival_pfaffian, SurvivalEstimate, SurvivalMethod};
pub use transition::{
    drift_inhomogeneous, drift_with_method, dyson_drift, transition_homogeneous, transition_inhomogeneous, StartPoint,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiffusionError {
    #[error("coordinates must be finite and strictly increasing: {0:?}")]
    NotOrdered(Vec<f64>),
    #[error("time must be positive, got {0}")]
    NonpositiveTime(f64),
    #[error("times must satisfy 0 <= s < t <= T (got s={s}, t={t}, T={horizon})")]
    TimeOrder { s: f64, t: f64, horizon: f64 },
    #[error("the origin is only allowed as a starting point at s = 0")]
    OriginAfterStart,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("{method} survival is not supported for N = {n}")]
    Unsupported { method: &'static str, n: usize },
    #[error("quadrature failed: {0}")]
    Quadrature(String),
    #[error("ordering could not be restored near t = {t} after {halvings} step halvings")]
    StepUnderflow { t: f64, halvings: u32 },
    #[error("need at least one step")]
    NoSteps,
    #[error("origin start requires at least one walker")]
    Empty,
}

/// A point of the open Weyl chamber.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct WeylPoint(Vec<f64>);

impl WeylPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self, DiffusionError> {
        if coords.iter().any(|c| !c.is_finite()) || coords.windows(2).any(|w| w[0] >= w[1]) {
            return Err(DiffusionError::NotOrdered(coords));
        }
        Ok(WeylPoint(coords))
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn scaled(&self, c: f64) -> WeylPoint {
        assert!(c > 0.0);
        WeylPoint(self.0.iter().map(|x| x * c).collect())
    }
}

impl TryFrom<Vec<f64>> for WeylPoint {
    type Error = DiffusionError;
    fn try_from(v: Vec<f64>) -> Result<Self, Self::Error> {
        WeylPoint::new(v)
    }
}

impl From<WeylPoint> for Vec<f64> {
    fn from(p: WeylPoint) -> Self {
        p.0
    }
}

/// `h_N(x) = ∏_{i<j} (x_j − x_i)` on a raw vector (sign included).
pub fn vandermonde_h(x: &[f64]) -> f64 {
    let mut h = 1.0;
    for j in 0..x.len() {
        for i in 0..j {
            h *= x[j] - x[i];
        }
    }
    h
}

/// `ln h_N(x)` for an ordered point.
pub fn ln_vandermonde(x: &[f64]) -> f64 {
    let mut s = 0.0;
    for j in 0..x.len() {
        for i in 0..j {
            s += (x[j] - x[i]).ln();
        }
    }
    s
}

/// Normalizing constants of the from-origin densities and of the
/// small-`x` survival asymptotics, stored as logarithms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    pub n: usize,
    pub ln_c: f64,
    pub ln_c_prime: f64,
    pub ln_c_bar: f64,
}

impl Constants {
    pub fn new(n: usize) -> Self {
        let nf = n as f64;
        let mut sum_half = 0.0;
        let mut sum_full = 0.0;
        for i in 1..=n {
            sum_half += ln_gamma(i as f64 / 2.0);
            sum_full += ln_gamma(i as f64);
        }
        Constants {
            n,
            ln_c: -nf / 2.0 * 2f64.ln() - sum_half,
            ln_c_prime: -nf / 2.0 * (2.0 * PI).ln() - sum_full,
            ln_c_bar: nf / 2.0 * PI.ln() + sum_full - sum_half,
        }
    }

    /// `c_N = 2^{−N/2} / ∏ Γ(i/2)`.
    pub fn c(&self) -> f64 {
        self.ln_c.exp()
    }

    /// `c′_N = (2π)^{−N/2} / ∏ Γ(i)`.
    pub fn c_prime(&self) -> f64 {
        self.ln_c_prime.exp()
    }

    /// `c̄_N = π^{N/2} ∏ Γ(i)/Γ(i/2)`.
    pub fn c_bar(&self) -> f64 {
        self.ln_c_bar.exp()
    }
}

pub(crate) fn check_time(t: f64) -> Result<(), DiffusionError> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(DiffusionError::NonpositiveTime(t))
    }
}

/// `ln` of the Karlin–McGregor density; `-inf` where the determinant is not
/// positive (it can only vanish or round below zero off the open chamber).
pub fn ln_km_density(t: f64, x: &[f64], y: &[f64]) -> f64 {
    let n = x.len();
    let mut shift = 0.0;
    let m = DMatrix::from_fn(n, n, |i, j| -(x[j] - y[i]).powi(2) / (2.0 * t));
    let mut scaled = m.clone();
    for i in 0..n {
        let row_max = m.row(i).max();
        shift += row_max;
        for j in 0..n {
            scaled[(i, j)] = (m[(i, j)] - row_max).exp();
        }
    }
    let det = if n == 0 { 1.0 } else { scaled.determinant() };
    if det <= 0.0 {
        return f64::NEG_INFINITY;
    }
    det.ln() + shift - n as f64 / 2.0 * (2.0 * PI * t).ln()
}

/// `f_N(t, y | x) = det[(2πt)^{−1/2} exp(−(x_j − y_i)²/2t)]`.
pub fn km_density(t: f64, x: &WeylPoint, y: &WeylPoint) -> Result<f64, DiffusionError> {
    check_time(t)?;
    if x.len() != y.len() {
        return Err(DiffusionError::DimensionMismatch(x.len(), y.len()));
    }
    Ok(ln_km_density(t, x.coords(), y.coords()).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::function::gamma::gamma;

    fn wp(v: &[f64]) -> WeylPoint {
        WeylPoint::new(v.to_vec()).unwrap()
    }

    #[test]
    fn vandermonde_examples() {
        assert_eq!(vandermonde_h(&[]), 1.0);
        assert_eq!(vandermonde_h(&[3.0]), 1.0);
        assert_eq!(vandermonde_h(&[0.0, 2.0]), 2.0);
        assert_eq!(vandermonde_h(&[0.0, 1.0, 3.0]), 6.0);
        assert_eq!(vandermonde_h(&[1.0, 0.0, 3.0]), -6.0);
        assert!((ln_vandermonde(&[0.0, 1.0, 3.0]) - 6f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn constants_match_gamma_products() {
        for n in 1..=6usize {
            let k = Constants::new(n);
            let nf = n as f64;
            let (mut half, mut full) = (1.0, 1.0);
            for i in 1..=n {
                half *= gamma(i as f64 / 2.0);
                full *= gamma(i as f64);
            }
            let close = |a: f64, b: f64| (a / b - 1.0).abs() < 1e-12;
            assert!(close(k.c(), 2f64.powf(-nf / 2.0) / half));
            assert!(close(k.c_prime(), (2.0 * PI).powf(-nf / 2.0) / full));
            assert!(close(k.c_bar(), PI.powf(nf / 2.0) * full / half));
        }
        let two = Constants::new(2);
        assert!((two.c() - 1.0 / (2.0 * PI.sqrt())).abs() < 1e-15);
        assert!((two.c_prime() - 1.0 / (2.0 * PI)).abs() < 1e-15);
        assert!((two.c_bar() - PI.sqrt()).abs() < 1e-14);
        assert!((Constants::new(1).c() - (2.0 * PI).powf(-0.5)).abs() < 1e-15);
    }

    #[test]
    fn km_density_examples() {
        let v = km_density(1.0, &wp(&[0.0]), &wp(&[0.0])).unwrap();
        assert!((v - 0.398_942_280_401_432_7).abs() < 1e-15);
        let v = km_density(1.0, &wp(&[0.0, 2.0]), &wp(&[0.0, 2.0])).unwrap();
        let expect = (1.0 - (-4f64).exp()) / (2.0 * PI);
        assert!((v - expect).abs() < 1e-14);
        assert!((expect - 0.15624).abs() < 1e-5);
        assert!(km_density(0.0, &wp(&[0.0]), &wp(&[0.0])).is_err());
        assert!(km_density(1.0, &wp(&[0.0]), &wp(&[0.0, 1.0])).is_err());
    }

    #[test]
    fn km_density_is_symmetric_and_nonnegative() {
        use rand::Rng;
        let mut rng = crate::rng::path_rng(11, 0);
        for _ in 0..20_000 {
            let n = rng.random_range(1..=4usize);
            let t = rng.random_range(0.05..3.0);
            let mut pt = || {
                let mut v: Vec<f64> = (0..n).map(|_| rng.random_range(-3.0..3.0)).collect();
                v.sort_by(f64::total_cmp);
                v
            };
            let (x, y) = (pt(), pt());
            let (Ok(x), Ok(y)) = (WeylPoint::new(x), WeylPoint::new(y)) else { continue };
            let a = km_density(t, &x, &y).unwrap();
            let b = km_density(t, &y, &x).unwrap();
            assert!(a >= 0.0);
            assert!((a - b).abs() <= 1e-9 * a.max(b) + 1e-13, "{a} {b}");
        }
    }

    #[test]
    fn weyl_point_rejects_unordered() {
        assert!(WeylPoint::new(vec![1.0, 1.0]).is_err());
        assert!(WeylPoint::new(vec![0.0, f64::NAN]).is_err());
        assert!(serde_json::from_str::<WeylPoint>("[2.0, 1.0]").is_err());
        assert_eq!(serde_json::from_str::<WeylPoint>("[1.0, 2.0]").unwrap(), wp(&[1.0, 2.0]));
    }
}
