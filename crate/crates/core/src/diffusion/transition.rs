//! Transition densities of the noncolliding processes and the drift of the
//! finite-horizon one.

use serde::{Deserialize, Serialize};

use super::{ln_km_density, ln_vandermonde, survival, survival_pfaffian, Constants, DiffusionError, SurvivalMethod, WeylPoint};

/// Either all particles at the origin or a chamber point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StartPoint {
    Origin(usize),
    Point(WeylPoint),
}

impl StartPoint {
    pub fn dim(&self) -> usize {
        match self {
            StartPoint::Origin(n) => *n,
            StartPoint::Point(p) => p.len(),
        }
    }
}

fn check_times(s: f64, t: f64, horizon: f64) -> Result<(), DiffusionError> {
    if !(0.0 <= s && s < t && t <= horizon) || !horizon.is_finite() {
        return Err(DiffusionError::TimeOrder { s, t, horizon });
    }
    Ok(())
}

fn check_start(s: f64, x: &StartPoint, y: &WeylPoint) -> Result<(), DiffusionError> {
    if matches!(x, StartPoint::Origin(_)) && s != 0.0 {
        return Err(DiffusionError::OriginAfterStart);
    }
    if x.dim() != y.len() {
        return Err(DiffusionError::DimensionMismatch(x.dim(), y.len()));
    }
    Ok(())
}

fn ln_survival(t: f64, x: &[f64]) -> f64 {
    if t == 0.0 {
        0.0
    } else {
        survival_pfaffian(t, x).ln()
    }
}

fn sq_norm(y: &[f64]) -> f64 {
    y.iter().map(|v| v * v).sum()
}

/// Density at `y` at time `t` of the process conditioned to stay in the
/// chamber until `horizon`, given its state at time `s`.
pub fn transition_inhomogeneous(s: f64, x: &StartPoint, t: f64, y: &WeylPoint, horizon: f64) -> Result<f64, DiffusionError> {
    check_times(s, t, horizon)?;
    check_start(s, x, y)?;
    let ys = y.coords();
    let n = ys.len() as f64;
    let ln = match x {
        StartPoint::Origin(_) => {
            Constants::new(ys.len()).ln_c + n * (n - 1.0) / 4.0 * horizon.ln() - n * n / 2.0 * t.ln() - sq_norm(ys) / (2.0 * t)
                + ln_vandermonde(ys)
                + ln_survival(horizon - t, ys)
        }
        StartPoint::Point(xp) => {
            ln_km_density(t - s, xp.coords(), ys) + ln_survival(horizon - t, ys) - ln_survival(horizon - s, xp.coords())
        }
    };
    Ok(ln.exp())
}

/// Density of the `h_N`-transformed (Dyson) process.
pub fn transition_homogeneous(s: f64, x: &StartPoint, t: f64, y: &WeylPoint) -> Result<f64, DiffusionError> {
    check_times(s, t, f64::MAX)?;
    check_start(s, x, y)?;
    let ys = y.coords();
    let n = ys.len() as f64;
    let ln = match x {
        StartPoint::Origin(_) => {
            Constants::new(ys.len()).ln_c_prime - n * n / 2.0 * t.ln() - sq_norm(ys) / (2.0 * t) + 2.0 * ln_vandermonde(ys)
        }
        StartPoint::Point(xp) => ln_km_density(t - s, xp.coords(), ys) + ln_vandermonde(ys) - ln_vandermonde(xp.coords()),
    };
    Ok(ln.exp())
}

/// `Σ_{j≠i} 1/(x_i − x_j)`.
pub fn dyson_drift(x: &[f64]) -> Vec<f64> {
    (0..x.len())
        .map(|i| (0..x.len()).filter(|&j| j != i).map(|j| 1.0 / (x[i] - x[j])).sum())
        .collect()
}

/// `∂_i ln N_N(T − t, x)` by central differences with step
/// `10⁻⁵ max(1, |x|)`, shrunk below a quarter of the smallest gap so the
/// probes stay ordered. Survival is evaluated in closed form.
pub fn drift_inhomogeneous(t: f64, x: &WeylPoint, horizon: f64) -> Result<Vec<f64>, DiffusionError> {
    if t >= horizon || !t.is_finite() || !horizon.is_finite() {
        return Err(DiffusionError::TimeOrder { s: t, t: horizon, horizon });
    }
    Ok(drift_raw(horizon - t, x.coords()))
}

pub(crate) fn fd_step(x: &[f64]) -> f64 {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let min_gap = x.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    (1e-5 * norm.max(1.0)).min(0.25 * min_gap)
}

pub(crate) fn drift_raw(remaining: f64, x: &[f64]) -> Vec<f64> {
    let h = fd_step(x);
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|i| {
            probe[i] = x[i] + h;
            let up = survival_pfaffian(remaining, &probe).ln();
            probe[i] = x[i] - h;
            let down = survival_pfaffian(remaining, &probe).ln();
            probe[i] = x[i];
            (up - down) / (2.0 * h)
        })
        .collect()
}

/// Same finite-difference drift with a caller-chosen survival method.
pub fn drift_with_method(t: f64, x: &WeylPoint, horizon: f64, method: SurvivalMethod) -> Result<Vec<f64>, DiffusionError> {
    if t >= horizon {
        return Err(DiffusionError::TimeOrder { s: t, t: horizon, horizon });
    }
    let h = fd_step(x.coords());
    let mut out = Vec::with_capacity(x.len());
    for i in 0..x.len() {
        let mut p = x.coords().to_vec();
        p[i] += h;
        let up = survival(horizon - t, &WeylPoint::new(p.clone())?, method)?.value.ln();
        p[i] -= 2.0 * h;
        let down = survival(horizon - t, &WeylPoint::new(p)?, method)?.value.ln();
        out.push((up - down) / (2.0 * h));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{chamber_integral, domain_around, QuadOptions};
    use std::f64::consts::PI;

    fn wp(v: &[f64]) -> WeylPoint {
        WeylPoint::new(v.to_vec()).unwrap()
    }

    fn gauss(t: f64, d: f64) -> f64 {
        (-d * d / (2.0 * t)).exp() / (2.0 * PI * t).sqrt()
    }

    #[test]
    fn one_dimension_is_heat_kernel() {
        let y = wp(&[0.7]);
        for x in [StartPoint::Origin(1), StartPoint::Point(wp(&[-0.2]))] {
            let x0 = match &x {
                StartPoint::Origin(_) => 0.0,
                StartPoint::Point(p) => p.coords()[0],
            };
            let g = transition_inhomogeneous(0.0, &x, 0.5, &y, 2.0).unwrap();
            let p = transition_homogeneous(0.0, &x, 0.5, &y).unwrap();
            assert!((g - gauss(0.5, 0.7 - x0)).abs() < 1e-14);
            assert!((p - gauss(0.5, 0.7 - x0)).abs() < 1e-14);
        }
    }

    #[test]
    fn argument_checks() {
        let y = wp(&[0.0, 1.0]);
        let o = StartPoint::Origin(2);
        assert!(matches!(transition_inhomogeneous(0.5, &o, 1.0, &y, 2.0), Err(DiffusionError::OriginAfterStart)));
        assert!(matches!(transition_inhomogeneous(0.0, &o, 3.0, &y, 2.0), Err(DiffusionError::TimeOrder { .. })));
        assert!(matches!(transition_homogeneous(1.0, &StartPoint::Point(y.clone()), 1.0, &y), Err(DiffusionError::TimeOrder { .. })));
        assert!(matches!(transition_homogeneous(0.0, &StartPoint::Origin(3), 1.0, &y), Err(DiffusionError::DimensionMismatch(3, 2))));
        assert!(drift_inhomogeneous(1.0, &y, 1.0).is_err());
    }

    #[test]
    fn from_origin_matches_plain_formula() {
        use rand::Rng;
        let mut rng = crate::rng::path_rng(21, 0);
        for _ in 0..200 {
            let n = rng.random_range(1..=4usize);
            let t: f64 = rng.random_range(0.1..3.0);
            let mut v: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
            v.sort_by(f64::total_cmp);
            let Ok(y) = WeylPoint::new(v.clone()) else { continue };
            let nf = n as f64;
            let h = super::super::vandermonde_h(&v);
            let plain = Constants::new(n).c_prime() * t.powf(-nf * nf / 2.0) * (-sq_norm(&v) / (2.0 * t)).exp() * h * h;
            let p = transition_homogeneous(0.0, &StartPoint::Origin(n), t, &y).unwrap();
            assert!((p / plain - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn interior_branch_approaches_origin_branch() {
        let y = wp(&[-0.4, 0.9]);
        let eps = wp(&[0.0, 1e-4]);
        let a = transition_homogeneous(0.0, &StartPoint::Point(eps.clone()), 1.0, &y).unwrap();
        let b = transition_homogeneous(0.0, &StartPoint::Origin(2), 1.0, &y).unwrap();
        assert!((a / b - 1.0).abs() < 1e-3, "{a} {b}");
        let a = transition_inhomogeneous(0.0, &StartPoint::Point(eps), 1.0, &y, 2.0).unwrap();
        let b = transition_inhomogeneous(0.0, &StartPoint::Origin(2), 1.0, &y, 2.0).unwrap();
        assert!((a / b - 1.0).abs() < 1e-3, "{a} {b}");
    }

    #[test]
    fn from_origin_at_horizon_integrates_to_one() {
        let f = |y: &[f64]| transition_inhomogeneous(0.0, &StartPoint::Origin(2), 1.0, &wp(y), 1.0).unwrap_or(0.0);
        let opts = QuadOptions { initial_width: 1.0, ..Default::default() };
        let e = chamber_integral(&f, 2, &domain_around(&[0.0], 12.0), &opts).unwrap();
        assert!((e.value - 1.0).abs() < 1e-6, "{e:?}");
    }

    #[test]
    fn finite_horizon_approaches_dyson_density() {
        let x = StartPoint::Point(wp(&[0.0, 1.0]));
        for y in [[-0.5, 0.8], [0.1, 2.0], [-1.0, 1.5]] {
            let y = wp(&y);
            let g = transition_inhomogeneous(0.0, &x, 1.0, &y, 1e4).unwrap();
            let p = transition_homogeneous(0.0, &x, 1.0, &y).unwrap();
            assert!((g / p - 1.0).abs() < 0.01, "{g} {p}");
        }
    }

    #[test]
    fn drift_limits() {
        let x = wp(&[0.0, 2.0]);
        let b = drift_inhomogeneous(0.0, &x, 1e4).unwrap();
        assert!((b[0] + 0.5).abs() < 0.005 && (b[1] - 0.5).abs() < 0.005, "{b:?}");
        let b = drift_inhomogeneous(1.0 - 1e-4, &x, 1.0).unwrap();
        assert!(b.iter().all(|v| v.abs() < 0.01), "{b:?}");
        assert_eq!(drift_inhomogeneous(0.0, &wp(&[3.0]), 1.0).unwrap(), vec![0.0]);
        let d = dyson_drift(&[0.0, 2.0]);
        assert_eq!(d, vec![-0.5, 0.5]);
    }

    #[test]
    fn drift_methods_agree() {
        let x = wp(&[0.0, 0.5]);
        let a = drift_inhomogeneous(0.0, &x, 1.0).unwrap();
        let b = drift_with_method(0.0, &x, 1.0, SurvivalMethod::Quadrature).unwrap();
        for (u, v) in a.iter().zip(&b) {
            assert!((u - v).abs() < 1e-3, "{a:?} {b:?}");
        }
    }
}
