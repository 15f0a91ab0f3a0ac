//! Statistical and numerical checks with machine-readable reports.

use serde::Serialize;
use thiserror::Error;

use crate::quad::{chamber_integral, integrate, Estimate, QuadError, QuadOptions};

pub mod suite;

/// p-value floor used by every distributional acceptance check.
pub const P_FLOOR: f64 = 0.01;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error("sample {0} is empty")]
    EmptySample(&'static str),
    #[error("cdf is not monotone in [0, 1] near {0}")]
    BadCdf(f64),
    #[error("sample contains a non-finite value")]
    NonFinite,
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error("error estimate {error:e} exceeds tolerance {tol:e}")]
    Tolerance { error: f64, tol: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// Pass when `statistic ≤ threshold`.
    StatisticAtMost,
    /// Pass when `p_value ≥ threshold`.
    PValueAtLeast,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestReport {
    pub name: String,
    pub statistic: f64,
    pub threshold: f64,
    pub rule: Rule,
    pub p_value: Option<f64>,
    pub pass: bool,
    pub sample_sizes: Vec<usize>,
    pub seeds: Vec<u64>,
}

impl TestReport {
    pub fn at_most(name: impl Into<String>, statistic: f64, threshold: f64) -> Self {
        TestReport {
            name: name.into(),
            statistic,
            threshold,
            rule: Rule::StatisticAtMost,
            p_value: None,
            pass: statistic <= threshold,
            sample_sizes: Vec::new(),
            seeds: Vec::new(),
        }
    }

    /// Exact check: `mismatches` out of `total` comparisons, none allowed.
    pub fn exact(name: impl Into<String>, mismatches: usize, total: usize) -> Self {
        TestReport { sample_sizes: vec![total], ..Self::at_most(name, mismatches as f64, 0.0) }
    }

    /// `|value − target| ≤ tol`.
    pub fn close(name: impl Into<String>, value: f64, target: f64, tol: f64) -> Self {
        Self::at_most(name, (value - target).abs(), tol)
    }

    /// `value ∈ [lo, hi]`, reported as distance outside the interval.
    pub fn within(name: impl Into<String>, value: f64, lo: f64, hi: f64) -> Self {
        let outside = if value.is_nan() { f64::INFINITY } else { (lo - value).max(value - hi).max(0.0) };
        Self::at_most(format!("{} = {value:.6} in [{lo}, {hi}]", name.into()), outside, 0.0)
    }

    /// Switches to the p-value rule with the given floor.
    pub fn require_p(mut self, floor: f64) -> Self {
        self.rule = Rule::PValueAtLeast;
        self.threshold = floor;
        self.pass = self.p_value.is_some_and(|p| p >= floor);
        self
    }

    /// Switches to the statistic rule with the given bound.
    pub fn require_statistic(mut self, bound: f64) -> Self {
        self.rule = Rule::StatisticAtMost;
        self.threshold = bound;
        self.pass = self.statistic <= bound;
        self
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_seeds(mut self, seeds: &[u64]) -> Self {
        self.seeds = seeds.to_vec();
        self
    }
}

/// Kolmogorov distribution tail `P(K > λ) = 2 Σ (−1)^{k−1} e^{−2k²λ²}`.
pub fn kolmogorov_tail(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * lambda * lambda).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Asymptotic p-value with the usual small-sample correction of the
/// argument.
fn ks_p_value(d: f64, effective_n: f64) -> f64 {
    let en = effective_n.sqrt();
    kolmogorov_tail((en + 0.12 + 0.11 / en) * d)
}

fn sorted(v: &[f64], label: &'static str) -> Result<Vec<f64>, VerifyError> {
    if v.is_empty() {
        return Err(VerifyError::EmptySample(label));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(VerifyError::NonFinite);
    }
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    Ok(s)
}

/// Two-sample Kolmogorov–Smirnov statistic and asymptotic p-value. The
/// report passes when `p ≥ P_FLOOR`; use [`TestReport::require_statistic`]
/// to gate on the distance instead.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<TestReport, VerifyError> {
    let a = sorted(a, "a")?;
    let b = sorted(b, "b")?;
    let (n, m) = (a.len(), b.len());
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < n && j < m {
        let x = a[i].min(b[j]);
        while i < n && a[i] <= x {
            i += 1;
        }
        while j < m && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    let p = ks_p_value(d, (n * m) as f64 / (n + m) as f64);
    let mut r = TestReport::at_most("ks two-sample", d, f64::INFINITY);
    r.p_value = Some(p);
    r.sample_sizes = vec![n, m];
    Ok(r.require_p(P_FLOOR))
}

/// One-sample Kolmogorov–Smirnov distance to `cdf`. The CDF is probed at
/// every sample point and must be nondecreasing with values in `[0, 1]`.
/// Passes when `p ≥ P_FLOOR` unless re-gated.
pub fn ks_one_sample(a: &[f64], cdf: impl Fn(f64) -> f64) -> Result<TestReport, VerifyError> {
    let a = sorted(a, "a")?;
    let n = a.len() as f64;
    let mut d = 0.0f64;
    let mut prev = f64::NEG_INFINITY;
    for (k, &x) in a.iter().enumerate() {
        let c = cdf(x);
        if !(-1e-9..=1.0 + 1e-9).contains(&c) || c < prev - 1e-12 {
            return Err(VerifyError::BadCdf(x));
        }
        prev = c;
        d = d.max((c - k as f64 / n).abs()).max(((k + 1) as f64 / n - c).abs());
    }
    let mut r = TestReport::at_most("ks one-sample", d, f64::INFINITY);
    r.p_value = Some(ks_p_value(d, n));
    r.sample_sizes = vec![a.len()];
    Ok(r.require_p(P_FLOOR))
}

/// Integral of `f` over `{y_1 < ⋯ < y_n} ∩ domain^n`, `n ≤ 3`, failing
/// unless the error estimate is below `tol`.
pub fn quadrature_integrate<F: Fn(&[f64]) -> f64>(
    f: &F,
    n: usize,
    domain: &[(f64, f64)],
    tol: f64,
    initial_width: f64,
) -> Result<Estimate, VerifyError> {
    let opts = QuadOptions { abs_tol: tol / 4.0, rel_tol: 0.0, max_intervals: 4000, initial_width };
    let e = chamber_integral(f, n, domain, &opts)?;
    if e.error > tol {
        return Err(VerifyError::Tolerance { error: e.error, tol });
    }
    Ok(e)
}

/// Piecewise-linear CDF tabulated on a uniform grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TabulatedCdf {
    pub lo: f64,
    pub hi: f64,
    pub values: Vec<f64>,
}

impl TabulatedCdf {
    /// Cumulative integral of a one-dimensional density over `cells` equal
    /// cells of `[lo, hi]`.
    pub fn from_density(density: impl Fn(f64) -> f64, lo: f64, hi: f64, cells: usize) -> Result<Self, VerifyError> {
        let h = (hi - lo) / cells as f64;
        let opts = QuadOptions { abs_tol: 1e-12, rel_tol: 1e-10, max_intervals: 200, initial_width: f64::INFINITY };
        let mut values = Vec::with_capacity(cells + 1);
        let mut acc = 0.0;
        values.push(0.0);
        for k in 0..cells {
            let a = lo + h * k as f64;
            acc += integrate(&density, &[(a, a + h)], &opts)?.value;
            values.push(acc);
        }
        Ok(TabulatedCdf { lo, hi, values })
    }

    /// Mass captured on `[lo, hi]`.
    pub fn total(&self) -> f64 {
        *self.values.last().unwrap()
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x <= self.lo {
            return 0.0;
        }
        if x >= self.hi {
            return self.total().min(1.0);
        }
        let cells = self.values.len() - 1;
        let u = (x - self.lo) / (self.hi - self.lo) * cells as f64;
        let k = (u.floor() as usize).min(cells - 1);
        let w = u - k as f64;
        (self.values[k] * (1.0 - w) + self.values[k + 1] * w).min(1.0)
    }
}

/// Marginal CDF of coordinate `k ∈ {0, 1}` of a density on
/// `{y_1 < y_2}`, with the other coordinate integrated over `[lo, hi]`.
pub fn pair_marginal_cdf(
    density: impl Fn(f64, f64) -> f64 + Sync,
    k: usize,
    lo: f64,
    hi: f64,
    cells: usize,
) -> Result<TabulatedCdf, VerifyError> {
    assert!(k < 2);
    let opts = QuadOptions { abs_tol: 1e-13, rel_tol: 1e-11, max_intervals: 400, initial_width: 0.5 };
    let failure = std::sync::Mutex::new(None);
    let marginal = |u: f64| {
        let (range, f): ((f64, f64), Box<dyn Fn(f64) -> f64>) = if k == 0 {
            ((u, hi), Box::new(|v| density(u, v)))
        } else {
            ((lo, u), Box::new(|v| density(v, u)))
        };
        if range.1 <= range.0 {
            return 0.0;
        }
        match integrate(f, &[range], &opts) {
            Ok(e) => e.value,
            Err(e) => {
                failure.lock().unwrap().get_or_insert(e);
                0.0
            }
        }
    };
    let cdf = TabulatedCdf::from_density(marginal, lo, hi, cells)?;
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e.into());
    }
    Ok(cdf)
}
