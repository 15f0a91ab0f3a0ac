//! Euler–Maruyama integration of the noncolliding diffusions.
//!
//! A step that would break the ordering is refined by splitting its Brownian
//! increment with a bridge midpoint and integrating the halves separately, so
//! the driving noise (and hence the law of the path) is unchanged.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use super::transition::{drift_raw, dyson_drift};
use super::{survival_pfaffian, vandermonde_h, DiffusionError, StartPoint};
use crate::rng::path_rng;

/// Step halvings allowed before giving up on a step.
pub const MAX_HALVINGS: u32 = 40;
const MAX_START_ATTEMPTS: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SamplePath {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    /// Seed and stream index when produced by a seeded driver.
    pub seed: Option<u64>,
    pub path_index: Option<u64>,
    pub dt: f64,
    pub integrator: &'static str,
    /// Number of steps that needed refinement.
    pub refined_steps: u64,
}

impl SamplePath {
    pub fn terminal(&self) -> &[f64] {
        self.states.last().expect("paths hold at least one state")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SdeOptions {
    pub t_end: f64,
    pub n_steps: usize,
    /// Record the grid states whose index is a multiple of `record_stride`,
    /// plus the first and the last.
    pub record_stride: usize,
    pub max_halvings: u32,
}

impl SdeOptions {
    pub fn new(t_end: f64, n_steps: usize) -> Self {
        SdeOptions { t_end, n_steps, record_stride: 1, max_halvings: MAX_HALVINGS }
    }

    fn validate(&self) -> Result<f64, DiffusionError> {
        if self.n_steps == 0 {
            return Err(DiffusionError::NoSteps);
        }
        super::check_time(self.t_end)?;
        Ok(self.t_end / self.n_steps as f64)
    }
}

#[derive(Clone, Copy)]
enum Kind {
    Dyson,
    /// Conditioned to survive until the given horizon.
    Finite(f64),
}

impl Kind {
    fn drift(&self, t: f64, y: &[f64]) -> Vec<f64> {
        match *self {
            Kind::Dyson => dyson_drift(y),
            Kind::Finite(horizon) => drift_raw(horizon - t, y),
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Kind::Dyson => "euler-maruyama/dyson",
            Kind::Finite(_) => "euler-maruyama/finite-horizon",
        }
    }
}

fn ordered(y: &[f64]) -> bool {
    y.iter().all(|v| v.is_finite()) && y.windows(2).all(|w| w[0] < w[1])
}

fn normals<R: Rng + ?Sized>(rng: &mut R, n: usize, sd: f64) -> Vec<f64> {
    (0..n)
        .map(|_| {
            let z: f64 = StandardNormal.sample(rng);
            sd * z
        })
        .collect()
}

struct Stepper<'a, R: Rng + ?Sized> {
    kind: Kind,
    rng: &'a mut R,
    max_halvings: u32,
    refined: u64,
}

impl<R: Rng + ?Sized> Stepper<'_, R> {
    fn step(&mut self, y: &[f64], t: f64, dt: f64, dw: &[f64], depth: u32) -> Result<Vec<f64>, DiffusionError> {
        let b = self.kind.drift(t, y);
        let next: Vec<f64> = y.iter().zip(&b).zip(dw).map(|((yi, bi), wi)| yi + bi * dt + wi).collect();
        if ordered(&next) {
            return Ok(next);
        }
        if depth >= self.max_halvings {
            return Err(DiffusionError::StepUnderflow { t, halvings: depth });
        }
        if depth == 0 {
            self.refined += 1;
        }
        // bridge midpoint: W(dt/2) | W(dt) = dw  ~  N(dw/2, dt/4)
        let jitter = normals(self.rng, y.len(), dt.sqrt() / 2.0);
        let first: Vec<f64> = dw.iter().zip(&jitter).map(|(w, j)| w / 2.0 + j).collect();
        let second: Vec<f64> = dw.iter().zip(&first).map(|(w, f)| w - f).collect();
        let mid = self.step(y, t, dt / 2.0, &first, depth + 1)?;
        self.step(&mid, t + dt / 2.0, dt / 2.0, &second, depth + 1)
    }
}

/// Draws `Y` at time `t0` from the density proportional to
/// `exp(−|y|²/2t0) h_N(y)^power · weight(y)` on the chamber, where
/// `0 < weight ≤ 1`, by rejection from sorted `N(0, 2 t0)` samples.
fn sample_small_time<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    t0: f64,
    power: i32,
    weight: impl Fn(&[f64]) -> f64,
) -> Result<Vec<f64>, DiffusionError> {
    let a = 1.0 / (4.0 * t0);
    // h^power ≤ (2|y|²)^k with k = power·m/2, and u^k e^{−a u} ≤ (k/a)^k e^{−k}
    let m = (n * (n - 1) / 2) as f64;
    let k = power as f64 * m / 2.0;
    let ln_bound = k * 2f64.ln() + if k > 0.0 { k * (k / a).ln() - k } else { 0.0 };
    let sd = (2.0 * t0).sqrt();
    for _ in 0..MAX_START_ATTEMPTS {
        let mut y = normals(rng, n, sd);
        y.sort_by(f64::total_cmp);
        if !ordered(&y) {
            continue;
        }
        let r2: f64 = y.iter().map(|v| v * v).sum();
        let ln_ratio = -a * r2 + power as f64 * vandermonde_h(&y).ln() - ln_bound;
        let u: f64 = rng.random();
        if u < ln_ratio.exp() * weight(&y) {
            return Ok(y);
        }
    }
    Err(DiffusionError::StepUnderflow { t: t0, halvings: 0 })
}

fn simulate<R: Rng + ?Sized>(kind: Kind, start: &StartPoint, opts: &SdeOptions, rng: &mut R) -> Result<SamplePath, DiffusionError> {
    let dt = opts.validate()?;
    let n = start.dim();
    if n == 0 {
        return Err(DiffusionError::Empty);
    }
    let stride = opts.record_stride.max(1);
    // grid index of the first state: 0 for a point start, 1 from the origin
    let (first, mut y) = match start {
        StartPoint::Point(p) => (0usize, p.coords().to_vec()),
        StartPoint::Origin(_) => {
            let y = match kind {
                Kind::Dyson => sample_small_time(rng, n, dt, 2, |_| 1.0)?,
                Kind::Finite(horizon) => sample_small_time(rng, n, dt, 1, |y| survival_pfaffian(horizon - dt, y))?,
            };
            (1, y)
        }
    };
    let mut t = first as f64 * dt;
    let mut times = vec![t];
    let mut states = vec![y.clone()];
    let mut stepper = Stepper { kind, rng, max_halvings: opts.max_halvings, refined: 0 };
    for g in first + 1..=opts.n_steps {
        let dw = normals(stepper.rng, n, dt.sqrt());
        y = stepper.step(&y, t, dt, &dw, 0)?;
        t = if g == opts.n_steps { opts.t_end } else { g as f64 * dt };
        if g % stride == 0 || g == opts.n_steps {
            times.push(t);
            states.push(y.clone());
        }
    }
    Ok(SamplePath {
        times,
        states,
        seed: None,
        path_index: None,
        dt,
        integrator: kind.name(),
        refined_steps: stepper.refined,
    })
}

/// Dyson's Brownian motion `dY_i = dB_i + Σ_{j≠i} dt/(Y_i − Y_j)`.
/// From the origin, the first recorded state is an exact draw at
/// `t0 = t_end / n_steps`.
pub fn simulate_dyson<R: Rng + ?Sized>(start: &StartPoint, opts: &SdeOptions, rng: &mut R) -> Result<SamplePath, DiffusionError> {
    simulate(Kind::Dyson, start, opts, rng)
}

/// Brownian motions conditioned to stay ordered up to `opts.t_end`, drift
/// `∇ ln N_N(t_end − t, x)`.
pub fn simulate_inhomogeneous<R: Rng + ?Sized>(
    start: &StartPoint,
    opts: &SdeOptions,
    rng: &mut R,
) -> Result<SamplePath, DiffusionError> {
    simulate(Kind::Finite(opts.t_end), start, opts, rng)
}

/// Runs `count` independent paths; path `k` uses stream `k` of `seed`.
/// Output order is by path index regardless of scheduling.
pub fn simulate_paths(
    dyson: bool,
    start: &StartPoint,
    opts: &SdeOptions,
    seed: u64,
    count: usize,
) -> Result<Vec<SamplePath>, DiffusionError> {
    (0..count)
        .into_par_iter()
        .map(|k| {
            let mut rng = path_rng(seed, k as u64);
            let mut p = if dyson {
                simulate_dyson(start, opts, &mut rng)?
            } else {
                simulate_inhomogeneous(start, opts, &mut rng)?
            };
            p.seed = Some(seed);
            p.path_index = Some(k as u64);
            Ok(p)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffusion::WeylPoint;

    fn var(v: &[f64]) -> f64 {
        let m = v.iter().sum::<f64>() / v.len() as f64;
        v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() - 1) as f64
    }

    #[test]
    fn grid_and_ordering() {
        let opts = SdeOptions::new(1.0, 100);
        let mut rng = path_rng(1, 0);
        let p = simulate_dyson(&StartPoint::Origin(3), &opts, &mut rng).unwrap();
        assert_eq!(p.times.len(), 100);
        assert!((p.times[0] - 0.01).abs() < 1e-15);
        assert_eq!(*p.times.last().unwrap(), 1.0);
        assert!(p.states.iter().all(|s| ordered(s)));
        let start = StartPoint::Point(WeylPoint::new(vec![0.0, 1.0]).unwrap());
        let p = simulate_inhomogeneous(&start, &SdeOptions { record_stride: 10, ..opts }, &mut rng).unwrap();
        assert_eq!(p.times.len(), 11);
        assert_eq!(p.states[0], vec![0.0, 1.0]);
        assert!(p.times.iter().enumerate().all(|(k, t)| *t == (k * 10) as f64 * 0.01 || k == 10));
        let p = simulate_dyson(&StartPoint::Origin(2), &SdeOptions { record_stride: 25, ..opts }, &mut rng).unwrap();
        assert_eq!(p.times, vec![0.01, 0.25, 0.5, 0.75, 1.0]);
        assert!(matches!(simulate_dyson(&start, &SdeOptions::new(1.0, 0), &mut rng), Err(DiffusionError::NoSteps)));
    }

    #[test]
    fn one_particle_is_brownian() {
        let opts = SdeOptions::new(2.0, 20);
        let paths = simulate_paths(false, &StartPoint::Origin(1), &opts, 3, 10_000).unwrap();
        let ends: Vec<f64> = paths.iter().map(|p| p.terminal()[0]).collect();
        // sample variance of 1e4 normals has relative sd sqrt(2/1e4)
        assert!((var(&ends) / 2.0 - 1.0).abs() < 3.0 * (2.0f64 / 1e4).sqrt());
    }

    #[test]
    fn dyson_center_of_mass_is_driftless() {
        let opts = SdeOptions::new(1.0, 200);
        let paths = simulate_paths(true, &StartPoint::Origin(2), &opts, 4, 10_000).unwrap();
        let sums: Vec<f64> = paths.iter().map(|p| p.terminal().iter().sum()).collect();
        assert!((var(&sums) / 2.0 - 1.0).abs() < 3.0 * (2.0f64 / 1e4).sqrt());
    }

    #[test]
    fn deterministic_given_seed() {
        let opts = SdeOptions::new(1.0, 50);
        let a = simulate_paths(true, &StartPoint::Origin(2), &opts, 9, 20).unwrap();
        let b = simulate_paths(true, &StartPoint::Origin(2), &opts, 9, 20).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn small_time_start_has_the_right_scale() {
        // under p_2(0,0;t0,·) the gap y2 − y1 has E[(y2−y1)²] = 6 t0
        let mut rng = path_rng(12, 0);
        let t0 = 0.01;
        let gaps: Vec<f64> =
            (0..20_000).map(|_| sample_small_time(&mut rng, 2, t0, 2, |_| 1.0).unwrap()).map(|y| (y[1] - y[0]).powi(2)).collect();
        let m = gaps.iter().sum::<f64>() / gaps.len() as f64;
        assert!((m / (6.0 * t0) - 1.0).abs() < 0.03, "{m}");
    }

    #[test]
    fn late_increments_are_nearly_free() {
        let opts = SdeOptions::new(1.0, 1000);
        let paths = simulate_paths(false, &StartPoint::Origin(2), &opts, 13, 10_000).unwrap();
        let dt = 1e-3;
        let mut incs = Vec::new();
        for p in &paths {
            let k = p.states.len();
            for w in p.states[k - 11..].windows(2) {
                incs.push(w[1][0] - w[0][0]);
            }
        }
        let v = incs.iter().map(|d| d * d).sum::<f64>() / incs.len() as f64;
        assert!((v / dt - 1.0).abs() < 0.05, "{}", v / dt);
    }
}
