//! Hermitian matrix-valued Brownian motion and its eigenvalue process.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::diffusion::SamplePath;
use crate::rng::path_rng;

/// Eigen-decompositions must reproduce the matrix to this accuracy.
pub const RESIDUAL_TOL: f64 = 1e-10;
/// Gaps below this are reported as numerical coincidences.
pub const COINCIDENCE_GAP: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RmtError {
    #[error("dimension must be at least 1")]
    EmptyMatrix,
    #[error("time must be positive, got {0}")]
    NonpositiveTime(f64),
    #[error("need at least one step")]
    NoSteps,
    #[error("diagonalization residual {0:e} exceeds tolerance")]
    Diagonalization(f64),
    #[error("eigenvalues {i} and {j} coincide to within {gap:e} at t = {t}")]
    Coincidence { i: usize, j: usize, gap: f64, t: f64 },
    #[error("paths disagree: {0}")]
    Inconsistent(String),
    #[error("not enough usable increments ({0})")]
    InsufficientSamples(u64),
}

/// `Ξ(t)` stored as its real part `s` and imaginary part `a`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianState {
    pub n: usize,
    pub matrix: DMatrix<Complex64>,
    pub t: f64,
}

impl HermitianState {
    pub fn zero(n: usize) -> Self {
        HermitianState { n, matrix: DMatrix::zeros(n, n), t: 0.0 }
    }

    /// Real part `s_ij`.
    pub fn s(&self, i: usize, j: usize) -> f64 {
        self.matrix[(i, j)].re
    }

    /// Imaginary part `a_ij`.
    pub fn a(&self, i: usize, j: usize) -> f64 {
        self.matrix[(i, j)].im
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.matrix[(i, i)].re).sum()
    }

    /// Adds an independent increment over `dt`.
    pub fn advance<R: Rng + ?Sized>(&mut self, dt: f64, rng: &mut R) {
        let inc = hermitian_increment(self.n, dt, rng);
        self.matrix += inc;
        self.t += dt;
    }
}

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

/// Gaussian Hermitian matrix: diagonal variance `dt`, real and imaginary
/// parts of off-diagonal entries variance `dt/2` each.
pub fn hermitian_increment<R: Rng + ?Sized>(n: usize, dt: f64, rng: &mut R) -> DMatrix<Complex64> {
    let sd = dt.sqrt();
    let off = (dt / 2.0).sqrt();
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = Complex64::new(sd * normal(rng), 0.0);
        for j in i + 1..n {
            let z = Complex64::new(off * normal(rng), off * normal(rng));
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

/// `Ξ(t)` started from zero.
pub fn sample_hermitian_bm<R: Rng + ?Sized>(n: usize, t: f64, rng: &mut R) -> Result<HermitianState, RmtError> {
    if n == 0 {
        return Err(RmtError::EmptyMatrix);
    }
    if !(t > 0.0) {
        return Err(RmtError::NonpositiveTime(t));
    }
    Ok(HermitianState { n, matrix: hermitian_increment(n, t, rng), t })
}

/// Increasing eigenvalues with a matching unitary.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenFrame {
    pub values: Vec<f64>,
    pub vectors: DMatrix<Complex64>,
}

/// Diagonalizes with columns sorted by eigenvalue and each column's
/// largest-modulus component made real and positive; checks the residual
/// and unitarity.
pub fn diagonalize(state: &HermitianState) -> Result<EigenFrame, RmtError> {
    let n = state.n;
    let eig = SymmetricEigen::new(state.matrix.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut u = DMatrix::<Complex64>::zeros(n, n);
    for (c, &k) in order.iter().enumerate() {
        let col = eig.eigenvectors.column(k);
        let big = (0..n).max_by(|&a, &b| col[a].norm().total_cmp(&col[b].norm())).unwrap();
        let phase = col[big].conj() / col[big].norm();
        for r in 0..n {
            u[(r, c)] = col[r] * phase;
        }
    }
    let scale = state.matrix.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let d = u.adjoint() * &state.matrix * &u;
    let mut resid: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { values[i] } else { 0.0 };
            resid = resid.max((d[(i, j)] - Complex64::new(target, 0.0)).norm());
        }
    }
    let ortho = (u.adjoint() * &u - DMatrix::identity(n, n)).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if resid > RESIDUAL_TOL * scale || ortho > RESIDUAL_TOL {
        return Err(RmtError::Diagonalization(resid.max(ortho)));
    }
    Ok(EigenFrame { values, vectors: u })
}

/// Increasing eigenvalues only; closed form for `N ≤ 2`.
pub fn eigenvalues(state: &HermitianState) -> Vec<f64> {
    let m = &state.matrix;
    match state.n {
        1 => vec![m[(0, 0)].re],
        2 => {
            let (a, d) = (m[(0, 0)].re, m[(1, 1)].re);
            let mean = 0.5 * (a + d);
            let r = (0.25 * (a - d).powi(2) + m[(0, 1)].norm_sqr()).sqrt();
            vec![mean - r, mean + r]
        }
        _ => {
            let mut v: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
            v.sort_by(f64::total_cmp);
            v
        }
    }
}

fn check_gaps(values: &[f64], t: f64) -> Result<(), RmtError> {
    for (i, w) in values.windows(2).enumerate() {
        let gap = w[1] - w[0];
        if gap < COINCIDENCE_GAP {
            return Err(RmtError::Coincidence { i: i + 1, j: i + 2, gap, t });
        }
    }
    Ok(())
}

/// Eigenvalues of `Ξ` on the grid `t_end·k/n_steps`, `k = 1..=n_steps`,
/// from `Ξ(0) = 0`. Exact in distribution at every grid time.
pub fn eigen_path<R: Rng + ?Sized>(n: usize, t_end: f64, n_steps: usize, rng: &mut R) -> Result<SamplePath, RmtError> {
    let mut out = SamplePath {
        times: Vec::with_capacity(n_steps),
        states: Vec::with_capacity(n_steps),
        seed: None,
        path_index: None,
        dt: 0.0,
        integrator: "hermitian-matrix",
        refined_steps: 0,
    };
    for_each_eigen_step(n, t_end, n_steps, rng, |t, v| {
        out.times.push(t);
        out.states.push(v.to_vec());
    })?;
    out.dt = t_end / n_steps as f64;
    Ok(out)
}

/// Streams the eigenvalues at each grid time to `visit` without storing the
/// path.
pub fn for_each_eigen_step<R: Rng + ?Sized>(
    n: usize,
    t_end: f64,
    n_steps: usize,
    rng: &mut R,
    mut visit: impl FnMut(f64, &[f64]),
) -> Result<(), RmtError> {
    if n == 0 {
        return Err(RmtError::EmptyMatrix);
    }
    if n_steps == 0 {
        return Err(RmtError::NoSteps);
    }
    if !(t_end > 0.0) {
        return Err(RmtError::NonpositiveTime(t_end));
    }
    let dt = t_end / n_steps as f64;
    let mut state = HermitianState::zero(n);
    for k in 1..=n_steps {
        state.advance(dt, rng);
        let t = if k == n_steps { t_end } else { dt * k as f64 };
        let v = eigenvalues(&state);
        check_gaps(&v, t)?;
        visit(t, &v);
    }
    Ok(())
}

/// Simple least-squares sums.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Ols {
    pub count: u64,
    sx: f64,
    sy: f64,
    sxx: f64,
    sxy: f64,
    syy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_se: f64,
    pub intercept_se: f64,
    pub count: u64,
}

impl Ols {
    pub fn add(&mut self, x: f64, y: f64) {
        self.count += 1;
        self.sx += x;
        self.sy += y;
        self.sxx += x * x;
        self.sxy += x * y;
        self.syy += y * y;
    }

    pub fn merge(&mut self, o: &Ols) {
        self.count += o.count;
        self.sx += o.sx;
        self.sy += o.sy;
        self.sxx += o.sxx;
        self.sxy += o.sxy;
        self.syy += o.syy;
    }

    pub fn fit(&self) -> Option<LineFit> {
        let n = self.count as f64;
        if self.count < 3 {
            return None;
        }
        let mx = self.sx / n;
        let my = self.sy / n;
        let cxx = self.sxx - n * mx * mx;
        let cxy = self.sxy - n * mx * my;
        let cyy = self.syy - n * my * my;
        if cxx <= 0.0 {
            // constant regressor (a single eigenvalue): intercept-only fit
            return Some(LineFit {
                slope: 0.0,
                intercept: my,
                slope_se: f64::NAN,
                intercept_se: (cyy.max(0.0) / (n - 1.0) / n).sqrt(),
                count: self.count,
            });
        }
        let slope = cxy / cxx;
        let intercept = my - slope * mx;
        let resid_var = ((cyy - slope * cxy) / (n - 2.0)).max(0.0);
        Some(LineFit {
            slope,
            intercept,
            slope_se: (resid_var / cxx).sqrt(),
            intercept_se: (resid_var * (1.0 / n + mx * mx / cxx)).sqrt(),
            count: self.count,
        })
    }
}

/// Streaming estimator of drift and quadratic variation of eigenvalue
/// paths. Merging is associative, so per-worker partial results can be
/// combined in any grouping.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DriftQvAccumulator {
    pub n: usize,
    pub per_coordinate: Vec<Ols>,
    pub pooled: Ols,
    pub sum_sq: Vec<f64>,
    pub time: Vec<f64>,
    pub skipped: u64,
    pub paths: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DriftQvReport {
    pub per_coordinate: Vec<LineFit>,
    pub pooled: LineFit,
    /// `Σ (Δλ_i)² / Σ Δt` per coordinate.
    pub qv: Vec<f64>,
    /// Approximate standard error of each `qv` entry.
    pub qv_se: Vec<f64>,
    pub qv_pooled: f64,
    pub used_increments: u64,
    pub skipped_increments: u64,
    pub paths: u64,
}

/// Increments starting at a configuration whose smallest gap is at most this
/// multiple of `√Δt` are left out.
pub const GAP_FILTER: f64 = 10.0;

impl DriftQvAccumulator {
    pub fn new(n: usize) -> Self {
        DriftQvAccumulator {
            n,
            per_coordinate: vec![Ols::default(); n],
            pooled: Ols::default(),
            sum_sq: vec![0.0; n],
            time: vec![0.0; n],
            skipped: 0,
            paths: 0,
        }
    }

    /// One increment `prev → next` over `dt`. The regressor is
    /// `Σ_{j≠i} 1/(λ_i − λ_j)` at `prev`, the response `Δλ_i/Δt`.
    pub fn add_increment(&mut self, prev: &[f64], next: &[f64], dt: f64) {
        let min_gap = prev.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
        if min_gap <= GAP_FILTER * dt.sqrt() {
            self.skipped += 1;
            return;
        }
        for i in 0..self.n {
            let x: f64 = (0..self.n).filter(|&j| j != i).map(|j| 1.0 / (prev[i] - prev[j])).sum();
            let d = next[i] - prev[i];
            self.per_coordinate[i].add(x, d / dt);
            self.pooled.add(x, d / dt);
            self.sum_sq[i] += d * d;
            self.time[i] += dt;
        }
    }

    pub fn add_path(&mut self, path: &SamplePath) -> Result<(), RmtError> {
        if path.states.iter().any(|s| s.len() != self.n) {
            return Err(RmtError::Inconsistent(format!("expected {} coordinates", self.n)));
        }
        for k in 1..path.states.len() {
            let dt = path.times[k] - path.times[k - 1];
            if !(dt > 0.0) {
                return Err(RmtError::Inconsistent("times must increase".into()));
            }
            self.add_increment(&path.states[k - 1], &path.states[k], dt);
        }
        self.paths += 1;
        Ok(())
    }

    pub fn merge(&mut self, o: &DriftQvAccumulator) {
        assert_eq!(self.n, o.n);
        for i in 0..self.n {
            self.per_coordinate[i].merge(&o.per_coordinate[i]);
            self.sum_sq[i] += o.sum_sq[i];
            self.time[i] += o.time[i];
        }
        self.pooled.merge(&o.pooled);
        self.skipped += o.skipped;
        self.paths += o.paths;
    }

    pub fn report(&self) -> Result<DriftQvReport, RmtError> {
        let used = self.pooled.count / self.n.max(1) as u64;
        let fits: Option<Vec<LineFit>> = self.per_coordinate.iter().map(|o| o.fit()).collect();
        let (Some(per_coordinate), Some(pooled)) = (fits, self.pooled.fit()) else {
            return Err(RmtError::InsufficientSamples(used));
        };
        let qv: Vec<f64> = self.sum_sq.iter().zip(&self.time).map(|(s, t)| s / t).collect();
        // squared Gaussian increments: relative sd sqrt(2/count)
        let qv_se = qv.iter().map(|q| q * (2.0 / used as f64).sqrt()).collect();
        Ok(DriftQvReport {
            per_coordinate,
            pooled,
            qv_pooled: self.sum_sq.iter().sum::<f64>() / self.time.iter().sum::<f64>(),
            qv,
            qv_se,
            used_increments: used,
            skipped_increments: self.skipped,
            paths: self.paths,
        })
    }
}

/// Regression of drift and realized quadratic variation over a set of paths.
pub fn estimate_drift_qv(paths: &[SamplePath]) -> Result<DriftQvReport, RmtError> {
    let n = paths.first().map(|p| p.terminal().len()).ok_or(RmtError::InsufficientSamples(0))?;
    let mut acc = DriftQvAccumulator::new(n);
    for p in paths {
        acc.add_path(p)?;
    }
    acc.report()
}

/// Streams `count` eigenvalue paths (stream `k` of `seed` for path `k`)
/// straight into an accumulator. Paths start at `Ξ(0) = 0`, so the origin is
/// included as the first state.
pub fn drift_qv_from_simulation(
    n: usize,
    t_end: f64,
    n_steps: usize,
    seed: u64,
    count: usize,
) -> Result<DriftQvReport, RmtError> {
    let dt = t_end / n_steps as f64;
    let acc = (0..count)
        .into_par_iter()
        .map(|k| {
            let mut acc = DriftQvAccumulator::new(n);
            let mut prev = vec![0.0; n];
            let mut rng = path_rng(seed, k as u64);
            for_each_eigen_step(n, t_end, n_steps, &mut rng, |_, v| {
                acc.add_increment(&prev, v, dt);
                prev.copy_from_slice(v);
            })?;
            acc.paths = 1;
            Ok(acc)
        })
        .try_reduce(|| DriftQvAccumulator::new(n), |mut a, b| {
            a.merge(&b);
            Ok(a)
        })?;
    acc.report()
}

/// Haar-distributed unitary from the QR decomposition of a complex Gaussian
/// matrix, with the phases of `R`'s diagonal moved into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<Complex64> {
    let g = DMatrix::from_fn(n, n, |_, _| Complex64::new(normal(rng), normal(rng)));
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        let d = r[(j, j)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= ph;
        }
    }
    q
}

/// Mean over steps of `(U†ΔΞU)_ij (U†ΔΞU)_ji / Δt`, with `U` the eigenframe
/// before each increment, over `n_steps` steps of size `1/n_steps`. With
/// `conjugate = Some(W)` each increment is replaced by `W ΔΞ W†`.
pub fn estimate_gamma<R: Rng + ?Sized>(
    n: usize,
    n_steps: usize,
    rng: &mut R,
    conjugate: Option<&DMatrix<Complex64>>,
) -> Result<DMatrix<f64>, RmtError> {
    if n == 0 {
        return Err(RmtError::EmptyMatrix);
    }
    if n_steps == 0 {
        return Err(RmtError::NoSteps);
    }
    let dt = 1.0 / n_steps as f64;
    let mut state = HermitianState::zero(n);
    // start from a generic matrix so the first frame is well defined
    state.advance(dt, rng);
    let mut sum = DMatrix::<f64>::zeros(n, n);
    for _ in 0..n_steps {
        let frame = diagonalize(&state)?;
        let mut inc = hermitian_increment(n, dt, rng);
        if let Some(w) = conjugate {
            inc = w * inc * w.adjoint();
        }
        let m = frame.vectors.adjoint() * &inc * &frame.vectors;
        for i in 0..n {
            for j in 0..n {
                sum[(i, j)] += (m[(i, j)] * m[(j, i)]).re / dt;
            }
        }
        state.matrix += inc;
        state.t += dt;
    }
    Ok(sum / n_steps as f64)
}
