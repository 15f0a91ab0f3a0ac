//! Adaptive Gauss–Kronrod (7/15) quadrature, in one dimension and nested over
//! the ordered region `y_1 < ⋯ < y_n` for `n ≤ 3`.

use std::cell::{Cell, RefCell};
use std::collections::BinaryHeap;

use serde::Serialize;
use thiserror::Error;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
/// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5, 7.
const WG: [f64; 4] = [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

pub const MAX_CHAMBER_DIM: usize = 3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadError {
    #[error("no convergence within {intervals} subintervals (estimate {value}, error {error})")]
    NoConvergence { value: f64, error: f64, intervals: usize },
    #[error("integrand returned a non-finite value at {0}")]
    NonFinite(f64),
    #[error("nested quadrature supports at most {MAX_CHAMBER_DIM} dimensions, got {0}")]
    TooManyDimensions(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
    /// Initial pieces are at most this wide.
    pub initial_width: f64,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions { abs_tol: 1e-10, rel_tol: 1e-10, max_intervals: 2000, initial_width: f64::INFINITY }
    }
}

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Result<(f64, f64), QuadError> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    if !fc.is_finite() {
        return Err(QuadError::NonFinite(c));
    }
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let (f1, f2) = (f(c - dx), f(c + dx));
        if !f1.is_finite() || !f2.is_finite() {
            return Err(QuadError::NonFinite(c - dx));
        }
        k += WGK[i] * (f1 + f2);
        if i % 2 == 1 {
            g += WG[i / 2] * (f1 + f2);
        }
    }
    let k = k * h;
    let g = g * h;
    // the difference is an upper bound in practice; keep a roundoff floor
    let err = (k - g).abs().max(50.0 * f64::EPSILON * k.abs());
    Ok((k, err))
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, o: &Self) -> bool {
        self.error == o.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Piece {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&o.error)
    }
}

/// Splits `[a, b]` into equal pieces no wider than `width`.
fn initial_pieces(a: f64, b: f64, width: f64) -> Vec<(f64, f64)> {
    let n = if width.is_finite() && width > 0.0 { ((b - a) / width).ceil().max(1.0) as usize } else { 1 };
    (0..n).map(|i| (a + (b - a) * i as f64 / n as f64, a + (b - a) * (i + 1) as f64 / n as f64)).collect()
}

/// Globally adaptive integration of `f` over a union of intervals.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, intervals: &[(f64, f64)], opts: &QuadOptions) -> Result<Estimate, QuadError> {
    let mut heap = BinaryHeap::new();
    let (mut total, mut err) = (0.0, 0.0);
    for &(a, b) in intervals {
        if b <= a {
            continue;
        }
        for (pa, pb) in initial_pieces(a, b, opts.initial_width) {
            let (v, e) = gk15(&mut f, pa, pb)?;
            total += v;
            err += e;
            heap.push(Piece { a: pa, b: pb, value: v, error: e });
        }
    }
    while err > opts.abs_tol.max(opts.rel_tol * total.abs()) {
        if heap.len() >= opts.max_intervals {
            return Err(QuadError::NoConvergence { value: total, error: err, intervals: heap.len() });
        }
        let worst = heap.pop().expect("nonempty while error is positive");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // cannot split further at double precision
            heap.push(worst);
            return Err(QuadError::NoConvergence { value: total, error: err, intervals: heap.len() });
        }
        let (v1, e1) = gk15(&mut f, worst.a, mid)?;
        let (v2, e2) = gk15(&mut f, mid, worst.b)?;
        total += v1 + v2 - worst.value;
        err += e1 + e2 - worst.error;
        heap.push(Piece { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Piece { a: mid, b: worst.b, value: v2, error: e2 });
    }
    // re-add to shed accumulated drift from the running sums
    let value = heap.iter().map(|p| p.value).sum();
    let error = heap.iter().map(|p| p.error).sum();
    Ok(Estimate { value, error })
}

/// Sorted, merged union of intervals.
pub fn merge_intervals(mut v: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    v.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(v.len());
    for (a, b) in v {
        match out.last_mut() {
            Some(last) if a <= last.1 => last.1 = last.1.max(b),
            _ => out.push((a, b)),
        }
    }
    out
}

/// Union of `[c − half_width, c + half_width]` over the centers.
pub fn domain_around(centers: &[f64], half_width: f64) -> Vec<(f64, f64)> {
    merge_intervals(centers.iter().map(|&c| (c - half_width, c + half_width)).collect())
}

fn clip_below(domain: &[(f64, f64)], lo: f64) -> Vec<(f64, f64)> {
    domain.iter().filter(|iv| iv.1 > lo).map(|&(a, b)| (a.max(lo), b)).collect()
}

/// `∫_{y_1 < ⋯ < y_n} f(y) dy` with every coordinate restricted to `domain`
/// (a union of intervals). Iterated one-dimensional adaptive rules; inner
/// integrals get a tolerance scaled by the domain length.
pub fn chamber_integral<F: Fn(&[f64]) -> f64>(
    f: &F,
    n: usize,
    domain: &[(f64, f64)],
    opts: &QuadOptions,
) -> Result<Estimate, QuadError> {
    if n > MAX_CHAMBER_DIM {
        return Err(QuadError::TooManyDimensions(n));
    }
    if n == 0 {
        return Ok(Estimate { value: f(&[]), error: 0.0 });
    }
    let domain = merge_intervals(domain.to_vec());
    let measure: f64 = domain.iter().map(|(a, b)| b - a).sum();
    let inner_opts = QuadOptions {
        abs_tol: opts.abs_tol / (4.0 * measure.max(1.0)),
        rel_tol: opts.rel_tol / 4.0,
        ..*opts
    };
    let inner_err = Cell::new(0.0f64);
    let failure: RefCell<Option<QuadError>> = RefCell::new(None);
    let outer = level(f, n, 0, [0.0; MAX_CHAMBER_DIM], &domain, opts, &inner_opts, &inner_err, &failure)?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(Estimate { value: outer.value, error: outer.error + measure * inner_err.get() })
}

#[allow(clippy::too_many_arguments)]
fn level<F: Fn(&[f64]) -> f64>(
    f: &F,
    n: usize,
    k: usize,
    prefix: [f64; MAX_CHAMBER_DIM],
    domain: &[(f64, f64)],
    opts: &QuadOptions,
    inner_opts: &QuadOptions,
    inner_err: &Cell<f64>,
    failure: &RefCell<Option<QuadError>>,
) -> Result<Estimate, QuadError> {
    let pieces = if k == 0 { domain.to_vec() } else { clip_below(domain, prefix[k - 1]) };
    let this_opts = if k == 0 { opts } else { inner_opts };
    integrate(
        |y| {
            let mut p = prefix;
            p[k] = y;
            if k + 1 == n {
                return f(&p[..n]);
            }
            match level(f, n, k + 1, p, domain, opts, inner_opts, inner_err, failure) {
                Ok(e) => {
                    if e.error > inner_err.get() {
                        inner_err.set(e.error);
                    }
                    e.value
                }
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    0.0
                }
            }
        },
        &pieces,
        this_opts,
    )
}
