//! Counting and sampling vicious walkers: `N` simple random walks on `ℤ`
//! started at even sites that never share a site.

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combinat::WalkRecord;
use crate::diffusion::{vandermonde_h, Constants};
use crate::exact::{binomial, det_bigint, ln_biguint, Rational};
use crate::rng::{path_rng, uniform_below};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WalkError {
    #[error("positions must be strictly increasing: {0:?}")]
    NotIncreasing(Vec<i64>),
    #[error("starting positions must be even: {0:?}")]
    OddStart(Vec<i64>),
    #[error("start has {0} walkers but end has {1}")]
    SizeMismatch(usize, usize),
    #[error("parity mismatch for walker {walker}: steps + start - end must be even")]
    Parity { walker: usize },
    #[error("enumeration would visit 2^{exponent} step matrices, above the cap of {cap}")]
    CapExceeded { exponent: usize, cap: u64 },
    #[error("nonintersection cannot survive {0} steps from this start")]
    ZeroSurvival(usize),
    #[error("rejection sampling gave up after {0} attempts")]
    RetryCapExceeded(u64),
    #[error("rounded configuration is degenerate: {0:?}")]
    Degenerate(Vec<i64>),
    #[error("{0}")]
    BadParameter(String),
}

/// Strictly increasing even starting positions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct LatticeConfig(Vec<i64>);

impl LatticeConfig {
    pub fn new(positions: Vec<i64>) -> Result<Self, WalkError> {
        if positions.windows(2).any(|w| w[0] >= w[1]) {
            return Err(WalkError::NotIncreasing(positions));
        }
        if positions.iter().any(|x| x % 2 != 0) {
            return Err(WalkError::OddStart(positions));
        }
        Ok(LatticeConfig(positions))
    }

    pub fn canonical(n: usize) -> Self {
        LatticeConfig(crate::combinat::canonical_start(n))
    }

    pub fn positions(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl TryFrom<Vec<i64>> for LatticeConfig {
    type Error = WalkError;
    fn try_from(v: Vec<i64>) -> Result<Self, Self::Error> {
        LatticeConfig::new(v)
    }
}

impl From<LatticeConfig> for Vec<i64> {
    fn from(c: LatticeConfig) -> Self {
        c.0
    }
}

fn strictly_increasing(v: &[i64]) -> bool {
    v.windows(2).all(|w| w[0] < w[1])
}

/// Walker `i` can only end at `y_i` if `T + x_i − y_i` is even.
pub fn check_parity(x: &[i64], y: &[i64], steps: usize) -> Result<(), WalkError> {
    if x.len() != y.len() {
        return Err(WalkError::SizeMismatch(x.len(), y.len()));
    }
    for (i, (a, b)) in x.iter().zip(y).enumerate() {
        if (steps as i64 + a - b).rem_euclid(2) != 0 {
            return Err(WalkError::Parity { walker: i + 1 });
        }
    }
    Ok(())
}

/// Number of ways one walker goes from `a` to `b` in `steps` steps.
fn free_paths(a: i64, b: i64, steps: usize) -> BigUint {
    let k = steps as i64 + a - b;
    if k.rem_euclid(2) != 0 {
        BigUint::zero()
    } else {
        binomial(steps as u64, k / 2)
    }
}

/// `det[C(T, (T + x_i − y_j)/2)]`, the number of nonintersecting walk tuples
/// from `x` to `y` in `T` steps. Odd or out-of-range binomial arguments count
/// as zero. Returns 0 when either configuration is not strictly increasing.
pub fn count_vicious(x: &[i64], y: &[i64], steps: usize) -> BigUint {
    if x.len() != y.len() || !strictly_increasing(x) || !strictly_increasing(y) {
        return BigUint::zero();
    }
    let rows: Vec<Vec<BigInt>> = x
        .iter()
        .map(|&a| y.iter().map(|&b| BigInt::from(free_paths(a, b, steps))).collect())
        .collect();
    det_bigint(&rows).to_biguint().expect("ordered endpoints give a nonnegative count")
}

/// Count from the canonical start `(0, 2, …, 2(N−1))` via the dual
/// Jacobi–Trudi determinant `det[C(T, L_i − i + j)]` in the left-step counts.
pub fn count_canonical(y: &[i64], steps: usize) -> Result<BigUint, WalkError> {
    let n = y.len();
    let x = crate::combinat::canonical_start(n);
    check_parity(&x, y, steps)?;
    if !strictly_increasing(y) {
        return Ok(BigUint::zero());
    }
    let l: Vec<i64> = (0..n).map(|i| (steps as i64 + x[i] - y[i]) / 2).collect();
    let rows: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| BigInt::from(binomial(steps as u64, l[i] - i as i64 + j as i64))).collect())
        .collect();
    Ok(det_bigint(&rows).to_biguint().expect("canonical count is nonnegative"))
}

/// All strictly increasing `y` with `|y_i − x_i| ≤ T` and matching parity.
pub fn reachable_endpoints(x: &[i64], steps: usize) -> Vec<Vec<i64>> {
    let t = steps as i64;
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(x.len());
    fn rec(x: &[i64], t: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        let i = cur.len();
        if i == x.len() {
            out.push(cur.clone());
            return;
        }
        let mut y = x[i] - t;
        if let Some(&prev) = cur.last() {
            while y <= prev {
                y += 2;
            }
        }
        while y <= x[i] + t {
            cur.push(y);
            rec(x, t, cur, out);
            cur.pop();
            y += 2;
        }
    }
    rec(x, t, &mut cur, &mut out);
    out
}

/// `Σ_y M_N(T, y | x)`: the number of step matrices keeping the walkers
/// apart for `T` steps.
pub fn survival_count(x: &[i64], steps: usize) -> BigUint {
    reachable_endpoints(x, steps).iter().map(|y| count_vicious(x, y, steps)).sum()
}

/// Exact endpoint counts from a fixed start.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    start: Vec<i64>,
    horizon: usize,
    counts: BTreeMap<Vec<i64>, BigUint>,
}

impl CountTable {
    pub fn build(x: &LatticeConfig, steps: usize) -> Self {
        let counts = reachable_endpoints(x.positions(), steps)
            .into_iter()
            .filter_map(|y| {
                let c = count_vicious(x.positions(), &y, steps);
                (!c.is_zero()).then_some((y, c))
            })
            .collect();
        CountTable { start: x.positions().to_vec(), horizon: steps, counts }
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn start(&self) -> &[i64] {
        &self.start
    }

    /// Nonzero counts keyed by endpoint, in lexicographic order.
    pub fn counts(&self) -> &BTreeMap<Vec<i64>, BigUint> {
        &self.counts
    }

    pub fn count(&self, y: &[i64]) -> BigUint {
        self.counts.get(y).cloned().unwrap_or_default()
    }

    pub fn total(&self) -> BigUint {
        self.counts.values().sum()
    }

    /// `V_N(T, y | x) = 2^{−NT} M_N(T, y | x)`.
    pub fn normalized(&self, y: &[i64]) -> Rational {
        Rational::new(self.count(y).into(), self.scale())
    }

    /// Probability that the free walkers stay apart for `T` steps.
    pub fn survival_probability(&self) -> Rational {
        Rational::new(self.total().into(), self.scale())
    }

    fn scale(&self) -> BigInt {
        BigInt::one() << (self.start.len() * self.horizon)
    }
}

/// Every nonintersecting walk tuple from `x` to `y`, found by depth-first
/// search over time with reachability pruning. Refuses when `2^{NT}`
/// exceeds `cap`.
pub fn enumerate_vicious(x: &[i64], y: &[i64], steps: usize, cap: u64) -> Result<Vec<WalkRecord>, WalkError> {
    if x.len() != y.len() {
        return Err(WalkError::SizeMismatch(x.len(), y.len()));
    }
    LatticeConfig::new(x.to_vec())?;
    let exponent = x.len() * steps;
    if exponent >= 64 || (1u64 << exponent) > cap {
        return Err(WalkError::CapExceeded { exponent, cap });
    }
    let n = x.len();
    let mut out = Vec::new();
    if check_parity(x, y, steps).is_err() || !strictly_increasing(y) {
        return Ok(out);
    }
    let mut steps_so_far: Vec<Vec<i8>> = vec![Vec::with_capacity(steps); n];
    let mut pos = x.to_vec();
    fn rec(
        t: usize,
        horizon: usize,
        y: &[i64],
        x: &[i64],
        pos: &mut Vec<i64>,
        rows: &mut Vec<Vec<i8>>,
        out: &mut Vec<WalkRecord>,
    ) {
        let n = pos.len();
        if t == horizon {
            if pos == y {
                out.push(WalkRecord::new(x.to_vec(), rows.clone(), horizon).expect("walk built nonintersecting"));
            }
            return;
        }
        let remaining = (horizon - t - 1) as i64;
        for mask in 0..(1u32 << n) {
            let mv: Vec<i8> = (0..n).map(|i| if mask >> i & 1 == 1 { 1 } else { -1 }).collect();
            let next: Vec<i64> = pos.iter().zip(&mv).map(|(p, m)| p + *m as i64).collect();
            if !strictly_increasing(&next) || next.iter().zip(y).any(|(p, q)| (p - q).abs() > remaining) {
                continue;
            }
            let saved = std::mem::replace(pos, next);
            for (r, m) in rows.iter_mut().zip(&mv) {
                r.push(*m);
            }
            rec(t + 1, horizon, y, x, pos, rows, out);
            for r in rows.iter_mut() {
                r.pop();
            }
            *pos = saved;
        }
    }
    rec(0, steps, y, x, &mut pos, &mut steps_so_far, &mut out);
    Ok(out)
}

type StateKey = (Vec<i64>, usize);

fn gaps(a: &[i64]) -> Vec<i64> {
    a.windows(2).map(|w| w[1] - w[0]).collect()
}

/// Exact sampler for walkers conditioned to stay apart up to the horizon.
///
/// A walker state `a` with `r` steps left moves to `b` with probability
/// `Z(b, r−1) / Z(a, r)`, where `Z` is the survival count. Counts depend
/// only on the gap vector, so they are keyed by `(gaps, r)`. The whole table
/// of reachable states is built on construction and never mutated after,
/// so one sampler can serve many threads.
#[derive(Debug, Clone)]
pub struct ConditionedSampler {
    start: LatticeConfig,
    horizon: usize,
    survival: HashMap<StateKey, BigUint>,
    /// Allowed moves from each state as `(move mask, weight)`; weights sum
    /// to the state's survival count.
    moves: HashMap<StateKey, Vec<(u32, BigUint)>>,
}

impl ConditionedSampler {
    pub fn new(x: &LatticeConfig, steps: usize) -> Result<Self, WalkError> {
        let n = x.len();
        if n > 16 {
            return Err(WalkError::BadParameter("at most 16 walkers are supported".into()));
        }
        let mut survival: HashMap<StateKey, BigUint> = HashMap::new();
        let mut moves: HashMap<StateKey, Vec<(u32, BigUint)>> = HashMap::new();
        let z = |g: &[i64], r: usize, survival: &mut HashMap<StateKey, BigUint>| -> BigUint {
            survival
                .entry((g.to_vec(), r))
                .or_insert_with(|| {
                    let mut a = vec![0i64; g.len() + 1];
                    for i in 0..g.len() {
                        a[i + 1] = a[i] + g[i];
                    }
                    survival_count(&a, r)
                })
                .clone()
        };
        let root = (gaps(x.positions()), steps);
        if z(&root.0, steps, &mut survival).is_zero() {
            return Err(WalkError::ZeroSurvival(steps));
        }
        let mut queue = VecDeque::from([root]);
        while let Some((g, r)) = queue.pop_front() {
            if r == 0 || moves.contains_key(&(g.clone(), r)) {
                continue;
            }
            let mut a = vec![0i64; n];
            for i in 1..n {
                a[i] = a[i - 1] + g[i - 1];
            }
            let mut opts = Vec::new();
            let mut total = BigUint::zero();
            for mask in 0..(1u32 << n) {
                let b: Vec<i64> = (0..n).map(|i| a[i] + if mask >> i & 1 == 1 { 1 } else { -1 }).collect();
                if !strictly_increasing(&b) {
                    continue;
                }
                let gb = gaps(&b);
                let w = z(&gb, r - 1, &mut survival);
                if w.is_zero() {
                    continue;
                }
                total += &w;
                opts.push((mask, w));
                queue.push_back((gb, r - 1));
            }
            let za = z(&g, r, &mut survival);
            assert_eq!(total, za, "one-step weights must sum to the survival count");
            moves.insert((g, r), opts);
        }
        Ok(ConditionedSampler { start: x.clone(), horizon: steps, survival, moves })
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn start(&self) -> &LatticeConfig {
        &self.start
    }

    pub fn survival_count(&self) -> BigUint {
        self.survival[&(gaps(self.start.positions()), self.horizon)].clone()
    }

    /// Transition probabilities out of every reachable state, as exact
    /// rationals `(state positions up to translation, steps left, move mask,
    /// probability)`.
    pub fn transition_table(&self) -> Vec<(Vec<i64>, usize, u32, Rational)> {
        let mut out = Vec::new();
        for ((g, r), opts) in &self.moves {
            let z = &self.survival[&(g.clone(), *r)];
            for (mask, w) in opts {
                out.push((g.clone(), *r, *mask, Rational::new(w.clone().into(), z.clone().into())));
            }
        }
        out.sort_by(|a, b| (&a.0, a.1, a.2).cmp(&(&b.0, b.1, b.2)));
        out
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> WalkRecord {
        let n = self.start.len();
        let mut pos = self.start.positions().to_vec();
        let mut rows: Vec<Vec<i8>> = vec![Vec::with_capacity(self.horizon); n];
        for r in (1..=self.horizon).rev() {
            let key = (gaps(&pos), r);
            let opts = &self.moves[&key];
            let mut u = uniform_below(rng, &self.survival[&key]);
            let mut chosen = opts.last().unwrap().0;
            for (mask, w) in opts {
                if &u < w {
                    chosen = *mask;
                    break;
                }
                u -= w;
            }
            for (i, row) in rows.iter_mut().enumerate() {
                let s: i8 = if chosen >> i & 1 == 1 { 1 } else { -1 };
                row.push(s);
                pos[i] += s as i64;
            }
        }
        WalkRecord::new(self.start.positions().to_vec(), rows, self.horizon).expect("conditioned walk is valid")
    }

    /// `count` independent samples; sample `k` uses stream `k` of `seed`.
    pub fn sample_many(&self, seed: u64, count: usize) -> Vec<WalkRecord> {
        (0..count).into_par_iter().map(|k| self.sample(&mut path_rng(seed, k as u64))).collect()
    }
}

/// One exact draw from the conditioned law. Builds a fresh sampler; reuse a
/// [`ConditionedSampler`] for repeated draws.
pub fn sample_conditioned<R: Rng + ?Sized>(x: &LatticeConfig, steps: usize, rng: &mut R) -> Result<WalkRecord, WalkError> {
    Ok(ConditionedSampler::new(x, steps)?.sample(rng))
}

pub const DEFAULT_RETRY_CAP: u64 = 10_000_000;

/// Draws free walks until one stays apart for the full horizon.
pub fn rejection_sample<R: Rng + ?Sized>(
    x: &LatticeConfig,
    steps: usize,
    rng: &mut R,
    max_attempts: u64,
) -> Result<(WalkRecord, u64), WalkError> {
    let n = x.len();
    let mut rows: Vec<Vec<i8>> = vec![Vec::with_capacity(steps); n];
    'attempt: for attempt in 1..=max_attempts {
        let mut pos = x.positions().to_vec();
        for r in rows.iter_mut() {
            r.clear();
        }
        for _ in 0..steps {
            for (i, p) in pos.iter_mut().enumerate() {
                let s: i8 = if rng.random::<bool>() { 1 } else { -1 };
                rows[i].push(s);
                *p += s as i64;
            }
            if !strictly_increasing(&pos) {
                continue 'attempt;
            }
        }
        let w = WalkRecord::new(x.positions().to_vec(), rows, steps).expect("accepted walk is valid");
        return Ok((w, attempt));
    }
    Err(WalkError::RetryCapExceeded(max_attempts))
}

/// Both sides of the diffusive scaling limit of the normalized count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalingPoint {
    pub lhs: f64,
    pub rhs: f64,
    pub steps: usize,
}

impl ScalingPoint {
    pub fn relative_error(&self) -> f64 {
        (self.lhs / self.rhs - 1.0).abs()
    }
}

/// `φ_L(v) = 2⌊L v / 2⌋`.
pub fn lattice_round(v: f64, scale: f64) -> i64 {
    2 * (scale * v / 2.0).floor() as i64
}

/// Compares `(L/2)^N V_N(φ_{L²}(t), φ_L(y) | x)` with
/// `c′_N t^{−N²/2} h_N(x/L) e^{−|y|²/2t} h_N(y)`.
pub fn scaling_check(x: &LatticeConfig, t: f64, y: &[f64], scale: f64) -> Result<ScalingPoint, WalkError> {
    let n = x.len();
    if y.len() != n {
        return Err(WalkError::SizeMismatch(n, y.len()));
    }
    if !(t > 0.0 && scale > 0.0) {
        return Err(WalkError::BadParameter("t and L must be positive".into()));
    }
    let steps = lattice_round(t, scale * scale);
    if steps < 0 {
        return Err(WalkError::BadParameter("time rounds to a negative step count".into()));
    }
    let steps = steps as usize;
    let yl: Vec<i64> = y.iter().map(|&v| lattice_round(v, scale)).collect();
    if !strictly_increasing(&yl) {
        return Err(WalkError::Degenerate(yl));
    }
    let m = count_vicious(x.positions(), &yl, steps);
    let nf = n as f64;
    let lhs = if m.is_zero() {
        0.0
    } else {
        (nf * (scale / 2.0).ln() + ln_biguint(&m) - nf * steps as f64 * std::f64::consts::LN_2).exp()
    };
    let xs: Vec<f64> = x.positions().iter().map(|&v| v as f64 / scale).collect();
    let y2: f64 = y.iter().map(|v| v * v).sum();
    let rhs = Constants::new(n).c_prime()
        * t.powf(-nf * nf / 2.0)
        * vandermonde_h(&xs)
        * (-y2 / (2.0 * t)).exp()
        * vandermonde_h(y);
    Ok(ScalingPoint { lhs, rhs, steps })
}

/// Drops exact integer counts to `f64` when they fit.
pub fn count_to_f64(c: &BigUint) -> f64 {
    c.to_f64().unwrap_or(f64::INFINITY)
}
