//! Partitions, semistandard Young tableaux and the bijection between
//! nonintersecting walks (canonical start `0, 2, …, 2(N−1)`) and SSYT.
//!
//! Under the bijection, column `j` of the tableau lists the times at which
//! walker `j` stepped left. The shape is the conjugate of the vector of
//! left-step counts.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CombinatError {
    #[error("parts are not weakly decreasing: {0:?}")]
    NotAPartition(Vec<usize>),
    #[error("invalid tableau: {0}")]
    InvalidTableau(String),
    #[error("invalid walk record: {0}")]
    InvalidWalk(String),
    #[error("walk does not start from the canonical configuration 0, 2, …, 2(N-1)")]
    NonCanonicalStart,
    #[error("walkers {i} and {j} meet at time {t}")]
    Intersecting { i: usize, j: usize, t: usize },
    #[error("tableau is not realizable as a nonintersecting walk: {0}")]
    NotRealizable(String),
    #[error("endpoint parity violated for walker {walker}: T + x - y must be even")]
    Parity { walker: usize },
    #[error("endpoint unreachable: {0}")]
    Unreachable(String),
}

/// A weakly decreasing sequence of nonnegative integers with trailing zeros
/// stripped.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Result<Self, CombinatError> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(CombinatError::NotAPartition(parts));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of boxes.
    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    /// Part `i` (0-based), zero past the end.
    pub fn part(&self, i: usize) -> usize {
        self.0.get(i).copied().unwrap_or(0)
    }

    /// Parts padded with zeros to exactly `len` entries. Panics if the
    /// partition is longer than `len`.
    pub fn padded(&self, len: usize) -> Vec<usize> {
        assert!(self.len() <= len, "partition longer than padding length");
        let mut v = self.0.clone();
        v.resize(len, 0);
        v
    }

    pub fn conjugate(&self) -> Partition {
        conjugate(self)
    }

    /// All partitions of `n`, in reverse lexicographic order.
    pub fn all_of(n: usize) -> Vec<Partition> {
        fn rec(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if rem == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for p in (1..=max.min(rem)).rev() {
                cur.push(p);
                rec(rem - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = CombinatError;
    fn try_from(v: Vec<usize>) -> Result<Self, Self::Error> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

/// Transpose of the Young diagram: `λ̃_j = #{i : λ_i ≥ j}`.
pub fn conjugate(p: &Partition) -> Partition {
    let width = p.part(0);
    let parts = (1..=width).map(|j| p.0.iter().filter(|&&x| x >= j).count()).collect();
    Partition(parts)
}

/// A semistandard Young tableau: rows weakly increase, columns strictly
/// increase, entries lie in `1..=max_entry`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SsytRepr", into = "SsytRepr")]
pub struct Ssyt {
    shape: Partition,
    rows: Vec<Vec<usize>>,
    max_entry: usize,
}

#[derive(Serialize, Deserialize)]
struct SsytRepr {
    shape: Partition,
    rows: Vec<Vec<usize>>,
    max_entry: usize,
}

impl TryFrom<SsytRepr> for Ssyt {
    type Error = CombinatError;
    fn try_from(r: SsytRepr) -> Result<Self, Self::Error> {
        let t = Ssyt::from_rows(r.rows, r.max_entry)?;
        if t.shape != r.shape {
            return Err(CombinatError::InvalidTableau(format!(
                "declared shape {} does not match rows {}",
                r.shape, t.shape
            )));
        }
        Ok(t)
    }
}

impl From<Ssyt> for SsytRepr {
    fn from(t: Ssyt) -> Self {
        SsytRepr { shape: t.shape, rows: t.rows, max_entry: t.max_entry }
    }
}

impl Ssyt {
    /// Builds a tableau from its rows, checking every invariant.
    pub fn from_rows(rows: Vec<Vec<usize>>, max_entry: usize) -> Result<Self, CombinatError> {
        let lens: Vec<usize> = rows.iter().map(Vec::len).collect();
        if lens.contains(&0) {
            return Err(CombinatError::InvalidTableau("empty row".into()));
        }
        let shape = Partition::new(lens).map_err(|e| CombinatError::InvalidTableau(e.to_string()))?;
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v == 0 || v > max_entry {
                    return Err(CombinatError::InvalidTableau(format!(
                        "entry {v} at ({}, {}) outside 1..={max_entry}",
                        i + 1,
                        j + 1
                    )));
                }
                if j > 0 && row[j - 1] > v {
                    return Err(CombinatError::InvalidTableau(format!("row {} not weakly increasing", i + 1)));
                }
                if i > 0 && rows[i - 1][j] >= v {
                    return Err(CombinatError::InvalidTableau(format!("column {} not strictly increasing", j + 1)));
                }
            }
        }
        Ok(Ssyt { shape, rows, max_entry })
    }

    pub fn empty(max_entry: usize) -> Self {
        Ssyt { shape: Partition::empty(), rows: Vec::new(), max_entry }
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn max_entry(&self) -> usize {
        self.max_entry
    }

    /// Entry in row `i`, column `j` (1-based, as `T(i, j)`).
    pub fn entry(&self, i: usize, j: usize) -> Option<usize> {
        self.rows.get(i.checked_sub(1)?)?.get(j.checked_sub(1)?).copied()
    }

    /// Column `j` (0-based), top to bottom.
    pub fn column(&self, j: usize) -> Vec<usize> {
        self.rows.iter().filter_map(|r| r.get(j).copied()).collect()
    }
}

/// `N` walkers over `horizon` steps of ±1, with the starting configuration.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "WalkRepr", into = "WalkRepr")]
pub struct WalkRecord {
    start: Vec<i64>,
    steps: Vec<Vec<i8>>,
    horizon: usize,
}

#[derive(Serialize, Deserialize)]
struct WalkRepr {
    start: Vec<i64>,
    steps: Vec<Vec<i8>>,
    horizon: usize,
}

impl TryFrom<WalkRepr> for WalkRecord {
    type Error = CombinatError;
    fn try_from(r: WalkRepr) -> Result<Self, Self::Error> {
        WalkRecord::new(r.start, r.steps, r.horizon)
    }
}

impl From<WalkRecord> for WalkRepr {
    fn from(w: WalkRecord) -> Self {
        WalkRepr { start: w.start, steps: w.steps, horizon: w.horizon }
    }
}

impl WalkRecord {
    /// Validates shape, step values, even strictly increasing start and the
    /// nonintersection condition at every time.
    pub fn new(start: Vec<i64>, steps: Vec<Vec<i8>>, horizon: usize) -> Result<Self, CombinatError> {
        if steps.len() != start.len() {
            return Err(CombinatError::InvalidWalk(format!(
                "{} starting positions but {} step rows",
                start.len(),
                steps.len()
            )));
        }
        if steps.iter().any(|s| s.len() != horizon) {
            return Err(CombinatError::InvalidWalk(format!("every walker needs exactly {horizon} steps")));
        }
        if steps.iter().flatten().any(|&s| s != 1 && s != -1) {
            return Err(CombinatError::InvalidWalk("steps must be +1 or -1".into()));
        }
        if start.iter().any(|x| x % 2 != 0) || start.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CombinatError::InvalidWalk("start must be strictly increasing even integers".into()));
        }
        let w = WalkRecord { start, steps, horizon };
        w.check_nonintersecting()?;
        Ok(w)
    }

    fn check_nonintersecting(&self) -> Result<(), CombinatError> {
        let mut pos = self.start.clone();
        for t in 0..=self.horizon {
            if t > 0 {
                for (p, s) in pos.iter_mut().zip(&self.steps) {
                    *p += s[t - 1] as i64;
                }
            }
            if let Some(i) = pos.windows(2).position(|w| w[0] >= w[1]) {
                return Err(CombinatError::Intersecting { i: i + 1, j: i + 2, t });
            }
        }
        Ok(())
    }

    pub fn walkers(&self) -> usize {
        self.start.len()
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn start(&self) -> &[i64] {
        &self.start
    }

    pub fn steps(&self) -> &[Vec<i8>] {
        &self.steps
    }

    /// Positions `S(t)` for `t = 0..=horizon`.
    pub fn positions(&self) -> Vec<Vec<i64>> {
        let mut out = Vec::with_capacity(self.horizon + 1);
        let mut pos = self.start.clone();
        out.push(pos.clone());
        for t in 0..self.horizon {
            for (p, s) in pos.iter_mut().zip(&self.steps) {
                *p += s[t] as i64;
            }
            out.push(pos.clone());
        }
        out
    }

    pub fn endpoint(&self) -> Vec<i64> {
        self.start
            .iter()
            .zip(&self.steps)
            .map(|(x, s)| x + s.iter().map(|&v| v as i64).sum::<i64>())
            .collect()
    }
}

/// `(0, 2, …, 2(N−1))`.
pub fn canonical_start(n: usize) -> Vec<i64> {
    (0..n as i64).map(|i| 2 * i).collect()
}

pub fn walk_to_tableau(w: &WalkRecord) -> Result<Ssyt, CombinatError> {
    if w.start != canonical_start(w.walkers()) {
        return Err(CombinatError::NonCanonicalStart);
    }
    // WalkRecord construction already enforced nonintersection.
    let columns: Vec<Vec<usize>> = w
        .steps
        .iter()
        .map(|s| s.iter().enumerate().filter(|(_, &v)| v == -1).map(|(t, _)| t + 1).collect())
        .collect();
    let height = columns.first().map_or(0, Vec::len);
    let rows: Vec<Vec<usize>> = (0..height)
        .map(|i| columns.iter().take_while(|c| c.len() > i).map(|c| c[i]).collect())
        .collect();
    let t = Ssyt::from_rows(rows, w.horizon)?;
    debug_assert_eq!(t.shape().conjugate().parts(), {
        let mut l: Vec<usize> = columns.iter().map(Vec::len).collect();
        while l.last() == Some(&0) {
            l.pop();
        }
        l
    });
    Ok(t)
}

pub fn tableau_to_walk(t: &Ssyt, n: usize, horizon: usize) -> Result<WalkRecord, CombinatError> {
    if t.shape().part(0) > n {
        return Err(CombinatError::NotRealizable(format!(
            "shape {} has more than {n} columns",
            t.shape()
        )));
    }
    if t.max_entry() > horizon {
        return Err(CombinatError::NotRealizable(format!(
            "alphabet bound {} exceeds horizon {horizon}",
            t.max_entry()
        )));
    }
    let steps: Vec<Vec<i8>> = (0..n)
        .map(|j| {
            let mut s = vec![1i8; horizon];
            for time in t.column(j) {
                s[time - 1] = -1;
            }
            s
        })
        .collect();
    WalkRecord::new(canonical_start(n), steps, horizon).map_err(|e| CombinatError::NotRealizable(e.to_string()))
}

/// Every SSYT of `shape` with entries in `1..=max_entry`, in lexicographic
/// order of their column reading.
pub fn enumerate_ssyt(shape: &Partition, max_entry: usize) -> Vec<Ssyt> {
    if shape.len() > max_entry {
        return Vec::new();
    }
    let cols = conjugate(shape);
    let col_lens = cols.parts().to_vec();
    let mut columns: Vec<Vec<usize>> = col_lens.iter().map(|&l| vec![0; l]).collect();
    let mut out = Vec::new();
    fill_ssyt(&col_lens, 0, 0, max_entry, &mut columns, &mut out, shape);
    out
}

fn fill_ssyt(
    col_lens: &[usize],
    c: usize,
    r: usize,
    max_entry: usize,
    cols: &mut Vec<Vec<usize>>,
    out: &mut Vec<Ssyt>,
    shape: &Partition,
) {
    if c == col_lens.len() {
        let rows = (0..shape.len())
            .map(|i| (0..shape.part(i)).map(|j| cols[j][i]).collect())
            .collect();
        out.push(Ssyt { shape: shape.clone(), rows, max_entry });
        return;
    }
    if r == col_lens[c] {
        fill_ssyt(col_lens, c + 1, 0, max_entry, cols, out, shape);
        return;
    }
    let above = if r > 0 { cols[c][r - 1] + 1 } else { 1 };
    let left = if c > 0 { cols[c - 1][r] } else { 1 };
    let lo = above.max(left);
    // room for the remaining boxes below in this column
    let hi = max_entry - (col_lens[c] - 1 - r);
    for v in lo..=hi {
        cols[c][r] = v;
        fill_ssyt(col_lens, c, r + 1, max_entry, cols, out, shape);
    }
}

/// Multiplicity of each letter `1..=horizon` in the tableau.
pub fn monomial_exponents(t: &Ssyt, horizon: usize) -> Vec<usize> {
    assert!(t.max_entry() <= horizon, "tableau alphabet exceeds the number of variables");
    let mut e = vec![0; horizon];
    for &v in t.rows().iter().flatten() {
        e[v - 1] += 1;
    }
    e
}

/// Left-step counts `L_i = (T + 2(i−1) − y_i)/2` for the canonical start.
pub fn left_step_counts(y: &[i64], horizon: usize) -> Result<Vec<usize>, CombinatError> {
    let t = horizon as i64;
    let mut l = Vec::with_capacity(y.len());
    for (i, &yi) in y.iter().enumerate() {
        let twice = t + 2 * i as i64 - yi;
        if twice.rem_euclid(2) != 0 {
            return Err(CombinatError::Parity { walker: i + 1 });
        }
        let li = twice / 2;
        if li < 0 || li > t {
            return Err(CombinatError::Unreachable(format!(
                "walker {} would need {li} left steps out of {horizon}",
                i + 1
            )));
        }
        l.push(li as usize);
    }
    Ok(l)
}

/// Shape `λ = L̃` attached to canonical-start endpoints `y` at time `T`.
pub fn endpoints_to_partition(y: &[i64], horizon: usize) -> Result<Partition, CombinatError> {
    let l = left_step_counts(y, horizon)?;
    let lp = Partition::new(l.clone())
        .map_err(|_| CombinatError::Unreachable(format!("left-step counts {l:?} are not weakly decreasing")))?;
    Ok(conjugate(&lp))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    /// The tableau of the four-walker, six-step example; its rows follow from
    /// the stated monomial z2 z3 z4³ z5 z6³ read row by row.
    pub(crate) fn six_letter_tableau() -> Ssyt {
        Ssyt::from_rows(vec![vec![2, 3, 4, 6], vec![4, 4, 6], vec![5, 6]], 6).unwrap()
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(conjugate(&p(&[3, 3, 2, 1])), p(&[4, 3, 2]));
        assert_eq!(conjugate(&p(&[])), p(&[]));
        assert_eq!(conjugate(&p(&[5])), p(&[1, 1, 1, 1, 1]));
    }

    #[test]
    fn conjugate_is_involution_exhaustive() {
        // all partitions fitting in a 12 x 12 box
        fn rec(max: usize, len_left: usize, cur: &mut Vec<usize>, count: &mut usize) {
            let part = Partition::new(cur.clone()).unwrap();
            assert_eq!(conjugate(&conjugate(&part)), part);
            *count += 1;
            if len_left == 0 {
                return;
            }
            for v in 1..=max {
                cur.push(v);
                rec(v, len_left - 1, cur, count);
                cur.pop();
            }
        }
        let mut count = 0;
        rec(12, 12, &mut Vec::new(), &mut count);
        // C(24, 12) partitions fit in a 12 x 12 box
        assert_eq!(count, 2_704_156);
    }

    #[test]
    fn partition_canonicalises() {
        assert_eq!(p(&[2, 1, 0, 0]).parts(), &[2, 1]);
        assert!(Partition::new(vec![1, 2]).is_err());
        assert_eq!(p(&[2, 1]).padded(4), vec![2, 1, 0, 0]);
        assert_eq!(Partition::all_of(5).len(), 7);
    }

    #[test]
    fn six_letter_tableau_facts() {
        let t = six_letter_tableau();
        assert_eq!(t.shape(), &p(&[4, 3, 2]));
        assert_eq!(t.entry(1, 3), Some(4));
        assert_eq!(t.entry(3, 1), Some(5));
        assert_eq!(monomial_exponents(&t, 6), vec![0, 1, 1, 3, 1, 3]);
        let w = tableau_to_walk(&t, 4, 6).unwrap();
        assert_eq!(w.endpoint(), vec![0, 2, 6, 10]);
        let l: Vec<usize> = w.steps().iter().map(|s| s.iter().filter(|&&v| v == -1).count()).collect();
        assert_eq!(l, vec![3, 3, 2, 1]);
        assert_eq!(walk_to_tableau(&w).unwrap(), t);
    }

    #[test]
    fn trivial_bijection_cases() {
        let w = WalkRecord::new(vec![0], vec![vec![1, 1]], 2).unwrap();
        let t = walk_to_tableau(&w).unwrap();
        assert!(t.shape().is_empty());
        assert_eq!(tableau_to_walk(&Ssyt::empty(2), 1, 2).unwrap(), w);

        let w = WalkRecord::new(vec![0, 2], vec![vec![-1], vec![-1]], 1).unwrap();
        let t = walk_to_tableau(&w).unwrap();
        assert_eq!(t.shape(), &p(&[2]));
        assert_eq!(t.rows(), &[vec![1, 1]]);
        assert_eq!(tableau_to_walk(&t, 2, 1).unwrap(), w);
    }

    #[test]
    fn bijection_rejects_bad_walks() {
        let err = WalkRecord::new(vec![0, 2], vec![vec![1], vec![-1]], 1).unwrap_err();
        assert_eq!(err, CombinatError::Intersecting { i: 1, j: 2, t: 1 });
        let w = WalkRecord::new(vec![0, 4], vec![vec![1], vec![1]], 1).unwrap();
        assert_eq!(walk_to_tableau(&w), Err(CombinatError::NonCanonicalStart));
        let wide = Ssyt::from_rows(vec![vec![1, 1, 1]], 2).unwrap();
        assert!(matches!(tableau_to_walk(&wide, 2, 2), Err(CombinatError::NotRealizable(_))));
        assert!(matches!(tableau_to_walk(&wide, 3, 1), Err(CombinatError::NotRealizable(_))));
    }

    fn all_walks(n: usize, horizon: usize) -> Vec<WalkRecord> {
        let total = 1usize << (n * horizon);
        (0..total)
            .filter_map(|bits| {
                let steps = (0..n)
                    .map(|i| {
                        (0..horizon)
                            .map(|t| if bits >> (i * horizon + t) & 1 == 1 { -1 } else { 1 })
                            .collect()
                    })
                    .collect();
                WalkRecord::new(canonical_start(n), steps, horizon).ok()
            })
            .collect()
    }

    #[test]
    fn round_trip_exhaustive_small() {
        for n in 1..=3 {
            for horizon in 0..=5 {
                for w in all_walks(n, horizon) {
                    let t = walk_to_tableau(&w).unwrap();
                    // invariants re-checked by the validating constructor
                    Ssyt::from_rows(t.rows().to_vec(), t.max_entry()).unwrap();
                    assert_eq!(tableau_to_walk(&t, n, horizon).unwrap(), w);
                }
            }
        }
    }

    #[test]
    fn ssyt_counts() {
        let two = enumerate_ssyt(&p(&[2]), 2);
        let rows: Vec<_> = two.iter().map(|t| t.rows()[0].clone()).collect();
        assert_eq!(rows, vec![vec![1, 1], vec![1, 2], vec![2, 2]]);
        assert_eq!(enumerate_ssyt(&p(&[2, 1]), 3).len(), 8);
        assert_eq!(enumerate_ssyt(&p(&[1, 1, 1]), 2).len(), 0);
        assert_eq!(enumerate_ssyt(&p(&[]), 0).len(), 1);
        assert_eq!(enumerate_ssyt(&p(&[4, 3, 2]), 6).len(), 5880);
    }

    #[test]
    fn ssyt_counts_monotone_and_duplicate_free() {
        for n in 0..=5 {
            for shape in Partition::all_of(n) {
                let mut prev = 0;
                for m in 0..=5 {
                    let all = enumerate_ssyt(&shape, m);
                    assert!(all.len() >= prev);
                    if shape.len() > m {
                        assert!(all.is_empty());
                    }
                    let set: std::collections::HashSet<_> = all.iter().collect();
                    assert_eq!(set.len(), all.len());
                    for t in &all {
                        let e = monomial_exponents(t, m);
                        assert_eq!(e.iter().sum::<usize>(), shape.size());
                    }
                    prev = all.len();
                }
            }
        }
    }

    #[test]
    fn endpoints_examples() {
        assert_eq!(endpoints_to_partition(&[0, 2, 6, 10], 6).unwrap(), p(&[4, 3, 2]));
        assert_eq!(left_step_counts(&[0, 2, 6, 10], 6).unwrap(), vec![3, 3, 2, 1]);
        assert_eq!(endpoints_to_partition(&[5], 5).unwrap(), p(&[]));
        assert_eq!(endpoints_to_partition(&[1, 2], 2), Err(CombinatError::Parity { walker: 1 }));
        assert!(matches!(endpoints_to_partition(&[10], 2), Err(CombinatError::Unreachable(_))));
        assert!(matches!(endpoints_to_partition(&[2, 0], 2), Err(CombinatError::Unreachable(_))));
    }

    #[test]
    fn json_shapes() {
        let t = six_letter_tableau();
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(s, r#"{"shape":[4,3,2],"rows":[[2,3,4,6],[4,4,6],[5,6]],"max_entry":6}"#);
        assert_eq!(serde_json::from_str::<Ssyt>(&s).unwrap(), t);
        assert!(serde_json::from_str::<Ssyt>(r#"{"shape":[2],"rows":[[2,1]],"max_entry":2}"#).is_err());
        let w = WalkRecord::new(vec![0, 2], vec![vec![-1], vec![-1]], 1).unwrap();
        let s = serde_json::to_string(&w).unwrap();
        assert_eq!(s, r#"{"start":[0,2],"steps":[[-1],[-1]],"horizon":1}"#);
        assert!(serde_json::from_str::<WalkRecord>(r#"{"start":[0,2],"steps":[[1],[-1]],"horizon":1}"#).is_err());
        assert_eq!(serde_json::to_string(&p(&[3, 1])).unwrap(), "[3,1]");
        assert!(serde_json::from_str::<Partition>("[1,3]").is_err());
    }
}
