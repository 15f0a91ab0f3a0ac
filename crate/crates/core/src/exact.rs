//! Exact integer and rational helpers shared by the counting modules.
//!
//! Determinants are computed with fraction-free (Bareiss) elimination, which
//! keeps every intermediate value an exact minor of the input matrix.

use std::ops::{Div, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub type Rational = BigRational;

/// Ring operations needed by [`bareiss_det`]. Division is only ever called
/// where the quotient is exact.
pub trait ExactRing:
    Clone + Zero + One + PartialEq + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self> + Neg<Output = Self>
{
}

impl<T> ExactRing for T where
    T: Clone
        + Zero
        + One
        + PartialEq
        + Sub<Output = T>
        + Mul<Output = T>
        + Div<Output = T>
        + Neg<Output = T>
{
}

/// Determinant of a square matrix given as rows, by Bareiss elimination with
/// row pivoting. The empty matrix has determinant 1.
pub fn bareiss_det<T: ExactRing>(rows: &[Vec<T>]) -> T {
    let n = rows.len();
    assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
    if n == 0 {
        return T::one();
    }
    let mut a: Vec<Vec<T>> = rows.to_vec();
    let mut negate = false;
    let mut prev = T::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return T::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[k][k].clone() * a[i][j].clone() - a[i][k].clone() * a[k][j].clone();
                a[i][j] = v / prev.clone();
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// Bareiss elimination in `i128` with overflow detection. Returns `None` if
/// any intermediate minor leaves the `i128` range.
pub fn bareiss_det_i128(rows: &[Vec<i128>]) -> Option<i128> {
    let n = rows.len();
    if n == 0 {
        return Some(1);
    }
    let mut a = rows.to_vec();
    let mut negate = false;
    let mut prev: i128 = 1;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return Some(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let lhs = a[k][k].checked_mul(a[i][j])?;
                let rhs = a[i][k].checked_mul(a[k][j])?;
                a[i][j] = lhs.checked_sub(rhs)? / prev;
            }
        }
        prev = a[k][k];
    }
    let det = a[n - 1][n - 1];
    Some(if negate { -det } else { det })
}

/// Determinant of an integer matrix, trying the `i128` path first.
pub fn det_bigint(rows: &[Vec<BigInt>]) -> BigInt {
    let small: Option<Vec<Vec<i128>>> = rows
        .iter()
        .map(|r| r.iter().map(|v| v.to_i128()).collect())
        .collect();
    if let Some(d) = small.as_deref().and_then(bareiss_det_i128) {
        return BigInt::from(d);
    }
    bareiss_det(rows)
}

/// `C(n, k)` as a big integer; zero outside `0 ≤ k ≤ n`.
///
/// Uses the prime factorisation of the binomial (Legendre's formula), which
/// stays fast for `n` in the hundreds of thousands.
pub fn binomial(n: u64, k: i64) -> BigUint {
    if k < 0 || k as u64 > n {
        return BigUint::zero();
    }
    let k = k as u64;
    let k = k.min(n - k);
    if k == 0 {
        return BigUint::one();
    }
    if let Some(v) = binomial_u128(n, k) {
        return BigUint::from(v);
    }
    let mut factors: Vec<BigUint> = Vec::new();
    for p in primes_up_to(n) {
        let e = legendre(n, p) - legendre(k, p) - legendre(n - k, p);
        if e > 0 {
            factors.push(BigUint::from(p).pow(e as u32));
        }
    }
    product_tree(factors)
}

/// Binomial from a signed `n`, treating negative `n` as an empty range.
pub fn binomial_signed(n: i64, k: i64) -> BigUint {
    if n < 0 {
        return BigUint::zero();
    }
    binomial(n as u64, k)
}

fn binomial_u128(n: u64, k: u64) -> Option<u128> {
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) is exact at every step
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

fn legendre(n: u64, p: u64) -> u64 {
    let mut e = 0;
    let mut q = n / p;
    while q > 0 {
        e += q;
        q /= p;
    }
    e
}

fn primes_up_to(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if sieve[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
    }
    out
}

fn product_tree(mut xs: Vec<BigUint>) -> BigUint {
    if xs.is_empty() {
        return BigUint::one();
    }
    while xs.len() > 1 {
        let mut next = Vec::with_capacity(xs.len().div_ceil(2));
        let mut it = xs.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(a * b),
                None => next.push(a),
            }
        }
        xs = next;
    }
    xs.pop().unwrap()
}

/// Natural logarithm of a positive big integer, accurate to double precision.
pub fn ln_biguint(x: &BigUint) -> f64 {
    assert!(!x.is_zero(), "log of zero");
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Parse `"3"`, `"-2/5"` or `"0.25"` into an exact rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.starts_with('-');
        let int_digits = int.trim_start_matches(['-', '+']);
        if !frac.chars().all(|c| c.is_ascii_digit()) || !int_digits.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let digits = format!("{int_digits}{frac}");
        let n: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().ok()? };
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let r = Rational::new(n, d);
        return Some(if neg { -r } else { r });
    }
    let n: BigInt = s.parse().ok()?;
    Some(Rational::from_integer(n))
}

/// Formats a rational as `n` or `n/d`.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parity of a permutation given in one-line notation (0-based images).
pub fn permutation_sign(perm: &[usize]) -> i32 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn leibniz(rows: &[Vec<i64>]) -> i64 {
        permutations(rows.len())
            .iter()
            .map(|p| permutation_sign(p) as i64 * p.iter().enumerate().map(|(i, &j)| rows[i][j]).product::<i64>())
            .sum()
    }

    #[test]
    fn pascal_agrees_with_factorisation() {
        let mut row = vec![BigUint::one()];
        for n in 1..=120u64 {
            let mut next = vec![BigUint::one(); n as usize + 1];
            for k in 1..n as usize {
                next[k] = &row[k - 1] + &row[k];
            }
            row = next;
            for (k, v) in row.iter().enumerate() {
                assert_eq!(&binomial(n, k as i64), v, "C({n},{k})");
            }
        }
    }

    #[test]
    fn large_binomial_via_primes() {
        // C(2000, 1000) recomputed with the multiplicative recurrence
        let mut acc = BigUint::one();
        for i in 0..1000u64 {
            acc = acc * BigUint::from(2000 - i) / BigUint::from(i + 1);
        }
        assert_eq!(binomial(2000, 1000), acc);
        assert!(binomial(5, 6).is_zero());
        assert!(binomial(5, -1).is_zero());
        assert!(binomial_signed(-3, 0).is_zero());
    }

    #[test]
    fn bareiss_matches_leibniz() {
        let m = vec![vec![2, -1, 0, 3], vec![1, 4, -2, 0], vec![0, 0, 5, 1], vec![3, 1, 1, -2]];
        let big: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
        assert_eq!(bareiss_det(&big), BigInt::from(leibniz(&m)));
        let small: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect();
        assert_eq!(bareiss_det_i128(&small), Some(leibniz(&m) as i128));
    }

    #[test]
    fn bareiss_needs_pivoting() {
        let m = vec![vec![0, 1], vec![1, 0]];
        let big: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
        assert_eq!(det_bigint(&big), BigInt::from(-1));
        let sing = vec![vec![BigInt::from(1), BigInt::from(2)], vec![BigInt::from(2), BigInt::from(4)]];
        assert!(det_bigint(&sing).is_zero());
        assert_eq!(bareiss_det::<BigInt>(&[]), BigInt::one());
    }

    #[test]
    fn i128_overflow_falls_back() {
        let huge = BigInt::from(u64::MAX) * BigInt::from(u64::MAX);
        let m = vec![vec![huge.clone(), BigInt::from(1)], vec![BigInt::from(1), huge.clone()]];
        assert_eq!(det_bigint(&m), &huge * &huge - BigInt::one());
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("3").unwrap(), Rational::from_integer(3.into()));
        assert_eq!(parse_rational("-2/4").unwrap(), Rational::new((-1).into(), 2.into()));
        assert_eq!(parse_rational("0.25").unwrap(), Rational::new(1.into(), 4.into()));
        assert_eq!(parse_rational("-1.5").unwrap(), Rational::new((-3).into(), 2.into()));
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("x").is_none());
        assert_eq!(format_rational(&Rational::new(6.into(), 4.into())), "3/2");
    }

    #[test]
    fn log_of_big_values() {
        let b = binomial(100_000, 50_000);
        // Stirling: ln C(2m, m) ≈ 2m ln 2 − ½ ln(π m)
        let m = 50_000f64;
        let approx = 2.0 * m * std::f64::consts::LN_2 - 0.5 * (std::f64::consts::PI * m).ln();
        assert!((ln_biguint(&b) - approx).abs() < 1e-4);
    }

    #[test]
    fn permutation_signs() {
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutation_sign(&[0, 1, 2]), 1);
        assert_eq!(permutation_sign(&[1, 0, 2]), -1);
        assert_eq!(permutation_sign(&[1, 2, 0]), 1);
    }
}
