//! Exact Schur function evaluation.
//!
//! Three independent routes are provided and must agree: the defining sum
//! over semistandard tableaux, the bialternant (ratio of alternants), and the
//! dual Jacobi–Trudi determinant in elementary symmetric polynomials. The
//! principal specialization `s_λ(1, …, 1)` has its own product formula.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::combinat::{conjugate, enumerate_ssyt, monomial_exponents, Partition};
use crate::exact::{bareiss_det, Rational};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SchurError {
    #[error("repeated evaluation point: z{i} = z{j}")]
    RepeatedPoint { i: usize, j: usize },
}

/// Values of the variables `z_1, …, z_T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalPoint(Vec<Rational>);

impl EvalPoint {
    pub fn new(values: Vec<Rational>) -> Self {
        EvalPoint(values)
    }

    pub fn from_integers(values: &[i64]) -> Self {
        EvalPoint(values.iter().map(|&v| Rational::from_integer(v.into())).collect())
    }

    /// `(1, 1, …, 1)` with `len` entries.
    pub fn ones(len: usize) -> Self {
        EvalPoint(vec![Rational::one(); len])
    }

    /// `(1, q, q², …, q^{len−1})`.
    pub fn geometric(q: &Rational, len: usize) -> Self {
        let mut v = Vec::with_capacity(len);
        let mut cur = Rational::one();
        for _ in 0..len {
            v.push(cur.clone());
            cur *= q;
        }
        EvalPoint(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[Rational] {
        &self.0
    }
}

/// All elementary symmetric polynomials `e_0, …, e_T` at `z`, read off the
/// coefficients of `∏(1 + z_i ξ)`.
pub fn elementary_all(z: &EvalPoint) -> Vec<Rational> {
    let mut coeffs = vec![Rational::one()];
    for zi in z.values() {
        coeffs.push(Rational::zero());
        for j in (1..coeffs.len()).rev() {
            let add = &coeffs[j - 1] * zi;
            coeffs[j] += add;
        }
    }
    coeffs
}

pub fn elementary_symmetric(j: usize, z: &EvalPoint) -> Rational {
    elementary_all(z).get(j).cloned().unwrap_or_else(Rational::zero)
}

/// Sum of `z^T` over every SSYT of the given shape with entries at most
/// `len(z)`.
pub fn schur_ssyt_sum(shape: &Partition, z: &EvalPoint) -> Rational {
    let n = z.len();
    enumerate_ssyt(shape, n)
        .iter()
        .map(|t| {
            monomial_exponents(t, n)
                .iter()
                .zip(z.values())
                .fold(Rational::one(), |acc, (&e, zi)| acc * zi.pow(e as i32))
        })
        .fold(Rational::zero(), |a, b| a + b)
}

/// `det[z_i^{λ_j + T − j}] / ∏_{i<j}(z_i − z_j)` with `λ` zero-padded to `T`.
pub fn schur_bialternant(shape: &Partition, z: &EvalPoint) -> Result<Rational, SchurError> {
    let t = z.len();
    let vals = z.values();
    let mut vandermonde = Rational::one();
    for i in 0..t {
        for j in i + 1..t {
            if vals[i] == vals[j] {
                return Err(SchurError::RepeatedPoint { i: i + 1, j: j + 1 });
            }
            vandermonde *= &vals[i] - &vals[j];
        }
    }
    if shape.len() > t {
        return Ok(Rational::zero());
    }
    let lam = shape.padded(t);
    let rows: Vec<Vec<Rational>> = vals
        .iter()
        .map(|zi| (0..t).map(|j| zi.pow((lam[j] + t - 1 - j) as i32)).collect())
        .collect();
    Ok(bareiss_det(&rows) / vandermonde)
}

/// `det_{1≤i,j≤N}[e_{λ̃_j + i − j}(z)]` where `λ̃` is the conjugate shape.
pub fn schur_dual_jt(shape: &Partition, z: &EvalPoint) -> Rational {
    let lt = conjugate(shape);
    let n = lt.len();
    let e = elementary_all(z);
    let ek = |k: i64| -> Rational {
        if k < 0 {
            Rational::zero()
        } else {
            e.get(k as usize).cloned().unwrap_or_else(Rational::zero)
        }
    };
    let rows: Vec<Vec<Rational>> = (0..n)
        .map(|i| (0..n).map(|j| ek(lt.part(j) as i64 + i as i64 - j as i64)).collect())
        .collect();
    bareiss_det(&rows)
}

/// `∏_{1≤i<j≤T} (λ_i − λ_j + j − i)/(j − i)`, the number of SSYT of shape
/// `λ` with entries at most `T`.
pub fn principal_specialization(shape: &Partition, t: usize) -> BigUint {
    if shape.len() > t {
        return BigUint::zero();
    }
    let lam = shape.padded(t);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..t {
        for j in i + 1..t {
            num *= BigInt::from(lam[i] as i64 - lam[j] as i64 + (j - i) as i64);
            den *= BigInt::from((j - i) as i64);
        }
    }
    let (q, r) = num.div_rem(&den);
    assert!(r.is_zero(), "hook-content product must be an integer");
    q.to_biguint().expect("product of positive factors")
}

/// The q-deformed product
/// `q^{Σ(k−1)λ_k} ∏_{i<j} (q^{λ_i−λ_j+j−i} − 1)/(q^{j−i} − 1)`,
/// which equals `s_λ(1, q, …, q^{T−1})` for `q ≠ 1`.
pub fn principal_specialization_q(shape: &Partition, t: usize, q: &Rational) -> Rational {
    assert!(!q.is_one(), "use principal_specialization for q = 1");
    if shape.len() > t {
        return Rational::zero();
    }
    let lam = shape.padded(t);
    let weight: usize = lam.iter().enumerate().map(|(k, &l)| k * l).sum();
    let mut acc = q.pow(weight as i32);
    for i in 0..t {
        for j in i + 1..t {
            let top = (lam[i] + j - i - lam[j]) as i32;
            let bottom = (j - i) as i32;
            acc *= (q.pow(top) - Rational::one()) / (q.pow(bottom) - Rational::one());
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn r(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn elementary_examples() {
        assert_eq!(elementary_symmetric(2, &EvalPoint::from_integers(&[1, 1, 1])), r(3));
        assert_eq!(elementary_symmetric(0, &EvalPoint::from_integers(&[4, 5])), r(1));
        assert_eq!(elementary_symmetric(0, &EvalPoint::new(vec![])), r(1));
        assert_eq!(elementary_symmetric(2, &EvalPoint::from_integers(&[1, 2, 3])), r(11));
        assert_eq!(elementary_symmetric(4, &EvalPoint::from_integers(&[1, 2, 3])), r(0));
    }

    #[test]
    fn ssyt_sum_examples() {
        assert_eq!(schur_ssyt_sum(&p(&[1]), &EvalPoint::from_integers(&[2, 3])), r(5));
        assert_eq!(schur_ssyt_sum(&p(&[2, 1]), &EvalPoint::ones(3)), r(8));
        assert_eq!(schur_ssyt_sum(&p(&[2, 1]), &EvalPoint::from_integers(&[1, 2, 3])), r(60));
        assert_eq!(schur_ssyt_sum(&p(&[1, 1, 1]), &EvalPoint::from_integers(&[1, 2])), r(0));
    }

    #[test]
    fn bialternant_examples() {
        let z = EvalPoint::from_integers(&[1, 2, 3]);
        assert_eq!(schur_bialternant(&p(&[2, 1]), &z).unwrap(), r(60));
        assert_eq!(schur_bialternant(&p(&[]), &z).unwrap(), r(1));
        assert_eq!(schur_bialternant(&p(&[1]), &EvalPoint::from_integers(&[2, 3])).unwrap(), r(5));
        assert_eq!(
            schur_bialternant(&p(&[1]), &EvalPoint::from_integers(&[2, 2])),
            Err(SchurError::RepeatedPoint { i: 1, j: 2 })
        );
        // the numerator alternant is −120 over a Vandermonde of −2
        let rows: Vec<Vec<Rational>> = [1i64, 2, 3]
            .iter()
            .map(|&zi| [4u32, 2, 0].iter().map(|&e| r(zi.pow(e))).collect())
            .collect();
        assert_eq!(bareiss_det(&rows), r(-120));
    }

    #[test]
    fn dual_jt_examples() {
        assert_eq!(schur_dual_jt(&p(&[2, 1]), &EvalPoint::from_integers(&[1, 2, 3])), r(60));
        assert_eq!(schur_dual_jt(&p(&[2, 1]), &EvalPoint::ones(3)), r(8));
        assert_eq!(schur_dual_jt(&p(&[]), &EvalPoint::from_integers(&[7, 9])), r(1));
        assert_eq!(schur_dual_jt(&p(&[1, 1, 1]), &EvalPoint::from_integers(&[1, 2])), r(0));
    }

    #[test]
    fn principal_examples() {
        assert_eq!(principal_specialization(&p(&[2, 1]), 3), BigUint::from(8u32));
        assert_eq!(principal_specialization(&p(&[]), 5), BigUint::from(1u32));
        assert_eq!(principal_specialization(&p(&[]), 0), BigUint::from(1u32));
        assert_eq!(principal_specialization(&p(&[4, 3, 2]), 6), BigUint::from(5880u32));
        assert_eq!(principal_specialization(&p(&[1, 1, 1]), 2), BigUint::zero());
    }

    #[test]
    fn three_routes_agree_small() {
        let z = EvalPoint::from_integers(&[1, 2, 3, 5]);
        for n in 0..=6 {
            for shape in Partition::all_of(n) {
                let a = schur_ssyt_sum(&shape, &z);
                assert_eq!(a, schur_bialternant(&shape, &z).unwrap(), "{shape}");
                assert_eq!(a, schur_dual_jt(&shape, &z), "{shape}");
            }
        }
    }

    #[test]
    fn principal_matches_counts() {
        for n in 0..=8 {
            for shape in Partition::all_of(n) {
                for t in 0..=5 {
                    let ps = principal_specialization(&shape, t);
                    let jt = schur_dual_jt(&shape, &EvalPoint::ones(t));
                    assert_eq!(Rational::from_integer(BigInt::from(ps.clone())), jt);
                    assert_eq!(ps, BigUint::from(enumerate_ssyt(&shape, t).len()));
                }
            }
        }
    }

    #[test]
    fn q_product_is_geometric_specialization() {
        for q in [Rational::new(2.into(), 1.into()), Rational::new(1.into(), 3.into()), Rational::new((-3).into(), 2.into())]
        {
            for n in 0..=5 {
                for shape in Partition::all_of(n) {
                    for t in 1..=4 {
                        let z = EvalPoint::geometric(&q, t);
                        assert_eq!(principal_specialization_q(&shape, t, &q), schur_dual_jt(&shape, &z));
                    }
                }
            }
        }
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-9i64..=9, 1i64..=5).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
    }

    proptest! {
        #[test]
        fn dual_jt_is_symmetric(
            vals in proptest::collection::vec(small_rational(), 1..=4),
            perm_seed in any::<u64>(),
            shape_idx in 0usize..11,
        ) {
            let shapes: Vec<Partition> = (0..=4).flat_map(Partition::all_of).collect();
            let shape = &shapes[shape_idx % shapes.len()];
            let mut permuted = vals.clone();
            // deterministic Fisher-Yates from the seed
            let mut s = perm_seed;
            for i in (1..permuted.len()).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                permuted.swap(i, (s >> 33) as usize % (i + 1));
            }
            prop_assert_eq!(
                schur_dual_jt(shape, &EvalPoint::new(vals)),
                schur_dual_jt(shape, &EvalPoint::new(permuted))
            );
        }
    }
}
