//! Integer-valued numerical polynomials stored in the binomial basis.
//!
//! A [`NumericalPolynomial`] with coefficients `(a0, a1, ..., ad)` denotes
//! `w(t) = a0*C(t,0) + a1*C(t+1,1) + ... + ad*C(t+d,d)`. Every such sum takes
//! integer values at integers, and every integer-valued polynomial has a unique
//! expansion of this shape, so all arithmetic stays in exact integers.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::invariants::InvariantPair;

/// Upper bound on the downward scan used to tighten eventual-order thresholds.
const THRESHOLD_SCAN_LIMIT: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct NumericalPolynomial {
    coeffs: Vec<BigInt>,
}

/// Outcome of [`NumericalPolynomial::compare_eventual`].
///
/// For `t >= threshold` the sign of `p(t) - q(t)` is constant and agrees with
/// `ordering` (and is zero everywhere when `ordering` is `Equal`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EventualOrder {
    pub ordering: Ordering,
    pub threshold: u64,
}

/// Generalized binomial coefficient `C(x, k) = x(x-1)...(x-k+1)/k!` for any integer `x`.
pub fn binomial(x: &BigInt, k: u64) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for r in 0..k {
        num *= x - BigInt::from(r);
        den *= BigInt::from(r + 1);
    }
    num / den
}

/// Truncated binomial: `C(n, k)` for `n >= k`, zero otherwise (including negative `n`).
pub fn binomial_truncated(n: i64, k: u64) -> BigInt {
    if n < 0 || (n as u64) < k {
        BigInt::zero()
    } else {
        binomial(&BigInt::from(n), k)
    }
}

pub(crate) fn bigint_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => json!(v),
        None => Value::Number(n.to_string().parse().expect("integer literal")),
    }
}

impl NumericalPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::from_binomial_coeffs([c.into()])
    }

    pub fn from_binomial_coeffs<I, T>(coeffs: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        let mut coeffs: Vec<BigInt> = coeffs.into_iter().map(Into::into).collect();
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// `C(t + m - shift, m)` read as a polynomial in `t` (not truncated).
    pub fn shifted_binomial(m: u64, shift: u64) -> Self {
        let offset = BigInt::from(m) - BigInt::from(shift);
        Self::from_fn(m as usize, |t| binomial(&(t + &offset), m))
    }

    /// Recovers the binomial-basis coefficients of a polynomial of degree at
    /// most `degree`, given as an integer function. Uses the backward
    /// differences `a_k = (nabla^k f)(-1)`.
    pub fn from_fn(degree: usize, f: impl Fn(&BigInt) -> BigInt) -> Self {
        let values: Vec<BigInt> = (0..=degree as i64).map(|j| f(&BigInt::from(-1 - j))).collect();
        let coeffs = (0..=degree).map(|k| {
            (0..=k).fold(BigInt::zero(), |acc, j| {
                let c = binomial(&BigInt::from(k), j as u64) * &values[j];
                if j % 2 == 0 {
                    acc + c
                } else {
                    acc - c
                }
            })
        });
        Self::from_binomial_coeffs(coeffs)
    }

    pub fn binomial_coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coefficient(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn evaluate(&self, t: u64) -> BigInt {
        self.evaluate_at(&BigInt::from(t))
    }

    /// Polynomial evaluation at any integer, including negative ones.
    pub fn evaluate_at(&self, t: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(i, a)| a * binomial(&(t + BigInt::from(i)), i as u64))
            .sum()
    }

    /// Coefficients of `1, t, t^2, ...` in the monomial basis.
    pub fn to_standard(&self) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.coeffs.len()];
        // basis = C(t+i, i) in the monomial basis, built incrementally
        let mut basis = vec![BigRational::one()];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                let r = BigRational::from_integer(BigInt::from(i));
                let mut next = vec![BigRational::zero(); basis.len() + 1];
                for (k, b) in basis.iter().enumerate() {
                    next[k] += b * &r;
                    next[k + 1] += b.clone();
                }
                basis = next.into_iter().map(|c| c / &r).collect();
            }
            let a = BigRational::from_integer(a.clone());
            for (k, b) in basis.iter().enumerate() {
                out[k] += &a * b;
            }
        }
        while out.last().is_some_and(Zero::is_zero) {
            out.pop();
        }
        out
    }

    /// Inverse of [`to_standard`](Self::to_standard). Returns `None` when the
    /// polynomial is not integer-valued.
    pub fn from_standard(coeffs: &[BigRational]) -> Option<Self> {
        let eval = |t: &BigInt| {
            let t = BigRational::from_integer(t.clone());
            coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * &t + c)
        };
        let degree = coeffs.len().saturating_sub(1);
        let values: Vec<BigRational> = (0..=degree as i64).map(|j| eval(&BigInt::from(-1 - j))).collect();
        if values.iter().any(|v| !v.is_integer()) {
            return None;
        }
        let p = Self::from_fn(degree, |t| {
            let j = (BigInt::from(-1) - t).to_usize().expect("index");
            values[j].to_integer()
        });
        (p.to_standard() == trim(coeffs)).then_some(p)
    }

    /// Compares by eventual domination and reports from which `t` on the
    /// comparison is settled.
    pub fn compare_eventual(&self, other: &Self) -> EventualOrder {
        let diff = self - other;
        let Some(deg) = diff.degree() else {
            return EventualOrder { ordering: Ordering::Equal, threshold: 0 };
        };
        let ordering = if diff.leading_coefficient().is_positive() {
            Ordering::Greater
        } else {
            Ordering::Less
        };
        if deg == 0 {
            return EventualOrder { ordering, threshold: 0 };
        }
        // Cauchy bound: every real root r satisfies |r| < 1 + max |c_i / c_d|.
        let std = diff.to_standard();
        let lead = std.last().expect("nonzero").abs();
        let max_ratio = std[..std.len() - 1]
            .iter()
            .map(|c| c.abs() / &lead)
            .max()
            .unwrap_or_else(BigRational::zero);
        let bound = (max_ratio + BigRational::one()).ceil().to_integer();
        let mut threshold = bound.to_u64().unwrap_or(u64::MAX);
        let wanted = if ordering == Ordering::Greater { 1 } else { -1 };
        let floor = threshold.saturating_sub(THRESHOLD_SCAN_LIMIT);
        while threshold > floor {
            let v = diff.evaluate(threshold - 1);
            if v.is_zero() || (v.is_positive() as i32 * 2 - 1) != wanted {
                break;
            }
            threshold -= 1;
        }
        EventualOrder { ordering, threshold }
    }

    /// Differential type and typical differential dimension: the degree and
    /// leading coefficient in the binomial basis. The zero polynomial maps to
    /// the bottom pair `(-1, 0)`.
    pub fn invariants(&self) -> InvariantPair {
        match self.degree() {
            None => InvariantPair::bottom(),
            Some(d) => InvariantPair::from_parts(d as i64, self.leading_coefficient()),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "binomial_coeffs": self.coeffs.iter().map(bigint_json).collect::<Vec<_>>() })
    }

    pub fn from_json(value: &Value) -> Option<Self> {
        let arr = value.get("binomial_coeffs")?.as_array()?;
        let coeffs = arr
            .iter()
            .map(|v| v.as_number().and_then(|n| n.to_string().parse::<BigInt>().ok()))
            .collect::<Option<Vec<_>>>()?;
        Some(Self::from_binomial_coeffs(coeffs))
    }
}

fn trim(coeffs: &[BigRational]) -> Vec<BigRational> {
    let mut v = coeffs.to_vec();
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

impl fmt::Display for NumericalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, a) in self.coeffs.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let mag = a.abs();
            match (first, a.is_negative()) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            if i == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "C(t+{i},{i})")?;
            } else {
                write!(f, "{mag}*C(t+{i},{i})")?;
            }
        }
        Ok(())
    }
}

fn zip_with(p: &NumericalPolynomial, q: &NumericalPolynomial, op: impl Fn(&BigInt, &BigInt) -> BigInt) -> NumericalPolynomial {
    let n = p.coeffs.len().max(q.coeffs.len());
    let zero = BigInt::zero();
    NumericalPolynomial::from_binomial_coeffs(
        (0..n).map(|i| op(p.coeffs.get(i).unwrap_or(&zero), q.coeffs.get(i).unwrap_or(&zero))),
    )
}

impl Add for &NumericalPolynomial {
    type Output = NumericalPolynomial;
    fn add(self, rhs: Self) -> NumericalPolynomial {
        zip_with(self, rhs, |a, b| a + b)
    }
}

impl Sub for &NumericalPolynomial {
    type Output = NumericalPolynomial;
    fn sub(self, rhs: Self) -> NumericalPolynomial {
        zip_with(self, rhs, |a, b| a - b)
    }
}

impl Add for NumericalPolynomial {
    type Output = NumericalPolynomial;
    fn add(self, rhs: Self) -> NumericalPolynomial {
        &self + &rhs
    }
}

impl Sub for NumericalPolynomial {
    type Output = NumericalPolynomial;
    fn sub(self, rhs: Self) -> NumericalPolynomial {
        &self - &rhs
    }
}

impl Neg for &NumericalPolynomial {
    type Output = NumericalPolynomial;
    fn neg(self) -> NumericalPolynomial {
        NumericalPolynomial { coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }
}

impl Mul<&BigInt> for &NumericalPolynomial {
    type Output = NumericalPolynomial;
    fn mul(self, k: &BigInt) -> NumericalPolynomial {
        NumericalPolynomial::from_binomial_coeffs(self.coeffs.iter().map(|a| a * k))
    }
}

impl std::iter::Sum for NumericalPolynomial {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, p| &acc + &p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> NumericalPolynomial {
        NumericalPolynomial::from_binomial_coeffs(c.iter().copied())
    }

    #[test]
    fn construction_and_evaluation() {
        assert!(p(&[]).is_zero());
        assert_eq!(p(&[]).evaluate(5), BigInt::zero());
        assert_eq!(p(&[-1, 2]).evaluate(3), BigInt::from(7));
        assert_eq!(p(&[-1, 2]).evaluate(10), BigInt::from(21));
        assert_eq!(p(&[0, 0, 1]).evaluate(4), BigInt::from(15));
        assert_eq!(p(&[0, 0, 1]).evaluate(0), BigInt::from(1));
        assert_eq!(p(&[3, 0, 0]), p(&[3]));
    }

    #[test]
    fn add_and_subtract() {
        assert_eq!(&p(&[-1, 2]) + &p(&[1]), p(&[0, 2]));
        let d = &p(&[0, 0, 1]) - &p(&[1, 1]);
        // C(t+2,2) - (t+2) evaluated pointwise: -1, 0, 2, 5
        let expected = [-1, 0, 2, 5];
        for (t, e) in expected.iter().enumerate() {
            assert_eq!(d.evaluate(t as u64), BigInt::from(*e));
        }
        assert_eq!(d, p(&[-1, -1, 1]));
        let q = p(&[4, -3, 7]);
        assert!((&q - &q).is_zero());
    }

    #[test]
    fn eventual_comparison() {
        assert_eq!(p(&[0, 0, 1]).compare_eventual(&p(&[5, 2])).ordering, Ordering::Greater);
        assert_eq!(p(&[1, 1]).compare_eventual(&p(&[1, 1])), EventualOrder { ordering: Ordering::Equal, threshold: 0 });
        let o = p(&[0, 3]).compare_eventual(&p(&[100, 2]));
        assert_eq!(o.ordering, Ordering::Greater);
        // 3t+3 > 2t+102 iff t > 99
        assert_eq!(o.threshold, 100);
    }

    #[test]
    fn invariants_in_binomial_basis() {
        let i = p(&[-1, 2]).invariants();
        assert_eq!((i.tau(), i.alpha().clone()), (1, BigInt::from(2)));
        let i = p(&[0, 0, 1]).invariants();
        assert_eq!((i.tau(), i.alpha().clone()), (2, BigInt::from(1)));
        assert!(p(&[]).invariants().is_bottom());
        assert_eq!(p(&[7]).invariants().tau(), 0);
    }

    #[test]
    fn text_and_json_forms() {
        assert_eq!(p(&[-1, 2]).to_string(), "2*C(t+1,1) - 1");
        assert_eq!(p(&[0, -1, 1]).to_string(), "C(t+2,2) - C(t+1,1)");
        assert_eq!(p(&[]).to_string(), "0");
        assert_eq!(p(&[-1, 2]).to_json().to_string(), r#"{"binomial_coeffs":[-1,2]}"#);
        let big = NumericalPolynomial::from_binomial_coeffs([BigInt::from(10).pow(30)]);
        assert_eq!(big.to_json().to_string(), r#"{"binomial_coeffs":[1000000000000000000000000000000]}"#);
        assert_eq!(NumericalPolynomial::from_json(&big.to_json()), Some(big));
    }

    #[test]
    fn shifted_binomial_matches_direct_evaluation() {
        for m in 1..4u64 {
            for shift in 0..6u64 {
                let q = NumericalPolynomial::shifted_binomial(m, shift);
                for t in -5i64..10 {
                    let x = BigInt::from(t + m as i64 - shift as i64);
                    assert_eq!(q.evaluate_at(&BigInt::from(t)), binomial(&x, m));
                }
            }
        }
    }

    #[test]
    fn non_integer_valued_is_rejected() {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        assert!(NumericalPolynomial::from_standard(&[BigRational::zero(), half.clone()]).is_none());
        // t(t+1)/2 is integer-valued
        let q = NumericalPolynomial::from_standard(&[BigRational::zero(), half.clone(), half]).unwrap();
        assert_eq!(q, p(&[0, -1, 1]));
    }

    fn arb_poly() -> impl Strategy<Value = NumericalPolynomial> {
        prop::collection::vec(-50i64..50, 0..6).prop_map(|c| p(&c))
    }

    proptest! {
        #[test]
        fn standard_basis_round_trip(q in arb_poly()) {
            prop_assert_eq!(NumericalPolynomial::from_standard(&q.to_standard()), Some(q));
        }

        #[test]
        fn arithmetic_commutes_with_evaluation(a in arb_poly(), b in arb_poly(), t in 0u64..40) {
            prop_assert_eq!((&a + &b).evaluate(t), a.evaluate(t) + b.evaluate(t));
            prop_assert_eq!((&a - &b).evaluate(t), a.evaluate(t) - b.evaluate(t));
        }

        #[test]
        fn eventual_order_is_settled_after_threshold(a in arb_poly(), b in arb_poly()) {
            let o = a.compare_eventual(&b);
            prop_assert_eq!(o.ordering, b.compare_eventual(&a).ordering.reverse());
            prop_assert_eq!(o.ordering == Ordering::Equal, a == b);
            for t in o.threshold..o.threshold + 6 {
                prop_assert_eq!(a.evaluate(t).cmp(&b.evaluate(t)), o.ordering);
            }
        }
    }
}
