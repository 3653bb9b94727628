//! Linear partial differential operators with rational-function coefficients.
//!
//! Operators are kept in normal form `sum c_theta * theta`, coefficients to
//! the left of derivative monomials. The derivation `d_i` acts on
//! coefficients as `d/dx_i`, so `d_i * c = c * d_i + d_i(c)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lattice::ExponentVector;
use crate::ratfun::RatFun;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffOperator {
    m: usize,
    terms: BTreeMap<ExponentVector, RatFun>,
}

/// `d_i(c)` for a coefficient, with `i` 1-based.
pub fn derive_coeff(i: usize, c: &RatFun) -> Result<RatFun> {
    c.derivative(i)
}

fn multi_binomial(top: &ExponentVector, bottom: &ExponentVector) -> BigInt {
    top.entries()
        .iter()
        .zip(bottom.entries())
        .map(|(&n, &k)| crate::binomial_poly::binomial(&BigInt::from(n), k as u64))
        .product()
}

impl DiffOperator {
    pub fn zero(m: usize) -> Self {
        Self { m, terms: BTreeMap::new() }
    }

    pub fn identity(m: usize) -> Self {
        Self::multiplication(RatFun::one(m))
    }

    /// Multiplication by a coefficient.
    pub fn multiplication(c: RatFun) -> Self {
        Self::term(ExponentVector::zero(c.m()), c)
    }

    pub fn term(theta: ExponentVector, c: RatFun) -> Self {
        let mut op = Self::zero(theta.m());
        op.add_term(theta, c);
        op
    }

    /// `d_i`, 1-based.
    pub fn derivation(m: usize, i: usize) -> Result<Self> {
        if i == 0 || i > m {
            return Err(Error::DerivationIndex { index: i, m });
        }
        Ok(Self::term(ExponentVector::unit(m, i), RatFun::one(m)))
    }

    pub fn from_terms(m: usize, terms: impl IntoIterator<Item = (ExponentVector, RatFun)>) -> Result<Self> {
        let mut op = Self::zero(m);
        for (theta, c) in terms {
            if theta.m() != m || c.m() != m {
                return Err(Error::DimensionMismatch { expected: m, found: theta.m().max(c.m()) });
            }
            op.add_term(theta, c);
        }
        Ok(op)
    }

    fn add_term(&mut self, theta: ExponentVector, c: RatFun) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&theta) {
            None => {
                self.terms.insert(theta, c);
            }
            Some(old) => {
                let sum = &old + &c;
                if !sum.is_zero() {
                    self.terms.insert(theta, sum);
                }
            }
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &RatFun)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, theta: &ExponentVector) -> Option<&RatFun> {
        self.terms.get(theta)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest order among stored monomials (0 for the zero operator).
    pub fn order(&self) -> u64 {
        self.terms.keys().map(ExponentVector::ord).max().unwrap_or(0)
    }

    /// Pure multiplication operator (no derivations), if that is what this is.
    pub fn as_coefficient(&self) -> Option<RatFun> {
        match self.terms.len() {
            0 => Some(RatFun::zero(self.m)),
            1 => self.terms.get(&ExponentVector::zero(self.m)).cloned(),
            _ => None,
        }
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.m == other.m {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.m, found: other.m })
        }
    }

    /// Operator product `self ∘ rhs` expanded by the Leibniz rule.
    pub fn compose(&self, rhs: &Self) -> Result<Self> {
        self.check_dim(rhs)?;
        let mut out = Self::zero(self.m);
        // cache of d^gamma(b) per right-hand coefficient
        let mut derived: BTreeMap<(ExponentVector, ExponentVector), RatFun> = BTreeMap::new();
        for (alpha, a) in &self.terms {
            for gamma in alpha.divisors() {
                let mult = multi_binomial(alpha, &gamma);
                let rest = alpha.checked_sub(&gamma).expect("gamma divides alpha");
                for (beta, b) in &rhs.terms {
                    let db = derived
                        .entry((beta.clone(), gamma.clone()))
                        .or_insert_with(|| b.derivative_multi(gamma.entries()));
                    if db.is_zero() {
                        continue;
                    }
                    let c = &(a * &*db) * &mult;
                    out.add_term(rest.add(beta), c);
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::identity(self.m), |acc, _| acc.compose(self).expect("same m"))
    }

    /// `sum c_theta * theta(f)`.
    pub fn apply(&self, f: &RatFun) -> Result<RatFun> {
        if f.m() != self.m {
            return Err(Error::DimensionMismatch { expected: self.m, found: f.m() });
        }
        Ok(self
            .terms
            .iter()
            .fold(RatFun::zero(self.m), |acc, (theta, c)| &acc + &(c * &f.derivative_multi(theta.entries()))))
    }

    /// Highest monomial under the orderly (graded-lex) ranking.
    pub fn leader(&self) -> Result<ExponentVector> {
        self.terms.keys().max_by(|a, b| a.orderly_cmp(b)).cloned().ok_or(Error::ZeroOperator)
    }

    /// Terms in descending orderly ranking.
    pub fn sorted_terms(&self) -> Vec<(&ExponentVector, &RatFun)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(a, _), (b, _)| b.orderly_cmp(a));
        v
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .sorted_terms()
            .into_iter()
            .map(|(theta, c)| json!({ "exponents": theta.entries(), "coeff": c.to_string() }))
            .collect();
        json!({ "m": self.m, "text": self.to_string(), "terms": terms })
    }
}

fn fmt_derivative(theta: &ExponentVector, f: &mut impl fmt::Write) -> fmt::Result {
    let mut first = true;
    for (i, &k) in theta.entries().iter().enumerate() {
        if k == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        write!(f, "d{}", i + 1)?;
        if k > 1 {
            write!(f, "^{k}")?;
        }
    }
    Ok(())
}

impl fmt::Display for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (theta, c)) in self.sorted_terms().into_iter().enumerate() {
            let negative = c.leading_is_negative();
            let mag = if negative { -c } else { c.clone() };
            match (i == 0, negative) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            let coeff = if mag.is_compound() { format!("({mag})") } else { mag.to_string() };
            if theta.ord() == 0 {
                if i == 0 && !negative {
                    write!(f, "{mag}")?;
                } else {
                    f.write_str(&coeff)?;
                }
            } else {
                if !mag.is_one() {
                    write!(f, "{coeff}*")?;
                }
                fmt_derivative(theta, f)?;
            }
        }
        Ok(())
    }
}

impl Add for &DiffOperator {
    type Output = DiffOperator;
    fn add(self, rhs: &DiffOperator) -> DiffOperator {
        let mut out = self.clone();
        for (theta, c) in &rhs.terms {
            out.add_term(theta.clone(), c.clone());
        }
        out
    }
}

impl Neg for &DiffOperator {
    type Output = DiffOperator;
    fn neg(self) -> DiffOperator {
        DiffOperator { m: self.m, terms: self.terms.iter().map(|(t, c)| (t.clone(), -c)).collect() }
    }
}

impl Sub for &DiffOperator {
    type Output = DiffOperator;
    fn sub(self, rhs: &DiffOperator) -> DiffOperator {
        self + &(-rhs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompositionOrder {
    /// `F1 ∘ F2 ∘ ... ∘ Fk`, i.e. `Fk` is applied first.
    LeftToRight,
    /// `Fk ∘ ... ∘ F1`.
    RightToLeft,
}

impl CompositionOrder {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::LeftToRight => "left-to-right",
            Self::RightToLeft => "right-to-left",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderCheck {
    pub order: CompositionOrder,
    pub product: DiffOperator,
    /// `target - product`.
    pub residual: DiffOperator,
}

impl OrderCheck {
    pub fn matches(&self) -> bool {
        self.residual.is_zero()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorizationReport {
    pub checks: [OrderCheck; 2],
}

impl FactorizationReport {
    /// First composition order that reproduces the target.
    pub fn matching_order(&self) -> Option<CompositionOrder> {
        self.checks.iter().find(|c| c.matches()).map(|c| c.order)
    }

    pub fn to_json(&self) -> Value {
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| {
                json!({
                    "order": c.order.as_str(),
                    "match": c.matches(),
                    "product": c.product.to_string(),
                    "residual": c.residual.to_string(),
                })
            })
            .collect();
        let verdict = match self.matching_order() {
            Some(o) => json!({ "result": "match", "order": o.as_str() }),
            None => json!({ "result": "mismatch" }),
        };
        json!({ "verdict": verdict, "checks": checks })
    }
}

/// Composes `factors` in both orders and compares with `target`.
pub fn verify_factorization(target: &DiffOperator, factors: &[DiffOperator]) -> Result<FactorizationReport> {
    for f in factors {
        target.check_dim(f)?;
    }
    let ltr = factors.iter().try_fold(DiffOperator::identity(target.m), |acc, f| acc.compose(f))?;
    let rtl = factors.iter().rev().try_fold(DiffOperator::identity(target.m), |acc, f| acc.compose(f))?;
    let check = |order, product: DiffOperator| OrderCheck { order, residual: target - &product, product };
    Ok(FactorizationReport {
        checks: [check(CompositionOrder::LeftToRight, ltr), check(CompositionOrder::RightToLeft, rtl)],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const M: usize = 2;

    fn d(i: usize) -> DiffOperator {
        DiffOperator::derivation(M, i).unwrap()
    }

    fn x(i: usize) -> RatFun {
        RatFun::var(M, i)
    }

    fn k(c: i64) -> RatFun {
        RatFun::from_int(M, c)
    }

    fn mul(c: RatFun) -> DiffOperator {
        DiffOperator::multiplication(c)
    }

    fn ev(e: &[u32]) -> ExponentVector {
        ExponentVector::new(e.to_vec())
    }

    fn c(a: &DiffOperator, b: &DiffOperator) -> DiffOperator {
        a.compose(b).unwrap()
    }

    #[test]
    fn leibniz_composition() {
        // d1 ∘ x1 = x1 d1 + 1
        let lhs = c(&d(1), &mul(x(1)));
        assert_eq!(lhs, &c(&mul(x(1)), &d(1)) + &DiffOperator::identity(M));
        assert_eq!(c(&d(1), &d(2)), c(&d(2), &d(1)));
        // (x1 d1)^2 = x1^2 d1^2 + x1 d1
        let xd = c(&mul(x(1)), &d(1));
        let expected = &DiffOperator::term(ev(&[2, 0]), &x(1) * &x(1)) + &xd;
        assert_eq!(c(&xd, &xd), expected);
    }

    #[test]
    fn application() {
        let op = &c(&d(1), &d(1)) - &d(2);
        let f = &(&x(1) * &x(1)) + &x(2);
        assert_eq!(op.apply(&f).unwrap(), k(1));
        assert_eq!(DiffOperator::identity(M).apply(&f).unwrap(), f);
        assert!(d(1).apply(&x(2).pow(3)).unwrap().is_zero());
    }

    #[test]
    fn leaders() {
        let op = &c(&d(1), &d(1)) - &d(2);
        assert_eq!(op.leader().unwrap(), ev(&[2, 0]));
        assert_eq!(mul(k(5)).leader().unwrap(), ev(&[0, 0]));
        assert_eq!(DiffOperator::zero(M).leader(), Err(Error::ZeroOperator));
        let mixed = &DiffOperator::term(ev(&[1, 2]), k(1)) + &DiffOperator::term(ev(&[2, 1]), k(1));
        assert_eq!(mixed.leader().unwrap(), ev(&[2, 1]));
    }

    #[test]
    fn derive_coeff_bounds() {
        assert_eq!(derive_coeff(1, &x(1)).unwrap(), k(1));
        assert!(derive_coeff(2, &x(1)).unwrap().is_zero());
        assert!(derive_coeff(3, &x(1)).is_err());
    }

    #[test]
    fn factorization_checks() {
        let target = &c(&d(1), &d(1)) - &c(&d(2), &d(2));
        let r = verify_factorization(&target, &[&d(1) + &d(2), &d(1) - &d(2)]).unwrap();
        assert!(r.checks.iter().all(OrderCheck::matches));
        assert_eq!(r.matching_order(), Some(CompositionOrder::LeftToRight));

        // (x1 d1) ∘ d1 = x1 d1^2, but d1 ∘ (x1 d1) = x1 d1^2 + d1
        let target = DiffOperator::term(ev(&[2, 0]), x(1));
        let r = verify_factorization(&target, &[c(&mul(x(1)), &d(1)), d(1)]).unwrap();
        assert!(r.checks[0].matches());
        assert!(!r.checks[1].matches());
        assert_eq!(r.checks[1].residual, -&d(1));
    }

    #[test]
    fn printing() {
        let op = &(&DiffOperator::term(ev(&[2, 0]), &x(1) * &x(1)) - &c(&mul(&x(1) + &k(1)), &d(2))) - &mul(k(3));
        assert_eq!(op.to_string(), "x1^2*d1^2 - (x1 + 1)*d2 - 3");
        assert_eq!((-&d(1)).to_string(), "-d1");
        assert_eq!(DiffOperator::zero(M).to_string(), "0");
    }
}
