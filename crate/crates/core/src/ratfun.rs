//! Rational functions in `x1..xm` over the rationals, kept in canonical form.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::Poly;

/// `num / den` with `gcd(num, den) = 1` and `den` monic (lex-leading
/// coefficient 1). Zero is `0 / 1`. Structural equality is therefore equality
/// of functions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl RatFun {
    pub fn zero(m: usize) -> Self {
        Self { num: Poly::zero(m), den: Poly::one(m) }
    }

    pub fn one(m: usize) -> Self {
        Self::from_poly(Poly::one(m))
    }

    pub fn from_int(m: usize, c: i64) -> Self {
        Self::from_poly(Poly::from_int(m, c))
    }

    pub fn from_rational(m: usize, c: BigRational) -> Self {
        Self::from_poly(Poly::constant(m, c))
    }

    /// The variable `x_i`, 1-based.
    pub fn var(m: usize, i: usize) -> Self {
        Self::from_poly(Poly::var(m, i))
    }

    pub fn from_poly(num: Poly) -> Self {
        let m = num.nvars();
        Self { num, den: Poly::one(m) }
    }

    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: Poly, den: Poly) -> Self {
        let m = num.nvars().max(den.nvars());
        if num.is_zero() {
            return Self::zero(m);
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = num.gcd(&den);
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        let lc = den.leading_coefficient().recip();
        Self { num: num.scale(&lc), den: den.scale(&lc) }
    }

    pub fn m(&self) -> usize {
        self.num.nvars()
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_constant() && self.num.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// The value when the function is a constant.
    pub fn constant_value(&self) -> Option<BigRational> {
        if self.is_polynomial() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn recip(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.recip()?)
    }

    pub fn pow(&self, k: u32) -> Self {
        Self { num: self.num.pow(k), den: self.den.pow(k) }
    }

    /// Partial derivative in `x_i` (1-based) by the quotient rule.
    pub fn derivative(&self, i: usize) -> Result<Self> {
        if i == 0 || i > self.m() {
            return Err(Error::DerivationIndex { index: i, m: self.m() });
        }
        Ok(self.derivative_unchecked(i))
    }

    pub(crate) fn derivative_unchecked(&self, i: usize) -> Self {
        if self.is_polynomial() {
            return Self::normalized(self.num.derivative(i), self.den.clone());
        }
        let num = &(&self.num.derivative(i) * &self.den) - &(&self.num * &self.den.derivative(i));
        Self::normalized(num, &self.den * &self.den)
    }

    /// Iterated partial derivative `d1^e1 ... dm^em`.
    pub fn derivative_multi(&self, exps: &[u32]) -> Self {
        let mut out = self.clone();
        for (i, &k) in exps.iter().enumerate() {
            for _ in 0..k {
                if out.is_zero() {
                    return out;
                }
                out = out.derivative_unchecked(i + 1);
            }
        }
        out
    }

    /// Value at a rational point, or `None` on a pole.
    pub fn evaluate(&self, point: &[BigRational]) -> Option<BigRational> {
        let d = self.den.evaluate(point);
        (!d.is_zero()).then(|| self.num.evaluate(point) / d)
    }

    /// True when printing needs parentheses to act as a single factor.
    pub(crate) fn is_compound(&self) -> bool {
        !self.is_polynomial() || self.num.num_terms() > 1
    }

    /// The first printed term of the numerator carries a minus sign.
    pub(crate) fn leading_is_negative(&self) -> bool {
        use num_traits::Signed;
        self.num.sorted_terms().first().is_some_and(|(_, c)| c.is_negative())
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl Add for &RatFun {
    type Output = RatFun;
    fn add(self, rhs: &RatFun) -> RatFun {
        if self.den == rhs.den {
            return RatFun::normalized(&self.num + &rhs.num, self.den.clone());
        }
        RatFun::normalized(&(&self.num * &rhs.den) + &(&rhs.num * &self.den), &self.den * &rhs.den)
    }
}

impl Sub for &RatFun {
    type Output = RatFun;
    fn sub(self, rhs: &RatFun) -> RatFun {
        self + &(-rhs)
    }
}

impl Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun { num: -&self.num, den: self.den.clone() }
    }
}

impl Mul for &RatFun {
    type Output = RatFun;
    fn mul(self, rhs: &RatFun) -> RatFun {
        RatFun::normalized(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Mul<&BigInt> for &RatFun {
    type Output = RatFun;
    fn mul(self, k: &BigInt) -> RatFun {
        RatFun::normalized(self.num.scale(&BigRational::from_integer(k.clone())), self.den.clone())
    }
}
