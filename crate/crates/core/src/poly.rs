//! Sparse multivariate polynomials over the rationals in `x1..xm`.
//!
//! Terms are keyed by exponent vectors in lexicographic order. Division and
//! gcd are exact; the gcd is the recursive primitive-PRS algorithm, which is
//! more than fast enough for the small coefficients met in operator work.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

type Exps = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Exps, BigRational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRational::one())
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, BigRational::from_integer(BigInt::from(c)))
    }

    /// The variable `x_i`, 1-based.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i - 1] = 1;
        Self::monomial(e, BigRational::one())
    }

    pub fn monomial(exps: Exps, c: BigRational) -> Self {
        let mut p = Self::zero(exps.len());
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exps, BigRational)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            debug_assert_eq!(e.len(), nvars);
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Exps, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        if self.is_zero() {
            Some(BigRational::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Lexicographically largest term.
    fn lead(&self) -> Option<(&Exps, &BigRational)> {
        self.terms.iter().next_back()
    }

    /// Leading coefficient in lex order (zero for the zero polynomial).
    pub fn leading_coefficient(&self) -> BigRational {
        self.lead().map(|(_, c)| c.clone()).unwrap_or_else(BigRational::zero)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self { nvars: self.nvars, terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect() }
    }

    /// Scales so the lex-leading coefficient is 1.
    pub fn monic(&self) -> Self {
        match self.lead() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(self.nvars), |acc, _| &acc * self)
    }

    /// Partial derivative in `x_i`, 1-based.
    pub fn derivative(&self, i: usize) -> Self {
        let k = i - 1;
        let terms = self.terms.iter().filter(|(e, _)| e[k] > 0).map(|(e, c)| {
            let mut e2 = e.clone();
            e2[k] -= 1;
            (e2, c * BigRational::from_integer(BigInt::from(e[k])))
        });
        Self::from_terms(self.nvars, terms)
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (dl_e, dl_c) = d.lead()?;
        let mut rem = self.clone();
        let mut quot = Self::zero(self.nvars);
        while let Some((re, rc)) = rem.lead() {
            let e: Option<Exps> = re.iter().zip(dl_e).map(|(a, b)| a.checked_sub(*b)).collect();
            let t = Self::monomial(e?, rc / dl_c);
            rem = &rem - &(&t * d);
            quot = &quot + &t;
        }
        Some(quot)
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        let var = (0..self.nvars).find(|&k| self.mentions(k) || other.mentions(k));
        let Some(var) = var else {
            return Self::one(self.nvars);
        };
        let a = self.to_univariate(var);
        let b = other.to_univariate(var);
        let (ca, pa) = primitive(&a);
        let (cb, pb) = primitive(&b);
        let content = ca.gcd(&cb);
        let g = prs_gcd(pa, pb);
        (&content * &from_univariate(&g, var)).monic()
    }

    fn mentions(&self, k: usize) -> bool {
        self.terms.keys().any(|e| e[k] > 0)
    }

    /// Coefficients of `x_var^0, x_var^1, ...`, each free of `x_var`.
    fn to_univariate(&self, var: usize) -> Vec<Poly> {
        let deg = self.terms.keys().map(|e| e[var]).max().unwrap_or(0) as usize;
        let mut out = vec![Self::zero(self.nvars); deg + 1];
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = std::mem::replace(&mut e2[var], 0) as usize;
            out[k].add_term(e2, c.clone());
        }
        out
    }

    /// Substitutes rational values for all variables.
    pub fn evaluate(&self, point: &[BigRational]) -> BigRational {
        self.terms.iter().fold(BigRational::zero(), |acc, (e, c)| {
            let mono = e.iter().zip(point).fold(BigRational::one(), |m, (k, x)| m * num_traits::pow(x.clone(), *k as usize));
            acc + c * mono
        })
    }

    /// Terms in descending graded-lex order.
    pub fn sorted_terms(&self) -> Vec<(&Exps, &BigRational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        v
    }
}

fn trim(mut v: Vec<Poly>) -> Vec<Poly> {
    while v.len() > 1 && v.last().is_some_and(Poly::is_zero) {
        v.pop();
    }
    v
}

fn degree(v: &[Poly]) -> Option<usize> {
    v.iter().rposition(|c| !c.is_zero())
}

/// `(content, primitive part)` of a univariate polynomial with polynomial coefficients.
fn primitive(v: &[Poly]) -> (Poly, Vec<Poly>) {
    let nvars = v.first().map(Poly::nvars).unwrap_or(0);
    let content = v.iter().fold(Poly::zero(nvars), |g, c| g.gcd(c));
    if content.is_zero() {
        return (content, v.to_vec());
    }
    let pp: Vec<Poly> = v.iter().map(|c| c.div_exact(&content).expect("content divides every coefficient")).collect();
    // fix the scalar unit too, otherwise rational coefficients grow without bound in the PRS
    let unit = pp.iter().rev().find(|c| !c.is_zero()).map(Poly::leading_coefficient);
    let pp = match unit {
        Some(u) => pp.iter().map(|c| c.scale(&u.recip())).collect(),
        None => pp,
    };
    (content, trim(pp))
}

/// Pseudo-remainder of `a` by `b` (`deg a >= deg b`, `b != 0`).
fn prem(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    let db = degree(b).expect("nonzero divisor");
    let lc = &b[db];
    let mut r = a.to_vec();
    let mut steps = degree(a).map_or(0, |da| da + 1 - db.min(da + 1));
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let t = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c = &*c * lc;
        }
        for (k, bc) in b.iter().enumerate() {
            r[k + shift] = &r[k + shift] - &(&t * bc);
        }
        steps = steps.saturating_sub(1);
    }
    let factor = lc.pow(steps as u32);
    trim(r.into_iter().map(|c| &c * &factor).collect())
}

fn prs_gcd(mut a: Vec<Poly>, mut b: Vec<Poly>) -> Vec<Poly> {
    if degree(&a) < degree(&b) {
        std::mem::swap(&mut a, &mut b);
    }
    while degree(&b).is_some() {
        let r = prem(&a, &b);
        a = b;
        b = if degree(&r).is_some() { primitive(&r).1 } else { r };
    }
    primitive(&a).1
}

fn from_univariate(v: &[Poly], var: usize) -> Poly {
    let nvars = v.first().map(Poly::nvars).unwrap_or(0);
    let mut out = Poly::zero(nvars);
    for (k, c) in v.iter().enumerate() {
        for (e, a) in &c.terms {
            let mut e2 = e.clone();
            e2[var] += k as u32;
            out.add_term(e2, a.clone());
        }
    }
    out
}

pub(crate) fn fmt_rational(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

pub(crate) fn fmt_monomial(e: &[u32], f: &mut impl fmt::Write) -> fmt::Result {
    let mut first = true;
    for (i, &k) in e.iter().enumerate() {
        if k == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        write!(f, "x{}", i + 1)?;
        if k > 1 {
            write!(f, "^{k}")?;
        }
    }
    Ok(())
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.sorted_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            match (i == 0, neg) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            let is_const = e.iter().all(|&k| k == 0);
            if is_const {
                f.write_str(&fmt_rational(&mag))?;
            } else {
                if !mag.is_one() {
                    write!(f, "{}*", fmt_rational(&mag))?;
                }
                fmt_monomial(e, f)?;
            }
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars.max(rhs.nvars));
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}
