//! Derivative monomials, the orderly ranking, and leader-set lattice counting.
//!
//! A derivative monomial `d1^e1 ... dm^em` is an [`ExponentVector`]. A
//! [`LeaderSet`] is a finite set of such vectors; the Kolchin polynomial of a
//! leader set counts lattice points of order at most `s` that dominate none
//! of the leaders.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::binomial_poly::{binomial_truncated, NumericalPolynomial};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentVector(Vec<u32>);

impl ExponentVector {
    pub fn new(entries: Vec<u32>) -> Self {
        Self(entries)
    }

    pub fn zero(m: usize) -> Self {
        Self(vec![0; m])
    }

    /// `d_i` as an exponent vector, with `i` 1-based.
    pub fn unit(m: usize, i: usize) -> Self {
        let mut v = vec![0; m];
        v[i - 1] = 1;
        Self(v)
    }

    pub fn m(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn ord(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.m() == other.m() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.m(), found: other.m() })
        }
    }

    /// Product order: `self >= other` componentwise.
    pub fn dominates(&self, other: &Self) -> Result<bool> {
        self.check_dim(other)?;
        Ok(self.dominates_unchecked(other))
    }

    pub(crate) fn dominates_unchecked(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }

    /// Graded-lex: order first, then lexicographic with `d1 > d2 > ... > dm`.
    pub fn orderly_compare(&self, other: &Self) -> Result<Ordering> {
        self.check_dim(other)?;
        Ok(self.orderly_cmp(other))
    }

    pub(crate) fn orderly_cmp(&self, other: &Self) -> Ordering {
        self.ord().cmp(&other.ord()).then_with(|| self.0.cmp(&other.0))
    }

    /// Componentwise maximum.
    pub fn join(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other`, provided `self` dominates `other`.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        self.0.iter().zip(&other.0).map(|(a, b)| a.checked_sub(*b)).collect::<Option<Vec<_>>>().map(Self)
    }

    /// All vectors componentwise below `self`, including zero and `self`.
    pub fn divisors(&self) -> Vec<Self> {
        let mut out = vec![Vec::with_capacity(self.m())];
        for &e in &self.0 {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<u32>| {
                    (0..=e).map(move |k| {
                        let mut p = prefix.clone();
                        p.push(k);
                        p
                    })
                })
                .collect();
        }
        out.into_iter().map(Self).collect()
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str(")")
    }
}

impl FromStr for ExponentVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Invalid(format!("expected `(e1,...,em)`, got `{s}`")))?;
        inner
            .split(',')
            .map(|e| e.trim().parse::<u32>().map_err(|_| Error::Invalid(format!("bad exponent `{e}` in `{s}`"))))
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }
}

/// Finite set of leaders in `N^m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeaderSet {
    m: usize,
    points: Vec<ExponentVector>,
}

/// Kolchin polynomial of a leader set together with the order from which the
/// polynomial agrees with the lattice count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaE {
    pub polynomial: NumericalPolynomial,
    pub threshold: u64,
}

impl LeaderSet {
    pub fn new(m: usize, points: Vec<ExponentVector>) -> Result<Self> {
        if m == 0 {
            return Err(Error::Invalid("need at least one derivation".into()));
        }
        if let Some(p) = points.iter().find(|p| p.m() != m) {
            return Err(Error::DimensionMismatch { expected: m, found: p.m() });
        }
        let mut points = points;
        points.sort();
        points.dedup();
        Ok(Self { m, points })
    }

    /// Parses the `(2,0);(1,1)` text form. An empty string is the empty set.
    pub fn parse(m: usize, text: &str) -> Result<Self> {
        let points = text
            .split(';')
            .filter(|p| !p.trim().is_empty())
            .map(str::parse)
            .collect::<Result<Vec<_>>>()?;
        Self::new(m, points)
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let bad = || Error::Invalid(format!("expected {{\"m\":..,\"points\":[[..],..]}}, got {value}"));
        let m = value.get("m").and_then(Value::as_u64).ok_or_else(bad)? as usize;
        let points = value
            .get("points")
            .and_then(Value::as_array)
            .ok_or_else(bad)?
            .iter()
            .map(|p| {
                p.as_array()
                    .and_then(|es| es.iter().map(|e| e.as_u64().map(|e| e as u32)).collect::<Option<Vec<_>>>())
                    .map(ExponentVector)
                    .ok_or_else(bad)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(m, points)
    }

    pub fn to_json(&self) -> Value {
        json!({ "m": self.m, "points": self.points.iter().map(|p| p.0.clone()).collect::<Vec<_>>() })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn points(&self) -> &[ExponentVector] {
        &self.points
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Keeps only the minimal elements in the product order.
    pub fn antichain_reduce(&self) -> Self {
        let points = self
            .points
            .iter()
            .filter(|p| !self.points.iter().any(|q| q != *p && p.dominates_unchecked(q)))
            .cloned()
            .collect();
        Self { m: self.m, points }
    }

    pub fn is_antichain(&self) -> bool {
        self.antichain_reduce().points.len() == self.points.len()
    }

    /// Brute-force count of `n in N^m` with `|n| <= s` dominating no leader.
    pub fn count_direct(&self, s: u64) -> u64 {
        fn walk(points: &[ExponentVector], prefix: &mut Vec<u32>, m: usize, budget: u64) -> u64 {
            if prefix.len() == m {
                let hit = points.iter().any(|p| prefix.iter().zip(&p.0).all(|(a, b)| a >= b));
                return u64::from(!hit);
            }
            let mut total = 0;
            for e in 0..=budget {
                prefix.push(e as u32);
                total += walk(points, prefix, m, budget - e);
                prefix.pop();
            }
            total
        }
        walk(&self.points, &mut Vec::with_capacity(self.m), self.m, s)
    }

    /// Inclusion-exclusion over subsets of the reduced antichain, grouped by
    /// the order of the subset's join: `order -> signed multiplicity`.
    fn inclusion_exclusion(&self) -> BTreeMap<u64, i64> {
        let reduced = self.antichain_reduce();
        let mut terms = BTreeMap::new();
        // (join, sign) for every subset, built one leader at a time
        let mut subsets: Vec<(ExponentVector, i64)> = vec![(ExponentVector::zero(self.m), 1)];
        for p in &reduced.points {
            let extended: Vec<_> = subsets.iter().map(|(j, s)| (j.join(p), -s)).collect();
            subsets.extend(extended);
        }
        for (join, sign) in subsets {
            *terms.entry(join.ord()).or_insert(0) += sign;
        }
        terms.retain(|_, c| *c != 0);
        terms
    }

    /// Exact count for every `s >= 0`, using truncated binomials.
    pub fn count_exact(&self, s: u64) -> BigInt {
        let m = self.m as u64;
        self.inclusion_exclusion()
            .into_iter()
            .fold(BigInt::zero(), |acc, (n, c)| acc + BigInt::from(c) * binomial_truncated(s as i64 - n as i64 + m as i64, m))
    }

    /// Kolchin polynomial of the leader set (the `w_E` count as a numerical
    /// polynomial), valid from `threshold` on.
    pub fn omega(&self) -> OmegaE {
        let m = self.m as u64;
        let polynomial = self
            .inclusion_exclusion()
            .into_iter()
            .map(|(n, c)| &NumericalPolynomial::shifted_binomial(m, n) * &BigInt::from(c))
            .sum();
        let reduced = self.antichain_reduce();
        let threshold = reduced.points.iter().fold(ExponentVector::zero(self.m), |j, p| j.join(p)).ord();
        OmegaE { polynomial, threshold }
    }
}

impl fmt::Display for LeaderSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.points.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// Closed form `C(t+m, m) - C(t-N+m, m)` for a single leader of order `N`.
pub fn omega_single_leader(leader: &ExponentVector) -> NumericalPolynomial {
    let m = leader.m() as u64;
    &NumericalPolynomial::shifted_binomial(m, 0) - &NumericalPolynomial::shifted_binomial(m, leader.ord())
}
