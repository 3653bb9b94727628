//! Differential polynomials with integer coefficients over coordinate symbols.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// A derivative `theta(name)` of one coordinate of one group member.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiffSymbol {
    pub name: String,
    /// Matrix position of the coordinate (1-based); decides its constraints.
    pub pos: (usize, usize),
    pub deriv: Vec<u32>,
}

impl DiffSymbol {
    pub fn new(name: impl Into<String>, pos: (usize, usize), m: usize) -> Self {
        Self { name: name.into(), pos, deriv: vec![0; m] }
    }

    fn derived(&self, d: usize) -> Self {
        let mut s = self.clone();
        s.deriv[d - 1] += 1;
        s
    }
}

impl fmt::Display for DiffSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.deriv.iter().all(|&e| e == 0) {
            return f.write_str(&self.name);
        }
        for (i, &e) in self.deriv.iter().enumerate() {
            match e {
                0 => {}
                1 => write!(f, "d{}", i + 1)?,
                _ => write!(f, "d{}^{e}", i + 1)?,
            }
        }
        write!(f, "({})", self.name)
    }
}

type Monomial = Vec<(DiffSymbol, u32)>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct DiffPoly {
    terms: BTreeMap<Monomial, BigInt>,
}

fn mono_mul(a: &Monomial, b: &Monomial) -> Monomial {
    let mut map: BTreeMap<DiffSymbol, u32> = a.iter().cloned().collect();
    for (s, k) in b {
        *map.entry(s.clone()).or_insert(0) += k;
    }
    map.into_iter().collect()
}

impl DiffPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero();
        p.add_term(Vec::new(), c.into());
        p
    }

    pub fn symbol(s: DiffSymbol) -> Self {
        let mut p = Self::zero();
        p.add_term(vec![(s, 1)], BigInt::one());
        p
    }

    fn add_term(&mut self, mono: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(mono).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Vec::new()).is_some_and(One::is_one)
    }

    /// Constant term.
    pub fn constant_term(&self) -> BigInt {
        self.terms.get(&Vec::new()).cloned().unwrap_or_default()
    }

    pub fn symbols(&self) -> impl Iterator<Item = &DiffSymbol> {
        self.terms.keys().flat_map(|m| m.iter().map(|(s, _)| s))
    }

    /// Applies `d_d` with the Leibniz rule (`d` 1-based).
    pub fn derive(&self, d: usize) -> Self {
        let mut out = Self::zero();
        for (mono, c) in &self.terms {
            for (i, (s, k)) in mono.iter().enumerate() {
                let mut rest: Monomial = mono.clone();
                if *k == 1 {
                    rest.remove(i);
                } else {
                    rest[i].1 -= 1;
                }
                let term = mono_mul(&rest, &vec![(s.derived(d), 1)]);
                out.add_term(term, c * BigInt::from(*k));
            }
        }
        out
    }

    /// Drops every monomial containing a symbol for which `vanishes` holds.
    pub fn reduce(&self, vanishes: impl Fn(&DiffSymbol) -> bool) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(mono, _)| !mono.iter().any(|(s, _)| vanishes(s)))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }
}

impl fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        // higher degree first, then by symbol order
        terms.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().map(|(_, k)| k).sum();
            let db: u32 = b.iter().map(|(_, k)| k).sum();
            db.cmp(&da).then_with(|| a.cmp(b))
        });
        for (i, (mono, c)) in terms.into_iter().enumerate() {
            match (i == 0, c.is_negative()) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            if mono.is_empty() {
                write!(f, "{mag}")?;
                continue;
            }
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            for (j, (s, k)) in mono.iter().enumerate() {
                if j > 0 {
                    f.write_str("*")?;
                }
                write!(f, "{s}")?;
                if *k > 1 {
                    write!(f, "^{k}")?;
                }
            }
        }
        Ok(())
    }
}

impl Add for &DiffPoly {
    type Output = DiffPoly;
    fn add(self, rhs: &DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &DiffPoly {
    type Output = DiffPoly;
    fn sub(self, rhs: &DiffPoly) -> DiffPoly {
        self + &(-rhs)
    }
}

impl Neg for &DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        DiffPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Mul for &DiffPoly {
    type Output = DiffPoly;
    fn mul(self, rhs: &DiffPoly) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(mono_mul(ma, mb), ca * cb);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(name: &str) -> DiffPoly {
        DiffPoly::symbol(DiffSymbol::new(name, (1, 2), 2))
    }

    #[test]
    fn leibniz_and_reduction() {
        let p = &(&sym("a") * &sym("a")) * &sym("b");
        let dp = p.derive(1);
        assert_eq!(dp.to_string(), "2*a*d1(a)*b + a^2*d1(b)");
        let r = dp.reduce(|s| s.name == "a" && s.deriv[0] > 0);
        assert_eq!(r.to_string(), "a^2*d1(b)");
        assert!(DiffPoly::constant(7).derive(2).is_zero());
    }

    #[test]
    fn arithmetic() {
        let a = sym("a");
        let b = sym("b");
        assert!((&(&a * &b) - &(&b * &a)).is_zero());
        assert_eq!((&(&a + &b) * &(&a - &b)).to_string(), "a^2 - b^2");
        assert!(DiffPoly::one().is_one());
        assert_eq!(DiffPoly::symbol(DiffSymbol { name: "u".into(), pos: (1, 3), deriv: vec![2, 1] }).to_string(), "d1^2d2(u)");
    }
}
