//! Square matrices over [`DiffPoly`], used for generic unitriangular elements.

use std::fmt;
use std::ops::Mul;

use serde_json::Value;

use super::diffpoly::DiffPoly;

/// `k x k` matrix; positions in the public API are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymMatrix {
    k: usize,
    entries: Vec<DiffPoly>,
}

impl SymMatrix {
    pub fn identity(k: usize) -> Self {
        let entries = (0..k * k).map(|n| if n / k == n % k { DiffPoly::one() } else { DiffPoly::zero() }).collect();
        Self { k, entries }
    }

    pub fn size(&self) -> usize {
        self.k
    }

    pub fn entry(&self, i: usize, j: usize) -> &DiffPoly {
        &self.entries[(i - 1) * self.k + (j - 1)]
    }

    pub fn set(&mut self, i: usize, j: usize, value: DiffPoly) {
        self.entries[(i - 1) * self.k + (j - 1)] = value;
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.k)
    }

    /// Strictly upper and below-diagonal parts are checked separately by callers;
    /// this only tests the unitriangular shape.
    pub fn is_unitriangular(&self) -> bool {
        (1..=self.k).all(|i| {
            (1..=self.k).all(|j| match i.cmp(&j) {
                std::cmp::Ordering::Equal => self.entry(i, j).is_one(),
                std::cmp::Ordering::Greater => self.entry(i, j).is_zero(),
                std::cmp::Ordering::Less => true,
            })
        })
    }

    /// Inverse of a unitriangular matrix: `sum_{j<k} (I - A)^j`.
    pub fn unipotent_inverse(&self) -> Self {
        debug_assert!(self.is_unitriangular());
        let id = Self::identity(self.k);
        let nil = id.zip(self, |a, b| a - b);
        let mut power = id.clone();
        let mut acc = id;
        for _ in 1..self.k {
            power = &power * &nil;
            acc = acc.zip(&power, |a, b| a + b);
        }
        acc
    }

    /// `a b a^-1 b^-1`.
    pub fn commutator(a: &Self, b: &Self) -> Self {
        &(&(a * b) * &a.unipotent_inverse()) * &b.unipotent_inverse()
    }

    fn zip(&self, other: &Self, f: impl Fn(&DiffPoly, &DiffPoly) -> DiffPoly) -> Self {
        Self { k: self.k, entries: self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect() }
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            (1..=self.k)
                .map(|i| Value::Array((1..=self.k).map(|j| Value::String(self.entry(i, j).to_string())).collect()))
                .collect(),
        )
    }
}

impl Mul for &SymMatrix {
    type Output = SymMatrix;
    fn mul(self, rhs: &SymMatrix) -> SymMatrix {
        let k = self.k;
        let mut out = SymMatrix { k, entries: vec![DiffPoly::zero(); k * k] };
        for i in 1..=k {
            for j in 1..=k {
                let mut acc = DiffPoly::zero();
                for l in 1..=k {
                    let (a, b) = (self.entry(i, l), rhs.entry(l, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                out.set(i, j, acc);
            }
        }
        out
    }
}

impl fmt::Display for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 1..=self.k {
            let row: Vec<String> = (1..=self.k).map(|j| self.entry(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}
