//! Differential type / typical differential dimension calculus.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::binomial_poly::{bigint_json, NumericalPolynomial};
use crate::error::{Error, Result};
use crate::lattice::LeaderSet;

/// `(tau, alpha)`: differential type and typical differential dimension.
///
/// `tau == -1` is the bottom value carried by the zero polynomial, i.e. a
/// trivial (one-point) quotient.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InvariantPair {
    tau: i64,
    alpha: BigInt,
}

impl InvariantPair {
    pub fn new(tau: i64, alpha: impl Into<BigInt>) -> Result<Self> {
        let alpha = alpha.into();
        let ok = match tau {
            -1 => alpha.is_zero(),
            t if t >= 0 => alpha.is_positive(),
            _ => false,
        };
        if ok {
            Ok(Self { tau, alpha })
        } else {
            Err(Error::Invalid(format!("invariant pair ({tau}, {alpha}) violates tau=-1 <=> alpha=0")))
        }
    }

    pub(crate) fn from_parts(tau: i64, alpha: BigInt) -> Self {
        Self { tau, alpha }
    }

    pub fn bottom() -> Self {
        Self { tau: -1, alpha: BigInt::zero() }
    }

    pub fn tau(&self) -> i64 {
        self.tau
    }

    pub fn alpha(&self) -> &BigInt {
        &self.alpha
    }

    pub fn is_bottom(&self) -> bool {
        self.tau < 0
    }

    pub fn to_json(&self, exact: bool) -> Value {
        json!({ "tau": self.tau, "alpha": bigint_json(&self.alpha), "exact": exact })
    }
}

impl fmt::Display for InvariantPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(tau={}, alpha={})", self.tau, self.alpha)
    }
}

/// Invariants of a tuple `(a, b)` from those of `a` and of `b` over `a`:
/// the larger type wins, and equal types add their dimensions.
pub fn pair_combine(a: &InvariantPair, b_given_a: &InvariantPair) -> InvariantPair {
    match a.tau.cmp(&b_given_a.tau) {
        Ordering::Equal => InvariantPair { tau: a.tau, alpha: &a.alpha + &b_given_a.alpha },
        Ordering::Greater => a.clone(),
        Ordering::Less => b_given_a.clone(),
    }
}

/// Kolchin polynomial of a system in several differential indeterminates,
/// one leader set per indeterminate. Only correct up to a nonnegative
/// additive constant, hence the returned `exact == false` flag.
pub fn system_kolchin(leader_sets: &[LeaderSet]) -> Result<(NumericalPolynomial, bool)> {
    if let Some(first) = leader_sets.first() {
        if let Some(bad) = leader_sets.iter().find(|e| e.m() != first.m()) {
            return Err(Error::DimensionMismatch { expected: first.m(), found: bad.m() });
        }
    }
    let total = leader_sets.iter().map(|e| e.omega().polynomial).sum();
    Ok((total, false))
}

/// Invariants of `G/H` for coordinate-split groups, where the quotient's
/// Kolchin polynomial is `w_G - w_H`.
pub fn quotient_invariants(omega_g: &NumericalPolynomial, omega_h: &NumericalPolynomial) -> Result<InvariantPair> {
    if omega_g.compare_eventual(omega_h).ordering == Ordering::Less {
        return Err(Error::InconsistentQuotient);
    }
    Ok((omega_g - omega_h).invariants())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Indecomposability {
    pub holds: bool,
    pub witness: Option<String>,
}

/// `X` is n-indecomposable relative to the supplied quotient family when every
/// quotient is trivial (bottom) or has type at least `n`.
pub fn is_n_indecomposable<S: AsRef<str>>(quotients: &[(S, InvariantPair)], n: i64) -> Indecomposability {
    let witness = quotients
        .iter()
        .find(|(_, q)| !q.is_bottom() && q.tau < n)
        .map(|(label, _)| label.as_ref().to_string());
    Indecomposability { holds: witness.is_none(), witness }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectednessLevel {
    /// Largest `n <= tau(G)` at which `G` is n-indecomposable relative to the family.
    pub level: i64,
    pub tau: i64,
    pub strongly_connected: bool,
    /// First quotient that breaks indecomposability at `level + 1`, if any.
    pub witness: Option<String>,
}

pub fn strong_connectedness_level<S: AsRef<str>>(
    omega_g: &NumericalPolynomial,
    quotients: &[(S, InvariantPair)],
) -> ConnectednessLevel {
    let tau = omega_g.invariants().tau();
    let mut level = tau.min(0);
    let mut witness = None;
    for n in 0..=tau {
        let check = is_n_indecomposable(quotients, n);
        if check.holds {
            level = n;
        } else {
            witness = check.witness;
            break;
        }
    }
    ConnectednessLevel { level, tau, strongly_connected: level == tau, witness }
}
