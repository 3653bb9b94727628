//! Upper-unitriangular differential algebraic groups.
//!
//! Each strictly-upper coordinate carries an annihilator set `A` of
//! derivation indices. In [`Mode::Componentwise`] the coordinate satisfies
//! `d_a(u) = 0` for every `a` in `A`; in [`Mode::Literal`] it satisfies the
//! single composed equation `(prod_{a in A} d_a)(u) = 0`. Group-law closure,
//! normality of coordinate-kill subgroups, and the n-connected component
//! search are all decided on generic symbolic elements.

mod diffpoly;
mod matrix;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub use diffpoly::{DiffPoly, DiffSymbol};
pub use matrix::SymMatrix;

use crate::binomial_poly::NumericalPolynomial;
use crate::error::{Error, Result};
use crate::invariants::{quotient_invariants, InvariantPair};
use crate::lattice::{ExponentVector, LeaderSet};

/// Hard cap on coordinates for the exhaustive kill-subset search.
const MAX_SEARCH_COORDS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Componentwise,
    #[serde(alias = "literal-composed")]
    Literal,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Componentwise => "componentwise",
            Mode::Literal => "literal",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "componentwise" => Ok(Mode::Componentwise),
            "literal" | "literal-composed" => Ok(Mode::Literal),
            _ => Err(Error::Invalid(format!("unknown mode `{s}` (componentwise|literal)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coordinate {
    pub pos: (usize, usize),
    pub name: String,
    #[serde(default)]
    pub ann: BTreeSet<usize>,
    /// Coordinate fixed to zero (a coordinate-kill subgroup).
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub killed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnipotentGroupSpec {
    pub k: usize,
    pub m: usize,
    pub coords: Vec<Coordinate>,
    #[serde(default)]
    pub mode: Mode,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// `"product"` or `"inverse"`.
    pub element: &'static str,
    pub pos: (usize, usize),
    pub name: String,
    /// The constraint that failed, e.g. `d1`, `d1d2`, or `zero` for a killed entry.
    pub constraint: String,
    pub residual: DiffPoly,
}

impl Violation {
    pub fn to_json(&self) -> Value {
        json!({
            "element": self.element,
            "pos": [self.pos.0, self.pos.1],
            "name": self.name,
            "constraint": self.constraint,
            "residual": self.residual.to_string(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureReport {
    pub violations: Vec<Violation>,
}

impl ClosureReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "closed": self.is_ok(),
            "violations": self.violations.iter().map(Violation::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Result of killing a set of coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KillReport {
    pub subgroup: UnipotentGroupSpec,
    pub killed: Vec<String>,
    pub closure: ClosureReport,
    /// Killed entries of `g h g^-1` that fail to vanish, with the residual.
    pub conjugation_residuals: Vec<((usize, usize), DiffPoly)>,
}

impl KillReport {
    pub fn is_subgroup(&self) -> bool {
        self.closure.is_ok()
    }

    pub fn is_normal(&self) -> bool {
        self.conjugation_residuals.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "killed": self.killed,
            "is_subgroup": self.is_subgroup(),
            "is_normal": self.is_normal(),
            "closure": self.closure.to_json(),
            "conjugation_residuals": self.conjugation_residuals.iter().map(|(p, r)| json!({
                "pos": [p.0, p.1], "residual": r.to_string()
            })).collect::<Vec<_>>(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateAudit {
    pub killed: Vec<String>,
    pub is_subgroup: bool,
    pub is_normal: bool,
    /// Invariants of `G/H`; `None` when `H` is not a subgroup.
    pub quotient: Option<InvariantPair>,
    pub kept: bool,
}

impl CandidateAudit {
    pub fn to_json(&self) -> Value {
        let quotient = match &self.quotient {
            Some(q) => json!({ "tau": q.tau(), "alpha": crate::binomial_poly::bigint_json(q.alpha()) }),
            None => Value::Null,
        };
        json!({
            "killed": self.killed,
            "is_subgroup": self.is_subgroup,
            "is_normal": self.is_normal,
            "quotient": quotient,
            "kept": self.kept,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentReport {
    pub n: i64,
    /// Coordinates killed in the component, ordered by position.
    pub killed: Vec<String>,
    pub component: UnipotentGroupSpec,
    pub audit: Vec<CandidateAudit>,
}

impl ComponentReport {
    pub const FAMILY: &'static str = "relative to coordinate-kill family";

    pub fn to_json(&self) -> Value {
        let omega = self.component.group_omega();
        json!({
            "n": self.n,
            "killed": self.killed,
            "family": Self::FAMILY,
            "component": {
                "free": self.component.coords.iter().filter(|c| !c.killed).map(|c| c.name.clone()).collect::<Vec<_>>(),
                "omega": omega.to_json()["binomial_coeffs"].clone(),
                "omega_text": omega.to_string(),
                "tau": omega.invariants().tau(),
            },
            "audit": self.audit.iter().map(CandidateAudit::to_json).collect::<Vec<_>>(),
        })
    }
}

impl UnipotentGroupSpec {
    pub fn new(k: usize, m: usize, coords: Vec<Coordinate>, mode: Mode) -> Result<Self> {
        let spec = Self { k, m, coords, mode };
        spec.validate()?;
        Ok(spec.sorted())
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let spec: Self = serde_json::from_str(text).map_err(|e| Error::InvalidSpec(e.to_string()))?;
        spec.validate()?;
        Ok(spec.sorted())
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("spec serializes")
    }

    fn sorted(mut self) -> Self {
        self.coords.sort_by_key(|c| c.pos);
        self
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSpec(msg));
        if self.k < 2 || self.m == 0 {
            return bad(format!("need k >= 2 and m >= 1, got k={} m={}", self.k, self.m));
        }
        let expected: BTreeSet<(usize, usize)> =
            (1..=self.k).flat_map(|i| (i + 1..=self.k).map(move |j| (i, j))).collect();
        let given: BTreeSet<(usize, usize)> = self.coords.iter().map(|c| c.pos).collect();
        if given.len() != self.coords.len() || given != expected {
            return bad("coordinates must cover each strictly-upper position exactly once".into());
        }
        let names: BTreeSet<&str> = self.coords.iter().map(|c| c.name.as_str()).collect();
        if names.len() != self.coords.len() {
            return bad("coordinate names must be unique".into());
        }
        for c in &self.coords {
            if c.name.is_empty() {
                return bad(format!("empty name at {:?}", c.pos));
            }
            if let Some(d) = c.ann.iter().find(|&&d| d == 0 || d > self.m) {
                return bad(format!("annihilator index {d} of {} out of range 1..={}", c.name, self.m));
            }
        }
        Ok(())
    }

    pub fn with_mode(&self, mode: Mode) -> Self {
        Self { mode, ..self.clone() }
    }

    pub fn coordinate(&self, pos: (usize, usize)) -> Option<&Coordinate> {
        self.coords.iter().find(|c| c.pos == pos)
    }

    pub fn coordinate_by_name(&self, name: &str) -> Option<&Coordinate> {
        self.coords.iter().find(|c| c.name == name)
    }

    /// Generic element whose coordinate symbols are `rename(name)`.
    pub fn generic_element(&self, rename: impl Fn(&str) -> String) -> SymMatrix {
        let mut a = SymMatrix::identity(self.k);
        for c in self.coords.iter().filter(|c| !c.killed) {
            a.set(c.pos.0, c.pos.1, DiffPoly::symbol(DiffSymbol::new(rename(&c.name), c.pos, self.m)));
        }
        a
    }

    /// Whether a derivative symbol is zero under this spec's constraints.
    pub fn vanishes(&self, s: &DiffSymbol) -> bool {
        let Some(c) = self.coordinate(s.pos) else { return false };
        if c.killed {
            return true;
        }
        match self.mode {
            Mode::Componentwise => c.ann.iter().any(|&d| s.deriv[d - 1] > 0),
            Mode::Literal => !c.ann.is_empty() && c.ann.iter().all(|&d| s.deriv[d - 1] > 0),
        }
    }

    /// Checks that `expr`, sitting at the coordinate `c`, satisfies `c`'s constraints.
    fn entry_violations(&self, element: &'static str, c: &Coordinate, expr: &DiffPoly) -> Vec<Violation> {
        let violation = |constraint: String, residual: DiffPoly| Violation {
            element,
            pos: c.pos,
            name: c.name.clone(),
            constraint,
            residual,
        };
        if c.killed {
            return if expr.is_zero() { vec![] } else { vec![violation("zero".into(), expr.clone())] };
        }
        let reduce = |p: DiffPoly| p.reduce(|s| self.vanishes(s));
        match self.mode {
            Mode::Componentwise => c
                .ann
                .iter()
                .filter_map(|&d| {
                    let r = reduce(expr.derive(d));
                    (!r.is_zero()).then(|| violation(format!("d{d}"), r))
                })
                .collect(),
            Mode::Literal if c.ann.is_empty() => vec![],
            Mode::Literal => {
                let derived = c.ann.iter().fold(expr.clone(), |p, &d| p.derive(d));
                let r = reduce(derived);
                let label: String = c.ann.iter().map(|d| format!("d{d}")).collect();
                if r.is_zero() {
                    vec![]
                } else {
                    vec![violation(label, r)]
                }
            }
        }
    }

    fn matrix_violations(&self, element: &'static str, x: &SymMatrix) -> Vec<Violation> {
        self.coords
            .iter()
            .flat_map(|c| self.entry_violations(element, c, x.entry(c.pos.0, c.pos.1)))
            .collect()
    }

    /// Closure of the constraint set under products and inverses, checked on
    /// generic elements `a` (plain names) and `b` (names primed).
    pub fn check_closure(&self) -> ClosureReport {
        let a = self.generic_element(str::to_string);
        let b = self.generic_element(|n| format!("{n}'"));
        let mut violations = self.matrix_violations("product", &(&a * &b));
        violations.extend(self.matrix_violations("inverse", &a.unipotent_inverse()));
        ClosureReport { violations }
    }

    /// Kolchin polynomial of one coordinate's solution group.
    ///
    /// Componentwise constraints give the leader set `{e_a : a in A}`; in
    /// literal mode the single composed leader `sum_{a in A} e_a` is used.
    pub fn coordinate_omega(&self, pos: (usize, usize)) -> Result<NumericalPolynomial> {
        let c = self
            .coordinate(pos)
            .ok_or_else(|| Error::InvalidSpec(format!("no coordinate at {pos:?}")))?;
        if c.killed {
            return Ok(NumericalPolynomial::zero());
        }
        let units = c.ann.iter().map(|&d| ExponentVector::unit(self.m, d));
        let leaders: Vec<ExponentVector> = match self.mode {
            Mode::Componentwise => units.collect(),
            Mode::Literal if c.ann.is_empty() => vec![],
            Mode::Literal => vec![units.reduce(|a, b| a.add(&b)).expect("nonempty")],
        };
        Ok(LeaderSet::new(self.m, leaders)?.omega().polynomial)
    }

    /// Sum of coordinate polynomials.
    pub fn group_omega(&self) -> NumericalPolynomial {
        self.coords
            .iter()
            .map(|c| self.coordinate_omega(c.pos).expect("coordinate exists"))
            .sum()
    }

    pub fn with_killed(&self, positions: &BTreeSet<(usize, usize)>) -> Self {
        let mut out = self.clone();
        for c in out.coords.iter_mut() {
            if positions.contains(&c.pos) {
                c.killed = true;
            }
        }
        out
    }

    fn resolve(&self, names: &[&str]) -> Result<BTreeSet<(usize, usize)>> {
        names
            .iter()
            .map(|n| {
                self.coordinate_by_name(n)
                    .map(|c| c.pos)
                    .ok_or_else(|| Error::InvalidSpec(format!("unknown coordinate `{n}`")))
            })
            .collect()
    }

    /// Kills the named coordinates and decides whether the result is a
    /// (normal) subgroup.
    pub fn subgroup_from_kill(&self, names: &[&str]) -> Result<KillReport> {
        Ok(self.kill_positions(&self.resolve(names)?))
    }

    pub fn kill_positions(&self, positions: &BTreeSet<(usize, usize)>) -> KillReport {
        let sub = self.with_killed(positions);
        let closure = sub.check_closure();
        let g = self.generic_element(|n| format!("{n}'"));
        let h = sub.generic_element(str::to_string);
        let conj = &(&g * &h) * &g.unipotent_inverse();
        let conjugation_residuals = sub
            .coords
            .iter()
            .filter(|c| c.killed)
            .filter_map(|c| {
                let e = conj.entry(c.pos.0, c.pos.1);
                (!e.is_zero()).then(|| (c.pos, e.clone()))
            })
            .collect();
        let killed = sub.coords.iter().filter(|c| c.killed).map(|c| c.name.clone()).collect();
        KillReport { subgroup: sub, killed, closure, conjugation_residuals }
    }

    /// Audits every proper coordinate-kill subgroup `H` (nonempty kill set
    /// among the free coordinates), recording `tau/alpha` of `G/H` and
    /// whether `H` belongs to the family `{H normal : tau(G/H) < n}`.
    pub fn kill_family(&self, n: i64) -> Result<Vec<CandidateAudit>> {
        if self.mode == Mode::Literal {
            return Err(Error::LiteralMode("the coordinate-kill subgroup search"));
        }
        let free: Vec<(usize, usize)> = self.coords.iter().filter(|c| !c.killed).map(|c| c.pos).collect();
        if free.len() > MAX_SEARCH_COORDS {
            return Err(Error::InvalidSpec(format!("{} free coordinates exceed the search limit {MAX_SEARCH_COORDS}", free.len())));
        }
        let omega_g = self.group_omega();
        let mut audit = Vec::new();
        for mask in 1u64..(1 << free.len()) {
            let set: BTreeSet<_> = free.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, p)| *p).collect();
            let report = self.kill_positions(&set);
            let quotient = if report.is_subgroup() {
                Some(quotient_invariants(&omega_g, &report.subgroup.group_omega())?)
            } else {
                None
            };
            let kept = report.is_subgroup() && report.is_normal() && quotient.as_ref().is_some_and(|q| q.tau() < n);
            let killed = set.iter().map(|p| self.coordinate(*p).expect("free coord").name.clone()).collect();
            audit.push(CandidateAudit {
                killed,
                is_subgroup: report.is_subgroup(),
                is_normal: report.is_normal(),
                quotient,
                kept,
            });
        }
        Ok(audit)
    }

    /// The n-connected component relative to the coordinate-kill family:
    /// the intersection of all kept subgroups, i.e. the union of their kill sets.
    pub fn n_connected_component(&self, n: i64) -> Result<ComponentReport> {
        let audit = self.kill_family(n)?;
        let union: BTreeSet<(usize, usize)> = audit
            .iter()
            .filter(|a| a.kept)
            .flat_map(|a| a.killed.iter())
            .map(|name| self.coordinate_by_name(name).expect("audited coord").pos)
            .collect();
        let component = self.with_killed(&union);
        let killed = union.iter().map(|p| self.coordinate(*p).expect("coord").name.clone()).collect();
        Ok(ComponentReport { n, killed, component, audit })
    }

    /// Quotients of this group by its normal coordinate-kill subgroups, as
    /// labelled invariant pairs for the indecomposability predicates.
    pub fn normal_quotients(&self) -> Result<Vec<(String, InvariantPair)>> {
        Ok(self
            .kill_family(0)?
            .into_iter()
            .filter(|a| a.is_subgroup && a.is_normal)
            .map(|a| (a.killed.join(","), a.quotient.expect("subgroup has a quotient")))
            .collect())
    }
}

impl fmt::Display for UnipotentGroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = self.generic_element(str::to_string);
        write!(f, "{a}")
    }
}

/// Symbolic product of two generic elements.
pub fn multiply(a: &SymMatrix, b: &SymMatrix) -> SymMatrix {
    a * b
}

pub fn inverse(a: &SymMatrix) -> SymMatrix {
    a.unipotent_inverse()
}

pub fn commutator(a: &SymMatrix, b: &SymMatrix) -> SymMatrix {
    SymMatrix::commutator(a, b)
}

/// The 4x4 example group: `u12, u1, u123, u2, u23` constrained, `u` free.
pub fn example_four_by_four(mode: Mode) -> UnipotentGroupSpec {
    let c = |pos, name: &str, ann: &[usize]| Coordinate { pos, name: name.into(), ann: ann.iter().copied().collect(), killed: false };
    UnipotentGroupSpec::new(
        4,
        3,
        vec![
            c((1, 2), "u12", &[1, 2]),
            c((1, 3), "u1", &[1]),
            c((1, 4), "u", &[]),
            c((2, 3), "u123", &[1, 2, 3]),
            c((2, 4), "u2", &[2]),
            c((3, 4), "u23", &[2, 3]),
        ],
        mode,
    )
    .expect("valid example")
}

/// The 3x3 Heisenberg-type group with `d_i(u_i) = 0` over two derivations.
pub fn example_heisenberg() -> UnipotentGroupSpec {
    let c = |pos, name: &str, ann: &[usize]| Coordinate { pos, name: name.into(), ann: ann.iter().copied().collect(), killed: false };
    UnipotentGroupSpec::new(3, 2, vec![c((1, 2), "u1", &[1]), c((1, 3), "u", &[]), c((2, 3), "u2", &[2])], Mode::Componentwise)
        .expect("valid example")
}
