//! Operator expression grammar.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' INT)?
//! atom   := INT | 'x'N | 'd'N | alias | '(' expr ')'
//! ```
//!
//! `*` is operator composition, so `d1*x1` is `x1*d1 + 1`. Division is only
//! allowed by a nonzero coefficient, and by a non-constant one only when the
//! dividend is itself a coefficient.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::operator::DiffOperator;
use crate::ratfun::RatFun;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push((start, Tok::Int(s.parse().expect("digits"))));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((start, Tok::Ident(chars[start..i].iter().collect())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(Error::Syntax { pos: i, msg: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

/// Named coefficient aliases such as `c2 = x1`.
#[derive(Debug, Clone, Default)]
pub struct Definitions {
    aliases: BTreeMap<String, DiffOperator>,
}

impl Definitions {
    pub fn new() -> Self {
        Self::default()
    }

    /// Parses `name=expr` and registers it. Later definitions may refer to
    /// earlier ones.
    pub fn define(&mut self, m: usize, definition: &str) -> Result<()> {
        let (name, expr) = definition
            .split_once('=')
            .ok_or_else(|| Error::Syntax { pos: 0, msg: format!("expected name=expr, got `{definition}`") })?;
        let name = name.trim();
        let valid = name.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !valid || reserved(name) {
            return Err(Error::Syntax { pos: 0, msg: format!("`{name}` cannot be used as an alias name") });
        }
        let value = parse_operator(m, expr, self)?;
        self.aliases.insert(name.to_string(), value);
        Ok(())
    }

    pub fn from_list<S: AsRef<str>>(m: usize, defs: &[S]) -> Result<Self> {
        let mut d = Self::new();
        for def in defs {
            d.define(m, def.as_ref())?;
        }
        Ok(d)
    }
}

/// `x<digits>` and `d<digits>` are reserved for variables and derivations.
fn reserved(name: &str) -> bool {
    let mut cs = name.chars();
    matches!(cs.next(), Some('x' | 'd')) && {
        let rest = cs.as_str();
        !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit())
    }
}

struct Parser<'a> {
    m: usize,
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    defs: &'a Definitions,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { pos: self.here(), msg: msg.into() })
    }

    fn expr(&mut self) -> Result<DiffOperator> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<DiffOperator> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.compose(&self.unary()?)?;
            } else if self.eat('/') {
                let at = self.here();
                let rhs = self.unary()?;
                acc = self.divide(acc, rhs, at)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn divide(&self, lhs: DiffOperator, rhs: DiffOperator, at: usize) -> Result<DiffOperator> {
        let Some(c) = rhs.as_coefficient() else {
            return Err(Error::Syntax { pos: at, msg: "cannot divide by an operator".into() });
        };
        let inv = c.recip().map_err(|_| Error::Syntax { pos: at, msg: "division by zero".into() })?;
        if c.constant_value().is_none() && lhs.as_coefficient().is_none() {
            return Err(Error::Syntax { pos: at, msg: "division of an operator by a non-constant coefficient is ambiguous".into() });
        }
        DiffOperator::multiplication(inv).compose(&lhs)
    }

    fn unary(&mut self) -> Result<DiffOperator> {
        if self.eat('-') {
            Ok(-&self.unary()?)
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<DiffOperator> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        match self.peek().cloned() {
            Some(Tok::Int(k)) => {
                let k: u32 = k.try_into().or_else(|_| self.err("exponent too large"))?;
                self.pos += 1;
                Ok(base.pow(k))
            }
            _ => self.err("expected a nonnegative integer exponent"),
        }
    }

    fn atom(&mut self) -> Result<DiffOperator> {
        let at = self.here();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(DiffOperator::multiplication(RatFun::from_rational(self.m, BigRational::from_integer(n))))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                self.ident(&name, at)
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected `)`");
                }
                Ok(inner)
            }
            Some(Tok::Sym(c)) => self.err(format!("unexpected `{c}`")),
            None => self.err("unexpected end of input"),
        }
    }

    fn ident(&self, name: &str, at: usize) -> Result<DiffOperator> {
        if reserved(name) {
            let index: usize = name[1..].parse().unwrap_or(0);
            if index == 0 || index > self.m {
                let kind = if name.starts_with('x') { "variable" } else { "derivation" };
                return Err(Error::Syntax { pos: at, msg: format!("{kind} index {index} out of range 1..={}", self.m) });
            }
            return if name.starts_with('x') {
                Ok(DiffOperator::multiplication(RatFun::var(self.m, index)))
            } else {
                DiffOperator::derivation(self.m, index)
            };
        }
        match self.defs.aliases.get(name) {
            Some(op) if op.m() == self.m => Ok(op.clone()),
            Some(op) => Err(Error::DimensionMismatch { expected: self.m, found: op.m() }),
            None => Err(Error::Undefined { name: name.to_string(), pos: at }),
        }
    }
}

/// Parses an operator expression over `m` derivations.
pub fn parse_operator(m: usize, text: &str, defs: &Definitions) -> Result<DiffOperator> {
    if m == 0 || m > 9 {
        return Err(Error::Invalid(format!("number of derivations must be in 1..=9, got {m}")));
    }
    let mut p = Parser { m, toks: lex(text)?, pos: 0, end: text.chars().count(), defs };
    let op = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(op)
}

/// Parses an expression that must be a pure coefficient (no derivations).
pub fn parse_coefficient(m: usize, text: &str, defs: &Definitions) -> Result<RatFun> {
    parse_operator(m, text, defs)?
        .as_coefficient()
        .ok_or_else(|| Error::Invalid(format!("`{text}` is an operator, expected a coefficient")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::ExponentVector;
    use proptest::prelude::*;

    fn parse(m: usize, s: &str) -> Result<DiffOperator> {
        parse_operator(m, s, &Definitions::new())
    }

    fn ev(e: &[u32]) -> ExponentVector {
        ExponentVector::new(e.to_vec())
    }

    #[test]
    fn simple_operator() {
        let op = parse(2, "d1^2 - d2").unwrap();
        let terms: Vec<_> = op.terms().map(|(e, c)| (e.clone(), c.to_string())).collect();
        assert_eq!(terms, [(ev(&[0, 1]), "-1".to_string()), (ev(&[2, 0]), "1".to_string())]);
    }

    #[test]
    fn aliases_and_composition_order() {
        let defs = Definitions::from_list(2, &["c2=x1"]).unwrap();
        let op = parse_operator(2, "c2*d1^3 - c2*d1^2*d2 - 2*c2*d1*d2 + c2^2*d2^2 + 2*d2", &defs).unwrap();
        assert_eq!(op.to_string(), "x1*d1^3 - x1*d1^2*d2 - 2*x1*d1*d2 + x1^2*d2^2 + 2*d2");
        assert_eq!(parse(2, "d1*x1").unwrap().to_string(), "x1*d1 + 1");
        assert_eq!(parse(2, "3/2*x1").unwrap().to_string(), "3/2*x1");
        assert_eq!(parse(2, "x1/(x1*x2)").unwrap().to_string(), "(1)/(x2)");
    }

    #[test]
    fn errors() {
        assert!(matches!(parse(2, "d0"), Err(Error::Syntax { pos: 0, .. })));
        assert!(matches!(parse(2, "d3"), Err(Error::Syntax { .. })));
        assert!(matches!(parse(2, "x1 + c2"), Err(Error::Undefined { ref name, pos: 5 }) if name == "c2"));
        assert!(matches!(parse(2, "d1 +"), Err(Error::Syntax { pos: 4, .. })));
        assert!(matches!(parse(2, "(d1"), Err(Error::Syntax { .. })));
        assert!(matches!(parse(2, "d1 / 0"), Err(Error::Syntax { .. })));
        assert!(matches!(parse(2, "1 / d1"), Err(Error::Syntax { .. })));
        assert!(matches!(parse(2, "d1 / x1"), Err(Error::Syntax { .. })));
        assert!(matches!(parse(2, "x1^x2"), Err(Error::Syntax { .. })));
        assert!(matches!(parse(2, "1.5"), Err(Error::Syntax { pos: 1, .. })));
        assert!(Definitions::from_list(2, &["x1=x2"]).is_err());
        assert!(Definitions::from_list(2, &["c2"]).is_err());
    }

    fn arb_coeff() -> impl Strategy<Value = String> {
        let atom = prop_oneof![
            (-5i64..6).prop_map(|k| format!("({k})")),
            (1usize..=2).prop_map(|i| format!("x{i}")),
            (1i64..4, 1i64..4).prop_map(|(p, q)| format!("{p}/{q}")),
        ];
        prop::collection::vec(atom, 1..4).prop_map(|v| v.join("*"))
    }

    fn arb_term() -> impl Strategy<Value = String> {
        (arb_coeff(), prop::option::of(arb_coeff()), 0u32..3, 0u32..3).prop_map(|(c, den, a, b)| {
            let mut s = match den {
                Some(d) => format!("({c})/({d} + 7)"),
                None => c,
            };
            if a > 0 {
                s += &format!("*d1^{a}");
            }
            if b > 0 {
                s += &format!("*d2^{b}");
            }
            s
        })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(terms in prop::collection::vec(arb_term(), 1..4), signs in prop::collection::vec(any::<bool>(), 4)) {
            let mut text = String::new();
            for (i, (t, neg)) in terms.iter().zip(&signs).enumerate() {
                text += match (i, *neg) {
                    (0, true) => "-",
                    (0, false) => "",
                    (_, true) => " - ",
                    (_, false) => " + ",
                };
                text += t;
            }
            let op = parse(2, &text).unwrap();
            let printed = op.to_string();
            prop_assert_eq!(parse(2, &printed).unwrap(), op, "printed: {}", printed);
        }
    }
}
