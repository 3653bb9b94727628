//! Command dispatch for the `kolchin` binary.
//!
//! Every command produces a JSON value; the human-readable text is rendered
//! from that value. Exit codes: 0 success, 1 a verification failed
//! (factorization mismatch, closure violation), 2 bad input.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::binomial_poly::bigint_json;
use crate::error::{Error, Result};
use crate::invariants::system_kolchin;
use crate::lattice::LeaderSet;
use crate::operator::{verify_factorization, DiffOperator};
use crate::parse::{parse_coefficient, parse_operator, Definitions};
use crate::unipotent::{Mode, UnipotentGroupSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED_CHECK: i32 = 1;
pub const EXIT_BAD_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "kolchin", version, about = "Kolchin polynomials, differential operators and unipotent differential groups")]
pub struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct OperatorArgs {
    /// Number of derivations.
    #[arg(long)]
    pub m: usize,
    /// Coefficient alias, e.g. `c2=x1` (repeatable).
    #[arg(long = "define", value_name = "NAME=EXPR")]
    pub defines: Vec<String>,
}

#[derive(Debug, Args)]
pub struct LeaderArgs {
    #[arg(long)]
    pub m: usize,
    /// Leader set in text form, e.g. `(2,0);(1,1)`.
    #[arg(long, conflicts_with = "leaders_json")]
    pub leaders: Option<String>,
    /// Leader set as JSON, e.g. `{"m":2,"points":[[2,0]]}`.
    #[arg(long)]
    pub leaders_json: Option<String>,
}

#[derive(Debug, Args)]
pub struct SpecArgs {
    /// Group spec JSON file.
    #[arg(long)]
    pub spec: PathBuf,
    /// Override the constraint interpretation in the spec.
    #[arg(long)]
    pub mode: Option<Mode>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Kolchin polynomial of a leader set.
    Omega(LeaderArgs),
    /// Invariants of a system (one leader set per indeterminate) or of a linear operator.
    Invariants {
        #[arg(long)]
        m: usize,
        /// Leader set per indeterminate (repeatable).
        #[arg(long = "leaders")]
        leaders: Vec<String>,
        /// Linear operator whose zero set is the group.
        #[arg(long, conflicts_with = "leaders")]
        operator: Option<String>,
        #[arg(long = "define", value_name = "NAME=EXPR")]
        defines: Vec<String>,
    },
    /// Compose operators left to right: `A B C` gives `A∘B∘C`.
    Compose {
        #[command(flatten)]
        ops: OperatorArgs,
        #[arg(required = true, num_args = 1..)]
        operators: Vec<String>,
    },
    /// Apply an operator to a rational function.
    Apply {
        #[command(flatten)]
        ops: OperatorArgs,
        operator: String,
        function: String,
    },
    /// Leader under the orderly ranking (graded-lex, d1 > d2 > ...).
    Leader {
        #[command(flatten)]
        ops: OperatorArgs,
        operator: String,
    },
    /// Check a factorization in both composition orders.
    VerifyFactorization {
        #[command(flatten)]
        ops: OperatorArgs,
        #[arg(long)]
        target: String,
        #[arg(required = true, num_args = 1..)]
        factors: Vec<String>,
    },
    /// Check that a group spec is closed under products and inverses.
    GroupCheck(SpecArgs),
    /// Commutator of two generic elements of a group spec.
    Commutator {
        #[command(flatten)]
        spec: SpecArgs,
        /// Name the second element by prefix substitution, e.g. `u=v`; default primes the names.
        #[arg(long, value_name = "FROM=TO")]
        rename: Option<String>,
    },
    /// n-connected component relative to coordinate-kill subgroups.
    ConnectedComponent {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        n: i64,
    },
    /// Compare lattice enumeration with the Kolchin polynomial over a range of orders.
    Oracle {
        #[command(flatten)]
        leaders: LeaderArgs,
        /// Range `lo..hi` (inclusive).
        #[arg(long)]
        s: String,
    },
}

/// Outcome of one command.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub json: Value,
    pub exit_code: i32,
}

impl Report {
    fn ok(json: Value) -> Self {
        Self { json, exit_code: EXIT_OK }
    }

    fn check(json: Value, passed: bool) -> Self {
        Self { json, exit_code: if passed { EXIT_OK } else { EXIT_FAILED_CHECK } }
    }

    fn error(e: &Error) -> Self {
        Self { json: json!({ "error": e.to_string() }), exit_code: EXIT_BAD_INPUT }
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        render(&self.json, 0, &mut out);
        out
    }

    pub fn render(&self, as_json: bool) -> String {
        if as_json {
            let mut s = serde_json::to_string_pretty(&self.json).expect("json");
            s.push('\n');
            s
        } else {
            self.text()
        }
    }
}

fn render(value: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                if is_scalar_like(v) {
                    out.push_str(&format!("{pad}{k}: {}\n", scalar(v)));
                } else {
                    out.push_str(&format!("{pad}{k}:\n"));
                    render(v, indent + 1, out);
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                if is_scalar_like(item) {
                    out.push_str(&format!("{pad}- {}\n", scalar(item)));
                } else {
                    out.push_str(&format!("{pad}-\n"));
                    render(item, indent + 1, out);
                }
            }
        }
        v => out.push_str(&format!("{pad}{}\n", scalar(v))),
    }
}

fn is_scalar_like(v: &Value) -> bool {
    match v {
        Value::Object(_) => false,
        Value::Array(items) => items.iter().all(|i| !matches!(i, Value::Object(_) | Value::Array(_))),
        _ => true,
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn leader_set(args: &LeaderArgs) -> Result<LeaderSet> {
    match (&args.leaders, &args.leaders_json) {
        (_, Some(j)) => {
            let value: Value = serde_json::from_str(j).map_err(|e| Error::Invalid(e.to_string()))?;
            let set = LeaderSet::from_json(&value)?;
            if set.m() != args.m {
                return Err(Error::DimensionMismatch { expected: args.m, found: set.m() });
            }
            Ok(set)
        }
        (Some(t), None) => LeaderSet::parse(args.m, t),
        (None, None) => LeaderSet::new(args.m, vec![]),
    }
}

fn load_spec(args: &SpecArgs) -> Result<UnipotentGroupSpec> {
    let text = std::fs::read_to_string(&args.spec)
        .map_err(|e| Error::InvalidSpec(format!("{}: {e}", args.spec.display())))?;
    let spec = UnipotentGroupSpec::from_json_str(&text)?;
    Ok(match args.mode {
        Some(mode) => spec.with_mode(mode),
        None => spec,
    })
}

fn parse_range(text: &str) -> Result<(u64, u64)> {
    let bad = || Error::Invalid(format!("expected lo..hi, got `{text}`"));
    let (lo, hi) = text.split_once("..").ok_or_else(bad)?;
    let lo: u64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: u64 = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn omega_json(w: &crate::NumericalPolynomial, extra: impl FnOnce(&mut Map<String, Value>)) -> Value {
    let inv = w.invariants();
    let mut map = Map::new();
    map.insert("binomial_coeffs".into(), w.to_json()["binomial_coeffs"].clone());
    map.insert("tau".into(), json!(inv.tau()));
    map.insert("alpha".into(), bigint_json(inv.alpha()));
    extra(&mut map);
    Value::Object(map)
}

fn operators(args: &OperatorArgs, texts: &[String]) -> Result<Vec<DiffOperator>> {
    let defs = Definitions::from_list(args.m, &args.defines)?;
    texts.iter().map(|t| parse_operator(args.m, t, &defs)).collect()
}

fn dispatch(command: &Command) -> Result<Report> {
    match command {
        Command::Omega(args) => {
            let set = leader_set(args)?;
            let w = set.omega();
            Ok(Report::ok(omega_json(&w.polynomial, |m| {
                m.insert("threshold".into(), json!(w.threshold));
                m.insert("exact".into(), json!(true));
            })))
        }
        Command::Invariants { m, leaders, operator, defines } => {
            let (sets, leader) = match operator {
                Some(text) => {
                    let defs = Definitions::from_list(*m, defines)?;
                    let op = parse_operator(*m, text, &defs)?;
                    let leader = op.leader()?;
                    (vec![LeaderSet::new(*m, vec![leader.clone()])?], Some(leader))
                }
                None => (leaders.iter().map(|t| LeaderSet::parse(*m, t)).collect::<Result<Vec<_>>>()?, None),
            };
            if sets.is_empty() {
                return Err(Error::Invalid("give --leaders (repeatable) or --operator".into()));
            }
            let (w, exact) = system_kolchin(&sets)?;
            let mut out = omega_json(&w, |map| {
                map.insert("exact".into(), json!(exact));
            });
            if let Some(l) = leader {
                out.as_object_mut().expect("object").insert("leader".into(), json!(l.entries()));
            }
            Ok(Report::ok(out))
        }
        Command::Compose { ops, operators: texts } => {
            let parsed = operators(ops, texts)?;
            let product = parsed
                .iter()
                .try_fold(DiffOperator::identity(ops.m), |acc, op| acc.compose(op))?;
            Ok(Report::ok(product.to_json()))
        }
        Command::Apply { ops, operator, function } => {
            let defs = Definitions::from_list(ops.m, &ops.defines)?;
            let op = parse_operator(ops.m, operator, &defs)?;
            let f = parse_coefficient(ops.m, function, &defs)?;
            Ok(Report::ok(json!({ "result": op.apply(&f)?.to_string() })))
        }
        Command::Leader { ops, operator } => {
            let op = operators(ops, std::slice::from_ref(operator))?.remove(0);
            let leader = op.leader()?;
            Ok(Report::ok(json!({ "leader": leader.entries(), "order": leader.ord() })))
        }
        Command::VerifyFactorization { ops, target, factors } => {
            let target = operators(ops, std::slice::from_ref(target))?.remove(0);
            let factors = operators(ops, factors)?;
            let report = verify_factorization(&target, &factors)?;
            let mut out = json!({
                "target": target.to_string(),
                "factors": factors.iter().map(ToString::to_string).collect::<Vec<_>>(),
            });
            for (k, v) in report.to_json().as_object().expect("object") {
                out.as_object_mut().expect("object").insert(k.clone(), v.clone());
            }
            Ok(Report::check(out, report.matching_order().is_some()))
        }
        Command::GroupCheck(args) => {
            let spec = load_spec(args)?;
            let closure = spec.check_closure();
            let mut out = json!({ "mode": spec.mode.as_str() });
            for (k, v) in closure.to_json().as_object().expect("object") {
                out.as_object_mut().expect("object").insert(k.clone(), v.clone());
            }
            Ok(Report::check(out, closure.is_ok()))
        }
        Command::Commutator { spec, rename } => {
            let spec = load_spec(spec)?;
            let a = spec.generic_element(str::to_string);
            let b = match rename {
                Some(r) => {
                    let (from, to) = r
                        .split_once('=')
                        .ok_or_else(|| Error::Invalid(format!("expected FROM=TO, got `{r}`")))?;
                    spec.generic_element(|n| match n.strip_prefix(from) {
                        Some(rest) => format!("{to}{rest}"),
                        None => format!("{n}'"),
                    })
                }
                None => spec.generic_element(|n| format!("{n}'")),
            };
            let c = crate::unipotent::commutator(&a, &b);
            Ok(Report::ok(json!({ "a": a.to_json(), "b": b.to_json(), "commutator": c.to_json() })))
        }
        Command::ConnectedComponent { spec, n } => {
            let spec = load_spec(spec)?;
            Ok(Report::ok(spec.n_connected_component(*n)?.to_json()))
        }
        Command::Oracle { leaders, s } => {
            let set = leader_set(leaders)?;
            let (lo, hi) = parse_range(s)?;
            let w = set.omega();
            let mut agree_above = true;
            let rows: Vec<Value> = (lo..=hi)
                .map(|s| {
                    let count = BigInt::from(set.count_direct(s));
                    let exact = set.count_exact(s);
                    let poly = w.polynomial.evaluate(s);
                    if s >= w.threshold && poly != count {
                        agree_above = false;
                    }
                    json!({ "s": s, "count": bigint_json(&count), "exact": bigint_json(&exact), "poly": bigint_json(&poly) })
                })
                .collect();
            let exact_ok = rows.iter().all(|r| r["count"] == r["exact"]);
            let out = json!({
                "threshold": w.threshold,
                "omega": w.polynomial.to_string(),
                "rows": rows,
                "exact_agrees": exact_ok,
                "poly_agrees_from_threshold": agree_above,
            });
            Ok(Report::check(out, exact_ok && agree_above))
        }
    }
}

pub fn run(cli: &Cli) -> Report {
    dispatch(&cli.command).unwrap_or_else(|e| Report::error(&e))
}

/// Parses `args`, runs, prints to stdout/stderr, and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_BAD_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let report = run(&cli);
    if report.exit_code == EXIT_BAD_INPUT {
        eprintln!("error: {}", report.json["error"].as_str().unwrap_or("invalid input"));
    }
    print!("{}", report.render(cli.json));
    report.exit_code
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Report {
        let cli = Cli::try_parse_from(std::iter::once("kolchin").chain(args.iter().copied())).unwrap();
        run(&cli)
    }

    #[test]
    fn omega_json_shape() {
        let r = run_args(&["omega", "--m", "2", "--leaders", "(2,0)"]);
        assert_eq!(r.exit_code, 0);
        assert_eq!(r.json.to_string(), r#"{"binomial_coeffs":[-1,2],"tau":1,"alpha":2,"threshold":2,"exact":true}"#);
        let j = run_args(&["omega", "--m", "2", "--leaders-json", r#"{"m":2,"points":[[2,0]]}"#]);
        assert_eq!(j.json, r.json);
    }

    #[test]
    fn text_is_rendered_from_json() {
        let r = run_args(&["leader", "--m", "2", "d1^2 - d2"]);
        assert_eq!(r.text(), "leader: [2,0]\norder: 2\n");
    }

    #[test]
    fn errors_map_to_exit_two() {
        assert_eq!(run_args(&["leader", "--m", "2", "d0"]).exit_code, 2);
        assert_eq!(run_args(&["leader", "--m", "2", "0"]).exit_code, 2);
        assert_eq!(run_args(&["omega", "--m", "2", "--leaders", "(1,2,3)"]).exit_code, 2);
        assert_eq!(run_args(&["oracle", "--m", "2", "--s", "5..1"]).exit_code, 2);
        assert_eq!(main_with_args(["kolchin", "frobnicate"]), 2);
    }

    #[test]
    fn invariants_of_operator_and_system() {
        let r = run_args(&["invariants", "--m", "2", "--operator", "d1 - c2*d2", "--define", "c2=x1"]);
        assert_eq!(r.json.to_string(), r#"{"binomial_coeffs":[0,1],"tau":1,"alpha":1,"exact":false,"leader":[1,0]}"#);
        let r = run_args(&["invariants", "--m", "2", "--leaders", "(1,0)", "--leaders", "(0,1)"]);
        assert_eq!(r.json["binomial_coeffs"], json!([0, 2]));
        assert_eq!(run_args(&["invariants", "--m", "2"]).exit_code, 2);
    }

    #[test]
    fn apply_and_compose() {
        let r = run_args(&["apply", "--m", "2", "d1^2 - d2", "x1^2 + x2"]);
        assert_eq!(r.json["result"], "1");
        let r = run_args(&["compose", "--m", "2", "x1*d1", "x1*d1"]);
        assert_eq!(r.json["text"], "x1^2*d1^2 + x1*d1");
    }

    #[test]
    fn oracle_table() {
        let r = run_args(&["oracle", "--m", "2", "--leaders", "(2,0)", "--s", "0..7"]);
        assert_eq!(r.exit_code, 0);
        let rows = r.json["rows"].as_array().unwrap();
        assert_eq!(rows.len(), 8);
        for row in rows {
            assert_eq!(row["count"], row["poly"]);
        }
    }
}
