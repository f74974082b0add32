//! Command-line front end.
//!
//! Every invocation produces one JSON document with the fields `command`,
//! `input`, `config`, `result` and `error`. Exact rationals are rendered as
//! `"p/q"` strings, complex numbers as `{"re": .., "im": ..}`.

use std::ffi::OsString;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::exponent::{parse_rational, Exponent};
use crate::field::{set_zero_tolerance, ComplexApprox, Field, ToleranceConfig};
use crate::lifting::{
    check_hypotheses, multivariate_lift, multivariate_lift_all, verify_root, LiftOptions, LiftRequest, LiftStep,
    LiftedPoint, ResidualOrder,
};
use crate::parse::{parse_polynomial, parse_series};
use crate::poly::{FieldPoly, SeriesPoly};
use crate::series::PuiseuxSeries;
use crate::tropical::{epsilon_gap, initial_form, newton_polygon_candidates, tropicalize};

#[derive(Debug, Parser)]
#[command(name = "puiseux-lift", version, about = "Tropical lifting of Puiseux-series roots")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FieldKind {
    Rational,
    Complex,
}

#[derive(Debug, Args)]
struct Common {
    /// Polynomial in the variables, with Puiseux-series coefficients in `t`.
    #[arg(short = 'f', long = "polynomial", allow_hyphen_values = true)]
    polynomial: String,
    /// Variable order, comma-separated (default: order of first appearance).
    #[arg(long, value_delimiter = ',')]
    vars: Option<Vec<String>>,
    #[arg(long, value_enum, default_value_t = FieldKind::Rational)]
    field: FieldKind,
    /// Magnitude below which a complex number counts as zero.
    #[arg(long)]
    zero_tol: Option<f64>,
    /// Residual accepted from the complex root finder.
    #[arg(long)]
    residual_tol: Option<f64>,
    /// Human-readable output instead of JSON.
    #[arg(long)]
    pretty: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the tropical terms (exponent vector, coefficient order).
    Tropicalize {
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate the tropical polynomial at a point.
    Eval {
        #[command(flatten)]
        common: Common,
        #[arg(short = 'b', long = "orders", allow_hyphen_values = true)]
        orders: String,
    },
    /// Test membership in the tropical hypersurface.
    Member {
        #[command(flatten)]
        common: Common,
        #[arg(short = 'b', long = "orders", allow_hyphen_values = true)]
        orders: String,
        /// Also require the initial form to vanish at these coefficients.
        #[arg(short = 'g', long = "coefficients", allow_hyphen_values = true)]
        coefficients: Option<String>,
    },
    /// Initial form at a point, optionally checked against coefficients.
    InitialForm {
        #[command(flatten)]
        common: Common,
        #[arg(short = 'b', long = "orders", allow_hyphen_values = true)]
        orders: String,
        #[arg(short = 'g', long = "coefficients", allow_hyphen_values = true)]
        coefficients: Option<String>,
    },
    /// Candidate root orders of a univariate polynomial.
    Candidates {
        #[command(flatten)]
        common: Common,
    },
    /// Lift orders and principal coefficients to a root.
    Lift {
        #[command(flatten)]
        common: Common,
        #[arg(short = 'b', long = "orders", allow_hyphen_values = true)]
        orders: String,
        #[arg(short = 'g', long = "coefficients", allow_hyphen_values = true)]
        coefficients: String,
        #[arg(long)]
        precision: String,
        /// Return every branch of the final univariate step.
        #[arg(long)]
        enumerate: bool,
        #[arg(long, default_value_t = 16)]
        cap: usize,
        #[arg(long, default_value_t = 10_000)]
        max_steps: usize,
    },
    /// Order of the polynomial at a point.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Comma-separated series, one per variable.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Tropicalize { .. } => "tropicalize",
            Command::Eval { .. } => "eval",
            Command::Member { .. } => "member",
            Command::InitialForm { .. } => "initial-form",
            Command::Candidates { .. } => "candidates",
            Command::Lift { .. } => "lift",
            Command::Verify { .. } => "verify",
        }
    }

    fn common(&self) -> &Common {
        match self {
            Command::Tropicalize { common }
            | Command::Eval { common, .. }
            | Command::Member { common, .. }
            | Command::InitialForm { common, .. }
            | Command::Candidates { common }
            | Command::Lift { common, .. }
            | Command::Verify { common, .. } => common,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorInfo {
    pub kind: String,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub position: Option<usize>,
}

impl From<&Error> for ErrorInfo {
    fn from(e: &Error) -> Self {
        let position = match e {
            Error::Parse { position, .. } => Some(*position),
            _ => None,
        };
        ErrorInfo { kind: e.kind().to_string(), message: e.to_string(), position }
    }
}

/// The JSON document printed for one invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommandResult {
    pub command: Option<String>,
    pub input: Value,
    pub config: Value,
    pub result: Value,
    pub error: Option<ErrorInfo>,
}

impl CommandResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("document serializes")
    }
}

/// Outcome of [`run_command`]: the document, the text to print and the
/// process exit code.
#[derive(Debug, Clone)]
pub struct Invocation {
    pub document: CommandResult,
    pub output: String,
    pub exit_code: i32,
}

/// Exit code for an error: 2 for malformed input, 1 for everything else.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::InvalidInput(_) => 2,
        _ => 1,
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run_command<I, T>(argv: I) -> Invocation
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            let text = err.render().to_string();
            let informational = matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let document = CommandResult {
                command: None,
                input: Value::Null,
                config: Value::Null,
                result: Value::Null,
                error: (!informational).then(|| ErrorInfo { kind: "usage".into(), message: text.trim_end().into(), position: None }),
            };
            let (output, exit_code) = if informational { (text, 0) } else { (document.to_json(), 2) };
            return Invocation { document, output, exit_code };
        }
    };
    let cmd = &cli.command;
    let common = cmd.common();

    let mut input = Map::new();
    input.insert("source".into(), json!(common.polynomial));
    let config = config_json(common);
    let tolerance = match tolerance_config(common) {
        Ok(t) => t,
        Err(message) => {
            let document = CommandResult {
                command: Some(cmd.name().into()),
                input: Value::Object(input),
                config,
                result: Value::Null,
                error: Some(ErrorInfo { kind: "usage".into(), message, position: None }),
            };
            let output = if common.pretty { format!("error (usage): {}", document.error.as_ref().unwrap().message) } else { document.to_json() };
            return Invocation { document, output, exit_code: 2 };
        }
    };

    let outcome = match common.field {
        FieldKind::Rational => execute::<BigRational>(cmd, &tolerance, &mut input),
        FieldKind::Complex => {
            set_zero_tolerance(tolerance.zero_tolerance);
            execute::<ComplexApprox>(cmd, &tolerance, &mut input)
        }
    };
    let (result, pretty, error, exit) = match outcome {
        Ok((result, pretty)) => (result, pretty, None, 0),
        Err(e) => {
            let pretty = format!("error ({}): {e}", e.kind());
            (Value::Null, pretty, Some(ErrorInfo::from(&e)), exit_code(&e))
        }
    };
    let document = CommandResult { command: Some(cmd.name().into()), input: Value::Object(input), config, result, error };
    let output = if common.pretty { pretty } else { document.to_json() };
    Invocation { document, output, exit_code: exit }
}

fn tolerance_config(common: &Common) -> std::result::Result<ToleranceConfig, String> {
    let mut cfg = ToleranceConfig::default();
    if common.field == FieldKind::Rational {
        if common.zero_tol.is_some() || common.residual_tol.is_some() {
            return Err("tolerance flags require --field complex".into());
        }
        return Ok(cfg);
    }
    for (flag, value) in [("--zero-tol", common.zero_tol), ("--residual-tol", common.residual_tol)] {
        if let Some(v) = value {
            if !(v.is_finite() && v > 0.0) {
                return Err(format!("{flag} must be a positive number"));
            }
        }
    }
    if let Some(v) = common.zero_tol {
        cfg.zero_tolerance = v;
    }
    if let Some(v) = common.residual_tol {
        cfg.root_residual_tolerance = v;
    }
    Ok(cfg)
}

fn config_json(common: &Common) -> Value {
    match common.field {
        FieldKind::Rational => json!({"field": "rational", "zero_tolerance": null, "residual_tolerance": null}),
        FieldKind::Complex => {
            let d = ToleranceConfig::default();
            json!({
                "field": "complex",
                "zero_tolerance": common.zero_tol.unwrap_or(d.zero_tolerance),
                "residual_tolerance": common.residual_tol.unwrap_or(d.root_residual_tolerance),
            })
        }
    }
}

/// Coefficient fields usable from the command line.
pub trait CliField: Field {
    fn to_json(&self) -> Value;
    /// Parses one entry of a `-g` vector.
    fn parse_value(s: &str) -> Result<Self>;
}

impl CliField for BigRational {
    fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }

    fn parse_value(s: &str) -> Result<Self> {
        if s.contains('i') {
            return Err(Error::InvalidInput(format!("complex coefficient `{s}` requires --field complex")));
        }
        parse_rational(s)
    }
}

impl CliField for ComplexApprox {
    fn to_json(&self) -> Value {
        json!({"re": self.re(), "im": self.im()})
    }

    fn parse_value(s: &str) -> Result<Self> {
        parse_complex(s)
    }
}

fn parse_real(s: &str, whole: &str) -> Result<f64> {
    let v = match parse_rational(s) {
        Ok(q) => q.to_f64(),
        Err(_) => s.parse::<f64>().ok(),
    };
    v.filter(|v| v.is_finite()).ok_or_else(|| Error::InvalidInput(format!("invalid complex number `{whole}`")))
}

/// Parses `a`, `bi`, `a+bi` or `a-bi`; parts may be decimals or `p/q`.
fn parse_complex(s: &str) -> Result<ComplexApprox> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let Some(body) = compact.strip_suffix('i') else {
        return Ok(ComplexApprox::new(parse_real(&compact, s)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len()).rev().find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (parse_real(&body[..k], s)?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => parse_real(other, s)?,
    };
    Ok(ComplexApprox::new(re, im))
}

fn split_list(s: &str) -> Vec<&str> {
    s.split(',').map(str::trim).collect()
}

fn parse_orders(s: &str, n: usize) -> Result<Vec<Exponent>> {
    let orders = split_list(s)
        .into_iter()
        .map(|x| parse_rational(x).map(Exponent::from))
        .collect::<Result<Vec<_>>>()?;
    expect_len("orders", orders.len(), n)?;
    Ok(orders)
}

fn parse_coefficients<F: CliField>(s: &str, n: usize) -> Result<Vec<F>> {
    let coeffs = split_list(s).into_iter().map(F::parse_value).collect::<Result<Vec<_>>>()?;
    expect_len("coefficients", coeffs.len(), n)?;
    Ok(coeffs)
}

fn expect_len(what: &str, got: usize, n: usize) -> Result<()> {
    if got != n {
        return Err(Error::InvalidInput(format!("expected {n} {what}, got {got}")));
    }
    Ok(())
}

fn execute<F: CliField>(cmd: &Command, tolerance: &ToleranceConfig, input: &mut Map<String, Value>) -> Result<(Value, String)> {
    let common = cmd.common();
    let parsed = parse_polynomial::<F>(&common.polynomial, common.vars.as_deref())?;
    let (f, names) = (parsed.poly, parsed.variables);
    let n = f.nvars();
    input.insert("polynomial".into(), json!(f.render(&names)));
    input.insert("variables".into(), json!(names));

    match cmd {
        Command::Tropicalize { .. } => {
            let trop = tropicalize(&f)?;
            let terms: Vec<Value> =
                trop.terms().iter().map(|(m, a)| json!({"exponents": m, "order": a.to_ratio_string()})).collect();
            let text = trop.render(&names);
            Ok((json!({"terms": terms, "text": text}), text))
        }
        Command::Eval { orders, .. } => {
            let b = parse_orders(orders, n)?;
            input.insert("orders".into(), exponents_json(&b));
            let eval = tropicalize(&f)?.eval(&b);
            let member = eval.argmin.len() >= 2;
            let pretty = format!("value: {}\nargmin: {:?}\nmember: {member}", eval.value, eval.argmin);
            Ok((json!({"value": eval.value.to_ratio_string(), "argmin": eval.argmin, "member": member}), pretty))
        }
        Command::Member { orders, coefficients, .. } => {
            let b = parse_orders(orders, n)?;
            input.insert("orders".into(), exponents_json(&b));
            if let Some(g) = coefficients {
                let gamma = parse_coefficients::<F>(g, n)?;
                input.insert("coefficients".into(), field_vec_json(&gamma));
                check_hypotheses(&f, &b, &gamma)?;
                return Ok((json!({"member": true, "initial_form_vanishes": true}), "member: true\ninitial form vanishes: true".into()));
            }
            let member = tropicalize(&f)?.is_member(&b);
            Ok((json!({"member": member}), format!("member: {member}")))
        }
        Command::InitialForm { orders, coefficients, .. } => {
            let b = parse_orders(orders, n)?;
            input.insert("orders".into(), exponents_json(&b));
            let fb = match coefficients {
                Some(g) => {
                    let gamma = parse_coefficients::<F>(g, n)?;
                    input.insert("coefficients".into(), field_vec_json(&gamma));
                    check_hypotheses(&f, &b, &gamma)?
                }
                None => initial_form(&f, &b)?,
            };
            let gap = match epsilon_gap(&f, &b) {
                Ok(gap) => gap.map(|g| g.to_ratio_string()),
                Err(Error::IndeterminatePrecision(_)) => None,
                Err(e) => return Err(e),
            };
            let text = fb.render(&names);
            let pretty = format!("initial form: {text}\nepsilon gap: {}", gap.as_deref().unwrap_or("none"));
            Ok((json!({"initial_form": text, "terms": field_poly_terms_json(&fb), "epsilon_gap": gap}), pretty))
        }
        Command::Candidates { .. } => {
            let c = newton_polygon_candidates(&f)?;
            let strings: Vec<String> = c.iter().map(Exponent::to_ratio_string).collect();
            let pretty = strings.join(", ");
            Ok((json!({"candidates": strings}), pretty))
        }
        Command::Lift { orders, coefficients, precision, enumerate, cap, max_steps, .. } => {
            let b = parse_orders(orders, n)?;
            input.insert("orders".into(), exponents_json(&b));
            let gamma = parse_coefficients::<F>(coefficients, n)?;
            input.insert("coefficients".into(), field_vec_json(&gamma));
            let precision = Exponent::from(parse_rational(precision)?);
            input.insert("precision".into(), json!(precision.to_ratio_string()));
            let opts = LiftOptions { tolerance: *tolerance, max_steps: *max_steps, branch_cap: *cap };
            let req = LiftRequest::new(f.clone(), b, gamma, precision)?;
            if *enumerate {
                let points = multivariate_lift_all(&req, &opts)?;
                let mut values = Vec::new();
                let mut pretty = Vec::new();
                for (i, p) in points.iter().enumerate() {
                    let residual = verify_root(&f, &p.coords)?;
                    values.push(lifted_point_json(p, &names, &residual));
                    pretty.push(format!("branch {}\n{}", i + 1, lifted_point_pretty(p, &names, &residual)));
                }
                Ok((json!({"branches": values}), pretty.join("\n")))
            } else {
                let p = multivariate_lift(&req, &opts)?;
                let residual = verify_root(&f, &p.coords)?;
                Ok((lifted_point_json(&p, &names, &residual), lifted_point_pretty(&p, &names, &residual)))
            }
        }
        Command::Verify { point, .. } => {
            let coords = split_list(point).into_iter().map(parse_series::<F>).collect::<Result<Vec<_>>>()?;
            expect_len("coordinates", coords.len(), n)?;
            input.insert("point".into(), Value::Array(coords.iter().map(series_json).collect()));
            let residual = verify_root(&f, &coords)?;
            let value = f.evaluate(&coords);
            let pretty = format!("residual: {value}\nresidual order: {}", residual_text(&residual));
            Ok((json!({"residual": series_json(&value), "residual_order": residual_json(&residual)}), pretty))
        }
    }
}

fn exponents_json(v: &[Exponent]) -> Value {
    Value::Array(v.iter().map(|e| json!(e.to_ratio_string())).collect())
}

fn field_vec_json<F: CliField>(v: &[F]) -> Value {
    Value::Array(v.iter().map(CliField::to_json).collect())
}

fn field_poly_terms_json<F: CliField>(p: &FieldPoly<F>) -> Value {
    Value::Array(p.terms().map(|(m, c)| json!({"exponents": m, "coefficient": c.to_json()})).collect())
}

pub fn series_json<F: CliField>(s: &PuiseuxSeries<F>) -> Value {
    let terms: Vec<Value> =
        s.terms().iter().map(|(e, c)| json!({"exponent": e.to_ratio_string(), "coefficient": c.to_json()})).collect();
    json!({
        "text": s.to_string(),
        "terms": terms,
        "truncation": s.truncation().map(Exponent::to_ratio_string),
    })
}

pub fn residual_json(r: &ResidualOrder) -> Value {
    match r {
        ResidualOrder::Infinity => json!({"kind": "infinity", "order": null}),
        ResidualOrder::Exactly(e) => json!({"kind": "exactly", "order": e.to_ratio_string()}),
        ResidualOrder::AtLeast(e) => json!({"kind": "at_least", "order": e.to_ratio_string()}),
    }
}

fn residual_text(r: &ResidualOrder) -> String {
    match r {
        ResidualOrder::Infinity => "infinity".into(),
        ResidualOrder::Exactly(e) => e.to_string(),
        ResidualOrder::AtLeast(e) => format!(">= {e}"),
    }
}

fn render_reduced<F: Field>(p: &SeriesPoly<F>, remaining: &[usize], names: &[String]) -> String {
    let local: Vec<String> = remaining.iter().map(|&v| names[v].clone()).collect();
    p.render(&local)
}

fn trace_json<F: CliField>(trace: &[LiftStep<F>], names: &[String]) -> Value {
    let mut remaining: Vec<usize> = (0..names.len()).collect();
    let mut out = Vec::new();
    for step in trace {
        let v = match step {
            LiftStep::TrivialRoot { variables } | LiftStep::ZeroPolynomial { variables } => {
                let kind = if matches!(step, LiftStep::TrivialRoot { .. }) { "trivial_root" } else { "zero_polynomial" };
                remaining.retain(|v| !variables.contains(v));
                let vars: Vec<&str> = variables.iter().map(|&v| names[v].as_str()).collect();
                json!({"step": kind, "variables": vars})
            }
            LiftStep::AbsentVariable { variable, value, reduced } | LiftStep::SliceSubstitution { variable, value, reduced } => {
                let kind = if matches!(step, LiftStep::AbsentVariable { .. }) { "absent_variable" } else { "slice_substitution" };
                remaining.retain(|v| v != variable);
                json!({
                    "step": kind,
                    "variable": names[*variable],
                    "value": series_json(value),
                    "reduced": render_reduced(reduced, &remaining, names),
                })
            }
            LiftStep::Perturbation { variable, multiplicity, gap, shift, value, reduced } => {
                remaining.retain(|v| v != variable);
                json!({
                    "step": "perturbation",
                    "variable": names[*variable],
                    "multiplicity": multiplicity,
                    "gap": gap.as_ref().map(Exponent::to_ratio_string),
                    "shift": shift.to_ratio_string(),
                    "value": series_json(value),
                    "reduced": render_reduced(reduced, &remaining, names),
                })
            }
            LiftStep::Univariate { variable, precision, steps } => json!({
                "step": "univariate",
                "variable": names[*variable],
                "precision": precision.to_ratio_string(),
                "steps": steps,
            }),
        };
        out.push(v);
    }
    Value::Array(out)
}

/// JSON form of a lifted point, as printed by `lift`.
pub fn lifted_point_json<F: CliField>(p: &LiftedPoint<F>, names: &[String], residual: &ResidualOrder) -> Value {
    json!({
        "coordinates": Value::Array(p.coords.iter().map(series_json).collect()),
        "exact": p.exact,
        "residual_order": residual_json(residual),
        "trace": trace_json(&p.trace, names),
    })
}

fn lifted_point_pretty<F: Field>(p: &LiftedPoint<F>, names: &[String], residual: &ResidualOrder) -> String {
    let mut lines: Vec<String> = names.iter().zip(&p.coords).map(|(n, c)| format!("{n} = {c}")).collect();
    lines.push(format!("exact: {}", p.exact));
    lines.push(format!("residual order: {}", residual_text(residual)));
    let mut remaining: Vec<usize> = (0..names.len()).collect();
    for step in &p.trace {
        lines.push(match step {
            LiftStep::TrivialRoot { variables } | LiftStep::ZeroPolynomial { variables } => {
                remaining.retain(|v| !variables.contains(v));
                let vars: Vec<&str> = variables.iter().map(|&v| names[v].as_str()).collect();
                let kind = if matches!(step, LiftStep::TrivialRoot { .. }) { "monomial root" } else { "zero polynomial" };
                format!("  {kind}: {}", vars.join(", "))
            }
            LiftStep::AbsentVariable { variable, value, reduced } | LiftStep::SliceSubstitution { variable, value, reduced } => {
                remaining.retain(|v| v != variable);
                let kind = if matches!(step, LiftStep::AbsentVariable { .. }) { "absent" } else { "slice" };
                format!("  {kind}: {} = {value}, leaving {}", names[*variable], render_reduced(reduced, &remaining, names))
            }
            LiftStep::Perturbation { variable, multiplicity, gap, value, reduced, .. } => {
                remaining.retain(|v| v != variable);
                let gap = gap.as_ref().map_or("none".to_string(), Exponent::to_string);
                format!(
                    "  perturbation (k = {multiplicity}, gap = {gap}): {} = {value}, leaving {}",
                    names[*variable],
                    render_reduced(reduced, &remaining, names)
                )
            }
            LiftStep::Univariate { variable, precision, steps } => {
                format!("  univariate: {} solved in {steps} steps up to t^{precision}", names[*variable])
            }
        });
    }
    lines.join("\n")
}
