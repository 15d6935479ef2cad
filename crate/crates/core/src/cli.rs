//! Command-line front end: coefficient tables, evaluations, oracle
//! comparisons and identity reports as CSV or JSON.
//!
//! Output is a pure function of the parsed [`RunSpec`], so repeated runs are
//! byte-identical. JSON objects have sorted keys.

use std::fmt::Write as _;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::combinatorics::check_norlund_bell_identity;
use crate::error::{Error, Result};
use crate::expansion_inf::{
    phi_approx_inf, phi_coefficients, phi_series_inf, q_approx_inf, q_coefficients_inf,
    DEFAULT_ORDER_INF,
};
use crate::expansion_zero::{
    coeffs_at_zero, phi_approx_zero, q_approx_zero, q_ratio_expansion_zero, DEFAULT_ORDER_ZERO,
};
use crate::special::{beta_log_quantile_oracle, OracleConfig, QuantileQuery};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Center {
    Zero,
    Inf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum CommandKind {
    /// Coefficients of the expansion of φ at a = 0
    CoeffsZero,
    /// Evaluated coefficients (-1)^n φ_n / n! of the expansion at a = ∞
    CoeffsInf,
    /// φ_n as exact polynomials in b and γ_b
    PhiCoeffSymbolic,
    /// Approximations of φ(a) and q(a) from one expansion
    Eval,
    /// Expansion of φ against the numerical oracle
    Compare,
    /// Exact Bell/Nørlund identity checks
    Identities,
}

impl CommandKind {
    fn name(self) -> &'static str {
        match self {
            CommandKind::CoeffsZero => "coeffs-zero",
            CommandKind::CoeffsInf => "coeffs-inf",
            CommandKind::PhiCoeffSymbolic => "phi-coeff-symbolic",
            CommandKind::Eval => "eval",
            CommandKind::Compare => "compare",
            CommandKind::Identities => "identities",
        }
    }
}

/// Raw command line as parsed by clap; see [`RunSpec`] for the validated form.
#[derive(Debug, Parser)]
#[command(name = "betaquant", version, about = "Asymptotic expansions of beta-distribution quantiles")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandKind,
    /// Second Beta parameter
    #[arg(long, global = true)]
    pub b: Option<f64>,
    /// Quantile level in (0, 1)
    #[arg(long, global = true)]
    pub p: Option<f64>,
    /// Truncation order N
    #[arg(long, global = true)]
    pub order: Option<usize>,
    /// Evaluation point(s) a > 0; repeat the flag for several
    #[arg(long = "a", global = true)]
    pub a: Vec<f64>,
    #[arg(long, value_enum, global = true)]
    pub center: Option<Center>,
    #[arg(long, value_enum, global = true, default_value = "csv")]
    pub format: Format,
    #[arg(long = "x-tol", global = true)]
    pub x_tol: Option<f64>,
    #[arg(long = "f-tol", global = true)]
    pub f_tol: Option<f64>,
    #[arg(long = "max-iter", global = true)]
    pub max_iter: Option<usize>,
}

/// A validated request.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub command: CommandKind,
    pub b: Option<f64>,
    pub p: Option<f64>,
    pub order: usize,
    pub a_values: Vec<f64>,
    pub center: Option<Center>,
    pub format: Format,
    pub oracle: OracleConfig,
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

impl RunSpec {
    pub fn from_cli(cli: Cli) -> Result<Self> {
        use CommandKind::*;
        let cmd = cli.command;
        let name = cmd.name();
        let needs_bp = matches!(cmd, CoeffsZero | CoeffsInf | Eval | Compare);
        let needs_a = matches!(cmd, Eval | Compare);
        if needs_bp {
            if cli.b.is_none() || cli.p.is_none() {
                return Err(usage(format!("{name} requires --b and --p")));
            }
        } else if cli.b.is_some() || cli.p.is_some() {
            return Err(usage(format!("{name} does not take --b or --p")));
        }
        if needs_a {
            if cli.a.is_empty() {
                return Err(usage(format!("{name} requires at least one --a")));
            }
            if cli.center.is_none() {
                return Err(usage(format!("{name} requires --center zero|inf")));
            }
        } else if !cli.a.is_empty() || cli.center.is_some() {
            return Err(usage(format!("{name} does not take --a or --center")));
        }
        if let Some(b) = cli.b {
            if !(b > 0.0 && b.is_finite()) {
                return Err(usage(format!("--b must be positive, got {b}")));
            }
        }
        if let Some(p) = cli.p {
            if !(p > 0.0 && p < 1.0) {
                return Err(usage(format!("--p must lie in (0, 1), got {p}")));
            }
        }
        if let Some(a) = cli.a.iter().find(|a| !(**a > 0.0 && a.is_finite())) {
            return Err(usage(format!("--a must be positive, got {a}")));
        }
        let default_order = match (cmd, cli.center) {
            (CoeffsZero, _) | (_, Some(Center::Zero)) => DEFAULT_ORDER_ZERO,
            _ => DEFAULT_ORDER_INF,
        };
        let order = cli.order.unwrap_or(default_order);
        if cmd == Identities && order == 0 {
            return Err(usage("identities requires --order ≥ 1"));
        }
        let d = OracleConfig::default();
        let oracle = OracleConfig::new(
            cli.x_tol.unwrap_or(d.x_tolerance),
            cli.f_tol.unwrap_or(d.f_tolerance),
            cli.max_iter.unwrap_or(d.max_iterations),
        )?;
        Ok(RunSpec {
            command: cmd,
            b: cli.b,
            p: cli.p,
            order,
            a_values: cli.a,
            center: cli.center,
            format: cli.format,
            oracle,
        })
    }

    pub fn parse_from<I, T>(args: I) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        T: Into<std::ffi::OsString> + Clone,
    {
        let cli = Cli::try_parse_from(args).map_err(|e| usage(e.to_string()))?;
        RunSpec::from_cli(cli)
    }
}

/// Result of a successful run: the serialized report, and whether every
/// check in it passed (only `identities` can fail here).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub success: bool,
    pub diagnostic: Option<String>,
}

/// One row of an expansion-versus-oracle comparison.
///
/// `scaled_error` is `abs_error / a^{N+1}` at 0 and `abs_error · a^{N+1}` at
/// ∞; roughly constant in `a` when the truncation error has the expected
/// order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalReport {
    pub a: f64,
    pub approx: f64,
    pub oracle: f64,
    pub abs_error: f64,
    pub scaled_error: f64,
}

/// `φ(a)` and `q(a)` from the chosen expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalRow {
    pub a: f64,
    pub phi_approx: f64,
    pub q_approx: f64,
}

pub fn evaluate(
    center: Center,
    b: f64,
    p: f64,
    order: usize,
    a_values: &[f64],
    cfg: &OracleConfig,
) -> Result<Vec<EvalRow>> {
    match center {
        Center::Zero => {
            let s = coeffs_at_zero(b, p, order)?;
            let r = q_ratio_expansion_zero(b, order)?;
            Ok(a_values
                .iter()
                .map(|&a| EvalRow {
                    a,
                    phi_approx: phi_approx_zero(&s, a),
                    q_approx: q_approx_zero(&r, p, a),
                })
                .collect())
        }
        Center::Inf => {
            let s = phi_series_inf(b, p, order, cfg)?;
            let qc = q_coefficients_inf(&s);
            Ok(a_values
                .iter()
                .map(|&a| EvalRow {
                    a,
                    phi_approx: phi_approx_inf(&s, a),
                    q_approx: q_approx_inf(&qc, a),
                })
                .collect())
        }
    }
}

/// Compares the order-`N` approximation of `φ` with `-a log q_oracle(a)`.
pub fn compare(
    center: Center,
    b: f64,
    p: f64,
    order: usize,
    a_values: &[f64],
    cfg: &OracleConfig,
) -> Result<Vec<EvalReport>> {
    let rows = evaluate(center, b, p, order, a_values, cfg)?;
    rows.into_iter()
        .map(|row| {
            let a = row.a;
            let oracle = -a * beta_log_quantile_oracle(&QuantileQuery::new(a, b, p)?, cfg)?;
            let abs_error = (row.phi_approx - oracle).abs();
            let e = order as i32 + 1;
            let scaled_error = match center {
                Center::Zero => abs_error / a.powi(e),
                Center::Inf => abs_error * a.powi(e),
            };
            Ok(EvalReport {
                a,
                approx: row.phi_approx,
                oracle,
                abs_error,
                scaled_error,
            })
        })
        .collect()
}

fn f(x: f64) -> String {
    format!("{x:.16e}")
}

fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

struct Table {
    header: Vec<&'static str>,
    csv_rows: Vec<Vec<String>>,
    json_rows: Vec<Value>,
}

impl Table {
    fn new(header: Vec<&'static str>) -> Self {
        Table {
            header,
            csv_rows: Vec::new(),
            json_rows: Vec::new(),
        }
    }

    fn push(&mut self, csv: Vec<String>, json: Value) {
        self.csv_rows.push(csv);
        self.json_rows.push(json);
    }

    fn render(self, spec: &RunSpec, extra: Map<String, Value>) -> String {
        match spec.format {
            Format::Csv => {
                let mut s = self.header.join(",");
                s.push('\n');
                for r in self.csv_rows {
                    let _ = writeln!(s, "{}", r.join(","));
                }
                s
            }
            Format::Json => {
                let mut obj = extra;
                obj.insert("command".into(), json!(spec.command.name()));
                obj.insert("order".into(), json!(spec.order));
                if let Some(b) = spec.b {
                    obj.insert("b".into(), num(b));
                }
                if let Some(p) = spec.p {
                    obj.insert("p".into(), num(p));
                }
                if let Some(c) = spec.center {
                    obj.insert("center".into(), json!(if c == Center::Zero { "zero" } else { "inf" }));
                }
                obj.insert("rows".into(), Value::Array(self.json_rows));
                let mut s = serde_json::to_string_pretty(&Value::Object(obj)).expect("serializable");
                s.push('\n');
                s
            }
        }
    }
}

/// Executes a validated request.
pub fn run(spec: &RunSpec) -> Result<Output> {
    let b = spec.b.unwrap_or(f64::NAN);
    let p = spec.p.unwrap_or(f64::NAN);
    let mut extra = Map::new();
    let mut success = true;
    let mut diagnostic = None;
    let table = match spec.command {
        CommandKind::CoeffsZero => {
            let s = coeffs_at_zero(b, p, spec.order)?;
            extra.insert("exact_path".into(), json!(s.is_exact()));
            let mut t = Table::new(vec!["n", "value", "exact"]);
            for (n, c) in s.coeffs().iter().enumerate() {
                let ex = c.exact.as_ref().map(|r| r.to_string());
                t.push(
                    vec![n.to_string(), f(c.value), ex.clone().unwrap_or_default()],
                    json!({"n": n, "value": num(c.value), "exact": ex}),
                );
            }
            t
        }
        CommandKind::CoeffsInf => {
            let s = phi_series_inf(b, p, spec.order, &spec.oracle)?;
            extra.insert("gamma_b".into(), num(s.gamma_b()));
            let mut t = Table::new(vec!["n", "value"]);
            for (n, &c) in s.coeffs().iter().enumerate() {
                t.push(vec![n.to_string(), f(c)], json!({"n": n, "value": num(c)}));
            }
            t
        }
        CommandKind::PhiCoeffSymbolic => {
            let mut t = Table::new(vec!["n", "deg_b", "deg_gamma", "coeff", "monomial"]);
            for pc in phi_coefficients(spec.order) {
                let strings = pc.poly.monomial_strings();
                let mut terms = Vec::new();
                for ((i, j, c), m) in pc.poly.terms().zip(&strings) {
                    t.csv_rows.push(vec![
                        pc.n.to_string(),
                        i.to_string(),
                        j.to_string(),
                        c.to_string(),
                        m.clone(),
                    ]);
                    terms.push(json!({"deg_b": i, "deg_gamma": j, "coeff": c.to_string(), "monomial": m}));
                }
                t.json_rows.push(json!({"n": pc.n, "terms": terms}));
            }
            t
        }
        CommandKind::Eval => {
            let center = spec.center.expect("validated");
            let rows = evaluate(center, b, p, spec.order, &spec.a_values, &spec.oracle)?;
            let mut t = Table::new(vec!["a", "phi_approx", "q_approx"]);
            for r in rows {
                t.push(
                    vec![f(r.a), f(r.phi_approx), f(r.q_approx)],
                    json!({"a": num(r.a), "phi_approx": num(r.phi_approx), "q_approx": num(r.q_approx)}),
                );
            }
            t
        }
        CommandKind::Compare => {
            let center = spec.center.expect("validated");
            let rows = compare(center, b, p, spec.order, &spec.a_values, &spec.oracle)?;
            let mut t = Table::new(vec!["a", "approx", "oracle", "abs_error", "scaled_error"]);
            for r in rows {
                t.push(
                    vec![f(r.a), f(r.approx), f(r.oracle), f(r.abs_error), f(r.scaled_error)],
                    json!({
                        "a": num(r.a),
                        "approx": num(r.approx),
                        "oracle": num(r.oracle),
                        "abs_error": num(r.abs_error),
                        "scaled_error": num(r.scaled_error),
                    }),
                );
            }
            t
        }
        CommandKind::Identities => {
            let report = check_norlund_bell_identity(spec.order);
            let mut t = Table::new(vec!["n", "norlund_bell", "gamma_ratio", "reflected", "pass"]);
            let mut failed = Vec::new();
            for row in &report.rows {
                if !row.passed() {
                    failed.push(row.n.to_string());
                }
                t.push(
                    vec![
                        row.n.to_string(),
                        row.norlund_bell.to_string(),
                        row.gamma_ratio.to_string(),
                        row.reflected.to_string(),
                        row.passed().to_string(),
                    ],
                    json!({
                        "n": row.n,
                        "norlund_bell": row.norlund_bell,
                        "gamma_ratio": row.gamma_ratio,
                        "reflected": row.reflected,
                        "pass": row.passed(),
                    }),
                );
            }
            extra.insert("all_pass".into(), json!(report.all_pass()));
            if !failed.is_empty() {
                success = false;
                diagnostic = Some(format!("identity check failed for n = {}", failed.join(", ")));
            }
            t
        }
    };
    Ok(Output {
        text: table.render(spec, extra),
        success,
        diagnostic,
    })
}

/// Parses `args`, runs, and returns `(exit status, stdout, stderr)`.
pub fn run_args<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                (0, text, String::new())
            } else {
                (1, String::new(), text)
            };
        }
    };
    let result = RunSpec::from_cli(cli).and_then(|spec| run(&spec));
    match result {
        Ok(out) => {
            let err = out.diagnostic.map(|d| format!("error: {d}\n")).unwrap_or_default();
            (if out.success { 0 } else { 1 }, out.text, err)
        }
        Err(e) => (1, String::new(), format!("error: {e}\n")),
    }
}
