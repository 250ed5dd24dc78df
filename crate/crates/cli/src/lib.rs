//! Argument handling and output for the `vknot` binary.

use std::io::{Read, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use vknot::algebra::LaurentPoly;
use vknot::bracket::StateSum;
use vknot::experiments::{self, ExperimentReport, Table, Verdict};
use vknot::gauss::GaussDiagram;
use vknot::gpv::{gpv_derivative_scan, kauffman_type_report};
use vknot::twist::{figure5, TwistLattice};

pub const LIMIT_ENV: &str = "VKNOT_STATE_LIMIT";

#[derive(Parser, Debug)]
#[command(name = "vknot", version, about = "Exact Kauffman bracket, Jones coefficients and twist lattices")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Largest arrow count the state sum accepts.
    #[arg(long, env = LIMIT_ENV, default_value_t = vknot::bracket::DEFAULT_STATE_LIMIT as u64, global = true,
          value_parser = clap::value_parser!(u64).range(1..=40))]
    pub limit: u64,
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Kauffman bracket of a Gauss code.
    Bracket { code: String },
    /// Normalized bracket f = (-A)^(-3w) <D>.
    Jk { code: String },
    /// Coefficient of x^k in f(e^x).
    Vk {
        code: String,
        #[arg(long)]
        k: usize,
    },
    /// Coefficients v_0..v_order of f(e^x).
    Series {
        code: String,
        #[arg(long, default_value_t = 4)]
        order: usize,
    },
    #[command(subcommand)]
    Twist(TwistCommand),
    /// Gauss code of the n-th Figure 5 diagram.
    Figure5 {
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
    },
    /// Run a named experiment.
    Experiment(ExperimentArgs),
    #[command(subcommand)]
    Gpv(GpvCommand),
}

#[derive(Subcommand, Debug)]
pub enum TwistCommand {
    /// Evaluate a lattice spec `"<code> | (a, b, TYPE); ..."` at a point.
    Eval {
        spec: String,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        z: Vec<i64>,
        /// Also print f of the result.
        #[arg(long)]
        jk: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum GpvCommand {
    /// Discrete derivatives of n -> v_k(Phi(n + shift)) at 0.
    Scan {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        alpha_max: u32,
        #[arg(long, default_value_t = 0)]
        shift: i64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExperimentName {
    Lemma31,
    Lemma32,
    Corollary33,
    Explicit,
    Monotonicity,
    Theorem2,
    Coefficients,
    KauffmanType,
}

#[derive(Args, Debug)]
pub struct ExperimentArgs {
    #[arg(value_enum)]
    pub name: ExperimentName,
    #[arg(long, default_value_t = 12, allow_negative_numbers = true)]
    pub n_max: i64,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long)]
    pub alpha_max: Option<u32>,
    #[arg(long, default_value_t = 4)]
    pub order: usize,
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
}

/// Anything that can be written as text, JSON, or CSV.
struct Output {
    json: Value,
    table: Table,
    text: String,
}

enum Failure {
    Usage(String),
    Verification(Output),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn read_input(arg: &str, stdin: &mut dyn Read) -> Result<String, Failure> {
    if arg == "-" {
        let mut s = String::new();
        stdin.read_to_string(&mut s).map_err(|e| Failure::Usage(format!("stdin: {e}")))?;
        Ok(s.trim().to_string())
    } else if let Some(path) = arg.strip_prefix('@') {
        let s = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{path}: {e}")))?;
        Ok(s.trim().to_string())
    } else {
        Ok(arg.to_string())
    }
}

fn parse_code(arg: &str, stdin: &mut dyn Read) -> Result<GaussDiagram, Failure> {
    let text = read_input(arg, stdin)?;
    text.parse().map_err(|e| Failure::Usage(format!("cannot parse Gauss code `{text}`: {e}")))
}

fn single(columns: &[&str], row: Vec<String>, json: Value, text: String) -> Output {
    Output {
        json,
        table: Table { columns: columns.iter().map(|c| c.to_string()).collect(), rows: vec![row] },
        text,
    }
}

fn laurent(name: &str, d: &GaussDiagram, p: &LaurentPoly) -> Output {
    let code = d.to_string();
    single(
        &["code", name],
        vec![code.clone(), p.to_string()],
        json!({ "code": code, name: p.to_string(), "terms": p }),
        p.to_string(),
    )
}

fn report(r: ExperimentReport) -> Result<Output, Failure> {
    let mut text = format!("experiment {}\n", r.name);
    for (k, v) in &r.params {
        text.push_str(&format!("  {k} = {v}\n"));
    }
    let table = r.table();
    text.push_str(&render_text(&table));
    text.push_str(&format!("verdict: {}", verdict_name(r.verdict)));
    let out = Output { json: serde_json::to_value(&r)?, table, text };
    match r.verdict {
        Verdict::Pass | Verdict::NotApplicable => Ok(out),
        Verdict::Fail | Verdict::Inconclusive => Err(Failure::Verification(out)),
    }
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "pass",
        Verdict::Fail => "fail",
        Verdict::Inconclusive => "inconclusive",
        Verdict::NotApplicable => "not_applicable",
    }
}

fn render_text(t: &Table) -> String {
    let mut widths: Vec<usize> = t.columns.iter().map(|c| c.len()).collect();
    for row in &t.rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: &[String]| {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut s = line(&t.columns);
    for row in &t.rows {
        s.push_str(&line(row));
    }
    s
}

fn render_csv(t: &Table) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&t.columns)?;
    for row in &t.rows {
        w.write_record(row)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(String::from_utf8(bytes)?)
}

fn emit(o: &Output, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
    let body = match format {
        Format::Text => o.text.clone() + "\n",
        Format::Json => serde_json::to_string_pretty(&o.json).expect("json values serialize") + "\n",
        Format::Csv => match render_csv(&o.table) {
            Ok(s) => s,
            Err(_) => return Err(std::io::Error::other("csv encoding failed")),
        },
    };
    out.write_all(body.as_bytes())
}

fn execute(cli: &Cli, stdin: &mut dyn Read) -> Result<Output, Failure> {
    let engine = StateSum::with_limit(cli.limit as usize);
    match &cli.command {
        Command::Bracket { code } => {
            let d = parse_code(code, stdin)?;
            Ok(laurent("bracket", &d, &engine.kauffman_bracket(&d)?))
        }
        Command::Jk { code } => {
            let d = parse_code(code, stdin)?;
            Ok(laurent("f", &d, &engine.jones_kauffman(&d)?))
        }
        Command::Vk { code, k } => {
            let d = parse_code(code, stdin)?;
            let v = engine.vk(&d, *k)?.to_string();
            let code = d.to_string();
            Ok(single(&["code", "k", "v"], vec![code.clone(), k.to_string(), v.clone()], json!({ "code": code, "k": k, "v": v }), v))
        }
        Command::Series { code, order } => {
            let d = parse_code(code, stdin)?;
            let s = engine.series(&d, *order)?;
            let coeffs: Vec<String> = s.coeffs().iter().map(|c| c.to_string()).collect();
            let rows = coeffs.iter().enumerate().map(|(k, c)| vec![k.to_string(), c.clone()]).collect();
            let text = coeffs.iter().enumerate().map(|(k, c)| format!("v{k} = {c}")).collect::<Vec<_>>().join("\n");
            Ok(Output {
                json: json!({ "code": d.to_string(), "order": order, "coefficients": coeffs }),
                table: Table { columns: vec!["k".into(), "v".into()], rows },
                text,
            })
        }
        Command::Twist(TwistCommand::Eval { spec, z, jk }) => {
            let spec = read_input(spec, stdin)?;
            let lattice: TwistLattice =
                spec.parse().map_err(|e| Failure::Usage(format!("cannot parse lattice spec `{spec}`: {e}")))?;
            let d = lattice.eval(z)?;
            let code = d.to_string();
            let point = z.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
            if *jk {
                let f = engine.jones_kauffman(&d)?.to_string();
                Ok(single(
                    &["z", "code", "f"],
                    vec![point, code.clone(), f.clone()],
                    json!({ "z": z, "code": code, "f": f }),
                    format!("{code}\n{f}"),
                ))
            } else {
                Ok(single(&["z", "code"], vec![point, code.clone()], json!({ "z": z, "code": code }), code))
            }
        }
        Command::Figure5 { n } => {
            let code = figure5(*n)?.to_string();
            Ok(single(&["n", "code"], vec![n.to_string(), code.clone()], json!({ "n": n, "code": code }), code))
        }
        Command::Experiment(a) => run_experiment(&engine, a, cli.seed),
        Command::Gpv(GpvCommand::Scan { k, alpha_max, shift }) => {
            let seq = |n: i64| -> Result<_, experiments::ExperimentError> { Ok(engine.vk(&figure5(n)?, *k)?) };
            let rows = gpv_derivative_scan(seq, *shift, 0..=*alpha_max)?;
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|r| vec![r.alpha.to_string(), r.value.to_string(), r.sign.map_or("0".into(), |s| s.to_string())])
                .collect();
            let table = Table { columns: vec!["alpha".into(), "value".into(), "sign".into()], rows: cells };
            Ok(Output {
                json: json!({ "k": k, "shift": shift, "rows": rows }),
                text: render_text(&table).trim_end().to_string(),
                table,
            })
        }
    }
}

fn run_experiment(engine: &StateSum, a: &ExperimentArgs, seed: u64) -> Result<Output, Failure> {
    use experiments::*;
    match a.name {
        ExperimentName::Lemma31 => report(verify_lemma31(engine, a.n_max)?),
        ExperimentName::Lemma32 => report(verify_lemma32(engine, a.k, a.n_max)?),
        ExperimentName::Corollary33 => report(verify_corollary33(engine, a.k)?),
        ExperimentName::Explicit => report(verify_explicit_formulas(engine, a.k, a.n_max)?),
        ExperimentName::Monotonicity => report(verify_monotonicity(engine, a.k, a.n_max)?),
        ExperimentName::Theorem2 => report(theorem2_evidence(engine, a.k, a.alpha_max.unwrap_or(a.k as u32 + 6))?),
        ExperimentName::Coefficients => {
            let table = coefficient_table(engine, -1, a.n_max, a.order)?;
            Ok(Output { json: serde_json::to_value(&table)?, text: render_text(&table).trim_end().to_string(), table })
        }
        ExperimentName::KauffmanType => {
            let r = kauffman_type_report(|d: &GaussDiagram| engine.vk(d, a.k), a.k, a.trials, 3, seed)?;
            let rows = r.trials.iter().map(|t| vec![t.diagram.clone(), t.value.to_string()]).collect();
            let table = Table { columns: vec!["diagram".into(), "value".into()], rows };
            let verdict = if r.all_zero() { Verdict::Pass } else { Verdict::Fail };
            let text = format!("{}verdict: {}", render_text(&table), verdict_name(verdict));
            let out = Output { json: json!({ "report": r, "verdict": verdict }), table, text };
            if r.all_zero() {
                Ok(out)
            } else {
                Err(Failure::Verification(out))
            }
        }
    }
}

/// Runs the CLI on `args` (program name first) and returns the exit status:
/// 0 on success, 1 on a failed verification, 2 on a usage or input error.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let (output, status) = match execute(&cli, stdin) {
        Ok(o) => (o, 0),
        Err(Failure::Verification(o)) => (o, 1),
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            return 2;
        }
    };
    if let Err(e) = emit(&output, cli.format, out) {
        let _ = writeln!(err, "error: {e}");
        return 2;
    }
    status
}
