//! The `solk` command line.
//!
//! Exit codes: 0 success, 1 validation or pipeline failure (findings are
//! printed), 2 usage, I/O or parse errors.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::germs::{occurring_classes, quotient_summary, ClassOrder};
use crate::intlin::IntMatrix;
use crate::ktheory::{int_json, ktheory_report, limit_json, KTheoryError};
use crate::limits::make_limit;
use crate::model::{parse_presentation, validate, Presentation, ValidationReport};
use crate::sft::{sft_dimension_group, validate_sft, SftPresentation};

#[derive(Parser, Debug)]
#[command(name = "solk", version, about = "K-theory of one-dimensional solenoids and SFT dimension groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
pub enum OrderArg {
    #[default]
    Lex,
    Paper,
}

impl From<OrderArg> for ClassOrder {
    fn from(o: OrderArg) -> Self {
        match o {
            OrderArg::Lex => ClassOrder::Lex,
            OrderArg::Paper => ClassOrder::Paper,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a presentation file and list findings.
    Validate {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Occurring germ classes, the induced map and the quotient summary.
    Classes {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        order: OrderArg,
        #[arg(long)]
        json: bool,
    },
    /// Full K-theory report.
    Ktheory {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        order: OrderArg,
        #[arg(long)]
        json: bool,
    },
    /// Dimension group of a shift of finite type.
    Sft {
        /// Adjacency rows separated by `;`, entries by `,`.
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        json: bool,
    },
    /// Stationary limit of ℤ^r under a square integer matrix.
    Limit {
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        json: bool,
    },
}

/// Parses `"1,1;1,0"` into a matrix.
pub fn parse_matrix_arg(s: &str) -> Result<IntMatrix, String> {
    let rows: Vec<Vec<BigInt>> = s
        .split(';')
        .map(|r| {
            r.split(',')
                .map(|x| {
                    x.trim()
                        .parse::<BigInt>()
                        .map_err(|_| format!("bad matrix entry `{}`", x.trim()))
                })
                .collect()
        })
        .collect::<Result<_, _>>()?;
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err("matrix rows have different lengths".into());
    }
    IntMatrix::new(rows.len(), cols, rows.into_iter().flatten().collect()).map_err(|e| e.to_string())
}

struct Outcome {
    code: i32,
    text: String,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self { code: 0, text }
    }

    fn fail(code: i32, text: String) -> Self {
        Self { code, text }
    }
}

fn render(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values always serialize") + "\n"
}

fn findings_json(r: &ValidationReport) -> Value {
    json!({
        "ok": r.ok(),
        "findings": r.findings.iter().map(|f| json!({
            "severity": f.severity.to_string(),
            "code": f.code,
            "message": f.message,
        })).collect::<Vec<_>>(),
    })
}

fn load(file: &PathBuf) -> Result<Presentation, Outcome> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| Outcome::fail(2, format!("error: cannot read {}: {e}\n", file.display())))?;
    parse_presentation(&text).map_err(|e| Outcome::fail(2, format!("parse error: {}: {e}\n", file.display())))
}

fn invalid(r: &ValidationReport, json: bool) -> Outcome {
    let text = if json { render(&findings_json(r)) } else { r.to_string() };
    Outcome::fail(1, text)
}

fn execute(cmd: Command) -> Outcome {
    match cmd {
        Command::Validate { file, json } => {
            let p = match load(&file) {
                Ok(p) => p,
                Err(o) => return o,
            };
            let r = validate(&p);
            let text = if json { render(&findings_json(&r)) } else { r.to_string() };
            Outcome::fail(if r.ok() { 0 } else { 1 }, text)
        }
        Command::Classes { file, order, json } => {
            let p = match load(&file) {
                Ok(p) => p,
                Err(o) => return o,
            };
            let r = validate(&p);
            if !r.ok() {
                return invalid(&r, json);
            }
            let q = match occurring_classes(&p) {
                Ok(q) => q.with_order(order.into()),
                Err(e) => return Outcome::fail(1, format!("error: {e}\n")),
            };
            let summary = match quotient_summary(&p, &q) {
                Ok(s) => s,
                Err(e) => return Outcome::fail(1, format!("error: {e}\n")),
            };
            let labels = q.labels(&p);
            let g = p.graph();
            let pre = |i: usize| -> Vec<String> {
                q.interior_preimages[i]
                    .iter()
                    .map(|(f, k)| format!("({},{k})", g.edge_name(*f)))
                    .collect()
            };
            if json {
                let classes: Vec<Value> = (0..q.len())
                    .map(|i| {
                        json!({
                            "class": labels[i],
                            "vertex": g.vertex_name(q.classes[i].vertex),
                            "gtilde": labels[q.gtilde[i]],
                            "vertex_preimages": q.vertex_preimages(i).iter().map(|&j| labels[j].clone()).collect::<Vec<_>>(),
                            "interior_preimages": pre(i),
                        })
                    })
                    .collect();
                Outcome::ok(render(&json!({
                    "classes": classes,
                    "hausdorff": summary.hausdorff.hausdorff,
                    "hausdorff_witness": summary.hausdorff.witness.map(|(a, b)| [a.label(&p), b.label(&p)]),
                    "connected": summary.connected,
                    "degree": summary.degree,
                    "nuclear_dimension_bound": summary.nuclear_dimension_bound,
                })))
            } else {
                let mut text = format!("classes: {}\n", labels.join(" "));
                for i in 0..q.len() {
                    let vp: Vec<String> = q.vertex_preimages(i).iter().map(|&j| labels[j].clone()).collect();
                    text.push_str(&format!(
                        "  {} -> {}   preimages: classes [{}] interior [{}]\n",
                        labels[i],
                        labels[q.gtilde[i]],
                        vp.join(", "),
                        pre(i).join(", ")
                    ));
                }
                text.push_str(&summary.to_string());
                Outcome::ok(text)
            }
        }
        Command::Ktheory { file, order, json } => {
            let p = match load(&file) {
                Ok(p) => p,
                Err(o) => return o,
            };
            match ktheory_report(&p, order.into()) {
                Ok(r) if json => Outcome::ok(render(&r.to_json())),
                Ok(r) => Outcome::ok(r.to_string()),
                Err(KTheoryError::Invalid(r)) => invalid(&r, json),
                Err(e) => Outcome::fail(1, format!("error: {e}\n")),
            }
        }
        Command::Sft { matrix, json } => {
            let a = match parse_matrix_arg(&matrix) {
                Ok(a) => a,
                Err(e) => return Outcome::fail(2, format!("error: {e}\n")),
            };
            let s = SftPresentation::from_matrix(a);
            let r = validate_sft(&s);
            if !r.ok() {
                return invalid(&r, json);
            }
            let k = match sft_dimension_group(&s) {
                Ok(k) => k,
                Err(e) => return Outcome::fail(1, format!("error: {e}\n")),
            };
            if json {
                Outcome::ok(render(&json!({
                    "k0_limit": limit_json(&k.k0),
                    "k1": k.k1,
                    "warnings": r.findings.iter().map(|f| f.code).collect::<Vec<_>>(),
                })))
            } else {
                let mut text = format!("K0 = {}\nK1 = 0\n", k.k0.classify());
                for f in &r.findings {
                    text.push_str(&format!("{} [{}]: {}\n", f.severity, f.code, f.message));
                }
                Outcome::ok(text)
            }
        }
        Command::Limit { matrix, json } => {
            let t = match parse_matrix_arg(&matrix) {
                Ok(t) => t,
                Err(e) => return Outcome::fail(2, format!("error: {e}\n")),
            };
            let g = match make_limit(&t) {
                Ok(g) => g,
                Err(e) => return Outcome::fail(2, format!("error: {e}\n")),
            };
            if json {
                Outcome::ok(render(&limit_json(&g)))
            } else {
                Outcome::ok(format!(
                    "{}\neventual rank: {}\neventual basis: {}\nreduced endomorphism: {}\ndet: {}\n",
                    g.classify(),
                    g.eventual_rank(),
                    g.eventual_basis(),
                    g.reduced_endomorphism(),
                    int_json(&g.reduced_endomorphism().det())
                ))
            }
        }
    }
}

/// Runs the CLI on `argv` (including the program name), writing the report
/// to `out`; returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(out, "{e}");
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let outcome = execute(cli.command);
    let _ = out.write_all(outcome.text.as_bytes());
    outcome.code
}
