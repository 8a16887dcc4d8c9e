//! The `fcimc` command line.

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::checks::{self, Suite};
use crate::error::Error;
use crate::finset::FinSet;
use crate::semantics::{eval_bounded, eval_default, Assignment, LStruct, Structure, WStruct, WitnessPool};
use crate::syntax::{classify, parse, Formula, Signature};
use crate::transforms::{pipeline, to_positive_existential, translate_l_to_w, translate_w_to_l};

pub const EXIT_OK: i32 = 0;
pub const EXIT_COUNTEREXAMPLE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_FRAGMENT: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "fcimc", version, about = "Finite sets and finite unions of closed intervals over the nonnegative rationals")]
struct Cli {
    /// Print a JSON envelope {command, result, failures} instead of plain text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Sig {
    W,
    L,
}

impl From<Sig> for Signature {
    fn from(s: Sig) -> Self {
        match s {
            Sig::W => Signature::W,
            Sig::L => Signature::L,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Direction {
    W2l,
    L2w,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a formula and print it with its class.
    Parse {
        #[arg(long, value_enum)]
        sig: Sig,
        formula: String,
    },
    /// Evaluate a formula under an assignment.
    Eval {
        #[arg(long, value_enum)]
        sig: Sig,
        /// Binding `X=<set>`, in the finite set or interval union text format.
        #[arg(long = "let", value_name = "VAR=SET")]
        lets: Vec<String>,
        /// Points quantifiers range over (must contain 0); defaults to the
        /// points of the assignment, their midpoints and one point above.
        #[arg(long, value_name = "POINTS")]
        pool: Option<String>,
        formula: String,
    },
    /// Translate between the two signatures.
    Translate {
        #[arg(long, value_enum)]
        dir: Direction,
        formula: String,
    },
    /// Eliminate negations from an existential W-formula.
    Posex { formula: String },
    /// Existential L-formula equivalent to an L-formula.
    Pipeline { formula: String },
    /// Run a property suite.
    Check {
        #[arg(long, value_parser = parse_suite)]
        suite: Suite,
        #[arg(long)]
        pool_size: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Parse { .. } => "parse",
            Command::Eval { .. } => "eval",
            Command::Translate { .. } => "translate",
            Command::Posex { .. } => "posex",
            Command::Pipeline { .. } => "pipeline",
            Command::Check { .. } => "check",
        }
    }

    fn formula_text(&self) -> Option<&str> {
        match self {
            Command::Parse { formula, .. }
            | Command::Eval { formula, .. }
            | Command::Translate { formula, .. }
            | Command::Posex { formula }
            | Command::Pipeline { formula } => Some(formula),
            Command::Check { .. } => None,
        }
    }
}

/// What a command produced: plain text, a JSON result and failures.
struct Outcome {
    text: String,
    result: Value,
    failures: Vec<String>,
}

impl Outcome {
    fn formula(f: &Formula, extra: Value) -> Self {
        let mut result = json!({ "formula": f.to_string(), "class": classify(f) });
        if let (Value::Object(m), Value::Object(e)) = (&mut result, extra) {
            m.extend(e);
        }
        Outcome {
            text: f.to_string(),
            result,
            failures: Vec::new(),
        }
    }
}

#[derive(Serialize)]
struct Envelope<'a> {
    command: &'a str,
    result: Value,
    failures: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Fragment(_) => EXIT_FRAGMENT,
        _ => EXIT_USAGE,
    }
}

fn bindings<S: Structure>(lets: &[String]) -> Result<Assignment<S::Elem>, Error> {
    let mut out = Assignment::new();
    for item in lets {
        let (var, value) = item.split_once('=').ok_or_else(|| Error::InvalidValue {
            kind: "binding",
            text: item.clone(),
            reason: "expected VAR=SET".into(),
        })?;
        out.insert(var.trim().to_string(), value.trim().parse()?);
    }
    Ok(out)
}

fn eval_with<S: Structure>(f: &Formula, lets: &[String], pool: Option<&str>) -> Result<bool, Error> {
    let a = bindings::<S>(lets)?;
    match pool {
        None => eval_default::<S>(f, &a),
        Some(text) => {
            let points: FinSet = text.parse()?;
            let n = points.len();
            eval_bounded::<S>(f, &a, &WitnessPool::new(points, n, true)?)
        }
    }
}

fn execute(cmd: &Command) -> Result<(Outcome, i32), Error> {
    let done = |o: Outcome| Ok((o, EXIT_OK));
    match cmd {
        Command::Parse { sig, formula } => {
            let f = parse(formula, (*sig).into())?;
            let mut o = Outcome::formula(&f, json!({}));
            o.text = format!("{f}\nclass: {}", classify(&f).name());
            done(o)
        }
        Command::Eval {
            sig,
            lets,
            pool,
            formula,
        } => {
            let sig: Signature = (*sig).into();
            let f = parse(formula, sig)?;
            let value = match sig {
                Signature::W => eval_with::<WStruct>(&f, lets, pool.as_deref())?,
                Signature::L => eval_with::<LStruct>(&f, lets, pool.as_deref())?,
            };
            done(Outcome {
                text: value.to_string(),
                result: json!({ "value": value }),
                failures: Vec::new(),
            })
        }
        Command::Translate { dir, formula } => match dir {
            Direction::W2l => {
                let g = translate_w_to_l(&parse(formula, Signature::W)?)?;
                done(Outcome::formula(&g, json!({})))
            }
            Direction::L2w => {
                let t = translate_l_to_w(&parse(formula, Signature::L)?)?;
                let mut o = Outcome::formula(&t.formula, json!({ "coordinates": t.coords }));
                for (x, p) in &t.coords {
                    o.text.push_str(&format!("\n{x} = ({}, {})", p.left, p.right));
                }
                done(o)
            }
        },
        Command::Posex { formula } => {
            let g = to_positive_existential(&parse(formula, Signature::W)?)?;
            done(Outcome::formula(&g, json!({})))
        }
        Command::Pipeline { formula } => {
            let g = pipeline(&parse(formula, Signature::L)?)?;
            done(Outcome::formula(&g, json!({})))
        }
        Command::Check {
            suite,
            pool_size,
            seed,
        } => {
            let opts = checks::Options {
                pool_size: *pool_size,
                seed: *seed,
                ..checks::Options::default()
            };
            let report = checks::run(*suite, &opts)?;
            let mut text = report.to_string();
            for note in &report.notes {
                text.push_str(&format!("\nnote: {note}"));
            }
            for f in &report.failures {
                text.push_str(&format!("\ncounterexample: {f}"));
            }
            let code = if report.ok() { EXIT_OK } else { EXIT_COUNTEREXAMPLE };
            Ok((
                Outcome {
                    text,
                    result: json!({
                        "suite": report.suite,
                        "checked": report.checked,
                        "notes": report.notes,
                    }),
                    failures: report.failures,
                },
                code,
            ))
        }
    }
}

/// Renders an error, pointing at the offending column of the formula.
fn describe(e: &Error, formula: Option<&str>) -> String {
    match (e, formula) {
        (Error::Syntax { column, .. }, Some(text)) => {
            format!("error: {e}\n  {text}\n  {}^", " ".repeat(column.saturating_sub(1)))
        }
        _ => format!("error: {e}"),
    }
}

/// Runs the command line `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let name = cli.command.name();
    let (envelope, text, code) = match execute(&cli.command) {
        Ok((o, code)) => (
            Envelope {
                command: name,
                result: o.result,
                failures: o.failures,
                error: None,
            },
            Some(o.text),
            code,
        ),
        Err(e) => {
            let _ = writeln!(err, "{}", describe(&e, cli.command.formula_text()));
            (
                Envelope {
                    command: name,
                    result: Value::Null,
                    failures: Vec::new(),
                    error: Some(e.to_string()),
                },
                None,
                exit_code(&e),
            )
        }
    };
    if cli.json {
        let _ = writeln!(
            out,
            "{}",
            serde_json::to_string(&envelope).expect("envelope serializes")
        );
    } else if let Some(text) = text {
        let _ = writeln!(out, "{text}");
    }
    code
}
