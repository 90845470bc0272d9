//! The `probscheme` command-line tool.
//!
//! Commands that construct something print a document; commands that check
//! a property print a text report whose first line is `true` or `false`.
//! Exit status is 0 on success, 1 when a checked property is false, and 2 on
//! any input error.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};

use crate::algebra::Partition;
use crate::condexp::cond_expectation;
use crate::error::Error;
use crate::fiberprod::{cond_independent, fiber_product};
use crate::format::{parse_document, read_document, serialize, Document, FormatError, Style};
use crate::laws::check_documents;
use crate::markov::{coordinate_functions, markov_build, markov_verify};
use crate::rational::{self, Rational};
use crate::stats::{chebyshev_check, linear_regression, wlln_certificate};
use crate::variable::{distribution_scheme, joint, RandomFunction, RandomVariable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Parse one document and print it in canonical form.
    Validate,
    /// Expectation and variance of a random variable.
    Expect,
    /// Conditional expectation of an rv given a partition or an rf.
    Condexp,
    /// Regress the second rv on the first.
    Regress,
    /// Chebyshev's inequality for an rv at --epsilon.
    Chebyshev,
    /// Weak-law bound for uncorrelated rvs with --bound and --epsilon.
    Wlln,
    /// Fiber product of two bundles over a common base.
    Fiberprod,
    /// Whether X and Y are conditionally independent given Z.
    Condindep,
    /// Whether a sequence of random functions is a Markov chain.
    MarkovCheck,
    /// Glue adjacent-pair schemes into a path scheme.
    MarkovBuild,
    /// Distribution scheme of one or more random functions (jointly).
    DistScheme,
    /// Run every applicable identity on the inputs.
    LawsCheck,
}

impl Command {
    pub fn usage(self) -> &'static str {
        match self {
            Command::Validate => "probscheme validate --in DOC",
            Command::Expect => "probscheme expect --in RV",
            Command::Condexp => "probscheme condexp --in RV --in PARTITION|RF",
            Command::Regress => "probscheme regress --in X.rv --in Y.rv",
            Command::Chebyshev => "probscheme chebyshev --in RV --epsilon Q",
            Command::Wlln => "probscheme wlln --in RV... --bound K --epsilon Q",
            Command::Fiberprod => "probscheme fiberprod --in BUNDLE --in BUNDLE",
            Command::Condindep => "probscheme condindep --in X --in Y --in Z  (rf or rv each)",
            Command::MarkovCheck => "probscheme markov-check --in SCHEME | --in X1 --in X2...",
            Command::MarkovBuild => "probscheme markov-build --in PAIRS | --in SCHEME...",
            Command::DistScheme => "probscheme dist-scheme --in RF...",
            Command::LawsCheck => "probscheme laws-check --in DOC...",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum FormatArg {
    #[default]
    Canonical,
    Pretty,
}

impl From<FormatArg> for Style {
    fn from(f: FormatArg) -> Style {
        match f {
            FormatArg::Canonical => Style::Canonical,
            FormatArg::Pretty => Style::Pretty,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "probscheme", version, about = "Exact finite probability schemes and bundles")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// Input document; `-` reads standard input. Repeatable.
    #[arg(long = "in", value_name = "FILE")]
    pub inputs: Vec<String>,
    /// Write the result here instead of standard output.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Layout of document output; reports are always plain text
    #[arg(long, value_enum, default_value_t)]
    pub format: FormatArg,
    /// Deviation threshold, an exact rational such as `1/2`
    #[arg(long, value_name = "Q")]
    pub epsilon: Option<String>,
    /// Common upper bound on the variances, an exact rational
    #[arg(long, value_name = "K")]
    pub bound: Option<String>,
}

#[derive(Debug, Clone, Default)]
pub struct Options {
    pub epsilon: Option<Rational>,
    pub bound: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Output {
    Document(Document),
    Report(Report),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    /// `None` for purely informational reports.
    pub verdict: Option<bool>,
    pub lines: Vec<ReportLine>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReportLine {
    Field(&'static str, String),
    Law {
        passed: bool,
        subject: String,
        law: &'static str,
        witness: Option<String>,
    },
}

impl Output {
    pub fn exit_code(&self) -> i32 {
        match self {
            Output::Report(Report {
                verdict: Some(false),
                ..
            }) => 1,
            _ => 0,
        }
    }

    pub fn render(&self, style: Style, color: bool) -> String {
        match self {
            Output::Document(doc) => serialize(doc, style),
            Output::Report(report) => report.render(color),
        }
    }
}

impl Report {
    fn info(lines: Vec<ReportLine>) -> Self {
        Self { verdict: None, lines }
    }

    fn verdict(verdict: bool, lines: Vec<ReportLine>) -> Self {
        Self {
            verdict: Some(verdict),
            lines,
        }
    }

    pub fn render(&self, color: bool) -> String {
        let paint = |text: &str, good: bool| {
            if color {
                format!("\x1b[{}m{text}\x1b[0m", if good { 32 } else { 31 })
            } else {
                text.to_string()
            }
        };
        let mut out = String::new();
        if let Some(v) = self.verdict {
            out += &paint(if v { "true" } else { "false" }, v);
            out.push('\n');
        }
        for line in &self.lines {
            match line {
                ReportLine::Field(key, value) => out += &format!("{key} {value}\n"),
                ReportLine::Law {
                    passed,
                    subject,
                    law,
                    witness,
                } => {
                    out += &paint(if *passed { "PASS" } else { "FAIL" }, *passed);
                    out += &format!(" {subject} {law}");
                    if let Some(w) = witness {
                        out += &format!(": {w}");
                    }
                    out.push('\n');
                }
            }
        }
        out
    }
}

fn field(key: &'static str, value: impl ToString) -> ReportLine {
    ReportLine::Field(key, value.to_string())
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Format(#[from] FormatError),
    #[error("{0}")]
    Core(#[from] Error),
    #[error("{message}\nusage: {usage}")]
    Usage { message: String, usage: &'static str },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

fn usage<T>(command: Command, message: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Usage {
        message: message.into(),
        usage: command.usage(),
    })
}

/// Executes `command` on already-parsed input documents.
pub fn run_command(command: Command, docs: &[Document], options: &Options) -> Result<Output, CliError> {
    let kinds = || docs.iter().map(Document::kind).collect::<Vec<_>>().join(", ");
    let wrong_inputs = || usage(command, format!("unexpected inputs: [{}]", kinds()));
    match command {
        Command::Validate => match docs {
            [doc] => Ok(Output::Document(doc.clone())),
            _ => wrong_inputs(),
        },
        Command::Expect => match docs {
            [Document::Rv(x)] => Ok(Output::Report(Report::info(vec![
                field("expectation", x.expectation()),
                field("variance", x.variance()),
            ]))),
            _ => wrong_inputs(),
        },
        Command::Condexp => {
            let (x, partition) = match docs {
                [Document::Rv(x), Document::Partition(p)] | [Document::Partition(p), Document::Rv(x)] => {
                    (x, p.clone())
                }
                [Document::Rv(x), Document::Rf(f)] | [Document::Rf(f), Document::Rv(x)] => {
                    (x, Partition::from_functions(f.domain(), std::slice::from_ref(f))?)
                }
                _ => return wrong_inputs(),
            };
            Ok(Output::Document(Document::Rv(cond_expectation(x, &partition)?)))
        }
        Command::Regress => match docs {
            [Document::Rv(x), Document::Rv(y)] => {
                let fit = linear_regression(x, y)?;
                let r2 = fit.r_squared.map_or_else(|| "undefined".to_string(), |r| r.to_string());
                Ok(Output::Report(Report::info(vec![
                    field("slope", fit.slope),
                    field("intercept", fit.intercept),
                    field("var-fitted", fit.var_fitted),
                    field("var-residual", fit.var_residual),
                    field("r-squared", r2),
                ])))
            }
            _ => wrong_inputs(),
        },
        Command::Chebyshev => match docs {
            [Document::Rv(x)] => {
                let eps = require_option(command, &options.epsilon, "--epsilon")?;
                let (p, bound) = chebyshev_check(x, eps)?;
                Ok(Output::Report(Report::verdict(
                    p <= bound,
                    vec![field("probability", p), field("bound", bound)],
                )))
            }
            _ => wrong_inputs(),
        },
        Command::Wlln => {
            let Some(xs) = all_rvs(docs).filter(|xs| !xs.is_empty()) else {
                return wrong_inputs();
            };
            let eps = require_option(command, &options.epsilon, "--epsilon")?;
            let k = require_option(command, &options.bound, "--bound")?;
            let cert = wlln_certificate(&xs, k, eps)?;
            Ok(Output::Report(Report::verdict(
                cert.deviation_probability <= cert.bound && cert.var_mean == cert.var_sum_scaled,
                vec![
                    field("n", xs.len()),
                    field("var-mean", cert.var_mean),
                    field("var-sum-scaled", cert.var_sum_scaled),
                    field("probability", cert.deviation_probability),
                    field("bound", cert.bound),
                ],
            )))
        }
        Command::Fiberprod => match docs {
            [Document::Bundle(a), Document::Bundle(b)] => {
                Ok(Output::Document(Document::Bundle(fiber_product(a, b)?.down().clone())))
            }
            _ => wrong_inputs(),
        },
        Command::Condindep => {
            let fns = all_functions(docs).filter(|f| f.len() == 3);
            let Some(fns) = fns else { return wrong_inputs() };
            let (independent, witness) = cond_independent(&fns[0], &fns[1], &fns[2])?;
            let lines = witness.map(|w| field("witness", w)).into_iter().collect();
            Ok(Output::Report(Report::verdict(independent, lines)))
        }
        Command::MarkovCheck => {
            let fns = match docs {
                [Document::Scheme(s)] => coordinate_functions(s)?,
                _ => match all_functions(docs) {
                    Some(fns) => fns,
                    None => return wrong_inputs(),
                },
            };
            let (is_markov, failing) = markov_verify(&fns)?;
            let lines = failing.map(|i| field("failing-step", i)).into_iter().collect();
            Ok(Output::Report(Report::verdict(is_markov, lines)))
        }
        Command::MarkovBuild => {
            let pairs = match docs {
                [Document::Pairs(pairs)] => pairs.clone(),
                _ => match docs
                    .iter()
                    .map(|d| match d {
                        Document::Scheme(s) => Some(s.clone()),
                        _ => None,
                    })
                    .collect::<Option<Vec<_>>>()
                {
                    Some(schemes) if !schemes.is_empty() => schemes,
                    _ => return wrong_inputs(),
                },
            };
            Ok(Output::Document(Document::Scheme(markov_build(&pairs)?)))
        }
        Command::DistScheme => {
            let Some(fns) = all_functions(docs).filter(|f| !f.is_empty()) else {
                return wrong_inputs();
            };
            let (scheme, _) = distribution_scheme(&joint(&fns)?);
            Ok(Output::Document(Document::Scheme(scheme)))
        }
        Command::LawsCheck => {
            if docs.is_empty() {
                return wrong_inputs();
            }
            let outcomes = check_documents(docs)?;
            let failed = outcomes.iter().filter(|o| !o.passed()).count();
            let mut lines: Vec<ReportLine> = outcomes
                .into_iter()
                .map(|o| ReportLine::Law {
                    passed: o.passed(),
                    subject: o.subject,
                    law: o.law,
                    witness: o.witness,
                })
                .collect();
            lines.push(field("failed", failed));
            Ok(Output::Report(Report {
                verdict: Some(failed == 0),
                lines,
            }))
        }
    }
}

fn require_option<'a>(
    command: Command,
    value: &'a Option<Rational>,
    flag: &str,
) -> Result<&'a Rational, CliError> {
    match value {
        Some(v) => Ok(v),
        None => usage(command, format!("{flag} is required")),
    }
}

fn all_rvs(docs: &[Document]) -> Option<Vec<RandomVariable>> {
    docs.iter()
        .map(|d| match d {
            Document::Rv(x) => Some(x.clone()),
            _ => None,
        })
        .collect()
}

/// Random functions, with random variables converted to their value labels.
fn all_functions(docs: &[Document]) -> Option<Vec<RandomFunction>> {
    docs.iter()
        .map(|d| match d {
            Document::Rf(f) => Some(f.clone()),
            Document::Rv(x) => Some(x.to_function()),
            _ => None,
        })
        .collect()
}

fn parse_rational(flag: &str, text: &str) -> Result<Rational, String> {
    rational::parse(text).ok_or_else(|| format!("{flag}: {text:?} is not an exact rational"))
}

fn load_inputs(inputs: &[String], stdin: &mut dyn Read) -> Result<Vec<Document>, CliError> {
    let mut stdin_used = false;
    let mut read_stdin = || -> Result<Document, CliError> {
        if std::mem::replace(&mut stdin_used, true) {
            return Err(CliError::Io {
                path: "-".into(),
                message: "standard input can be read only once".into(),
            });
        }
        let mut text = String::new();
        stdin.read_to_string(&mut text).map_err(|e| CliError::Io {
            path: "-".into(),
            message: e.to_string(),
        })?;
        Ok(parse_document(&text)?)
    };
    if inputs.is_empty() {
        return Ok(vec![read_stdin()?]);
    }
    inputs
        .iter()
        .map(|path| match path.as_str() {
            "-" => read_stdin(),
            path => Ok(read_document(Path::new(path))?),
        })
        .collect()
}

/// Runs the tool with explicit streams and returns the exit status.
pub fn main_with(
    args: impl IntoIterator<Item = String>,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
    color: bool,
) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = if code == 0 {
                write!(stdout, "{}", e.render())
            } else {
                write!(stderr, "{}", e.render())
            };
            return code;
        }
    };
    match execute(&cli, stdin) {
        Ok(output) => {
            let text = output.render(cli.format.into(), color);
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &text).map_err(|e| (path.display().to_string(), e)),
                None => stdout.write_all(text.as_bytes()).map_err(|e| ("-".to_string(), e)),
            };
            match written {
                Ok(()) => output.exit_code(),
                Err((path, e)) => {
                    let _ = writeln!(stderr, "error: {path}: {e}");
                    2
                }
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}

fn execute(cli: &Cli, stdin: &mut dyn Read) -> Result<Output, CliError> {
    let parse_flag = |flag: &str, value: &Option<String>| {
        value
            .as_deref()
            .map(|text| parse_rational(flag, text))
            .transpose()
            .map_err(|message| CliError::Usage {
                message,
                usage: cli.command.usage(),
            })
    };
    let options = Options {
        epsilon: parse_flag("--epsilon", &cli.epsilon)?,
        bound: parse_flag("--bound", &cli.bound)?,
    };
    let docs = load_inputs(&cli.inputs, stdin)?;
    run_command(cli.command, &docs, &options)
}

/// Entry point for the binary: real streams, color from `PROBSCHEME_COLOR`.
pub fn main() -> i32 {
    let color = std::env::var("PROBSCHEME_COLOR").is_ok_and(|v| v == "1");
    main_with(
        std::env::args(),
        &mut std::io::stdin().lock(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
        color,
    )
}
