//! `odelin`: linearization certificates and characteristic polynomial recovery for scalar ODEs.
//!
//! JSON goes to stdout, a one-line human summary to stderr.
//! Exit codes: 0 linearizable (or equivalent), 1 not linearizable (or not
//! equivalent), 2 input error, 3 internal error.

mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use odelin::jetcore::Rat;
use odelin::liealg::Verdict;
use odelin::pipeline::{analyze_text, recover, Analysis, Options};
use odelin::recover::{affine_class, affine_equivalence, CharPoly, EquivReason};
use odelin::xoracle::{push_linear, PointTransformation};
use odelin::Error;

use report::{ErrorBody, ErrorReport, Extras};

#[derive(Parser)]
#[command(name = "odelin", version, about = "Point-symmetry linearization test for scalar ODEs")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Suppress the human-readable summary on stderr.
    #[arg(long, global = true)]
    json_only: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the ODE is point-equivalent to a linear one.
    Certify(OdeArgs),
    /// Certify, then recover the characteristic polynomial of the linear target.
    Recover(OdeArgs),
    /// Symmetry dimension and structure constants.
    Symmetries(OdeArgs),
    /// Compare two characteristic polynomials up to affine maps of their roots.
    Equiv {
        /// Coefficients of p, highest degree first, comma separated (e.g. "1,0,-1,0").
        #[arg(allow_hyphen_values = true)]
        p: String,
        /// Coefficients of q, in the same format.
        #[arg(allow_hyphen_values = true)]
        q: String,
    },
    /// Push a linear constant-coefficient ODE through a point transformation.
    Oracle {
        /// Characteristic polynomial coefficients, highest degree first.
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        /// u = psi(x, y)
        #[arg(long, allow_hyphen_values = true)]
        psi: String,
        /// t = phi(x, y)
        #[arg(long, allow_hyphen_values = true)]
        phi: String,
    },
}

#[derive(Args)]
struct OdeArgs {
    /// The ODE, e.g. "y'' + (y')^2 = 0".
    #[arg(allow_hyphen_values = true)]
    ode: Option<String>,

    /// Read the ODE from a file instead.
    #[arg(long, conflicts_with = "ode")]
    file: Option<PathBuf>,

    /// Include the determining system in the output.
    #[arg(long)]
    dump_detsys: bool,

    /// Include the completed system in the output.
    #[arg(long)]
    dump_involutive: bool,

    /// Expansion point "x0,y0" for the series solutions.
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    point: Option<(Rat, Rat)>,

    /// Truncation order of the series solutions.
    #[arg(long)]
    max_order: Option<u32>,

    /// Include per-stage timings (makes output nondeterministic).
    #[arg(long)]
    timings: bool,
}

fn parse_rat(s: &str) -> Result<Rat, String> {
    s.trim().parse::<Rat>().map_err(|e| format!("bad rational {s:?}: {e}"))
}

fn parse_point(s: &str) -> Result<(Rat, Rat), String> {
    let (a, b) = s.split_once(',').ok_or("expected x0,y0")?;
    Ok((parse_rat(a)?, parse_rat(b)?))
}

fn parse_poly(s: &str) -> Result<CharPoly, Error> {
    let cs = s
        .split(',')
        .map(parse_rat)
        .collect::<Result<Vec<_>, _>>()
        .map_err(Error::InvalidOption)?;
    CharPoly::from_high_first(&cs).map_err(|e| Error::InvalidOption(e.to_string()))
}

struct Failure(Error);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e)
    }
}

type Outcome = Result<(String, String, u8), Failure>;

fn emit<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

impl OdeArgs {
    fn input(&self) -> Result<String, Error> {
        match (&self.ode, &self.file) {
            (Some(s), _) => Ok(s.clone()),
            (None, Some(p)) => std::fs::read_to_string(p)
                .map(|s| s.trim().to_string())
                .map_err(|e| Error::InvalidOption(format!("{}: {e}", p.display()))),
            (None, None) => Err(Error::InvalidOption("no ODE given".into())),
        }
    }

    fn options(&self) -> Options {
        Options {
            point: self.point.clone(),
            max_order: self.max_order,
            ..Options::default()
        }
    }

    fn extras(&self) -> Extras {
        Extras {
            dump_detsys: self.dump_detsys,
            dump_involutive: self.dump_involutive,
            timings: self.timings,
        }
    }

    fn analyze(&self) -> Result<(String, Analysis), Error> {
        let input = self.input()?;
        let a = analyze_text(&input, &self.options())?;
        Ok((input, a))
    }
}

fn verdict_code(a: &Analysis) -> u8 {
    match a.certificate.verdict {
        Verdict::Linearizable => 0,
        Verdict::NotLinearizable => 1,
    }
}

fn summary(a: &Analysis) -> String {
    let c = &a.certificate;
    format!(
        "n = {}, m = {}: {} ({}), derived algebra dim {}{}",
        c.n,
        c.m,
        c.verdict.as_str(),
        c.case.as_str(),
        c.derived_dim,
        if c.derived_abelian { ", abelian" } else { "" }
    )
}

fn run(cmd: &Command) -> Outcome {
    match cmd {
        Command::Certify(args) => {
            let (input, a) = args.analyze()?;
            let r = report::certify_report(&input, &a, &args.extras());
            Ok((emit(&r), summary(&a), verdict_code(&a)))
        }
        Command::Symmetries(args) => {
            let (input, a) = args.analyze()?;
            let r = report::symmetries_report(&input, &a, &args.extras());
            Ok((emit(&r), format!("m = {}", a.m()), 0))
        }
        Command::Recover(args) => {
            let (input, a) = args.analyze()?;
            let rec = recover(&a)?;
            let r = report::recover_report(&input, &a, rec.as_ref(), &args.extras());
            let mut line = summary(&a);
            if let Some(ode) = rec.as_ref().and_then(|r| r.representative_ode()) {
                line.push_str(&format!("; representative {ode}"));
            }
            Ok((emit(&r), line, verdict_code(&a)))
        }
        Command::Equiv { p, q } => {
            let (p, q) = (parse_poly(p)?, parse_poly(q)?);
            let reason = affine_equivalence(&p, &q);
            let r = report::EquivReport {
                p: (&p).into(),
                q: (&q).into(),
                equivalent: reason == EquivReason::Equivalent,
                reason: reason.as_str(),
                class_p: (&affine_class(&p)).into(),
                class_q: (&affine_class(&q)).into(),
            };
            let code = u8::from(reason != EquivReason::Equivalent);
            Ok((emit(&r), format!("{p} vs {q}: {}", reason.as_str()), code))
        }
        Command::Oracle { poly, psi, phi } => {
            let p = parse_poly(poly)?;
            let t = PointTransformation::parse(psi, phi)?;
            let inst = push_linear(&p, &t)?;
            let r = report::oracle_report(&inst);
            Ok((emit(&r), r.ode.clone(), 0))
        }
    }
}

fn error_kind(e: &Error) -> &'static str {
    if e.is_input_error() {
        "input"
    } else {
        "internal"
    }
}

/// Writes ignoring errors: a closed pipe on the reading side is not a failure.
fn put(mut out: impl Write, text: &str) {
    let _ = writeln!(out, "{text}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok((json, line, code)) => {
            put(std::io::stdout().lock(), &json);
            if !cli.json_only {
                put(std::io::stderr().lock(), &line);
            }
            ExitCode::from(code)
        }
        Err(Failure(e)) => {
            let body = ErrorReport {
                error: ErrorBody {
                    kind: error_kind(&e),
                    message: e.to_string(),
                },
            };
            put(std::io::stdout().lock(), &emit(&body));
            if !cli.json_only {
                put(std::io::stderr().lock(), &format!("error: {e}"));
            }
            ExitCode::from(if e.is_input_error() { 2 } else { 3 })
        }
    }
}
