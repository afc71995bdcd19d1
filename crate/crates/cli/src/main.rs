//! `etaflat`: typecheck, flatten and verify programs; check and translate
//! intersection-type derivations.
//!
//! Exit codes: 0 success, 1 type error (or rejected derivation), 2 parse
//! error, 3 verification failure, 64 usage error.

use std::fs;
use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use etaflat::bcd::{self, BcdDeriv};
use etaflat::eta::EtaTrace;
use etaflat::sexp::{self, Sexp};
use etaflat::syntax::{parse_elaborated_expr, parse_expr, parse_type, pretty_expr, Expr, Type};
use etaflat::typing::{typecheck, TypeError};
use etaflat::{
    check_typing_deriv, deep_sub, flatten, reduce_search, shallow_sub, verify_trace, Ctx, ElabOptions, Flavor,
    Mode,
};

const WIDTH: usize = 80;

#[derive(Parser)]
#[command(name = "etaflat", version, about = "Elaborate deep subtyping into η-expansions")]
struct Cli {
    /// Print nothing; report through the exit code only.
    #[arg(long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Typecheck a program.
    Check {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = System::Deep)]
        system: System,
        #[command(flatten)]
        mode: ModeArgs,
        /// Print the typing derivation.
        #[arg(long)]
        emit_deriv: bool,
    },
    /// Decide a subtyping judgment between two types.
    Sub {
        #[arg(long, value_enum, default_value_t = System::Deep)]
        system: System,
        lhs: String,
        rhs: String,
        /// Print the subtyping derivation (deep system only).
        #[arg(long)]
        emit_deriv: bool,
    },
    /// Rewrite a deep-typed program so that it needs only shallow subtyping.
    Flatten {
        file: PathBuf,
        #[command(flatten)]
        mode: ModeArgs,
        /// Skip expansions that only witness reflexivity.
        #[arg(long)]
        minimize_coercions: bool,
        /// Write the η-trace from the output back to the input here.
        #[arg(long, value_name = "FILE")]
        emit_trace: Option<PathBuf>,
        /// Write the program here instead of standard output.
        #[arg(short, value_name = "FILE")]
        o: Option<PathBuf>,
        /// Skip the shallow re-check and trace replay of the output.
        #[arg(long)]
        no_self_verify: bool,
    },
    /// Check that a flattened program shallow-typechecks and η-reduces to
    /// the original.
    Verify {
        original: PathBuf,
        flattened: PathBuf,
        #[arg(long, value_name = "FILE", conflicts_with = "search_fuel", required_unless_present = "search_fuel")]
        trace: Option<PathBuf>,
        /// Search for a reduction of at most this many steps instead.
        #[arg(long, value_name = "N")]
        search_fuel: Option<usize>,
        /// Check against this type instead of synthesizing one.
        #[arg(long = "type", value_name = "TYPE")]
        ty: Option<String>,
    },
    /// Intersection-type derivations.
    Bcd {
        #[command(subcommand)]
        command: BcdCommand,
    },
}

#[derive(Subcommand)]
enum BcdCommand {
    /// Validate a subtyping derivation and print its conclusion.
    CheckSub { file: PathBuf },
    /// Validate a typing derivation and print its conclusion.
    CheckTyping { file: PathBuf },
    /// Translate an extended derivation into the modified system.
    Flatten { file: PathBuf },
    /// Search for a subtyping derivation between two types.
    SubSearch {
        sigma: String,
        tau: String,
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
}

#[derive(Args)]
struct ModeArgs {
    #[arg(long, value_enum, default_value_t = ModeArg::Synth)]
    mode: ModeArg,
    /// Type to check against; required with `--mode check`.
    #[arg(long = "type", value_name = "TYPE")]
    ty: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum System {
    Deep,
    Shallow,
}

impl From<System> for Flavor {
    fn from(s: System) -> Flavor {
        match s {
            System::Deep => Flavor::Deep,
            System::Shallow => Flavor::Shallow,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Synth,
    Check,
}

enum Failure {
    Type(String),
    Parse(String),
    Verify(String),
    Usage(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Type(_) => 1,
            Failure::Parse(_) => 2,
            Failure::Verify(_) => 3,
            Failure::Usage(_) => 64,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Type(m) | Failure::Parse(m) | Failure::Verify(m) | Failure::Usage(m) => m,
        }
    }
}

impl From<TypeError> for Failure {
    fn from(e: TypeError) -> Failure {
        Failure::Type(format!("type error {e}"))
    }
}

struct Out {
    quiet: bool,
}

impl Out {
    fn say(&self, text: impl AsRef<str>) {
        if !self.quiet {
            println!("{}", text.as_ref());
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(64);
        }
    };
    let out = Out { quiet: cli.quiet };
    match run(cli.command, &out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if !out.quiet {
                eprintln!("etaflat: {}", f.message());
            }
            ExitCode::from(f.code())
        }
    }
}

fn run(command: Command, out: &Out) -> Result<(), Failure> {
    match command {
        Command::Check { file, system, mode, emit_deriv } => {
            let e = read_program(&file)?;
            let (mode, ty) = mode_and_type(&mode)?;
            let d = typecheck(system.into(), &Ctx::empty(), &e, mode, ty.as_ref())?;
            out.say(match mode {
                Mode::Synth => d.ty.to_string(),
                Mode::Check => "ok".to_string(),
            });
            if emit_deriv {
                out.say(d.to_sexp().pretty(WIDTH));
            }
            Ok(())
        }
        Command::Sub { system, lhs, rhs, emit_deriv } => {
            let a = type_arg(&lhs)?;
            let b = type_arg(&rhs)?;
            match system {
                System::Deep => match deep_sub(&a, &b) {
                    Some(d) => {
                        out.say("yes");
                        if emit_deriv {
                            out.say(d.to_sexp().pretty(WIDTH));
                        }
                    }
                    None => out.say("no"),
                },
                System::Shallow => out.say(if shallow_sub(&a, &b) { "yes" } else { "no" }),
            }
            Ok(())
        }
        Command::Flatten { file, mode, minimize_coercions, emit_trace, o, no_self_verify } => {
            let e = read_program(&file)?;
            let (mode, ty) = mode_and_type(&mode)?;
            let r = flatten(&Ctx::empty(), &e, mode, ty.as_ref(), ElabOptions { minimize: minimize_coercions })?;
            let text = pretty_expr(&r.output);
            if !no_self_verify {
                self_verify(&r, &text)?;
            }
            if let Some(path) = emit_trace {
                write_file(&path, &r.trace.to_string())?;
            }
            match o {
                Some(path) => write_file(&path, &format!("{text}\n")),
                None => {
                    out.say(&text);
                    Ok(())
                }
            }
        }
        Command::Verify { original, flattened, trace, search_fuel, ty } => {
            let source = read_program(&original)?;
            let text = read_file(&flattened)?;
            let output = parse_elaborated_expr(&text).map_err(|e| parse_failure(&flattened, e))?;
            let ty = ty.as_deref().map(type_arg).transpose()?;
            let mode = if ty.is_some() { Mode::Check } else { Mode::Synth };
            typecheck(Flavor::Shallow, &Ctx::empty(), &output, mode, ty.as_ref())
                .map_err(|e| Failure::Verify(format!("flattened program does not shallow-typecheck: {e}")))?;
            let trace = match (trace, search_fuel) {
                (Some(path), _) => read_file(&path)?
                    .parse::<EtaTrace>()
                    .map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?,
                (None, Some(fuel)) => reduce_search(&output, &source, fuel).ok_or_else(|| {
                    Failure::Verify(format!("no η-reduction of at most {fuel} steps reaches the original"))
                })?,
                (None, None) => return Err(Failure::Usage("give --trace or --search-fuel".into())),
            };
            if !verify_trace(&output, &trace, &source) {
                return Err(Failure::Verify("the trace does not reduce the flattened program to the original".into()));
            }
            out.say("ok");
            Ok(())
        }
        Command::Bcd { command } => run_bcd(command, out),
    }
}

fn self_verify(r: &etaflat::ElabResult, text: &str) -> Result<(), Failure> {
    let fail = |what: &str| Err(Failure::Verify(format!("self-verification failed: {what}")));
    if check_typing_deriv(Flavor::Shallow, &r.deriv).is_err() {
        return fail("the shallow derivation does not validate");
    }
    if typecheck(Flavor::Shallow, &r.deriv.ctx, &r.output, Mode::Check, Some(&r.ty)).is_err() {
        return fail("the output does not shallow-typecheck");
    }
    if !verify_trace(&r.output, &r.trace, &r.input) {
        return fail("the trace does not reduce the output to the input");
    }
    if parse_elaborated_expr(text).ok().as_ref() != Some(&r.output) {
        return fail("the printed output does not reparse to the same program");
    }
    Ok(())
}

fn run_bcd(command: BcdCommand, out: &Out) -> Result<(), Failure> {
    match command {
        BcdCommand::CheckSub { file } => {
            let s = read_sexp(&file)?;
            let d = bcd::sub_from_sexp(&s).map_err(|e| Failure::Parse(format!("{}: {e}", file.display())))?;
            let (sigma, tau) = bcd::check_bcd_sub(&d).map_err(|e| Failure::Type(e.to_string()))?;
            out.say(format!("{sigma} <= {tau}"));
            Ok(())
        }
        BcdCommand::CheckTyping { file } => {
            let d = read_bcd_deriv(&file)?;
            let j = bcd::check_bcd_typing(&d).map_err(|e| Failure::Type(e.to_string()))?;
            out.say(format!("{} : {}", j.subject, j.ty));
            Ok(())
        }
        BcdCommand::Flatten { file } => {
            let d = read_bcd_deriv(&file)?;
            let translated = bcd::lemma42(&d).map_err(|e| Failure::Type(e.to_string()))?;
            let j = bcd::check_bcd_typing(&translated)
                .map_err(|e| Failure::Verify(format!("translated derivation does not check: {e}")))?;
            let original = bcd::check_bcd_typing(&d).map_err(|e| Failure::Type(e.to_string()))?;
            if !j.subject.alpha_eq(&original.subject) || j.ty != original.ty || j.basis != original.basis {
                return Err(Failure::Verify("translated derivation has a different conclusion".into()));
            }
            out.say(bcd::deriv_to_sexp(&translated).pretty(WIDTH));
            Ok(())
        }
        BcdCommand::SubSearch { sigma, tau, depth } => {
            let parse = |text: &str| {
                sexp::parse_one(text)
                    .map_err(bcd::BcdReadError::from)
                    .and_then(|s| bcd::type_from_sexp(&s))
                    .map_err(|e| Failure::Parse(format!("`{text}`: {e}")))
            };
            let (s, t) = (parse(&sigma)?, parse(&tau)?);
            match bcd::bcd_sub_search(&s, &t, depth) {
                Some(d) => {
                    out.say(bcd::sub_to_sexp(&d).pretty(WIDTH));
                    Ok(())
                }
                None => Err(Failure::Type(format!("no derivation of depth at most {depth} found"))),
            }
        }
    }
}

fn mode_and_type(args: &ModeArgs) -> Result<(Mode, Option<Type>), Failure> {
    match (args.mode, &args.ty) {
        (ModeArg::Check, None) => Err(Failure::Usage("--mode check requires --type".into())),
        (ModeArg::Check, Some(t)) => Ok((Mode::Check, Some(type_arg(t)?))),
        (ModeArg::Synth, Some(_)) => Err(Failure::Usage("--type is only allowed with --mode check".into())),
        (ModeArg::Synth, None) => Ok((Mode::Synth, None)),
    }
}

fn type_arg(text: &str) -> Result<Type, Failure> {
    parse_type(text).map_err(|e| Failure::Parse(format!("type `{text}`: {e}")))
}

fn read_file(path: &FsPath) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &FsPath, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn parse_failure(path: &FsPath, e: impl std::fmt::Display) -> Failure {
    Failure::Parse(format!("{}:{e}", path.display()))
}

fn read_program(path: &FsPath) -> Result<Expr, Failure> {
    parse_expr(&read_file(path)?).map_err(|e| parse_failure(path, e))
}

fn read_sexp(path: &FsPath) -> Result<Sexp, Failure> {
    sexp::parse_one(&read_file(path)?).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn read_bcd_deriv(path: &FsPath) -> Result<BcdDeriv, Failure> {
    let s = read_sexp(path)?;
    bcd::deriv_from_sexp(&s).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}
