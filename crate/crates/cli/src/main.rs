//! `recur`: command-line access to the reduction engine and its rule catalog.
//!
//! Engine failures exit with status 1 and a single stderr line
//! `error:<code>:<detail>`; usage errors exit with status 2.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use recurrence_core::frontend::json::serialize_result_var;
use recurrence_core::frontend::{deserialize_result, print_expr_var};
use recurrence_core::verify::selftest_rules;
use recurrence_core::{
    classify, degeneracy_profile, parse_expr, reduce_with, verify_result, AlgTerm, Catalog, Error, Execution, FormTag,
    Integrand, Rat, ReduceOptions, ReductionResult, Status, Window,
};

/// Writes to stdout; a closed pipe (as with `| head`) is not an error.
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        let _ = write!(std::io::stdout().lock(), $($t)*);
    }};
}

#[derive(Parser)]
#[command(
    name = "recur",
    version,
    about = "Exact two-term recurrence reduction of algebraic integrals"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CatalogArg {
    /// Use a catalog file written by `export` instead of the builtin one.
    #[arg(long, value_name = "FILE")]
    catalog: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce an integrand until every exponent lies in the window.
    Reduce {
        expr: String,
        #[arg(long, default_value = "x")]
        var: String,
        #[arg(long, default_value_t = 512)]
        max_steps: usize,
        /// Target exponent window `LO,HI`; distances are measured to the closed interval.
        #[arg(long, default_value = "-1,0", allow_hyphen_values = true, value_parser = parse_window)]
        window: Window,
        #[arg(long)]
        json: bool,
        /// Print the applied steps and rewrites.
        #[arg(long)]
        trace: bool,
        /// Exit with status 1 when the reduction is obstructed.
        #[arg(long)]
        strict: bool,
        #[command(flatten)]
        catalog: CatalogArg,
    },
    /// Print the form, degeneracy case and guard values of an integrand.
    Classify {
        expr: String,
        #[arg(long, default_value = "x")]
        var: String,
    },
    /// Check a saved JSON result against an integrand.
    Verify {
        expr: String,
        #[arg(long, value_name = "RESULT_JSON")]
        against: PathBuf,
        #[arg(long, default_value = "x")]
        var: String,
    },
    /// Check catalog rules on random instances of their cases.
    Selftest {
        /// Comma-separated rule ids, or `all`.
        #[arg(long, default_value = "all")]
        rules: String,
        #[arg(long, default_value_t = 25)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Run on one thread.
        #[arg(long)]
        sequential: bool,
        #[command(flatten)]
        catalog: CatalogArg,
    },
    /// List catalog rules.
    Rules {
        #[arg(long, value_parser = parse_form)]
        form: Option<FormTag>,
        #[arg(long)]
        case: Option<String>,
        #[command(flatten)]
        catalog: CatalogArg,
    },
    /// Write the catalog as TOML to stdout.
    Export {
        #[command(flatten)]
        catalog: CatalogArg,
    },
}

fn parse_window(s: &str) -> Result<Window, String> {
    let (lo, hi) = s.split_once(',').ok_or("expected LO,HI")?;
    let rat = |t: &str| t.trim().parse::<Rat>().map_err(|_| format!("not a rational: {t:?}"));
    let (lo, hi) = (rat(lo)?, rat(hi)?);
    if lo > hi {
        return Err("LO exceeds HI".into());
    }
    Ok(Window::new(lo, hi))
}

fn parse_form(s: &str) -> Result<FormTag, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// A failure reported as `error:<code>:<detail>`.
struct Failure {
    code: &'static str,
    detail: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: e.code(),
            detail: e.to_string(),
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure {
        code: "IoError",
        detail: format!("{}: {e}", path.display()),
    }
}

enum Loaded {
    Builtin,
    Owned(Catalog),
}

impl Loaded {
    fn get(&self) -> &Catalog {
        match self {
            Loaded::Builtin => Catalog::builtin(),
            Loaded::Owned(c) => c,
        }
    }
}

fn load(arg: &CatalogArg) -> Result<Loaded, Failure> {
    match &arg.catalog {
        None => Ok(Loaded::Builtin),
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
            Ok(Loaded::Owned(Catalog::from_toml(&text)?))
        }
    }
}

fn alg_text(a: &AlgTerm, var: &str) -> String {
    let i = Integrand::new(a.multiplier.scale(&a.weight), a.transc.clone(), a.factors.clone());
    print_expr_var(&i, var)
}

fn result_text(r: &ReductionResult, var: &str, trace: bool) -> String {
    let mut out = String::new();
    let status = match &r.status {
        Status::Terminal => "Terminal".to_string(),
        Status::Obstructed(why) => format!("Obstructed: {why}"),
    };
    let _ = writeln!(out, "input: {}", print_expr_var(&r.input, var));
    let _ = writeln!(out, "status: {status}");
    let _ = writeln!(out, "algebraic:");
    for a in &r.algebraic {
        let _ = writeln!(out, "  + {}", alg_text(a, var));
    }
    let _ = writeln!(out, "residuals:");
    for (c, i) in &r.residuals {
        let _ = writeln!(out, "  + {c} * INT({}, {var})", print_expr_var(i, var));
    }
    if trace {
        let _ = writeln!(out, "trace:");
        for (k, s) in r.trace.iter().enumerate() {
            let target = s.next.as_ref().map_or("none".to_string(), |n| print_expr_var(n, var));
            let _ = writeln!(
                out,
                "  {}. rule {} solve for {} scale {}: {} -> {}",
                k + 1,
                s.rule,
                s.solve_for.number(),
                s.scale,
                print_expr_var(&s.current, var),
                target
            );
        }
        for w in &r.rewrites {
            let _ = writeln!(
                out,
                "  rewrite {}: {} -> {} parts",
                w.kind,
                print_expr_var(&w.current, var),
                w.parts.len()
            );
        }
    }
    out
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Reduce {
            expr,
            var,
            max_steps,
            window,
            json,
            trace,
            strict,
            catalog,
        } => {
            let cat = load(&catalog)?;
            let i = parse_expr(&expr, &var)?;
            let r = reduce_with(cat.get(), &i, &ReduceOptions { window, max_steps })?;
            if json {
                out!("{}\n", serialize_result_var(&r, &var));
            } else {
                out!("{}", result_text(&r, &var, trace));
            }
            Ok(if strict && !r.status.is_terminal() {
                ExitCode::FAILURE
            } else {
                ExitCode::SUCCESS
            })
        }
        Command::Classify { expr, var } => {
            let i = parse_expr(&expr, &var)?;
            let tag = classify(&i)?;
            let p = degeneracy_profile(&i, tag)?;
            let guards: Vec<String> = p.guards.iter().map(|(k, v)| format!("{k}={v}")).collect();
            out!("{tag}, case {}, {}\n", p.case, guards.join(" "));
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { expr, against, var } => {
            let i = parse_expr(&expr, &var)?;
            let text = std::fs::read_to_string(&against).map_err(|e| io_failure(&against, e))?;
            let r = deserialize_result(&text, &var)?;
            if r.input != i {
                return Err(Failure {
                    code: "InputMismatch",
                    detail: format!("document input is {}", print_expr_var(&r.input, &var)),
                });
            }
            let report = verify_result(&i, &r);
            if report.ok {
                out!("ok\n");
                Ok(ExitCode::SUCCESS)
            } else {
                Err(Failure {
                    code: "VerifyFailed",
                    detail: format!("residual numerator {}", report.residual.numerator()),
                })
            }
        }
        Command::Selftest {
            rules,
            samples,
            seed,
            sequential,
            catalog,
        } => {
            let cat = load(&catalog)?;
            let ids: Option<Vec<String>> =
                (rules != "all").then(|| rules.split(',').map(|s| s.trim().to_string()).collect());
            let exec = if sequential {
                Execution::Sequential
            } else {
                Execution::Parallel
            };
            let reports = selftest_rules(cat.get(), ids.as_deref(), samples, seed, exec)?;
            let good = reports.iter().filter(|r| r.ok()).count();
            for r in reports.iter().filter(|r| !r.ok()) {
                out!(
                    "FAIL {} (case {}): {}\n",
                    r.id,
                    r.case,
                    r.failure.as_deref().unwrap_or("sample mismatch")
                );
            }
            out!("{good}/{} ok\n", reports.len());
            Ok(if good == reports.len() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Rules { form, case, catalog } => {
            let cat = load(&catalog)?;
            for r in cat.get().rules() {
                if form.is_some_and(|f| f != r.form_tag()) || case.as_deref().is_some_and(|c| c != r.case()) {
                    continue;
                }
                let shift: Vec<String> = r.shift().iter().map(i32::to_string).collect();
                out!(
                    "{:<7} {:<5} case {:<6} shift [{}]{}\n",
                    r.id(),
                    r.form_tag().to_string(),
                    r.case(),
                    shift.join(","),
                    if r.reversible() { " reversible" } else { "" }
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Export { catalog } => {
            out!("{}", load(&catalog)?.get().to_toml());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error:{}:{}", f.code, f.detail.replace('\n', " "));
            ExitCode::FAILURE
        }
    }
}
