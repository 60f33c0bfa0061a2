use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use pencils::bounds;
use pencils::constructions;
use pencils::incidence;
use pencils::linsys::{self, LinearSystem, Strategy, VerifyMode};
use pencils::smoothness::{self, BruteConfig, Oracle, Status};
use pencils::{Error, FieldCtx, HomForm};

mod repro;

/// Exit codes: 0 pass, 1 fail, 2 usage or input error, 3 inconclusive.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass = 0,
    Fail = 1,
    Usage = 2,
    Inconclusive = 3,
}

impl Verdict {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

pub struct Outcome {
    pub verdict: Verdict,
    pub body: Value,
}

impl Outcome {
    pub fn new(verdict: Verdict, body: Value) -> Self {
        Outcome { verdict, body }
    }
}

#[derive(Parser)]
#[command(name = "pencils", version, about = "Smooth members of linear systems of hypersurfaces over finite fields")]
struct Cli {
    /// Worker threads (does not affect output).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Add wall-clock time to the manifest (output is then no longer reproducible byte for byte).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct FieldArg {
    /// Field order q, or p^r.
    #[arg(long, value_parser = parse_field)]
    field: FieldCtx,
}

fn parse_field(s: &str) -> Result<FieldCtx, String> {
    s.parse::<FieldCtx>().map_err(|e| e.to_string())
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleChoice {
    Auto,
    Quadric,
    Macaulay,
    Brute,
}

#[derive(Subcommand)]
enum Command {
    /// Decide smoothness of one hypersurface.
    SmoothCheck {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        form: String,
        /// Ambient dimension n; defaults to the highest variable index used.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum, default_value = "auto")]
        oracle: OracleChoice,
        /// Extension degree bound for the brute-force search (implies --oracle brute).
        #[arg(long)]
        bound: Option<u32>,
        #[arg(long, default_value_t = smoothness::DEFAULT_WORK_CAP)]
        work_cap: u128,
    },
    /// Check every F_q-member of the system spanned by the forms in a JSON file.
    PencilVerify {
        #[command(flatten)]
        field: FieldArg,
        /// JSON array of form strings.
        #[arg(long)]
        forms: PathBuf,
        #[arg(long)]
        n: Option<usize>,
        /// Check every member instead of stopping at the first singular one.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Search for a linear system all of whose F_q-members are smooth.
    PencilSearch {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        r: usize,
        /// Visit every (r+1)-subset of smooth forms.
        #[arg(long, conflicts_with_all = ["seed", "trials"])]
        exhaustive: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = linsys::DEFAULT_SEARCH_CAP)]
        cap: u128,
    },
    /// Line incidence profile of a plane curve.
    Incidence {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        form: String,
    },
    /// First F_q-line missing every F_q-point of a plane curve.
    AvoidLine {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        form: String,
    },
    /// Build the explicit all-smooth pencil of quadric surfaces.
    Construct {
        #[command(flatten)]
        field: FieldArg,
    },
    /// Threshold on q for degree-d hypersurfaces in P^n.
    Bound {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        q: Option<u64>,
    },
    /// Re-run one of the reference computations.
    Repro {
        #[arg(value_enum)]
        target: repro::Target,
    },
}

fn manifest(cli: &Cli) -> Value {
    let mut params = Map::new();
    let (name, field) = match &cli.command {
        Command::SmoothCheck {
            field,
            form,
            n,
            oracle,
            bound,
            work_cap,
        } => {
            params.insert("form".into(), json!(form));
            params.insert("n".into(), json!(n));
            params.insert("oracle".into(), json!(oracle_name(*oracle, *bound)));
            params.insert("bound".into(), json!(bound));
            params.insert("work_cap".into(), json!(work_cap.to_string()));
            ("smooth-check", Some(field))
        }
        Command::PencilVerify {
            field,
            forms,
            n,
            exhaustive,
        } => {
            params.insert("forms".into(), json!(forms.display().to_string()));
            params.insert("n".into(), json!(n));
            params.insert("exhaustive".into(), json!(exhaustive));
            ("pencil-verify", Some(field))
        }
        Command::PencilSearch {
            field,
            n,
            d,
            r,
            exhaustive,
            seed,
            trials,
            cap,
        } => {
            params.insert("n".into(), json!(n));
            params.insert("d".into(), json!(d));
            params.insert("r".into(), json!(r));
            params.insert("strategy".into(), json!(if *exhaustive { "exhaustive" } else { "random" }));
            if *exhaustive {
                params.insert("cap".into(), json!(cap.to_string()));
            } else {
                params.insert("seed".into(), json!(seed));
                params.insert("trials".into(), json!(trials));
            }
            ("pencil-search", Some(field))
        }
        Command::Incidence { field, form } => {
            params.insert("form".into(), json!(form));
            ("incidence", Some(field))
        }
        Command::AvoidLine { field, form } => {
            params.insert("form".into(), json!(form));
            ("avoid-line", Some(field))
        }
        Command::Construct { field } => ("construct", Some(field)),
        Command::Bound { n, d, q } => {
            params.insert("n".into(), json!(n));
            params.insert("d".into(), json!(d));
            params.insert("q".into(), json!(q));
            ("bound", None)
        }
        Command::Repro { target } => {
            params.insert("target".into(), json!(target.name()));
            ("repro", None)
        }
    };
    json!({
        "command": name,
        "field": field.map(|f| field_name(&f.field)),
        "parameters": params,
        "version": env!("CARGO_PKG_VERSION"),
    })
}

pub fn field_name(ctx: &FieldCtx) -> String {
    if ctx.r() == 1 {
        ctx.p().to_string()
    } else {
        format!("{}^{}", ctx.p(), ctx.r())
    }
}

fn oracle_name(o: OracleChoice, bound: Option<u32>) -> &'static str {
    match (o, bound) {
        (_, Some(_)) | (OracleChoice::Brute, _) => "brute",
        (OracleChoice::Auto, _) => "auto",
        (OracleChoice::Quadric, _) => "quadric",
        (OracleChoice::Macaulay, _) => "macaulay",
    }
}

fn parse_form(ctx: &FieldCtx, text: &str, n: Option<usize>) -> Result<HomForm, Error> {
    match n {
        Some(n) => HomForm::parse(ctx, n + 1, text),
        None => HomForm::parse_auto(ctx, 2, text),
    }
}

fn status_verdict(s: Status) -> Verdict {
    match s {
        Status::Smooth => Verdict::Pass,
        Status::Singular => Verdict::Fail,
        Status::Inconclusive => Verdict::Inconclusive,
    }
}

fn system_json(sys: &LinearSystem) -> Value {
    json!(sys.generators().iter().map(|g| g.to_string()).collect::<Vec<_>>())
}

fn run(cmd: &Command) -> Result<Outcome, Error> {
    match cmd {
        Command::SmoothCheck {
            field,
            form,
            n,
            oracle,
            bound,
            work_cap,
        } => {
            let f = parse_form(&field.field, form, *n)?;
            let oracle = match (oracle, bound) {
                (_, Some(_)) | (OracleChoice::Brute, _) => Oracle::Brute(BruteConfig {
                    bound: *bound,
                    work_cap: *work_cap,
                }),
                (OracleChoice::Auto, _) => Oracle::Auto,
                (OracleChoice::Quadric, _) => Oracle::Quadric,
                (OracleChoice::Macaulay, _) => Oracle::Macaulay,
            };
            let v = smoothness::is_smooth(&f, oracle)?;
            Ok(Outcome::new(
                status_verdict(v.status),
                json!({ "form": f.to_string(), "verdict": v }),
            ))
        }
        Command::PencilVerify {
            field,
            forms,
            n,
            exhaustive,
        } => {
            let text = std::fs::read_to_string(forms).map_err(|e| Error::Parse(format!("{}: {e}", forms.display())))?;
            let texts: Vec<String> =
                serde_json::from_str(&text).map_err(|e| Error::Parse(format!("forms file: {e}")))?;
            let ctx = &field.field;
            let nvars = match n {
                Some(n) => n + 1,
                None => texts
                    .iter()
                    .map(|t| HomForm::parse_auto(ctx, 2, t).map(|f| f.nvars()))
                    .collect::<Result<Vec<_>, _>>()?
                    .into_iter()
                    .max()
                    .unwrap_or(2),
            };
            let gens = texts
                .iter()
                .map(|t| HomForm::parse(ctx, nvars, t))
                .collect::<Result<Vec<_>, _>>()?;
            let sys = LinearSystem::new(gens)?;
            let mode = if *exhaustive {
                VerifyMode::Exhaustive
            } else {
                VerifyMode::ShortCircuit
            };
            let rep = linsys::verify_all_smooth(&sys, Oracle::Auto, mode)?;
            let verdict = match rep.status {
                linsys::ReportStatus::AllSmooth => Verdict::Pass,
                linsys::ReportStatus::HasSingular => Verdict::Fail,
                linsys::ReportStatus::Inconclusive => Verdict::Inconclusive,
            };
            Ok(Outcome::new(
                verdict,
                json!({ "generators": system_json(&sys), "r": sys.r(), "report": rep }),
            ))
        }
        Command::PencilSearch {
            field,
            n,
            d,
            r,
            exhaustive,
            seed,
            trials,
            cap,
        } => {
            let strategy = if *exhaustive {
                Strategy::Exhaustive { cap: *cap }
            } else {
                Strategy::Random {
                    seed: *seed,
                    max_trials: *trials,
                }
            };
            let out = linsys::search_all_smooth(&field.field, *n, *d, *r, strategy)?;
            let systems: Vec<Value> = out.systems.iter().map(system_json).collect();
            let mut body = json!({
                "systems_found": systems.len(),
                "systems": systems,
                "candidates_examined": out.candidates_examined,
            });
            if *exhaustive {
                body["smooth_forms"] = json!(out.smooth_forms);
                body["subsets"] = json!(out.candidates_examined);
                body["independent"] = json!(out.independent_candidates);
                body["valid"] = json!(out.valid_candidates);
            }
            Ok(Outcome::new(Verdict::from_bool(!out.systems.is_empty()), body))
        }
        Command::Incidence { field, form } => {
            let c = HomForm::parse(&field.field, 3, form)?;
            let prof = incidence::profile(&c)?;
            let check = incidence::bound_check(&prof);
            let body = json!({
                "form": c.to_string(),
                "delta": prof.delta,
                "N": prof.n_points,
                "t": prof.t,
                "contained_lines": prof.overflow,
                "identities_ok": prof.check_identities().is_ok(),
                "hasse_weil_ok": check.hasse_weil_ok,
                "hasse_weil": [check.hasse_weil_low, check.hasse_weil_high],
                "t0_bound": check.lower_t0.to_string(),
                "t0_bound_ok": check.t0_bound_ok,
            });
            Ok(Outcome::new(Verdict::Pass, body))
        }
        Command::AvoidLine { field, form } => {
            let c = HomForm::parse(&field.field, 3, form)?;
            let line = incidence::find_avoiding_line(&c)?;
            let body = json!({
                "form": c.to_string(),
                "line": line.as_ref().map(|l| l.to_string()),
                "dual": line.as_ref().map(|l| l.dual()),
            });
            Ok(Outcome::new(Verdict::from_bool(line.is_some()), body))
        }
        Command::Construct { field } => {
            let recipe = constructions::build_pencil(&field.field)?;
            let rep = linsys::verify_all_smooth(&recipe.pencil(), Oracle::Auto, VerifyMode::Exhaustive)?;
            let det_ok = constructions::verify_determinant_factorization(&recipe)?;
            let body = json!({
                "parity": recipe.parity,
                "c": recipe.c,
                "f0": recipe.f0.to_string(),
                "f1": recipe.f1.to_string(),
                "members": rep.total_members,
                "smooth": rep.smooth_count,
                "all_smooth": rep.all_smooth(),
                "det_factorization_ok": det_ok,
            });
            Ok(Outcome::new(Verdict::from_bool(rep.all_smooth() && det_ok), body))
        }
        Command::Bound { n, d, q } => {
            if *n < 1 || *d < 2 {
                return Err(Error::ShapeMismatch("need n >= 1 and d >= 2".into()));
            }
            let rep = bounds::theorem_threshold(*n, *d);
            let mut body = json!({
                "delta": rep.delta,
                "K": rep.k,
                "threshold_display": rep.threshold_display,
                "smallest_passing_q": rep.smallest_passing_prime_power(),
            });
            let mut verdict = Verdict::Pass;
            if let Some(q) = q {
                let passes = rep.q_passes(*q);
                body["q"] = json!(q);
                body["q_passes"] = json!(passes);
                verdict = Verdict::from_bool(passes);
            }
            Ok(Outcome::new(verdict, body))
        }
        Command::Repro { target } => repro::run(*target),
    }
}

fn error_verdict(e: &Error) -> Verdict {
    match e {
        Error::WorkCapExceeded { .. } => Verdict::Inconclusive,
        Error::Internal(_) | Error::IdentityViolation(_) => Verdict::Fail,
        _ => Verdict::Usage,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(k) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(Verdict::Usage as u8);
        }
    }
    let mut man = manifest(&cli);
    let start = Instant::now();
    let outcome = run(&cli.command).unwrap_or_else(|e| {
        Outcome::new(error_verdict(&e), json!({ "error": e.to_string() }))
    });
    if cli.timing {
        man["wall_time_s"] = json!(start.elapsed().as_secs_f64());
    }
    let mut out = match outcome.body {
        Value::Object(m) => m,
        other => {
            let mut m = Map::new();
            m.insert("result".into(), other);
            m
        }
    };
    out.insert("manifest".into(), man);
    out.insert("exit_code".into(), json!(outcome.verdict as u8));
    println!("{}", serde_json::to_string_pretty(&Value::Object(out)).expect("serializable"));
    ExitCode::from(outcome.verdict as u8)
}
