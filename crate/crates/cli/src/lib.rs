//! Command-line front end for `svlie`.
//!
//! Every subcommand produces a [`Report`]. In JSON mode it is printed as one
//! object with the keys `command`, `epsilon`, `window`, `verdict` and
//! `details`, in that order. Exit status: 0 when the check holds (or the
//! product is trivial), 1 for a mathematical negative result, 2 for usage and
//! input errors.

pub mod sample;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_traits::Zero;
use serde_json::{json, Map, Value};
use thiserror::Error;

use svlie::algebra::{bracket, Epsilon, Grade};
use svlie::biderivations::{
    biderivation_defects, classify_biderivations, is_skewsymmetric, is_symmetric, match_form, BiderivationError,
    BiderivationForm, OmegaSet,
};
use svlie::derivations::{
    classify_derivations, decompose_derivation, derivation_defect, DerivationError, MIN_SOLVER_RADIUS,
};
use svlie::formal::solve_all;
use svlie::postlie::{
    brute_force_solve, defect_at, postlie_axiom_defects, triviality_witness, verify_triviality_theorem,
    BruteForceVerdict, PostLieCandidate, PostLieError,
};
use svlie::text::{parse_element, parse_omega, parse_operator, parse_rational, parse_spike, parse_tensor};
use svlie::window::lie_axiom_report;
use svlie::{AlgebraConfig, DefectReport, Rational, Window};

pub const EXIT_OK: u8 = 0;
pub const EXIT_NEGATIVE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "svlie",
    version,
    about = "Exact computations in the Schrödinger-Virasoro algebras SV(ε)"
)]
pub struct Cli {
    /// ε: 0 or 1/2.
    #[arg(long, global = true, default_value = "0", value_parser = parse_epsilon)]
    pub epsilon: Epsilon,
    /// Window radius N: generators with |index| <= N.
    #[arg(short = 'N', long = "window", global = true, default_value_t = 6)]
    pub window: u32,
    /// Print a single JSON object.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for randomized sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate [X, Y].
    Bracket { x: String, y: String },
    /// Antisymmetry and Jacobi on every window pair and triple.
    Jacobi,
    /// Check the derivation identity for an operator file.
    CheckDerivation { file: PathBuf },
    /// Solve for all derivations on the window and compare with inner + D1, D2, D3.
    SolveDerivations,
    /// Write a derivation as ad x + a D1 + b D2 + c D3.
    DecomposeDerivation { file: PathBuf },
    /// Check both biderivation identities for a tensor file.
    CheckBiderivation { file: PathBuf },
    /// Solve for all biderivations on the window and compare with the classified forms.
    SolveBiderivations,
    /// Identify a tensor file as a classified form λ[x, y] + χ_Ω.
    MatchForm { file: PathBuf },
    /// Solve the four coefficient systems.
    Props,
    /// Post-Lie check of the form λ[x, y] + χ_Ω.
    Postlie {
        #[arg(long, default_value = "0", allow_hyphen_values = true, value_parser = parse_rational_arg)]
        lambda: Rational,
        /// Spike μ_k = v, repeatable.
        #[arg(long = "mu", value_name = "K=V", allow_hyphen_values = true, value_parser = parse_spike)]
        mu: Vec<(i64, Rational)>,
        /// Read Ω from a file of `mu[k] = q` lines.
        #[arg(long, value_name = "FILE")]
        omega_file: Option<PathBuf>,
        /// Run the full sweep of forms instead of a single form.
        #[arg(long, conflicts_with = "solve")]
        sweep: bool,
        /// Also check every axiom on the whole window.
        #[arg(long)]
        brute_force: bool,
        /// Solve the axioms for an unknown product on the window.
        #[arg(long)]
        solve: bool,
    },
    /// Check seeded random classified forms for biderivation defects.
    RandomForms {
        #[arg(long, default_value_t = 50)]
        count: usize,
    },
}

fn parse_epsilon(s: &str) -> Result<Epsilon, String> {
    let q = parse_rational(s).map_err(|e| e.to_string())?;
    let (n, d) = (q.numer().try_into(), q.denom().try_into());
    match (n, d) {
        (Ok(n), Ok(d)) => Epsilon::from_grade(Grade::new(n, d)).map_err(|e| e.to_string()),
        _ => Err(format!("epsilon must be 0 or 1/2, got {s}")),
    }
}

fn parse_rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// Input or usage problems: always exit status 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {message}")]
    File { path: String, message: String },
}

impl From<DerivationError> for CliError {
    fn from(e: DerivationError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<BiderivationError> for CliError {
    fn from(e: BiderivationError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<PostLieError> for CliError {
    fn from(e: PostLieError) -> Self {
        CliError::Usage(e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: &'static str,
    pub verdict: String,
    /// A mathematical negative result (exit 1).
    pub negative: bool,
    pub details: Value,
    /// Human-readable output.
    pub text: String,
}

impl Report {
    fn new(command: &'static str, verdict: &str, negative: bool, details: Value, text: String) -> Self {
        Report {
            command,
            verdict: verdict.to_string(),
            negative,
            details,
            text,
        }
    }

    pub fn exit_code(&self) -> u8 {
        if self.negative {
            EXIT_NEGATIVE
        } else {
            EXIT_OK
        }
    }
}

/// The JSON object for a report.
pub fn envelope(command: &str, cfg: &AlgebraConfig, window: u32, verdict: &str, details: Value) -> Value {
    let mut m = Map::new();
    m.insert("command".into(), json!(command));
    m.insert("epsilon".into(), json!(cfg.epsilon.to_string()));
    m.insert("window".into(), json!(window));
    m.insert("verdict".into(), json!(verdict));
    m.insert("details".into(), details);
    Value::Object(m)
}

pub fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Bracket { .. } => "bracket",
        Command::Jacobi => "jacobi",
        Command::CheckDerivation { .. } => "check-derivation",
        Command::SolveDerivations => "solve-derivations",
        Command::DecomposeDerivation { .. } => "decompose-derivation",
        Command::CheckBiderivation { .. } => "check-biderivation",
        Command::SolveBiderivations => "solve-biderivations",
        Command::MatchForm { .. } => "match-form",
        Command::Props => "props",
        Command::Postlie { .. } => "postlie",
        Command::RandomForms { .. } => "random-forms",
    }
}

/// Output and exit status of one invocation.
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> Outcome {
    let cfg = AlgebraConfig::new(cli.epsilon);
    let name = command_name(&cli.command);
    match execute(cli) {
        Ok(r) => {
            let stdout = if cli.json {
                let v = envelope(r.command, &cfg, cli.window, &r.verdict, r.details.clone());
                format!("{}\n", serde_json::to_string_pretty(&v).expect("reports serialize"))
            } else {
                r.text.clone()
            };
            Outcome {
                code: r.exit_code(),
                stdout,
                stderr: String::new(),
            }
        }
        Err(e) => {
            let stdout = if cli.json {
                let v = envelope(name, &cfg, cli.window, "error", json!({ "message": e.to_string() }));
                format!("{}\n", serde_json::to_string_pretty(&v).expect("reports serialize"))
            } else {
                String::new()
            };
            Outcome {
                code: EXIT_USAGE,
                stdout,
                stderr: format!("error: {e}\n"),
            }
        }
    }
}

fn window_of(cli: &Cli, min: u32) -> Result<Window, CliError> {
    if cli.window < min.max(1) {
        return Err(CliError::Usage(format!(
            "{} needs a window radius of at least {}, got {}",
            command_name(&cli.command),
            min.max(1),
            cli.window
        )));
    }
    Ok(Window::new(cli.window))
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| file_error(path, e))
}

fn file_error(path: &Path, e: impl ToString) -> CliError {
    CliError::File {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

fn defects_json(r: &DefectReport) -> Value {
    json!({
        "checked": r.checked,
        "violations": r.total,
        "reported": r.violations,
    })
}

fn defects_text(r: &DefectReport) -> String {
    let mut s = String::new();
    for v in &r.violations {
        let inputs: Vec<String> = v.inputs.iter().map(|g| g.to_string()).collect();
        s.push_str(&format!("  {} at ({}): {}\n", v.identity, inputs.join(", "), v.defect));
    }
    if r.total > r.violations.len() {
        s.push_str(&format!("  ... {} more\n", r.total - r.violations.len()));
    }
    s
}

fn omega_json(o: &OmegaSet) -> Value {
    let mut m = Map::new();
    for (k, q) in o.iter() {
        m.insert(k.to_string(), json!(q.to_string()));
    }
    Value::Object(m)
}

fn form_json(f: &BiderivationForm) -> Value {
    json!({
        "lambda": f.lambda.to_string(),
        "omega": omega_json(&f.omega),
    })
}

/// Dispatches one subcommand.
pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    let cfg = AlgebraConfig::new(cli.epsilon);
    let name = command_name(&cli.command);
    match &cli.command {
        Command::Bracket { x, y } => {
            let parse = |s: &str| parse_element(s, &cfg).map_err(|e| CliError::Usage(format!("`{s}`: {e}")));
            let (a, b) = (parse(x)?, parse(y)?);
            let v = bracket(&a, &b, &cfg).map_err(|e| CliError::Usage(e.to_string()))?;
            let details = json!({ "x": a, "y": b, "result": v });
            Ok(Report::new(name, "evaluated", false, details, format!("{v}\n")))
        }
        Command::Jacobi => {
            let w = window_of(cli, 1)?;
            let n = w.generators(&cfg).len();
            let r = lie_axiom_report(w, &cfg);
            let holds = r.is_empty();
            let (pairs, triples) = (n * (n + 1) / 2, n * n.saturating_sub(1) * n.saturating_sub(2) / 6);
            let details = json!({
                "generators": n,
                "pairs": pairs,
                "triples": triples,
                "defects": defects_json(&r),
            });
            let verdict = if holds { "holds" } else { "fails" };
            let text = format!(
                "{verdict}: antisymmetry on {pairs} pairs, Jacobi on {triples} triples\n{}",
                defects_text(&r)
            );
            Ok(Report::new(name, verdict, !holds, details, text))
        }
        Command::CheckDerivation { file } => {
            let w = window_of(cli, 1)?;
            let label = file.display().to_string();
            let op = parse_operator(&read(file)?, &label, w, &cfg).map_err(|e| file_error(file, e))?;
            let r = derivation_defect(&op, w, &cfg)?;
            let ok = r.is_empty();
            let verdict = if ok { "derivation" } else { "defects" };
            let text = format!(
                "{verdict}: {} checks, {} violations\n{}",
                r.checked,
                r.total,
                defects_text(&r)
            );
            Ok(Report::new(name, verdict, !ok, defects_json(&r), text))
        }
        Command::SolveDerivations => {
            let w = window_of(cli, MIN_SOLVER_RADIUS)?;
            let (_, cmp) = classify_derivations(w, &cfg)?;
            let ok = cmp.matches();
            let verdict = if ok { "matches" } else { "mismatch" };
            let text = format!(
                "{verdict}: kernel dimension {}, interior {} (predicted {})\n",
                cmp.kernel_dim, cmp.interior_kernel_dim, cmp.interior_predicted_dim
            );
            let details = serde_json::to_value(&cmp).expect("comparison serializes");
            Ok(Report::new(name, verdict, !ok, details, text))
        }
        Command::DecomposeDerivation { file } => {
            let w = window_of(cli, 1)?;
            let label = file.display().to_string();
            let op = parse_operator(&read(file)?, &label, w, &cfg).map_err(|e| file_error(file, e))?;
            match decompose_derivation(&op, w, &cfg) {
                Ok(d) => {
                    let text = format!(
                        "decomposed: ad({}) + {} D1 + {} D2 + {} D3\n",
                        d.inner_part, d.a, d.b, d.c
                    );
                    let details = serde_json::to_value(&d).expect("decomposition serializes");
                    Ok(Report::new(name, "decomposed", false, details, text))
                }
                Err(DerivationError::NotADerivation { violations }) => Ok(Report::new(
                    name,
                    "not-a-derivation",
                    true,
                    json!({ "violations": violations }),
                    format!("not-a-derivation: {violations} violations\n"),
                )),
                Err(DerivationError::Inconsistent) => Ok(Report::new(
                    name,
                    "no-decomposition",
                    true,
                    json!({}),
                    "no-decomposition\n".into(),
                )),
                Err(e) => Err(e.into()),
            }
        }
        Command::CheckBiderivation { file } => {
            let w = window_of(cli, 1)?;
            let f = parse_tensor(&read(file)?, w, &cfg).map_err(|e| file_error(file, e))?;
            let r = biderivation_defects(&f, w, &cfg)?;
            let ok = r.is_empty();
            let verdict = if ok { "biderivation" } else { "defects" };
            let (sym, skew) = (is_symmetric(&f), is_skewsymmetric(&f));
            let mut details = defects_json(&r);
            details["symmetric"] = json!(sym);
            details["skewsymmetric"] = json!(skew);
            let text = format!(
                "{verdict}: {} checks, {} violations, symmetric={sym}, skewsymmetric={skew}\n{}",
                r.checked,
                r.total,
                defects_text(&r)
            );
            Ok(Report::new(name, verdict, !ok, details, text))
        }
        Command::SolveBiderivations => {
            let w = window_of(cli, MIN_SOLVER_RADIUS)?;
            let (_, cmp) = classify_biderivations(w, &cfg)?;
            let ok = cmp.matches();
            let verdict = if ok { "matches" } else { "mismatch" };
            let text = format!(
                "{verdict}: kernel dimension {}, interior {} (predicted {})\n",
                cmp.kernel_dim, cmp.interior_kernel_dim, cmp.interior_predicted_dim
            );
            let details = serde_json::to_value(&cmp).expect("comparison serializes");
            Ok(Report::new(name, verdict, !ok, details, text))
        }
        Command::MatchForm { file } => {
            let w = window_of(cli, 2)?;
            let f = parse_tensor(&read(file)?, w, &cfg).map_err(|e| file_error(file, e))?;
            match match_form(&f, w, &cfg) {
                Some(form) => {
                    let mut details = form_json(&form);
                    details["inner"] = json!(form.is_inner());
                    details["symmetric"] = json!(is_symmetric(&f));
                    details["skewsymmetric"] = json!(is_skewsymmetric(&f));
                    let text = format!(
                        "matched: lambda={} omega={{{}}}\n",
                        form.lambda,
                        form.omega
                            .iter()
                            .map(|(k, q)| format!("{k}: {q}"))
                            .collect::<Vec<_>>()
                            .join(", ")
                    );
                    Ok(Report::new(name, "matched", false, details, text))
                }
                None => Ok(Report::new(name, "no-match", true, json!({}), "no-match\n".into())),
            }
        }
        Command::Props => {
            let w = window_of(cli, MIN_SOLVER_RADIUS)?;
            let verdicts = solve_all(w).map_err(|e| CliError::Usage(e.to_string()))?;
            let ok = verdicts.iter().all(|v| v.holds);
            let mut text = String::new();
            for v in &verdicts {
                text.push_str(&format!(
                    "{}: {} (interior dimension {})\n",
                    v.system,
                    if v.holds { "holds" } else { "fails" },
                    v.comparison.interior_kernel_dim
                ));
                if !v.free_directions.is_empty() {
                    text.push_str(&format!("  free: {}\n", v.free_directions.join(", ")));
                }
            }
            let verdict = if ok { "holds" } else { "fails" };
            let details = json!({ "systems": verdicts });
            Ok(Report::new(name, verdict, !ok, details, text))
        }
        Command::Postlie {
            lambda,
            mu,
            omega_file,
            sweep,
            brute_force,
            solve,
        } => {
            if *sweep {
                let w = window_of(cli, svlie::postlie::MIN_SWEEP_RADIUS)?;
                let r = verify_triviality_theorem(w, &cfg, *brute_force)?;
                let failed = r.cases.iter().filter(|c| !c.passed()).count();
                let verdict = if r.passed { "holds" } else { "fails" };
                let text = format!("{verdict}: {} forms, {failed} failed\n", r.cases.len());
                let details = serde_json::to_value(&r).expect("sweep serializes");
                return Ok(Report::new(name, verdict, !r.passed, details, text));
            }
            if *solve {
                let w = window_of(cli, MIN_SOLVER_RADIUS)?;
                let r = brute_force_solve(w, &cfg)?;
                let trivial = r.verdict == BruteForceVerdict::InteriorTrivial;
                let verdict = if trivial {
                    "interior-trivial"
                } else {
                    "truncation-artifact"
                };
                let text = format!(
                    "{verdict}: {} unknowns, linear solutions {}, rounds {:?}, final {}, interior {}\n",
                    r.unknowns, r.linear_dim, r.rounds, r.final_dim, r.interior_dim
                );
                let details = serde_json::to_value(&r).expect("solve serializes");
                return Ok(Report::new(name, verdict, !trivial, details, text));
            }
            let w = window_of(cli, 1)?;
            let mut omega = match omega_file {
                Some(p) => parse_omega(&read(p)?).map_err(|e| file_error(p, e))?,
                None => OmegaSet::new(),
            };
            for (k, q) in mu {
                let q = &omega.get(*k) + q;
                omega.set(*k, q);
            }
            let form = BiderivationForm::new(lambda.clone(), omega);
            postlie_form(name, &form, w, &cfg, *brute_force)
        }
        Command::RandomForms { count } => {
            let w = window_of(cli, 1)?;
            let forms = sample::random_forms(cli.seed, *count, w);
            let mut failures = Vec::new();
            for f in &forms {
                let r = biderivation_defects(&svlie::biderivations::realize(f, w, &cfg), w, &cfg)?;
                if !r.is_empty() {
                    failures.push(json!({ "form": form_json(f), "violations": r.total }));
                }
            }
            let ok = failures.is_empty();
            let verdict = if ok { "holds" } else { "fails" };
            let text = format!("{verdict}: {} forms, {} with defects\n", forms.len(), failures.len());
            let details = json!({
                "seed": cli.seed,
                "forms": forms.len(),
                "failures": failures,
            });
            Ok(Report::new(name, verdict, !ok, details, text))
        }
    }
}

fn postlie_form(
    name: &'static str,
    form: &BiderivationForm,
    w: Window,
    cfg: &AlgebraConfig,
    brute_force: bool,
) -> Result<Report, CliError> {
    let cand = PostLieCandidate::Form(form.clone());
    let mut details = json!({ "form": form_json(form) });
    match triviality_witness(form, cfg) {
        Some(wit) => {
            let checked = defect_at(&cand, w, cfg, wit.axiom, &wit.inputs)?;
            let inputs: Vec<String> = wit.inputs.iter().map(|g| g.to_string()).collect();
            details["trivial"] = json!(false);
            details["witness"] = json!({
                "axiom": wit.axiom,
                "inputs": inputs,
                "residual": wit.residual,
                "cross_checked": checked.as_ref() == Some(&wit.residual),
            });
            if brute_force {
                let r = postlie_axiom_defects(&cand, w, cfg)?;
                details["defects"] = defects_json(&r);
            }
            let text = format!(
                "witness: {} at ({}), residual {}\n",
                wit.axiom,
                inputs.join(", "),
                wit.residual
            );
            Ok(Report::new(name, "witness", true, details, text))
        }
        None => {
            let r = postlie_axiom_defects(&cand, w, cfg)?;
            if !r.is_empty() {
                details["trivial"] = json!(false);
                details["defects"] = defects_json(&r);
                let text = format!("defects: {} violations\n{}", r.total, defects_text(&r));
                return Ok(Report::new(name, "defects", true, details, text));
            }
            debug_assert!(form.lambda.is_zero());
            details["trivial"] = json!(true);
            Ok(Report::new(name, "trivial", false, details, "trivial\n".into()))
        }
    }
}
