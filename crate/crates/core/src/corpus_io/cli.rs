//! `toric-qh` subcommands. Exit status: 0 success, 1 domain error,
//! 2 malformed input.

use std::io::Write;
use std::path::Path;

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;

use super::catalog::{catalog, lookup};
use super::{parse_polytope, parse_rational, ParseError, SideHint};
use crate::batyrev::{Format, Presentation};
use crate::critical_solver::{solve, SolveReport, SolverConfig};
use crate::fan::Fan;
use crate::landau_ginzburg::{perturbed_coefficients, Superpotential};
use crate::lattice_geometry::Polytope;
use crate::newton_polygon::quasimorphism_report;
use crate::spectra::critical_values;
use crate::support_function::SupportFunction;

#[derive(Debug)]
pub enum CliError {
    Parse(String),
    Domain(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Domain(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Parse(m) | CliError::Domain(m) => m,
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Parse(e.to_string())
    }
}

fn domain(e: impl std::fmt::Display) -> CliError {
    CliError::Domain(e.to_string())
}

#[derive(Parser)]
#[command(name = "toric-qh", version, about = "Quantum cohomology of toric Fano manifolds via their superpotentials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct TargetArgs {
    /// Catalog name (see `catalog`) or polytope file.
    target: String,
    /// File rows are vertices of the moment polytope instead of its dual.
    #[arg(long)]
    primal: bool,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    target: TargetArgs,
    /// Positive term coefficients, one per ray, comma separated.
    #[arg(long, conflicts_with = "perturb")]
    coeffs: Option<String>,
    /// Draw coefficients uniformly from [0.9, 1.1] with this seed.
    #[arg(long)]
    perturb: Option<u64>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Number of Newton starts (default 200 per expected point).
    #[arg(long)]
    starts: Option<usize>,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Reflexivity, Delzant and smoothness report.
    Check(TargetArgs),
    /// Rays, cone counts and primitive collections.
    Fan(TargetArgs),
    /// Batyrev presentation of the quantum cohomology.
    Presentation {
        #[command(flatten)]
        target: TargetArgs,
        /// Support function values, one per ray, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        support: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// The superpotential W.
    Potential {
        #[command(flatten)]
        target: TargetArgs,
        #[arg(long, allow_hyphen_values = true)]
        support: Option<String>,
        /// Show the powers of s.
        #[arg(long)]
        symbolic: bool,
    },
    /// Critical points of W and the semisimplicity verdict.
    Solve(SolveArgs),
    /// Critical values of W.
    Spectrum(SolveArgs),
    /// Root valuations for the one-point blow-up of CP^2.
    Valuations {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
    },
    /// List the built-in examples.
    Catalog,
}

/// A fan with its support function and, where defined, both polytopes.
pub struct Target {
    pub name: String,
    pub fan: Fan,
    pub support: SupportFunction,
    /// `Delta` in `M`.
    pub moment: Option<Polytope>,
    /// `Delta*` in `N`.
    pub dual: Option<Polytope>,
}

pub fn resolve_target(spec: &str, primal: bool) -> Result<Target, CliError> {
    if Path::new(spec).is_file() {
        let text = std::fs::read_to_string(spec).map_err(|e| domain(format!("{spec}: {e}")))?;
        let mut file = parse_polytope(&text).map_err(|e| CliError::Parse(format!("{spec}: {e}")))?;
        if primal {
            file.side_hint = SideHint::Primal;
        }
        let poly = file.polytope().map_err(domain)?;
        return match file.side_hint {
            SideHint::Dual => {
                let fan = Fan::from_reflexive(&poly).map_err(domain)?;
                let support = SupportFunction::monotone(&fan).map_err(domain)?;
                Ok(Target {
                    name: spec.to_string(),
                    moment: poly.dual().ok(),
                    dual: Some(poly),
                    fan,
                    support,
                })
            }
            SideHint::Primal => {
                let (fan, support) = SupportFunction::from_polytope(&poly).map_err(domain)?;
                Ok(Target {
                    name: spec.to_string(),
                    dual: poly.dual().ok(),
                    moment: Some(poly),
                    fan,
                    support,
                })
            }
        };
    }
    let entry = lookup(spec).ok_or_else(|| domain(format!("`{spec}` is neither a file nor a catalog name")))?;
    let (fan, support) = entry.build().map_err(domain)?;
    Ok(Target {
        moment: support.moment_polytope().ok(),
        dual: Some(entry.dual_polytope()),
        name: entry.name,
        fan,
        support,
    })
}

fn parse_list<T>(s: &str, what: &str, f: impl Fn(&str) -> Option<T>) -> Result<Vec<T>, CliError> {
    s.split(',')
        .map(|x| f(x.trim()).ok_or_else(|| CliError::Parse(format!("bad {what} `{}`", x.trim()))))
        .collect()
}

fn with_support(t: &Target, support: Option<&str>) -> Result<SupportFunction, CliError> {
    match support {
        None => Ok(t.support.clone()),
        Some(s) => {
            let values = parse_list(s, "support value", parse_rational)?;
            SupportFunction::new(t.fan.clone(), values).map_err(domain)
        }
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn describe(out: &mut String, label: &str, p: &Polytope) {
    out.push_str(&format!(
        "{label}: {} vertices, {} facets, {} lattice points, reflexive: {}, Delzant: {}\n",
        p.vertices().len(),
        p.facets().len(),
        p.lattice_points().len(),
        yes(p.is_reflexive().holds),
        yes(p.is_delzant().holds),
    ));
}

fn check(t: &Target) -> String {
    let mut out = format!("target: {}\n", t.name);
    if let Some(p) = &t.dual {
        describe(&mut out, "dual polytope (N)", p);
        out.push_str(&format!("normalized volume of dual polytope: {}\n", p.normalized_volume()));
    }
    if let Some(p) = &t.moment {
        describe(&mut out, "moment polytope (M)", p);
    }
    let f = &t.fan;
    out.push_str(&format!(
        "fan: {} rays, {} maximal cones, smooth: {}, complete: {}\n",
        f.rays().len(),
        f.top_cone_count(),
        yes(f.is_smooth()),
        yes(f.is_complete()),
    ));
    out.push_str(&format!("support function strictly convex: {}\n", yes(t.support.is_strictly_convex())));
    out
}

fn fan_report(f: &Fan) -> String {
    let mut out = String::from("rays:\n");
    for (i, r) in f.rays().iter().enumerate() {
        out.push_str(&format!("  z{}: {r}\n", i + 1));
    }
    let counts: Vec<String> = (0..=f.dim()).map(|k| format!("{}", f.cones(k).len())).collect();
    out.push_str(&format!("cones by dimension: {}\n", counts.join(" ")));
    out.push_str("primitive collections:\n");
    for c in f.primitive_collections() {
        let names: Vec<String> = c.iter().map(|i| format!("z{}", i + 1)).collect();
        out.push_str(&format!("  {{{}}}\n", names.join(", ")));
    }
    out
}

fn run_solver(a: &SolveArgs) -> Result<(Superpotential, SolveReport), CliError> {
    let t = resolve_target(&a.target.target, a.target.primal)?;
    let n = t.fan.rays().len();
    let coeffs = match (&a.coeffs, a.perturb) {
        (Some(c), _) => Some(parse_list(c, "coefficient", |x| x.parse::<f64>().ok())?),
        (None, Some(seed)) => Some(perturbed_coefficients(n, seed, 0.9, 1.1)),
        (None, None) => None,
    };
    let w = Superpotential::from_fan(&t.fan, &t.support, coeffs.as_deref()).map_err(domain)?;
    let cfg = SolverConfig {
        seed: a.seed,
        starts: a.starts,
        ..SolverConfig::default()
    };
    let report = solve(&w, t.fan.top_cone_count(), &cfg).map_err(domain)?;
    Ok((w, report))
}

fn rational_arg(s: &str, name: &str) -> Result<BigRational, CliError> {
    parse_rational(s).ok_or_else(|| CliError::Parse(format!("bad value `{s}` for --{name}")))
}

fn dispatch(cmd: Command) -> Result<String, CliError> {
    match cmd {
        Command::Check(t) => Ok(check(&resolve_target(&t.target, t.primal)?)),
        Command::Fan(t) => Ok(fan_report(&resolve_target(&t.target, t.primal)?.fan)),
        Command::Presentation { target, support, json } => {
            let t = resolve_target(&target.target, target.primal)?;
            let f = with_support(&t, support.as_deref())?;
            let p = Presentation::new(&t.fan, &f).map_err(domain)?;
            Ok(p.emit(if json { Format::Json } else { Format::Text }))
        }
        Command::Potential { target, support, symbolic } => {
            let t = resolve_target(&target.target, target.primal)?;
            let f = with_support(&t, support.as_deref())?;
            let w = Superpotential::from_fan(&t.fan, &f, None).map_err(domain)?;
            Ok(format!("W = {}\n", w.render(symbolic)))
        }
        Command::Solve(a) => {
            let (_, report) = run_solver(&a)?;
            Ok(if a.json { report.to_json() + "\n" } else { report.to_text() })
        }
        Command::Spectrum(a) => {
            let (w, report) = run_solver(&a)?;
            let s = critical_values(&w, &report);
            Ok(if a.json { s.to_json() + "\n" } else { s.to_text() })
        }
        Command::Valuations { alpha, beta } => {
            let (a, b) = (rational_arg(&alpha, "alpha")?, rational_arg(&beta, "beta")?);
            Ok(quasimorphism_report(&a, &b).map_err(domain)?.to_text())
        }
        Command::Catalog => {
            let mut out = String::new();
            for e in catalog() {
                let cones = e.fan().map(|f| f.top_cone_count()).unwrap_or(0);
                out.push_str(&format!(
                    "{:<10} dim {}  rays {:>2}  cones {:>3}  {}\n",
                    e.name,
                    e.dim(),
                    e.rays.len(),
                    cones,
                    e.description
                ));
            }
            Ok(out)
        }
    }
}

/// Runs the CLI on `argv` (including the program name) and returns the
/// exit status.
pub fn run_cli<S: AsRef<str>>(argv: &[S], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv.iter().map(|s| s.as_ref())) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    match dispatch(cli.command) {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            e.code()
        }
    }
}
