//! `ups`: command-line front end for the `upsilon` crate.
//!
//! Exit status is 0 on success or a passing verdict, 1 on a failing verdict
//! and 2 on unreadable or invalid input.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;

use upsilon::cable::{cable_bounds, check_bounds, BoundPair, CableParams};
use upsilon::cfk::Complex;
use upsilon::laurent::LaurentPoly;
use upsilon::pin::{lattice_from_hfk, pin_t2m3_cable, pin_upsilon, HfkTable, KnotFacts, PinError};
use upsilon::plfun::PlFunc;
use upsilon::rational::Rational;
use upsilon::staircase::{lspace_knot_complex, torus_complex};
use upsilon::summand::{j_family, SummandVerdict};
use upsilon::verify::{run_suite, Suite};

#[derive(Parser)]
#[command(name = "ups", version, about = "Exact Upsilon invariants, cabling bounds and certificates")]
struct Cli {
    /// Output format. CSV samples the resulting functions for plotting.
    #[arg(long, value_enum, default_value_t = Emit::Json, global = true)]
    emit: Emit,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Υ of the torus knot T(p, q); negative q gives the mirror.
    #[command(allow_negative_numbers = true)]
    Torus { p: i64, q: i64 },
    /// Operations on a complex read from JSON.
    #[command(subcommand)]
    Complex(ComplexCommand),
    /// Staircase complex of an L-space knot from its Alexander polynomial.
    Staircase { alexander: PathBuf },
    /// Cabling bounds for Υ of K_{p,q} from Υ of K.
    #[command(allow_negative_numbers = true)]
    CableBounds {
        #[arg(long)]
        ups: PathBuf,
        #[arg(long)]
        p: i64,
        #[arg(long)]
        q: i64,
    },
    /// Checks a candidate Υ for K_{p,q} against the cabling bounds.
    #[command(allow_negative_numbers = true)]
    CheckBounds {
        #[arg(long)]
        candidate: PathBuf,
        #[arg(long)]
        ups: PathBuf,
        #[arg(long)]
        p: i64,
        #[arg(long)]
        q: i64,
    },
    /// Every Υ consistent with ĤFK data, τ, a g4 bound and optional cabling bounds.
    #[command(allow_negative_numbers = true)]
    Pin {
        #[arg(long, conflicts_with = "family_t2m3", requires_all = ["tau", "g4"])]
        hfk: Option<PathBuf>,
        #[arg(long)]
        tau: Option<i64>,
        #[arg(long)]
        g4: Option<i64>,
        #[arg(long)]
        bounds: Option<PathBuf>,
        /// Use the built-in table of the (2, 2n+1) cable of T(2,−3).
        #[arg(long, requires = "n")]
        family_t2m3: bool,
        #[arg(long)]
        n: Option<i64>,
    },
    /// Independence certificate for the iterated (p, 1) cables J_1..J_max-n.
    Summand {
        #[arg(long)]
        p: i64,
        #[arg(long)]
        max_n: i64,
    },
    /// Runs a self-check suite: paper-values, properties, bounds or summand.
    Verify {
        suite: String,
        /// Directory of complex JSON files replacing the built-in staircase
        /// battery in the properties suite.
        #[arg(long)]
        corpus: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ComplexCommand {
    /// Υ of the complex.
    Eval { file: PathBuf },
    /// τ of the complex.
    Tau { file: PathBuf },
}

/// What a command produced.
struct Output {
    json: String,
    /// Named functions for CSV output.
    series: Vec<(String, PlFunc)>,
    pass: bool,
}

impl Output {
    fn new<T: Serialize>(value: &T, series: Vec<(String, PlFunc)>, pass: bool) -> Result<Self, String> {
        let json = serde_json::to_string_pretty(value).map_err(|e| e.to_string())? + "\n";
        Ok(Output { json, series, pass })
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn read_complex(path: &Path) -> Result<Complex, String> {
    let c: Complex = read_json(path)?;
    c.validate().map_err(|v| format!("{}: invalid complex: {v:?}", path.display()))?;
    Ok(c)
}

fn read_total(path: &Path) -> Result<PlFunc, String> {
    let f: PlFunc = read_json(path)?;
    f.require_total().map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(f)
}

fn msg<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn run(command: Command) -> Result<Output, String> {
    match command {
        Command::Torus { p, q } => {
            let c = torus_complex(p, q).map_err(msg)?;
            let f = c.upsilon().map_err(msg)?;
            Output::new(&f, vec![(format!("upsilon {}", c.name()), f.clone())], true)
        }
        Command::Complex(ComplexCommand::Eval { file }) => {
            let c = read_complex(&file)?;
            let f = c.upsilon().map_err(msg)?;
            Output::new(&f, vec![(format!("upsilon {}", c.name()), f.clone())], true)
        }
        Command::Complex(ComplexCommand::Tau { file }) => {
            let tau = read_complex(&file)?.tau().map_err(msg)?;
            Output::new(&serde_json::json!({ "tau": tau }), vec![], true)
        }
        Command::Staircase { alexander } => {
            let d: LaurentPoly = read_json(&alexander)?;
            let c = lspace_knot_complex(&d).map_err(msg)?;
            Output::new(&c, vec![], true)
        }
        Command::CableBounds { ups, p, q } => {
            let b = cable_bounds(&read_total(&ups)?, CableParams::new(p, q).map_err(msg)?).map_err(msg)?;
            let series = bound_series(&b);
            Output::new(&b, series, true)
        }
        Command::CheckBounds { candidate, ups, p, q } => {
            let f = read_total(&candidate)?;
            let b = cable_bounds(&read_total(&ups)?, CableParams::new(p, q).map_err(msg)?).map_err(msg)?;
            let cert = check_bounds(&f, &b).map_err(msg)?;
            let mut series = vec![("candidate".to_string(), f)];
            series.extend(bound_series(&b));
            let pass = cert.is_pass();
            Output::new(&cert, series, pass)
        }
        Command::Pin { hfk, tau, g4, bounds, family_t2m3, n } => {
            let (result, unique_expected) = if family_t2m3 {
                let n = n.ok_or("--family-t2m3 needs --n")?;
                if n < 8 {
                    eprintln!("note: n = {n} < 8, uniqueness of the survivor is not claimed");
                }
                (pin_t2m3_cable(n, true), n >= 8)
            } else {
                let hfk = hfk.ok_or("either --hfk or --family-t2m3 is required")?;
                let table: HfkTable = read_json(&hfk)?;
                let (tau, g4) = (tau.ok_or("--tau is required")?, g4.ok_or("--g4 is required")?);
                let facts = KnotFacts::new(tau, table.top_alexander(), g4).map_err(msg)?;
                let bounds = match bounds {
                    Some(path) => {
                        let b: BoundPair = read_json(&path)?;
                        b.validate().map_err(|e| format!("{}: {e}", path.display()))?;
                        Some(b)
                    }
                    None => None,
                };
                (pin_upsilon(&lattice_from_hfk(&table), &facts, bounds.as_ref()), false)
            };
            let survivors = match result {
                Ok(s) => s,
                Err(PinError::NoSurvivors) => Vec::new(),
                Err(e) => return Err(e.to_string()),
            };
            let pass = !survivors.is_empty() && (!unique_expected || survivors.len() == 1);
            let series = survivors.iter().enumerate().map(|(i, f)| (format!("survivor {}", i + 1), f.clone())).collect();
            Output::new(&survivors, series, pass)
        }
        Command::Summand { p, max_n } => {
            let cert = j_family(p, max_n).map_err(msg)?;
            let pass = cert.verdict == SummandVerdict::IndependentSummand;
            Output::new(&cert, vec![], pass)
        }
        Command::Verify { suite, corpus } => {
            let suite: Suite = suite.parse().map_err(msg)?;
            let report = run_suite(suite, corpus.as_deref()).map_err(msg)?;
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            let pass = report.pass;
            Output::new(&report, vec![], pass)
        }
    }
}

fn bound_series(b: &BoundPair) -> Vec<(String, PlFunc)> {
    vec![
        ("lower".into(), b.lower.clone()),
        ("upper".into(), b.upper.clone()),
        ("reflected lower".into(), b.reflected.lower.clone()),
        ("reflected upper".into(), b.reflected.upper.clone()),
    ]
}

const DECIMALS: u32 = 6;

/// Rows at every breakpoint and at `k/32` for `k = 0..64`; cells outside a
/// function's domain are left empty.
fn csv(series: &[(String, PlFunc)]) -> String {
    let mut times: Vec<Rational> = (0..64).map(|k| Rational::new(k, 32)).collect();
    for (_, f) in series {
        times.extend(f.breakpoints().iter().map(|p| p.0));
    }
    times.sort();
    times.dedup();

    let mut out = String::from("t,t_decimal");
    for (name, _) in series {
        write!(out, ",{name},{name} decimal").unwrap();
    }
    out.push('\n');
    for t in times {
        write!(out, "{t},{}", t.to_decimal_string(DECIMALS)).unwrap();
        for (_, f) in series {
            match f.eval(t) {
                Ok(v) => write!(out, ",{v},{}", v.to_decimal_string(DECIMALS)).unwrap(),
                Err(_) => out.push_str(",,"),
            }
        }
        out.push('\n');
    }
    out
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = match run(cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let text = match cli.emit {
        Emit::Json => output.json,
        Emit::Csv if output.series.is_empty() => {
            eprintln!("error: this command has no function output to emit as CSV");
            return ExitCode::from(2);
        }
        Emit::Csv => csv(&output.series),
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if output.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
