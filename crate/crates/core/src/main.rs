use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use gssf::fuzz::{run_fuzz, FuzzOptions};
use gssf::generators::Constraint;
use gssf::inequalities::{equality_instance, ShapeOperatorForm};
use gssf::report::{run_scenario, validate_scenario};
use gssf::scenario::{
    AmbientSpec, CheckName, CheckSpec, Direction, FrameSpec, PresetSpec, Scenario, SigmaSpec,
    StructureSpec,
};
use gssf::{AmbientModel, Error, SpaceFormKind, StructureFunctions, Tolerances};

/// Verify Chen-type curvature inequalities on submanifolds of generalized S-space-forms.
#[derive(Parser)]
#[command(name = "gssf", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the checks of a scenario file and write a report.
    Report {
        scenario: PathBuf,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Equality tolerance (overrides GSSF_TOL).
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Check the bounds on seeded random instances.
    Fuzz {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Inclusive range for the dimension of L, as `a..b`.
        #[arg(long, default_value = "1..6", value_parser = parse_range)]
        n_range: (usize, usize),
        /// none, minimal, c_compatible or minimal_and_c_compatible; mixed when omitted.
        #[arg(long, value_parser = parse_constraint)]
        constraint: Option<Constraint>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Write a scenario whose point attains equality in the plane bound.
    Construct {
        /// `a,b,c` of the first shape operator.
        #[arg(long, value_parser = parse_floats::<3>)]
        form: [f64; 3],
        /// `a_r,b_r` pairs for the further shape operators, separated by `;`.
        #[arg(long, default_value = "", value_parser = parse_pairs)]
        pairs: Pairs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// Structure functions `F1,F2,F3,F11,F12,F21,F22`; an S-space-form with c = 2 when omitted.
        #[arg(long, value_parser = parse_floats::<7>)]
        values: Option<[f64; 7]>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the f-structure axioms of a scenario's ambient model.
    Validate {
        scenario: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once("..").ok_or("expected a..b")?;
    let a = a.trim().parse::<usize>().map_err(|e| e.to_string())?;
    let b = b
        .trim()
        .trim_start_matches('=')
        .parse::<usize>()
        .map_err(|e| e.to_string())?;
    Ok((a, b))
}

fn parse_constraint(s: &str) -> Result<Constraint, String> {
    serde_json::from_value(json!(s)).map_err(|_| format!("unknown constraint `{s}`"))
}

fn parse_floats<const K: usize>(s: &str) -> Result<[f64; K], String> {
    let v = s
        .split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|e| format!("`{x}`: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    v.try_into()
        .map_err(|v: Vec<f64>| format!("expected {K} numbers, got {}", v.len()))
}

#[derive(Debug, Clone)]
struct Pairs(Vec<(f64, f64)>);

fn parse_pairs(s: &str) -> Result<Pairs, String> {
    s.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| parse_floats::<2>(p).map(|[a, b]| (a, b)))
        .collect::<Result<_, _>>()
        .map(Pairs)
}

/// `--tol`, then `GSSF_TOL`, then the default.
fn tolerances(flag: Option<f64>) -> Result<Tolerances, Error> {
    let base = Tolerances::default();
    let eq = match (flag, std::env::var("GSSF_TOL")) {
        (Some(t), _) => t,
        (None, Ok(v)) => v
            .trim()
            .parse()
            .map_err(|_| Error::BadConfig(format!("GSSF_TOL=`{v}` is not a number")))?,
        (None, Err(_)) => base.equality,
    };
    if !(eq.is_finite() && eq > 0.0) {
        return Err(Error::BadConfig(format!("tolerance {eq} must be positive")));
    }
    Ok(base.with_equality(eq))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn construct(
    form: [f64; 3],
    pairs: Vec<(f64, f64)>,
    n: usize,
    m: usize,
    values: Option<[f64; 7]>,
) -> Result<Scenario, Error> {
    let structure = match values {
        Some(v) => StructureSpec::Values(StructureFunctions::new(v)),
        None => StructureSpec::Preset(PresetSpec {
            kind: SpaceFormKind::SSpaceForm,
            c: 2.0,
        }),
    };
    if m == 0 || n < 2 || n > 2 * m {
        return Err(Error::BadDimension(format!(
            "need 2 <= n <= 2m, got n = {n}, m = {m}"
        )));
    }
    let ambient = AmbientModel::canonical(m)?;
    let mut raw: Vec<_> = (0..n)
        .map(|k| {
            if k % 2 == 0 {
                ambient.dx(k / 2)
            } else {
                ambient.dy(k / 2)
            }
        })
        .collect();
    raw.push(ambient.xi(0).clone());
    raw.push(ambient.xi(1).clone());
    let [a, b, c] = form;
    let shape = ShapeOperatorForm { a, b, c, pairs };
    let point = equality_instance(ambient, structure.resolve(), n, &shape, &raw)?;

    let sff = point.sff();
    let mut entries = Vec::new();
    for r in 0..sff.normal_rank() {
        for i in 0..n + 2 {
            for j in i..n + 2 {
                let v = sff.get(r, i, j);
                if v != 0.0 {
                    entries.push((r + 1, i + 1, j + 1, v));
                }
            }
        }
    }
    let mut delta = CheckSpec::new(CheckName::DeltaBound);
    delta.x = Some(Direction::Index(1));
    delta.y = Some(Direction::Index(2));
    delta.expect_equality = Some(true);
    let mut shape_check = CheckSpec::new(CheckName::DeltaShape);
    shape_check.x = Some(Direction::Index(1));
    shape_check.y = Some(Direction::Index(2));
    Ok(Scenario {
        ambient: AmbientSpec {
            m,
            f: None,
            xi: None,
        },
        structure,
        frame: FrameSpec::Explicit {
            vectors: raw.iter().map(|v| v.as_slice().to_vec()).collect(),
        },
        sigma: SigmaSpec::Entries(entries),
        c_compatible: false,
        checks: vec![
            CheckSpec::new(CheckName::ScalarIdentity),
            delta,
            shape_check,
        ],
    })
}

fn run(cli: Cli) -> Result<bool, Error> {
    match cli.command {
        Command::Report { scenario, out, tol } => {
            let tol = tolerances(tol)?;
            let report = run_scenario(&Scenario::load(&scenario)?, tol)?;
            emit(out.as_deref(), &report.to_json())?;
            Ok(report.summary.fail_count == 0)
        }
        Command::Fuzz {
            seed,
            count,
            n_range,
            constraint,
            out,
            tol,
        } => {
            let opts = FuzzOptions {
                seed,
                count,
                n_range,
                constraint,
                tol: tolerances(tol)?,
            };
            let report = run_fuzz(&opts)?;
            emit(out.as_deref(), &report.to_json())?;
            Ok(report.summary.fail_count == 0)
        }
        Command::Construct {
            form,
            pairs,
            n,
            m,
            values,
            out,
        } => {
            let scenario = construct(form, pairs.0, n, m, values)?;
            emit(out.as_deref(), &scenario.to_json())?;
            Ok(true)
        }
        Command::Validate { scenario, out } => {
            let report = validate_scenario(&Scenario::load(&scenario)?, Tolerances::default())?;
            emit(out.as_deref(), &gssf::json::to_string(&report))?;
            Ok(report.valid)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let message = e.to_string();
            let first = message
                .lines()
                .next()
                .unwrap_or("")
                .trim_start_matches("error: ");
            eprintln!("{}", json!({ "error": "BadArguments", "message": first }));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{}", json!({ "error": e.code(), "message": e.to_string() }));
            ExitCode::from(2)
        }
    }
}
