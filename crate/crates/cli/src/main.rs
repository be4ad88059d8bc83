//! `qhr`: JSON front end for qhr-core.
//!
//! Exit status 0 on success, 1 on domain errors, 2 on usage or parse
//! errors. Errors go to stderr as `{"error": <code>, "message": <text>}`.

use std::io::Read;
use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qhr_core::experiments::{self, GroupTag};
use qhr_core::qspace::HermitianSpace;
use qhr_core::reversers::{self, ReverserWitness, SdrVerdict};
use qhr_core::{cartan, spectral, BoundaryPoint, Error, FormTag, QMatrix, Quaternion, Tolerance};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(
    name = "qhr",
    version,
    about = "Reversibility toolkit for quaternionic hyperbolic isometries"
)]
struct Cli {
    /// Construction tolerance.
    #[arg(long, global = true, env = "QHR_TOL")]
    tol: Option<f64>,

    #[arg(long, global = true, value_enum, default_value_t = Output::Json)]
    output: Output,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Table,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Form {
    H1,
    H0,
}

impl From<Form> for FormTag {
    fn from(f: Form) -> Self {
        match f {
            Form::H1 => FormTag::H1,
            Form::H0 => FormTag::H0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SdrGroup {
    Sp1,
    So3,
    So4,
    Sp11,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Hyperbolic / elliptic / parabolic verdict of a matrix.
    Classify {
        /// JSON literal, file path, or "-" for stdin.
        input: String,
        #[arg(long, value_enum, default_value_t = Form::H1)]
        form: Form,
    },
    /// Normal form `A = C_A E_A C_A^{-1}` of a hyperbolic matrix.
    NormalForm { input: String },
    /// Cartan angular invariant of three boundary points given by lifts.
    Cartan { input: String },
    /// Strong double reversibility of a pair.
    Sdr {
        input: String,
        #[arg(long, value_enum)]
        group: SdrGroup,
    },
    /// Factor a rotation of R^4 as `x -> p x conj(q)`.
    So4Decompose { input: String },
    /// Real basis of the reverser space of a list of matrices.
    ReverserSpace { input: String },
    /// Monte Carlo genericity experiment.
    Experiment {
        #[arg(long, value_parser = parse_group)]
        group: GroupTag,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Lie-algebra dimension audit against closed-form counts.
    LieDims {
        #[arg(long, default_value_t = 2)]
        max_n: usize,
    },
}

fn parse_group(s: &str) -> Result<GroupTag, String> {
    s.parse::<GroupTag>().map_err(|e| e.to_string())
}

/// A failure with its exit status.
enum Failure {
    Usage { code: String, message: String },
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

fn usage(code: &str, message: impl Into<String>) -> Failure {
    Failure::Usage {
        code: code.to_string(),
        message: message.into(),
    }
}

fn read_input(input: &str) -> Result<Value, Failure> {
    let text = if input == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| usage("IoError", e.to_string()))?;
        s
    } else if Path::new(input).is_file() {
        std::fs::read_to_string(input).map_err(|e| usage("IoError", e.to_string()))?
    } else {
        input.to_string()
    };
    serde_json::from_str(&text).map_err(|e| usage("ParseError", e.to_string()))
}

fn parse_quat(v: &Value) -> Result<Quaternion, Failure> {
    if let Some(x) = v.as_f64() {
        return Ok(Quaternion::real(x));
    }
    serde_json::from_value(v.clone()).map_err(|e| usage("ParseError", format!("quaternion: {e}")))
}

/// A matrix as `{"rows","cols","entries"}` or as nested rows of quaternions.
fn parse_matrix(v: &Value) -> Result<QMatrix, Failure> {
    if v.is_object() {
        return serde_json::from_value(v.clone())
            .map_err(|e| usage("ParseError", format!("matrix: {e}")));
    }
    let rows = v
        .as_array()
        .ok_or_else(|| usage("ParseError", "matrix must be an object or an array of rows"))?;
    let parsed: Vec<Vec<Quaternion>> = rows
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| usage("ParseError", "matrix row must be an array"))?
                .iter()
                .map(parse_quat)
                .collect()
        })
        .collect::<Result<_, _>>()?;
    let cols = parsed.first().map_or(0, Vec::len);
    if parsed.is_empty() || parsed.iter().any(|r| r.len() != cols) {
        return Err(usage(
            "ParseError",
            "matrix rows must be nonempty and of equal length",
        ));
    }
    Ok(QMatrix::from_rows(&parsed))
}

fn parse_real_matrix(v: &Value) -> Result<nalgebra::DMatrix<f64>, Failure> {
    let rows: Vec<Vec<f64>> = serde_json::from_value(v.clone())
        .map_err(|e| usage("ParseError", format!("real matrix: {e}")))?;
    let cols = rows.first().map_or(0, Vec::len);
    if rows.is_empty() || rows.iter().any(|r| r.len() != cols) {
        return Err(usage(
            "ParseError",
            "real matrix rows must be nonempty and of equal length",
        ));
    }
    Ok(nalgebra::DMatrix::from_fn(rows.len(), cols, |r, c| {
        rows[r][c]
    }))
}

fn real_rows(m: &nalgebra::DMatrix<f64>) -> Value {
    json!((0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| m[(r, c)]).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

fn pair<'a>(v: &'a Value, what: &str) -> Result<(&'a Value, &'a Value), Failure> {
    match v.as_array().map(Vec::as_slice) {
        Some([a, b]) => Ok((a, b)),
        _ => Err(usage(
            "ParseError",
            format!("expected an array of two {what}"),
        )),
    }
}

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("serializable")
}

fn run(cli: &Cli) -> Result<Value, Failure> {
    let tol = cli
        .tol
        .map_or_else(Tolerance::default, Tolerance::with_construction);
    if !(tol.construction > 0.0 && tol.construction.is_finite()) {
        return Err(usage(
            "InvalidArgument",
            "--tol must be positive and finite",
        ));
    }
    match &cli.command {
        Command::Classify { input, form } => {
            let m = parse_matrix(&read_input(input)?)?;
            if m.rows() < 2 {
                return Err(Error::DimensionMismatch {
                    expected: "square matrix of size n+1 >= 2".into(),
                    found: format!("{}x{}", m.rows(), m.cols()),
                }
                .into());
            }
            let space = HermitianSpace::new(m.rows() - 1, (*form).into())?;
            let report = spectral::classify(&space, &m, &tol)?;
            Ok(to_value(&report.summary()))
        }
        Command::NormalForm { input } => {
            let m = parse_matrix(&read_input(input)?)?;
            if m.rows() < 2 {
                return Err(Error::NotHyperbolic.into());
            }
            let space = HermitianSpace::h1(m.rows() - 1);
            Ok(to_value(&spectral::hyperbolic_normal_form(
                &space, &m, &tol,
            )?))
        }
        Command::Cartan { input } => {
            let v = read_input(input)?;
            let lifts: Vec<QMatrix> = match v.as_array() {
                Some(items) if items.len() == 3 => items
                    .iter()
                    .map(|p| {
                        let entries: Vec<Quaternion> = p
                            .as_array()
                            .ok_or_else(|| {
                                usage("ParseError", "a lift is an array of quaternions")
                            })?
                            .iter()
                            .map(parse_quat)
                            .collect::<Result<_, _>>()?;
                        Ok(QMatrix::column(&entries))
                    })
                    .collect::<Result<_, Failure>>()?,
                _ => return Err(usage("ParseError", "expected an array of three lifts")),
            };
            if lifts[0].rows() < 2 {
                return Err(usage("ParseError", "lifts need at least two coordinates"));
            }
            let space = HermitianSpace::h1(lifts[0].rows() - 1);
            let points: Vec<BoundaryPoint> = lifts
                .iter()
                .map(|z| BoundaryPoint::from_lift(&space, z, tol.construction))
                .collect::<Result<_, _>>()?;
            Ok(to_value(&cartan::cartan_invariant(
                &space, &points[0], &points[1], &points[2],
            )?))
        }
        Command::Sdr { input, group } => sdr(&read_input(input)?, *group, &tol),
        Command::So4Decompose { input } => {
            let r = parse_real_matrix(&read_input(input)?)?;
            let (p, q) = reversers::so4_factor(&r)?;
            Ok(json!({ "p": p, "q": q }))
        }
        Command::ReverserSpace { input } => {
            let v = read_input(input)?;
            let items = v
                .as_array()
                .ok_or_else(|| usage("ParseError", "expected an array of matrices"))?;
            let ms: Vec<QMatrix> = items.iter().map(parse_matrix).collect::<Result<_, _>>()?;
            Ok(to_value(&reversers::reverser_space(&ms, &tol)?))
        }
        Command::Experiment {
            group,
            trials,
            seed,
        } => Ok(to_value(&experiments::genericity_experiment(
            *group, *trials, *seed, &tol,
        )?)),
        Command::LieDims { max_n } => {
            let rows = experiments::dimension_audit(*max_n, &tol)?;
            let out: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "algebra": r.algebra,
                        "involution": r.involution,
                        "computed": r.computed,
                        "formula": r.formula,
                        "matches": r.matches(),
                    })
                })
                .collect();
            Ok(Value::Array(out))
        }
    }
}

fn sdr(v: &Value, group: SdrGroup, tol: &Tolerance) -> Result<Value, Failure> {
    match group {
        SdrGroup::Sp1 => {
            let (a, b) = pair(v, "quaternions")?;
            let (p1, p2) = (parse_quat(a)?, parse_quat(b)?);
            let w = reversers::sdr_sp1(p1, p2, tol)?;
            let space = HermitianSpace::new(1, FormTag::Compact)?;
            let checked = ReverserWitness::verify(
                &space,
                &[QMatrix::column(&[p1]), QMatrix::column(&[p2])],
                &w.c,
                tol.construction,
            )?;
            Ok(json!({ "outcome": "yes", "witness": checked.c.get(0, 0) }))
        }
        SdrGroup::So3 | SdrGroup::So4 => {
            let (a, b) = pair(v, "rotation matrices")?;
            let (r1, r2) = (parse_real_matrix(a)?, parse_real_matrix(b)?);
            let triple = if group == SdrGroup::So3 {
                reversers::sdr_so3(&r1, &r2, tol)?
            } else {
                reversers::sdr_so4(&r1, &r2, tol)?
            };
            let residual = triple.residual(&r1, &r2);
            if residual > tol.construction {
                return Err(Error::FactorizationFailure { residual }.into());
            }
            Ok(json!({
                "outcome": "yes",
                "involutions": [real_rows(&triple.i1), real_rows(&triple.i2), real_rows(&triple.i3)],
                "residual": residual,
            }))
        }
        SdrGroup::Sp11 => {
            let (a, b) = pair(v, "matrices")?;
            let (a, b) = (parse_matrix(a)?, parse_matrix(b)?);
            let space = HermitianSpace::h1(1);
            let verdict = reversers::sdr_sp11(&space, &a, &b, tol)?;
            if let SdrVerdict::Yes { witness } = &verdict {
                ReverserWitness::verify(&space, &[a, b], &witness.c, tol.construction)?;
            }
            Ok(to_value(&verdict))
        }
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Aligned two-column rendering of a JSON object, one row per array element
/// for arrays of objects.
fn table(v: &Value) -> String {
    match v {
        Value::Array(items) if items.iter().all(Value::is_object) && !items.is_empty() => {
            let keys: Vec<String> = items[0]
                .as_object()
                .expect("object")
                .keys()
                .cloned()
                .collect();
            let cells: Vec<Vec<String>> = items
                .iter()
                .map(|it| keys.iter().map(|k| scalar_text(&it[k])).collect())
                .collect();
            let widths: Vec<usize> = keys
                .iter()
                .enumerate()
                .map(|(i, k)| {
                    cells
                        .iter()
                        .map(|r| r[i].len())
                        .chain([k.len()])
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let line = |row: &[String]| {
                row.iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:<w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
                    .trim_end()
                    .to_string()
            };
            let mut out = vec![line(&keys)];
            out.extend(cells.iter().map(|r| line(r)));
            out.join("\n")
        }
        Value::Object(map) => {
            let width = map.keys().map(String::len).max().unwrap_or(0);
            map.iter()
                .map(|(k, v)| format!("{k:<width$}  {}", scalar_text(v)))
                .collect::<Vec<_>>()
                .join("\n")
        }
        other => scalar_text(other),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let err = json!({ "error": "UsageError", "message": e.to_string().trim_end() });
            eprintln!("{err}");
            return ExitCode::from(2);
        }
    };
    match run(&cli) {
        Ok(v) => {
            match cli.output {
                Output::Json => println!("{v}"),
                Output::Table => println!("{}", table(&v)),
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Usage { code, message }) => {
            eprintln!("{}", json!({ "error": code, "message": message }));
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("{}", json!({ "error": e.code(), "message": e.to_string() }));
            ExitCode::from(1)
        }
    }
}
