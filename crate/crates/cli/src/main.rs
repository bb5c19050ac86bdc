//! Batch front-end over the quaternionic spectrum library.
//!
//! Subcommands: `spectrum`, `sdet`, `inverse`, `charmap`, `pole`, `rank`,
//! `solve-sylvester`, `verify`. Inputs are JSON documents (see `doc`);
//! outputs are deterministic JSON (default) or readable text.
//!
//! Exit codes: 0 success, 2 parse/shape error, 3 singular-matrix or other
//! math-domain error, 4 solver failure (no root found).

mod doc;
mod jsonout;

use std::fs;
use std::process::ExitCode;

use serde_json::{json, Map, Value};

use quatspec::charmap::{self, char2, char3, CharMapKind};
use quatspec::linearize::{bilateral_matrix, numeric_rank, solve_bilateral, BilateralForm};
use quatspec::sdet::{inverse, sdet};
use quatspec::solver::{sigma_oracle, spectrum2, spectrum3, SolverConfig};
use quatspec::{Error, QMatrix, Quaternion};

use doc::{MatrixDocument, SylvesterDocument, SCHEMA};

const USAGE: &str = "usage: quatspec <command> <file> [options]

commands:
  spectrum <file>          classified left spectrum (n = 2 or 3)
  sdet <file>              Study determinant
  inverse <file>           quaternionic inverse
  charmap <file>           characteristic map summary (n = 2 or 3)
  pole <file>              pole, continuity flag, and all six pole candidates (n = 3)
  rank <file> --at <quat>  rank of the characteristic-map differential at a point
  solve-sylvester <file>   solve a bilateral linear equation
  verify <file> --at <quat>  Study-determinant and sigma residuals at a point

options:
  --tol <float>       residual tolerance (default 1e-10)
  --seed <int>        start-generator seed (default 0)
  --starts <int>      number of Newton starts (default 64)
  --max-iter <int>    Newton iteration budget (default 100)
  --format json|text  output format (default json)
  --verify            cross-check every spectrum root with the sigma oracle
  --ascii             plain ASCII quaternions in text output
quaternion arguments are JSON 4-arrays, e.g. --at '[0,1,0,0]'";

struct Options {
    tol: f64,
    seed: u64,
    starts: usize,
    max_iter: u32,
    json: bool,
    verify: bool,
    ascii: bool,
    at: Option<Quaternion>,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            seed: 0,
            starts: 64,
            max_iter: 100,
            json: true,
            verify: false,
            ascii: false,
            at: None,
        }
    }
}

impl Options {
    fn config(&self) -> SolverConfig {
        SolverConfig {
            tol_residual: self.tol,
            seed: self.seed,
            n_starts: self.starts,
            max_iter: self.max_iter,
            ..SolverConfig::default()
        }
    }

    fn pretty(&self, q: Quaternion) -> String {
        if self.ascii {
            q.to_string()
        } else {
            q.to_pretty_string()
        }
    }
}

enum Failure {
    Parse(String),
    Math(String),
    Solver(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Parse(_) => 2,
            Failure::Math(_) => 3,
            Failure::Solver(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Parse(m) | Failure::Math(m) | Failure::Solver(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NoRootFound => Failure::Solver(e.to_string()),
            _ => Failure::Math(e.to_string()),
        }
    }
}

struct Output {
    value: Value,
    text: String,
}

fn quat_value(q: Quaternion) -> Value {
    json!([q.w, q.x, q.y, q.z])
}

fn matrix_value(m: &QMatrix) -> Value {
    let rows: Vec<Value> = (0..m.order())
        .map(|i| Value::Array((0..m.order()).map(|j| quat_value(m.get(i, j))).collect()))
        .collect();
    Value::Array(rows)
}

fn with_schema(fields: Vec<(&str, Value)>) -> Value {
    let mut map = Map::new();
    map.insert("schema".into(), Value::String(SCHEMA.into()));
    for (k, v) in fields {
        map.insert(k.into(), v);
    }
    Value::Object(map)
}

fn load_matrix(path: &str) -> Result<QMatrix, Failure> {
    let raw = fs::read_to_string(path)
        .map_err(|e| Failure::Parse(format!("cannot read {path}: {e}")))?;
    let parsed: MatrixDocument =
        serde_json::from_str(&raw).map_err(|e| Failure::Parse(format!("{path}: {e}")))?;
    parsed.validate().map_err(|e| Failure::Parse(format!("{path}: {e}")))
}

fn require_order(m: &QMatrix, allowed: &[usize], command: &str) -> Result<(), Failure> {
    if allowed.contains(&m.order()) {
        Ok(())
    } else {
        Err(Failure::Parse(format!(
            "{command} expects a matrix of order {allowed:?}, found {}",
            m.order()
        )))
    }
}

fn cmd_spectrum(m: &QMatrix, opts: &Options) -> Result<Output, Failure> {
    require_order(m, &[2, 3], "spectrum")?;
    let cfg = opts.config();
    let report = match m.order() {
        2 => spectrum2(m, &cfg)?,
        _ => spectrum3(m, &cfg)?,
    };
    let mut value = serde_json::to_value(&report).expect("report serializes");
    if opts.verify {
        if let Some(roots) = value.get_mut("roots").and_then(Value::as_array_mut) {
            for (root, report_root) in roots.iter_mut().zip(&report.roots) {
                let sigma = sigma_oracle(m, report_root.lambda);
                root.as_object_mut()
                    .expect("root is an object")
                    .insert("sigma".into(), json!(sigma));
            }
        }
    }
    let mut text = format!(
        "kind: {}\ndegree: {}\npath: {}\nroots: {}\n",
        match report.kind {
            quatspec::SpectrumKind::Finite => "finite",
            quatspec::SpectrumKind::Spherical => "spherical",
            quatspec::SpectrumKind::SuspectedInfinite => "suspected-infinite",
        },
        report.degree,
        report.classification_path,
        report.roots.len()
    );
    for (i, r) in report.roots.iter().enumerate() {
        let rank = r
            .diff_rank
            .map(|k| k.to_string())
            .unwrap_or_else(|| "undefined".into());
        text.push_str(&format!(
            "root {}: {} (residual {:e}, rank {}, iters {})\n",
            i + 1,
            opts.pretty(r.lambda),
            r.residual,
            rank,
            r.newton_iters
        ));
    }
    if let Some(s) = &report.spherical {
        text.push_str(&format!(
            "spherical: center {}, axis-norm {}\n",
            opts.pretty(s.center),
            s.axis_norm
        ));
    }
    let mut wrapped = Map::new();
    wrapped.insert("schema".into(), Value::String(SCHEMA.into()));
    if let Value::Object(fields) = value {
        wrapped.extend(fields);
    }
    Ok(Output { value: Value::Object(wrapped), text })
}

fn cmd_sdet(m: &QMatrix) -> Result<Output, Failure> {
    let s = sdet(m);
    Ok(Output {
        value: with_schema(vec![("sdet", json!(s))]),
        text: format!("sdet: {s}\n"),
    })
}

fn cmd_inverse(m: &QMatrix, opts: &Options) -> Result<Output, Failure> {
    let inv = inverse(m)?;
    let mut text = String::new();
    for i in 0..inv.order() {
        let row: Vec<String> = (0..inv.order()).map(|j| opts.pretty(inv.get(i, j))).collect();
        text.push_str(&format!("[{}]\n", row.join(", ")));
    }
    Ok(Output {
        value: with_schema(vec![
            ("n", json!(inv.order())),
            ("entries", matrix_value(&inv)),
        ]),
        text,
    })
}

fn cmd_charmap(m: &QMatrix, opts: &Options) -> Result<Output, Failure> {
    require_order(m, &[2, 3], "charmap")?;
    let map = match m.order() {
        2 => char2(m),
        _ => char3(m),
    };
    let kind = match map.kind() {
        CharMapKind::Poly2 => "poly2",
        CharMapKind::Tri3 => "tri3",
        CharMapKind::Block3 => "block3",
        CharMapKind::Poly3 => "poly3",
        CharMapKind::Rational3 => "rational3",
        CharMapKind::InverseReduced3 => "inverse-reduced3",
    };
    let mut coeffs = Map::new();
    for (name, q) in map.coefficients() {
        coeffs.insert(name.into(), quat_value(q));
    }
    let pole_value = map.pole().map(quat_value).unwrap_or(Value::Null);
    let perm_value = map
        .permutation()
        .map(|p| json!(p.iter().map(|i| i + 1).collect::<Vec<_>>()))
        .unwrap_or(Value::Null);
    let mut text = format!(
        "kind: {kind}\ndegree: {}\nnorm_const: {}\n",
        map.degree(),
        map.norm_const()
    );
    text.push_str(&match map.pole() {
        Some(p) => format!("pole: {}\n", opts.pretty(p)),
        None => "pole: none\n".into(),
    });
    for (name, q) in map.coefficients() {
        text.push_str(&format!("coefficient {name}: {}\n", opts.pretty(q)));
    }
    Ok(Output {
        value: with_schema(vec![
            ("kind", json!(kind)),
            ("degree", json!(map.degree())),
            ("norm_const", json!(map.norm_const())),
            ("pole", pole_value),
            ("permutation", perm_value),
            ("coefficients", Value::Object(coeffs)),
        ]),
        text,
    })
}

fn cmd_pole(m: &QMatrix, opts: &Options) -> Result<Output, Failure> {
    require_order(m, &[3], "pole")?;
    let scale = (1.0 + m.max_entry_norm()).powi(3);
    let eigen_flag = |p: Quaternion| sdet(&m.shifted(p)) <= opts.tol * scale;
    let primary = charmap::pole(m).ok();
    let mut candidates = Vec::new();
    for (sigma, cand) in charmap::pole_candidates(m) {
        let perm: Vec<usize> = sigma.iter().map(|i| i + 1).collect();
        match cand {
            Some(p) => candidates.push(json!({
                "permutation": perm,
                "pole": quat_value(p),
                "eigenvalue": eigen_flag(p),
            })),
            None => candidates.push(json!({
                "permutation": perm,
                "pole": Value::Null,
                "eigenvalue": Value::Null,
            })),
        }
    }
    let mut text = String::new();
    match primary {
        Some(p) => {
            text.push_str(&format!("pole: {}\n", opts.pretty(p)));
            text.push_str(&format!("eigenvalue: {}\n", eigen_flag(p)));
        }
        None => text.push_str("pole: none (polynomial case)\n"),
    }
    for (sigma, cand) in charmap::pole_candidates(m) {
        let perm: Vec<usize> = sigma.iter().map(|i| i + 1).collect();
        match cand {
            Some(p) => text.push_str(&format!(
                "candidate {:?}: {} (eigenvalue: {})\n",
                perm,
                opts.pretty(p),
                eigen_flag(p)
            )),
            None => text.push_str(&format!("candidate {perm:?}: none\n")),
        }
    }
    Ok(Output {
        value: with_schema(vec![
            ("pole", primary.map(quat_value).unwrap_or(Value::Null)),
            (
                "eigenvalue",
                primary.map(|p| json!(eigen_flag(p))).unwrap_or(Value::Null),
            ),
            ("candidates", Value::Array(candidates)),
        ]),
        text,
    })
}

fn cmd_rank(m: &QMatrix, opts: &Options) -> Result<Output, Failure> {
    require_order(m, &[2, 3], "rank")?;
    let at = opts
        .at
        .ok_or_else(|| Failure::Parse("rank requires --at <quat>".into()))?;
    let form = match m.order() {
        2 => {
            let map = char2(m);
            map.differential(at)?
        }
        _ => {
            let map = char3(m);
            charmap::diff3(m, &map, at)?
        }
    };
    let real = bilateral_matrix(&form);
    let rank = numeric_rank(&real, SolverConfig::default().rank_tol);
    let rows: Vec<Value> = (0..4)
        .map(|r| json!([real.entry(r, 0), real.entry(r, 1), real.entry(r, 2), real.entry(r, 3)]))
        .collect();
    let mut text = format!("rank: {rank}\n");
    for r in 0..4 {
        text.push_str(&format!(
            "[{} {} {} {}]\n",
            real.entry(r, 0),
            real.entry(r, 1),
            real.entry(r, 2),
            real.entry(r, 3)
        ));
    }
    Ok(Output {
        value: with_schema(vec![("rank", json!(rank)), ("matrix", Value::Array(rows))]),
        text,
    })
}

fn cmd_solve_sylvester(path: &str, opts: &Options) -> Result<Output, Failure> {
    let raw = fs::read_to_string(path)
        .map_err(|e| Failure::Parse(format!("cannot read {path}: {e}")))?;
    let parsed: SylvesterDocument =
        serde_json::from_str(&raw).map_err(|e| Failure::Parse(format!("{path}: {e}")))?;
    let (terms, rhs) = parsed.validate().map_err(|e| Failure::Parse(format!("{path}: {e}")))?;
    let form = BilateralForm::new(terms);
    let rank = numeric_rank(&bilateral_matrix(&form), SolverConfig::default().rank_tol);
    let x = solve_bilateral(&form, rhs, SolverConfig::default().rank_tol)?;
    Ok(Output {
        value: json!({"x": quat_value(x), "rank": rank}),
        text: format!("x: {}\nrank: {rank}\n", opts.pretty(x)),
    })
}

fn cmd_verify(m: &QMatrix, opts: &Options) -> Result<Output, Failure> {
    let at = opts
        .at
        .ok_or_else(|| Failure::Parse("verify requires --at <quat>".into()))?;
    let residual = sdet(&m.shifted(at));
    let sigma = sigma_oracle(m, at);
    let scale = (1.0 + m.max_entry_norm()).powi(m.order() as i32);
    let is_eigen = residual <= opts.tol * scale;
    Ok(Output {
        value: with_schema(vec![
            ("lambda", quat_value(at)),
            ("sdet_residual", json!(residual)),
            ("sigma", json!(sigma)),
            ("is_eigenvalue", json!(is_eigen)),
        ]),
        text: format!(
            "lambda: {}\nsdet residual: {residual:e}\nsigma: {sigma:e}\nis_eigenvalue: {is_eigen}\n",
            opts.pretty(at)
        ),
    })
}

fn parse_args(args: &[String]) -> Result<(String, String, Options), Failure> {
    if args.is_empty() {
        return Err(Failure::Parse(USAGE.into()));
    }
    let command = args[0].clone();
    let mut file = None;
    let mut opts = Options::default();
    let mut i = 1;
    while i < args.len() {
        let arg = &args[i];
        let mut take = |name: &str| -> Result<String, Failure> {
            i += 1;
            args.get(i)
                .cloned()
                .ok_or_else(|| Failure::Parse(format!("{name} expects a value")))
        };
        match arg.as_str() {
            "--tol" => {
                opts.tol = take("--tol")?
                    .parse()
                    .map_err(|e| Failure::Parse(format!("--tol: {e}")))?;
            }
            "--seed" => {
                opts.seed = take("--seed")?
                    .parse()
                    .map_err(|e| Failure::Parse(format!("--seed: {e}")))?;
            }
            "--starts" => {
                opts.starts = take("--starts")?
                    .parse()
                    .map_err(|e| Failure::Parse(format!("--starts: {e}")))?;
            }
            "--max-iter" => {
                opts.max_iter = take("--max-iter")?
                    .parse()
                    .map_err(|e| Failure::Parse(format!("--max-iter: {e}")))?;
            }
            "--format" => {
                opts.json = match take("--format")?.as_str() {
                    "json" => true,
                    "text" => false,
                    other => {
                        return Err(Failure::Parse(format!(
                            "--format expects json or text, found {other}"
                        )))
                    }
                };
            }
            "--at" => {
                let raw = take("--at")?;
                let arr: [f64; 4] = serde_json::from_str(&raw)
                    .map_err(|e| Failure::Parse(format!("--at expects a JSON 4-array: {e}")))?;
                let q = Quaternion::from_array(arr);
                if !q.is_finite() {
                    return Err(Failure::Parse("--at entries must be finite".into()));
                }
                opts.at = Some(q);
            }
            "--verify" => opts.verify = true,
            "--ascii" => opts.ascii = true,
            other if file.is_none() && !other.starts_with("--") => {
                file = Some(other.to_string());
            }
            other => return Err(Failure::Parse(format!("unrecognized argument {other}"))),
        }
        i += 1;
    }
    let file = file.ok_or_else(|| Failure::Parse(format!("{command} expects an input file")))?;
    Ok((command, file, opts))
}

fn run(args: &[String]) -> Result<Output, Failure> {
    let (command, file, opts) = parse_args(args)?;
    match command.as_str() {
        "spectrum" => cmd_spectrum(&load_matrix(&file)?, &opts),
        "sdet" => cmd_sdet(&load_matrix(&file)?),
        "inverse" => cmd_inverse(&load_matrix(&file)?, &opts),
        "charmap" => cmd_charmap(&load_matrix(&file)?, &opts),
        "pole" => cmd_pole(&load_matrix(&file)?, &opts),
        "rank" => cmd_rank(&load_matrix(&file)?, &opts),
        "solve-sylvester" => cmd_solve_sylvester(&file, &opts),
        "verify" => cmd_verify(&load_matrix(&file)?, &opts),
        other => Err(Failure::Parse(format!("unknown command {other}\n{USAGE}"))),
    }
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.first().map(String::as_str) == Some("--help") || args.is_empty() {
        println!("{USAGE}");
        return ExitCode::SUCCESS;
    }
    let wants_json = !args.windows(2).any(|w| w[0] == "--format" && w[1] == "text");
    match run(&args) {
        Ok(output) => {
            if wants_json {
                println!("{}", jsonout::to_string(&output.value));
            } else {
                print!("{}", output.text);
            }
            ExitCode::SUCCESS
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}
