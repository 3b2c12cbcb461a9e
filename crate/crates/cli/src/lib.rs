//! The `locpos` command line.
//!
//! Every subcommand prints one JSON document (sorted keys, rationals as
//! strings) to stdout or to the file named by `--json`. Domain errors exit
//! with status 1 and `{"error": {"code", "message"}}` on stderr; malformed
//! invocations and divisor expressions exit with status 2.

pub mod parse;
pub mod render;

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use clap::{Args, Parser, Subcommand};
use locpos::infinitesimal::{blow_up, infinitesimal_polygon, xi_of_polygon, BlowupSpec, InfFlagSpec, MovingSeshadri};
use locpos::lattice::{nef_cone, DivisorClass, SurfaceModel};
use locpos::okounkov::{largest_simplex, okounkov_polygon, polygon_area, Flag, NOPolygon, PointSpec};
use locpos::scalars::{parse_rational, ExactScalar};
use locpos::seshadri::{
    free_multiple, generic_seshadri_bound, largest_simplex_flag, largest_simplex_search, seshadri_direct,
    GenericBoundQuery,
};
use locpos::{checks, infinitesimal, models, zariski};
use num_traits::Zero;
use serde_json::{json, Value};

pub use parse::{parse_divisor, ParseError};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Domain(#[from] locpos::Error),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Domain(e) => e.code(),
            CliError::Parse(e) => e.code(),
            CliError::Usage(_) => "Usage",
            CliError::Io(_) => "Io",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Usage(_) => 2,
            CliError::Domain(_) | CliError::Io(_) => 1,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut body = json!({ "code": self.code(), "message": self.to_string() });
        if let CliError::Parse(ParseError::Syntax { offset, expected }) = self {
            body["offset"] = json!(offset);
            body["expected"] = json!(expected);
        }
        json!({ "error": body })
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "locpos", version, about = "Exact local positivity invariants of divisors on surfaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct ModelArg {
    /// A model file, or `builtin:<name>`.
    #[arg(long)]
    pub model: String,
}

#[derive(Debug, Args)]
pub struct DivisorArgs {
    #[command(flatten)]
    pub model: ModelArg,
    /// A divisor expression such as `2H - 3/2*E1`.
    #[arg(long, allow_hyphen_values = true)]
    pub divisor: String,
}

#[derive(Debug, Args)]
pub struct PointArg {
    /// `generic`, `on:C1,C2,…` or a point file; defaults to the model's
    /// marked point when it has one.
    #[arg(long)]
    pub point: Option<String>,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Where to write the JSON result (`-` for stdout, the default).
    #[arg(long, value_name = "OUT")]
    pub json: Option<String>,
}

#[derive(Debug, Args)]
pub struct Drawings {
    #[arg(long, value_name = "OUT")]
    pub svg: Option<String>,
    #[arg(long, value_name = "OUT")]
    pub csv: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Zariski decomposition and volume.
    Zariski {
        #[command(flatten)]
        d: DivisorArgs,
        #[command(flatten)]
        out: Output,
    },
    /// The null and negative loci.
    Loci {
        #[command(flatten)]
        d: DivisorArgs,
        #[command(flatten)]
        out: Output,
    },
    /// Newton–Okounkov polygon with respect to a flag.
    Polygon {
        #[command(flatten)]
        d: DivisorArgs,
        #[arg(long)]
        flag_curve: String,
        #[command(flatten)]
        point: PointArg,
        #[command(flatten)]
        out: Output,
        #[command(flatten)]
        draw: Drawings,
    },
    /// Infinitesimal polygon on the blow-up at a point.
    Infinitesimal {
        #[command(flatten)]
        d: DivisorArgs,
        #[command(flatten)]
        point: PointArg,
        /// `generic` or `on:<curve>`.
        #[arg(long, default_value = "generic")]
        y: String,
        #[command(flatten)]
        out: Output,
        #[command(flatten)]
        draw: Drawings,
    },
    /// Seshadri constant of a nef class.
    Seshadri {
        #[command(flatten)]
        d: DivisorArgs,
        #[command(flatten)]
        point: PointArg,
        #[command(flatten)]
        out: Output,
    },
    /// Moving Seshadri constant of a big class.
    MovingSeshadri {
        #[command(flatten)]
        d: DivisorArgs,
        #[command(flatten)]
        point: PointArg,
        #[command(flatten)]
        out: Output,
    },
    /// Largest simplex constant, for one flag or the best over the point.
    Lambda {
        #[command(flatten)]
        d: DivisorArgs,
        #[arg(long)]
        flag_curve: Option<String>,
        #[command(flatten)]
        point: PointArg,
        #[command(flatten)]
        out: Output,
    },
    /// Extremal rays of the nef cone.
    Nefcone {
        #[command(flatten)]
        model: ModelArg,
        #[command(flatten)]
        out: Output,
    },
    /// Smallest m with mA − b nef for every ample A.
    Freemult {
        #[command(flatten)]
        d: DivisorArgs,
        #[command(flatten)]
        out: Output,
    },
    /// Whether ε(A; x) ≥ τ at a very general point, given only (A²).
    Genericbound {
        #[arg(long, allow_hyphen_values = true)]
        deg: String,
        #[arg(long, allow_hyphen_values = true)]
        target: String,
        #[arg(long)]
        exclude_q1: bool,
        #[command(flatten)]
        out: Output,
    },
    /// The model blown up at a point, as a model file.
    Blowup {
        #[command(flatten)]
        model: ModelArg,
        #[command(flatten)]
        point: PointArg,
        #[command(flatten)]
        out: Output,
    },
    /// Runs the invariant suite on a model.
    Check {
        #[command(flatten)]
        model: ModelArg,
        #[command(flatten)]
        out: Output,
    },
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                return 2;
            }
            let _ = write!(stdout, "{}", e.render());
            return 0;
        }
    };
    match execute(&cli.command, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = stderr.write_all(render::to_text(&e.to_json()).as_bytes());
            e.exit_code()
        }
    }
}

pub fn load_model(spec: &str) -> CliResult<SurfaceModel> {
    match spec.strip_prefix("builtin:") {
        Some(name) => Ok(models::builtin(name)?),
        None => Ok(models::load(Path::new(spec))?),
    }
}

pub fn load_point(spec: Option<&str>, model: &SurfaceModel) -> CliResult<BlowupSpec> {
    let x = match spec {
        None => model.marked_point.clone().unwrap_or_else(BlowupSpec::generic),
        Some("generic") => BlowupSpec::generic(),
        Some(s) => match s.strip_prefix("on:") {
            Some(list) => {
                let names: Vec<&str> = list.split(',').map(str::trim).filter(|n| !n.is_empty()).collect();
                BlowupSpec::on_curves(&names)
            }
            None => {
                let text = std::fs::read_to_string(s).map_err(|e| CliError::Io(format!("{s}: {e}")))?;
                models::point_from_json(&text)?
            }
        },
    };
    for name in x.base_mults.keys() {
        model.curve_index(name)?;
    }
    Ok(x)
}

fn load_y(spec: &str) -> CliResult<InfFlagSpec> {
    match spec {
        "generic" => Ok(InfFlagSpec::Generic),
        s => match s.strip_prefix("on:") {
            Some(c) if !c.is_empty() => Ok(InfFlagSpec::On(c.to_string())),
            _ => Err(CliError::Usage(format!("--y expects generic or on:<curve>, got {s}"))),
        },
    }
}

/// The flag `(C, x)` at the point `x`, recording the other curves through
/// `x` as local multiplicities.
pub fn flag_at(model: &SurfaceModel, curve: &str, x: &BlowupSpec) -> CliResult<Flag> {
    model.curve_index(curve)?;
    if x.mult(curve) > 1 {
        return Err(locpos::Error::InvalidFlag(format!("{curve} is singular at the point")).into());
    }
    let local_mults = x
        .base_mults
        .iter()
        .filter(|(name, m)| name.as_str() != curve && **m > 0)
        .map(|(name, m)| (name.clone(), *m))
        .collect();
    Ok(Flag::new(curve, PointSpec { local_mults }))
}

fn divisor(args: &DivisorArgs) -> CliResult<(SurfaceModel, DivisorClass)> {
    let model = load_model(&args.model.model)?;
    let d = parse_divisor(&args.divisor, &model)?;
    Ok((model, d))
}

fn rational_arg(flag: &str, s: &str) -> CliResult<locpos::scalars::Rational> {
    parse_rational(s.trim()).ok_or_else(|| CliError::Usage(format!("--{flag} expects a rational, got {s}")))
}

fn origin_in(poly: &NOPolygon) -> bool {
    let zero = ExactScalar::zero();
    poly.nu.is_zero() && poly.alpha_at(&zero) == Some(zero)
}

fn emit(target: Option<&str>, text: &str, stdout: &mut dyn Write) -> CliResult<()> {
    match target {
        None | Some("-") => stdout.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string())),
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{path}: {e}"))),
    }
}

fn emit_json(out: &Output, v: &Value, stdout: &mut dyn Write) -> CliResult<()> {
    emit(out.json.as_deref(), &render::to_text(v), stdout)
}

fn emit_drawings(
    draw: &Drawings,
    poly: &NOPolygon,
    lambda: Option<&ExactScalar>,
    xi: Option<&ExactScalar>,
    stdout: &mut dyn Write,
) -> CliResult<()> {
    if let Some(path) = &draw.svg {
        emit(Some(path), &render::svg(poly, lambda, xi), stdout)?;
    }
    if let Some(path) = &draw.csv {
        emit(Some(path), &render::csv(poly), stdout)?;
    }
    Ok(())
}

fn execute(cmd: &Command, stdout: &mut dyn Write) -> CliResult<i32> {
    match cmd {
        Command::Zariski { d, out } => {
            let (model, d) = divisor(d)?;
            let zp = zariski::zariski_decompose(&model, &d)?;
            let vol = zariski::volume(&model, &d)?;
            let v = json!({
                "divisor": render::class(&d),
                "positive": render::class(&zp.positive),
                "negative": render::coefficients(&zp.negative),
                "support": zp.support,
                "volume": render::rational(&vol),
                "relative": zp.relative,
            });
            emit_json(out, &v, stdout)?;
        }
        Command::Loci { d, out } => {
            let (model, d) = divisor(d)?;
            let r = zariski::loci(&model, &d)?;
            let v = json!({
                "divisor": render::class(&d),
                "null": r.null_curves,
                "neg": r.neg_curves,
                "relative": r.relative,
            });
            emit_json(out, &v, stdout)?;
        }
        Command::Polygon { d, flag_curve, point, out, draw } => {
            let (model, d) = divisor(d)?;
            let x = match point.point.as_deref() {
                None => BlowupSpec::generic(),
                p => load_point(p, &model)?,
            };
            let flag = flag_at(&model, flag_curve, &x)?;
            let poly = okounkov_polygon(&model, &d, &flag)?;
            let lambda = largest_simplex(&poly);
            let mut v = render::polygon(&poly, &polygon_area(&poly));
            v["lambda"] = render::scalar(&lambda);
            v["origin_in"] = json!(origin_in(&poly));
            v["local_mults"] = json!(flag.point.local_mults);
            emit_json(out, &v, stdout)?;
            emit_drawings(draw, &poly, Some(&lambda), None, stdout)?;
        }
        Command::Infinitesimal { d, point, y, out, draw } => {
            let (model, d) = divisor(d)?;
            let x = load_point(point.point.as_deref(), &model)?;
            let y = load_y(y)?;
            let poly = infinitesimal_polygon(&model, &d, &x, &y)?;
            let lambda = largest_simplex(&poly);
            let xi = xi_of_polygon(&poly);
            let mut v = render::polygon(&poly, &polygon_area(&poly));
            v["lambda"] = render::scalar(&lambda);
            v["xi"] = render::scalar(&xi);
            v["mu_prime"] = render::scalar(&poly.mu);
            v["origin_in"] = json!(origin_in(&poly));
            emit_json(out, &v, stdout)?;
            emit_drawings(draw, &poly, Some(&lambda), Some(&xi), stdout)?;
        }
        Command::Seshadri { d, point, out } => {
            let (model, d) = divisor(d)?;
            let x = load_point(point.point.as_deref(), &model)?;
            let eps = seshadri_direct(&model, &d, &x)?;
            emit_json(out, &json!({ "divisor": render::class(&d), "epsilon": render::scalar(&eps) }), stdout)?;
        }
        Command::MovingSeshadri { d, point, out } => {
            let (model, d) = divisor(d)?;
            let x = load_point(point.point.as_deref(), &model)?;
            let v = match infinitesimal::moving_seshadri(&model, &d, &x)? {
                MovingSeshadri::InNeg => json!({ "locus": "neg", "value": "0" }),
                MovingSeshadri::InNullNotNeg => json!({ "locus": "null", "value": "0" }),
                MovingSeshadri::Positive(e) => json!({ "locus": "none", "value": render::scalar(&e) }),
            };
            emit_json(out, &v, stdout)?;
        }
        Command::Lambda { d, flag_curve, point, out } => {
            let (model, d) = divisor(d)?;
            let x = load_point(point.point.as_deref(), &model)?;
            let lambda = match flag_curve {
                Some(c) => largest_simplex_flag(&model, &d, &flag_at(&model, c, &x)?)?,
                None => largest_simplex_search(&model, &d, &x)?,
            };
            emit_json(out, &json!({ "divisor": render::class(&d), "lambda": render::scalar(&lambda) }), stdout)?;
        }
        Command::Nefcone { model, out } => {
            let model = load_model(&model.model)?;
            let nef = nef_cone(&model)?;
            let v = json!({
                "basis": model.basis_labels,
                "rays": nef.generators.iter().map(render::class).collect::<Vec<_>>(),
                "facet_normals": nef.facet_normals.iter().map(render::class).collect::<Vec<_>>(),
            });
            emit_json(out, &v, stdout)?;
        }
        Command::Freemult { d, out } => {
            let (model, b) = divisor(d)?;
            let nef = nef_cone(&model)?;
            let m = free_multiple(&model, &nef, &b)?;
            emit_json(out, &json!({ "b": render::class(&b), "m": m.to_string() }), stdout)?;
        }
        Command::Genericbound { deg, target, exclude_q1, out } => {
            let query = GenericBoundQuery {
                degree: rational_arg("deg", deg)?,
                target: rational_arg("target", target)?,
                exclude_q1: *exclude_q1,
            };
            let r = generic_seshadri_bound(&query)?;
            let v = json!({
                "degree": render::rational(&query.degree),
                "target": render::rational(&query.target),
                "exclude_q1": query.exclude_q1,
                "holds": r.holds,
                "witnesses": r.witnesses.iter().map(|(p, q)| json!([p.to_string(), q.to_string()])).collect::<Vec<_>>(),
            });
            emit_json(out, &v, stdout)?;
        }
        Command::Blowup { model, point, out } => {
            let model = load_model(&model.model)?;
            let x = load_point(point.point.as_deref(), &model)?;
            let bl = blow_up(&model, &x)?;
            emit(out.json.as_deref(), &models::to_json(&bl.model), stdout)?;
        }
        Command::Check { model, out } => {
            let model = load_model(&model.model)?;
            let reports = checks::run_suite(&model);
            let passed = reports.iter().all(|r| r.passed);
            let v = json!({
                "passed": passed,
                "checks": reports
                    .iter()
                    .map(|r| json!({ "name": r.name, "passed": r.passed, "cases": r.cases, "detail": r.detail }))
                    .collect::<Vec<_>>(),
            });
            emit_json(out, &v, stdout)?;
            if !passed {
                let failed: Vec<&str> = reports.iter().filter(|r| !r.passed).map(|r| r.name.as_str()).collect();
                return Err(locpos::Error::InvariantViolation(failed.join(", ")).into());
            }
        }
    }
    Ok(0)
}
