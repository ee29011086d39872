//! `xherm`: exact coefficient tables, identity verification suites, and
//! minimal-surface meshes from the command line.
//!
//! Three subcommands mirror the library's layers: `poly` prints or evaluates
//! family members, `verify` runs the identity suites with explicit
//! tolerances, and `surface` evaluates an immersed patch and writes it as
//! OBJ, CSV, or JSON. Identical invocations produce byte-identical output;
//! numeric fields use round-trip decimal formatting throughout.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use num_traits::Zero;
use serde::Serialize;
use xherm_core::series::{self, SeriesSolution};
use xherm_core::verify::{self, Report};
use xherm_core::weierstrass::{self, GridSpec, SurfaceMesh, WeierstrassParams};
use xherm_core::{exceptional, hermite, RationalPoly};

#[derive(Parser)]
#[command(
    name = "xherm",
    version,
    about = "Exceptional-Hermite polynomials, their differential equation, and the minimal surfaces they induce"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print exact coefficients of a family member, or evaluate it.
    Poly(PolyArgs),
    /// Run a verification suite and exit 0 only if every check passes.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Evaluate a surface patch and write the mesh.
    Surface(SurfaceArgs),
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Poly(args) => cmd_poly(&args),
        Command::Verify(cmd) => cmd_verify(cmd),
        Command::Surface(args) => cmd_surface(&args),
    }
}

/// Exit code for domain errors (as opposed to failed checks, which exit 1).
const DOMAIN_ERROR: u8 = 2;

fn domain_error(message: &str) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(DOMAIN_ERROR)
}

fn gap_error(err: impl std::fmt::Display) -> ExitCode {
    domain_error(&format!(
        "{err}; the family is indexed by 0, 3, 4, 5, … — degrees 1 and 2 \
         are the gaps left by the Wronskian construction"
    ))
}

// ---------------------------------------------------------------------------
// poly
// ---------------------------------------------------------------------------

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum PolyKind {
    /// Classical Hermite polynomial.
    Classical,
    /// Exceptional family member (Wronskian normalization).
    Xop,
    /// Exceptional family member (monic-style normalization).
    Hhat,
    /// Series-normalized polynomial member.
    Alpha,
    /// Full series solution.
    Beta,
    /// Even series part.
    Mu,
    /// Odd series part.
    Nu,
}

#[derive(Args)]
#[command(group = ArgGroup::new("output").required(true).args(["coeffs", "eval"]))]
struct PolyArgs {
    /// Which family member to produce.
    #[arg(long, value_enum)]
    kind: PolyKind,
    /// Degree parameter.
    #[arg(long)]
    n: u64,
    /// Print exact coefficients as JSON keyed by degree ("p/q" strings).
    #[arg(long)]
    coeffs: bool,
    /// Evaluate at a complex point and print "re im".
    #[arg(long, value_name = "RE[,IM]", value_parser = parse_complex, allow_hyphen_values = true)]
    eval: Option<Complex64>,
    /// Series truncation: highest power retained (non-terminating kinds).
    #[arg(long)]
    trunc: Option<usize>,
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let (re, im) = match s.split_once(',') {
        Some((a, b)) => (a, Some(b)),
        None => (s, None),
    };
    let re: f64 = re
        .trim()
        .parse()
        .map_err(|_| format!("invalid real part in {s:?}"))?;
    let im: f64 = match im {
        Some(b) => b
            .trim()
            .parse()
            .map_err(|_| format!("invalid imaginary part in {s:?}"))?,
        None => 0.0,
    };
    Ok(Complex64::new(re, im))
}

/// Exact coefficients as a JSON object keyed by degree, ascending.
fn coeff_json<'a>(terms: impl Iterator<Item = (u32, &'a xherm_core::Rational)>) -> String {
    let mut out = String::from("{");
    for (idx, (degree, coeff)) in terms.enumerate() {
        if idx > 0 {
            out.push(',');
        }
        let _ = write!(out, "\"{degree}\":\"{coeff}\"");
    }
    out.push('}');
    out
}

fn polynomial_member(kind: PolyKind, n: u64) -> Result<RationalPoly, ExitCode> {
    match kind {
        PolyKind::Classical => Ok(hermite::hermite(n)),
        PolyKind::Xop => exceptional::xop_polynomial(n).map_err(gap_error),
        PolyKind::Hhat => exceptional::hhat_polynomial(n).map_err(gap_error),
        PolyKind::Alpha => {
            let scale = series::m3(n).map_err(gap_error)?;
            let base = exceptional::hhat_polynomial(n).map_err(gap_error)?;
            Ok(base.scale(&scale))
        }
        _ => unreachable!("series kinds handled separately"),
    }
}

fn series_member(kind: PolyKind, n: u64, truncation: usize) -> SeriesSolution {
    match kind {
        PolyKind::Beta => series::beta(n, truncation),
        PolyKind::Mu => series::mu(n, truncation),
        PolyKind::Nu => series::nu(n, truncation),
        _ => unreachable!("polynomial kinds handled separately"),
    }
}

fn cmd_poly(args: &PolyArgs) -> ExitCode {
    let is_series_kind = matches!(args.kind, PolyKind::Beta | PolyKind::Mu | PolyKind::Nu);
    if !is_series_kind {
        let poly = match polynomial_member(args.kind, args.n) {
            Ok(p) => p,
            Err(code) => return code,
        };
        if args.coeffs {
            println!("{}", coeff_json(poly.terms()));
        } else if let Some(z) = args.eval {
            let value = poly.eval_complex(z);
            println!("{} {}", value.re, value.im);
        }
        return ExitCode::SUCCESS;
    }

    if args.coeffs {
        let probe = series_member(args.kind, args.n, series::default_truncation(args.n));
        if let Some(poly) = probe.to_polynomial() {
            println!("{}", coeff_json(poly.terms()));
            return ExitCode::SUCCESS;
        }
        let Some(truncation) = args.trunc else {
            return domain_error(
                "this member is a non-terminating series; pass --trunc to bound the listing",
            );
        };
        let solution = series_member(args.kind, args.n, truncation);
        let terms: Vec<(u32, xherm_core::Rational)> = solution
            .coefficients()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k as u32, c.clone()))
            .collect();
        println!("{}", coeff_json(terms.iter().map(|(k, c)| (*k, c))));
        return ExitCode::SUCCESS;
    }

    let z = args.eval.expect("clap group guarantees --eval here");
    let truncation = args
        .trunc
        .unwrap_or_else(|| series::truncation_for_radius(args.n, z.norm()));
    let solution = series_member(args.kind, args.n, truncation);
    let value = solution.eval(z);
    println!("{} {}", value.re, value.im);
    ExitCode::SUCCESS
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

#[derive(Copy, Clone, ValueEnum)]
enum GramChoice {
    Xop,
    Hhat,
    Mu,
    Nu,
}

impl From<GramChoice> for verify::GramKind {
    fn from(choice: GramChoice) -> Self {
        match choice {
            GramChoice::Xop => verify::GramKind::Xop,
            GramChoice::Hhat => verify::GramKind::HHat,
            GramChoice::Mu => verify::GramKind::Mu,
            GramChoice::Nu => verify::GramKind::Nu,
        }
    }
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Differential-equation residuals: exact for polynomial members,
    /// bounded for the gap solutions and a truncated series.
    Ode {
        #[arg(long, default_value_t = 7)]
        n_max: u64,
        /// Numeric tolerance for the gap-member residuals.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// Wronskian identities relating the series parts to the polynomials.
    Wronskian {
        #[arg(long, default_value_t = 7)]
        n_max: u64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// Exact coefficient identities (zero tolerance).
    Deltas {
        #[arg(long, default_value_t = 40)]
        k_max: u32,
        #[arg(long, default_value_t = 20)]
        n_max: u64,
        #[arg(long)]
        json: bool,
    },
    /// Orthogonality: Gram matrix diagonality and norms.
    Gram {
        #[arg(long, value_enum, default_value_t = GramChoice::Hhat)]
        kind: GramChoice,
        /// Comma-separated degree list.
        #[arg(long, value_delimiter = ',', default_value = "0,3,4,5,6,7")]
        indices: Vec<u64>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// First-order linear problem and its second-order reduction.
    Frame {
        #[arg(long, default_value_t = 3)]
        n_max: u64,
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// Discrete minimality of a generated surface mesh.
    Curvature {
        #[arg(long, default_value_t = 3)]
        n: u64,
        /// Grid resolution NU NV.
        #[arg(long, num_args = 2, default_values_t = [41usize, 41])]
        grid: Vec<usize>,
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Serialize)]
struct ReportEnvelope<'a> {
    schema: &'static str,
    params: serde_json::Value,
    report: &'a Report,
}

fn finish_report(report: &Report, json: bool, params: serde_json::Value) -> ExitCode {
    if json {
        let envelope = ReportEnvelope {
            schema: "xherm/1",
            params,
            report,
        };
        println!(
            "{}",
            serde_json::to_string(&envelope).expect("report serialization cannot fail")
        );
    } else {
        for check in &report.checks {
            let status = if check.passed { "pass" } else { "FAIL" };
            let tol = if check.tolerance == 0.0 {
                "exact".to_string()
            } else {
                format!("{:e}", check.tolerance)
            };
            println!(
                "{status}  {:<52}  worst {:>12}  tol {:>8}  {}",
                check.name,
                format!("{:e}", check.worst),
                tol,
                check.detail
            );
        }
        let failed = report.failures().count();
        if failed == 0 {
            println!("{} checks passed", report.checks.len());
        } else {
            println!("{failed} of {} checks FAILED", report.checks.len());
        }
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn cmd_verify(cmd: VerifyCommand) -> ExitCode {
    match cmd {
        VerifyCommand::Ode { n_max, tol, json } => match verify::ode_suite(n_max, tol) {
            Ok(report) => finish_report(
                &report,
                json,
                serde_json::json!({"suite": "ode", "n_max": n_max, "tol": tol}),
            ),
            Err(err) => domain_error(&err.to_string()),
        },
        VerifyCommand::Wronskian { n_max, tol, json } => {
            match verify::wronskian_suite(n_max, tol) {
                Ok(report) => finish_report(
                    &report,
                    json,
                    serde_json::json!({"suite": "wronskian", "n_max": n_max, "tol": tol}),
                ),
                Err(err) => domain_error(&err.to_string()),
            }
        }
        VerifyCommand::Deltas { k_max, n_max, json } => {
            let report = verify::delta_suite(k_max, n_max);
            finish_report(
                &report,
                json,
                serde_json::json!({"suite": "deltas", "k_max": k_max, "n_max": n_max}),
            )
        }
        VerifyCommand::Gram {
            kind,
            indices,
            tol,
            json,
        } => match verify::gram_suite(kind.into(), &indices, tol) {
            Ok(report) => finish_report(
                &report,
                json,
                serde_json::json!({"suite": "gram", "indices": indices, "tol": tol}),
            ),
            Err(err) => gap_error(err),
        },
        VerifyCommand::Frame { n_max, tol, json } => {
            let mut report = Report::default();
            let k1 = Complex64::new(1.0, 0.0);
            let k2 = Complex64::new(0.5, -0.3);
            for n in 0..=n_max {
                let params = WeierstrassParams {
                    n,
                    ..WeierstrassParams::default()
                };
                match verify::frame_suite(&params, k1, k2, tol) {
                    Ok(partial) => report.checks.extend(partial.checks),
                    Err(err) => return domain_error(&err.to_string()),
                }
            }
            finish_report(
                &report,
                json,
                serde_json::json!({"suite": "frame", "n_max": n_max, "tol": tol}),
            )
        }
        VerifyCommand::Curvature { n, grid, tol, json } => {
            let params = WeierstrassParams {
                n,
                ..WeierstrassParams::default()
            };
            let spec = GridSpec {
                nu: grid[0],
                nv: grid[1],
                ..GridSpec::default()
            };
            let mesh = match weierstrass::generate_mesh_with_threads(&params, &spec, thread_count())
            {
                Ok(mesh) => mesh,
                Err(err) => return domain_error(&err.to_string()),
            };
            let curvature = match verify::minimality_check(&mesh) {
                Ok(c) => c,
                Err(err) => return domain_error(&err.to_string()),
            };
            let mut report = Report::default();
            report.checks.push(verify::CheckResult {
                name: format!("curvature/minimality-defect/n={n}"),
                passed: curvature.max_normalized_h < tol,
                worst: curvature.max_normalized_h,
                tolerance: tol,
                detail: format!(
                    "median {:e}, {} interior vertices, {} excluded as degenerate",
                    curvature.median_normalized_h,
                    curvature.interior_count,
                    curvature.excluded_degenerate
                ),
            });
            finish_report(
                &report,
                json,
                serde_json::json!({"suite": "curvature", "n": n, "grid": grid, "tol": tol}),
            )
        }
    }
}

// ---------------------------------------------------------------------------
// surface
// ---------------------------------------------------------------------------

#[derive(Copy, Clone, ValueEnum)]
enum OutputFormat {
    Obj,
    Csv,
    Json,
}

#[derive(Args)]
struct SurfaceArgs {
    /// Degree parameter of the immersion data.
    #[arg(long)]
    n: u64,
    /// Grid resolution NU NV.
    #[arg(long, num_args = 2, default_values_t = [41usize, 41])]
    grid: Vec<usize>,
    /// Parameter rectangle X0 X1 Y0 Y1.
    #[arg(long, num_args = 4, allow_negative_numbers = true, default_values_t = [-1.0, 1.0, -1.0, 1.0])]
    domain: Vec<f64>,
    /// Integration basepoint.
    #[arg(long, value_name = "RE,IM", value_parser = parse_complex, default_value = "1,3")]
    xi0: Complex64,
    /// First integration constant of the immersion data.
    #[arg(long, default_value_t = 1.0)]
    c1: f64,
    /// Second integration constant of the immersion data.
    #[arg(long, default_value_t = 1.0)]
    c2: f64,
    /// Spectral scale (defaults to √π).
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Obj)]
    format: OutputFormat,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Worker count from `XHERM_THREADS`; absent or invalid means sequential.
fn thread_count() -> usize {
    std::env::var("XHERM_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&t| t >= 1)
        .unwrap_or(1)
}

fn write_obj(mesh: &SurfaceMesh) -> String {
    let mut out = String::new();
    for v in &mesh.vertices {
        let _ = writeln!(
            out,
            "v {} {} {}",
            v.position[0], v.position[1], v.position[2]
        );
    }
    for face in mesh.quad_faces() {
        let _ = writeln!(
            out,
            "f {} {} {} {}",
            face[0] + 1,
            face[1] + 1,
            face[2] + 1,
            face[3] + 1
        );
    }
    out
}

fn write_csv(mesh: &SurfaceMesh) -> String {
    let mut out = String::from("x,y,F1,F2,F3,err\n");
    for v in &mesh.vertices {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            v.u, v.v, v.position[0], v.position[1], v.position[2], v.quadrature_error
        );
    }
    out
}

#[derive(Serialize)]
struct MeshEnvelope<'a> {
    schema: &'static str,
    params: &'a WeierstrassParams,
    mesh: &'a SurfaceMesh,
}

fn cmd_surface(args: &SurfaceArgs) -> ExitCode {
    let (nu, nv) = (args.grid[0], args.grid[1]);
    if nu < 2 || nv < 2 {
        return domain_error("grid must be at least 2x2");
    }
    if args.domain[0] >= args.domain[1] || args.domain[2] >= args.domain[3] {
        return domain_error("domain must satisfy X0 < X1 and Y0 < Y1");
    }
    let params = WeierstrassParams {
        n: args.n,
        c1: args.c1,
        c2: args.c2,
        lambda: args.lambda.unwrap_or(xherm_core::special::SQRT_PI),
        xi0: args.xi0,
    };
    let spec = GridSpec {
        nu,
        nv,
        domain: [
            args.domain[0],
            args.domain[1],
            args.domain[2],
            args.domain[3],
        ],
    };
    let mesh = match weierstrass::generate_mesh_with_threads(&params, &spec, thread_count()) {
        Ok(mesh) => mesh,
        Err(err) => {
            eprintln!("error: surface evaluation failed: {err}");
            return ExitCode::FAILURE;
        }
    };
    let payload = match args.format {
        OutputFormat::Obj => write_obj(&mesh),
        OutputFormat::Csv => write_csv(&mesh),
        OutputFormat::Json => {
            let envelope = MeshEnvelope {
                schema: "xherm/1",
                params: &params,
                mesh: &mesh,
            };
            let mut text =
                serde_json::to_string(&envelope).expect("mesh serialization cannot fail");
            text.push('\n');
            text
        }
    };
    match &args.out {
        Some(path) => {
            if let Err(err) = fs::write(path, payload) {
                eprintln!("error: cannot write {}: {err}", path.display());
                return ExitCode::FAILURE;
            }
        }
        None => print!("{payload}"),
    }
    ExitCode::SUCCESS
}
