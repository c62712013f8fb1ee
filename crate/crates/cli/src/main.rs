use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use design_curves::assembly::{
    approximate_design, build_mst, tree_constants, ApproxReport, SpanningTree, TreeEdge,
};
use design_curves::design_sets::{builtin_set, verify_weighted_design_set, WeightedDesignSet};
use design_curves::hybrid::{
    ehler_first, ehler_second, gon_split_hybrid, konig_hybrid, verify_hybrid, HybridDesign, HybridRecord,
};
use design_curves::projective::{
    builtin_projective_set, fiber_curve, verify_projective_design, ProjectiveDesignSet,
};
use design_curves::sphere::Curve;
use design_curves::weighted::{
    build_wxm_with, explicit_s2, explicit_s3, verify_weighted_curve, wxm_with_length, HeightProfile,
    PhaseFunction, RotationPath,
};
use design_curves::{DesignReport, Error, DESIGN_TOLERANCE};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;
const TOL_ENV: &str = "DESIGN_CURVES_TOL";

/// Construct and certify weighted and approximate spherical design curves.
#[derive(Parser, Debug)]
#[command(name = "design-curves", version)]
struct Cli {
    /// Pass tolerance for verification (default 1e-9, or $DESIGN_CURVES_TOL).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Write the JSON report (or CSV) here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build w_{X,M} from a design set on S^{d-1}.
    GenWeighted(WeightedArgs),
    /// The explicit weighted (2t-1)-design curve on S^2.
    GenExplicitS2(ExplicitS2Args),
    /// The explicit weighted design curve on S^3.
    GenExplicitS3(ExplicitS3Args),
    /// Assemble an approximate design cycle from a projective design.
    GenApprox(ApproxArgs),
    /// Verify a design set or projective design set at strength t.
    Verify(VerifyArgs),
    /// Minimal spanning tree and assembly constants of a projective set.
    Mst(MstArgs),
    /// Build and verify a hybrid design.
    Hybrid(HybridArgs),
    /// Write curve samples as CSV rows `s,x1,...,xD`.
    ExportSamples(ExportArgs),
    /// Summarize a JSON report written by another verb.
    Report(ReportArgs),
}

#[derive(Args, Debug)]
struct WeightedArgs {
    /// Builtin name or JSON path of a weighted design set.
    #[arg(long)]
    set: String,
    /// Constant rotation (`identity`) or a spin `spin:i,j,rate`.
    #[arg(long, default_value = "identity")]
    rotation: String,
    /// Spin in --plane so that the curve has this length.
    #[arg(long)]
    target_length: Option<f64>,
    /// Coordinate plane `i,j` of the length-targeting spin.
    #[arg(long, default_value = "0,1")]
    plane: String,
    /// Height profile of each piece.
    #[arg(long, value_enum, default_value_t = Profile::Linear)]
    profile: Profile,
    /// Verify the curve at this strength.
    #[arg(long)]
    verify: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Profile {
    Linear,
    Marginal,
}

impl From<Profile> for HeightProfile {
    fn from(p: Profile) -> Self {
        match p {
            Profile::Linear => HeightProfile::Linear,
            Profile::Marginal => HeightProfile::SphereMarginal,
        }
    }
}

#[derive(Args, Debug)]
struct ExplicitS2Args {
    #[arg(long)]
    t: usize,
    /// Phase `const:v` or `linear:a,b`.
    #[arg(long, default_value = "const:0")]
    theta1: PhaseFunction,
    #[arg(long)]
    verify: Option<usize>,
}

#[derive(Args, Debug)]
struct ExplicitS3Args {
    #[arg(long)]
    t: usize,
    #[arg(long, default_value = "const:pi/3")]
    theta1: PhaseFunction,
    #[arg(long, default_value = "const:0")]
    theta2: PhaseFunction,
    /// Use the fractional frequency 4πt literally (the curve does not close).
    #[arg(long)]
    strict: bool,
    #[arg(long)]
    verify: Option<usize>,
}

#[derive(Args, Debug)]
struct ApproxArgs {
    /// Builtin name (e.g. cp1-octahedron) or JSON path of a projective set.
    #[arg(long)]
    set: String,
    #[arg(long)]
    t: usize,
    #[arg(long)]
    delta: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Design set (builtin or path); projective sets are recognised by name
    /// (`cp1-...`, `coordinate-lines:n`) or by the `n` field of their JSON.
    #[arg(long)]
    set: String,
    #[arg(long)]
    t: usize,
}

#[derive(Args, Debug)]
struct MstArgs {
    #[arg(long)]
    set: String,
    /// Also report the gap length for this budget.
    #[arg(long)]
    delta: Option<f64>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum HybridKind {
    /// Single point, circle at height 1/3, rho = 1/4.
    Ehler1,
    /// Poles and equator, rho = 1/3.
    Ehler2,
    /// Fibers of a projective design replaced by (t+1)-gons.
    Konig,
    /// Remove a regular polygon from a design set and keep its circle.
    GonSplit,
}

#[derive(Args, Debug)]
struct HybridArgs {
    #[arg(long, value_enum)]
    kind: HybridKind,
    /// Projective set (konig) or design set (gon-split).
    #[arg(long)]
    set: Option<String>,
    #[arg(long)]
    t: Option<usize>,
    /// Fiber kept as the curve (konig).
    #[arg(long, default_value_t = 0)]
    y0: usize,
    /// Indices of the polygon members (gon-split), e.g. `0,2,1,3`.
    #[arg(long)]
    gon: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CurveKind {
    Weighted,
    ExplicitS2,
    ExplicitS3,
    Approx,
    Fiber,
}

#[derive(Args, Debug)]
struct ExportArgs {
    #[arg(long, value_enum)]
    curve: CurveKind,
    /// Design set (weighted), projective set (approx) or projective set
    /// whose first point gives the fiber (fiber).
    #[arg(long)]
    set: Option<String>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long, default_value = "const:0")]
    theta1: PhaseFunction,
    #[arg(long, default_value = "const:0")]
    theta2: PhaseFunction,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Profile::Linear)]
    profile: Profile,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    /// Sample uniformly in arc length instead of the curve parameter.
    #[arg(long)]
    by_arclength: bool,
}

#[derive(Args, Debug)]
struct ReportArgs {
    /// JSON report file.
    input: PathBuf,
}

/// Failure of a verb: message plus exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Io(_) => EXIT_IO,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn io_failure(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure {
        code: EXIT_IO,
        message: format!("{}: {e}", path.display()),
    }
}

/// Output of a verb and whether its verification passed.
struct Output {
    body: String,
    pass: bool,
}

impl Output {
    fn json<T: Serialize>(value: &T, pass: bool) -> Self {
        let mut body = serde_json::to_string_pretty(value).expect("reports serialize");
        body.push('\n');
        Output { body, pass }
    }
}

#[derive(Serialize)]
struct CurveReport {
    verb: &'static str,
    dimension: usize,
    segments: usize,
    closed: bool,
    length: f64,
    /// Spin rate chosen by length targeting.
    spin_rate: Option<f64>,
    report: Option<DesignReport>,
}

#[derive(Serialize)]
struct ApproxOutput {
    verb: &'static str,
    #[serde(flatten)]
    approx: ApproxReport,
    segments: usize,
    attempts: usize,
    report: DesignReport,
}

#[derive(Serialize)]
struct VerifyOutput {
    verb: &'static str,
    kind: &'static str,
    points: usize,
    report: DesignReport,
}

#[derive(Serialize)]
struct MstOutput {
    verb: &'static str,
    points: usize,
    root: usize,
    edges: Vec<TreeEdge>,
    #[serde(rename = "W")]
    w: f64,
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "M")]
    m: f64,
    delta: Option<f64>,
    delta_tilde: Option<f64>,
}

#[derive(Serialize)]
struct HybridOutput {
    verb: &'static str,
    design: HybridRecord,
    report: DesignReport,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let tol = tolerance(cli.tol)?;
    let out = match cli.command {
        Command::GenWeighted(a) => gen_weighted(a, tol)?,
        Command::GenExplicitS2(a) => {
            let curve = explicit_s2(a.t, a.theta1)?;
            curve_output("gen-explicit-s2", &curve, a.verify, None, tol)?
        }
        Command::GenExplicitS3(a) => {
            let curve = explicit_s3(a.t, a.theta1, a.theta2, a.strict)?;
            curve_output("gen-explicit-s3", &curve, a.verify, None, tol)?
        }
        Command::GenApprox(a) => gen_approx(a, tol)?,
        Command::Verify(a) => verify(a, tol)?,
        Command::Mst(a) => mst(a)?,
        Command::Hybrid(a) => hybrid(a, tol)?,
        Command::ExportSamples(a) => export(a)?,
        Command::Report(a) => report(a)?,
    };
    match &cli.out {
        Some(path) => std::fs::write(path, &out.body).map_err(|e| io_failure(path, e))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(out.body.as_bytes())
                .map_err(|e| io_failure(Path::new("<stdout>"), e))?;
        }
    }
    Ok(if out.pass { 0 } else { EXIT_FAIL })
}

fn tolerance(flag: Option<f64>) -> Result<f64, Failure> {
    let tol = match flag {
        Some(t) => t,
        None => match std::env::var(TOL_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| usage(format!("{TOL_ENV}={v} is not a number")))?,
            Err(_) => DESIGN_TOLERANCE,
        },
    };
    if !(tol >= 0.0 && tol.is_finite()) {
        return Err(usage(format!("tolerance {tol} must be a non-negative number")));
    }
    Ok(tol)
}

fn load_error(path: &Path, e: Error) -> Failure {
    match e {
        Error::Io(io) => io_failure(path, io),
        Error::Parse(m) => io_failure(path, m),
        other => io_failure(path, other),
    }
}

/// Specs that name a file rather than a builtin.
fn looks_like_path(spec: &str) -> bool {
    Path::new(spec).exists() || spec.contains('/') || spec.ends_with(".json")
}

fn weighted_set(spec: &str) -> Result<WeightedDesignSet, Failure> {
    let path = Path::new(spec);
    if looks_like_path(spec) {
        WeightedDesignSet::load(path).map_err(|e| load_error(path, e))
    } else {
        Ok(builtin_set(spec)?)
    }
}

fn projective_set(spec: &str) -> Result<ProjectiveDesignSet, Failure> {
    let path = Path::new(spec);
    if looks_like_path(spec) {
        ProjectiveDesignSet::load(path).map_err(|e| load_error(path, e))
    } else {
        Ok(builtin_projective_set(spec)?)
    }
}

fn is_projective(spec: &str) -> Result<bool, Failure> {
    let path = Path::new(spec);
    if looks_like_path(spec) {
        let text = std::fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
        let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| io_failure(path, e))?;
        Ok(value.get("n").is_some())
    } else {
        Ok(spec.starts_with("cp") || spec.starts_with("coordinate-lines"))
    }
}

fn pair(s: &str) -> Result<(usize, usize), Failure> {
    let bad = || usage(format!("`{s}`: expected two indices `i,j`"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn rotation(spec: &str, dim: usize) -> Result<RotationPath, Failure> {
    if spec == "identity" {
        return Ok(RotationPath::identity(dim));
    }
    let bad = || usage(format!("rotation `{spec}`: expected identity or spin:i,j,rate"));
    let rest = spec.strip_prefix("spin:").ok_or_else(bad)?;
    let parts: Vec<&str> = rest.split(',').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let i = parts[0].trim().parse().map_err(|_| bad())?;
    let j = parts[1].trim().parse().map_err(|_| bad())?;
    let rate = design_curves::weighted::parse_angle(parts[2])?;
    Ok(RotationPath::spin(dim, i, j, rate)?)
}

fn required<T>(value: Option<T>, flag: &str) -> Result<T, Failure> {
    value.ok_or_else(|| usage(format!("--{flag} is required here")))
}

fn curve_output(
    verb: &'static str,
    curve: &Curve,
    strength: Option<usize>,
    spin_rate: Option<f64>,
    tol: f64,
) -> Result<Output, Failure> {
    let report = strength.map(|t| verify_weighted_curve(curve, t, tol)).transpose()?;
    let pass = report.as_ref().map_or(true, |r| r.pass);
    let out = CurveReport {
        verb,
        dimension: curve.dim(),
        segments: curve.segments().len(),
        closed: curve.is_closed(),
        length: curve.length()?,
        spin_rate,
        report,
    };
    Ok(Output::json(&out, pass))
}

fn build_weighted(a: &WeightedArgs) -> Result<(Curve, Option<f64>), Failure> {
    let set = weighted_set(&a.set)?;
    match a.target_length {
        Some(target) => {
            let (curve, rate) = wxm_with_length(&set, target, pair(&a.plane)?, a.profile.into())?;
            Ok((curve, Some(rate)))
        }
        None => Ok((build_wxm_with(&set, rotation(&a.rotation, set.dim())?, a.profile.into())?, None)),
    }
}

fn gen_weighted(a: WeightedArgs, tol: f64) -> Result<Output, Failure> {
    let (curve, rate) = build_weighted(&a)?;
    curve_output("gen-weighted", &curve, a.verify, rate, tol)
}

fn gen_approx(a: ApproxArgs, tol: f64) -> Result<Output, Failure> {
    let y = projective_set(&a.set)?;
    let (assembly, approx, cert) = approximate_design(&y, a.t, a.delta, a.seed, tol)?;
    let pass = cert.pass && approx.simple;
    let out = ApproxOutput {
        verb: "gen-approx",
        approx,
        segments: assembly.curve.segments().len(),
        attempts: assembly.attempts,
        report: cert,
    };
    Ok(Output::json(&out, pass))
}

fn verify(a: VerifyArgs, tol: f64) -> Result<Output, Failure> {
    let (kind, points, report) = if is_projective(&a.set)? {
        let y = projective_set(&a.set)?;
        ("projective", y.len(), verify_projective_design(&y, a.t, tol))
    } else {
        let x = weighted_set(&a.set)?;
        ("set", x.len(), verify_weighted_design_set(&x, a.t, tol))
    };
    let pass = report.pass;
    let out = VerifyOutput {
        verb: "verify",
        kind,
        points,
        report,
    };
    Ok(Output::json(&out, pass))
}

fn mst(a: MstArgs) -> Result<Output, Failure> {
    let y = projective_set(&a.set)?;
    let tree: SpanningTree = build_mst(&y)?;
    let n = tree.max_degree();
    let m = 2.0 * PI * (y.len() - 1) as f64 / n as f64;
    let delta_tilde = a.delta.map(|d| tree_constants(&tree, d).map(|c| c.delta_tilde)).transpose()?;
    let out = MstOutput {
        verb: "mst",
        points: y.len(),
        root: tree.root,
        w: 2.0 * tree.total_weight(),
        n,
        m,
        edges: tree.edges,
        delta: a.delta,
        delta_tilde,
    };
    Ok(Output::json(&out, true))
}

fn build_hybrid(a: &HybridArgs, tol: f64) -> Result<(HybridDesign, usize), Failure> {
    Ok(match a.kind {
        HybridKind::Ehler1 => (ehler_first(), a.t.unwrap_or(2)),
        HybridKind::Ehler2 => (ehler_second(), a.t.unwrap_or(3)),
        HybridKind::Konig => {
            let t = required(a.t, "t")?;
            let y = projective_set(&required(a.set.clone(), "set")?)?;
            (konig_hybrid(&y, a.y0, t, tol)?, t)
        }
        HybridKind::GonSplit => {
            let t = required(a.t, "t")?;
            let x = weighted_set(&required(a.set.clone(), "set")?)?;
            let spec = required(a.gon.clone(), "gon")?;
            let gon = spec
                .split(',')
                .map(|s| s.trim().parse::<usize>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| usage(format!("--gon `{spec}`: expected comma-separated indices")))?;
            (gon_split_hybrid(&x, &gon, t, tol)?, t)
        }
    })
}

fn hybrid(a: HybridArgs, tol: f64) -> Result<Output, Failure> {
    let (h, t) = build_hybrid(&a, tol)?;
    let report = verify_hybrid(&h, t, tol)?;
    let pass = report.pass;
    let out = HybridOutput {
        verb: "hybrid",
        design: h.record()?,
        report,
    };
    Ok(Output::json(&out, pass))
}

fn export_curve(a: &ExportArgs) -> Result<Curve, Failure> {
    Ok(match a.curve {
        CurveKind::Weighted => {
            let set = weighted_set(&required(a.set.clone(), "set")?)?;
            build_wxm_with(&set, RotationPath::identity(set.dim()), a.profile.into())?
        }
        CurveKind::ExplicitS2 => explicit_s2(required(a.t, "t")?, a.theta1.clone())?,
        CurveKind::ExplicitS3 => explicit_s3(required(a.t, "t")?, a.theta1.clone(), a.theta2.clone(), false)?,
        CurveKind::Approx => {
            let y = projective_set(&required(a.set.clone(), "set")?)?;
            let t = required(a.t, "t")?;
            let delta = required(a.delta, "delta")?;
            approximate_design(&y, t, delta, a.seed, DESIGN_TOLERANCE)?.0.curve
        }
        CurveKind::Fiber => {
            let y = projective_set(&required(a.set.clone(), "set")?)?;
            fiber_curve(&y.points()[0])
        }
    })
}

fn export(a: ExportArgs) -> Result<Output, Failure> {
    if a.samples < 2 {
        return Err(usage("--samples must be at least 2"));
    }
    let curve = export_curve(&a)?;
    let samples = if a.by_arclength {
        curve.sample_by_arclength(a.samples)?
    } else {
        curve.sample_by_param(a.samples)
    };
    let mut body = String::from("s");
    for i in 1..=curve.dim() {
        write!(body, ",x{i}").unwrap();
    }
    body.push('\n');
    for (s, p) in samples {
        write!(body, "{s:.16e}").unwrap();
        for x in p.coords() {
            write!(body, ",{x:.16e}").unwrap();
        }
        body.push('\n');
    }
    Ok(Output { body, pass: true })
}

fn report(a: ReportArgs) -> Result<Output, Failure> {
    let text = std::fs::read_to_string(&a.input).map_err(|e| io_failure(&a.input, e))?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| io_failure(&a.input, e))?;
    let design = value.get("report").cloned().unwrap_or_else(|| value.clone());
    let parsed: Option<DesignReport> = serde_json::from_value(design).ok();
    let mut body = String::new();
    if let Some(verb) = value.get("verb").and_then(|v| v.as_str()) {
        writeln!(body, "verb: {verb}").unwrap();
    }
    for key in ["length", "eps_apriori", "eps_empirical", "simple", "W"] {
        if let Some(v) = value.get(key) {
            writeln!(body, "{key}: {v}").unwrap();
        }
    }
    let pass = match parsed {
        Some(r) => {
            writeln!(body, "strength: {}", r.strength).unwrap();
            writeln!(body, "monomials: {}", r.defects.len()).unwrap();
            writeln!(body, "max defect: {:e}", r.max_defect).unwrap();
            if let Some(w) = &r.worst {
                writeln!(body, "worst monomial: {:?}", w.exponents()).unwrap();
            }
            writeln!(body, "tolerance: {:e}", r.tolerance).unwrap();
            writeln!(body, "result: {}", if r.pass { "pass" } else { "fail" }).unwrap();
            r.pass
        }
        None => {
            writeln!(body, "no design report found").unwrap();
            true
        }
    };
    Ok(Output { body, pass })
}
