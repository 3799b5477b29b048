use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bfock::bargmann::{bargmann_coefficients, bargmann_direct, bargmann_sampled, FockFunction, TaylorCoeffs};
use bfock::fock::{fock_norm, modulation_norm, MixedNormSpec, NormVariant, WeightSpec};
use bfock::grid::{AxisGrid, PhaseGrid, ProductGrid, Signal};
use bfock::hermite::{hermite_expand, hermite_synthesize, HermiteExpansion};
use bfock::io::{self, NormRow, Space};
use bfock::stft::{gaussian_window, stft};
use bfock::verify::{run_suite, VerifyConfig, SUITES};
use bfock::{Complex64, Error, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Environment variable naming the default output directory.
const OUTPUT_DIR_VAR: &str = "BFOCK_OUTPUT_DIR";

#[derive(Parser, Debug)]
#[command(name = "bfock", version, about = "Bargmann transform, STFT and Fock-space norms")]
struct Cli {
    /// Directory for output files [default: $BFOCK_OUTPUT_DIR or .]
    #[arg(long, global = true)]
    output_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample a transform of a signal.
    Transform(TransformArgs),
    /// Compute a weighted mixed norm.
    Norm(NormArgs),
    /// Run a verification suite and write its JSON report.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TransformKind {
    Stft,
    Bargmann,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum NormKind {
    /// Modulation norm of a signal.
    Mod,
    /// Fock norm of its Bargmann transform.
    Fock,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VariantArg {
    XFirst,
    XiFirst,
}

#[derive(Args, Debug)]
struct GridArgs {
    /// Half width of the signal grid.
    #[arg(long, default_value_t = 8.0)]
    half_width: f64,
    /// Nodes of the signal grid per axis (odd).
    #[arg(long, default_value_t = 257)]
    n: usize,
    /// Half width of the phase-space grid per axis.
    #[arg(long)]
    phase_half_width: Option<f64>,
    /// Nodes of the phase-space grid per axis (odd).
    #[arg(long)]
    phase_n: Option<usize>,
    /// Highest Hermite degree kept when expanding a sampled signal
    /// [default: the largest the signal grid supports, at most 40].
    #[arg(long)]
    degree: Option<u32>,
}

#[derive(Args, Debug)]
struct TransformArgs {
    kind: TransformKind,
    /// hermite:k, gaussian, taylor:k, or a signal CSV / coefficient JSON path.
    #[arg(long)]
    input: String,
    /// `grid` for the phase-space grid, or a CSV of points with columns re,im.
    #[arg(long, default_value = "grid")]
    points: String,
    #[command(flatten)]
    grid: GridArgs,
    /// Output base path (extensions are added) [default: <output-dir>/<kind>].
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct NormArgs {
    kind: NormKind,
    #[arg(long)]
    input: String,
    /// Inner exponent (`inf` allowed).
    #[arg(long, default_value = "2", value_parser = parse_exponent)]
    p: f64,
    /// Outer exponent (`inf` allowed).
    #[arg(long, default_value = "2", value_parser = parse_exponent)]
    q: f64,
    #[arg(long, value_enum, default_value_t = VariantArg::XFirst)]
    variant: VariantArg,
    /// Weight σ_s; 0 is the unit weight.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    s: f64,
    /// Tabulated weight (phase-field descriptor JSON); overrides --s.
    #[arg(long)]
    weight_table: Option<PathBuf>,
    /// Moderateness order of the tabulated weight.
    #[arg(long, default_value_t = 0.0)]
    weight_order: f64,
    #[command(flatten)]
    grid: GridArgs,
    /// CSV the result row is appended to [default: <output-dir>/norms.csv].
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    suite: String,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Outer radius of the annulus for the covering suite.
    #[arg(long, default_value_t = 8.0)]
    rmax: f64,
    /// Report path [default: <output-dir>/verify_<suite>.json].
    #[arg(long)]
    output: Option<PathBuf>,
}

fn parse_exponent(s: &str) -> std::result::Result<f64, String> {
    match s.trim() {
        "inf" | "infinity" | "∞" => Ok(f64::INFINITY),
        t => t.parse::<f64>().map_err(|e| format!("{t:?}: {e}")),
    }
}

/// A resolved `--input`.
enum Source {
    Hermite(HermiteExpansion),
    Taylor(TaylorCoeffs),
    Samples(Signal),
}

fn parse_index(spec: &str, prefix: &str) -> Result<Option<u32>> {
    match spec.strip_prefix(prefix) {
        None => Ok(None),
        Some(k) => k
            .parse::<u32>()
            .map(Some)
            .map_err(|_| Error::InvalidArgument(format!("{spec:?}: expected {prefix}<non-negative integer>"))),
    }
}

fn read_source(spec: &str) -> Result<Source> {
    if spec == "gaussian" {
        return Ok(Source::Hermite(HermiteExpansion::basis(vec![0])));
    }
    if let Some(k) = parse_index(spec, "hermite:")? {
        return Ok(Source::Hermite(HermiteExpansion::basis(vec![k])));
    }
    if let Some(k) = parse_index(spec, "taylor:")? {
        return Ok(Source::Taylor(TaylorCoeffs::monomial(vec![k])));
    }
    let path = Path::new(spec);
    if !path.is_file() {
        return Err(Error::InvalidArgument(format!("input file not found: {}", path.display())));
    }
    let text = fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
    let ctx = |e: Error| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        Error::Json(j) => Error::Parse(format!("{}: {j}", path.display())),
        other => other,
    };
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
        let (table, space) = io::coeffs_from_json(&text).map_err(ctx)?;
        Ok(match space {
            Space::Hermite => Source::Hermite(table.into()),
            Space::Fock => Source::Taylor(TaylorCoeffs::from_table(table)),
        })
    } else {
        Ok(Source::Samples(io::parse_signal_csv(&text).map_err(ctx)?))
    }
}

impl Source {
    fn dim(&self) -> usize {
        match self {
            Source::Hermite(e) => e.dim(),
            Source::Taylor(t) => t.dim(),
            Source::Samples(s) => s.dim(),
        }
    }

    fn signal(&self, grid: &GridArgs) -> Result<Signal> {
        match self {
            Source::Samples(s) => Ok(s.clone()),
            Source::Hermite(e) => hermite_synthesize(e, &signal_grid(grid, e.dim())?),
            Source::Taylor(t) => hermite_synthesize(&t.table().clone().into(), &signal_grid(grid, t.dim())?),
        }
    }

    fn fock(&self, grid: &GridArgs) -> Result<FockFunction> {
        Ok(FockFunction::Taylor(match self {
            Source::Hermite(e) => bargmann_coefficients(e),
            Source::Taylor(t) => t.clone(),
            Source::Samples(s) => bargmann_coefficients(&hermite_expand(s, grid.degree.unwrap_or_else(|| auto_degree(s)))?),
        }))
    }
}

/// Largest degree with `√(2N) + 4` inside the narrowest axis, capped at 40.
fn auto_degree(s: &Signal) -> u32 {
    let hw = s.grid().axes().iter().map(|a| a.half_width()).fold(f64::INFINITY, f64::min);
    let n = ((hw - 4.0).max(0.0).powi(2) / 2.0).floor();
    (n as u32).min(40)
}

fn signal_grid(g: &GridArgs, dim: usize) -> Result<ProductGrid> {
    let ax = AxisGrid::new(g.half_width, g.n)?;
    ProductGrid::new(vec![ax; dim])
}

fn phase_grid(g: &GridArgs, dim: usize, half_width: f64, n: usize) -> Result<PhaseGrid> {
    PhaseGrid::square(dim, g.phase_half_width.unwrap_or(half_width), g.phase_n.unwrap_or(n))
}

fn output_dir(cli: &Cli) -> PathBuf {
    cli.output_dir
        .clone()
        .or_else(|| std::env::var_os(OUTPUT_DIR_VAR).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}

fn ensure_parent(path: &Path) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)
            .map_err(|e| Error::InvalidArgument(format!("cannot create output directory {}: {e}", parent.display())))?;
    }
    Ok(())
}

fn read_points(path: &Path, dim: usize) -> Result<Vec<Vec<Complex64>>> {
    if dim != 1 {
        return Err(Error::InvalidArgument("point files are supported for d = 1 only".into()));
    }
    let text = fs::read_to_string(path).map_err(|_| Error::InvalidArgument(format!("points file not found: {}", path.display())))?;
    Ok(io::parse_points_csv(&text)?.into_iter().map(|z| vec![z]).collect())
}

fn cmd_transform(cli: &Cli, args: &TransformArgs) -> Result<ExitCode> {
    let src = read_source(&args.input)?;
    let dim = src.dim();
    let base = args.output.clone().unwrap_or_else(|| {
        output_dir(cli).join(match args.kind {
            TransformKind::Stft => "stft",
            TransformKind::Bargmann => "bargmann",
        })
    });
    ensure_parent(&base)?;
    let f = src.signal(&args.grid)?;
    match (args.kind, args.points.as_str()) {
        (TransformKind::Stft, "grid") => {
            let pg = phase_grid(&args.grid, dim, 8.0, 65)?;
            let w = gaussian_window(dim, f.grid())?;
            let (json, csv) = io::write_phase_field(&stft(&f, &w, &pg)?, &base)?;
            println!("{}\n{}", json.display(), csv.display());
        }
        (TransformKind::Bargmann, "grid") => {
            let pg = phase_grid(&args.grid, dim, 4.0, 33)?;
            let (json, csv) = io::write_phase_field(&bargmann_sampled(&f, &pg)?, &base)?;
            println!("{}\n{}", json.display(), csv.display());
        }
        (TransformKind::Bargmann, file) => {
            let pts = read_points(Path::new(file), dim)?;
            let values = bargmann_direct(&f, &pts)?;
            let mut out = String::from("z_re,z_im,re,im\n");
            for (p, v) in pts.iter().zip(&values) {
                out.push_str(&format!("{:?},{:?},{:?},{:?}\n", p[0].re, p[0].im, v.re, v.im));
            }
            let path = base.with_extension("csv");
            fs::write(&path, out)?;
            println!("{}", path.display());
        }
        (TransformKind::Stft, _) => {
            return Err(Error::InvalidArgument("stft supports --points grid only".into()));
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// `v` with 12 significant digits.
fn significant(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let exp = v.abs().log10().floor() as i32;
    if (-4..12).contains(&exp) {
        format!("{:.*}", (11 - exp).max(0) as usize, v)
    } else {
        format!("{v:.11e}")
    }
}

fn cmd_norm(cli: &Cli, args: &NormArgs) -> Result<ExitCode> {
    let variant = match args.variant {
        VariantArg::XFirst => NormVariant::XFirst,
        VariantArg::XiFirst => NormVariant::XiFirst,
    };
    let spec = MixedNormSpec::new(args.p, args.q, variant)?;
    if !args.s.is_finite() {
        return Err(Error::InvalidArgument(format!("weight exponent must be finite, got {}", args.s)));
    }
    let weight = match &args.weight_table {
        Some(path) => {
            if !path.is_file() {
                return Err(Error::InvalidArgument(format!("weight table not found: {}", path.display())));
            }
            WeightSpec::tabulated(io::read_phase_field(path)?, args.weight_order)?
        }
        None if args.s == 0.0 => WeightSpec::unit(),
        None => WeightSpec::sigma(args.s),
    };
    let src = read_source(&args.input)?;
    let pg = phase_grid(&args.grid, src.dim(), 12.0, 97)?;
    let (name, value) = match args.kind {
        NormKind::Mod => ("mod", modulation_norm(&src.signal(&args.grid)?, &weight, &spec, &pg)?),
        NormKind::Fock => ("fock", fock_norm(&src.fock(&args.grid)?, &weight, &spec, &pg)?),
    };
    println!("{}", significant(value));
    let csv = args.csv.clone().unwrap_or_else(|| output_dir(cli).join("norms.csv"));
    ensure_parent(&csv)?;
    let row = NormRow { name: name.into(), p: args.p, q: args.q, weight: weight.label(), value };
    io::append_norm_row(&csv, &row)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(cli: &Cli, args: &VerifyArgs) -> Result<ExitCode> {
    if !SUITES.contains(&args.suite.as_str()) {
        return Err(Error::InvalidArgument(format!("unknown suite {:?}; known suites: {}", args.suite, SUITES.join(", "))));
    }
    let cfg = VerifyConfig { seed: args.seed, r_max: args.rmax };
    let report = run_suite(&args.suite, &cfg)?;
    let json = report.to_json()?;
    let path = args.output.clone().unwrap_or_else(|| output_dir(cli).join(format!("verify_{}.json", args.suite)));
    ensure_parent(&path)?;
    fs::write(&path, format!("{json}\n"))?;
    println!("{json}");
    for c in report.failed() {
        eprintln!("FAIL {}: measured {:e} > tolerance {:e}", c.name, c.measured, c.tolerance);
    }
    Ok(if report.all_passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Transform(a) => cmd_transform(cli, a),
        Command::Norm(a) => cmd_norm(cli, a),
        Command::Verify(a) => cmd_verify(cli, a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    std::panic::set_hook(Box::new(|info| log::debug!("{info}")));
    match std::panic::catch_unwind(|| run(&cli)) {
        Ok(Ok(code)) => code,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 3 } else { 2 })
        }
        Err(_) => {
            eprintln!("error: internal failure");
            ExitCode::from(3)
        }
    }
}
