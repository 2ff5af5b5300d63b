//! `shockstab`: classify planar shock fronts in two-dimensional isentropic
//! elastodynamics from the command line.
//!
//! Subcommands: `classify` one front, `scan` a parameter plane, `rh` solve
//! the jump conditions for a downstream state, `symmetrizer` build the
//! dissipativity certificate. Exit codes: 0 success, 2 invalid input,
//! 3 numerical failure.

mod config;
mod report;
mod scan;

use std::fs;
use std::io::{self, BufWriter, Read as IoRead, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::json;

use shockstab_core::symmetrizer::SymmetrizerBundle;
use shockstab_core::{
    classify_with_sweep_sink, dissipativity_probe, solve_rankine_hugoniot, ClassifyConfig,
    EquationOfState, MethodSelection, ShockParameters, SideState,
};

use config::ScanConfig;
use report::{write_scan_csv, SWEEP_HEADER};

#[derive(Parser)]
#[command(
    name = "shockstab",
    version,
    about = "Stability classification of planar shock fronts in 2D isentropic elastodynamics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a single front and print the verdict
    Classify(ClassifyArgs),
    /// Sweep a parameter grid and report a stability map
    Scan(ScanArgs),
    /// Solve the jump conditions: upstream state + downstream density -> front
    Rh(RhArgs),
    /// Build the dissipative symmetrizer and its positivity certificates
    Symmetrizer(SymmetrizerArgs),
}

#[derive(Args, Clone)]
struct FrontArgs {
    /// Downstream normal Mach number
    #[arg(long = "M", value_name = "M", allow_hyphen_values = true)]
    mach: f64,
    /// Density ratio across the front (downstream over upstream)
    #[arg(long = "R", value_name = "R", allow_hyphen_values = true)]
    density_ratio: f64,
    /// Scaled deformation gradient entry (row 1, column 1)
    #[arg(
        long = "F11",
        value_name = "X",
        default_value_t = 0.0,
        allow_hyphen_values = true
    )]
    f11: f64,
    /// Scaled deformation gradient entry (row 1, column 2)
    #[arg(
        long = "F12",
        value_name = "X",
        default_value_t = 0.0,
        allow_hyphen_values = true
    )]
    f12: f64,
    /// Scaled deformation gradient entry (row 2, column 1)
    #[arg(
        long = "F21",
        value_name = "X",
        default_value_t = 0.0,
        allow_hyphen_values = true
    )]
    f21: f64,
    /// Scaled deformation gradient entry (row 2, column 2)
    #[arg(
        long = "F22",
        value_name = "X",
        default_value_t = 0.0,
        allow_hyphen_values = true
    )]
    f22: f64,
    /// Upstream normal Mach number, when known
    #[arg(long = "M-minus", value_name = "M", allow_hyphen_values = true)]
    m_minus: Option<f64>,
    /// Admit a singular scaled deformation (gas-dynamics limit)
    #[arg(long)]
    allow_degenerate: bool,
}

impl FrontArgs {
    fn params(&self) -> Result<ShockParameters, CliError> {
        let f = [[self.f11, self.f12], [self.f21, self.f22]];
        let built = if self.allow_degenerate {
            ShockParameters::new_allow_degenerate(self.mach, self.density_ratio, f, self.m_minus)
        } else {
            ShockParameters::new(self.mach, self.density_ratio, f, self.m_minus)
        };
        built.map_err(CliError::from)
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    front: FrontArgs,
    /// Comma-separated methods: energy, lc, symmetrizer, spectral, or "all"
    #[arg(long, value_name = "LIST")]
    methods: Option<String>,
    /// Classification options as JSON (margin band, sweep grid, probe)
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Margin half-width treated as sign-indefinite
    #[arg(long, value_name = "X")]
    tol: Option<f64>,
    /// Write the report here instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
    /// Stream spectral sweep samples to this CSV file
    #[arg(long, value_name = "PATH")]
    sweep_out: Option<PathBuf>,
}

#[derive(Args)]
struct ScanArgs {
    /// Scan description (axes, fixed values, methods, output)
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Write the report here (overrides the config's output path)
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Report format (overrides the config's output format)
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Worker threads; 0 uses all cores. Output is identical either way.
    #[arg(long, value_name = "N", default_value_t = 0)]
    jobs: usize,
    /// Margin half-width treated as sign-indefinite
    #[arg(long, value_name = "X")]
    tol: Option<f64>,
    /// Admit singular scaled deformations on the grid
    #[arg(long)]
    allow_degenerate: bool,
}

#[derive(Args)]
struct RhArgs {
    /// Input JSON (upstream state, downstream density, pressure law);
    /// stdin when omitted
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Write the solution here instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Solve even when the scaled deformation is singular
    #[arg(long)]
    allow_degenerate: bool,
}

#[derive(Args)]
struct SymmetrizerArgs {
    #[command(flatten)]
    front: FrontArgs,
    /// Free parameter of the companion linearization (> 1)
    #[arg(long, value_name = "A", default_value_t = 2.0)]
    alpha: f64,
    /// Random directions for the dissipativity probe; 0 skips it
    #[arg(long, value_name = "N", default_value_t = 256)]
    probe_samples: usize,
    #[arg(long, value_name = "SEED", default_value_t = 0x5eed)]
    probe_seed: u64,
    /// Write the certificate here instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

/// Errors carrying their process exit code: 2 for invalid input, 3 for
/// numerical failure.
#[derive(Debug)]
enum CliError {
    Input(String),
    Numerical(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Numerical(m) => m,
        }
    }
}

impl From<shockstab_core::Error> for CliError {
    fn from(e: shockstab_core::Error) -> Self {
        if e.is_invalid_input() {
            CliError::Input(e.to_string())
        } else {
            CliError::Numerical(e.to_string())
        }
    }
}

fn read_input_error(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("cannot read {}: {e}", path.display()))
}

fn write_output(path: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, content)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{content}");
            io::stdout()
                .flush()
                .map_err(|e| CliError::Numerical(format!("stdout: {e}")))
        }
    }
}

fn load_classify_config(
    path: &Option<PathBuf>,
    methods: &Option<String>,
    default_methods: &str,
    tol: Option<f64>,
) -> Result<ClassifyConfig, CliError> {
    let mut cfg = match path {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| read_input_error(p, e))?;
            serde_json::from_str::<ClassifyConfig>(&text)
                .map_err(|e| CliError::Input(format!("bad config {}: {e}", p.display())))?
        }
        None => {
            let mut cfg = ClassifyConfig::default();
            cfg.methods = MethodSelection::parse(default_methods)?;
            cfg
        }
    };
    if let Some(list) = methods {
        cfg.methods = MethodSelection::parse(list)?;
    }
    if let Some(band) = tol {
        if !(band.is_finite() && band >= 0.0) {
            return Err(CliError::Input(format!(
                "--tol must be a finite nonnegative number, got {band}"
            )));
        }
        cfg.band = band;
    }
    Ok(cfg)
}

fn cmd_classify(args: &ClassifyArgs) -> Result<(), CliError> {
    let cfg = load_classify_config(&args.config, &args.methods, "energy,lc", args.tol)?;
    let params = args.front.params()?;

    let mut sweep_writer: Option<BufWriter<fs::File>> = match &args.sweep_out {
        Some(p) => {
            let file = fs::File::create(p)
                .map_err(|e| CliError::Input(format!("cannot write {}: {e}", p.display())))?;
            let mut w = BufWriter::new(file);
            writeln!(w, "{SWEEP_HEADER}").map_err(|e| CliError::Numerical(e.to_string()))?;
            Some(w)
        }
        None => None,
    };
    let mut sink_error: Option<io::Error> = None;
    let verdict = {
        let mut sink = |sample: shockstab_core::SweepSample| {
            if let (Some(w), None) = (sweep_writer.as_mut(), sink_error.as_ref()) {
                if let Err(e) = writeln!(w, "{}", report::sweep_row(&sample)) {
                    sink_error = Some(e);
                }
            }
        };
        classify_with_sweep_sink(&params, &cfg, &mut sink)?
    };
    if let Some(e) = sink_error {
        return Err(CliError::Numerical(format!("sweep stream: {e}")));
    }
    if let Some(mut w) = sweep_writer {
        w.flush()
            .map_err(|e| CliError::Numerical(format!("sweep stream: {e}")))?;
    }

    let content = match args.format {
        OutputFormat::Json => {
            let mut text = serde_json::to_string_pretty(&report::classify_json(&verdict))
                .expect("verdict serialization cannot fail");
            text.push('\n');
            text
        }
        OutputFormat::Csv => report::classify_csv(&verdict),
    };
    write_output(&args.out, &content)
}

fn cmd_scan(args: &ScanArgs) -> Result<(), CliError> {
    let text = fs::read_to_string(&args.config).map_err(|e| read_input_error(&args.config, e))?;
    let mut scan_cfg: ScanConfig = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("bad config {}: {e}", args.config.display())))?;
    scan_cfg.validate().map_err(CliError::Input)?;
    scan_cfg.allow_degenerate |= args.allow_degenerate;

    let mut classify_cfg = ClassifyConfig::default();
    classify_cfg.methods =
        MethodSelection::parse(scan_cfg.methods.as_deref().unwrap_or("energy,lc"))?;
    if let Some(grid) = &scan_cfg.grid_config {
        grid.validate()?;
        classify_cfg.grid = grid.clone();
    }
    if let Some(band) = scan_cfg.band.or(args.tol) {
        if !(band.is_finite() && band >= 0.0) {
            return Err(CliError::Input(format!(
                "margin band must be a finite nonnegative number, got {band}"
            )));
        }
        classify_cfg.band = band;
    }

    let out_path: Option<PathBuf> = args
        .out
        .clone()
        .or_else(|| scan_cfg.output.as_ref().and_then(|o| o.path.clone()));
    let format = args.format.unwrap_or_else(|| {
        match scan_cfg.output.as_ref().and_then(|o| o.format.as_deref()) {
            Some("json") => OutputFormat::Json,
            _ => OutputFormat::Csv,
        }
    });

    let result = scan::run_scan(&scan_cfg, &classify_cfg, args.jobs);

    let content = match format {
        OutputFormat::Csv => {
            let mut buf = Vec::new();
            write_scan_csv(&mut buf, &result).map_err(|e| CliError::Numerical(e.to_string()))?;
            String::from_utf8(buf).expect("csv output is ascii")
        }
        OutputFormat::Json => {
            let mut text = serde_json::to_string_pretty(&report::scan_report_json(&result))
                .expect("report serialization cannot fail");
            text.push('\n');
            text
        }
    };
    write_output(&out_path, &content)?;

    match result.abort {
        Some((index, message)) => Err(CliError::Numerical(format!(
            "scan stopped at point {index}: {message}"
        ))),
        None => Ok(()),
    }
}

/// Input schema for the jump-condition solver.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RhInput {
    upstream: SideState,
    rho_plus: f64,
    eos: EquationOfState,
}

fn cmd_rh(args: &RhArgs) -> Result<(), CliError> {
    let text = match &args.config {
        Some(p) => fs::read_to_string(p).map_err(|e| read_input_error(p, e))?,
        None => {
            let mut buf = String::new();
            io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| CliError::Input(format!("cannot read stdin: {e}")))?;
            buf
        }
    };
    let input: RhInput =
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("bad input: {e}")))?;
    let solution = solve_rankine_hugoniot(
        &input.upstream,
        input.rho_plus,
        &input.eos,
        args.allow_degenerate,
    )?;
    let mut content =
        serde_json::to_string_pretty(&solution).expect("solution serialization cannot fail");
    content.push('\n');
    write_output(&args.out, &content)
}

fn matrix6_json(m: &shockstab_core::symmetrizer::Matrix6) -> serde_json::Value {
    json!((0..6)
        .map(|i| (0..6).map(|j| m[(i, j)]).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

fn bundle_json(
    bundle: &SymmetrizerBundle,
    probe: Option<&shockstab_core::ProbeReport>,
) -> serde_json::Value {
    json!({
        "alpha": bundle.alpha,
        "certified": bundle.certified(),
        "h_min_eigenvalue": bundle.h_min_eigenvalue,
        "b0_tilde_min_eigenvalue": bundle.b0_tilde_min_eigenvalue,
        "lyapunov_residual": bundle.lyapunov_residual,
        "symmetry_defect": bundle.symmetry_defect,
        "g_max_real_part": bundle.g_max_real_part,
        "g_eigenvalues": bundle
            .quadratic
            .g_eigenvalues
            .iter()
            .map(|z| [z.re, z.im])
            .collect::<Vec<_>>(),
        "h": matrix6_json(&bundle.h),
        "probe": probe.map(|p| json!({
            "min_value": p.min_value,
            "max_identity_error": p.max_identity_error,
            "samples": p.samples,
        })),
    })
}

fn cmd_symmetrizer(args: &SymmetrizerArgs) -> Result<(), CliError> {
    let params = args.front.params()?;
    let scales = shockstab_core::derived_scales(&params)?;
    let g0 = shockstab_core::symmetrizer::Matrix6::identity();
    let bundle = shockstab_core::assemble_symmetrizer(&scales, args.alpha, &g0)?;
    let probe = if args.probe_samples > 0 {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(args.probe_seed);
        Some(dissipativity_probe(&bundle, args.probe_samples, &mut rng))
    } else {
        None
    };
    let mut content = serde_json::to_string_pretty(&bundle_json(&bundle, probe.as_ref()))
        .expect("certificate serialization cannot fail");
    content.push('\n');
    write_output(&args.out, &content)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Classify(args) => cmd_classify(args),
        Command::Scan(args) => cmd_scan(args),
        Command::Rh(args) => cmd_rh(args),
        Command::Symmetrizer(args) => cmd_symmetrizer(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
