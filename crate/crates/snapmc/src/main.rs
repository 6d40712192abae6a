//! Command-line interface: simulation, corruption, duplicate remedies,
//! intensity and K-function estimation, contrast fitting, replication
//! studies, delta sweeps, and SVG figure emission.
//!
//! Exit codes: 0 success, 2 configuration/input error, 3 numerical failure,
//! 4 I/O error.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use snapmc::error::{Error, Result};
use snapmc::estimation::{self, fit, ContrastConfig, MethodLabel, OptimizerSpec, ParamBounds};
use snapmc::geometry::{Partition, Point, PointPattern, Window};
use snapmc::harness::{
    self, IntensitySpec, PlotParam, ScenarioConfig, StudySummary,
};
use snapmc::intensity::{
    constant_intensity, default_bandwidth_candidates, kernel_intensity_adaptive,
    kernel_intensity_fixed, select_bandwidth_cvl,
};
use snapmc::io;
use snapmc::kfunction::{default_r_grid, k_hom, k_inhom};
use snapmc::simulate::{corrupt, simulate_lgcp, CorruptionSpec, CovarianceParams};

#[derive(Parser)]
#[command(
    name = "snapmc",
    version,
    about = "Duplicate-robust minimum-contrast inference for spatial point patterns"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Simulate an LGCP point pattern from a scenario and write it as CSV
    Simulate(SimulateArgs),
    /// Snap a share of points to partition centroids
    Corrupt(CorruptArgs),
    /// Method I: delete all but one point per duplicated location
    Dedup(DedupArgs),
    /// Method II: jitter duplicated points by U(-d, d) offsets
    Jitter(JitterArgs),
    /// Method III: redistribute duplicated points inside their cells
    Redistribute(RedistributeArgs),
    /// Estimate a first-order intensity surface
    Intensity(IntensityArgs),
    /// Estimate the K-function
    Kest(KestArgs),
    /// Fit (phi, sigma2) by (modified) minimum contrast on a K estimate
    Fit(FitArgs),
    /// Run a replication study and write fit rows plus a summary
    Study(StudyArgs),
    /// MMC fits across a grid of delta values
    DeltaSweep(DeltaSweepArgs),
    /// Print the rule-of-thirds delta for a cell area or partition
    DeltaRule(DeltaRuleArgs),
    /// Render SVG figures from study outputs
    Plot(PlotArgs),
}

#[derive(Args)]
struct WindowOpt {
    /// observation window as X0,X1,Y0,Y1 (falls back to the file's
    /// `# window` comment when omitted)
    #[arg(long, value_parser = parse_window)]
    window: Option<Window>,
}

#[derive(Args)]
struct SimulateArgs {
    /// preset label (H.1-H.3, IH1.1-IH1.3, IH2.1-IH2.3)
    #[arg(long, conflicts_with = "config")]
    scenario: Option<String>,
    /// TOML scenario file
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// simulation grid override: NX NY
    #[arg(long, num_args = 2, value_names = ["NX", "NY"])]
    grid: Option<Vec<usize>>,
    /// simulate a homogeneous Poisson reference with this expected count
    /// instead of the scenario's LGCP
    #[arg(long)]
    poisson: Option<f64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct CorruptArgs {
    #[arg(long, value_name = "FILE")]
    input: PathBuf,
    #[command(flatten)]
    window: WindowOpt,
    /// partition: grid:NX:NY, tess:CELLS:SEED, or a JSON file path
    #[arg(long)]
    partition: String,
    #[arg(long)]
    fraction: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct DedupArgs {
    #[arg(long, value_name = "FILE")]
    input: PathBuf,
    #[command(flatten)]
    window: WindowOpt,
    /// duplicate grouping tolerance (default: 1e-9 of the window scale)
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct JitterArgs {
    #[arg(long, value_name = "FILE")]
    input: PathBuf,
    #[command(flatten)]
    window: WindowOpt,
    /// jitter radius d
    #[arg(short = 'd', long = "radius", default_value_t = 25.0)]
    radius: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct RedistributeArgs {
    #[arg(long, value_name = "FILE")]
    input: PathBuf,
    #[command(flatten)]
    window: WindowOpt,
    #[arg(long)]
    partition: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct IntensityArgs {
    #[arg(long, value_name = "FILE")]
    input: PathBuf,
    #[command(flatten)]
    window: WindowOpt,
    /// constant | fixed:H | adaptive:H0 | adaptive:cvl
    #[arg(long, default_value = "constant")]
    method: String,
    /// evaluation grid: NX NY
    #[arg(long, num_args = 2, value_names = ["NX", "NY"], default_values_t = [256, 256])]
    grid: Vec<usize>,
    /// write the raster in points-per-area units (kernel density times N)
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct KestArgs {
    #[arg(long, value_name = "FILE")]
    input: PathBuf,
    #[command(flatten)]
    window: WindowOpt,
    /// hom | inhom
    #[arg(long, default_value = "hom")]
    variant: String,
    /// intensity raster (required for inhom)
    #[arg(long)]
    lambda: Option<PathBuf>,
    /// upper distance bound (default: quarter of the shorter window side)
    #[arg(long)]
    rmax: Option<f64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct FitArgs {
    /// K-estimate CSV
    #[arg(long, value_name = "FILE")]
    input: PathBuf,
    /// contrast lower bound (0 = plain minimum contrast)
    #[arg(long, default_value_t = 0.0)]
    delta: f64,
    /// contrast upper bound (default: the K grid maximum)
    #[arg(long)]
    rmax: Option<f64>,
    /// scenario column for the output row
    #[arg(long, default_value = "custom")]
    label: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct StudyArgs {
    #[arg(long, conflicts_with = "config")]
    scenario: Option<String>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// comma-separated corruption fractions
    #[arg(long)]
    fractions: Option<String>,
    /// comma-separated subset of MC,MC-I,MC-II,MC-III,MMC
    #[arg(long)]
    methods: Option<String>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    rmax: Option<f64>,
    /// worker threads (default: all cores)
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// re-derive the fixed kernel bandwidth by RED grid search before running
    #[arg(long)]
    red_search: bool,
    /// comma-separated bandwidth candidates for --red-search
    #[arg(long)]
    red_candidates: Option<String>,
    /// replications per candidate during --red-search
    #[arg(long, default_value_t = 20)]
    red_reps: usize,
    /// row CSV path; the summary is written alongside as <out>.summary.csv
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct DeltaSweepArgs {
    #[arg(long, conflicts_with = "config")]
    scenario: Option<String>,
    #[arg(long)]
    config: Option<PathBuf>,
    /// delta grid: START:STOP:STEP or comma-separated values
    #[arg(long, default_value = "0:70:5")]
    deltas: String,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    fractions: Option<String>,
    #[arg(long, default_value_t = 0)]
    workers: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct DeltaRuleArgs {
    /// mean cell area
    #[arg(long, conflicts_with = "partition")]
    cell_area: Option<f64>,
    /// partition spec (grid:NX:NY, tess:CELLS:SEED, or JSON path); needs --window
    #[arg(long)]
    partition: Option<String>,
    #[command(flatten)]
    window: WindowOpt,
}

#[derive(Args)]
struct PlotArgs {
    #[command(subcommand)]
    kind: PlotKind,
}

#[derive(Subcommand)]
enum PlotKind {
    /// Overlay K-function curves from estimate CSVs
    Kcurves {
        /// K-estimate CSV files
        files: Vec<PathBuf>,
        #[arg(long, default_value = "K-function estimates")]
        title: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Quantile bars per method and corruption level from a summary CSV
    Summary {
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
        /// phi | sigma2
        #[arg(long, default_value = "phi")]
        param: String,
        /// dashed reference line at the true value
        #[arg(long)]
        truth: Option<f64>,
        #[arg(long, default_value = "study summary")]
        title: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Median line and quantile bands from a delta-sweep CSV
    Sweep {
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
        #[arg(long)]
        corruption: f64,
        #[arg(long, default_value = "phi")]
        param: String,
        #[arg(long)]
        truth: Option<f64>,
        #[arg(long, default_value = "delta sweep")]
        title: String,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_window(s: &str) -> std::result::Result<Window, String> {
    let vals: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| format!("window must be X0,X1,Y0,Y1: {e}"))?;
    if vals.len() != 4 {
        return Err("window must have four comma-separated numbers".into());
    }
    Window::rect(vals[0], vals[1], vals[2], vals[3]).map_err(|e| e.to_string())
}

fn parse_partition_spec(spec: &str, window: &Window) -> Result<Partition> {
    if let Some(rest) = spec.strip_prefix("grid:") {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 2 {
            return Err(Error::Config(format!("grid partition must be grid:NX:NY, got {spec:?}")));
        }
        let nx = parts[0]
            .parse()
            .map_err(|_| Error::Config(format!("bad grid nx {:?}", parts[0])))?;
        let ny = parts[1]
            .parse()
            .map_err(|_| Error::Config(format!("bad grid ny {:?}", parts[1])))?;
        return Partition::regular_grid(window, nx, ny);
    }
    if let Some(rest) = spec.strip_prefix("tess:") {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 2 {
            return Err(Error::Config(format!(
                "tessellation partition must be tess:CELLS:SEED, got {spec:?}"
            )));
        }
        let cells: usize = parts[0]
            .parse()
            .map_err(|_| Error::Config(format!("bad cell count {:?}", parts[0])))?;
        let seed: u64 = parts[1]
            .parse()
            .map_err(|_| Error::Config(format!("bad seed {:?}", parts[1])))?;
        use rand::Rng;
        let b = window.bbox();
        let mut rng = snapmc::rng::rng_from_seed(seed);
        let seeds: Vec<Point> = (0..cells)
            .map(|_| Point::new(rng.random_range(b.x0..b.x1), rng.random_range(b.y0..b.y1)))
            .collect();
        return Partition::dirichlet(window, &seeds);
    }
    io::read_partition(Path::new(spec), window)
}

fn parse_list(s: &str, what: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("{what}: bad number {t:?}")))
        })
        .collect()
}

fn parse_deltas(s: &str) -> Result<Vec<f64>> {
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::Config(format!(
                "delta range must be START:STOP:STEP, got {s:?}"
            )));
        }
        let start: f64 = parts[0]
            .parse()
            .map_err(|_| Error::Config(format!("bad delta start {:?}", parts[0])))?;
        let stop: f64 = parts[1]
            .parse()
            .map_err(|_| Error::Config(format!("bad delta stop {:?}", parts[1])))?;
        let step: f64 = parts[2]
            .parse()
            .map_err(|_| Error::Config(format!("bad delta step {:?}", parts[2])))?;
        if !(step > 0.0) || stop < start {
            return Err(Error::Config("delta range must be increasing".into()));
        }
        let mut out = Vec::new();
        let mut v = start;
        while v <= stop + 1e-9 {
            out.push(v);
            v += step;
        }
        return Ok(out);
    }
    parse_list(s, "deltas")
}

fn load_scenario(label: &Option<String>, config: &Option<PathBuf>) -> Result<ScenarioConfig> {
    match (label, config) {
        (Some(l), None) => ScenarioConfig::preset(l),
        (None, Some(p)) => ScenarioConfig::from_toml(&std::fs::read_to_string(p)?),
        (None, None) => Err(Error::Config(
            "either --scenario LABEL or --config FILE is required".into(),
        )),
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    }
}

fn read_pattern(path: &Path, window: &WindowOpt) -> Result<PointPattern> {
    io::read_pattern(path, window.window.clone())
}

fn parse_param(s: &str) -> Result<PlotParam> {
    match s {
        "phi" => Ok(PlotParam::Phi),
        "sigma2" => Ok(PlotParam::Sigma2),
        other => Err(Error::Config(format!(
            "param must be phi or sigma2, got {other:?}"
        ))),
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::Simulate(a) => {
            let mut cfg = load_scenario(&a.scenario, &a.config)?;
            if let Some(g) = &a.grid {
                cfg.sim_grid = (g[0], g[1]);
            }
            if let Some(s) = a.seed {
                cfg.base_seed = s;
            }
            let window = cfg.window_obj()?;
            let pattern = match a.poisson {
                Some(expected) => {
                    harness::simulate_poisson_reference(&window, expected, cfg.base_seed)?
                }
                None => {
                    let mean = cfg.build_mean()?;
                    let cov = CovarianceParams::new(cfg.phi, cfg.sigma2)?;
                    simulate_lgcp(&mean, &cov, &window, cfg.sim_grid.0, cfg.sim_grid.1, cfg.base_seed)?
                }
            };
            let comments = vec![
                format!("# scenario {}", cfg.label),
                format!("# seed {}", cfg.base_seed),
            ];
            io::write_pattern(&a.out, &pattern, &comments)?;
            println!("wrote {} points to {}", pattern.len(), a.out.display());
        }
        Cmd::Corrupt(a) => {
            let pattern = read_pattern(&a.input, &a.window)?;
            let partition = parse_partition_spec(&a.partition, pattern.window())?;
            let spec = CorruptionSpec::new(partition, a.fraction, a.seed)?;
            let out = corrupt(&pattern, &spec)?;
            let dups = out.find_duplicates(out.default_duplicate_tol());
            io::write_pattern(
                &a.out,
                &out,
                &[
                    format!("# corrupted fraction {} seed {}", a.fraction, a.seed),
                    format!("# duplicated points {}", dups.duplicated_points()),
                ],
            )?;
            println!(
                "snapped {} of {} points; {} now share a location",
                (a.fraction * pattern.len() as f64).floor() as usize,
                pattern.len(),
                dups.duplicated_points()
            );
        }
        Cmd::Dedup(a) => {
            let pattern = read_pattern(&a.input, &a.window)?;
            let tol = a.tol.unwrap_or_else(|| pattern.default_duplicate_tol());
            let out = estimation::dedup(&pattern, tol);
            io::write_pattern(&a.out, &out, &[format!("# dedup tol {tol}")])?;
            println!("kept {} of {} points", out.len(), pattern.len());
        }
        Cmd::Jitter(a) => {
            let pattern = read_pattern(&a.input, &a.window)?;
            let out = estimation::jitter(&pattern, a.radius, a.seed)?;
            io::write_pattern(
                &a.out,
                &out,
                &[format!("# jitter d {} seed {}", a.radius, a.seed)],
            )?;
            println!(
                "jittered duplicates with d = {}; kept {} of {} points",
                a.radius,
                out.len(),
                pattern.len()
            );
        }
        Cmd::Redistribute(a) => {
            let pattern = read_pattern(&a.input, &a.window)?;
            let partition = parse_partition_spec(&a.partition, pattern.window())?;
            let out = estimation::redistribute(&pattern, &partition, a.seed)?;
            io::write_pattern(&a.out, &out, &[format!("# redistributed seed {}", a.seed)])?;
            println!("redistributed duplicates across {} cells", partition.len());
        }
        Cmd::Intensity(a) => {
            let pattern = read_pattern(&a.input, &a.window)?;
            let (nx, ny) = (a.grid[0], a.grid[1]);
            let n = pattern.len() as f64;
            let raster = match a.method.as_str() {
                "constant" => {
                    let lam = constant_intensity(&pattern)?;
                    snapmc::RasterField::constant(pattern.window().bbox(), nx, ny, lam)?
                }
                m if m.starts_with("fixed:") => {
                    let h: f64 = m[6..]
                        .parse()
                        .map_err(|_| Error::Config(format!("bad bandwidth in {m:?}")))?;
                    kernel_intensity_fixed(&pattern, h, nx, ny)?.scaled(n)
                }
                m if m.starts_with("adaptive:") => {
                    let rest = &m[9..];
                    let h0 = if rest == "cvl" {
                        let cands = default_bandwidth_candidates(pattern.window(), nx, ny);
                        let h0 = select_bandwidth_cvl(&pattern, &cands, nx, ny)?;
                        println!("CvL selected h0 = {h0}");
                        h0
                    } else {
                        rest.parse()
                            .map_err(|_| Error::Config(format!("bad bandwidth in {m:?}")))?
                    };
                    kernel_intensity_adaptive(&pattern, h0, h0, nx, ny)?
                        .field
                        .scaled(n)
                }
                other => {
                    return Err(Error::Config(format!(
                        "method must be constant, fixed:H, or adaptive:H0|cvl, got {other:?}"
                    )))
                }
            };
            io::write_raster(&a.out, &raster)?;
            println!("wrote {} x {} intensity raster to {}", nx, ny, a.out.display());
        }
        Cmd::Kest(a) => {
            let pattern = read_pattern(&a.input, &a.window)?;
            let r_max = match a.rmax {
                Some(r) => r,
                None => estimation::rmax_rule(pattern.window())?,
            };
            let grid = default_r_grid(r_max);
            let k = match a.variant.as_str() {
                "hom" => k_hom(&pattern, &grid)?,
                "inhom" => {
                    let path = a.lambda.as_ref().ok_or_else(|| {
                        Error::Config("inhom variant needs --lambda RASTER".into())
                    })?;
                    let lambda = io::read_raster(path)?;
                    k_inhom(&pattern, &lambda, &grid)?
                }
                other => {
                    return Err(Error::Config(format!(
                        "variant must be hom or inhom, got {other:?}"
                    )))
                }
            };
            io::write_kest(&a.out, &k, pattern.window())?;
            println!(
                "wrote {} K estimate on {} grid values to {}",
                k.variant,
                k.r.len(),
                a.out.display()
            );
        }
        Cmd::Fit(a) => {
            let k = io::read_kest(&a.input)?;
            let r_max = a.rmax.unwrap_or_else(|| k.r_max());
            let cfg = ContrastConfig::new(a.delta, r_max)?;
            let res = fit(&k, &cfg, &ParamBounds::default(), &OptimizerSpec::default())?;
            println!(
                "{}: phi = {:.4}, sigma2 = {:.4}, contrast = {:.6e}, converged = {} \
                 (delta -> {:.4}, r_max -> {:.4}, {} iterations over {} starts)",
                res.method_label,
                res.phi_hat,
                res.sigma2_hat,
                res.contrast_value,
                res.converged,
                res.delta_snapped,
                res.r_max_snapped,
                res.iterations,
                res.n_starts
            );
            if let Some(out) = a.out {
                let row = io::FitRow {
                    scenario: a.label.clone(),
                    method: res.method_label,
                    corruption: f64::NAN,
                    seed: 0,
                    phi_hat: res.phi_hat,
                    sigma2_hat: res.sigma2_hat,
                    contrast: res.contrast_value,
                    converged: res.converged,
                };
                std::fs::write(
                    &out,
                    io::rows_to_csv(
                        &[row],
                        &[format!(
                            "# delta {} r_max {}",
                            res.delta_snapped, res.r_max_snapped
                        )],
                    ),
                )?;
            }
        }
        Cmd::Study(a) => {
            let mut cfg = load_scenario(&a.scenario, &a.config)?;
            apply_study_overrides(
                &mut cfg, &a.reps, &a.seed, &a.fractions, &a.methods, &a.delta, &a.rmax,
            )?;
            if a.red_search {
                let candidates = match &a.red_candidates {
                    Some(s) => parse_list(s, "red candidates")?,
                    None => (0..12).map(|i| 180.0 + 20.0 * i as f64).collect(),
                };
                let (h, table) =
                    harness::red_bandwidth_search(&cfg, &candidates, a.red_reps, a.workers)?;
                for (cand, score) in &table {
                    println!("h = {cand}: RED of medians = {score:.4}");
                }
                println!("RED search selected h = {h}");
                cfg.intensity = IntensitySpec::FixedKernel { h };
            }
            let out = harness::run_scenario(&cfg, a.workers)?;
            std::fs::write(&a.out, io::rows_to_csv(&out.rows, &out.config_echo))?;
            let summary_path = summary_path(&a.out);
            std::fs::write(&summary_path, out.summary.to_csv(&out.config_echo))?;
            println!(
                "wrote {} rows to {} and the summary to {}",
                out.rows.len(),
                a.out.display(),
                summary_path.display()
            );
        }
        Cmd::DeltaSweep(a) => {
            let mut cfg = load_scenario(&a.scenario, &a.config)?;
            apply_study_overrides(&mut cfg, &a.reps, &a.seed, &a.fractions, &None, &None, &None)?;
            let deltas = parse_deltas(&a.deltas)?;
            let (table, echo) = harness::delta_sweep(&cfg, &deltas, a.workers)?;
            std::fs::write(&a.out, table.to_csv(&echo))?;
            println!(
                "wrote {} sweep rows ({} deltas) to {}",
                table.rows.len(),
                deltas.len(),
                a.out.display()
            );
        }
        Cmd::DeltaRule(a) => {
            let area = match (a.cell_area, &a.partition) {
                (Some(area), None) => area,
                (None, Some(spec)) => {
                    let window = a.window.window.clone().ok_or_else(|| {
                        Error::Config("--partition needs --window".into())
                    })?;
                    parse_partition_spec(spec, &window)?.mean_cell_area()
                }
                _ => {
                    return Err(Error::Config(
                        "pass exactly one of --cell-area or --partition".into(),
                    ))
                }
            };
            let delta = estimation::delta_rule(area)?;
            println!("{delta}");
        }
        Cmd::Plot(a) => run_plot(a)?,
    }
    Ok(())
}

fn summary_path(rows_path: &Path) -> PathBuf {
    let mut s = rows_path.as_os_str().to_owned();
    s.push(".summary.csv");
    PathBuf::from(s)
}

#[allow(clippy::too_many_arguments)]
fn apply_study_overrides(
    cfg: &mut ScenarioConfig,
    reps: &Option<usize>,
    seed: &Option<u64>,
    fractions: &Option<String>,
    methods: &Option<String>,
    delta: &Option<f64>,
    rmax: &Option<f64>,
) -> Result<()> {
    if let Some(r) = reps {
        cfg.reps = *r;
    }
    if let Some(s) = seed {
        cfg.base_seed = *s;
    }
    if let Some(f) = fractions {
        cfg.fractions = parse_list(f, "fractions")?;
    }
    if let Some(m) = methods {
        cfg.methods = m
            .split(',')
            .map(|t| t.trim().parse::<MethodLabel>())
            .collect::<Result<Vec<_>>>()?;
    }
    if let Some(d) = delta {
        cfg.delta = Some(*d);
    }
    if let Some(r) = rmax {
        cfg.r_max = Some(*r);
    }
    Ok(())
}

fn run_plot(args: PlotArgs) -> Result<()> {
    match args.kind {
        PlotKind::Kcurves { files, title, out } => {
            if files.is_empty() {
                println!("no input curves; nothing to plot");
                return Ok(());
            }
            let mut curves = Vec::new();
            for f in &files {
                let k = io::read_kest(f)?;
                let label = f
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| f.display().to_string());
                curves.push((label, k));
            }
            let refs: Vec<(String, &snapmc::kfunction::KEstimate)> = curves
                .iter()
                .map(|(l, k)| (l.clone(), k))
                .collect();
            std::fs::write(&out, harness::plot_k_curves(&title, &refs))?;
            println!("wrote {} curves to {}", refs.len(), out.display());
        }
        PlotKind::Summary {
            input,
            param,
            truth,
            title,
            out,
        } => {
            let summary = StudySummary::from_csv(&std::fs::read_to_string(&input)?)?;
            if summary.groups.is_empty() {
                println!("summary has no groups; nothing to plot");
                return Ok(());
            }
            let svg = harness::plot_summary_bars(&title, &summary, parse_param(&param)?, truth);
            std::fs::write(&out, svg)?;
            println!("wrote summary figure to {}", out.display());
        }
        PlotKind::Sweep {
            input,
            corruption,
            param,
            truth,
            title,
            out,
        } => {
            let table =
                harness::DeltaSweepTable::from_csv(&std::fs::read_to_string(&input)?)?;
            if table.rows.is_empty() {
                println!("sweep table is empty; nothing to plot");
                return Ok(());
            }
            let svg =
                harness::plot_delta_bands(&title, &table, corruption, parse_param(&param)?, truth);
            std::fs::write(&out, svg)?;
            println!("wrote sweep figure to {}", out.display());
        }
    }
    Ok(())
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
