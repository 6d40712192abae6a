//! Replication studies: simulate, corrupt, preprocess, estimate, fit, and
//! summarize, with per-replication seeds derived by counter so output is
//! identical for any worker count.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::estimation::{
    dedup, fit, jitter, redistribute, ContrastConfig, MethodLabel, OptimizerSpec, ParamBounds,
};
use crate::geometry::{Partition, PointPattern};
use crate::intensity::{
    default_bandwidth_candidates, kernel_intensity_adaptive, kernel_intensity_fixed, red,
    select_bandwidth_cvl,
};
use crate::io::FitRow;
use crate::kfunction::{default_r_grid, k_hom, k_inhom, KEstimate};
use crate::rng::derive_seed;
use crate::simulate::{corrupt, simulate_lgcp, CorruptionSpec, CovarianceParams, MeanModel};

use super::config::{IntensitySpec, ScenarioConfig};

/// Quantile probabilities reported everywhere: 5%, 25%, 50%, 75%, 95%.
pub const QUANTILE_PROBS: [f64; 5] = [0.05, 0.25, 0.5, 0.75, 0.95];

/// Linear-interpolation quantiles (the convention numpy uses by default),
/// so an external script recomputing them from the row CSV matches exactly.
pub fn quantiles(values: &[f64], probs: &[f64]) -> Vec<f64> {
    let mut v: Vec<f64> = values.iter().copied().filter(|x| x.is_finite()).collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    if v.is_empty() {
        return vec![f64::NAN; probs.len()];
    }
    probs
        .iter()
        .map(|&p| {
            let h = (v.len() - 1) as f64 * p;
            let lo = h.floor() as usize;
            let hi = h.ceil() as usize;
            let frac = h - lo as f64;
            v[lo] * (1.0 - frac) + v[hi] * frac
        })
        .collect()
}

/// Per (method, fraction) quantile summary.
#[derive(Clone, Debug, PartialEq)]
pub struct SummaryGroup {
    pub method: MethodLabel,
    pub corruption: f64,
    pub n: usize,
    pub converged: usize,
    pub phi_q: [f64; 5],
    pub sigma2_q: [f64; 5],
    /// RED of the medians against the configured truth
    pub red_of_medians: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct StudySummary {
    pub groups: Vec<SummaryGroup>,
}

impl StudySummary {
    pub fn group(&self, method: MethodLabel, corruption: f64) -> Option<&SummaryGroup> {
        self.groups
            .iter()
            .find(|g| g.method == method && (g.corruption - corruption).abs() < 1e-12)
    }

    pub fn to_csv(&self, comments: &[String]) -> String {
        let mut out = String::new();
        for c in comments {
            out.push_str(c);
            out.push('\n');
        }
        out.push_str(
            "method,corruption,n,converged_rate,phi_q05,phi_q25,phi_q50,phi_q75,phi_q95,\
             sig2_q05,sig2_q25,sig2_q50,sig2_q75,sig2_q95,red_median\n",
        );
        for g in &self.groups {
            let rate = g.converged as f64 / g.n as f64;
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                g.method,
                g.corruption,
                g.n,
                rate,
                g.phi_q[0],
                g.phi_q[1],
                g.phi_q[2],
                g.phi_q[3],
                g.phi_q[4],
                g.sigma2_q[0],
                g.sigma2_q[1],
                g.sigma2_q[2],
                g.sigma2_q[3],
                g.sigma2_q[4],
                g.red_of_medians,
            ));
        }
        out
    }
}

impl StudySummary {
    pub fn from_csv(text: &str) -> Result<StudySummary> {
        let mut groups = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with("method,") {
                continue;
            }
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 15 {
                return Err(Error::Parse(format!("summary row has {} fields", f.len())));
            }
            let num = |s: &str| -> Result<f64> {
                s.parse()
                    .map_err(|_| Error::Parse(format!("summary: bad number {s:?}")))
            };
            let n: usize = f[2]
                .parse()
                .map_err(|_| Error::Parse(format!("summary: bad count {:?}", f[2])))?;
            let rate = num(f[3])?;
            let mut phi_q = [0.0; 5];
            let mut sigma2_q = [0.0; 5];
            for i in 0..5 {
                phi_q[i] = num(f[4 + i])?;
                sigma2_q[i] = num(f[9 + i])?;
            }
            groups.push(SummaryGroup {
                method: f[0].parse()?,
                corruption: num(f[1])?,
                n,
                converged: (rate * n as f64).round() as usize,
                phi_q,
                sigma2_q,
                red_of_medians: num(f[14])?,
            });
        }
        Ok(StudySummary { groups })
    }
}

/// Everything a finished study produces.
#[derive(Clone, Debug)]
pub struct StudyOutput {
    pub rows: Vec<FitRow>,
    pub summary: StudySummary,
    /// comment lines echoing the configuration, written into the CSVs
    pub config_echo: Vec<String>,
}

/// Fixed sub-stream tags for seed derivation.
mod stream {
    pub const SIMULATE: u64 = 1;
    pub const CORRUPT: u64 = 2;
    pub const JITTER: u64 = 3;
    pub const REDISTRIBUTE: u64 = 4;
    pub const POISSON_REF: u64 = 5;
}

fn case_seed(base: u64, kind: u64, rep: u64, frac_idx: u64) -> u64 {
    derive_seed(derive_seed(derive_seed(base, kind), rep), frac_idx)
}

/// Shared per-study immutable state.
struct StudyContext {
    config: ScenarioConfig,
    mean: MeanModel,
    cov: CovarianceParams,
    partition: Partition,
    r_grid: Vec<f64>,
    delta: f64,
    bounds: ParamBounds,
    optimizer: OptimizerSpec,
}

impl StudyContext {
    fn new(config: &ScenarioConfig) -> Result<Self> {
        config.validate()?;
        let mean = config.build_mean()?;
        let cov = CovarianceParams::new(config.phi, config.sigma2)?;
        let partition = config.build_partition()?;
        let r_max = config.resolve_r_max()?;
        let delta = config.resolve_delta(&partition)?;
        Ok(StudyContext {
            config: config.clone(),
            mean,
            cov,
            partition,
            r_grid: default_r_grid(r_max),
            delta,
            bounds: ParamBounds::default(),
            optimizer: OptimizerSpec::default(),
        })
    }

    fn config_echo(&self) -> Vec<String> {
        let c = &self.config;
        let methods: Vec<String> = c.methods.iter().map(|m| m.to_string()).collect();
        let fractions: Vec<String> = c.fractions.iter().map(|f| f.to_string()).collect();
        vec![
            format!("# scenario {}", c.label),
            format!(
                "# window rect {} {} {} {}",
                c.window.0, c.window.1, c.window.2, c.window.3
            ),
            format!("# truth phi {} sigma2 {}", c.phi, c.sigma2),
            format!("# reps {} base_seed {}", c.reps, c.base_seed),
            format!("# sim_grid {} {}", c.sim_grid.0, c.sim_grid.1),
            format!("# fractions {}", fractions.join(" ")),
            format!("# methods {}", methods.join(" ")),
            format!(
                "# delta {} r_max {} jitter_d {}",
                self.delta,
                self.r_grid.last().unwrap(),
                c.jitter_d
            ),
            format!("# partition cells {}", self.partition.len()),
        ]
    }

    /// K estimate for one (possibly preprocessed) pattern under the
    /// configured intensity model.
    fn k_estimate(&self, pattern: &PointPattern) -> Result<KEstimate> {
        let (gx, gy) = self.config.intensity_grid;
        match &self.config.intensity {
            IntensitySpec::Constant => k_hom(pattern, &self.r_grid),
            IntensitySpec::FixedKernel { h } => {
                let dens = kernel_intensity_fixed(pattern, *h, gx, gy)?;
                let lam = dens.scaled(pattern.len() as f64);
                let mut k = k_inhom(pattern, &lam, &self.r_grid)?;
                k.meta = format!("fixed kernel h = {h} (x N)");
                Ok(k)
            }
            IntensitySpec::AdaptiveCvl { h0 } => {
                let h0 = match h0 {
                    Some(v) => *v,
                    None => {
                        let cands =
                            default_bandwidth_candidates(pattern.window(), gx, gy);
                        select_bandwidth_cvl(pattern, &cands, gx, gy)?
                    }
                };
                let adapt = kernel_intensity_adaptive(pattern, h0, h0, gx, gy)?;
                let lam = adapt.field.scaled(pattern.len() as f64);
                let mut k = k_inhom(pattern, &lam, &self.r_grid)?;
                k.meta = format!("adaptive kernel h0 = {h0} (x N)");
                Ok(k)
            }
        }
    }

    /// All rows for one replication, in (fraction, method) order.
    fn run_replication(&self, rep: usize) -> Vec<FitRow> {
        let c = &self.config;
        let sim_seed = derive_seed(c.base_seed, stream::SIMULATE) + rep as u64;
        let mut rows = Vec::with_capacity(c.fractions.len() * c.methods.len());
        let pattern = simulate_lgcp(
            &self.mean,
            &self.cov,
            &self.partition.window().clone(),
            c.sim_grid.0,
            c.sim_grid.1,
            sim_seed,
        );
        for (f_idx, &fraction) in c.fractions.iter().enumerate() {
            let corrupted = pattern.as_ref().map_err(|e| e.to_string()).and_then(|p| {
                let spec = CorruptionSpec::new(
                    self.partition.clone(),
                    fraction,
                    case_seed(c.base_seed, stream::CORRUPT, rep as u64, f_idx as u64),
                )
                .map_err(|e| e.to_string())?;
                corrupt(p, &spec).map_err(|e| e.to_string())
            });
            // MC and MMC share the corrupted pattern's K estimate
            let mut shared_k: Option<std::result::Result<KEstimate, String>> = None;
            for &method in &c.methods {
                let row = match &corrupted {
                    Ok(pat) => self.run_method(pat, method, rep, f_idx, &mut shared_k),
                    Err(e) => Err(e.clone()),
                };
                rows.push(match row {
                    Ok((phi_hat, sigma2_hat, contrast_value, converged)) => FitRow {
                        scenario: c.label.clone(),
                        method,
                        corruption: fraction,
                        seed: sim_seed,
                        phi_hat,
                        sigma2_hat,
                        contrast: contrast_value,
                        converged,
                    },
                    Err(msg) => {
                        log::warn!(
                            "rep {rep} fraction {fraction} method {method}: {msg}; recording a non-converged row"
                        );
                        FitRow {
                            scenario: c.label.clone(),
                            method,
                            corruption: fraction,
                            seed: sim_seed,
                            phi_hat: f64::NAN,
                            sigma2_hat: f64::NAN,
                            contrast: f64::NAN,
                            converged: false,
                        }
                    }
                });
            }
        }
        rows
    }

    fn run_method(
        &self,
        corrupted: &PointPattern,
        method: MethodLabel,
        rep: usize,
        f_idx: usize,
        shared_k: &mut Option<std::result::Result<KEstimate, String>>,
    ) -> std::result::Result<(f64, f64, f64, bool), String> {
        let c = &self.config;
        let r_max = *self.r_grid.last().unwrap();
        let (pattern, delta) = match method {
            MethodLabel::Mc => (None, 0.0),
            MethodLabel::Mmc => (None, self.delta),
            MethodLabel::McI => (
                Some(dedup(corrupted, corrupted.default_duplicate_tol())),
                0.0,
            ),
            MethodLabel::McII => (
                Some(
                    jitter(
                        corrupted,
                        c.jitter_d,
                        case_seed(c.base_seed, stream::JITTER, rep as u64, f_idx as u64),
                    )
                    .map_err(|e| e.to_string())?,
                ),
                0.0,
            ),
            MethodLabel::McIII => (
                Some(
                    redistribute(
                        corrupted,
                        &self.partition,
                        case_seed(c.base_seed, stream::REDISTRIBUTE, rep as u64, f_idx as u64),
                    )
                    .map_err(|e| e.to_string())?,
                ),
                0.0,
            ),
        };
        let k = match &pattern {
            Some(p) => self.k_estimate(p).map_err(|e| e.to_string())?,
            None => {
                if shared_k.is_none() {
                    *shared_k = Some(self.k_estimate(corrupted).map_err(|e| e.to_string()));
                }
                shared_k.as_ref().unwrap().clone()?
            }
        };
        let cfg = ContrastConfig::new(delta, r_max).map_err(|e| e.to_string())?;
        let fitres = fit(&k, &cfg, &self.bounds, &self.optimizer).map_err(|e| e.to_string())?;
        Ok((
            fitres.phi_hat,
            fitres.sigma2_hat,
            fitres.contrast_value,
            fitres.converged,
        ))
    }
}

fn with_pool<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
    Ok(pool.install(f))
}

fn summarize(rows: &[FitRow], phi_true: f64, sigma2_true: f64) -> StudySummary {
    let mut keys: Vec<(MethodLabel, f64)> = Vec::new();
    for r in rows {
        if !keys
            .iter()
            .any(|(m, f)| *m == r.method && (*f - r.corruption).abs() < 1e-12)
        {
            keys.push((r.method, r.corruption));
        }
    }
    keys.sort_by(|a, b| {
        a.1.partial_cmp(&b.1)
            .unwrap()
            .then_with(|| a.0.cmp(&b.0))
    });
    let groups = keys
        .into_iter()
        .map(|(method, corruption)| {
            let sel: Vec<&FitRow> = rows
                .iter()
                .filter(|r| r.method == method && (r.corruption - corruption).abs() < 1e-12)
                .collect();
            let phis: Vec<f64> = sel.iter().map(|r| r.phi_hat).collect();
            let sigs: Vec<f64> = sel.iter().map(|r| r.sigma2_hat).collect();
            let phi_q: [f64; 5] = quantiles(&phis, &QUANTILE_PROBS).try_into().unwrap();
            let sigma2_q: [f64; 5] = quantiles(&sigs, &QUANTILE_PROBS).try_into().unwrap();
            SummaryGroup {
                method,
                corruption,
                n: sel.len(),
                converged: sel.iter().filter(|r| r.converged).count(),
                phi_q,
                sigma2_q,
                red_of_medians: red(phi_q[2], sigma2_q[2], phi_true, sigma2_true),
            }
        })
        .collect();
    StudySummary { groups }
}

/// Run every replication of the configured study. Failures inside one
/// (replication, fraction, method) case are recorded as non-converged rows;
/// the row count is always `reps * |fractions| * |methods|`.
pub fn run_scenario(config: &ScenarioConfig, workers: usize) -> Result<StudyOutput> {
    let ctx = StudyContext::new(config)?;
    let reps = config.reps;
    let mut rows: Vec<FitRow> = with_pool(workers, || {
        (0..reps)
            .into_par_iter()
            .map(|rep| ctx.run_replication(rep))
            .collect::<Vec<_>>()
    })?
    .into_iter()
    .flatten()
    .collect();
    sort_rows(config, &mut rows);
    let summary = summarize(&rows, config.phi, config.sigma2);
    Ok(StudyOutput {
        rows,
        summary,
        config_echo: ctx.config_echo(),
    })
}

/// Stable row order: (replication seed, fraction, configured method order).
fn sort_rows(config: &ScenarioConfig, rows: &mut [FitRow]) {
    let method_rank = |m: MethodLabel| {
        config
            .methods
            .iter()
            .position(|&x| x == m)
            .unwrap_or(usize::MAX)
    };
    rows.sort_by(|a, b| {
        a.seed
            .cmp(&b.seed)
            .then_with(|| a.corruption.partial_cmp(&b.corruption).unwrap())
            .then_with(|| method_rank(a.method).cmp(&method_rank(b.method)))
    });
}

/// One row of a delta sweep: quantiles of the MMC estimates at one
/// (fraction, delta) combination.
#[derive(Clone, Debug)]
pub struct DeltaSweepRow {
    pub corruption: f64,
    pub delta: f64,
    pub n: usize,
    pub converged: usize,
    pub phi_q: [f64; 5],
    pub sigma2_q: [f64; 5],
}

#[derive(Clone, Debug, Default)]
pub struct DeltaSweepTable {
    pub rows: Vec<DeltaSweepRow>,
}

impl DeltaSweepTable {
    pub fn to_csv(&self, comments: &[String]) -> String {
        let mut out = String::new();
        for c in comments {
            out.push_str(c);
            out.push('\n');
        }
        out.push_str(
            "corruption,delta,n,converged_rate,phi_q05,phi_q25,phi_q50,phi_q75,phi_q95,\
             sig2_q05,sig2_q25,sig2_q50,sig2_q75,sig2_q95\n",
        );
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                r.corruption,
                r.delta,
                r.n,
                r.converged as f64 / r.n as f64,
                r.phi_q[0],
                r.phi_q[1],
                r.phi_q[2],
                r.phi_q[3],
                r.phi_q[4],
                r.sigma2_q[0],
                r.sigma2_q[1],
                r.sigma2_q[2],
                r.sigma2_q[3],
                r.sigma2_q[4],
            ));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<DeltaSweepTable> {
        let mut rows = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with("corruption,") {
                continue;
            }
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 14 {
                return Err(Error::Parse(format!("sweep row has {} fields", f.len())));
            }
            let num = |s: &str| -> Result<f64> {
                s.parse()
                    .map_err(|_| Error::Parse(format!("sweep: bad number {s:?}")))
            };
            let n: usize = f[2]
                .parse()
                .map_err(|_| Error::Parse(format!("sweep: bad count {:?}", f[2])))?;
            let rate = num(f[3])?;
            let mut phi_q = [0.0; 5];
            let mut sigma2_q = [0.0; 5];
            for i in 0..5 {
                phi_q[i] = num(f[4 + i])?;
                sigma2_q[i] = num(f[9 + i])?;
            }
            rows.push(DeltaSweepRow {
                corruption: num(f[0])?,
                delta: num(f[1])?,
                n,
                converged: (rate * n as f64).round() as usize,
                phi_q,
                sigma2_q,
            });
        }
        Ok(DeltaSweepTable { rows })
    }

    /// Median phi curve for one corruption fraction, in delta order.
    pub fn median_phi_curve(&self, corruption: f64) -> Vec<(f64, f64)> {
        let mut v: Vec<(f64, f64)> = self
            .rows
            .iter()
            .filter(|r| (r.corruption - corruption).abs() < 1e-12)
            .map(|r| (r.delta, r.phi_q[2]))
            .collect();
        v.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        v
    }
}

/// MMC fits across a grid of delta values for each replication and each
/// configured corruption fraction.
pub fn delta_sweep(
    config: &ScenarioConfig,
    delta_grid: &[f64],
    workers: usize,
) -> Result<(DeltaSweepTable, Vec<String>)> {
    let ctx = StudyContext::new(config)?;
    let r_max = *ctx.r_grid.last().unwrap();
    if delta_grid.is_empty() || delta_grid.iter().any(|&d| !(0.0..r_max).contains(&d)) {
        return Err(Error::Config(format!(
            "delta grid must lie within [0, {r_max})"
        )));
    }
    let reps = config.reps;
    // per replication: (fraction idx, delta idx) -> (phi, sigma2, converged)
    let per_rep: Vec<Vec<(f64, f64, bool)>> = with_pool(workers, || {
        (0..reps)
            .into_par_iter()
            .map(|rep| sweep_replication(&ctx, rep, delta_grid))
            .collect()
    })?;
    let mut rows = Vec::new();
    for (f_idx, &fraction) in config.fractions.iter().enumerate() {
        for (d_idx, &delta) in delta_grid.iter().enumerate() {
            let idx = f_idx * delta_grid.len() + d_idx;
            let cell: Vec<&(f64, f64, bool)> = per_rep.iter().map(|v| &v[idx]).collect();
            let phis: Vec<f64> = cell.iter().map(|c| c.0).collect();
            let sigs: Vec<f64> = cell.iter().map(|c| c.1).collect();
            rows.push(DeltaSweepRow {
                corruption: fraction,
                delta,
                n: cell.len(),
                converged: cell.iter().filter(|c| c.2).count(),
                phi_q: quantiles(&phis, &QUANTILE_PROBS).try_into().unwrap(),
                sigma2_q: quantiles(&sigs, &QUANTILE_PROBS).try_into().unwrap(),
            });
        }
    }
    let mut echo = ctx.config_echo();
    echo.push(format!(
        "# delta_grid {}",
        delta_grid
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    ));
    Ok((DeltaSweepTable { rows }, echo))
}

fn sweep_replication(
    ctx: &StudyContext,
    rep: usize,
    delta_grid: &[f64],
) -> Vec<(f64, f64, bool)> {
    let c = &ctx.config;
    let r_max = *ctx.r_grid.last().unwrap();
    let sim_seed = derive_seed(c.base_seed, stream::SIMULATE) + rep as u64;
    let mut out = Vec::with_capacity(c.fractions.len() * delta_grid.len());
    let pattern = simulate_lgcp(
        &ctx.mean,
        &ctx.cov,
        &ctx.partition.window().clone(),
        c.sim_grid.0,
        c.sim_grid.1,
        sim_seed,
    );
    for (f_idx, &fraction) in c.fractions.iter().enumerate() {
        let k = pattern.as_ref().map_err(|e| e.to_string()).and_then(|p| {
            let spec = CorruptionSpec::new(
                ctx.partition.clone(),
                fraction,
                case_seed(c.base_seed, stream::CORRUPT, rep as u64, f_idx as u64),
            )
            .map_err(|e| e.to_string())?;
            let corrupted = corrupt(p, &spec).map_err(|e| e.to_string())?;
            ctx.k_estimate(&corrupted).map_err(|e| e.to_string())
        });
        for &delta in delta_grid {
            let res = k.as_ref().map_err(|e| e.clone()).and_then(|kest| {
                let cfg = ContrastConfig::new(delta, r_max).map_err(|e| e.to_string())?;
                fit(kest, &cfg, &ctx.bounds, &ctx.optimizer).map_err(|e| e.to_string())
            });
            out.push(match res {
                Ok(f) => (f.phi_hat, f.sigma2_hat, f.converged),
                Err(msg) => {
                    log::warn!("sweep rep {rep} fraction {fraction} delta {delta}: {msg}");
                    (f64::NAN, f64::NAN, false)
                }
            });
        }
    }
    out
}

/// Grid-search the fixed bandwidth that minimizes the RED of median MC
/// estimates on uncorrupted replications; requires known true parameters,
/// so it is a simulation-study tool, not a field-data selector.
pub fn red_bandwidth_search(
    config: &ScenarioConfig,
    candidates: &[f64],
    reps: usize,
    workers: usize,
) -> Result<(f64, Vec<(f64, f64)>)> {
    if candidates.is_empty() {
        return Err(Error::Config("no bandwidth candidates".into()));
    }
    let mut table = Vec::with_capacity(candidates.len());
    let mut best: Option<(f64, f64)> = None;
    for &h in candidates {
        let mut sub = config.clone();
        sub.intensity = IntensitySpec::FixedKernel { h };
        sub.fractions = vec![0.0];
        sub.methods = vec![MethodLabel::Mc];
        sub.reps = reps;
        let out = run_scenario(&sub, workers)?;
        let g = &out.summary.groups[0];
        let score = red(g.phi_q[2], g.sigma2_q[2], config.phi, config.sigma2);
        table.push((h, score));
        if best.map_or(true, |(_, s)| score < s) {
            best = Some((h, score));
        }
    }
    Ok((best.unwrap().0, table))
}

/// A homogeneous Poisson reference pattern on the scenario window (used by
/// calibration tests and the `simulate --poisson` escape hatch).
pub fn simulate_poisson_reference(
    window: &crate::geometry::Window,
    expected_n: f64,
    seed: u64,
) -> Result<PointPattern> {
    use rand::Rng;
    use rand_distr::{Distribution, Poisson};
    let rect = window.as_rect().ok_or_else(|| {
        Error::UnsupportedGeometry("Poisson reference needs a rectangular window".into())
    })?;
    let mut rng = crate::rng::rng_from_seed(derive_seed(seed, stream::POISSON_REF));
    let n = Poisson::new(expected_n)
        .map_err(|e| Error::Sampling(format!("poisson({expected_n}): {e}")))?
        .sample(&mut rng) as usize;
    let pts = (0..n)
        .map(|_| {
            crate::geometry::Point::new(
                rng.random_range(rect.x0..rect.x1),
                rng.random_range(rect.y0..rect.y1),
            )
        })
        .collect();
    PointPattern::new(window.clone(), pts)
}
