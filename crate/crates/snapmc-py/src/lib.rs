//! Python bindings: the main types and operations of the snapmc crate.
//!
//! Build with `cargo build -p snapmc-py --release` and rename the produced
//! `libsnapmc_py.so` to `snapmc.so` somewhere on `PYTHONPATH` (the
//! `python/smoke_test.py` script does this automatically).

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use snapmc::estimation as est;
use snapmc::geometry as geo;
use snapmc::harness;
use snapmc::intensity as inten;
use snapmc::kfunction as kfn;
use snapmc::simulate as sim;

fn err(e: snapmc::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_points(pts: Vec<(f64, f64)>) -> Vec<geo::Point> {
    pts.into_iter().map(|(x, y)| geo::Point::new(x, y)).collect()
}

/// Observation window (rectangle or simple polygon).
#[pyclass(frozen)]
#[derive(Clone)]
struct Window {
    inner: geo::Window,
}

#[pymethods]
impl Window {
    #[staticmethod]
    fn rect(x0: f64, x1: f64, y0: f64, y1: f64) -> PyResult<Self> {
        Ok(Window {
            inner: geo::Window::rect(x0, x1, y0, y1).map_err(err)?,
        })
    }

    #[staticmethod]
    fn polygon(vertices: Vec<(f64, f64)>) -> PyResult<Self> {
        Ok(Window {
            inner: geo::Window::polygon(to_points(vertices)).map_err(err)?,
        })
    }

    fn area(&self) -> f64 {
        self.inner.area()
    }

    fn contains(&self, x: f64, y: f64) -> bool {
        self.inner.contains(geo::Point::new(x, y))
    }

    fn __repr__(&self) -> String {
        let b = self.inner.bbox();
        format!(
            "Window(area={:.6}, bbox=[{}, {}] x [{}, {}])",
            self.inner.area(),
            b.x0,
            b.x1,
            b.y0,
            b.y1
        )
    }
}

/// A point pattern inside a window.
#[pyclass]
#[derive(Clone)]
struct PointPattern {
    inner: geo::PointPattern,
}

#[pymethods]
impl PointPattern {
    #[new]
    fn new(window: &Window, points: Vec<(f64, f64)>) -> PyResult<Self> {
        Ok(PointPattern {
            inner: geo::PointPattern::new(window.inner.clone(), to_points(points)).map_err(err)?,
        })
    }

    fn points(&self) -> Vec<(f64, f64)> {
        self.inner.points().iter().map(|p| (p.x, p.y)).collect()
    }

    fn window(&self) -> Window {
        Window {
            inner: self.inner.window().clone(),
        }
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    /// Distinct locations with their multiplicities. `tol` defaults to
    /// 1e-9 of the window scale.
    #[pyo3(signature = (tol = None))]
    fn find_duplicates(&self, tol: Option<f64>) -> Vec<((f64, f64), usize)> {
        let tol = tol.unwrap_or_else(|| self.inner.default_duplicate_tol());
        self.inner
            .find_duplicates(tol)
            .entries()
            .iter()
            .map(|(p, c)| ((p.x, p.y), *c))
            .collect()
    }

    fn __repr__(&self) -> String {
        format!("PointPattern(n={})", self.inner.len())
    }
}

/// A tiling of the window into polygonal cells.
#[pyclass(frozen)]
struct Partition {
    inner: geo::Partition,
}

#[pymethods]
impl Partition {
    #[staticmethod]
    fn regular_grid(window: &Window, nx: usize, ny: usize) -> PyResult<Self> {
        Ok(Partition {
            inner: geo::Partition::regular_grid(&window.inner, nx, ny).map_err(err)?,
        })
    }

    #[staticmethod]
    fn dirichlet(window: &Window, seeds: Vec<(f64, f64)>) -> PyResult<Self> {
        Ok(Partition {
            inner: geo::Partition::dirichlet(&window.inner, &to_points(seeds)).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_json(text: &str, window: &Window) -> PyResult<Self> {
        Ok(Partition {
            inner: snapmc::io::partition_from_json(text, &window.inner).map_err(err)?,
        })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn mean_cell_area(&self) -> f64 {
        self.inner.mean_cell_area()
    }

    fn centroids(&self) -> Vec<(f64, f64)> {
        self.inner
            .cells()
            .iter()
            .map(|c| (c.centroid().x, c.centroid().y))
            .collect()
    }

    fn locate(&self, x: f64, y: f64) -> PyResult<usize> {
        self.inner.locate(geo::Point::new(x, y)).map_err(err)
    }
}

/// An empirical K-function on a distance grid.
#[pyclass(frozen)]
struct KEstimate {
    inner: kfn::KEstimate,
}

#[pymethods]
impl KEstimate {
    #[getter]
    fn r(&self) -> Vec<f64> {
        self.inner.r.clone()
    }

    #[getter]
    fn khat(&self) -> Vec<f64> {
        self.inner.khat.clone()
    }

    #[getter]
    fn variant(&self) -> String {
        self.inner.variant.to_string()
    }

    #[getter]
    fn n_points(&self) -> usize {
        self.inner.n_points
    }

    fn __repr__(&self) -> String {
        format!(
            "KEstimate(variant={}, n={}, r_max={})",
            self.inner.variant,
            self.inner.n_points,
            self.inner.r_max()
        )
    }
}

/// Result of a minimum-contrast fit.
#[pyclass(frozen)]
struct FitResult {
    inner: est::FitResult,
}

#[pymethods]
impl FitResult {
    #[getter]
    fn phi_hat(&self) -> f64 {
        self.inner.phi_hat
    }

    #[getter]
    fn sigma2_hat(&self) -> f64 {
        self.inner.sigma2_hat
    }

    #[getter]
    fn contrast(&self) -> f64 {
        self.inner.contrast_value
    }

    #[getter]
    fn method(&self) -> String {
        self.inner.method_label.to_string()
    }

    #[getter]
    fn converged(&self) -> bool {
        self.inner.converged
    }

    #[getter]
    fn delta_snapped(&self) -> f64 {
        self.inner.delta_snapped
    }

    #[getter]
    fn r_max_snapped(&self) -> f64 {
        self.inner.r_max_snapped
    }

    fn __repr__(&self) -> String {
        format!(
            "FitResult(method={}, phi={:.4}, sigma2={:.4}, converged={})",
            self.inner.method_label,
            self.inner.phi_hat,
            self.inner.sigma2_hat,
            self.inner.converged
        )
    }
}

/// Theoretical LGCP K-function with exponential covariance; `sigma2 = 0`
/// gives the Poisson pi r^2.
#[pyfunction]
fn theoretical_k(r: f64, phi: f64, sigma2: f64) -> PyResult<f64> {
    if !(phi > 0.0) || sigma2 < 0.0 {
        return Err(PyValueError::new_err("phi must be > 0 and sigma2 >= 0"));
    }
    Ok(sim::theoretical_k(r, &sim::CovarianceParams { phi, sigma2 }))
}

/// Simulate an LGCP pattern. Exactly one of `mean_const` and `mean_linear`
/// (intercept, coef_x, coef_y) selects the mean structure.
#[pyfunction]
#[pyo3(signature = (window, phi, sigma2, seed, nx = 256, ny = 256, mean_const = None, mean_linear = None))]
#[allow(clippy::too_many_arguments)]
fn simulate_lgcp(
    window: &Window,
    phi: f64,
    sigma2: f64,
    seed: u64,
    nx: usize,
    ny: usize,
    mean_const: Option<f64>,
    mean_linear: Option<(f64, f64, f64)>,
) -> PyResult<PointPattern> {
    let mean = match (mean_const, mean_linear) {
        (Some(v), None) => sim::MeanModel::Constant(v),
        (None, Some((intercept, coef_x, coef_y))) => sim::MeanModel::CoordLinear {
            intercept,
            coef_x,
            coef_y,
        },
        _ => {
            return Err(PyValueError::new_err(
                "pass exactly one of mean_const or mean_linear",
            ))
        }
    };
    let cov = sim::CovarianceParams::new(phi, sigma2).map_err(err)?;
    Ok(PointPattern {
        inner: sim::simulate_lgcp(&mean, &cov, &window.inner, nx, ny, seed).map_err(err)?,
    })
}

/// Snap a share of points to the centroid of their partition cell.
#[pyfunction]
fn corrupt(
    pattern: &PointPattern,
    partition: &Partition,
    fraction: f64,
    seed: u64,
) -> PyResult<PointPattern> {
    let spec = sim::CorruptionSpec::new(partition.inner.clone(), fraction, seed).map_err(err)?;
    Ok(PointPattern {
        inner: sim::corrupt(&pattern.inner, &spec).map_err(err)?,
    })
}

#[pyfunction]
#[pyo3(signature = (pattern, tol = None))]
fn dedup(pattern: &PointPattern, tol: Option<f64>) -> PointPattern {
    let tol = tol.unwrap_or_else(|| pattern.inner.default_duplicate_tol());
    PointPattern {
        inner: est::dedup(&pattern.inner, tol),
    }
}

#[pyfunction]
fn jitter(pattern: &PointPattern, d: f64, seed: u64) -> PyResult<PointPattern> {
    Ok(PointPattern {
        inner: est::jitter(&pattern.inner, d, seed).map_err(err)?,
    })
}

#[pyfunction]
fn redistribute(
    pattern: &PointPattern,
    partition: &Partition,
    seed: u64,
) -> PyResult<PointPattern> {
    Ok(PointPattern {
        inner: est::redistribute(&pattern.inner, &partition.inner, seed).map_err(err)?,
    })
}

/// Homogeneous K estimate; `r_max` defaults to the quarter-side rule.
#[pyfunction]
#[pyo3(signature = (pattern, r_max = None))]
fn k_hom(pattern: &PointPattern, r_max: Option<f64>) -> PyResult<KEstimate> {
    let r_max = match r_max {
        Some(r) => r,
        None => est::rmax_rule(pattern.inner.window()).map_err(err)?,
    };
    Ok(KEstimate {
        inner: kfn::k_hom(&pattern.inner, &kfn::default_r_grid(r_max)).map_err(err)?,
    })
}

/// Inhomogeneous K estimate against a constant plug-in intensity.
#[pyfunction]
#[pyo3(signature = (pattern, lam, r_max = None))]
fn k_inhom_const(pattern: &PointPattern, lam: f64, r_max: Option<f64>) -> PyResult<KEstimate> {
    let r_max = match r_max {
        Some(r) => r,
        None => est::rmax_rule(pattern.inner.window()).map_err(err)?,
    };
    let field = snapmc::RasterField::constant(pattern.inner.window().bbox(), 8, 8, lam)
        .map_err(err)?;
    Ok(KEstimate {
        inner: kfn::k_inhom(&pattern.inner, &field, &kfn::default_r_grid(r_max)).map_err(err)?,
    })
}

/// Inhomogeneous K estimate with a fixed-bandwidth kernel intensity
/// (rescaled by N) estimated from the pattern itself.
#[pyfunction]
#[pyo3(signature = (pattern, h, r_max = None, grid = 128))]
fn k_inhom_kernel(
    pattern: &PointPattern,
    h: f64,
    r_max: Option<f64>,
    grid: usize,
) -> PyResult<KEstimate> {
    let r_max = match r_max {
        Some(r) => r,
        None => est::rmax_rule(pattern.inner.window()).map_err(err)?,
    };
    let dens = inten::kernel_intensity_fixed(&pattern.inner, h, grid, grid).map_err(err)?;
    let lam = dens.scaled(pattern.inner.len() as f64);
    Ok(KEstimate {
        inner: kfn::k_inhom(&pattern.inner, &lam, &kfn::default_r_grid(r_max)).map_err(err)?,
    })
}

/// Contrast value of one parameter pair against a K estimate.
#[pyfunction]
#[pyo3(signature = (k, phi, sigma2, delta = 0.0, r_max = None))]
fn contrast(k: &KEstimate, phi: f64, sigma2: f64, delta: f64, r_max: Option<f64>) -> PyResult<f64> {
    let cfg = est::ContrastConfig::new(delta, r_max.unwrap_or_else(|| k.inner.r_max()))
        .map_err(err)?;
    est::contrast(&k.inner, phi, sigma2, &cfg).map_err(err)
}

/// Minimum-contrast fit; `delta > 0` gives the modified (duplicate-robust)
/// criterion.
#[pyfunction]
#[pyo3(signature = (k, delta = 0.0, r_max = None))]
fn fit(k: &KEstimate, delta: f64, r_max: Option<f64>) -> PyResult<FitResult> {
    let cfg = est::ContrastConfig::new(delta, r_max.unwrap_or_else(|| k.inner.r_max()))
        .map_err(err)?;
    Ok(FitResult {
        inner: est::fit(
            &k.inner,
            &cfg,
            &est::ParamBounds::default(),
            &est::OptimizerSpec::default(),
        )
        .map_err(err)?,
    })
}

/// Rule-of-thirds delta for a mean cell area.
#[pyfunction]
fn delta_rule(mean_cell_area: f64) -> PyResult<f64> {
    est::delta_rule(mean_cell_area).map_err(err)
}

/// Quarter-side rule for the contrast upper bound.
#[pyfunction]
fn rmax_rule(window: &Window) -> PyResult<f64> {
    est::rmax_rule(&window.inner).map_err(err)
}

/// Relative Euclidean distance of estimates from the truth.
#[pyfunction]
fn red(phi_hat: f64, sigma2_hat: f64, phi_true: f64, sigma2_true: f64) -> f64 {
    inten::red(phi_hat, sigma2_hat, phi_true, sigma2_true)
}

/// Run a preset replication study; returns (rows_csv, summary_csv).
#[pyfunction]
#[pyo3(signature = (scenario, reps = None, seed = None, workers = 0, fractions = None, methods = None))]
fn run_study(
    scenario: &str,
    reps: Option<usize>,
    seed: Option<u64>,
    workers: usize,
    fractions: Option<Vec<f64>>,
    methods: Option<Vec<String>>,
) -> PyResult<(String, String)> {
    let mut cfg = harness::ScenarioConfig::preset(scenario).map_err(err)?;
    if let Some(r) = reps {
        cfg.reps = r;
    }
    if let Some(s) = seed {
        cfg.base_seed = s;
    }
    if let Some(f) = fractions {
        cfg.fractions = f;
    }
    if let Some(m) = methods {
        cfg.methods = m
            .iter()
            .map(|s| s.parse::<est::MethodLabel>())
            .collect::<snapmc::Result<Vec<_>>>()
            .map_err(err)?;
    }
    let out = harness::run_scenario(&cfg, workers).map_err(err)?;
    Ok((
        snapmc::io::rows_to_csv(&out.rows, &out.config_echo),
        out.summary.to_csv(&out.config_echo),
    ))
}

#[pymodule]
#[pyo3(name = "snapmc")]
fn snapmc_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Window>()?;
    m.add_class::<PointPattern>()?;
    m.add_class::<Partition>()?;
    m.add_class::<KEstimate>()?;
    m.add_class::<FitResult>()?;
    m.add_function(wrap_pyfunction!(theoretical_k, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_lgcp, m)?)?;
    m.add_function(wrap_pyfunction!(corrupt, m)?)?;
    m.add_function(wrap_pyfunction!(dedup, m)?)?;
    m.add_function(wrap_pyfunction!(jitter, m)?)?;
    m.add_function(wrap_pyfunction!(redistribute, m)?)?;
    m.add_function(wrap_pyfunction!(k_hom, m)?)?;
    m.add_function(wrap_pyfunction!(k_inhom_const, m)?)?;
    m.add_function(wrap_pyfunction!(k_inhom_kernel, m)?)?;
    m.add_function(wrap_pyfunction!(contrast, m)?)?;
    m.add_function(wrap_pyfunction!(fit, m)?)?;
    m.add_function(wrap_pyfunction!(delta_rule, m)?)?;
    m.add_function(wrap_pyfunction!(rmax_rule, m)?)?;
    m.add_function(wrap_pyfunction!(red, m)?)?;
    m.add_function(wrap_pyfunction!(run_study, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
