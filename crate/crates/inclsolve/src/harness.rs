//! Experiment configuration, the run loop, CSV/plot-data emission, and the
//! preset registry behind the `inclsolve` CLI.
//!
//! Determinism contract: a fixed `(config, seed)` pair yields an identical
//! [`Trace`] and byte-identical output files across runs.

use std::io::Write as _;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::instrumentation::{run_solver, Trace};
use crate::problem_zoo;
use crate::solvers::{aeg_gamma, apeg_gamma, stepsize_window, Method, SolverConfig};
use crate::{Error, Result, Vector};

const GOLDEN: f64 = 1.618033988749895;

fn de_eta<'de, D>(d: D) -> std::result::Result<Option<f64>, D::Error>
where
    D: serde::Deserializer<'de>,
{
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Str(String),
    }
    match Option::<Raw>::deserialize(d)? {
        None => Ok(None),
        Some(Raw::Num(v)) => Ok(Some(v)),
        Some(Raw::Str(s)) if s == "auto" => Ok(None),
        Some(Raw::Str(s)) => Err(serde::de::Error::custom(format!(
            "eta must be a number or \"auto\", got \"{s}\""
        ))),
    }
}

/// Declarative description of one experiment run.
///
/// Unset optional fields resolve as: `eta` via the stepsize-window midpoint
/// rule ("auto"), `beta` to 1, `omega` to the golden ratio, `rho` to the
/// problem's declared co-hypomonotonicity modulus, and `gamma` to the
/// method-specific default derived from `(eta, rho)`.
#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub problem_id: String,
    pub method: String,
    /// `None` means "auto" (window midpoint rule).
    #[serde(deserialize_with = "de_eta")]
    pub eta: Option<f64>,
    pub beta: Option<f64>,
    pub omega: Option<f64>,
    pub gamma: Option<f64>,
    pub rho: Option<f64>,
    pub iterations: usize,
    pub seed: u64,
    /// Evaluate every applicable convergence certificate along the run.
    pub check_theorems: bool,
    /// Allow stepsizes outside the admissible window. Certificate checking is
    /// disabled under override, since the guarantees no longer apply.
    pub override_window: bool,
    /// When nonempty, the per-iteration CSV is written here.
    pub output_path: String,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            problem_id: String::new(),
            method: "eg".to_string(),
            eta: None,
            beta: None,
            omega: None,
            gamma: None,
            rho: None,
            iterations: 1000,
            seed: 0,
            check_theorems: false,
            override_window: false,
            output_path: String::new(),
        }
    }
}

impl ExperimentConfig {
    /// Reads a JSON experiment manifest.
    pub fn from_json_file(path: &Path) -> Result<ExperimentConfig> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("bad config file: {e}")))
    }
}

/// Deterministic starting point: coordinates uniform on `[−1/4, 1/4]`.
///
/// Small starts keep the implicit initial witness consistent with the set
/// part's graph for every problem in the registry.
pub fn initial_point(dim: usize, seed: u64) -> Vector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Vector::from_fn(dim, |_, _| rng.gen_range(-0.25..0.25))
}

/// Resolves an [`ExperimentConfig`] and runs it.
///
/// Errors on unknown problem/method, on out-of-window stepsizes without the
/// override flag, and on numeric blowup during iteration. Certificate
/// *failures* are not errors; they are recorded in the returned [`Trace`].
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Trace> {
    let problem = problem_zoo::lookup(&cfg.problem_id)?;
    let method = Method::parse(&cfg.method)?;
    let beta = cfg.beta.unwrap_or(1.0);
    let omega = cfg.omega.unwrap_or(GOLDEN);
    let rho = cfg.rho.unwrap_or(problem.rho);
    if rho < 0.0 {
        return Err(Error::Parameter("rho must be nonnegative".to_string()));
    }
    let window = stepsize_window(method, problem.l, rho, beta, omega)?;
    let eta = match cfg.eta {
        Some(v) => {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Parameter(format!("eta must be positive and finite, got {v}")));
            }
            if !cfg.override_window && !window.contains(v) {
                return Err(Error::Parameter(format!(
                    "eta = {v} is outside the admissible window {} for {method}; \
                     pass override_window to run anyway (certificates disabled)",
                    window.describe()
                )));
            }
            v
        }
        None => {
            if !window.feasible {
                return Err(Error::Parameter(format!(
                    "no admissible stepsize for {method} here ({}); \
                     supply eta explicitly with override_window",
                    window.violated.clone().unwrap_or_default()
                )));
            }
            window.default_eta()
        }
    };
    let gamma = cfg.gamma.unwrap_or_else(|| match method {
        Method::Aeg => aeg_gamma(eta, rho),
        Method::Apeg => apeg_gamma(eta, rho),
        _ => 0.0,
    });
    let solver_cfg = SolverConfig { method, eta, beta, omega, gamma, rho };
    let check = cfg.check_theorems && !cfg.override_window;
    let x0 = initial_point(problem.dim, cfg.seed);
    let mut trace = run_solver(&problem, &solver_cfg, x0, cfg.iterations, check)?;
    trace.meta.problem_id = cfg.problem_id.clone();
    trace.meta.seed = cfg.seed;
    if !cfg.output_path.is_empty() {
        emit_csv(&trace, Path::new(&cfg.output_path))?;
    }
    Ok(trace)
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Writes the per-iteration metrics as CSV with header
/// `k,res_norm,fb_res,dist,potential,best_res,cert_pass`.
///
/// Floats use shortest round-trip formatting; absent metrics are empty
/// fields. Output is byte-deterministic for a fixed trace.
pub fn emit_csv(trace: &Trace, path: &Path) -> Result<()> {
    let mut out = String::from("k,res_norm,fb_res,dist,potential,best_res,cert_pass\n");
    for r in &trace.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.k,
            r.res_norm,
            r.fb_res,
            fmt_opt(r.dist),
            fmt_opt(r.potential),
            r.best_res,
            r.cert_pass
        ));
    }
    let mut f = std::fs::File::create(path)?;
    f.write_all(out.as_bytes())?;
    Ok(())
}

/// Theoretical residual reference curve `value(k)` for methods with an
/// explicit pointwise bound, from the run's own `d₀` and `‖w⁰‖`.
fn reference_bound(trace: &Trace, k: usize) -> Option<f64> {
    let d0 = trace.rows.first()?.dist?;
    let d0_sq = d0 * d0;
    let w0 = trace.rows.first()?.res_norm;
    let w0_sq = w0 * w0;
    let eta = trace.meta.eta;
    let rho = trace.meta.rho;
    let gamma = trace.meta.gamma;
    let kf = k as f64;
    let sq = match trace.meta.method.as_str() {
        "eag" => (4.0 * d0_sq + 2.0 * eta * eta * w0_sq) / (eta * eta * (kf + 1.0) * (kf + 1.0)),
        "feg" => {
            let g = eta - 2.0 * rho;
            (4.0 * d0_sq + 2.0 * eta * g * w0_sq) / (g * g * (kf + 1.0) * (kf + 1.0))
        }
        "peag" => {
            let g = eta - 4.0 * rho;
            (4.0 * d0_sq / (g * g) + 2.0 * (3.0 * eta - 2.0 * rho) / (3.0 * g) * w0_sq)
                / ((kf + 1.0) * (kf + 1.0))
        }
        "aeg" => 4.0 * d0_sq / (gamma * gamma * (kf + 2.0) * (kf + 2.0)),
        "apeg" => 4.0 * d0_sq / (gamma * gamma * (kf + 2.0) * (kf + 4.0)),
        _ => return None,
    };
    Some(sq.sqrt())
}

/// Writes traces in long format (`run_id,k,metric,value`) for external
/// plotting; emits `res_norm`, `fb_res`, and `best_res` series per run plus a
/// `ref_bound` series for methods with explicit pointwise guarantees.
pub fn emit_plotdata(traces: &[Trace], path: &Path) -> Result<()> {
    if traces.is_empty() {
        return Err(Error::Parameter("emit_plotdata needs at least one trace".to_string()));
    }
    let mut out = String::from("run_id,k,metric,value\n");
    for (i, t) in traces.iter().enumerate() {
        let run_id = format!("{}-{}-{}", t.meta.problem_id, t.meta.method, i);
        for r in &t.rows {
            out.push_str(&format!("{run_id},{},res_norm,{}\n", r.k, r.res_norm));
            out.push_str(&format!("{run_id},{},fb_res,{}\n", r.k, r.fb_res));
            out.push_str(&format!("{run_id},{},best_res,{}\n", r.k, r.best_res));
            if let Some(b) = reference_bound(t, r.k) {
                out.push_str(&format!("{run_id},{},ref_bound,{b}\n", r.k));
            }
        }
    }
    let mut f = std::fs::File::create(path)?;
    f.write_all(out.as_bytes())?;
    Ok(())
}

/// A named, internally consistent (problem, method, parameter) combination
/// whose convergence guarantees are all active.
#[derive(Debug, Clone)]
pub struct Preset {
    pub id: &'static str,
    pub problem_id: &'static str,
    pub method: Method,
    pub eta: Option<f64>,
    pub omega: Option<f64>,
    pub iterations: usize,
    pub description: &'static str,
}

/// The preset registry: one entry per guarantee regime.
pub fn presets() -> Vec<Preset> {
    let p = |id, problem_id, method, eta, omega, description| Preset {
        id,
        problem_id,
        method,
        eta,
        omega,
        iterations: 2000,
        description,
    };
    vec![
        p("eg-equation", "rotation2", Method::Eg, Some(0.5), None,
          "extragradient on an unconstrained skew equation: Fejér + summability"),
        p("peg-equation", "rotation2", Method::Peg, None, None,
          "past extragradient on an unconstrained skew equation: summability"),
        p("eg-linear", "strong-0.5-2", Method::Eg, Some(0.25), None,
          "extragradient on a strongly monotone equation: linear contraction"),
        p("eg-inclusion", "bilinear-box-4", Method::Eg, None, None,
          "extragradient on a box-constrained inclusion: Fejér, summability, last-iterate"),
        p("peg-inclusion", "bilinear-box-4", Method::Peg, None, None,
          "past extragradient on a box-constrained inclusion: summability"),
        p("fbfs-cohypo", "cohypo-0.02", Method::Fbfs, None, None,
          "forward-backward-forward on a co-hypomonotone equation: Fejér + summability"),
        p("past-fbfs-cohypo", "cohypo-0.01", Method::PastFbfs, None, None,
          "past forward-backward-forward on a co-hypomonotone equation: summability"),
        p("rfbs-inclusion", "bilinear-box-4", Method::Rfbs, None, None,
          "reflected forward-backward on a box-constrained inclusion: potential + bounds"),
        p("gr-inclusion", "bilinear-box-4", Method::Gr, None, None,
          "golden-ratio method (base range) on a box-constrained inclusion: potential + summability"),
        p("gr-plus-inclusion", "bilinear-box-4", Method::Gr, None, Some(2.6),
          "golden-ratio method (extended range) on a box-constrained inclusion"),
        p("eag-inclusion", "bilinear-box-4", Method::Eag, Some(1.0), None,
          "anchored extragradient on a monotone inclusion: potential + O(1/k) residual"),
        p("feg-cohypo", "cohypo-0.05", Method::Feg, None, None,
          "fast extragradient on a co-hypomonotone equation: potential + O(1/k) residual"),
        p("peag-cohypo", "cohypo-0.05", Method::Peag, None, None,
          "past anchored extragradient on a co-hypomonotone equation"),
        p("aeg-cohypo", "cohypo-0.05", Method::Aeg, None, None,
          "accelerated extragradient on a co-hypomonotone equation: potential + O(1/k) residual"),
        p("apeg-cohypo", "cohypo-0.05", Method::Apeg, None, None,
          "accelerated past extragradient on a co-hypomonotone equation"),
    ]
}

/// Runs one preset with certificate checking enabled.
pub fn verify_preset(id: &str) -> Result<Trace> {
    let preset = presets()
        .into_iter()
        .find(|p| p.id == id)
        .ok_or_else(|| Error::Config(format!("unknown preset '{id}'")))?;
    let cfg = ExperimentConfig {
        problem_id: preset.problem_id.to_string(),
        method: preset.method.as_str().to_string(),
        eta: preset.eta,
        omega: preset.omega,
        iterations: preset.iterations,
        check_theorems: true,
        ..ExperimentConfig::default()
    };
    run_experiment(&cfg)
}
