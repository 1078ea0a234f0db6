//! Potential-function evaluators, per-iteration convergence-certificate
//! checkers, best-iterate tracking, and rate fitting.
//!
//! A *certificate* is one numerically checked instance of an inequality that
//! the theory proves along iterations: a potential/Lyapunov decrease, an
//! explicit residual bound, Fejér monotonicity of distances, last-iterate
//! monotonicity of residuals, a linear contraction factor, or a bounded
//! running sum. Certificates marked `informational` track printed quantities
//! whose constants are dimensionally suspect in the source analysis; they are
//! recorded but never affect pass/fail verdicts.

use crate::operator_core::{fb_residual, Problem};
use crate::solvers::{
    schedule, stepsize_window, IterState, Method, SolverConfig, StepWindow,
};
use crate::{Error, Result, Vector};

/// Relative certificate tolerance; `INCLSOLVE_RTOL` overrides the default
/// `1e-8`.
pub fn cert_rtol() -> f64 {
    std::env::var("INCLSOLVE_RTOL")
        .ok()
        .and_then(|s| s.parse::<f64>().ok())
        .filter(|v| *v > 0.0)
        .unwrap_or(1e-8)
}

/// Certificate category.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertKind {
    PotentialDecrease,
    ExplicitBound,
    Fejer,
    LastIterateMonotone,
    LinearContraction,
    Summability,
}

impl CertKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CertKind::PotentialDecrease => "potential_decrease",
            CertKind::ExplicitBound => "explicit_bound",
            CertKind::Fejer => "fejer",
            CertKind::LastIterateMonotone => "last_iterate_monotone",
            CertKind::LinearContraction => "linear_contraction",
            CertKind::Summability => "summability",
        }
    }
}

/// One checked inequality instance `lhs ≤ rhs` at iteration `k`.
#[derive(Debug, Clone)]
pub struct Certificate {
    pub kind: CertKind,
    pub k: usize,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs ≤ rhs + rtol·(1 + |rhs|)`.
    pub pass: bool,
    /// `rhs − lhs` (negative slack means a violation before tolerance).
    pub slack: f64,
    /// Tracked for diagnostics only; excluded from pass/fail aggregation.
    pub informational: bool,
}

impl Certificate {
    fn check(kind: CertKind, k: usize, lhs: f64, rhs: f64, informational: bool) -> Self {
        let pass = lhs <= rhs + cert_rtol() * (1.0 + rhs.abs());
        Certificate { kind, k, lhs, rhs, pass, slack: rhs - lhs, informational }
    }
}

/// Per-iteration metrics.
#[derive(Debug, Clone)]
pub struct TraceRow {
    pub k: usize,
    /// Residual `‖Fx^k + ξ^k‖` with the algorithm-produced witness.
    pub res_norm: f64,
    /// Forward-backward residual `‖G_{ηΦ} x^k‖`.
    pub fb_res: f64,
    /// `‖x^k − x*‖` when the solution is known.
    pub dist: Option<f64>,
    /// Potential/Lyapunov value when the method defines one.
    pub potential: Option<f64>,
    /// Running minimum of `res_norm`.
    pub best_res: f64,
    /// Whether all non-informational certificates at this iteration passed
    /// (`true` when no certificate applies).
    pub cert_pass: bool,
}

/// Immutable run description attached to a [`Trace`].
#[derive(Debug, Clone, Default)]
pub struct TraceMeta {
    pub problem_id: String,
    pub method: String,
    pub eta: f64,
    pub beta: f64,
    pub omega: f64,
    pub gamma: f64,
    pub rho: f64,
    pub seed: u64,
    pub iterations: usize,
    pub checked: bool,
}

/// Time series of metrics plus all certificate records for one run.
#[derive(Debug, Clone)]
pub struct Trace {
    pub rows: Vec<TraceRow>,
    pub certificates: Vec<Certificate>,
    /// Certificate families that were *not* emitted because the theorem
    /// hypotheses are not met, with the reason (never silently skipped).
    pub not_applicable: Vec<String>,
    pub meta: TraceMeta,
}

impl Trace {
    /// First failing non-informational certificate, if any.
    pub fn first_failure(&self) -> Option<&Certificate> {
        self.certificates.iter().find(|c| !c.pass && !c.informational)
    }

    /// The `res_norm` series.
    pub fn residuals(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.res_norm).collect()
    }
}

/// Coefficient schedule of an anchored/accelerated potential at index `k`.
#[derive(Debug, Clone, Copy)]
pub struct PotentialCoefficients {
    pub a_k: f64,
    pub b_k: f64,
    pub c_k: f64,
    pub t_k: f64,
}

/// Coefficients for the anchored potentials with the closing free-parameter
/// choices `b₀ = 1` (eag/feg/peag) and `b₀ = 2γ` (aeg/apeg).
pub fn potential_coefficients(
    method: Method,
    k: usize,
    eta: f64,
    rho: f64,
    gamma: f64,
    l: f64,
) -> Option<PotentialCoefficients> {
    let kf = k as f64;
    let t_k = schedule::t(k);
    match method {
        Method::Eag => {
            let b_k = kf + 1.0;
            Some(PotentialCoefficients { a_k: eta * b_k * (kf + 1.0) / 2.0, b_k, c_k: 0.0, t_k })
        }
        Method::Feg => {
            let b_k = kf + 1.0;
            let a_k = ((eta - 2.0 * rho) * (kf + 1.0) + 2.0 * rho) * (kf + 1.0) / 2.0;
            Some(PotentialCoefficients { a_k, b_k, c_k: 0.0, t_k })
        }
        Method::Peag => {
            let b_k = kf + 1.0;
            let a_k = (b_k / 2.0)
                * (eta * (kf + 1.0) - 4.0 * rho * kf + 2.0 * rho * (kf - 1.0) / (kf + 3.0));
            // M = 2(1+ω)L² with ω = 13/4.
            let m = 2.0 * (1.0 + 13.0 / 4.0) * l * l;
            let c_k = (b_k / 2.0)
                * (m * eta * eta * eta * (kf + 1.0) + 8.0 * rho * (kf + 2.0) * (kf + 2.0) / (kf + 3.0));
            Some(PotentialCoefficients { a_k, b_k, c_k, t_k })
        }
        Method::Aeg => {
            let b_k = gamma * (kf + 1.0) * (kf + 2.0); // b₀ = 2γ
            let a_k = b_k * (gamma * t_k + eta) / (2.0 * t_k);
            Some(PotentialCoefficients { a_k, b_k, c_k: 0.0, t_k })
        }
        Method::Apeg => {
            let b_k = gamma * (kf + 1.0) * (kf + 2.0); // b₀ = 2γ
            let a_k = b_k * (2.0 * gamma * t_k + eta) / (4.0 * t_k);
            let c_k = gamma * (kf + 1.0) * ((31.0 * gamma + 20.0 * rho) * (kf + 1.0) + gamma) / 2.0;
            Some(PotentialCoefficients { a_k, b_k, c_k, t_k })
        }
        _ => None,
    }
}

/// Evaluates the method's potential/Lyapunov function at a state, or `None`
/// for methods without one (forward/FBS and the two-resolvent family).
///
/// Reflected, golden-ratio and accelerated potentials require the known
/// solution `x*`; anchored potentials do not.
pub fn potential_value(
    state: &IterState,
    cfg: &SolverConfig,
    problem: &Problem,
) -> Result<Option<f64>> {
    let eta = cfg.eta;
    let k = state.k;
    let need_solution = || {
        problem.known_solution.clone().ok_or_else(|| {
            Error::Config(format!(
                "potential for '{}' requires a known solution",
                cfg.method
            ))
        })
    };
    let w_at_x = |st: &IterState| problem.f.eval(&st.x) + &st.xi;
    Ok(match cfg.method {
        Method::Rfbs => {
            let xs = need_solution()?;
            let x_prev = state.x_prev.as_ref().expect("rfbs state carries x_prev");
            let y_prev = state.y_prev.as_ref().expect("rfbs state carries y_prev");
            let fy_prev = state.f_y_prev.as_ref().expect("rfbs state carries F(y_prev)");
            let fxs = problem.f.eval(&xs);
            let l = problem.l;
            let dx = &state.x - x_prev;
            let v = (&state.x - &xs).norm_squared()
                + 2.0 * dx.norm_squared()
                + (1.0 - 2.0f64.sqrt() * l * eta) * (&state.x - y_prev).norm_squared()
                + 2.0 * eta * (fy_prev - &fxs).dot(&dx);
            Some(v)
        }
        Method::Gr => {
            let xs = need_solution()?;
            let omega = cfg.omega;
            let x_prev = state.x_prev.as_ref().expect("gr state carries x_prev");
            let y_prev = state.y_prev.as_ref().expect("gr state carries y_prev");
            // y^k is a deterministic function of (x^k, y^{k−1}).
            let y = ((omega - 1.0) / omega) * &state.x + (1.0 / omega) * y_prev;
            let golden = (1.0 + 5.0f64.sqrt()) / 2.0;
            let coeff = if omega <= golden {
                omega * (omega - 1.0) / 2.0
            } else {
                let psi = (2.0 * omega + 2.0 - omega * omega) / omega;
                psi * (omega - 1.0) / 2.0
            };
            Some(omega * (&y - &xs).norm_squared() + coeff * (&state.x - x_prev).norm_squared())
        }
        Method::Eag | Method::Feg => {
            let co = potential_coefficients(cfg.method, k, eta, cfg.rho, cfg.gamma, problem.l)
                .expect("anchored coefficients");
            let w = match cfg.method {
                Method::Feg => state.w.clone().expect("feg state carries w"),
                _ => w_at_x(state),
            };
            Some(co.a_k * w.norm_squared() + co.b_k * w.dot(&(&state.x - &state.x0)))
        }
        Method::Peag => {
            let co = potential_coefficients(cfg.method, k, eta, cfg.rho, cfg.gamma, problem.l)
                .expect("anchored coefficients");
            let w = w_at_x(state);
            let w_hat = state.w_hat.as_ref().expect("peag state carries ŵ");
            Some(
                co.a_k * w.norm_squared()
                    + co.b_k * w.dot(&(&state.x - &state.x0))
                    + co.c_k * (&w - w_hat).norm_squared(),
            )
        }
        Method::Aeg | Method::Apeg => {
            let xs = need_solution()?;
            let co = potential_coefficients(cfg.method, k, eta, cfg.rho, cfg.gamma, problem.l)
                .expect("accelerated coefficients");
            let y = state.y.as_ref().expect("accelerated state carries y");
            let z = state.z.as_ref().expect("accelerated state carries z");
            // w^{k−1}: zero by convention at k = 0.
            let w_prev = match cfg.method {
                Method::Aeg => state.w.clone().expect("aeg state carries w"),
                _ => {
                    if k == 0 {
                        Vector::zeros(state.x.len())
                    } else {
                        w_at_x(state)
                    }
                }
            };
            let anchor_term = (z + co.t_k * (y - z) - &xs).norm_squared();
            let mut v = co.a_k * w_prev.norm_squared() + co.b_k * w_prev.dot(&(z - y)) + anchor_term;
            if cfg.method == Method::Apeg {
                let w_hat_prev = state.w_hat.as_ref().expect("apeg state carries ŵ");
                v += co.c_k * (&w_prev - w_hat_prev).norm_squared();
            }
            Some(v)
        }
        _ => None,
    })
}

/// Index and value of the smallest entry (first occurrence wins ties).
pub fn best_iterate(series: &[f64]) -> Result<(usize, f64)> {
    if series.is_empty() {
        return Err(Error::Parameter("best_iterate requires a nonempty series".to_string()));
    }
    let mut bi = 0;
    let mut bv = series[0];
    for (i, &v) in series.iter().enumerate().skip(1) {
        if v < bv {
            bi = i;
            bv = v;
        }
    }
    Ok((bi, bv))
}

/// Least-squares fit of `log(value)` against `log(k+1)` over `k ≥ k_min`.
/// Returns `(slope, intercept, r²)`.
pub fn rate_fit(series: &[f64], k_min: usize) -> Result<(f64, f64, f64)> {
    let pts: Vec<(f64, f64)> = series
        .iter()
        .enumerate()
        .skip(k_min)
        .map(|(k, &v)| {
            if v > 0.0 {
                Ok(((k as f64 + 1.0).ln(), v.ln()))
            } else {
                Err(Error::Numeric(format!("rate_fit requires positive values, got {v} at k={k}")))
            }
        })
        .collect::<Result<_>>()?;
    if pts.len() < 10 {
        return Err(Error::Parameter(format!(
            "rate_fit needs at least 10 points beyond k_min, got {}",
            pts.len()
        )));
    }
    let n = pts.len() as f64;
    let (sx, sy): (f64, f64) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / n, sy / n);
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (x, y) in &pts {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    Ok((slope, intercept, r2))
}

fn get_const(consts: &[(&'static str, f64)], name: &str) -> Option<f64> {
    consts.iter().find(|(n, _)| *n == name).map(|(_, v)| *v)
}

/// Stateful per-run certificate checker driven by the run loop.
pub struct CertChecker {
    window: StepWindow,
    consts: Vec<(&'static str, f64)>,
    /// `‖x⁰ − x*‖²`, when the solution is known.
    d0_sq: Option<f64>,
    /// Row-0 residual squared `‖Fx⁰ + ξ⁰‖²`.
    w0_sq: f64,
    /// Which certificate families apply to this (method, problem, η) triple.
    emit_fejer: bool,
    emit_sum: bool,
    emit_last_ne: bool,
    emit_last_ni: bool,
    emit_contraction: bool,
    emit_potential: bool,
    emit_anchored_bound: bool,
    /// Reasons for skipped families.
    pub not_applicable: Vec<String>,
    // accumulators
    sum_primary: f64,
    sum_info: f64,
    prev_potential: Option<f64>,
    prev_last_aug: Option<f64>,
    /// Potential at state 1, the provable anchor for the accelerated bounds.
    p1: Option<f64>,
}

impl CertChecker {
    /// Decides which certificates apply, given the problem's declared class,
    /// the stepsize window, and the configured parameters.
    pub fn new(problem: &Problem, cfg: &SolverConfig, row0: &TraceRow) -> Result<CertChecker> {
        let window = stepsize_window(cfg.method, problem.l, cfg.rho, cfg.beta, cfg.omega)?;
        let consts = window.constants_at(cfg.eta);
        let has_solution = problem.known_solution.is_some();
        let d0_sq = row0.dist.map(|d| d * d);
        let monotone = problem.rho == 0.0;
        let ne = problem.t.is_zero();
        let cyclic3 = ne || problem.t.cyclic_order_m.is_some_and(|m| m >= 3);
        let in_window = window.contains(cfg.eta);
        let mut na = Vec::new();
        let mut checker = CertChecker {
            consts,
            d0_sq,
            w0_sq: row0.res_norm * row0.res_norm,
            emit_fejer: false,
            emit_sum: false,
            emit_last_ne: false,
            emit_last_ni: false,
            emit_contraction: false,
            emit_potential: false,
            emit_anchored_bound: false,
            not_applicable: Vec::new(),
            sum_primary: 0.0,
            sum_info: 0.0,
            prev_potential: None,
            prev_last_aug: None,
            p1: None,
            window,
        };
        match cfg.method {
            Method::Fw | Method::Fbs => {
                na.push(format!("{}: baseline method carries no certificates", cfg.method));
            }
            Method::Eg | Method::Peg | Method::Fbfs | Method::PastFbfs => {
                if !checker.window.feasible {
                    na.push(format!(
                        "{}: regime infeasible ({})",
                        cfg.method,
                        checker.window.violated.clone().unwrap_or_default()
                    ));
                } else if !in_window {
                    na.push(format!("{}: eta outside the admissible window", cfg.method));
                } else if !has_solution {
                    na.push(format!("{}: bounds need a known solution", cfg.method));
                } else if !cyclic3 {
                    na.push(format!("{}: set part lacks the cyclic-monotonicity hypothesis", cfg.method));
                } else {
                    checker.emit_sum = true;
                    if matches!(cfg.method, Method::Eg | Method::Fbfs) {
                        checker.emit_fejer = true;
                    }
                }
                if cfg.method == Method::Eg && cfg.beta == 1.0 {
                    if ne {
                        // Descent needs ψ = 1 − 4ρ/η − L²η(η+4ρ) ≥ 0.
                        let psi = 1.0 - 4.0 * cfg.rho / cfg.eta
                            - problem.l * problem.l * cfg.eta * (cfg.eta + 4.0 * cfg.rho);
                        if psi >= 0.0 {
                            checker.emit_last_ne = true;
                        } else {
                            na.push("eg: descent coefficient psi < 0 at this eta".to_string());
                        }
                    } else if monotone && cyclic3 && in_window {
                        checker.emit_last_ni = true;
                    }
                }
                if cfg.method == Method::Eg
                    && problem.mu > 0.0
                    && ne
                    && cfg.beta == 1.0
                    && cfg.eta < 1.0 / problem.l
                {
                    checker.emit_contraction = true;
                }
            }
            Method::Rfbs | Method::Gr => {
                if !in_window {
                    na.push(format!("{}: eta outside the admissible window", cfg.method));
                } else if !has_solution {
                    na.push(format!("{}: potential needs a known solution", cfg.method));
                } else if !cyclic3 {
                    na.push(format!("{}: set part lacks the cyclic-monotonicity hypothesis", cfg.method));
                } else {
                    checker.emit_potential = true;
                    checker.emit_sum = true;
                    if cfg.method == Method::Rfbs && monotone {
                        // Monotone composite: last-iterate bound applies.
                        checker.emit_last_ni = true;
                    }
                }
            }
            Method::Eag | Method::Feg | Method::Peag | Method::Aeg | Method::Apeg => {
                if !checker.window.feasible {
                    na.push(format!(
                        "{}: regime infeasible ({})",
                        cfg.method,
                        checker.window.violated.clone().unwrap_or_default()
                    ));
                } else if !in_window {
                    na.push(format!("{}: eta outside the admissible window", cfg.method));
                } else if cfg.method == Method::Eag && !monotone {
                    na.push("eag: requires a monotone single-valued part".to_string());
                } else if !cyclic3 {
                    na.push(format!("{}: set part lacks the cyclic-monotonicity hypothesis", cfg.method));
                } else {
                    let needs_solution_for_potential =
                        matches!(cfg.method, Method::Aeg | Method::Apeg);
                    checker.emit_potential = !needs_solution_for_potential || has_solution;
                    checker.emit_anchored_bound = has_solution;
                    if !has_solution {
                        na.push(format!("{}: explicit bound needs a known solution", cfg.method));
                    }
                }
            }
        }
        checker.not_applicable = na;
        Ok(checker)
    }

    /// The stepsize window the checker was built from.
    pub fn window(&self) -> &StepWindow {
        &self.window
    }

    fn c(&self, name: &str) -> f64 {
        get_const(&self.consts, name).unwrap_or(f64::NAN)
    }

    /// Evaluates all applicable certificates for the transition
    /// `prev → next` (with their metric rows) and returns them.
    pub fn check_transition(
        &mut self,
        prev: &IterState,
        next: &IterState,
        prev_row: &TraceRow,
        next_row: &TraceRow,
        problem: &Problem,
        cfg: &SolverConfig,
    ) -> Vec<Certificate> {
        let mut out = Vec::new();
        let k1 = next.k; // index of the new state
        let res_sq = next_row.res_norm * next_row.res_norm;
        let prev_res_sq = prev_row.res_norm * prev_row.res_norm;
        let l = problem.l;

        if self.emit_fejer {
            if let (Some(d1), Some(d0)) = (next_row.dist, prev_row.dist) {
                out.push(Certificate::check(CertKind::Fejer, k1, d1, d0, false));
            }
        }

        if self.emit_contraction {
            if let (Some(d1), Some(d0)) = (next_row.dist, prev_row.dist) {
                let e2 = cfg.eta * cfg.eta;
                let factor = 1.0 - e2 * (1.0 - l * l * e2) * problem.mu * problem.mu;
                out.push(Certificate::check(
                    CertKind::LinearContraction,
                    k1,
                    d1 * d1,
                    factor * d0 * d0,
                    false,
                ));
            }
        }

        if self.emit_potential {
            if let Some(v1) = next_row.potential {
                // For rfbs/gr/aeg/apeg the decrease starts at the V₁ → V₂
                // transition: the V₀ → V₁ step leans on a formal
                // initial-witness/zero-residual convention pairing the
                // starting point with a graph element it need not belong to.
                let skip = matches!(
                    cfg.method,
                    Method::Rfbs | Method::Gr | Method::Aeg | Method::Apeg
                ) && k1 == 1;
                if matches!(cfg.method, Method::Aeg | Method::Apeg) && k1 == 1 {
                    self.p1 = Some(v1);
                }
                if !skip {
                    if let Some(v0) = prev_row.potential.or(self.prev_potential) {
                        out.push(Certificate::check(CertKind::PotentialDecrease, k1, v1, v0, false));
                    }
                }
                self.prev_potential = Some(v1);
            }
        }

        if self.emit_sum {
            let d0_sq = self.d0_sq.unwrap_or(f64::NAN);
            match cfg.method {
                Method::Eg | Method::Fbfs => {
                    let ne = problem.t.is_zero();
                    if ne && cfg.method == Method::Eg {
                        // Sum starts at l = 0 (genuine zero witnesses).
                        if k1 == 1 {
                            self.sum_primary += prev_res_sq;
                        }
                        self.sum_primary += res_sq;
                        out.push(Certificate::check(
                            CertKind::Summability,
                            k1,
                            self.sum_primary,
                            self.c("C_rho_ne") * d0_sq,
                            false,
                        ));
                    } else {
                        // Composite case: sum starts at l = 1 (the proofs'
                        // initial-witness convention zeroes the l = 0 term).
                        self.sum_primary += res_sq;
                        out.push(Certificate::check(
                            CertKind::Summability,
                            k1,
                            self.sum_primary,
                            self.c("C_rho_ni") * d0_sq,
                            false,
                        ));
                    }
                }
                Method::Peg => {
                    let ne = problem.t.is_zero();
                    let gap = (&next.x - next.y_prev.as_ref().expect("peg state carries y_prev"))
                        .norm_squared();
                    if ne {
                        if k1 == 1 {
                            self.sum_primary += prev_res_sq; // l = 0 gap term is 0
                        }
                        self.sum_primary += res_sq + self.c("kappa_ne") * gap;
                        out.push(Certificate::check(
                            CertKind::Summability,
                            k1,
                            self.sum_primary,
                            self.c("C_hat_rho_ne") * d0_sq,
                            false,
                        ));
                    } else {
                        self.sum_primary += res_sq;
                        out.push(Certificate::check(
                            CertKind::Summability,
                            k1,
                            self.sum_primary,
                            self.c("C0_hat_ni") * d0_sq,
                            false,
                        ));
                        self.sum_info += res_sq + self.c("psi_ni") * gap;
                        out.push(Certificate::check(
                            CertKind::Summability,
                            k1,
                            self.sum_info,
                            self.c("C0_hat_ni") * d0_sq,
                            true,
                        ));
                    }
                }
                Method::PastFbfs => {
                    let gap = (&next.x - next.y_prev.as_ref().expect("state carries y_prev"))
                        .norm_squared();
                    self.sum_primary += res_sq;
                    out.push(Certificate::check(
                        CertKind::Summability,
                        k1,
                        self.sum_primary,
                        self.c("C_hat_rho_ni") * d0_sq,
                        false,
                    ));
                    self.sum_info += res_sq + self.c("sum_weight") * gap;
                    out.push(Certificate::check(
                        CertKind::Summability,
                        k1,
                        self.sum_info,
                        self.c("C_hat_rho_ni") * d0_sq,
                        true,
                    ));
                }
                Method::Rfbs => {
                    let fy_prev = next.f_y_prev.as_ref().expect("rfbs state carries F(y_prev)");
                    let fx = problem.f.eval(&next.x);
                    let aug = self.c("kappa") * (&fx - fy_prev).norm_squared();
                    self.sum_primary += res_sq + aug;
                    out.push(Certificate::check(
                        CertKind::Summability,
                        k1,
                        self.sum_primary,
                        self.c("C0") * d0_sq,
                        false,
                    ));
                }
                Method::Gr => {
                    let golden = (1.0 + 5.0f64.sqrt()) / 2.0;
                    let cname = if cfg.omega <= golden { "C0" } else { "C0_hat" };
                    self.sum_primary += res_sq;
                    out.push(Certificate::check(
                        CertKind::Summability,
                        k1,
                        self.sum_primary,
                        self.c(cname) * d0_sq,
                        false,
                    ));
                }
                _ => {}
            }
        }

        if self.emit_last_ne {
            // ‖Fx^{k+1}‖² ≤ ‖Fx^k‖² − ψ‖Fy^k − Fx^k‖² (equation case).
            let psi = self.c("psi");
            let fy = next.f_y_prev.as_ref().expect("eg state carries F(y^k)");
            let fx_prev = problem.f.eval(&prev.x);
            let rhs = prev_res_sq - psi * (fy - &fx_prev).norm_squared();
            out.push(Certificate::check(CertKind::LastIterateMonotone, k1, res_sq, rhs, false));
        }

        if self.emit_last_ni {
            match cfg.method {
                Method::Eg => {
                    // ‖w^{k+1}‖ ≤ ‖w^k‖ from k ≥ 1 (the k = 0 witness is the
                    // arbitrary initial rule, not covered by the descent).
                    if next.k >= 2 || problem.t.is_zero() {
                        out.push(Certificate::check(
                            CertKind::LastIterateMonotone,
                            k1,
                            next_row.res_norm,
                            prev_row.res_norm,
                            false,
                        ));
                    }
                    // Best-iterate implies the explicit last-iterate decay for
                    // the monotone composite case: ‖w^k‖² ≤ C₀d₀²/k.
                    if let Some(d0_sq) = self.d0_sq {
                        let cname = if problem.t.is_zero() { "C_rho_ne" } else { "C0_ni" };
                        out.push(Certificate::check(
                            CertKind::ExplicitBound,
                            k1,
                            res_sq,
                            self.c(cname) * d0_sq / k1 as f64,
                            false,
                        ));
                    }
                }
                Method::Rfbs => {
                    if let Some(d0_sq) = self.d0_sq {
                        out.push(Certificate::check(
                            CertKind::ExplicitBound,
                            k1,
                            res_sq,
                            self.c("C0") * d0_sq / (k1 as f64 + 1.0),
                            false,
                        ));
                    }
                    // Augmented descent (proof-form kappa), informational.
                    let fy_prev = next.f_y_prev.as_ref().expect("rfbs F(y_prev)");
                    let fx = problem.f.eval(&next.x);
                    let aug = res_sq + self.c("kappa") * (&fx - fy_prev).norm_squared();
                    if let Some(prev_aug) = self.prev_last_aug {
                        out.push(Certificate::check(
                            CertKind::LastIterateMonotone,
                            k1,
                            aug,
                            prev_aug,
                            true,
                        ));
                    }
                    self.prev_last_aug = Some(aug);
                }
                _ => {}
            }
        }

        if self.emit_anchored_bound {
            if let Some(d0_sq) = self.d0_sq {
                let eta = cfg.eta;
                let rho = cfg.rho;
                let w0_sq = self.w0_sq;
                let (lhs, rhs) = match cfg.method {
                    Method::Eag => {
                        let kk = (k1 as f64 + 1.0) * (k1 as f64 + 1.0);
                        (res_sq, (4.0 * d0_sq + 2.0 * eta * eta * w0_sq) / (eta * eta * kk))
                    }
                    Method::Feg => {
                        let kk = (k1 as f64 + 1.0) * (k1 as f64 + 1.0);
                        let g = eta - 2.0 * rho;
                        (res_sq, (4.0 * d0_sq + 2.0 * eta * g * w0_sq) / (g * g * kk))
                    }
                    Method::Peag => {
                        // Constants from the balanced Young split of the
                        // potential's lower bound: coefficient (η−4ρ)(k+1)²/4
                        // on ‖w^k‖² with offset d₀²/(η−4ρ).
                        let kk = (k1 as f64 + 1.0) * (k1 as f64 + 1.0);
                        let g = eta - 4.0 * rho;
                        (
                            res_sq,
                            (4.0 * d0_sq / (g * g)
                                + 2.0 * (3.0 * eta - 2.0 * rho) / (3.0 * g) * w0_sq)
                                / kk,
                        )
                    }
                    Method::Aeg | Method::Apeg => {
                        // The potential only provably decreases from state 1,
                        // so the sound residual bounds anchor at P₁: the
                        // potential lower bound gives, for k ≥ 1,
                        //   aeg:  ‖w^{k−1}‖² ≤ 4 P₁ / (γ²(k+1)²),
                        //   apeg: ‖w^{k−1}‖² ≤ 4 P₁ / (γ²(k+1)(k+3)).
                        // The d₀-anchored variants (P₁ replaced by d₀²) are
                        // recorded as informational.
                        let g2 = cfg.gamma * cfg.gamma;
                        let kb = k1 as f64;
                        let denom = match cfg.method {
                            Method::Aeg => g2 * (kb + 1.0) * (kb + 1.0),
                            _ => g2 * (kb + 1.0) * (kb + 3.0),
                        };
                        out.push(Certificate::check(
                            CertKind::ExplicitBound,
                            k1,
                            res_sq,
                            4.0 * d0_sq / denom,
                            true,
                        ));
                        let p1 = self.p1.unwrap_or(f64::NAN);
                        (res_sq, 4.0 * p1 / denom)
                    }
                    _ => unreachable!(),
                };
                out.push(Certificate::check(CertKind::ExplicitBound, k1, lhs, rhs, false));
            }
        }

        out
    }
}

/// Runs `iterations` steps of `cfg.method` from `x0`, recording metrics and
/// (when `check` is set) every applicable certificate.
///
/// This is the library-level driver: it does *not* gate `eta` against the
/// stepsize window (the CLI harness does); out-of-window runs simply produce
/// failing or inapplicable certificates.
pub fn run_solver(
    problem: &Problem,
    cfg: &SolverConfig,
    x0: Vector,
    iterations: usize,
    check: bool,
) -> Result<Trace> {
    let mut state = crate::solvers::init_state(problem, cfg, x0)?;
    let row_metrics = |st: &IterState, best: f64| -> Result<TraceRow> {
        let res = crate::operator_core::residual_norm(problem, &st.x, &st.xi)?;
        if !res.is_finite() {
            return Err(Error::Numeric(format!("residual became non-finite at k = {}", st.k)));
        }
        let fb = fb_residual(problem, cfg.eta, &st.x)?.norm();
        let dist = problem.known_solution.as_ref().map(|xs| (&st.x - xs).norm());
        let potential = potential_value(st, cfg, problem)?;
        Ok(TraceRow {
            k: st.k,
            res_norm: res,
            fb_res: fb,
            dist,
            potential,
            best_res: best.min(res),
            cert_pass: true,
        })
    };
    let mut rows = Vec::with_capacity(iterations + 1);
    rows.push(row_metrics(&state, f64::INFINITY)?);
    let mut checker = if check { Some(CertChecker::new(problem, cfg, &rows[0])?) } else { None };
    let mut certificates = Vec::new();
    for _ in 0..iterations {
        let next = crate::solvers::step(&state, cfg, problem)?;
        let best = rows.last().unwrap().best_res;
        let mut row = row_metrics(&next, best)?;
        if let Some(ch) = checker.as_mut() {
            let prev_row = rows.last().unwrap().clone();
            let certs = ch.check_transition(&state, &next, &prev_row, &row, problem, cfg);
            row.cert_pass = certs.iter().all(|c| c.pass || c.informational);
            certificates.extend(certs);
        }
        rows.push(row);
        state = next;
    }
    let not_applicable = checker.map(|c| c.not_applicable).unwrap_or_default();
    Ok(Trace {
        rows,
        certificates,
        not_applicable,
        meta: TraceMeta {
            problem_id: problem.name.clone(),
            method: cfg.method.as_str().to_string(),
            eta: cfg.eta,
            beta: cfg.beta,
            omega: cfg.omega,
            gamma: cfg.gamma,
            rho: cfg.rho,
            seed: 0,
            iterations,
            checked: check,
        },
    })
}
