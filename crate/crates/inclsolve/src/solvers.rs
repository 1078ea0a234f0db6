//! Step kernels for every scheme, stepsize windows with their certified
//! constants, and the parameter schedules of the anchored/accelerated methods.
//!
//! Each kernel is a pure state transformer `IterState → IterState` that
//! advances exactly one iteration and records every internal witness, so the
//! instrumentation layer can evaluate potentials and certificates without
//! re-deriving anything.
//!
//! Scheme tags (see [`Method`]):
//!
//! | tag | scheme |
//! |-----|--------|
//! | `fw` | plain forward (gradient) step — divergence baseline |
//! | `fbs` | forward-backward splitting |
//! | `eg` | extragradient (two resolvents; `β < 1` gives the "plus" variant) |
//! | `peg` | past-extragradient (Popov / optimistic) |
//! | `fbfs` | forward-backward-forward splitting (Tseng-type) |
//! | `past_fbfs` | past-FBFS (optimistic-gradient form; `β = 1` is FRBS) |
//! | `rfbs` | reflected forward-backward splitting |
//! | `gr` | golden-ratio method, relaxation `ω ∈ (1, 1+√3)` |
//! | `eag` | extra-anchored gradient (Halpern anchor) |
//! | `feg` | fast extragradient (anchored, co-hypomonotone capable) |
//! | `peag` | past extra-anchored gradient |
//! | `aeg` | Nesterov-accelerated extragradient |
//! | `apeg` | Nesterov-accelerated past-extragradient |

use crate::operator_core::{resolvent_apply, Problem};
use crate::{Error, Result, Vector};

/// Scheme selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Fw,
    Fbs,
    Eg,
    Peg,
    Fbfs,
    PastFbfs,
    Rfbs,
    Gr,
    Eag,
    Feg,
    Peag,
    Aeg,
    Apeg,
}

impl Method {
    /// All methods in canonical order.
    pub const ALL: [Method; 13] = [
        Method::Fw,
        Method::Fbs,
        Method::Eg,
        Method::Peg,
        Method::Fbfs,
        Method::PastFbfs,
        Method::Rfbs,
        Method::Gr,
        Method::Eag,
        Method::Feg,
        Method::Peag,
        Method::Aeg,
        Method::Apeg,
    ];

    /// Canonical CLI tag.
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Fw => "fw",
            Method::Fbs => "fbs",
            Method::Eg => "eg",
            Method::Peg => "peg",
            Method::Fbfs => "fbfs",
            Method::PastFbfs => "past_fbfs",
            Method::Rfbs => "rfbs",
            Method::Gr => "gr",
            Method::Eag => "eag",
            Method::Feg => "feg",
            Method::Peag => "peag",
            Method::Aeg => "aeg",
            Method::Apeg => "apeg",
        }
    }

    /// Parses a CLI tag (accepts `og` as an alias for `past_fbfs`).
    pub fn parse(s: &str) -> Result<Method> {
        match s {
            "fw" => Ok(Method::Fw),
            "fbs" => Ok(Method::Fbs),
            "eg" => Ok(Method::Eg),
            "peg" => Ok(Method::Peg),
            "fbfs" => Ok(Method::Fbfs),
            "past_fbfs" | "og" => Ok(Method::PastFbfs),
            "rfbs" => Ok(Method::Rfbs),
            "gr" => Ok(Method::Gr),
            "eag" => Ok(Method::Eag),
            "feg" => Ok(Method::Feg),
            "peag" => Ok(Method::Peag),
            "aeg" => Ok(Method::Aeg),
            "apeg" => Ok(Method::Apeg),
            other => Err(Error::Config(format!("unknown method tag '{other}'"))),
        }
    }

    /// Whether the method uses the Halpern anchor / Nesterov schedule.
    pub fn is_anchored(&self) -> bool {
        matches!(self, Method::Eag | Method::Feg | Method::Peag | Method::Aeg | Method::Apeg)
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Anchored/accelerated parameter schedules, all exact rationals in `k`.
pub mod schedule {
    /// Anchor weight `τ_k = 1/(k+2)`.
    pub fn tau(k: usize) -> f64 {
        1.0 / (k as f64 + 2.0)
    }

    /// Nesterov index `t_k = k+2`.
    pub fn t(k: usize) -> f64 {
        k as f64 + 2.0
    }

    /// Momentum weight `θ_k = (t_k − 1)/t_{k+1}`.
    pub fn theta(k: usize) -> f64 {
        (t(k) - 1.0) / t(k + 1)
    }

    /// Correction weight `ν_k = t_k/t_{k+1}`.
    pub fn nu(k: usize) -> f64 {
        t(k) / t(k + 1)
    }

    /// Damped stepsize `η̂_k = (1 − τ_k)η = ((t_k − 1)/t_k)η`
    /// (the two printed forms coincide because `τ_k = 1/t_k`).
    pub fn eta_hat(eta: f64, k: usize) -> f64 {
        (1.0 - tau(k)) * eta
    }
}

/// Per-run solver parameters.
#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub method: Method,
    /// Stepsize `η`.
    pub eta: f64,
    /// Scaling factor `β ∈ (0, 1]` (two-resolvent and Tseng-type schemes).
    pub beta: f64,
    /// Relaxation `ω ∈ (1, 1+√3)` (`gr` only).
    pub omega: f64,
    /// `γ > 0` (`aeg`/`apeg` only; linked to `η` by `η = γ+2ρ` resp.
    /// `η = 2(3γ+2ρ)`).
    pub gamma: f64,
    /// Assumed co-hypomonotonicity modulus `ρ ≥ 0` used by the schedules.
    pub rho: f64,
}

impl SolverConfig {
    /// Parameters for a method with everything except `η` defaulted.
    pub fn new(method: Method, eta: f64) -> Self {
        Self { method, eta, beta: 1.0, omega: (1.0 + 5.0f64.sqrt()) / 2.0, gamma: 0.0, rho: 0.0 }
    }
}

/// `γ` consistent with a given `η` for `aeg` (`η = γ + 2ρ`).
pub fn aeg_gamma(eta: f64, rho: f64) -> f64 {
    eta - 2.0 * rho
}

/// `γ` consistent with a given `η` for `apeg` (`η = 2(3γ + 2ρ)`).
pub fn apeg_gamma(eta: f64, rho: f64) -> f64 {
    (eta - 4.0 * rho) / 6.0
}

/// Admissible stepsize interval for a method, with feasibility verdict and
/// the constants of the matching convergence statements.
#[derive(Debug, Clone)]
pub struct StepWindow {
    /// Open lower endpoint (0 for most methods).
    pub lo: f64,
    /// Upper endpoint.
    pub hi: f64,
    /// Whether `hi` itself is admissible.
    pub hi_closed: bool,
    /// Whether the regime admits any stepsize at all.
    pub feasible: bool,
    /// Human-readable description of the violated threshold, when infeasible.
    pub violated: Option<String>,
    method: Method,
    l: f64,
    rho: f64,
    beta: f64,
    omega: f64,
}

impl StepWindow {
    /// Whether `η` lies in the window (degenerate windows admit exactly `hi`).
    pub fn contains(&self, eta: f64) -> bool {
        if !self.feasible {
            return false;
        }
        if self.lo == self.hi {
            return eta == self.hi;
        }
        eta > self.lo && (if self.hi_closed { eta <= self.hi } else { eta < self.hi })
    }

    /// Human-readable interval rendering, e.g. `(0, 0.5)` or `(0.1, 1]`.
    pub fn describe(&self) -> String {
        if !self.feasible {
            return format!("∅ ({})", self.violated.clone().unwrap_or_default());
        }
        if self.lo == self.hi {
            return format!("{{{}}}", self.hi);
        }
        format!("({}, {}{}", self.lo, self.hi, if self.hi_closed { "]" } else { ")" })
    }

    /// Default stepsize: midpoint of the window; `hi/2` for windows touching
    /// 0 (the geometrically natural parametrization); `hi` for degenerate
    /// windows and for the accelerated methods, whose theorems single out the
    /// boundary choice (`γ = 1/L − 2ρ`, resp. the `γ`-condition boundary).
    pub fn default_eta(&self) -> f64 {
        if self.lo == self.hi || matches!(self.method, Method::Aeg | Method::Apeg) {
            self.hi
        } else if self.lo == 0.0 {
            self.hi / 2.0
        } else {
            (self.lo + self.hi) / 2.0
        }
    }

    /// The convergence-statement constants for this method evaluated at `η`
    /// (e.g. `C_rho`, `C0`, `kappa`, `psi`, `phi`). Anchored methods carry no
    /// precomputable constants here: their explicit bounds depend on the
    /// initial point and are assembled by the instrumentation layer.
    pub fn constants_at(&self, eta: f64) -> Vec<(&'static str, f64)> {
        let (l, rho, beta, omega) = (self.l, self.rho, self.beta, self.omega);
        let l2 = l * l;
        let e2 = eta * eta;
        match self.method {
            Method::Eg | Method::Fbfs => {
                let denom = eta * beta - 6.0 * beta * beta * rho - (3.0 * l * rho + 1.0) * l * e2;
                vec![
                    ("C_rho_ne", beta * beta / (eta * denom)),
                    ("psi", 1.0 - 4.0 * rho / eta - l2 * eta * (eta + 4.0 * rho)),
                    ("C0_ni", (3.0 + 2.0 * l2) / (e2 * (beta - l * eta))),
                    ("C_rho_ni", (3.0 + 2.0 * l2) / (eta * denom)),
                ]
            }
            Method::Peg => {
                let denom = beta * eta - 3.0 * l * e2 - 4.0 * rho;
                let c_hat = (2.0 * l2 * e2 + 3.0) / (denom * eta);
                let kappa = (2.0 * l2 * e2 + 3.0) * l / (2.0 * denom);
                let kappa_hat = 2.0 * (eta + 4.0 * rho) * l2 * eta / (1.0 - 2.0 * l2 * e2);
                let m_rho = c_hat * (l2 * kappa_hat / kappa).max(1.0);
                vec![
                    ("C_hat_rho_ne", c_hat),
                    ("kappa_ne", kappa),
                    ("kappa_hat", kappa_hat),
                    ("M_rho", m_rho),
                    ("C0_hat_ni", (3.0 + 2.0 * l2) / (e2 * (beta - 3.0 * l * eta))),
                    ("psi_ni", l * (3.0 + 2.0 * l2) / (2.0 * eta * (beta - 3.0 * l * eta))),
                    ("kappa_ni", (1.0 + 9.0 * l2 * e2) / (1.0 - 9.0 * l2 * e2)),
                ]
            }
            Method::PastFbfs => {
                let denom = beta * eta - 4.0 * beta * beta * rho - 3.0 * (4.0 * l * rho + 1.0) * l * e2;
                vec![
                    ("C_hat_rho_ni", (3.0 + 2.0 * l2) / (eta * denom)),
                    ("sum_weight", (l * e2 + 8.0 * beta * beta * rho) / (2.0 * eta)),
                ]
            }
            Method::Rfbs => {
                let sqrt2 = 2.0f64.sqrt();
                vec![
                    (
                        "C0",
                        (5.0 * l2 * e2 + 3.0) / (3.0 * e2 * (1.0 - (1.0 + sqrt2) * l * eta)),
                    ),
                    ("kappa", 2.0 * l2 * e2 / (1.0 - 2.0 * l2 * e2)),
                ]
            }
            Method::Gr => {
                let golden = (1.0 + 5.0f64.sqrt()) / 2.0;
                if omega <= golden {
                    let w2 = omega * omega;
                    vec![
                        ("phi", (w2 - 4.0 * l2 * e2) / (2.0 * omega)),
                        (
                            "C0",
                            (w2 - 2.0 * l2 * e2) * w2 / ((w2 - 4.0 * l2 * e2) * e2 * (omega - 1.0)),
                        ),
                        ("psi", (omega - 1.0) * (w2 - 4.0 * l2 * e2) / (2.0 * omega)),
                    ]
                } else {
                    let psi_w = (2.0 * omega + 2.0 - omega * omega) / omega;
                    let p2 = psi_w * psi_w;
                    vec![
                        ("psi_omega", psi_w),
                        ("kappa", (p2 - 4.0 * l2 * e2) / (2.0 * psi_w)),
                        (
                            "C0_hat",
                            // Numerator ω²ψ² − 2L²η²(2ω²−ψ²): the balanced
                            // Young split gives ω²ψ², which keeps the
                            // constant positive on the whole window.
                            (omega * omega * p2 - 2.0 * l2 * e2 * (2.0 * omega * omega - p2))
                                * omega
                                / ((omega - 1.0) * (p2 - 4.0 * l2 * e2) * e2 * psi_w),
                        ),
                    ]
                }
            }
            _ => vec![],
        }
    }
}

/// Admissible stepsize window for `method` per the matching convergence
/// statement, together with feasibility of the monotonicity regime.
///
/// Notes on the co-hypomonotone regimes:
///
/// * For `eg`/`fbfs` the radicand `1 − 24Lρ(3Lρ+1)` must be nonnegative, i.e.
///   `Lρ ≤ (√6−2)/12 ≈ 0.03746`; the window is
///   `β(1 ∓ √(1−24Lρ(3Lρ+1)))/(2L(3Lρ+1))`.
/// * For `past_fbfs` the radicand `1 − 48Lρ(4Lρ+1)` requires
///   `Lρ ≤ (2√3−3)/24 ≈ 0.01934`.
/// * `peg` requires `Lρ ≤ β²/12`.
/// * `feg`/`aeg` require `2Lρ < 1`, `peag` requires `2√34·Lρ < 1`, `apeg`
///   requires `8√3·Lρ < 1`.
pub fn stepsize_window(
    method: Method,
    l: f64,
    rho: f64,
    beta: f64,
    omega: f64,
) -> Result<StepWindow> {
    if !(l > 0.0) {
        return Err(Error::Parameter(format!("Lipschitz constant must be positive, got {l}")));
    }
    if rho < 0.0 {
        return Err(Error::Parameter(format!("rho must be nonnegative, got {rho}")));
    }
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::Parameter(format!("beta must lie in (0, 1], got {beta}")));
    }
    let mk = |lo: f64, hi: f64, hi_closed: bool, feasible: bool, violated: Option<String>| StepWindow {
        lo,
        hi,
        hi_closed,
        feasible,
        violated,
        method,
        l,
        rho,
        beta,
        omega,
    };
    let infeasible = |msg: String| mk(f64::NAN, f64::NAN, false, false, Some(msg));
    let t = l * rho;
    Ok(match method {
        Method::Fw | Method::Fbs => mk(0.0, 1.0 / l, false, true, None),
        Method::Eg | Method::Fbfs => {
            let rad = 1.0 - 24.0 * t * (3.0 * t + 1.0);
            if rad < 0.0 {
                infeasible(format!(
                    "L·rho = {t} exceeds (√6−2)/12 ≈ {:.6}: 1 − 24Lρ(3Lρ+1) < 0",
                    (6.0f64.sqrt() - 2.0) / 12.0
                ))
            } else {
                let den = 2.0 * l * (3.0 * t + 1.0);
                mk(beta * (1.0 - rad.sqrt()) / den, beta * (1.0 + rad.sqrt()) / den, false, true, None)
            }
        }
        Method::Peg => {
            let rad = beta * beta - 12.0 * t;
            if rad < 0.0 {
                infeasible(format!("L·rho = {t} exceeds beta²/12 = {}", beta * beta / 12.0))
            } else {
                mk((beta - rad.sqrt()) / (6.0 * l), (beta + rad.sqrt()) / (6.0 * l), false, true, None)
            }
        }
        Method::PastFbfs => {
            let rad = 1.0 - 48.0 * t * (4.0 * t + 1.0);
            if rad < 0.0 {
                infeasible(format!(
                    "L·rho = {t} exceeds (2√3−3)/24 ≈ {:.6}",
                    (2.0 * 3.0f64.sqrt() - 3.0) / 24.0
                ))
            } else {
                let den = 6.0 * l * (4.0 * t + 1.0);
                mk(beta * (1.0 - rad.sqrt()) / den, beta * (1.0 + rad.sqrt()) / den, false, true, None)
            }
        }
        Method::Rfbs => mk(0.0, (2.0f64.sqrt() - 1.0) / l, false, true, None),
        Method::Gr => {
            let golden = (1.0 + 5.0f64.sqrt()) / 2.0;
            if !(omega > 1.0 && omega < 1.0 + 3.0f64.sqrt()) {
                return Err(Error::Parameter(format!("omega must lie in (1, 1+√3), got {omega}")));
            }
            if omega <= golden {
                mk(0.0, omega / (2.0 * l), false, true, None)
            } else {
                let psi = (2.0 * omega + 2.0 - omega * omega) / omega;
                mk(0.0, psi / (2.0 * l), false, true, None)
            }
        }
        Method::Eag => mk(0.0, 1.0 / l, true, true, None),
        Method::Feg | Method::Aeg => {
            if 2.0 * t >= 1.0 {
                infeasible(format!("2L·rho = {} must be < 1", 2.0 * t))
            } else {
                mk(2.0 * rho, 1.0 / l, true, true, None)
            }
        }
        Method::Peag => {
            let star = (2.0f64 / 17.0).sqrt() / l;
            if 2.0 * 34.0f64.sqrt() * t >= 1.0 {
                infeasible(format!("2√34·L·rho = {} must be < 1", 2.0 * 34.0f64.sqrt() * t))
            } else {
                mk(star, star, true, true, None)
            }
        }
        Method::Apeg => {
            if 8.0 * 3.0f64.sqrt() * t >= 1.0 {
                infeasible(format!("8√3·L·rho = {} must be < 1", 8.0 * 3.0f64.sqrt() * t))
            } else {
                // Boundary of 16L²(29γ² + 37ργ + 12ρ²) ≤ 1 (the expanded
                // printed condition 16L²[3(3γ+2ρ)² + γ(2γ+ρ)] ≤ 1).
                let disc = 29.0 / (4.0 * l * l) - 23.0 * rho * rho;
                let gamma_max = (-37.0 * rho + disc.sqrt()) / 58.0;
                mk(4.0 * rho, 2.0 * (3.0 * gamma_max + 2.0 * rho), true, true, None)
            }
        }
    })
}

/// Full per-iteration state. Field meaning is method-dependent; unused fields
/// stay `None`. Witnesses are always reconstructed from resolvent outputs,
/// never recomputed independently.
#[derive(Debug, Clone)]
pub struct IterState {
    /// Iteration index of this state.
    pub k: usize,
    /// Current solution iterate `x^k`. For `aeg`/`apeg` (whose primary
    /// sequence is `y`) this is the latest resolvent output `x^{k−1}`.
    pub x: Vector,
    /// Witness `ξ` at [`Self::x`] (`ξ^k`, resp. `ξ^{k−1}` for `aeg`/`apeg`).
    pub xi: Vector,
    /// `x^{k−1}` where a method needs it (`rfbs`, `gr`) or tracks it
    /// (`aeg`/`apeg`: `x^{k−2}`); populated by every method after step 1.
    pub x_prev: Option<Vector>,
    /// `y^{k−1}` (past/extrapolation methods), initialized to `x⁰`.
    pub y_prev: Option<Vector>,
    /// Cached `F(y^{k−1})` where the scheme reuses it.
    pub f_y_prev: Option<Vector>,
    /// `y^k` for `aeg`/`apeg` (the point of the next resolvent).
    pub y: Option<Vector>,
    /// `z^k` for `aeg`/`apeg`.
    pub z: Option<Vector>,
    /// Anchor `x⁰` (also `y⁰` for the accelerated methods).
    pub x0: Vector,
    /// Maintained composite vector: `w^k = Fx^k + ξ^k` for `feg`;
    /// `w^{k−1}` for `aeg` (zero at `k = 0`).
    pub w: Option<Vector>,
    /// `ŵ^k = Fy^{k−1} + ξ^k` for `peag`; `ŵ^{k−1}` for `apeg` (zero at
    /// `k = 0`).
    pub w_hat: Option<Vector>,
    /// `ζ^k ∈ Ty^k` from the latest extrapolation resolvent
    /// (`eg`/`peg`/`fbfs`/`past_fbfs`/`eag`).
    pub zeta: Option<Vector>,
}

impl IterState {
    fn bare(k: usize, x: Vector, xi: Vector, x0: Vector) -> Self {
        Self {
            k,
            x,
            xi,
            x_prev: None,
            y_prev: None,
            f_y_prev: None,
            y: None,
            z: None,
            x0,
            w: None,
            w_hat: None,
            zeta: None,
        }
    }
}

/// Builds the initial state at `x⁰`.
///
/// The initial witness `ξ⁰` follows a fixed deterministic rule: one
/// preliminary resolvent call `J_{ηT}(x⁰ − ηF x⁰)` whose witness is mapped
/// back to `x⁰` (exact whenever `x⁰ − ηFx⁰` stays in the constraint set, and
/// identically zero when `T = 0`). Past-type methods set `y^{−1} := x⁰`;
/// accelerated methods set `z⁰ := y⁰ := x⁰` and zero `w^{−1}`/`ŵ^{−1}`.
pub fn init_state(problem: &Problem, cfg: &SolverConfig, x0: Vector) -> Result<IterState> {
    if x0.len() != problem.dim {
        return Err(Error::Shape { expected: problem.dim, found: x0.len() });
    }
    if !(cfg.eta > 0.0) {
        return Err(Error::Parameter(format!("stepsize must be positive, got {}", cfg.eta)));
    }
    let fx0 = problem.f.eval(&x0);
    let xi0 = if matches!(cfg.method, Method::Fw) || problem.t.is_zero() {
        Vector::zeros(x0.len())
    } else {
        let (_p, xi) = resolvent_apply(&problem.t, cfg.eta, &(&x0 - cfg.eta * &fx0))?;
        xi
    };
    let mut st = IterState::bare(0, x0.clone(), xi0.clone(), x0.clone());
    match cfg.method {
        Method::Peg | Method::PastFbfs => {
            st.y_prev = Some(x0.clone());
            st.f_y_prev = Some(fx0);
        }
        Method::Rfbs => {
            st.x_prev = Some(x0.clone());
            st.y_prev = Some(x0.clone());
            st.f_y_prev = Some(fx0);
        }
        Method::Gr => {
            st.x_prev = Some(x0.clone());
            st.y_prev = Some(x0);
        }
        Method::Feg => {
            st.w = Some(&fx0 + &xi0);
        }
        Method::Peag => {
            st.y_prev = Some(x0);
            st.w_hat = Some(&fx0 + &xi0);
        }
        Method::Aeg => {
            st.y = Some(x0.clone());
            st.z = Some(x0.clone());
            st.w = Some(Vector::zeros(st.x.len()));
        }
        Method::Apeg => {
            st.y = Some(x0.clone());
            st.z = Some(x0.clone());
            st.w_hat = Some(Vector::zeros(st.x.len()));
        }
        _ => {}
    }
    Ok(st)
}

fn require<'a>(v: &'a Option<Vector>, what: &str) -> Result<&'a Vector> {
    v.as_ref().ok_or_else(|| Error::Config(format!("state is missing {what}")))
}

/// Advances one iteration of `cfg.method`. Pure: the input state is not
/// modified.
pub fn step(state: &IterState, cfg: &SolverConfig, problem: &Problem) -> Result<IterState> {
    let eta = cfg.eta;
    if !(eta > 0.0) {
        return Err(Error::Parameter(format!("stepsize must be positive, got {eta}")));
    }
    let f = &problem.f;
    let t = &problem.t;
    let x = &state.x;
    let k = state.k;
    let mut next = match cfg.method {
        Method::Fw => {
            let fx = f.eval(x);
            let x1 = x - eta * &fx;
            IterState::bare(k + 1, x1, Vector::zeros(x.len()), state.x0.clone())
        }
        Method::Fbs => {
            let fx = f.eval(x);
            let (x1, xi1) = resolvent_apply(t, eta, &(x - eta * &fx))?;
            IterState::bare(k + 1, x1, xi1, state.x0.clone())
        }
        Method::Eg | Method::Peg => {
            // Two-resolvent scheme: y^k = J_{(η/β)T}(x^k − (η/β)u^k),
            // x^{k+1} = J_{ηT}(x^k − ηFy^k), with u^k = Fx^k (eg) or
            // u^k = Fy^{k−1} (peg).
            let u = match cfg.method {
                Method::Eg => f.eval(x),
                _ => require(&state.f_y_prev, "F(y^{k-1})")?.clone(),
            };
            let s = eta / cfg.beta;
            let (y, zeta) = resolvent_apply(t, s, &(x - s * &u))?;
            let fy = f.eval(&y);
            let (x1, xi1) = resolvent_apply(t, eta, &(x - eta * &fy))?;
            let mut st = IterState::bare(k + 1, x1, xi1, state.x0.clone());
            st.x_prev = Some(x.clone());
            st.y_prev = Some(y);
            st.f_y_prev = Some(fy);
            st.zeta = Some(zeta);
            st
        }
        Method::Fbfs | Method::PastFbfs => {
            // Tseng-type: y^k = J_{(η/β)T}(x^k − (η/β)u^k),
            // x^{k+1} = βy^k + (1−β)x^k − η(Fy^k − u^k). The witness at
            // x^{k+1} is the y-line witness ζ^k ∈ Ty^k.
            let u = match cfg.method {
                Method::Fbfs => f.eval(x),
                _ => require(&state.f_y_prev, "F(y^{k-1})")?.clone(),
            };
            let s = eta / cfg.beta;
            let (y, zeta) = resolvent_apply(t, s, &(x - s * &u))?;
            let fy = f.eval(&y);
            let x1 = cfg.beta * &y + (1.0 - cfg.beta) * x - eta * (&fy - &u);
            let mut st = IterState::bare(k + 1, x1, zeta.clone(), state.x0.clone());
            st.x_prev = Some(x.clone());
            st.y_prev = Some(y);
            st.f_y_prev = Some(fy);
            st.zeta = Some(zeta);
            st
        }
        Method::Rfbs => {
            // y^k = 2x^k − x^{k−1}; x^{k+1} = J_{ηT}(x^k − ηFy^k).
            let x_prev = require(&state.x_prev, "x^{k-1}")?;
            let y = 2.0 * x - x_prev;
            let fy = f.eval(&y);
            let (x1, xi1) = resolvent_apply(t, eta, &(x - eta * &fy))?;
            let mut st = IterState::bare(k + 1, x1, xi1, state.x0.clone());
            st.x_prev = Some(x.clone());
            st.y_prev = Some(y);
            st.f_y_prev = Some(fy);
            st
        }
        Method::Gr => {
            // y^k = ((ω−1)/ω)x^k + (1/ω)y^{k−1}; x^{k+1} = J_{ηT}(y^k − ηFx^k).
            let omega = cfg.omega;
            if !(omega > 1.0 && omega < 1.0 + 3.0f64.sqrt()) {
                return Err(Error::Parameter(format!("omega must lie in (1, 1+√3), got {omega}")));
            }
            let y_prev = require(&state.y_prev, "y^{k-1}")?;
            let y = ((omega - 1.0) / omega) * x + (1.0 / omega) * y_prev;
            let fx = f.eval(x);
            let (x1, xi1) = resolvent_apply(t, eta, &(&y - eta * &fx))?;
            let mut st = IterState::bare(k + 1, x1, xi1, state.x0.clone());
            st.x_prev = Some(x.clone());
            st.y_prev = Some(y);
            st
        }
        Method::Eag => {
            // Anchored two-resolvent scheme with τ_k = 1/(k+2),
            // η̂_k = (1−τ_k)η.
            let tau = schedule::tau(k);
            let eh = schedule::eta_hat(eta, k);
            let anchor = tau * &state.x0 + (1.0 - tau) * x;
            let fx = f.eval(x);
            let (y, zeta) = resolvent_apply(t, eh, &(&anchor - eh * &fx))?;
            let fy = f.eval(&y);
            let (x1, xi1) = resolvent_apply(t, eta, &(&anchor - eta * &fy))?;
            let mut st = IterState::bare(k + 1, x1, xi1, state.x0.clone());
            st.x_prev = Some(x.clone());
            st.y_prev = Some(y);
            st.f_y_prev = Some(fy);
            st.zeta = Some(zeta);
            st
        }
        Method::Feg => {
            // y^k = x^k + τ_k(x⁰−x^k) − (η̂_k−β_k)w^k;
            // x^{k+1} = J_{ηT}(y^k − ηFy^k + η̂_k w^k); w maintained exactly.
            let tau = schedule::tau(k);
            let eh = schedule::eta_hat(eta, k);
            let bk = 2.0 * cfg.rho * (1.0 - tau);
            let w = require(&state.w, "w^k")?;
            let y = x + tau * (&state.x0 - x) - (eh - bk) * w;
            let fy = f.eval(&y);
            let (x1, xi1) = resolvent_apply(t, eta, &(&y - eta * &fy + eh * w))?;
            let fx1 = f.eval(&x1);
            let w1 = &fx1 + &xi1;
            let mut st = IterState::bare(k + 1, x1, xi1, state.x0.clone());
            st.x_prev = Some(x.clone());
            st.y_prev = Some(y);
            st.f_y_prev = Some(fy);
            st.w = Some(w1);
            st
        }
        Method::Peag => {
            // Past variant: replaces w^k by ŵ^k = Fy^{k−1} + ξ^k and uses
            // β_k = 4ρ(1−τ_k)/(1+τ_k); single F evaluation per iteration.
            let tau = schedule::tau(k);
            let eh = schedule::eta_hat(eta, k);
            let bk = 4.0 * cfg.rho * (1.0 - tau) / (1.0 + tau);
            let w_hat = require(&state.w_hat, "ŵ^k")?;
            let y = x + tau * (&state.x0 - x) - (eh - bk) * w_hat;
            let fy = f.eval(&y);
            let (x1, xi1) = resolvent_apply(t, eta, &(&y - eta * &fy + eh * w_hat))?;
            let w_hat1 = &fy + &xi1;
            let mut st = IterState::bare(k + 1, x1, xi1, state.x0.clone());
            st.x_prev = Some(x.clone());
            st.y_prev = Some(y);
            st.f_y_prev = Some(fy);
            st.w_hat = Some(w_hat1);
            st
        }
        Method::Aeg => {
            // x^k = J_{ηT}(y^k − ηFy^k + η̂_k w^{k−1});
            // w^k = (y^k − x^k + η̂_k w^{k−1})/η − (Fy^k − Fx^k);
            // z^{k+1} = x^k − γw^k;
            // y^{k+1} = z^{k+1} + θ_k(z^{k+1}−z^k) + ν_k(y^k−z^{k+1}).
            let eh = schedule::eta_hat(eta, k);
            let theta = schedule::theta(k);
            let nu = schedule::nu(k);
            let y = require(&state.y, "y^k")?;
            let z = require(&state.z, "z^k")?;
            let w_prev = require(&state.w, "w^{k-1}")?;
            let fy = f.eval(y);
            let (xk, xik) = resolvent_apply(t, eta, &(y - eta * &fy + eh * w_prev))?;
            let fxk = f.eval(&xk);
            let wk = (y - &xk + eh * w_prev) / eta - (&fy - &fxk);
            let z1 = &xk - cfg.gamma * &wk;
            let y1 = &z1 + theta * (&z1 - z) + nu * (y - &z1);
            let mut st = IterState::bare(k + 1, xk, xik, state.x0.clone());
            st.x_prev = Some(x.clone());
            st.y = Some(y1);
            st.z = Some(z1);
            st.w = Some(wk);
            st
        }
        Method::Apeg => {
            // Past variant: ŵ^k = (y^k − x^k + η̂_k ŵ^{k−1})/η replaces w^k
            // in the correction and z-update; single F evaluation.
            let eh = schedule::eta_hat(eta, k);
            let theta = schedule::theta(k);
            let nu = schedule::nu(k);
            let y = require(&state.y, "y^k")?;
            let z = require(&state.z, "z^k")?;
            let w_hat_prev = require(&state.w_hat, "ŵ^{k-1}")?;
            let fy = f.eval(y);
            let (xk, xik) = resolvent_apply(t, eta, &(y - eta * &fy + eh * w_hat_prev))?;
            let w_hat_k = (y - &xk + eh * w_hat_prev) / eta;
            let z1 = &xk - cfg.gamma * &w_hat_k;
            let y1 = &z1 + theta * (&z1 - z) + nu * (y - &z1);
            let mut st = IterState::bare(k + 1, xk, xik, state.x0.clone());
            st.x_prev = Some(x.clone());
            st.y_prev = Some(y.clone());
            st.y = Some(y1);
            st.z = Some(z1);
            st.w_hat = Some(w_hat_k);
            st
        }
    };
    // Fail fast on numeric blow-up so the harness can report it cleanly.
    if !next.x.iter().all(|v| v.is_finite()) {
        return Err(Error::Numeric(format!("iterate became non-finite at k = {}", next.k)));
    }
    next.x0 = state.x0.clone();
    Ok(next)
}
