//! Operator abstractions, resolvents, residual metrics, and sampled
//! monotonicity probes.
//!
//! A problem is a composite inclusion `0 ∈ Fx + Tx` where `F` is a
//! single-valued Lipschitz map ([`SingleOp`]) and `T` is a set-valued maximal
//! operator represented *operationally* through its resolvent
//! `J_{ηT} = (I + ηT)^{-1}` ([`SetOp`]). Elements of `Tx` are never
//! enumerated; instead every resolvent call returns the witness
//! `ξ := (z − J_{ηT}(z))/η ∈ T(J_{ηT}(z))`, which is exactly the element the
//! splitting schemes need.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result, Vector};

/// Declared monotonicity class of a single-valued operator.
///
/// Classes are *claims* checked by falsification-only probes
/// ([`probe_monotonicity`]); they can be refuted on samples but never proven.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MonoClass {
    /// No structural claim.
    None,
    /// `⟨Fx − Fy, x − y⟩ ≥ 0` for all pairs.
    Monotone,
    /// `⟨Fx − Fy, x − y⟩ ≥ μ‖x − y‖²`.
    MuStrong(f64),
    /// `⟨Fx − Fy, x − y⟩ ≥ −ρ‖Fx − Fy‖²` (co-hypomonotone).
    RhoCohypo(f64),
    /// Monotone only against a solution: `⟨Fx − Fx*, x − x*⟩ ≥ 0`.
    StarMono,
    /// Co-hypomonotone only against a solution.
    StarCohypo(f64),
    /// Weak-Minty: `⟨Fx, x − x*⟩ ≥ −ρ‖Fx‖²` (for equations, `Fx* = 0`).
    WeakMinty(f64),
}

/// A single-valued operator `F` with a certified Lipschitz constant and a
/// declared monotonicity class.
///
/// Evaluations are counted so tests can assert the per-iteration evaluation
/// budget of each scheme.
#[derive(Clone)]
pub struct SingleOp {
    eval_fn: Arc<dyn Fn(&Vector) -> Vector + Send + Sync>,
    /// Certified Lipschitz constant `L`.
    pub lipschitz_l: f64,
    /// Declared monotonicity class.
    pub mono_class: MonoClass,
    calls: Arc<AtomicU64>,
}

impl SingleOp {
    /// Wraps a deterministic evaluation map with its certified constants.
    pub fn new(
        lipschitz_l: f64,
        mono_class: MonoClass,
        eval_fn: impl Fn(&Vector) -> Vector + Send + Sync + 'static,
    ) -> Self {
        Self {
            eval_fn: Arc::new(eval_fn),
            lipschitz_l,
            mono_class,
            calls: Arc::new(AtomicU64::new(0)),
        }
    }

    /// Evaluates `F(x)`, incrementing the evaluation counter.
    pub fn eval(&self, x: &Vector) -> Vector {
        self.calls.fetch_add(1, Ordering::Relaxed);
        (self.eval_fn)(x)
    }

    /// Number of `eval` calls made so far (shared across clones).
    pub fn eval_count(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }
}

impl std::fmt::Debug for SingleOp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SingleOp")
            .field("lipschitz_l", &self.lipschitz_l)
            .field("mono_class", &self.mono_class)
            .finish()
    }
}

type ResolventFn = Arc<dyn Fn(f64, &Vector) -> Vector + Send + Sync>;

/// A set-valued operator `T` exposed only through its resolvent `J_{ηT}`.
///
/// The special `T = 0` sentinel has the identity resolvent and does not count
/// resolvent calls (there is nothing to evaluate).
#[derive(Clone)]
pub struct SetOp {
    resolvent_fn: ResolventFn,
    /// Human-readable descriptor of the operator (e.g. `"box[-1,1]"`).
    pub domain_tag: String,
    /// Largest `m` for which `T` is claimed `m`-cyclically monotone, if any.
    /// Subdifferentials of convex functions are cyclically monotone for all
    /// `m`; plain maximal monotone operators only for `m = 2`.
    pub cyclic_order_m: Option<u32>,
    zero: bool,
    calls: Arc<AtomicU64>,
}

impl SetOp {
    /// The `T = 0` sentinel (identity resolvent, zero witnesses).
    pub fn zero() -> Self {
        Self {
            resolvent_fn: Arc::new(|_eta, x| x.clone()),
            domain_tag: "zero".to_string(),
            cyclic_order_m: None,
            zero: true,
            calls: Arc::new(AtomicU64::new(0)),
        }
    }

    /// Wraps a closed-form resolvent map `(η, z) ↦ J_{ηT}(z)`.
    pub fn new(
        domain_tag: impl Into<String>,
        cyclic_order_m: Option<u32>,
        resolvent_fn: impl Fn(f64, &Vector) -> Vector + Send + Sync + 'static,
    ) -> Self {
        Self {
            resolvent_fn: Arc::new(resolvent_fn),
            domain_tag: domain_tag.into(),
            cyclic_order_m,
            zero: false,
            calls: Arc::new(AtomicU64::new(0)),
        }
    }

    /// Whether this is the `T = 0` sentinel.
    pub fn is_zero(&self) -> bool {
        self.zero
    }

    /// Number of genuine resolvent evaluations so far (0 for the sentinel).
    pub fn resolvent_count(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }
}

impl std::fmt::Debug for SetOp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SetOp")
            .field("domain_tag", &self.domain_tag)
            .field("cyclic_order_m", &self.cyclic_order_m)
            .field("zero", &self.zero)
            .finish()
    }
}

/// A graph element of `T` produced by a resolvent call, together with the
/// composite value `w = Fx + ξ` used by the residual metrics.
#[derive(Debug, Clone)]
pub struct Witness {
    /// `ξ ∈ Tx`.
    pub xi: Vector,
    /// `w = F(x) + ξ`.
    pub w: Vector,
}

/// A composite problem `Φ = F + T` with optional known solution and certified
/// constants.
#[derive(Debug, Clone)]
pub struct Problem {
    /// Single-valued part.
    pub f: SingleOp,
    /// Set-valued part (identity-resolvent sentinel when `T = 0`).
    pub t: SetOp,
    /// A zero of `Φ`, when known analytically.
    pub known_solution: Option<Vector>,
    /// Lipschitz constant of `F`.
    pub l: f64,
    /// Strong-monotonicity modulus (0 when merely monotone or weaker).
    pub mu: f64,
    /// Co-hypomonotonicity modulus (0 when monotone).
    pub rho: f64,
    /// Ambient dimension.
    pub dim: usize,
    /// Registry name.
    pub name: String,
}

impl Problem {
    /// `F(x*)` at the known solution, or an error if no solution is recorded.
    pub fn f_at_solution(&self) -> Result<Vector> {
        let xs = self
            .known_solution
            .as_ref()
            .ok_or_else(|| Error::Config(format!("problem '{}' has no known solution", self.name)))?;
        Ok(self.f.eval(xs))
    }
}

/// Applies the resolvent `J_{ηT}` at `x` and returns `(point, ξ)` where
/// `point = J_{ηT}(x)` and `ξ = (x − point)/η ∈ T(point)`.
pub fn resolvent_apply(t: &SetOp, eta: f64, x: &Vector) -> Result<(Vector, Vector)> {
    if !(eta > 0.0) {
        return Err(Error::Parameter(format!("resolvent stepsize must be positive, got {eta}")));
    }
    if t.zero {
        return Ok((x.clone(), Vector::zeros(x.len())));
    }
    t.calls.fetch_add(1, Ordering::Relaxed);
    let point = (t.resolvent_fn)(eta, x);
    if point.len() != x.len() {
        return Err(Error::Shape { expected: x.len(), found: point.len() });
    }
    let xi = (x - &point) / eta;
    if !xi.iter().all(|v| v.is_finite()) {
        return Err(Error::Numeric("resolvent produced non-finite witness".to_string()));
    }
    Ok((point, xi))
}

/// Residual norm `e(x) = ‖F(x) + ξ‖` for an algorithm-produced witness
/// `ξ ∈ Tx`. With `T = 0` (and `ξ = 0`) this is `‖F(x)‖`.
pub fn residual_norm(problem: &Problem, x: &Vector, xi: &Vector) -> Result<f64> {
    if x.len() != xi.len() {
        return Err(Error::Shape { expected: x.len(), found: xi.len() });
    }
    let fx = problem.f.eval(x);
    if fx.len() != x.len() {
        return Err(Error::Shape { expected: x.len(), found: fx.len() });
    }
    Ok((fx + xi).norm())
}

/// Forward-backward splitting residual
/// `G_{ηΦ}(x) = (1/η)(x − J_{ηT}(x − ηF(x)))`.
///
/// Vanishes exactly at zeros of `Φ`, and `‖G_{ηΦ}(x)‖ ≤ ‖F(x) + ξ‖` for every
/// witness `ξ ∈ Tx` when the resolvent is firmly nonexpansive.
pub fn fb_residual(problem: &Problem, eta: f64, x: &Vector) -> Result<Vector> {
    if !(eta > 0.0) {
        return Err(Error::Parameter(format!("fb_residual stepsize must be positive, got {eta}")));
    }
    let fx = problem.f.eval(x);
    let (point, _xi) = resolvent_apply(&problem.t, eta, &(x - eta * &fx))?;
    Ok((x - point) / eta)
}

/// Verdict of a sampled probe: either no violation was found, or the first
/// violating sample is returned.
#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    /// The claimed inequality held on every sampled pair/cycle.
    HoldsOnSamples,
    /// A violating pair was found (probes are falsification-only).
    Falsified { x: Vector, y: Vector },
}

/// Deterministic seeded source of sample points and pairs.
#[derive(Debug, Clone)]
pub struct PairSampler {
    rng: ChaCha8Rng,
    dim: usize,
    scale: f64,
}

impl PairSampler {
    /// A sampler drawing coordinates uniformly from `[−scale, scale]`.
    pub fn new(seed: u64, dim: usize, scale: f64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed), dim, scale }
    }

    /// Draws a single point.
    pub fn point(&mut self) -> Vector {
        let s = self.scale;
        Vector::from_fn(self.dim, |_, _| self.rng.gen_range(-s..=s))
    }

    /// Draws an ordered pair of points.
    pub fn pair(&mut self) -> (Vector, Vector) {
        (self.point(), self.point())
    }
}

/// Absolute slack used when refuting universally quantified inequalities on
/// samples; guards against refuting by pure roundoff.
const PROBE_TOL: f64 = 1e-10;

/// Checks the claimed monotonicity inequality on `n` sampled pairs (or single
/// points for star claims, which compare against the known solution).
///
/// Returns the first violating sample, if any. Star/weak-Minty claims require
/// `star_center` (the solution `x*`).
pub fn probe_monotonicity(
    op: &SingleOp,
    claim: &MonoClass,
    star_center: Option<&Vector>,
    sampler: &mut PairSampler,
    n: usize,
) -> Result<Verdict> {
    if n == 0 {
        return Err(Error::Parameter("probe sample count must be ≥ 1".to_string()));
    }
    let needs_star = matches!(claim, MonoClass::StarMono | MonoClass::StarCohypo(_) | MonoClass::WeakMinty(_));
    if needs_star && star_center.is_none() {
        return Err(Error::Config("star/weak-Minty probe requires a known solution".to_string()));
    }
    for _ in 0..n {
        let (x, y) = if needs_star {
            (sampler.point(), star_center.unwrap().clone())
        } else {
            sampler.pair()
        };
        let fx = op.eval(&x);
        let fy = op.eval(&y);
        let diff_f = &fx - &fy;
        let diff_x = &x - &y;
        let inner = diff_f.dot(&diff_x);
        let ok = match claim {
            MonoClass::None => true,
            MonoClass::Monotone | MonoClass::StarMono => inner >= -PROBE_TOL,
            MonoClass::MuStrong(mu) => inner >= mu * diff_x.norm_squared() - PROBE_TOL,
            MonoClass::RhoCohypo(rho) | MonoClass::StarCohypo(rho) => {
                inner >= -rho * diff_f.norm_squared() - PROBE_TOL
            }
            MonoClass::WeakMinty(rho) => {
                // ⟨Fx, x − x*⟩ ≥ −ρ‖Fx‖² (solution form; Fy = Fx* may be ≠ 0
                // only through a set-valued part, handled at problem level).
                fx.dot(&diff_x) >= -rho * fx.norm_squared() - PROBE_TOL
            }
        };
        if !ok {
            return Ok(Verdict::Falsified { x, y });
        }
    }
    Ok(Verdict::HoldsOnSamples)
}

/// Checks `m`-cyclic monotonicity of `T` on `n` sampled cycles of resolvent
/// outputs: graph pairs `(xⁱ, uⁱ)` with `uⁱ ∈ T(xⁱ)` are generated via
/// [`resolvent_apply`] at unit stepsize and the cyclic sum
/// `Σᵢ ⟨uⁱ, xⁱ − xⁱ⁺¹⟩` (indices mod `m`) must be nonnegative.
pub fn probe_cyclic_monotonicity(
    t: &SetOp,
    m: usize,
    sampler: &mut PairSampler,
    n: usize,
) -> Result<Verdict> {
    if m < 2 {
        return Err(Error::Parameter(format!("cycle length must be ≥ 2, got {m}")));
    }
    for _ in 0..n {
        let mut xs = Vec::with_capacity(m);
        let mut us = Vec::with_capacity(m);
        for _ in 0..m {
            let z = sampler.point();
            let (x, u) = resolvent_apply(t, 1.0, &z)?;
            xs.push(x);
            us.push(u);
        }
        let mut sum = 0.0;
        for i in 0..m {
            let j = (i + 1) % m;
            sum += us[i].dot(&(&xs[i] - &xs[j]));
        }
        if sum < -PROBE_TOL {
            return Ok(Verdict::Falsified { x: xs[0].clone(), y: xs[1].clone() });
        }
    }
    Ok(Verdict::HoldsOnSamples)
}
