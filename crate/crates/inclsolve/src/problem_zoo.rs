//! Parametric synthetic instances with known solutions and certified
//! constants `(L, μ, ρ)` for every monotonicity regime the convergence
//! certificates require.
//!
//! All constraint sets have closed-form projections/proximal maps, so
//! resolvents are exact and certificate checks are not polluted by
//! inner-solver error. Instances are addressable through a string registry
//! (see [`lookup`]), e.g. `"rotation2"`, `"bilinear-box-4"`, `"cohypo-0.05"`,
//! `"strong-0.5-2"`.

use nalgebra::DMatrix;

use crate::operator_core::{MonoClass, Problem, SetOp, SingleOp};
use crate::{Error, Result, Vector};

/// Constraint attached to a problem; `T` is the corresponding normal cone or
/// scaled subdifferential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Constraint {
    /// Unconstrained (`T = 0`).
    None,
    /// Box `[lo, hi]^p`; `T` is its normal cone (projection resolvent).
    Box { lo: f64, hi: f64 },
    /// Euclidean ball of radius `r`; `T` is its normal cone.
    Ball { r: f64 },
    /// Probability simplex `{x ≥ 0, Σx = 1}`; `T` is its normal cone.
    Simplex,
    /// `T = ∂(λ‖·‖₁)`; resolvent is soft-thresholding by `ηλ`.
    L1 { lambda: f64 },
}

/// Normal cone of the box `[lo, hi]^p` (resolvent = coordinate-wise clamp,
/// independent of `η`).
pub fn box_set_op(lo: f64, hi: f64) -> SetOp {
    SetOp::new(format!("box[{lo},{hi}]"), Some(u32::MAX), move |_eta, x: &Vector| {
        x.map(|v| v.clamp(lo, hi))
    })
}

/// Normal cone of the Euclidean ball of radius `r` (resolvent = radial
/// projection).
pub fn ball_set_op(r: f64) -> SetOp {
    SetOp::new(format!("ball[{r}]"), Some(u32::MAX), move |_eta, x: &Vector| {
        let n = x.norm();
        if n <= r {
            x.clone()
        } else {
            x * (r / n)
        }
    })
}

/// Normal cone of the probability simplex (resolvent = Euclidean projection,
/// computed by the sort-and-threshold algorithm).
pub fn simplex_set_op() -> SetOp {
    SetOp::new("simplex", Some(u32::MAX), |_eta, x: &Vector| {
        let mut u: Vec<f64> = x.iter().copied().collect();
        u.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let mut cssv = 0.0;
        let mut tau = 0.0;
        for (j, &uj) in u.iter().enumerate() {
            cssv += uj;
            let t = (cssv - 1.0) / (j as f64 + 1.0);
            if uj - t > 0.0 {
                tau = t;
            }
        }
        x.map(|v| (v - tau).max(0.0))
    })
}

/// Subdifferential of `λ‖·‖₁` (resolvent = soft-thresholding by `ηλ`).
pub fn l1_set_op(lambda: f64) -> SetOp {
    SetOp::new(format!("l1[{lambda}]"), Some(u32::MAX), move |eta, x: &Vector| {
        let t = eta * lambda;
        x.map(|v| v.signum() * (v.abs() - t).max(0.0))
    })
}

/// Builds the [`SetOp`] for a [`Constraint`].
pub fn set_op_for(constraint: &Constraint) -> SetOp {
    match *constraint {
        Constraint::None => SetOp::zero(),
        Constraint::Box { lo, hi } => box_set_op(lo, hi),
        Constraint::Ball { r } => ball_set_op(r),
        Constraint::Simplex => simplex_set_op(),
        Constraint::L1 { lambda } => l1_set_op(lambda),
    }
}

/// Block-diagonal affine operator with 2×2 blocks `[[a, b], [−b, a]]`.
///
/// Lipschitz constant `√(a²+b²)`; monotone iff `a ≥ 0`; for `a < 0` it is
/// ρ-co-hypomonotone with `ρ = −a/(a²+b²)`.
pub fn affine_block_op(a: f64, b: f64, dim: usize) -> SingleOp {
    let l = (a * a + b * b).sqrt();
    let class = if a > 0.0 {
        MonoClass::MuStrong(a)
    } else if a == 0.0 {
        MonoClass::Monotone
    } else {
        MonoClass::RhoCohypo(-a / (a * a + b * b))
    };
    SingleOp::new(l, class, move |x: &Vector| {
        debug_assert_eq!(x.len(), dim, "affine block operator applied to wrong dimension");
        Vector::from_fn(x.len(), |i, _| {
            if i % 2 == 0 {
                a * x[i] + b * x[i + 1]
            } else {
                -b * x[i - 1] + a * x[i]
            }
        })
    })
}

fn zero_feasible(constraint: &Constraint) -> bool {
    match *constraint {
        Constraint::None | Constraint::L1 { .. } => true,
        Constraint::Box { lo, hi } => lo <= 0.0 && 0.0 <= hi,
        Constraint::Ball { .. } => true,
        Constraint::Simplex => false,
    }
}

/// Affine problem with 2×2 blocks `[[a, b], [−b, a]]` plus a constraint.
///
/// `L = √(a²+b²)`, `μ = max(a, 0)`, `ρ = max(0, −a)/(a²+b²)`;
/// `known_solution = 0` whenever 0 is feasible (for `a ≤ 0` the only zero of
/// `F` itself).
pub fn make_affine_skew(a: f64, b: f64, dim: usize, constraint: Constraint) -> Result<Problem> {
    if !dim.is_multiple_of(2) || dim == 0 {
        return Err(Error::Parameter(format!("affine_skew dimension must be positive and even, got {dim}")));
    }
    if a == 0.0 && b == 0.0 {
        return Err(Error::Parameter("affine_skew requires (a, b) ≠ (0, 0)".to_string()));
    }
    let l = (a * a + b * b).sqrt();
    Ok(Problem {
        f: affine_block_op(a, b, dim),
        t: set_op_for(&constraint),
        known_solution: zero_feasible(&constraint).then(|| Vector::zeros(dim)),
        l,
        mu: a.max(0.0),
        rho: (-a).max(0.0) / (a * a + b * b),
        dim,
        name: format!("affine_skew(a={a},b={b},dim={dim})"),
    })
}

/// Bilinear saddle operator `F(u, v) = (Mv, −Mᵀu)` from the minimax problem
/// `min_u max_v uᵀMv`, plus a constraint.
///
/// Monotone (skew-symmetric); `L` is the largest singular value of `M`;
/// `known_solution = 0` whenever 0 is feasible.
pub fn make_bilinear_saddle(m: DMatrix<f64>, constraint: Constraint) -> Result<Problem> {
    if !m.iter().all(|v| v.is_finite()) {
        return Err(Error::Numeric("bilinear saddle matrix has non-finite entries".to_string()));
    }
    let (r, c) = m.shape();
    let dim = r + c;
    let l = m.clone().svd(false, false).singular_values.max();
    let mt = m.transpose();
    let m_own = m;
    let f = SingleOp::new(l, MonoClass::Monotone, move |x: &Vector| {
        let u = x.rows(0, r).into_owned();
        let v = x.rows(r, c).into_owned();
        let top = &m_own * v;
        let bot = -(&mt * u);
        let mut out = Vector::zeros(r + c);
        out.rows_mut(0, r).copy_from(&top);
        out.rows_mut(r, c).copy_from(&bot);
        out
    });
    Ok(Problem {
        f,
        t: set_op_for(&constraint),
        known_solution: zero_feasible(&constraint).then(|| Vector::zeros(dim)),
        l,
        mu: 0.0,
        rho: 0.0,
        dim,
        name: format!("bilinear_saddle(dim={dim})"),
    })
}

/// Strongly monotone diagonal operator `F(x) = D x` with `D = diag` spreading
/// eigenvalues linearly over `[μ, L]`; `known_solution = 0`.
pub fn make_strongly_monotone(mu: f64, l: f64, dim: usize) -> Result<Problem> {
    if !(mu > 0.0 && mu <= l) {
        return Err(Error::Parameter(format!("strongly_monotone requires 0 < μ ≤ L, got μ={mu}, L={l}")));
    }
    if dim == 0 {
        return Err(Error::Parameter("strongly_monotone dimension must be positive".to_string()));
    }
    let diag: Vec<f64> = (0..dim)
        .map(|i| {
            if dim == 1 {
                mu
            } else {
                mu + (l - mu) * i as f64 / (dim as f64 - 1.0)
            }
        })
        .collect();
    let d = diag.clone();
    let f = SingleOp::new(l, MonoClass::MuStrong(mu), move |x: &Vector| {
        Vector::from_fn(x.len(), |i, _| d[i] * x[i])
    });
    Ok(Problem {
        f,
        t: SetOp::zero(),
        known_solution: Some(Vector::zeros(dim)),
        l,
        mu,
        rho: 0.0,
        dim,
        name: format!("strongly_monotone(mu={mu},L={l},dim={dim})"),
    })
}

/// 2-D co-hypomonotone instance with certified `(ρ, L)`: the shifted-skew
/// block with `a = −ρL²`, `b = √(L² − a²)`.
pub fn make_cohypo_2d(rho_target: f64, l_target: f64) -> Result<Problem> {
    if !(rho_target > 0.0 && l_target > 0.0) {
        return Err(Error::Parameter("cohypo_2d requires positive ρ and L".to_string()));
    }
    if rho_target * l_target > 1.0 {
        return Err(Error::Parameter(format!(
            "cohypo_2d infeasible: ρ·L = {} > 1",
            rho_target * l_target
        )));
    }
    let a = -rho_target * l_target * l_target;
    let b = (l_target * l_target - a * a).sqrt();
    let mut p = make_affine_skew(a, b, 2, Constraint::None)?;
    p.name = format!("cohypo_2d(rho={rho_target},L={l_target})");
    // Declared constants are the targets (exact by construction).
    p.rho = rho_target;
    p.l = l_target;
    Ok(p)
}

/// One registry entry: id plus human-readable description.
pub fn list() -> Vec<(String, String)> {
    vec![
        ("rotation2".to_string(), "pure rotation F(x1,x2) = (x2, -x1); L = 1, monotone, unconstrained".to_string()),
        ("bilinear-4".to_string(), "bilinear saddle F(u,v) = (v, -u) with M = I2, unconstrained; L = 1".to_string()),
        ("bilinear-box-4".to_string(), "bilinear saddle M = I2 on the box [-1,1]^4; L = 1, solution 0".to_string()),
        ("bilinear-box-10".to_string(), "bilinear saddle M = I5 on the box [-1,1]^10; L = 1, solution 0".to_string()),
        ("cohypo-0.02".to_string(), "2-D co-hypomonotone shifted skew; rho = 0.02, L = 1".to_string()),
        ("cohypo-0.05".to_string(), "2-D co-hypomonotone shifted skew; rho = 0.05, L = 1".to_string()),
        ("strong-0.5-2".to_string(), "diagonal strongly monotone D = diag(0.5, 2); mu = 0.5, L = 2".to_string()),
    ]
}

/// Resolves a registry id to a [`Problem`].
///
/// Recognized patterns: `rotation<dim>`, `bilinear-<dim>`,
/// `bilinear-box-<dim>` (M = identity, box `[-1,1]`), `cohypo-<rho>`
/// (L = 1), `strong-<mu>-<L>` (2-D diagonal).
pub fn lookup(id: &str) -> Result<Problem> {
    let unknown = || Error::Config(format!("unknown problem id '{id}'"));
    let mut p = if let Some(dim) = id.strip_prefix("rotation") {
        let dim: usize = dim.parse().map_err(|_| unknown())?;
        make_affine_skew(0.0, 1.0, dim, Constraint::None)?
    } else if let Some(dim) = id.strip_prefix("bilinear-box-") {
        let dim: usize = dim.parse().map_err(|_| unknown())?;
        if !dim.is_multiple_of(2) || dim == 0 {
            return Err(unknown());
        }
        make_bilinear_saddle(DMatrix::identity(dim / 2, dim / 2), Constraint::Box { lo: -1.0, hi: 1.0 })?
    } else if let Some(dim) = id.strip_prefix("bilinear-") {
        let dim: usize = dim.parse().map_err(|_| unknown())?;
        if !dim.is_multiple_of(2) || dim == 0 {
            return Err(unknown());
        }
        make_bilinear_saddle(DMatrix::identity(dim / 2, dim / 2), Constraint::None)?
    } else if let Some(rho) = id.strip_prefix("cohypo-") {
        let rho: f64 = rho.parse().map_err(|_| unknown())?;
        make_cohypo_2d(rho, 1.0)?
    } else if let Some(rest) = id.strip_prefix("strong-") {
        let (mu, l) = rest.split_once('-').ok_or_else(unknown)?;
        let mu: f64 = mu.parse().map_err(|_| unknown())?;
        let l: f64 = l.parse().map_err(|_| unknown())?;
        make_strongly_monotone(mu, l, 2)?
    } else {
        return Err(unknown());
    };
    p.name = id.to_string();
    Ok(p)
}
