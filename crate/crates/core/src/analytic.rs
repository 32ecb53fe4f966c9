//! Floating-point Cauchy transforms.
//!
//! [`cauchy_cf`] evaluates the Jacobi continued fraction of `Π^s_{t,λ}`
//! bottom-up at a fixed depth. For the conditionally free case `s = 1,
//! t → 0` there is also the closed form [`cauchy_cfree_closed`], the
//! quadratic it solves, the functional equation of the semicircle tail
//! `H = z − λ − λ/H`, and the λ = 1 moment generating function
//! [`generating_m`].

use num_complex::Complex64;
use thiserror::Error;

use num_traits::ToPrimitive;

use crate::moments::jacobi;
use crate::poly::DeformParams;

pub type ComplexVal = Complex64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalyticError {
    #[error("{0}")]
    Domain(String),
    #[error("division by zero")]
    DivisionByZero,
}

/// `(λ, s, t)` for the analytic layer. `s = 0` or `t = 0` are the limits
/// `s → 0`, `t → 0` (the Jacobi parameters are evaluated with `0⁰ = 1`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnalyticParams {
    pub lambda: f64,
    pub s: f64,
    pub t: f64,
}

impl AnalyticParams {
    pub fn new(lambda: f64, s: f64, t: f64) -> Result<Self, AnalyticError> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(AnalyticError::Domain(format!("λ = {lambda} must be positive")));
        }
        for (name, v) in [("s", s), ("t", t)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(AnalyticError::Domain(format!("{name} = {v} must lie in [0, 1]")));
            }
        }
        Ok(Self { lambda, s, t })
    }

    /// Rounds exact parameters to `f64`.
    pub fn from_exact(p: &DeformParams) -> Self {
        let f = |q: &num_rational::BigRational| q.to_f64().unwrap_or(f64::NAN);
        Self {
            lambda: f(p.lambda()),
            s: f(p.s()),
            t: f(p.t()),
        }
    }

    /// `s = 1, t → 0`.
    pub fn cfree(lambda: f64) -> Self {
        Self { lambda, s: 1.0, t: 0.0 }
    }

    /// First `depth` Jacobi parameters `(α, ω)` at this point.
    pub fn jacobi(&self, depth: usize) -> (Vec<f64>, Vec<f64>) {
        let jp = jacobi(depth);
        let ev = |p: &crate::poly::MultiPoly| p.eval_f64(self.lambda, self.s, self.t);
        (jp.alpha.iter().map(ev).collect(), jp.omega.iter().map(ev).collect())
    }
}

fn require_upper(z: ComplexVal) -> Result<(), AnalyticError> {
    if z.im > 0.0 && z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(AnalyticError::Domain(format!("Im z must be positive, got z = {z}")))
    }
}

/// `1 / (z − α₁ − ω₁ / (z − α₂ − ω₂ / ( ⋯ / (z − α_depth))))`.
///
/// No domain check: valid wherever the tails stay away from zero.
pub fn continued_fraction(z: ComplexVal, alpha: &[f64], omega: &[f64]) -> ComplexVal {
    let depth = alpha.len();
    assert!(depth >= 1 && omega.len() + 1 >= depth);
    let mut tail = z - alpha[depth - 1];
    for k in (0..depth - 1).rev() {
        tail = z - alpha[k] - omega[k] / tail;
    }
    tail.inv()
}

/// Cauchy transform of `Π^s_{t,λ}` from its continued fraction truncated at
/// `depth` levels.
pub fn cauchy_cf(z: ComplexVal, params: &AnalyticParams, depth: usize) -> Result<ComplexVal, AnalyticError> {
    require_upper(z)?;
    if depth == 0 {
        return Err(AnalyticError::Domain("depth must be at least 1".into()));
    }
    let (alpha, omega) = params.jacobi(depth);
    Ok(continued_fraction(z, &alpha, &omega))
}

/// `√((z − λ)² − 4λ)` with the cut on `[λ − 2√λ, λ + 2√λ]`, behaving like
/// `z − λ` at infinity.
fn semicircle_root(z: ComplexVal, lambda: f64) -> ComplexVal {
    let r = 2.0 * lambda.sqrt();
    (z - (lambda - r)).sqrt() * (z - (lambda + r)).sqrt()
}

fn cfree_cubic(z: ComplexVal, lambda: f64) -> ComplexVal {
    z * z * z - (1.0 + 3.0 * lambda) * z * z + 3.0 * lambda * lambda * z - lambda.powi(3)
}

fn cfree_linear_coeff(z: ComplexVal, lambda: f64) -> ComplexVal {
    2.0 * z * z - (2.0 + 5.0 * lambda) * z + 3.0 * lambda * lambda
}

/// Closed form of the Cauchy transform for `s = 1, t → 0`.
pub fn cauchy_cfree_closed(z: ComplexVal, lambda: f64) -> Result<ComplexVal, AnalyticError> {
    require_upper(z)?;
    let num = cfree_linear_coeff(z, lambda) + lambda * semicircle_root(z, lambda);
    let den = 2.0 * cfree_cubic(z, lambda);
    if den == ComplexVal::new(0.0, 0.0) {
        return Err(AnalyticError::DivisionByZero);
    }
    Ok(num / den)
}

/// `|c(z) g² − b(z) g + (z − (2λ + 1))|` for the quadratic satisfied by the
/// conditionally free Cauchy transform.
pub fn quadratic_residual(z: ComplexVal, lambda: f64, g: ComplexVal) -> f64 {
    (cfree_cubic(z, lambda) * g * g - cfree_linear_coeff(z, lambda) * g + (z - (2.0 * lambda + 1.0))).norm()
}

/// `|h − (z − λ − λ/h)|`.
pub fn h_residual(z: ComplexVal, lambda: f64, h: ComplexVal) -> Result<f64, AnalyticError> {
    if h == ComplexVal::new(0.0, 0.0) {
        return Err(AnalyticError::DivisionByZero);
    }
    Ok((h - (z - lambda - lambda / h)).norm())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CumulantKind {
    /// Free cumulants of the semicircle law with mean and variance `λ`.
    SemicircleR,
    /// Conditionally free cumulants of the pair (c-free Poisson, semicircle).
    CfreeR,
}

/// Coefficients of `z⁰, z¹, …` of the cumulant series.
pub fn cumulant_series(kind: CumulantKind, lambda: f64, nterms: usize) -> Vec<f64> {
    (0..nterms)
        .map(|k| match kind {
            CumulantKind::SemicircleR if k >= 2 => 0.0,
            _ => lambda,
        })
        .collect()
}

/// Radius inside which [`generating_m`] is evaluated.
pub const GENERATING_RADIUS: f64 = 0.25;

/// `M(z) = Σ m_n zⁿ` for the conditionally free moments at `λ = 1`.
pub fn generating_m(z: ComplexVal) -> Result<ComplexVal, AnalyticError> {
    if z.norm().is_nan() || z.norm() >= GENERATING_RADIUS {
        return Err(AnalyticError::Domain(format!(
            "|z| = {} is outside the disk of radius {GENERATING_RADIUS}",
            z.norm()
        )));
    }
    // On this disk Re(1 − 2z − 3z²) > 0, so the principal root is continuous
    // and equals 1 at the origin.
    let root = (1.0 - 2.0 * z - 3.0 * z * z).sqrt();
    let num = -3.0 * z * z + 7.0 * z - 2.0 - z * root;
    let den = 2.0 * (z * z * z - 3.0 * z * z + 4.0 * z - 1.0);
    Ok(num / den)
}

/// Taylor coefficients `a₀ … a_{count−1}` of `f` at the origin from `samples`
/// equally spaced points on the circle `|w| = radius` (discrete Cauchy
/// integral). The points avoid the real axis.
pub fn taylor_coefficients(
    f: impl Fn(ComplexVal) -> ComplexVal,
    radius: f64,
    count: usize,
    samples: usize,
) -> Vec<ComplexVal> {
    let values: Vec<(ComplexVal, ComplexVal)> = (0..samples)
        .map(|j| {
            let theta = std::f64::consts::TAU * (j as f64 + 0.5) / samples as f64;
            let w = ComplexVal::from_polar(radius, theta);
            (w, f(w))
        })
        .collect();
    (0..count)
        .map(|k| {
            let sum: ComplexVal = values.iter().map(|(w, fw)| fw / w.powu(k as u32)).sum();
            sum / samples as f64
        })
        .collect()
}

/// Moments `m₀ … m_{count−1}` read off the continued fraction:
/// `G(1/w)/w = Σ m_n wⁿ`. Lower half-plane points use `G(z̄) = conj G(z)`.
pub fn moments_from_cf(params: &AnalyticParams, depth: usize, radius: f64, count: usize) -> Vec<f64> {
    let (alpha, omega) = params.jacobi(depth);
    let g = |w: ComplexVal| {
        let z = w.inv();
        let gz = if z.im >= 0.0 {
            continued_fraction(z, &alpha, &omega)
        } else {
            continued_fraction(z.conj(), &alpha, &omega).conj()
        };
        gz / w
    };
    taylor_coefficients(g, radius, count, 128)
        .iter()
        .map(|c| c.re)
        .collect()
}
