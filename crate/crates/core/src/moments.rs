//! Moment engines, the orthogonal polynomial recurrence and the limits
//! `s, t → 1` (free), `s, t → 0` (boolean) and `s = 1, t → 0`
//! (conditionally free).
//!
//! The engines never share intermediate results: the operator engine lives
//! in [`crate::fock`], the recurrence engine powers its own tridiagonal
//! matrix, and the two partition engines read the partition statistics in
//! different ways (totals `td₁`, `td₂` versus per-block depths).

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fock;
use crate::partitions::{count_by_blocks, for_each_nc, stats, EnumLimit, Family, PartitionError};
use crate::poly::{Monomial, MultiPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MomentError {
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error("polynomial of degree {degree} needs moments up to {degree}, table stops at {n_max}")]
    DegreeOutOfRange { degree: usize, n_max: usize },
}

/// Jacobi parameters `α₁, α₂, …` and `ω₁, ω₂, …` (stored 0-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiParams {
    pub alpha: Vec<MultiPoly>,
    pub omega: Vec<MultiPoly>,
}

/// `α₁ = λ`, `α_{n+1} = λsⁿ + t^{n−1}`, `ω_n = λs^{n−1}`.
pub fn jacobi(kmax: usize) -> JacobiParams {
    let lam = MultiPoly::lambda_pow(1);
    let alpha = (0..kmax)
        .map(|n| {
            if n == 0 {
                lam.clone()
            } else {
                &(&lam * &MultiPoly::s_pow(n as u32)) + &MultiPoly::t_pow(n as u32 - 1)
            }
        })
        .collect();
    let omega = (1..=kmax).map(|n| &lam * &MultiPoly::s_pow(n as u32 - 1)).collect();
    JacobiParams { alpha, omega }
}

/// Polynomial in `x` with [`MultiPoly`] coefficients; `coeffs[k]` multiplies
/// `x^k`. Trailing zeros are trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct XPoly {
    coeffs: Vec<MultiPoly>,
}

/// The orthogonal polynomials are monic [`XPoly`]s.
pub type OrthoPoly = XPoly;

impl XPoly {
    pub fn new(mut coeffs: Vec<MultiPoly>) -> Self {
        while coeffs.last().is_some_and(MultiPoly::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn one() -> Self {
        Self::new(vec![MultiPoly::one()])
    }

    pub fn x() -> Self {
        Self::new(vec![MultiPoly::zero(), MultiPoly::one()])
    }

    pub fn coeffs(&self) -> &[MultiPoly] {
        &self.coeffs
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(MultiPoly::is_one)
    }

    pub fn mul(&self, other: &XPoly) -> XPoly {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return XPoly::default();
        }
        let mut out = vec![MultiPoly::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        XPoly::new(out)
    }

    pub fn scale(&self, c: &MultiPoly) -> XPoly {
        XPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn sub(&self, other: &XPoly) -> XPoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let zero = MultiPoly::zero();
        XPoly::new(
            (0..len)
                .map(|k| self.coeffs.get(k).unwrap_or(&zero) - other.coeffs.get(k).unwrap_or(&zero))
                .collect(),
        )
    }

    /// `x · self`.
    pub fn shift(&self) -> XPoly {
        if self.coeffs.is_empty() {
            return XPoly::default();
        }
        let mut c = Vec::with_capacity(self.coeffs.len() + 1);
        c.push(MultiPoly::zero());
        c.extend(self.coeffs.iter().cloned());
        XPoly::new(c)
    }
}

impl fmt::Display for XPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 if c.is_one() => write!(f, "x")?,
                1 => write!(f, "({c})*x")?,
                _ if c.is_one() => write!(f, "x^{k}")?,
                _ => write!(f, "({c})*x^{k}")?,
            }
        }
        Ok(())
    }
}

/// `C₀ … C_{nmax}` from
/// `C_{n+1} = (x − α_{n+1}) C_n − ω_n C_{n−1}`.
pub fn ortho_polys(nmax: usize) -> Vec<OrthoPoly> {
    let jp = jacobi(nmax.max(1));
    let mut out = vec![XPoly::one()];
    if nmax == 0 {
        return out;
    }
    out.push(XPoly::x().sub(&XPoly::one().scale(&jp.alpha[0])));
    for n in 1..nmax {
        let next = out[n]
            .shift()
            .sub(&out[n].scale(&jp.alpha[n]))
            .sub(&out[n - 1].scale(&jp.omega[n - 1]));
        out.push(next);
    }
    out
}

/// Vacuum entry of `Jⁿ` for the monic Jacobi matrix (diagonal `α`,
/// subdiagonal 1, superdiagonal `ω`).
pub fn moment_jacobi(n: usize) -> MultiPoly {
    let jp = jacobi(n + 1);
    // v = Jⁿ e₀, tracked on levels 0..=n.
    let mut v = vec![MultiPoly::zero(); n + 1];
    v[0] = MultiPoly::one();
    for _ in 0..n {
        let mut next = vec![MultiPoly::zero(); n + 1];
        for (k, vk) in v.iter().enumerate() {
            if vk.is_zero() {
                continue;
            }
            next[k] += &(&jp.alpha[k] * vk);
            if k < n {
                next[k + 1] += vk;
            }
            if k >= 1 {
                next[k - 1] += &(&jp.omega[k - 1] * vk);
            }
        }
        v = next;
    }
    v.swap_remove(0)
}

/// `Σ_{π ∈ NC(n)} λ^{|π|} s^{td₁(π)} t^{td₂(π)}`.
pub fn moment_nc(n: usize, limit: EnumLimit) -> Result<MultiPoly, MomentError> {
    if n == 0 {
        return Ok(MultiPoly::one());
    }
    let mut tally: HashMap<(usize, usize, usize), u64> = HashMap::new();
    for_each_nc(n, limit, |p| {
        let st = stats(p);
        *tally.entry((p.num_blocks(), st.td1, st.td2)).or_default() += 1;
    })?;
    let mut out = MultiPoly::zero();
    for ((k, td1, td2), count) in tally {
        out.add_term(Monomial::new(2 * k as u32, td1 as u32, td2 as u32), BigInt::from(count));
    }
    Ok(out)
}

/// Per-block form: each block contributes `λ s^{dp(B)}` if `|B| ≤ 2` and
/// `λ (s t^{|B|−2})^{dp(B)}` otherwise.
pub fn moment_blockwise(n: usize, limit: EnumLimit) -> Result<MultiPoly, MomentError> {
    if n == 0 {
        return Ok(MultiPoly::one());
    }
    let mut out = MultiPoly::zero();
    for_each_nc(n, limit, |p| {
        let st = stats(p);
        let weight = p
            .blocks()
            .iter()
            .zip(&st.block_depths)
            .fold(MultiPoly::one(), |acc, (b, &d)| {
                let d = d as u32;
                let per_depth = if b.len() <= 2 {
                    MultiPoly::s_pow(1)
                } else {
                    &MultiPoly::s_pow(1) * &MultiPoly::t_pow(b.len() as u32 - 2)
                };
                &(&acc * &MultiPoly::lambda_pow(1)) * &per_depth.pow(d)
            });
        out += &weight;
    })?;
    Ok(out)
}

/// Which engine produced a moment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Engine {
    /// Vacuum entry of `Pⁿ` on the truncated Fock space.
    Operator,
    /// Vacuum entry of `Jⁿ` for the Jacobi matrix.
    Jacobi,
    /// Sum over `NC(n)` with the total depths.
    Nc,
    /// Sum over `NC(n)` with per-block depth factors.
    Blockwise,
}

impl Engine {
    pub const ALL: [Engine; 4] = [Engine::Operator, Engine::Jacobi, Engine::Nc, Engine::Blockwise];

    pub fn moment(self, n: usize, limit: EnumLimit) -> Result<MultiPoly, MomentError> {
        match self {
            Engine::Operator => Ok(fock::vacuum_moment_operator(n)),
            Engine::Jacobi => Ok(moment_jacobi(n)),
            Engine::Nc => moment_nc(n, limit),
            Engine::Blockwise => moment_blockwise(n, limit),
        }
    }

    pub fn table(self, n_max: usize, limit: EnumLimit) -> Result<MomentTable, MomentError> {
        let m = (0..=n_max)
            .map(|n| self.moment(n, limit))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(MomentTable { n_max, m })
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Operator => "operator",
            Engine::Jacobi => "jacobi",
            Engine::Nc => "nc",
            Engine::Blockwise => "blockwise",
        })
    }
}

/// `m[0] = 1, m[1], …, m[n_max]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MomentTable {
    pub n_max: usize,
    pub m: Vec<MultiPoly>,
}

impl MomentTable {
    pub fn map(&self, f: impl Fn(&MultiPoly) -> MultiPoly) -> MomentTable {
        MomentTable {
            n_max: self.n_max,
            m: self.m.iter().map(f).collect(),
        }
    }
}

/// Tables computed once per `(engine, n_max)`.
#[derive(Debug, Default)]
pub struct MomentCache {
    limit: EnumLimit,
    tables: HashMap<(Engine, usize), MomentTable>,
}

impl MomentCache {
    pub fn new(limit: EnumLimit) -> Self {
        Self {
            limit,
            tables: HashMap::new(),
        }
    }

    pub fn table(&mut self, engine: Engine, n_max: usize) -> Result<&MomentTable, MomentError> {
        if !self.tables.contains_key(&(engine, n_max)) {
            let t = engine.table(n_max, self.limit)?;
            self.tables.insert((engine, n_max), t);
        }
        Ok(&self.tables[&(engine, n_max)])
    }
}

/// The linear functional `L(xⁿ) = m_n`.
pub fn moment_functional(p: &XPoly, table: &MomentTable) -> Result<MultiPoly, MomentError> {
    if p.degree() > table.n_max {
        return Err(MomentError::DegreeOutOfRange {
            degree: p.degree(),
            n_max: table.n_max,
        });
    }
    let mut acc = MultiPoly::zero();
    for (c, m) in p.coeffs().iter().zip(&table.m) {
        acc += &(c * m);
    }
    Ok(acc)
}

/// `m_n = Σ_k #NC_{1,2:inner}(n, k) λ^k` for `n = 0..=n_max`.
pub fn cfree_moments(n_max: usize, limit: EnumLimit) -> Result<MomentTable, MomentError> {
    let mut m = vec![MultiPoly::one()];
    for n in 1..=n_max {
        let counts = count_by_blocks(n, Family::Nc12Inner, limit)?;
        let mut p = MultiPoly::zero();
        for (k, c) in counts.iter().enumerate() {
            p.add_term(Monomial::new(2 * (k as u32 + 1), 0, 0), BigInt::from(*c));
        }
        m.push(p);
    }
    Ok(MomentTable { n_max, m })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LimitCase {
    /// `s = t = 1`.
    Free,
    /// `s, t → 0`.
    Boolean,
    /// `s = 1, t → 0`.
    Cfree,
}

pub fn limit_case(n_max: usize, case: LimitCase, limit: EnumLimit) -> Result<MomentTable, MomentError> {
    match case {
        LimitCase::Free => Ok(Engine::Nc.table(n_max, limit)?.map(|p| p.set_s_one().set_t_one())),
        LimitCase::Boolean => Ok(Engine::Nc.table(n_max, limit)?.map(|p| p.specialize_zero(true, true))),
        LimitCase::Cfree => cfree_moments(n_max, limit),
    }
}

/// What to do with one deformation variable before display or evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum VarLimit {
    #[default]
    Keep,
    One,
    Zero,
}

/// Substitutions applied to a moment polynomial: `= 1` erases exponents,
/// `→ 0` drops terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Specialization {
    pub s: VarLimit,
    pub t: VarLimit,
}

impl Specialization {
    pub const CFREE: Specialization = Specialization {
        s: VarLimit::One,
        t: VarLimit::Zero,
    };

    pub fn apply(&self, p: &MultiPoly) -> MultiPoly {
        let mut out = p.specialize_zero(self.s == VarLimit::Zero, self.t == VarLimit::Zero);
        if self.s == VarLimit::One {
            out = out.set_s_one();
        }
        if self.t == VarLimit::One {
            out = out.set_t_one();
        }
        out
    }
}

/// `det[m_{i+j}]_{0 ≤ i,j < size}` by exact Gaussian elimination.
///
/// # Panics
/// If fewer than `2 size − 1` moments are supplied.
pub fn hankel_determinant(moments: &[BigRational], size: usize) -> BigRational {
    assert!(moments.len() + 1 >= 2 * size, "need moments m_0..m_{}", 2 * size - 2);
    let mut a: Vec<Vec<BigRational>> = (0..size)
        .map(|i| (0..size).map(|j| moments[i + j].clone()).collect())
        .collect();
    let mut det = BigRational::one();
    for col in 0..size {
        let Some(pivot) = (col..size).find(|&r| !a[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in col + 1..size {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &p;
            let (top, bottom) = a.split_at_mut(r);
            for (x, pivot_entry) in bottom[0][col..].iter_mut().zip(&top[col][col..]) {
                *x -= &factor * pivot_entry;
            }
        }
    }
    det
}

/// Whether every Hankel determinant of order `1..=size` is positive.
pub fn hankel_positive(moments: &[BigRational], size: usize) -> bool {
    (1..=size).all(|k| hankel_determinant(moments, k).is_positive())
}
