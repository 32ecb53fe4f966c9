//! Truncated one-mode s-free Fock space.
//!
//! The basis is `Ω = ξ^{⊗0}, ξ^{⊗1}, …, ξ^{⊗N}` and entry `(i, j)` of a
//! [`FockMatrix`] is the coefficient of `ξ^{⊗i}` in `X ξ^{⊗j}`. Creation maps
//! the top vector `ξ^{⊗N}` to zero; starting from `Ω`, `n` factors never
//! climb above level `n`, so `N ≥ n` makes the vacuum entry of `Pⁿ` exact.
//!
//! Since `(ξ^{⊗m} | ξ^{⊗k})_s = δ_{mk} s^{m(m−1)/2}` and `(Ω|Ω)_s = 1`, the
//! vacuum expectation `(XΩ|Ω)_s` is entry `(0, 0)`.

use std::ops::{Add, Mul};

use serde::Serialize;

use crate::poly::MultiPoly;

/// Dense square matrix over [`MultiPoly`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FockMatrix {
    dim: usize,
    entries: Vec<MultiPoly>,
}

impl FockMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![MultiPoly::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, MultiPoly::one());
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &MultiPoly {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: MultiPoly) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn scale(&self, c: &MultiPoly) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|e| e * c).collect(),
        }
    }

    /// Image of the basis vector `j`.
    pub fn column(&self, j: usize) -> Vec<MultiPoly> {
        (0..self.dim).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn apply(&self, v: &[MultiPoly]) -> Vec<MultiPoly> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| {
                let mut acc = MultiPoly::zero();
                for (j, vj) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !vj.is_zero() {
                        acc += &(a * vj);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::identity(self.dim), |acc, _| &acc * self)
    }

    /// Entries rendered as polynomial strings, row by row.
    pub fn to_string_grid(&self) -> Vec<Vec<String>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j).to_string()).collect())
            .collect()
    }

    /// Self-adjointness for `(·|·)_s`: `X(i,j) g_i = X(j,i) g_j` with
    /// `g_m = s^{m(m−1)/2}`.
    pub fn is_weighted_self_adjoint(&self) -> bool {
        let g = |m: usize| MultiPoly::s_pow((m * m.saturating_sub(1) / 2) as u32);
        (0..self.dim).all(|i| (0..self.dim).all(|j| self.get(i, j) * &g(i) == self.get(j, i) * &g(j)))
    }
}

impl Mul<&FockMatrix> for &FockMatrix {
    type Output = FockMatrix;
    fn mul(self, rhs: &FockMatrix) -> FockMatrix {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut out = FockMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * n + j] += &(a * b);
                    }
                }
            }
        }
        out
    }
}

impl Add<&FockMatrix> for &FockMatrix {
    type Output = FockMatrix;
    fn add(self, rhs: &FockMatrix) -> FockMatrix {
        assert_eq!(self.dim, rhs.dim);
        FockMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

/// `a†`, `a`, `k_s`, `m_t` on the span of `ξ^{⊗0..=N}`.
#[derive(Clone, Debug)]
pub struct Generators {
    pub creation: FockMatrix,
    pub annihilation: FockMatrix,
    pub scalar: FockMatrix,
    pub intermediate: FockMatrix,
}

pub fn build_generators(top: usize) -> Generators {
    assert!(top >= 1, "truncation level must be at least 1");
    let dim = top + 1;
    let mut creation = FockMatrix::zeros(dim);
    let mut annihilation = FockMatrix::zeros(dim);
    let mut scalar = FockMatrix::zeros(dim);
    let mut intermediate = FockMatrix::zeros(dim);
    for m in 0..dim {
        if m + 1 < dim {
            creation.set(m + 1, m, MultiPoly::one());
        }
        if m >= 1 {
            annihilation.set(m - 1, m, MultiPoly::s_pow(m as u32 - 1));
            intermediate.set(m, m, MultiPoly::t_pow(m as u32 - 1));
        }
        scalar.set(m, m, MultiPoly::s_pow(m as u32));
    }
    Generators {
        creation,
        annihilation,
        scalar,
        intermediate,
    }
}

/// `P = m_t + √λ (a† + a) + λ k_s`.
pub fn poisson_matrix(top: usize) -> FockMatrix {
    let g = build_generators(top);
    let hopping = (&g.creation + &g.annihilation).scale(&MultiPoly::sqrt_lambda());
    let diagonal = &g.intermediate + &g.scalar.scale(&MultiPoly::lambda_pow(1));
    &hopping + &diagonal
}

/// `(PⁿΩ | Ω)_s`, built at truncation `N = n`.
pub fn vacuum_moment_operator(n: usize) -> MultiPoly {
    vacuum_moment_at(n, n.max(1))
}

/// Vacuum entry of `Pⁿ` at an explicit truncation level.
pub fn vacuum_moment_at(n: usize, top: usize) -> MultiPoly {
    let p = poisson_matrix(top);
    let mut v = vec![MultiPoly::zero(); top + 1];
    v[0] = MultiPoly::one();
    for _ in 0..n {
        v = p.apply(&v);
    }
    v.swap_remove(0)
}

/// One commutation relation checked column by column.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationCheck {
    pub name: &'static str,
    /// Columns `m` on which the identity is asserted, inclusive.
    pub columns: (usize, usize),
    /// Columns in that range where the two sides differ.
    pub failing_columns: Vec<usize>,
}

impl RelationCheck {
    pub fn holds(&self) -> bool {
        self.failing_columns.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    pub truncation: usize,
    pub relations: Vec<RelationCheck>,
}

impl RelationReport {
    pub fn all_hold(&self) -> bool {
        self.relations.iter().all(RelationCheck::holds)
    }
}

/// Columns in `lo..=hi` where `lhs` and `rhs` act differently.
pub fn differing_columns(lhs: &FockMatrix, rhs: &FockMatrix, lo: usize, hi: usize) -> Vec<usize> {
    (lo..=hi).filter(|&j| lhs.column(j) != rhs.column(j)).collect()
}

/// Checks the commutation relations between the generators on the column
/// ranges `m ≥ m₀` they are stated for. Products that pass through the
/// truncation boundary (`a a†` on `ξ^{⊗N}`) are not checked at column `N`.
pub fn check_relations(top: usize) -> RelationReport {
    assert!(top >= 2, "relations need N ≥ 2");
    let g = build_generators(top);
    let (cre, ann, k, m) = (&g.creation, &g.annihilation, &g.scalar, &g.intermediate);
    let s = MultiPoly::s_pow(1);
    let t = MultiPoly::t_pow(1);
    let n = top;
    let ann_cre = ann * cre;
    let cases: Vec<(&'static str, FockMatrix, FockMatrix, usize, usize)> = vec![
        ("a a† = k_s", ann_cre.clone(), k.clone(), 0, n - 1),
        ("a a† = s a† a", ann_cre, (cre * ann).scale(&s), 1, n - 1),
        ("k_s a† = s a† k_s", k * cre, (cre * k).scale(&s), 0, n),
        ("s k_s a = a k_s", (k * ann).scale(&s), ann * k, 1, n),
        ("m_t a† = t a† m_t", m * cre, (cre * m).scale(&t), 0, n),
        ("t m_t a = a m_t", (m * ann).scale(&t), ann * m, 1, n),
        ("k_s m_t = m_t k_s", k * m, m * k, 1, n),
    ];
    let relations = cases
        .into_iter()
        .map(|(name, lhs, rhs, lo, hi)| RelationCheck {
            name,
            columns: (lo, hi),
            failing_columns: differing_columns(&lhs, &rhs, lo, hi),
        })
        .collect();
    RelationReport {
        truncation: top,
        relations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Monomial;

    fn mono(h: u32, s: u32, t: u32) -> MultiPoly {
        MultiPoly::term(Monomial::new(h, s, t), 1)
    }

    #[test]
    fn generator_entries() {
        let g1 = build_generators(1);
        assert_eq!(g1.annihilation.get(0, 1), &MultiPoly::one());
        let g2 = build_generators(2);
        assert_eq!(g2.annihilation.get(1, 2), &MultiPoly::s_pow(1));
        assert!(g2.intermediate.get(0, 0).is_zero());
        assert_eq!(g2.intermediate.get(2, 2), &MultiPoly::t_pow(1));
        assert_eq!(g2.scalar.get(0, 0), &MultiPoly::one());
        assert_eq!(g2.scalar.get(2, 2), &MultiPoly::s_pow(2));
        // truncation: ξ^{⊗2} ↦ 0
        assert!(g2.creation.column(2).iter().all(MultiPoly::is_zero));
    }

    #[test]
    fn poisson_entries() {
        let p = poisson_matrix(3);
        assert_eq!(p.get(0, 0), &MultiPoly::lambda_pow(1));
        assert_eq!(p.get(1, 0), &MultiPoly::sqrt_lambda());
        assert_eq!(p.get(1, 1), &(&MultiPoly::one() + &mono(2, 1, 0)));
        assert_eq!(p.get(2, 3), &mono(1, 2, 0));
        assert_eq!(p.get(3, 3), &(&MultiPoly::t_pow(2) + &mono(2, 3, 0)));
        assert!(p.get(0, 2).is_zero());
    }

    #[test]
    fn vacuum_moment_examples() {
        assert_eq!(vacuum_moment_operator(0), MultiPoly::one());
        assert_eq!(vacuum_moment_operator(2).to_string(), "l^2 + l");
        // Σ over NC(3): {1}{2}{3}, {12}{3}, {1}{23}, {13}{2}, {123}
        assert_eq!(vacuum_moment_operator(3).to_string(), "l^3 + l^2*s + 2*l^2 + l");
    }

    #[test]
    fn matrix_power_agrees_with_vector_iteration() {
        for n in 0..=5u32 {
            let p = poisson_matrix(n.max(1) as usize);
            assert_eq!(p.pow(n).get(0, 0), &vacuum_moment_operator(n as usize));
        }
    }

    #[test]
    fn truncation_stability() {
        for n in 0..=10 {
            assert_eq!(vacuum_moment_at(n, n.max(1)), vacuum_moment_at(n, n + 3), "n={n}");
            assert!(vacuum_moment_operator(n).has_integral_lambda());
        }
    }

    #[test]
    fn weighted_self_adjointness() {
        for top in 1..=6 {
            let p = poisson_matrix(top);
            assert!(p.is_weighted_self_adjoint());
            for m in 0..top {
                assert_eq!(p.get(m + 1, m), &MultiPoly::sqrt_lambda());
                assert_eq!(p.get(m, m + 1), &mono(1, m as u32, 0));
            }
        }
        // the unweighted transpose is not symmetric once s enters
        let p = poisson_matrix(3);
        assert_ne!(p.get(1, 2), p.get(2, 1));
    }

    #[test]
    fn relation_report_locates_boundary_failures() {
        for top in [2, 5, 6] {
            let report = check_relations(top);
            assert_eq!(report.relations.len(), 7);
            for r in &report.relations {
                match r.name {
                    // m_t a† Ω = ξ while a† m_t Ω = 0.
                    "m_t a† = t a† m_t" => assert_eq!(r.failing_columns, vec![0]),
                    // a m_t ξ = Ω while m_t a ξ = m_t Ω = 0.
                    "t m_t a = a m_t" => assert_eq!(r.failing_columns, vec![1]),
                    _ => assert!(r.holds(), "{} N={top}: {:?}", r.name, r.failing_columns),
                }
            }
        }
    }

    #[test]
    fn relations_hold_one_column_further_in() {
        let g = build_generators(6);
        let (cre, ann, m) = (&g.creation, &g.annihilation, &g.intermediate);
        let t = MultiPoly::t_pow(1);
        assert!(differing_columns(&(m * cre), &(cre * m).scale(&t), 1, 6).is_empty());
        assert!(differing_columns(&(m * ann).scale(&t), &(ann * m), 2, 6).is_empty());
    }

    #[test]
    fn unscaled_exchange_differs() {
        let g = build_generators(5);
        let aad = &g.annihilation * &g.creation;
        let ada = &g.creation * &g.annihilation;
        assert!(!differing_columns(&aad, &ada, 1, 4).is_empty());
    }
}
