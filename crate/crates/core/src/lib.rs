//! Moments, orthogonal polynomials and partition statistics of the
//! s-weighted free Poisson distribution `Π^s_{t,λ}`.
//!
//! Three independent engines compute the `n`-th moment as an exact
//! polynomial in `λ`, `s`, `t`:
//!
//! - [`fock`]: the vacuum entry of `Pⁿ` for the truncated one-mode operator
//!   `P = m_t + √λ (a† + a) + λ k_s`;
//! - [`moments::moment_jacobi`]: the vacuum entry of `Jⁿ` for the monic
//!   Jacobi matrix of the orthogonal polynomial recurrence;
//! - [`moments::moment_nc`] / [`moments::moment_blockwise`]: weighted sums
//!   over non-crossing partitions.
//!
//! [`words`] carries the bijection between admissible operator words and
//! non-crossing partitions, and [`analytic`] the floating-point Cauchy
//! transform layer.

pub mod analytic;
pub mod fock;
pub mod moments;
pub mod partitions;
pub mod poly;
pub mod words;

pub use partitions::{EnumLimit, Family, NCPartition, PartitionStats, SetPartition};
pub use poly::{DeformParams, Monomial, MultiPoly};
pub use words::{CardArrangement, Letter, OperatorWord};
