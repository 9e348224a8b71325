//! Multi-indices and tensor-product polynomial bases.
//!
//! A basis function is a value-only descriptor: a polynomial family together
//! with an exponent tuple `α`. Monomials evaluate to `x^α = Π x_i^{α_i}` and
//! Chebyshev tensors to `Π T_{α_i}(x_i)`.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponent tuple `α ∈ ℕ₀^d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Result<Self> {
        if exponents.is_empty() {
            return Err(Error::InvalidDimension(0));
        }
        Ok(MultiIndex(exponents))
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        Self::new(vec![0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Total degree `|α|`.
    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    /// Number of nonzero components.
    pub fn support_size(&self) -> usize {
        self.0.iter().filter(|&&a| a != 0).count()
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// All `α` with `|α| = degree` in `dim` variables, lexicographically descending.
pub(crate) fn indices_of_degree(dim: usize, degree: u32) -> Vec<Vec<u32>> {
    fn rec(dim: usize, remaining: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if dim == 1 {
            prefix.push(remaining);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in (0..=remaining).rev() {
            prefix.push(first);
            rec(dim - 1, remaining - first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if dim > 0 {
        rec(dim, degree, &mut Vec::with_capacity(dim), &mut out);
    }
    out
}

/// All multi-indices with `|α| ≤ max_degree`, grouped by total degree
/// ascending and lexicographically descending within a degree.
///
/// For `d = 2` this yields `1, x₁, x₂, x₁², x₁x₂, x₂², …`.
pub fn total_degree_indices(dim: usize, max_degree: u32) -> Result<Vec<MultiIndex>> {
    if dim == 0 {
        return Err(Error::InvalidDimension(0));
    }
    Ok((0..=max_degree)
        .flat_map(|g| indices_of_degree(dim, g))
        .map(MultiIndex)
        .collect())
}

/// Chebyshev polynomial of the first kind via the three-term recursion.
pub fn chebyshev_eval(degree: u32, x: f64) -> f64 {
    match degree {
        0 => 1.0,
        1 => x,
        _ => {
            let (mut prev, mut cur) = (1.0, x);
            for _ in 1..degree {
                let next = 2.0 * x * cur - prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisFamily {
    Monomial,
    Chebyshev,
}

impl BasisFamily {
    pub fn name(self) -> &'static str {
        match self {
            BasisFamily::Monomial => "monomial",
            BasisFamily::Chebyshev => "chebyshev",
        }
    }

    fn univariate(self, degree: u32, x: f64) -> f64 {
        match self {
            BasisFamily::Monomial => x.powi(degree as i32),
            BasisFamily::Chebyshev => chebyshev_eval(degree, x),
        }
    }
}

impl std::str::FromStr for BasisFamily {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "monomial" => Ok(BasisFamily::Monomial),
            "chebyshev" => Ok(BasisFamily::Chebyshev),
            other => Err(format!("unknown basis family `{other}`")),
        }
    }
}

/// Tensor-product polynomial `φ_α(x) = ψ_{α_1}(x_1)⋯ψ_{α_d}(x_d)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasisFunction {
    pub family: BasisFamily,
    pub index: MultiIndex,
}

impl BasisFunction {
    pub fn monomial(exponents: Vec<u32>) -> Result<Self> {
        Ok(BasisFunction {
            family: BasisFamily::Monomial,
            index: MultiIndex::new(exponents)?,
        })
    }

    pub fn chebyshev(exponents: Vec<u32>) -> Result<Self> {
        Ok(BasisFunction {
            family: BasisFamily::Chebyshev,
            index: MultiIndex::new(exponents)?,
        })
    }

    pub fn dim(&self) -> usize {
        self.index.dim()
    }

    pub fn eval(&self, point: &[f64]) -> Result<f64> {
        if point.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: point.len(),
            });
        }
        Ok(self.eval_unchecked(point))
    }

    #[inline]
    pub(crate) fn eval_unchecked(&self, point: &[f64]) -> f64 {
        self.index
            .exponents()
            .iter()
            .zip(point)
            .map(|(&a, &x)| self.family.univariate(a, x))
            .product()
    }
}

impl fmt::Display for BasisFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.name(), self.index)
    }
}

/// Evaluate `φ` at `point`.
pub fn basis_eval(phi: &BasisFunction, point: &[f64]) -> Result<f64> {
    phi.eval(point)
}

/// Ordered sequence of distinct basis functions sharing one dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisSequence {
    dim: usize,
    functions: Vec<BasisFunction>,
}

impl BasisSequence {
    pub fn new(dim: usize, functions: Vec<BasisFunction>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(0));
        }
        let mut seen = HashSet::with_capacity(functions.len());
        for phi in &functions {
            if phi.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: phi.dim(),
                });
            }
            if !seen.insert(phi) {
                return Err(Error::DuplicateBasisFunction(phi.to_string()));
            }
        }
        Ok(BasisSequence { dim, functions })
    }

    /// Total-degree space `Π_k^d` in the given family.
    pub fn total_degree(family: BasisFamily, dim: usize, max_degree: u32) -> Result<Self> {
        let functions = total_degree_indices(dim, max_degree)?
            .into_iter()
            .map(|index| BasisFunction { family, index })
            .collect();
        Ok(BasisSequence { dim, functions })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    pub fn functions(&self) -> &[BasisFunction] {
        &self.functions
    }

    pub fn get(&self, i: usize) -> Option<&BasisFunction> {
        self.functions.get(i)
    }

    pub fn contains(&self, phi: &BasisFunction) -> bool {
        self.functions.contains(phi)
    }

    /// Sub-sequence picked by (0-based) positions, in the given order.
    pub fn select(&self, rows: &[usize]) -> Result<Self> {
        let functions = rows
            .iter()
            .map(|&r| {
                self.functions.get(r).cloned().ok_or(Error::SizeMismatch {
                    expected: self.len(),
                    found: r + 1,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        BasisSequence::new(self.dim, functions)
    }

    /// Appends `phi`, rejecting duplicates and dimension mismatches.
    pub fn push(&mut self, phi: BasisFunction) -> Result<()> {
        if phi.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: phi.dim(),
            });
        }
        if self.contains(&phi) {
            return Err(Error::DuplicateBasisFunction(phi.to_string()));
        }
        self.functions.push(phi);
        Ok(())
    }

    /// `[φ_1(x), …, φ_n(x)]`.
    pub fn eval_vector(&self, point: &[f64]) -> Result<Vec<f64>> {
        if point.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: point.len(),
            });
        }
        Ok(self.eval_vector_unchecked(point))
    }

    pub(crate) fn eval_vector_unchecked(&self, point: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.functions.len()];
        self.eval_into(point, &mut out);
        out
    }

    pub(crate) fn eval_into(&self, point: &[f64], out: &mut [f64]) {
        for (o, phi) in out.iter_mut().zip(&self.functions) {
            *o = phi.eval_unchecked(point);
        }
    }
}

/// Evaluate every function of `basis` at `point`.
pub fn basis_eval_vector(basis: &BasisSequence, point: &[f64]) -> Result<Vec<f64>> {
    basis.eval_vector(point)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binomial(n: u64, k: u64) -> u64 {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn monomial_order_matches_degree_lex_listing() {
        let idx = total_degree_indices(2, 2).unwrap();
        let tuples: Vec<_> = idx.iter().map(|a| a.exponents().to_vec()).collect();
        assert_eq!(
            tuples,
            vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1], vec![0, 2]]
        );
        assert_eq!(idx.len(), (4 + 6 + 2) / 2);
    }

    #[test]
    fn constant_only_space() {
        let idx = total_degree_indices(3, 0).unwrap();
        assert_eq!(idx, vec![MultiIndex::zeros(3).unwrap()]);
    }

    #[test]
    fn degree_three_against_brute_force() {
        let idx = total_degree_indices(2, 3).unwrap();
        // brute force: every pair with sum <= 3, sorted by (degree asc, tuple desc)
        let mut brute: Vec<Vec<u32>> = (0..=3)
            .flat_map(|a| (0..=3).map(move |b| vec![a, b]))
            .filter(|t| t.iter().sum::<u32>() <= 3)
            .collect();
        brute.sort_by(|a, b| {
            let (da, db) = (a.iter().sum::<u32>(), b.iter().sum::<u32>());
            da.cmp(&db).then_with(|| b.cmp(a))
        });
        let got: Vec<_> = idx.iter().map(|a| a.exponents().to_vec()).collect();
        assert_eq!(got, brute);
        assert_eq!(got.len(), 10);
        assert_eq!(&got[6..], &[vec![3, 0], vec![2, 1], vec![1, 2], vec![0, 3]]);
    }

    #[test]
    fn zero_dimension_rejected() {
        assert_eq!(total_degree_indices(0, 2), Err(Error::InvalidDimension(0)));
    }

    #[test]
    fn enumeration_is_complete() {
        for d in 1..=4usize {
            for k in 0..=6u32 {
                let idx = total_degree_indices(d, k).unwrap();
                assert_eq!(idx.len() as u64, binomial(k as u64 + d as u64, d as u64));
                let distinct: HashSet<_> = idx.iter().collect();
                assert_eq!(distinct.len(), idx.len());
                assert!(idx.iter().all(|a| a.total_degree() <= k));
            }
        }
    }

    #[test]
    fn chebyshev_small_cases() {
        assert_eq!(chebyshev_eval(0, 0.3), 1.0);
        assert_eq!(chebyshev_eval(1, 0.3), 0.3);
        let x = -std::f64::consts::FRAC_1_SQRT_2;
        let t4 = chebyshev_eval(4, x);
        assert!((t4 - (1.0 - 8.0 * x * x + 8.0 * x.powi(4))).abs() < 1e-14);
        assert!((t4 + 1.0).abs() < 1e-5);
        assert!((chebyshev_eval(7, 0.25) - (7.0 * 0.25f64.acos()).cos()).abs() < 1e-14);
    }

    #[test]
    fn chebyshev_outside_unit_interval_is_polynomial() {
        let x = 1.5f64;
        assert!((chebyshev_eval(3, x) - (4.0 * x.powi(3) - 3.0 * x)).abs() < 1e-12);
    }

    #[test]
    fn tensor_evaluation() {
        let m = BasisFunction::monomial(vec![1, 1]).unwrap();
        assert_eq!(basis_eval(&m, &[0.5, 2.0]).unwrap(), 1.0);
        let c = BasisFunction::chebyshev(vec![2, 0]).unwrap();
        assert_eq!(basis_eval(&c, &[0.0, 0.9]).unwrap(), -1.0);
        let c = BasisFunction::chebyshev(vec![3, 1]).unwrap();
        let expected = (4.0 * 0.064 - 3.0 * 0.4) * 0.2;
        assert!((basis_eval(&c, &[0.4, 0.2]).unwrap() - expected).abs() < 1e-15);
        assert!(matches!(
            basis_eval(&c, &[0.4]),
            Err(Error::DimensionMismatch { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn eval_vector_cases() {
        let b = BasisSequence::total_degree(BasisFamily::Monomial, 2, 1).unwrap();
        assert_eq!(basis_eval_vector(&b, &[3.0, 4.0]).unwrap(), vec![1.0, 3.0, 4.0]);
        let empty = BasisSequence::new(2, vec![]).unwrap();
        assert!(basis_eval_vector(&empty, &[3.0, 4.0]).unwrap().is_empty());
        assert!(b.eval_vector(&[1.0]).is_err());
    }

    #[test]
    fn sequence_rejects_duplicates_and_mixed_dimensions() {
        let a = BasisFunction::monomial(vec![1, 0]).unwrap();
        assert!(matches!(
            BasisSequence::new(2, vec![a.clone(), a.clone()]),
            Err(Error::DuplicateBasisFunction(_))
        ));
        let b = BasisFunction::monomial(vec![1]).unwrap();
        assert!(BasisSequence::new(2, vec![a.clone(), b]).is_err());
        // same exponents, different family: distinct descriptors
        let c = BasisFunction::chebyshev(vec![1, 0]).unwrap();
        assert!(BasisSequence::new(2, vec![a, c]).is_ok());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn recursion_matches_trig_form(k in 0u32..=12, x in -1.0f64..=1.0) {
                let trig = (k as f64 * x.acos()).cos();
                prop_assert!((chebyshev_eval(k, x) - trig).abs() <= 1e-12);
            }

            #[test]
            fn tensor_factorizes(a in 0u32..8, b in 0u32..8, c in 0u32..8,
                                 x in -1.0f64..=1.0, y in -1.0f64..=1.0, z in -1.0f64..=1.0) {
                let phi = BasisFunction::chebyshev(vec![a, b, c]).unwrap();
                let direct = chebyshev_eval(a, x) * chebyshev_eval(b, y) * chebyshev_eval(c, z);
                prop_assert_eq!(phi.eval(&[x, y, z]).unwrap(), direct);
            }
        }
    }
}
