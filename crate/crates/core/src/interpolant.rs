//! Lagrange interpolants and cardinal functions.

use serde::{Deserialize, Serialize};

use crate::basis::{BasisFunction, BasisSequence};
use crate::error::{Error, Result};
use crate::linalg::{determinant, inverse, DenseMatrix};
use crate::vandermonde::{build_square, newton_factorize, NodeSet};

/// Relative size below which the Schur complement of an enlarged system is
/// treated as zero.
pub const ENLARGE_TOL: f64 = 1e-12;

/// `L f(x) = Σ c_i φ_i(x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Interpolant {
    pub basis: BasisSequence,
    pub nodes: NodeSet,
    pub coefficients: Vec<f64>,
}

impl Interpolant {
    pub fn evaluate(&self, point: &[f64]) -> Result<f64> {
        let phi = self.basis.eval_vector(point)?;
        Ok(phi.iter().zip(&self.coefficients).map(|(p, c)| p * c).sum())
    }
}

/// Solves `Vᵀc = f` through the Newton form.
pub fn fit(basis: &BasisSequence, nodes: &NodeSet, values: &[f64]) -> Result<Interpolant> {
    if values.len() != nodes.len() {
        return Err(Error::SizeMismatch {
            expected: nodes.len(),
            found: values.len(),
        });
    }
    let coefficients = newton_factorize(basis, nodes)?.solve(values)?;
    Ok(Interpolant {
        basis: basis.clone(),
        nodes: nodes.clone(),
        coefficients,
    })
}

pub fn evaluate(p: &Interpolant, point: &[f64]) -> Result<f64> {
    p.evaluate(point)
}

/// Cardinal functions `ℓ_i(x) = Σ_j w_ij φ_j(x)` with `W = V⁻¹`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CardinalSet {
    basis: BasisSequence,
    nodes: NodeSet,
    weights: DenseMatrix,
    vandermonde: DenseMatrix,
    det: f64,
}

impl CardinalSet {
    pub fn basis(&self) -> &BasisSequence {
        &self.basis
    }

    pub fn nodes(&self) -> &NodeSet {
        &self.nodes
    }

    pub fn weights(&self) -> &DenseMatrix {
        &self.weights
    }

    pub fn vandermonde(&self) -> &DenseMatrix {
        &self.vandermonde
    }

    /// `det V`.
    pub fn determinant(&self) -> f64 {
        self.det
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// `[ℓ_1(x), …, ℓ_n(x)]`.
    pub fn eval(&self, point: &[f64]) -> Result<Vec<f64>> {
        let phi = self.basis.eval_vector(point)?;
        Ok(self.combine(&phi))
    }

    /// `W · φ` for a precomputed basis vector.
    pub(crate) fn combine(&self, phi: &[f64]) -> Vec<f64> {
        (0..self.len())
            .map(|i| self.weights.row(i).iter().zip(phi).map(|(w, p)| w * p).sum())
            .collect()
    }

    /// `Σ_i |ℓ_i(x)|` given `φ(x)`; reuses `phi` as scratch-free input.
    pub(crate) fn abs_sum(&self, phi: &[f64]) -> f64 {
        (0..self.len())
            .map(|i| {
                self.weights
                    .row(i)
                    .iter()
                    .zip(phi)
                    .map(|(w, p)| w * p)
                    .sum::<f64>()
                    .abs()
            })
            .sum()
    }
}

pub fn cardinal_functions(basis: &BasisSequence, nodes: &NodeSet) -> Result<CardinalSet> {
    let vandermonde = build_square(basis, nodes)?;
    let weights = inverse(&vandermonde)?;
    let det = determinant(&vandermonde)?;
    Ok(CardinalSet {
        basis: basis.clone(),
        nodes: nodes.clone(),
        weights,
        vandermonde,
        det,
    })
}

/// Adds node `x_{n+1}` and basis function `φ_{n+1}`, updating the cardinal
/// functions without re-inverting:
///
/// ```text
/// ℓ_{n+1}'(x) = (φ_{n+1}(x) − Σ ℓ_i(x) φ_{n+1}(x_i)) / (φ_{n+1}(x_{n+1}) − Σ ℓ_i(x_{n+1}) φ_{n+1}(x_i))
/// ℓ_i'(x)     = ℓ_i(x) − ℓ_{n+1}'(x) ℓ_i(x_{n+1})
/// ```
pub fn add_node(card: &CardinalSet, new_node: &[f64], new_phi: &BasisFunction) -> Result<CardinalSet> {
    let n = card.len();
    let mut nodes = card.nodes.clone();
    nodes.push(new_node.to_vec())?;
    let mut basis = card.basis.clone();
    basis.push(new_phi.clone())?;

    // g_i = φ_{n+1}(x_i)
    let g: Vec<f64> = card.nodes.points().iter().map(|x| new_phi.eval_unchecked(x)).collect();
    let ell_new = card.eval(new_node)?;
    let phi_new_at_new = new_phi.eval_unchecked(new_node);
    let correction: f64 = ell_new.iter().zip(&g).map(|(l, gi)| l * gi).sum();
    let denominator = phi_new_at_new - correction;
    let scale = phi_new_at_new.abs() + ell_new.iter().zip(&g).map(|(l, gi)| (l * gi).abs()).sum::<f64>();
    if !(denominator.abs() > ENLARGE_TOL * scale) {
        return Err(Error::EnlargedSystemSingular { denominator });
    }

    // Row of ℓ_{n+1}' in the enlarged basis: [-(gᵀW), 1] / den.
    let mut last = vec![0.0; n + 1];
    for j in 0..n {
        let gw: f64 = (0..n).map(|i| g[i] * card.weights[(i, j)]).sum();
        last[j] = -gw / denominator;
    }
    last[n] = 1.0 / denominator;

    let mut weights = DenseMatrix::zeros(n + 1, n + 1);
    for i in 0..n {
        for j in 0..=n {
            let old = if j < n { card.weights[(i, j)] } else { 0.0 };
            weights[(i, j)] = old - ell_new[i] * last[j];
        }
    }
    for j in 0..=n {
        weights[(n, j)] = last[j];
    }

    let vandermonde = build_square(&basis, &nodes)?;
    Ok(CardinalSet {
        basis,
        nodes,
        weights,
        vandermonde,
        det: card.det * denominator,
    })
}

/// Bordered determinant via the Schur complement:
/// `det V_n · (φ_{n+1}(x) − Σ_i ℓ_i(x) φ_{n+1}(x_i))`.
///
/// `new_node_values[i] = φ_{n+1}(x_i)`, `new_phi_at = φ_{n+1}(x)` and
/// `old_basis_at[j] = φ_j(x)`.
pub fn schur_border_det(
    card: &CardinalSet,
    new_node_values: &[f64],
    new_phi_at: f64,
    old_basis_at: &[f64],
) -> Result<f64> {
    let n = card.len();
    for len in [new_node_values.len(), old_basis_at.len()] {
        if len != n {
            return Err(Error::SizeMismatch {
                expected: n,
                found: len,
            });
        }
    }
    let ell = card.combine(old_basis_at);
    let s: f64 = ell.iter().zip(new_node_values).map(|(l, g)| l * g).sum();
    Ok(card.det * (new_phi_at - s))
}
