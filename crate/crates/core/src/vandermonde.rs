//! Generalized and square Vandermonde matrices, and the Newton form obtained
//! from an LU factorization of the transposed system.

use serde::{Deserialize, Serialize};

use crate::basis::BasisSequence;
use crate::error::{Error, Result};
use crate::linalg::{lu_factor, DenseMatrix, LuFactorization};

/// Nodes closer than this in the max-norm are treated as coincident.
pub const NODE_DISTINCTNESS: f64 = 1e-14;

/// Ordered set of mutually distinct points in `ℝ^d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeSet {
    dim: usize,
    points: Vec<Vec<f64>>,
}

fn max_norm_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

impl NodeSet {
    pub fn new(dim: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(0));
        }
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.len(),
                });
            }
            if p.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidNodeSet(format!("node {} is not finite", i + 1)));
            }
        }
        for i in 0..points.len() {
            for j in 0..i {
                if max_norm_distance(&points[i], &points[j]) <= NODE_DISTINCTNESS {
                    return Err(Error::DuplicateNodes {
                        first: j + 1,
                        second: i + 1,
                    });
                }
            }
        }
        Ok(NodeSet { dim, points })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn get(&self, i: usize) -> Option<&[f64]> {
        self.points.get(i).map(Vec::as_slice)
    }

    /// The first `count` nodes.
    pub fn prefix(&self, count: usize) -> NodeSet {
        NodeSet {
            dim: self.dim,
            points: self.points[..count.min(self.len())].to_vec(),
        }
    }

    /// Nodes picked by position, in the given order.
    pub fn reorder(&self, order: &[usize]) -> NodeSet {
        NodeSet {
            dim: self.dim,
            points: order.iter().map(|&i| self.points[i].clone()).collect(),
        }
    }

    pub fn contains(&self, point: &[f64]) -> bool {
        self.points
            .iter()
            .any(|p| max_norm_distance(p, point) <= NODE_DISTINCTNESS)
    }

    /// Appends a point, rejecting duplicates.
    pub fn push(&mut self, point: Vec<f64>) -> Result<()> {
        if point.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: point.len(),
            });
        }
        if let Some(j) = self
            .points
            .iter()
            .position(|p| max_norm_distance(p, &point) <= NODE_DISTINCTNESS)
        {
            return Err(Error::DuplicateNodes {
                first: j + 1,
                second: self.len() + 1,
            });
        }
        self.points.push(point);
        Ok(())
    }
}

fn check_dims(basis: &BasisSequence, nodes: &NodeSet) -> Result<()> {
    if basis.dim() != nodes.dim() {
        return Err(Error::DimensionMismatch {
            expected: basis.dim(),
            found: nodes.dim(),
        });
    }
    Ok(())
}

/// `m × n` matrix with entries `φ_i(x_j)`.
pub fn build_generalized(trial: &BasisSequence, nodes: &NodeSet) -> Result<DenseMatrix> {
    check_dims(trial, nodes)?;
    if nodes.is_empty() {
        return Err(Error::InvalidNodeSet("no nodes".into()));
    }
    if trial.len() < nodes.len() {
        return Err(Error::InsufficientTrialBasis {
            trial: trial.len(),
            nodes: nodes.len(),
        });
    }
    let (m, n) = (trial.len(), nodes.len());
    let mut v = DenseMatrix::zeros(m, n);
    let mut column = vec![0.0; m];
    for (j, x) in nodes.points().iter().enumerate() {
        trial.eval_into(x, &mut column);
        for (i, &val) in column.iter().enumerate() {
            v[(i, j)] = val;
        }
    }
    Ok(v)
}

/// Square Vandermonde matrix `V_{B,X}`.
pub fn build_square(basis: &BasisSequence, nodes: &NodeSet) -> Result<DenseMatrix> {
    if basis.len() != nodes.len() {
        return Err(Error::SizeMismatch {
            expected: basis.len(),
            found: nodes.len(),
        });
    }
    build_generalized(basis, nodes)
}

/// Newton form of an interpolation problem: `Vᵀ = P⁻¹LU`.
///
/// The Newton functions are `p(x) = U⁻ᵀ [φ_1(x), …, φ_n(x)]ᵀ` and satisfy
/// `p_i(x̃_j) = δ_{ij}` for `j ≤ i`, where `x̃ = P x`.
#[derive(Debug, Clone)]
pub struct NewtonForm {
    basis: BasisSequence,
    reordered_nodes: NodeSet,
    lu: LuFactorization,
}

impl NewtonForm {
    pub fn basis(&self) -> &BasisSequence {
        &self.basis
    }

    pub fn reordered_nodes(&self) -> &NodeSet {
        &self.reordered_nodes
    }

    pub fn permutation(&self) -> &[usize] {
        &self.lu.permutation
    }

    pub fn lower_factor(&self) -> &DenseMatrix {
        &self.lu.lower
    }

    /// `Uᵀ`, the change of basis from Newton functions to `φ`.
    pub fn change_of_basis(&self) -> DenseMatrix {
        self.lu.upper.transpose()
    }

    pub fn determinant(&self) -> f64 {
        self.lu.determinant()
    }

    /// Coefficients `c` with `Vᵀc = f`: solves `Lt = Pf`, then `Uc = t`.
    pub fn solve(&self, values: &[f64]) -> Result<Vec<f64>> {
        self.lu.solve(values)
    }

    /// Values `[p_1(x), …, p_n(x)]`.
    pub fn eval_newton(&self, point: &[f64]) -> Result<Vec<f64>> {
        let phi = self.basis.eval_vector(point)?;
        // Uᵀ p = φ is lower triangular.
        let n = phi.len();
        let u = &self.lu.upper;
        let mut p = phi;
        for i in 0..n {
            let mut s = p[i];
            for k in 0..i {
                s -= u[(k, i)] * p[k];
            }
            p[i] = s / u[(i, i)];
        }
        Ok(p)
    }

    /// Newton coefficients `t = L⁻¹Pf`; the interpolant is `Σ t_i p_i`.
    pub fn newton_coefficients(&self, values: &[f64]) -> Result<Vec<f64>> {
        if values.len() != self.lu.dim() {
            return Err(Error::SizeMismatch {
                expected: self.lu.dim(),
                found: values.len(),
            });
        }
        let mut t = self.lu.permute(values);
        self.lu.forward_substitute(&mut t);
        Ok(t)
    }
}

pub fn newton_factorize(basis: &BasisSequence, nodes: &NodeSet) -> Result<NewtonForm> {
    let v = build_square(basis, nodes)?;
    let lu = lu_factor(&v.transpose())?;
    let reordered_nodes = nodes.reorder(&lu.permutation);
    Ok(NewtonForm {
        basis: basis.clone(),
        reordered_nodes,
        lu,
    })
}
