//! Smolyak sparse grids on Clenshaw–Curtis abscissae and the matching sparse
//! Chebyshev bases.
//!
//! Ordering conventions:
//!
//! * Level blocks `β` (with `α = β + 1`) of a given level are grouped by the
//!   number of nonzero components, ascending, and listed lexicographically
//!   descending within a group.
//! * Each block is expanded as a tensor product in row-major order (first
//!   axis slowest, every axis ascending), keeping only points that were not
//!   emitted before.
//! * Grids up to order 2 are generated directly from their top-level blocks.
//!   From order 3 on, a grid is the previous grid followed by its new points,
//!   so `X_{d,k}` is a prefix of `X_{d,k+1}` for `k ≥ 2`.
//! * Bases are accumulated level by level from level 0; block `β` contributes
//!   the Chebyshev degrees `m(β_i) .. m(β_i + 1) - 1` on axis `i`.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::basis::{indices_of_degree, BasisFamily, BasisFunction, BasisSequence, MultiIndex};
use crate::error::{Error, Result};
use crate::vandermonde::NodeSet;

const DEDUP_TOL: f64 = 1e-12;

/// Number of univariate points on level `k`: `m(0) = 0`, `m(1) = 1`,
/// `m(k) = 2^{k-1} + 1`.
pub fn level_count(k: u32) -> usize {
    match k {
        0 => 0,
        1 => 1,
        _ => (1usize << (k - 1)) + 1,
    }
}

/// Clenshaw–Curtis abscissae of level `k` in ascending order.
///
/// Endpoints are exactly `±1`, the midpoint exactly `0`, and the set is
/// exactly symmetric.
pub fn cc_nodes(k: u32) -> Result<Vec<f64>> {
    if k == 0 {
        return Err(Error::InvalidLevel(0));
    }
    if k == 1 {
        return Ok(vec![0.0]);
    }
    let m = level_count(k);
    let mut x = vec![0.0; m];
    let h = std::f64::consts::PI / (m - 1) as f64;
    x[0] = -1.0;
    x[m - 1] = 1.0;
    for j in 1..(m - 1) / 2 {
        let v = -(j as f64 * h).cos();
        x[j] = v;
        x[m - 1 - j] = -v;
    }
    x[(m - 1) / 2] = 0.0;
    Ok(x)
}

/// Block offsets `β` with `|β| = level`.
pub fn level_order(level: u32, dim: usize) -> Vec<MultiIndex> {
    let mut all = indices_of_degree(dim, level);
    // stable sort keeps the lexicographically descending order inside groups
    all.sort_by_key(|b| b.iter().filter(|&&v| v != 0).count());
    all.into_iter().map(|b| MultiIndex::new(b).expect("dim >= 1")).collect()
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 2 || dim == 3 {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(dim))
    }
}

fn close(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= DEDUP_TOL)
}

fn push_new(out: &mut Vec<Vec<f64>>, p: Vec<f64>) {
    if !out.iter().any(|q| close(q, &p)) {
        out.push(p);
    }
}

/// Appends the points of the level-`level` blocks not already in `out`.
fn append_level_points(out: &mut Vec<Vec<f64>>, level: u32, dim: usize) {
    for beta in level_order(level, dim) {
        let axes: Vec<Vec<f64>> = beta
            .exponents()
            .iter()
            .map(|&b| cc_nodes(b + 1).expect("level >= 1"))
            .collect();
        for p in axes.into_iter().multi_cartesian_product() {
            push_new(out, p);
        }
    }
}

pub(crate) fn grid_points(dim: usize, k: u32) -> Vec<Vec<f64>> {
    let mut pts = Vec::new();
    append_level_points(&mut pts, k.min(2), dim);
    for level in 3..=k {
        append_level_points(&mut pts, level, dim);
    }
    pts
}

pub(crate) fn basis_functions(dim: usize, k: u32) -> Vec<BasisFunction> {
    let mut out = Vec::new();
    for level in 0..=k {
        for beta in level_order(level, dim) {
            let axes: Vec<Vec<u32>> = beta
                .exponents()
                .iter()
                .map(|&b| (level_count(b) as u32..level_count(b + 1) as u32).collect())
                .collect();
            for degrees in axes.into_iter().multi_cartesian_product() {
                out.push(BasisFunction {
                    family: BasisFamily::Chebyshev,
                    index: MultiIndex::new(degrees).expect("dim >= 1"),
                });
            }
        }
    }
    out
}

/// Sparse grid `X_{d,k}` in its canonical order.
pub fn smolyak_grid(dim: usize, k: u32) -> Result<NodeSet> {
    check_dim(dim)?;
    NodeSet::new(dim, grid_points(dim, k))
}

/// Sparse Chebyshev basis `B_{d,k}` in its canonical order.
pub fn smolyak_basis(dim: usize, k: u32) -> Result<BasisSequence> {
    check_dim(dim)?;
    BasisSequence::new(dim, basis_functions(dim, k))
}

/// `X_{d,k+1} \ X_{d,k}` in the order used to build incomplete grids.
pub fn incomplete_sequence(dim: usize, k: u32) -> Result<Vec<Vec<f64>>> {
    check_dim(dim)?;
    let n_k = grid_points(dim, k).len();
    let next = grid_points(dim, k + 1);
    Ok(next[n_k..].to_vec())
}

/// A complete grid together with its basis and the cardinalities of all
/// lower-order grids.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SparseGridSequence {
    pub dim: usize,
    pub order: u32,
    pub nodes: NodeSet,
    pub basis: BasisSequence,
    /// `n_j = #X_{d,j}` for `j = 0..=order`.
    pub level_offsets: Vec<usize>,
}

impl SparseGridSequence {
    pub fn new(dim: usize, order: u32) -> Result<Self> {
        let nodes = smolyak_grid(dim, order)?;
        let basis = smolyak_basis(dim, order)?;
        let level_offsets = (0..=order).map(|j| grid_points(dim, j).len()).collect();
        Ok(SparseGridSequence {
            dim,
            order,
            nodes,
            basis,
            level_offsets,
        })
    }

    /// `Y_{d,k,i}`: the order-`k` grid followed by the first `i` new nodes of
    /// order `k + 1`. Here `self` must be the order-`k + 1` sequence.
    pub fn incomplete(&self, i: usize) -> NodeSet {
        let n_k = self.level_offsets[self.level_offsets.len().saturating_sub(2)];
        self.nodes.prefix(n_k + i)
    }
}
