//! Choosing an invertible `n × n` row submatrix of a generalized Vandermonde
//! matrix.
//!
//! [`maxvol_rows`] is the iterative dominant-submatrix search: starting from
//! the pivot rows of a partially pivoted LU, it repeatedly swaps in the row
//! whose coefficient in `B = V·A⁻¹` is largest in modulus. Each swap of trial
//! row `i` into position `j` multiplies `|det A|` by `|B_ij|`, so the volume
//! grows strictly while the search runs. At termination every entry of `B`
//! is bounded by `1 + tol`.
//!
//! The exhaustive variants enumerate every row subset and are meant as
//! oracles for small problems.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{determinant, inverse, lu_factor, pivot_rows, singular_values, DenseMatrix};

pub const DEFAULT_TOL: f64 = 0.01;
/// Relative threshold on `σ_min` below which a submatrix counts as singular.
pub const DISMISSAL_THRESHOLD: f64 = 1e-10;
/// Largest number of subsets the exhaustive searches will enumerate.
pub const SUBSET_LIMIT: u128 = 1_000_000;
const SWAP_CAP_PER_COLUMN: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SelectionMethod {
    MaxVolIterative,
    MaxVolExhaustive,
    MaxMinSvExhaustive,
}

impl SelectionMethod {
    pub fn name(self) -> &'static str {
        match self {
            SelectionMethod::MaxVolIterative => "maxvol",
            SelectionMethod::MaxVolExhaustive => "maxvol-exhaustive",
            SelectionMethod::MaxMinSvExhaustive => "maxminsv",
        }
    }
}

impl std::str::FromStr for SelectionMethod {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "maxvol" => Ok(SelectionMethod::MaxVolIterative),
            "maxvol-exhaustive" => Ok(SelectionMethod::MaxVolExhaustive),
            "maxminsv" => Ok(SelectionMethod::MaxMinSvExhaustive),
            other => Err(format!(
                "unknown method `{other}` (expected maxvol, maxvol-exhaustive or maxminsv)"
            )),
        }
    }
}

/// A chosen set of trial-basis rows with diagnostics of the submatrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectedBasis {
    /// 0-based row positions into the trial basis, ascending.
    pub row_indices: Vec<usize>,
    pub method: SelectionMethod,
    /// `|det|` of the selected submatrix.
    pub volume: f64,
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub dismissed: bool,
    /// Accepted swaps (iterative search only).
    pub swaps: usize,
}

/// `true` iff `sigma_min ≤ 1e-10 · max(scale, 1)`.
pub fn near_singular(volume: f64, sigma_min: f64, scale: f64) -> bool {
    let _ = volume;
    !(sigma_min > DISMISSAL_THRESHOLD * scale.max(1.0))
}

fn finish(v: &DenseMatrix, mut rows: Vec<usize>, method: SelectionMethod, swaps: usize) -> SelectedBasis {
    rows.sort_unstable();
    let sub = v.select_rows(&rows);
    let volume = determinant(&sub).map(f64::abs).unwrap_or(0.0);
    let spectrum = singular_values(&sub);
    let (sigma_min, sigma_max) = (spectrum.min(), spectrum.max());
    SelectedBasis {
        dismissed: near_singular(volume, sigma_min, sigma_max),
        row_indices: rows,
        method,
        volume,
        sigma_min,
        sigma_max,
        swaps,
    }
}

fn rank_deficient(n: usize, method: SelectionMethod) -> SelectedBasis {
    SelectedBasis {
        row_indices: (0..n).collect(),
        method,
        volume: 0.0,
        sigma_min: 0.0,
        sigma_max: 0.0,
        dismissed: true,
        swaps: 0,
    }
}

fn check_shape(v: &DenseMatrix) -> Result<()> {
    if v.cols() == 0 || v.rows() < v.cols() {
        return Err(Error::InsufficientTrialBasis {
            trial: v.rows(),
            nodes: v.cols(),
        });
    }
    Ok(())
}

/// Largest entry of `B` in modulus; ties resolve to the smallest `(row, col)`.
fn largest_entry(b: &DenseMatrix) -> (usize, usize, f64) {
    let mut best = (0, 0, -1.0);
    for i in 0..b.rows() {
        for (j, &x) in b.row(i).iter().enumerate() {
            if x.abs() > best.2 {
                best = (i, j, x.abs());
            }
        }
    }
    best
}

/// `V·A⁻¹` for the rows currently selected.
pub fn coefficient_matrix(v: &DenseMatrix, rows: &[usize]) -> Result<DenseMatrix> {
    let a_inv = inverse(&v.select_rows(rows))?;
    v.matmul(&a_inv)
}

fn maxvol_impl(v: &DenseMatrix, tol: f64, mut trace: Option<&mut Vec<f64>>) -> Result<SelectedBasis> {
    check_shape(v)?;
    let method = SelectionMethod::MaxVolIterative;
    let n = v.cols();
    let mut rows = match pivot_rows(v) {
        Ok(rows) => rows,
        Err(_) => return Ok(rank_deficient(n, method)),
    };
    let initial = finish(v, rows.clone(), method, 0);
    if initial.dismissed {
        return Ok(initial);
    }

    let cap = SWAP_CAP_PER_COLUMN * n;
    let mut swaps = 0;
    loop {
        if let Some(t) = trace.as_deref_mut() {
            let det = lu_factor(&v.select_rows(&rows)).map(|lu| lu.determinant().abs());
            t.push(det.unwrap_or(0.0));
        }
        let b = match coefficient_matrix(v, &rows) {
            Ok(b) => b,
            Err(Error::SingularMatrix { .. }) => return Ok(rank_deficient(n, method)),
            Err(e) => return Err(e),
        };
        let (i, j, value) = largest_entry(&b);
        if value <= 1.0 + tol {
            break;
        }
        if swaps == cap {
            return Err(Error::MaxVolNotConverged { swaps, rows });
        }
        rows[j] = i;
        swaps += 1;
    }
    Ok(finish(v, rows, method, swaps))
}

/// Iterative dominant-submatrix search over the rows of `V` (`m × n`, `m ≥ n`).
///
/// Rank-deficient input yields a dismissed result with zero volume. The search
/// stops after `200·n` swaps with [`Error::MaxVolNotConverged`].
pub fn maxvol_rows(v: &DenseMatrix, tol: f64) -> Result<SelectedBasis> {
    maxvol_impl(v, tol, None)
}

/// Like [`maxvol_rows`], also returning `|det A|` before every iteration.
pub fn maxvol_rows_traced(v: &DenseMatrix, tol: f64) -> Result<(SelectedBasis, Vec<f64>)> {
    let mut trace = Vec::new();
    let sel = maxvol_impl(v, tol, Some(&mut trace))?;
    Ok((sel, trace))
}

/// `C(m, n)`.
pub fn subset_count(m: usize, n: usize) -> u128 {
    if n > m {
        return 0;
    }
    let k = n.min(m - n) as u128;
    (0..k).fold(1u128, |acc, i| acc * (m as u128 - i) / (i + 1))
}

pub fn check_subset_guard(m: usize, n: usize) -> Result<()> {
    let subsets = subset_count(m, n);
    if subsets > SUBSET_LIMIT {
        return Err(Error::TooManySubsets {
            subsets,
            limit: SUBSET_LIMIT,
        });
    }
    Ok(())
}

/// Maximizes `score` over all `n`-row subsets; the first (lexicographically
/// smallest) subset wins ties.
fn exhaustive_by(v: &DenseMatrix, score: impl Fn(&DenseMatrix) -> f64) -> Result<Vec<usize>> {
    check_shape(v)?;
    check_subset_guard(v.rows(), v.cols())?;
    let mut best: Option<(f64, Vec<usize>)> = None;
    for rows in (0..v.rows()).combinations(v.cols()) {
        let s = score(&v.select_rows(&rows));
        if best.as_ref().is_none_or(|(b, _)| s > *b) {
            best = Some((s, rows));
        }
    }
    Ok(best.expect("at least one subset").1)
}

/// Global maximizer of `|det|` over all `n`-row subsets.
pub fn exhaustive_maxvol(v: &DenseMatrix) -> Result<SelectedBasis> {
    let rows = exhaustive_by(v, |a| determinant(a).map(f64::abs).unwrap_or(0.0))?;
    Ok(finish(v, rows, SelectionMethod::MaxVolExhaustive, 0))
}

/// Global maximizer of `σ_min` over all `n`-row subsets.
pub fn exhaustive_maxminsv(v: &DenseMatrix) -> Result<SelectedBasis> {
    let rows = exhaustive_by(v, |a| singular_values(a).min())?;
    Ok(finish(v, rows, SelectionMethod::MaxMinSvExhaustive, 0))
}

/// Dispatches on `method`; `tol` only affects the iterative search.
pub fn select_rows(v: &DenseMatrix, method: SelectionMethod, tol: f64) -> Result<SelectedBasis> {
    match method {
        SelectionMethod::MaxVolIterative => maxvol_rows(v, tol),
        SelectionMethod::MaxVolExhaustive => exhaustive_maxvol(v),
        SelectionMethod::MaxMinSvExhaustive => exhaustive_maxminsv(v),
    }
}
