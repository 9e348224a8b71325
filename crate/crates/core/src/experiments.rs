//! Random-node basis selection trials and incomplete sparse-grid curves.

use std::io::Write;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basis::{BasisFamily, BasisSequence};
use crate::error::{Error, Result};
use crate::interpolant::cardinal_functions;
use crate::io::format_float;
use crate::lebesgue::{convex_hull_mesh, cube_mesh, lebesgue_discrete, ConvexHullMesh, DEFAULT_MESH_MEASURE};
use crate::linalg::singular_values;
use crate::prng::Stream;
use crate::selection::{
    check_subset_guard, exhaustive_maxminsv, near_singular, select_rows, SelectionMethod, DEFAULT_TOL,
};
use crate::sparse_grid::{smolyak_basis, smolyak_grid, SparseGridSequence};
use crate::vandermonde::{build_generalized, build_square, NodeSet};

pub const DEFAULT_TRIALS: usize = 1000;
pub const FULL_TRIALS: usize = 10_000;
pub const HISTOGRAM_BIN_WIDTH: f64 = 0.05;
pub const HISTOGRAM_BINS: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub dim: usize,
    /// Number of random nodes.
    pub n: usize,
    /// Total degree of the monomial trial basis.
    pub degree: u32,
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    pub mesh_measure: f64,
    /// Selection used for the MaxVol column.
    pub method: SelectionMethod,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            dim: 2,
            n: 4,
            degree: 2,
            trials: DEFAULT_TRIALS,
            seed: 0,
            tol: DEFAULT_TOL,
            mesh_measure: DEFAULT_MESH_MEASURE,
            method: SelectionMethod::MaxVolExhaustive,
        }
    }
}

fn check_common(dim: usize, mesh_measure: f64, tol: f64) -> Result<()> {
    if !matches!(dim, 2 | 3) {
        return Err(Error::UnsupportedDimension(dim));
    }
    if !(mesh_measure > 0.0 && mesh_measure.is_finite()) {
        return Err(Error::InvalidConfig(format!(
            "mesh measure must be positive, got {mesh_measure}"
        )));
    }
    if !(tol >= 0.0 && tol.is_finite()) {
        return Err(Error::InvalidConfig(format!(
            "tolerance must be non-negative, got {tol}"
        )));
    }
    Ok(())
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        check_common(self.dim, self.mesh_measure, self.tol)?;
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if self.n == 0 {
            return Err(Error::InvalidConfig("n must be at least 1".into()));
        }
        let m = BasisSequence::total_degree(BasisFamily::Monomial, self.dim, self.degree)?.len();
        if m < self.n {
            return Err(Error::InsufficientTrialBasis {
                trial: m,
                nodes: self.n,
            });
        }
        check_subset_guard(m, self.n).map_err(|e| match e {
            Error::TooManySubsets { subsets, limit } => Error::InvalidConfig(format!(
                "{subsets} candidate bases exceed the limit of {limit}; use a smaller n or degree"
            )),
            other => other,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub lambda_best: f64,
    pub lambda_maxvol: f64,
    pub lambda_maxminsv: f64,
    /// `|Λ_best − Λ_maxvol|`
    pub diff_a: f64,
    /// `|Λ_best − Λ_maxminsv|`
    pub diff_b: f64,
    /// `|Λ_maxvol − Λ_maxminsv|`
    pub diff_c: f64,
    pub dismissed: bool,
}

impl TrialRecord {
    fn dismissed(trial: u64) -> Self {
        TrialRecord {
            trial,
            lambda_best: f64::NAN,
            lambda_maxvol: f64::NAN,
            lambda_maxminsv: f64::NAN,
            diff_a: f64::NAN,
            diff_b: f64::NAN,
            diff_c: f64::NAN,
            dismissed: true,
        }
    }
}

/// Fixed-width counts on `[0, 5)` plus one overflow bin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub bin_width: f64,
    pub counts: Vec<u64>,
    pub overflow: u64,
}

impl Histogram {
    pub fn new() -> Self {
        Histogram {
            bin_width: HISTOGRAM_BIN_WIDTH,
            counts: vec![0; HISTOGRAM_BINS],
            overflow: 0,
        }
    }

    pub fn add(&mut self, value: f64) {
        if !value.is_finite() || value < 0.0 {
            return;
        }
        let bin = (value / self.bin_width).floor() as usize;
        match self.counts.get_mut(bin) {
            Some(c) => *c += 1,
            None => self.overflow += 1,
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum::<u64>() + self.overflow
    }
}

impl Default for Histogram {
    fn default() -> Self {
        Self::new()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomNodesResult {
    pub config: ExperimentConfig,
    pub records: Vec<TrialRecord>,
    pub dismissed: usize,
    pub hist_a: Histogram,
    pub hist_b: Histogram,
    pub hist_c: Histogram,
}

/// Discrete Lebesgue constant of the square system on `rows` of the trial basis.
fn lambda_of_rows(trial: &BasisSequence, rows: &[usize], nodes: &NodeSet, mesh: &ConvexHullMesh) -> Result<f64> {
    let card = cardinal_functions(&trial.select(rows)?, nodes)?;
    Ok(lebesgue_discrete(&card, mesh)?.lambda)
}

/// Smallest Lebesgue constant over every non-singular `n`-subset of the trial basis.
fn best_lambda(trial: &BasisSequence, nodes: &NodeSet, mesh: &ConvexHullMesh) -> Result<f64> {
    let mut best = f64::INFINITY;
    for rows in (0..trial.len()).combinations(nodes.len()) {
        let s = singular_values(&build_square(&trial.select(&rows)?, nodes)?);
        if near_singular(s.product(), s.min(), s.max()) {
            continue;
        }
        best = best.min(lambda_of_rows(trial, &rows, nodes, mesh)?);
    }
    Ok(best)
}

/// One trial of the random-node experiment.
pub fn run_trial(config: &ExperimentConfig, trial_id: u64) -> Result<TrialRecord> {
    let mut stream = Stream::substream(config.seed, trial_id);
    let nodes = NodeSet::new(config.dim, stream.points(config.n, config.dim, 0.0, 1.0))?;
    let mesh = match convex_hull_mesh(&nodes, config.mesh_measure) {
        Ok(mesh) => mesh,
        Err(Error::DegenerateHull { .. }) => return Ok(TrialRecord::dismissed(trial_id)),
        Err(e) => return Err(e),
    };
    let trial = BasisSequence::total_degree(BasisFamily::Monomial, config.dim, config.degree)?;
    let v = build_generalized(&trial, &nodes)?;
    let maxvol = match select_rows(&v, config.method, config.tol) {
        Ok(sel) => sel,
        Err(Error::MaxVolNotConverged { .. }) => return Ok(TrialRecord::dismissed(trial_id)),
        Err(e) => return Err(e),
    };
    let maxminsv = exhaustive_maxminsv(&v)?;
    if maxvol.dismissed || maxminsv.dismissed {
        return Ok(TrialRecord::dismissed(trial_id));
    }
    let lambda_maxvol = lambda_of_rows(&trial, &maxvol.row_indices, &nodes, &mesh)?;
    let lambda_maxminsv = lambda_of_rows(&trial, &maxminsv.row_indices, &nodes, &mesh)?;
    let lambda_best = best_lambda(&trial, &nodes, &mesh)?;
    Ok(TrialRecord {
        trial: trial_id,
        lambda_best,
        lambda_maxvol,
        lambda_maxminsv,
        diff_a: (lambda_best - lambda_maxvol).abs(),
        diff_b: (lambda_best - lambda_maxminsv).abs(),
        diff_c: (lambda_maxvol - lambda_maxminsv).abs(),
        dismissed: false,
    })
}

pub fn run_random_nodes(config: &ExperimentConfig) -> Result<RandomNodesResult> {
    config.validate()?;
    let records = (0..config.trials as u64)
        .into_par_iter()
        .map(|t| run_trial(config, t))
        .collect::<Result<Vec<_>>>()?;
    let (mut hist_a, mut hist_b, mut hist_c) = (Histogram::new(), Histogram::new(), Histogram::new());
    for r in records.iter().filter(|r| !r.dismissed) {
        hist_a.add(r.diff_a);
        hist_b.add(r.diff_b);
        hist_c.add(r.diff_c);
    }
    Ok(RandomNodesResult {
        config: config.clone(),
        dismissed: records.iter().filter(|r| r.dismissed).count(),
        records,
        hist_a,
        hist_b,
        hist_c,
    })
}

fn csv_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_writer(out)
}

pub fn write_records_csv<W: Write>(records: &[TrialRecord], out: W) -> Result<()> {
    let mut w = csv_writer(out);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record([
        "trial",
        "lambda_best",
        "lambda_maxvol",
        "lambda_maxminsv",
        "diff_a",
        "diff_b",
        "diff_c",
        "dismissed",
    ])
    .map_err(io)?;
    for r in records {
        w.write_record([
            r.trial.to_string(),
            format_float(r.lambda_best),
            format_float(r.lambda_maxvol),
            format_float(r.lambda_maxminsv),
            format_float(r.diff_a),
            format_float(r.diff_b),
            format_float(r.diff_c),
            r.dismissed.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_histograms_csv<W: Write>(result: &RandomNodesResult, out: W) -> Result<()> {
    let mut w = csv_writer(out);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(["bin_lo", "bin_hi", "count_a", "count_b", "count_c"])
        .map_err(io)?;
    let width = result.hist_a.bin_width;
    for bin in 0..result.hist_a.counts.len() {
        w.write_record([
            format_float(bin as f64 * width),
            format_float((bin + 1) as f64 * width),
            result.hist_a.counts[bin].to_string(),
            result.hist_b.counts[bin].to_string(),
            result.hist_c.counts[bin].to_string(),
        ])
        .map_err(io)?;
    }
    w.write_record([
        format_float(result.hist_a.counts.len() as f64 * width),
        format_float(f64::INFINITY),
        result.hist_a.overflow.to_string(),
        result.hist_b.overflow.to_string(),
        result.hist_c.overflow.to_string(),
    ])
    .map_err(io)?;
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub cardinality: usize,
    pub lambda: f64,
    /// Complete Smolyak grid with its own basis.
    pub complete: bool,
    /// Accepted MaxVol swaps (0 for complete grids).
    pub swaps: usize,
    /// False when MaxVol hit its swap cap; the last row set is used.
    pub converged: bool,
}

/// Lebesgue constants over `X_{d,k} ⊂ Y_{d,k,1} ⊂ .. ⊂ X_{d,k+1}` on the
/// mesh of `[-1, 1]^d`.
pub fn run_incomplete_grid(dim: usize, k: u32, tol: f64, mesh_measure: f64) -> Result<Vec<CurvePoint>> {
    check_common(dim, mesh_measure, tol)?;
    if k == 0 {
        return Err(Error::InvalidLevel(0));
    }
    let mesh = cube_mesh(dim, mesh_measure)?;
    let seq = SparseGridSequence::new(dim, k + 1)?;
    let n_k = seq.level_offsets[k as usize];
    let n_k1 = seq.nodes.len();
    let complete = |level: u32| -> Result<CurvePoint> {
        let nodes = smolyak_grid(dim, level)?;
        let card = cardinal_functions(&smolyak_basis(dim, level)?, &nodes)?;
        Ok(CurvePoint {
            cardinality: nodes.len(),
            lambda: lebesgue_discrete(&card, &mesh)?.lambda,
            complete: true,
            swaps: 0,
            converged: true,
        })
    };
    (0..=n_k1 - n_k)
        .into_par_iter()
        .map(|i| {
            if i == 0 {
                return complete(k);
            }
            if i == n_k1 - n_k {
                return complete(k + 1);
            }
            let nodes = seq.incomplete(i);
            let v = build_generalized(&seq.basis, &nodes)?;
            let (rows, swaps, converged) = match crate::selection::maxvol_rows(&v, tol) {
                Ok(sel) => (sel.row_indices, sel.swaps, true),
                Err(Error::MaxVolNotConverged { swaps, rows }) => {
                    let mut rows = rows;
                    rows.sort_unstable();
                    (rows, swaps, false)
                }
                Err(e) => return Err(e),
            };
            let card = cardinal_functions(&seq.basis.select(&rows)?, &nodes)?;
            Ok(CurvePoint {
                cardinality: nodes.len(),
                lambda: lebesgue_discrete(&card, &mesh)?.lambda,
                complete: false,
                swaps,
                converged,
            })
        })
        .collect()
}

/// Cardinalities strictly inside the curve whose value is below both neighbours.
pub fn local_minima(curve: &[CurvePoint]) -> Vec<usize> {
    curve
        .windows(3)
        .filter(|w| w[1].lambda < w[0].lambda && w[1].lambda < w[2].lambda)
        .map(|w| w[1].cardinality)
        .collect()
}

pub fn write_curve_csv<W: Write>(curve: &[CurvePoint], out: W) -> Result<()> {
    let mut w = csv_writer(out);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(["cardinality", "lambda", "complete", "swaps", "converged"])
        .map_err(io)?;
    for p in curve {
        w.write_record([
            p.cardinality.to_string(),
            format_float(p.lambda),
            p.complete.to_string(),
            p.swaps.to_string(),
            p.converged.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush()?;
    Ok(())
}
