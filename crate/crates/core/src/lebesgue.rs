//! Discrete Lebesgue constants over meshed convex hulls, and the upper
//! bounds in terms of `σ_min(V)` and `|det V|`.
//!
//! The hull is fan-triangulated from the centroid of its extreme points and
//! every cell is then split by edge midpoints (triangles into 4, tetrahedra
//! into 8) until its measure is at most the requested bound. Midpoints are
//! shared through an edge cache, so refinement with a smaller bound keeps
//! every previous vertex bit-for-bit.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::basis::BasisSequence;
use crate::error::{Error, Result};
use crate::interpolant::CardinalSet;
use crate::linalg::singular_values;
use crate::selection::near_singular;
use crate::vandermonde::NodeSet;

pub const DEFAULT_MESH_MEASURE: f64 = 1e-2;
const DEGENERATE_MEASURE: f64 = 1e-12;
const HULL_EPS: f64 = 1e-12;

/// Supporting half-space `normal · x ≤ offset` of a hull.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalfSpace {
    pub normal: Vec<f64>,
    pub offset: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexHullMesh {
    dim: usize,
    vertices: Vec<Vec<f64>>,
    cells: Vec<Vec<usize>>,
    cell_measures: Vec<f64>,
    /// Positions of the hull's extreme points in `vertices`.
    extreme_points: Vec<usize>,
    halfspaces: Vec<HalfSpace>,
}

impl ConvexHullMesh {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn cell_measures(&self) -> &[f64] {
        &self.cell_measures
    }

    pub fn total_measure(&self) -> f64 {
        self.cell_measures.iter().sum()
    }

    pub fn extreme_points(&self) -> impl Iterator<Item = &[f64]> {
        self.extreme_points.iter().map(|&i| self.vertices[i].as_slice())
    }

    pub fn halfspaces(&self) -> &[HalfSpace] {
        &self.halfspaces
    }

    /// Whether `point` lies in the hull (with a small absolute slack).
    pub fn contains(&self, point: &[f64]) -> bool {
        self.halfspaces.iter().all(|h| {
            let s: f64 = h.normal.iter().zip(point).map(|(a, b)| a * b).sum();
            s <= h.offset + 1e-10
        })
    }

    /// Adds sample points (no cells) to the vertex set.
    pub fn add_sample_points(&mut self, points: impl IntoIterator<Item = Vec<f64>>) {
        self.vertices.extend(points);
    }
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn cross2(o: &[f64], a: &[f64], b: &[f64]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn cross3(a: &[f64], b: &[f64]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn triangle_area(a: &[f64], b: &[f64], c: &[f64]) -> f64 {
    0.5 * cross2(a, b, c).abs()
}

fn tet_volume(a: &[f64], b: &[f64], c: &[f64], d: &[f64]) -> f64 {
    let (u, v, w) = (sub(b, a), sub(c, a), sub(d, a));
    dot(&u, &cross3(&v, &w)).abs() / 6.0
}

/// Andrew's monotone chain; returns hull vertex positions counter-clockwise,
/// without collinear points.
fn monotone_chain(points: &[[f64; 2]], eps: f64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        points[a][0]
            .total_cmp(&points[b][0])
            .then(points[a][1].total_cmp(&points[b][1]))
    });
    order.dedup_by(|a, b| (points[*a][0] - points[*b][0]).abs() <= eps && (points[*a][1] - points[*b][1]).abs() <= eps);
    if order.len() < 3 {
        return order;
    }
    let turn = |o: usize, a: usize, b: usize| cross2(&points[o], &points[a], &points[b]);
    let mut hull: Vec<usize> = Vec::with_capacity(2 * order.len());
    for &p in &order {
        while hull.len() >= 2 && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= eps {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in order.iter().rev().skip(1) {
        while hull.len() >= lower_len && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= eps {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

struct MeshBuilder {
    vertices: Vec<Vec<f64>>,
    midpoints: HashMap<(usize, usize), usize>,
    cells: Vec<Vec<usize>>,
    measures: Vec<f64>,
    bound: f64,
}

impl MeshBuilder {
    fn midpoint(&mut self, a: usize, b: usize) -> usize {
        let key = (a.min(b), a.max(b));
        if let Some(&i) = self.midpoints.get(&key) {
            return i;
        }
        let p: Vec<f64> = self.vertices[key.0]
            .iter()
            .zip(&self.vertices[key.1])
            .map(|(x, y)| 0.5 * (x + y))
            .collect();
        self.vertices.push(p);
        let i = self.vertices.len() - 1;
        self.midpoints.insert(key, i);
        i
    }

    fn refine_triangle(&mut self, t: [usize; 3]) {
        let v = &self.vertices;
        let area = triangle_area(&v[t[0]], &v[t[1]], &v[t[2]]);
        if area <= self.bound {
            self.cells.push(t.to_vec());
            self.measures.push(area);
            return;
        }
        let m01 = self.midpoint(t[0], t[1]);
        let m12 = self.midpoint(t[1], t[2]);
        let m02 = self.midpoint(t[0], t[2]);
        self.refine_triangle([t[0], m01, m02]);
        self.refine_triangle([m01, t[1], m12]);
        self.refine_triangle([m02, m12, t[2]]);
        self.refine_triangle([m01, m12, m02]);
    }

    fn refine_tet(&mut self, t: [usize; 4]) {
        let v = &self.vertices;
        let vol = tet_volume(&v[t[0]], &v[t[1]], &v[t[2]], &v[t[3]]);
        if vol <= self.bound {
            self.cells.push(t.to_vec());
            self.measures.push(vol);
            return;
        }
        let [a, b, c, d] = t;
        let ab = self.midpoint(a, b);
        let ac = self.midpoint(a, c);
        let ad = self.midpoint(a, d);
        let bc = self.midpoint(b, c);
        let bd = self.midpoint(b, d);
        let cd = self.midpoint(c, d);
        self.refine_tet([a, ab, ac, ad]);
        self.refine_tet([ab, b, bc, bd]);
        self.refine_tet([ac, bc, c, cd]);
        self.refine_tet([ad, bd, cd, d]);
        // inner octahedron split along the ac–bd diagonal
        self.refine_tet([ab, ac, ad, bd]);
        self.refine_tet([ab, ac, bc, bd]);
        self.refine_tet([ac, ad, bd, cd]);
        self.refine_tet([ac, bc, bd, cd]);
    }
}

fn centroid(points: &[Vec<f64>]) -> Vec<f64> {
    let dim = points[0].len();
    let mut c = vec![0.0; dim];
    for p in points {
        for (ci, pi) in c.iter_mut().zip(p) {
            *ci += pi;
        }
    }
    c.iter_mut().for_each(|v| *v /= points.len() as f64);
    c
}

fn coordinate_scale(points: &[Vec<f64>]) -> f64 {
    points.iter().flat_map(|p| p.iter()).fold(1.0f64, |m, v| m.max(v.abs()))
}

fn mesh_2d(points: &[Vec<f64>], bound: f64) -> Result<ConvexHullMesh> {
    let eps = HULL_EPS * coordinate_scale(points);
    let flat: Vec<[f64; 2]> = points.iter().map(|p| [p[0], p[1]]).collect();
    let hull = monotone_chain(&flat, eps);
    let hull_pts: Vec<Vec<f64>> = hull.iter().map(|&i| points[i].clone()).collect();
    let area = if hull_pts.len() < 3 {
        0.0
    } else {
        (1..hull_pts.len() - 1)
            .map(|i| triangle_area(&hull_pts[0], &hull_pts[i], &hull_pts[i + 1]))
            .sum()
    };
    if area <= DEGENERATE_MEASURE {
        return Err(Error::DegenerateHull { measure: area });
    }

    let halfspaces = (0..hull_pts.len())
        .map(|i| {
            let (a, b) = (&hull_pts[i], &hull_pts[(i + 1) % hull_pts.len()]);
            // outward normal of a counter-clockwise edge
            let normal = [b[1] - a[1], a[0] - b[0]];
            let norm = normal.iter().map(|v| v * v).sum::<f64>().sqrt();
            let normal: Vec<f64> = normal.iter().map(|v| v / norm).collect();
            let offset = dot(&normal, a);
            HalfSpace { normal, offset }
        })
        .collect();

    let h = hull_pts.len();
    let mut builder = MeshBuilder {
        vertices: hull_pts.clone(),
        midpoints: HashMap::new(),
        cells: Vec::new(),
        measures: Vec::new(),
        bound,
    };
    builder.vertices.push(centroid(&hull_pts));
    let c = h;
    for i in 0..h {
        builder.refine_triangle([c, i, (i + 1) % h]);
    }
    Ok(ConvexHullMesh {
        dim: 2,
        vertices: builder.vertices,
        cells: builder.cells,
        cell_measures: builder.measures,
        extreme_points: (0..h).collect(),
        halfspaces,
    })
}

/// Boundary facets of a 3-D hull as counter-clockwise (seen from outside)
/// triangles over `points`, plus the supporting half-spaces.
///
/// Every plane through three points that leaves all points on one side is a
/// facet plane; coplanar points on it are merged into one convex polygon,
/// which is then fan-triangulated.
fn hull_facets_3d(points: &[Vec<f64>], eps: f64) -> (Vec<[usize; 3]>, Vec<HalfSpace>) {
    let n = points.len();
    let mut planes: Vec<HalfSpace> = Vec::new();
    let mut facets = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let u = sub(&points[j], &points[i]);
                let v = sub(&points[k], &points[i]);
                let c = cross3(&u, &v);
                let norm = dot(&c, &c).sqrt();
                if norm <= eps {
                    continue;
                }
                let mut normal: Vec<f64> = c.iter().map(|x| x / norm).collect();
                let mut offset = dot(&normal, &points[i]);
                let (mut above, mut below) = (false, false);
                for p in points {
                    let s = dot(&normal, p) - offset;
                    above |= s > eps;
                    below |= s < -eps;
                    if above && below {
                        break;
                    }
                }
                if above && below {
                    continue;
                }
                if above {
                    normal.iter_mut().for_each(|x| *x = -*x);
                    offset = -offset;
                }
                let known = planes.iter().any(|h| {
                    (h.offset - offset).abs() <= 1e-9
                        && h.normal.iter().zip(&normal).all(|(a, b)| (a - b).abs() <= 1e-9)
                });
                if known {
                    continue;
                }
                // polygon of all points on this plane, in plane coordinates
                let on: Vec<usize> = (0..n)
                    .filter(|&q| (dot(&normal, &points[q]) - offset).abs() <= eps)
                    .collect();
                let e1: Vec<f64> = u.iter().map(|x| x / dot(&u, &u).sqrt()).collect();
                let e2 = cross3(&normal, &e1);
                let flat: Vec<[f64; 2]> = on
                    .iter()
                    .map(|&q| {
                        let r = sub(&points[q], &points[i]);
                        [dot(&r, &e1), dot(&r, &e2)]
                    })
                    .collect();
                // counter-clockwise in (e1, e2 = n × e1) is counter-clockwise seen from outside
                let poly: Vec<usize> = monotone_chain(&flat, eps).into_iter().map(|q| on[q]).collect();
                for t in 1..poly.len().saturating_sub(1) {
                    facets.push([poly[0], poly[t], poly[t + 1]]);
                }
                planes.push(HalfSpace { normal, offset });
            }
        }
    }
    (facets, planes)
}

fn mesh_3d(points: &[Vec<f64>], bound: f64) -> Result<ConvexHullMesh> {
    let eps = HULL_EPS * coordinate_scale(points);
    let (facets, halfspaces) = hull_facets_3d(points, eps);
    let mut used: Vec<usize> = facets.iter().flatten().copied().collect();
    used.sort_unstable();
    used.dedup();
    if used.len() < 4 {
        return Err(Error::DegenerateHull { measure: 0.0 });
    }
    let remap: HashMap<usize, usize> = used.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let hull_pts: Vec<Vec<f64>> = used.iter().map(|&i| points[i].clone()).collect();
    let c = centroid(&hull_pts);
    let volume: f64 = facets
        .iter()
        .map(|f| tet_volume(&c, &points[f[0]], &points[f[1]], &points[f[2]]))
        .sum();
    if volume <= DEGENERATE_MEASURE {
        return Err(Error::DegenerateHull { measure: volume });
    }

    let h = hull_pts.len();
    let mut builder = MeshBuilder {
        vertices: hull_pts,
        midpoints: HashMap::new(),
        cells: Vec::new(),
        measures: Vec::new(),
        bound,
    };
    builder.vertices.push(c);
    for f in &facets {
        builder.refine_tet([h, remap[&f[0]], remap[&f[1]], remap[&f[2]]]);
    }
    Ok(ConvexHullMesh {
        dim: 3,
        vertices: builder.vertices,
        cells: builder.cells,
        cell_measures: builder.measures,
        extreme_points: (0..h).collect(),
        halfspaces,
    })
}

/// Meshes `conv(nodes)` into triangles (d = 2) or tetrahedra (d = 3) of
/// measure at most `max_cell_measure`.
pub fn convex_hull_mesh(nodes: &NodeSet, max_cell_measure: f64) -> Result<ConvexHullMesh> {
    convex_hull_mesh_of(nodes.dim(), nodes.points(), max_cell_measure)
}

pub fn convex_hull_mesh_of(dim: usize, points: &[Vec<f64>], max_cell_measure: f64) -> Result<ConvexHullMesh> {
    if !(max_cell_measure > 0.0) || !max_cell_measure.is_finite() {
        return Err(Error::InvalidConfig(format!(
            "mesh cell measure must be positive, got {max_cell_measure}"
        )));
    }
    let mut mesh = match dim {
        2 => mesh_2d(points, max_cell_measure)?,
        3 => mesh_3d(points, max_cell_measure)?,
        d => return Err(Error::UnsupportedDimension(d)),
    };
    // interior nodes are sampled too, so the estimate sees Σ|ℓ_i| = 1 there
    let extra: Vec<Vec<f64>> = points
        .iter()
        .filter(|p| {
            !mesh
                .vertices
                .iter()
                .any(|v| v.iter().zip(p.iter()).all(|(a, b)| (a - b).abs() <= 1e-12))
        })
        .cloned()
        .collect();
    mesh.add_sample_points(extra);
    Ok(mesh)
}

/// Mesh of the cube `[-1, 1]^d`.
pub fn cube_mesh(dim: usize, max_cell_measure: f64) -> Result<ConvexHullMesh> {
    let corners: Vec<Vec<f64>> = (0..1usize << dim)
        .map(|bits| {
            (0..dim)
                .map(|i| if bits >> (dim - 1 - i) & 1 == 1 { 1.0 } else { -1.0 })
                .collect()
        })
        .collect();
    convex_hull_mesh_of(dim, &corners, max_cell_measure)
}

/// `max_j Σ_i |ℓ_i(y_j)|` over `points`, with the first maximizing index.
pub fn lebesgue_at_points(card: &CardinalSet, points: &[Vec<f64>]) -> (f64, usize) {
    let mut phi = vec![0.0; card.len()];
    let mut best = (f64::NEG_INFINITY, 0);
    for (j, y) in points.iter().enumerate() {
        card.basis().eval_into(y, &mut phi);
        let s = card.abs_sum(&phi);
        if s > best.0 {
            best = (s, j);
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LebesgueEstimate {
    pub lambda: f64,
    pub argmax_vertex: Vec<f64>,
}

/// Discrete Lebesgue constant over the mesh vertices.
pub fn lebesgue_discrete(card: &CardinalSet, mesh: &ConvexHullMesh) -> Result<LebesgueEstimate> {
    if mesh.dim() != card.basis().dim() {
        return Err(Error::DimensionMismatch {
            expected: card.basis().dim(),
            found: mesh.dim(),
        });
    }
    let (lambda, j) = lebesgue_at_points(card, mesh.vertices());
    Ok(LebesgueEstimate {
        lambda,
        argmax_vertex: mesh.vertices()[j].clone(),
    })
}

/// `C = max_y (Σ_i φ_i(y)²)^{1/2}` over the mesh vertices.
pub fn basis_norm_max(basis: &BasisSequence, mesh: &ConvexHullMesh) -> f64 {
    let mut phi = vec![0.0; basis.len()];
    mesh.vertices().iter().fold(0.0, |m, y| {
        basis.eval_into(y, &mut phi);
        m.max(phi.iter().map(|v| v * v).sum::<f64>().sqrt())
    })
}

/// `max_y |φ(y)|` over the mesh vertices.
pub fn function_sup(phi: &crate::basis::BasisFunction, mesh: &ConvexHullMesh) -> f64 {
    mesh.vertices()
        .iter()
        .fold(0.0, |m, y| m.max(phi.eval_unchecked(y).abs()))
}

/// The constant `D` built from the row and column norms of `V`.
///
/// With `r_i = Σ_j φ_j(x_i)²` and `s_i = Σ_j φ_i(x_j)²`,
/// `D = max{ √(min r / Π r), √(min s / Π s) }⁻¹`. Evaluated in log space.
pub fn det_bound_constant(card: &CardinalSet) -> f64 {
    log_det_bound_constant(card).exp()
}

fn log_det_bound_constant(card: &CardinalSet) -> f64 {
    let v = card.vandermonde();
    let n = v.rows();
    let node_sums: Vec<f64> = (0..n).map(|i| (0..n).map(|j| v[(j, i)] * v[(j, i)]).sum()).collect();
    let function_sums: Vec<f64> = (0..n).map(|i| v.row(i).iter().map(|x| x * x).sum()).collect();
    let log_root = |sums: &[f64]| {
        let min = sums.iter().copied().fold(f64::INFINITY, f64::min);
        0.5 * (min.ln() - sums.iter().map(|s| s.ln()).sum::<f64>())
    };
    -log_root(&node_sums).max(log_root(&function_sums))
}

/// Constants entering the bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundConstants {
    pub c: f64,
    pub d: f64,
    pub n: usize,
    pub sigma_min: f64,
    pub abs_det: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LebesgueReport {
    pub lambda_discrete: f64,
    pub argmax_vertex: Vec<f64>,
    /// `C n / σ_min(V)`.
    pub bound_sv: f64,
    /// `C D √e n / |det V|`.
    pub bound_det: f64,
    pub constants: BoundConstants,
}

fn dismissed(card: &CardinalSet) -> (bool, f64) {
    let s = singular_values(card.vandermonde());
    (near_singular(card.determinant().abs(), s.min(), s.max()), s.min())
}

/// `C n / σ_min(V)`, or `+∞` when `V` is numerically singular.
pub fn bound_sv(card: &CardinalSet, mesh: &ConvexHullMesh) -> f64 {
    let (singular, sigma_min) = dismissed(card);
    if singular {
        return f64::INFINITY;
    }
    basis_norm_max(card.basis(), mesh) * card.len() as f64 / sigma_min
}

/// `C D √e n / |det V|`, or `+∞` when `V` is numerically singular.
pub fn bound_det(card: &CardinalSet, mesh: &ConvexHullMesh) -> f64 {
    let (singular, _) = dismissed(card);
    if singular || card.determinant() == 0.0 {
        return f64::INFINITY;
    }
    let c = basis_norm_max(card.basis(), mesh);
    (c.ln() + log_det_bound_constant(card) + 0.5 + (card.len() as f64).ln() - card.determinant().abs().ln()).exp()
}

pub fn lebesgue_report(card: &CardinalSet, mesh: &ConvexHullMesh) -> Result<LebesgueReport> {
    let est = lebesgue_discrete(card, mesh)?;
    let (_, sigma_min) = dismissed(card);
    Ok(LebesgueReport {
        lambda_discrete: est.lambda,
        argmax_vertex: est.argmax_vertex,
        bound_sv: bound_sv(card, mesh),
        bound_det: bound_det(card, mesh),
        constants: BoundConstants {
            c: basis_norm_max(card.basis(), mesh),
            d: det_bound_constant(card),
            n: card.len(),
            sigma_min,
            abs_det: card.determinant().abs(),
        },
    })
}

/// `Λ_n + ‖ℓ_{n+1}‖ (1 + Λ_n)`.
pub fn bound_incremental(lambda_n: f64, new_cardinal_sup: f64) -> f64 {
    lambda_n + new_cardinal_sup * (1.0 + lambda_n)
}

/// `|det V_n / det V_{n+1}| ‖φ_{n+1}‖ (1 + Λ_n)`, a bound on `‖ℓ_{n+1}‖`.
pub fn new_cardinal_bound(det_n: f64, det_n1: f64, phi_sup: f64, lambda_n: f64) -> f64 {
    (det_n / det_n1).abs() * phi_sup * (1.0 + lambda_n)
}

/// Quantities of a single node/function addition, all sampled on one mesh of
/// the original hull.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IncrementalReport {
    pub lambda_n: f64,
    pub lambda_n1: f64,
    pub new_cardinal_sup: f64,
    pub bound: f64,
    pub new_cardinal_bound: f64,
    /// The bound is only established for nodes inside the original hull.
    pub inside_hull: bool,
}

/// Compares the recomputed constant of the enlarged system with the
/// incremental bound. The new node is added to the sample set so the
/// discrete `Λ_n` covers it.
pub fn incremental_report(
    card_n: &CardinalSet,
    card_n1: &CardinalSet,
    mesh: &ConvexHullMesh,
) -> Result<IncrementalReport> {
    let n = card_n.len();
    if card_n1.len() != n + 1 {
        return Err(Error::SizeMismatch {
            expected: n + 1,
            found: card_n1.len(),
        });
    }
    let new_node = card_n1.nodes().get(n).expect("n + 1 nodes").to_vec();
    let new_phi = card_n1.basis().get(n).expect("n + 1 functions").clone();
    let inside_hull = mesh.contains(&new_node);
    let mut samples = mesh.clone();
    samples.add_sample_points([new_node]);

    let (lambda_n, _) = lebesgue_at_points(card_n, samples.vertices());
    let (lambda_n1, _) = lebesgue_at_points(card_n1, samples.vertices());
    let new_cardinal_sup = samples.vertices().iter().fold(0.0f64, |m, y| {
        let l = card_n1.eval(y).expect("dimension checked");
        m.max(l[n].abs())
    });
    let phi_sup = function_sup(&new_phi, &samples);
    Ok(IncrementalReport {
        lambda_n,
        lambda_n1,
        new_cardinal_sup,
        bound: bound_incremental(lambda_n, new_cardinal_sup),
        new_cardinal_bound: new_cardinal_bound(card_n.determinant(), card_n1.determinant(), phi_sup, lambda_n),
        inside_hull,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{BasisFamily, BasisSequence};
    use crate::interpolant::cardinal_functions;
    use crate::sparse_grid::{smolyak_basis, smolyak_grid};

    fn nodes2(pts: &[[f64; 2]]) -> NodeSet {
        NodeSet::new(2, pts.iter().map(|p| p.to_vec()).collect()).unwrap()
    }

    #[test]
    fn unit_square_area_is_conserved() {
        let mesh = convex_hull_mesh(&nodes2(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]), 1e-2).unwrap();
        assert!((mesh.total_measure() - 1.0).abs() < 1e-10);
        assert!(mesh.cells().len() >= 100);
        assert!(mesh.cell_measures().iter().all(|&a| a <= 1e-2));
    }

    #[test]
    fn cube_volume_is_conserved() {
        let mesh = cube_mesh(3, 1e-2).unwrap();
        assert!((mesh.total_measure() - 8.0).abs() < 1e-9);
        assert!(mesh.cells().len() >= 800);
        assert!(mesh.cell_measures().iter().all(|&v| v <= 1e-2));
        assert_eq!(mesh.extreme_points().count(), 8);
    }

    #[test]
    fn tetrahedron_split_is_uniform() {
        let pts = vec![
            vec![0.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ];
        let mesh = convex_hull_mesh_of(3, &pts, 1.0 / 6.0 / 4.0 / 8.0 + 1e-15).unwrap();
        let first = mesh.cell_measures()[0];
        assert!(mesh.cell_measures().iter().all(|&v| (v - first).abs() < 1e-15));
        assert!((mesh.total_measure() - 1.0 / 6.0).abs() < 1e-14);
    }

    #[test]
    fn random_extreme_points_are_vertices() {
        let pts = [[0.12, 0.8], [0.9, 0.35], [0.41, 0.44], [0.05, 0.1], [0.66, 0.97]];
        let mesh = convex_hull_mesh(&nodes2(&pts), 1e-2).unwrap();
        // (0.41, 0.44) is interior; the other four span the hull
        for p in [[0.12, 0.8], [0.9, 0.35], [0.05, 0.1], [0.66, 0.97]] {
            assert!(mesh.vertices().iter().any(|v| v[0] == p[0] && v[1] == p[1]));
        }
        assert_eq!(mesh.extreme_points().count(), 4);
        assert!(mesh.contains(&[0.41, 0.44]));
        assert!(!mesh.contains(&[0.95, 0.95]));
    }

    #[test]
    fn hull_errors() {
        let line = nodes2(&[[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]]);
        assert!(matches!(
            convex_hull_mesh(&line, 1e-2),
            Err(Error::DegenerateHull { .. })
        ));
        let plane = NodeSet::new(
            3,
            vec![
                vec![0.0, 0.0, 0.0],
                vec![1.0, 0.0, 0.0],
                vec![0.0, 1.0, 0.0],
                vec![1.0, 1.0, 0.0],
            ],
        )
        .unwrap();
        assert!(matches!(
            convex_hull_mesh(&plane, 1e-2),
            Err(Error::DegenerateHull { .. })
        ));
        let one_d = NodeSet::new(1, vec![vec![0.0], vec![1.0]]).unwrap();
        assert_eq!(convex_hull_mesh(&one_d, 1e-2), Err(Error::UnsupportedDimension(1)));
        assert!(cube_mesh(2, 0.0).is_err());
    }

    #[test]
    fn refinement_keeps_vertices() {
        let nodes = nodes2(&[[0.1, 0.2], [0.9, 0.1], [0.7, 0.8], [0.2, 0.9]]);
        let coarse = convex_hull_mesh(&nodes, 2e-2).unwrap();
        let fine = convex_hull_mesh(&nodes, 1e-2).unwrap();
        assert!(coarse.vertices().iter().all(|v| fine.vertices().contains(v)));
    }

    #[test]
    fn affine_cardinals_on_simplex() {
        let nodes = nodes2(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]);
        let basis = BasisSequence::total_degree(BasisFamily::Monomial, 2, 1).unwrap();
        let card = cardinal_functions(&basis, &nodes).unwrap();
        let mesh = convex_hull_mesh(&nodes, 1e-2).unwrap();
        let est = lebesgue_discrete(&card, &mesh).unwrap();
        assert!((est.lambda - 1.0).abs() < 1e-12);
        let sv = bound_sv(&card, &mesh);
        let sigma_min = singular_values(card.vandermonde()).min();
        assert!((sv - 3.0 * 2f64.sqrt() / sigma_min).abs() < 1e-12);
        assert!(est.lambda <= sv);
    }

    #[test]
    fn constant_system_bounds() {
        let nodes = nodes2(&[[0.2, 0.3]]);
        let basis = BasisSequence::total_degree(BasisFamily::Monomial, 2, 0).unwrap();
        let card = cardinal_functions(&basis, &nodes).unwrap();
        let mesh = convex_hull_mesh(&nodes2(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]), 1e-2).unwrap();
        assert_eq!(bound_sv(&card, &mesh), 1.0);
        assert_eq!(det_bound_constant(&card), 1.0);
        assert!((bound_det(&card, &mesh) - 1f64.exp().sqrt()).abs() < 1e-14);
    }

    #[test]
    fn identity_vandermonde_constant() {
        // Chebyshev {1, T_1(x_1)} ... rather: nodes where V = I is impossible with
        // a constant; use the scaled case of unit row and column sums instead.
        let basis = BasisSequence::new(
            2,
            vec![
                crate::basis::BasisFunction::monomial(vec![1, 0]).unwrap(),
                crate::basis::BasisFunction::monomial(vec![0, 1]).unwrap(),
            ],
        )
        .unwrap();
        let nodes = nodes2(&[[1.0, 0.0], [0.0, 1.0]]);
        let card = cardinal_functions(&basis, &nodes).unwrap();
        assert_eq!(card.vandermonde(), &crate::linalg::DenseMatrix::identity(2));
        assert_eq!(det_bound_constant(&card), 1.0);
        let mesh = convex_hull_mesh(&nodes2(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]), 1e-2).unwrap();
        let c = basis_norm_max(&basis, &mesh);
        assert!((bound_det(&card, &mesh) - 2.0 * 1f64.exp().sqrt() * c).abs() < 1e-12);
    }

    #[test]
    fn smolyak_constant_is_finite_and_bounded() {
        let card = cardinal_functions(&smolyak_basis(2, 2).unwrap(), &smolyak_grid(2, 2).unwrap()).unwrap();
        let report = lebesgue_report(&card, &cube_mesh(2, 1e-2).unwrap()).unwrap();
        assert!(report.lambda_discrete.is_finite() && report.lambda_discrete >= 1.0);
        assert!(report.lambda_discrete <= report.bound_sv);
        assert!(report.bound_sv <= report.bound_det * (1.0 + 1e-8));
    }

    #[test]
    fn incremental_bound_arithmetic() {
        assert_eq!(bound_incremental(1.0, 0.0), 1.0);
        assert_eq!(bound_incremental(1.0, 1.0), 3.0);
        assert_eq!(new_cardinal_bound(2.0, -4.0, 1.0, 1.0), 1.0);
    }
}
