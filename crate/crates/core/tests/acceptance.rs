//! Acceptance criteria. Prints one line per criterion and exits non-zero if
//! any asserted criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use vandervolt::basis::{BasisFamily, BasisSequence};
use vandervolt::experiments::{local_minima, run_incomplete_grid, run_random_nodes, ExperimentConfig};
use vandervolt::interpolant::{add_node, cardinal_functions, fit, schur_border_det};
use vandervolt::lebesgue::{
    bound_det, bound_sv, convex_hull_mesh, cube_mesh, incremental_report, lebesgue_at_points, lebesgue_discrete,
};
use vandervolt::linalg::{determinant, DenseMatrix};
use vandervolt::prng::Stream;
use vandervolt::selection::{
    coefficient_matrix, exhaustive_maxminsv, exhaustive_maxvol, maxvol_rows, maxvol_rows_traced, near_singular,
    SelectionMethod,
};
use vandervolt::sparse_grid::{smolyak_basis, smolyak_grid};
use vandervolt::vandermonde::{build_generalized, build_square, NodeSet};

type Outcome = Result<String, String>;
type Criterion = (u32, Duration, fn() -> Outcome);

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---- polynomial expression oracle for the golden tables -------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Var(usize, u32),
    Plus,
    Minus,
    Open,
    Close,
}

fn tokenize(s: &str) -> Vec<Tok> {
    let c: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < c.len() {
        match c[i] {
            ' ' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1
            }
            '(' => {
                out.push(Tok::Open);
                i += 1
            }
            ')' => {
                out.push(Tok::Close);
                i += 1
            }
            'x' => {
                // x_<axis>[^<power>]
                let mut j = i + 2;
                while j < c.len() && c[j].is_ascii_digit() {
                    j += 1;
                }
                let axis: usize = c[i + 2..j].iter().collect::<String>().parse().unwrap();
                let mut power = 1;
                if j < c.len() && c[j] == '^' {
                    let mut k = j + 1;
                    while k < c.len() && c[k].is_ascii_digit() {
                        k += 1;
                    }
                    power = c[j + 1..k].iter().collect::<String>().parse().unwrap();
                    j = k;
                }
                out.push(Tok::Var(axis - 1, power));
                i = j;
            }
            d if d.is_ascii_digit() => {
                let mut j = i;
                while j < c.len() && (c[j].is_ascii_digit() || c[j] == '.') {
                    j += 1;
                }
                out.push(Tok::Num(c[i..j].iter().collect::<String>().parse().unwrap()));
                i = j;
            }
            other => panic!("unexpected {other:?} in {s:?}"),
        }
    }
    out
}

struct Eval<'a> {
    toks: &'a [Tok],
    pos: usize,
    x: &'a [f64],
}

impl Eval<'_> {
    fn sum(&mut self) -> f64 {
        let mut acc = self.term();
        loop {
            match self.toks.get(self.pos) {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc += self.term();
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc -= self.term();
                }
                _ => return acc,
            }
        }
    }

    fn term(&mut self) -> f64 {
        let mut sign = 1.0;
        if self.toks.get(self.pos) == Some(&Tok::Minus) {
            self.pos += 1;
            sign = -1.0;
        }
        let mut acc = sign;
        while let Some(t) = self.toks.get(self.pos) {
            match *t {
                Tok::Num(v) => acc *= v,
                Tok::Var(axis, p) => acc *= self.x[axis].powi(p as i32),
                Tok::Open => {
                    self.pos += 1;
                    acc *= self.sum();
                    assert_eq!(self.toks.get(self.pos), Some(&Tok::Close));
                }
                _ => break,
            }
            self.pos += 1;
        }
        acc
    }
}

fn eval_expr(toks: &[Tok], x: &[f64]) -> f64 {
    let mut e = Eval { toks, pos: 0, x };
    let v = e.sum();
    assert_eq!(e.pos, toks.len());
    v
}

struct TableRow {
    index: usize,
    node: Vec<f64>,
    expr: Vec<Tok>,
}

fn golden_tables() -> Vec<((usize, u32), Vec<TableRow>)> {
    let text = include_str!("data/smolyak_tables.txt");
    let mut tables: Vec<((usize, u32), Vec<TableRow>)> = Vec::new();
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        if let Some(head) = line.strip_prefix('[') {
            let head = head.trim_end_matches(']');
            let (d, k) = head.split_once(' ').unwrap();
            let d = d.trim_start_matches("d=").parse().unwrap();
            let k = k.trim_start_matches("k=").parse().unwrap();
            tables.push(((d, k), Vec::new()));
            continue;
        }
        let parts: Vec<&str> = line.split('|').map(str::trim).collect();
        tables.last_mut().unwrap().1.push(TableRow {
            index: parts[0].parse().unwrap(),
            node: parts[1].split(',').map(|v| v.parse().unwrap()).collect(),
            expr: tokenize(parts[2]),
        });
    }
    tables
}

fn criterion_1() -> Outcome {
    let tables = golden_tables();
    let mut rng = Stream::new(101);
    let mut checked = 0;
    for d in [2usize, 3] {
        for k in [2u32, 3] {
            // the k = 3 tables list only the rows added to k = 2
            let rows: Vec<&TableRow> = tables
                .iter()
                .filter(|((td, tk), _)| *td == d && *tk <= k)
                .flat_map(|(_, rows)| rows.iter())
                .collect();
            let grid = smolyak_grid(d, k).map_err(|e| e.to_string())?;
            let basis = smolyak_basis(d, k).map_err(|e| e.to_string())?;
            let expected = match (d, k) {
                (2, 2) => 13,
                (2, 3) => 29,
                (3, 2) => 25,
                _ => 69,
            };
            check(
                grid.len() == expected && basis.len() == expected && rows.len() == expected,
                || {
                    format!(
                        "d={d} k={k}: {} nodes, {} functions, {} table rows",
                        grid.len(),
                        basis.len(),
                        rows.len()
                    )
                },
            )?;
            for (pos, row) in rows.iter().enumerate() {
                check(row.index == pos + 1, || format!("table row order at {}", row.index))?;
                let node = grid.get(pos).unwrap();
                let err = node
                    .iter()
                    .zip(&row.node)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                check(err <= 5e-7, || {
                    format!("d={d} k={k} node {}: off by {err:e}", row.index)
                })?;
                let phi = &basis.functions()[pos];
                for _ in 0..50 {
                    let x: Vec<f64> = (0..d).map(|_| rng.uniform_in(-1.0, 1.0)).collect();
                    let (got, want) = (phi.eval(&x).unwrap(), eval_expr(&row.expr, &x));
                    check((got - want).abs() <= 1e-10, || {
                        format!("d={d} k={k} function {} ({phi}) at {x:?}: {got} vs {want}", row.index)
                    })?;
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} nodes and functions match"))
}

fn criterion_2() -> Outcome {
    let mut rng = Stream::new(202);
    let mut worst: f64 = 0.0;
    for (d, k) in [(2usize, 2u32), (2, 3), (3, 2), (3, 3)] {
        let grid = smolyak_grid(d, k).map_err(|e| e.to_string())?;
        let basis = smolyak_basis(d, k).map_err(|e| e.to_string())?;
        let v = build_square(&basis, &grid).map_err(|e| e.to_string())?;
        let s = vandervolt::linalg::singular_values(&v);
        check(
            !near_singular(determinant(&v).unwrap_or(0.0).abs(), s.min(), s.max()),
            || format!("d={d} k={k}: near-singular (sigma_min {:e})", s.min()),
        )?;
        for _ in 0..20 {
            let coef: Vec<f64> = (0..basis.len()).map(|_| rng.uniform_in(-1.0, 1.0)).collect();
            let f = |x: &[f64]| -> f64 {
                basis
                    .functions()
                    .iter()
                    .zip(&coef)
                    .map(|(phi, c)| c * phi.eval(x).unwrap())
                    .sum()
            };
            let values: Vec<f64> = grid.points().iter().map(|x| f(x)).collect();
            let p = fit(&basis, &grid, &values).map_err(|e| e.to_string())?;
            for _ in 0..100 {
                let x: Vec<f64> = (0..d).map(|_| rng.uniform_in(-1.0, 1.0)).collect();
                let err = (p.evaluate(&x).unwrap() - f(&x)).abs();
                worst = worst.max(err);
                check(err <= 1e-8, || format!("d={d} k={k}: error {err:e} at {x:?}"))?;
            }
        }
    }
    Ok(format!("max reproduction error {worst:.2e}"))
}

fn criterion_3() -> Outcome {
    let mut instances = 0;
    let mut skipped = 0;
    for (case, degree, ns) in [("i", 2u32, vec![4usize, 5]), ("ii", 3, vec![7, 8, 9])] {
        let trial = BasisSequence::total_degree(BasisFamily::Monomial, 2, degree).unwrap();
        for t in 0..200u64 {
            let n = ns[t as usize % ns.len()];
            let mut rng = Stream::substream(303, t + 1000 * degree as u64);
            let nodes = NodeSet::new(2, rng.points(n, 2, 0.0, 1.0)).map_err(|e| e.to_string())?;
            let v = build_generalized(&trial, &nodes).map_err(|e| e.to_string())?;
            let sel = maxvol_rows(&v, 0.01).map_err(|e| e.to_string())?;
            if sel.dismissed {
                skipped += 1;
                continue;
            }
            let card =
                cardinal_functions(&trial.select(&sel.row_indices).unwrap(), &nodes).map_err(|e| e.to_string())?;
            let mesh = convex_hull_mesh(&nodes, 1e-2).map_err(|e| e.to_string())?;
            let lambda = lebesgue_discrete(&card, &mesh).unwrap().lambda;
            let (sv, det) = (bound_sv(&card, &mesh), bound_det(&card, &mesh));
            check(lambda <= sv, || {
                format!("case {case} trial {t}: lambda {lambda} > bound_sv {sv}")
            })?;
            if sv.is_finite() && det.is_finite() {
                check(sv <= det * (1.0 + 1e-8), || {
                    format!("case {case} trial {t}: bound_sv {sv} > bound_det {det}")
                })?;
            }
            instances += 1;
        }
    }
    Ok(format!(
        "{instances} instances, 0 violations, {skipped} singular skipped"
    ))
}

fn criterion_4() -> Outcome {
    let trial = BasisSequence::total_degree(BasisFamily::Monomial, 2, 2).unwrap();
    let mut worst_ratio: f64 = 0.0;
    let mut points = 0;
    for t in 0..100u64 {
        let mut rng = Stream::substream(404, t);
        let nodes = NodeSet::new(2, rng.points(5, 2, 0.0, 1.0)).map_err(|e| e.to_string())?;
        let v = build_generalized(&trial, &nodes).map_err(|e| e.to_string())?;
        let sel = maxvol_rows(&v, 0.01).map_err(|e| e.to_string())?;
        let basis = trial.select(&sel.row_indices).unwrap();
        let missing = (0..trial.len()).find(|r| !sel.row_indices.contains(r)).unwrap();
        let new_phi = trial.functions()[missing].clone();
        // strictly interior: a random convex combination of the nodes
        let w: Vec<f64> = (0..5).map(|_| rng.uniform() + 0.05).collect();
        let total: f64 = w.iter().sum();
        let new_node: Vec<f64> = (0..2)
            .map(|a| nodes.points().iter().zip(&w).map(|(p, wi)| p[a] * wi / total).sum())
            .collect();

        let card = cardinal_functions(&basis, &nodes).map_err(|e| e.to_string())?;
        let card1 = add_node(&card, &new_node, &new_phi).map_err(|e| format!("trial {t}: {e}"))?;
        let mesh = convex_hull_mesh(&nodes, 1e-2).map_err(|e| e.to_string())?;
        let report = incremental_report(&card, &card1, &mesh).map_err(|e| e.to_string())?;
        check(report.inside_hull, || format!("trial {t}: new node outside hull"))?;
        check(report.lambda_n1 <= report.bound + 1e-8, || {
            format!("trial {t}: lambda_n+1 {} > bound {}", report.lambda_n1, report.bound)
        })?;
        worst_ratio = worst_ratio.max(report.lambda_n1 / report.bound);

        let g: Vec<f64> = nodes.points().iter().map(|x| new_phi.eval(x).unwrap()).collect();
        for _ in 0..20 {
            let x = vec![rng.uniform(), rng.uniform()];
            let schur = schur_border_det(&card, &g, new_phi.eval(&x).unwrap(), &basis.eval_vector(&x).unwrap())
                .map_err(|e| e.to_string())?;
            // direct: the enlarged Vandermonde with x in place of x_{n+1}
            let mut bordered = nodes.points().to_vec();
            bordered.push(x.clone());
            let mut big = basis.clone();
            big.push(new_phi.clone()).unwrap();
            let direct = match NodeSet::new(2, bordered) {
                Ok(set) => determinant(&build_square(&big, &set).unwrap()).unwrap_or(0.0),
                Err(_) => 0.0,
            };
            let ell = card.eval(&x).unwrap();
            let scale = card.determinant().abs()
                * (new_phi.eval(&x).unwrap().abs() + ell.iter().zip(&g).map(|(l, gi)| (l * gi).abs()).sum::<f64>());
            check((schur - direct).abs() <= 1e-8 * scale, || {
                format!("trial {t}: schur {schur} vs direct {direct} at {x:?}")
            })?;
            points += 1;
        }
    }
    Ok(format!(
        "100 instances within the bound (max ratio {worst_ratio:.3}), {points} Schur checks"
    ))
}

fn criterion_5() -> Outcome {
    let tol = 0.01;
    let mut swaps = 0;
    for (m, n) in [(8usize, 4usize), (12, 6)] {
        for t in 0..1000u64 {
            let mut rng = Stream::substream(505 + m as u64, t);
            let v = DenseMatrix::from_fn(m, n, |_, _| rng.uniform_in(-1.0, 1.0));
            let (sel, trace) = maxvol_rows_traced(&v, tol).map_err(|e| e.to_string())?;
            check(!sel.dismissed, || format!("{m}x{n} #{t}: dismissed"))?;
            let b = coefficient_matrix(&v, &sel.row_indices).map_err(|e| e.to_string())?;
            check(b.max_abs() <= 1.0 + tol + 1e-9, || {
                format!("{m}x{n} #{t}: max |B| = {}", b.max_abs())
            })?;
            check(trace.windows(2).all(|w| w[1] > w[0]), || {
                format!("{m}x{n} #{t}: volume trace {trace:?}")
            })?;
            swaps += sel.swaps;
        }
    }
    Ok(format!("2000 matrices dominant, {swaps} swaps all volume-increasing"))
}

fn criterion_6() -> Outcome {
    let mut details = Vec::new();
    let mut failures = Vec::new();
    for (n, degree) in [(4usize, 2u32), (7, 3)] {
        let config = ExperimentConfig {
            dim: 2,
            n,
            degree,
            trials: 1000,
            seed: 1,
            method: SelectionMethod::MaxVolExhaustive,
            ..ExperimentConfig::default()
        };
        let result = run_random_nodes(&config).map_err(|e| e.to_string())?;
        let kept: Vec<_> = result.records.iter().filter(|r| !r.dismissed).collect();
        let nonneg = kept.iter().all(|r| {
            r.diff_a >= 0.0
                && r.diff_b >= 0.0
                && r.lambda_best <= r.lambda_maxvol + 1e-6
                && r.lambda_best <= r.lambda_maxminsv + 1e-6
        });
        let close = kept.iter().filter(|r| r.diff_a < 0.5).count() as f64 / kept.len() as f64;
        if nonneg {
            details.push(format!(
                "n={n}: diffs (a), (b) nonnegative in {} kept trials",
                kept.len()
            ));
        } else {
            failures.push(format!("n={n}: negative difference or best above a selection"));
        }
        let line = format!("n={n}: diff (a) < 0.5 in {:.1}% of trials", 100.0 * close);
        if close < 0.8 {
            failures.push(line);
        } else {
            details.push(line);
        }
    }
    if failures.is_empty() {
        Ok(details.join(", "))
    } else {
        Err(format!("{}; {}", failures.join("; "), details.join(", ")))
    }
}

fn criterion_7() -> Outcome {
    let curve = run_incomplete_grid(2, 2, 0.01, 1e-2).map_err(|e| e.to_string())?;
    let cards: Vec<usize> = curve.iter().map(|p| p.cardinality).collect();
    check(cards == (13..=29).collect::<Vec<_>>(), || {
        format!("cardinalities {cards:?}")
    })?;
    let minima = local_minima(&curve);
    check(minima == [17, 21, 25, 27], || format!("local minima at {minima:?}"))?;
    let mesh = cube_mesh(2, 1e-2).unwrap();
    for (k, point) in [(2u32, &curve[0]), (3, curve.last().unwrap())] {
        let card = cardinal_functions(&smolyak_basis(2, k).unwrap(), &smolyak_grid(2, k).unwrap()).unwrap();
        let standalone = lebesgue_discrete(&card, &mesh).unwrap().lambda;
        check((standalone - point.lambda).abs() <= 1e-8, || {
            format!("k={k}: endpoint {} vs standalone {standalone}", point.lambda)
        })?;
    }
    Ok(format!(
        "minima at {minima:?}, endpoints {:.6} and {:.6}",
        curve[0].lambda,
        curve.last().unwrap().lambda
    ))
}

fn criterion_8() -> String {
    let mut counts = Vec::new();
    let trial = BasisSequence::total_degree(BasisFamily::Monomial, 3, 2).unwrap();
    let trials = 1000u64;
    for n in 5..=9usize {
        let dismissed = (0..trials)
            .filter(|&t| {
                let nodes = NodeSet::new(3, Stream::substream(1, t).points(n, 3, 0.0, 1.0)).unwrap();
                let v = build_generalized(&trial, &nodes).unwrap();
                exhaustive_maxvol(&v).unwrap().dismissed || exhaustive_maxminsv(&v).unwrap().dismissed
            })
            .count();
        counts.push(format!("n={n}: {dismissed}"));
    }
    format!("d=3 dismissals per {trials} trials: {}", counts.join(", "))
}

fn criterion_9() -> Outcome {
    let basis = BasisSequence::total_degree(BasisFamily::Monomial, 1, 2).unwrap();
    let nodes = NodeSet::new(1, vec![vec![-1.0], vec![0.0], vec![1.0]]).unwrap();
    let card = cardinal_functions(&basis, &nodes).map_err(|e| e.to_string())?;
    let samples: Vec<Vec<f64>> = (0..=20_000).map(|j| vec![-1.0 + j as f64 * 1e-4]).collect();
    let (lambda, _) = lebesgue_at_points(&card, &samples);
    let closed = samples
        .iter()
        .map(|y| {
            let x = y[0];
            (x * (x - 1.0) / 2.0).abs() + (1.0 - x * x).abs() + (x * (x + 1.0) / 2.0).abs()
        })
        .fold(0.0, f64::max);
    check((lambda - 1.25).abs() <= 1e-3 && (closed - 1.25).abs() <= 1e-3, || {
        format!("lambda {lambda}, closed form {closed}")
    })?;
    Ok(format!("lambda = {lambda:.6}"))
}

fn main() -> ExitCode {
    let criteria: Vec<Criterion> = vec![
        (1, Duration::from_secs(5), criterion_1),
        (2, Duration::from_secs(30), criterion_2),
        (3, Duration::from_secs(120), criterion_3),
        (4, Duration::from_secs(60), criterion_4),
        (5, Duration::from_secs(60), criterion_5),
        (6, Duration::from_secs(600), criterion_6),
        (7, Duration::from_secs(600), criterion_7),
        (9, Duration::from_secs(1), criterion_9),
    ];
    let mut failed = Vec::new();
    for (id, budget, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|msg| {
            if elapsed <= budget {
                Ok(msg)
            } else {
                Err(format!("{msg}; took {elapsed:.1?}, budget {budget:?}"))
            }
        });
        match outcome {
            Ok(msg) => println!("criterion {id}: PASS  {msg} [{elapsed:.2?}]"),
            Err(msg) => {
                println!("criterion {id}: FAIL  {msg} [{elapsed:.2?}]");
                failed.push(id);
            }
        }
        if id == 7 {
            let start = Instant::now();
            println!("criterion 8: REPORT  {} [{:.2?}]", criterion_8(), start.elapsed());
        }
    }
    if failed.is_empty() {
        println!("acceptance: all asserted criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
