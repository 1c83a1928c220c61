//! Critical points of a superpotential on `(C^*)^d` by multistart Newton in
//! log coordinates, with Hessian-rank classification.
//!
//! Each start `k` draws from its own ChaCha stream `(seed, k)`, so the
//! parallel runs reproduce the serial ones exactly. Converged points are
//! canonically sorted before merging, which makes the report independent
//! of scheduling.

use std::cmp::Ordering;
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::landau_ginzburg::{int_pow, Superpotential, TorusPoint};
use crate::lattice_geometry::linalg;

/// Largest denominator tried when snapping a converged point to rationals.
const SNAP_DENOMINATOR: i64 = 12;
const SNAP_TOL: f64 = 1e-3;
/// Runs whose log-coordinates leave this box are heading to the boundary.
const ESCAPE: f64 = 40.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("found {found} distinct critical points, more than the expected {expected}")]
    OverCount { found: usize, expected: usize },
    #[error("point is not critical: residual {residual:e}")]
    NotCritical { residual: f64 },
    #[error("point has dimension {found}, potential has dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid solver configuration: {0}")]
    BadConfig(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub seed: u64,
    /// `None` means `200 * expected_count`.
    pub starts: Option<usize>,
    pub newton_tol: f64,
    pub max_iters: usize,
    pub cluster_tol: f64,
    pub rank_tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            seed: 0,
            starts: None,
            newton_tol: 1e-12,
            max_iters: 100,
            cluster_tol: 1e-6,
            rank_tol: 1e-8,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), SolverError> {
        let positive = [
            ("newton_tol", self.newton_tol),
            ("cluster_tol", self.cluster_tol),
            ("rank_tol", self.rank_tol),
        ];
        if let Some((name, _)) = positive.iter().find(|(_, v)| !(*v > 0.0)) {
            return Err(SolverError::BadConfig(format!("{name} must be positive")));
        }
        if self.starts == Some(0) {
            return Err(SolverError::BadConfig("starts must be at least 1".into()));
        }
        Ok(())
    }

    pub fn start_count(&self, expected: usize) -> usize {
        self.starts.unwrap_or(200 * expected.max(1))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriticalPoint {
    pub coords: TorusPoint,
    pub residual: f64,
    pub hessian_rank: usize,
    pub nondegenerate: bool,
    pub cluster_size: usize,
    /// Smallest singular value of the log-Hessian over the largest.
    pub condition: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Semisimple,
    FieldSummand,
    Undetermined,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Semisimple => "semisimple",
            Verdict::FieldSummand => "field_summand",
            Verdict::Undetermined => "undetermined",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub expected_count: usize,
    pub points: Vec<CriticalPoint>,
    pub found_count: usize,
    pub deficit: i64,
    pub verdict: Verdict,
    pub critical_values: Vec<Complex64>,
    pub starts: usize,
    pub converged_runs: usize,
}

fn max_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn to_matrix(h: &[Vec<Complex64>]) -> DMatrix<Complex64> {
    let d = h.len();
    DMatrix::from_fn(d, d, |i, j| h[i][j])
}

/// Singular values, largest first.
fn singular_values(h: &[Vec<Complex64>]) -> Vec<f64> {
    let mut sv: Vec<f64> = to_matrix(h).svd(false, false).singular_values.iter().cloned().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Size of the largest Hessian contribution of a single term at `p`. The
/// Hessian itself can vanish at a critical point, so ranks are measured
/// against this rather than against the top singular value.
fn term_scale(w: &Superpotential, p: &TorusPoint) -> f64 {
    w.terms()
        .iter()
        .map(|t| {
            let mono = t.exponent.iter().zip(p.coords()).fold(Complex64::new(t.coefficient, 0.0), |acc, (&e, &z)| acc * int_pow(z, e));
            let n2: i64 = t.exponent.iter().map(|e| e * e).sum();
            mono.norm() * n2 as f64
        })
        .fold(0.0, f64::max)
}

/// Near a degenerate zero the smallest singular value shrinks only like
/// the residual, so values below `sqrt(residual)` do not count either.
fn numeric_rank(sv: &[f64], scale: f64, rank_tol: f64, residual: f64) -> usize {
    let floor = rank_tol.max((residual / scale).sqrt()) * scale;
    sv.iter().filter(|&&s| s > floor).count()
}

fn exact_rank(w: &Superpotential, x: &[BigRational]) -> usize {
    linalg::rank(&w.log_hessian_exact(x))
}

fn random_start(seed: u64, index: usize, d: usize) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let ln2 = 2f64.ln();
    (0..d)
        .map(|_| Complex64::new(rng.random_range(-ln2..=ln2), rng.random_range(-PI..PI)))
        .collect()
}

/// Damped Newton from `u`; returns the best iterate if it meets `tol`.
fn newton(w: &Superpotential, mut u: Vec<Complex64>, cfg: &SolverConfig) -> Option<(Vec<Complex64>, f64)> {
    let d = u.len();
    let mut best: Option<(Vec<Complex64>, f64)> = None;
    for _ in 0..=cfg.max_iters {
        let (_, g, h) = w.log_derivatives(&u);
        let res = max_norm(&g);
        if !res.is_finite() {
            break;
        }
        if best.as_ref().is_none_or(|(_, r)| res < *r) {
            best = Some((u.clone(), res));
        }
        let rhs = DVector::from_iterator(d, g.iter().map(|z| -z));
        let Some(step) = to_matrix(&h).lu().solve(&rhs) else {
            break;
        };
        let size = step.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if !size.is_finite() {
            break;
        }
        let damp = if size > 1.0 { 1.0 / size } else { 1.0 };
        for (ui, si) in u.iter_mut().zip(step.iter()) {
            *ui += si * damp;
        }
        if u.iter().any(|z| z.re.abs() > ESCAPE) {
            break;
        }
        if size < 1e-15 {
            let res = max_norm(&w.log_derivatives(&u).1);
            if res < best.as_ref().map_or(f64::INFINITY, |b| b.1) {
                best = Some((u.clone(), res));
            }
            break;
        }
    }
    best.filter(|(_, r)| *r < cfg.newton_tol).map(|(mut u, r)| {
        for z in &mut u {
            z.im = z.im.sin().atan2(z.im.cos());
        }
        (u, r)
    })
}

/// Residual and rank at `p`, exactly when `p` has rational coordinates.
pub fn verify_point(w: &Superpotential, p: &TorusPoint, cfg: &SolverConfig) -> Result<CriticalPoint, SolverError> {
    if p.dim() != w.dim() {
        return Err(SolverError::DimensionMismatch {
            expected: w.dim(),
            found: p.dim(),
        });
    }
    let sv = singular_values(&w.log_hessian(p));
    let condition = if sv[0] > 0.0 { sv[sv.len() - 1] / sv[0] } else { 0.0 };
    let (residual, rank) = match p.exact() {
        Some(x) => {
            let g = w.log_gradient_exact(x);
            let residual = g.iter().map(|q| q.to_f64().unwrap_or(f64::INFINITY).abs()).fold(0.0, f64::max);
            let residual = if g.iter().all(Zero::is_zero) { 0.0 } else { residual.max(f64::MIN_POSITIVE) };
            (residual, exact_rank(w, x))
        }
        None => {
            let residual = max_norm(&w.log_gradient(p));
            (residual, numeric_rank(&sv, term_scale(w, p), cfg.rank_tol, residual))
        }
    };
    if !(residual < cfg.newton_tol) {
        return Err(SolverError::NotCritical { residual });
    }
    Ok(CriticalPoint {
        coords: p.clone(),
        residual,
        hessian_rank: rank,
        nondegenerate: rank == w.dim(),
        cluster_size: 1,
        condition,
    })
}

/// Upgrades a converged point to exact coordinates when a nearby rational
/// point is an exact critical point.
fn certify(w: &Superpotential, p: TorusPoint) -> TorusPoint {
    match p.snapped(SNAP_TOL, SNAP_DENOMINATOR) {
        Some(q) if w.log_gradient_exact(q.exact().unwrap()).iter().all(Zero::is_zero) => q,
        _ => p,
    }
}

fn quantize(x: f64) -> i64 {
    (x * 1e6).round() as i64
}

fn canonical_cmp(a: &TorusPoint, b: &TorusPoint) -> Ordering {
    let key = |p: &TorusPoint| -> Vec<(i64, i64)> { p.coords().iter().map(|z| (quantize(z.re), quantize(z.im))).collect() };
    key(a).cmp(&key(b)).then_with(|| {
        for (x, y) in a.coords().iter().zip(b.coords()) {
            let c = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
            if c != Ordering::Equal {
                return c;
            }
        }
        Ordering::Equal
    })
}

fn close(a: &TorusPoint, b: &TorusPoint, tol: f64) -> bool {
    a.coords()
        .iter()
        .zip(b.coords())
        .all(|(x, y)| (x - y).norm() <= tol * x.norm().max(y.norm()))
}

/// Greedy merge of sorted points. Numerically degenerate points converge
/// slowly, so they merge at the square root of `cluster_tol`.
fn merge(mut pts: Vec<CriticalPoint>, cfg: &SolverConfig) -> Vec<CriticalPoint> {
    pts.sort_by(|a, b| canonical_cmp(&a.coords, &b.coords));
    let mut clusters: Vec<CriticalPoint> = Vec::new();
    for p in pts {
        let hit = clusters.iter_mut().find(|c| {
            let tol = if c.nondegenerate && p.nondegenerate { cfg.cluster_tol } else { cfg.cluster_tol.sqrt() };
            close(&c.coords, &p.coords, tol)
        });
        match hit {
            Some(c) => {
                c.cluster_size += p.cluster_size;
                let rank = c.hessian_rank.min(p.hessian_rank);
                let better = match (c.coords.exact().is_some(), p.coords.exact().is_some()) {
                    (false, true) => true,
                    (true, false) => false,
                    _ => p.residual < c.residual,
                };
                if better {
                    c.coords = p.coords;
                    c.residual = p.residual;
                    c.condition = p.condition;
                }
                if c.coords.exact().is_none() {
                    c.hessian_rank = rank;
                }
                c.nondegenerate = c.hessian_rank == c.coords.dim();
            }
            None => clusters.push(p),
        }
    }
    clusters.sort_by(|a, b| canonical_cmp(&a.coords, &b.coords));
    clusters
}

pub fn verdict_for(expected: usize, points: &[CriticalPoint]) -> Verdict {
    let nondeg = points.iter().filter(|p| p.nondegenerate).count();
    if !points.is_empty() && nondeg == points.len() && points.len() == expected {
        Verdict::Semisimple
    } else if nondeg > 0 {
        Verdict::FieldSummand
    } else {
        Verdict::Undetermined
    }
}

pub fn solve(w: &Superpotential, expected_count: usize, cfg: &SolverConfig) -> Result<SolveReport, SolverError> {
    cfg.validate()?;
    let d = w.dim();
    let starts = cfg.start_count(expected_count);
    let runs: Vec<CriticalPoint> = (0..starts)
        .into_par_iter()
        .filter_map(|k| {
            let (u, _) = newton(w, random_start(cfg.seed, k, d), cfg)?;
            let p = certify(w, TorusPoint::from_log(&u));
            verify_point(w, &p, cfg).ok()
        })
        .collect();
    let converged_runs = runs.len();
    let points = merge(runs, cfg);
    if points.len() > expected_count {
        return Err(SolverError::OverCount {
            found: points.len(),
            expected: expected_count,
        });
    }
    let critical_values = points.iter().map(|p| w.eval(&p.coords)).collect();
    Ok(SolveReport {
        expected_count,
        found_count: points.len(),
        deficit: expected_count as i64 - points.len() as i64,
        verdict: verdict_for(expected_count, &points),
        critical_values,
        points,
        starts,
        converged_runs,
    })
}

/// The verdict with a one-paragraph justification.
pub fn classify(report: &SolveReport) -> (Verdict, String) {
    let nondeg = report.points.iter().filter(|p| p.nondegenerate).count();
    let degenerate: Vec<String> = report
        .points
        .iter()
        .filter(|p| !p.nondegenerate)
        .map(|p| format!("{} (rank {})", p.coords, p.hessian_rank))
        .collect();
    let verdict = verdict_for(report.expected_count, &report.points);
    let mut why = format!(
        "{} of {} expected critical points found, {} nondegenerate",
        report.found_count, report.expected_count, nondeg
    );
    if !degenerate.is_empty() {
        why += &format!("; degenerate: {}", degenerate.join(", "));
        if report.deficit > 0 {
            why += &format!("; the deficit of {} is absorbed by multiplicities at degenerate points if no point was missed", report.deficit);
        }
    }
    why += match verdict {
        Verdict::Semisimple => "; all critical points are nondegenerate, so the quantum cohomology is semisimple",
        Verdict::FieldSummand => "; a nondegenerate critical point gives a field direct summand",
        Verdict::Undetermined => "; no nondegenerate critical point was found",
    };
    (verdict, why)
}

#[derive(Serialize)]
struct PointJson {
    coords: Vec<[f64; 2]>,
    residual: f64,
    rank: usize,
    nondeg: bool,
    cluster_size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<Vec<String>>,
}

#[derive(Serialize)]
struct ReportJson {
    expected: usize,
    found: usize,
    deficit: i64,
    points: Vec<PointJson>,
    verdict: Verdict,
    critical_values: Vec<[f64; 2]>,
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

impl SolveReport {
    pub fn to_json(&self) -> String {
        let doc = ReportJson {
            expected: self.expected_count,
            found: self.found_count,
            deficit: self.deficit,
            points: self
                .points
                .iter()
                .map(|p| PointJson {
                    coords: p.coords.coords().iter().copied().map(pair).collect(),
                    residual: p.residual,
                    rank: p.hessian_rank,
                    nondeg: p.nondegenerate,
                    cluster_size: p.cluster_size,
                    exact: p.coords.exact().map(|x| x.iter().map(|q| q.to_string()).collect()),
                })
                .collect(),
            verdict: self.verdict,
            critical_values: self.critical_values.iter().copied().map(pair).collect(),
        };
        serde_json::to_string_pretty(&doc).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "expected {}  found {}  deficit {}  ({} of {} runs converged)\n",
            self.expected_count, self.found_count, self.deficit, self.converged_runs, self.starts
        );
        for (p, v) in self.points.iter().zip(&self.critical_values) {
            out += &format!(
                "{}  rank {}  {}  runs {}  W = {}\n",
                p.coords,
                p.hessian_rank,
                if p.nondegenerate { "nondegenerate" } else { "degenerate" },
                p.cluster_size,
                crate::landau_ginzburg::format_complex(*v)
            );
        }
        let (verdict, why) = classify(self);
        out += &format!("verdict: {}\n{}\n", verdict.as_str(), why);
        out
    }
}
