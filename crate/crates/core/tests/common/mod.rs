//! Independent oracles shared by the integration suites.
#![allow(dead_code)]

use std::collections::BTreeSet;

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Determinant by cofactor expansion, small matrices only.
pub fn det_i128(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return m[0][0];
    }
    let mut total = 0;
    for j in 0..n {
        if m[0][j] == 0 {
            continue;
        }
        let minor: Vec<Vec<i128>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect())
            .collect();
        let sign = if j % 2 == 0 { 1 } else { -1 };
        total += sign * m[0][j] * det_i128(&minor);
    }
    total
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

pub fn subsets_up_to(n: usize, k: usize) -> Vec<Vec<usize>> {
    (1..=k.min(n)).flat_map(|s| combinations(n, s)).collect()
}

/// Facets of `conv(points)` as `(primitive inward normal, offset)` with
/// `<normal, p> >= offset`, by trying every hyperplane through `d` points.
pub fn brute_force_facets(points: &[Vec<i64>]) -> BTreeSet<(Vec<i64>, i64)> {
    let d = points[0].len();
    let pts: Vec<Vec<i128>> = points.iter().map(|p| p.iter().map(|&x| x as i128).collect()).collect();
    let mut out = BTreeSet::new();
    for idx in combinations(pts.len(), d) {
        let base = &pts[idx[0]];
        let diffs: Vec<Vec<i128>> = idx[1..]
            .iter()
            .map(|&i| pts[i].iter().zip(base).map(|(a, b)| a - b).collect())
            .collect();
        // Generalized cross product of the d - 1 difference vectors.
        let mut normal: Vec<i128> = (0..d)
            .map(|j| {
                let minor: Vec<Vec<i128>> = diffs
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect())
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * det_i128(&minor)
            })
            .collect();
        let g = normal.iter().fold(0, |acc, &x| gcd(acc, x));
        if g == 0 {
            continue;
        }
        for x in &mut normal {
            *x /= g;
        }
        let vals: Vec<i128> = pts.iter().map(|p| p.iter().zip(&normal).map(|(a, b)| a * b).sum()).collect();
        let h: i128 = base.iter().zip(&normal).map(|(a, b)| a * b).sum();
        let (lo, hi) = (vals.iter().any(|&v| v < h), vals.iter().any(|&v| v > h));
        if lo && hi {
            continue;
        }
        if lo {
            for x in &mut normal {
                *x = -*x;
            }
        }
        let offset = if lo { -h } else { h };
        out.insert((normal.iter().map(|&x| x as i64).collect(), offset as i64));
    }
    out
}

/// Lattice points of `{m : <n, m> >= c}` inside the box `[-r, r]^d`.
pub fn count_lattice_points(facets: &BTreeSet<(Vec<i64>, i64)>, d: usize, r: i64) -> usize {
    let mut count = 0;
    let mut m = vec![-r; d];
    loop {
        if facets.iter().all(|(n, c)| n.iter().zip(&m).map(|(a, b)| a * b).sum::<i64>() >= *c) {
            count += 1;
        }
        let mut k = 0;
        loop {
            if k == d {
                return count;
            }
            m[k] += 1;
            if m[k] <= r {
                break;
            }
            m[k] = -r;
            k += 1;
        }
    }
}

/// Roots of a real polynomial (coefficients from degree 0 up) as
/// eigenvalues of its companion matrix.
pub fn companion_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    let m = DMatrix::from_fn(n, n, |i, j| {
        if j == n - 1 {
            -coeffs[i] / lead
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    m.complex_eigenvalues().iter().cloned().collect()
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn close(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol * x.norm().max(1.0))
}

/// Whether `found` and `oracle` agree as sets of points up to `tol`.
pub fn same_points(found: &[Vec<Complex64>], oracle: &[Vec<Complex64>], tol: f64) -> bool {
    if found.len() != oracle.len() {
        return false;
    }
    let mut rest: Vec<&Vec<Complex64>> = oracle.iter().collect();
    for p in found {
        match rest.iter().position(|q| close(p, q, tol)) {
            Some(i) => {
                rest.swap_remove(i);
            }
            None => return false,
        }
    }
    true
}

/// Hand-derived critical points of the five monotone del Pezzo potentials.
pub fn surface_oracle(name: &str) -> Vec<Vec<Complex64>> {
    let cube_roots: Vec<Complex64> = (0..3).map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / 3.0)).collect();
    match name {
        // x = y = zeta, zeta^3 = 1.
        "cp2" => cube_roots.iter().map(|&z| vec![z, z]).collect(),
        // W = x + 1/x + y + 1/y.
        "cp1xcp1" => [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)]
            .iter()
            .map(|&(a, b)| vec![c(a, 0.0), c(b, 0.0)])
            .collect(),
        // W = x + y + 1/y + 1/(xy): x^2 y = 1 and x^4 + x^3 = 1.
        "bl1_cp2" => companion_roots(&[-1.0, 0.0, 0.0, 1.0, 1.0])
            .into_iter()
            .map(|x| vec![x, 1.0 / (x * x)])
            .collect(),
        // W = x + y + 1/x + 1/y + 1/(xy): either x = y with x^3 = x + 1,
        // or xy = -1 with x^2 + x = 1.
        "bl2_cp2" => {
            let mut pts: Vec<Vec<Complex64>> = companion_roots(&[-1.0, -1.0, 0.0, 1.0]).into_iter().map(|x| vec![x, x]).collect();
            pts.extend(companion_roots(&[-1.0, 1.0, 1.0]).into_iter().map(|x| vec![x, -1.0 / x]));
            pts
        }
        // W = x + xy + y + 1/x + 1/(xy) + 1/y.
        "bl3_cp2" => {
            let mut pts: Vec<Vec<Complex64>> = [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)]
                .iter()
                .map(|&(a, b)| vec![c(a, 0.0), c(b, 0.0)])
                .collect();
            pts.extend(cube_roots[1..].iter().map(|&z| vec![z, z]));
            pts
        }
        _ => panic!("no oracle for {name}"),
    }
}
