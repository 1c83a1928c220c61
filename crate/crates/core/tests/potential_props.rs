mod common;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use proptest::prelude::*;

use toric_qh::corpus_io::catalog::{catalog, lookup};
use toric_qh::critical_solver::{solve, SolveReport, SolverConfig};
use toric_qh::landau_ginzburg::{Superpotential, TorusPoint};

use common::*;

fn potential(k: usize) -> Superpotential {
    let (fan, f) = catalog()[k].build().unwrap();
    Superpotential::from_fan(&fan, &f, None).unwrap()
}

fn log_point(d: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-0.7f64..0.7, -3.1f64..3.1).prop_map(|(a, b)| c(a, b)), d)
}

fn solve_in_pool(threads: usize, name: &str, seed: u64) -> SolveReport {
    let (fan, f) = lookup(name).unwrap().build().unwrap();
    let w = Superpotential::from_fan(&fan, &f, None).unwrap();
    let cfg = SolverConfig {
        seed,
        ..SolverConfig::default()
    };
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
    pool.install(|| solve(&w, fan.top_cone_count(), &cfg)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn derivatives_match_finite_differences(k in 0usize..14, raw in log_point(6)) {
        let w = potential(k);
        let u = &raw[..w.dim()];
        let h = 1e-5;
        let (_, g, hess) = w.log_derivatives(u);
        for i in 0..u.len() {
            let mut up = u.to_vec();
            let mut dn = u.to_vec();
            up[i] += h;
            dn[i] -= h;
            let (fp, gp, _) = w.log_derivatives(&up);
            let (fm, gm, _) = w.log_derivatives(&dn);
            let scale = g[i].norm().max(1.0);
            prop_assert!(((fp - fm) / (2.0 * h) - g[i]).norm() < 1e-6 * scale);
            for j in 0..u.len() {
                let fd = (gp[j] - gm[j]) / (2.0 * h);
                prop_assert!((fd - hess[j][i]).norm() < 1e-6 * hess[j][i].norm().max(1.0));
            }
        }
    }

    #[test]
    fn exact_and_float_paths_agree(k in 0usize..14, raw in prop::collection::vec((1i64..=5, 1i64..=4, any::<bool>()), 6)) {
        let w = potential(k);
        let x: Vec<BigRational> = raw[..w.dim()]
            .iter()
            .map(|&(n, d, neg)| BigRational::new((if neg { -n } else { n }).into(), d.into()))
            .collect();
        let p = TorusPoint::from_rationals(x.clone()).unwrap();
        let exact = w.eval_exact(&x).to_f64().unwrap();
        let float = w.eval(&p);
        prop_assert!((float.re - exact).abs() < 1e-9 * exact.abs().max(1.0) && float.im.abs() < 1e-9);
        let ge = w.log_gradient_exact(&x);
        for (a, b) in w.log_gradient(&p).iter().zip(&ge) {
            let b = b.to_f64().unwrap();
            prop_assert!((a.re - b).abs() < 1e-9 * b.abs().max(1.0));
        }
    }

    #[test]
    fn affine_and_log_hessians_are_congruent(k in 0usize..14, raw in log_point(6)) {
        // x_i x_j W_ij = H_ij - delta_ij x_i W_i in log coordinates.
        let w = potential(k);
        let p = TorusPoint::from_log(&raw[..w.dim()]);
        let (x, g, h, a) = (p.coords(), w.log_gradient(&p), w.log_hessian(&p), w.hessian_affine(&p));
        for i in 0..x.len() {
            for j in 0..x.len() {
                let lhs = x[i] * x[j] * a[i][j];
                let rhs = h[i][j] - if i == j { g[i] } else { c(0.0, 0.0) };
                prop_assert!((lhs - rhs).norm() < 1e-9 * rhs.norm().max(1.0));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn solver_ignores_thread_count(seed in any::<u64>(), k in 0usize..3) {
        let name = ["cp2", "bl1_cp2", "cp1xcp1"][k];
        let serial = solve_in_pool(1, name, seed);
        let parallel = solve_in_pool(4, name, seed);
        prop_assert_eq!(serial, parallel);
    }
}

#[test]
fn surfaces_match_hand_oracles() {
    for name in ["cp2", "cp1xcp1", "bl1_cp2", "bl2_cp2", "bl3_cp2"] {
        let r = solve_in_pool(2, name, 3);
        let found: Vec<Vec<Complex64>> = r.points.iter().map(|p| p.coords.coords().to_vec()).collect();
        assert!(same_points(&found, &surface_oracle(name), 1e-8), "{name}");
    }
}

#[test]
fn blowup_critical_points_solve_the_eliminated_quartic() {
    // F = (0, 0, beta - alpha, -alpha) on the rays of Bl_1 CP^2 at s = 1/100.
    let (alpha, beta, s) = (2.0, 1.0, 0.01f64);
    let (fan, f) = lookup("bl1_cp2").unwrap().build().unwrap();
    let coeffs = [1.0, 1.0, s.powf(beta - alpha), s.powf(-alpha)];
    let w = Superpotential::from_fan(&fan, &f, Some(&coeffs)).unwrap();
    let r = solve(&w, 4, &SolverConfig::default()).unwrap();
    assert_eq!(r.found_count, 4);
    // y = 1/x1 satisfies y^4 - s^alpha y - s^(alpha + beta) = 0.
    let ys: Vec<Vec<Complex64>> = r.points.iter().map(|p| vec![1.0 / p.coords.coords()[0]]).collect();
    let quartic: Vec<Vec<Complex64>> = companion_roots(&[-s.powf(alpha + beta), -s.powf(alpha), 0.0, 0.0, 1.0])
        .into_iter()
        .map(|y| vec![y])
        .collect();
    assert!(same_points(&ys, &quartic, 1e-8));
    let mut moduli: Vec<f64> = ys.iter().map(|y| y[0].norm()).collect();
    moduli.sort_by(f64::total_cmp);
    assert!((moduli[0] / s.powf(beta) - 1.0).abs() < 0.2);
    assert!(moduli[1..].iter().all(|m| (m / s.powf(alpha / 3.0) - 1.0).abs() < 0.2));
}
