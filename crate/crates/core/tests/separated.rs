use qal_core::legendre::GaussLegendre;
use qal_core::separated::{
    angular_converged, angular_eigenvalue, energy_curve, normalize, radial_mismatch, solve_ground, solve_ground_with,
    SolverOptions, DEFAULT_N_XI,
};

const TABLE_R: [f64; 4] = [0.008, 0.010, 0.012, 0.019];
const TABLE_E_TOT: [f64; 4] = [123.00016795, 98.00026136, 81.33370818, 50.63250545];
const TABLE_E_ELEC: [f64; 4] = [-1.99983205, -1.99973864, -1.99962515, -1.99907350];

#[test]
fn table_total_energies() {
    for (r, e) in TABLE_R.iter().zip(TABLE_E_TOT) {
        let sol = solve_ground(*r, 1e-12).unwrap();
        assert!((sol.e_tot - e).abs() < 5e-7, "R={r}: {} vs {e}", sol.e_tot);
        assert_eq!(sol.e_tot, sol.e_elec + 1.0 / r);
    }
}

#[test]
fn solution_invariants() {
    for r in [0.005, 0.3, 2.0, 12.0] {
        let sol = solve_ground(r, 1e-12).unwrap();
        assert!(sol.e_elec > -2.0 && sol.e_elec < -0.5);
        assert!(sol.p > 0.0 && sol.a > 0.0);
        assert!(sol.residuals.angular <= 1e-12);
        assert!(sol.residuals.radial_mismatch.abs() <= 1e-9);
    }
}

#[test]
fn separated_atom_limit() {
    let sol = solve_ground(30.0, 1e-12).unwrap();
    assert!((sol.e_tot + 0.5).abs() < 1e-4, "{}", sol.e_tot);
}

#[test]
fn united_atom_limit() {
    let sol = solve_ground(1e-3, 1e-12).unwrap();
    assert!(sol.e_elec > -2.0 && sol.e_elec < -1.9999, "{}", sol.e_elec);
}

#[test]
fn mismatch_brackets_the_eigenvalue() {
    let sol = solve_ground(2.0, 1e-12).unwrap();
    let g = sol.truncation;
    let at = |e: f64| {
        let a = angular_converged(-0.5 * e * 4.0).unwrap().a;
        radial_mismatch(e, a, 2.0, g.xi_match, g.xi_max).unwrap()
    };
    assert!(at(sol.e_elec).abs() < 1e-9);
    let (lo, hi) = (at(sol.e_elec - 1e-3), at(sol.e_elec + 1e-3));
    assert!(lo * hi < 0.0, "{lo} {hi}");
}

#[test]
fn mismatch_independent_of_match_point() {
    let sol = solve_ground(2.0, 1e-12).unwrap();
    let xi_max = sol.truncation.xi_max;
    for xm in [2.0, 3.0] {
        let m = radial_mismatch(sol.e_elec, sol.a, 2.0, xm, xi_max).unwrap();
        assert!(m.abs() < 1e-10, "xi_match {xm}: {m}");
    }
}

#[test]
fn truncation_robustness() {
    let base = solve_ground(2.0, 1e-12).unwrap();
    let fine = solve_ground_with(2.0, &SolverOptions { ode_rtol: 1e-13, ..Default::default() }).unwrap();
    assert!((base.e_elec - fine.e_elec).abs() < 1e-10);
    let p_sq = base.p * base.p;
    let l = base.angular.l_max;
    let a8 = angular_eigenvalue(p_sq, l + 8).unwrap().a;
    assert!((a8 - base.a).abs() < 1e-13 * base.a.max(1.0));
}

#[test]
fn midpoint_curvature_identity() {
    for r in [0.01, 2.0, 10.0] {
        let sol = solve_ground(r, 1e-12).unwrap();
        let (y0, dy0, d2y0) = sol.angular.midpoint();
        assert_eq!(dy0, 0.0);
        assert!((d2y0 - sol.a * y0).abs() < 1e-10 * (sol.a * y0).abs());
        // the direct Legendre derivative agrees as well
        let (_, d1, d2) = sol.angular.eval(0.0);
        assert!(d1.abs() < 1e-10 && (d2 - d2y0).abs() < 1e-10 * d2y0.abs());
    }
}

/// Direct 2-D Gauss-Legendre quadrature of |psi|^2 on (xi, eta).
fn density_integral(sol: &qal_core::separated::SigmaGSolution) -> f64 {
    let q = GaussLegendre::new(24);
    let xi_hi = 1.0 + 60.0 / sol.p;
    let panels = 80;
    let width = (xi_hi - 1.0) / panels as f64;
    let mut total = 0.0;
    for k in 0..panels {
        let a = 1.0 + k as f64 * width;
        total += q.integrate(a, a + width, |xi| {
            q.integrate(-1.0, 1.0, |eta| {
                let p = sol.psi(xi, eta).0;
                p * p * (xi * xi - eta * eta)
            })
        });
    }
    2.0 * std::f64::consts::PI * sol.r.powi(3) / 8.0 * total
}

#[test]
fn normalization_checks() {
    let sol = solve_ground(2.0, 1e-12).unwrap();
    assert!((density_integral(&sol) - 1.0).abs() < 1e-10);
    let n32 = normalize(&sol, 32, DEFAULT_N_XI).unwrap();
    let n64 = normalize(&sol, 64, DEFAULT_N_XI).unwrap();
    assert!(((n32 - n64) / n64).abs() < 1e-10);
    assert!(((n64 - sol.norm_const) / n64).abs() < 1e-10);
}

#[test]
fn table_scan_is_increasing() {
    let res = energy_curve(&TABLE_R, 1e-12).unwrap();
    assert_eq!(res.rows.len(), 4);
    assert!(res.is_monotone());
    for (row, e) in res.rows.iter().zip(TABLE_E_ELEC) {
        assert!((row.e_elec - e).abs() < 5e-7);
    }
    assert_eq!(energy_curve(&[1.0], 1e-12).unwrap().rows.len(), 1);
    assert!(energy_curve(&[1.0, 0.5], 1e-12).is_err());
}

#[test]
fn log_scan_monotone_with_single_minimum() {
    let n = 100;
    let rs: Vec<f64> = (0..n).map(|k| 0.005 * (20.0f64 / 0.005).powf(k as f64 / (n - 1) as f64)).collect();
    let res = energy_curve(&rs, 1e-12).unwrap();
    assert_eq!(res.failures().count(), 0);
    assert!(res.is_monotone());
    assert!(res.rows.iter().all(|r| r.a > 0.0));
    let e: Vec<f64> = res.rows.iter().map(|r| r.e_tot).collect();
    let minima: Vec<usize> = (1..n - 1).filter(|&k| e[k] < e[k - 1] && e[k] < e[k + 1]).collect();
    assert_eq!(minima.len(), 1);
    let k = minima[0];
    // discrete convexity around the minimum
    for j in k - 2..=k + 2 {
        assert!(e[j - 1] + e[j + 1] - 2.0 * e[j] > 0.0);
    }
}
