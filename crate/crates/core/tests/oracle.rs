use qal_core::oracle::{assemble, default_ladder, ground_energy, lowest_eigenpair, GridSpec};
use qal_core::separated::solve_ground;

fn residual_norm(r: f64, spec: &GridSpec) -> f64 {
    let sol = solve_ground(r, 1e-12).unwrap();
    let disc = assemble(r, spec).unwrap();
    let xs = spec.xi_nodes();
    let es = spec.eta_nodes();
    let psi: Vec<f64> = (0..spec.len()).map(|id| sol.psi(xs[id / spec.n_eta], es[id % spec.n_eta]).0).collect();
    let kx = disc.stiffness.mul(&psi);
    // discrete L2 norm of (L - E) psi with the cell measure
    kx.iter()
        .zip(&disc.weight)
        .zip(&psi)
        .zip(&disc.cell_measure)
        .map(|(((k, w), p), v)| (k - sol.e_elec * w * p).powi(2) / v)
        .sum::<f64>()
        .sqrt()
}

#[test]
fn operator_symmetric_and_weights_nonnegative() {
    let spec = GridSpec::for_separation(2.0, 20, 16).unwrap();
    let disc = assemble(2.0, &spec).unwrap();
    let n = spec.len();
    for i in 0..n {
        for j in i.saturating_sub(spec.n_eta)..n.min(i + spec.n_eta + 1) {
            assert!((disc.stiffness.get(i, j) - disc.stiffness.get(j, i)).abs() < 1e-14);
        }
    }
    // bilinear form check with two unrelated vectors
    let x: Vec<f64> = (0..n).map(|k| ((k * 37 % 101) as f64 / 101.0) - 0.5).collect();
    let y: Vec<f64> = (0..n).map(|k| ((k * 53 % 97) as f64 / 97.0).sin()).collect();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(p, q)| p * q).sum::<f64>();
    let xky = dot(&x, &disc.stiffness.mul(&y));
    let ykx = dot(&y, &disc.stiffness.mul(&x));
    assert!((xky - ykx).abs() <= 1e-14 * xky.abs().max(1.0));
    assert!(disc.weight.iter().all(|&w| w >= 0.0));
}

#[test]
fn interpolated_exact_solution_residual_is_second_order() {
    let base = GridSpec::for_separation(2.0, 40, 24).unwrap();
    let r0 = residual_norm(2.0, &base);
    let r1 = residual_norm(2.0, &base.refined(1));
    let r2 = residual_norm(2.0, &base.refined(2));
    let (o1, o2) = ((r0 / r1).log2(), (r1 / r2).log2());
    assert!(o1 > 1.7 && o2 > 1.7, "observed orders {o1} {o2} ({r0:e} {r1:e} {r2:e})");
}

#[test]
fn grid_eigenvector_properties() {
    let spec = GridSpec::for_separation(2.0, 40, 24).unwrap();
    let disc = assemble(2.0, &spec).unwrap();
    let ge = lowest_eigenpair(&disc).unwrap();
    let peak = ge.vector.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    assert!(ge.vector.iter().all(|&v| v / peak >= -1e-10));
    let h = spec.h_eta().max(spec.h_s());
    assert!(ge.fold_difference() < 10.0 * h * h);
    let rq = disc.rayleigh_quotient(&ge.vector);
    assert!(((rq - ge.e_elec) / ge.e_elec).abs() < 1e-12);
}

#[test]
fn agrees_with_separated_solver_at_r2() {
    let exact = solve_ground(2.0, 1e-12).unwrap();
    let res = ground_energy(2.0, &default_ladder(2.0).unwrap()).unwrap();
    assert!((res.e_elec - exact.e_elec).abs() < 1e-4, "{} vs {}", res.e_elec, exact.e_elec);
    assert!((res.e_tot() - exact.e_tot).abs() < 2e-4);
    // deviations from the extrapolant shrink by about 4 per halving
    let d: Vec<f64> = res.estimates.iter().map(|e| (e - res.e_elec).abs()).collect();
    assert!(d[0] > d[1] && d[1] > d[2], "{:?}", res.estimates);
    assert!((d[0] / d[1] - 4.0).abs() < 1.0, "{:?}", res.estimates);
}

#[test]
fn small_separation_near_united_atom() {
    let res = ground_energy(0.008, &default_ladder(0.008).unwrap()).unwrap();
    assert!(res.e_elec > -2.0 && res.e_elec < -1.999, "{}", res.e_elec);
}

#[test]
fn rejects_non_nested_ladder() {
    let a = GridSpec::new(20, 16, 10.0).unwrap();
    let b = GridSpec::new(30, 32, 10.0).unwrap();
    assert!(ground_energy(2.0, &[a, b, b.refined(1)]).is_err());
    assert!(ground_energy(2.0, &[a, a.refined(1)]).is_err());
    assert!(GridSpec::new(8, 16, 10.0).is_err());
}

#[test]
fn exact_density_normalized_on_oracle_grid() {
    // midpoint-rule quadrature of |psi|^2 on the stretched grid, Richardson-extrapolated
    let r = 0.008;
    let sol = solve_ground(r, 1e-12).unwrap();
    let integral = |spec: &GridSpec| {
        let disc = assemble(r, spec).unwrap();
        let xs = spec.xi_nodes();
        let es = spec.eta_nodes();
        let c = 2.0 * std::f64::consts::PI * r.powi(3) / 8.0;
        (0..spec.len())
            .map(|id| {
                let (xi, eta) = (xs[id / spec.n_eta], es[id % spec.n_eta]);
                let p = sol.psi(xi, eta).0;
                c * p * p * (xi * xi - eta * eta) * disc.cell_measure[id]
            })
            .sum::<f64>()
    };
    let base = GridSpec::new(200, 16, 1.0 + 60.0 / sol.p).unwrap();
    let i: Vec<f64> = (0..4).map(|k| integral(&base.refined(k))).collect();
    let r1: Vec<f64> = i.windows(2).map(|w| (4.0 * w[1] - w[0]) / 3.0).collect();
    let r2 = (16.0 * r1[2] - r1[1]) / 15.0;
    assert!((r2 - 1.0).abs() < 1e-8, "{i:?} {r1:?} {r2}");
}
