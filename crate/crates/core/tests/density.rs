use proptest::prelude::*;
use qal_core::coords::Geometry;
use qal_core::density::{
    axial_profile, classify_topology, critical_r_scan, eval_density, midpoint_fit, ExtremumKind, Source, SourceSpec,
    SourceTag, TopologyClass, DEFAULT_WINDOW, EPS_FLAT, EPS_REL,
};
use qal_core::gaussian::{variational_ground, BasisSpec, Center, Group, DEFAULT_TAU};
use qal_core::legendre::GaussLegendre;
use qal_core::oracle::{assemble, lowest_eigenpair, GridSpec};
use qal_core::separated::solve_ground;

fn exact(r: f64) -> Source {
    Source::Exact(Box::new(solve_ground(r, 1e-12).unwrap()))
}

fn variational(basis: &BasisSpec, r: f64) -> Source {
    Source::Variational(Box::new(variational_ground(basis, &Geometry::new(r).unwrap(), DEFAULT_TAU).unwrap()))
}

/// Integral of rho in spheroidal coordinates, sampling through Cartesian points.
fn total_charge(src: &Source) -> f64 {
    let r = src.r();
    let q = GaussLegendre::new(32);
    let xi_hi = 1.0 + 80.0 / r.max(0.5);
    let panels = 60;
    let width = (xi_hi - 1.0) / panels as f64;
    let mut total = 0.0;
    for k in 0..panels {
        let a = 1.0 + k as f64 * width;
        total += q.integrate(a, a + width, |xi| {
            q.integrate(-1.0, 1.0, |eta| {
                let x = 0.5 * r * ((xi * xi - 1.0) * (1.0 - eta * eta)).sqrt();
                let z = 0.5 * r * xi * eta;
                src.rho([x, 0.0, z]).0 * (xi * xi - eta * eta)
            })
        });
    }
    2.0 * std::f64::consts::PI * r.powi(3) / 8.0 * total
}

#[test]
fn densities_integrate_to_one() {
    assert!((total_charge(&exact(2.0)) - 1.0).abs() < 1e-8);
    assert!((total_charge(&variational(&BasisSpec::reference(), 2.0)) - 1.0).abs() < 1e-8);
}

#[test]
fn exact_and_variational_agree_at_midpoint() {
    let e = exact(2.0).rho([0.0; 3]).0;
    let v = variational(&BasisSpec::reference(), 2.0).rho([0.0; 3]).0;
    assert!(((e - v) / e).abs() < 5e-3, "{e} vs {v}");
}

#[test]
fn eval_density_counts_tail_points() {
    let src = exact(2.0);
    let (rho, flagged) = eval_density(&src, &[[0.0, 0.0, 0.3], [0.0, 0.0, 500.0]]);
    assert_eq!(rho.len(), 2);
    assert_eq!(flagged, 1);
    assert!(rho[1] >= 0.0 && rho[1] < 1e-100);
}

#[test]
fn exact_profile_peaks_at_nuclei() {
    let src = exact(2.0);
    let prof = axial_profile(&src, 3.0, 401).unwrap();
    assert_eq!(prof.source, Some(SourceTag::Exact));
    let mid = prof.mid();
    assert_eq!(prof.z[mid], 0.0);
    assert!(prof.z.contains(&1.0) && prof.z.contains(&-1.0));
    let imax = (0..prof.rho.len()).max_by(|&a, &b| prof.rho[a].total_cmp(&prof.rho[b])).unwrap();
    assert_eq!(prof.z[imax].abs(), 1.0);
    assert!(prof.asymmetry() < 1e-10);
    let rep = classify_topology(&prof, EPS_REL, EPS_FLAT).unwrap();
    assert_eq!(rep.class, TopologyClass::TwoMax);
    let maxima: Vec<f64> = rep.extrema.iter().filter(|e| e.kind == ExtremumKind::Max).map(|e| e.z).collect();
    assert_eq!(maxima, vec![-1.0, 1.0]);
}

#[test]
fn oracle_grid_maxima_sit_at_nuclei() {
    // innermost xi shell of the finite-difference ground state peaks at |eta| -> 1
    let spec = GridSpec::for_separation(2.0, 40, 24).unwrap();
    let ge = lowest_eigenpair(&assemble(2.0, &spec).unwrap()).unwrap();
    let shell = &ge.vector[..spec.n_eta];
    let jmax = (0..spec.n_eta).max_by(|&a, &b| shell[a].total_cmp(&shell[b])).unwrap();
    assert!(jmax == 0 || jmax == spec.n_eta - 1);
}

#[test]
fn profile_preconditions() {
    let src = exact(2.0);
    assert!(axial_profile(&src, 3.0, 200).is_err());
    assert!(axial_profile(&src, 3.0, 101).is_err());
    assert!(axial_profile(&src, 2.5, 401).is_err());
    // R beyond the half width still gets its nuclei on nodes
    let far = exact(10.0);
    let prof = axial_profile(&far, 7.0, 201).unwrap();
    assert!(prof.z.contains(&5.0) && prof.z.contains(&-5.0));
}

#[test]
fn smooth_basis_single_maximum_at_small_r() {
    let src = variational(&BasisSpec::reference(), 0.008);
    let prof = axial_profile(&src, 2.004, 401).unwrap();
    let rep = classify_topology(&prof, EPS_REL, EPS_FLAT).unwrap();
    assert_eq!(rep.class, TopologyClass::OneMax);
    assert_eq!(rep.extrema.len(), 1);
    assert_eq!(rep.extrema[0].z, 0.0);
}

#[test]
fn exact_kappa0_matches_sign_of_a() {
    for r in [0.008, 0.01, 0.019, 2.0] {
        let src = exact(r);
        let Source::Exact(sol) = &src else { unreachable!() };
        let k = src.kappa0();
        assert_eq!(k > 0.0, sol.a > 0.0);
        // finite-difference curvature of the sampled profile agrees
        let h = 1e-3 * r;
        let fd = (src.rho_axial(h).0 - 2.0 * src.rho_axial(0.0).0 + src.rho_axial(-h).0) / (h * h);
        assert!(((fd - k) / k).abs() < 1e-4, "R={r}: {fd} vs {k}");
    }
}

#[test]
fn exact_midpoint_fit_is_balanced() {
    let sol = solve_ground(2.0, 1e-12).unwrap();
    // Y is even but not exactly in the model span, so the imbalance is a
    // window effect falling off as window^3
    let wide = midpoint_fit(&sol, DEFAULT_WINDOW).unwrap().balance();
    let half = midpoint_fit(&sol, 0.5 * DEFAULT_WINDOW).unwrap().balance();
    assert!((wide / half - 8.0).abs() < 0.5, "{wide} {half}");
    let fit = midpoint_fit(&sol, 0.01).unwrap();
    assert!(fit.balance() < 1e-6, "{}", fit.balance());
    assert!((fit.slope - fit.model_slope).abs() < 1e-10);
    // the model derivative at 0+ by a one-sided difference
    let h = 1e-7;
    let numeric = (fit.model(h) - fit.model(0.0)) / h;
    assert!((numeric - fit.slope).abs() < 1e-6);
}

#[test]
fn exact_source_two_max_near_equilibrium() {
    let scan = critical_r_scan(&SourceSpec::Exact { tol: 1e-12 }, 1.9, 2.1, 8).unwrap();
    assert_eq!(scan.points.len(), 8);
    assert!(scan.points.iter().all(|p| p.class == TopologyClass::TwoMax));
    assert!(scan.transitions.is_empty());
    assert!(scan.three_max.is_empty());
}

#[test]
fn exact_source_has_no_transition_at_small_r() {
    let scan = critical_r_scan(&SourceSpec::Exact { tol: 1e-12 }, 0.008, 0.012, 8).unwrap();
    assert!(scan.transitions.is_empty());
    assert!(scan.points.iter().all(|p| p.kappa0 > 0.0 && p.class == TopologyClass::TwoMax));
}

#[test]
fn smooth_basis_transition_is_bracketed() {
    let spec = SourceSpec::Variational { basis: BasisSpec::reference(), tau: DEFAULT_TAU };
    let scan = critical_r_scan(&spec, 0.05, 0.1, 8).unwrap();
    assert_eq!(scan.transitions.len(), 1);
    let t = scan.transitions[0];
    assert!(t.hi - t.lo <= 1e-4);
    assert!(t.kappa_lo < 0.0 && t.kappa_hi > 0.0);
    assert_eq!(scan.points[0].class, TopologyClass::OneMax);
    assert_eq!(scan.points[7].class, TopologyClass::TwoMax);
    assert!(critical_r_scan(&spec, 0.05, 0.1, 7).is_err());
}

#[test]
fn tighter_basis_moves_transition_inward() {
    let with_n = |n| {
        let mut b = BasisSpec { entries: vec![] };
        b.push_even_tempered(Center::NucleusA, Group::A, 0.02, 2.6, n).unwrap();
        b.push_even_tempered(Center::NucleusB, Group::B, 0.02, 2.6, n).unwrap();
        b.push_even_tempered(Center::Midpoint, Group::U, 0.05, 3.0, 6).unwrap();
        b
    };
    let k12 = variational(&with_n(12), 0.03).kappa0();
    let k18 = variational(&with_n(18), 0.03).kappa0();
    assert!(k12 < 0.0 && k18 > 0.0, "{k12} {k18}");
}

#[test]
fn variational_profiles_converge_to_exact() {
    let r = 2.0;
    let ex = exact(r);
    let zs: Vec<f64> = (-200..=200).map(|k| k as f64 * (0.5 * r + 1.0) / 200.0).collect();
    let sup = |n: usize| {
        let mut b = BasisSpec { entries: vec![] };
        b.push_even_tempered(Center::NucleusA, Group::A, 0.02, 2.6, n).unwrap();
        b.push_even_tempered(Center::NucleusB, Group::B, 0.02, 2.6, n).unwrap();
        b.push_even_tempered(Center::Midpoint, Group::U, 0.05, 3.0, 6).unwrap();
        let v = variational(&b, r);
        zs.iter().map(|&z| (v.rho_axial(z).0 - ex.rho_axial(z).0).abs()).fold(0.0, f64::max)
    };
    let (s6, s9, s12) = (sup(6), sup(9), sup(12));
    assert!(s6 > s9 && s9 > s12, "{s6} {s9} {s12}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn gerade_symmetry(x in -3.0f64..3.0, y in -3.0f64..3.0, z in -4.0f64..4.0) {
        let ex = exact(1.3);
        let va = variational(&BasisSpec::reference(), 1.3);
        for src in [&ex, &va] {
            let a = src.rho([x, y, z]).0;
            let b = src.rho([x, y, -z]).0;
            prop_assert!((a - b).abs() <= 1e-10 * a.abs().max(1e-300));
        }
    }
}
