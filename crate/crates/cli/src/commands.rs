use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde_json::{json, Value};

use qal_core::coords::Geometry;
use qal_core::density::{
    scan_points, SourceSpec, DEFAULT_WINDOW, EPS_FLAT, EPS_REL,
};
use qal_core::gaussian::{variational_ground, BasisSpec, Group};
use qal_core::oracle::{ground_energy, GridSpec};
use qal_core::separated::{energy_curve, solve_ground};

use crate::output::{g12, open, row, Header};
use crate::{usage, DensityArgs, Format, RangeArgs, ScanArgs, SolveArgs, Solver, SourceArgs, Spacing, Status, TopologyArgs};

const MIN_TOL: f64 = 1e-12;

fn check_r(r: f64) -> Result<()> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(usage(format!("R must be positive, got {r}")));
    }
    Ok(())
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol >= MIN_TOL && tol.is_finite()) {
        return Err(usage(format!("--tol must be at least {MIN_TOL}, got {tol}")));
    }
    Ok(())
}

fn load_basis(args: &SourceArgs) -> Result<BasisSpec> {
    let path = args.basis.as_ref().ok_or_else(|| usage("--solver variational requires --basis"))?;
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    text.parse().map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn source_spec(args: &SourceArgs) -> Result<SourceSpec> {
    check_tol(args.tol)?;
    match args.solver {
        Solver::Exact => Ok(SourceSpec::Exact { tol: args.tol }),
        Solver::Variational => Ok(SourceSpec::Variational { basis: load_basis(args)?, tau: args.tau }),
        Solver::Oracle => Err(usage("the oracle solver provides energies only; use exact or variational")),
    }
}

fn source_header(h: Header, args: &SourceArgs) -> Header {
    let h = h.field("solver", args.solver.label()).field("tol", g12(args.tol));
    match (&args.basis, args.solver) {
        (Some(b), Solver::Variational) => h.field("basis", b.display()).field("tau", g12(args.tau)),
        _ => h,
    }
}

fn r_values(range: &RangeArgs) -> Result<Vec<f64>> {
    let RangeArgs { rmin, rmax, steps, spacing } = *range;
    check_r(rmin)?;
    if steps == 0 {
        return Err(usage("--steps must be at least 1"));
    }
    if steps == 1 {
        return Ok(vec![rmin]);
    }
    if !(rmax > rmin) {
        return Err(usage(format!("--rmax must exceed --rmin when --steps > 1 (got {rmin}, {rmax})")));
    }
    let f = |k: usize| k as f64 / (steps - 1) as f64;
    Ok(match spacing {
        Spacing::Lin => (0..steps).map(|k| rmin + (rmax - rmin) * f(k)).collect(),
        Spacing::Log => (0..steps).map(|k| rmin * (rmax / rmin).powf(f(k))).collect(),
    })
}

fn range_header(h: Header, r: &RangeArgs) -> Header {
    let spacing = match r.spacing {
        Spacing::Lin => "lin",
        Spacing::Log => "log",
    };
    h.field("rmin", g12(r.rmin)).field("rmax", g12(r.rmax)).field("steps", r.steps).field("spacing", spacing)
}

fn write_json(out: &mut dyn Write, v: &Value) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, v)?;
    writeln!(out)?;
    Ok(())
}

pub fn solve(a: &SolveArgs, format: Format) -> Result<Status> {
    check_r(a.r)?;
    let header = source_header(Header::new("solve").field("R", g12(a.r)), &a.source);
    let (columns, values): (Vec<&str>, Vec<f64>) = match a.source.solver {
        Solver::Exact => {
            check_tol(a.source.tol)?;
            let s = solve_ground(a.r, a.source.tol).with_context(|| format!("separated solver at R = {}", a.r))?;
            (
                vec!["R", "E_elec", "E_tot", "A", "p", "angular_residual", "radial_mismatch", "iterations"],
                vec![
                    s.r,
                    s.e_elec,
                    s.e_tot,
                    s.a,
                    s.p,
                    s.residuals.angular,
                    s.residuals.radial_mismatch,
                    s.truncation.iterations as f64,
                ],
            )
        }
        Solver::Variational => {
            let basis = load_basis(&a.source)?;
            let g = Geometry::new(a.r)?;
            let v = variational_ground(&basis, &g, a.source.tau).context("variational solve")?;
            let pop = |grp| v.group(grp).map_or(0.0, |s| s.population);
            (
                vec!["R", "E_elec", "E_tot", "retained", "dropped", "pop_A", "pop_B", "pop_U"],
                vec![
                    v.r,
                    v.e_var,
                    v.e_tot_var,
                    v.retained as f64,
                    v.dropped as f64,
                    pop(Group::A),
                    pop(Group::B),
                    pop(Group::U),
                ],
            )
        }
        Solver::Oracle => {
            if a.levels < 3 {
                return Err(usage("--levels must be at least 3"));
            }
            let base = GridSpec::for_separation(a.r, a.n_xi, a.n_eta).map_err(|e| usage(e.to_string()))?;
            let ladder: Vec<GridSpec> = (0..a.levels).map(|k| base.refined(k)).collect();
            let res = ground_energy(a.r, &ladder).context("finite-difference oracle")?;
            let mut cols = vec!["R", "E_elec", "E_tot", "error_estimate"];
            let names = ["E_h", "E_h2", "E_h4", "E_h8", "E_h16"];
            cols.extend(names.iter().take(res.estimates.len()));
            let mut vals = vec![res.r, res.e_elec, res.e_tot(), res.error_estimate];
            vals.extend(&res.estimates);
            (cols, vals)
        }
    };
    let header = match a.source.solver {
        Solver::Oracle => header.field("grid", format!("{}x{} levels {}", a.n_xi, a.n_eta, a.levels)),
        _ => header,
    };
    let mut out = open(a.out.as_deref())?;
    match format {
        Format::Csv => {
            header.write(&mut *out)?;
            row(&mut *out, &columns.iter().map(|c| c.to_string()).collect::<Vec<_>>())?;
            row(&mut *out, &values.iter().map(|&v| g12(v)).collect::<Vec<_>>())?;
        }
        Format::Json => {
            let mut obj = serde_json::Map::new();
            obj.insert("header".into(), header.to_json());
            obj.insert("solver".into(), json!(a.source.solver.label()));
            for (c, v) in columns.iter().zip(&values) {
                obj.insert(c.to_string(), json!(v));
            }
            write_json(&mut *out, &Value::Object(obj))?;
        }
    }
    out.flush()?;
    Ok(Status::Ok)
}

pub fn scan(a: &ScanArgs, format: Format) -> Result<Status> {
    check_tol(a.tol)?;
    let rs = r_values(&a.range)?;
    let res = energy_curve(&rs, a.tol)?;
    let header = range_header(Header::new("scan"), &a.range).field("tol", g12(a.tol)).field("solver", "exact");
    let mut out = open(a.out.as_deref())?;
    match format {
        Format::Csv => {
            header.write(&mut *out)?;
            writeln!(out, "R,E_elec,E_tot,A,p,class")?;
            for r in &res.rows {
                let class = match (&r.failure, r.topology_class) {
                    (Some(_), _) => "FAILED".to_string(),
                    (None, Some(c)) => c.label().to_string(),
                    (None, None) => "UNKNOWN".to_string(),
                };
                row(&mut *out, &[g12(r.r), g12(r.e_elec), g12(r.e_tot), g12(r.a), g12(r.p), class])?;
            }
        }
        Format::Json => {
            let rows: Vec<Value> = res
                .rows
                .iter()
                .map(|r| {
                    json!({
                        "R": r.r, "E_elec": r.e_elec, "E_tot": r.e_tot, "A": r.a, "p": r.p,
                        "class": r.topology_class.map(|c| c.label()), "failure": r.failure,
                    })
                })
                .collect();
            write_json(&mut *out, &json!({ "header": header.to_json(), "monotone": res.is_monotone(), "rows": rows }))?;
        }
    }
    out.flush()?;
    for r in res.failures() {
        eprintln!("R = {}: {}", r.r, r.failure.as_deref().unwrap_or(""));
    }
    Ok(if res.failures().next().is_some() { Status::PartialFailure } else { Status::Ok })
}

/// Symmetric samples k = 0..n-1 of [-w, w]; z_k = -z_{n-1-k} exactly.
fn symmetric_axis(w: f64, n: usize) -> Vec<f64> {
    let m = (n - 1) as f64;
    (0..n).map(|k| w * (2.0 * k as f64 - m) / m).collect()
}

fn companion_path(out: &Path) -> Result<std::path::PathBuf> {
    let axis = out.with_file_name("axis.csv");
    if axis == out {
        return Err(usage("--out must not be named axis.csv (the axial profile is written there)"));
    }
    Ok(axis)
}

pub fn density(a: &DensityArgs, format: Format) -> Result<Status> {
    check_r(a.r)?;
    if a.nx < 2 || a.nz < 3 || a.nz.is_multiple_of(2) {
        return Err(usage("--nx must be >= 2 and --nz odd and >= 3"));
    }
    let hw = a.half_width.unwrap_or(0.5 * a.r + 5.0);
    if !(hw > 0.0) {
        return Err(usage("--half-width must be positive"));
    }
    let spec = source_spec(&a.source)?;
    let src = spec.build(a.r).with_context(|| format!("{} solver at R = {}", a.source.solver.label(), a.r))?;
    let xs: Vec<f64> = (0..a.nx).map(|i| hw * i as f64 / (a.nx - 1) as f64).collect();
    let zs = symmetric_axis(hw, a.nz);
    let mut tail = 0usize;
    let mut grid = Vec::with_capacity(a.nx * a.nz);
    for &z in &zs {
        for &x in &xs {
            let (rho, flag) = src.rho([x, 0.0, z]);
            tail += flag as usize;
            grid.push((x, z, rho));
        }
    }
    let axis: Vec<(f64, f64)> = zs.iter().map(|&z| (z, src.rho_axial(z).0)).collect();
    let header = source_header(Header::new("density").field("R", g12(a.r)), &a.source)
        .field("grid", format!("nx {} nz {} half_width {}", a.nx, a.nz, g12(hw)))
        .field("plane", "y = 0, x >= 0")
        .field("tail_points", tail);
    match format {
        Format::Csv => {
            let mut out = open(Some(&a.out))?;
            header.write(&mut *out)?;
            writeln!(out, "x,z,rho")?;
            for (x, z, rho) in &grid {
                row(&mut *out, &[g12(*x), g12(*z), g12(*rho)])?;
            }
            out.flush()?;
            let mut ax = open(Some(&companion_path(&a.out)?))?;
            header.write(&mut *ax)?;
            writeln!(ax, "z,rho")?;
            for (z, rho) in &axis {
                row(&mut *ax, &[g12(*z), g12(*rho)])?;
            }
            ax.flush()?;
        }
        Format::Json => {
            let mut out = open(Some(&a.out))?;
            let v = json!({
                "header": header.to_json(),
                "grid": grid.iter().map(|(x, z, r)| [*x, *z, *r]).collect::<Vec<_>>(),
                "axis": axis.iter().map(|(z, r)| [*z, *r]).collect::<Vec<_>>(),
            });
            write_json(&mut *out, &v)?;
            out.flush()?;
        }
    }
    Ok(Status::Ok)
}

pub fn topology(a: &TopologyArgs, format: Format) -> Result<Status> {
    let spec = source_spec(&a.source)?;
    let rs = r_values(&a.range)?;
    let scan = scan_points(&spec, &rs)?;
    let header = source_header(range_header(Header::new("topology"), &a.range), &a.source)
        .field("eps_rel", g12(EPS_REL))
        .field("eps_flat", g12(EPS_FLAT))
        .field("fit_window", g12(DEFAULT_WINDOW));
    let fit_cells = |p: &qal_core::density::ScanPoint| match p.fit {
        Some(f) => [f.c1, f.c2, f.slope],
        None => [f64::NAN; 3],
    };
    let mut out = open(a.out.as_deref())?;
    match format {
        Format::Csv => {
            header.write(&mut *out)?;
            writeln!(out, "R,class,kappa0,c1,c2,slope")?;
            for p in &scan.points {
                let [c1, c2, s] = fit_cells(p);
                row(&mut *out, &[g12(p.r), p.class.label().into(), g12(p.kappa0), g12(c1), g12(c2), g12(s)])?;
            }
            for t in &scan.transitions {
                writeln!(out, "#transition,{},{}", g12(t.lo), g12(t.hi))?;
            }
        }
        Format::Json => {
            let pts: Vec<Value> = scan
                .points
                .iter()
                .map(|p| {
                    let [c1, c2, s] = fit_cells(p);
                    json!({ "R": p.r, "class": p.class.label(), "kappa0": p.kappa0, "c1": c1, "c2": c2, "slope": s })
                })
                .collect();
            let tr: Vec<Value> = scan.transitions.iter().map(|t| json!({ "lo": t.lo, "hi": t.hi })).collect();
            write_json(
                &mut *out,
                &json!({ "header": header.to_json(), "points": pts, "transitions": tr, "three_max": scan.three_max }),
            )?;
        }
    }
    out.flush()?;
    Ok(Status::Ok)
}

