use serde_json::{json, Value};

use ks_core::experiments::{
    energy_convergence, energy_residuals, illposed_scaling_scan, make_data, mu_limit_experiment, smoothing_refinement,
    smoothing_scan, AmplitudeRule, BoxMember, BoxPairSpec, DataCatalogEntry, ScanReport, RANDOM_SOBOLEV_EPS,
};
use ks_core::lemmas::{
    calculus_bound_check, find_m, gaussian_moment_check, weighted_sup_check, linear_xnorm_measure, verify_threshold,
};
use ks_core::solver::{global_solve, local_t_estimate, picard_solve, solve};
use ks_core::{Grid, Scheme, SobolevIndex, SolverConfig, SpectralField, SymbolParams};

use crate::args::*;
use crate::error::CliError;
use crate::output::{num, write_manifest, ManifestInfo, OutputDir, Stages};

/// Tolerance of the Gronwall envelope check.
const GRONWALL_SLACK: f64 = 1e-6;
const MOMENT_TOL: f64 = 1e-8;

fn grid(c: &CommonArgs) -> Result<Grid, CliError> {
    Ok(Grid::new(c.half_length, c.n)?)
}

fn params(mu: f64) -> Result<SymbolParams, CliError> {
    Ok(SymbolParams::new(mu)?)
}

fn catalog_entry(c: &CommonArgs) -> DataCatalogEntry {
    let center = c.center.unwrap_or(c.half_length);
    match c.ic {
        InitialData::Zero => DataCatalogEntry::Zero,
        InitialData::Gaussian => DataCatalogEntry::Gaussian {
            amplitude: c.amplitude,
            center,
            width: c.width,
        },
        InitialData::Sech => DataCatalogEntry::Sech {
            amplitude: c.amplitude,
            center,
            width: c.width,
        },
        InitialData::RandomSobolev => DataCatalogEntry::RandomSobolev {
            amplitude: c.amplitude,
            s: c.s,
            eps: RANDOM_SOBOLEV_EPS,
            seed: c.seed,
        },
        InitialData::BoxPair => DataCatalogEntry::Zero,
    }
}

/// Initial data on the grid. Box pairs enter the real-field solver as the
/// sum of the mirror-symmetrized `φ` and `ψ` boxes.
fn initial_data(c: &CommonArgs, grid: &Grid) -> Result<SpectralField, CliError> {
    if c.ic == InitialData::BoxPair {
        let spec = BoxPairSpec::new(c.box_n, c.r, c.s, AmplitudeRule::Paper)?;
        let member = |member| {
            make_data(
                &DataCatalogEntry::BoxPair {
                    spec,
                    member,
                    symmetrized: true,
                },
                grid,
            )
        };
        return Ok(&member(BoxMember::Phi)? + &member(BoxMember::Psi)?);
    }
    Ok(make_data(&catalog_entry(c), grid)?)
}

fn solver_config(c: &CommonArgs, t_final: f64) -> Result<SolverConfig, CliError> {
    Ok(SolverConfig {
        t_final,
        nt: c.nt,
        s: SobolevIndex(c.s),
        params: params(c.mu)?,
        scheme: c.scheme.into(),
        tol: c.tol,
        max_iter: c.max_iter,
        contraction_constant: c.contraction_constant,
        linear_only: false,
    })
}

fn grid_json(grid: &Grid) -> Value {
    json!({
        "L": grid.half_length(),
        "n": grid.len(),
        "dx": grid.dx(),
        "dk": grid.dk(),
        "dealiased_kmax": grid.dealiased_kmax(),
    })
}

fn time_json(t_final: f64, nt: usize) -> Value {
    json!({ "T": t_final, "nt": nt, "dt": t_final / (nt.max(2) - 1) as f64 })
}

fn finish(
    out: &mut OutputDir,
    command: &str,
    config: &impl serde::Serialize,
    grid: Value,
    time: Value,
    seed: u64,
    stages: &Stages,
) -> Result<(), CliError> {
    let info = ManifestInfo {
        command,
        config: serde_json::to_value(config).expect("arguments serialize"),
        grid,
        time,
        seed,
    };
    write_manifest(out, info, stages)
}

fn fit_maps(report: &ScanReport) -> (Value, Value) {
    let slope = report.fits.iter().map(|f| (f.series.clone(), json!(f.slope))).collect();
    let residual = report.fits.iter().map(|f| (f.series.clone(), json!(f.residual))).collect();
    (Value::Object(slope), Value::Object(residual))
}

fn report_json(inputs: Value, report: &ScanReport) -> Value {
    let mut measured = serde_json::Map::new();
    measured.insert(report.abscissa.clone(), json!(report.abscissae));
    for s in &report.series {
        measured.insert(s.name.clone(), json!(s.values));
    }
    let (slope, residual) = fit_maps(report);
    json!({
        "inputs": inputs,
        "measured": measured,
        "bound": report.checks.iter().map(|c| (c.name.clone(), json!(c.bound))).collect::<serde_json::Map<_, _>>(),
        "slope": slope,
        "residual": residual,
        "checks": report.checks,
        "pass": report.all_pass(),
    })
}

pub fn simulate(args: &SimulateArgs) -> Result<bool, CliError> {
    let c = &args.common;
    let t_final = c.t_final.unwrap_or(1.0);
    let grid = grid(c)?;
    let mut stages = Stages::default();
    let phi = stages.time("initial_data", || initial_data(c, &grid))?;
    let cfg = solver_config(c, t_final)?;
    let run = stages.time("solve", || global_solve(&phi, t_final, &cfg))?;

    let s = c.s;
    let rows: Vec<Vec<String>> = run
        .trajectory
        .times()
        .iter()
        .zip(run.trajectory.states())
        .zip(&run.gronwall)
        .map(|((&t, u), g)| {
            let dx = u.derivative(1).l2_norm();
            let weight = if t == 0.0 { if s < 1.0 { 0.0 } else { 1.0 } } else { t.powf(0.5 * (1.0 - s)) };
            vec![
                num(t),
                num(u.l2_norm()),
                num(u.sobolev_norm(s)),
                num(u.sobolev_norm(1.0)),
                num(dx),
                num(weight * dx),
                num(g.envelope),
            ]
        })
        .collect();
    let final_state = run.trajectory.final_state();
    let spectrum: Vec<Vec<String>> = (0..grid.len())
        .map(|i| {
            let c = final_state.coeffs()[i];
            vec![grid.mode(i).to_string(), num(grid.wavenumber(i)), num(c.re), num(c.im)]
        })
        .collect();
    let worst = run.worst_gronwall_ratio();
    let pass = worst <= 1.0 + GRONWALL_SLACK;

    let mut out = OutputDir::create(&c.out)?;
    out.write_csv(
        "norms.csv",
        &["t", "l2", "hs", "h1", "dx_l2", "weighted_dx", "gronwall_envelope"],
        &rows,
    )?;
    out.write_csv("spectrum.csv", &["mode", "k", "re", "im"], &spectrum)?;
    out.write_json(
        "simulate.json",
        &json!({
            "inputs": args,
            "measured": {
                "final_time": run.trajectory.final_time(),
                "nodes": run.trajectory.len(),
                "windows": run.windows,
                "x_norm": run.trajectory.x_norm().x_norm,
                "worst_gronwall_ratio": worst,
            },
            "bound": { "worst_gronwall_ratio": 1.0 + GRONWALL_SLACK },
            "pass": pass,
        }),
    )?;
    finish(&mut out, "simulate", args, grid_json(&grid), time_json(t_final, c.nt), c.seed, &stages)?;
    Ok(pass)
}

pub fn contraction(args: &ContractionArgs) -> Result<bool, CliError> {
    let c = &args.common;
    let grid = grid(c)?;
    let mut stages = Stages::default();
    let phi = stages.time("initial_data", || initial_data(c, &grid))?;
    let t_final = match c.t_final {
        Some(t) => t,
        None => local_t_estimate(phi.sobolev_norm(c.s), c.s, c.contraction_constant)?,
    };
    let cfg = SolverConfig {
        scheme: Scheme::Picard,
        ..solver_config(c, t_final)?
    };
    let outcome = stages.time("picard", || picard_solve(&phi, &cfg))?;
    let rows: Vec<Vec<String>> = outcome
        .distances
        .iter()
        .enumerate()
        .map(|(i, d)| {
            let ratio = if i == 0 { String::new() } else { num(outcome.ratios[i - 1]) };
            vec![(i + 1).to_string(), num(*d), ratio]
        })
        .collect();
    let max_ratio = outcome.ratios.iter().copied().fold(0.0, f64::max);
    let pass = max_ratio < 1.0;
    let mut out = OutputDir::create(&c.out)?;
    out.write_csv("contraction.csv", &["iteration", "distance", "ratio"], &rows)?;
    out.write_json(
        "contraction.json",
        &json!({
            "inputs": args,
            "measured": {
                "T": t_final,
                "iterations": outcome.iterations,
                "distances": outcome.distances,
                "max_ratio": max_ratio,
            },
            "bound": { "max_ratio": 1.0 },
            "pass": pass,
        }),
    )?;
    finish(&mut out, "contraction", args, grid_json(&grid), time_json(t_final, c.nt), c.seed, &stages)?;
    Ok(pass)
}

pub fn verify_lemmas(args: &LemmaArgs) -> Result<bool, CliError> {
    let c = &args.common;
    let t_max = c.t_final.unwrap_or(1.0);
    let p = params(c.mu)?;
    let mut stages = Stages::default();
    let mut checks = Vec::new();

    stages.time("weighted_sup", || -> Result<(), CliError> {
        for &lambda in &args.lambdas {
            for &t in &args.times {
                let r = weighted_sup_check(lambda, t, t_max, p)?;
                checks.push(json!({
                    "name": "weighted_sup",
                    "inputs": { "lambda": lambda, "t": t, "T": t_max, "mu": c.mu },
                    "measured": r.measured_sup,
                    "argmax": r.argmax,
                    "bound": r.bound,
                    "equality": r.equality,
                    "pass": r.pass,
                }));
            }
        }
        Ok(())
    })?;
    stages.time("gaussian_moment", || -> Result<(), CliError> {
        for &nu in &args.nus {
            for t in [0.1, 1.0, 10.0] {
                let r = gaussian_moment_check(nu, t)?;
                checks.push(json!({
                    "name": "gaussian_moment",
                    "inputs": { "nu": nu, "t": t },
                    "measured": r.quadrature,
                    "bound": r.predicted,
                    "relative_error": r.relative_error,
                    "pass": r.relative_error <= MOMENT_TOL,
                }));
            }
        }
        Ok(())
    })?;
    stages.time("threshold", || {
        let m = find_m(p);
        let r = verify_threshold(p, m, 200);
        checks.push(json!({
            "name": "threshold_m",
            "inputs": { "mu": c.mu, "samples": r.samples },
            "measured": m,
            "bound": null,
            "holds_above": r.holds_above,
            "fails_below": r.fails_below,
            "pass": r.holds_above && r.fails_below,
        }));
    });
    stages.time("calculus", || -> Result<(), CliError> {
        for (alpha, beta) in [(1.0, -1.0), (2.0, -4.0), (0.5, -3.0), (1e-6, -1.0)] {
            let r = calculus_bound_check(alpha, beta)?;
            checks.push(json!({
                "name": "calculus_bound",
                "inputs": { "alpha": alpha, "beta": beta },
                "measured": r.measured_max,
                "argmax": r.argmax,
                "bound": r.bound,
                "pass": r.pass,
            }));
        }
        Ok(())
    })?;
    let grid = grid(c)?;
    let t_linear = t_max.min(1.0);
    stages.time("linear_x_norm", || -> Result<(), CliError> {
        let phi = initial_data(c, &grid)?;
        let ratio = linear_xnorm_measure(&phi, c.s, t_linear, p, c.nt)?;
        checks.push(json!({
            "name": "linear_x_norm",
            "inputs": { "ic": c.ic, "s": c.s, "T": t_linear, "mu": c.mu, "nt": c.nt },
            "measured": ratio,
            "bound": null,
            "pass": ratio.is_finite(),
        }));
        Ok(())
    })?;

    let pass = checks.iter().all(|v| v["pass"] == json!(true));
    let mut out = OutputDir::create(&c.out)?;
    out.write_json("lemmas.json", &json!({ "inputs": args, "checks": checks, "pass": pass }))?;
    finish(&mut out, "verify-lemmas", args, grid_json(&grid), time_json(t_linear, c.nt), c.seed, &stages)?;
    Ok(pass)
}

pub fn illposed(args: &IllposedArgs) -> Result<bool, CliError> {
    let c = &args.common;
    let s_list = args.s_list.clone().unwrap_or_else(|| vec![c.s]);
    let n_max = args.n_list.iter().copied().fold(8.0, f64::max);
    let template = BoxPairSpec::new(n_max.max(4.0 * c.r + 1.0), c.r, s_list[0], AmplitudeRule::Paper)?;
    let p = params(c.mu)?;
    let mut stages = Stages::default();
    let scan = stages.time("scan", || {
        illposed_scaling_scan(&template, &args.n_list, args.t_probe, &s_list, p, args.quad_points)
    })?;
    let keep = |rule: AmplitudeRule| args.amplitude_rule.is_none_or(|r| AmplitudeRule::from(r) == rule);
    let rows: Vec<Vec<String>> = scan
        .points
        .iter()
        .filter(|p| keep(p.amplitude_rule))
        .map(|p| {
            vec![
                num(p.s),
                num(p.n_offset),
                num(p.r),
                num(p.t),
                p.amplitude_rule.to_string(),
                num(p.norm_f_hs),
                num(p.norm_phi_hs),
                num(p.norm_psi_hs),
                num(p.ratio),
            ]
        })
        .collect();
    let groups: Vec<Value> = scan
        .groups
        .iter()
        .filter(|g| keep(g.amplitude_rule))
        .map(|g| {
            let mut v = report_json(json!({ "s": g.s, "amplitude_rule": g.amplitude_rule }), &g.report);
            v["inputs"]["t"] = json!(args.t_probe);
            v
        })
        .collect();
    let pass = groups.iter().all(|g| g["pass"] == json!(true));
    let mut out = OutputDir::create(&c.out)?;
    out.write_csv(
        "illposed.csv",
        &["s", "N", "r", "t", "amplitude_rule", "norm_f_hs", "norm_phi_hs", "norm_psi_hs", "ratio"],
        &rows,
    )?;
    out.write_json("illposed.json", &json!({ "inputs": args, "groups": groups, "pass": pass }))?;
    finish(&mut out, "illposed", args, Value::Null, json!({ "t": args.t_probe }), c.seed, &stages)?;
    Ok(pass)
}

pub fn mu_limit(args: &MuLimitArgs) -> Result<bool, CliError> {
    let c = &args.common;
    let t_final = c.t_final.unwrap_or(0.5);
    let grid = grid(c)?;
    let mut stages = Stages::default();
    let phi = stages.time("initial_data", || initial_data(c, &grid))?;
    let cfg = solver_config(c, t_final)?;
    let report = stages.time("scan", || mu_limit_experiment(&phi, &args.mu_list, &cfg))?;
    let rows: Vec<Vec<String>> = report
        .abscissae
        .iter()
        .zip(report.series("sup_diff_hs").expect("series"))
        .map(|(mu, d)| vec![num(*mu), num(*d)])
        .collect();
    let mut out = OutputDir::create(&c.out)?;
    out.write_csv("mulimit.csv", &["mu", "sup_diff_hs"], &rows)?;
    out.write_json("mulimit.json", &report_json(serde_json::to_value(args).unwrap(), &report))?;
    finish(&mut out, "mu-limit", args, grid_json(&grid), time_json(t_final, c.nt), c.seed, &stages)?;
    Ok(report.all_pass())
}

pub fn smoothing(args: &SmoothingArgs) -> Result<bool, CliError> {
    let c = &args.common;
    let t_final = c.t_final.unwrap_or(0.5);
    let grid = grid(c)?;
    let mut stages = Stages::default();
    let phi = stages.time("initial_data", || initial_data(c, &grid))?;
    let cfg = solver_config(c, t_final)?;
    let scan = stages.time("profile", || smoothing_scan(&phi, args.lambda, &cfg))?;
    let refine = [c.nt, 2 * (c.nt - 1) + 1, 4 * (c.nt - 1) + 1];
    let stability = stages.time("refinement", || smoothing_refinement(&phi, args.lambda, &cfg, &refine))?;
    let rows: Vec<Vec<String>> = scan
        .abscissae
        .iter()
        .zip(scan.series("hs_plus_lambda").expect("series"))
        .zip(scan.series("weighted").expect("series"))
        .map(|((t, h), w)| vec![num(*t), num(*h), num(*w)])
        .collect();
    let pass = scan.all_pass() && stability.all_pass();
    let mut out = OutputDir::create(&c.out)?;
    out.write_csv("smoothing.csv", &["t", "hs_plus_lambda", "weighted"], &rows)?;
    let mut summary = report_json(serde_json::to_value(args).unwrap(), &stability);
    summary["profile_checks"] = json!(scan.checks);
    summary["pass"] = json!(pass);
    out.write_json("smoothing.json", &summary)?;
    finish(&mut out, "smoothing", args, grid_json(&grid), time_json(t_final, c.nt), c.seed, &stages)?;
    Ok(pass)
}

pub fn energy(args: &EnergyArgs) -> Result<bool, CliError> {
    let c = &args.common;
    let t_final = c.t_final.unwrap_or(0.5);
    let grid = grid(c)?;
    let mut stages = Stages::default();
    let phi = stages.time("initial_data", || initial_data(c, &grid))?;
    let cfg = solver_config(c, t_final)?;
    let traj = stages.time("solve", || solve(&phi, &cfg))?;
    let residuals = energy_residuals(&traj, cfg.params);
    let res_w = residuals.series("residual_w").expect("series");
    let res_u = residuals.series("residual_u").expect("series");
    let rows: Vec<Vec<String>> = residuals
        .abscissae
        .iter()
        .zip(res_w)
        .zip(res_u)
        .map(|((t, w), u)| vec![num(*t), num(*w), num(*u)])
        .collect();
    let identically_zero = res_w.iter().chain(res_u).all(|v| *v == 0.0);
    let mut summary = if identically_zero {
        json!({
            "inputs": args,
            "measured": { "max_residual_w": 0.0, "max_residual_u": 0.0 },
            "bound": null,
            "slope": null,
            "residual": null,
            "checks": residuals.checks,
            "pass": residuals.all_pass(),
        })
    } else {
        let study = stages.time("convergence", || energy_convergence(&phi, &cfg, args.levels))?;
        let mut v = report_json(serde_json::to_value(args).unwrap(), &study);
        v["pass"] = json!(study.all_pass() && residuals.all_pass());
        v
    };
    summary["node_checks"] = json!(residuals.checks);
    let pass = summary["pass"] == json!(true);
    let mut out = OutputDir::create(&c.out)?;
    out.write_csv("energy.csv", &["t", "residual_w", "residual_u"], &rows)?;
    out.write_json("energy.json", &summary)?;
    finish(&mut out, "energy", args, grid_json(&grid), time_json(t_final, c.nt), c.seed, &stages)?;
    Ok(pass)
}
