//! Run orchestration behind the `ewkg` binary: one function per mode, CSV and
//! report writers.

use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::cauchy::CauchyRun;
use crate::config::{Mode, SimConfig};
use crate::convergence::{observed_orders, oracle_events, oracle_values, relative_event_error};
use crate::crosscheck::{compare_events, grid_events};
use crate::diagnostics::{
    axis_geometry, diagnostics_table, flux_pt, identity_residuals, morawetz_integral, nonconcentration_suite,
    weighted_sups, ConeSpec, DiagnosticsRecord,
};
use crate::error::{Error, Result};
use crate::initial_data::{initial_state, validate_data};
use crate::null::NullRun;
use crate::state::CauchyState;

pub const SNAPSHOT_HEADER: &str = "r,gamma,gamma_t,phi,phi_t,alpha,beta";
pub const NULL_SLICE_HEADER: &str = "u,r,lambda,gamma,phi";
pub const CROSSCHECK_HEADER: &str = "u,v,r,t,null_gamma,null_phi,cauchy_gamma,cauchy_phi";
pub const CONVERGE_HEADER: &str = "quantity,n_cells,value,order";
pub const AXIS_HEADER: &str = "R,sup_abs_r_minus_R";
pub const NONCONCENTRATION_HEADER: &str = "time,mantle_radius,E_cone,potential_cone,E_ext,kin_rate,radial_rate";

/// Event grid used by the cross-scheme comparison.
pub const CROSS_V_FRACS: [f64; 4] = [0.4, 0.55, 0.7, 0.85];
pub const CROSS_R_FRACS: [f64; 5] = [0.02, 0.2, 0.4, 0.6, 0.8];
pub const CROSS_COARSE: usize = 32;

/// Files written by a run; absent entries were not produced by the mode.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunArtifacts {
    pub diagnostics_csv: Option<PathBuf>,
    pub snapshots: Option<PathBuf>,
    pub report: PathBuf,
}

fn num(v: f64) -> String {
    format!("{v:.17e}")
}

fn write_lines(path: &Path, header: &str, rows: impl IntoIterator<Item = String>) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "{header}")?;
    for row in rows {
        writeln!(out, "{row}")?;
    }
    out.flush()?;
    Ok(())
}

fn write_report(dir: &Path, entries: &[(String, String)]) -> Result<PathBuf> {
    let path = dir.join("report.txt");
    let mut text = String::new();
    for (k, v) in entries {
        let _ = writeln!(text, "{k} = {v}");
    }
    fs::write(&path, text)?;
    Ok(path)
}

fn cone_of(config: &SimConfig) -> ConeSpec {
    ConeSpec {
        apex_time: config.apex(),
        cone_fraction: config.cone_fraction,
    }
}

fn write_snapshots(dir: &Path, run: &CauchyRun) -> Result<PathBuf> {
    let snap_dir = dir.join("snapshots");
    fs::create_dir_all(&snap_dir)?;
    for (k, s) in run.snapshots.iter().enumerate() {
        write_lines(&snap_dir.join(format!("snapshot_{k:05}.csv")), SNAPSHOT_HEADER, snapshot_rows(s))?;
    }
    Ok(snap_dir)
}

fn snapshot_rows(s: &CauchyState) -> Vec<String> {
    let g = &s.grid;
    (0..g.n_cells)
        .map(|i| {
            let k = CauchyState::interior_index(i);
            [g.center(i), s.gamma[k], s.gamma_t[k], s.phi[k], s.phi_t[k], s.alpha[k], s.beta[k]]
                .map(num)
                .join(",")
        })
        .collect()
}

fn write_diagnostics(dir: &Path, rows: &[DiagnosticsRecord]) -> Result<PathBuf> {
    let path = dir.join("diagnostics.csv");
    write_lines(&path, DiagnosticsRecord::HEADER, rows.iter().map(|r| r.to_csv_row()))?;
    Ok(path)
}

fn evolve_cauchy(config: &SimConfig) -> Result<CauchyRun> {
    CauchyRun::evolve(config, initial_state(config)?, config.snapshot_every)
}

fn validation_entries(config: &SimConfig, state: &CauchyState) -> Vec<(String, String)> {
    let v = validate_data(state, config);
    vec![
        ("E0".into(), num(v.total_energy)),
        ("energy_below_2pi".into(), v.energy_below_2pi.to_string()),
        ("gamma_bounds".into(), v.gamma_bounds_ok.to_string()),
        ("alpha_axis".into(), num(v.alpha_axis)),
        ("beta_axis".into(), num(v.beta_axis)),
        ("hamiltonian_residual".into(), num(v.max_constraint_residual)),
    ]
}

fn run_cauchy(config: &SimConfig, dir: &Path) -> Result<RunArtifacts> {
    let run = evolve_cauchy(config)?;
    let rows = diagnostics_table(&run, &cone_of(config))?;
    let diagnostics_csv = write_diagnostics(dir, &rows)?;
    let snapshots = write_snapshots(dir, &run)?;
    let (mom, evo) = run.max_residuals();
    let mut report = vec![("mode".to_string(), "cauchy".to_string())];
    report.extend(validation_entries(config, &run.snapshots[0]));
    report.push(("steps_dt".into(), num(run.dt)));
    report.push(("max_res_momentum".into(), num(mom)));
    report.push(("max_res_evolution".into(), num(evo)));
    Ok(RunArtifacts {
        diagnostics_csv: Some(diagnostics_csv),
        snapshots: Some(snapshots),
        report: write_report(dir, &report)?,
    })
}

fn run_null(config: &SimConfig, dir: &Path) -> Result<RunArtifacts> {
    let initial = initial_state(config)?;
    let run = NullRun::evolve(config, &initial)?;
    let norm = run.normalized();
    let slice_dir = dir.join("null_slices");
    fs::create_dir_all(&slice_dir)?;
    for (k, s) in norm.slices.iter().enumerate().step_by(config.snapshot_every) {
        let rows = (0..s.len()).map(|j| [s.u_values[j], s.r[j], s.lambda[j], s.gamma[j], s.phi[j]].map(num).join(","));
        write_lines(&slice_dir.join(format!("slice_{k:05}.csv")), NULL_SLICE_HEADER, rows)?;
    }
    let axis = axis_geometry(&run, 0.1, 1.0);
    write_lines(
        &dir.join("axis.csv"),
        AXIS_HEADER,
        axis.envelope_radius.iter().zip(&axis.envelope_dev).map(|(r, d)| format!("{},{}", num(*r), num(*d))),
    )?;
    let (res_u, res_v) = run.max_residuals();
    let report = vec![
        ("mode".to_string(), "null".to_string()),
        ("slices".into(), run.slices.len().to_string()),
        ("max_res_raychaudhuri_u".into(), num(res_u)),
        ("max_res_raychaudhuri_v".into(), num(res_v)),
        ("axis_slope".into(), num(axis.slope_r)),
        ("axis_max_dev_ru".into(), num(axis.dev_ru.iter().fold(0.0, |a: f64, b| a.max(*b)))),
    ];
    Ok(RunArtifacts {
        diagnostics_csv: None,
        snapshots: Some(slice_dir),
        report: write_report(dir, &report)?,
    })
}

fn run_crosscheck(config: &SimConfig, dir: &Path) -> Result<RunArtifacts> {
    let initial = initial_state(config)?;
    let null = NullRun::evolve(config, &initial)?;
    let cauchy = CauchyRun::evolve(config, initial, 1)?;
    let events = grid_events(&null, &CROSS_V_FRACS, &CROSS_R_FRACS, CROSS_COARSE);
    let cmp = compare_events(&cauchy, &null, &events)?;
    let path = dir.join("crosscheck.csv");
    write_lines(
        &path,
        CROSSCHECK_HEADER,
        cmp.events.iter().map(|e| {
            [e.u, e.v, e.r, e.t, e.null_gamma, e.null_phi, e.cauchy_gamma, e.cauchy_phi].map(num).join(",")
        }),
    )?;
    let report = vec![
        ("mode".to_string(), "crosscheck".to_string()),
        ("events".into(), cmp.events.len().to_string()),
        ("relative_error".into(), num(cmp.relative_error)),
    ];
    Ok(RunArtifacts {
        diagnostics_csv: Some(path),
        snapshots: None,
        report: write_report(dir, &report)?,
    })
}

/// Quantities measured at each resolution of a convergence study.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ResolutionSample {
    pub n_cells: usize,
    pub values: Vec<(&'static str, f64)>,
}

/// Oracle events and their exact values.
type Reference = (Vec<(f64, f64)>, Vec<f64>);

fn measure(config: &SimConfig, exact: Option<&Reference>) -> Result<ResolutionSample> {
    let initial = initial_state(config)?;
    let mut values = Vec::new();
    // with a frozen metric the slice constraints are not imposed, so only the
    // matter identities and the oracle error are meaningful
    if !config.frozen_metric {
        let null = NullRun::evolve(config, &initial)?;
        let (nu, nv) = null.max_residuals();
        values.push(("res_null_u", nu));
        values.push(("res_null_v", nv));
    }
    let run = CauchyRun::evolve(config, initial, 1)?;
    if !config.frozen_metric {
        let (mom, evo) = run.max_residuals();
        values.push(("res_momentum", mom));
        values.push(("res_evolution", evo));
    }
    let mut energy_id = 0.0f64;
    let mut momentum_id = 0.0f64;
    for k in 1..run.snapshots.len() - 1 {
        let (a, b) = identity_residuals(&run, k)?;
        energy_id = energy_id.max(a);
        momentum_id = momentum_id.max(b);
    }
    values.push(("res_energy_identity", energy_id));
    values.push(("res_momentum_identity", momentum_id));
    if let Some((events, exact)) = exact {
        values.push(("oracle_error", relative_event_error(&run, events, exact)));
    }
    Ok(ResolutionSample { n_cells: config.n_cells, values })
}

/// Runs n/4, n/2 and n in parallel and reports the observed order of every
/// residual (and of the error against the flat kernel when it applies).
pub fn convergence_study(config: &SimConfig) -> Result<Vec<ResolutionSample>> {
    if !config.n_cells.is_multiple_of(4) || config.n_cells < 32 {
        return Err(Error::Config("converge needs n_cells divisible by 4 and at least 32".into()));
    }
    let exact = if config.mass_m == 0.0 && config.frozen_metric {
        let events = oracle_events(config);
        let values = oracle_values(config, &events)?;
        Some((events, values))
    } else {
        None
    };
    let configs: Vec<SimConfig> = [4, 2, 1]
        .iter()
        .map(|d| SimConfig { n_cells: config.n_cells / d, ..config.clone() })
        .collect();
    std::thread::scope(|scope| {
        let handles: Vec<_> = configs.iter().map(|c| scope.spawn(|| measure(c, exact.as_ref()))).collect();
        handles.into_iter().map(|h| h.join().expect("resolution worker panicked")).collect()
    })
}

fn run_converge(config: &SimConfig, dir: &Path) -> Result<RunArtifacts> {
    let samples = convergence_study(config)?;
    let mut rows = Vec::new();
    let mut report = vec![("mode".to_string(), "converge".to_string())];
    for (q, (name, _)) in samples[0].values.iter().enumerate() {
        let series: Vec<f64> = samples.iter().map(|s| s.values[q].1).collect();
        let orders = observed_orders(&series);
        for (k, s) in samples.iter().enumerate() {
            let order = if k == 0 { f64::NAN } else { orders[k - 1] };
            rows.push(format!("{name},{},{},{}", s.n_cells, num(series[k]), num(order)));
        }
        report.push((format!("order_{name}"), orders.iter().map(|o| format!("{o:.4}")).collect::<Vec<_>>().join(" ")));
    }
    let path = dir.join("converge.csv");
    write_lines(&path, CONVERGE_HEADER, rows)?;
    Ok(RunArtifacts {
        diagnostics_csv: Some(path),
        snapshots: None,
        report: write_report(dir, &report)?,
    })
}

fn run_diagnose(config: &SimConfig, dir: &Path) -> Result<RunArtifacts> {
    let run = evolve_cauchy(config)?;
    let cone = cone_of(config);
    let rows = diagnostics_table(&run, &cone)?;
    let diagnostics_csv = write_diagnostics(dir, &rows)?;
    let suite = nonconcentration_suite(&run, &cone)?;
    write_lines(
        &dir.join("nonconcentration.csv"),
        NONCONCENTRATION_HEADER,
        suite.iter().map(|n| {
            [n.time, n.mantle_radius, n.e_cone, n.potential_cone, n.e_ext, n.kin_rate, n.radial_rate]
                .map(num)
                .join(",")
        }),
    )?;
    let mut report = vec![("mode".to_string(), "diagnose".to_string())];
    report.extend(validation_entries(config, &run.snapshots[0]));
    let last_before_apex = suite.last().map(|n| n.time).unwrap_or(0.0);
    if last_before_apex > 0.0 {
        let flux = flux_pt(&run, &cone, 0.0, last_before_apex)?;
        report.push(("stokes_defect".into(), num(flux.defect)));
        report.push(("stokes_mantle".into(), num(flux.mantle)));
        report.push(("stokes_residual".into(), num(flux.residual)));
    }
    let sups = weighted_sups(&run, &cone, config.delta)?;
    for (k, v) in [("X", sups.x), ("Y0", sups.y0), ("rU2", sups.ru2), ("X0", sups.x0), ("Y0v", sups.y0v), ("L0", sups.l0)] {
        report.push((format!("sup_{k}"), num(v)));
    }
    report.push(("morawetz".into(), num(morawetz_integral(&run, &cone, config.sigma)?)));
    Ok(RunArtifacts {
        diagnostics_csv: Some(diagnostics_csv),
        snapshots: None,
        report: write_report(dir, &report)?,
    })
}

/// Loads the configuration, runs `mode` and writes its outputs under
/// `output_dir` (or the config's `output_dir`, or the current directory).
pub fn run(mode: Mode, config_path: &Path, output_dir: Option<&Path>) -> Result<RunArtifacts> {
    let mut config = SimConfig::from_file(config_path)?;
    config.mode = mode;
    let dir = output_dir
        .map(Path::to_path_buf)
        .or_else(|| config.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir)?;
    match mode {
        Mode::Cauchy => run_cauchy(&config, &dir),
        Mode::Null => run_null(&config, &dir),
        Mode::Crosscheck => run_crosscheck(&config, &dir),
        Mode::Converge => run_converge(&config, &dir),
        Mode::Diagnose => run_diagnose(&config, &dir),
    }
}
