//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.
//!
//! Small-data fixture: m = 1, phi-only bump of amplitude 0.05 centred at r = 4,
//! r_max = 32, t_final = 8, reference resolution n_cells = 1024.

use std::cell::OnceCell;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use ewkg::cauchy::CauchyRun;
use ewkg::convergence::{fitted_order, observed_orders, oracle_events, oracle_values, relative_event_error};
use ewkg::crosscheck::{compare_events, grid_events};
use ewkg::diagnostics::{
    axis_geometry, energy, flux_pt, flux_squares, identity_residuals, morawetz_integral, nonconcentration_suite,
    weighted_sups, ConeSpec,
};
use ewkg::flat_oracle::weighted_tail_integral;
use ewkg::initial_data::{initial_state, validate_data};
use ewkg::null::NullRun;
use ewkg::{CauchyState, Error, InitialDataFamily, SimConfig};

const SMALL_AMP: f64 = 0.05;
const REFERENCE_N: usize = 1024;

fn small_config(n: usize, amp: f64) -> SimConfig {
    SimConfig {
        n_cells: n,
        data_family: InitialDataFamily::gaussian_phi(amp, 4.0, 1.0),
        ..Default::default()
    }
}

/// Runs shared between criteria, built on first use.
#[derive(Default)]
struct Fixtures {
    cauchy: BTreeMap<(usize, u64), OnceCell<CauchyRun>>,
    null: BTreeMap<(usize, u64), OnceCell<NullRun>>,
}

impl Fixtures {
    fn new() -> Self {
        let mut f = Fixtures::default();
        let keys = [512, 1024, 2048].map(|n| (n, SMALL_AMP.to_bits())).into_iter().chain(
            [0.025, 0.0125, 0.00625].map(|a: f64| (REFERENCE_N, a.to_bits())),
        );
        for k in keys.chain([(256, SMALL_AMP.to_bits())]) {
            f.cauchy.insert(k, OnceCell::new());
            f.null.insert(k, OnceCell::new());
        }
        f
    }

    fn cauchy(&self, n: usize, amp: f64) -> &CauchyRun {
        self.cauchy[&(n, amp.to_bits())].get_or_init(|| {
            let cfg = small_config(n, amp);
            CauchyRun::evolve(&cfg, initial_state(&cfg).unwrap(), 1).unwrap()
        })
    }

    fn null(&self, n: usize, amp: f64) -> &NullRun {
        self.null[&(n, amp.to_bits())].get_or_init(|| {
            let cfg = small_config(n, amp);
            NullRun::evolve(&cfg, &initial_state(&cfg).unwrap()).unwrap()
        })
    }
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |a, b| a.max(b.abs()))
}

fn in_range(x: f64, lo: f64, hi: f64) -> bool {
    x >= lo && x <= hi
}

fn fmt_list(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:.3}")).collect::<Vec<_>>().join(", ")
}

fn vacuum_exactness(_: &Fixtures) -> Outcome {
    let cfg = SimConfig {
        n_cells: REFERENCE_N,
        mass_m: 0.0,
        data_family: InitialDataFamily::zero(),
        ..Default::default()
    };
    let h = cfg.spacing();
    let cauchy_cfg = SimConfig { t_final: 1000.0 * cfg.dt_bound(), ..cfg.clone() };
    let run = CauchyRun::evolve(&cauchy_cfg, initial_state(&cauchy_cfg).unwrap(), 50).unwrap();
    let steps = ((run.last().time / run.dt).round()) as usize;
    let cauchy_max = run.snapshots.iter().map(CauchyState::max_abs).fold(0.0, f64::max);
    let null_cfg = SimConfig { t_final: 1000.0 * h, ..cfg };
    let null = NullRun::evolve(&null_cfg, &initial_state(&null_cfg).unwrap()).unwrap();
    let mut null_max = 0.0f64;
    let mut r_exact = true;
    for s in &null.slices {
        null_max = null_max.max(max_abs(&s.lambda)).max(max_abs(&s.gamma)).max(max_abs(&s.phi));
        for (u, r) in s.u_values.iter().zip(&s.r) {
            r_exact &= *r == 0.5 * (s.v - u);
        }
    }
    let slices = null.slices.len() - 1;
    outcome(
        steps == 1000 && slices == 1000 && cauchy_max <= 1e-12 && null_max <= 1e-12 && r_exact,
        format!("{steps} Cauchy steps max {cauchy_max:.1e}, {slices} null slices max {null_max:.1e}, r = (v - u)/2 exact: {r_exact}"),
    )
}

fn flat_oracle_agreement(_: &Fixtures) -> Outcome {
    let base = SimConfig {
        mass_m: 0.0,
        frozen_metric: true,
        data_family: InitialDataFamily::gaussian_phi(0.1, 4.0, 1.0),
        ..Default::default()
    };
    let events = oracle_events(&base);
    let exact = oracle_values(&base, &events).unwrap();
    let errors: Vec<f64> = [512, 1024, 2048]
        .iter()
        .map(|&n| {
            let cfg = SimConfig { n_cells: n, ..base.clone() };
            let run = CauchyRun::evolve(&cfg, initial_state(&cfg).unwrap(), 1).unwrap();
            relative_event_error(&run, &events, &exact)
        })
        .collect();
    let order = fitted_order(&errors);
    outcome(
        errors[2] <= 1e-3 && in_range(order, 1.9, 2.1),
        format!("{} events, rel errors [{}] (n = 512, 1024, 2048), order {order:.3}", events.len(), fmt_list_e(&errors)),
    )
}

fn constraint_propagation(fx: &Fixtures) -> Outcome {
    let ns = [512, 1024, 2048];
    let mut series: Vec<(&str, Vec<f64>)> = vec![("momentum", vec![]), ("evolution", vec![]), ("null_u", vec![]), ("null_v", vec![])];
    for &n in &ns {
        let (mom, evo) = fx.cauchy(n, SMALL_AMP).max_residuals();
        let (nu, nv) = fx.null(n, SMALL_AMP).max_residuals();
        for (k, v) in [mom, evo, nu, nv].into_iter().enumerate() {
            series[k].1.push(v);
        }
    }
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, vals) in &series {
        let ratios: Vec<f64> = vals.windows(2).map(|w| w[0] / w[1]).collect();
        pass &= ratios.iter().all(|&r| in_range(r, 3.0, 5.0));
        parts.push(format!("{name} ratios [{}]", fmt_list(&ratios)));
    }
    outcome(pass, parts.join("; "))
}

fn energy_monotonicity(fx: &Fixtures) -> Outcome {
    let run = fx.cauchy(REFERENCE_N, SMALL_AMP);
    let cone = ConeSpec { apex_time: 10.0, cone_fraction: 0.5 };
    let e0 = energy(&run.snapshots[0], run.config.mass_m, None);
    let series: Vec<f64> = nonconcentration_suite(run, &cone).unwrap().iter().map(|n| n.e_cone).collect();
    let worst = series.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max);
    outcome(
        worst <= 1e-8 * e0,
        format!("apex 10 after run end 8, {} steps, worst per-step increase {:.2e} E(0)", series.len() - 1, worst / e0),
    )
}

fn discrete_stokes(fx: &Fixtures) -> Outcome {
    let cone = ConeSpec { apex_time: 10.0, cone_fraction: 0.5 };
    let mut rel = Vec::new();
    for n in [512, 1024, 2048] {
        let run = fx.cauchy(n, SMALL_AMP);
        let e0 = energy(&run.snapshots[0], run.config.mass_m, None);
        rel.push(flux_pt(run, &cone, 0.0, 8.0).unwrap().residual.abs() / e0);
    }
    let orders = observed_orders(&rel);
    outcome(
        rel[1] <= 1e-2 && orders.iter().all(|&o| o >= 1.5),
        format!("|residual|/E(0) [{}] (n = 512, 1024, 2048), orders [{}]", fmt_list_e(&rel), fmt_list(&orders)),
    )
}

fn fmt_list_e(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:.2e}")).collect::<Vec<_>>().join(", ")
}

fn cross_scheme(fx: &Fixtures) -> Outcome {
    let ns = [256, 512, 1024, 2048];
    let mut errors = Vec::new();
    let mut diffs = Vec::new();
    let mut count = 0;
    for &n in &ns {
        let null = fx.null(n, SMALL_AMP);
        let events = grid_events(null, &[0.4, 0.55, 0.7, 0.85], &[0.02, 0.2, 0.4, 0.6, 0.8], 32);
        let rep = compare_events(fx.cauchy(n, SMALL_AMP), null, &events).unwrap();
        count = rep.events.len();
        errors.push(rep.relative_error);
        diffs.push(
            rep.events
                .iter()
                .map(|e| (e.null_gamma - e.cauchy_gamma).abs().max((e.null_phi - e.cauchy_phi).abs()))
                .fold(0.0, f64::max),
        );
    }
    let orders = observed_orders(&diffs);
    let at_ref = errors[2];
    outcome(
        count == 20 && at_ref <= 5e-3 && orders.iter().all(|&o| o >= 1.9),
        format!("{count} events, rel errors [{}] (n = 256..2048), orders [{}]", fmt_list_e(&errors), fmt_list(&orders)),
    )
}

fn data_validation(_: &Fixtures) -> Outcome {
    let base = SimConfig::default();
    let report = validate_data(&initial_state(&base).unwrap(), &base);
    let mut amp = base.data_family.amp_phi;
    let mut sweep = Vec::new();
    let first_violation = loop {
        let cfg = SimConfig { data_family: base.data_family.scaled(amp / base.data_family.amp_phi), ..base.clone() };
        match initial_state(&cfg) {
            Ok(s) => {
                let v = validate_data(&s, &cfg);
                sweep.push(format!("{amp:.2}:{:.3}", v.total_energy));
                if !v.energy_below_2pi || !v.gamma_bounds_ok {
                    break Some(format!("amp {amp:.3} (E = {:.3}, gamma bounds {})", v.total_energy, v.gamma_bounds_ok));
                }
            }
            Err(Error::Blowup { r, .. }) => break Some(format!("amp {amp:.3} (constraint blow-up at r = {r:.2})")),
            Err(e) => break Some(format!("amp {amp:.3} ({e})")),
        }
        amp *= 1.25;
        if amp > 1e3 {
            break None;
        }
    };
    outcome(
        report.energy_below_2pi && report.gamma_bounds_ok && first_violation.is_some(),
        format!(
            "default E(0) = {:.4} < 2 pi, gamma bounds {}; sweep amp:E [{}]; first violation {}",
            report.total_energy,
            report.gamma_bounds_ok,
            sweep.join(" "),
            first_violation.unwrap_or_else(|| "none".into())
        ),
    )
}

fn identity_residual_checks(fx: &Fixtures) -> Outcome {
    let vac_cfg = SimConfig { n_cells: REFERENCE_N, data_family: InitialDataFamily::zero(), t_final: 1.0, ..Default::default() };
    let vac = CauchyRun::evolve(&vac_cfg, initial_state(&vac_cfg).unwrap(), 1).unwrap();
    let vac_res = (1..vac.snapshots.len() - 1)
        .map(|k| {
            let (a, b) = identity_residuals(&vac, k).unwrap();
            a.max(b)
        })
        .fold(0.0, f64::max);
    let mut energy_id = Vec::new();
    let mut momentum_id = Vec::new();
    for n in [512, 1024, 2048] {
        let run = fx.cauchy(n, SMALL_AMP);
        let (mut a, mut b) = (0.0f64, 0.0f64);
        for k in 1..run.snapshots.len() - 1 {
            let (x, y) = identity_residuals(run, k).unwrap();
            a = a.max(x);
            b = b.max(y);
        }
        energy_id.push(a);
        momentum_id.push(b);
    }
    let energy_orders = observed_orders(&energy_id);
    let momentum_orders = observed_orders(&momentum_id);
    let second = |o: &[f64]| o.iter().all(|&x| in_range(x, 1.8, 2.2));
    // G^2 + F^2 = 2 r e and G^2 - F^2 = 2 r m on every slice, e and m recomputed here
    let run = fx.cauchy(REFERENCE_N, SMALL_AMP);
    let m = run.config.mass_m;
    let mut algebra = 0.0f64;
    for s in &run.snapshots {
        let sq = flux_squares(s, m);
        let g = &s.grid;
        for i in 0..g.n_cells {
            let k = CauchyState::interior_index(i);
            let r = g.center(i);
            let (gr, pr) = (g.d1(&s.gamma, i), g.d1(&s.phi, i));
            let (ea, eb) = ((-2.0 * s.alpha[k]).exp(), (-2.0 * s.beta[k]).exp());
            let e = ea * (s.gamma_t[k].powi(2) + 0.5 * s.phi_t[k].powi(2))
                + eb * (gr * gr + 0.5 * pr * pr)
                + 0.5 * m * m * (-2.0 * s.gamma[k]).exp() * s.phi[k].powi(2);
            let mom = (-s.alpha[k] - s.beta[k]).exp() * (2.0 * s.gamma_t[k] * gr + s.phi_t[k] * pr);
            let scale = (2.0 * r * e).abs().max(f64::MIN_POSITIVE);
            let w = s.beta[k].exp();
            algebra = algebra
                .max((sq.g2[i] + sq.f2[i] - 2.0 * r * e).abs() / scale)
                .max((sq.g2[i] - sq.f2[i] - 2.0 * r * mom).abs() / scale)
                .max((sq.g2_hat[i] + sq.f2_hat[i] - 2.0 * w * r * e).abs() / (w * scale))
                .max((sq.g2_hat[i] - sq.f2_hat[i] - 2.0 * w * r * mom).abs() / (w * scale));
        }
    }
    outcome(
        vac_res <= 1e-12 && second(&energy_orders) && second(&momentum_orders) && algebra <= 1e-13,
        format!(
            "vacuum {vac_res:.1e}; orders energy identity [{}], momentum identity [{}]; algebraic rel {algebra:.1e}",
            fmt_list(&energy_orders),
            fmt_list(&momentum_orders)
        ),
    )
}

fn axis_geometry_check(fx: &Fixtures) -> Outcome {
    let full = axis_geometry(fx.null(REFERENCE_N, SMALL_AMP), 0.1, 1.0);
    let half = axis_geometry(fx.null(REFERENCE_N, 0.5 * SMALL_AMP), 0.1, 1.0);
    let ratio = max_abs(&full.dev_ru) / max_abs(&half.dev_ru);
    outcome(
        full.slope_r >= 1.9 && in_range(ratio, 3.0, 5.0),
        format!("slope of sup |r - R| on R in [0.1, 1]: {:.3}; |r_u + 1/2| ratio under amp halving {ratio:.3}", full.slope_r),
    )
}

fn boundedness_sups(fx: &Fixtures) -> Outcome {
    let cone = ConeSpec { apex_time: 8.0, cone_fraction: 0.5 };
    let delta = SimConfig::default().delta;
    let a = weighted_sups(fx.cauchy(REFERENCE_N, SMALL_AMP), &cone, delta).unwrap();
    let b = weighted_sups(fx.cauchy(2 * REFERENCE_N, SMALL_AMP), &cone, delta).unwrap();
    let dru2 = (a.ru2 - b.ru2).abs() / b.ru2;
    let dx = (a.x - b.x).abs() / b.x;
    outcome(
        dru2 <= 0.05 && dx <= 0.05,
        format!("rU2 {:.5e} -> {:.5e} ({:.2}%), X {:.5e} -> {:.5e} ({:.2}%)", a.ru2, b.ru2, 100.0 * dru2, a.x, b.x, 100.0 * dx),
    )
}

fn morawetz(fx: &Fixtures) -> Outcome {
    let cone = ConeSpec { apex_time: 8.0, cone_fraction: 0.5 };
    let sigma = SimConfig::default().sigma;
    let mut ratios = Vec::new();
    for amp in [SMALL_AMP, 0.025, 0.0125, 0.00625] {
        let run = fx.cauchy(REFERENCE_N, amp);
        let e0 = energy(&run.snapshots[0], run.config.mass_m, None);
        ratios.push(morawetz_integral(run, &cone, sigma).unwrap() / e0);
    }
    let finite = ratios.iter().all(|r| r.is_finite() && *r > 0.0);
    let spread = ratios.iter().cloned().fold(0.0, f64::max) / ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    outcome(finite && spread < 2.0, format!("value/E(0) [{}], max/min {spread:.3}", fmt_list_e(&ratios)))
}

fn tail_integral(_: &Fixtures) -> Outcome {
    let mut worst = 0.0f64;
    for mu in [0.1, 1.0, 10.0] {
        let (v, _) = weighted_tail_integral(mu, 1.0, 0.5).unwrap();
        worst = worst.max((v - PI / mu.sqrt()).abs());
    }
    let ratios: Vec<f64> = (0..=40)
        .map(|k| weighted_tail_integral(10f64.powf(-2.0 + 0.1 * k as f64), 1.0, 0.5).unwrap().1)
        .collect();
    let spread = ratios.iter().cloned().fold(0.0, f64::max) / ratios.iter().cloned().fold(f64::INFINITY, f64::min) - 1.0;
    let rejects = weighted_tail_integral(1.0, 1.0, 1.0).is_err();
    outcome(
        worst <= 1e-6 && spread <= 0.1 && rejects,
        format!("max |value - pi mu^-1/2| {worst:.1e}; bound_ratio spread over mu in [1e-2, 1e2] {spread:.1e}; b = 1 rejected {rejects}"),
    )
}

/// First local maximum of |phi| on the axis above 10% of its run maximum.
fn focusing_time(run: &CauchyRun) -> f64 {
    let series: Vec<f64> = run.snapshots.iter().map(|s| s.phi_axis().abs()).collect();
    let top = series.iter().cloned().fold(0.0, f64::max);
    (1..series.len() - 1)
        .find(|&k| series[k] >= 0.1 * top && series[k] >= series[k - 1] && series[k] >= series[k + 1])
        .map(|k| run.snapshots[k].time)
        .unwrap_or(run.last().time)
}

fn nonconcentration(fx: &Fixtures) -> Outcome {
    // data far outside the cone
    let cfg = SimConfig { data_family: InitialDataFamily::gaussian_phi(SMALL_AMP, 20.0, 1.0), t_final: 4.0, ..Default::default() };
    let far = CauchyRun::evolve(&cfg, initial_state(&cfg).unwrap(), 1).unwrap();
    let disjoint = nonconcentration_suite(&far, &ConeSpec { apex_time: 4.0, cone_fraction: 0.5 }).unwrap();
    let worst_disjoint = disjoint
        .iter()
        .map(|n| n.potential_cone.abs().max(n.e_ext.abs()).max(n.kin_rate.abs()).max(n.radial_rate.abs()))
        .fold(0.0, f64::max);
    let run = fx.cauchy(REFERENCE_N, SMALL_AMP);
    let apex = focusing_time(run);
    let suite = nonconcentration_suite(run, &ConeSpec { apex_time: apex, cone_fraction: 0.5 }).unwrap();
    let mut pass = worst_disjoint <= 1e-10;
    let mut parts = vec![format!("disjoint max {worst_disjoint:.1e}"), format!("apex {apex:.3}")];
    let pick: [(&str, fn(&ewkg::diagnostics::NonConcentration) -> f64); 4] = [
        ("potential", |n| n.potential_cone),
        ("E_ext", |n| n.e_ext),
        ("kin_rate", |n| n.kin_rate),
        ("radial_rate", |n| n.radial_rate),
    ];
    for (name, f) in pick {
        let q: Vec<f64> = suite.iter().map(f).collect();
        // the kinetic and radial rates vanish at the last slice by construction
        let worst = q.windows(2).filter(|w| w[0] > 0.0).map(|w| w[1] / w[0]).fold(0.0, f64::max);
        pass &= worst <= 1.05;
        parts.push(format!("{name} worst step ratio {worst:.3}"));
    }
    outcome(pass, parts.join(", "))
}

fn main() {
    let fx = Fixtures::new();
    let criteria: [(&str, fn(&Fixtures) -> Outcome); 13] = [
        ("vacuum exactness", vacuum_exactness),
        ("flat oracle agreement", flat_oracle_agreement),
        ("constraint propagation", constraint_propagation),
        ("cone energy monotonicity", energy_monotonicity),
        ("discrete Stokes balance", discrete_stokes),
        ("cross-scheme agreement", cross_scheme),
        ("data validation", data_validation),
        ("identity residuals", identity_residual_checks),
        ("axis geometry", axis_geometry_check),
        ("boundedness sups", boundedness_sups),
        ("Morawetz integral", morawetz),
        ("weighted tail integral", tail_integral),
        ("non-concentration", nonconcentration),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(|| check(&fx))).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            outcome(false, format!("panicked: {}", msg.unwrap_or_default()))
        });
        if !result.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {} {name}: {} [{:.1}s]",
            k + 1,
            if result.pass { "PASS" } else { "FAIL" },
            result.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
