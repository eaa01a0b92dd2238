//! One diagnostics row per stored snapshot.

use super::cone::{mantle_integrand, IngoingRay};
use super::{energy, identity_residuals, morawetz_series, nonconcentration_suite, weighted_sups_series};
use super::{ConeSpec, DiagnosticsRecord};
use crate::cauchy::{residual_evolution, residual_momentum, CauchyRun};
use crate::error::{Error, Result};

/// Cone quantities are zero from the apex on; residual columns that need
/// neighbouring snapshots are NaN on the first and last rows. `flux_PT` and
/// `morawetz_partial` accumulate from t = 0, the sups are running maxima.
pub fn diagnostics_table(run: &CauchyRun, cone: &ConeSpec) -> Result<Vec<DiagnosticsRecord>> {
    let cfg = &run.config;
    let ray = IngoingRay::trace(run, cone.apex_time, 0.0)?;
    let suite = nonconcentration_suite(run, cone)?;
    let sups = weighted_sups_series(run, cone, cfg.delta)?;
    let morawetz = morawetz_series(run, cone, cfg.sigma)?;
    let dt = run.snapshot_dt();
    let or_nan = |r: Result<f64>| match r {
        Ok(v) => Ok(v),
        Err(Error::Index { .. }) => Ok(f64::NAN),
        Err(e) => Err(e),
    };
    let mut rows = Vec::with_capacity(run.snapshots.len());
    let (mut flux, mut x_sup, mut ru2_sup) = (0.0, 0.0f64, 0.0f64);
    let mut last_mantle = None;
    for (k, s) in run.snapshots.iter().enumerate() {
        let mut row = DiagnosticsRecord {
            time: s.time,
            e_total: energy(s, cfg.mass_m, None),
            ..Default::default()
        };
        if let Some(nc) = suite.get(k) {
            let here = mantle_integrand(run, k, ray.radius_at(s.time));
            if let Some(before) = last_mantle {
                flux += 0.5 * dt * (before + here);
            }
            last_mantle = Some(here);
            row.e_cone = nc.e_cone;
            row.potential_cone = nc.potential_cone;
            row.e_ext = nc.e_ext;
            row.kin_rate = nc.kin_rate;
            row.radial_rate = nc.radial_rate;
        }
        row.flux_pt = flux;
        x_sup = x_sup.max(sups[k].x);
        ru2_sup = ru2_sup.max(sups[k].ru2);
        row.x_sup = x_sup;
        row.ru2_sup = ru2_sup;
        row.morawetz_partial = morawetz.get(k).or(morawetz.last()).copied().unwrap_or(0.0);
        row.res_momentum = or_nan(residual_momentum(run, k))?;
        row.res_evolution = or_nan(residual_evolution(run, k))?;
        let (energy_id, momentum_id) = match identity_residuals(run, k) {
            Ok(pair) => pair,
            Err(Error::Index { .. }) => (f64::NAN, f64::NAN),
            Err(e) => return Err(e),
        };
        row.res_energy_identity = energy_id;
        row.res_momentum_identity = momentum_id;
        rows.push(row);
    }
    Ok(rows)
}
