//! Backward light cones with apex on the axis: mantle location, cone energy,
//! mantle flux and the non-concentration integrals.

use std::f64::consts::PI;

use super::energy_pieces;
use crate::cauchy::CauchyRun;
use crate::error::{Error, Result};
use crate::grid::GHOST;

/// Backward cone J^-(O) with O = (apex_time, 0). The inner radius of the annulus
/// used for the exterior energy is `cone_fraction` times the mantle radius.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConeSpec {
    pub apex_time: f64,
    pub cone_fraction: f64,
}

/// Ingoing null ray through the apex, tabulated backward in time with RK4 on
/// dr/dt = -e^{alpha - beta}. Past the end of the run the last metric is used.
#[derive(Clone, Debug)]
pub struct IngoingRay {
    apex: f64,
    step: f64,
    radius: Vec<f64>,
    speed: Vec<f64>,
}

impl IngoingRay {
    /// Traces from (apex, 0) back to t = `t_stop`.
    pub fn trace(run: &CauchyRun, apex: f64, t_stop: f64) -> Result<IngoingRay> {
        let r_max = run.grid().r_max();
        let span = (apex - t_stop).max(0.0);
        let count = (span / run.dt).ceil().max(1.0) as usize;
        let step = span / count as f64;
        let speed_at = |t: f64, r: f64| run.light_speed(t, r);
        let mut radius = vec![0.0; count + 1];
        let mut speed = vec![speed_at(apex, 0.0); count + 1];
        for k in 0..count {
            let t = apex - k as f64 * step;
            let r = radius[k];
            let k1 = speed[k];
            let k2 = speed_at(t - 0.5 * step, r + 0.5 * step * k1);
            let k3 = speed_at(t - 0.5 * step, r + 0.5 * step * k2);
            let k4 = speed_at(t - step, r + step * k3);
            let next = r + step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            if !(next < r_max - 2.0 * run.grid().spacing) {
                return Err(Error::ConeOutOfRange { t: t - step, r: next, r_max });
            }
            radius[k + 1] = next;
            speed[k + 1] = speed_at(t - step, next);
        }
        Ok(IngoingRay {
            apex,
            step,
            radius,
            speed,
        })
    }

    /// Mantle radius at time t (cubic Hermite between tabulated points).
    pub fn radius_at(&self, t: f64) -> f64 {
        if self.step == 0.0 || t >= self.apex {
            return 0.0;
        }
        let x = ((self.apex - t) / self.step).min((self.radius.len() - 1) as f64);
        let k = (x.floor() as usize).min(self.radius.len() - 2);
        let s = x - k as f64;
        let (p0, p1) = (self.radius[k], self.radius[k + 1]);
        let (m0, m1) = (self.speed[k] * self.step, self.speed[k + 1] * self.step);
        let s2 = s * s;
        let s3 = s2 * s;
        (2.0 * s3 - 3.0 * s2 + 1.0) * p0 + (s3 - 2.0 * s2 + s) * m0 + (-2.0 * s3 + 3.0 * s2) * p1 + (s3 - s2) * m1
    }

    /// Time at which the ray passes radius `r` (bisection on the monotone Hermite curve).
    pub fn time_at_radius(&self, r: f64) -> Option<f64> {
        let last = *self.radius.last()?;
        if r < 0.0 || r > last {
            return None;
        }
        let t_end = self.apex - self.step * (self.radius.len() - 1) as f64;
        let (mut lo, mut hi) = (t_end, self.apex);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.radius_at(mid) > r {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-15 * self.apex.abs().max(1.0) {
                break;
            }
        }
        Some(0.5 * (lo + hi))
    }
}

/// Mantle radius of the cone at time t.
pub fn mantle_radius(run: &CauchyRun, cone: &ConeSpec, t: f64) -> Result<f64> {
    Ok(IngoingRay::trace(run, cone.apex_time, t)?.radius_at(t))
}

fn snapshot_index(run: &CauchyRun, t: f64) -> Result<usize> {
    let len = run.snapshots.len();
    let k = (t / run.snapshot_dt()).round();
    if k < 0.0 || k as usize >= len || (run.snapshots[k as usize].time - t).abs() > 1e-9 * t.abs().max(1.0) {
        return Err(Error::Config(format!("no stored snapshot at t = {t}")));
    }
    Ok(k as usize)
}

/// E^O(tau): energy of the snapshot at tau inside the mantle radius.
pub fn energy_cone(run: &CauchyRun, cone: &ConeSpec, tau: f64) -> Result<f64> {
    let k = snapshot_index(run, tau)?;
    let ray = IngoingRay::trace(run, cone.apex_time, 0.0)?;
    Ok(cone_energy_at(run, &ray, k))
}

fn cone_energy_at(run: &CauchyRun, ray: &IngoingRay, k: usize) -> f64 {
    let s = &run.snapshots[k];
    energy_pieces(s, run.config.mass_m).integrate(s.grid.spacing, Some(ray.radius_at(s.time)))
}

/// 2 pi r e^alpha (e - m) at radius r of snapshot k, from sampled fields.
pub(crate) fn mantle_integrand(run: &CauchyRun, k: usize, r: f64) -> f64 {
    let s = &run.snapshots[k];
    let g = &s.grid;
    let m2 = run.config.mass_m * run.config.mass_m;
    let (gamma, gr) = g.sample(&s.gamma, r);
    let (phi, pr) = g.sample(&s.phi, r);
    let gt = g.sample(&s.gamma_t, r).0;
    let pt = g.sample(&s.phi_t, r).0;
    let alpha = g.sample(&s.alpha, r).0;
    let beta = g.sample(&s.beta, r).0;
    let ea = (-2.0 * alpha).exp();
    let eb = (-2.0 * beta).exp();
    let e = ea * (gt * gt + 0.5 * pt * pt) + eb * (gr * gr + 0.5 * pr * pr) + 0.5 * m2 * (-2.0 * gamma).exp() * phi * phi;
    let m = (-alpha - beta).exp() * (2.0 * gt * gr + pt * pr);
    2.0 * PI * r * alpha.exp() * (e - m)
}

/// Energy balance of the truncated cone between tau < s.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FluxReport {
    /// E^O(tau) - E^O(s).
    pub defect: f64,
    /// Trapezoid quadrature of the mantle flux over [tau, s].
    pub mantle: f64,
    pub residual: f64,
}

pub fn flux_pt(run: &CauchyRun, cone: &ConeSpec, tau: f64, s: f64) -> Result<FluxReport> {
    let (k0, k1) = (snapshot_index(run, tau)?, snapshot_index(run, s)?);
    if k1 <= k0 || s >= cone.apex_time {
        return Err(Error::Config(format!("flux needs tau < s < apex, got {tau}, {s}")));
    }
    let ray = IngoingRay::trace(run, cone.apex_time, 0.0)?;
    let defect = cone_energy_at(run, &ray, k0) - cone_energy_at(run, &ray, k1);
    let dt = run.snapshot_dt();
    let mut mantle = 0.0;
    for k in k0..=k1 {
        let w = if k == k0 || k == k1 { 0.5 } else { 1.0 };
        let t = run.snapshots[k].time;
        mantle += w * dt * mantle_integrand(run, k, ray.radius_at(t));
    }
    Ok(FluxReport {
        defect,
        mantle,
        residual: defect - mantle,
    })
}

/// One time of the non-concentration series.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct NonConcentration {
    pub time: f64,
    pub mantle_radius: f64,
    pub e_cone: f64,
    /// Mass-potential energy inside the cone.
    pub potential_cone: f64,
    /// Energy in the annulus fraction * r2 < r < r2.
    pub e_ext: f64,
    /// r2^{-1} times the kinetic spacetime integral over the cone from this slice on.
    pub kin_rate: f64,
    /// r2^{-1} times the radial-gradient spacetime integral over the cone from this slice on.
    pub radial_rate: f64,
}

/// Integrals over [0, limit] of cell-centred samples, the last cell taken partially.
fn partial_sum(values: impl Iterator<Item = f64>, h: f64, limit: f64) -> f64 {
    values
        .enumerate()
        .map(|(i, v)| {
            let lo = i as f64 * h;
            v * (limit.min(lo + h) - lo).max(0.0)
        })
        .sum()
}

/// Series over all stored snapshots strictly before the apex.
pub fn nonconcentration_suite(run: &CauchyRun, cone: &ConeSpec) -> Result<Vec<NonConcentration>> {
    let ray = IngoingRay::trace(run, cone.apex_time, 0.0)?;
    let m2 = run.config.mass_m * run.config.mass_m;
    let dt = run.snapshot_dt();
    let slices: Vec<usize> = (0..run.snapshots.len())
        .filter(|&k| run.snapshots[k].time < cone.apex_time)
        .collect();
    // Slice integrals with volume element 2 pi r e^{alpha + beta} dr, then trapezoid in t.
    let mut kin_slice = Vec::with_capacity(slices.len());
    let mut rad_slice = Vec::with_capacity(slices.len());
    let mut rows = Vec::with_capacity(slices.len());
    for &k in &slices {
        let s = &run.snapshots[k];
        let g = &s.grid;
        let h = g.spacing;
        let r2 = ray.radius_at(s.time);
        let cells = 0..g.n_cells;
        let kin = partial_sum(
            cells.clone().map(|i| {
                let j = i + GHOST;
                let e_kin = 0.5 * (-2.0 * s.alpha[j]).exp() * (2.0 * s.gamma_t[j].powi(2) + s.phi_t[j].powi(2));
                2.0 * PI * g.center(i) * (s.alpha[j] + s.beta[j]).exp() * e_kin
            }),
            h,
            r2,
        );
        let rad = partial_sum(
            cells.clone().map(|i| {
                let j = i + GHOST;
                let grad = 0.5 * (-2.0 * s.beta[j]).exp() * (2.0 * g.d1(&s.gamma, i).powi(2) + g.d1(&s.phi, i).powi(2));
                2.0 * PI * g.center(i) * (s.alpha[j] + s.beta[j]).exp() * grad
            }),
            h,
            r2,
        );
        let potential = partial_sum(
            cells.map(|i| {
                let j = i + GHOST;
                let f = m2 * (-2.0 * s.gamma[j]).exp() * s.phi[j].powi(2);
                2.0 * PI * g.center(i) * s.beta[j].exp() * f
            }),
            h,
            r2,
        );
        let pieces = energy_pieces(s, run.config.mass_m);
        let e_cone = pieces.integrate(h, Some(r2));
        let e_inner = pieces.integrate(h, Some(cone.cone_fraction * r2));
        kin_slice.push(kin);
        rad_slice.push(rad);
        rows.push(NonConcentration {
            time: s.time,
            mantle_radius: r2,
            e_cone,
            potential_cone: potential,
            e_ext: e_cone - e_inner,
            kin_rate: 0.0,
            radial_rate: 0.0,
        });
    }
    let (mut kin_acc, mut rad_acc) = (0.0, 0.0);
    for q in (0..rows.len()).rev() {
        if q + 1 < rows.len() {
            kin_acc += 0.5 * dt * (kin_slice[q] + kin_slice[q + 1]);
            rad_acc += 0.5 * dt * (rad_slice[q] + rad_slice[q + 1]);
        }
        let r2 = rows[q].mantle_radius;
        if r2 > 0.0 {
            rows[q].kin_rate = kin_acc / r2;
            rows[q].radial_rate = rad_acc / r2;
        }
    }
    Ok(rows)
}
