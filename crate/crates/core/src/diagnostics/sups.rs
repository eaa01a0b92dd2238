//! Weighted sup norms over the backward cone and the Morawetz spacetime integral.

use super::cone::IngoingRay;
use super::ConeSpec;
use crate::cauchy::CauchyRun;
use crate::error::Result;
use crate::grid::GHOST;
use crate::state::CauchyState;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct WeightedSups {
    /// sup r^delta |U_v|.
    pub x: f64,
    /// sup r^{delta-1} |V|, V = U_R.
    pub y0: f64,
    /// sup r |U|^2.
    pub ru2: f64,
    /// sup r^delta |V_v|.
    pub x0: f64,
    /// sup r^delta |V_u|.
    pub y0v: f64,
    /// sup r^{delta-1} |lambda_R|.
    pub l0: f64,
}

/// Null derivatives in the frame with lambda = (alpha + beta) / 2, where
/// d_T = e^{lambda - alpha} d_t and d_R = e^{lambda - beta} d_r.
struct Frame {
    to_t: f64,
    to_r: f64,
}

/// Sups over every stored snapshot before the apex and every cell inside the
/// mantle. Time derivatives of V are centred, one-sided at the ends of the run.
pub fn weighted_sups(run: &CauchyRun, cone: &ConeSpec, delta: f64) -> Result<WeightedSups> {
    Ok(weighted_sups_series(run, cone, delta)?.into_iter().fold(WeightedSups::default(), |a, b| WeightedSups {
        x: a.x.max(b.x),
        y0: a.y0.max(b.y0),
        ru2: a.ru2.max(b.ru2),
        x0: a.x0.max(b.x0),
        y0v: a.y0v.max(b.y0v),
        l0: a.l0.max(b.l0),
    }))
}

type Pick = fn(&CauchyState) -> &Vec<f64>;

/// Per-snapshot sups; snapshots at or after the apex get zeros.
pub fn weighted_sups_series(run: &CauchyRun, cone: &ConeSpec, delta: f64) -> Result<Vec<WeightedSups>> {
    let ray = IngoingRay::trace(run, cone.apex_time, 0.0)?;
    let len = run.snapshots.len();
    let mut series = vec![WeightedSups::default(); len];
    if len < 2 {
        return Ok(series);
    }
    for (k, out) in series.iter_mut().enumerate() {
        let (prev, s, next) = (&run.snapshots[k.saturating_sub(1)], &run.snapshots[k], &run.snapshots[(k + 1).min(len - 1)]);
        if s.time >= cone.apex_time {
            break;
        }
        let dt_span = next.time - prev.time;
        let g = &s.grid;
        let r2 = ray.radius_at(s.time);
        for i in 1..g.n_cells - 2 {
            let r = g.center(i);
            if r > r2 {
                break;
            }
            let j = i + GHOST;
            let lambda = 0.5 * (s.alpha[j] + s.beta[j]);
            let frame = Frame {
                to_t: (lambda - s.alpha[j]).exp(),
                to_r: (lambda - s.beta[j]).exp(),
            };
            // V = e^{lambda - beta} U_r on a slice, at cell c.
            let radial = |st: &CauchyState, u: Pick, c: usize| {
                let q = c + GHOST;
                let lam = 0.5 * (st.alpha[q] + st.beta[q]);
                (lam - st.beta[q]).exp() * st.grid.d1(u(st), c)
            };
            let fields: [(Pick, Pick); 2] = [(|st| &st.gamma, |st| &st.gamma_t), (|st| &st.phi, |st| &st.phi_t)];
            for (u, ut) in fields {
                let value = u(s)[j];
                let u_t = frame.to_t * ut(s)[j];
                let u_r = frame.to_r * g.d1(u(s), i);
                let u_v = 0.5 * (u_t + u_r);
                let v = radial(s, u, i);
                let v_t = frame.to_t * (radial(next, u, i) - radial(prev, u, i)) / dt_span;
                let v_r = frame.to_r * (radial(s, u, i + 1) - radial(s, u, i - 1)) / (2.0 * g.spacing);
                out.x = out.x.max(r.powf(delta) * u_v.abs());
                out.ru2 = out.ru2.max(r * value * value);
                out.y0 = out.y0.max(r.powf(delta - 1.0) * v.abs());
                out.x0 = out.x0.max(r.powf(delta) * (0.5 * (v_t + v_r)).abs());
                out.y0v = out.y0v.max(r.powf(delta) * (0.5 * (v_t - v_r)).abs());
            }
            let lambda_r = frame.to_r * 0.5 * (g.d1(&s.alpha, i) + g.d1(&s.beta, i));
            out.l0 = out.l0.max(r.powf(delta - 1.0) * lambda_r.abs());
        }
    }
    Ok(series)
}

/// Running values of the integral of (gamma_u^2 + phi_u^2) R^{sigma - 1} over the
/// truncated cone, U_u = (U_T - U_R) / 2, trapezoid in t. Entry k covers [0, t_k].
pub fn morawetz_series(run: &CauchyRun, cone: &ConeSpec, sigma: f64) -> Result<Vec<f64>> {
    let ray = IngoingRay::trace(run, cone.apex_time, 0.0)?;
    let dt = run.snapshot_dt();
    let mut slice_values = Vec::new();
    for s in &run.snapshots {
        if s.time > cone.apex_time {
            break;
        }
        let g = &s.grid;
        let h = g.spacing;
        let r2 = ray.radius_at(s.time);
        let mut acc = 0.0;
        for i in 0..g.n_cells - 1 {
            let lo = i as f64 * h;
            let width = (r2.min(lo + h) - lo).max(0.0);
            if width == 0.0 {
                break;
            }
            let j = i + GHOST;
            let lambda = 0.5 * (s.alpha[j] + s.beta[j]);
            let (to_t, to_r) = ((lambda - s.alpha[j]).exp(), (lambda - s.beta[j]).exp());
            let gu = 0.5 * (to_t * s.gamma_t[j] - to_r * g.d1(&s.gamma, i));
            let pu = 0.5 * (to_t * s.phi_t[j] - to_r * g.d1(&s.phi, i));
            acc += width * (gu * gu + pu * pu) * g.center(i).powf(sigma - 1.0);
        }
        slice_values.push(acc);
    }
    let mut series = vec![0.0; slice_values.len()];
    for k in 1..slice_values.len() {
        series[k] = series[k - 1] + 0.5 * dt * (slice_values[k - 1] + slice_values[k]);
    }
    Ok(series)
}

pub fn morawetz_integral(run: &CauchyRun, cone: &ConeSpec, sigma: f64) -> Result<f64> {
    Ok(morawetz_series(run, cone, sigma)?.last().copied().unwrap_or(0.0))
}
