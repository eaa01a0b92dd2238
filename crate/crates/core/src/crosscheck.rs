//! Comparison of the Cauchy and null evolutions of the same data at shared events.

use crate::cauchy::CauchyRun;
use crate::diagnostics::IngoingRay;
use crate::error::{Error, Result};
use crate::null::NullRun;

/// A null grid point, addressed by slice and index along the slice.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NullEvent {
    pub slice: usize,
    pub index: usize,
}

/// One matched event.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct EventComparison {
    /// Normalised null labels and areal radius of the event.
    pub u: f64,
    pub v: f64,
    pub r: f64,
    /// Cauchy time of the event.
    pub t: f64,
    pub null_gamma: f64,
    pub null_phi: f64,
    pub cauchy_gamma: f64,
    pub cauchy_phi: f64,
}

#[derive(Clone, Debug, Default)]
pub struct CrossReport {
    pub events: Vec<EventComparison>,
    /// max |difference| over events and both fields, divided by max |value|.
    pub relative_error: f64,
}

/// Events placed at fixed fractions of the null domain: slices at v = fv * v_max and,
/// on each, points at coordinate radius R = fr * v. Positions are snapped to the grid
/// of `coarse` slices per v_max (at most the run's own slice count) so that
/// refined runs hit the same labels.
pub fn grid_events(run: &NullRun, v_fracs: &[f64], r_fracs: &[f64], coarse: usize) -> Vec<NullEvent> {
    let last = run.slices.len() - 1;
    let coarse = coarse.min(last).max(1);
    let stride = last / coarse;
    let mut out = Vec::new();
    for &fv in v_fracs {
        let n = ((fv * coarse as f64).round() as usize * stride).min(last);
        for &fr in r_fracs {
            // Index j sits at R = (2n - j) h / 2; snap R to the coarse grid as well.
            let half_steps = ((2.0 * n as f64 * fr / stride as f64).round() as usize * stride).min(2 * n);
            out.push(NullEvent {
                slice: n,
                index: 2 * n - half_steps,
            });
        }
    }
    out
}

/// Locates each null event in the Cauchy run by following the ingoing light ray
/// that reaches the axis at t = v back to the event's areal radius, then compares
/// (gamma, phi) there.
pub fn compare_events(cauchy: &CauchyRun, null: &NullRun, events: &[NullEvent]) -> Result<CrossReport> {
    let norm = null.normalized();
    let t_last = cauchy.last().time;
    let mut out = CrossReport::default();
    let (mut worst_diff, mut worst_value) = (0.0f64, 0.0f64);
    for ev in events {
        let slice = &norm.slices[ev.slice];
        let (v, u, r) = (slice.v, slice.u_values[ev.index], slice.r[ev.index]);
        if v > t_last {
            return Err(Error::ConeOutOfRange { t: v, r, r_max: cauchy.grid().r_max() });
        }
        let t = if r == 0.0 {
            v
        } else {
            let ray = IngoingRay::trace(cauchy, v, 0.0)?;
            ray.time_at_radius(r).ok_or(Error::ConeOutOfRange { t: v, r, r_max: cauchy.grid().r_max() })?
        };
        let cmp = EventComparison {
            u,
            v,
            r,
            t,
            null_gamma: slice.gamma[ev.index],
            null_phi: slice.phi[ev.index],
            cauchy_gamma: cauchy.sample(|s| &s.gamma, t, r).0,
            cauchy_phi: cauchy.sample(|s| &s.phi, t, r).0,
        };
        worst_diff = worst_diff
            .max((cmp.null_gamma - cmp.cauchy_gamma).abs())
            .max((cmp.null_phi - cmp.cauchy_phi).abs());
        worst_value = worst_value.max(cmp.null_gamma.abs()).max(cmp.null_phi.abs());
        out.events.push(cmp);
    }
    out.relative_error = if worst_value > 0.0 { worst_diff / worst_value } else { worst_diff };
    Ok(out)
}
