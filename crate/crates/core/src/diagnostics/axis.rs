//! Near-axis geometry of a null run in the normalised gauge.

use crate::null::NullRun;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct AxisGeometry {
    /// Slice labels v.
    pub v: Vec<f64>,
    /// Per slice, max over the window of |r_u + 1/2|, |r_v - 1/2| and |r - R|.
    pub dev_ru: Vec<f64>,
    pub dev_rv: Vec<f64>,
    pub dev_r: Vec<f64>,
    /// Window radii R and the sup over all slices of |r - R| at each of them.
    pub envelope_radius: Vec<f64>,
    pub envelope_dev: Vec<f64>,
    /// Least-squares slope of log(envelope) against log R.
    pub slope_r: f64,
}

/// Deviations from flat axis geometry for points with R in [r_lo, r_hi]. Slices
/// with fewer than four window points are skipped.
///
/// The power law is fitted to the envelope over slices rather than slice by
/// slice: the R^3 coefficient changes sign in time, so single slices can have
/// a spurious small slope where it passes through zero.
pub fn axis_geometry(run: &NullRun, r_lo: f64, r_hi: f64) -> AxisGeometry {
    let norm = run.normalized();
    let mut out = AxisGeometry::default();
    // points are keyed by their distance (in half steps) from the axis end
    let mut envelope: Vec<(f64, f64)> = Vec::new();
    for s in &norm.slices {
        let (mut ru, mut rv, mut rr) = (0.0f64, 0.0f64, 0.0f64);
        let mut count = 0;
        for j in 0..s.len() {
            let big_r = s.coordinate_radius(j);
            if big_r < r_lo || big_r > r_hi {
                continue;
            }
            let d = (s.r[j] - big_r).abs();
            ru = ru.max((s.r_u[j] + 0.5).abs());
            rv = rv.max((s.r_v[j] - 0.5).abs());
            rr = rr.max(d);
            count += 1;
            let key = s.len() - 1 - j;
            if envelope.len() <= key {
                envelope.resize(key + 1, (0.0, 0.0));
            }
            let e = &mut envelope[key];
            if d >= e.1 {
                *e = (big_r, d);
            }
        }
        if count < 4 {
            continue;
        }
        out.v.push(s.v);
        out.dev_ru.push(ru);
        out.dev_rv.push(rv);
        out.dev_r.push(rr);
    }
    for (radius, dev) in envelope.into_iter().filter(|e| e.0 > 0.0) {
        out.envelope_radius.push(radius);
        out.envelope_dev.push(dev);
    }
    out.slope_r = fit_loglog_slope(&out.envelope_radius, &out.envelope_dev);
    out
}

/// Least-squares slope of log y against log x over pairs with x, y > 0; NaN if
/// fewer than two such pairs remain.
pub fn fit_loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter(|(a, b)| **a > 0.0 && **b > 0.0)
        .map(|(a, b)| (a.ln(), b.ln()))
        .collect();
    if pts.len() < 2 {
        return f64::NAN;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law() {
        let x: Vec<f64> = (1..20).map(|k| 0.1 * k as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| 3.0 * v.powi(3)).collect();
        assert!((fit_loglog_slope(&x, &y) - 3.0).abs() < 1e-12);
        assert!(fit_loglog_slope(&[1.0], &[1.0]).is_nan());
    }
}
