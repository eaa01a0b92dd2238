//! Double-null characteristic evolution on the family of cones v = const.
//!
//! The scheme works in an auxiliary gauge fixed by the initial slice: on t = 0 the
//! coordinate radius equals the areal radius and lambda equals beta. The normalised
//! gauge (lambda = 0 on the axis) is obtained afterwards by reparametrising u and v
//! along the axis, see [`NullRun::normalized`].

use crate::config::SimConfig;
use crate::error::{Error, Result};
use crate::state::{CauchyState, NullSlice};

/// Grid values needed by a diamond update.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct NullPoint {
    pub r: f64,
    pub lambda: f64,
    pub gamma: f64,
    pub phi: f64,
}

impl NullPoint {
    fn combine(a: Self, b: Self, c: Self) -> Self {
        NullPoint {
            r: a.r + b.r - c.r,
            lambda: a.lambda + b.lambda - c.lambda,
            gamma: a.gamma + b.gamma - c.gamma,
            phi: a.phi + b.phi - c.phi,
        }
    }

    fn is_finite(&self) -> bool {
        self.r.is_finite() && self.lambda.is_finite() && self.gamma.is_finite() && self.phi.is_finite()
    }
}

/// Values on the initial cone boundary: `outer[n]` at t = 0, R = n h, and
/// `half[n]` at T = h/2, R = (n - 1/2) h (entry 0 unused).
#[derive(Clone, Debug, Default)]
pub struct NullBoundary {
    pub outer: Vec<NullPoint>,
    pub half: Vec<NullPoint>,
}

/// Transforms the constraint-solved t = 0 slice into boundary data for `slices` null slices.
/// The first off-boundary layer is filled by a second-order Taylor step in T using
/// the field equations on the initial slice.
pub fn init_null_from_free_data(state: &CauchyState, mass_m: f64, slices: usize) -> Result<NullBoundary> {
    let g = &state.grid;
    if slices > g.n_cells {
        return Err(Error::Config(format!(
            "null run needs {slices} cells of initial data, grid has {}",
            g.n_cells
        )));
    }
    let h = g.spacing;
    let m2 = mass_m * mass_m;
    let mut outer = Vec::with_capacity(slices + 1);
    for n in 0..=slices {
        let r = n as f64 * h;
        outer.push(NullPoint {
            r,
            lambda: g.sample(&state.beta, r).0,
            gamma: g.sample(&state.gamma, r).0,
            phi: g.sample(&state.phi, r).0,
        });
    }
    let mut half = vec![NullPoint::default(); slices + 1];
    for (n, slot) in half.iter_mut().enumerate().skip(1) {
        let i = n - 1;
        let k = i + crate::grid::GHOST;
        let r = g.center(i);
        let lapse = (state.beta[k] - state.alpha[k]).exp();
        let (gamma, phi, beta) = (state.gamma[k], state.phi[k], state.beta[k]);
        let gamma_t = lapse * state.gamma_t[k];
        let phi_t = lapse * state.phi_t[k];
        let gamma_r = g.sample(&state.gamma, r).1;
        let phi_r = g.sample(&state.phi, r).1;
        let mass = m2 * (2.0 * beta - 2.0 * gamma).exp();
        let gamma_tt = g.radial_laplacian(&state.gamma, i) + 0.5 * mass * phi * phi;
        let phi_tt = g.radial_laplacian(&state.phi, i) - mass * phi;
        let lambda_t = r * (2.0 * gamma_t * gamma_r + phi_t * phi_r);
        let lambda_tt = g.d2(&state.beta, i) + 0.5 * mass * phi * phi - gamma_t * gamma_t + gamma_r * gamma_r
            - 0.5 * phi_t * phi_t
            + 0.5 * phi_r * phi_r;
        let r_tt = r * mass * phi * phi;
        let step = |f: f64, ft: f64, ftt: f64| f + 0.5 * h * ft + 0.125 * h * h * ftt;
        *slot = NullPoint {
            r: step(r, 0.0, r_tt),
            lambda: step(beta, lambda_t, lambda_tt),
            gamma: step(gamma, gamma_t, gamma_tt),
            phi: step(phi, phi_t, phi_tt),
        };
    }
    Ok(NullBoundary { outer, half })
}

/// One null parallelogram: `a` = (v - h, u), `b` = (v, u - h), `c` = (v - h, u - h);
/// returns the north corner (v, u). Midpoint quadrature, one corrector pass.
pub fn diamond(a: NullPoint, b: NullPoint, c: NullPoint, h: f64, mass_m: f64, frozen: bool) -> NullPoint {
    let m2 = mass_m * mass_m;
    let h2 = h * h;
    let mut p = NullPoint::combine(a, b, c);
    for _ in 0..2 {
        let mean = |f: fn(&NullPoint) -> f64| 0.25 * (f(&a) + f(&b) + f(&c) + f(&p));
        let r_mid = mean(|q| q.r);
        let phi_mid = mean(|q| q.phi);
        let weight = if frozen {
            m2
        } else {
            m2 * (2.0 * mean(|q| q.lambda) - 2.0 * mean(|q| q.gamma)).exp()
        };
        let r_new = if frozen {
            p.r
        } else {
            a.r + b.r - c.r + h2 * 0.25 * weight * r_mid * phi_mid * phi_mid
        };
        let r_ap = 0.5 * (a.r + r_new);
        let r_bp = 0.5 * (b.r + r_new);
        let r_cb = 0.5 * (c.r + b.r);
        let r_ca = 0.5 * (c.r + a.r);
        let wave = |fa: f64, fb: f64, fc: f64, source: f64| {
            (r_ap * fa + r_bp * fb + r_cb * (fb - fc) + r_ca * (fa - fc) + h2 * source) / (r_ap + r_bp)
        };
        let gamma = wave(a.gamma, b.gamma, c.gamma, 0.25 * weight * r_mid * phi_mid * phi_mid);
        let phi = wave(a.phi, b.phi, c.phi, -0.5 * weight * r_mid * phi_mid);
        let lambda = if frozen {
            0.0
        } else {
            let du = |fp: f64, fa: f64, fb: f64, fc: f64| (fp - fb + fa - fc) / (2.0 * h);
            let dv = |fp: f64, fa: f64, fb: f64, fc: f64| (fp - fa + fb - fc) / (2.0 * h);
            let gu = du(gamma, a.gamma, b.gamma, c.gamma);
            let gv = dv(gamma, a.gamma, b.gamma, c.gamma);
            let pu = du(phi, a.phi, b.phi, c.phi);
            let pv = dv(phi, a.phi, b.phi, c.phi);
            let phi_mid = 0.25 * (a.phi + b.phi + c.phi + phi);
            a.lambda + b.lambda - c.lambda + h2 * (-gu * gv - 0.5 * pu * pv + 0.125 * weight * phi_mid * phi_mid)
        };
        p = NullPoint {
            r: r_new,
            lambda,
            gamma,
            phi,
        };
    }
    p
}

/// Axis values of a new slice. The areal radius vanishes there; gamma and phi are
/// extrapolated along the slice from its three nearest off-axis points (two on the
/// first slice). Lambda obeys a one-dimensional wave equation, so it needs a real
/// boundary condition: evenness in R mirrors the missing west corner of the axis
/// diamond onto its east corner, `points.last()`.
pub fn axis_limits(points: &[NullPoint], prev_axis: NullPoint, h: f64, mass_m: f64, frozen: bool) -> NullPoint {
    let len = points.len();
    let extrapolate = |f: fn(&NullPoint) -> f64| match len {
        0 => f(&prev_axis),
        1 => 2.0 * f(&points[0]) - f(&prev_axis),
        2 => 2.0 * f(&points[1]) - f(&points[0]),
        _ => 3.0 * f(&points[len - 1]) - 3.0 * f(&points[len - 2]) + f(&points[len - 3]),
    };
    let mut p = NullPoint {
        r: 0.0,
        lambda: 0.0,
        gamma: extrapolate(|q| q.gamma),
        phi: extrapolate(|q| q.phi),
    };
    if frozen || len == 0 {
        return p;
    }
    let b = points[len - 1];
    let c = prev_axis;
    p.lambda = 2.0 * b.lambda - c.lambda;
    for _ in 0..2 {
        let mean = |f: fn(&NullPoint) -> f64| 0.25 * (2.0 * f(&b) + f(&c) + f(&p));
        let weight = mass_m * mass_m * (2.0 * mean(|q| q.lambda) - 2.0 * mean(|q| q.gamma)).exp();
        let phi_mid = mean(|q| q.phi);
        let gu = (p.gamma - c.gamma) / (2.0 * h);
        let pu = (p.phi - c.phi) / (2.0 * h);
        p.lambda = 2.0 * b.lambda - c.lambda + h * h * (-gu * gu - 0.5 * pu * pu + 0.125 * weight * phi_mid * phi_mid);
    }
    p
}

fn points_of(slice: &NullSlice) -> Vec<NullPoint> {
    (0..slice.len())
        .map(|j| NullPoint {
            r: slice.r[j],
            lambda: slice.lambda[j],
            gamma: slice.gamma[j],
            phi: slice.phi[j],
        })
        .collect()
}

fn slice_from_points(v: f64, h: f64, points: &[NullPoint]) -> NullSlice {
    let len = points.len();
    let zeros = vec![0.0; len];
    NullSlice {
        v,
        u_values: (0..len).map(|j| -v + j as f64 * h).collect(),
        r: points.iter().map(|p| p.r).collect(),
        lambda: points.iter().map(|p| p.lambda).collect(),
        gamma: points.iter().map(|p| p.gamma).collect(),
        phi: points.iter().map(|p| p.phi).collect(),
        r_u: zeros.clone(),
        gamma_u: zeros.clone(),
        phi_u: zeros.clone(),
        lambda_u: zeros.clone(),
        r_uu: zeros.clone(),
        r_v: zeros.clone(),
        gamma_v: zeros.clone(),
        phi_v: zeros.clone(),
        lambda_v: zeros.clone(),
        r_vv: zeros,
    }
}

#[derive(Clone, Debug)]
pub struct NullRun {
    pub config: SimConfig,
    /// du = dv.
    pub spacing: f64,
    pub slices: Vec<NullSlice>,
}

/// Builds slice `n` from slice `n - 1` and the boundary data.
pub fn march_diamond(
    prev: &NullSlice,
    boundary: &NullBoundary,
    n: usize,
    h: f64,
    mass_m: f64,
    frozen: bool,
) -> Result<NullSlice> {
    let v = n as f64 * h;
    let prev_pts = points_of(prev);
    let mut pts = Vec::with_capacity(2 * n + 1);
    pts.push(boundary.outer[n]);
    pts.push(boundary.half[n]);
    for j in 2..2 * n {
        let a = prev_pts[j - 1];
        let b = pts[j - 1];
        let c = prev_pts[j - 2];
        let p = diamond(a, b, c, h, mass_m, frozen);
        let u = -v + j as f64 * h;
        if !p.is_finite() {
            return Err(Error::NonFinite("null diamond"));
        }
        if p.r <= 0.0 || p.r >= b.r {
            return Err(Error::DegenerateCone { u, v, r: p.r });
        }
        pts.push(p);
    }
    let prev_axis = *prev_pts.last().unwrap();
    pts.push(axis_limits(&pts, prev_axis, h, mass_m, frozen));
    Ok(slice_from_points(v, h, &pts))
}

impl NullRun {
    /// Marches from the constraint-solved initial slice up to v = t_final (capped by
    /// the radial extent of the data).
    pub fn evolve(config: &SimConfig, initial: &CauchyState) -> Result<NullRun> {
        let h = initial.grid.spacing;
        let count = ((config.t_final / h).round() as usize).min(initial.grid.n_cells);
        let boundary = init_null_from_free_data(initial, config.mass_m, count)?;
        let mut slices = Vec::with_capacity(count + 1);
        slices.push(slice_from_points(0.0, h, &[boundary.outer[0]]));
        for n in 1..=count {
            let next = march_diamond(&slices[n - 1], &boundary, n, h, config.mass_m, config.frozen_metric)?;
            slices.push(next);
        }
        fill_derivatives(&mut slices, h);
        Ok(NullRun {
            config: config.clone(),
            spacing: h,
            slices,
        })
    }

    /// Max over interior slices of the two null-constraint residuals.
    pub fn max_residuals(&self) -> (f64, f64) {
        let last = self.slices.len().saturating_sub(1);
        self.slices[1.min(last)..last]
            .iter()
            .map(residual_raychaudhuri)
            .fold((0.0, 0.0), |(a, b), (u, v)| (f64::max(a, u), f64::max(b, v)))
    }

    /// Lambda on the axis, slice by slice.
    pub fn axis_lambda(&self) -> Vec<f64> {
        self.slices.iter().map(|s| *s.lambda.last().unwrap()).collect()
    }

    /// The same run in coordinates with lambda = 0 on the axis and u = -v on t = 0.
    /// Both null labels are reparametrised by tau(s) = int_0^s e^{lambda_axis}.
    pub fn normalized(&self) -> NullRun {
        let h = self.spacing;
        let axis = self.axis_lambda();
        let count = axis.len();
        let mut tau = vec![0.0; count];
        for k in 1..count {
            tau[k] = tau[k - 1] + 0.5 * h * (axis[k - 1].exp() + axis[k].exp());
        }
        let slope = |k: usize| -> f64 {
            if count < 2 {
                0.0
            } else if k == 0 {
                (axis[1] - axis[0]) / h
            } else if k + 1 == count {
                (axis[k] - axis[k - 1]) / h
            } else {
                (axis[k + 1] - axis[k - 1]) / (2.0 * h)
            }
        };
        let mut slices = Vec::with_capacity(count);
        for (n, s) in self.slices.iter().enumerate() {
            let mut out = s.clone();
            let gv = axis[n].exp();
            let lv = slope(n);
            out.v = tau[n];
            for j in 0..s.len() {
                let (k, sign) = if j >= n { (j - n, 1.0) } else { (n - j, -1.0) };
                let gu = axis[k].exp();
                let lu = sign * slope(k);
                out.u_values[j] = sign * tau[k];
                out.lambda[j] = s.lambda[j] - 0.5 * (axis[k] + axis[n]);
                out.r_u[j] = s.r_u[j] / gu;
                out.gamma_u[j] = s.gamma_u[j] / gu;
                out.phi_u[j] = s.phi_u[j] / gu;
                out.lambda_u[j] = (s.lambda_u[j] - 0.5 * lu) / gu;
                out.r_uu[j] = (s.r_uu[j] - lu * s.r_u[j]) / (gu * gu);
                out.r_v[j] = s.r_v[j] / gv;
                out.gamma_v[j] = s.gamma_v[j] / gv;
                out.phi_v[j] = s.phi_v[j] / gv;
                out.lambda_v[j] = (s.lambda_v[j] - 0.5 * lv) / gv;
                out.r_vv[j] = (s.r_vv[j] - lv * s.r_v[j]) / (gv * gv);
            }
            slices.push(out);
        }
        NullRun {
            config: self.config.clone(),
            spacing: h,
            slices,
        }
    }
}

fn first_one_sided(f0: f64, f1: f64, f2: f64, h: f64) -> f64 {
    (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * h)
}

fn second_one_sided(f: [f64; 4], h: f64) -> f64 {
    (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / (h * h)
}

/// Fills u-derivatives (along each slice) and v-derivatives (across slices at
/// fixed u: point j of slice n sits at the same u as point j + 1 of slice n + 1).
pub fn fill_derivatives(slices: &mut [NullSlice], h: f64) {
    let count = slices.len();
    for s in slices.iter_mut() {
        let len = s.len();
        let d_u = |f: &[f64], j: usize| -> f64 {
            match (j, len) {
                (_, 0 | 1) => 0.0,
                (_, 2) => (f[1] - f[0]) / h,
                (0, _) => first_one_sided(f[0], f[1], f[2], h),
                (j, l) if j + 1 == l => -first_one_sided(f[j], f[j - 1], f[j - 2], h),
                (j, _) => (f[j + 1] - f[j - 1]) / (2.0 * h),
            }
        };
        let d_uu = |f: &[f64], j: usize| -> f64 {
            if len < 4 {
                0.0
            } else if j == 0 {
                second_one_sided([f[0], f[1], f[2], f[3]], h)
            } else if j + 1 == len {
                second_one_sided([f[j], f[j - 1], f[j - 2], f[j - 3]], h)
            } else {
                (f[j + 1] - 2.0 * f[j] + f[j - 1]) / (h * h)
            }
        };
        for j in 0..len {
            s.r_u[j] = d_u(&s.r, j);
            s.gamma_u[j] = d_u(&s.gamma, j);
            s.phi_u[j] = d_u(&s.phi, j);
            s.lambda_u[j] = d_u(&s.lambda, j);
            s.r_uu[j] = d_uu(&s.r, j);
        }
        if len == 1 {
            s.r_u[0] = -0.5;
        }
    }
    for n in 0..count {
        let len = slices[n].len();
        for j in 0..len {
            // Values along the line of constant u through (n, j): offset d -> slice n + d, index j + d.
            let along = |d: isize, pick: fn(&NullSlice) -> &Vec<f64>| -> Option<f64> {
                let m = n as isize + d;
                let jj = j as isize + d;
                if m < 0 || m as usize >= count || jj < 0 {
                    return None;
                }
                pick(&slices[m as usize]).get(jj as usize).copied()
            };
            let dv = |pick: fn(&NullSlice) -> &Vec<f64>| -> (f64, f64) {
                let at = |d: isize| along(d, pick);
                match (at(-1), at(0), at(1)) {
                    (Some(fm), Some(f0), Some(fp)) => ((fp - fm) / (2.0 * h), (fp - 2.0 * f0 + fm) / (h * h)),
                    (None, Some(f0), Some(fp)) => match (at(2), at(3)) {
                        (Some(f2), f3) => (
                            first_one_sided(f0, fp, f2, h),
                            f3.map_or(0.0, |f3| second_one_sided([f0, fp, f2, f3], h)),
                        ),
                        (None, _) => ((fp - f0) / h, 0.0),
                    },
                    (Some(fm), Some(f0), None) => match (at(-2), at(-3)) {
                        (Some(f2), f3) => (
                            -first_one_sided(f0, fm, f2, h),
                            f3.map_or(0.0, |f3| second_one_sided([f0, fm, f2, f3], h)),
                        ),
                        (None, _) => ((f0 - fm) / h, 0.0),
                    },
                    _ => (0.0, 0.0),
                }
            };
            let (r_v, r_vv) = dv(|s| &s.r);
            let (gamma_v, _) = dv(|s| &s.gamma);
            let (phi_v, _) = dv(|s| &s.phi);
            let (lambda_v, _) = dv(|s| &s.lambda);
            let s = &mut slices[n];
            s.r_v[j] = r_v;
            s.r_vv[j] = r_vv;
            s.gamma_v[j] = gamma_v;
            s.phi_v[j] = phi_v;
            s.lambda_v[j] = lambda_v;
        }
        if len == 1 {
            slices[n].r_v[0] = 0.5;
        }
    }
}

/// Max-norm residuals of r_uu - 2 lambda_u r_u + r (2 gamma_u^2 + phi_u^2) = 0 and its
/// v counterpart, over points away from the initial boundary layer and the axis.
pub fn residual_raychaudhuri(slice: &NullSlice) -> (f64, f64) {
    let len = slice.len();
    let mut res_u = 0.0f64;
    let mut res_v = 0.0f64;
    for j in 2..len.saturating_sub(1) {
        let r = slice.r[j];
        let u = slice.r_uu[j] - 2.0 * slice.lambda_u[j] * slice.r_u[j]
            + r * (2.0 * slice.gamma_u[j].powi(2) + slice.phi_u[j].powi(2));
        let v = slice.r_vv[j] - 2.0 * slice.lambda_v[j] * slice.r_v[j]
            + r * (2.0 * slice.gamma_v[j].powi(2) + slice.phi_v[j].powi(2));
        res_u = res_u.max(u.abs());
        res_v = res_v.max(v.abs());
    }
    (res_u, res_v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::InitialDataFamily;
    use crate::initial_data::initial_state;

    fn config(amp: f64, mass: f64) -> SimConfig {
        SimConfig {
            n_cells: 256,
            r_max: 8.0,
            t_final: 4.0,
            mass_m: mass,
            data_family: InitialDataFamily::gaussian_phi(amp, 2.0, 0.7),
            ..Default::default()
        }
    }

    fn run(cfg: &SimConfig) -> NullRun {
        NullRun::evolve(cfg, &initial_state(cfg).unwrap()).unwrap()
    }

    #[test]
    fn vacuum_keeps_flat_geometry() {
        let nr = run(&config(0.0, 1.0));
        for s in &nr.slices {
            for j in 0..s.len() {
                assert_eq!(s.r[j], s.coordinate_radius(j));
                assert_eq!(s.lambda[j], 0.0);
                assert_eq!(s.gamma[j], 0.0);
            }
        }
        assert_eq!(nr.max_residuals(), (0.0, 0.0));
    }

    #[test]
    fn massless_areal_radius_is_coordinate_radius() {
        let nr = run(&config(0.2, 0.0));
        for s in &nr.slices {
            for j in 0..s.len() {
                assert_eq!(s.r[j], s.coordinate_radius(j));
            }
        }
        assert!(nr.slices.last().unwrap().phi.iter().any(|&p| p.abs() > 1e-3));
    }

    #[test]
    fn massless_diamond_is_parallelogram_rule() {
        let a = NullPoint { r: 1.0, lambda: 0.1, gamma: 0.2, phi: 0.3 };
        let b = NullPoint { r: 0.9, lambda: 0.05, gamma: 0.1, phi: 0.2 };
        let c = NullPoint { r: 1.1, lambda: 0.0, gamma: 0.0, phi: 0.1 };
        let p = diamond(a, b, c, 0.1, 0.0, false);
        assert_eq!(p.r, a.r + b.r - c.r);
    }

    #[test]
    fn axis_extrapolation_is_exact_for_quadratics() {
        let pts: Vec<NullPoint> = [3.0, 2.0, 1.0]
            .iter()
            .map(|&x: &f64| NullPoint { r: x, lambda: 1.0 + x * x, gamma: 2.0 - x, phi: x * x })
            .collect();
        let a = axis_limits(&pts, NullPoint::default(), 0.5, 0.0, true);
        assert_eq!((a.r, a.lambda, a.gamma, a.phi), (0.0, 0.0, 2.0, 0.0));
    }

    #[test]
    fn zeroed_shear_trips_residual() {
        let cfg = config(0.2, 1.0);
        let nr = run(&cfg);
        let mid = nr.slices.len() / 2;
        let base = residual_raychaudhuri(&nr.slices[mid]);
        let mut bad = nr.slices[mid].clone();
        bad.gamma_u.iter_mut().for_each(|v| *v = 0.0);
        bad.phi_u.iter_mut().for_each(|v| *v = 0.0);
        let corrupted = residual_raychaudhuri(&bad);
        assert!(corrupted.0 >= 10.0 * base.0, "{corrupted:?} vs {base:?}");
    }

    #[test]
    fn normalized_gauge_has_flat_axis_and_covariant_residuals() {
        let nr = run(&config(0.2, 1.0));
        let norm = nr.normalized();
        for s in &norm.slices {
            assert!(s.lambda.last().unwrap().abs() < 1e-14);
        }
        let s0 = &nr.slices[0];
        assert_eq!(norm.slices[0].v, s0.v);
        // Raychaudhuri expressions pick up a factor 1 / F'^2 at each point.
        let n = nr.slices.len() / 2;
        let (t, p) = (&nr.slices[n], &norm.slices[n]);
        let axis = nr.axis_lambda();
        for j in 2..t.len() - 1 {
            let k = j.abs_diff(n);
            let f = axis[k].exp();
            let tilde = t.r_uu[j] - 2.0 * t.lambda_u[j] * t.r_u[j]
                + t.r[j] * (2.0 * t.gamma_u[j].powi(2) + t.phi_u[j].powi(2));
            let phys = p.r_uu[j] - 2.0 * p.lambda_u[j] * p.r_u[j]
                + p.r[j] * (2.0 * p.gamma_u[j].powi(2) + p.phi_u[j].powi(2));
            assert!((phys - tilde / (f * f)).abs() < 1e-10 * (1.0 + tilde.abs()));
        }
    }

    #[test]
    fn initial_slice_derivatives_recombine_to_time_derivative() {
        let mut cfg = config(0.2, 1.0);
        cfg.data_family.amp_phi_t = 0.1;
        let st = initial_state(&cfg).unwrap();
        let nr = NullRun::evolve(&cfg, &st).unwrap();
        // On t = 0, phi_u + phi_v = e^{beta - alpha} phi_t.
        let n = 64;
        let s = &nr.slices[n];
        let r = n as f64 * nr.spacing;
        let g = st.grid;
        let expect = (g.sample(&st.beta, r).0 - g.sample(&st.alpha, r).0).exp() * g.sample(&st.phi_t, r).0;
        assert!((s.phi_u[0] + s.phi_v[0] - expect).abs() < 1e-3, "{} vs {expect}", s.phi_u[0] + s.phi_v[0]);
    }
}
