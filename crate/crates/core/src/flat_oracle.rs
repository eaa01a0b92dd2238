//! Flat 2+1 solution operators used as independent oracles: the retarded
//! Poisson kernel for radial data and sources, and the weighted tail integral
//! `∫_0^∞ (mu + x)^(-a) x^(-b) dx`.

use std::f64::consts::FRAC_PI_2;

use crate::config::InitialDataFamily;
use crate::error::{Error, Result};
use crate::quadrature::integrate;

/// Absolute tolerance on every value returned by [`kernel_solve`].
pub const KERNEL_TOL: f64 = 1e-6;

/// Closed-form radial source tags.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SourceKind {
    Zero,
    /// `value` for r < radius, zero outside.
    ConstantBall { value: f64, radius: f64 },
    /// `amp * exp(-(r - center)^2 / width^2 - (t - t_center)^2 / t_width^2)`.
    GaussianPulse { amp: f64, center: f64, width: f64, t_center: f64, t_width: f64 },
}

/// Right-hand side h of `-U_tt + U_rr + U_r / r = h`, switched on for t in `t_range`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SourceSpec {
    pub kind: SourceKind,
    pub support_radius: f64,
    pub t_range: (f64, f64),
}

impl SourceSpec {
    pub fn zero() -> Self {
        SourceSpec { kind: SourceKind::Zero, support_radius: 0.0, t_range: (0.0, 0.0) }
    }

    pub fn constant_ball(value: f64, radius: f64, t_range: (f64, f64)) -> Self {
        SourceSpec { kind: SourceKind::ConstantBall { value, radius }, support_radius: radius, t_range }
    }

    pub fn gaussian_pulse(amp: f64, center: f64, width: f64, t_center: f64, t_width: f64) -> Self {
        SourceSpec {
            kind: SourceKind::GaussianPulse { amp, center, width, t_center, t_width },
            support_radius: center + 8.0 * width,
            t_range: ((t_center - 8.0 * t_width).max(0.0), t_center + 8.0 * t_width),
        }
    }

    pub fn eval(&self, t: f64, r: f64) -> f64 {
        if t < self.t_range.0 || t > self.t_range.1 || r > self.support_radius {
            return 0.0;
        }
        match self.kind {
            SourceKind::Zero => 0.0,
            SourceKind::ConstantBall { value, radius } => {
                if r < radius {
                    value
                } else {
                    0.0
                }
            }
            SourceKind::GaussianPulse { amp, center, width, t_center, t_width } => {
                amp * (-((r - center) / width).powi(2) - ((t - t_center) / t_width).powi(2)).exp()
            }
        }
    }
}

/// Which pair of free-data profiles feeds the data layer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Component {
    Gamma,
    Phi,
}

/// `(1/pi) ∫_0^pi dpsi ∫_0^{pi/2} dtheta g(sin theta, psi)`, the angular part of the
/// kernel once `|x - y| = s sin theta` has absorbed the square-root singularity.
fn angular_mean<G>(mut g: G, tol: f64) -> Result<f64>
where
    G: FnMut(f64, f64) -> f64,
{
    let outer = integrate(
        |psi| integrate(|theta| Ok(g(theta.sin(), psi)), 0.0, FRAC_PI_2, 0.1 * tol),
        0.0,
        std::f64::consts::PI,
        0.5 * tol * std::f64::consts::PI,
    )?;
    Ok(outer / std::f64::consts::PI)
}

/// Point y = x + rho e_psi for x on the positive axis at distance `r`:
/// returns |y| and e_psi . y / |y|.
fn shifted(r: f64, rho: f64, psi: f64) -> (f64, f64) {
    let (sn, cs) = psi.sin_cos();
    let y1 = r + rho * cs;
    let y2 = rho * sn;
    let norm = y1.hypot(y2);
    if norm == 0.0 {
        (0.0, 0.0)
    } else {
        (norm, (y1 * cs + y2 * sn) / norm)
    }
}

/// Flat solution value at each event (t, r) from the data layer of `data` and the
/// retarded source term.
///
/// With `M[f](t) = mean of f(x + t sin theta e_psi) sin theta` the data layer is
/// `d/dt (t M[f0]) + t M[f1]` and the source layer is
/// `-∫_0^t (t - tau) M[h(tau)](t - tau) dtau`.
pub fn kernel_solve(
    source: &SourceSpec,
    data: &InitialDataFamily,
    component: Component,
    events: &[(f64, f64)],
) -> Result<Vec<f64>> {
    let (i0, i1) = match component {
        Component::Gamma => (0, 1),
        Component::Phi => (2, 3),
    };
    let amps = data.amplitudes();
    events
        .iter()
        .map(|&(t, r)| {
            if !(t >= 0.0 && r >= 0.0 && t.is_finite() && r.is_finite()) {
                return Err(Error::Config(format!("event ({t}, {r}) outside the forward domain")));
            }
            let tol = KERNEL_TOL / (4.0 * (1.0 + t));
            let mut u = 0.0;
            if amps[i0] != 0.0 {
                let mean = angular_mean(|s, psi| data.profile(i0, shifted(r, t * s, psi).0).0 * s, tol)?;
                let slope = angular_mean(
                    |s, psi| {
                        let (y, dir) = shifted(r, t * s, psi);
                        data.profile(i0, y).1 * dir * s * s
                    },
                    tol,
                )?;
                u += mean + t * slope;
            }
            if amps[i1] != 0.0 {
                u += t * angular_mean(|s, psi| data.profile(i1, shifted(r, t * s, psi).0).0 * s, tol)?;
            }
            if source.kind != SourceKind::Zero {
                let lo = source.t_range.0.max(0.0);
                let hi = source.t_range.1.min(t);
                if hi > lo {
                    let inner = KERNEL_TOL / (4.0 * (1.0 + t * t));
                    u -= integrate(
                        |tau| {
                            let s = t - tau;
                            Ok(s * angular_mean(|q, psi| source.eval(tau, shifted(r, s * q, psi).0) * q, inner)?)
                        },
                        lo,
                        hi,
                        0.25 * KERNEL_TOL,
                    )?;
                }
            }
            Ok(u)
        })
        .collect()
}

/// `∫_0^∞ (mu + x)^(-a) x^(-b) dx`, split at x = mu, and the scale-free ratio
/// `value * mu^(a + b - 1)`.
///
/// Both halves are mapped to smooth integrands on [0, 1]: `x = mu w^(1/(1-b))`
/// below mu and `x = mu / s`, `s = w^(1/(a+b-1))` above.
pub fn weighted_tail_integral(mu: f64, a: f64, b: f64) -> Result<(f64, f64)> {
    if !(mu > 0.0 && a > 0.0 && b > 0.0 && b < 1.0 && a + b > 1.0) || !(mu.is_finite() && a.is_finite()) {
        return Err(Error::Config(format!(
            "weighted tail integral needs mu > 0, a > 0, 0 < b < 1, a + b > 1 (got mu = {mu}, a = {a}, b = {b})"
        )));
    }
    let c = a + b - 1.0;
    let scale = mu.powf(-c);
    let near = integrate(
        |w| {
            let x = w.powf(1.0 / (1.0 - b));
            Ok((1.0 + x).powf(-a) / (1.0 - b))
        },
        0.0,
        1.0,
        1e-13,
    )?;
    let far = integrate(
        |w| {
            let s = w.powf(1.0 / c);
            Ok((1.0 + s).powf(-a) / c)
        },
        0.0,
        1.0,
        1e-13,
    )?;
    let value = scale * (near + far);
    Ok((value, value * mu.powf(c)))
}
