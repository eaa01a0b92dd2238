//! Free data on the initial slice and the slice constraint ODEs for the metric
//! exponents alpha and beta.

use std::f64::consts::PI;

use crate::config::{DataKind, InitialDataFamily, SimConfig};
use crate::diagnostics;
use crate::error::{Error, Result};
use crate::grid::{fill_ghosts, RadialGrid, GHOST};
use crate::state::CauchyState;

/// Threshold on |beta| (or |alpha|) beyond which e^{2 beta} is no longer trustworthy.
pub const BLOWUP_BETA: f64 = 50.0;

/// Sampled (gamma_0, gamma_1, phi_0, phi_1), ghost-filled and even.
#[derive(Clone, Debug)]
pub struct FreeData {
    pub gamma0: Vec<f64>,
    pub gamma1: Vec<f64>,
    pub phi0: Vec<f64>,
    pub phi1: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub total_energy: f64,
    pub energy_below_2pi: bool,
    pub gamma_bounds_ok: bool,
    pub beta_axis: f64,
    pub alpha_axis: f64,
    pub max_constraint_residual: f64,
}

/// Even, peak-normalised gaussian bump and its derivative.
fn bump(r: f64, center: f64, width: f64) -> (f64, f64) {
    let w2 = width * width;
    let a = (-(r - center).powi(2) / w2).exp();
    let b = (-(r + center).powi(2) / w2).exp();
    let norm = 1.0 + (-4.0 * center * center / w2).exp();
    let d = (-2.0 * (r - center) * a - 2.0 * (r + center) * b) / w2;
    ((a + b) / norm, d / norm)
}

impl InitialDataFamily {
    /// Effective amplitudes (gamma_0, gamma_1, phi_0, phi_1) after applying `kind`.
    pub fn amplitudes(&self) -> [f64; 4] {
        match self.kind {
            DataKind::Zero => [0.0; 4],
            DataKind::GaussianPhi => [0.0, 0.0, self.amp_phi, self.amp_phi_t],
            DataKind::GaussianBoth => [self.amp_gamma, self.amp_gamma_t, self.amp_phi, self.amp_phi_t],
        }
    }

    /// Closed-form profile value and derivative: index 0..4 = gamma_0, gamma_1, phi_0, phi_1.
    pub fn profile(&self, which: usize, r: f64) -> (f64, f64) {
        let amp = self.amplitudes()[which];
        if amp == 0.0 {
            return (0.0, 0.0);
        }
        let (v, d) = bump(r, self.center, self.width);
        (amp * v, amp * d)
    }
}

pub fn sample_free_data(family: &InitialDataFamily, grid: &RadialGrid) -> Result<FreeData> {
    let [ag, agt, _, _] = family.amplitudes();
    if ag < 0.0 || agt < 0.0 {
        return Err(Error::Config(format!(
            "gamma amplitudes must be non-negative (amp_gamma = {ag}, amp_gamma_t = {agt})"
        )));
    }
    let sample = |which: usize| grid.sample_even(|r| family.profile(which, r).0);
    let data = FreeData {
        gamma0: sample(0),
        gamma1: sample(1),
        phi0: sample(2),
        phi1: sample(3),
    };
    for i in 0..grid.n_cells {
        let r = grid.center(i);
        let (g0, dg0) = family.profile(0, r);
        let (g1, _) = family.profile(1, r);
        if g0 < 0.0 || g1 < 0.0 || dg0 <= -0.5 / r {
            return Err(Error::Config(format!(
                "data violate gamma_0 >= 0, gamma_1 >= 0, gamma_0' > -1/(2r) at r = {r}"
            )));
        }
    }
    Ok(data)
}

/// Matter values entering the constraint right-hand sides at one radius.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct MatterSample {
    pub gamma: f64,
    pub gamma_r: f64,
    pub gamma_t: f64,
    pub phi: f64,
    pub phi_r: f64,
    pub phi_t: f64,
}

impl MatterSample {
    pub fn at(state: &CauchyState, r: f64) -> Self {
        let g = &state.grid;
        let (gamma, gamma_r) = g.sample(&state.gamma, r);
        let (phi, phi_r) = g.sample(&state.phi, r);
        let (gamma_t, _) = g.sample(&state.gamma_t, r);
        let (phi_t, _) = g.sample(&state.phi_t, r);
        MatterSample {
            gamma,
            gamma_r,
            gamma_t,
            phi,
            phi_r,
            phi_t,
        }
    }
}

/// (alpha_r, beta_r) from the two slice constraints.
#[inline]
pub fn metric_rhs(r: f64, alpha: f64, beta: f64, s: &MatterSample, mass_m: f64) -> (f64, f64) {
    let kinetic = r * (2.0 * (beta - alpha)).exp() * (s.gamma_t * s.gamma_t + 0.5 * s.phi_t * s.phi_t);
    let gradient = r * (s.gamma_r * s.gamma_r + 0.5 * s.phi_r * s.phi_r);
    let potential = 0.5 * mass_m * mass_m * r * (2.0 * (beta - s.gamma)).exp() * s.phi * s.phi;
    (kinetic + gradient - potential, kinetic + gradient + potential)
}

/// Classical RK4 from r = 0 through every cell centre. `rhs` maps (r, [alpha, beta])
/// to the derivatives; the returned profiles are ghost-filled.
fn integrate_outward<F>(grid: &RadialGrid, mut rhs: F) -> Result<(Vec<f64>, Vec<f64>)>
where
    F: FnMut(f64, [f64; 2]) -> [f64; 2],
{
    let mut alpha = grid.zeros();
    let mut beta = grid.zeros();
    let mut y = [0.0, 0.0];
    let mut r = 0.0;
    for i in 0..grid.n_cells {
        let target = grid.center(i);
        let h = target - r;
        let k1 = rhs(r, y);
        let k2 = rhs(r + 0.5 * h, [y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]]);
        let k3 = rhs(r + 0.5 * h, [y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]]);
        let k4 = rhs(target, [y[0] + h * k3[0], y[1] + h * k3[1]]);
        for c in 0..2 {
            y[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
        }
        r = target;
        if !(y[0].is_finite() && y[1].is_finite()) || y[0].abs() > BLOWUP_BETA || y[1].abs() > BLOWUP_BETA {
            return Err(Error::Blowup { r, beta: y[1].abs().max(y[0].abs()) });
        }
        alpha[i + GHOST] = y[0];
        beta[i + GHOST] = y[1];
    }
    fill_ghosts(&mut alpha);
    fill_ghosts(&mut beta);
    Ok((alpha, beta))
}

/// Solves the coupled (alpha, beta) constraint system outward from alpha(0) = beta(0) = 0.
pub fn solve_metric(state: &CauchyState, mass_m: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    integrate_outward(&state.grid, |r, y| {
        let s = MatterSample::at(state, r);
        let (a, b) = metric_rhs(r, y[0], y[1], &s, mass_m);
        [a, b]
    })
}

/// Integrates the beta constraint with alpha taken from the state.
pub fn solve_beta_slice(state: &CauchyState, mass_m: f64) -> Result<Vec<f64>> {
    let g = &state.grid;
    let (_, beta) = integrate_outward(g, |r, y| {
        let s = MatterSample::at(state, r);
        let alpha = g.sample(&state.alpha, r).0;
        let (_, b) = metric_rhs(r, alpha, y[1], &s, mass_m);
        [0.0, b]
    })?;
    Ok(beta)
}

/// Integrates the alpha constraint with beta taken from the state.
pub fn solve_alpha_slice(state: &CauchyState, mass_m: f64) -> Result<Vec<f64>> {
    let g = &state.grid;
    let (alpha, _) = integrate_outward(g, |r, y| {
        let s = MatterSample::at(state, r);
        let beta = g.sample(&state.beta, r).0;
        let (a, _) = metric_rhs(r, y[0], beta, &s, mass_m);
        [a, 0.0]
    })?;
    Ok(alpha)
}

/// beta_t = 2 r gamma_t gamma_r + r phi_t phi_r, pointwise.
pub fn beta_t_from_momentum(state: &CauchyState) -> Vec<f64> {
    let g = &state.grid;
    let mut out = g.zeros();
    for i in 0..g.n_cells {
        let r = g.center(i);
        let k = i + GHOST;
        let gamma_r = g.sample(&state.gamma, r).1;
        let phi_r = g.sample(&state.phi, r).1;
        out[k] = r * (2.0 * state.gamma_t[k] * gamma_r + state.phi_t[k] * phi_r);
    }
    fill_ghosts(&mut out);
    out
}

/// alpha_t from the time derivative of the integrated difference of the two
/// constraints: beta - alpha = m^2 int_0^r r' e^{2 beta - 2 gamma} phi^2 dr', so
/// beta_t - alpha_t = m^2 int_0^r 2 r' e^{2 beta - 2 gamma} phi (phi_t + (beta_t - gamma_t) phi) dr'.
pub fn alpha_t_closure(state: &CauchyState, beta_t: &[f64], mass_m: f64) -> Vec<f64> {
    let g = &state.grid;
    let h = g.spacing;
    let m2 = mass_m * mass_m;
    let mut out = g.zeros();
    let mut acc = 0.0;
    for i in 0..g.n_cells {
        let k = i + GHOST;
        let r = g.center(i);
        let phi = state.phi[k];
        let w = 2.0 * r * (2.0 * (state.beta[k] - state.gamma[k])).exp()
            * phi
            * (state.phi_t[k] + (beta_t[k] - state.gamma_t[k]) * phi);
        let diff = m2 * (acc + 0.5 * h * w);
        acc += h * w;
        out[k] = beta_t[k] - diff;
    }
    fill_ghosts(&mut out);
    out
}

/// Re-solves alpha, beta, beta_t and alpha_t from the matter fields in place.
pub fn solve_constraints(state: &mut CauchyState, mass_m: f64) -> Result<()> {
    let (alpha, beta) = solve_metric(state, mass_m)?;
    state.alpha = alpha;
    state.beta = beta;
    state.beta_t = beta_t_from_momentum(state);
    state.alpha_t = alpha_t_closure(state, &state.beta_t, mass_m);
    Ok(())
}

/// Constraint-solved slice at t = 0 for the configured data family.
pub fn initial_state(config: &SimConfig) -> Result<CauchyState> {
    let grid = crate::grid::build_grid(config)?;
    let data = sample_free_data(&config.data_family, &grid)?;
    let mut state = CauchyState::vacuum(grid, 0.0);
    state.gamma = data.gamma0;
    state.gamma_t = data.gamma1;
    state.phi = data.phi0;
    state.phi_t = data.phi1;
    if !config.frozen_metric {
        solve_constraints(&mut state, config.mass_m)?;
    }
    Ok(state)
}

/// Largest pointwise residual of the beta constraint, with beta_r by centred differences.
pub fn hamiltonian_residual(state: &CauchyState, mass_m: f64) -> f64 {
    let g = &state.grid;
    let mut worst = 0.0f64;
    for i in 0..g.n_cells.saturating_sub(2) {
        let k = i + GHOST;
        let r = g.center(i);
        let s = MatterSample {
            gamma: state.gamma[k],
            gamma_r: g.d1(&state.gamma, i),
            gamma_t: state.gamma_t[k],
            phi: state.phi[k],
            phi_r: g.d1(&state.phi, i),
            phi_t: state.phi_t[k],
        };
        let (_, beta_r) = metric_rhs(r, state.alpha[k], state.beta[k], &s, mass_m);
        worst = worst.max((g.d1(&state.beta, i) - beta_r).abs());
    }
    worst
}

pub fn validate_data(state: &CauchyState, config: &SimConfig) -> ValidationReport {
    let g = &state.grid;
    let total_energy = diagnostics::energy(state, config.mass_m, None);
    let mut cond = true;
    for i in 0..g.n_cells {
        let k = i + GHOST;
        let r = g.center(i);
        if state.gamma[k] < 0.0 || state.gamma_t[k] < 0.0 || g.d1(&state.gamma, i) <= -0.5 / r {
            cond = false;
        }
    }
    ValidationReport {
        total_energy,
        energy_below_2pi: total_energy < 2.0 * PI,
        gamma_bounds_ok: cond,
        beta_axis: state.beta_axis(),
        alpha_axis: state.alpha_axis(),
        max_constraint_residual: hamiltonian_residual(state, config.mass_m),
    }
}
