//! Method-of-lines evolution of the (t, r) system with the metric re-solved at every stage.

use crate::config::SimConfig;
use crate::error::{Error, Result};
use crate::grid::{fill_ghosts, RadialGrid, GHOST};
use crate::initial_data::solve_constraints;
use crate::state::CauchyState;

/// (gamma_tt, phi_tt) at interior cells, in the flux form
/// e^{a}/r d_r(r e^{a} U_r) with a = alpha - beta evaluated on faces.
pub fn field_accelerations(state: &CauchyState, mass_m: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let g = &state.grid;
    let n = g.n_cells;
    let h = g.spacing;
    let m2 = mass_m * mass_m;
    let lapse = |k: usize| state.alpha[k] - state.beta[k];
    let mut gamma_tt = vec![0.0; n];
    let mut phi_tt = vec![0.0; n];
    for i in 0..n {
        let k = i + GHOST;
        let r = g.center(i);
        let a = lapse(k);
        let w_out = (r + 0.5 * h) * (0.5 * (a + lapse(k + 1))).exp();
        let w_in = (r - 0.5 * h) * (0.5 * (a + lapse(k - 1))).exp();
        let scale = a.exp() / (r * h * h);
        let op = |u: &[f64]| scale * (w_out * (u[k + 1] - u[k]) - w_in * (u[k] - u[k - 1]));
        let damping = state.beta_t[k] - state.alpha_t[k];
        let mass = m2 * (2.0 * (state.alpha[k] - state.gamma[k])).exp();
        let phi = state.phi[k];
        gamma_tt[i] = -damping * state.gamma_t[k] + op(&state.gamma) + 0.5 * mass * phi * phi;
        phi_tt[i] = -damping * state.phi_t[k] + op(&state.phi) - mass * phi;
    }
    if gamma_tt.iter().chain(&phi_tt).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("field accelerations"));
    }
    Ok((gamma_tt, phi_tt))
}

/// Time derivative of the evolved quartet (gamma, gamma_t, phi, phi_t) at interior cells.
fn rates(state: &CauchyState, mass_m: f64) -> Result<[Vec<f64>; 4]> {
    let (gtt, ptt) = field_accelerations(state, mass_m)?;
    let n = state.grid.n_cells;
    let inner = |p: &[f64]| p[GHOST..GHOST + n].to_vec();
    Ok([inner(&state.gamma_t), gtt, inner(&state.phi_t), ptt])
}

fn stage_state(base: &CauchyState, k: &[Vec<f64>; 4], factor: f64, time: f64, config: &SimConfig) -> Result<CauchyState> {
    let mut s = base.clone();
    s.time = time;
    {
        let targets = [&mut s.gamma, &mut s.gamma_t, &mut s.phi, &mut s.phi_t];
        for (p, rate) in targets.into_iter().zip(k) {
            for (i, r) in rate.iter().enumerate() {
                p[i + GHOST] += factor * r;
            }
            fill_ghosts(p);
        }
    }
    if !config.frozen_metric {
        solve_constraints(&mut s, config.mass_m)?;
    }
    Ok(s)
}

/// One classical RK4 step; the returned state carries freshly solved metric functions.
pub fn step_cauchy(state: &CauchyState, dt: f64, config: &SimConfig) -> Result<CauchyState> {
    let bound = config.cfl * state.grid.spacing;
    if dt > bound * (1.0 + 1e-12) {
        return Err(Error::Cfl { dt, bound });
    }
    let m = config.mass_m;
    let t = state.time;
    let k1 = rates(state, m)?;
    let s2 = stage_state(state, &k1, 0.5 * dt, t + 0.5 * dt, config)?;
    let k2 = rates(&s2, m)?;
    let s3 = stage_state(state, &k2, 0.5 * dt, t + 0.5 * dt, config)?;
    let k3 = rates(&s3, m)?;
    let s4 = stage_state(state, &k3, dt, t + dt, config)?;
    let k4 = rates(&s4, m)?;
    let n = state.grid.n_cells;
    let combined: [Vec<f64>; 4] = std::array::from_fn(|c| {
        (0..n).map(|i| (k1[c][i] + 2.0 * k2[c][i] + 2.0 * k3[c][i] + k4[c][i]) / 6.0).collect()
    });
    let next = stage_state(state, &combined, dt, t + dt, config)?;
    if !next.is_finite() {
        return Err(Error::NonFinite("cauchy step"));
    }
    Ok(next)
}

/// Per-step constraint monitors.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ResidualRow {
    pub time: f64,
    pub momentum: f64,
    pub evolution: f64,
}

#[derive(Clone, Debug)]
pub struct CauchyRun {
    pub config: SimConfig,
    pub dt: f64,
    pub store_every: usize,
    pub snapshots: Vec<CauchyState>,
    pub residual_history: Vec<ResidualRow>,
}

/// Step size: the largest dt <= cfl * spacing dividing t_final evenly.
pub fn time_step(config: &SimConfig, grid: &RadialGrid) -> (f64, usize) {
    let bound = config.cfl * grid.spacing;
    let steps = ((config.t_final / bound) - 1e-9).ceil().max(1.0) as usize;
    (config.t_final / steps as f64, steps)
}

impl CauchyRun {
    /// Evolves `initial` to `config.t_final`, keeping every `store_every`-th state.
    pub fn evolve(config: &SimConfig, initial: CauchyState, store_every: usize) -> Result<CauchyRun> {
        let store_every = store_every.max(1);
        let (dt, steps) = time_step(config, &initial.grid);
        let mut snapshots = vec![initial.clone()];
        let mut residual_history = Vec::with_capacity(steps);
        let mut window: Vec<CauchyState> = vec![initial];
        for step in 1..=steps {
            let next = step_cauchy(window.last().unwrap(), dt, config)?;
            if step % store_every == 0 {
                snapshots.push(next.clone());
            }
            window.push(next);
            if window.len() == 3 {
                let row = ResidualRow {
                    time: window[1].time,
                    momentum: momentum_residual(&window[0], &window[1], &window[2]),
                    evolution: evolution_residual(&window[0], &window[1], &window[2], config.mass_m),
                };
                residual_history.push(row);
                window.remove(0);
            }
        }
        Ok(CauchyRun {
            config: config.clone(),
            dt,
            store_every,
            snapshots,
            residual_history,
        })
    }

    /// Spacing in time between stored snapshots.
    pub fn snapshot_dt(&self) -> f64 {
        self.dt * self.store_every as f64
    }

    pub fn grid(&self) -> RadialGrid {
        self.snapshots[0].grid
    }

    pub fn last(&self) -> &CauchyState {
        self.snapshots.last().unwrap()
    }

    pub fn times(&self) -> Vec<f64> {
        self.snapshots.iter().map(|s| s.time).collect()
    }

    /// Largest residual of each kind over the whole run.
    pub fn max_residuals(&self) -> (f64, f64) {
        self.residual_history
            .iter()
            .fold((0.0, 0.0), |(a, b), r| (f64::max(a, r.momentum), f64::max(b, r.evolution)))
    }

    /// Value and radial derivative of a profile at (t, r): cubic Lagrange in t across
    /// stored snapshots, the grid sampler in r. Times outside the run are clamped.
    pub fn sample(&self, pick: fn(&CauchyState) -> &Vec<f64>, t: f64, r: f64) -> (f64, f64) {
        let len = self.snapshots.len();
        let g = self.grid();
        if len < 4 {
            let k = ((t / self.snapshot_dt()).round().max(0.0) as usize).min(len - 1);
            return g.sample(pick(&self.snapshots[k]), r);
        }
        let x = (t / self.snapshot_dt()).clamp(0.0, (len - 1) as f64);
        let base = (x.floor() as usize).clamp(1, len - 3);
        let s = x - base as f64;
        let w = [
            -s * (s - 1.0) * (s - 2.0) / 6.0,
            (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0,
            -(s + 1.0) * s * (s - 2.0) / 2.0,
            (s + 1.0) * s * (s - 1.0) / 6.0,
        ];
        let mut out = (0.0, 0.0);
        for (q, wq) in w.iter().enumerate() {
            let (v, d) = g.sample(pick(&self.snapshots[base + q - 1]), r);
            out.0 += wq * v;
            out.1 += wq * d;
        }
        out
    }

    /// Coordinate speed e^{alpha - beta} of ingoing light rays at (t, r).
    pub fn light_speed(&self, t: f64, r: f64) -> f64 {
        let a = self.sample(|s| &s.alpha, t, r).0;
        let b = self.sample(|s| &s.beta, t, r).0;
        (a - b).exp()
    }

    fn triple(&self, index: usize) -> Result<(&CauchyState, &CauchyState, &CauchyState)> {
        let len = self.snapshots.len();
        if index == 0 || index + 1 >= len {
            return Err(Error::Index { index, len });
        }
        Ok((&self.snapshots[index - 1], &self.snapshots[index], &self.snapshots[index + 1]))
    }
}

/// Interior cells on which residuals are measured; the last two feel the copy-out boundary.
fn residual_cells(grid: &RadialGrid) -> std::ops::Range<usize> {
    0..grid.n_cells.saturating_sub(2)
}

/// max |(beta^{+} - beta^{-}) / (2 dt) - beta_t| over the middle slice.
pub fn momentum_residual(prev: &CauchyState, mid: &CauchyState, next: &CauchyState) -> f64 {
    let dt2 = next.time - prev.time;
    residual_cells(&mid.grid)
        .map(|i| {
            let k = i + GHOST;
            ((next.beta[k] - prev.beta[k]) / dt2 - mid.beta_t[k]).abs()
        })
        .fold(0.0, f64::max)
}

/// max-norm residual of the second-order evolution equation for the metric, with
/// centred differences in t and r on the middle slice.
pub fn evolution_residual(prev: &CauchyState, mid: &CauchyState, next: &CauchyState, mass_m: f64) -> f64 {
    let g = &mid.grid;
    let dt = 0.5 * (next.time - prev.time);
    residual_cells(g)
        .map(|i| {
            let k = i + GHOST;
            let (alpha, beta) = (mid.alpha[k], mid.beta[k]);
            let ea = (-2.0 * alpha).exp();
            let eb = (-2.0 * beta).exp();
            let alpha_r = g.d1(&mid.alpha, i);
            let beta_r = g.d1(&mid.beta, i);
            let beta_tt = (next.beta[k] - 2.0 * mid.beta[k] + prev.beta[k]) / (dt * dt);
            let (gt, pt) = (mid.gamma_t[k], mid.phi_t[k]);
            let gr = g.d1(&mid.gamma, i);
            let pr = g.d1(&mid.phi, i);
            let lhs = eb * g.d2(&mid.alpha, i) - ea * beta_tt
                + eb * alpha_r * (alpha_r - beta_r)
                + ea * mid.beta_t[k] * (mid.alpha_t[k] - mid.beta_t[k]);
            let rhs = -0.5 * mass_m * mass_m * (-2.0 * mid.gamma[k]).exp() * mid.phi[k] * mid.phi[k]
                + ea * (gt * gt + 0.5 * pt * pt)
                - eb * (gr * gr + 0.5 * pr * pr);
            (lhs - rhs).abs()
        })
        .fold(0.0, f64::max)
}

/// Residual of the metric evolution equation around stored snapshot `index`.
pub fn residual_evolution(run: &CauchyRun, index: usize) -> Result<f64> {
    let (a, b, c) = run.triple(index)?;
    Ok(evolution_residual(a, b, c, run.config.mass_m))
}

/// Momentum-constraint residual around stored snapshot `index`.
pub fn residual_momentum(run: &CauchyRun, index: usize) -> Result<f64> {
    let (a, b, c) = run.triple(index)?;
    Ok(momentum_residual(a, b, c))
}
