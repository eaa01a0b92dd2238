//! Divergence identities of the energy and momentum densities.

use super::densities;
use crate::cauchy::CauchyRun;
use crate::error::{Error, Result};
use crate::grid::GHOST;
use crate::state::CauchyState;

/// r (e - m), r (e + m) and their e^beta-weighted versions at cell centres.
#[derive(Clone, Debug, Default)]
pub struct FluxSquares {
    pub f2: Vec<f64>,
    pub g2: Vec<f64>,
    pub f2_hat: Vec<f64>,
    pub g2_hat: Vec<f64>,
}

pub fn flux_squares(state: &CauchyState, mass_m: f64) -> FluxSquares {
    let d = densities(state, mass_m);
    let g = &state.grid;
    let mut out = FluxSquares::default();
    for i in 0..g.n_cells {
        let r = g.center(i);
        let eb = state.beta[i + GHOST].exp();
        let f2 = r * (d.e[i] - d.m_dens[i]);
        let g2 = r * (d.e[i] + d.m_dens[i]);
        out.f2.push(f2);
        out.g2.push(g2);
        out.f2_hat.push(eb * f2);
        out.g2_hat.push(eb * g2);
    }
    out
}

/// Per-cell ingredients of the two identities on one slice.
struct Fluxes {
    /// r e^beta e, r e^alpha m, r e^beta m, r e^alpha e.
    energy_t: Vec<f64>,
    momentum_r: Vec<f64>,
    momentum_t: Vec<f64>,
    energy_r: Vec<f64>,
}

fn fluxes(state: &CauchyState, mass_m: f64) -> Fluxes {
    let d = densities(state, mass_m);
    let g = &state.grid;
    let n = g.n_cells;
    let mut out = Fluxes {
        energy_t: Vec::with_capacity(n),
        momentum_r: Vec::with_capacity(n),
        momentum_t: Vec::with_capacity(n),
        energy_r: Vec::with_capacity(n),
    };
    for i in 0..n {
        let r = g.center(i);
        let (ea, eb) = (state.alpha[i + GHOST].exp(), state.beta[i + GHOST].exp());
        out.energy_t.push(r * eb * d.e[i]);
        out.momentum_r.push(r * ea * d.m_dens[i]);
        out.momentum_t.push(r * eb * d.m_dens[i]);
        out.energy_r.push(r * ea * d.e[i]);
    }
    out
}

/// Source of the momentum identity at cell i.
fn momentum_source(state: &CauchyState, mass_m: f64, i: usize) -> f64 {
    let g = &state.grid;
    let k = i + GHOST;
    let r = g.center(i);
    let (alpha, beta, gamma, phi) = (state.alpha[k], state.beta[k], state.gamma[k], state.phi[k]);
    let gr = g.d1(&state.gamma, i);
    let pr = g.d1(&state.phi, i);
    let alpha_r = g.d1(&state.alpha, i);
    let tg = (-alpha).exp() * state.gamma_t[k];
    let tp = (-alpha).exp() * state.phi_t[k];
    let rg = (-beta).exp() * gr;
    let rp = (-beta).exp() * pr;
    let mass = mass_m * mass_m * (-2.0 * gamma).exp();
    let f = mass * phi * phi;
    let m_dens = (-alpha - beta).exp() * (2.0 * state.gamma_t[k] * gr + state.phi_t[k] * pr);
    let base = 0.5 * (-2.0 * tg * tg - tp * tp + 2.0 * rg * rg + rp * rp) - 2.0 * mass * r * (phi * pr - phi * phi * gr)
        - 0.5 * f;
    0.5 * r * alpha.exp() * alpha_r * (2.0 * tg * tg + tp * tp + 2.0 * rg * rg + rp * rp - f) + alpha.exp() * base
        - r * state.beta_t[k] * beta.exp() * m_dens
}

/// Max-norm residuals of d_t(r e^beta e) - d_r(r e^alpha m) = 0 and
/// d_t(r e^beta m) - d_r(r e^alpha e) = L around stored snapshot `index`.
pub fn identity_residuals(run: &CauchyRun, index: usize) -> Result<(f64, f64)> {
    let len = run.snapshots.len();
    if index == 0 || index + 1 >= len {
        return Err(Error::Index { index, len });
    }
    let m = run.config.mass_m;
    let (prev, mid, next) = (&run.snapshots[index - 1], &run.snapshots[index], &run.snapshots[index + 1]);
    let (fp, fm, fn_) = (fluxes(prev, m), fluxes(mid, m), fluxes(next, m));
    let dt2 = next.time - prev.time;
    let h2 = 2.0 * mid.grid.spacing;
    let n = mid.grid.n_cells;
    let (mut res_energy, mut res_momentum) = (0.0f64, 0.0f64);
    for i in 1..n.saturating_sub(3) {
        let energy_defect = (fn_.energy_t[i] - fp.energy_t[i]) / dt2 - (fm.momentum_r[i + 1] - fm.momentum_r[i - 1]) / h2;
        let momentum_defect = (fn_.momentum_t[i] - fp.momentum_t[i]) / dt2
            - (fm.energy_r[i + 1] - fm.energy_r[i - 1]) / h2
            - momentum_source(mid, m, i);
        res_energy = res_energy.max(energy_defect.abs());
        res_momentum = res_momentum.max(momentum_defect.abs());
    }
    Ok((res_energy, res_momentum))
}
