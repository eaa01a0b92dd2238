//! Densities, energies and the quantities tracked along backward light cones.

mod axis;
mod cone;
mod identities;
mod sups;
mod table;

pub use axis::{axis_geometry, fit_loglog_slope, AxisGeometry};
pub use cone::{
    energy_cone, flux_pt, mantle_radius, nonconcentration_suite, ConeSpec, FluxReport, IngoingRay, NonConcentration,
};
pub use identities::{flux_squares, identity_residuals, FluxSquares};
pub use table::diagnostics_table;
pub use sups::{morawetz_integral, morawetz_series, weighted_sups, weighted_sups_series, WeightedSups};

use std::f64::consts::PI;

use crate::grid::GHOST;
use crate::state::CauchyState;

/// Pointwise energy, momentum, mass-potential and kinetic densities at cell centres.
#[derive(Clone, Debug, Default)]
pub struct Densities {
    pub e: Vec<f64>,
    pub m_dens: Vec<f64>,
    pub f: Vec<f64>,
    pub e_kin: Vec<f64>,
}

pub fn densities(state: &CauchyState, mass_m: f64) -> Densities {
    let g = &state.grid;
    let n = g.n_cells;
    let mut out = Densities {
        e: vec![0.0; n],
        m_dens: vec![0.0; n],
        f: vec![0.0; n],
        e_kin: vec![0.0; n],
    };
    for i in 0..n {
        let k = i + GHOST;
        let gr = g.d1(&state.gamma, i);
        let pr = g.d1(&state.phi, i);
        let (gt, pt) = (state.gamma_t[k], state.phi_t[k]);
        let ea = (-2.0 * state.alpha[k]).exp();
        let eb = (-2.0 * state.beta[k]).exp();
        let f = mass_m * mass_m * (-2.0 * state.gamma[k]).exp() * state.phi[k] * state.phi[k];
        out.e_kin[i] = 0.5 * ea * (2.0 * gt * gt + pt * pt);
        out.e[i] = out.e_kin[i] + eb * (gr * gr + 0.5 * pr * pr) + 0.5 * f;
        out.m_dens[i] = (-state.alpha[k] - state.beta[k]).exp() * (2.0 * gt * gr + pt * pr);
        out.f[i] = f;
    }
    out
}

/// Energy density split into the part living at cell centres (time derivatives and
/// mass term) and the radial-gradient part living on the faces r_{i+1/2}.
/// Both are weighted by 2 pi r e^beta, ready for piecewise-constant integration.
pub(crate) struct EnergyPieces {
    pub center: Vec<f64>,
    pub face: Vec<f64>,
}

pub(crate) fn energy_pieces(state: &CauchyState, mass_m: f64) -> EnergyPieces {
    let g = &state.grid;
    let n = g.n_cells;
    let h = g.spacing;
    let mut center = vec![0.0; n];
    let mut face = vec![0.0; n];
    for i in 0..n {
        let k = i + GHOST;
        let r = g.center(i);
        let (gt, pt, phi) = (state.gamma_t[k], state.phi_t[k], state.phi[k]);
        let kin = 0.5 * (-2.0 * state.alpha[k]).exp() * (2.0 * gt * gt + pt * pt);
        let pot = 0.5 * mass_m * mass_m * (-2.0 * state.gamma[k]).exp() * phi * phi;
        center[i] = 2.0 * PI * r * state.beta[k].exp() * (kin + pot);
        if i + 1 < n {
            let rf = r + 0.5 * h;
            let bf = 0.5 * (state.beta[k] + state.beta[k + 1]);
            let gr = (state.gamma[k + 1] - state.gamma[k]) / h;
            let pr = (state.phi[k + 1] - state.phi[k]) / h;
            face[i] = 2.0 * PI * rf * (-bf).exp() * (gr * gr + 0.5 * pr * pr);
        }
    }
    EnergyPieces { center, face }
}

impl EnergyPieces {
    /// Integral over [0, radius] (whole grid if None) of the piecewise-constant densities:
    /// centre pieces occupy their cell, face pieces the interval between adjacent centres.
    pub fn integrate(&self, h: f64, radius: Option<f64>) -> f64 {
        let n = self.center.len();
        let limit = radius.unwrap_or(f64::INFINITY).max(0.0);
        let mut total = 0.0;
        for i in 0..n {
            let lo = i as f64 * h;
            total += self.center[i] * overlap(lo, lo + h, limit);
            let lo = (i as f64 + 0.5) * h;
            total += self.face[i] * overlap(lo, lo + h, limit);
        }
        total
    }
}

fn overlap(lo: f64, hi: f64, limit: f64) -> f64 {
    (hi.min(limit) - lo).clamp(0.0, hi - lo)
}

/// E(t, r): 2 pi times the integral of e r e^beta over [0, up_to_r] (the whole grid if None).
pub fn energy(state: &CauchyState, mass_m: f64, up_to_r: Option<f64>) -> f64 {
    energy_pieces(state, mass_m).integrate(state.grid.spacing, up_to_r)
}

/// One row of the diagnostics time series.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DiagnosticsRecord {
    pub time: f64,
    pub e_total: f64,
    pub e_cone: f64,
    pub flux_pt: f64,
    pub potential_cone: f64,
    pub e_ext: f64,
    pub kin_rate: f64,
    pub radial_rate: f64,
    pub x_sup: f64,
    pub ru2_sup: f64,
    pub morawetz_partial: f64,
    pub res_momentum: f64,
    pub res_evolution: f64,
    pub res_energy_identity: f64,
    pub res_momentum_identity: f64,
}

impl DiagnosticsRecord {
    pub const HEADER: &'static str = "time,E_total,E_cone,flux_PT,potential_cone,E_ext,kin_rate,radial_rate,X_sup,rU2_sup,morawetz_partial,res_momentum,res_213,res_324,res_325";

    pub fn values(&self) -> [f64; 15] {
        [
            self.time,
            self.e_total,
            self.e_cone,
            self.flux_pt,
            self.potential_cone,
            self.e_ext,
            self.kin_rate,
            self.radial_rate,
            self.x_sup,
            self.ru2_sup,
            self.morawetz_partial,
            self.res_momentum,
            self.res_evolution,
            self.res_energy_identity,
            self.res_momentum_identity,
        ]
    }

    pub fn to_csv_row(&self) -> String {
        self.values().iter().map(|v| format!("{v:.17e}")).collect::<Vec<_>>().join(",")
    }
}
