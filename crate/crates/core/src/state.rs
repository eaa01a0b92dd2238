//! Field containers shared by the two evolution schemes.

use crate::grid::{axis_value, fill_ghosts, RadialGrid, GHOST};

/// One constant-t slice of the Cauchy formulation. Every profile carries ghosts.
#[derive(Clone, Debug)]
pub struct CauchyState {
    pub grid: RadialGrid,
    pub time: f64,
    pub gamma: Vec<f64>,
    pub gamma_t: Vec<f64>,
    pub phi: Vec<f64>,
    pub phi_t: Vec<f64>,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub beta_t: Vec<f64>,
    pub alpha_t: Vec<f64>,
}

impl CauchyState {
    pub fn vacuum(grid: RadialGrid, time: f64) -> Self {
        let z = grid.zeros();
        CauchyState {
            grid,
            time,
            gamma: z.clone(),
            gamma_t: z.clone(),
            phi: z.clone(),
            phi_t: z.clone(),
            alpha: z.clone(),
            beta: z.clone(),
            beta_t: z.clone(),
            alpha_t: z,
        }
    }

    fn profiles_mut(&mut self) -> [&mut Vec<f64>; 8] {
        [
            &mut self.gamma,
            &mut self.gamma_t,
            &mut self.phi,
            &mut self.phi_t,
            &mut self.alpha,
            &mut self.beta,
            &mut self.beta_t,
            &mut self.alpha_t,
        ]
    }

    fn profiles(&self) -> [&Vec<f64>; 8] {
        [
            &self.gamma,
            &self.gamma_t,
            &self.phi,
            &self.phi_t,
            &self.alpha,
            &self.beta,
            &self.beta_t,
            &self.alpha_t,
        ]
    }

    /// Refills every ghost cell: even reflection at the axis, copy-out at r_max.
    pub fn apply_axis_parity(mut self) -> Self {
        self.fill_ghosts();
        self
    }

    pub fn fill_ghosts(&mut self) {
        for p in self.profiles_mut() {
            fill_ghosts(p);
        }
    }

    pub fn is_finite(&self) -> bool {
        self.profiles().iter().all(|p| p.iter().all(|v| v.is_finite()))
    }

    pub fn gamma_axis(&self) -> f64 {
        axis_value(&self.gamma)
    }

    pub fn phi_axis(&self) -> f64 {
        axis_value(&self.phi)
    }

    pub fn alpha_axis(&self) -> f64 {
        axis_value(&self.alpha)
    }

    pub fn beta_axis(&self) -> f64 {
        axis_value(&self.beta)
    }

    /// Largest absolute interior value over the evolved matter fields.
    pub fn max_field(&self) -> f64 {
        let g = &self.grid;
        [&self.gamma, &self.gamma_t, &self.phi, &self.phi_t]
            .iter()
            .flat_map(|p| g.interior(p).iter())
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Largest absolute interior value over every stored profile.
    pub fn max_abs(&self) -> f64 {
        let g = &self.grid;
        self.profiles()
            .iter()
            .flat_map(|p| g.interior(p).iter())
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn interior_index(i: usize) -> usize {
        i + GHOST
    }
}

/// One v = const characteristic of the double-null formulation.
///
/// Points are ordered by increasing u, from the initial slice (u = -v) to the
/// axis (u = v). Null derivatives are filled by [`crate::null::NullRun`]
/// once neighbouring slices exist.
#[derive(Clone, Debug, Default)]
pub struct NullSlice {
    pub v: f64,
    pub u_values: Vec<f64>,
    pub r: Vec<f64>,
    pub lambda: Vec<f64>,
    pub gamma: Vec<f64>,
    pub phi: Vec<f64>,
    pub r_u: Vec<f64>,
    pub gamma_u: Vec<f64>,
    pub phi_u: Vec<f64>,
    pub lambda_u: Vec<f64>,
    pub r_uu: Vec<f64>,
    pub r_v: Vec<f64>,
    pub gamma_v: Vec<f64>,
    pub phi_v: Vec<f64>,
    pub lambda_v: Vec<f64>,
    pub r_vv: Vec<f64>,
}

impl NullSlice {
    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    /// Coordinate radius (v - u) / 2 of point `j`.
    pub fn coordinate_radius(&self, j: usize) -> f64 {
        0.5 * (self.v - self.u_values[j])
    }

    pub fn axis_index(&self) -> usize {
        self.len() - 1
    }
}
