//! Cell-centred radial mesh, parity ghost cells and axis extrapolation.
//!
//! Field profiles are stored with two ghost cells on each side: indices 0 and 1
//! mirror cells 1 and 0 across r = 0, and the two outer ghosts copy the last
//! interior value (outflow). Interior cell `i` lives at array index `i + GHOST`.

use crate::config::SimConfig;
use crate::error::{Error, Result};

pub const GHOST: usize = 2;
const MIN_CELLS: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadialGrid {
    pub n_cells: usize,
    pub spacing: f64,
    pub n_ghost: usize,
}

/// Builds the cell-centred grid described by a configuration.
pub fn build_grid(config: &SimConfig) -> Result<RadialGrid> {
    RadialGrid::new(config.n_cells, config.r_max)
}

impl RadialGrid {
    pub fn new(n_cells: usize, r_max: f64) -> Result<Self> {
        if n_cells < MIN_CELLS {
            return Err(Error::Config(format!(
                "n_cells = {n_cells} is below the stencil minimum {MIN_CELLS}"
            )));
        }
        Self::with_cells_unchecked(n_cells, r_max)
    }

    /// Skips the stencil-width check; used for tiny hand-checked grids.
    pub fn with_cells_unchecked(n_cells: usize, r_max: f64) -> Result<Self> {
        if !(r_max.is_finite() && r_max > 0.0) || n_cells == 0 {
            return Err(Error::Config(format!("invalid grid extent r_max = {r_max}")));
        }
        Ok(RadialGrid {
            n_cells,
            spacing: r_max / n_cells as f64,
            n_ghost: GHOST,
        })
    }

    pub fn r_max(&self) -> f64 {
        self.spacing * self.n_cells as f64
    }

    /// Radius of interior cell `i`.
    #[inline]
    pub fn center(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.spacing
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.n_cells).map(|i| self.center(i)).collect()
    }

    /// Array length of a profile including ghosts.
    pub fn storage_len(&self) -> usize {
        self.n_cells + 2 * GHOST
    }

    pub fn zeros(&self) -> Vec<f64> {
        vec![0.0; self.storage_len()]
    }

    /// Samples `f` at the cell centres and fills the ghosts by even parity.
    pub fn sample_even<F: Fn(f64) -> f64>(&self, f: F) -> Vec<f64> {
        let mut out = self.zeros();
        for i in 0..self.n_cells {
            out[i + GHOST] = f(self.center(i));
        }
        fill_ghosts(&mut out);
        out
    }

    pub fn interior<'a>(&self, profile: &'a [f64]) -> &'a [f64] {
        &profile[GHOST..GHOST + self.n_cells]
    }

    /// Value and radial derivative of an even, ghost-filled profile at radius `r`.
    ///
    /// Uses cubic Lagrange interpolation through the four nearest cells; at a
    /// cell centre the derivative comes from the five-point centred stencil.
    pub fn sample(&self, profile: &[f64], r: f64) -> (f64, f64) {
        let h = self.spacing;
        let x = r.abs() / h - 0.5;
        let sign = if r < 0.0 { -1.0 } else { 1.0 };
        let last = profile.len() as isize - 1;
        let at = |k: isize| profile[(k + GHOST as isize).clamp(0, last) as usize];
        let nearest = x.round();
        if (x - nearest).abs() < 1e-9 {
            let k = nearest as isize;
            let d = (at(k - 2) - 8.0 * at(k - 1) + 8.0 * at(k + 1) - at(k + 2)) / (12.0 * h);
            return (at(k), sign * d);
        }
        let base = x.floor() as isize;
        let s = x - base as f64;
        let (f0, f1, f2, f3) = (at(base - 1), at(base), at(base + 1), at(base + 2));
        // Lagrange basis on nodes -1, 0, 1, 2.
        let w0 = -s * (s - 1.0) * (s - 2.0) / 6.0;
        let w1 = (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0;
        let w2 = -(s + 1.0) * s * (s - 2.0) / 2.0;
        let w3 = (s + 1.0) * s * (s - 1.0) / 6.0;
        let d0 = -(3.0 * s * s - 6.0 * s + 2.0) / 6.0;
        let d1 = (3.0 * s * s - 4.0 * s - 1.0) / 2.0;
        let d2 = -(3.0 * s * s - 2.0 * s - 2.0) / 2.0;
        let d3 = (3.0 * s * s - 1.0) / 6.0;
        let value = w0 * f0 + w1 * f1 + w2 * f2 + w3 * f3;
        let deriv = (d0 * f0 + d1 * f1 + d2 * f2 + d3 * f3) / h;
        (value, sign * deriv)
    }

    /// Centred first difference at interior cell `i`.
    #[inline]
    pub fn d1(&self, profile: &[f64], i: usize) -> f64 {
        let k = i + GHOST;
        (profile[k + 1] - profile[k - 1]) / (2.0 * self.spacing)
    }

    /// Centred second difference at interior cell `i`.
    #[inline]
    pub fn d2(&self, profile: &[f64], i: usize) -> f64 {
        let k = i + GHOST;
        (profile[k + 1] - 2.0 * profile[k] + profile[k - 1]) / (self.spacing * self.spacing)
    }

    /// Conservative cell-centred form of `f_rr + f_r / r`.
    #[inline]
    pub fn radial_laplacian(&self, profile: &[f64], i: usize) -> f64 {
        let k = i + GHOST;
        let h = self.spacing;
        let r = self.center(i);
        let outer = (r + 0.5 * h) * (profile[k + 1] - profile[k]);
        let inner = (r - 0.5 * h) * (profile[k] - profile[k - 1]);
        (outer - inner) / (r * h * h)
    }
}

/// Fills axis ghosts by even reflection and outer ghosts by copy-out.
pub fn fill_ghosts(profile: &mut [f64]) {
    let len = profile.len();
    profile[1] = profile[GHOST];
    profile[0] = profile[GHOST + 1];
    profile[len - 2] = profile[len - 3];
    profile[len - 1] = profile[len - 3];
}

/// Value at r = 0 of the even quadratic `a + b r^2` through the first two cells.
pub fn axis_value(profile: &[f64]) -> f64 {
    (9.0 * profile[GHOST] - profile[GHOST + 1]) / 8.0
}
