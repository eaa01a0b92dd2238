//! Convergence orders from runs at successive resolution doublings.

use crate::cauchy::CauchyRun;
use crate::config::SimConfig;
use crate::error::{Error, Result};
use crate::flat_oracle::{kernel_solve, Component, SourceSpec};

/// Pairwise orders log2(e_k / e_{k+1}) of quantities that vanish with h.
pub fn observed_orders(values: &[f64]) -> Vec<f64> {
    values.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}

/// Self-convergence order from three resolutions h, h/2, h/4 without an exact value.
pub fn richardson_order(coarse: f64, medium: f64, fine: f64) -> f64 {
    ((coarse - medium).abs() / (medium - fine).abs()).log2()
}

/// Least-squares order over a whole doubling sequence.
pub fn fitted_order(values: &[f64]) -> f64 {
    let h: Vec<f64> = (0..values.len()).map(|k| 0.5f64.powi(k as i32)).collect();
    crate::diagnostics::fit_loglog_slope(&h, values)
}

/// Twenty (t, r) events spread over the run: four times and five radii
/// scaled to the pulse centre.
pub fn oracle_events(config: &SimConfig) -> Vec<(f64, f64)> {
    let c = config.data_family.center.max(1.0);
    let mut events = Vec::with_capacity(20);
    for tf in [0.25, 0.5, 0.75, 1.0] {
        for rf in [0.0, 0.25, 0.625, 1.0, 1.625] {
            events.push((tf * config.t_final, rf * c));
        }
    }
    events
}

/// Kernel-oracle values of phi at `events` for the run's data.
pub fn oracle_values(config: &SimConfig, events: &[(f64, f64)]) -> Result<Vec<f64>> {
    if config.mass_m != 0.0 || !config.frozen_metric {
        return Err(Error::Config("the flat kernel oracle needs mass_m = 0 and a frozen metric".into()));
    }
    kernel_solve(&SourceSpec::zero(), &config.data_family, Component::Phi, events)
}

/// max |phi_run - phi_exact| / max |phi_exact| over the events.
pub fn relative_event_error(run: &CauchyRun, events: &[(f64, f64)], exact: &[f64]) -> f64 {
    let scale = exact.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    let err = events
        .iter()
        .zip(exact)
        .map(|(&(t, r), e)| (run.sample(|s| &s.phi, t, r).0 - e).abs())
        .fold(0.0f64, f64::max);
    err / scale
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_of_a_second_order_sequence() {
        let e = [4e-3, 1e-3, 2.5e-4];
        assert!(observed_orders(&e).iter().all(|o| (o - 2.0).abs() < 1e-12));
        assert!((fitted_order(&e) - 2.0).abs() < 1e-12);
        // q(h) = 1 + h^2
        assert!((richardson_order(1.0 + 1.0, 1.0 + 0.25, 1.0 + 0.0625) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn twenty_events_inside_the_run() {
        let cfg = SimConfig::default();
        let ev = oracle_events(&cfg);
        assert_eq!(ev.len(), 20);
        assert!(ev.iter().all(|&(t, r)| t > 0.0 && t <= cfg.t_final && r >= 0.0 && r < cfg.r_max));
    }
}
