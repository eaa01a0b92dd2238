//! Checks against oracles written out independently here: a fine RK4 of the
//! slice constraints from closed-form profiles, 1D reductions of the flat
//! kernel, and closed forms of the tail integral.

use std::f64::consts::PI;

use ewkg::flat_oracle::{kernel_solve, weighted_tail_integral, Component, SourceSpec};
use ewkg::initial_data::initial_state;
use ewkg::{CauchyState, InitialDataFamily, SimConfig};
use proptest::prelude::*;

/// Symmetrised, peak-normalised gaussian and its derivative.
fn bump(r: f64, c: f64, w: f64) -> (f64, f64) {
    let w2 = w * w;
    let a = (-(r - c).powi(2) / w2).exp();
    let b = (-(r + c).powi(2) / w2).exp();
    let n = 1.0 + (-4.0 * c * c / w2).exp();
    ((a + b) / n, (-2.0 * (r - c) * a - 2.0 * (r + c) * b) / (w2 * n))
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for k in 1..n {
        s += f(a + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

/// (alpha, beta) at radius `r_end` for phi-only data with amplitudes (a0, a1):
/// alpha' = r [e^{2(b-a)} phi_1^2 / 2 + phi_r^2 / 2 - m^2 e^{2b} phi^2 / 2],
/// beta'  = same with the mass term added.
fn constraint_oracle(a0: f64, a1: f64, c: f64, w: f64, m: f64, r_end: f64, steps: usize) -> (f64, f64) {
    let rhs = |r: f64, y: [f64; 2]| {
        let (p, pr) = bump(r, c, w);
        let (phi, phi_r, phi_t) = (a0 * p, a0 * pr, a1 * p);
        let kin = r * (2.0 * (y[1] - y[0])).exp() * 0.5 * phi_t * phi_t;
        let grad = r * 0.5 * phi_r * phi_r;
        let pot = 0.5 * m * m * r * (2.0 * y[1]).exp() * phi * phi;
        [kin + grad - pot, kin + grad + pot]
    };
    let h = r_end / steps as f64;
    let mut y = [0.0, 0.0];
    for k in 0..steps {
        let r = k as f64 * h;
        let k1 = rhs(r, y);
        let k2 = rhs(r + 0.5 * h, [y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]]);
        let k3 = rhs(r + 0.5 * h, [y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]]);
        let k4 = rhs(r + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
        for i in 0..2 {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    (y[0], y[1])
}

#[test]
fn constraint_solve_matches_fine_ode() {
    for (amp, amp_t, m) in [(0.3, 0.0, 0.0), (0.2, 0.1, 1.0), (0.15, -0.1, 1.5)] {
        let cfg = SimConfig {
            n_cells: 1024,
            r_max: 16.0,
            mass_m: m,
            data_family: InitialDataFamily { amp_phi_t: amp_t, ..InitialDataFamily::gaussian_phi(amp, 4.0, 1.0) },
            ..Default::default()
        };
        let s = initial_state(&cfg).unwrap();
        let scale = s.beta.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        for i in [10usize, 200, 256, 300, 700] {
            let r = s.grid.center(i);
            let (alpha, beta) = constraint_oracle(amp, amp_t, 4.0, 1.0, m, r, 40_000);
            let k = CauchyState::interior_index(i);
            assert!((s.alpha[k] - alpha).abs() < 1e-7 * scale.max(1.0), "alpha at r = {r}: {} vs {alpha}", s.alpha[k]);
            assert!((s.beta[k] - beta).abs() < 1e-7 * scale.max(1.0), "beta at r = {r}: {} vs {beta}", s.beta[k]);
        }
    }
}

#[test]
fn massless_static_data_have_equal_exponents_in_closed_form() {
    // alpha = beta = int_0^r s phi'(s)^2 / 2 ds
    let cfg = SimConfig {
        n_cells: 1024,
        r_max: 16.0,
        mass_m: 0.0,
        data_family: InitialDataFamily::gaussian_phi(0.4, 3.0, 0.8),
        ..Default::default()
    };
    let s = initial_state(&cfg).unwrap();
    for i in [50usize, 192, 400, 1000] {
        let r = s.grid.center(i);
        let exact = simpson(|x| 0.5 * x * (0.4 * bump(x, 3.0, 0.8).1).powi(2), 0.0, r, 20_000);
        let k = CauchyState::interior_index(i);
        assert!((s.beta[k] - exact).abs() < 1e-7, "{} vs {exact}", s.beta[k]);
        assert!((s.alpha[k] - s.beta[k]).abs() < 1e-14);
    }
}

#[test]
fn axis_value_of_the_kernel_matches_its_one_dimensional_reduction() {
    // At x = 0 the angular mean is trivial: U(t, 0) = d/dt [t I_f(t)] + t I_g(t),
    // I_f(t) = int_0^{pi/2} f(t sin th) sin th dth.
    let fam = InitialDataFamily { amp_phi_t: 0.3, ..InitialDataFamily::gaussian_phi(0.5, 2.0, 0.7) };
    let f = |r: f64| 0.5 * bump(r, 2.0, 0.7).0;
    let g = |r: f64| 0.3 * bump(r, 2.0, 0.7).0;
    let mean = |q: &dyn Fn(f64) -> f64, t: f64| simpson(|th| q(t * th.sin()) * th.sin(), 0.0, PI / 2.0, 4000);
    for t in [0.5, 1.5, 2.0, 3.0, 5.0] {
        let d = 1e-4;
        let data = ((t + d) * mean(&f, t + d) - (t - d) * mean(&f, t - d)) / (2.0 * d);
        let expected = data + t * mean(&g, t);
        let u = kernel_solve(&SourceSpec::zero(), &fam, Component::Phi, &[(t, 0.0)]).unwrap()[0];
        assert!((u - expected).abs() < 1e-6, "t = {t}: {u} vs {expected}");
    }
}

#[test]
fn ball_source_against_a_different_substitution() {
    // -(1/2pi) int dtau int_{|y| < s} h / sqrt(s^2 - |y|^2) dy at the centre, inner
    // integral by rho = s (1 - w^2) instead of the sine substitution.
    for t0 in [0.3, 0.7, 1.0] {
        let inner = |s: f64| simpson(|w| 2.0 * s * (1.0 - w * w) / (2.0 - w * w).sqrt(), 0.0, 1.0, 2000);
        let expected = -simpson(|tau| inner(t0 - tau), 0.0, t0, 2000);
        let src = SourceSpec::constant_ball(1.0, 1.0, (0.0, 10.0));
        let u = kernel_solve(&src, &InitialDataFamily::zero(), Component::Phi, &[(t0, 0.0)]).unwrap()[0];
        assert!((u - expected).abs() < 1e-6, "T0 = {t0}: {u} vs {expected}");
        assert!((expected + 0.5 * t0 * t0).abs() < 1e-9);
    }
}

#[test]
fn kernel_is_linear_in_source_and_data() {
    let fam = InitialDataFamily::gaussian_phi(0.2, 1.5, 0.6);
    let src = SourceSpec::gaussian_pulse(0.4, 1.0, 0.5, 0.5, 0.3);
    let ev = [(1.2, 0.4), (2.0, 1.0)];
    let both = kernel_solve(&src, &fam, Component::Phi, &ev).unwrap();
    let data_only = kernel_solve(&SourceSpec::zero(), &fam, Component::Phi, &ev).unwrap();
    let src_only = kernel_solve(&src, &InitialDataFamily::zero(), Component::Phi, &ev).unwrap();
    for k in 0..ev.len() {
        assert!((both[k] - data_only[k] - src_only[k]).abs() < 2e-6);
    }
}

#[test]
fn two_dimensional_tail_persists_after_the_pulse_passes() {
    // compact bump of radius ~ 2 around the origin; the front has left r = 0 by t = 6
    let fam = InitialDataFamily::gaussian_phi(1.0, 0.0, 0.4);
    let u = kernel_solve(&SourceSpec::zero(), &fam, Component::Phi, &[(6.0, 0.0), (10.0, 0.0)]).unwrap();
    assert!(u[0].abs() > 1e-4 && u[1].abs() > 1e-5, "{u:?}");
}

#[test]
fn tail_integral_closed_forms() {
    // a = 1: mu^{-b} pi / sin(pi b);  a = 2, b = 1/2: (pi / 2) mu^{-3/2}
    for mu in [1e-2, 0.1, 1.0, 10.0, 1e2] {
        for b in [0.25, 1.0 / 3.0, 0.5, 0.8] {
            let (v, _) = weighted_tail_integral(mu, 1.0, b).unwrap();
            let exact = mu.powf(-b) * PI / (PI * b).sin();
            assert!((v - exact).abs() < 1e-9 * exact, "mu = {mu}, b = {b}: {v} vs {exact}");
        }
        let (v, ratio) = weighted_tail_integral(mu, 2.0, 0.5).unwrap();
        assert!((v - 0.5 * PI * mu.powf(-1.5)).abs() < 1e-9 * v);
        assert!((ratio - 0.5 * PI).abs() < 1e-9);
    }
}

proptest! {
    #[test]
    fn tail_ratio_is_scale_free(log_mu in -2.0f64..2.0, b in 0.05f64..0.95, a in 0.2f64..3.0) {
        prop_assume!(a + b > 1.05);
        let (_, r1) = weighted_tail_integral(10f64.powf(log_mu), a, b).unwrap();
        let (_, r2) = weighted_tail_integral(1.0, a, b).unwrap();
        prop_assert!((r1 - r2).abs() < 1e-8 * r2);
    }

    #[test]
    fn tail_integral_rejects_excluded_parameters(mu in 0.01f64..10.0, b in 1.0f64..3.0) {
        prop_assert!(weighted_tail_integral(mu, 1.0, b).is_err());
        prop_assert!(weighted_tail_integral(-mu, 1.0, 0.5).is_err());
    }
}
