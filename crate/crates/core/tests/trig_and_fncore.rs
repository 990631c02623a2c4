use std::f64::consts::{PI, TAU};

use proptest::prelude::*;
use stechkin_core::fncore::{
    alternating_series_sum, gauss_legendre, integrate, integrate_piecewise_polynomial, lp_norm, sup_norm,
};
use stechkin_core::trig::{ell_function, fejer, fourier_coeffs, lebesgue_constant, partial_sum, vallee_poussin};
use stechkin_core::{GridSpec, PeriodicFunction, TrigPoly};

fn poly_strategy(max_deg: usize) -> impl Strategy<Value = TrigPoly> {
    (1..=max_deg).prop_flat_map(|d| {
        (prop::collection::vec(-1.0f64..1.0, d + 1), prop::collection::vec(-1.0f64..1.0, d))
            .prop_map(|(a, b)| TrigPoly::new(a, b).unwrap())
    })
}

fn naive_eval(p: &TrigPoly, x: f64) -> f64 {
    let mut s = 0.5 * p.a(0);
    for j in 1..=p.stored_degree() {
        s += p.a(j) * (j as f64 * x).cos() + p.b(j) * (j as f64 * x).sin();
    }
    s
}

fn dense_max(g: impl Fn(f64) -> f64, n: usize) -> f64 {
    (0..n).map(|i| g(TAU * i as f64 / n as f64).abs()).fold(0.0, f64::max)
}

fn riemann_coeff(f: &PeriodicFunction, j: usize, sine: bool) -> f64 {
    // midpoint rule on a grid aligned with the jumps
    let n = 196_608;
    let h = TAU / n as f64;
    (0..n)
        .map(|i| {
            let x = (i as f64 + 0.5) * h;
            f.eval(x) * if sine { (j as f64 * x).sin() } else { (j as f64 * x).cos() }
        })
        .sum::<f64>()
        * h
        / PI
}

#[test]
fn step_values_and_breakpoints() {
    let f = PeriodicFunction::Step;
    assert_eq!(f.eval(-0.5), 1.0);
    assert_eq!(f.eval(0.5), 0.0);
    assert_eq!(f.eval(-0.5 + TAU), 1.0);
    assert_eq!(f.breakpoints(), vec![0.0, PI]);
}

#[test]
fn closed_form_coefficients_match_quadrature() {
    let grid = GridSpec::default();
    let kinds = [PeriodicFunction::Step, PeriodicFunction::smoothed_step(0.1).unwrap(), PeriodicFunction::favard_sign(3).unwrap()];
    for f in kinds {
        let c = fourier_coeffs(&f, 9, &grid);
        for j in 0..=9 {
            assert!((c.a(j) - riemann_coeff(&f, j, false)).abs() < 1e-6, "{} a_{j}", f.label());
            if j > 0 {
                assert!((c.b(j) - riemann_coeff(&f, j, true)).abs() < 1e-6, "{} b_{j}", f.label());
            }
        }
    }
}

#[test]
fn partial_sums_and_vp_reproduce_low_degree_polynomials() {
    let grid = GridSpec::default();
    let p = TrigPoly::new(vec![0.4, 1.0, -0.5, 0.25], vec![0.3, 0.0, -0.7]).unwrap();
    let f = PeriodicFunction::Trig(p.clone());
    let c = fourier_coeffs(&f, 12, &grid);
    let s = partial_sum(&c, 5).unwrap();
    let v = vallee_poussin(&c, 3, 7).unwrap();
    for x in [0.0, 0.7, 2.1, 4.4] {
        assert!((s.eval(x) - p.eval(x)).abs() < 1e-12);
        assert!((v.eval(x) - p.eval(x)).abs() < 1e-12);
    }
    assert!(partial_sum(&c, 13).is_err());
    assert!(vallee_poussin(&c, 7, 7).is_err());
}

#[test]
fn vp_weights_taper_linearly() {
    let grid = GridSpec::default();
    let p = TrigPoly::new(vec![0.0; 11].into_iter().chain(std::iter::once(0.0)).collect(), vec![1.0; 11]).unwrap();
    let c = fourier_coeffs(&PeriodicFunction::Trig(p), 11, &grid);
    let v = vallee_poussin(&c, 4, 10).unwrap();
    for j in 1..=11 {
        let w = if j <= 4 { 1.0 } else if j < 10 { (10 - j) as f64 / 6.0 } else { 0.0 };
        assert!((v.b(j) - w).abs() < 1e-12, "j={j}");
    }
}

#[test]
fn fejer_means_of_step_stay_in_range() {
    let grid = GridSpec::default();
    let c = fourier_coeffs(&PeriodicFunction::Step, 40, &grid);
    let s = fejer(&c, 30).unwrap();
    for i in 0..2000 {
        let y = s.eval(TAU * i as f64 / 2000.0);
        assert!((-1e-12..=1.0 + 1e-12).contains(&y));
    }
}

#[test]
fn gibbs_overshoot_of_partial_sums() {
    let grid = GridSpec::default();
    let c = fourier_coeffs(&PeriodicFunction::Step, 401, &grid);
    let s = partial_sum(&c, 401).unwrap();
    // the overshoot tends to (1/π)Si(π) − 1/2 ≈ 0.0895
    let over = s.sup_norm(&grid).0 - 1.0;
    assert!((over - 0.0895).abs() < 2e-3, "{over}");
}

#[test]
fn ell_interpolates_lebesgue_constants() {
    for n in [1usize, 3, 8] {
        let ell = ell_function(2.0 * n as f64 + 1.0, 1e-6).unwrap();
        let l = lebesgue_constant(n, 1e-12).value;
        assert!((ell.value - l).abs() < 1e-5, "N={n}: {} vs {l}", ell.value);
    }
}

#[test]
fn lp_norms_of_piecewise_kinds() {
    let grid = GridSpec::default();
    for p in [1.0, 2.0, 3.5] {
        let v = lp_norm(&PeriodicFunction::Step, p, &grid).unwrap();
        assert!((v - PI.powf(1.0 / p)).abs() < 1e-12);
        let f = lp_norm(&PeriodicFunction::favard_sign(5).unwrap(), p, &grid).unwrap();
        assert!((f - TAU.powf(1.0 / p)).abs() < 1e-12);
    }
    // the ramps of width 2ε lose 2ε(1 − 1/(p+1)) of mass against the step
    let eps = 0.2;
    let p = 2.0;
    let v = lp_norm(&PeriodicFunction::smoothed_step(eps).unwrap(), p, &grid).unwrap();
    let mass = PI - 2.0 * eps + 2.0 * (2.0 * eps) / (p + 1.0);
    assert!((v - mass.sqrt()).abs() < 1e-12, "{v}");
    assert!(lp_norm(&PeriodicFunction::Step, 0.5, &grid).is_err());
}

#[test]
fn sup_norm_of_kinds() {
    let grid = GridSpec::default();
    assert_eq!(sup_norm(&PeriodicFunction::Step, &grid), 1.0);
    assert!((sup_norm(&PeriodicFunction::cos_n(7).unwrap(), &grid) - 1.0).abs() < 1e-12);
    assert!((sup_norm(&PeriodicFunction::constant(-2.5), &grid) - 2.5).abs() < 1e-15);
}

#[test]
fn quadrature_primitives() {
    let q = integrate(|x| x.sin().powi(2), 0.0, PI, 1e-12);
    assert!(q.converged && (q.value - PI / 2.0).abs() < 1e-12);
    let v = integrate_piecewise_polynomial(|x| x.abs(), -1.0, 2.0, &[0.0], 1);
    assert!((v - 2.5).abs() < 1e-15);
    let (x, w) = gauss_legendre(5);
    let m4: f64 = x.iter().zip(&w).map(|(t, wt)| wt * t.powi(8)).sum();
    assert!((m4 - 2.0 / 9.0).abs() < 1e-14);
    let ln2 = alternating_series_sum(|i| 1.0 / (i as f64 + 1.0), 1e-12);
    assert!(ln2.converged && (ln2.value - 2f64.ln()).abs() < 1e-10);
}

#[test]
fn constructors_reject_bad_parameters() {
    assert!(PeriodicFunction::cos_n(0).is_err());
    assert!(PeriodicFunction::favard_sign(0).is_err());
    assert!(PeriodicFunction::smoothed_step(0.0).is_err());
    assert!(PeriodicFunction::sampled(vec![1.0; 5]).is_err());
    assert!(GridSpec::new(2, 10).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eval_matches_direct_sum(p in poly_strategy(80), x in -10.0f64..10.0) {
        prop_assert!((p.eval(x) - naive_eval(&p, x)).abs() < 1e-11);
    }

    #[test]
    fn sampling_round_trip(p in poly_strategy(15)) {
        let q = TrigPoly::interpolate_uniform(&p.sample_uniform(64));
        for x in [0.1, 1.3, 4.0] {
            prop_assert!((q.eval(x) - p.eval(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn parseval(p in poly_strategy(20)) {
        let grid = GridSpec::default();
        let energy = PI * (0.5 * p.a(0).powi(2) + (1..=p.stored_degree()).map(|j| p.a(j).powi(2) + p.b(j).powi(2)).sum::<f64>());
        prop_assert!((p.lp_norm(2.0, &grid).powi(2) - energy).abs() < 1e-10 * (1.0 + energy));
    }

    #[test]
    fn sup_norm_is_a_tight_lower_estimate(p in poly_strategy(20)) {
        let grid = GridSpec::default();
        let (v, at) = p.sup_norm(&grid);
        prop_assert!((p.eval(at).abs() - v).abs() < 1e-12);
        let dense = dense_max(|x| p.eval(x), 100_000);
        prop_assert!(v >= dense - 1e-12);
        prop_assert!(v <= dense + 1e-6);
    }

    #[test]
    fn translation_preserves_sup_norm(p in poly_strategy(12), s in 0.0f64..TAU) {
        let grid = GridSpec::default();
        prop_assert!((p.shifted(s).sup_norm(&grid).0 - p.sup_norm(&grid).0).abs() < 1e-9);
    }

    #[test]
    fn derivative_matches_finite_difference(p in poly_strategy(10), x in 0.0f64..TAU) {
        let d = p.derivative(1);
        let h = 1e-5;
        let fd = (p.eval(x + h) - p.eval(x - h)) / (2.0 * h);
        prop_assert!((d.eval(x) - fd).abs() < 1e-5);
    }
}
