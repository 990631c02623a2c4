//! Best approximation by trigonometric polynomials of degree `n − 1`.
//!
//! The uniform solver is a discrete single-exchange ascent on the grid
//! nodes, the breakpoints of `f` and, after each of two augmentation rounds,
//! the refined extrema of the residual. A levelled reference of `2n` points
//! gives the lower bound `|λ|`; the refined sup of the residual of the final
//! polynomial is the reported value.

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::fncore::{self, GridSpec, PeriodicFunction};
use crate::trig::{fourier_coeffs, partial_sum, TrigPoly};

const AUGMENT_ROUNDS: usize = 2;
const LEVEL_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BestApproxMethod {
    ExchangeUniform,
    GridLP,
    ParsevalL2,
    /// Closed-form value for the step and sign-of-`sin nx` kinds.
    Analytic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BestApproxResult {
    pub value: f64,
    /// `|λ|` of the final levelled reference (equal to `value` for the
    /// analytic and `L₂` methods).
    pub lower_bound: f64,
    pub minimizer: TrigPoly,
    pub method: BestApproxMethod,
    pub residual_equioscillation: usize,
    pub iterations: usize,
    pub converged: bool,
}

impl BestApproxResult {
    pub fn gap(&self) -> f64 {
        self.value - self.lower_bound
    }
}

fn basis_row(x: f64, n: usize, row: &mut [f64]) {
    row[0] = 1.0;
    for j in 1..n {
        let (s, c) = (j as f64 * x).sin_cos();
        row[2 * j - 1] = c;
        row[2 * j] = s;
    }
}

fn poly_from_coeffs(c: &[f64], n: usize) -> TrigPoly {
    let mut a = vec![0.0; n];
    let mut b = vec![0.0; n.saturating_sub(1)];
    a[0] = 2.0 * c[0];
    for j in 1..n {
        a[j] = c[2 * j - 1];
        b[j - 1] = c[2 * j];
    }
    TrigPoly::new(a, b).expect("lengths match")
}

/// Levelled fit on the reference: `τ(x_i) + (−1)^i λ = f(x_i)`.
fn level(pts: &[f64], fvals: &[f64], reference: &[usize], n: usize) -> Option<(TrigPoly, f64)> {
    let m = 2 * n;
    let mut a = DMatrix::<f64>::zeros(m, m);
    let mut rhs = DVector::<f64>::zeros(m);
    let mut row = vec![0.0; 2 * n - 1];
    for (i, &r) in reference.iter().enumerate() {
        basis_row(pts[r], n, &mut row);
        for (k, v) in row.iter().enumerate() {
            a[(i, k)] = *v;
        }
        a[(i, m - 1)] = if i % 2 == 0 { 1.0 } else { -1.0 };
        rhs[i] = fvals[r];
    }
    let sol = a.lu().solve(&rhs)?;
    let c: Vec<f64> = sol.iter().copied().collect();
    Some((poly_from_coeffs(&c[..m - 1], n), c[m - 1]))
}

struct Exchange {
    poly: TrigPoly,
    lambda: f64,
    reference: Vec<usize>,
    iterations: usize,
}

/// Single-exchange ascent on a fixed point set. `reference` must hold `2n`
/// distinct indices.
fn exchange(pts: &[f64], fvals: &[f64], mut reference: Vec<usize>, n: usize, max_iter: usize) -> Result<Exchange> {
    let m = 2 * n;
    let scale = fvals.iter().fold(0.0f64, |s, v| s.max(v.abs())).max(1.0);
    let mut iterations = 0;
    loop {
        reference.sort_by(|&i, &j| pts[i].total_cmp(&pts[j]));
        let (poly, lambda) = level(pts, fvals, &reference, n)
            .ok_or_else(|| invalid("singular reference in exchange"))?;
        iterations += 1;
        let resid: Vec<f64> = pts.iter().zip(fvals).map(|(&x, &f)| f - poly.eval(x)).collect();
        // largest residual, ties to the smallest x (points are sorted)
        let mut jstar = 0;
        for (j, r) in resid.iter().enumerate() {
            if r.abs() > resid[jstar].abs() {
                jstar = j;
            }
        }
        let rstar = resid[jstar];
        let done = rstar.abs() <= lambda.abs() * (1.0 + LEVEL_TOL) + LEVEL_TOL * scale
            || reference.contains(&jstar)
            || iterations >= max_iter;
        if done {
            return Ok(Exchange { poly, lambda, reference, iterations });
        }
        let p = reference.partition_point(|&r| pts[r] < pts[jstar]);
        let left = (p + m - 1) % m;
        let right = p % m;
        let same_sign = (resid[reference[left]] >= 0.0) == (rstar >= 0.0);
        let slot = if same_sign { left } else { right };
        reference[slot] = jstar;
    }
}

/// Runs of equal sign among near-extremal residuals, counted cyclically.
fn alternation_count(resid: &[f64], threshold: f64) -> usize {
    let signs: Vec<bool> = resid.iter().filter(|r| r.abs() >= threshold).map(|&r| r > 0.0).collect();
    if signs.is_empty() {
        return 0;
    }
    let mut runs = 1;
    for w in signs.windows(2) {
        if w[0] != w[1] {
            runs += 1;
        }
    }
    if runs > 1 && signs[0] == signs[signs.len() - 1] {
        runs -= 1;
    }
    runs
}

fn analytic(f: &PeriodicFunction, n: usize) -> Option<(f64, TrigPoly)> {
    match f {
        PeriodicFunction::Step => Some((0.5, TrigPoly::constant(0.5).truncate(n - 1))),
        PeriodicFunction::FavardSign(m) if *m as usize >= n => Some((1.0, TrigPoly::zeros(n - 1))),
        _ => None,
    }
}

fn check_n(n: usize, grid: &GridSpec) -> Result<()> {
    if n == 0 {
        return Err(invalid("best approximation needs n ≥ 1"));
    }
    if 4 * n > grid.nodes() {
        return Err(invalid(format!("degree {} is too large for {} grid nodes", n - 1, grid.nodes())));
    }
    Ok(())
}

fn sorted_unique(mut pts: Vec<f64>) -> Vec<f64> {
    for p in pts.iter_mut() {
        *p = p.rem_euclid(TAU);
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    pts
}

/// `E_{n−1}(f)` in the uniform norm.
pub fn best_uniform(f: &PeriodicFunction, n: usize, grid: &GridSpec) -> Result<BestApproxResult> {
    check_n(n, grid)?;
    if let Some((value, minimizer)) = analytic(f, n) {
        return Ok(BestApproxResult {
            value,
            lower_bound: value,
            minimizer,
            method: BestApproxMethod::Analytic,
            residual_equioscillation: 2 * n,
            iterations: 0,
            converged: true,
        });
    }
    let max_iter = 400 + 50 * n;
    let mut pts = sorted_unique(fncore::candidate_points(f, grid));
    let mut fvals: Vec<f64> = pts.iter().map(|&x| f.eval(x)).collect();
    let m = 2 * n;
    let mut reference: Vec<usize> = (0..m).map(|i| i * pts.len() / m).collect();
    let mut iterations = 0;
    let mut ex = exchange(&pts, &fvals, reference, n, max_iter)?;
    iterations += ex.iterations;

    for _ in 0..AUGMENT_ROUNDS {
        let poly = ex.poly.clone();
        let resid = |x: f64| f.eval(x) - poly.eval(x);
        let abs: Vec<f64> = pts.iter().zip(&fvals).map(|(&x, &v)| (v - poly.eval(x)).abs()).collect();
        let mut extra = Vec::new();
        for i in fncore::top_local_maxima(&abs, 2 * m + 8, true) {
            let x0 = pts[i];
            let (x, _) = fncore::golden_max(|x| resid(x).abs(), x0 - grid.spacing(), x0 + grid.spacing(), grid.refine_depth());
            extra.push(x);
        }
        let ref_x: Vec<f64> = ex.reference.iter().map(|&r| pts[r]).collect();
        pts.extend(extra);
        pts = sorted_unique(pts);
        fvals = pts.iter().map(|&x| f.eval(x)).collect();
        reference = ref_x
            .iter()
            .map(|&x| {
                let p = pts.partition_point(|&y| y < x - 1e-15);
                p.min(pts.len() - 1)
            })
            .collect();
        reference.sort_unstable();
        reference.dedup();
        if reference.len() != m {
            reference = (0..m).map(|i| i * pts.len() / m).collect();
        }
        ex = exchange(&pts, &fvals, reference, n, max_iter)?;
        iterations += ex.iterations;
    }

    let poly = ex.poly;
    let resid = |x: f64| f.eval(x) - poly.eval(x);
    let mut cands = pts.clone();
    let (upper, _) = fncore::sup_abs_over(resid, &mut cands, grid.spacing(), grid.refine_depth());
    let lower = ex.lambda.abs();
    let upper = upper.max(lower);
    let residuals: Vec<f64> = pts.iter().zip(&fvals).map(|(&x, &v)| v - poly.eval(x)).collect();
    let scale = fvals.iter().fold(0.0f64, |s, v| s.max(v.abs())).max(1.0);
    let exact_fit = upper <= 1e-10 * scale;
    let alternation = if exact_fit {
        0
    } else {
        alternation_count(&residuals, lower * (1.0 - 1e-9))
    };
    Ok(BestApproxResult {
        value: upper,
        lower_bound: lower,
        minimizer: poly,
        method: BestApproxMethod::ExchangeUniform,
        residual_equioscillation: alternation,
        iterations,
        converged: exact_fit || alternation >= m,
    })
}

/// `L₂` distance to `T_{n−1}`, attained by the partial Fourier sum.
pub fn best_l2(f: &PeriodicFunction, n: usize, grid: &GridSpec) -> Result<BestApproxResult> {
    check_n(n, grid)?;
    let coeffs = fourier_coeffs(f, n - 1, grid);
    let s = partial_sum(&coeffs, n - 1)?;
    let value = l2_distance(f, &s, grid);
    Ok(BestApproxResult {
        value,
        lower_bound: value,
        minimizer: s,
        method: BestApproxMethod::ParsevalL2,
        residual_equioscillation: 0,
        iterations: 0,
        converged: true,
    })
}

/// `‖f − τ‖∞`, refined like [`fncore::sup_norm`].
pub fn uniform_distance(f: &PeriodicFunction, tau: &TrigPoly, grid: &GridSpec) -> f64 {
    match f.spectrum() {
        Some(p) if !matches!(f, PeriodicFunction::Sampled(_)) || p.degree() < grid.nodes() / 2 => {
            p.sub(tau).sup_norm(grid).0
        }
        _ => {
            let mut pts = fncore::candidate_points(f, grid);
            fncore::sup_abs_over(|x| f.eval(x) - tau.eval(x), &mut pts, grid.spacing(), grid.refine_depth()).0
        }
    }
}

/// `‖f − τ‖₂` by quadrature (trapezoid rule for the spectral kinds).
pub fn l2_distance(f: &PeriodicFunction, tau: &TrigPoly, grid: &GridSpec) -> f64 {
    match f.spectrum() {
        Some(p) if !matches!(f, PeriodicFunction::Sampled(_)) => p.sub(tau).lp_norm(2.0, grid),
        _ if matches!(f, PeriodicFunction::Sampled(_)) => {
            let PeriodicFunction::Sampled(s) = f else { unreachable!() };
            s.interpolant().sub(tau).lp_norm(2.0, grid)
        }
        _ => {
            let mut breaks = f.breakpoints();
            breaks.extend((1..32).map(|i| TAU * f64::from(i) / 32.0));
            let d = |x: f64| (f.eval(x) - tau.eval(x)).powi(2);
            fncore::integrate_piecewise_polynomial(d, 0.0, TAU, &breaks, 48).max(0.0).sqrt()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn cos_n_has_unit_distance() {
        let g = GridSpec::default();
        for n in [1usize, 2, 5, 9] {
            let r = best_uniform(&PeriodicFunction::CosN(n as u32), n, &g).unwrap();
            assert!((r.value - 1.0).abs() < 1e-9, "n={n}: {}", r.value);
            assert!((r.lower_bound - 1.0).abs() < 1e-9);
            assert!(r.minimizer.sup_norm(&g).0 < 1e-8);
            assert_eq!(r.residual_equioscillation, 2 * n);
            assert!(r.converged);
        }
    }

    #[test]
    fn polynomial_in_space_is_exact() {
        let g = GridSpec::default();
        let p = TrigPoly::new(vec![0.4, 1.0, -0.5], vec![0.3, 0.2]).unwrap();
        let r = best_uniform(&PeriodicFunction::Trig(p), 3, &g).unwrap();
        assert!(r.value < 1e-10);
        assert!(r.converged);
    }

    #[test]
    fn analytic_kinds() {
        let g = GridSpec::default();
        let r = best_uniform(&PeriodicFunction::Step, 4, &g).unwrap();
        assert_eq!(r.value, 0.5);
        assert_eq!(r.method, BestApproxMethod::Analytic);
        let r = best_uniform(&PeriodicFunction::FavardSign(3), 3, &g).unwrap();
        assert_eq!(r.value, 1.0);
    }

    #[test]
    fn rejects_bad_degree() {
        let g = GridSpec::default();
        assert!(best_uniform(&PeriodicFunction::Step, 0, &g).is_err());
        assert!(best_l2(&PeriodicFunction::Step, 0, &g).is_err());
        assert!(best_uniform(&PeriodicFunction::CosN(3), 5000, &g).is_err());
    }

    #[test]
    fn l2_of_cos() {
        let g = GridSpec::default();
        let r = best_l2(&PeriodicFunction::CosN(4), 4, &g).unwrap();
        assert!((r.value - PI.sqrt()).abs() < 1e-12);
        let r = best_l2(&PeriodicFunction::CosN(4), 5, &g).unwrap();
        assert!(r.value < 1e-12);
    }

    #[test]
    fn alternation_counting() {
        assert_eq!(alternation_count(&[1.0, -1.0, 1.0, -1.0], 0.5), 4);
        assert_eq!(alternation_count(&[1.0, 1.0, -1.0, 0.1, 1.0], 0.5), 2);
        assert_eq!(alternation_count(&[0.1], 0.5), 0);
    }
}
